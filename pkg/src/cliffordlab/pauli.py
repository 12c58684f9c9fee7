"""Bit-packed N-qubit Pauli strings and their algebra.

A Pauli string is stored as a pair of masks: bit i of ``x_mask`` (``z_mask``)
set means X (Z) acts on qubit i, both bits set means Y.  The Hermitian
operator represented is ``i**popcount(x & z) * X^x * Z^z``, i.e. each qubit
carries one of I, X, Y, Z.  Qubit 0 is the leftmost tensor factor and the
most significant bit of a computational basis index; this convention is
shared by every module in the package.

Phases are tracked as exponents of ``i`` modulo 4 so that multiplication is
a total function even though conjugation of Hermitian operators only ever
produces signs +/-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, DimensionError

_LETTERS = ("I", "X", "Z", "Y")  # indexed by x_bit + 2*z_bit
_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Z": (0, 1), "Y": (1, 1)}


@dataclass(frozen=True)
class PauliString:
    """Unsigned Pauli string on ``n_qubits`` qubits."""

    n_qubits: int
    x_mask: int
    z_mask: int

    def __post_init__(self) -> None:
        if self.n_qubits < 1:
            raise ValueError("n_qubits must be positive")
        top = 1 << self.n_qubits
        if not (0 <= self.x_mask < top and 0 <= self.z_mask < top):
            raise ValueError("mask bits outside the qubit range")

    @property
    def index(self) -> int:
        """Canonical index in [0, 4**n): ``x_mask * 2**n + z_mask``."""
        return (self.x_mask << self.n_qubits) | self.z_mask

    @classmethod
    def from_index(cls, n_qubits: int, index: int) -> "PauliString":
        mask = (1 << n_qubits) - 1
        return cls(n_qubits, (index >> n_qubits) & mask, index & mask)

    @property
    def is_identity(self) -> bool:
        return self.x_mask == 0 and self.z_mask == 0

    @property
    def y_count(self) -> int:
        return (self.x_mask & self.z_mask).bit_count()

    def letter(self, qubit: int) -> str:
        x = (self.x_mask >> qubit) & 1
        z = (self.z_mask >> qubit) & 1
        return _LETTERS[x + 2 * z]

    def __str__(self) -> str:
        return "".join(self.letter(q) for q in range(self.n_qubits))


@dataclass(frozen=True)
class SignedPauli:
    """Pauli string with a sign in {+1, -1}.

    Clifford conjugation of a Hermitian Pauli yields a Hermitian Pauli, so no
    +/-i component ever survives; the sign is all that is needed.
    """

    string: PauliString
    sign: int = 1

    def __post_init__(self) -> None:
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")

    @property
    def n_qubits(self) -> int:
        return self.string.n_qubits

    def __str__(self) -> str:
        return ("+" if self.sign > 0 else "-") + str(self.string)


def identity(n_qubits: int) -> PauliString:
    return PauliString(n_qubits, 0, 0)


def single(n_qubits: int, qubit: int, letter: str) -> PauliString:
    """Pauli string with one non-identity letter on ``qubit``."""
    if not 0 <= qubit < n_qubits:
        raise ValueError(f"qubit {qubit} outside register of size {n_qubits}")
    x, z = _LETTER_BITS[letter]
    return PauliString(n_qubits, x << qubit, z << qubit)


def from_label(label: str) -> SignedPauli:
    """Parse ``"+XIZY"``-style text: sign, then one letter per qubit, qubit 0 leftmost."""
    if not label or label[0] not in "+-":
        raise ValueError(f"label must start with a sign: {label!r}")
    sign = 1 if label[0] == "+" else -1
    body = label[1:]
    if not body:
        raise ValueError("label has no qubit letters")
    x_mask = z_mask = 0
    for q, ch in enumerate(body):
        if ch not in _LETTER_BITS:
            raise ValueError(f"unknown Pauli letter {ch!r} in {label!r}")
        x, z = _LETTER_BITS[ch]
        x_mask |= x << q
        z_mask |= z << q
    return SignedPauli(PauliString(len(body), x_mask, z_mask), sign)


def to_label(p: SignedPauli | PauliString) -> str:
    if isinstance(p, PauliString):
        p = SignedPauli(p, 1)
    return str(p)


def _check_same_size(a: PauliString, b: PauliString) -> None:
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")


def multiply(a: PauliString, b: PauliString) -> tuple[PauliString, int]:
    """Product of two Hermitian strings: ``a*b = i**k * result`` with k in {0..3}.

    The phase exponent follows from normal-ordering X factors past Z factors:
    k = |ax&az| + |bx&bz| + 2|az&bx| - |cx&cz|  (mod 4), c = a XOR b.
    """
    _check_same_size(a, b)
    cx = a.x_mask ^ b.x_mask
    cz = a.z_mask ^ b.z_mask
    k = (
        (a.x_mask & a.z_mask).bit_count()
        + (b.x_mask & b.z_mask).bit_count()
        + 2 * (a.z_mask & b.x_mask).bit_count()
        - (cx & cz).bit_count()
    ) % 4
    return PauliString(a.n_qubits, cx, cz), k


def commutes(a: PauliString, b: PauliString) -> bool:
    """True iff the symplectic inner product |ax&bz| + |az&bx| is even."""
    _check_same_size(a, b)
    return ((a.x_mask & b.z_mask).bit_count() + (a.z_mask & b.x_mask).bit_count()) % 2 == 0


def reverse_bits(mask: int, n_bits: int) -> int:
    """Bit-reversal; maps qubit-indexed masks to basis-index bit masks."""
    out = 0
    for _ in range(n_bits):
        out = (out << 1) | (mask & 1)
        mask >>= 1
    return out


@lru_cache(maxsize=32)
def _reverse_table(n_qubits: int) -> np.ndarray:
    """rev[mask] = reverse_bits(mask, n_qubits), as a uint32 lookup array."""
    n = 1 << n_qubits
    rev = np.zeros(n, dtype=np.uint32)
    for m in range(n):
        rev[m] = reverse_bits(m, n_qubits)
    return rev


def _basis_masks(p: PauliString) -> tuple[int, int]:
    """(x, z) masks re-expressed over basis-index bit positions."""
    n = p.n_qubits
    return reverse_bits(p.x_mask, n), reverse_bits(p.z_mask, n)


def _require_state(psi: np.ndarray, n_qubits: int | None = None, tol: float = 1e-10) -> int:
    psi = np.asarray(psi)
    d = psi.shape[0]
    n = d.bit_length() - 1
    if psi.ndim != 1 or d != 1 << n:
        raise ContractViolation(f"state vector length {d} is not a power of two")
    if n_qubits is not None and n != n_qubits:
        raise DimensionError(f"state has {n} qubits, operator has {n_qubits}")
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > tol:
        raise ContractViolation(f"state norm {norm} deviates from 1 beyond {tol}")
    return n


def apply_to_state(p: SignedPauli | PauliString, psi: np.ndarray) -> np.ndarray:
    """Apply a Pauli string to a state via index permutation and phase flips.

    No dense matrix is formed; cost is O(2**n).
    """
    if isinstance(p, PauliString):
        p = SignedPauli(p, 1)
    psi = np.asarray(psi, dtype=complex)
    n = psi.shape[0].bit_length() - 1
    if psi.shape != (1 << n,) or n != p.n_qubits:
        raise DimensionError("state dimension does not match operator size")
    xb, zb = _basis_masks(p.string)
    idx = np.arange(1 << n, dtype=np.uint32)
    phase = p.sign * (1j ** p.string.y_count) * (-1.0) ** np.bitwise_count(idx & np.uint32(zb))
    out = np.empty_like(psi)
    out[idx ^ np.uint32(xb)] = phase * psi
    return out


def expectation(s: PauliString | SignedPauli, psi: np.ndarray) -> float:
    """``<psi|S|psi>`` for a unit-norm state; always real, in [-1, 1]."""
    if isinstance(s, PauliString):
        s = SignedPauli(s, 1)
    _require_state(psi, s.n_qubits)
    val = np.vdot(psi, apply_to_state(s, psi))
    return float(val.real)


def all_strings(n_qubits: int):
    """Iterate every unsigned string in canonical index order (4**n of them)."""
    for index in range(1 << (2 * n_qubits)):
        yield PauliString.from_index(n_qubits, index)
