"""Clifford tableaux, uniform 2-qubit Clifford sampling, brick-wall circuits.

A Clifford operation is represented by the conjugation images of the 2N
Pauli generators X_i, Z_i.  Images of arbitrary strings follow by
multiplying generator images, so no dense matrix is ever needed here.

The 11520 two-qubit Cliffords (modulo global phase) are indexed
bijectively: an index in [0, 11520) decodes positionally into the image of
X_0 (15 choices), the image of Z_0 (8 anticommuting partners), the images
for the second qubit (3 * 2 choices in the symplectic complement), and four
sign bits.  Uniform gate sampling is then a single uniform integer draw.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DimensionError, NumericalError
from . import pauli
from .pauli import PauliString, SignedPauli

TWO_QUBIT_CLIFFORD_COUNT = 11520


@dataclass(frozen=True)
class CliffordTableau:
    """Conjugation images of the generators X_i (``x_images``) and Z_i (``z_images``)."""

    n_qubits: int
    x_images: tuple[SignedPauli, ...]
    z_images: tuple[SignedPauli, ...]

    def __post_init__(self) -> None:
        if len(self.x_images) != self.n_qubits or len(self.z_images) != self.n_qubits:
            raise ValueError("need one X image and one Z image per qubit")

    def validate(self) -> None:
        """Check the symplectic form: paired images anticommute, all others commute."""
        gens = list(self.x_images) + list(self.z_images)
        n = self.n_qubits
        for i, a in enumerate(gens):
            for j, b in enumerate(gens):
                if j <= i:
                    continue
                expect_anti = j == i + n
                if pauli.commutes(a.string, b.string) == expect_anti:
                    raise ValueError(
                        f"symplectic violation between generator images {i} and {j}"
                    )


def identity_tableau(n_qubits: int) -> CliffordTableau:
    xs = tuple(SignedPauli(pauli.single(n_qubits, i, "X")) for i in range(n_qubits))
    zs = tuple(SignedPauli(pauli.single(n_qubits, i, "Z")) for i in range(n_qubits))
    return CliffordTableau(n_qubits, xs, zs)


def from_generator_images(x_labels, z_labels) -> CliffordTableau:
    """Build a tableau from text labels such as ``["+Z"], ["+X"]`` (a Hadamard)."""
    xs = tuple(pauli.from_label(s) for s in x_labels)
    zs = tuple(pauli.from_label(s) for s in z_labels)
    t = CliffordTableau(xs[0].n_qubits, xs, zs)
    t.validate()
    return t


def conjugate(t: CliffordTableau, p: SignedPauli | PauliString) -> SignedPauli:
    """Image of a signed Pauli under conjugation by the tableau's Clifford.

    Decomposes ``p`` over generators and multiplies the generator images,
    folding phases; the accumulated phase exponent is necessarily even.
    """
    if isinstance(p, PauliString):
        p = SignedPauli(p, 1)
    if t.n_qubits != p.n_qubits:
        raise DimensionError(f"size mismatch: {t.n_qubits} vs {p.n_qubits} qubits")
    acc = pauli.identity(t.n_qubits)
    k_total = p.string.y_count
    sign = p.sign
    px, pz = p.string.x_mask, p.string.z_mask
    for i in range(t.n_qubits):
        if (px >> i) & 1:
            img = t.x_images[i]
            sign *= img.sign
            acc, k = pauli.multiply(acc, img.string)
            k_total += k
    for i in range(t.n_qubits):
        if (pz >> i) & 1:
            img = t.z_images[i]
            sign *= img.sign
            acc, k = pauli.multiply(acc, img.string)
            k_total += k
    k_total %= 4
    if k_total % 2:
        raise NumericalError("odd conjugation phase: corrupted tableau")
    if k_total == 2:
        sign = -sign
    return SignedPauli(acc, sign)


def compose(a: CliffordTableau, b: CliffordTableau) -> CliffordTableau:
    """Tableau of ``a`` after ``b`` (apply ``b`` first)."""
    if a.n_qubits != b.n_qubits:
        raise DimensionError(f"size mismatch: {a.n_qubits} vs {b.n_qubits} qubits")
    xs = tuple(conjugate(a, p) for p in b.x_images)
    zs = tuple(conjugate(a, p) for p in b.z_images)
    return CliffordTableau(a.n_qubits, xs, zs)


def inverse(t: CliffordTableau) -> CliffordTableau:
    """Tableau of the inverse Clifford, via GF(2) inversion of the symplectic map."""
    n = t.n_qubits
    m = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    for j, img in enumerate(list(t.x_images) + list(t.z_images)):
        for i in range(n):
            m[i, j] = (img.string.x_mask >> i) & 1
            m[n + i, j] = (img.string.z_mask >> i) & 1
    inv = _gf2_inverse(m)
    xs, zs = [], []
    for j in range(2 * n):
        col = inv[:, j]
        x_mask = int(sum(int(col[i]) << i for i in range(n)))
        z_mask = int(sum(int(col[n + i]) << i for i in range(n)))
        pre = PauliString(n, x_mask, z_mask)
        # fix the sign so that conjugating the preimage reproduces +generator
        sign = conjugate(t, SignedPauli(pre, 1)).sign
        (xs if j < n else zs).append(SignedPauli(pre, sign))
    return CliffordTableau(n, tuple(xs), tuple(zs))


def _gf2_inverse(m: np.ndarray) -> np.ndarray:
    k = m.shape[0]
    aug = np.concatenate([m.copy(), np.eye(k, dtype=np.uint8)], axis=1)
    row = 0
    for col in range(k):
        piv = next((r for r in range(row, k) if aug[r, col]), None)
        if piv is None:
            raise NumericalError("singular symplectic matrix: corrupted tableau")
        if piv != row:
            aug[[row, piv]] = aug[[piv, row]]
        for r in range(k):
            if r != row and aug[r, col]:
                aug[r] ^= aug[row]
        row += 1
    return aug[:, k:]


# ---------------------------------------------------------------------------
# two-qubit Clifford group, indexed
# ---------------------------------------------------------------------------

def _sp4(u: int, v: int) -> int:
    """Symplectic form on 4-bit vectors (x_mask | z_mask << 2)."""
    return (((u & 3) & (v >> 2)).bit_count() + ((u >> 2) & (v & 3)).bit_count()) % 2


@lru_cache(maxsize=None)
def two_qubit_clifford_from_index(k: int) -> CliffordTableau:
    """Bijection [0, 11520) -> two-qubit Clifford tableaux."""
    if not 0 <= k < TWO_QUBIT_CLIFFORD_COUNT:
        raise ValueError(f"index {k} outside [0, {TWO_QUBIT_CLIFFORD_COUNT})")
    k, a = divmod(k, 15)
    v1 = a + 1
    w1_cands = [u for u in range(1, 16) if _sp4(v1, u)]
    k, b = divmod(k, 8)
    w1 = w1_cands[b]
    v2_cands = [u for u in range(1, 16) if not _sp4(v1, u) and not _sp4(w1, u)]
    k, c = divmod(k, 3)
    v2 = v2_cands[c]
    w2_cands = [
        u for u in range(1, 16)
        if not _sp4(v1, u) and not _sp4(w1, u) and _sp4(v2, u)
    ]
    signs, e = divmod(k, 2)
    w2 = w2_cands[e]

    def img(vec: int, sign_bit: int) -> SignedPauli:
        return SignedPauli(PauliString(2, vec & 3, vec >> 2), -1 if sign_bit else 1)

    return CliffordTableau(
        2,
        (img(v1, signs & 1), img(v2, (signs >> 2) & 1)),
        (img(w1, (signs >> 1) & 1), img(w2, (signs >> 3) & 1)),
    )


def random_two_qubit_clifford(rng: np.random.Generator) -> CliffordTableau:
    """Uniform draw over all 11520 two-qubit Cliffords (modulo global phase)."""
    return two_qubit_clifford_from_index(int(rng.integers(TWO_QUBIT_CLIFFORD_COUNT)))


def embed_two_qubit(gate: CliffordTableau, qubits: tuple[int, int], n_qubits: int) -> CliffordTableau:
    """Embed a 2-qubit tableau into an N-qubit identity tableau."""
    if gate.n_qubits != 2:
        raise DimensionError("embedding expects a 2-qubit gate")
    a, b = qubits

    def lift(img: SignedPauli) -> SignedPauli:
        s = img.string
        x = ((s.x_mask & 1) << a) | (((s.x_mask >> 1) & 1) << b)
        z = ((s.z_mask & 1) << a) | (((s.z_mask >> 1) & 1) << b)
        return SignedPauli(PauliString(n_qubits, x, z), img.sign)

    base = identity_tableau(n_qubits)
    xs = list(base.x_images)
    zs = list(base.z_images)
    xs[a], xs[b] = lift(gate.x_images[0]), lift(gate.x_images[1])
    zs[a], zs[b] = lift(gate.z_images[0]), lift(gate.z_images[1])
    return CliffordTableau(n_qubits, tuple(xs), tuple(zs))


# ---------------------------------------------------------------------------
# brick-wall circuits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Gate:
    qubits: tuple[int, int]
    tableau: CliffordTableau


@dataclass(frozen=True)
class Circuit:
    """Brick-wall layers of 2-qubit Cliffords plus T-gate placements (layer, qubit)."""

    n_qubits: int
    layers: tuple[tuple[Gate, ...], ...]
    t_gates: tuple[tuple[int, int], ...] = field(default=())
    boundary: str = "open"
    seed: int | None = None

    def __post_init__(self) -> None:
        if len(set(self.t_gates)) != len(self.t_gates):
            raise ValueError("duplicate T-gate placement")
        for l, q in self.t_gates:
            if not (0 <= l < len(self.layers) and 0 <= q < self.n_qubits):
                raise ValueError(f"T-gate placement ({l}, {q}) outside the circuit")
        for layer in self.layers:
            seen: set[int] = set()
            for g in layer:
                if set(g.qubits) & seen:
                    raise ValueError("overlapping gates within a layer")
                seen |= set(g.qubits)

    @property
    def depth(self) -> int:
        return len(self.layers)

    def t_gates_in_layer(self, layer: int) -> list[int]:
        return sorted(q for l, q in self.t_gates if l == layer)


def brickwall_pairs(n_qubits: int, layer_index: int, boundary: str = "open") -> list[tuple[int, int]]:
    """Qubit pairs of one brick-wall layer; even layers start at qubit 0, odd at 1."""
    if boundary not in ("open", "periodic"):
        raise ValueError(f"unknown boundary {boundary!r}")
    start = layer_index % 2
    pairs = [(i, i + 1) for i in range(start, n_qubits - 1, 2)]
    if boundary == "periodic" and start == 1:
        if n_qubits % 2:
            raise ValueError("periodic brick-wall pairing needs an even qubit count")
        pairs.append((n_qubits - 1, 0))
    return pairs


def default_depth(n_qubits: int) -> int:
    """Depth at which a brick-wall circuit is treated as a generic deep Clifford."""
    return 5 * n_qubits


def build_brickwall(
    n_qubits: int,
    depth: int | None = None,
    n_t_gates: int = 0,
    rng: np.random.Generator | None = None,
    boundary: str = "open",
    seed: int | None = None,
) -> Circuit:
    """Random brick-wall Clifford+T circuit.

    Every brick is an independent uniform 2-qubit Clifford; T-gate placements
    are sampled uniformly without replacement from the depth x n_qubits grid,
    so no two T-gates share a (layer, qubit) cell.
    """
    if n_qubits < 2:
        raise ValueError("brick-wall circuits need at least 2 qubits")
    if depth is None:
        depth = default_depth(n_qubits)
    if depth < 1:
        raise ValueError("depth must be at least 1")
    if rng is None:
        rng = np.random.default_rng(seed)
    if n_t_gates > depth * n_qubits:
        raise CapacityError(
            f"{n_t_gates} T-gates do not fit on a {depth} x {n_qubits} grid of distinct cells"
        )
    layers = []
    for l in range(depth):
        layer = tuple(
            Gate(pair, random_two_qubit_clifford(rng))
            for pair in brickwall_pairs(n_qubits, l, boundary)
        )
        layers.append(layer)
    t_gates: tuple[tuple[int, int], ...] = ()
    if n_t_gates:
        cells = rng.choice(depth * n_qubits, size=n_t_gates, replace=False)
        t_gates = tuple(sorted((int(c) // n_qubits, int(c) % n_qubits) for c in cells))
    return Circuit(n_qubits, tuple(layers), t_gates, boundary, seed)


# ---------------------------------------------------------------------------
# folding the Clifford part of a circuit
# ---------------------------------------------------------------------------

@lru_cache(maxsize=16384)
def _local_conjugation_table(gate: CliffordTableau) -> tuple[tuple[int, int], ...]:
    """Conjugation images of the 16 local operators X0^a X1^b Z0^c Z1^d.

    Entry ``la = a | b<<1 | c<<2 | d<<3`` maps to ``(phase_exp, out)`` where the
    image equals ``i**phase_exp * X^ox * Z^oz`` with ``out = ox | oz<<2``.
    """
    table = []
    factors = (gate.x_images[0], gate.x_images[1], gate.z_images[0], gate.z_images[1])
    for la in range(16):
        ph = 0
        ax = az = 0
        for bit, img in enumerate(factors):
            if not (la >> bit) & 1:
                continue
            gx, gz = img.string.x_mask, img.string.z_mask
            phi = (0 if img.sign > 0 else 2) + (gx & gz).bit_count()
            ph = (ph + phi + 2 * (az & gx).bit_count()) % 4
            ax ^= gx
            az ^= gz
        table.append((ph, ax | (az << 2)))
    return tuple(table)


def circuit_clifford_part(c: Circuit) -> CliffordTableau:
    """Tableau of the circuit with its T-gates ignored.

    Equals the right-to-left fold of the embedded layer tableaux via
    ``compose``; computed here by pushing each generator through the bricks,
    which costs O(1) per (row, gate).
    """
    n = c.n_qubits
    # rows in raw form i**ph * X^x * Z^z; generators start with ph = 0
    rows = [[0, 1 << i, 0] for i in range(n)] + [[0, 0, 1 << i] for i in range(n)]
    for layer in c.layers:
        for gate in layer:
            a, b = gate.qubits
            table = _local_conjugation_table(gate.tableau)
            clear = ~((1 << a) | (1 << b))
            for row in rows:
                ph, x, z = row
                la = (
                    ((x >> a) & 1)
                    | (((x >> b) & 1) << 1)
                    | (((z >> a) & 1) << 2)
                    | (((z >> b) & 1) << 3)
                )
                tph, out = table[la]
                row[0] = (ph + tph) & 3
                row[1] = (x & clear) | ((out & 1) << a) | (((out >> 1) & 1) << b)
                row[2] = (z & clear) | (((out >> 2) & 1) << a) | (((out >> 3) & 1) << b)
    images = []
    for ph, x, z in rows:
        k = (ph - (x & z).bit_count()) % 4
        if k % 2:
            raise NumericalError("odd phase while folding circuit: corrupted gate table")
        images.append(SignedPauli(PauliString(n, x, z), 1 if k == 0 else -1))
    return CliffordTableau(n, tuple(images[:n]), tuple(images[n:]))


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_CIRCUIT_FORMAT = "cliffordlab-circuit"
_CIRCUIT_VERSION = 1


def circuit_to_json(c: Circuit) -> str:
    doc = {
        "format": _CIRCUIT_FORMAT,
        "version": _CIRCUIT_VERSION,
        "n_qubits": c.n_qubits,
        "depth": c.depth,
        "boundary": c.boundary,
        "seed": c.seed,
        "layers": [
            [
                {
                    "qubits": list(g.qubits),
                    "x_images": [str(p) for p in g.tableau.x_images],
                    "z_images": [str(p) for p in g.tableau.z_images],
                }
                for g in layer
            ]
            for layer in c.layers
        ],
        "t_gates": [list(t) for t in c.t_gates],
    }
    return json.dumps(doc, indent=2)


def circuit_from_json(text: str) -> Circuit:
    doc = json.loads(text)
    if doc.get("format") != _CIRCUIT_FORMAT:
        raise ValueError("not a circuit document")
    if doc.get("version") != _CIRCUIT_VERSION:
        raise ValueError(f"unsupported circuit version {doc.get('version')}")
    layers = tuple(
        tuple(
            Gate(
                (int(g["qubits"][0]), int(g["qubits"][1])),
                CliffordTableau(
                    2,
                    tuple(pauli.from_label(s) for s in g["x_images"]),
                    tuple(pauli.from_label(s) for s in g["z_images"]),
                ),
            )
            for g in layer
        )
        for layer in doc["layers"]
    )
    return Circuit(
        int(doc["n_qubits"]),
        layers,
        tuple((int(l), int(q)) for l, q in doc["t_gates"]),
        doc.get("boundary", "open"),
        doc.get("seed"),
    )
