"""Periodic orbits of the conjugation action on unsigned Pauli strings.

Conjugation by a fixed Clifford permutes the 4**N unsigned strings; repeated
application closes each string into a cycle of some length L, with the
string returning to itself up to a sign tau.  The census of (L, tau) orbit
counts obeys the exact sum rule  sum_L,tau L * N(L, tau) = 4**N, and the
cycle structure fixes the full eigenphase-difference spectrum of the dense
Clifford unitary: an even orbit contributes phases 2*pi*m/L, an odd one
2*pi*(m + 1/2)/L.

The permutation and its step signs are built in vectorized form: images of
all strings follow from the generator images by an XOR/phase doubling pass,
and cycles are identified by pointer-doubling minimum-label propagation, so
a census costs O(4**N log 4**N) numpy work instead of a Python-level walk.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ContractViolation, NumericalError
from .tableau import CliffordTableau, build_brickwall, circuit_clifford_part, default_depth

_ORBIT_STREAM_TAG = 1


def conjugation_permutation(t: CliffordTableau) -> tuple[np.ndarray, np.ndarray]:
    """Permutation of canonical string indices under conjugation, plus step signs.

    Returns ``(perm, neg)`` where ``perm[e]`` is the index of the image of
    string ``e`` and ``neg[e]`` is 1 when the image carries sign -1.
    """
    n = t.n_qubits
    size = 1 << (2 * n)
    ph = np.zeros(size, dtype=np.uint8)
    ax = np.zeros(size, dtype=np.uint32)
    az = np.zeros(size, dtype=np.uint32)
    # index bit j < n selects Z_j, bit n+i selects X_i; doubling over the
    # stages builds the raw-form image of X^x Z^z for every index at once
    for stage in range(2 * n):
        img = t.z_images[stage] if stage < n else t.x_images[stage - n]
        gx = np.uint32(img.string.x_mask)
        gz = np.uint32(img.string.z_mask)
        phi = (0 if img.sign > 0 else 2) + img.string.y_count
        half = 1 << stage
        lo = slice(0, half)
        hi = slice(half, 2 * half)
        ph[hi] = (ph[lo] + phi + 2 * np.bitwise_count(az[lo] & gx).astype(np.uint8)) & 3
        ax[hi] = ax[lo] ^ gx
        az[hi] = az[lo] ^ gz
    # the Hermitian string with masks (x, z) equals i**(3*|x&z|) * Z^z X^x, and
    # the stage ordering above multiplies Z images before X images, so the
    # total sign exponent needs both Hermitian corrections
    sigma = (3 * _index_y_counts(n) + ph + 3 * np.bitwise_count(ax & az).astype(np.uint8)) & 3
    if np.any(sigma & 1):
        raise NumericalError("odd conjugation phase over the string table: corrupted tableau")
    perm = (ax.astype(np.uint64) << np.uint64(n)) | az.astype(np.uint64)
    return perm.astype(np.int64), (sigma >> 1).astype(np.uint8)


def _index_y_counts(n: int) -> np.ndarray:
    """popcount(x & z) for every canonical index, computed in blocks."""
    size = 1 << (2 * n)
    out = np.empty(size, dtype=np.uint8)
    zmask = np.uint64((1 << n) - 1)
    block = min(size, 1 << 22)
    for start in range(0, size, block):
        idx = np.arange(start, min(start + block, size), dtype=np.uint64)
        out[start : start + len(idx)] = np.bitwise_count((idx >> np.uint64(n)) & idx & zmask)
    return out


@dataclass
class OrbitCensus:
    """Multiset of orbit (length, parity) counts for one Clifford operator."""

    n_qubits: int
    entries: dict[tuple[int, int], int]

    @property
    def n_strings(self) -> int:
        return 1 << (2 * self.n_qubits)

    def string_count(self, length: int, tau: int) -> int:
        return length * self.entries.get((length, tau), 0)

    def total_strings(self) -> int:
        return sum(length * count for (length, _), count in self.entries.items())

    def check_sum_rule(self) -> None:
        if self.total_strings() != self.n_strings:
            raise NumericalError(
                f"orbit sum rule violated: {self.total_strings()} != {self.n_strings}"
            )

    def max_length(self) -> int:
        if not self.entries:
            raise ContractViolation("empty census")
        return max(length for length, _ in self.entries)

    def probabilities(self) -> dict[tuple[int, int], float]:
        """P_C(L, tau) = L * N(L, tau) / 4**N for this single operator."""
        total = self.n_strings
        return {key: key[0] * count / total for key, count in self.entries.items()}


def decompose_orbits(t: CliffordTableau) -> OrbitCensus:
    """Full orbit census of the conjugation action; sum rule holds exactly."""
    perm, neg = conjugation_permutation(t)
    size = perm.shape[0]
    n_doublings = 2 * t.n_qubits
    labels = np.arange(size, dtype=np.int64)
    hop = perm
    for _ in range(n_doublings):
        merged = np.minimum(labels, labels[hop])
        if np.array_equal(merged, labels):
            break
        labels = merged
        hop = hop[hop]
    lengths_at = np.bincount(labels, minlength=size)
    reps = np.flatnonzero(lengths_at)
    neg_at = np.bincount(labels[neg.astype(bool)], minlength=size)
    lengths = lengths_at[reps]
    parity = neg_at[reps] & 1
    keys, counts = np.unique((lengths << 1) | parity, return_counts=True)
    entries = {
        (int(k >> 1), -1 if (k & 1) else 1): int(c) for k, c in zip(keys, counts)
    }
    census = OrbitCensus(t.n_qubits, entries)
    census.check_sum_rule()
    if census.entries.get((1, 1), 0) < 1:
        raise NumericalError("identity string lost its fixed point: corrupted tableau")
    return census


def max_orbit_length(census: OrbitCensus) -> int:
    return census.max_length()


def orbit_eigenphases(census: OrbitCensus) -> np.ndarray:
    """Sorted multiset of conjugation eigenphases implied by the census.

    Each even-parity orbit of length L contributes 2*pi*m/L for m = 0..L-1,
    each odd-parity orbit the half-shifted comb 2*pi*(m+1/2)/L; the total
    multiplicity is exactly 4**N.
    """
    phases = []
    for (length, tau), count in census.entries.items():
        m = np.arange(length, dtype=float)
        if tau < 0:
            m += 0.5
        comb = 2.0 * np.pi * m / length
        phases.append(np.tile(comb, count))
    out = np.concatenate(phases)
    out.sort()
    return out


@dataclass
class OrbitEnsemble:
    """Ensemble-averaged orbit probabilities P(L, tau) over sampled Cliffords."""

    n_qubits: int
    n_samples: int = 0
    prob_sums: dict[tuple[int, int], float] = field(default_factory=dict)
    seed: int | None = None

    def add(self, census: OrbitCensus) -> None:
        if census.n_qubits != self.n_qubits:
            raise ContractViolation("census size does not match the ensemble")
        for key, p in census.probabilities().items():
            self.prob_sums[key] = self.prob_sums.get(key, 0.0) + p
        self.n_samples += 1

    def merge(self, other: "OrbitEnsemble") -> None:
        if other.n_qubits != self.n_qubits:
            raise ContractViolation("ensemble sizes differ")
        for key, p in other.prob_sums.items():
            self.prob_sums[key] = self.prob_sums.get(key, 0.0) + p
        self.n_samples += other.n_samples

    def probabilities(self) -> dict[tuple[int, int], float]:
        if self.n_samples == 0:
            raise ContractViolation("empty ensemble")
        return {key: s / self.n_samples for key, s in self.prob_sums.items()}

    def length_probabilities(self) -> dict[int, float]:
        """Parity-integrated P(L)."""
        out: dict[int, float] = {}
        for (length, _), p in self.probabilities().items():
            out[length] = out.get(length, 0.0) + p
        return out

    def max_length(self) -> int:
        if not self.prob_sums:
            raise ContractViolation("empty ensemble")
        return max(length for length, _ in self.prob_sums)

    def integrated(self, l_max: int | None = None) -> "Staircase":
        return integrated_probability(self, l_max)


@dataclass
class Staircase:
    """Right-continuous cumulative distribution with explicit jump points."""

    xs: np.ndarray
    jumps: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.cumsum(self.jumps)

    def __call__(self, x: float) -> float:
        i = np.searchsorted(self.xs, x, side="right")
        return float(self.values[i - 1]) if i else 0.0

    def jump_at(self, x: float, tol: float = 1e-12) -> float:
        hits = np.flatnonzero(np.abs(self.xs - x) <= tol)
        return float(self.jumps[hits[0]]) if hits.size else 0.0


def integrated_probability(ensemble: OrbitEnsemble, l_max: int | None = None) -> Staircase:
    """Integrated orbit-length probability I(L / L_max); I(1) = 1.

    ``l_max`` defaults to the largest observed length; passing the nominal
    scale 2**(N+1) instead reproduces the published normalization, under
    which the dominant jumps sit at rational x.
    """
    probs = ensemble.length_probabilities()
    if l_max is None:
        l_max = ensemble.max_length()
    lengths = np.array(sorted(probs), dtype=float)
    xs = lengths / l_max
    jumps = np.array([probs[int(l)] for l in lengths])
    return Staircase(xs, jumps)


def sample_orbit_censuses(
    n_qubits: int,
    n_samples: int,
    seed: int,
    depth: int | None = None,
    boundary: str = "open",
    sample_range: tuple[int, int] | None = None,
) -> list[OrbitCensus]:
    """Censuses of independent deep brick-wall Clifford circuits.

    Per-sample RNG streams derive from (seed, stream tag, sample index), so
    any sub-range of samples reproduces the same censuses as a full run.
    """
    if depth is None:
        depth = default_depth(n_qubits)
    start, stop = sample_range if sample_range is not None else (0, n_samples)
    out = []
    for i in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _ORBIT_STREAM_TAG, i)))
        circuit = build_brickwall(n_qubits, depth, 0, rng, boundary)
        out.append(decompose_orbits(circuit_clifford_part(circuit)))
    return out


def ensemble_from_censuses(
    n_qubits: int, censuses: list[OrbitCensus], seed: int | None = None
) -> OrbitEnsemble:
    ens = OrbitEnsemble(n_qubits, seed=seed)
    for c in censuses:
        ens.add(c)
    return ens
