"""Stabilizer 2-Renyi entropy (magic) of statevectors and circuit ensembles.

For a pure state the squared Pauli expectations Xi(S) = <S>^2 / d form a
probability distribution over the 4**N unsigned strings; the stabilizer
2-Renyi entropy is

    M2 = -log2( sum_S Xi(S)^2 ) - log2(d) = log2(d) - log2( sum_S <S>^4 ).

M2 vanishes exactly on stabilizer states, is invariant under Clifford
operations, additive over tensor products, and bounded by log2((d+1)/2).

Two evaluation routes are kept behind one contract: a direct loop over all
4**N strings (the reference), and a Walsh-Hadamard transform of the
shifted-overlap table that yields every expectation at once in
O(d^2 log d).  Tests pin their agreement to 1e-9.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .errors import ContractViolation
from . import pauli
from .pauli import _require_state, _reverse_table
from .tableau import Circuit, build_brickwall, default_depth
from .spectra import apply_t_gate, apply_two_qubit, gate_matrix, haar_unitary

# magic of a single-qubit state on the diagonal of an octahedron face center,
# the quantum added by one isolated pi/4 phase gate
MAGIC_QUANTUM = 2.0 - math.log2(3.0)
# single-qubit maximum, log2(3/2), attained on the 8 (+-1,+-1,+-1)/sqrt(3) axes
MAX_MAGIC_1Q = math.log2(1.5)

_MAGIC_STREAM_TAG = 4
_POWER_STREAM_TAG = 5
_HAAR_MAGIC_STREAM_TAG = 6


def sre_upper_bound(n_qubits: int) -> float:
    return math.log2(((1 << n_qubits) + 1) / 2.0)


def haar_mean_lower_bound(n_qubits: int) -> float:
    """Lower bound on the Haar-averaged non-stabilizing power, log2((d+3)/4)."""
    return math.log2(((1 << n_qubits) + 3) / 4.0)


# ---------------------------------------------------------------------------
# statevector evolution
# ---------------------------------------------------------------------------

def zero_state(n_qubits: int) -> np.ndarray:
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[0] = 1.0
    return psi


def apply_gate(psi: np.ndarray, mat4: np.ndarray, qubits: tuple[int, int]) -> np.ndarray:
    """Apply a 2-qubit unitary to a statevector; touches only the two strides."""
    n = psi.shape[0].bit_length() - 1
    for q in qubits:
        if not 0 <= q < n:
            raise IndexError(f"qubit {q} outside register of size {n}")
    return apply_two_qubit(psi, mat4, qubits, n)


def apply_t(psi: np.ndarray, qubit: int) -> np.ndarray:
    n = psi.shape[0].bit_length() - 1
    if not 0 <= qubit < n:
        raise IndexError(f"qubit {qubit} outside register of size {n}")
    return apply_t_gate(psi, qubit, n)


def run_circuit(psi: np.ndarray, circuit: Circuit) -> np.ndarray:
    """Evolve a statevector through all layers; T-gates follow their layer's bricks."""
    n = circuit.n_qubits
    if psi.shape[0] != (1 << n):
        raise ContractViolation("state dimension does not match the circuit")
    for l, layer in enumerate(circuit.layers):
        for gate in layer:
            psi = apply_two_qubit(psi, gate_matrix(gate.tableau), gate.qubits, n)
        for q in circuit.t_gates_in_layer(l):
            psi = apply_t_gate(psi, q, n)
    return psi


def random_stabilizer_state(
    n_qubits: int, rng: np.random.Generator, depth: int | None = None
) -> np.ndarray:
    """|0...0> pushed through a deep random brick-wall Clifford circuit."""
    circuit = build_brickwall(n_qubits, depth or default_depth(n_qubits), 0, rng)
    return run_circuit(zero_state(n_qubits), circuit)


# ---------------------------------------------------------------------------
# stabilizer 2-Renyi entropy
# ---------------------------------------------------------------------------

def _fwht(a: np.ndarray) -> np.ndarray:
    """Walsh-Hadamard transform along the last axis (length a power of two)."""
    a = np.array(a, copy=True)
    n = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(lead + (n // (2 * h), 2, h))
        top = a[..., 0, :] + a[..., 1, :]
        bot = a[..., 0, :] - a[..., 1, :]
        a = np.stack((top, bot), axis=-2).reshape(lead + (n,))
        h *= 2
    return a


def expectation_table(psi: np.ndarray) -> np.ndarray:
    """All 4**N Pauli expectations of a unit state, in canonical string order.

    Row xb of conj(psi[b ^ xb]) * psi[b] holds the shifted overlaps for one X
    mask; a Walsh-Hadamard transform over b then resolves every Z mask at
    once.  Cost O(d^2 log d) versus O(d^3) for the string-by-string loop.
    """
    n = _require_state(psi)
    d = 1 << n
    psi = np.asarray(psi, dtype=complex)
    idx = np.arange(d, dtype=np.uint32)
    shifted = np.conj(psi)[idx[:, None] ^ idx[None, :]] * psi[None, :]
    table = _fwht(shifted)
    y_counts = np.bitwise_count(idx[:, None] & idx[None, :])
    vals = np.real(table * (1j ** y_counts))
    rev = _reverse_table(n)
    return vals[rev[:, None], rev[None, :]].reshape(-1)


def _string_values_batch(states: np.ndarray) -> np.ndarray:
    """Pauli expectations for a batch of states, shape (batch, 4**N)."""
    states = np.asarray(states, dtype=complex)
    d = states.shape[1]
    n = d.bit_length() - 1
    idx = np.arange(d, dtype=np.uint32)
    out = np.empty((states.shape[0], 1 << (2 * n)))
    for index in range(1 << (2 * n)):
        p = pauli.PauliString.from_index(n, index)
        xb = pauli.reverse_bits(p.x_mask, n)
        zb = pauli.reverse_bits(p.z_mask, n)
        phase = (1j**p.y_count) * (-1.0) ** np.bitwise_count(idx & np.uint32(zb))
        out[:, index] = np.real(
            np.sum(np.conj(states[:, idx ^ np.uint32(xb)]) * phase * states, axis=1)
        )
    return out


def sre(psi: np.ndarray, method: str = "direct") -> float:
    """Stabilizer 2-Renyi entropy of a unit-norm state, in bits.

    ``method="direct"`` loops the strings through ``pauli.expectation``;
    ``method="fast"`` uses the transform table.  Results agree to 1e-9.
    """
    n = _require_state(psi)
    d = 1 << n
    if method == "direct":
        total = 0.0
        for s in pauli.all_strings(n):
            total += pauli.expectation(s, psi) ** 4
    elif method == "fast":
        vals = expectation_table(psi)
        total = float(np.sum(vals**4))
    else:
        raise ValueError(f"unknown method {method!r}")
    m2 = math.log2(d) - math.log2(total)
    return float(np.clip(m2, 0.0, sre_upper_bound(n)))


def xi_distribution(psi: np.ndarray) -> np.ndarray:
    """Xi(S) = <S>^2 / d over all strings; sums to 1 for any pure state."""
    n = _require_state(psi)
    vals = expectation_table(psi)
    return vals**2 / (1 << n)


# ---------------------------------------------------------------------------
# ensembles
# ---------------------------------------------------------------------------

@dataclass
class MagicDistribution:
    """Sampled magic values with provenance; views expose rho(m2) and moments."""

    n_qubits: int
    samples: np.ndarray  # raw M2 values, one per sample
    provenance: dict = field(default_factory=dict)

    # distinct-value tallying switches to fixed-width bins past this many values
    discrete_limit: int = 64

    @property
    def n_samples(self) -> int:
        return self.samples.shape[0]

    @property
    def mean_M2(self) -> float:
        return float(np.mean(self.samples))

    @property
    def mean_m2(self) -> float:
        return self.mean_M2 / self.n_qubits

    @property
    def stderr_M2(self) -> float:
        if self.n_samples < 2:
            raise ContractViolation("standard error needs at least 2 samples")
        return float(np.std(self.samples, ddof=1) / math.sqrt(self.n_samples))

    @property
    def stderr_m2(self) -> float:
        return self.stderr_M2 / self.n_qubits

    def distinct_values(self, tol: float = 1e-9) -> list[tuple[float, int]] | None:
        """(M2 value, count) pairs when the support is discrete, else None."""
        rounded = np.round(self.samples / tol) * tol
        values, counts = np.unique(rounded, return_counts=True)
        if values.shape[0] > self.discrete_limit:
            return None
        return [(float(v), int(c)) for v, c in zip(values, counts)]

    def histogram(self, bin_width: float = 0.02) -> tuple[np.ndarray, np.ndarray]:
        """(bin left edges, density) over magic density m2 = M2 / N."""
        m2 = self.samples / self.n_qubits
        n_bins = max(1, int(np.ceil((m2.max() + bin_width) / bin_width))) if m2.size else 1
        idx = np.minimum((m2 / bin_width).astype(np.int64), n_bins - 1)
        counts = np.bincount(idx, minlength=n_bins)
        edges = np.arange(n_bins) * bin_width
        return edges, counts / (self.n_samples * bin_width)

    def merge(self, other: "MagicDistribution") -> None:
        if other.n_qubits != self.n_qubits:
            raise ContractViolation("qubit counts differ")
        self.samples = np.concatenate([self.samples, other.samples])


def sample_magic_values(
    n_qubits: int,
    depth: int,
    n_t_gates: int,
    n_samples: int,
    seed: int,
    sample_range: tuple[int, int] | None = None,
    init_depth: int | None = None,
    method: str = "fast",
) -> np.ndarray:
    """Magic of U|psi> over fresh random stabilizer inputs and circuits U.

    Per sample: a deep Clifford circuit prepares the stabilizer input, an
    independent Clifford+T circuit with the requested doping evolves it, and
    the stabilizer 2-Renyi entropy of the output is recorded.
    """
    start, stop = sample_range if sample_range is not None else (0, n_samples)
    out = np.empty(stop - start)
    for k, i in enumerate(range(start, stop)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _MAGIC_STREAM_TAG, i)))
        psi = random_stabilizer_state(n_qubits, rng, init_depth)
        circuit = build_brickwall(n_qubits, depth, n_t_gates, rng)
        out[k] = sre(run_circuit(psi, circuit), method)
    return out


def sample_magic_distribution(
    n_qubits: int,
    depth: int,
    n_t_gates: int,
    n_samples: int,
    seed: int,
    init_depth: int | None = None,
    method: str = "fast",
) -> MagicDistribution:
    values = sample_magic_values(
        n_qubits, depth, n_t_gates, n_samples, seed, None, init_depth, method
    )
    return MagicDistribution(
        n_qubits,
        values,
        {
            "seed": seed,
            "n_qubits": n_qubits,
            "depth": depth,
            "n_t_gates": n_t_gates,
            "n_samples": n_samples,
        },
    )


def stabilizer_states_1q() -> list[np.ndarray]:
    """The six single-qubit stabilizer states (octahedron vertices)."""
    s = 1 / math.sqrt(2)
    return [
        np.array([1, 0], dtype=complex),
        np.array([0, 1], dtype=complex),
        np.array([s, s], dtype=complex),
        np.array([s, -s], dtype=complex),
        np.array([s, 1j * s], dtype=complex),
        np.array([s, -1j * s], dtype=complex),
    ]


def non_stabilizing_power_mc(
    u: Circuit | np.ndarray,
    n_states: int,
    seed: int = 0,
    init_depth: int | None = None,
    method: str = "fast",
) -> tuple[float, float]:
    """Monte Carlo estimate of the mean output magic over stabilizer inputs.

    Inputs are sampled as deep random Clifford circuits acting on |0...0>,
    which is uniform over stabilizer states in the deep limit.  For a single
    qubit the average over all 6 stabilizer states is exact and the error
    estimate is zero.  Returns (mean, standard error).
    """
    if isinstance(u, Circuit):
        n_qubits = u.n_qubits
        evolve = lambda psi: run_circuit(psi, u)
    else:
        mat = np.asarray(u, dtype=complex)
        n_qubits = mat.shape[0].bit_length() - 1
        if mat.shape != (1 << n_qubits, 1 << n_qubits):
            raise ContractViolation("unitary dimension is not a power of two")
        evolve = lambda psi: mat @ psi
    if n_qubits == 1:
        vals = [sre(evolve(s), method) for s in stabilizer_states_1q()]
        return float(np.mean(vals)), 0.0
    if n_states < 2:
        raise ContractViolation("need at least 2 sampled states for an error estimate")
    vals = np.empty(n_states)
    for j in range(n_states):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _POWER_STREAM_TAG, j)))
        psi = random_stabilizer_state(n_qubits, rng, init_depth)
        vals[j] = sre(evolve(psi), method)
    return float(np.mean(vals)), float(np.std(vals, ddof=1) / math.sqrt(n_states))


def haar_magic_values(
    n_qubits: int,
    n_samples: int,
    seed: int,
    sample_range: tuple[int, int] | None = None,
    method: str = "fast",
) -> np.ndarray:
    start, stop = sample_range if sample_range is not None else (0, n_samples)
    d = 1 << n_qubits
    out = np.empty(stop - start)
    for k, i in enumerate(range(start, stop)):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _HAAR_MAGIC_STREAM_TAG, i)))
        psi = haar_unitary(d, rng) @ zero_state(n_qubits)
        out[k] = sre(psi, method)
    return out


def haar_magic_baseline(
    n_qubits: int, n_samples: int, seed: int, method: str = "fast"
) -> MagicDistribution:
    """Magic distribution of Haar-random states; the initial state is irrelevant."""
    values = haar_magic_values(n_qubits, n_samples, seed, None, method)
    return MagicDistribution(
        n_qubits,
        values,
        {"seed": seed, "n_qubits": n_qubits, "kind": "haar", "n_samples": n_samples},
    )


# ---------------------------------------------------------------------------
# single-qubit atlas
# ---------------------------------------------------------------------------

def bloch_state(theta: float, phi: float) -> np.ndarray:
    return np.array(
        [math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)], dtype=complex
    )


def bloch_magic_map(resolution: int = 128) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Magic over a (theta, phi) mesh of the Bloch sphere.

    Returns (theta, phi, M2) with M2[i, j] = M2(theta[i], phi[j]).  The global
    maximum log2(3/2) sits on the 8 cube-diagonal directions; the zeros are
    exactly the 6 octahedron vertices.
    """
    theta = np.linspace(0.0, np.pi, resolution + 1)
    phi = np.linspace(0.0, 2.0 * np.pi, 2 * resolution, endpoint=False)
    st, ct = np.sin(theta)[:, None], np.cos(theta)[:, None]
    x = st * np.cos(phi)[None, :]
    y = st * np.sin(phi)[None, :]
    z = ct * np.ones_like(phi)[None, :]
    m2 = 1.0 - np.log2(1.0 + x**4 + y**4 + z**4)
    return theta, phi, m2


def bloch_haar_mean(resolution: int = 512) -> float:
    """Mean magic over the Haar-uniform sphere, by quadrature with sin(theta) weight."""
    theta, phi, m2 = bloch_magic_map(resolution)
    per_theta = np.mean(m2, axis=1)
    weights = np.sin(theta)
    return float(np.trapezoid(per_theta * weights, theta) / np.trapezoid(weights, theta))


# ---------------------------------------------------------------------------
# maximum-magic search
# ---------------------------------------------------------------------------

def max_magic_state_3q() -> np.ndarray:
    """A 3-qubit state saturating the bound log2(9/2)."""
    c = np.array([1, 1, 1, 1j, 1 + 1j, 0, 0, 0], dtype=complex)
    return c / np.linalg.norm(c)


@dataclass
class MaxMagicReport:
    """Outcome of the small-register maximum-magic verification."""

    n1_magic: float
    n1_bound: float
    n1_expectations: tuple[float, float, float]
    n3_tuple_count: int
    n3_ray_count: int
    n3_target: float
    n2_best: float
    n2_bound: float

    @property
    def n1_saturates(self) -> bool:
        return abs(self.n1_magic - self.n1_bound) <= 1e-9

    @property
    def n2_margin(self) -> float:
        return self.n2_bound - self.n2_best


def _search_coefficient_states_3q(tol: float = 1e-9) -> tuple[int, int]:
    """Count 8-slot coefficient tuples over {0, 1, i, 1+i} hitting log2(9/2).

    Returns (tuple count, count up to global phase), where the second view
    identifies tuples that are complex multiples of each other.
    """
    alphabet = np.array([0, 1, 1j, 1 + 1j], dtype=complex)
    k = np.arange(1, 4**8, dtype=np.int64)
    digits = (k[:, None] >> (2 * np.arange(8))) & 3
    coeffs = alphabet[digits]
    norms = np.linalg.norm(coeffs, axis=1)
    states = coeffs / norms[:, None]
    vals = _string_values_batch(states)
    m2 = 3.0 - np.log2(np.sum(vals**4, axis=1))
    target = math.log2(4.5)
    hits = np.abs(m2 - target) <= tol
    hit_coeffs = coeffs[hits]
    rays = set()
    for row in hit_coeffs:
        lead = row[np.flatnonzero(np.abs(row) > 1e-12)[0]]
        canon = np.round(row / lead, 9)
        rays.add(tuple(zip(canon.real, canon.imag)))
    return int(np.count_nonzero(hits)), len(rays)


def _search_max_magic_2q(seed: int, restarts: int) -> float:
    rng = np.random.default_rng(np.random.SeedSequence((seed, 7)))

    def objective(z: np.ndarray) -> float:
        v = z[:4] + 1j * z[4:]
        norm = np.linalg.norm(v)
        if norm < 1e-8:
            return 0.0
        return -sre(v / norm, method="fast")

    best = 0.0
    for _ in range(restarts):
        res = optimize.minimize(objective, rng.standard_normal(8), method="L-BFGS-B")
        best = max(best, -float(res.fun))
    return best


def max_magic_search(seed: int = 0, n2_restarts: int = 48) -> MaxMagicReport:
    """Verify the known maximum-magic structure on 1, 2 and 3 qubits.

    One qubit: the state along the (1,1,1)/sqrt(3) axis reaches log2(3/2).
    Three qubits: exhaustive search over {0, 1, i, 1+i} coefficient tuples
    counts the states reaching log2(9/2).  Two qubits: multi-start numerical
    maximization, reporting the best value found below the log2(5/2) bound
    (which is not attainable there).
    """
    theta_star = math.acos(1 / math.sqrt(3))
    psi1 = bloch_state(theta_star, math.pi / 4)
    exps = tuple(
        pauli.expectation(pauli.single(1, 0, letter), psi1) for letter in "XYZ"
    )
    n1_magic = sre(psi1, method="fast")
    tuple_count, ray_count = _search_coefficient_states_3q()
    n2_best = _search_max_magic_2q(seed, n2_restarts)
    return MaxMagicReport(
        n1_magic=n1_magic,
        n1_bound=MAX_MAGIC_1Q,
        n1_expectations=exps,
        n3_tuple_count=tuple_count,
        n3_ray_count=ray_count,
        n3_target=math.log2(4.5),
        n2_best=n2_best,
        n2_bound=math.log2(2.5),
    )
