"""Dense-unitary spectral diagnostics for Clifford+T circuits.

Dense matrices appear only here: circuits are promoted to 2**N x 2**N
unitaries with a fixed gate-matrix convention (a Clifford tableau determines
its unitary up to global phase; the phase is pinned by making the first
nonzero amplitude of the image of |0...0> real positive).  All observables
downstream - eigenphase differences, spacings, degeneracy counts - are
independent of that convention.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ContractViolation, NumericalError, ResourceCapError
from . import pauli
from .tableau import CliffordTableau, Circuit, build_brickwall

T_PHASE = np.exp(1j * np.pi / 4)

DENSE_QUBIT_CAP = 10

_SPECTRUM_STREAM_TAG = 2
_HAAR_STREAM_TAG = 3

_TWO_PI = 2.0 * np.pi


# ---------------------------------------------------------------------------
# circuits to matrices
# ---------------------------------------------------------------------------

def tableau_to_matrix(t: CliffordTableau) -> np.ndarray:
    """Dense unitary of a Clifford tableau with a deterministic global phase.

    The image of |0...0> is reconstructed from the stabilizer projector built
    out of the Z-generator images; the remaining columns follow by applying
    X-generator images.
    """
    n = t.n_qubits
    d = 1 << n
    v = None
    for trial in range(d):
        w = np.zeros(d, dtype=complex)
        w[trial] = 1.0
        for img in t.z_images:
            w = 0.5 * (w + pauli.apply_to_state(img, w))
        norm = np.linalg.norm(w)
        if norm > 1e-6:
            v = w / norm
            break
    if v is None:
        raise NumericalError("stabilizer projector annihilated every basis vector")
    first = np.flatnonzero(np.abs(v) > 1e-9)[0]
    v = v * (abs(v[first]) / v[first])
    u = np.empty((d, d), dtype=complex)
    for b in range(d):
        col = v
        for i in range(n):
            if (b >> (n - 1 - i)) & 1:
                col = pauli.apply_to_state(t.x_images[i], col)
        u[:, b] = col
    return u


@lru_cache(maxsize=16384)
def gate_matrix(t: CliffordTableau) -> np.ndarray:
    m = tableau_to_matrix(t)
    m.setflags(write=False)
    return m


def apply_two_qubit(arr: np.ndarray, mat4: np.ndarray, qubits: tuple[int, int], n_qubits: int) -> np.ndarray:
    """Apply a 4x4 matrix to row axes (a, b) of a state vector or operator."""
    a, b = qubits
    t = arr.reshape((2,) * n_qubits + (-1,))
    t = np.moveaxis(t, (a, b), (0, 1))
    shape = t.shape
    s = mat4 @ t.reshape(4, -1)
    t = np.moveaxis(s.reshape(shape), (0, 1), (a, b))
    return t.reshape(arr.shape)


def apply_t_gate(arr: np.ndarray, qubit: int, n_qubits: int) -> np.ndarray:
    """Apply the pi/4 phase gate diag(1, e^{i pi/4}) to one row-axis qubit."""
    out = arr.astype(complex, copy=True).reshape((2,) * n_qubits + (-1,))
    out[(slice(None),) * qubit + (1,)] *= T_PHASE
    return out.reshape(arr.shape)


def circuit_to_matrix(c: Circuit, max_qubits: int = DENSE_QUBIT_CAP) -> np.ndarray:
    """Dense unitary of a Clifford+T circuit; layer k's T-gates follow its bricks."""
    n = c.n_qubits
    if n > max_qubits:
        raise ResourceCapError(f"dense matrix for {n} qubits exceeds the cap of {max_qubits}")
    u = np.eye(1 << n, dtype=complex)
    for l, layer in enumerate(c.layers):
        for gate in layer:
            u = apply_two_qubit(u, gate_matrix(gate.tableau), gate.qubits, n)
        for q in c.t_gates_in_layer(l):
            u = apply_t_gate(u, q, n)
    return u


def check_unitary(u: np.ndarray, tol: float = 1e-9, rng: np.random.Generator | None = None) -> None:
    """Verify U U+ = 1; full product for d <= 64, random columns above."""
    d = u.shape[0]
    if d <= 64:
        err = np.abs(u @ u.conj().T - np.eye(d)).max()
    else:
        rng = rng or np.random.default_rng(0)
        cols = rng.integers(0, d, size=8)
        err = 0.0
        for k in cols:
            e = np.zeros(d)
            e[k] = 1.0
            err = max(err, float(np.linalg.norm(u.conj().T @ (u @ e) - e)))
    if err > tol:
        raise NumericalError(f"unitarity violated: deviation {err:.3e} > {tol:.1e}")


# ---------------------------------------------------------------------------
# eigenphases
# ---------------------------------------------------------------------------

def eigenphases(u: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Sorted eigenphases in [0, 2*pi); eigenvalue moduli must sit on the circle."""
    vals = np.linalg.eigvals(u)
    drift = float(np.abs(np.abs(vals) - 1.0).max())
    if drift > tol:
        raise NumericalError(
            f"eigenvalue modulus drift {drift:.3e} exceeds {tol:.1e} (d={u.shape[0]})"
        )
    phases = np.angle(vals) % _TWO_PI
    phases.sort()
    return phases


def _eigenphases_stack(mats: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    vals = np.linalg.eigvals(mats)
    drift = float(np.abs(np.abs(vals) - 1.0).max())
    if drift > tol:
        raise NumericalError(f"eigenvalue modulus drift {drift:.3e} exceeds {tol:.1e}")
    phases = np.angle(vals) % _TWO_PI
    phases.sort(axis=-1)
    return phases


def sample_circuit_spectra(
    n_qubits: int,
    depth: int,
    n_t_gates: int,
    n_samples: int,
    seed: int,
    sample_range: tuple[int, int] | None = None,
    boundary: str = "open",
    max_qubits: int = DENSE_QUBIT_CAP,
    chunk: int = 128,
) -> np.ndarray:
    """Eigenphase spectra of independent random circuits, shape (samples, 2**N)."""
    start, stop = sample_range if sample_range is not None else (0, n_samples)
    out = []
    mats = []
    for i in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _SPECTRUM_STREAM_TAG, i)))
        circuit = build_brickwall(n_qubits, depth, n_t_gates, rng, boundary)
        mats.append(circuit_to_matrix(circuit, max_qubits))
        if len(mats) == chunk:
            out.append(_eigenphases_stack(np.stack(mats)))
            mats = []
    if mats:
        out.append(_eigenphases_stack(np.stack(mats)))
    if not out:
        return np.empty((0, 1 << n_qubits))
    return np.concatenate(out, axis=0)


def haar_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform unitary: QR of a complex Gaussian with phase correction."""
    if d < 2:
        raise ContractViolation("Haar sampling needs dimension >= 2")
    z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / math.sqrt(2.0)
    q, r = np.linalg.qr(z)
    lam = np.diagonal(r).copy()
    lam /= np.abs(lam)
    return q * lam[None, :]


def sample_haar_spectra(
    d: int,
    n_samples: int,
    seed: int,
    sample_range: tuple[int, int] | None = None,
    chunk: int = 128,
) -> np.ndarray:
    start, stop = sample_range if sample_range is not None else (0, n_samples)
    out = []
    mats = []
    for i in range(start, stop):
        rng = np.random.default_rng(np.random.SeedSequence((seed, _HAAR_STREAM_TAG, i)))
        mats.append(haar_unitary(d, rng))
        if len(mats) == chunk:
            out.append(_eigenphases_stack(np.stack(mats)))
            mats = []
    if mats:
        out.append(_eigenphases_stack(np.stack(mats)))
    if not out:
        return np.empty((0, d))
    return np.concatenate(out, axis=0)


# ---------------------------------------------------------------------------
# phase correlation function
# ---------------------------------------------------------------------------

@dataclass
class CorrelationHistogram:
    """Binned density of eigenphase differences over [0, 2*pi), i != j pairs."""

    bin_width: float
    counts: np.ndarray
    n_samples: int
    dim: int

    @property
    def n_bins(self) -> int:
        return self.counts.shape[0]

    @property
    def bin_centers(self) -> np.ndarray:
        return (np.arange(self.n_bins) + 0.5) * self.bin_width

    @property
    def total_pairs(self) -> int:
        return self.n_samples * self.dim * (self.dim - 1)

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.total_pairs * self.bin_width)

    def merge(self, other: "CorrelationHistogram") -> None:
        if other.n_bins != self.n_bins or other.dim != self.dim:
            raise ContractViolation("histogram shapes differ")
        self.counts = self.counts + other.counts
        self.n_samples += other.n_samples


def correlation_function(
    spectra: np.ndarray, bin_width: float = _TWO_PI / 16000
) -> CorrelationHistogram:
    """Histogram of all ordered pair differences theta_i - theta_j mod 2*pi, i != j."""
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    n_samples, d = spectra.shape
    n_bins = round(_TWO_PI / bin_width)
    if n_bins < 1 or abs(n_bins * bin_width - _TWO_PI) > 1e-9:
        raise ContractViolation(f"bin width {bin_width} does not divide 2*pi")
    width = _TWO_PI / n_bins
    counts = np.zeros(n_bins, dtype=np.int64)
    offdiag = ~np.eye(d, dtype=bool)
    block = max(1, 2_000_000 // (d * d))
    for s in range(0, n_samples, block):
        ph = spectra[s : s + block]
        diffs = (ph[:, :, None] - ph[:, None, :]) % _TWO_PI
        idx = np.minimum((diffs[:, offdiag] / width).astype(np.int64), n_bins - 1)
        counts += np.bincount(idx.ravel(), minlength=n_bins)
    return CorrelationHistogram(width, counts, n_samples, d)


def chi_cue(theta, d: int):
    """Analytic CUE eigenphase-difference density.

    chi(theta) = (1/2pi) * d/(d-1) * (1 - sin^2(d theta/2) / (d^2 sin^2(theta/2))),
    with the removable singularity at theta -> 0 taking the limit value 0.
    Integrates to 1 over [0, 2*pi).
    """
    if d < 2:
        raise ContractViolation("CUE density needs d >= 2")
    theta = np.asarray(theta, dtype=float)
    half = theta / 2.0
    s = np.sin(half)
    tiny = np.abs(s) < 1e-12
    safe = np.where(tiny, 1.0, s)
    ratio = np.where(tiny, 1.0, np.sin(d * half) ** 2 / (d**2 * safe**2))
    out = (1.0 / _TWO_PI) * (d / (d - 1.0)) * np.clip(1.0 - ratio, 0.0, None)
    return out if out.ndim else float(out)


def peak_weight(hist: CorrelationHistogram, theta0: float, window: float) -> float:
    """Integrated density excess over the CUE baseline in a window around theta0."""
    if not (0.0 < theta0 - window / 2 and theta0 + window / 2 < _TWO_PI):
        raise ContractViolation("window extends outside (0, 2*pi)")
    centers = hist.bin_centers
    sel = np.abs(centers - theta0) <= window / 2
    if not np.any(sel):
        raise ContractViolation("window narrower than one bin")
    excess = float(
        np.sum((hist.density[sel] - chi_cue(centers[sel], hist.dim)) * hist.bin_width)
    )
    return max(excess, 0.0)


# ---------------------------------------------------------------------------
# level spacings and degeneracies
# ---------------------------------------------------------------------------

def spacings(spectra: np.ndarray) -> np.ndarray:
    """Nearest-neighbor spacings per sample, wrap-around included.

    Each row has exactly d entries summing to 2*pi, so the mean spacing per
    sample is 2*pi/d exactly.
    """
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    gaps = np.diff(spectra, axis=1)
    wrap = spectra[:, :1] + _TWO_PI - spectra[:, -1:]
    return np.concatenate([gaps, wrap], axis=1)


@dataclass
class SpacingHistogram:
    """Normalized nearest-neighbor spacing density P(zeta) over [0, 2*pi)."""

    bin_width: float
    counts: np.ndarray
    n_samples: int
    dim: int

    @property
    def bin_centers(self) -> np.ndarray:
        return (np.arange(self.counts.shape[0]) + 0.5) * self.bin_width

    @property
    def density(self) -> np.ndarray:
        return self.counts / (self.n_samples * self.dim * self.bin_width)

    def scaled_columns(self) -> tuple[np.ndarray, np.ndarray]:
        """(zeta * d / 2*pi, P) in mean-normalized units, density rescaled to match."""
        scale = self.dim / _TWO_PI
        return self.bin_centers * scale, self.density / scale


def level_spacing(spectra: np.ndarray, bin_width: float | None = None) -> SpacingHistogram:
    spectra = np.atleast_2d(np.asarray(spectra, dtype=float))
    n_samples, d = spectra.shape
    if bin_width is None:
        bin_width = (_TWO_PI / d) / 50.0
    n_bins = int(np.ceil(_TWO_PI / bin_width))
    gaps = spacings(spectra).ravel()
    idx = np.minimum((gaps / bin_width).astype(np.int64), n_bins - 1)
    counts = np.bincount(idx, minlength=n_bins)
    return SpacingHistogram(bin_width, counts, n_samples, d)


DEGENERACY_EPS = 1e-9


def degeneracy_count(spacing_rows: np.ndarray, eps: float = DEGENERACY_EPS) -> int:
    """Number of spacings below eps.

    Equivalent to sum(multiplicity - 1) over degenerate clusters when clusters
    are maximal chains of sub-eps gaps: merging k eigenphases consumes exactly
    k - 1 spacings.
    """
    return int(np.count_nonzero(np.asarray(spacing_rows) < eps))


def degeneracy_fraction(
    spacings_by_nt: dict[int, np.ndarray], eps: float = DEGENERACY_EPS
) -> dict[int, float]:
    """g(N_T)/g(0) where g is the mean per-circuit count of sub-eps spacings."""
    if 0 not in spacings_by_nt:
        raise ContractViolation("baseline at N_T = 0 is required")
    base_rows = np.atleast_2d(spacings_by_nt[0])
    g0 = degeneracy_count(base_rows, eps) / base_rows.shape[0]
    if g0 <= 0:
        raise ContractViolation("zero degeneracy baseline")
    out = {}
    for nt, rows in spacings_by_nt.items():
        rows = np.atleast_2d(rows)
        out[nt] = (degeneracy_count(rows, eps) / rows.shape[0]) / g0
    return out
