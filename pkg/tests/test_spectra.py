import numpy as np
import pytest
from scipy import integrate, stats

from cliffordlab import orbits, spectra, tableau
from cliffordlab.errors import ContractViolation, NumericalError, ResourceCapError

from _oracles import CNOT4, H2, S2

TWO_PI = 2 * np.pi

H_T = tableau.from_generator_images(["+Z"], ["+X"])
S_T = tableau.from_generator_images(["+Y"], ["+Z"])
CNOT_T = tableau.from_generator_images(["+XX", "+IX"], ["+ZI", "+ZZ"])


# ---------------------------------------------------------------------------
# dense matrices
# ---------------------------------------------------------------------------

def test_tableau_to_matrix_textbook_gates():
    np.testing.assert_allclose(spectra.tableau_to_matrix(H_T), H2, atol=1e-12)
    np.testing.assert_allclose(spectra.tableau_to_matrix(S_T), S2, atol=1e-12)
    np.testing.assert_allclose(spectra.tableau_to_matrix(CNOT_T), CNOT4, atol=1e-12)


def test_empty_circuit_matrix_is_identity():
    c = tableau.Circuit(2, ())
    np.testing.assert_allclose(spectra.circuit_to_matrix(c), np.eye(4), atol=1e-15)


def test_single_t_gate_matrix():
    gates = (tableau.Gate((0, 1), tableau.identity_tableau(2)),)
    c = tableau.Circuit(2, (gates,), ((0, 1),))
    expected = np.diag([1, np.exp(1j * np.pi / 4), 1, np.exp(1j * np.pi / 4)])
    np.testing.assert_allclose(spectra.circuit_to_matrix(c), expected, atol=1e-12)


def test_cnot_layer_matrix():
    c = tableau.Circuit(2, ((tableau.Gate((0, 1), CNOT_T),),))
    np.testing.assert_allclose(spectra.circuit_to_matrix(c), CNOT4, atol=1e-12)


def test_circuit_matrix_is_unitary():
    rng = np.random.default_rng(0)
    c = tableau.build_brickwall(4, 20, 6, rng)
    u = spectra.circuit_to_matrix(c)
    spectra.check_unitary(u, 1e-9)


def test_dense_cap_enforced():
    c = tableau.build_brickwall(4, 4, 0, np.random.default_rng(0))
    with pytest.raises(ResourceCapError):
        spectra.circuit_to_matrix(c, max_qubits=3)


# ---------------------------------------------------------------------------
# eigenphases
# ---------------------------------------------------------------------------

def test_eigenphases_identity():
    np.testing.assert_allclose(spectra.eigenphases(np.eye(8)), 0.0, atol=1e-12)


def test_eigenphases_hadamard():
    np.testing.assert_allclose(spectra.eigenphases(H2), [0.0, np.pi], atol=1e-12)


def test_eigenphases_t_gate():
    t = np.diag([1.0, np.exp(1j * np.pi / 4)])
    np.testing.assert_allclose(spectra.eigenphases(t), [0.0, np.pi / 4], atol=1e-12)


def test_eigenphases_rejects_non_unitary():
    with pytest.raises(NumericalError):
        spectra.eigenphases(np.diag([1.0, 2.0]))


def test_orbit_spectrum_duality():
    # the census-implied conjugation phases equal the dense unitary's
    # eigenphase differences (ordered pairs, diagonal included)
    rng = np.random.default_rng(1)
    for n in (2, 3):
        c = tableau.build_brickwall(n, 5 * n, 0, rng)
        census = orbits.decompose_orbits(tableau.circuit_clifford_part(c))
        orbit_phases = orbits.orbit_eigenphases(census)
        phases = spectra.eigenphases(spectra.circuit_to_matrix(c))
        diffs = ((phases[:, None] - phases[None, :]) % TWO_PI).ravel()
        guard = 1e-6
        a = np.sort((orbit_phases + guard) % TWO_PI - guard)
        b = np.sort((diffs + guard) % TWO_PI - guard)
        np.testing.assert_allclose(a, b, atol=1e-8)


# ---------------------------------------------------------------------------
# correlation function and the CUE baseline
# ---------------------------------------------------------------------------

def test_correlation_single_two_level_spectrum():
    hist = spectra.correlation_function(np.array([[0.0, np.pi]]), TWO_PI / 64)
    assert hist.counts.sum() == 2
    peak = np.argmax(hist.counts)
    assert hist.bin_centers[peak] == pytest.approx(np.pi, abs=hist.bin_width)
    assert np.sum(hist.density * hist.bin_width) == pytest.approx(1.0, abs=1e-9)


def test_correlation_symmetric_under_reflection():
    rng = np.random.default_rng(2)
    phases = np.sort(rng.uniform(0, TWO_PI, size=(1, 16)), axis=1)
    hist = spectra.correlation_function(phases, TWO_PI / 256)
    np.testing.assert_array_equal(hist.counts, hist.counts[::-1])


def test_correlation_rejects_bad_bin_width():
    with pytest.raises(ContractViolation):
        spectra.correlation_function(np.zeros((1, 4)), 1.0)  # 1.0 does not divide 2*pi


def test_chi_cue_values():
    assert spectra.chi_cue(1e-15, 8) == pytest.approx(0.0, abs=1e-9)
    assert spectra.chi_cue(np.pi, 2) == pytest.approx(1 / np.pi, abs=1e-12)
    # first zero of the oscillatory factor sits at 2*pi/d
    d = 16
    theta0 = TWO_PI / d
    assert spectra.chi_cue(theta0, d) == pytest.approx(
        (1 / TWO_PI) * d / (d - 1), abs=1e-12
    )


def test_chi_cue_normalization():
    for d in (2, 8, 32):
        val, err = integrate.quad(
            lambda t: spectra.chi_cue(t, d), 0.0, TWO_PI, limit=400
        )
        assert val == pytest.approx(1.0, abs=1e-9)


def test_chi_cue_matches_haar_sampling():
    d = 32
    phases = spectra.sample_haar_spectra(d, 400, seed=5)
    hist = spectra.correlation_function(phases, TWO_PI / 256)
    centers = hist.bin_centers
    expected = spectra.chi_cue(centers, d)
    total = hist.total_pairs
    exp_counts = expected * total * hist.bin_width
    keep = exp_counts > 20
    chi2 = np.sum((hist.counts[keep] - exp_counts[keep]) ** 2 / exp_counts[keep])
    reduced = chi2 / keep.sum()
    assert reduced < 1.5


def test_haar_unitary_properties():
    rng = np.random.default_rng(3)
    u = spectra.haar_unitary(64, rng)
    spectra.check_unitary(u, 1e-9)
    assert np.linalg.norm(u[:, 0]) == pytest.approx(1.0, abs=1e-12)


def test_haar_eigenphase_uniformity():
    phases = spectra.sample_haar_spectra(32, 256, seed=6).ravel()
    counts, _ = np.histogram(phases, bins=16, range=(0.0, TWO_PI))
    res = stats.chisquare(counts)
    assert res.pvalue > 0.001


def test_peak_weight_cue_is_small():
    phases = spectra.sample_haar_spectra(32, 512, seed=7)
    hist = spectra.correlation_function(phases, TWO_PI / 2048)
    w = 5 * hist.bin_width
    assert spectra.peak_weight(hist, np.pi, w) < 3e-3


def test_peak_weight_pure_clifford_is_large():
    phases = spectra.sample_circuit_spectra(5, 25, 0, 256, seed=8)
    hist = spectra.correlation_function(phases, TWO_PI / 2048)
    w = 5 * hist.bin_width
    assert spectra.peak_weight(hist, np.pi, w) > 0.02


def test_peak_weight_window_validation():
    hist = spectra.correlation_function(np.array([[0.0, np.pi]]), TWO_PI / 64)
    with pytest.raises(ContractViolation):
        spectra.peak_weight(hist, 0.0, 1.0)


# ---------------------------------------------------------------------------
# level spacings
# ---------------------------------------------------------------------------

def test_spacings_sum_to_circle():
    rng = np.random.default_rng(9)
    phases = np.sort(rng.uniform(0, TWO_PI, size=(6, 32)), axis=1)
    gaps = spectra.spacings(phases)
    assert gaps.shape == (6, 32)
    np.testing.assert_allclose(gaps.sum(axis=1), TWO_PI, atol=1e-12)
    np.testing.assert_allclose(gaps.mean(axis=1), TWO_PI / 32, atol=1e-12)


def test_identity_spectrum_spacings():
    gaps = spectra.spacings(np.zeros((1, 8)))
    assert np.count_nonzero(gaps < 1e-12) == 7
    assert gaps.max() == pytest.approx(TWO_PI, abs=1e-12)


def test_level_spacing_histogram_haar():
    phases = spectra.sample_haar_spectra(128, 96, seed=10)
    hist = spectra.level_spacing(phases)
    scaled, density = hist.scaled_columns()
    total = np.sum(hist.density * hist.bin_width)
    assert total == pytest.approx(1.0, abs=1e-9)
    # CUE-like statistics: unit mean spacing, level repulsion, no degeneracies
    gaps = spectra.spacings(phases) * 128 / TWO_PI
    assert gaps.mean() == pytest.approx(1.0, abs=1e-12)
    assert 0.15 < gaps.var() < 0.21
    assert spectra.degeneracy_count(spectra.spacings(phases)) == 0


def test_pure_clifford_spacings_have_degeneracies():
    # N=7 undoped circuits: discrete spacing structure with a strong zero peak
    phases = spectra.sample_circuit_spectra(7, 35, 0, 48, seed=11)
    gaps = spectra.spacings(phases)
    frac = np.count_nonzero(gaps < 1e-9) / gaps.size
    assert frac > 0.05


def test_degeneracy_fraction_baseline_and_monotonic_input():
    rows0 = np.array([[0.0, 0.5, 1e-12, 0.4], [1e-11, 0.2, 0.3, 0.1]])
    rows1 = np.array([[0.0, 0.5, 0.2, 0.4], [0.3, 0.2, 0.3, 0.1]])
    ratios = spectra.degeneracy_fraction({0: rows0, 1: rows1})
    assert ratios[0] == pytest.approx(1.0)
    # g(0) = 3 hits / 2 circuits, g(1) = 1 hit / 2 circuits
    assert ratios[1] == pytest.approx(1 / 3)


def test_degeneracy_fraction_requires_baseline():
    with pytest.raises(ContractViolation):
        spectra.degeneracy_fraction({1: np.zeros((1, 4))})
    with pytest.raises(ContractViolation):
        spectra.degeneracy_fraction({0: np.full((1, 4), 0.5)})


def test_spectra_sample_range_reproduces_full_run():
    full = spectra.sample_circuit_spectra(3, 9, 2, 6, seed=12)
    tail = spectra.sample_circuit_spectra(3, 9, 2, 6, seed=12, sample_range=(4, 6))
    np.testing.assert_allclose(full[4:], tail, atol=0)
