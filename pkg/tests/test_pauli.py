import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliffordlab import pauli
from cliffordlab.errors import ContractViolation, DimensionError

from _oracles import dense_of_signed, dense_of_string, dense_pauli, match_phase_product, random_state


def strings(n_qubits):
    masks = st.integers(min_value=0, max_value=(1 << n_qubits) - 1)
    return st.builds(lambda x, z: pauli.PauliString(n_qubits, x, z), masks, masks)


# ---------------------------------------------------------------------------
# multiply
# ---------------------------------------------------------------------------

def test_multiply_involution():
    x = pauli.single(1, 0, "X")
    res, k = pauli.multiply(x, x)
    assert res.is_identity and k == 0


def test_multiply_xz_is_minus_i_y():
    res, k = pauli.multiply(pauli.single(1, 0, "X"), pauli.single(1, 0, "Z"))
    assert str(res) == "Y" and k == 3  # XZ = -iY


def test_multiply_two_qubit_example():
    a = pauli.from_label("+XZ").string
    b = pauli.from_label("+ZZ").string
    res, k = pauli.multiply(a, b)
    assert str(res) == "YI"
    assert match_phase_product(dense_of_string(a), dense_of_string(b), dense_of_string(res), k)


def test_multiply_exhaustive_single_qubit():
    for ia in range(4):
        for ib in range(4):
            a = pauli.PauliString.from_index(1, ((ia >> 1) << 1) | (ia & 1))
            b = pauli.PauliString.from_index(1, ((ib >> 1) << 1) | (ib & 1))
            res, k = pauli.multiply(a, b)
            assert match_phase_product(
                dense_of_string(a), dense_of_string(b), dense_of_string(res), k
            )


@settings(max_examples=150)
@given(st.integers(1, 4), st.data())
def test_multiply_matches_dense_oracle(n, data):
    a = data.draw(strings(n))
    b = data.draw(strings(n))
    res, k = pauli.multiply(a, b)
    assert match_phase_product(dense_of_string(a), dense_of_string(b), dense_of_string(res), k)


@settings(max_examples=100)
@given(st.integers(1, 4), st.data())
def test_multiply_associative_with_additive_phases(n, data):
    a, b, c = (data.draw(strings(n)) for _ in range(3))
    ab, k_ab = pauli.multiply(a, b)
    left, k_left = pauli.multiply(ab, c)
    bc, k_bc = pauli.multiply(b, c)
    right, k_right = pauli.multiply(a, bc)
    assert left == right
    assert (k_ab + k_left) % 4 == (k_bc + k_right) % 4


def test_multiply_size_mismatch():
    with pytest.raises(DimensionError):
        pauli.multiply(pauli.identity(1), pauli.identity(2))


# ---------------------------------------------------------------------------
# commutes
# ---------------------------------------------------------------------------

def test_commutes_examples():
    assert not pauli.commutes(pauli.single(1, 0, "X"), pauli.single(1, 0, "Z"))
    assert pauli.commutes(pauli.from_label("+XX").string, pauli.from_label("+ZZ").string)
    assert not pauli.commutes(pauli.from_label("+YI").string, pauli.from_label("+XX").string)


@settings(max_examples=150)
@given(st.integers(1, 4), st.data())
def test_commutes_matches_dense_commutator(n, data):
    a = data.draw(strings(n))
    b = data.draw(strings(n))
    ma, mb = dense_of_string(a), dense_of_string(b)
    dense_commutes = np.allclose(ma @ mb, mb @ ma, atol=1e-12)
    assert pauli.commutes(a, b) == dense_commutes
    assert pauli.commutes(a, b) == pauli.commutes(b, a)


# ---------------------------------------------------------------------------
# expectation
# ---------------------------------------------------------------------------

def test_expectation_computational_basis():
    for n in (1, 2, 3):
        psi = np.zeros(1 << n, dtype=complex)
        psi[0] = 1.0
        all_z = pauli.PauliString(n, 0, (1 << n) - 1)
        assert pauli.expectation(all_z, psi) == pytest.approx(1.0, abs=1e-12)
        assert pauli.expectation(pauli.single(n, 0, "X"), psi) == pytest.approx(0.0, abs=1e-12)


def test_expectation_max_magic_direction():
    theta = math.acos(1 / math.sqrt(3))
    psi = np.array(
        [math.cos(theta / 2), np.exp(1j * math.pi / 4) * math.sin(theta / 2)]
    )
    for letter in "XYZ":
        val = pauli.expectation(pauli.single(1, 0, letter), psi)
        assert val == pytest.approx(1 / math.sqrt(3), abs=1e-12)


def test_expectation_identity_is_one():
    rng = np.random.default_rng(7)
    for n in (1, 2, 4):
        psi = random_state(rng, n)
        assert pauli.expectation(pauli.identity(n), psi) == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1), st.data())
def test_expectation_matches_dense(n, seed, data):
    s = data.draw(strings(n))
    psi = random_state(np.random.default_rng(seed), n)
    expected = float(np.real(np.vdot(psi, dense_of_string(s) @ psi)))
    assert pauli.expectation(s, psi) == pytest.approx(expected, abs=1e-10)
    assert -1.0 - 1e-12 <= pauli.expectation(s, psi) <= 1.0 + 1e-12


def test_pauli_basis_completeness():
    # sum over all strings of <S>^2 equals the dimension, for any pure state
    rng = np.random.default_rng(3)
    for n in (1, 2, 3, 4):
        psi = random_state(rng, n)
        total = sum(pauli.expectation(s, psi) ** 2 for s in pauli.all_strings(n))
        assert total == pytest.approx(1 << n, abs=1e-9)


def test_expectation_rejects_bad_norm():
    with pytest.raises(ContractViolation):
        pauli.expectation(pauli.single(1, 0, "X"), np.array([1.0, 1.0]))


def test_apply_to_state_matches_dense():
    rng = np.random.default_rng(11)
    for n in (1, 2, 3):
        psi = random_state(rng, n)
        for _ in range(10):
            idx = int(rng.integers(1 << (2 * n)))
            sign = int(rng.choice([-1, 1]))
            sp = pauli.SignedPauli(pauli.PauliString.from_index(n, idx), sign)
            np.testing.assert_allclose(
                pauli.apply_to_state(sp, psi), dense_of_signed(sp) @ psi, atol=1e-12
            )


# ---------------------------------------------------------------------------
# labels and indexing
# ---------------------------------------------------------------------------

def test_label_round_trip_examples():
    for label in ("+XIZY", "-Y", "+IIII", "-ZXZX"):
        assert str(pauli.from_label(label)) == label


@settings(max_examples=100)
@given(st.integers(1, 6), st.data())
def test_label_round_trip_random(n, data):
    s = data.draw(strings(n))
    sign = data.draw(st.sampled_from([1, -1]))
    sp = pauli.SignedPauli(s, sign)
    assert pauli.from_label(str(sp)) == sp


def test_bad_labels_rejected():
    for label in ("", "X", "+", "+Q", "0XZ"):
        with pytest.raises(ValueError):
            pauli.from_label(label)


def test_index_bijection():
    for n in (1, 2, 4):
        seen = {pauli.PauliString.from_index(n, i).index for i in range(1 << (2 * n))}
        assert seen == set(range(1 << (2 * n)))
    # spot checks at n = 8 without materializing all 4^8 objects
    for i in (0, 1, 12345, 65535, 4**8 - 1):
        assert pauli.PauliString.from_index(8, i).index == i


def test_distinct_value_count_small_n():
    for n in (1, 2, 3):
        assert len(set(pauli.all_strings(n))) == 4**n


def test_mask_range_validation():
    with pytest.raises(ValueError):
        pauli.PauliString(1, 2, 0)
    with pytest.raises(ValueError):
        pauli.PauliString(0, 0, 0)


def test_dense_pauli_oracle_convention():
    # qubit 0 is the leftmost factor / most significant bit: X on qubit 0 of
    # two flips the high bit
    m = dense_pauli("XI")
    psi = np.zeros(4)
    psi[0b00] = 1.0
    np.testing.assert_allclose(m @ psi, np.eye(4)[0b10])
