"""Independent dense-matrix oracles used across the test suite.

Everything here is built from literal 2x2 matrices and Kronecker products,
deliberately bypassing the package's mask-based algebra so the two routes
can check each other.
"""

import numpy as np

I2 = np.eye(2, dtype=complex)
X2 = np.array([[0, 1], [1, 0]], dtype=complex)
Y2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z2 = np.array([[1, 0], [0, -1]], dtype=complex)
H2 = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
S2 = np.array([[1, 0], [0, 1j]], dtype=complex)
CNOT4 = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
)

_MATS = {"I": I2, "X": X2, "Y": Y2, "Z": Z2}


def dense_pauli(letters: str) -> np.ndarray:
    """Kron product with the leftmost letter acting on qubit 0 (most significant bit)."""
    out = np.array([[1.0 + 0j]])
    for ch in letters:
        out = np.kron(out, _MATS[ch])
    return out


def letters_of(p) -> str:
    return "".join(p.letter(q) for q in range(p.n_qubits))


def dense_of_string(p) -> np.ndarray:
    return dense_pauli(letters_of(p))


def dense_of_signed(sp) -> np.ndarray:
    return sp.sign * dense_of_string(sp.string)


def random_state(rng: np.random.Generator, n_qubits: int) -> np.ndarray:
    v = rng.standard_normal(1 << n_qubits) + 1j * rng.standard_normal(1 << n_qubits)
    return v / np.linalg.norm(v)


def match_phase_product(a_mat, b_mat, c_mat, k):
    """True iff a_mat @ b_mat == i**k * c_mat elementwise."""
    return np.allclose(a_mat @ b_mat, (1j**k) * c_mat, atol=1e-12)


def reference_orbit_census(t):
    """Orbit census by explicit conjugation-following, for small registers.

    Returns (census dict, orbits) where orbits is a list of
    (member index list, step sign list) for start-independence checks.
    """
    from cliffordlab import pauli, tableau

    n = t.n_qubits
    total = 1 << (2 * n)
    seen = [False] * total
    census: dict[tuple[int, int], int] = {}
    orbit_data = []
    for start in range(total):
        if seen[start]:
            continue
        members = []
        signs = []
        current = pauli.SignedPauli(pauli.PauliString.from_index(n, start), 1)
        while True:
            members.append(current.string.index)
            seen[current.string.index] = True
            image = tableau.conjugate(t, pauli.SignedPauli(current.string, 1))
            signs.append(image.sign)
            current = image
            if current.string.index == start:
                break
        tau = 1
        for s in signs:
            tau *= s
        key = (len(members), tau)
        census[key] = census.get(key, 0) + 1
        orbit_data.append((members, signs))
    return census, orbit_data
