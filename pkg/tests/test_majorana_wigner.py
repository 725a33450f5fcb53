import math

import numpy as np
import pytest

import gaussian_integrals as gi
import majorana_wigner as mw
import scf_fci
from exceptions import CapacityError, DomainError
from magic_measures import two_determinant_state


def _matrix(v, n_modes):
    dim = 1 << n_modes
    return np.column_stack([mw.majorana_apply(v, np.eye(dim)[:, k]) for k in range(dim)])


def _random_state(n_modes, seed):
    rng = np.random.default_rng(seed)
    x = rng.normal(size=1 << n_modes) + 1j * rng.normal(size=1 << n_modes)
    return x / np.linalg.norm(x)


def test_majorana_on_vacuum():
    vacuum = np.array([1.0, 0.0, 0.0, 0.0])
    assert np.allclose(mw.majorana_apply(0b01, vacuum), [0, 1, 0, 0])
    assert np.allclose(mw.majorana_apply(0b10, vacuum), [0, -1j, 0, 0])
    assert np.allclose(mw.majorana_apply(0, vacuum), vacuum)


def test_majoranas_anticommute():
    n = 3
    eta = [_matrix(1 << j, n) for j in range(2 * n)]
    for j in range(2 * n):
        for k in range(2 * n):
            anti = eta[j] @ eta[k] + eta[k] @ eta[j]
            assert np.allclose(anti, 2 * np.eye(1 << n) if j == k else 0.0)


def test_strings_are_hermitian_involutions():
    n = 3
    for v in range(1 << (2 * n)):
        M = _matrix(v, n)
        assert np.allclose(M, M.conj().T)
        assert np.allclose(M @ M, np.eye(1 << n))


def test_strings_are_orthogonal():
    n = 2
    mats = [_matrix(v, n) for v in range(1 << (2 * n))]
    for u, Mu in enumerate(mats):
        for v, Mv in enumerate(mats):
            expected = (1 << n) if u == v else 0.0
            assert np.trace(Mu.conj().T @ Mv) == pytest.approx(expected, abs=1e-12)


def test_phase_point_and_string():
    assert mw.phase_point([1, 0, 1]) == 5
    s = mw.MajoranaString(0b1011, 2)
    assert s.weight == 3
    assert s.phase_exponent == 3
    with pytest.raises(DomainError):
        mw.MajoranaString(1 << 4, 2)


def test_spectrum_matches_pointwise_values():
    x = _random_state(3, seed=11)
    w = mw.wigner_spectrum(x)
    assert len(w) == 64
    assert w.dimension == 8
    pointwise = [mw.wigner_value(x, v) for v in range(64)]
    assert np.allclose(w.values, pointwise, atol=1e-12)


def test_state_reconstructed_from_spectrum():
    n = 2
    x = _random_state(n, seed=3)
    w = mw.wigner_spectrum(x)
    rho = sum(w.values[v] * _matrix(v, n) for v in range(len(w))) / (1 << n)
    assert np.allclose(rho, np.outer(x, x.conj()), atol=1e-12)


@pytest.mark.parametrize("n_modes", [1, 2, 3, 4])
def test_pure_state_purity(n_modes):
    w = mw.wigner_spectrum(_random_state(n_modes, seed=n_modes))
    assert np.sum(w.values ** 2) == pytest.approx(1 << n_modes, rel=1e-12)
    assert w.values[0] == pytest.approx(1.0)


def test_wigner_rejects_bad_vectors():
    with pytest.raises(DomainError):
        mw.wigner_spectrum(np.ones(6))
    with pytest.raises(DomainError):
        mw.wigner_spectrum(np.array([1.0, np.nan]))
    big = np.zeros(1 << 13)
    big[0] = 1.0
    with pytest.raises(CapacityError):
        mw.wigner_spectrum(big)


def test_lp_norm():
    w = mw.wigner_spectrum(two_determinant_state(0.0))
    assert mw.lp_norm(w, 1) == pytest.approx(16.0)
    assert mw.lp_norm(w, 2) == pytest.approx(4.0)
    with pytest.raises(DomainError):
        mw.lp_norm(w, 0)


def test_exchange_mask():
    assert mw.exchange_mask(0b0110, 2) == 0b11
    assert mw.exchange_mask(0b0011, 2) == 0
    assert mw.exchange_mask(0b0111, 2) == 0b10


@pytest.mark.parametrize("theta", [-0.1, -0.3, -0.7, 0.45])
def test_two_determinant_structure(theta):
    w = mw.wigner_spectrum(two_determinant_state(theta))
    structure = mw.spectrum_structure(w, theta)
    assert structure["support"] == 32
    assert structure["nonzero"] == 24
    assert structure["classes"] == {"un": 8, "cos2theta": 8, "sin2theta": 8, "zero": 8}


def test_reference_determinant_structure():
    w = mw.wigner_spectrum(two_determinant_state(0.0))
    structure = mw.spectrum_structure(w, 0.0)
    assert structure["nonzero"] == 16
    assert np.all(np.isin(np.round(w.values, 12), [-1.0, 0.0, 1.0]))


def test_structure_of_fci_ground_states():
    rng = np.random.default_rng(5)
    for ell in rng.uniform(0.4, 3.0, size=10):
        integrals = gi.assemble_integrals(ell, "sto-3g")
        state = scf_fci.fci_ground_state(integrals, scf_fci.rhf_scf(integrals))
        w = mw.wigner_spectrum(state.fock_vector)
        structure = mw.spectrum_structure(w, state.theta)
        assert structure["nonzero"] == 24
        assert structure["classes"]["un"] == 8
        assert structure["classes"]["cos2theta"] == 8
        assert structure["classes"]["sin2theta"] == 8


def test_structure_requires_minimal_basis():
    w = mw.wigner_spectrum(_random_state(3, seed=1))
    with pytest.raises(DomainError):
        mw.spectrum_structure(w, 0.1)
