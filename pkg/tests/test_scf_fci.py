import logging
import math
import warnings
from dataclasses import replace
from functools import reduce

import numpy as np
import pytest

import gaussian_integrals as gi
import scf_fci
from exceptions import ConsistencyError, ConvergenceError, DomainError

E_H_STO3G = -0.4665818495
E_H_631G = -0.4982329107
E_RHF_EQ = -1.1166843871
E_FCI_EQ = -1.1372701747

# (ℓ en Å, E_RHF, E_FCI) en hartree, base STO-3G
STO3G_ENERGIES = [
    (0.5, -1.0429962, -1.0551598),
    (0.7414, E_RHF_EQ, E_FCI_EQ),
    (1.0, -1.0661087, -1.1011503),
    (2.0, -0.7837927, -0.9486411),
]


def _jordan_wigner_annihilators(n_modes):
    """c_p en produit de Kronecker : Z sur les modes inférieurs, bit 0 = facteur le plus à droite."""
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    z = np.diag([1.0, -1.0])
    ops = []
    for p in range(n_modes):
        factors = [np.eye(2) if k > p else lower if k == p else z for k in reversed(range(n_modes))]
        ops.append(reduce(np.kron, factors))
    return ops


def _fock_space_hamiltonian(mo):
    n = mo.n_modes
    c = _jordan_wigner_annihilators(n)
    cd = [op.T for op in c]
    dim = 1 << n
    H = np.zeros((dim, dim))
    for p in range(n):
        for q in range(n):
            if mo.h_mo[p, q] != 0.0:
                H += mo.h_mo[p, q] * cd[p] @ c[q]
    pairs = [(a, b) for a in range(n) for b in range(n)]
    annihilate = np.array([c[s] @ c[r] for r, s in pairs])  # indice (r, s)
    g = mo.eri_so.reshape(n * n, n * n)
    inner = np.tensordot(g, annihilate, axes=(1, 0))  # indice (p, q)
    for k, (p, q) in enumerate(pairs):
        H += 0.25 * cd[p] @ cd[q] @ inner[k]
    return H


def test_scf_energy_at_equilibrium(sto3g_scf):
    assert sto3g_scf.converged
    assert sto3g_scf.scf_energy == pytest.approx(E_RHF_EQ, abs=1e-6)


def test_mo_coefficients_orthonormal(sto3g_integrals, sto3g_scf):
    C = sto3g_scf.mo_coefficients
    assert np.allclose(C.T @ sto3g_integrals.S @ C, np.eye(2), atol=1e-10)
    assert np.all(np.diff(sto3g_scf.orbital_energies) > 0)


@pytest.mark.parametrize("ell", [0.5, 0.7414, 1.8, 3.0])
def test_minimal_basis_orbitals_are_symmetry_forced(ell):
    integrals = gi.assemble_integrals(ell, "sto-3g")
    C = scf_fci.rhf_scf(integrals).mo_coefficients
    s12 = integrals.S[0, 1]
    bonding = np.array([1.0, 1.0]) / math.sqrt(2 * (1 + s12))
    antibonding = np.array([1.0, -1.0]) / math.sqrt(2 * (1 - s12))
    assert np.allclose(np.abs(C[:, 0]), np.abs(bonding), atol=1e-8)
    assert np.allclose(np.abs(C[:, 1]), np.abs(antibonding), atol=1e-8)
    assert C[0, 0] * C[1, 0] > 0


def test_scf_reports_non_convergence(sto3g_integrals):
    with pytest.raises(ConvergenceError) as info:
        scf_fci.rhf_scf(sto3g_integrals, max_iter=1)
    assert info.value.residual is not None


def test_spin_orbital_tensor_matches_loop_transform(sto3g_integrals, sto3g_scf):
    mo = scf_fci.ao_to_mo(sto3g_integrals, sto3g_scf)
    C = sto3g_scf.mo_coefficients
    k = sto3g_integrals.n_ao
    eri = sto3g_integrals.eri
    spatial = np.zeros((k, k, k, k))
    for i, j, m, n in np.ndindex(k, k, k, k):
        spatial[i, j, m, n] = sum(
            C[p, i] * C[q, j] * C[r, m] * C[s, n] * eri[p, q, r, s] for p, q, r, s in np.ndindex(k, k, k, k)
        )

    def physicist(P, Q, R, S):
        if P % 2 != R % 2 or Q % 2 != S % 2:
            return 0.0
        return spatial[P // 2, R // 2, Q // 2, S // 2]

    n = 2 * k
    for P, Q, R, S in np.ndindex(n, n, n, n):
        expected = physicist(P, Q, R, S) - physicist(P, Q, S, R)
        assert mo.eri_so[P, Q, R, S] == pytest.approx(expected, abs=1e-12)
    assert mo.mode_order[:2] == (("alpha", 0), ("beta", 0))


def test_sector_determinants_order():
    assert scf_fci.sector_determinants(2) == (0b0011, 0b1001, 0b0110, 0b1100)
    assert len(scf_fci.sector_determinants(4)) == 16


@pytest.mark.parametrize("basis", ["sto-3g", "6-31g"])
def test_sector_hamiltonian_matches_fock_space(basis):
    integrals = gi.assemble_integrals(0.9, basis)
    mo = scf_fci.ao_to_mo(integrals, scf_fci.rhf_scf(integrals))
    H = scf_fci.build_sector_hamiltonian(mo)
    full = _fock_space_hamiltonian(mo)
    dets = list(H.determinants)
    assert np.allclose(H.matrix, full[np.ix_(dets, dets)], atol=1e-12)
    assert np.allclose(H.matrix, H.matrix.T, atol=1e-12)


def test_jordan_wigner_oracle_anticommutes():
    c = _jordan_wigner_annihilators(3)
    for p in range(3):
        for q in range(3):
            anti = c[p] @ c[q].T + c[q].T @ c[p]
            assert np.allclose(anti, np.eye(8) if p == q else 0.0)


def test_jacobi_matches_numpy():
    rng = np.random.default_rng(7)
    A = rng.normal(size=(6, 6))
    A = A + A.T
    values, vectors = scf_fci.jacobi_eigh(A)
    assert np.allclose(values, np.linalg.eigvalsh(A), atol=1e-10)
    assert np.allclose(vectors.T @ vectors, np.eye(6), atol=1e-10)
    assert np.allclose(A @ vectors, vectors * values, atol=1e-10)


def test_jacobi_rejects_non_symmetric():
    with pytest.raises(DomainError):
        scf_fci.jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_jacobi_reports_non_convergence():
    with pytest.raises(ConvergenceError):
        scf_fci.jacobi_eigh(np.array([[1.0, 0.5], [0.5, 2.0]]), max_sweeps=0)


def test_jacobi_accepts_nearly_diagonal_matrix():
    A = np.diag([-1.25, 0.3, 0.7, 1.9])
    A[0, 1] = A[1, 0] = 1e-321
    values, vectors = scf_fci.jacobi_eigh(A)
    assert np.allclose(values, np.diag(A))
    assert np.allclose(np.abs(vectors), np.eye(4))


def test_jacobi_skips_negligible_rotations():
    A = np.diag([-1.25, 0.3, 0.7, 1.9])
    A[0, 1] = A[1, 0] = 0.4
    A[2, 3] = A[3, 2] = 1e-200
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        values, vectors = scf_fci.jacobi_eigh(A)
    assert np.allclose(values, np.linalg.eigvalsh(A), atol=1e-12)
    assert np.allclose(A @ vectors, vectors * values, atol=1e-12)


def test_sector_diagonalization_along_default_grid():
    # la grille par défaut comprend des matrices déjà diagonales à l'arrondi près
    for ell in np.round(np.arange(0.3, 3.5001, 0.01), 12):
        integrals = gi.assemble_integrals(float(ell), "sto-3g")
        mo = scf_fci.ao_to_mo(integrals, scf_fci.rhf_scf(integrals))
        H = scf_fci.build_sector_hamiltonian(mo)
        values, vectors = scf_fci.jacobi_eigh(H.matrix)
        assert np.allclose(values, np.linalg.eigvalsh(H.matrix), atol=1e-10)
        assert np.allclose(vectors.T @ vectors, np.eye(len(values)), atol=1e-10)


def test_fci_energy_at_equilibrium(sto3g_integrals, sto3g_scf):
    state = scf_fci.fci_ground_state(sto3g_integrals, sto3g_scf)
    assert state.energy == pytest.approx(E_FCI_EQ, abs=1e-6)
    assert state.energy < sto3g_scf.scf_energy
    assert state.fock_vector[scf_fci.REFERENCE_DET] > 0
    assert state.two_det_weight == pytest.approx(1.0, abs=1e-10)
    assert state.ansatz_ok
    assert -math.pi / 4 < state.theta < 0


def test_fci_vector_is_eigenvector(sto3g_integrals, sto3g_scf):
    mo = scf_fci.ao_to_mo(sto3g_integrals, sto3g_scf)
    H = scf_fci.build_sector_hamiltonian(mo)
    state = scf_fci.ground_eigenpair(H, sto3g_integrals.e_nn)
    x = state.sector_amplitudes
    lam = state.energy - sto3g_integrals.e_nn
    assert np.linalg.norm(x) == pytest.approx(1.0)
    assert np.max(np.abs(H.matrix @ x - lam * x)) < 1e-10
    fock = scf_fci.embed_fock(x, H.determinants, H.n_modes)
    assert np.allclose(scf_fci.project_sector(fock, H.determinants), x)


def test_fci_invariant_under_orbital_sign_flip(sto3g_integrals, sto3g_scf):
    flipped = replace(sto3g_scf, mo_coefficients=sto3g_scf.mo_coefficients * np.array([1.0, -1.0]))
    ref = scf_fci.fci_ground_state(sto3g_integrals, sto3g_scf)
    other = scf_fci.fci_ground_state(sto3g_integrals, flipped)
    assert other.energy == pytest.approx(ref.energy, abs=1e-12)
    assert other.theta == pytest.approx(ref.theta, abs=1e-10)


def test_larger_basis_lowers_fci_energy():
    integrals = gi.assemble_integrals(0.7414, "6-31g")
    scf = scf_fci.rhf_scf(integrals)
    state = scf_fci.fci_ground_state(integrals, scf)
    assert state.energy < scf.scf_energy
    assert state.energy < E_FCI_EQ
    assert state.n_modes == 8
    assert 0.9 < state.two_det_weight <= 1.0


@pytest.mark.parametrize("ell, e_rhf, e_fci", STO3G_ENERGIES)
def test_minimal_basis_reference_energies(ell, e_rhf, e_fci):
    integrals = gi.assemble_integrals(ell, "sto-3g")
    scf = scf_fci.rhf_scf(integrals)
    state = scf_fci.fci_ground_state(integrals, scf)
    assert scf.scf_energy == pytest.approx(e_rhf, abs=1e-6)
    assert state.energy == pytest.approx(e_fci, abs=1e-6)


def test_split_valence_weight_is_not_a_warning(caplog):
    integrals = gi.assemble_integrals(1.5, "6-31g")
    with caplog.at_level(logging.DEBUG, logger="scf_fci"):
        state = scf_fci.fci_ground_state(integrals, scf_fci.rhf_scf(integrals))
    assert state.n_modes == 8
    ansatz = [r for r in caplog.records if "Ansatz" in r.getMessage()]
    assert all(r.levelno == logging.DEBUG for r in ansatz)


def test_atomic_asymptotes():
    assert scf_fci.atomic_asymptote("sto-3g") == pytest.approx(E_H_STO3G, abs=1e-8)
    assert scf_fci.atomic_asymptote("6-31g") == pytest.approx(E_H_631G, abs=1e-8)


def test_dissociation_limit():
    integrals = gi.assemble_integrals(10.0, "sto-3g")
    state = scf_fci.fci_ground_state(integrals, scf_fci.rhf_scf(integrals))
    assert state.energy == pytest.approx(2 * E_H_STO3G, abs=1e-6)
    assert state.theta == pytest.approx(-math.pi / 4, abs=1e-4)


def test_extract_theta_requires_fock_vector(sto3g_integrals, sto3g_scf):
    state = scf_fci.fci_ground_state(sto3g_integrals, sto3g_scf)
    with pytest.raises(ConsistencyError):
        scf_fci.extract_theta(replace(state, fock_vector=None))
