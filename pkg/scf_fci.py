"""Hartree-Fock restreint puis interaction de configurations complète (FCI) pour H2.

Ordre des modes fermioniques : (α MO0, β MO0, α MO1, β MO1, ...), orbitales
par énergie croissante. Le bit ``i`` d'un déterminant code l'occupation du mode ``i``.
"""

import logging
import math
from dataclasses import dataclass, replace
from itertools import combinations

import numpy as np
import scipy.linalg

import constants
from exceptions import ConsistencyError, ConvergenceError, DomainError
from gaussian_integrals import BasisSet, compute_integrals, load_basis

logger = logging.getLogger(__name__)

# Déterminants de l'ansatz : |1100> = α0 β0 occupés, |0011> = α1 β1 occupés
REFERENCE_DET = 0b0011
DOUBLE_EXCITATION_DET = 0b1100


@dataclass(frozen=True)
class SCFResult:
    mo_coefficients: np.ndarray  # colonnes = orbitales moléculaires
    orbital_energies: np.ndarray
    scf_energy: float  # électronique + nucléaire
    iterations: int
    converged: bool


@dataclass(frozen=True)
class MOIntegrals:
    h_mo: np.ndarray  # 2K x 2K, spin-orbitales
    eri_so: np.ndarray  # <pq||rs> antisymétrisé, convention des physiciens
    mode_order: tuple  # (spin, orbitale) pour chaque mode

    @property
    def n_modes(self):
        return self.h_mo.shape[0]


@dataclass(frozen=True)
class SectorHamiltonian:
    matrix: np.ndarray
    determinants: tuple  # entiers dont les bits sont les occupations des modes
    n_modes: int


@dataclass(frozen=True)
class GroundState:
    energy: float  # total, E_nn compris
    sector_amplitudes: np.ndarray
    determinants: tuple
    n_modes: int
    fock_vector: np.ndarray = None
    theta: float = None
    two_det_weight: float = None

    @property
    def ansatz_ok(self):
        return self.two_det_weight is not None and self.two_det_weight >= constants.TWO_DET_WEIGHT_MIN


# === Champ moyen ===
def _density(C, n_occ):
    occ = C[:, :n_occ]
    return occ @ occ.T


def _fock(h_core, eri, D):
    J = np.einsum("pqrs,rs->pq", eri, D)
    K = np.einsum("prqs,rs->pq", eri, D)
    return h_core + 2.0 * J - K


def _fix_column_signs(C):
    """Rend positif, pour chaque colonne, le premier coefficient de plus grand module."""
    C = C.copy()
    for j in range(C.shape[1]):
        i = int(np.argmax(np.abs(C[:, j]) > np.abs(C[:, j]).max() - 1e-12))
        if C[i, j] < 0:
            C[:, j] *= -1.0
    return C


def rhf_scf(integrals, max_iter=constants.SCF_MAX_ITER, mixing=constants.SCF_MIXING, n_electrons=2):
    """Champ auto-cohérent restreint à couches fermées (itération de Roothaan).

    La densité de départ vient de l'hamiltonien de cœur ; les densités successives
    sont mélangées linéairement (facteur ``mixing``).

    Returns:
        SCFResult: énergie totale incluant la répulsion nucléaire.
    """
    S = integrals.S
    h_core = integrals.h_core
    if np.linalg.eigvalsh(S).min() <= 0:
        raise DomainError("Matrice de recouvrement singulière ou non définie positive.")
    n_occ = n_electrons // 2

    _, C = scipy.linalg.eigh(h_core, S)
    D = _density(C, n_occ)
    energy = math.inf
    residual = math.inf
    for iteration in range(1, max_iter + 1):
        F = _fock(h_core, integrals.eri, D)
        new_energy = float(np.sum(D * (h_core + F)))
        _, C = scipy.linalg.eigh(F, S)
        D_new = _density(C, n_occ)
        residual = float(np.max(np.abs(D_new - D)))
        delta_e = abs(new_energy - energy)
        energy = new_energy
        if delta_e < constants.SCF_E_TOL and residual < constants.SCF_D_TOL:
            break
        D = (1.0 - mixing) * D + mixing * D_new
    else:
        raise ConvergenceError(
            f"SCF non convergé après {max_iter} itérations (écart de densité {residual:.3e})",
            residual=residual,
        )

    F = _fock(h_core, integrals.eri, D_new)
    eps, C = scipy.linalg.eigh(F, S)
    if iteration > max_iter // 2:
        logger.warning("SCF lent : %d itérations sur %d autorisées", iteration, max_iter)
    logger.debug("SCF convergé en %d itérations", iteration)
    return SCFResult(
        mo_coefficients=_fix_column_signs(C),
        orbital_energies=eps,
        scf_energy=float(np.sum(D_new * (h_core + F))) + integrals.e_nn,
        iterations=iteration,
        converged=True,
    )


# === Transformation vers les spin-orbitales ===
def ao_to_mo(integrals, scf):
    """Transforme h et (pq|rs) en spin-orbitales et antisymétrise.

    Returns:
        MOIntegrals: ``h_mo[P, Q]`` et ``eri_so[P, Q, R, S] = <PQ|RS> - <PQ|SR>``.
    """
    C = scf.mo_coefficients
    k = integrals.n_ao
    if C.shape != (k, k):
        raise DomainError(f"Coefficients MO de forme {C.shape}, attendu {(k, k)}")
    h_spatial = C.T @ integrals.h_core @ C
    eri_spatial = np.einsum("pqrs,pi,qj,rk,sl->ijkl", integrals.eri, C, C, C, C, optimize=True)

    n = 2 * k
    orbital = np.arange(n) // 2
    spin = np.arange(n) % 2
    same_spin = (spin[:, None] == spin[None, :]).astype(float)

    h_so = h_spatial[np.ix_(orbital, orbital)] * same_spin
    # <PQ|RS> = (PR|QS) avec conservation du spin sur chaque électron
    coulomb = eri_spatial[np.ix_(orbital, orbital, orbital, orbital)].transpose(0, 2, 1, 3)
    coulomb = coulomb * same_spin[:, None, :, None] * same_spin[None, :, None, :]
    eri_so = coulomb - coulomb.transpose(0, 1, 3, 2)

    mode_order = tuple(("alpha" if s == 0 else "beta", int(o)) for o, s in zip(orbital, spin))
    return MOIntegrals(h_mo=h_so, eri_so=eri_so, mode_order=mode_order)


# === Opérateurs de seconde quantification sur les déterminants ===
def _annihilate(det, p):
    if not (det >> p) & 1:
        return None, 0
    sign = -1 if bin(det & ((1 << p) - 1)).count("1") % 2 else 1
    return det ^ (1 << p), sign


def _create(det, p):
    if (det >> p) & 1:
        return None, 0
    sign = -1 if bin(det & ((1 << p) - 1)).count("1") % 2 else 1
    return det | (1 << p), sign


def apply_hamiltonian(mo, det):
    """Applique H électronique à un déterminant.

    H = sum h_pq c+_p c_q + 1/4 sum <pq||rs> c+_p c+_q c_s c_r

    Returns:
        dict: déterminant -> amplitude.
    """
    n = mo.n_modes
    out = {}
    occupied = [p for p in range(n) if (det >> p) & 1]
    for q in occupied:
        d1, s1 = _annihilate(det, q)
        for p in range(n):
            coeff = mo.h_mo[p, q]
            if coeff == 0.0:
                continue
            d2, s2 = _create(d1, p)
            if d2 is not None:
                out[d2] = out.get(d2, 0.0) + coeff * s1 * s2
    for r in occupied:
        d1, s1 = _annihilate(det, r)
        for s in occupied:
            d2, s2 = _annihilate(d1, s)
            if d2 is None:
                continue
            for q in range(n):
                d3, s3 = _create(d2, q)
                if d3 is None:
                    continue
                for p in range(n):
                    coeff = mo.eri_so[p, q, r, s]
                    if coeff == 0.0:
                        continue
                    d4, s4 = _create(d3, p)
                    if d4 is not None:
                        out[d4] = out.get(d4, 0.0) + 0.25 * coeff * s1 * s2 * s3 * s4
    return out


def sector_determinants(n_spatial, n_alpha=1, n_beta=1):
    """Déterminants à (N_α, N_β) fixés, ordre lexicographique (α, β)."""
    dets = []
    for alphas in combinations(range(n_spatial), n_alpha):
        for betas in combinations(range(n_spatial), n_beta):
            det = sum(1 << (2 * i) for i in alphas) | sum(1 << (2 * j + 1) for j in betas)
            dets.append(det)
    return tuple(dets)


def build_sector_hamiltonian(mo, n_alpha=1, n_beta=1):
    dets = sector_determinants(mo.n_modes // 2, n_alpha, n_beta)
    position = {d: i for i, d in enumerate(dets)}
    H = np.zeros((len(dets), len(dets)))
    for j, det in enumerate(dets):
        for target, amp in apply_hamiltonian(mo, det).items():
            H[position[target], j] += amp
    return SectorHamiltonian(matrix=H, determinants=dets, n_modes=mo.n_modes)


# === Diagonalisation ===
def _off_diagonal_norm(A):
    return float(np.linalg.norm(A - np.diag(np.diag(A))))


def jacobi_eigh(A, tol=constants.JACOBI_TOL, max_sweeps=constants.JACOBI_MAX_SWEEPS):
    """Diagonalisation d'une matrice symétrique par balayages de Jacobi cycliques.

    Returns:
        tuple: valeurs propres croissantes, vecteurs propres en colonnes.
    """
    A = np.array(A, dtype=float)
    if not np.allclose(A, A.T, atol=1e-12):
        raise DomainError("La matrice à diagonaliser n'est pas symétrique.")
    A = 0.5 * (A + A.T)
    n = A.shape[0]
    V = np.eye(n)
    threshold = tol * max(1.0, np.linalg.norm(A))
    eps = np.finfo(float).eps
    for _ in range(max_sweeps):
        off = _off_diagonal_norm(A)
        if off < threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                gap = A[q, q] - A[p, p]
                if apq == 0.0 or abs(apq) < eps * abs(gap):
                    # rotation négligeable devant l'écart diagonal
                    A[p, q] = A[q, p] = 0.0
                    continue
                theta = gap / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p, col_q = A[:, p].copy(), A[:, q].copy()
                A[:, p] = c * col_p - s * col_q
                A[:, q] = s * col_p + c * col_q
                row_p, row_q = A[p, :].copy(), A[q, :].copy()
                A[p, :] = c * row_p - s * row_q
                A[q, :] = s * row_p + c * row_q
                A[p, q] = A[q, p] = 0.0
                vec_p, vec_q = V[:, p].copy(), V[:, q].copy()
                V[:, p] = c * vec_p - s * vec_q
                V[:, q] = s * vec_p + c * vec_q
    else:
        off = _off_diagonal_norm(A)
        if off >= threshold:
            raise ConvergenceError(f"Jacobi non convergé (norme hors diagonale {off:.3e})", residual=off)
    order = np.argsort(np.diag(A), kind="stable")
    return np.diag(A)[order], V[:, order]


def ground_eigenpair(H, e_nn):
    """Plus bas couple propre du secteur, phase fixée par le déterminant de référence.

    Args:
        H (SectorHamiltonian): hamiltonien électronique du secteur.
        e_nn (float): répulsion nucléaire ajoutée à la valeur propre.
    """
    values, vectors = jacobi_eigh(H.matrix)
    ref = H.determinants.index(REFERENCE_DET) if REFERENCE_DET in H.determinants else None
    candidates = np.flatnonzero(values - values[0] < constants.DEGENERACY_TOL)
    best = candidates[0]
    x = vectors[:, best].copy()
    if ref is not None and len(candidates) > 1:
        # sous-espace dégénéré (singulet/triplet à la dissociation) : projection de la référence
        sub = vectors[:, candidates]
        x = sub @ sub[ref]
        if np.linalg.norm(x) < 1e-12:
            x = vectors[:, best].copy()
    x /= np.linalg.norm(x)
    anchor = ref if ref is not None and abs(x[ref]) > 1e-15 else int(np.argmax(np.abs(x)))
    if x[anchor] < 0:
        x = -x
    lam = float(values[best])
    residual = float(np.max(np.abs(H.matrix @ x - lam * x)))
    if residual >= constants.EIGEN_RESIDUAL_TOL:
        raise ConvergenceError(f"Résidu du vecteur propre trop grand : {residual:.3e}", residual=residual)
    return GroundState(
        energy=lam + e_nn,
        sector_amplitudes=x,
        determinants=H.determinants,
        n_modes=H.n_modes,
    )


# === Passage à l'espace de Fock ===
def embed_fock(amplitudes, determinants, n_modes):
    """Vecteur de longueur 2^n : bit i de l'indice = occupation du mode i."""
    vec = np.zeros(1 << n_modes)
    for det, amp in zip(determinants, amplitudes):
        vec[det] = amp
    return vec


def project_sector(fock_vector, determinants):
    return np.array([fock_vector[d] for d in determinants])


def extract_theta(state):
    """Angle de mélange de cos θ|1100> + sin θ|0011> et poids des deux déterminants."""
    if state.fock_vector is None:
        raise ConsistencyError("Vecteur de Fock absent : appeler embed_fock d'abord.")
    a = float(np.real(state.fock_vector[REFERENCE_DET]))
    b = float(np.real(state.fock_vector[DOUBLE_EXCITATION_DET]))
    weight = a * a + b * b
    if weight < constants.TWO_DET_WEIGHT_MIN:
        # en base étendue le poids reste naturellement sous le seuil
        level = logging.WARNING if state.n_modes == 4 else logging.DEBUG
        logger.log(level, "Ansatz à deux déterminants dégradé : poids %.6f < %.2f", weight, constants.TWO_DET_WEIGHT_MIN)
    return math.atan2(b, a), weight


def fci_ground_state(integrals, scf):
    """Enchaîne transformation MO, hamiltonien de secteur, diagonalisation et plongement."""
    mo = ao_to_mo(integrals, scf)
    H = build_sector_hamiltonian(mo)
    state = ground_eigenpair(H, integrals.e_nn)
    state = replace(state, fock_vector=embed_fock(state.sector_amplitudes, state.determinants, state.n_modes))
    theta, weight = extract_theta(state)
    return replace(state, theta=theta, two_det_weight=weight)


def atomic_asymptote(basis):
    """Énergie de l'atome d'hydrogène isolé dans la base (problème généralisé avec S)."""
    if not isinstance(basis, BasisSet):
        basis = load_basis(basis)
    origin = (0.0, 0.0, 0.0)
    atom = compute_integrals(basis.shells_at(origin), [(origin, constants.HYDROGEN_CHARGE)])
    energies = scipy.linalg.eigh(atom.h_core, atom.S, eigvals_only=True)
    return float(energies[0])
