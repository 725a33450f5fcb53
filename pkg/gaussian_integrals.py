"""Intégrales mono- et biélectroniques sur des gaussiennes contractées de type s.

Toutes les grandeurs sont en unités atomiques (hartree, bohr). Les
distances en ångström ne sont acceptées que par ``assemble_integrals``.
"""

import math
from dataclasses import dataclass
from itertools import product

import numpy as np

import constants
import data_manager
from exceptions import ConfigurationError, DomainError


@dataclass(frozen=True)
class GaussianPrimitive:
    exponent: float  # bohr^-2
    coefficient: float  # poids de contraction de la primitive normalisée

    def __post_init__(self):
        if not math.isfinite(self.exponent) or self.exponent <= 0:
            raise DomainError(f"Exposant gaussien invalide : {self.exponent}")
        if not math.isfinite(self.coefficient):
            raise DomainError(f"Coefficient de contraction invalide : {self.coefficient}")


@dataclass(frozen=True)
class ContractedShell:
    center: tuple
    primitives: tuple

    def __post_init__(self):
        if not self.primitives:
            raise ConfigurationError("Une couche contractée doit contenir au moins une primitive.")

    def self_overlap(self):
        total = 0.0
        for pi, pj in product(self.primitives, repeat=2):
            total += pi.coefficient * pj.coefficient * overlap_s(
                pi.exponent, self.center, pj.exponent, self.center
            )
        return total

    def normalized(self):
        """Renvoie la couche renormalisée à un recouvrement propre égal à 1."""
        scale = 1.0 / math.sqrt(self.self_overlap())
        prims = tuple(GaussianPrimitive(p.exponent, p.coefficient * scale) for p in self.primitives)
        return ContractedShell(self.center, prims)


@dataclass(frozen=True)
class BasisSet:
    """Base de l'hydrogène : une table de primitives par fonction contractée."""

    name: str
    shells: tuple

    @property
    def functions_per_atom(self):
        return len(self.shells)

    def shells_at(self, center):
        """Couches contractées (renormalisées) centrées sur ``center`` (bohr)."""
        center = tuple(float(c) for c in center)
        return [ContractedShell(center, tuple(table)).normalized() for table in self.shells]


@dataclass(frozen=True)
class IntegralSet:
    S: np.ndarray
    T: np.ndarray
    V: np.ndarray
    eri: np.ndarray  # convention des chimistes (pq|rs)
    e_nn: float

    @property
    def n_ao(self):
        return self.S.shape[0]

    @property
    def h_core(self):
        return self.T + self.V


def load_basis(name):
    """Construit un ``BasisSet`` à partir de la table embarquée ``name``."""
    key = str(name).lower()
    if key not in constants.BASIS_FILES:
        raise ConfigurationError(
            f"Base inconnue '{name}'. Bases disponibles : {', '.join(sorted(constants.BASIS_FILES))}"
        )
    tables = data_manager.charger_table_base(constants.BASIS_FILES[key])
    shells = tuple(
        tuple(GaussianPrimitive(exponent, coefficient) for exponent, coefficient in table)
        for table in tables
    )
    return BasisSet(key, shells)


# === Fonction de Boys d'ordre 0 ===
def boys_f0(t):
    """F0(t) = intégrale de exp(-t u^2) pour u dans [0, 1].

    Série à termes positifs sous ``constants.BOYS_SWITCH``, forme fermée en erf au-delà.
    """
    t = float(t)
    if not math.isfinite(t) or t < 0:
        raise DomainError(f"boys_f0 n'est définie que pour t >= 0 fini (reçu {t})")
    if t >= constants.BOYS_SWITCH:
        return 0.5 * math.sqrt(math.pi / t) * math.erf(math.sqrt(t))
    term = 1.0
    total = 1.0
    k = 0
    while term > 1e-17 * total:
        k += 1
        term *= 2.0 * t / (2 * k + 1)
        total += term
    return math.exp(-t) * total


# === Intégrales entre primitives s normalisées ===
def _check_exponents(*exponents):
    for e in exponents:
        if not math.isfinite(e) or e <= 0:
            raise DomainError(f"Les exposants doivent être strictement positifs (reçu {e})")


def _norm(a):
    return (2.0 * a / math.pi) ** 0.75


def _dist2(A, B):
    return float(np.sum((np.asarray(A, dtype=float) - np.asarray(B, dtype=float)) ** 2))


def _gaussian_product_center(a, A, b, B):
    return (a * np.asarray(A, dtype=float) + b * np.asarray(B, dtype=float)) / (a + b)


def overlap_s(a, A, b, B):
    _check_exponents(a, b)
    p = a + b
    mu = a * b / p
    return _norm(a) * _norm(b) * (math.pi / p) ** 1.5 * math.exp(-mu * _dist2(A, B))


def kinetic_s(a, A, b, B):
    _check_exponents(a, b)
    mu = a * b / (a + b)
    return mu * (3.0 - 2.0 * mu * _dist2(A, B)) * overlap_s(a, A, b, B)


def nuclear_s(a, A, b, B, C, Z):
    """Attraction -Z <a| 1/|r - C| |b> ; toujours négative."""
    _check_exponents(a, b)
    if not Z > 0:
        raise DomainError(f"La charge nucléaire doit être positive (reçu {Z})")
    p = a + b
    mu = a * b / p
    P = _gaussian_product_center(a, A, b, B)
    prefactor = _norm(a) * _norm(b) * 2.0 * math.pi / p * math.exp(-mu * _dist2(A, B))
    return -Z * prefactor * boys_f0(p * _dist2(P, C))


def eri_s(a, A, b, B, c, C, d, D):
    """Intégrale de répulsion (ab|cd), convention des chimistes."""
    _check_exponents(a, b, c, d)
    p = a + b
    q = c + d
    P = _gaussian_product_center(a, A, b, B)
    Q = _gaussian_product_center(c, C, d, D)
    norms = _norm(a) * _norm(b) * _norm(c) * _norm(d)
    prefactor = 2.0 * math.pi ** 2.5 / (p * q * math.sqrt(p + q))
    gauss = math.exp(-a * b / p * _dist2(A, B) - c * d / q * _dist2(C, D))
    return norms * prefactor * gauss * boys_f0(p * q / (p + q) * _dist2(P, Q))


# === Assemblage sur les fonctions contractées ===
def _contract(shells, indices, primitive_integral):
    total = 0.0
    for prims in product(*(shells[i].primitives for i in indices)):
        weight = 1.0
        args = []
        for prim, i in zip(prims, indices):
            weight *= prim.coefficient
            args += [prim.exponent, shells[i].center]
        total += weight * primitive_integral(*args)
    return total


def compute_integrals(shells, nuclei):
    """Intégrales contractées pour des couches et des noyaux quelconques.

    Args:
        shells (list): couches ``ContractedShell`` normalisées.
        nuclei (list): paires (centre en bohr, charge).

    Returns:
        IntegralSet: la répulsion nucléaire est calculée à partir de ``nuclei``.
    """
    k = len(shells)
    S = np.zeros((k, k))
    T = np.zeros((k, k))
    V = np.zeros((k, k))
    for i in range(k):
        for j in range(i + 1):
            S[i, j] = S[j, i] = _contract(shells, (i, j), overlap_s)
            T[i, j] = T[j, i] = _contract(shells, (i, j), kinetic_s)
            v = 0.0
            for C, Z in nuclei:
                v += _contract(
                    shells, (i, j), lambda a, A, b, B, C=C, Z=Z: nuclear_s(a, A, b, B, C, Z)
                )
            V[i, j] = V[j, i] = v

    eri = np.zeros((k, k, k, k))
    for p, q, r, s in product(range(k), repeat=4):
        pq = p * (p + 1) // 2 + q
        rs = r * (r + 1) // 2 + s
        if q > p or s > r or rs > pq:
            continue
        value = _contract(shells, (p, q, r, s), eri_s)
        for i, j, m, n in (
            (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
            (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
        ):
            eri[i, j, m, n] = value

    e_nn = 0.0
    for i, (ci, zi) in enumerate(nuclei):
        for cj, zj in nuclei[:i]:
            e_nn += zi * zj / math.sqrt(_dist2(ci, cj))
    return IntegralSet(S=S, T=T, V=V, eri=eri, e_nn=e_nn)


def assemble_integrals(ell, basis=constants.DEFAULT_BASIS):
    """Intégrales de H2 à la distance ``ell`` (Å) dans la base ``basis``.

    Args:
        ell (float): distance interatomique en ångström.
        basis (str | BasisSet): nom de base ("sto-3g", "6-31g") ou base déjà chargée.

    Returns:
        IntegralSet: S, T, V, (pq|rs) et E_nn = 1/ℓ (bohr).
    """
    if not math.isfinite(ell) or ell <= 0:
        raise DomainError(f"La distance interatomique doit être positive (reçu {ell} Å)")
    if not isinstance(basis, BasisSet):
        basis = load_basis(basis)
    half = 0.5 * ell * constants.ANGSTROM_TO_BOHR
    centers = [(0.0, 0.0, -half), (0.0, 0.0, half)]
    shells = [shell for c in centers for shell in basis.shells_at(c)]
    nuclei = [(c, constants.HYDROGEN_CHARGE) for c in centers]
    return compute_integrals(shells, nuclei)
