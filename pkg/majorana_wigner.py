"""Chaînes de Majorana sur l'espace de Fock et fonction de Wigner fermionique.

Conventions :

* vecteur de Fock de longueur 2^n, le bit ``p`` de l'indice code l'occupation du mode ``p`` ;
* point de l'espace des phases ``v`` codé par un entier de 2n bits, le bit ``j``
  signalant la présence de la Majorana η_{j+1} ;
* η_{2p+1} = c_p + c_p^† et η_{2p+2} = i(c_p - c_p^†) (indices de Majorana à partir de 1,
  modes à partir de 0), c_p portant le signe (-1)^{modes occupés sous p} ;
* M_v = i^{v.Ωv} η_1^{v_1} ... η_{2n}^{v_{2n}}, Ω triangulaire inférieure stricte de uns.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

import constants
from exceptions import CapacityError, ConsistencyError, DomainError

logger = logging.getLogger(__name__)

_I_POWERS = np.array([1.0, 1j, -1.0, -1j])


@dataclass(frozen=True)
class MajoranaString:
    v: int
    n_modes: int

    def __post_init__(self):
        if not 0 <= self.v < 1 << (2 * self.n_modes):
            raise DomainError(f"Point {self.v} hors de l'espace des phases à {self.n_modes} modes")

    @property
    def weight(self):
        return bin(self.v).count("1")

    @property
    def phase_exponent(self):
        # v.Ωv = nombre de paires j > k avec v_j = v_k = 1
        w = self.weight
        return (w * (w - 1) // 2) % 4


@dataclass(frozen=True)
class WignerSpectrum:
    values: np.ndarray  # indexé par l'entier v
    n_modes: int

    def __len__(self):
        return len(self.values)

    @property
    def dimension(self):
        return 1 << self.n_modes


def phase_point(bits):
    """Entier associé à une suite binaire (v_1, ..., v_2n)."""
    return sum(1 << j for j, b in enumerate(bits) if b)


def _as_fock_vector(x):
    x = np.asarray(x, dtype=complex)
    n = x.size.bit_length() - 1
    if x.ndim != 1 or x.size != 1 << n:
        raise DomainError(f"Un vecteur de Fock doit avoir une longueur 2^n (reçu {x.shape})")
    if not np.all(np.isfinite(x)):
        raise DomainError("Amplitudes non finies dans le vecteur de Fock.")
    return x, n


@lru_cache(maxsize=None)
def _eta_tables(n_modes):
    """Pour chaque Majorana : permutation des indices et phase portée par chaque état source."""
    idx = np.arange(1 << n_modes)
    tables = []
    for p in range(n_modes):
        below = np.zeros_like(idx)
        for k in range(p):
            below += (idx >> k) & 1
        sign = 1 - 2 * (below % 2)
        occupied = (idx >> p) & 1
        perm = idx ^ (1 << p)
        tables.append((perm, sign.astype(complex)))  # c_p + c_p^†
        tables.append((perm, 1j * sign * (2 * occupied - 1)))  # i(c_p - c_p^†)
    return tables


def _apply_eta(j, x, n_modes):
    perm, phase = _eta_tables(n_modes)[j]
    return (phase * x)[..., perm]


def majorana_apply(v, x):
    """Calcule M_v x ; le facteur le plus à droite (indice le plus grand) agit en premier."""
    x, n = _as_fock_vector(x)
    string = MajoranaString(int(v), n)
    y = x.copy()
    for j in reversed(range(2 * n)):
        if (string.v >> j) & 1:
            y = _apply_eta(j, y, n)
    return _I_POWERS[string.phase_exponent] * y


def wigner_value(x, v):
    """W(v) = <x|M_v|x> ; une partie imaginaire résiduelle trahit une erreur de phase."""
    x, _ = _as_fock_vector(x)
    value = np.vdot(x, majorana_apply(v, x))
    if abs(value.imag) > constants.IMAG_TOL:
        raise ConsistencyError(f"W({v}) a une partie imaginaire {value.imag:.3e}")
    return float(value.real)


def _gray_walk(n_bits):
    """Suite (bit basculé, masque avant bascule) du code de Gray sur ``n_bits`` bits."""
    g = 0
    for k in range(1, 1 << n_bits):
        j = (k & -k).bit_length() - 1
        yield j, g
        g ^= 1 << j


def wigner_spectrum(x):
    """Fonction de Wigner sur les 2^{2n} points, rangée par valeur entière de v.

    Les chaînes sont appliquées par blocs : les Majorana d'indice >= n (facteurs de
    droite) puis celles d'indice < n, chaque moitié parcourue en code de Gray. Ajouter
    ou retirer η_j à gauche d'un produit trié coûte le signe (-1)^{#indices < j}.
    """
    x, n = _as_fock_vector(x)
    if n > constants.WIGNER_MAX_MODES:
        raise CapacityError(
            f"{n} modes : énumération exhaustive limitée à {constants.WIGNER_MAX_MODES} modes ; "
            "il faut un estimateur par échantillonnage."
        )
    n_high = 1 << n
    logger.debug("Spectre de Wigner : %d modes, %d points", n, 1 << (2 * n))

    # Lignes : η_{haut trié} x pour chaque masque haut
    block = np.empty((n_high, x.size), dtype=complex)
    current = x.copy()
    block[0] = current
    for j, g in _gray_walk(n):
        sign = -1.0 if bin(g & ((1 << j) - 1)).count("1") % 2 else 1.0
        current = sign * _apply_eta(j + n, current, n)
        block[g ^ (1 << j)] = current

    raw = np.empty(1 << (2 * n), dtype=complex)
    rows = np.arange(n_high) << n
    conj_x = np.conj(x)
    raw[rows] = block @ conj_x
    for j, g in _gray_walk(n):
        sign = -1.0 if bin(g & ((1 << j) - 1)).count("1") % 2 else 1.0
        block = sign * _apply_eta(j, block, n)
        raw[rows | (g ^ (1 << j))] = block @ conj_x

    points = np.arange(raw.size)
    weights = sum((points >> k) & 1 for k in range(2 * n))
    raw *= _I_POWERS[(weights * (weights - 1) // 2) % 4]
    residue = float(np.max(np.abs(raw.imag)))
    if residue > constants.IMAG_TOL:
        raise ConsistencyError(f"Spectre de Wigner non réel (résidu {residue:.3e})")
    return WignerSpectrum(values=raw.real.copy(), n_modes=n)


def lp_norm(w, p):
    """Norme L^p du spectre ; pour p = 1 la somme est renvoyée sans racine."""
    if not p > 0:
        raise DomainError(f"La norme L^p exige p > 0 (reçu {p})")
    total = float(np.sum(np.abs(w.values) ** p))
    return total if p == 1 else total ** (1.0 / p)


def exchange_mask(v, n_modes):
    """Modes dont l'occupation est basculée par M_v (une seule des deux Majorana du mode)."""
    mask = 0
    for p in range(n_modes):
        if ((v >> (2 * p)) & 1) != ((v >> (2 * p + 1)) & 1):
            mask |= 1 << p
    return mask


def spectrum_structure(w, theta, tol=1e-9):
    """Décompte des valeurs de W pour l'état cos θ|1100> + sin θ|0011> (4 modes).

    Le support est formé des 32 chaînes diagonales (masque 0) ou reliant les deux
    déterminants (masque 1111). Chaque valeur non nulle est rangée dans la première
    classe compatible parmi ±1, ±cos 2θ, ±sin 2θ.
    """
    if w.n_modes != 4:
        raise DomainError("Structure analysée uniquement pour la base minimale (4 modes).")
    full = (1 << w.n_modes) - 1
    support = [v for v in range(len(w)) if exchange_mask(v, w.n_modes) in (0, full)]
    targets = {"un": 1.0, "cos2theta": abs(np.cos(2 * theta)), "sin2theta": abs(np.sin(2 * theta))}
    classes = {name: 0 for name in targets}
    classes["zero"] = 0
    for v in support:
        value = abs(w.values[v])
        if value <= 1e-12:
            classes["zero"] += 1
            continue
        for name, target in targets.items():
            if abs(value - target) < tol:
                classes[name] += 1
                break
    return {
        "support": len(support),
        "nonzero": int(np.count_nonzero(np.abs(w.values) > 1e-12)),
        "classes": classes,
    }
