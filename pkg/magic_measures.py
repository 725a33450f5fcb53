"""Indicateurs de magie (non-stabilisateur) calculés sur un spectre de Wigner.

Les sommes sont normalisées par la dimension de Fock D = 2^n (n modes) et les
logarithmes sont naturels.
"""

import math
from dataclasses import dataclass, field

import numpy as np

import constants
from exceptions import DomainError
from majorana_wigner import lp_norm


@dataclass(frozen=True)
class MagicReport:
    mana: float
    sre: dict
    filtered_sre: dict
    norms_used: dict = field(default_factory=dict)
    n_modes: int = 0


def _check_alpha(alpha):
    if not alpha > 0 or not math.isfinite(alpha):
        raise DomainError(f"L'ordre de Rényi doit être positif (reçu {alpha})")
    if alpha == 1:
        raise DomainError("La limite α -> 1 n'est pas implémentée.")


def _filtered_values(w):
    # Retire l'identité (v = 0) et la parité (v = 1...1)
    return w.values[1:-1]


def mana(w):
    return math.log(lp_norm(w, 1) / w.dimension)


def sre(w, alpha):
    """Entropie de Rényi stabilisatrice d'ordre α (|W| dans la puissance 2α)."""
    _check_alpha(alpha)
    total = float(np.sum(np.abs(w.values) ** (2 * alpha)))
    return math.log(total / w.dimension) / (1.0 - alpha)


def filtered_sre(w, alpha):
    """Version filtrée, auto-normalisée par la pureté filtrée."""
    _check_alpha(alpha)
    values = np.abs(_filtered_values(w))
    purity = float(np.sum(values ** 2))
    if purity < constants.FILTERED_PURITY_MIN:
        raise DomainError(f"Pureté filtrée dégénérée ({purity:.3e}) : SRE filtrée indéfinie")
    return math.log(float(np.sum(values ** (2 * alpha))) / purity) / (1.0 - alpha)


def sre_spectrum(w, alphas=constants.DEFAULT_ALPHAS):
    return {float(a): sre(w, a) for a in alphas}


def magic_report(w, alphas=constants.DEFAULT_ALPHAS):
    """Regroupe mana, S_α et FS_α ainsi que les normes qui les ont produits."""
    norms = {"l1": lp_norm(w, 1)}
    filtered = np.abs(_filtered_values(w))
    norms["filtered_purity"] = float(np.sum(filtered ** 2))
    for a in alphas:
        norms[f"l{2 * a:g}^{2 * a:g}"] = float(np.sum(np.abs(w.values) ** (2 * a)))
        norms[f"filtered_l{2 * a:g}^{2 * a:g}"] = float(np.sum(filtered ** (2 * a)))
    return MagicReport(
        mana=mana(w),
        sre=sre_spectrum(w, alphas),
        filtered_sre={float(a): filtered_sre(w, a) for a in alphas},
        norms_used=norms,
        n_modes=w.n_modes,
    )


# === Formes fermées pour l'état à deux déterminants ===
def analytic_s2_theta(theta):
    return -math.log(1.0 - math.sin(4 * theta) ** 2 / 4.0)


def analytic_mana_theta(theta):
    return math.log((1.0 + abs(math.cos(2 * theta)) + abs(math.sin(2 * theta))) / 2.0)


def analytic_fs2_theta(theta):
    # identité et parité valent ±1 : il reste 6 valeurs ±1, 8 en cos 2θ et 8 en sin 2θ
    return -math.log(1.0 - 2.0 / 7.0 * math.sin(4 * theta) ** 2)


def two_determinant_state(theta, n_modes=4):
    """cos θ|1100> + sin θ|0011> plongé dans l'espace de Fock à ``n_modes`` modes."""
    x = np.zeros(1 << n_modes, dtype=complex)
    x[0b0011] = math.cos(theta)
    x[0b1100] = math.sin(theta)
    return x
