import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from functools import partial

import numpy as np
import pandas as pd

import constants
import gaussian_integrals
import magic_measures
import majorana_wigner
import scf_fci
from exceptions import BoundaryPeakError, ContractError, DomainError, H2MagicError, ScanPointError

logger = logging.getLogger(__name__)

PROXIES = ("s2", "fs2", "mana")


@dataclass(frozen=True)
class ScanPoint:
    ell: float  # Å
    e_total: float  # hartree
    e_binding: float
    theta: float  # rad
    two_det_weight: float
    s2: float
    fs2: float
    mana: float
    e_hf: float = math.nan
    purity: float = math.nan  # somme des W^2


@dataclass
class ScanSeries:
    basis: str
    e_asymptote: float  # 2 E_H
    step: float
    points: list = field(default_factory=list)

    def __len__(self):
        return len(self.points)

    def column(self, name):
        return np.array([getattr(p, name) for p in self.points], dtype=float)

    @property
    def ell(self):
        return self.column("ell")

    def to_frame(self, analysis=None):
        """Tableau pandas du balayage ; d2e et kappa viennent de l'analyse de courbure."""
        frame = pd.DataFrame([asdict(p) for p in self.points])
        frame = frame.rename(
            columns={
                "ell": "ell_angstrom",
                "e_total": "e_total_hartree",
                "e_binding": "e_binding_hartree",
                "theta": "theta_rad",
            }
        )
        if analysis is None and len(self) >= constants.MIN_SCAN_POINTS:
            analysis = curvature_analysis(self)
        frame["d2e"] = analysis.d2 if analysis is not None else np.nan
        frame["kappa"] = analysis.kappa if analysis is not None else np.nan
        return frame


@dataclass(frozen=True)
class CurvatureAnalysis:
    d1: np.ndarray  # hartree/Å
    d2: np.ndarray  # hartree/Å^2
    kappa: np.ndarray
    ell_star: float
    ell_star_d2: float  # extremum de |E''| sur la même branche
    ell_kappa_global: float
    ell_equilibrium: float
    ell_magic: dict
    magic_index: dict
    peak_values: dict
    basis: str = ""
    grid: tuple = ()
    theta_peak: float = None

    def summary_records(self):
        """Enregistrements du résumé texte, dans un ordre stable."""
        ell_min, ell_max, step, n = self.grid
        records = {
            "basis": self.basis,
            "ell_min": ell_min,
            "ell_max": ell_max,
            "step": step,
            "n_points": n,
            "ell_star": self.ell_star,
            "ell_star_d2": self.ell_star_d2,
            "ell_kappa_global": self.ell_kappa_global,
            "ell_equilibrium": self.ell_equilibrium,
        }
        for proxy in PROXIES:
            records[f"ell_magic_{proxy}"] = self.ell_magic[proxy]
        records["theta_at_peak"] = self.theta_peak if self.theta_peak is not None else "indéfini"
        for proxy in PROXIES:
            records[f"peak_{proxy}"] = self.peak_values[proxy]
        return records


# === Calcul d'un point ===
def compute_point(ell, basis=constants.DEFAULT_BASIS, e_asymptote=None, alphas=constants.DEFAULT_ALPHAS):
    """Chaîne complète pour une géométrie : intégrales, SCF, FCI, Wigner, magie.

    Toute erreur est ré-émise en ``ScanPointError`` portant la distance fautive.
    """
    alphas = tuple(sorted(set(float(a) for a in alphas) | {2.0}))
    try:
        if e_asymptote is None:
            e_asymptote = 2.0 * scf_fci.atomic_asymptote(basis)
        integrals = gaussian_integrals.assemble_integrals(ell, basis)
        scf = scf_fci.rhf_scf(integrals)
        state = scf_fci.fci_ground_state(integrals, scf)
        spectrum = majorana_wigner.wigner_spectrum(state.fock_vector)
        report = magic_measures.magic_report(spectrum, alphas)
    except H2MagicError as e:
        raise ScanPointError(ell, e) from e
    logger.debug("ℓ = %.4f Å : E = %.10f, θ = %.6f", ell, state.energy, state.theta)
    point = ScanPoint(
        ell=float(ell),
        e_total=state.energy,
        e_binding=state.energy - e_asymptote,
        theta=state.theta,
        two_det_weight=state.two_det_weight,
        s2=report.sre[2.0],
        fs2=report.filtered_sre[2.0],
        mana=report.mana,
        e_hf=scf.scf_energy,
        purity=float(np.sum(spectrum.values ** 2)),
    )
    return point, state, report, spectrum


def _scan_point(ell, basis, e_asymptote):
    return compute_point(ell, basis, e_asymptote)[0]


def scan_grid(ell_min, ell_max, step):
    if not (0 < ell_min < ell_max) or not step > 0:
        raise DomainError(f"Grille invalide : [{ell_min}, {ell_max}] pas {step}")
    n = int(math.floor((ell_max - ell_min) / step + 1e-9)) + 1
    return np.round(ell_min + step * np.arange(n), 12)


def run_scan(basis=constants.DEFAULT_BASIS, ell_min=constants.DEFAULT_RMIN, ell_max=constants.DEFAULT_RMAX,
             step=constants.DEFAULT_STEP, workers=1):
    """Balayage de dissociation sur une grille uniforme.

    Args:
        basis (str): nom de la base.
        ell_min, ell_max, step (float): grille en ångström.
        workers (int): nombre de processus ; 1 = calcul séquentiel.

    Returns:
        ScanSeries: un ScanPoint par distance, dans l'ordre croissant.
    """
    grid = scan_grid(ell_min, ell_max, step)
    basis_name = basis.name if isinstance(basis, gaussian_integrals.BasisSet) else str(basis).lower()
    e_asymptote = 2.0 * scf_fci.atomic_asymptote(basis_name)
    logger.info("Balayage %s : %d points de %.3f à %.3f Å", basis_name, len(grid), grid[0], grid[-1])
    task = partial(_scan_point, basis=basis_name, e_asymptote=e_asymptote)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = list(pool.map(task, grid))
    else:
        points = [task(ell) for ell in grid]
    return ScanSeries(basis=basis_name, e_asymptote=e_asymptote, step=float(step), points=points)


# === Dérivées et courbure ===
def finite_differences(y, h):
    """Dérivées première et seconde : 5 points centrés, formules décentrées sur les bords."""
    y = np.asarray(y, dtype=float)
    n = len(y)
    d1 = np.empty(n)
    d2 = np.empty(n)
    d1[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * h)
    d2[2:-2] = (-y[4:] + 16 * y[3:-1] - 30 * y[2:-2] + 16 * y[1:-3] - y[:-4]) / (12 * h * h)
    for i, sgn in ((0, 1), (n - 1, -1)):
        d1[i] = sgn * (-3 * y[i] + 4 * y[i + sgn] - y[i + 2 * sgn]) / (2 * h)
        d2[i] = (2 * y[i] - 5 * y[i + sgn] + 4 * y[i + 2 * sgn] - y[i + 3 * sgn]) / (h * h)
    for i in (1, n - 2):
        d1[i] = (y[i + 1] - y[i - 1]) / (2 * h)
        d2[i] = (y[i + 1] - 2 * y[i] + y[i - 1]) / (h * h)
    return d1, d2


def _refine(x, y, i, maximum=True):
    """Sommet de la parabole passant par les points i-1, i, i+1."""
    if i <= 0 or i >= len(y) - 1:
        return float(x[i])
    denom = y[i - 1] - 2 * y[i] + y[i + 1]
    if (maximum and denom >= 0) or (not maximum and denom <= 0):
        return float(x[i])
    delta = 0.5 * (y[i - 1] - y[i + 1]) / denom
    return float(x[i] + delta * (x[i + 1] - x[i]))


def _argmax_on(values, indices):
    # np.argmax garde la première occurrence : égalité tranchée vers le plus petit ℓ
    return int(indices[np.argmax(values[indices])])


def equilibrium_distance(series):
    e = series.column("e_binding")
    interior = np.arange(constants.EDGE_POINTS, len(series) - constants.EDGE_POINTS)
    i = _argmax_on(-e, interior)
    return _refine(series.ell, e, i, maximum=False)


def curvature_analysis(series):
    """Courbure extrinsèque κ = |E''| / (1 + E'^2)^{3/2} de l'énergie de liaison (hartree, Å).

    ``ell_star`` est le maximum de κ sur la branche concave (E'' < 0) des points
    intérieurs, ou sur tous les points intérieurs si cette branche est vide.
    """
    n = len(series)
    if n < constants.MIN_SCAN_POINTS:
        raise ContractError(f"Au moins {constants.MIN_SCAN_POINTS} points sont nécessaires (reçu {n})")
    ell = series.ell
    h = series.step
    d1, d2 = finite_differences(series.column("e_binding"), h)
    kappa = np.abs(d2) / (1.0 + d1 ** 2) ** 1.5

    interior = np.arange(constants.EDGE_POINTS, n - constants.EDGE_POINTS)
    concave = interior[d2[interior] < 0]
    branch = concave if len(concave) else interior
    i_star = _argmax_on(kappa, branch)
    i_d2 = _argmax_on(np.abs(d2), branch)
    i_global = _argmax_on(kappa, interior)

    ell_magic, magic_index, peak_values = {}, {}, {}
    for proxy in PROXIES:
        y = series.column(proxy)
        i = _argmax_on(y, interior)
        magic_index[proxy] = i
        ell_magic[proxy] = _refine(ell, y, i)
        peak_values[proxy] = float(y[i])

    analysis = CurvatureAnalysis(
        d1=d1,
        d2=d2,
        kappa=kappa,
        ell_star=_refine(ell, kappa, i_star),
        ell_star_d2=_refine(ell, np.abs(d2), i_d2),
        ell_kappa_global=_refine(ell, kappa, i_global),
        ell_equilibrium=equilibrium_distance(series),
        ell_magic=ell_magic,
        magic_index=magic_index,
        peak_values=peak_values,
        basis=series.basis,
        grid=(float(ell[0]), float(ell[-1]), float(h), n),
    )
    try:
        analysis = replace(analysis, theta_peak=theta_at_peak(series, analysis))
    except BoundaryPeakError as e:
        logger.warning("θ au pic non défini : %s", e)
    return analysis


def theta_at_peak(series, analysis, proxy="s2"):
    """θ interpolé linéairement à la position du pic de magie."""
    i = analysis.magic_index[proxy]
    if i <= constants.EDGE_POINTS or i >= len(series) - 1 - constants.EDGE_POINTS:
        raise BoundaryPeakError(f"Le maximum de {proxy} est au bord de la grille (ℓ = {series.ell[i]:.4f} Å)")
    return float(np.interp(analysis.ell_magic[proxy], series.ell, series.column("theta")))
