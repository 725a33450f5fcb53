import argparse
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

# Import constants
import constants

# Import data management functions
import data_manager

# Import computation modules
import gate_utils
import magic_measures
import majorana_wigner
import plot_components
import scan_logic
from exceptions import H2MagicError, UsageError

logger = logging.getLogger("h2_magie")


@dataclass
class RunConfig:
    command: str
    basis: str = constants.DEFAULT_BASIS
    rmin: float = constants.DEFAULT_RMIN
    rmax: float = constants.DEFAULT_RMAX
    step: float = constants.DEFAULT_STEP
    r: float = None
    thetas: list = field(default_factory=list)
    theta: float = constants.DEFAULT_GATE_THETA
    alphas: tuple = constants.DEFAULT_ALPHAS
    out: str = "scan.csv"
    summary: str = "scan_summary.txt"
    svg: str = None
    workers: int = 1
    verbose: bool = False


class _Parser(argparse.ArgumentParser):
    """argparse lève SystemExit ; on remonte une UsageError pour garder les codes de sortie."""

    def error(self, message):
        raise UsageError(f"{self.prog} : {message}")


def _build_parser():
    parser = _Parser(prog="app.py", description="Magie fermionique de H2 le long de la dissociation.")
    parser.add_argument("-v", "--verbose", action="store_true", help="journal détaillé")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    scan = sub.add_parser("scan", help="balayage de la distance interatomique")
    scan.add_argument("--basis", default=constants.DEFAULT_BASIS, choices=sorted(constants.BASIS_FILES))
    scan.add_argument("--rmin", type=float, default=constants.DEFAULT_RMIN, help="Å")
    scan.add_argument("--rmax", type=float, default=constants.DEFAULT_RMAX, help="Å")
    scan.add_argument("--step", type=float, default=constants.DEFAULT_STEP, help="Å")
    scan.add_argument("--out", default="scan.csv", help="fichier CSV")
    scan.add_argument("--summary", default="scan_summary.txt", help="résumé clé: valeur")
    scan.add_argument("--svg", default=None, help="figure SVG (optionnelle)")
    scan.add_argument("--workers", type=int, default=1, help="processus parallèles")

    point = sub.add_parser("point", help="analyse complète d'une géométrie")
    point.add_argument("--r", type=float, required=True, help="distance interatomique (Å)")
    point.add_argument("--basis", default=constants.DEFAULT_BASIS, choices=sorted(constants.BASIS_FILES))
    point.add_argument("--alphas", type=float, nargs="+", default=list(constants.DEFAULT_ALPHAS))

    analytic = sub.add_parser("analytic", help="formes fermées S2, FS2 et mana en fonction de θ")
    analytic.add_argument("--thetas", type=float, nargs="+", required=True, help="angles (rad)")

    gates = sub.add_parser("verify-gates", help="U(θ), identité de rotation et conjugaison vers T")
    gates.add_argument("--theta", type=float, default=constants.DEFAULT_GATE_THETA, help="rad")
    return parser


def parse_args(argv):
    """Analyse stricte de la ligne de commande.

    Returns:
        RunConfig: configuration validée.

    Raises:
        UsageError: option inconnue, valeur manquante ou plage incohérente.
    """
    args = _build_parser().parse_args(argv)
    config = RunConfig(command=args.command, verbose=args.verbose)
    for name in ("basis", "rmin", "rmax", "step", "out", "summary", "svg", "workers", "r", "thetas", "theta"):
        if hasattr(args, name):
            setattr(config, name, getattr(args, name))
    if hasattr(args, "alphas"):
        config.alphas = tuple(args.alphas)

    if config.command == "scan":
        if not (config.rmin > 0 and config.rmax > 0):
            raise UsageError("Les distances doivent être positives.")
        if not config.rmin < config.rmax:
            raise UsageError(f"--rmin ({config.rmin}) doit être inférieur à --rmax ({config.rmax}).")
        if not config.step > 0:
            raise UsageError("--step doit être strictement positif.")
        if config.workers < 1:
            raise UsageError("--workers doit valoir au moins 1.")
    if config.command == "point" and not config.r > 0:
        raise UsageError("--r doit être strictement positif.")
    if config.command == "point" and any(a <= 0 or a == 1 for a in config.alphas):
        raise UsageError("Les ordres α doivent être positifs et différents de 1.")
    if config.command == "analytic" and not all(math.isfinite(t) for t in config.thetas):
        raise UsageError("Les angles doivent être finis.")
    return config


# === Sous-commandes ===
def _run_scan(config):
    series = scan_logic.run_scan(config.basis, config.rmin, config.rmax, config.step, workers=config.workers)
    analysis = scan_logic.curvature_analysis(series)
    data_manager.write_csv(series, config.out, analysis)
    data_manager.write_summary(analysis, config.summary)
    if config.svg:
        plot_components.render_svg(series, analysis, config.svg)
    for cle, valeur in analysis.summary_records().items():
        print(f"{cle}: {valeur}")
    print(f"📈 Balayage terminé : {len(series)} points écrits dans {config.out}")


def _run_point(config):
    point, state, report, spectrum = scan_logic.compute_point(config.r, config.basis, alphas=config.alphas)
    print(f"ℓ = {point.ell} Å, base {config.basis}")
    print(f"E_HF  = {point.e_hf:.10f} hartree")
    print(f"E_FCI = {point.e_total:.10f} hartree (liaison {point.e_binding:.10f})")
    print(f"θ = {point.theta:.8f} rad, poids des deux déterminants = {point.two_det_weight:.8f}")
    print(f"mana = {report.mana:.10f}")
    for alpha in sorted(report.sre):
        print(f"S_{alpha:g} = {report.sre[alpha]:.10f}   FS_{alpha:g} = {report.filtered_sre[alpha]:.10f}")
    print(f"Σ W² = {point.purity:.10f} (2^n = {spectrum.dimension})")
    if state.n_modes == 4:
        structure = majorana_wigner.spectrum_structure(spectrum, point.theta)
        print(f"support = {structure['support']}, valeurs non nulles = {structure['nonzero']}, "
              f"classes = {structure['classes']}")


def _run_analytic(config):
    print("theta_rad,s2,fs2,mana")
    for theta in config.thetas:
        print(
            f"{theta:.12g},{magic_measures.analytic_s2_theta(theta):.12g},"
            f"{magic_measures.analytic_fs2_theta(theta):.12g},{magic_measures.analytic_mana_theta(theta):.12g}"
        )


def _run_gates(config):
    view = gate_utils.qubit_unitary(config.theta)
    sign = gate_utils.rotation_identity_check(config.theta)
    clifford_hits, pauli_hits = gate_utils.conjugation_search(view.u_matrix)
    with np.printoptions(precision=6, suppress=True):
        print(f"U(θ = {config.theta:.8f}) =\n{view.u_matrix}")
    print(f"R_x(sπ/2) R_z(2θ) R_x(-sπ/2) = R_y(2θ) avec s = {sign:+d}")
    print(f"Clifford conjuguant U vers T/T† : {len(clifford_hits)}")
    for name, target, phase in clifford_hits:
        print(f"  {name} -> {target} (phase {phase:.6f})")
    print(f"Pauli conjuguant U vers T/T† : {len(pauli_hits)}")
    for name, target, phase in pauli_hits:
        print(f"  {name} -> {target} (phase {phase:.6f})")


HANDLERS = {"scan": _run_scan, "point": _run_point, "analytic": _run_analytic, "verify-gates": _run_gates}


def main(argv=None):
    """Point d'entrée : 0 en cas de succès, sinon le code de sortie de l'erreur."""
    try:
        config = parse_args(sys.argv[1:] if argv is None else argv)
        logging.basicConfig(
            level=logging.DEBUG if config.verbose else logging.INFO,
            format="%(asctime)s %(levelname)s %(name)s : %(message)s",
        )
        HANDLERS[config.command](config)
    except H2MagicError as e:
        logger.error("❌ %s", e)
        return e.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
