import logging

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

import constants  # noqa: E402
from exceptions import ContractError, OutputError  # noqa: E402

logger = logging.getLogger(__name__)

# Couleurs des indicateurs de magie
COULEURS = {"s2": "#1f77b4", "fs2": "#2ca02c", "mana": "#d62728"}
LIBELLES = {"s2": "S₂", "fs2": "FS₂", "mana": "mana"}


def render_svg(series, analysis, path):
    """Trace les indicateurs de magie et l'énergie de liaison en fonction de ℓ.

    Une verticale en tirets marque ``analysis.ell_star`` ; les octets produits ne
    dépendent que des données (sel de hachage fixé, pas de date dans les métadonnées).

    Args:
        series (ScanSeries): balayage non vide.
        analysis (CurvatureAnalysis): analyse du même balayage.
        path (str): fichier SVG de sortie.
    """
    if series is None or len(series) == 0:
        raise ContractError("Aucun point à tracer.")
    ell = series.ell
    with plt.rc_context({"svg.hashsalt": constants.SVG_HASH_SALT, "svg.fonttype": "path"}):
        fig, ax = plt.subplots(figsize=(7, 4.5))
        for proxy in ("s2", "fs2", "mana"):
            ax.plot(ell, series.column(proxy), color=COULEURS[proxy], label=LIBELLES[proxy])
        ax.set_xlabel("ℓ (Å)")
        ax.set_ylabel("indicateurs de magie")

        ax_e = ax.twinx()
        ax_e.plot(ell, series.column("e_binding"), color="black", label="E liaison (FCI)")
        ax_e.set_ylabel("énergie de liaison (hartree)")

        ax.axvline(analysis.ell_star, color="grey", linestyle="--", linewidth=1.0)

        lignes = ax.get_lines()[:3] + ax_e.get_lines()
        ax.legend(lignes, [l.get_label() for l in lignes], loc="upper right", frameon=False)
        ax.set_title(f"H₂ / {series.basis.upper()}")
        fig.tight_layout()
        try:
            fig.savefig(path, format="svg", metadata={"Date": None})
        except OSError as e:
            raise OutputError(path, e) from e
        finally:
            plt.close(fig)
    logger.info("Figure écrite dans %s", path)
