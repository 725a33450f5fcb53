import logging
import os
from functools import lru_cache

import pandas as pd

import constants
from exceptions import ConfigurationError, ContractError, OutputError

logger = logging.getLogger(__name__)


# Helper function to read text files safely
def _load_text_file(filepath):
    """Lit un fichier texte ou lève ``ConfigurationError`` s'il est absent ou illisible."""
    if not os.path.exists(filepath):
        raise ConfigurationError(f"Le fichier {filepath} n'existe pas.")
    try:
        with open(filepath, "r", encoding="utf-8") as f:
            return f.read()
    except (OSError, UnicodeDecodeError) as e:
        raise ConfigurationError(f"Erreur de lecture du fichier {filepath} : {e}") from e


# === Tables de bases gaussiennes ===
@lru_cache(maxsize=None)
def charger_table_base(filepath):
    """Charge une table de base au format texte.

    Format : lignes ``H <n_couches>`` puis, pour chaque couche, ``shell <n_prim>``
    suivie de ``n_prim`` lignes ``<exposant> <coefficient>`` en décimal fixe.
    Les lignes vides et celles qui commencent par ``#`` sont ignorées.

    Returns:
        tuple: une table par fonction contractée, chaque table étant un tuple
        de paires (exposant, coefficient).
    """
    lignes = [
        ligne.split()
        for ligne in _load_text_file(filepath).splitlines()
        if ligne.strip() and not ligne.lstrip().startswith("#")
    ]
    try:
        entete = lignes.pop(0)
        if entete[0] != "H" or len(entete) != 2:
            raise ValueError(f"en-tête attendu 'H <n_couches>', lu {' '.join(entete)}")
        tables = []
        for _ in range(int(entete[1])):
            couche = lignes.pop(0)
            if couche[0] != "shell" or len(couche) != 2:
                raise ValueError(f"ligne 'shell <n_prim>' attendue, lu {' '.join(couche)}")
            table = []
            for _ in range(int(couche[1])):
                exposant, coefficient = lignes.pop(0)
                table.append((float(exposant), float(coefficient)))
            tables.append(tuple(table))
        if lignes:
            raise ValueError(f"{len(lignes)} ligne(s) en trop en fin de fichier")
    except (IndexError, ValueError) as e:
        raise ConfigurationError(f"Fichier de base mal formé {filepath} : {e}") from e
    logger.debug("Base %s chargée : %d couche(s)", filepath, len(tables))
    return tuple(tables)


# === Tableau du balayage (CSV) ===
def write_csv(series, path, analysis=None):
    """Écrit le balayage en CSV (12 chiffres significatifs, octets reproductibles).

    Args:
        series (ScanSeries): balayage à écrire ; doit fournir ``to_frame``.
        path (str): fichier de sortie.
        analysis (CurvatureAnalysis, optional): fournit les colonnes d2e et kappa.
    """
    if series is None or len(series) == 0:
        raise ContractError("Aucun point de balayage à écrire.")
    frame = series.to_frame(analysis)[constants.CSV_COLUMNS]
    try:
        frame.to_csv(path, index=False, float_format=constants.CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise OutputError(path, e) from e
    logger.info("Balayage écrit dans %s (%d lignes)", path, len(frame))


def read_csv(path):
    """Relit un CSV écrit par ``write_csv`` (analyse décimale exacte)."""
    try:
        return pd.read_csv(path, float_precision="round_trip")
    except OSError as e:
        raise OutputError(path, e) from e


# === Résumé clé: valeur ===
def _format_value(value):
    if isinstance(value, float):
        return constants.CSV_FLOAT_FORMAT % value
    return str(value)


def write_summary(analysis, path):
    """Écrit le résumé de l'analyse, un enregistrement ``clé: valeur`` par ligne."""
    if analysis is None:
        raise ContractError("Résumé demandé sans analyse de courbure.")
    lignes = [f"{cle}: {_format_value(valeur)}" for cle, valeur in analysis.summary_records().items()]
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(lignes) + "\n")
    except OSError as e:
        raise OutputError(path, e) from e
    logger.info("Résumé écrit dans %s", path)


def read_summary(path):
    """Relit un résumé : les valeurs numériques sont converties en float."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            contenu = f.read()
    except OSError as e:
        raise OutputError(path, e) from e
    records = {}
    for ligne in contenu.splitlines():
        if not ligne.strip():
            continue
        cle, _, valeur = ligne.partition(": ")
        try:
            records[cle] = float(valeur)
        except ValueError:
            records[cle] = valeur
    return records
