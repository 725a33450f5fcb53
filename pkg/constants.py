# constants.py

import os

# Base directory for data files (assuming constants.py is in the project root)
BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Tables de bases embarquées (format texte documenté dans data_manager)
BASIS_FILES = {
    "sto-3g": os.path.join(BASE_DIR, "sto-3g.basis"),
    "6-31g": os.path.join(BASE_DIR, "6-31g.basis"),
}

# --- Unités ---
ANGSTROM_TO_BOHR = 1.8897259886  # seul point de conversion Å -> bohr
HYDROGEN_CHARGE = 1.0

# --- Intégrales ---
BOYS_SWITCH = 12.0  # série pour t < 12, forme erf au-delà

# --- Hartree-Fock ---
SCF_MAX_ITER = 200
SCF_MIXING = 0.5  # mélange linéaire des densités
SCF_E_TOL = 1e-12
SCF_D_TOL = 1e-10  # max-abs sur la matrice densité

# --- Diagonalisation de Jacobi ---
JACOBI_TOL = 1e-14  # norme de Frobenius hors diagonale (relative à max(1, ||A||))
JACOBI_MAX_SWEEPS = 100
EIGEN_RESIDUAL_TOL = 1e-10
DEGENERACY_TOL = 1e-10

# --- Fonction de Wigner ---
WIGNER_MAX_MODES = 12  # 2^24 points x 2^12 amplitudes : limite pratique
IMAG_TOL = 1e-12
TWO_DET_WEIGHT_MIN = 0.99  # en dessous, l'ansatz à deux déterminants est signalé
FILTERED_PURITY_MIN = 1e-14

# --- Analyse des courbes ---
MIN_SCAN_POINTS = 7
EDGE_POINTS = 2  # points de bord exclus de la recherche de pics (différences décentrées)
GRID_TOL = 1e-12

# --- Portes à un qubit ---
GATE_TOL = 1e-10
ROTATION_TOL = 1e-12

# --- Valeurs par défaut de la ligne de commande ---
DEFAULT_BASIS = "sto-3g"
DEFAULT_RMIN = 0.3  # Å
DEFAULT_RMAX = 3.5  # Å
DEFAULT_STEP = 0.01  # Å
DEFAULT_ALPHAS = (2.0,)
DEFAULT_GATE_THETA = -0.39269908169872414  # -pi/8

# --- Fichiers de sortie ---
CSV_COLUMNS = [
    "ell_angstrom",
    "e_total_hartree",
    "e_binding_hartree",
    "theta_rad",
    "two_det_weight",
    "s2",
    "fs2",
    "mana",
    "d2e",
    "kappa",
]
CSV_FLOAT_FORMAT = "%.12g"  # 12 chiffres significatifs
SVG_HASH_SALT = "h2-magie"  # identifiants SVG reproductibles
