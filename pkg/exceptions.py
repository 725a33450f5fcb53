"""Erreurs de l'application.

Chaque classe porte le code de sortie renvoyé par ``app.main`` :
2 pour une mauvaise utilisation, 3 pour un échec numérique, 4 pour une
erreur d'entrée/sortie.
"""


class H2MagicError(Exception):
    """Erreur de base du projet."""

    exit_code = 1


class ContractError(H2MagicError, ValueError):
    """Appel sans les données préalables requises (analyse absente, série vide...)."""


class UsageError(H2MagicError):
    exit_code = 2


class ConfigurationError(H2MagicError):
    """Base inconnue ou fichier de base mal formé."""

    exit_code = 2


class DomainError(H2MagicError, ValueError):
    """Argument numérique hors du domaine de définition."""

    exit_code = 3


class ConvergenceError(H2MagicError):
    """Itération (SCF, Jacobi) non convergée ; ``residual`` garde le dernier écart."""

    exit_code = 3

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ConsistencyError(H2MagicError):
    """Violation d'une identité qui doit tenir exactement (bug de phase ou de convention)."""

    exit_code = 3


class CapacityError(H2MagicError):
    exit_code = 3


class ScanPointError(H2MagicError):
    """Échec d'un point de balayage ; ``ell`` est la distance fautive (Å)."""

    exit_code = 3

    def __init__(self, ell, cause):
        super().__init__(f"Échec du calcul à ℓ = {ell:.6f} Å : {cause}")
        self.ell = ell
        self.cause = cause

    def __reduce__(self):
        # remontée depuis les processus du balayage parallèle
        return type(self), (self.ell, str(self.cause))


class OutputError(H2MagicError):
    exit_code = 4

    def __init__(self, path, cause):
        super().__init__(f"Impossible d'écrire {path} : {cause}")
        self.path = path
        self.cause = cause

    def __reduce__(self):
        return type(self), (self.path, str(self.cause))


class BoundaryPeakError(H2MagicError):
    """Maximum situé au bord de la grille : aucune interpolation possible."""

    exit_code = 3
