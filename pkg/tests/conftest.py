import os
import sys

import numpy as np
import pytest

# Les modules de l'application sont à la racine du dépôt
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import gaussian_integrals  # noqa: E402
import scf_fci  # noqa: E402
from scan_logic import ScanPoint, ScanSeries  # noqa: E402

EQUILIBRIUM_ANGSTROM = 0.7414


@pytest.fixture(scope="session")
def sto3g_integrals():
    return gaussian_integrals.assemble_integrals(EQUILIBRIUM_ANGSTROM, "sto-3g")


@pytest.fixture(scope="session")
def sto3g_scf(sto3g_integrals):
    return scf_fci.rhf_scf(sto3g_integrals)


@pytest.fixture
def make_series():
    """Fabrique un ScanSeries synthétique à partir de tableaux (les colonnes absentes valent 0)."""

    def _make(ell, e_binding, theta=None, s2=None, fs2=None, mana=None, basis="synthetique"):
        ell = np.asarray(ell, dtype=float)
        n = len(ell)
        zeros = np.zeros(n)
        theta = zeros if theta is None else np.asarray(theta, dtype=float)
        s2 = zeros if s2 is None else np.asarray(s2, dtype=float)
        fs2 = s2 if fs2 is None else np.asarray(fs2, dtype=float)
        mana = s2 if mana is None else np.asarray(mana, dtype=float)
        points = [
            ScanPoint(
                ell=float(ell[i]),
                e_total=float(e_binding[i]),
                e_binding=float(e_binding[i]),
                theta=float(theta[i]),
                two_det_weight=1.0,
                s2=float(s2[i]),
                fs2=float(fs2[i]),
                mana=float(mana[i]),
            )
            for i in range(n)
        ]
        return ScanSeries(basis=basis, e_asymptote=0.0, step=float(ell[1] - ell[0]), points=points)

    return _make
