"""Lecture « qubit » de l'élongation de liaison : U(θ) = R_y(2θ) et porte T.

Convention : R_a(φ) = exp(-i φ σ_a / 2).
"""

import logging
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

import constants
from exceptions import ConsistencyError

logger = logging.getLogger(__name__)

IDENTITY = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
PHASE_S = np.array([[1, 0], [0, 1j]], dtype=complex)
T_GATE = np.array([[1, 0], [0, np.exp(1j * math.pi / 4)]], dtype=complex)
T_DAGGER = T_GATE.conj().T

PAULIS = {"I": IDENTITY, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}
TARGETS = {"T": T_GATE, "T†": T_DAGGER}


@dataclass(frozen=True)
class QubitView:
    theta: float
    u_matrix: np.ndarray
    conjugating_elements: list = field(default_factory=list)  # (élément, cible, phase)


def rotation(axis, phi):
    sigma = {"x": PAULI_X, "y": PAULI_Y, "z": PAULI_Z}[axis]
    return math.cos(phi / 2) * IDENTITY - 1j * math.sin(phi / 2) * sigma


def global_phase(A, B, tol=constants.GATE_TOL):
    """Phase e^{iφ} telle que A = e^{iφ} B à ``tol`` près (max des modules), sinon None.

    φ est lu sur le coefficient de B de plus grand module.
    """
    k = int(np.argmax(np.abs(B)))
    a, b = A.flat[k], B.flat[k]
    if abs(a) < tol:
        return None
    phase = (a / b) / abs(a / b)
    if np.max(np.abs(A - phase * B)) < tol:
        return phase
    return None


def _canonical(M):
    k = int(np.argmax(np.abs(M.flat) > 1e-6))
    z = M.flat[k]
    return M / (z / abs(z))


def clifford_group():
    """Les 24 éléments de Clifford à un qubit, engendrés par H et S, à une phase près.

    Returns:
        list: paires (mot en H et S, matrice canonique), l'identité en premier sous le nom "I".
    """
    elements = [("I", IDENTITY)]
    seen = {tuple(np.round(IDENTITY, 8).flat)}
    queue = deque(elements)
    while queue:
        word, M = queue.popleft()
        for name, gen in (("H", HADAMARD), ("S", PHASE_S)):
            product = _canonical(gen @ M)
            key = tuple(np.round(product, 8).flat)
            if key in seen:
                continue
            seen.add(key)
            item = (name if word == "I" else name + word, product)
            elements.append(item)
            queue.append(item)
    return elements


def qubit_unitary(theta):
    """U(θ) = R_y(2θ) = [[cos θ, -sin θ], [sin θ, cos θ]] et ses conjugaisons vers T ou T†."""
    u = np.array(
        [[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]], dtype=complex
    )
    clifford_hits, _ = conjugation_search(u)
    return QubitView(theta=float(theta), u_matrix=u, conjugating_elements=clifford_hits)


def rotation_identity_check(theta):
    """Signe s tel que R_x(sπ/2) R_z(2θ) R_x(-sπ/2) = R_y(2θ) à une phase près."""
    target = rotation("y", 2 * theta)
    hits = []
    for s in (1, -1):
        lhs = rotation("x", s * math.pi / 2) @ rotation("z", 2 * theta) @ rotation("x", -s * math.pi / 2)
        if global_phase(lhs, target, tol=constants.ROTATION_TOL) is not None:
            hits.append(s)
    if not hits:
        raise ConsistencyError(f"Identité de rotation violée pour θ = {theta}")
    if len(hits) == 2 and abs(math.sin(2 * theta)) > constants.ROTATION_TOL:
        raise ConsistencyError(f"Les deux signes vérifient l'identité pour θ = {theta}")
    return hits[0]


def _search(U, group):
    hits = []
    for name, C in group:
        M = C @ U @ C.conj().T
        for target_name, target in TARGETS.items():
            phase = global_phase(M, target)
            if phase is not None:
                hits.append((name, target_name, complex(phase)))
    return hits


def conjugation_search(U):
    """Éléments C (Clifford, puis Pauli) tels que C U C† soit proportionnel à T ou T†.

    Returns:
        tuple: (liste Clifford, liste Pauli) de triplets (élément, cible, phase).
    """
    U = np.asarray(U, dtype=complex)
    if np.max(np.abs(U.conj().T @ U - IDENTITY)) > constants.GATE_TOL:
        logger.warning("Matrice non unitaire transmise à conjugation_search")
    clifford_hits = _search(U, clifford_group())
    pauli_hits = _search(U, list(PAULIS.items()))
    return clifford_hits, pauli_hits
