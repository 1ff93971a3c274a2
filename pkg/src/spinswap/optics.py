"""Linear optical elements in the {R, L} basis and spin-side single-qubit gates."""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .hilbert import HybridState, Pol, apply_photon_op, apply_spin_op, reroute

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

# rows: |+>, |->; columns: R, L.  Self-inverse.
PLUS_MINUS = HADAMARD
PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
MINUS = np.array([1, -1], dtype=complex) / np.sqrt(2)

PAULI = {
    "I2": IDENTITY,
    "X": SIGMA_X,
    "Z": SIGMA_Z,
    "ZX": SIGMA_Z @ SIGMA_X,
}


def phase_plate(alpha: float) -> np.ndarray:
    return np.exp(1j * alpha) * IDENTITY


def half_wave(beta: float) -> np.ndarray:
    c, s = np.cos(2 * beta), np.sin(2 * beta)
    return 1j * np.array([[c, s], [s, -c]], dtype=complex)


def quarter_wave(gamma: float) -> np.ndarray:
    c, s = np.cos(2 * gamma), np.sin(2 * gamma)
    return np.array([[1 + 1j * c, 1j * s], [1j * s, 1 - 1j * c]], dtype=complex) / np.sqrt(2)


def _check_root(m: int) -> None:
    if int(m) != m or m < 1:
        raise ValueError(f"root index m must be an integer >= 1, got {m!r}")


def s_gate(m: int) -> np.ndarray:
    _check_root(m)
    return np.diag([np.exp(1j * np.pi / m), 1.0]).astype(complex)


def s_prime_gate(m: int) -> np.ndarray:
    _check_root(m)
    return np.diag([1.0, -np.exp(1j * np.pi / m)]).astype(complex)


@dataclass(frozen=True)
class Plate:
    kind: str  # "P", "QWP" or "HWP"
    angle: float

    def matrix(self) -> np.ndarray:
        return {"P": phase_plate, "QWP": quarter_wave, "HWP": half_wave}[self.kind](self.angle)


def decompose_s(m: int) -> list[Plate]:
    """Plates realizing ``s_gate(m)``, in the order the photon meets them."""
    _check_root(m)
    return [
        Plate("P", (2 * m + 1) / (2 * m) * np.pi),
        Plate("QWP", np.pi / 4),
        Plate("HWP", (m + 1) / (4 * m) * np.pi),
        Plate("QWP", np.pi / 4),
    ]


def decompose_s_prime(m: int) -> list[Plate]:
    _check_root(m)
    return [
        Plate("P", (1 - m) / (2 * m) * np.pi),
        Plate("QWP", np.pi / 4),
        Plate("HWP", -np.pi / (4 * m)),
        Plate("QWP", np.pi / 4),
    ]


def compose(plates: list[Plate]) -> np.ndarray:
    """Jones matrix of a plate sequence traversed left to right."""
    return reduce(lambda acc, p: p.matrix() @ acc, plates, IDENTITY)


def pbs(state: HybridState, in_path: str, transmit_path: str, reflect_path: str) -> HybridState:
    """{R, L} polarizing beam splitter: R is transmitted, L reflected. No phases."""
    state = reroute(state, in_path, transmit_path, Pol.R)
    return reroute(state, in_path, reflect_path, Pol.L)


def pm_pbs(
    state: HybridState,
    in_a: str,
    in_b: str,
    out_a: str,
    out_b: str,
) -> HybridState:
    """Two-input {+, -} polarizing beam splitter.

    |+> is transmitted and |-> reflected, so ``+`` of ``in_a`` and ``-`` of
    ``in_b`` leave on ``out_a``; ``-`` of ``in_a`` and ``+`` of ``in_b``
    leave on ``out_b``.  Reflection adds no phase.
    """
    state = apply_photon_op(state, PLUS_MINUS, [in_a, in_b])
    # in the rotated frame slot R holds |+>, slot L holds |->
    state = reroute(state, in_a, out_a, Pol.R)
    state = reroute(state, in_a, out_b, Pol.L)
    state = reroute(state, in_b, out_b, Pol.R)
    state = reroute(state, in_b, out_a, Pol.L)
    return apply_photon_op(state, PLUS_MINUS, [out_a, out_b])


def beam_splitter(
    state: HybridState,
    left: str,
    right: str,
    out_left: str | None = None,
    out_right: str | None = None,
) -> HybridState:
    """Balanced BS: ``X_l -> (X_l + X_r)/sqrt2``, ``X_r -> (X_l - X_r)/sqrt2``."""
    out_left = out_left or left
    out_right = out_right or right
    i, j = state.path_index(left), state.path_index(right)
    oi, oj = state.path_index(out_left), state.path_index(out_right)
    t = state.tensor()
    a, b = t[..., i, :].copy(), t[..., j, :].copy()
    t[..., i, :] = 0.0
    t[..., j, :] = 0.0
    if np.any(t[..., oi, :]) or np.any(t[..., oj, :]):
        raise ValueError("beam splitter outputs must be empty")
    t[..., oi, :] = (a + b) / np.sqrt(2)
    t[..., oj, :] = (a - b) / np.sqrt(2)
    return state.with_tensor(t)


def bs_split(state: HybridState, in_path: str, out_left: str, out_right: str) -> HybridState:
    """Single-input BS (the other input port is vacuum), ``in_path`` entering as the left port."""
    state = reroute(state, in_path, out_left)
    return beam_splitter(state, out_left, out_right)


def spin_hadamard(state: HybridState, qubit: int | str) -> HybridState:
    return apply_spin_op(state, HADAMARD, qubit)


def spin_pauli(state: HybridState, qubit: int | str, which: str) -> HybridState:
    """``which`` in {"I2", "X", "Z", "ZX"}; ZX is sigma_z @ sigma_x (x first)."""
    try:
        op = PAULI[which]
    except KeyError:
        raise ValueError(f"unknown Pauli label {which!r}") from None
    return apply_spin_op(state, op, qubit)
