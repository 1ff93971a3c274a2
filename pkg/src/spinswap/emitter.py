"""Scattering of a single photon off one charged-QD double-sided cavity.

Rates and frequencies are in units of the total cavity decay rate kappa.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class Incidence(str, enum.Enum):
    DOWN = "down"
    UP = "up"


class LeakConvention(str, enum.Enum):
    COHERENT = "coherent"
    LOSSY = "lossy"


@dataclass(frozen=True)
class EmitterParams:
    g: float
    kappa: float = 1.0
    kappa_s: float = 0.0
    gamma: float = 0.1
    omega: float = 0.0
    omega_c: float = 0.0
    omega_x: float = 0.0

    def __post_init__(self):
        if self.g < 0:
            raise ValueError(f"coupling g must be >= 0, got {self.g}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa}")
        if self.kappa_s < 0:
            raise ValueError(f"kappa_s must be >= 0, got {self.kappa_s}")
        if self.gamma <= 0:
            raise ValueError(f"gamma must be > 0, got {self.gamma}")

    @classmethod
    def from_figure_ratios(cls, g_over_kappa: float, ks_over_2kappa: float, gamma_over_kappa: float = 0.1):
        """Axes of the fidelity surfaces: g/kappa and kappa_s/(2 kappa)."""
        return cls(g=g_over_kappa, kappa=1.0, kappa_s=2.0 * ks_over_2kappa, gamma=gamma_over_kappa)

    @classmethod
    def from_text_ratios(cls, g_over_kpks: float, ks_over_kappa: float, gamma_over_kappa: float = 0.1):
        """Point parameterization g/(kappa + kappa_s) and kappa_s/kappa."""
        return cls(
            g=g_over_kpks * (1.0 + ks_over_kappa),
            kappa=1.0,
            kappa_s=ks_over_kappa,
            gamma=gamma_over_kappa,
        )

    @property
    def g_over_kappa(self) -> float:
        return self.g / self.kappa

    @property
    def ks_over_2kappa(self) -> float:
        return self.kappa_s / (2.0 * self.kappa)

    @property
    def g_over_kpks(self) -> float:
        return self.g / (self.kappa + self.kappa_s)

    @property
    def ks_over_kappa(self) -> float:
        return self.kappa_s / self.kappa


@dataclass(frozen=True)
class ScatterCoefficients:
    r: complex
    t: complex
    r0: complex
    t0: complex


IDEAL_COEFFICIENTS = ScatterCoefficients(r=1.0, t=0.0, r0=0.0, t0=-1.0)


def _transmission(p: EmitterParams, g: float) -> complex:
    dipole = 1j * (p.omega_x - p.omega) + p.gamma / 2
    cavity = 1j * (p.omega_c - p.omega) + p.kappa + p.kappa_s / 2
    return -p.kappa * dipole / (dipole * cavity + g**2)


def scatter_coefficients(params: EmitterParams) -> ScatterCoefficients:
    """Reflection/transmission amplitudes for the coupled (g) and cold (g=0) cavity."""
    t = _transmission(params, params.g)
    t0 = _transmission(params, 0.0)
    return ScatterCoefficients(r=1 + t, t=t, r0=1 + t0, t0=t0)


# Basis order for all 4x4 maps: {R up, R down, L up, L down}.
_RU, _RD, _LU, _LD = range(4)


def _round_maps(c: ScatterCoefficients, incidence: Incidence) -> tuple[np.ndarray, np.ndarray]:
    """(continuing, wrong-port) parts of one round.

    For down incidence the photon pair is (R going down, L going up) and the
    spin-down electron couples; for up incidence the pair is (R up, L down)
    and spin-up couples.  Coupled photons reflect with a polarization flip;
    uncoupled photons are transmitted.
    """
    keep = np.zeros((4, 4), dtype=complex)
    wrong = np.zeros((4, 4), dtype=complex)
    coupled_spin = 1 if incidence is Incidence.DOWN else 0
    for spin in (0, 1):
        for pol in (0, 1):
            src = 2 * pol + spin
            flipped = 2 * (1 - pol) + spin
            if spin == coupled_spin:
                keep[flipped, src] = c.r
                wrong[src, src] = c.t
            else:
                keep[src, src] = c.t0
                wrong[flipped, src] = c.r0
    return keep, wrong


def ideal_round_matrix(incidence: Incidence = Incidence.DOWN) -> np.ndarray:
    """Unitary spin-dependent map of one ideal photon round."""
    keep, _ = _round_maps(IDEAL_COEFFICIENTS, Incidence(incidence))
    return keep


def realistic_round_matrix(
    coeffs: ScatterCoefficients,
    incidence: Incidence = Incidence.DOWN,
    leak_convention: LeakConvention = LeakConvention.COHERENT,
) -> tuple[np.ndarray, np.ndarray | None]:
    """Round map with finite coupling and side leakage.

    Returns ``(circuit_map, loss_map)``.  Under the coherent convention the
    wrong-port amplitudes share the output mode (the two cavity ports carry
    orthogonal polarizations and are recombined) and ``loss_map`` is None.
    Under the lossy convention they are dropped into the loss port.
    """
    keep, wrong = _round_maps(coeffs, Incidence(incidence))
    if LeakConvention(leak_convention) is LeakConvention.COHERENT:
        return keep + wrong, None
    return keep, wrong
