"""Closed-form intermediate states of the two ideal circuits.

Each state is written out term by term (coefficient, polarization, path,
spin string) exactly as the analytic evolution gives it, independent of the
simulator.  Polarization labels are R, L, + and -, with
``|+-> = (|R> +- |L>)/sqrt2``.  Spin strings use ``u``/``d``.
"""

from __future__ import annotations

import numpy as np

from .circuits import GateSpec, Mode, circuit_layout, trace_checkpoints
from .hilbert import GateKind, HybridState, SpinPreparation, empty_state

_POL = {
    "R": np.array([1, 0], dtype=complex),
    "L": np.array([0, 1], dtype=complex),
    "+": np.array([1, 1], dtype=complex) / np.sqrt(2),
    "-": np.array([1, -1], dtype=complex) / np.sqrt(2),
}


def build_state(kind: GateKind, terms) -> HybridState:
    paths, spins = circuit_layout(kind)
    state = empty_state(paths, spins)
    t = state.tensor()
    for coef, pol, path, spin_str in terms:
        idx = tuple(0 if ch == "u" else 1 for ch in spin_str) + (state.path_index(path),)
        t[idx] += coef * _POL[pol]
    return state.with_tensor(t)


def _swap_terms(m: int, prep: SpinPreparation):
    ca, sa = np.cos(prep.alpha), np.sin(prep.alpha)
    cb, sb = np.cos(prep.beta), np.sin(prep.beta)
    e = np.exp(1j * np.pi / m)
    p, q = (1 + e) / 2, (1 - e) / 2
    h = 1 / 2
    k = 1 / (2 * np.sqrt(2))

    product = [
        (ca * cb, "R", "l", "uu"),
        (ca * sb, "R", "l", "ud"),
        (sa * cb, "R", "l", "du"),
        (sa * sb, "R", "l", "dd"),
    ]
    phi2 = [
        (-ca * cb, "R", "l", "uu"),
        (-ca * sb, "R", "l", "ud"),
        (sa * cb, "L", "l", "du"),
        (sa * sb, "L", "l", "dd"),
    ]
    phi3 = [
        (ca * cb, "R", "l", "uu"),
        (-ca * sb, "L", "l", "ud"),
        (-sa * cb, "L", "l", "du"),
        (sa * sb, "R", "l", "dd"),
    ]

    def group(coef, sign_pattern, pol_pattern, path):
        return [
            (coef * s, pol, path, spins)
            for s, pol, spins in zip(sign_pattern, pol_pattern, ("uu", "ud", "du", "dd"))
        ]

    phi4 = (
        group(h * ca * cb, (1, 1, 1, 1), "RRRR", "l")
        + group(-h * ca * sb, (1, -1, 1, -1), "LLLL", "r")
        + group(-h * sa * cb, (1, 1, -1, -1), "LLLL", "r")
        + group(h * sa * sb, (1, -1, -1, 1), "RRRR", "l")
    )

    def arms(phase, k_l, k_r, with_l=True, with_r=True):
        # common shape of the states after the arm rounds
        out = []
        if with_l:
            out += group(k_l * ca * cb, (1, -1, -1, 1), "RLLR", "l")
            out += group(k_l * sa * sb, (1, 1, 1, 1), "RLLR", "l")
        if with_r:
            out += group(-k_r * ca * sb, (1, phase, -phase, -1), "LRRL", "r")
            out += group(-k_r * sa * cb, (1, -phase, phase, -1), "LRRL", "r")
        return out

    phi5 = arms(1.0, h, h)
    phi6 = arms(e, h, h)
    phi7 = (
        group(k * ca * cb, (1, -1, -1, 1), "RLLR", "l")
        + group(-k * ca * sb, (1, e, -e, -1), "LRRL", "l")
        + group(-k * sa * cb, (1, -e, e, -1), "LRRL", "l")
        + group(k * sa * sb, (1, 1, 1, 1), "RLLR", "l")
        + group(k * ca * cb, (1, -1, -1, 1), "RLLR", "r")
        + group(k * ca * sb, (1, e, -e, -1), "LRRL", "r")
        + group(k * sa * cb, (1, -e, e, -1), "LRRL", "r")
        + group(k * sa * sb, (1, 1, 1, 1), "RLLR", "r")
    )
    phi8 = [
        (h * ca * cb, "+", "l", "dd"),
        (-h * ca * sb * q, "+", "l", "ud"),
        (-h * ca * sb * p, "+", "l", "du"),
        (-h * sa * cb * p, "+", "l", "ud"),
        (-h * sa * cb * q, "+", "l", "du"),
        (h * sa * sb, "+", "l", "uu"),
        (h * ca * cb, "-", "l", "uu"),
        (h * ca * sb * p, "-", "l", "ud"),
        (h * ca * sb * q, "-", "l", "du"),
        (h * sa * cb * q, "-", "l", "ud"),
        (h * sa * cb * p, "-", "l", "du"),
        (h * sa * sb, "-", "l", "dd"),
        (h * ca * cb, "+", "r", "dd"),
        (h * ca * sb * q, "+", "r", "ud"),
        (h * ca * sb * p, "+", "r", "du"),
        (h * sa * cb * p, "+", "r", "ud"),
        (h * sa * cb * q, "+", "r", "du"),
        (h * sa * sb, "+", "r", "uu"),
        (h * ca * cb, "-", "r", "uu"),
        (-h * ca * sb * p, "-", "r", "ud"),
        (-h * ca * sb * q, "-", "r", "du"),
        (-h * sa * cb * q, "-", "r", "ud"),
        (-h * sa * cb * p, "-", "r", "du"),
        (h * sa * sb, "-", "r", "dd"),
    ]
    return [
        ("Phi_0", product),
        ("Phi_1", product),
        ("Phi_2", phi2),
        ("Phi_3", phi3),
        ("Phi_4", phi4),
        ("Phi_5", phi5),
        ("Phi_6", phi6),
        ("Phi_7", phi7),
        ("Phi_8", phi8),
    ]


def _cswap_terms(m: int, prep: SpinPreparation):
    A, a = np.cos(prep.alpha), np.sin(prep.alpha)
    B, b = np.cos(prep.beta), np.sin(prep.beta)
    D, d = np.cos(prep.delta), np.sin(prep.delta)
    e = np.exp(1j * np.pi / m)
    p, q = (1 + e) / 2, (1 - e) / 2

    product = []
    for i, c in enumerate((A, a)):
        for j, t1 in enumerate((B, b)):
            for k, t2 in enumerate((D, d)):
                product.append((c * t1 * t2, "R", "in", "ud"[i] + "ud"[j] + "ud"[k]))

    phi1 = [
        (A * B * D, "L", "r", "uuu"),
        (-A * B * d, "R", "r", "uud"),
        (-A * b * D, "R", "r", "udu"),
        (A * b * d, "L", "r", "udd"),
        (a * B * D, "L", "l", "duu"),
        (-a * B * d, "R", "l", "dud"),
        (-a * b * D, "R", "l", "ddu"),
        (a * b * d, "L", "l", "ddd"),
    ]

    def quad(coef, control, signs, pols, path):
        return [
            (coef * s / 2, pol, path, control + t)
            for s, pol, t in zip(signs, pols, ("uu", "ud", "du", "dd"))
        ]

    phi2 = (
        quad(A * B * D, "u", (1, -1, -1, 1), "LRRL", "r2")
        + quad(A * B * d, "u", (-1, 1, -1, 1), "RLLR", "r1")
        + quad(A * b * D, "u", (-1, -1, 1, 1), "RLLR", "r1")
        + quad(A * b * d, "u", (1, 1, 1, 1), "LRRL", "r2")
        + quad(a * B * D, "d", (1, -1, -1, 1), "LRRL", "l2")
        + quad(a * B * d, "d", (-1, e, -e, 1), "RLLR", "l1")
        + quad(a * b * D, "d", (-1, -e, e, 1), "RLLR", "l1")
        + quad(a * b * d, "d", (1, 1, 1, 1), "LRRL", "l2")
    )

    def swapped(coef, pol, path, first, second):
        # coef * (first |d u d> + second |d d u>)
        return [(coef * first, pol, path, "dud"), (coef * second, pol, path, "ddu")]

    s2 = 1 / np.sqrt(2)
    phi3 = [
        (s2 * A * B * D, "+", "r3", "udd"),
        (-s2 * A * B * d, "-", "r3", "udu"),
        (-s2 * A * b * D, "-", "r3", "uud"),
        (s2 * A * b * d, "+", "r3", "uuu"),
        (-s2 * A * B * D, "-", "r4", "uuu"),
        (-s2 * A * B * d, "+", "r4", "uud"),
        (-s2 * A * b * D, "+", "r4", "udu"),
        (-s2 * A * b * d, "-", "r4", "udd"),
        (s2 * a * B * D, "+", "l3", "ddd"),
        *swapped(-s2 * a * B * d, "-", "l3", q, p),
        *swapped(-s2 * a * b * D, "-", "l3", p, q),
        (s2 * a * b * d, "+", "l3", "duu"),
        (-s2 * a * B * D, "-", "l4", "duu"),
        *swapped(-s2 * a * B * d, "+", "l4", p, q),
        *swapped(-s2 * a * b * D, "+", "l4", q, p),
        (-s2 * a * b * d, "-", "l4", "ddd"),
    ]

    h = 1 / 2
    phi4 = [
        (h * A * B * D, "+", "o7", "udd"),
        (-h * A * B * d, "-", "o7", "udu"),
        (-h * A * b * D, "-", "o7", "uud"),
        (h * A * b * d, "+", "o7", "uuu"),
        (h * a * B * D, "+", "o7", "ddd"),
        *swapped(-h * a * B * d, "-", "o7", q, p),
        *swapped(-h * a * b * D, "-", "o7", p, q),
        (h * a * b * d, "+", "o7", "duu"),
        (-h * A * B * D, "+", "o8", "udd"),
        (h * A * B * d, "-", "o8", "udu"),
        (h * A * b * D, "-", "o8", "uud"),
        (-h * A * b * d, "+", "o8", "uuu"),
        (h * a * B * D, "+", "o8", "ddd"),
        *swapped(-h * a * B * d, "-", "o8", q, p),
        *swapped(-h * a * b * D, "-", "o8", p, q),
        (h * a * b * d, "+", "o8", "duu"),
        (-h * A * B * D, "-", "o5", "uuu"),
        (-h * A * B * d, "+", "o5", "uud"),
        (-h * A * b * D, "+", "o5", "udu"),
        (-h * A * b * d, "-", "o5", "udd"),
        (-h * a * B * D, "-", "o5", "duu"),
        *swapped(-h * a * B * d, "+", "o5", p, q),
        *swapped(-h * a * b * D, "+", "o5", q, p),
        (-h * a * b * d, "-", "o5", "ddd"),
        (h * A * B * D, "-", "o6", "uuu"),
        (h * A * B * d, "+", "o6", "uud"),
        (h * A * b * D, "+", "o6", "udu"),
        (h * A * b * d, "-", "o6", "udd"),
        (-h * a * B * D, "-", "o6", "duu"),
        *swapped(-h * a * B * d, "+", "o6", p, q),
        *swapped(-h * a * b * D, "+", "o6", q, p),
        (-h * a * b * d, "-", "o6", "ddd"),
    ]
    return [
        ("phi_0", product),
        ("phi_1", phi1),
        ("phi_2", phi2),
        ("phi_3", phi3),
        ("phi_4", phi4),
    ]


def reference_checkpoints(kind: GateKind, m: int, prep: SpinPreparation) -> list[tuple[str, HybridState]]:
    kind = GateKind(kind)
    terms = _swap_terms(m, prep) if kind is GateKind.SWAP_ROOT else _cswap_terms(m, prep)
    return [(label, build_state(kind, t)) for label, t in terms]


def reference_output(kind: GateKind, m: int, prep: SpinPreparation) -> np.ndarray:
    """Spin state expected after detection and feed-forward, written out explicitly."""
    e = np.exp(1j * np.pi / m)
    p, q = (1 + e) / 2, (1 - e) / 2
    if GateKind(kind) is GateKind.SWAP_ROOT:
        ca, sa = np.cos(prep.alpha), np.sin(prep.alpha)
        cb, sb = np.cos(prep.beta), np.sin(prep.beta)
        return np.array([ca * cb, ca * sb * p + sa * cb * q, ca * sb * q + sa * cb * p, sa * sb])
    A, a = np.cos(prep.alpha), np.sin(prep.alpha)
    B, b = np.cos(prep.beta), np.sin(prep.beta)
    D, d = np.cos(prep.delta), np.sin(prep.delta)
    return np.array(
        [
            A * B * D,
            A * B * d,
            A * b * D,
            A * b * d,
            a * B * D,
            a * B * d * p + a * b * D * q,
            a * B * d * q + a * b * D * p,
            a * b * d,
        ]
    )


def checkpoint_deviations(spec: GateSpec, prep: SpinPreparation) -> list[tuple[str, float]]:
    """Max-abs amplitude difference between traced and closed-form states."""
    if spec.mode is not Mode.IDEAL:
        raise ValueError("checkpoints are only defined for the ideal scattering rules")
    traced = trace_checkpoints(spec, prep)
    expected = reference_checkpoints(spec.kind, spec.m, prep)
    out = []
    for (label, got), (label_ref, ref) in zip(traced, expected):
        if label != label_ref:
            raise RuntimeError(f"checkpoint order mismatch: {label} vs {label_ref}")
        out.append((label, float(np.max(np.abs(got.amps - ref.amps)))))
    return out
