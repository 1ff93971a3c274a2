"""The (SWAP)^(1/m) and controlled-(swap)^(1/m) photon-mediated circuits.

Each circuit is an ordered list of stages acting on a :class:`HybridState`,
followed by photon detection and Pauli feed-forward on the spins.  Every
branch of the ideal circuit leaves the spins in ``U |input>`` up to a global
phase, where ``U`` is :func:`target_unitary`.

Detector assignment
-------------------
SWAP root (detected in the {+, -} basis on the two BS outputs)::

    D1 = +_l   D2 = -_l   D3 = +_r   D4 = -_r

Controlled-swap root (detected in the {R, L} basis on the four BS outputs)::

    D1 = R_5   D2 = L_5   D3 = R_6   D4 = L_6
    D5 = R_7   D6 = L_7   D7 = R_8   D8 = L_8

where BS1 maps (l4, r4) -> (5, 6) and BS2 maps (l3, r3) -> (7, 8).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import optics
from .emitter import (
    EmitterParams,
    Incidence,
    LeakConvention,
    ScatterCoefficients,
    ideal_round_matrix,
    realistic_round_matrix,
    scatter_coefficients,
)
from .hilbert import (
    GateKind,
    HybridState,
    Pol,
    SpinPreparation,
    apply_photon_op,
    apply_pol_spin_op,
    product_state,
    project_photon,
)


class Mode(str, enum.Enum):
    IDEAL = "ideal"
    REALISTIC = "realistic"


@dataclass(frozen=True)
class GateSpec:
    kind: GateKind
    m: int
    mode: Mode = Mode.IDEAL
    leak_convention: LeakConvention = LeakConvention.COHERENT
    params: EmitterParams | None = None
    # overrides params, e.g. to feed the ideal-limit coefficients through the realistic path
    coefficients: ScatterCoefficients | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "leak_convention", LeakConvention(self.leak_convention))
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"root index m must be an integer >= 1, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        has_physics = self.params is not None or self.coefficients is not None
        if has_physics != (self.mode is Mode.REALISTIC):
            raise ValueError("emitter params are required in realistic mode and only there")

    @property
    def n_spins(self) -> int:
        return 2 if self.kind is GateKind.SWAP_ROOT else 3

    def scatter(self) -> ScatterCoefficients | None:
        if self.coefficients is not None:
            return self.coefficients
        return scatter_coefficients(self.params) if self.params is not None else None

    def ideal(self) -> GateSpec:
        return GateSpec(self.kind, self.m)


@dataclass
class OutcomeRecord:
    detector: str
    probability: float
    # unnormalized spin amplitudes after feed-forward
    amplitude: np.ndarray
    post_state: np.ndarray
    conditional_fidelity: float


@dataclass
class CircuitRun:
    outcomes: list[OutcomeRecord]
    loss_probability: float
    checkpoints: list[tuple[str, HybridState]] = field(default_factory=list)

    @property
    def total_probability(self) -> float:
        return sum(o.probability for o in self.outcomes)


_LAYOUTS = {
    GateKind.SWAP_ROOT: (("l", "r"), ("a", "b")),
    GateKind.CSWAP_ROOT: (
        ("in", "l", "r", "l1", "l2", "r1", "r2", "l3", "l4", "r3", "r4", "o5", "o6", "o7", "o8"),
        ("c", "t1", "t2"),
    ),
}


def circuit_layout(kind: GateKind) -> tuple[tuple[str, ...], tuple[str, ...]]:
    return _LAYOUTS[GateKind(kind)]


def _partial_swap_block(m: int) -> np.ndarray:
    e = np.exp(1j * np.pi / m)
    p, q = (1 + e) / 2, (1 - e) / 2
    return np.array([[p, q], [q, p]])


def target_unitary(kind: GateKind, m: int) -> np.ndarray:
    """Ideal gate in the computational basis (first spin most significant)."""
    kind = GateKind(kind)
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise ValueError(f"root index m must be an integer >= 1, got {m!r}")
    dim = 4 if kind is GateKind.SWAP_ROOT else 8
    u = np.eye(dim, dtype=complex)
    lo = 1 if kind is GateKind.SWAP_ROOT else 5
    u[lo : lo + 2, lo : lo + 2] = _partial_swap_block(int(m))
    return u


# ---------------------------------------------------------------------------
# elements


def _round(spec: GateSpec):
    """Round through one QD, applied to the photon on the given paths."""
    if spec.mode is Mode.IDEAL:
        keep, lost = ideal_round_matrix(Incidence.DOWN), None
    else:
        keep, lost = realistic_round_matrix(spec.scatter(), Incidence.DOWN, spec.leak_convention)

    def apply(state: HybridState, qubit: str, paths) -> HybridState:
        return apply_pol_spin_op(state, keep, qubit, paths, leak_op=lost)

    return apply


def _nominal_hwp(angle: float) -> np.ndarray:
    # a lone HWP is used for its polarization action; its e^{i pi/2} would be a
    # relative phase between arms, so it is compensated
    return -1j * optics.half_wave(angle)


Stage = tuple[str | None, Callable[[HybridState], HybridState]]


def _swap_stages(spec: GateSpec) -> list[Stage]:
    rnd = _round(spec)
    s = optics.compose(optics.decompose_s(spec.m))

    def pbs1(st):
        # R is transmitted: the input stays on the left arm
        return st

    def split(st):
        st = optics.pbs(st, "l", "l", "r")
        st = optics.spin_hadamard(st, "a")
        return optics.spin_hadamard(st, "b")

    def arms(st):
        st = rnd(st, "a", ["l", "r"])
        return rnd(st, "b", ["l", "r"])

    def final_h(st):
        st = optics.spin_hadamard(st, "a")
        return optics.spin_hadamard(st, "b")

    return [
        ("Phi_0", lambda st: st),
        ("Phi_1", pbs1),
        ("Phi_2", lambda st: rnd(st, "a", ["l"])),
        ("Phi_3", lambda st: rnd(st, "b", ["l"])),
        ("Phi_4", split),
        ("Phi_5", arms),
        ("Phi_6", lambda st: apply_photon_op(st, s, ["r"])),
        ("Phi_7", lambda st: optics.beam_splitter(st, "l", "r")),
        ("Phi_8", final_h),
    ]


def _cswap_stages(spec: GateSpec) -> list[Stage]:
    rnd = _round(spec)
    s_prime = optics.compose(optics.decompose_s_prime(spec.m))

    def step1(st):
        # QD_c routes the photon: transmitted (R) to r, reflected (L) to l
        st = rnd(st, "c", ["in"])
        st = optics.pbs(st, "in", "r", "l")
        st = apply_photon_op(st, _nominal_hwp(-np.pi / 4), ["r"])
        st = rnd(st, "t1", ["l", "r"])
        return rnd(st, "t2", ["l", "r"])

    def step2(st):
        st = optics.spin_hadamard(st, "t1")
        st = optics.spin_hadamard(st, "t2")
        st = optics.pbs(st, "l", "l1", "l2")
        st = optics.pbs(st, "r", "r1", "r2")
        arms = ["l1", "l2", "r1", "r2"]
        st = rnd(st, "t1", arms)
        st = rnd(st, "t2", arms)
        st = apply_photon_op(st, s_prime, ["l1"])
        return apply_photon_op(st, _nominal_hwp(0.0), ["r1"])

    def step3(st):
        st = optics.pm_pbs(st, "r2", "r1", "r3", "r4")
        st = optics.pm_pbs(st, "l2", "l1", "l3", "l4")
        st = optics.spin_hadamard(st, "t1")
        return optics.spin_hadamard(st, "t2")

    def step4(st):
        st = optics.beam_splitter(st, "l4", "r4", "o5", "o6")
        return optics.beam_splitter(st, "l3", "r3", "o7", "o8")

    return [
        ("phi_0", lambda st: st),
        ("phi_1", step1),
        ("phi_2", step2),
        ("phi_3", step3),
        ("phi_4", step4),
    ]


_R = np.array([1, 0], dtype=complex)
_L = np.array([0, 1], dtype=complex)

# (detector, path, polarization vector, feed-forward per spin)
DETECTORS = {
    GateKind.SWAP_ROOT: [
        ("D1", "l", optics.PLUS, ("ZX", "ZX")),
        ("D2", "l", optics.MINUS, ("I2", "I2")),
        ("D3", "r", optics.PLUS, ("X", "X")),
        ("D4", "r", optics.MINUS, ("Z", "Z")),
    ],
    GateKind.CSWAP_ROOT: [
        ("D1", "o5", _R, ("I2", "I2", "I2")),
        ("D2", "o5", _L, ("I2", "Z", "Z")),
        ("D3", "o6", _R, ("Z", "I2", "I2")),
        ("D4", "o6", _L, ("Z", "Z", "Z")),
        ("D5", "o7", _R, ("I2", "ZX", "ZX")),
        ("D6", "o7", _L, ("I2", "X", "X")),
        ("D7", "o8", _R, ("Z", "ZX", "ZX")),
        ("D8", "o8", _L, ("Z", "X", "X")),
    ],
}


def _stages(spec: GateSpec) -> list[Stage]:
    return _swap_stages(spec) if spec.kind is GateKind.SWAP_ROOT else _cswap_stages(spec)


def _feed_forward_op(labels) -> np.ndarray:
    op = np.ones((1, 1), dtype=complex)
    for lab in labels:
        op = np.kron(op, optics.PAULI[lab])
    return op


def evolve(spec: GateSpec, state: HybridState, trace: bool = False):
    """Run all optical stages; returns ``(final_state, checkpoints)``."""
    checkpoints = []
    for label, stage in _stages(spec):
        state = stage(state)
        if trace:
            checkpoints.append((label, state))
    return state, checkpoints


def detect(spec: GateSpec, state: HybridState) -> list[tuple[str, np.ndarray]]:
    """Per-detector spin amplitudes after feed-forward (unnormalized)."""
    out = []
    for name, path, pol, ff in DETECTORS[spec.kind]:
        amp = project_photon(state, path, pol)
        out.append((name, _feed_forward_op(ff) @ amp))
    return out


def initial_state(spec: GateSpec, spin_vector: np.ndarray) -> HybridState:
    paths, spins = circuit_layout(spec.kind)
    return product_state(paths, spins, spin_vector, Pol.R, paths[0])


def run_circuit(spec: GateSpec, prep: SpinPreparation | np.ndarray, trace: bool = False) -> CircuitRun:
    """Send one photon through the circuit for the given spin input."""
    if isinstance(prep, SpinPreparation):
        psi_in = prep.spin_vector(spec.n_spins)
    else:
        psi_in = np.asarray(prep, dtype=complex).reshape(-1)
    if psi_in.size != 2**spec.n_spins:
        raise ValueError(f"spin input must have {2 ** spec.n_spins} amplitudes")
    if abs(np.vdot(psi_in, psi_in).real - 1) > 1e-12:
        raise ValueError("spin input must be normalized")
    final, checkpoints = evolve(spec, initial_state(spec, psi_in), trace)
    ideal = target_unitary(spec.kind, spec.m) @ psi_in
    outcomes = []
    for name, amp in detect(spec, final):
        p = float(np.vdot(amp, amp).real)
        post = amp / np.sqrt(p) if p > 0 else amp
        fid = float(abs(np.vdot(ideal, post)) ** 2) if p > 0 else 0.0
        outcomes.append(OutcomeRecord(name, p, amp, post, fid))
    loss = 1.0 - sum(o.probability for o in outcomes)
    return CircuitRun(outcomes, loss, checkpoints)


def run_swap_circuit(spec: GateSpec, prep: SpinPreparation, trace: bool = False) -> CircuitRun:
    if spec.kind is not GateKind.SWAP_ROOT:
        raise ValueError("run_swap_circuit needs a SWAP-root spec")
    return run_circuit(spec, prep, trace)


def run_cswap_circuit(spec: GateSpec, prep: SpinPreparation, trace: bool = False) -> CircuitRun:
    if spec.kind is not GateKind.CSWAP_ROOT:
        raise ValueError("run_cswap_circuit needs a controlled-swap-root spec")
    return run_circuit(spec, prep, trace)


def trace_checkpoints(spec: GateSpec, prep: SpinPreparation) -> list[tuple[str, HybridState]]:
    if spec.mode is not Mode.IDEAL:
        raise ValueError("checkpoints are only defined for the ideal scattering rules")
    psi_in = prep.spin_vector(spec.n_spins)
    _, checkpoints = evolve(spec, initial_state(spec, psi_in), trace=True)
    return checkpoints


def branch_operators(spec: GateSpec) -> np.ndarray:
    """Linear spin maps ``M_k`` with ``amplitude_k = M_k @ psi_in``.

    Shape ``(n_detectors, d, d)``.  The circuit is linear in the spin input,
    so the columns come from running it on the computational basis states.
    """
    d = 2**spec.n_spins
    ops = np.zeros((len(DETECTORS[spec.kind]), d, d), dtype=complex)
    for j in range(d):
        final, _ = evolve(spec, initial_state(spec, np.eye(d)[j]))
        for k, (_, amp) in enumerate(detect(spec, final)):
            ops[k, :, j] = amp
    return ops


# ---------------------------------------------------------------------------
# verification


def phase_aligned_error(expected: np.ndarray, actual: np.ndarray) -> float:
    """Max-abs difference after removing the best global phase."""
    overlap = np.vdot(expected, actual)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(actual - phase * expected)))


@dataclass
class VerifyReport:
    kind: GateKind
    m: int
    n_inputs: int
    max_state_error: float
    max_probability_error: float
    max_operator_error: float
    tol: float

    @property
    def passed(self) -> bool:
        return max(self.max_state_error, self.max_probability_error, self.max_operator_error) < self.tol


def verify_gate(spec: GateSpec, n_random_inputs: int = 50, seed: int = 0, tol: float = 1e-10) -> VerifyReport:
    """Check every branch of the ideal circuit against the target gate."""
    if spec.mode is not Mode.IDEAL:
        raise ValueError("verify_gate runs in ideal mode")
    rng = np.random.default_rng(seed)
    n = spec.n_spins
    d = 2**n
    u = target_unitary(spec.kind, spec.m)
    inputs = [np.eye(d, dtype=complex)[j] for j in range(d)]
    for _ in range(n_random_inputs):
        angles = rng.uniform(0, 2 * np.pi, size=3)
        inputs.append(SpinPreparation(*angles).spin_vector(n))

    state_err = prob_err = 0.0
    for psi in inputs:
        run = run_circuit(spec, psi)
        prob_err = max(prob_err, abs(run.total_probability - 1.0))
        ideal = u @ psi
        for o in run.outcomes:
            state_err = max(state_err, phase_aligned_error(ideal, o.post_state))

    op_err = 0.0
    for m_k in branch_operators(spec):
        # each branch is sqrt(p_k) * e^{i phi_k} * U with p_k = 1/K
        scale = np.sqrt(np.trace(m_k.conj().T @ m_k).real / d)
        op_err = max(op_err, phase_aligned_error(u.reshape(-1), (m_k / scale).reshape(-1)))
    return VerifyReport(spec.kind, spec.m, len(inputs), state_err, prob_err, op_err, tol)
