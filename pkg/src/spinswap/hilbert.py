"""Hybrid photon/spin state vectors.

A :class:`HybridState` holds one photon (polarization R/L on one of a finite
set of named paths) together with N electron spins.  Amplitudes are stored
densely with polarization varying fastest, then path, then the spins in
declaration order (first spin most significant)::

    index = pol + 2 * (path + n_paths * spin_index)

so ``amps.reshape((2,) * N + (n_paths, 2))`` addresses ``[s0, ..., sN-1, path, pol]``.

States are immutable; every operation returns a new state.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

EPS = 1e-12


class Pol(enum.IntEnum):
    R = 0
    L = 1


class Spin(enum.IntEnum):
    UP = 0
    DOWN = 1


class GateKind(str, enum.Enum):
    SWAP_ROOT = "swap"
    CSWAP_ROOT = "cswap"


@dataclass(frozen=True)
class PhotonMode:
    pol: Pol
    path: str


@dataclass(frozen=True)
class SpinPreparation:
    """Product-state angles: each spin is ``cos(x)|up> + sin(x)|down>``."""

    alpha: float = 0.0
    beta: float = 0.0
    delta: float = 0.0

    def spin_vector(self, n_spins: int) -> np.ndarray:
        angles = (self.alpha, self.beta, self.delta)[:n_spins]
        vec = np.ones(1, dtype=complex)
        for x in angles:
            vec = np.kron(vec, [np.cos(x), np.sin(x)])
        return vec


@dataclass(frozen=True, eq=False)
class HybridState:
    paths: tuple[str, ...]
    spins: tuple[str, ...]
    amps: np.ndarray
    # probability sent to the loss port; never re-enters the circuit
    leaked: float = field(default=0.0)

    def __post_init__(self):
        if len(set(self.paths)) != len(self.paths):
            raise ValueError(f"duplicate path labels in {self.paths}")
        amps = np.asarray(self.amps, dtype=complex).reshape(-1)
        if amps.size != self.dim:
            raise ValueError(f"expected {self.dim} amplitudes, got {amps.size}")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def n_spins(self) -> int:
        return len(self.spins)

    @property
    def dim(self) -> int:
        return 2 * len(self.paths) * 2 ** len(self.spins)

    @property
    def shape(self) -> tuple[int, ...]:
        return (2,) * self.n_spins + (len(self.paths), 2)

    def tensor(self) -> np.ndarray:
        """Writable copy of the amplitudes as ``[spins..., path, pol]``."""
        return self.amps.reshape(self.shape).copy()

    def with_tensor(self, tensor: np.ndarray, leaked: float | None = None) -> HybridState:
        return HybridState(
            self.paths,
            self.spins,
            tensor.reshape(-1),
            self.leaked if leaked is None else leaked,
        )

    def path_index(self, path: str) -> int:
        try:
            return self.paths.index(path)
        except ValueError:
            raise KeyError(f"unknown path {path!r}; declared paths are {self.paths}") from None

    def spin_index(self, qubit: int | str) -> int:
        if isinstance(qubit, str):
            try:
                return self.spins.index(qubit)
            except ValueError:
                raise IndexError(f"unknown spin {qubit!r}") from None
        if not 0 <= qubit < self.n_spins:
            raise IndexError(f"spin index {qubit} out of range for {self.n_spins} spins")
        return qubit

    def norm2(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def amplitude(self, pol: Pol | str, path: str, spins: Sequence[int] | str) -> complex:
        """Amplitude of ``|pol_path>|spins>``; ``spins`` may be a string like ``"udu"``."""
        if isinstance(pol, str):
            pol = Pol[pol]
        if isinstance(spins, str):
            spins = [0 if ch == "u" else 1 for ch in spins]
        return complex(self.amps.reshape(self.shape)[tuple(spins) + (self.path_index(path), int(pol))])

    def path_block(self, path: str) -> np.ndarray:
        """Amplitudes on one path as a ``(2,) * N + (2,)`` array (pol last)."""
        return self.amps.reshape(self.shape)[..., self.path_index(path), :].copy()


def empty_state(paths: Iterable[str], spins: Iterable[str]) -> HybridState:
    paths, spins = tuple(paths), tuple(spins)
    return HybridState(paths, spins, np.zeros(2 * len(paths) * 2 ** len(spins), dtype=complex))


def product_state(
    paths: Iterable[str],
    spins: Iterable[str],
    spin_vector: np.ndarray,
    pol: Pol = Pol.R,
    path: str | None = None,
) -> HybridState:
    """Photon in ``|pol>`` on ``path`` (default: first path) times ``spin_vector``."""
    state = empty_state(paths, spins)
    t = state.tensor()
    spin_vector = np.asarray(spin_vector, dtype=complex).reshape((2,) * state.n_spins)
    t[..., state.path_index(path or state.paths[0]), int(pol)] = spin_vector
    return state.with_tensor(t)


def make_initial_state(prep: SpinPreparation, kind: GateKind) -> HybridState:
    """Single R photon on the input path, spins in the product state of ``prep``."""
    from .circuits import circuit_layout

    paths, spins = circuit_layout(kind)
    return product_state(paths, spins, prep.spin_vector(len(spins)))


def apply_photon_op(state: HybridState, op: np.ndarray, paths: Iterable[str]) -> HybridState:
    """Apply a 2x2 polarization matrix on the listed paths only."""
    op = np.asarray(op, dtype=complex)
    t = state.tensor()
    for p in paths:
        i = state.path_index(p)
        t[..., i, :] = t[..., i, :] @ op.T
    return state.with_tensor(t)


def apply_spin_op(state: HybridState, op: np.ndarray, qubit: int | str) -> HybridState:
    """Apply a 2x2 operator to one spin, on every photon mode."""
    q = state.spin_index(qubit)
    t = np.tensordot(np.asarray(op, dtype=complex), state.tensor(), axes=([1], [q]))
    return state.with_tensor(np.moveaxis(t, 0, q))


def apply_pol_spin_op(
    state: HybridState,
    op: np.ndarray,
    qubit: int | str,
    paths: Iterable[str],
    leak_op: np.ndarray | None = None,
) -> HybridState:
    """Apply a 4x4 map on (polarization x one spin) on the listed paths.

    The 4x4 basis is ``{R up, R down, L up, L down}``.  If ``leak_op`` is
    given, the amplitude it produces is sent to the loss port and its
    probability is added to ``leaked``.
    """
    q = state.spin_index(qubit)
    op4 = np.asarray(op, dtype=complex).reshape(2, 2, 2, 2)
    t = np.moveaxis(state.tensor(), q, -3)  # [..., spin, path, pol]
    leaked = state.leaked
    for p in paths:
        i = state.path_index(p)
        block = t[..., :, i, :]  # [..., spin, pol]
        if leak_op is not None:
            lk = np.asarray(leak_op, dtype=complex).reshape(2, 2, 2, 2)
            lost = np.einsum("asbt,...tb->...sa", lk, block)
            leaked += float(np.vdot(lost, lost).real)
        t[..., :, i, :] = np.einsum("asbt,...tb->...sa", op4, block)
    return state.with_tensor(np.moveaxis(t, -3, q), leaked)


def reroute(state: HybridState, from_path: str, to_path: str, pol: Pol | None = None) -> HybridState:
    """Move amplitude (optionally one polarization only) between paths.

    The destination slots must be empty, which keeps the move norm-preserving
    and invertible.
    """
    i, j = state.path_index(from_path), state.path_index(to_path)
    if i == j:
        return state
    t = state.tensor()
    pols = [int(pol)] if pol is not None else [0, 1]
    for k in pols:
        if np.any(t[..., j, k]):
            raise ValueError(f"cannot reroute into occupied mode {Pol(k).name}_{to_path}")
        t[..., j, k] = t[..., i, k]
        t[..., i, k] = 0.0
    return state.with_tensor(t)


def project_photon(state: HybridState, path: str, pol_vector: Sequence[complex]) -> np.ndarray:
    """Spin amplitudes left after detecting the photon on ``path`` in ``pol_vector``.

    Returns the unnormalized spin vector ``<pol_vector, path| state>``.
    """
    v = np.asarray(pol_vector, dtype=complex)
    return (state.path_block(path) @ v.conj()).reshape(-1)


def inner(a: HybridState, b: HybridState) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    if a.paths != b.paths or a.spins != b.spins:
        raise ValueError("states have different basis layouts")
    return complex(np.vdot(a.amps, b.amps))
