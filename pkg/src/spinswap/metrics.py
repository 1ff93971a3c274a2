"""Angle-averaged fidelity and efficiency, sweeps, and their file formats.

Averages run over the product-state preparation angles on a uniform periodic
grid (rectangle rule), which converges spectrally for these smooth 2pi-periodic
integrands.  The circuits are linear in the spin input, so every point is
evaluated from the per-detector spin maps of :func:`circuits.branch_operators`.

Fidelity conventions
--------------------
``hybrid_overlap`` (default)
    ``|<Psi_ideal|Psi_f>|^2 / <Psi_f|Psi_f>`` for the full photon+spin output
    state after feed-forward, i.e. branch overlaps summed coherently.
``conditional_weighted``
    ``sum_k (p_k / eta) |<psi_ideal|psihat_k>|^2``; blind to per-branch phases.
``raw_overlap``
    ``sum_k |<psi_ideal|psi_k>|^2`` with unnormalized branch states; bounded by eta.

Efficiency is the total detected probability.
"""

from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, replace
from functools import lru_cache

import numpy as np

from .circuits import GateSpec, Mode, branch_operators, target_unitary
from .emitter import EmitterParams, LeakConvention
from .hilbert import GateKind


class FidelityConvention(str, enum.Enum):
    HYBRID_OVERLAP = "hybrid_overlap"
    CONDITIONAL_WEIGHTED = "conditional_weighted"
    RAW_OVERLAP = "raw_overlap"


# calibrated against the reference point values; see README
DEFAULT_FIDELITY = FidelityConvention.HYBRID_OVERLAP
DEFAULT_LEAK = LeakConvention.COHERENT


def default_quadrature(kind: GateKind) -> int:
    return 64 if GateKind(kind) is GateKind.SWAP_ROOT else 32


@dataclass(frozen=True)
class PointMetrics:
    avg_fidelity: float
    avg_efficiency: float
    grid_resolution: int
    fidelity_convention: str
    leak_convention: str
    mode: str


@lru_cache(maxsize=None)
def _ideal_operators(kind: GateKind, m: int) -> np.ndarray:
    ops = branch_operators(GateSpec(kind, m))
    ops.setflags(write=False)
    return ops


def _spin_vectors(n: int, offset: float) -> np.ndarray:
    theta = offset + 2 * np.pi * np.arange(n) / n
    return np.stack([np.cos(theta), np.sin(theta)], axis=1)


def _product_inputs(first: np.ndarray, v: np.ndarray, n_rest: int) -> np.ndarray:
    psi = first[None, :]
    for _ in range(n_rest):
        psi = np.einsum("ai,bj->abij", psi, v).reshape(psi.shape[0] * v.shape[0], -1)
    return psi


def _quadratic_forms(ops, ideal_ops, u, convention) -> tuple[np.ndarray, np.ndarray]:
    """Matrices whose quadratic forms in the spin input give fidelity overlaps and eta.

    Every quantity is <psi|M|psi> for a d x d matrix M, so the per-sample work
    reduces to one matrix product.
    """
    gram = np.einsum("kij,kil->jl", ops.conj(), ops)
    if convention is FidelityConvention.HYBRID_OVERLAP:
        overlaps = np.einsum("kij,kil->jl", ideal_ops.conj(), ops)[None]
    else:
        overlaps = np.einsum("ij,kil->kjl", u.conj(), ops)
    return overlaps, gram


def _chunk_sums(psi, overlaps, gram, convention):
    n_forms, d, _ = overlaps.shape
    stacked = np.concatenate([overlaps.transpose(1, 0, 2).reshape(d, -1), gram], axis=1)
    vals = (psi.conj() @ stacked).reshape(len(psi), n_forms + 1, d)
    vals = np.einsum("sfd,sd->sf", vals, psi)
    eta = vals[:, -1].real
    fid = np.sum(np.abs(vals[:, :-1]) ** 2, axis=1)
    if convention is not FidelityConvention.RAW_OVERLAP:
        fid = np.divide(fid, eta, out=np.zeros_like(fid), where=eta > 0)
    return float(fid.sum()), float(eta.sum())


def averages_from_operators(
    ops: np.ndarray,
    spec: GateSpec,
    quadrature_n: int,
    fidelity_convention: FidelityConvention = DEFAULT_FIDELITY,
    offset: float = 0.0,
) -> tuple[float, float]:
    """(F, eta) averaged over the angle grid for given branch operators."""
    if quadrature_n < 8:
        raise ValueError(f"quadrature_n must be >= 8, got {quadrature_n}")
    convention = FidelityConvention(fidelity_convention)
    v = _spin_vectors(quadrature_n, offset)
    ideal_ops = _ideal_operators(spec.kind, spec.m)
    u = target_unitary(spec.kind, spec.m)
    overlaps, gram = _quadratic_forms(ops, ideal_ops, u, convention)
    f_sum = e_sum = 0.0
    # chunk over the first angle to bound memory
    for first in v:
        psi = _product_inputs(first, v, spec.n_spins - 1)
        f, e = _chunk_sums(psi, overlaps, gram, convention)
        f_sum += f
        e_sum += e
    total = quadrature_n**spec.n_spins
    return min(f_sum / total, 1.0), min(e_sum / total, 1.0)


def point_metrics(
    spec: GateSpec,
    quadrature_n: int | None = None,
    fidelity_convention: FidelityConvention = DEFAULT_FIDELITY,
    offset: float = 0.0,
) -> PointMetrics:
    n = quadrature_n or default_quadrature(spec.kind)
    if spec.mode is Mode.IDEAL:
        ops = _ideal_operators(spec.kind, spec.m)
    else:
        ops = branch_operators(spec)
    f, e = averages_from_operators(ops, spec, n, fidelity_convention, offset)
    return PointMetrics(
        avg_fidelity=f,
        avg_efficiency=e,
        grid_resolution=n,
        fidelity_convention=FidelityConvention(fidelity_convention).value,
        leak_convention=spec.leak_convention.value,
        mode=spec.mode.value,
    )


@dataclass(frozen=True)
class SweepGrid:
    kind: GateKind
    m: int
    g_over_kappa: tuple[float, float, int]
    ks_over_2kappa: tuple[float, float, int]
    gamma_over_kappa: float = 0.1
    leak_convention: LeakConvention = DEFAULT_LEAK
    fidelity_convention: FidelityConvention = DEFAULT_FIDELITY

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "leak_convention", LeakConvention(self.leak_convention))
        object.__setattr__(self, "fidelity_convention", FidelityConvention(self.fidelity_convention))
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise ValueError(f"root index m must be an integer >= 1, got {self.m!r}")
        for name in ("g_over_kappa", "ks_over_2kappa"):
            lo, hi, count = getattr(self, name)
            if count < 1:
                raise ValueError(f"{name}: need at least one grid point")
            if lo < 0 or hi < lo:
                raise ValueError(f"{name}: range must be non-negative and ordered, got {lo}..{hi}")

    @staticmethod
    def _axis(spec: tuple[float, float, int]) -> np.ndarray:
        lo, hi, count = spec
        return np.linspace(lo, hi, count) if count > 1 else np.array([float(lo)])

    def g_values(self) -> np.ndarray:
        return self._axis(self.g_over_kappa)

    def ks_values(self) -> np.ndarray:
        return self._axis(self.ks_over_2kappa)

    def gate_spec(self, g: float, ks2: float) -> GateSpec:
        params = EmitterParams.from_figure_ratios(g, ks2, self.gamma_over_kappa)
        return GateSpec(self.kind, self.m, Mode.REALISTIC, self.leak_convention, params)


@dataclass(frozen=True)
class SweepRow:
    g_over_kappa: float
    ks_over_2kappa: float
    avg_fidelity: float
    avg_efficiency: float


def _sweep_row(args) -> list[SweepRow]:
    grid, g, quadrature_n = args
    rows = []
    for ks2 in grid.ks_values():
        pm = point_metrics(grid.gate_spec(g, ks2), quadrature_n, grid.fidelity_convention)
        rows.append(SweepRow(float(g), float(ks2), pm.avg_fidelity, pm.avg_efficiency))
    return rows


def sweep(grid: SweepGrid, quadrature_n: int | None = None, jobs: int = 1) -> list[SweepRow]:
    """Row-major table over (g/kappa outer, kappa_s/2kappa inner)."""
    n = quadrature_n or default_quadrature(grid.kind)
    tasks = [(grid, g, n) for g in grid.g_values()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            # map keeps task order, so output is independent of completion order
            chunks = list(pool.map(_sweep_row, tasks))
    else:
        chunks = [_sweep_row(t) for t in tasks]
    return [row for chunk in chunks for row in chunk]


@dataclass
class ConvergenceReport:
    n_values: list[int]
    fidelities: list[float]
    efficiencies: list[float]

    @property
    def deltas(self) -> list[float]:
        f = self.fidelities
        return [abs(b - a) for a, b in zip(f, f[1:])]


def quadrature_convergence(
    spec: GateSpec,
    n_list=(8, 16, 32, 64, 128),
    fidelity_convention: FidelityConvention = DEFAULT_FIDELITY,
) -> ConvergenceReport:
    ops = _ideal_operators(spec.kind, spec.m) if spec.mode is Mode.IDEAL else branch_operators(spec)
    fs, es = [], []
    for n in n_list:
        f, e = averages_from_operators(ops, spec, n, fidelity_convention)
        fs.append(f)
        es.append(e)
    return ConvergenceReport(list(n_list), fs, es)


CSV_HEADER = ("g_over_kappa", "ks_over_2kappa", "avg_fidelity", "avg_efficiency")


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([repr(float(getattr(row, k))) for k in CSV_HEADER])
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow], grid: SweepGrid, quadrature_n: int) -> str:
    doc = {
        "spec": {
            "gate": grid.kind.value,
            "m": grid.m,
            "g_over_kappa": list(grid.g_over_kappa),
            "ks_over_2kappa": list(grid.ks_over_2kappa),
            "gamma_over_kappa": grid.gamma_over_kappa,
        },
        "leak_convention": grid.leak_convention.value,
        "fidelity_convention": grid.fidelity_convention.value,
        "quadrature_n": quadrature_n,
        "rows": [asdict(r) for r in rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def with_convention(spec: GateSpec, leak: LeakConvention) -> GateSpec:
    return replace(spec, leak_convention=LeakConvention(leak))
