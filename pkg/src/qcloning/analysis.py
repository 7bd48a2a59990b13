"""Parameter sweeps, averages, the state-dependent optimizer and bound sampling."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence, TextIO

import numpy as np

from .cloners import (
    ClonerSpec,
    Machine,
    StateDepParams,
    copy_quality_batch,
    reduced_outputs,
    schwarz_bound,
)
from .config import TOL
from .core import InputQubit
from .errors import ParameterError
from .measures import XFormState, check_bound, concurrence, l1_coherence

__all__ = [
    "SweepResult",
    "OptimizerResult",
    "BoundReport",
    "sweep_alpha",
    "sweep_bh_concurrence",
    "sweep_statedep_concurrence",
    "average_copy_quality",
    "statedep_objective",
    "golden_section_max",
    "optimize_statedep",
    "sample_xform_states",
    "sample_bound",
    "cnot_coherence_check",
    "reference_values",
]

NA = None


def _fmt(value) -> str:
    if value is None:
        return "NA"
    return format(float(value), ".12g")


@dataclass
class SweepResult:
    """Rows of ``axis values + measure values``; ``None`` marks a missing cell."""

    axis_names: list[str]
    measure_names: list[str]
    rows: list[tuple] = field(default_factory=list)

    def __post_init__(self):
        width = len(self.axis_names) + len(self.measure_names)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"row {row} does not have {width} entries")
            for v in row:
                if v is not None and not math.isfinite(v):
                    raise ValueError(f"non-finite value in row {row}")

    @property
    def header(self) -> list[str]:
        return list(self.axis_names) + list(self.measure_names)

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([np.nan if r[i] is None else r[i] for r in self.rows], dtype=float)

    def write_csv(self, fh: TextIO) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows:
            writer.writerow([_fmt(v) for v in row])

    def to_csv(self) -> str:
        buf = io.StringIO()
        self.write_csv(buf)
        return buf.getvalue()


def _alphas(alpha_grid: Iterable[float]) -> np.ndarray:
    a = np.asarray(list(alpha_grid), dtype=float)
    if np.any(a < -TOL.normalization) or np.any(a > 1 + TOL.normalization):
        raise ParameterError("alpha values must lie in [0, 1]")
    return np.clip(a, 0.0, 1.0)


def _betas(alphas: np.ndarray, phase: float = 0.0) -> np.ndarray:
    return np.sqrt(np.clip(1.0 - alphas**2, 0.0, None)) * np.exp(1j * phase)


def sweep_alpha(spec: ClonerSpec, alpha_grid: Sequence[float], phase: float = 0.0) -> SweepResult:
    """All measures for real ``alpha`` and ``beta = sqrt(1 - alpha^2) e^{i phase}``."""
    alphas = _alphas(alpha_grid)
    betas = _betas(alphas, phase)
    two, clone_a, _ = reduced_outputs(spec, alphas, betas)
    conc = concurrence(two)
    l1_two = l1_coherence(two)
    l1_clone = l1_coherence(clone_a)
    dist = copy_quality_batch(spec, alphas, betas)
    rows = [
        (float(a), float(c), float(l), float(lc), float(d))
        for a, c, l, lc, d in zip(alphas, conc, l1_two, l1_clone, dist)
    ]
    return SweepResult(
        ["alpha"], ["concurrence", "l1_two_qubit", "l1_clone", "copy_quality"], rows
    )


def sweep_bh_concurrence(mu_grid: Sequence[float], alpha_grid: Sequence[float]) -> SweepResult:
    """Concurrence surface of the general B-H machine with ``nu = 1 - 2 mu``.

    Grid points with ``mu < 1/6`` break the Schwarz bound for this ``nu``; no
    machine realizes them, so their concurrence cell is ``None`` ("NA").
    """
    mus = np.asarray(list(mu_grid), dtype=float)
    if np.any(mus < -TOL.parameters) or np.any(mus > 0.5 + TOL.parameters):
        raise ParameterError("mu values must lie in [0, 1/2]")
    alphas = _alphas(alpha_grid)
    betas = _betas(alphas)
    rows = []
    for mu in mus:
        mu = float(min(max(mu, 0.0), 0.5))
        nu = 1.0 - 2.0 * mu
        if nu > schwarz_bound(mu) + TOL.parameters:
            rows.extend((mu, float(a), NA) for a in alphas)
            continue
        spec = ClonerSpec.bh_general(mu, nu)
        two, _, _ = reduced_outputs(spec, alphas, betas)
        conc = np.atleast_1d(concurrence(two))
        rows.extend((mu, float(a), float(c)) for a, c in zip(alphas, conc))
    return SweepResult(["mu", "alpha"], ["concurrence"], rows)


def sweep_statedep_concurrence(alpha_grid: Sequence[float], params: Optional[StateDepParams] = None) -> SweepResult:
    spec = ClonerSpec.state_dependent(params)
    alphas = _alphas(alpha_grid)
    two, _, _ = reduced_outputs(spec, alphas, _betas(alphas))
    conc = np.atleast_1d(concurrence(two))
    return SweepResult(["alpha"], ["concurrence"], [(float(a), float(c)) for a, c in zip(alphas, conc)])


def average_copy_quality(spec: ClonerSpec, num_points: int) -> float:
    """Average copy quality over pure inputs.

    Haar-random qubits have ``|alpha|^2`` uniform on [0, 1]; the relative
    phase does not change the distance for the machines here, so the average
    is a one-dimensional midpoint rule in ``p = |alpha|^2``.
    """
    if num_points < 2:
        raise ParameterError("num_points must be at least 2")
    p = (np.arange(num_points) + 0.5) / num_points
    return float(np.mean(copy_quality_batch(spec, np.sqrt(p), np.sqrt(1.0 - p))))


# -- state-dependent optimizer ------------------------------------------------

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def statedep_objective(params: StateDepParams) -> float:
    """Single-clone coherence coefficient, i.e. ``C_l1(clone) / (alpha beta)``.

    Evaluated from the reduced clone at ``alpha = beta = 1/sqrt(2)``.
    """
    h = 1.0 / math.sqrt(2.0)
    _, clone_a, _ = reduced_outputs(ClonerSpec.state_dependent(params), h, h)
    return 2.0 * l1_coherence(clone_a)


def golden_section_max(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12):
    """Maximize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))``."""
    a, b = min(lo, hi), max(lo, hi)
    c = b - _INV_PHI * (b - a)
    d = a + _INV_PHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
    best = max((fc, c), (fd, d), (f(a), a), (f(b), b))
    return best[1], best[0]


@dataclass
class OptimizerResult:
    best_value: float
    best_params: StateDepParams
    theta: float
    phi: float
    trace: list[tuple[int, float]]

    @property
    def family_residual(self) -> float:
        """Distance of ``theta + phi`` from ``pi/2``, the line of optima."""
        return abs(self.theta + self.phi - math.pi / 2)


def optimize_statedep(resolution: int = 41) -> OptimizerResult:
    """Maximize the single-clone coherence of the symmetric state-dependent cloner.

    Normalization is built in by the angles: ``a = cos(theta)``,
    ``b1 = b2 = sin(theta)/sqrt(2)`` and likewise ``phi`` for the ``|1>``
    branch. A ``resolution x resolution`` grid on ``[0, pi/2]^2`` seeds
    alternating golden-section line searches.
    """
    if resolution < 10:
        raise ParameterError("resolution must be at least 10")

    def objective(theta: float, phi: float) -> float:
        return statedep_objective(StateDepParams.from_angles(theta, phi))

    grid = np.linspace(0.0, math.pi / 2, resolution)
    best = (-math.inf, 0.0, 0.0)
    for th in grid:
        for ph in grid:
            val = objective(th, ph)
            if val > best[0]:
                best = (val, float(th), float(ph))
    value, theta, phi = best
    trace = [(0, value)]
    step = (math.pi / 2) / (resolution - 1)

    for rnd in range(1, 50):
        before = value
        lo, hi = max(theta - step, 0.0), min(theta + step, math.pi / 2)
        x, fx = golden_section_max(lambda t: objective(t, phi), lo, hi)
        if fx > value:
            theta, value = x, fx
        lo, hi = max(phi - step, 0.0), min(phi + step, math.pi / 2)
        x, fx = golden_section_max(lambda p: objective(theta, p), lo, hi)
        if fx > value:
            phi, value = x, fx
        trace.append((rnd, value))
        if value - before <= 1e-15:
            break

    params = StateDepParams.from_angles(theta, phi)
    return OptimizerResult(statedep_objective(params), params, theta, phi, trace)


# -- bound sampling ---------------------------------------------------------------


def sample_xform_states(num_samples: int, seed: int):
    """Random X-form states as arrays ``(a, b, d, e, c)``.

    Populations are flat-Dirichlet on the simplex, ``|c|`` is uniform on
    ``[0, sqrt(b d)]`` and its phase uniform. The generator is numpy's
    PCG64 seeded with ``seed``.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    pops = rng.dirichlet(np.ones(4), size=num_samples)
    mod = rng.random(num_samples) * np.sqrt(pops[:, 1] * pops[:, 2])
    phase = rng.random(num_samples) * 2.0 * np.pi
    return pops[:, 0], pops[:, 1], pops[:, 2], pops[:, 3], mod * np.exp(1j * phase)


@dataclass
class BoundReport:
    num_samples: int
    seed: int
    violations: int
    max_ratio: float
    max_oracle_gap: float
    max_l1_gap: float


def sample_bound(num_samples: int, seed: int = 0) -> BoundReport:
    """Check ``concurrence <= l1 coherence`` on random X-form states.

    Each sample goes through :func:`check_bound`; the closed forms are also
    compared with the Wootters concurrence and matrix l1 coherence.
    """
    if num_samples < 1:
        raise ParameterError("num_samples must be at least 1")
    a, b, d, e, c = sample_xform_states(num_samples, seed)
    violations = 0
    closed_conc = np.empty(num_samples)
    closed_l1 = np.empty(num_samples)
    for i in range(num_samples):
        res = check_bound(XFormState(float(a[i]), float(b[i]), float(d[i]), float(e[i]), complex(c[i])))
        closed_conc[i], closed_l1[i] = res.concurrence, res.l1
        violations += not res.holds

    mats = np.zeros((num_samples, 4, 4), dtype=complex)
    mats[:, 0, 0], mats[:, 1, 1], mats[:, 2, 2], mats[:, 3, 3] = a, b, d, e
    mats[:, 1, 2] = c
    mats[:, 2, 1] = np.conj(c)
    wootters = np.atleast_1d(concurrence(mats))
    l1 = np.atleast_1d(l1_coherence(mats))

    positive = closed_l1 > 0
    ratio = float(np.max(closed_conc[positive] / closed_l1[positive])) if positive.any() else 0.0
    return BoundReport(
        num_samples=num_samples,
        seed=seed,
        violations=int(violations),
        max_ratio=ratio,
        max_oracle_gap=float(np.max(np.abs(wootters - closed_conc))),
        max_l1_gap=float(np.max(np.abs(l1 - closed_l1))),
    )


def cnot_coherence_check(alpha_grid: Sequence[float]) -> SweepResult:
    """Input coherence vs. entanglement produced by the CNOT entangler."""
    spec = ClonerSpec(Machine.CNOT)
    c1 = _alphas(alpha_grid)
    c2 = _betas(c1)
    vec = np.stack([c1, c2], axis=-1).astype(complex)
    rho_in = vec[:, :, None] * np.conj(vec[:, None, :])
    two, _, _ = reduced_outputs(spec, c1, c2)
    l1_in = np.atleast_1d(l1_coherence(rho_in))
    conc = np.atleast_1d(concurrence(two))
    rows = [(float(x), float(l), float(k)) for x, l, k in zip(c1, l1_in, conc)]
    return SweepResult(["c1"], ["input_l1", "output_concurrence"], rows)


def reference_values(spec: ClonerSpec, inp: InputQubit) -> dict[str, float]:
    """Closed-form reference values for a machine and input, where they exist.

    Keys are ``concurrence``, ``coherence`` (two-qubit l1), ``clone_coherence``
    and ``copy_quality``. Forms stated only for real amplitudes use moduli.
    """
    pa, pb = abs(inp.alpha) ** 2, abs(inp.beta) ** 2
    ab = abs(inp.alpha) * abs(inp.beta)
    kind = spec.kind
    ref: dict[str, float] = {}
    if kind is Machine.WOOTTERS_ZUREK:
        ref = {"concurrence": 0.0, "coherence": 0.0, "clone_coherence": 0.0, "copy_quality": 2 * pa * (1 - pa)}
    elif kind is Machine.PHASE_COVARIANT:
        ref = {"concurrence": 0.0}
    elif kind is Machine.BH_OPTIMAL:
        ref = {"concurrence": 1 / 3, "coherence": (8 * ab + 1) / 3, "copy_quality": 1 / 18}
    elif kind is Machine.COHERENCE_MACHINE:
        ref = {"concurrence": 1.0, "coherence": 1.0, "clone_coherence": 0.0, "copy_quality": 0.5}
    elif kind is Machine.BH_GENERAL:
        mu, nu = spec.params.mu, spec.params.nu
        ref = {
            "coherence": 2 * mu + 4 * ab * nu,
            "copy_quality": 2 * mu**2 * (1 - 4 * pa * pb) + 2 * pa * pb * (nu - 1) ** 2,
        }
        if ab == 0.0:
            ref["concurrence"] = 2 * mu
    elif kind is Machine.STATE_DEPENDENT:
        p = spec.params
        ref = {"clone_coherence": 2 * (p.a_t * p.b2 + p.a * p.b2_t) * ab}
        # stated incoherent-input value; exceeds 1 for b1 > 1/2
        if pb == 0.0:
            ref["concurrence"] = 2 * p.b1
        elif pa == 0.0:
            ref["concurrence"] = 2 * p.b1_t
    elif kind is Machine.CNOT:
        ref = {"concurrence": 2 * ab, "coherence": 2 * ab}
    return ref
