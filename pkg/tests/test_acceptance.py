"""Exit criteria. A summary line per criterion is printed at the end of the run."""
import io
import math
from contextlib import redirect_stderr, redirect_stdout

import numpy as np
import pytest

from qcloning.analysis import (
    average_copy_quality,
    cnot_coherence_check,
    optimize_statedep,
    sample_bound,
    statedep_objective,
)
from qcloning.cli import main
from qcloning.cloners import (
    ClonerSpec,
    Machine,
    StateDepParams,
    copy_quality_batch,
    reduced_outputs,
    schwarz_bound,
    verify_unitarity,
)
from qcloning.measures import concurrence, l1_coherence

ALPHAS = np.linspace(0.0, 1.0, 21)
BETAS = np.sqrt(1.0 - ALPHAS**2)
SQ2 = math.sqrt(2.0)

acceptance = pytest.mark.acceptance


def measures(spec, alpha, beta):
    two, clone_a, _ = reduced_outputs(spec, alpha, beta)
    return (
        np.atleast_1d(concurrence(two)),
        np.atleast_1d(l1_coherence(two)),
        np.atleast_1d(l1_coherence(clone_a)),
        np.atleast_1d(copy_quality_batch(spec, alpha, beta)),
        clone_a,
    )


def worst(values, target):
    return float(np.max(np.abs(np.asarray(values) - target)))


# -- 1: Wootters-Zurek ------------------------------------------------------------------


@acceptance(1, "zero concurrence and coherences")
def test_wz_zero_measures():
    conc, l1_two, l1_clone, _, _ = measures(ClonerSpec(Machine.WOOTTERS_ZUREK), ALPHAS, BETAS)
    for name, v in (("concurrence", conc), ("l1 two-qubit", l1_two), ("l1 clone", l1_clone)):
        assert worst(v, 0.0) <= 1e-10, name


@acceptance(1, "copy quality 2|a|^2(1-|a|^2)")
def test_wz_copy_quality():
    _, _, _, dist, _ = measures(ClonerSpec(Machine.WOOTTERS_ZUREK), ALPHAS, BETAS)
    assert worst(dist, 2 * ALPHAS**2 * (1 - ALPHAS**2)) <= 1e-10


@acceptance(1, "average copy quality 1/3")
def test_wz_average():
    assert abs(average_copy_quality(ClonerSpec(Machine.WOOTTERS_ZUREK), 10_000) - 1 / 3) <= 1e-4


# -- 2: phase-covariant ------------------------------------------------------------------------

# ten inputs, none with a real relative phase
COMPLEX_ALPHAS = np.arange(1, 11) / 11
COMPLEX_PHASES = 2 * np.pi * np.arange(1, 11) / 11 + np.pi / 22


@acceptance(2, "separable for 21 real inputs")
def test_phase_cov_real_inputs():
    conc, *_ = measures(ClonerSpec(Machine.PHASE_COVARIANT), ALPHAS, BETAS)
    assert worst(conc, 0.0) <= 1e-9


@acceptance(2, "separable for 10 complex-phase inputs")
def test_phase_cov_complex_inputs():
    betas = np.sqrt(1 - COMPLEX_ALPHAS**2) * np.exp(1j * COMPLEX_PHASES)
    conc, *_ = measures(ClonerSpec(Machine.PHASE_COVARIANT), COMPLEX_ALPHAS, betas)
    assert worst(conc, 0.0) <= 1e-9, f"max concurrence {conc.max():.6f}"


@acceptance(2, "|0> input coherences")
def test_phase_cov_zero_input():
    _, l1_two, l1_clone, _, _ = measures(ClonerSpec(Machine.PHASE_COVARIANT), 1.0, 0.0)
    assert abs(l1_two[0] - 0.5) <= 1e-10
    assert abs(l1_clone[0]) <= 1e-10


# -- 3: B-H optimal -----------------------------------------------------------------------------


@acceptance(3, "constant concurrence and copy quality")
def test_bh_optimal_constants():
    conc, _, _, dist, _ = measures(ClonerSpec(Machine.BH_OPTIMAL), ALPHAS, BETAS)
    assert worst(conc, 1 / 3) <= 1e-9
    assert worst(dist, 1 / 18) <= 1e-10


@acceptance(3, "coherence (8ab+1)/3")
def test_bh_optimal_coherence():
    _, l1_two, _, _, _ = measures(ClonerSpec(Machine.BH_OPTIMAL), ALPHAS, BETAS)
    assert worst(l1_two, (8 * ALPHAS * BETAS + 1) / 3) <= 1e-9


@acceptance(3, "incoherent inputs")
def test_bh_optimal_incoherent():
    conc, l1_two, _, _, _ = measures(ClonerSpec(Machine.BH_OPTIMAL), np.array([1.0, 0.0]), np.array([0.0, 1.0]))
    assert worst(conc, 1 / 3) <= 1e-9
    assert worst(l1_two, 1 / 3) <= 1e-9


# -- 4: coherence machine -------------------------------------------------------------------------


@acceptance(4, "unit coherence and concurrence, copy quality 1/2, mixed clone")
def test_coherence_machine():
    for spec in (ClonerSpec(Machine.COHERENCE_MACHINE), ClonerSpec.bh_general(0.5, 0.0)):
        conc, l1_two, _, dist, clone_a = measures(spec, ALPHAS, BETAS)
        assert worst(l1_two, 1.0) <= 1e-10
        assert worst(conc, 1.0) <= 1e-10
        assert worst(dist, 0.5) <= 1e-10
        assert worst(clone_a, np.eye(2) / 2) <= 1e-10


# -- 5: general B-H ----------------------------------------------------------------------------------


def bh_grid():
    for mu in np.linspace(0.0, 0.5, 5):
        for nu in np.linspace(0.0, schwarz_bound(mu), 5):
            yield float(mu), float(nu)


ALPHAS_11 = np.linspace(0.0, 1.0, 11)
BETAS_11 = np.sqrt(1.0 - ALPHAS_11**2)


@acceptance(5, "incoherent-input concurrence 2mu")
def test_bh_general_incoherent():
    for mu, nu in bh_grid():
        conc, *_ = measures(ClonerSpec.bh_general(mu, nu), np.array([1.0, 0.0]), np.array([0.0, 1.0]))
        assert worst(conc, 2 * mu) <= 1e-9, (mu, nu)


@acceptance(5, "copy-quality closed form")
def test_bh_general_copy_quality():
    pa, pb = ALPHAS_11**2, BETAS_11**2
    for mu, nu in bh_grid():
        _, _, _, dist, _ = measures(ClonerSpec.bh_general(mu, nu), ALPHAS_11, BETAS_11)
        expected = 2 * mu**2 * (1 - 4 * pa * pb) + 2 * pa * pb * (nu - 1) ** 2
        assert worst(dist, expected) <= 1e-9, (mu, nu)


@acceptance(5, "coherence 2mu + 4ab nu")
def test_bh_general_coherence():
    for mu, nu in bh_grid():
        _, l1_two, _, _, _ = measures(ClonerSpec.bh_general(mu, nu), ALPHAS_11, BETAS_11)
        assert worst(l1_two, 2 * mu + 4 * ALPHAS_11 * BETAS_11 * nu) <= 1e-9, (mu, nu)


@acceptance(5, "isometry")
def test_bh_general_isometry():
    for mu, nu in bh_grid():
        rep = verify_unitarity(ClonerSpec.bh_general(mu, nu))
        assert rep.max_violation < 1e-12 and rep.machine_vector_violation < 1e-12, (mu, nu)


# -- 6: bound sampler ------------------------------------------------------------------------------------


@acceptance(6, "1e5 seeded X-form states")
def test_bound_sampler():
    rep = sample_bound(100_000, seed=42)
    assert rep.violations == 0
    assert rep.max_oracle_gap <= 1e-9


# -- 7: CNOT ---------------------------------------------------------------------------------------------


@acceptance(7, "output concurrence equals input coherence")
def test_cnot():
    res = cnot_coherence_check(ALPHAS)
    assert worst(res.column("output_concurrence"), res.column("input_l1")) <= 1e-9


# -- 8: state-dependent cloner ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "params",
    [StateDepParams.reference_optimum(), StateDepParams.from_angles(math.pi / 4, math.pi / 4)],
    ids=["six-decimal", "exact"],
)
@acceptance(8, "|0> concurrence equals 2 b1")
def test_statedep_zero_input_concurrence(params):
    conc, *_ = measures(ClonerSpec.state_dependent(params), 1.0, 0.0)
    assert abs(conc[0] - 2 * params.b1) <= 1e-9, f"concurrence {conc[0]:.6f} vs 2 b1 = {2 * params.b1:.6f}"


@acceptance(8, "clone coherence 2(a_t b2 + a b2_t) ab")
def test_statedep_clone_coherence():
    for theta, phi in [(math.pi / 4, math.pi / 4), (0.3, 1.1), (1.0, 0.2), (0.8, 0.77)]:
        p = StateDepParams.from_angles(theta, phi)
        _, _, l1_clone, _, _ = measures(ClonerSpec.state_dependent(p), ALPHAS, BETAS)
        assert worst(l1_clone, 2 * (p.a_t * p.b2 + p.a * p.b2_t) * ALPHAS * BETAS) <= 1e-9


@acceptance(8, "optimizer reaches sqrt 2")
def test_statedep_optimizer():
    assert abs(optimize_statedep().best_value - SQ2) <= 1e-6


@acceptance(8, "six-decimal optimum near sqrt 2")
def test_statedep_six_decimals():
    assert abs(statedep_objective(StateDepParams.reference_optimum()) - SQ2) <= 1e-4


# -- 9: figure data ------------------------------------------------------------------------------------------


def run_cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with redirect_stdout(out), redirect_stderr(err):
        code = main(list(argv))
    assert code == 0, err.getvalue()


def read_rows(path):
    lines = path.read_text().splitlines()
    return lines[0].split(","), [line.split(",") for line in lines[1:]]


@acceptance(9, "mu-alpha surface deterministic with edge values")
def test_figure_surface(tmp_path):
    paths = [tmp_path / "s1.csv", tmp_path / "s2.csv"]
    for p in paths:
        run_cli("sweep", "--machine", "bh-general", "--mu", f"{1 / 6!r}:0.5:35", "--alpha", "0:1:101", "-o", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    header, rows = read_rows(paths[0])
    assert header == ["mu", "alpha", "concurrence"] and len(rows) == 35 * 101
    mu = np.array([float(r[0]) for r in rows])
    conc = np.array([float(r[2]) for r in rows])
    assert worst(conc[np.isclose(mu, 0.5, atol=1e-12)], 1.0) <= 1e-9
    assert worst(conc[np.isclose(mu, 1 / 6, atol=1e-12)], 1 / 3) <= 1e-9


@acceptance(9, "state-dependent curve deterministic and positive")
def test_figure_curve(tmp_path):
    paths = [tmp_path / "c1.csv", tmp_path / "c2.csv"]
    for p in paths:
        run_cli("sweep", "--machine", "state-dep", "--alpha", "0:1:101", "-o", str(p))
    assert paths[0].read_bytes() == paths[1].read_bytes()
    _, rows = read_rows(paths[0])
    conc = np.array([float(r[1]) for r in rows])
    nonpositive = conc <= 0.0
    # any zero must be an isolated grid point
    assert not np.any(nonpositive[1:] & nonpositive[:-1])
    assert nonpositive.sum() <= 0.05 * conc.size
