import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcloning.analysis import (
    SweepResult,
    average_copy_quality,
    cnot_coherence_check,
    golden_section_max,
    optimize_statedep,
    reference_values,
    sample_bound,
    sample_xform_states,
    statedep_objective,
    sweep_alpha,
    sweep_bh_concurrence,
    sweep_statedep_concurrence,
)
from qcloning.cloners import ClonerSpec, StateDepParams
from qcloning.core import InputQubit
from qcloning.errors import ParameterError

SQ2 = math.sqrt(2.0)


# -- SweepResult ----------------------------------------------------------------------


def test_sweep_result_csv_format():
    res = SweepResult(["x"], ["y", "z"], [(0.1, 1 / 3, None), (1.0, 2.0, 1e-20)])
    assert res.to_csv() == "x,y,z\n0.1,0.333333333333,NA\n1,2,1e-20\n"
    assert np.isnan(res.column("z")[0])


def test_sweep_result_rejects_bad_rows():
    with pytest.raises(ValueError):
        SweepResult(["x"], ["y"], [(1.0,)])
    with pytest.raises(ValueError):
        SweepResult(["x"], ["y"], [(1.0, float("nan"))])


# -- sweeps -------------------------------------------------------------------------------


def test_sweep_alpha_wz():
    res = sweep_alpha(ClonerSpec("wz"), np.linspace(0, 1, 11))
    assert res.header == ["alpha", "concurrence", "l1_two_qubit", "l1_clone", "copy_quality"]
    a = res.column("alpha")
    np.testing.assert_allclose(res.column("copy_quality"), 2 * a**2 * (1 - a**2), atol=1e-15)
    assert np.all(res.column("concurrence") <= 1e-12)


def test_sweep_alpha_rejects_out_of_range():
    with pytest.raises(ParameterError):
        sweep_alpha(ClonerSpec("wz"), [0.5, 1.5])


def test_sweep_bh_concurrence_edges():
    res = sweep_bh_concurrence([1 / 6, 0.5], np.linspace(0, 1, 11))
    c = res.column("concurrence")
    np.testing.assert_allclose(c[:11], 1 / 3, atol=1e-9)
    np.testing.assert_allclose(c[11:], 1.0, atol=1e-9)


def test_sweep_bh_concurrence_flags_unphysical_mu():
    res = sweep_bh_concurrence([0.0, 0.1, 0.2], [0.0, 1.0])
    assert [r[2] is None for r in res.rows] == [True, True, True, True, False, False]
    assert "NA" in res.to_csv()
    with pytest.raises(ParameterError):
        sweep_bh_concurrence([0.7], [0.5])


def test_sweep_statedep_endpoints():
    res = sweep_statedep_concurrence(np.linspace(0, 1, 101))
    c = res.column("concurrence")
    # alpha = 0 is the |1> input, alpha = 1 the |0> input
    assert c[0] == pytest.approx(2 * 0.491902**2, abs=2e-6)
    assert c[-1] == pytest.approx(2 * 0.507969**2, abs=2e-6)
    assert np.all(c > 0)


def test_cnot_check():
    res = cnot_coherence_check(np.linspace(0, 1, 21))
    np.testing.assert_allclose(res.column("input_l1"), res.column("output_concurrence"), atol=1e-9)
    i = int(np.argmin(np.abs(res.column("c1") - 0.6)))
    assert res.column("output_concurrence")[i] == pytest.approx(0.96, abs=1e-12)


# -- averages -----------------------------------------------------------------------------


@pytest.mark.parametrize(
    "spec,expected",
    [
        (ClonerSpec("wz"), 1 / 3),
        (ClonerSpec("bh-optimal"), 1 / 18),
        (ClonerSpec("coherence-machine"), 0.5),
        (ClonerSpec.bh_general(0.2, 0.5), 2 * 0.2**2 / 3 + 0.25 / 3),
    ],
)
def test_average_copy_quality(spec, expected):
    assert average_copy_quality(spec, 10_000) == pytest.approx(expected, abs=1e-4)


def test_average_converges():
    # midpoint rule on a quadratic in p: error shrinks as 1/N^2
    errs = [abs(average_copy_quality(ClonerSpec("wz"), n) - 1 / 3) for n in (10, 100, 1000)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[1] / errs[2] == pytest.approx(100, rel=0.01)


def test_average_needs_points():
    with pytest.raises(ParameterError):
        average_copy_quality(ClonerSpec("wz"), 1)


# -- optimizer -------------------------------------------------------------------------------


def test_golden_section_examples():
    x, fx = golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-6) and fx == pytest.approx(0.0, abs=1e-12)
    x, _ = golden_section_max(math.sin, 0.0, math.pi)
    assert x == pytest.approx(math.pi / 2, abs=1e-6)
    x, _ = golden_section_max(lambda t: t, 0.0, 2.0)
    assert x == pytest.approx(2.0)


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 10))
def test_golden_section_parabola(center, width):
    lo, hi = center - width, center + 2 * width
    x, _ = golden_section_max(lambda t: -((t - center) ** 2), lo, hi)
    assert abs(x - center) <= 1e-5


def test_objective_closed_form():
    assert statedep_objective(StateDepParams.from_angles(math.pi / 4, math.pi / 4)) == pytest.approx(SQ2, abs=1e-12)
    for th, ph in [(0.2, 0.4), (1.0, 0.1), (0.7, 0.87)]:
        assert statedep_objective(StateDepParams.from_angles(th, ph)) == pytest.approx(
            SQ2 * math.sin(th + ph), abs=1e-12
        )


def test_optimizer_reaches_sqrt2():
    res = optimize_statedep()
    assert abs(res.best_value - SQ2) <= 1e-6
    assert res.family_residual <= 1e-5
    values = [v for _, v in res.trace]
    assert all(b >= a for a, b in zip(values, values[1:]))
    assert res.best_params.symmetric


def test_optimizer_coarse_grid():
    assert abs(optimize_statedep(11).best_value - SQ2) <= 1e-6
    with pytest.raises(ParameterError):
        optimize_statedep(5)


def test_six_decimal_amplitudes_near_optimum():
    assert abs(statedep_objective(StateDepParams.reference_optimum()) - SQ2) <= 1e-4


# -- bound sampling ---------------------------------------------------------------------------


def test_sampling_is_reproducible():
    a1 = sample_xform_states(50, seed=3)
    a2 = sample_xform_states(50, seed=3)
    a3 = sample_xform_states(50, seed=4)
    for x, y in zip(a1, a2):
        np.testing.assert_array_equal(x, y)
    assert not np.array_equal(a1[0], a3[0])


def test_samples_are_valid_xform_states():
    a, b, d, e, c = sample_xform_states(500, seed=11)
    np.testing.assert_allclose(a + b + d + e, 1.0, atol=1e-12)
    assert np.all(np.abs(c) <= np.sqrt(b * d) + 1e-15)


def test_sample_bound_small():
    rep = sample_bound(2000, seed=1)
    assert rep.violations == 0
    assert rep.max_ratio <= 1.0
    assert rep.max_oracle_gap <= 1e-9 and rep.max_l1_gap <= 1e-12
    assert rep == sample_bound(2000, seed=1)


def test_sample_bound_needs_samples():
    with pytest.raises(ParameterError):
        sample_bound(0)


# -- reference values ----------------------------------------------------------------------------


def test_reference_values():
    inp = InputQubit.from_alpha(1 / SQ2)
    ref = reference_values(ClonerSpec("bh-optimal"), inp)
    assert ref["coherence"] == pytest.approx(5 / 3)
    assert reference_values(ClonerSpec("cnot"), inp)["concurrence"] == pytest.approx(1.0)
    ref = reference_values(ClonerSpec.bh_general(0.25, 0.5), InputQubit.from_alpha(1.0))
    assert ref["concurrence"] == 0.5
    ref = reference_values(ClonerSpec.state_dependent(), InputQubit.from_alpha(1.0))
    assert ref["concurrence"] == pytest.approx(2 * 0.507969)
    assert reference_values(ClonerSpec("phase-cov"), inp) == {"concurrence": 0.0}
