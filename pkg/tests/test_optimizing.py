# Copyright (c) 2026 mcspeedup developers, MIT License
import logging
import math

import numpy as np
import pytest

from mcspeedup.configuring import load_config
from mcspeedup.modeling import (
    ChipBudget,
    ModelDomainError,
    PowerLaw,
    SolverError,
    Topology,
    WorkloadModel,
    extended_amdahl,
    speedup_sym,
)
from mcspeedup.optimizing import (
    MODELS,
    IntensityPreset,
    ModelSuite,
    Regime,
    advise_schedule,
    asymptotic_limit,
    golden_section_search,
    nearest_divisor,
    optimal_r_hm_sym,
    optimal_r_numeric,
    sweep_max_speedup_vs_sync,
    sweep_optimal_r_vs_f,
)

FIG6_SUITE = ModelSuite(conn=PowerLaw(0.001, 0.5), sync=PowerLaw(0.01))


@pytest.mark.parametrize(
    "f, r_opt, clamped",
    [(0.5, 256, True), (0.95, 256 * 0.05 / 0.95, False), (0.999, 1, True), (0.0, 256, True)],
)
def test_optimal_r_hm_sym(f, r_opt, clamped):
    result = optimal_r_hm_sym(256, f)
    assert result.r_opt == pytest.approx(r_opt)
    assert result.clamped is clamped


def test_optimal_r_hm_sym_example():
    result = optimal_r_hm_sym(256, 0.95)
    assert result.r_opt == pytest.approx(13.47, abs=0.01)
    assert result.r_divisor == 16


@pytest.mark.parametrize("n", [64, 256, 1024])
@pytest.mark.parametrize("f", [0.5, 0.9, 0.95, 0.99, 0.999])
def test_numeric_optimum_matches_closed_form(n, f):
    exact = optimal_r_hm_sym(n, f)
    found = optimal_r_numeric(ModelSuite().handle("hill-marty", n, f), n)
    assert found.r_opt == pytest.approx(exact.r_opt, rel=0.02)
    assert found.speedup_max == pytest.approx(exact.speedup_max, rel=1e-3)


def test_numeric_optimum_is_at_least_as_good_as_grid():
    handle = FIG6_SUITE.handle("ours", 256, 0.999)
    result = optimal_r_numeric(handle, 256)
    grid = np.geomspace(1, 256, 1000)
    assert result.speedup_max >= np.max(handle(grid)) * (1 - 1e-9)
    assert 1 < result.r_opt < 256
    assert not result.clamped


@pytest.mark.parametrize("model", ["ours", "hill-marty", "cassidy", "gunther"])
def test_fully_sequential_workload_wants_one_big_core(model):
    result = optimal_r_numeric(ModelSuite().handle(model, 256, 0.0), 256)
    assert result.r_opt == pytest.approx(256)
    assert result.clamped


def test_larger_cores_pay_off_with_data_movement():
    ours = optimal_r_numeric(FIG6_SUITE.handle("ours", 256, 0.999), 256)
    assert ours.r_opt > optimal_r_hm_sym(256, 0.999).r_opt


def test_optimal_r_numeric_rejects_coarse_grid():
    with pytest.raises(ModelDomainError):
        optimal_r_numeric(lambda r: r, 256, grid_size=100)


def test_optimal_r_numeric_single_bce():
    result = optimal_r_numeric(lambda r: np.sqrt(r), 1)
    assert result.r_opt == 1
    assert result.clamped


def test_optimal_r_numeric_reports_non_finite():
    def model(r):
        return np.where(np.asarray(r) > 100, np.nan, 1.0)

    with pytest.raises(SolverError, match="r="):
        optimal_r_numeric(model, 256)


def test_golden_section_search():
    c, d = golden_section_search(lambda x: (x - 2) ** 2, 0, 5, tol=1e-8)
    assert d - c <= 1e-8
    assert c <= 2 + 1e-8 and d >= 2 - 1e-8


def test_golden_section_search_step_budget(caplog):
    with caplog.at_level(logging.WARNING, logger="mcspeedup"):
        c, d = golden_section_search(lambda x: (x - 0.3) ** 2, 0, 1, tol=1e-12, max_steps=10)
    assert "stopped after 10 of" in caplog.text
    assert d - c > 1e-12
    assert c <= 0.3 <= d


def test_nearest_divisor():
    assert nearest_divisor(256, 13.47) == 16
    assert nearest_divisor(256, 1) == 1
    assert nearest_divisor(100.5, 3) is None


def test_model_suite_handles():
    for name in MODELS:
        value = ModelSuite().handle(name, 256, 0.9)(np.array([1.0, 16.0]))
        assert np.all(np.isfinite(value)) and np.all(value > 0)
    with pytest.raises(ModelDomainError):
        ModelSuite().handle("roofline", 256, 0.9)
    with pytest.raises(ModelDomainError):
        ModelSuite().handle("cassidy", 256, 0.9, Topology.ASYMMETRIC)


@pytest.mark.parametrize(
    "conn, sync, value, regime",
    [
        (PowerLaw(0.01, 0.5), PowerLaw(0.01, -1), 20, Regime.AMDAHL_BOUND),
        (PowerLaw(0.01, 1), PowerLaw(0.01, 0), 1 / 0.07, Regime.CONSTANT_OVERHEAD),
        (PowerLaw(0.01, 0.5), PowerLaw(0.01, 0.5), 0, Regime.VANISHING),
        (PowerLaw(0.01, 2), PowerLaw(0.01, -1), 0, Regime.VANISHING),
        (PowerLaw(0.0, 2), PowerLaw(0.0, 3), 20, Regime.AMDAHL_BOUND),
    ],
)
def test_asymptotic_limit(conn, sync, value, regime):
    result = asymptotic_limit(0.95, conn, sync)
    assert result.limit_value == pytest.approx(value)
    assert result.regime is regime


def test_asymptotic_limit_example_values():
    assert asymptotic_limit(0.95, PowerLaw(0.01, 1), PowerLaw(0.01)).limit_value == pytest.approx(
        14.2857, rel=1e-5
    )
    assert asymptotic_limit(1.0, PowerLaw(0.0), PowerLaw(0.0)).limit_value == math.inf


@pytest.mark.parametrize(
    "conn, sync",
    [
        (PowerLaw(0.01, 0.5), PowerLaw(0.01, -1)),
        (PowerLaw(0.01, 1), PowerLaw(0.01, 0)),
        (PowerLaw(0.01, 0.5), PowerLaw(0.01, 0.5)),
    ],
)
def test_limit_agrees_with_many_cores(conn, sync):
    limit = asymptotic_limit(0.95, conn, sync)
    value = extended_amdahl(0.95, 2 ** 20, WorkloadModel(0.95, conn, sync))
    if limit.regime is Regime.VANISHING:
        assert value < 1
    else:
        assert value == pytest.approx(limit.limit_value, rel=0.01)


def test_sweep_vs_sync_labels_and_axis():
    curves = sweep_max_speedup_vs_sync(256, [0.9], [-1.0, 0.0, 1.0])
    assert [c.label for c in curves] == ["ours__f=0.9", "hill-marty__f=0.9"]
    assert all(c.axis == "q" for c in curves)
    np.testing.assert_array_equal(curves[0].x, [-1.0, 0.0, 1.0])


def test_sweep_vs_sync_approaches_hill_marty():
    qs = np.linspace(-2, 1, 13)
    curves = sweep_max_speedup_vs_sync(256, [0.5, 0.999], qs)
    ours = {c.label: c for c in curves}
    for f, rel in (("0.999", 0.02), ("0.5", 0.05)):
        reference = ours[f"hill-marty__f={f}"].value[0]
        assert ours[f"ours__f={f}"].value[0] == pytest.approx(reference, rel=rel)
    for f in ("0.5", "0.999"):
        value = ours[f"ours__f={f}"].value
        assert np.all(value <= ours[f"hill-marty__f={f}"].value * (1 + 1e-9))
        assert np.all(np.diff(value[qs > 0]) <= 1e-9)
    steep = ours["ours__f=0.999"].value[qs > 0]
    assert np.all(np.diff(steep) < 0)


def test_sweep_vs_sync_workers_keep_order():
    qs = np.linspace(-2, 1, 7)
    serial = sweep_max_speedup_vs_sync(256, [0.99], qs)
    pooled = sweep_max_speedup_vs_sync(256, [0.99], qs, workers=4)
    for a, b in zip(serial, pooled):
        np.testing.assert_array_equal(a.value, b.value)


def _optimal_r(preset, fs):
    config = load_config(preset)
    curves = sweep_optimal_r_vs_f(256, fs, config.optimal.presets)
    return {c.label: c for c in curves}


@pytest.mark.parametrize("preset", ["fig12", "fig13"])
def test_data_movement_never_shrinks_the_optimal_core(preset):
    fs = [0.95, 0.99, 0.999]
    curves = _optimal_r(preset, fs)
    reference = curves.pop("hill-marty")
    assert len(curves) == 3
    for curve in curves.values():
        assert np.all(curve.value >= reference.value * (1 - 1e-3))
        speedups = curve.meta["speedup_max"]
        assert np.all(speedups <= reference.meta["speedup_max"] * (1 + 1e-9))


def test_linear_connectivity_wants_larger_cores():
    curves = _optimal_r("fig12", [0.999])
    assert curves["ours__f1=0.001*nc^1"].value[0] > curves["ours__f1=0.001*nc^0.5"].value[0]


def test_optimal_core_on_mostly_serial_workloads():
    curves = _optimal_r("fig13", [0.5])
    reference = curves.pop("hill-marty").value[0]
    for curve in curves.values():
        assert curve.value[0] == pytest.approx(reference, rel=0.1)


def test_optimal_r_vs_f_reference_tends_to_smallest_core():
    fs = np.linspace(0.5, 0.999, 20)
    curves = sweep_optimal_r_vs_f(256, fs, [IntensityPreset("sync", sync=PowerLaw(0.01))])
    reference, ours = curves
    assert reference.value[-1] == pytest.approx(1)
    assert np.all(np.diff(reference.value) <= 0)
    assert ours.value[-1] > 1
    assert ours.axis == "f"


def test_advise_sequential_when_synchronization_dominates():
    workload = WorkloadModel(0.999, sync=PowerLaw(1.0))
    advice = advise_schedule(256, workload)
    assert advice.decision == "sequential"
    assert advice.recommended_cores == 1
    assert advice.expected_speedup == pytest.approx(16)


def test_advise_parallel_without_data_movement():
    advice = advise_schedule(256, WorkloadModel(0.999))
    assert advice.decision == "parallel"
    assert advice.recommended_r == pytest.approx(1, rel=0.02)
    assert advice.expected_speedup > 16


def test_advise_tie_goes_to_single_core():
    advice = advise_schedule(256, WorkloadModel(0.5))
    assert advice.decision == "sequential"
    assert advice.expected_speedup == 16


def test_advise_larger_cores_with_connectivity():
    advice = advise_schedule(256, WorkloadModel(0.999, conn=PowerLaw(0.01, 1)))
    assert advice.decision == "parallel"
    assert advice.recommended_r > optimal_r_hm_sym(256, 0.999).r_opt
    assert advice.recommended_cores == int(256 / advice.recommended_r)


def test_advice_is_reproducible():
    workload = WorkloadModel(0.99, PowerLaw(0.001, 0.5), PowerLaw(0.01))
    advice = advise_schedule(256, workload)
    expected = speedup_sym(ChipBudget(256, advice.recommended_r), workload)
    assert advice.expected_speedup == pytest.approx(expected, rel=1e-12)
    assert advise_schedule(256, workload) == advice
