# Copyright (c) 2026 mcspeedup developers, MIT License
import logging

import numpy as np
import pytest

from mcspeedup.modeling import ModelDomainError, SimulationError
from mcspeedup.simulating import (
    PHASES,
    TRACE_COLUMNS,
    Multicore,
    SimConfig,
    SimReport,
    divisors,
    measure_intensities,
    run_parallel,
    run_serial,
    simulate,
    speedup_curve_sim,
    trace_table,
)
from mcspeedup.workloads import WORKLOADS, declared_volumes

NAMES = ("black-scholes", "fft", "dmm")


@pytest.mark.parametrize(
    "name, cycles",
    [("fft", 10240), ("dmm", 8192), ("black-scholes", 143360)],
)
def test_serial_run(name, cycles):
    t1, output = run_serial(name, 256)
    assert t1 == cycles
    assert output is not None


@pytest.mark.parametrize(
    "name, f2",
    [("black-scholes", 2048 / 143360), ("fft", 0.05), ("dmm", 0.09375)],
)
def test_synchronization_intensity_is_constant(sweeps, name, f2):
    measured = sweeps[name].f2.value
    # a single core keeps its data in place
    np.testing.assert_allclose(measured[:-1], f2, rtol=1e-12)
    assert measured[-1] == 0


def test_synchronization_intensity_example(sweeps):
    assert sweeps["black-scholes"].f2.value[0] == pytest.approx(0.0142857, rel=1e-5)


def test_black_scholes_never_communicates(sweeps):
    np.testing.assert_array_equal(sweeps["black-scholes"].f1.value, 0)


def test_connectivity_intensity_on_most_cores(sweeps):
    assert sweeps["fft"].f1.value[0] == pytest.approx(0.2)
    assert sweeps["dmm"].f1.value[0] == pytest.approx(1.0)


@pytest.mark.parametrize("name", NAMES)
def test_connectivity_intensity_falls_with_core_size(sweeps, name):
    assert np.all(np.diff(sweeps[name].f1.value) <= 0)


def test_dmm_skips_non_square_core_counts(sweeps):
    np.testing.assert_array_equal(sweeps["dmm"].speedup.x, [1, 4, 16, 64, 256])
    np.testing.assert_array_equal(sweeps["fft"].speedup.x, divisors(256))


@pytest.mark.parametrize("name", NAMES)
def test_single_big_core(sweeps, name):
    run = sweeps[name].runs[-1]
    assert run.config.cores == 1
    assert run.report.speedup == 16
    assert run.trace.t_sync_down == run.trace.t_sync_up == run.trace.t_comm == 0


@pytest.mark.parametrize("name", NAMES)
def test_speedup_peaks_inside_the_range(sweeps, name):
    curve = sweeps[name].speedup
    r, _ = curve.peak()
    assert 1 < r < 256


def test_speedup_examples(sweeps):
    assert sweeps["black-scholes"].speedup.peak()[0] == 4
    assert sweeps["fft"].speedup.peak()[0] == 16
    assert sweeps["dmm"].speedup.peak()[0] == 16


@pytest.mark.parametrize("name", NAMES)
def test_model_overlay_follows_simulation(sweeps, name):
    sweep = sweeps[name]
    np.testing.assert_allclose(sweep.overlay.value, sweep.speedup.value, rtol=0.15)


@pytest.mark.parametrize("name", NAMES)
def test_runs_conserve_cycles_and_elements(sweeps, name):
    for run in sweeps[name].runs:
        assert run.report.tmc == run.trace.tmc
        volumes = declared_volumes(name, 256, run.config.cores)
        assert (run.moved_sync, run.moved_comm) == volumes
        assert run.error <= WORKLOADS[name].tolerance
        assert run.report.speedup == pytest.approx(run.report.t1_serial / run.report.tmc)


def test_black_scholes_phase_times():
    run = simulate("black-scholes", SimConfig(256, core_size=4))
    assert run.trace.t_sync_down == 768
    assert run.trace.t_sync_up == 256
    assert run.trace.t_compute == 1120
    assert run.trace.t_comm == 0
    assert run.report.tmc == 2144


def test_runs_are_deterministic():
    config = SimConfig(256, core_size=16)
    for name in NAMES:
        assert simulate(name, config) == simulate(name, config)
        assert run_parallel(name, config) == simulate(name, config).report


def test_trace_events():
    run = simulate("black-scholes", SimConfig(256, core_size=16))
    header, rows = trace_table(run)
    assert header == list(TRACE_COLUMNS)
    assert {row[0] for row in rows} <= set(PHASES)
    down = [row for row in rows if row[0] == "sync_down"]
    assert len(down) == 16
    assert sum(row[4] for row in down) == 6 * 256
    assert down[-1][2] - down[0][1] == run.trace.t_sync_down
    assert all(row[1] <= row[2] for row in rows)


def test_infeasible_layout():
    with pytest.raises(SimulationError, match="cannot be laid out"):
        simulate("dmm", SimConfig(256, core_size=2))


def test_sweep_without_feasible_core_size(caplog):
    with caplog.at_level(logging.WARNING, logger="mcspeedup"):
        with pytest.raises(SimulationError):
            speedup_curve_sim("dmm", 256, rs=[2, 8])
    skipped = [rec for rec in caplog.records if "Skipped dmm at r=2" in rec.getMessage()]
    assert [rec.levelno for rec in skipped] == [logging.WARNING]


def test_run_logs_moved_elements(caplog):
    with caplog.at_level(logging.DEBUG, logger="mcspeedup"):
        simulate("fft", SimConfig(256, core_size=16))
    assert "moved 512 + 1024 complex samples" in caplog.text


@pytest.mark.parametrize(
    "kw",
    [
        dict(core_size=3),
        dict(total_bce=512, core_size=1),
        dict(core_size=0),
        dict(transfer_cost=-1),
    ],
)
def test_sim_config_rejects(kw):
    with pytest.raises(ModelDomainError):
        SimConfig(256, **kw)


def test_sim_config_cores():
    config = SimConfig(256, core_size=16)
    assert config.total_bce == 256
    assert config.cores == 16
    assert config.perf == 4


def test_exchange_rejects_duplicate_delivery():
    machine = Multicore(SimConfig(4, core_size=2))
    payload = np.zeros(2)
    with pytest.raises(SimulationError, match="twice"):
        machine.exchange([[(0, "x", payload)], [(0, "x", payload)]])


def test_exchange_costs():
    machine = Multicore(SimConfig(16, core_size=4))
    inbox = machine.exchange([[((k + 1) % 4, "x", np.full(8, k))] for k in range(4)])
    assert machine.trace.t_comm == 8 // 2 + 1
    assert machine.moved["comm"] == 32
    np.testing.assert_array_equal(inbox[0]["x"], np.full(8, 3))


def test_measure_intensities():
    report = SimReport(100, 50, 5.0, 20.0, 0.2, 0.05, 2.0)
    assert measure_intensities(report) == (0.2, 0.05)
    with pytest.raises(ModelDomainError):
        measure_intensities(SimReport(0, 1, 0.0, 0.0, 0.0, 0.0, 0.0))


def test_sweep_curves(sweeps):
    sweep = sweeps["fft"]
    labels = [curve.label for curve in sweep.curves]
    assert labels == ["fft__speedup", "fft__f1", "fft__f2", "fft__model"]
    assert sweep.speedup.meta == {"N": 256}
