# Copyright (c) 2026 mcspeedup developers, MIT License
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mcspeedup.modeling import ModelDomainError
from mcspeedup.simulating import SimConfig, simulate
from mcspeedup.workloads import (
    WORKLOADS,
    BlackScholes,
    OptionPair,
    black_scholes_serial,
    cnd,
    declared_volumes,
    dmm_serial,
    fft_serial,
    get_workload,
    load_inputs,
    price_options,
    save_inputs,
)


def _call_by_quadrature(spot, strike, expiry, rate, volatility, dividend_yield=0.0):
    """Discounted expected payoff under the lognormal terminal price."""
    z = np.linspace(-12, 12, 480001)
    dz = z[1] - z[0]
    drift = (rate - dividend_yield - 0.5 * volatility ** 2) * expiry
    terminal = spot * np.exp(drift + volatility * math.sqrt(expiry) * z)
    density = np.exp(-0.5 * z * z) / math.sqrt(2 * math.pi)
    payoff = np.maximum(terminal - strike, 0.0)
    return math.exp(-rate * expiry) * np.sum(payoff * density) * dz


def test_cnd_values():
    assert cnd(0.0) == pytest.approx(0.5, abs=1e-7)
    assert cnd(1.96) == pytest.approx(0.9750021, abs=1e-7)
    assert cnd(-40.0) == pytest.approx(0.0, abs=1e-12)


@given(st.floats(-10, 10).filter(bool))
def test_cnd_symmetry(d):
    assert cnd(-d) == pytest.approx(1 - cnd(d), abs=1e-15)


def test_price_at_the_money():
    call, put = price_options(100.0, 100.0, 1.0, 0.05, 0.2)
    assert call == pytest.approx(10.4506, abs=1e-4)
    assert put == pytest.approx(5.5735, abs=1e-4)
    assert call == pytest.approx(_call_by_quadrature(100.0, 100.0, 1.0, 0.05, 0.2), abs=1e-4)


@pytest.mark.parametrize(
    "terms",
    [
        (20.0, 25.0, 0.5, 0.03, 0.4, 0.01),
        (8.0, 3.0, 4.0, 0.01, 0.1, 0.0),
        (15.0, 90.0, 10.0, 0.05, 0.5, 0.02),
    ],
)
def test_price_matches_quadrature(terms):
    call, _ = price_options(*terms)
    assert call == pytest.approx(_call_by_quadrature(*terms), abs=1e-4)


def test_price_near_expiry():
    call, put = price_options(100.0, 100.0, 1e-12, 0.05, 0.2)
    assert call == pytest.approx(0.0, abs=1e-4)
    assert put == pytest.approx(0.0, abs=1e-4)


def test_put_call_parity():
    data = WORKLOADS["black-scholes"].generate(256)
    pairs = black_scholes_serial(WORKLOADS["black-scholes"].pairs(data))
    assert max(abs(pair.parity_gap()) for pair in pairs) <= 1e-4


def test_black_scholes_serial_charges():
    charged = []
    pairs = [OptionPair(100.0, 100.0, 1.0, 0.05, 0.2), OptionPair(20.0, 25.0, 0.5, 0.03, 0.4)]
    priced = black_scholes_serial(pairs, charged.append)
    assert charged == [2 * BlackScholes.OPS_PER_PAIR]
    assert priced[0].call_price == pytest.approx(10.4506, abs=1e-4)
    assert pairs[0].call_price is None
    assert black_scholes_serial([]) == []


@pytest.mark.parametrize("name", ["spot", "strike", "expiry", "volatility"])
def test_option_pair_rejects_nonpositive(name):
    terms = dict(spot=1.0, strike=1.0, expiry=1.0, rate=0.01, volatility=0.1)
    terms[name] = 0.0
    with pytest.raises(ModelDomainError):
        OptionPair(**terms)


def test_option_pair_rejects_negative_rate():
    with pytest.raises(ModelDomainError):
        OptionPair(1.0, 1.0, 1.0, -0.01, 0.1)


def test_fft_impulse_and_constant():
    impulse = np.zeros(16)
    impulse[0] = 1
    np.testing.assert_allclose(fft_serial(impulse), np.ones(16), atol=1e-12)
    spectrum = fft_serial(np.ones(16))
    assert spectrum[0].real == pytest.approx(16)
    assert spectrum[0].imag == pytest.approx(0, abs=1e-12)
    np.testing.assert_allclose(spectrum[1:], 0, atol=1e-12)


@pytest.mark.parametrize("N", [2, 8, 256])
def test_fft_matches_direct_transform(N):
    x = WORKLOADS["fft"].generate(N)
    k = np.arange(N)
    direct = np.exp(-2j * np.pi * np.outer(k, k) / N) @ x
    result = fft_serial(x)
    assert np.linalg.norm(result - direct) / np.linalg.norm(direct) <= 1e-6


def test_fft_charges_every_stage():
    charged = []
    fft_serial(np.ones(256), charged.append)
    assert charged == [5 * 256] * 8


def test_fft_rejects_size():
    with pytest.raises(ModelDomainError):
        fft_serial(np.ones(3))


def test_dmm_identity_and_zero():
    a = WORKLOADS["dmm"].generate(16)[0]
    np.testing.assert_allclose(dmm_serial(a, np.eye(4)), a)
    np.testing.assert_array_equal(dmm_serial(a, np.zeros((4, 4))), np.zeros((4, 4)))


def test_dmm_matches_triple_loop():
    a, b = WORKLOADS["dmm"].generate(256)
    m = a.shape[0]
    expected = [[sum(a[i, k] * b[k, j] for k in range(m)) for j in range(m)] for i in range(m)]
    charged = []
    np.testing.assert_allclose(dmm_serial(a, b, charged.append), expected, atol=1e-5)
    assert charged == [2 * m ** 3]


def test_dmm_rejects_shapes():
    with pytest.raises(ModelDomainError):
        dmm_serial(np.ones((2, 3)), np.ones((3, 2)))
    with pytest.raises(ModelDomainError):
        dmm_serial(np.ones((2, 2)), np.ones((3, 3)))


@pytest.mark.parametrize(
    "name, cycles",
    [("fft", 10240), ("dmm", 8192), ("black-scholes", 143360)],
)
def test_serial_cycles(name, cycles):
    assert WORKLOADS[name].serial_cycles(256) == cycles


@pytest.mark.parametrize(
    "name, volumes",
    [("black-scholes", (2048, 0)), ("fft", (512, 2048)), ("dmm", (768, 8192))],
)
def test_declared_volumes(name, volumes):
    assert declared_volumes(name, 256, 256) == volumes
    assert declared_volumes(name, 256, 1) == (0, 0)


def test_arithmetic_intensity():
    assert WORKLOADS["black-scholes"].arithmetic_intensity(256) == 70


def test_communication_free_workload():
    spec = WORKLOADS["black-scholes"]
    assert spec.comm_pattern == "none"
    assert all(spec.comm_elements(256, nc) == 0 for nc in (2, 16, 256))


@pytest.mark.parametrize(
    "name, nc, feasible",
    [
        ("black-scholes", 3, True),
        ("fft", 3, False),
        ("fft", 512, False),
        ("dmm", 128, False),
        ("dmm", 64, True),
    ],
)
def test_feasible(name, nc, feasible):
    assert WORKLOADS[name].feasible(256, nc) is feasible


@pytest.mark.parametrize("name, N", [("fft", 100), ("dmm", 200), ("black-scholes", 0)])
def test_check_size(name, N):
    with pytest.raises(ModelDomainError):
        WORKLOADS[name].generate(N)


def test_generate_is_reproducible():
    for spec in WORKLOADS.values():
        np.testing.assert_array_equal(spec.generate(64, seed=7), spec.generate(64, seed=7))


def test_get_workload():
    spec = get_workload("fft")
    assert get_workload(spec) is spec
    with pytest.raises(ModelDomainError, match="expected one of"):
        get_workload("lu")


@pytest.mark.parametrize("name", sorted(WORKLOADS))
def test_inputs_survive_csv(name, tmp_path):
    spec = WORKLOADS[name]
    data = spec.generate(16)
    path = save_inputs(name, data, tmp_path / f"{name}.csv")
    np.testing.assert_array_equal(load_inputs(name, path), data)


@pytest.mark.parametrize(
    "name, header",
    [
        ("black-scholes", "call_price,put_price"),
        ("fft", "index,real,imag"),
        ("dmm", "row,col,value"),
    ],
)
def test_outputs_survive_csv(name, header, tmp_path):
    output = simulate(name, SimConfig(256, core_size=16)).output
    path = save_inputs(name, output, tmp_path / f"{name}.csv")
    assert path.read_text().splitlines()[0] == header
    np.testing.assert_array_equal(load_inputs(name, path), output)


def test_priced_pairs_survive_csv(tmp_path):
    spec = WORKLOADS["black-scholes"]
    data = spec.generate(8)
    table = np.column_stack((data, spec.serial(data)))
    path = save_inputs(spec, table, tmp_path / "priced.csv")
    assert len(path.read_text().splitlines()[0].split(",")) == 8
    np.testing.assert_array_equal(load_inputs(spec, path), table)


def test_to_table_rejects_shapes():
    with pytest.raises(ModelDomainError):
        WORKLOADS["black-scholes"].to_table(np.zeros((4, 3)))
    with pytest.raises(ModelDomainError):
        WORKLOADS["dmm"].to_table(np.zeros(4))
