import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compound_sr.basis import CompoundSpec
from compound_sr.coupling import PhysicalScenario
from compound_sr.dressed import dress
from compound_sr.dynamics import (
    CascadeChain,
    chain_populations,
    chain_trace,
    comparison_traces,
    evolve_chain,
    evolve_network,
    generator,
    time_grid,
    traces_to_csv,
)
from compound_sr.rates import transition_rates

from oracles import rk4_chain

S2 = math.sqrt(2.0)


@pytest.fixture(scope="module")
def table():
    return transition_rates(dress(CompoundSpec.pair(25.0), PhysicalScenario.reduced(25.0)))


@pytest.fixture(scope="module")
def traces():
    return comparison_traces(10.0, 0.01)


def test_time_grid():
    t = time_grid(10.0, 0.01)
    assert t.size == 1001 and t[0] == 0.0 and t[-1] == pytest.approx(10.0)


def test_initial_intensity_equals_first_rate(traces):
    for name in ("main", "secondary", "nonint", "fouratom"):
        assert traces[name].intensity[0] == pytest.approx(4.0, abs=1e-12)


def test_two_atom_populations_closed_form():
    t = np.linspace(0, 5, 101)
    pops = chain_populations([2.0, 2.0], t)
    np.testing.assert_allclose(pops[:, 0], np.exp(-2 * t), atol=1e-13)
    np.testing.assert_allclose(pops[:, 1], 2 * t * np.exp(-2 * t), atol=1e-13)
    np.testing.assert_allclose(pops.sum(axis=1), 1.0, atol=1e-13)


@pytest.mark.parametrize(
    "rates",
    [
        [4.0, 3 + 2 * S2, 3 + 2 * S2, 4.0],
        [4.0, 3 - 2 * S2, 3 - 2 * S2, 4.0],
        [4.0, 6.0, 6.0, 4.0],
        [2.0, 2.0],
        [1.0, 2.0, 3.0],
        [1.0, 1.0 + 1e-10, 1.0],
    ],
)
def test_chain_matches_rk4(rates):
    t_ref, p_ref = rk4_chain(rates, 10.0, dt=1e-4, sample_every=100)
    chain = CascadeChain.ladder(rates)
    t, pops = evolve_chain(chain, 10.0, 0.01)
    np.testing.assert_allclose(t, t_ref, atol=1e-12)
    np.testing.assert_allclose(pops, p_ref, atol=1e-6)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(0.05, 8.0), min_size=1, max_size=5))
def test_probability_conserved(rates):
    t = time_grid(5.0, 0.05)
    pops = chain_populations(rates, t)
    np.testing.assert_allclose(pops.sum(axis=1), 1.0, atol=1e-9)
    assert pops.min() > -1e-9


def test_absorbing_limit_and_photon_count():
    for rates in ([4.0, 3 + 2 * S2, 3 + 2 * S2, 4.0], [4.0, 3 - 2 * S2, 3 - 2 * S2, 4.0], [4.0, 6.0, 6.0, 4.0]):
        tr = chain_trace(CascadeChain.ladder(rates), 200.0, 0.01)
        assert tr.populations[-1, -1] == pytest.approx(1.0, abs=1e-8)
        assert tr.emitted_photons() == pytest.approx(4.0, abs=1e-6)


def test_peaks(traces):
    assert traces["fouratom"].peak > traces["main"].peak > traces["nonint"].peak
    assert traces["main"].peak == pytest.approx(4.788, abs=5e-3)


def test_main_between_nonint_and_fouratom_early(traces):
    t = traces["main"].times
    window = (t > 0.05) & (t < 0.5)
    assert np.all(traces["main"].intensity[window] > traces["nonint"].intensity[window])
    assert np.all(traces["main"].intensity[window] < traces["fouratom"].intensity[window])


def test_secondary_below_nonint_early_window(traces):
    # the secondary branch is dimmer than two independent samples only up to ~2.36 tau_sp;
    # its slow (3 - 2 sqrt2) Gamma middle steps then leave a long, brighter tail
    t = traces["secondary"].times
    diff = traces["secondary"].intensity - traces["nonint"].intensity
    early = (t > 0.0) & (t <= 2.36)
    assert np.all(diff[early] < 0)
    late = t >= 2.4
    assert np.all(diff[late] > 0)


def test_two_atom_normalisation_option():
    tr = comparison_traces(2.0, 0.01, normalization="two_atom")
    assert tr["main"].intensity[0] == pytest.approx(2.0)
    with pytest.raises(ValueError):
        comparison_traces(1.0, 0.1, normalization="bogus")


def test_generator_columns_conserve(table):
    _, q = generator(table)
    np.testing.assert_allclose(q.sum(axis=0), 0.0, atol=1e-12)


def test_network_branching_fraction(table):
    tr = evolve_network(table, 60.0, 0.005)
    i = tr.states.index("2,-")
    j = tr.states.index("2,+")
    flux_minus = (3 - 2 * S2) * np.trapezoid(tr.populations[:, i], tr.times)
    flux_plus = (3 + 2 * S2) * np.trapezoid(tr.populations[:, j], tr.times)
    assert flux_plus == pytest.approx((3 + 2 * S2) / 6, abs=1e-4)
    assert flux_minus == pytest.approx((3 - 2 * S2) / 6, abs=1e-4)


def test_network_never_populates_antisymmetric(table):
    tr = evolve_network(table, 10.0, 0.01)
    for sid in ("1,-", "2,0", "3,-"):
        assert np.abs(tr.populations[:, tr.states.index(sid)]).max() < 1e-14
    np.testing.assert_allclose(tr.populations.sum(axis=1), 1.0, atol=1e-12)


def test_network_reduces_to_chain(table):
    reduced = table.with_rates({("1,+", "2,-"): 0.0})
    tr = evolve_network(reduced, 10.0, 0.01)
    main = ("0,0", "1,+", "2,+", "3,+", "4,0")
    chain = chain_trace(CascadeChain(main, (4.0, 3 + 2 * S2, 3 + 2 * S2, 4.0), "main"), 10.0, 0.01)
    cols = [tr.states.index(s) for s in main]
    np.testing.assert_allclose(tr.populations[:, cols], chain.populations, atol=1e-10)
    np.testing.assert_allclose(tr.intensity, chain.intensity, atol=1e-9)


def test_network_from_antisymmetric_start(table):
    tr = evolve_network(table, 10.0, 0.01, initial="1,-")
    ref = chain_populations([2.0, 2.0], tr.times)
    cols = [tr.states.index(s) for s in ("1,-", "2,0", "3,-")]
    np.testing.assert_allclose(tr.populations[:, cols], ref, atol=1e-10)


def test_csv_layout(traces):
    text = traces_to_csv(traces)
    lines = text.splitlines()
    assert lines[0] == "t_over_tausp,I_main,I_secondary,I_nonint,I_fouratom"
    assert len(lines) == 1002
    assert traces_to_csv(traces) == text
