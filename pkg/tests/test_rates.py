import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compound_sr.basis import CompoundSpec, SampleSpec
from compound_sr.coupling import PhysicalScenario
from compound_sr.dressed import dress
from compound_sr.rates import (
    CascadeChain,
    best_chain,
    dicke_rates,
    extract_branches,
    rate_r_independence_check,
    total_decay,
    transition_rates,
)

from oracles import full_dipole, sector_indices

S2 = math.sqrt(2.0)
PAIR_RATES = {
    ("0,0", "1,+"): 4.0,
    ("1,+", "2,+"): 3 + 2 * S2,
    ("1,+", "2,-"): 3 - 2 * S2,
    ("1,-", "2,0"): 2.0,
    ("2,+", "3,+"): 3 + 2 * S2,
    ("2,-", "3,+"): 3 - 2 * S2,
    ("2,0", "3,-"): 2.0,
    ("3,+", "4,0"): 4.0,
}


@pytest.fixture(scope="module")
def pair():
    return dress(CompoundSpec.pair(25.0), PhysicalScenario.reduced(25.0))


@pytest.fixture(scope="module")
def table(pair):
    return transition_rates(pair)


def test_allowed_edges(table):
    got = {(t.source, t.target): t.rate for t in table.allowed}
    assert set(got) == set(PAIR_RATES)
    for key, rate in PAIR_RATES.items():
        assert got[key] == pytest.approx(rate, abs=1e-12)


def test_everything_else_forbidden(table):
    for t in table:
        if (t.source, t.target) not in PAIR_RATES:
            assert t.rate < 1e-12


def _embed(spec, state):
    dim = math.prod(m + 1 for m in spec.atoms)
    v = np.zeros(dim, dtype=complex)
    v[sector_indices(spec.atoms, state.p)] = state.amplitudes
    return v


@pytest.mark.parametrize("kr", [0.3, 2.0, 25.0, 61.0])
def test_rates_match_kronecker_dipole(kr):
    spec = CompoundSpec.pair(kr)
    system = dress(spec)
    d = full_dipole(spec.atoms, spec.phases)
    table = transition_rates(system)
    for t in table:
        i = _embed(spec, system[t.source])
        f = _embed(spec, system[t.target])
        assert t.rate == pytest.approx(abs(np.vdot(f, d @ i)) ** 2, abs=1e-11)


@settings(max_examples=15, deadline=None)
@given(
    st.lists(st.integers(1, 3), min_size=2, max_size=3),
    st.lists(st.floats(-5, 5), min_size=3, max_size=3),
)
def test_sum_rule(atoms, phases):
    """Total outgoing rate of every state equals <D+ D->, independent of the final basis."""
    spec = CompoundSpec(tuple(SampleSpec(m, ph) for m, ph in zip(atoms, phases)))
    system = dress(spec)
    table = transition_rates(system)
    d = full_dipole(spec.atoms, spec.phases)
    for s in system:
        v = _embed(spec, s)
        expect = float(np.vdot(d @ v, d @ v).real)
        got = sum(t.rate for t in table.outgoing(s.id))
        assert got == pytest.approx(expect, abs=1e-10)
        assert total_decay(system, s.id) == pytest.approx(expect, abs=1e-10)


def test_symmetry_selection_rule(table):
    states = table.states
    for t in table.allowed:
        assert states[t.source].symmetry == states[t.target].symmetry


def test_total_decay_values(pair, table):
    assert total_decay(pair, "0,0") == pytest.approx(4.0, abs=1e-12)
    out = [t.rate for t in table.outgoing("1,+")]
    assert sum(out) == pytest.approx(6.0, abs=1e-12)
    assert total_decay(pair, "1,-") == pytest.approx(2.0, abs=1e-12)
    assert total_decay(pair, "4,0") == 0.0


def test_two_atom_normalisation(table):
    assert table.rate("0,0", "1,+") == 4.0 or table.rate("0,0", "1,+") == pytest.approx(4.0)
    t = next(t for t in table if (t.source, t.target) == ("0,0", "1,+"))
    assert t.rate_over_two_atom == pytest.approx(2.0)


def test_dicke_ladders():
    np.testing.assert_allclose(dicke_rates(2), [2, 2])
    np.testing.assert_allclose(dicke_rates(4), [4, 6, 6, 4])
    np.testing.assert_allclose(dicke_rates(3), [3, 4, 3])


def test_single_sample_chain():
    system = dress(CompoundSpec.single(4))
    chain = best_chain(transition_rates(system))
    np.testing.assert_allclose(chain.rates, [4, 6, 6, 4], atol=1e-12)


def test_branches(table):
    chains = {c.name: c for c in extract_branches(table)}
    assert set(chains) == {"main", "secondary", "antisymmetric"}
    assert chains["main"].states == ("0,0", "1,+", "2,+", "3,+", "4,0")
    assert chains["secondary"].states == ("0,0", "1,+", "2,-", "3,+", "4,0")
    assert chains["antisymmetric"].states == ("1,-", "2,0", "3,-")
    np.testing.assert_allclose(chains["main"].rates, [4, 3 + 2 * S2, 3 + 2 * S2, 4], atol=1e-12)
    np.testing.assert_allclose(chains["secondary"].rates, [4, 3 - 2 * S2, 3 - 2 * S2, 4], atol=1e-12)


def test_best_chain_is_main(table):
    assert best_chain(table).states == ("0,0", "1,+", "2,+", "3,+", "4,0")


def test_rates_independent_of_separation():
    assert rate_r_independence_check([1.0, 5.0, 10.0, 25.0, 50.0]) < 1e-10
    assert rate_r_independence_check([25.0]) == 0.0


def test_rates_survive_vanishing_coupling():
    kr = math.pi / 2
    table = transition_rates(dress(CompoundSpec.pair(kr), PhysicalScenario.reduced(kr)))
    got = {(t.source, t.target): t.rate for t in table.allowed}
    for key, rate in PAIR_RATES.items():
        assert got[key] == pytest.approx(rate, abs=1e-12)


def test_rate_overrides(table):
    t2 = table.with_rates({("1,+", "2,-"): 1.0})
    assert t2.rate("1,+", "2,-") == 1.0
    assert table.rate("1,+", "2,-") == pytest.approx(3 - 2 * S2)


def test_csv_columns(table):
    text = table.to_csv()
    header = text.splitlines()[0]
    assert header == "from,to,rate_over_Gamma,rate_over_two_atom,offset_over_beta"
    assert len(text.splitlines()) == 9
    assert len(table.to_csv(include_forbidden=True).splitlines()) > 9


def test_chain_validation():
    with pytest.raises(ValueError):
        CascadeChain(("a", "b"), (1.0, 2.0))
    with pytest.raises(ValueError):
        CascadeChain(("a", "b"), (0.0,))
    assert CascadeChain.ladder([2, 2]).states == ("0", "1", "2")


def test_non_adjacent_pairs_have_zero_rate(table):
    assert table.rate("1,+", "3,+") == 0.0
    assert table.rate("0,0", "4,0") == 0.0
    with pytest.raises(KeyError):
        table.rate("0,0", "9,9")
