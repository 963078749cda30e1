import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from compound_sr.basis import CompoundSpec, SampleSpec
from compound_sr.coupling import PhysicalScenario
from compound_sr.dressed import closed_form_reference, dress, fix_phase

from oracles import full_interaction, sector_indices

S2 = math.sqrt(2.0)


def hand_states(kr):
    """Analytic dressed vectors, typed out directly."""
    e = lambda x: cmath.exp(1j * x)  # noqa: E731
    h = kr / 2
    return {
        "0,0": [1],
        "1,+": [e(-h) / S2, e(h) / S2],
        "1,-": [e(-h) / S2, -e(h) / S2],
        "2,+": [e(-2 * h) / 2, S2 / 2, e(2 * h) / 2],
        "2,0": [e(-2 * h) / S2, 0, -e(2 * h) / S2],
        "2,-": [e(-2 * h) / 2, -S2 / 2, e(2 * h) / 2],
        "3,+": [e(-h) / S2, e(h) / S2],
        "3,-": [e(-h) / S2, -e(h) / S2],
        "4,0": [1],
    }


EXPECTED_SHIFTS = {"0,0": 0, "1,+": 1, "1,-": -1, "2,+": S2, "2,0": 0, "2,-": -S2, "3,+": 1, "3,-": -1, "4,0": 0}


@pytest.mark.parametrize("kr", [0.0, 1.0, math.pi, 25.0, 100.0])
def test_closed_form_overlaps(kr):
    system = dress(CompoundSpec.pair(kr))
    for sid, vec in hand_states(kr).items():
        s = system[sid]
        overlap = abs(np.vdot(np.array(vec, dtype=complex), s.amplitudes))
        assert overlap == pytest.approx(1.0, abs=1e-12), sid
        assert s.shift == pytest.approx(EXPECTED_SHIFTS[sid], abs=1e-12)


@pytest.mark.parametrize("kr", [0.0, 2.0, 25.0])
def test_reference_states_match_hand_vectors(kr):
    hand = hand_states(kr)
    for s in closed_form_reference(kr):
        assert abs(np.vdot(np.array(hand[s.id], dtype=complex), s.amplitudes)) == pytest.approx(1.0, abs=1e-14)


def test_shifts_in_units_of_beta():
    sc = PhysicalScenario.reduced(25.0)
    system = dress(CompoundSpec.pair(25.0), sc)
    b = 0.75 * math.cos(25.0) / 25.0
    assert system.beta == pytest.approx(b, rel=1e-14)
    assert system["2,+"].energy == pytest.approx(S2 * b, rel=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 150.0))
def test_sector_unitaries(kr):
    system = dress(CompoundSpec.pair(kr))
    for p in range(5):
        u = system.unitary(p)
        np.testing.assert_allclose(u.conj().T @ u, np.eye(u.shape[1]), atol=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.floats(0.0, 150.0))
def test_middle_zero_state_has_no_b1b1_weight(kr):
    system = dress(CompoundSpec.pair(kr))
    s = system["2,0"]
    assert abs(s.amplitudes[1]) < 1e-12
    assert s.symmetry == "antisymmetric"


def test_in_phase_vector():
    s = dress(CompoundSpec.pair(0.0))["2,+"]
    np.testing.assert_allclose(s.amplitudes, [0.5, S2 / 2, 0.5], atol=1e-14)


def test_symmetry_groups():
    system = dress(CompoundSpec.pair(25.0))
    sym = {s.id: s.symmetry for s in system}
    assert {k for k, v in sym.items() if v == "antisymmetric"} == {"1,-", "2,0", "3,-"}


def test_ids_stable_labels_follow_energy_sign():
    pos = dress(CompoundSpec.pair(2 * math.pi), PhysicalScenario.reduced(2 * math.pi))
    neg = dress(CompoundSpec.pair(math.pi), PhysicalScenario.reduced(math.pi))
    assert [s.id for s in pos] == [s.id for s in neg]
    assert pos["1,+"].label == "plus"
    assert neg["1,+"].label == "minus"
    assert neg["2,0"].label == "zero"


def test_vanishing_coupling_still_resolves_states():
    kr = math.pi / 2
    system = dress(CompoundSpec.pair(kr), PhysicalScenario.reduced(kr))
    assert abs(system.beta) < 1e-15
    for sid, vec in hand_states(kr).items():
        assert abs(np.vdot(np.array(vec, dtype=complex), system[sid].amplitudes)) == pytest.approx(1.0, abs=1e-12)
        assert system[sid].label == "zero"


def test_phase_convention():
    for s in dress(CompoundSpec.pair(7.0)):
        a = s.amplitudes[np.flatnonzero(np.abs(s.amplitudes) > 1e-8)[0]]
        assert a.imag == pytest.approx(0.0, abs=1e-14) and a.real > 0
    v = np.array([0, -1j, 1]) / S2
    w = fix_phase(v)
    assert w[1] == pytest.approx(1 / S2)


@settings(max_examples=15, deadline=None)
@given(
    st.lists(st.integers(1, 3), min_size=2, max_size=3),
    st.lists(st.floats(-5, 5), min_size=3, max_size=3),
)
def test_spectrum_and_projectors_match_oracle(atoms, phases):
    spec = CompoundSpec(tuple(SampleSpec(m, ph) for m, ph in zip(atoms, phases)))
    full = full_interaction(spec.atoms, spec.phases)
    system = dress(spec)
    for p in range(spec.n_sectors):
        idx = sector_indices(spec.atoms, p)
        block = full[np.ix_(idx, idx)]
        evals, evecs = np.linalg.eigh(block)
        shifts = np.array([s.shift for s in system.sectors[p]])
        np.testing.assert_allclose(np.sort(shifts), evals, atol=1e-10)
        # compare spectral projectors per distinct eigenvalue (basis-free under degeneracy)
        u = system.unitary(p)
        for lam in np.unique(np.round(evals, 8)):
            ours = u[:, np.abs(shifts - lam) < 1e-7]
            ref = evecs[:, np.abs(evals - lam) < 1e-7]
            np.testing.assert_allclose(ours @ ours.conj().T, ref @ ref.conj().T, atol=1e-9)


def test_three_uniform_samples_degenerate_group():
    system = dress(CompoundSpec.uniform(3, atoms=2))
    p1 = sorted(s.shift for s in system.sectors[1])
    # one photon out of three full two-atom samples: every hop is (1/2) sqrt2 sqrt2 = 1
    np.testing.assert_allclose(p1, [-1, -1, 2], atol=1e-12)
    ids = [s.id for s in system.sectors[1]]
    assert len(set(ids)) == 3


def test_json_export():
    import json

    doc = json.loads(dress(CompoundSpec.pair(25.0), PhysicalScenario.reduced(25.0)).to_json())
    assert len(doc["states"]) == 9
    assert doc["kr"] == 25.0
