"""Transition rates between dressed states and cascade-branch extraction.

The emitting operator is the total transverse dipole
D_- = sum_j exp(-i phi_j) D_{j-}; for two samples at -kr/2, +kr/2 this is
D_{1-} e^{ikr/2} + D_{2-} e^{-ikr/2}.  Rates are |<f|D_-|i>|^2 in units of the
single-atom rate Gamma (d = 1), so a lone two-level atom decays at 1 and a
two-atom sample at 2 on both of its steps.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

import numpy as np

from .basis import CompoundSpec, UncoupledKet, enumerate_sector
from .coupling import PhysicalScenario
from .dressed import DressedState, DressedSystem, dress
from .hamiltonian import lower

FORBIDDEN = 1e-12
TWO_ATOM_RATE = 2.0


def _emission_phases(spec: CompoundSpec) -> np.ndarray:
    if spec.coupling == "uniform":
        return np.ones(len(spec.samples), dtype=complex)
    return np.exp(-1j * np.array(spec.phases))


def transverse_dipole(spec: CompoundSpec, p: int) -> np.ndarray:
    """Matrix of D_- from sector ``p`` to sector ``p + 1`` (rows: p + 1, cols: p)."""
    src = enumerate_sector(spec, p)
    dst = enumerate_sector(spec, p + 1)
    index = {k: n for n, k in enumerate(dst)}
    phases = _emission_phases(spec)
    d = np.zeros((len(dst), len(src)), dtype=complex)
    for col, ket in enumerate(src):
        for j in range(len(spec.samples)):
            lowered = lower(spec, ket, j)
            if lowered is not None:
                amp, target = lowered
                d[index[target], col] += phases[j] * amp
    return d


def dicke_rates(atoms: int) -> list[float]:
    """Cascade rates of a single symmetric sample, top to bottom: Ne (M - Ne + 1)."""
    return [float(ne * (atoms - ne + 1)) for ne in range(atoms, 0, -1)]


@dataclass(frozen=True)
class Transition:
    source: str
    target: str
    rate: float
    offset: float

    @property
    def allowed(self) -> bool:
        return self.rate >= FORBIDDEN

    @property
    def rate_over_two_atom(self) -> float:
        return self.rate / TWO_ATOM_RATE


@dataclass
class TransitionTable:
    """Every (sector p -> sector p+1) dressed-state pair with rate (Gamma) and offset (beta)."""

    entries: list[Transition]
    states: dict[str, DressedState]

    def __iter__(self) -> Iterator[Transition]:
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def allowed(self) -> list[Transition]:
        return [t for t in self.entries if t.allowed]

    def rate(self, source: str, target: str) -> float:
        for t in self.entries:
            if t.source == source and t.target == target:
                return t.rate
        if source in self.states and target in self.states:
            # D_- lowers the photon sector by exactly one; other pairs have no element at all
            return 0.0
        raise KeyError((source, target))

    def as_dict(self) -> dict[tuple[str, str], float]:
        return {(t.source, t.target): t.rate for t in self.entries}

    def with_rates(self, overrides: dict[tuple[str, str], float]) -> "TransitionTable":
        entries = [
            Transition(t.source, t.target, overrides.get((t.source, t.target), t.rate), t.offset)
            for t in self.entries
        ]
        return TransitionTable(entries, self.states)

    def outgoing(self, state_id: str) -> list[Transition]:
        return [t for t in self.entries if t.source == state_id and t.allowed]

    def to_csv(self, include_forbidden: bool = False) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["from", "to", "rate_over_Gamma", "rate_over_two_atom", "offset_over_beta"])
        for t in self.entries:
            if t.allowed:
                w.writerow([t.source, t.target, repr(t.rate), repr(t.rate_over_two_atom), repr(t.offset)])
            elif include_forbidden:
                w.writerow([t.source, t.target, "0.0", "0.0", repr(t.offset)])
        return buf.getvalue()


def transition_rates(system: DressedSystem) -> TransitionTable:
    """Rates gamma(i -> f) = |<f|D_-|i>|^2 for all adjacent-sector pairs."""
    spec = system.spec
    entries = []
    for p in range(spec.n_sectors - 1):
        dmat = transverse_dipole(spec, p)
        upper = system.unitary(p)
        lower_ = system.unitary(p + 1)
        amps = lower_.conj().T @ dmat @ upper
        for a, i in enumerate(system.sectors[p]):
            for b, f in enumerate(system.sectors[p + 1]):
                entries.append(Transition(i.id, f.id, float(abs(amps[b, a]) ** 2), i.shift - f.shift))
    return TransitionTable(entries, {s.id: s for s in system})


def total_decay(system: DressedSystem, state_id: str) -> float:
    """<i|D_+ D_-|i>: what the rates out of ``state_id`` must add up to."""
    s = system[state_id]
    if s.p == system.spec.n_sectors - 1:
        return 0.0
    v = transverse_dipole(system.spec, s.p) @ s.amplitudes
    return float(np.vdot(v, v).real)


@dataclass(frozen=True)
class CascadeChain:
    states: tuple[str, ...]
    rates: tuple[float, ...]
    name: str = "custom"

    def __post_init__(self):
        if len(self.rates) != len(self.states) - 1:
            raise ValueError("a chain of n states needs n - 1 rates")
        if any(r <= 0 for r in self.rates):
            raise ValueError("every chain step needs a positive rate")

    @classmethod
    def ladder(cls, rates: Iterable[float], name: str = "custom", prefix: str = "") -> "CascadeChain":
        rates = tuple(float(r) for r in rates)
        return cls(tuple(f"{prefix}{n}" for n in range(len(rates) + 1)), rates, name)

    @property
    def weight(self) -> float:
        return math.prod(self.rates)

    def __len__(self):
        return len(self.rates)


def _maximal_paths(table: TransitionTable, limit: int) -> list[list[Transition]]:
    allowed = table.allowed
    out: dict[str, list[Transition]] = {}
    has_in = set()
    for t in allowed:
        out.setdefault(t.source, []).append(t)
        has_in.add(t.target)
    sources = [sid for sid in table.states if sid in out and sid not in has_in]

    paths: list[list[Transition]] = []

    def walk(node, trail):
        if len(paths) > limit:
            raise RuntimeError(f"more than {limit} cascade paths; raise the limit")
        nxt = out.get(node)
        if not nxt:
            paths.append(list(trail))
            return
        for t in nxt:
            trail.append(t)
            walk(t.target, trail)
            trail.pop()

    for s in sources:
        walk(s, [])
    return paths


def extract_branches(table: TransitionTable, limit: int = 100_000) -> list[CascadeChain]:
    """All maximal cascade paths through allowed transitions.

    Paths from the fully excited state come first, ranked by the product of
    their rates; the two best are named ``main`` and ``secondary``.  A path
    made only of antisymmetric-group states is named ``antisymmetric``.
    """
    paths = _maximal_paths(table, limit)
    top = [path for path in paths if table.states[path[0].source].p == 0]
    rest = [path for path in paths if table.states[path[0].source].p != 0]
    key = lambda path: -math.prod(t.rate for t in path)  # noqa: E731
    top.sort(key=key)
    rest.sort(key=key)

    chains = []
    for n, path in enumerate(top):
        name = ("main", "secondary")[n] if n < 2 else "custom"
        chains.append(_chain(path, name))
    for path in rest:
        ids = [path[0].source] + [t.target for t in path]
        anti = all(table.states[i].symmetry == "antisymmetric" for i in ids)
        chains.append(_chain(path, "antisymmetric" if anti else "custom"))
    return chains


def _chain(path: list[Transition], name: str) -> CascadeChain:
    return CascadeChain(
        tuple([path[0].source] + [t.target for t in path]),
        tuple(t.rate for t in path),
        name,
    )


def best_chain(table: TransitionTable) -> CascadeChain:
    """Highest rate-product path from the fully excited state (dynamic programming)."""
    states = table.states
    by_sector: dict[int, list[str]] = {}
    for sid, s in states.items():
        by_sector.setdefault(s.p, []).append(sid)
    top = by_sector[0][0]
    score = {top: 0.0}
    back: dict[str, Transition] = {}
    for p in sorted(by_sector):
        for sid in by_sector[p]:
            if sid not in score:
                continue
            for t in table.outgoing(sid):
                cand = score[sid] + math.log(t.rate)
                if cand > score.get(t.target, -math.inf):
                    score[t.target] = cand
                    back[t.target] = t
    end = by_sector[max(by_sector)][0]
    if end not in score:
        raise ValueError("no allowed cascade reaches the ground state")
    path = []
    node = end
    while node != top:
        t = back[node]
        path.append(t)
        node = t.source
    return _chain(path[::-1], "main")


def rate_r_independence_check(
    kr_list: Iterable[float],
    spec_for: Callable[[float], CompoundSpec] = CompoundSpec.pair,
    scenario_for: Callable[[float], PhysicalScenario] = PhysicalScenario.reduced,
) -> float:
    """Largest spread (max - min, in Gamma) of any transition rate across ``kr_list``."""
    tables = [transition_rates(dress(spec_for(kr), scenario_for(kr))).as_dict() for kr in kr_list]
    if len(tables) < 2:
        return 0.0
    worst = 0.0
    for key in tables[0]:
        values = [t[key] for t in tables]
        worst = max(worst, max(values) - min(values))
    return worst


def two_sample_table(kr: float, atoms: int = 2) -> TransitionTable:
    return transition_rates(dress(CompoundSpec.pair(kr, atoms), PhysicalScenario.reduced(kr)))


def ket_lowering_image(spec: CompoundSpec, ket: UncoupledKet) -> dict[UncoupledKet, complex]:
    """D_- applied to a single uncoupled ket, as a sparse dictionary."""
    phases = _emission_phases(spec)
    image: dict[UncoupledKet, complex] = {}
    for j in range(len(spec.samples)):
        lowered = lower(spec, ket, j)
        if lowered is not None:
            amp, target = lowered
            image[target] = image.get(target, 0) + phases[j] * amp
    return image
