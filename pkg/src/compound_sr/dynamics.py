"""Cascade population dynamics and radiated intensity.

Time is in tau_sp = 1/Gamma, rates in Gamma, intensity in I_0 = hbar omega Gamma.
Every photon is booked at hbar omega, so I(t) = sum_j gamma_j P_j(t) where
gamma_j is the rate out of state j.

Chains are solved in closed form.  The Laplace transform of the population of
state j is prod_{m<j} gamma_m / prod_{m<=j} (s + gamma_m); its inverse is a sum
of exponentials with polynomial prefactors wherever rates repeat, which the
the two-sample branches do (4, g, g, 4).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, linalg

from .basis import CompoundSpec
from .coupling import DomainError, PhysicalScenario
from .dressed import dress
from .rates import CascadeChain, TransitionTable, dicke_rates, extract_branches, transition_rates

TIE = 1e-9
DEFAULT_T_MAX = 10.0
DEFAULT_DT_OUT = 0.01


def time_grid(t_max: float, dt_out: float) -> np.ndarray:
    if t_max <= 0:
        raise DomainError("t_max must be positive")
    if dt_out <= 0:
        raise DomainError("dt_out must be positive")
    n = int(round(t_max / dt_out))
    return np.linspace(0.0, n * dt_out, n + 1)


def _group_rates(rates):
    """Merge rates closer than TIE; returns [(value, multiplicity)]."""
    groups: list[list[float]] = []
    for g in sorted(rates):
        if groups and abs(g - groups[-1][0]) < TIE:
            groups[-1].append(g)
        else:
            groups.append([g])
    return [(sum(grp) / len(grp), len(grp)) for grp in groups]


def _inverse_laplace(poles, t: np.ndarray) -> np.ndarray:
    """Inverse transform of prod_k (s + lam_k)^(-m_k) evaluated on ``t``."""
    out = np.zeros_like(t)
    for k, (lam_k, m_k) in enumerate(poles):
        others = [(lam, m) for q, (lam, m) in enumerate(poles) if q != k]
        s = -lam_k
        # derivatives of G(s) = prod_{q != k} (s + lam_q)^(-m_q) via G' = G h
        h = [
            sum(-m * (-1) ** r * math.factorial(r) / (s + lam) ** (r + 1) for lam, m in others)
            for r in range(m_k)
        ]
        g = [math.prod((s + lam) ** (-m) for lam, m in others)]
        for n in range(1, m_k):
            g.append(sum(math.comb(n - 1, r) * h[r] * g[n - 1 - r] for r in range(n)))
        poly = np.zeros_like(t)
        for ell in range(1, m_k + 1):
            c = g[m_k - ell] / math.factorial(m_k - ell)
            poly += c * t ** (ell - 1) / math.factorial(ell - 1)
        out += poly * np.exp(-lam_k * t)
    return out


def chain_populations(rates, t) -> np.ndarray:
    """Populations (len(t), len(rates) + 1) of a decay chain started in state 0."""
    rates = [float(r) for r in rates]
    t = np.asarray(t, dtype=float)
    n = len(rates)
    pops = np.zeros((t.size, n + 1))
    for j in range(n):
        prefactor = math.prod(rates[:j])
        pops[:, j] = prefactor * _inverse_laplace(_group_rates(rates[: j + 1]), t)
    pops[:, n] = 1.0 - pops[:, :n].sum(axis=1)
    return pops


@dataclass
class IntensityTrace:
    name: str
    times: np.ndarray
    intensity: np.ndarray
    populations: np.ndarray | None = None
    states: tuple[str, ...] = ()
    mode: str = "chain"
    meta: dict = field(default_factory=dict)

    def emitted_photons(self) -> float:
        """Integral of I dt in units of hbar omega."""
        return float(integrate.simpson(self.intensity, x=self.times))

    @property
    def peak(self) -> float:
        return float(self.intensity.max())


def evolve_chain(chain: CascadeChain, t_max: float, dt_out: float) -> tuple[np.ndarray, np.ndarray]:
    """Time grid and chain populations, all population initially on the top state."""
    t = time_grid(t_max, dt_out)
    return t, chain_populations(chain.rates, t)


def intensity(chain: CascadeChain, times: np.ndarray, populations: np.ndarray) -> IntensityTrace:
    rates = np.array(chain.rates)
    values = populations[:, :-1] @ rates
    return IntensityTrace(chain.name, times, values, populations, chain.states, "chain")


def chain_trace(chain: CascadeChain, t_max: float = DEFAULT_T_MAX, dt_out: float = DEFAULT_DT_OUT) -> IntensityTrace:
    return intensity(chain, *evolve_chain(chain, t_max, dt_out))


def pair_branches(kr: float = 25.0) -> dict[str, CascadeChain]:
    """Named cascade branches of two interacting two-atom samples."""
    table = transition_rates(dress(CompoundSpec.pair(kr), PhysicalScenario.reduced(kr)))
    return {c.name: c for c in extract_branches(table)}


def comparison_traces(
    t_max: float = DEFAULT_T_MAX,
    dt_out: float = DEFAULT_DT_OUT,
    kr: float = 25.0,
    normalization: str = "gamma",
) -> dict[str, IntensityTrace]:
    """The four curves of the intensity comparison.

    ``main``, ``secondary``: branches of the interacting pair; ``nonint``: two
    independent two-atom samples (twice a single two-atom trace); ``fouratom``:
    one four-atom sample.  ``normalization="two_atom"`` divides the branch
    rates by the two-atom rate 2 Gamma, the enhancement-factor reading of the
    rate table, and is only meant for validation runs.
    """
    if normalization not in ("gamma", "two_atom"):
        raise ValueError(f"unknown normalization {normalization!r}")
    branches = pair_branches(kr)
    scale = 1.0 if normalization == "gamma" else 0.5
    traces = {}
    for name in ("main", "secondary"):
        c = branches[name]
        c = CascadeChain(c.states, tuple(r * scale for r in c.rates), c.name)
        traces[name] = chain_trace(c, t_max, dt_out)

    single = chain_trace(CascadeChain.ladder(dicke_rates(2), "two-atom"), t_max, dt_out)
    traces["nonint"] = IntensityTrace(
        "nonint", single.times, 2.0 * single.intensity, single.populations, single.states, "chain",
        {"note": "twice a single two-atom sample"},
    )
    traces["fouratom"] = chain_trace(CascadeChain.ladder(dicke_rates(4), "fouratom"), t_max, dt_out)
    for tr in traces.values():
        tr.meta.setdefault("normalization", normalization)
    return traces


def generator(table: TransitionTable) -> tuple[list[str], np.ndarray]:
    """Rate matrix Q with dP/dt = Q P over every dressed state in ``table``."""
    ids = list(table.states)
    index = {sid: n for n, sid in enumerate(ids)}
    q = np.zeros((len(ids), len(ids)))
    for t in table.allowed:
        a, b = index[t.source], index[t.target]
        q[b, a] += t.rate
        q[a, a] -= t.rate
    return ids, q


def evolve_network(
    table: TransitionTable,
    t_max: float = DEFAULT_T_MAX,
    dt_out: float = DEFAULT_DT_OUT,
    initial: str | None = None,
) -> IntensityTrace:
    """Populations of all dressed states under the full allowed-transition network."""
    t = time_grid(t_max, dt_out)
    ids, q = generator(table)
    if initial is None:
        initial = next(sid for sid, s in table.states.items() if s.p == 0)
    p = np.zeros(len(ids))
    p[ids.index(initial)] = 1.0
    step = linalg.expm(q * (t[1] - t[0])) if t.size > 1 else np.eye(len(ids))
    pops = np.empty((t.size, len(ids)))
    for n in range(t.size):
        pops[n] = p
        p = step @ p
    out_rates = -np.diag(q)
    return IntensityTrace("network", t, pops @ out_rates, pops, tuple(ids), "network")


def traces_to_csv(traces: dict[str, IntensityTrace], populations: IntensityTrace | None = None) -> str:
    names = list(traces)
    times = traces[names[0]].times
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = ["t_over_tausp"] + [f"I_{n}" for n in names]
    if populations is not None:
        header += [f"P[{sid}]" for sid in populations.states]
    w.writerow(header)
    for k, tk in enumerate(times):
        row = [repr(float(tk))] + [repr(float(traces[n].intensity[k])) for n in names]
        if populations is not None:
            row += [repr(float(v)) for v in populations.populations[k]]
        w.writerow(row)
    return buf.getvalue()
