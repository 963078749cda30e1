"""Dressed states: diagonalization of the sector matrices and state labelling.

Every dressed state carries its energy shift in units of hbar*beta
(``shift``) and two names:

``id``
    ``"p,+"``, ``"p,-"`` or ``"p,0"`` from the sign of ``shift``, i.e. the
    level's position for beta > 0.  Stable across kr, so tables computed at
    different separations can be compared entry by entry.
``label``
    ``"plus"``/``"minus"``/``"zero"`` from the sign of the actual energy
    shift hbar*beta*shift, which flips wherever cos(kr) < 0.

Phase convention: the first amplitude above ``PHASE_FLOOR`` is real and
positive.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .basis import CompoundSpec, UncoupledKet, enumerate_sector
from .coupling import PhysicalScenario
from .hamiltonian import SectorMatrix, build_all

ZERO_SHIFT = 1e-9
HERMITIAN_TOL = 1e-14
RESIDUAL_TOL = 1e-11
PHASE_FLOOR = 1e-8
SNAP_ZERO = 1e-12


class NumericalContractError(ArithmeticError):
    """A numerical post-condition (Hermiticity, residual, unitarity) was violated."""


@dataclass(frozen=True)
class DressedState:
    p: int
    shift: float
    amplitudes: np.ndarray
    kets: tuple[UncoupledKet, ...]
    beta: float = 1.0
    id: str = ""
    symmetry: str = "unclassified"

    @property
    def energy(self) -> float:
        """Shift from E_0 divided by hbar, in the scenario's rate units."""
        return self.shift * self.beta

    @property
    def label(self) -> str:
        # the label tracks the physical shift: at a node of beta every level is "zero"
        e = self.energy
        if abs(self.shift) < ZERO_SHIFT or e == 0.0:
            return "zero"
        return "plus" if e > 0 else "minus"

    def as_record(self, spec: CompoundSpec) -> dict:
        return {
            "id": self.id,
            "sector": self.p,
            "shift_over_hbeta": self.shift,
            "label": self.label,
            "symmetry": self.symmetry,
            "kets": [k.label(spec) for k in self.kets],
            "amplitudes": [[z.real, z.imag] for z in self.amplitudes.tolist()],
        }


def _symbol(shift: float) -> str:
    if abs(shift) < ZERO_SHIFT:
        return "0"
    return "+" if shift > 0 else "-"


def _assign_ids(p: int, shifts) -> list[str]:
    symbols = [_symbol(s) for s in shifts]
    ids = []
    for n, sym in enumerate(symbols):
        if symbols.count(sym) == 1:
            ids.append(f"{p},{sym}")
        else:
            ids.append(f"{p},{sym}#{symbols[:n].count(sym) + 1}")
    return ids


def fix_phase(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > PHASE_FLOOR)
    if nz.size == 0:
        return v
    a = v[nz[0]]
    return v * (abs(a) / a)


def gauge_factors(spec: CompoundSpec, kets) -> np.ndarray:
    """exp(+i sum_j phi_j n_j): strips the propagation phases from a sector vector."""
    if spec.coupling == "uniform":
        return np.ones(len(kets), dtype=complex)
    phis = np.array(spec.phases)
    return np.array([np.exp(1j * phis @ np.array(k.photons(spec))) for k in kets])


def swap_operator(spec: CompoundSpec, kets) -> np.ndarray | None:
    """Permutation of samples 1 and 2 on a sector, or None when it is not a symmetry."""
    if len(spec.samples) != 2 or spec.atoms[0] != spec.atoms[1]:
        return None
    index = {k: n for n, k in enumerate(kets)}
    perm = np.zeros((len(kets), len(kets)))
    for n, k in enumerate(kets):
        perm[index[UncoupledKet(k.excited[::-1])], n] = 1.0
    return perm


def _symmetry_tag(x: np.ndarray, gauge: np.ndarray, perm: np.ndarray | None) -> str:
    if perm is None:
        return "unclassified"
    y = gauge * x
    val = float(np.real(np.vdot(y, perm @ y)))
    if val > 1 - 1e-6:
        return "symmetric"
    if val < -1 + 1e-6:
        return "antisymmetric"
    return "unclassified"


def diagonalize(matrix: SectorMatrix) -> list[DressedState]:
    """Complete orthonormal dressed basis of one sector, shifts sorted descending.

    Degenerate groups (shifts closer than 1e-9 hbar|beta|) are rotated so the
    sample-swap operator, with propagation phases removed, is diagonal inside
    the group; symmetric states come first.
    """
    m = matrix.matrix
    if matrix.hermiticity_residual() > HERMITIAN_TOL:
        raise NumericalContractError(
            f"sector {matrix.p} matrix is not Hermitian "
            f"(residual {matrix.hermiticity_residual():.3g})"
        )
    h = 0.5 * (m + m.conj().T)
    w, u = np.linalg.eigh(h)
    order = np.argsort(-w, kind="stable")
    w, u = w[order], u[:, order]

    spec = matrix.spec
    gauge = gauge_factors(spec, matrix.kets)
    perm = swap_operator(spec, matrix.kets)

    start = 0
    while start < len(w):
        stop = start + 1
        while stop < len(w) and abs(w[stop] - w[start]) < ZERO_SHIFT:
            stop += 1
        if stop - start > 1:
            group = u[:, start:stop]
            if perm is not None:
                y = gauge[:, None] * group
                _, rot = np.linalg.eigh(y.conj().T @ perm @ y)
                group = group @ rot[:, ::-1]
            u[:, start:stop] = group
            w[start:stop] = w[start:stop].mean()
        start = stop

    scale = max(np.abs(h).max(), 1.0) if h.size else 1.0
    res = np.abs(h @ u - u * w).max() if h.size else 0.0
    if res > RESIDUAL_TOL * scale:
        raise NumericalContractError(f"sector {matrix.p} eigen-residual {res:.3g}")

    w[np.abs(w) < SNAP_ZERO] = 0.0
    ids = _assign_ids(matrix.p, w)
    states = []
    for n in range(len(w)):
        x = fix_phase(u[:, n])
        states.append(
            DressedState(
                p=matrix.p,
                shift=float(w[n]),
                amplitudes=x,
                kets=matrix.kets,
                beta=matrix.beta,
                id=ids[n],
                symmetry=_symmetry_tag(x, gauge, perm),
            )
        )
    return states


@dataclass
class DressedSystem:
    """Dressed states of every sector of one compound system."""

    spec: CompoundSpec
    scenario: PhysicalScenario | None
    sectors: list[list[DressedState]]
    beta: float
    _by_id: dict[str, DressedState] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._by_id = {s.id: s for sector in self.sectors for s in sector}

    def __getitem__(self, state_id: str) -> DressedState:
        return self._by_id[state_id]

    def __iter__(self):
        for sector in self.sectors:
            yield from sector

    def __len__(self):
        return len(self._by_id)

    @property
    def top(self) -> DressedState:
        return self.sectors[0][0]

    def unitary(self, p: int) -> np.ndarray:
        return np.column_stack([s.amplitudes for s in self.sectors[p]])

    def to_json(self) -> str:
        return json.dumps(
            {
                "beta": self.beta,
                "kr": None if self.scenario is None else self.scenario.kr,
                "states": [s.as_record(self.spec) for s in self],
            }
        )


def dress(spec: CompoundSpec, scenario: PhysicalScenario | None = None) -> DressedSystem:
    sectors = [diagonalize(m) for m in build_all(spec, scenario)]
    beta = sectors[0][0].beta
    return DressedSystem(spec, scenario, sectors, beta)


def closed_form_reference(kr: float, beta: float = 1.0) -> list[DressedState]:
    """The nine analytic dressed states of two two-atom samples, phase-fixed.

    Shifts are in units of hbar*beta; ids follow the analytic names.
    """
    spec = CompoundSpec.pair(kr)
    e = np.exp
    s2 = math.sqrt(2.0)
    h = 1j * kr / 2
    table = {
        0: [("0,0", 0.0, [1.0], "symmetric")],
        1: [
            ("1,+", 1.0, np.array([e(-h), e(h)]) / s2, "symmetric"),
            ("1,-", -1.0, np.array([e(-h), -e(h)]) / s2, "antisymmetric"),
        ],
        2: [
            ("2,+", s2, np.array([e(-2 * h), s2, e(2 * h)]) / 2, "symmetric"),
            ("2,0", 0.0, np.array([e(-2 * h), 0.0, -e(2 * h)]) / s2, "antisymmetric"),
            ("2,-", -s2, np.array([e(-2 * h), -s2, e(2 * h)]) / 2, "symmetric"),
        ],
        3: [
            ("3,+", 1.0, np.array([e(-h), e(h)]) / s2, "symmetric"),
            ("3,-", -1.0, np.array([e(-h), -e(h)]) / s2, "antisymmetric"),
        ],
        4: [("4,0", 0.0, [1.0], "symmetric")],
    }
    states = []
    for p, entries in table.items():
        kets = tuple(enumerate_sector(spec, p))
        for sid, shift, amps, sym in entries:
            states.append(
                DressedState(
                    p=p,
                    shift=shift,
                    amplitudes=fix_phase(np.asarray(amps, dtype=complex)),
                    kets=kets,
                    beta=beta,
                    id=sid,
                    symmetry=sym,
                )
            )
    return states
