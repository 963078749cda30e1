"""Photon-conserving dipole-dipole interaction between samples.

For every ordered pair (i, j) of samples the interaction moves one excitation
from sample j to sample i,

    V = sum_{i != j} (beta_ij / 2) D_{i+} D_{j-} exp(i (phi_i - phi_j)),

with D_{j-} the collective lowering operator of sample j (dipole units, d = 1)
and beta_ij the pair coupling.  For two samples at phases -kr/2, +kr/2 this is
(alpha/2)[D_{1+} D_{2-} e^{-ikr} + h.c.].  Matrices are stored in units of
hbar * beta_ref, the splitting of the reference pair.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .basis import CompoundSpec, UncoupledKet, enumerate_sector, iter_sectors
from .coupling import PhysicalScenario, beta as scenario_beta, pair_beta


def lowering_element(atoms: int, excited: int) -> float:
    """<excited-1| D_- |excited> for a symmetric sample of ``atoms`` atoms, in units of d."""
    if not 1 <= excited <= atoms:
        return 0.0
    return math.sqrt(excited * (atoms - excited + 1))


def lower(spec: CompoundSpec, ket: UncoupledKet, j: int) -> tuple[float, UncoupledKet] | None:
    ne = ket.excited[j]
    amp = lowering_element(spec.atoms[j], ne)
    if amp == 0.0:
        return None
    excited = list(ket.excited)
    excited[j] -= 1
    return amp, UncoupledKet(tuple(excited))


def raise_(spec: CompoundSpec, ket: UncoupledKet, j: int) -> tuple[float, UncoupledKet] | None:
    ne = ket.excited[j]
    amp = lowering_element(spec.atoms[j], ne + 1)
    if amp == 0.0:
        return None
    excited = list(ket.excited)
    excited[j] += 1
    return amp, UncoupledKet(tuple(excited))


@dataclass(frozen=True)
class PairCouplings:
    """Reduced pair couplings beta_ij / beta_ref and propagation phases."""

    strength: np.ndarray  # (N, N), symmetric, zero diagonal
    phase: np.ndarray  # (N, N), phase[i, j] = phi_i - phi_j
    beta_ref: float

    def factor(self, i: int, j: int) -> complex:
        return 0.5 * self.strength[i, j] * np.exp(1j * self.phase[i, j])


def pair_couplings(spec: CompoundSpec, scenario: PhysicalScenario | None) -> PairCouplings:
    n = len(spec.samples)
    strength = np.ones((n, n)) - np.eye(n)
    phase = np.zeros((n, n))
    beta_ref = 1.0 if scenario is None else scenario_beta(scenario)
    if spec.coupling == "uniform" or n == 1:
        return PairCouplings(strength, phase, beta_ref)

    phis = np.array(spec.phases)
    phase = phis[:, None] - phis[None, :]
    if n == 2 or scenario is None:
        # one pair (or no physics given): that pair defines the unit
        return PairCouplings(strength, phase, beta_ref)

    for i in range(n):
        for j in range(i + 1, n):
            kr_ij = abs(phis[i] - phis[j])
            if math.isclose(kr_ij, scenario.kr, rel_tol=1e-12):
                s = 1.0
            elif beta_ref == 0.0:
                raise ValueError(
                    "reference separation sits on a zero of cos(kr); pick another reference"
                )
            else:
                s = pair_beta(scenario, kr_ij / scenario.k) / beta_ref
            strength[i, j] = strength[j, i] = s
    return PairCouplings(strength, phase, beta_ref)


@dataclass(frozen=True)
class SectorMatrix:
    """Interaction restricted to one photon sector, in units of hbar * beta."""

    p: int
    kets: tuple[UncoupledKet, ...]
    matrix: np.ndarray
    beta: float
    spec: CompoundSpec
    unit: str = "hbar_beta"

    @property
    def energy_matrix(self) -> np.ndarray:
        """Matrix in the scenario's angular-frequency units (energy / hbar)."""
        return self.matrix * self.beta

    def hermiticity_residual(self) -> float:
        scale = np.abs(self.matrix).max() if self.matrix.size else 0.0
        if scale == 0.0:
            return 0.0
        return float(np.abs(self.matrix - self.matrix.conj().T).max() / scale)

    def to_json(self) -> str:
        return json.dumps(
            {
                "sector": self.p,
                "unit": self.unit,
                "beta": self.beta,
                "kets": [k.label(self.spec) for k in self.kets],
                "matrix": [[[z.real, z.imag] for z in row] for row in self.matrix.tolist()],
            }
        )


def _apply_interaction(spec, couplings, ket):
    """Yield (amplitude, target ket) for V acting on ``ket``."""
    n = len(spec.samples)
    for j in range(n):
        lowered = lower(spec, ket, j)
        if lowered is None:
            continue
        a_j, mid = lowered
        for i in range(n):
            if i == j or couplings.strength[i, j] == 0.0:
                continue
            raised = raise_(spec, mid, i)
            if raised is None:
                continue
            a_i, target = raised
            yield couplings.factor(i, j) * a_i * a_j, target


def _assemble(spec, couplings, kets):
    index = {k: n for n, k in enumerate(kets)}
    m = np.zeros((len(kets), len(kets)), dtype=complex)
    for col, ket in enumerate(kets):
        for amp, target in _apply_interaction(spec, couplings, ket):
            m[index[target], col] += amp
    return m


def build_interaction(
    spec: CompoundSpec, scenario: PhysicalScenario | None, p: int,
    couplings: PairCouplings | None = None,
) -> SectorMatrix:
    """Interaction matrix of sector ``p`` in the order of :func:`enumerate_sector`.

    ``scenario=None`` works purely in units of beta (beta = 1).
    """
    if couplings is None:
        couplings = pair_couplings(spec, scenario)
    kets = tuple(enumerate_sector(spec, p))
    return SectorMatrix(p, kets, _assemble(spec, couplings, kets), couplings.beta_ref, spec)


def build_all(spec: CompoundSpec, scenario: PhysicalScenario | None) -> list[SectorMatrix]:
    couplings = pair_couplings(spec, scenario)
    return [build_interaction(spec, scenario, p, couplings) for p in range(spec.n_sectors)]


def build_full_interaction(
    spec: CompoundSpec, scenario: PhysicalScenario | None
) -> tuple[list[UncoupledKet], np.ndarray]:
    """V on the whole product space (all sectors at once), sector-major ordering."""
    kets = [k for _, sector in iter_sectors(spec) for k in sector]
    return kets, _assemble(spec, pair_couplings(spec, scenario), kets)
