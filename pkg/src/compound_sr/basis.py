"""Uncoupled product basis of a compound system, split into photon sectors.

A ket stores only the excited-atom count of every sample; the number of
photons a sample has emitted is ``atoms - excited``.  Sector ``p`` collects
the kets whose emitted photons add up to ``p``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Literal, Sequence

DEFAULT_ATOM_CAP = 12

_LETTERS = {2: "c", 1: "b", 0: "a"}


class SizeCapError(ValueError):
    """The compound system has more atoms than the dense solver is allowed to handle."""


@dataclass(frozen=True)
class SampleSpec:
    atoms: int
    phase: float = 0.0

    def __post_init__(self):
        if int(self.atoms) != self.atoms or self.atoms < 1:
            raise ValueError(f"a sample needs a positive integer atom count, got {self.atoms!r}")


@dataclass(frozen=True)
class CompoundSpec:
    """Ordered samples along z plus the pair-coupling mode.

    ``coupling="geometry"`` derives each pair's coupling from its phase
    separation; ``"uniform"`` gives every pair the same coupling beta and no
    propagation phase.
    """

    samples: tuple[SampleSpec, ...]
    coupling: Literal["geometry", "uniform"] = "geometry"
    atom_cap: int = DEFAULT_ATOM_CAP

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple(self.samples))
        if not self.samples:
            raise ValueError("a compound system needs at least one sample")
        if self.coupling not in ("geometry", "uniform"):
            raise ValueError(f"unknown coupling mode {self.coupling!r}")
        if self.total_atoms > self.atom_cap:
            raise SizeCapError(
                f"{self.total_atoms} atoms exceed the cap of {self.atom_cap}"
            )

    @classmethod
    def pair(cls, kr: float, atoms: int = 2, **kwargs) -> "CompoundSpec":
        """Two identical samples at phases -kr/2 and +kr/2."""
        return cls((SampleSpec(atoms, -kr / 2), SampleSpec(atoms, kr / 2)), **kwargs)

    @classmethod
    def uniform(cls, n_samples: int, atoms: int = 2, **kwargs) -> "CompoundSpec":
        return cls(tuple(SampleSpec(atoms) for _ in range(n_samples)), coupling="uniform", **kwargs)

    @classmethod
    def single(cls, atoms: int) -> "CompoundSpec":
        return cls((SampleSpec(atoms),))

    @property
    def atoms(self) -> tuple[int, ...]:
        return tuple(s.atoms for s in self.samples)

    @property
    def phases(self) -> tuple[float, ...]:
        return tuple(s.phase for s in self.samples)

    @property
    def total_atoms(self) -> int:
        return sum(self.atoms)

    @property
    def n_sectors(self) -> int:
        return self.total_atoms + 1

    @property
    def two_atom_letters(self) -> bool:
        return all(m == 2 for m in self.atoms)

    @cached_property
    def _sectors(self) -> tuple[tuple["UncoupledKet", ...], ...]:
        buckets: list[list[UncoupledKet]] = [[] for _ in range(self.n_sectors)]
        ranges = [range(m, -1, -1) for m in self.atoms]
        for excited in itertools.product(*ranges):
            ket = UncoupledKet(excited)
            buckets[ket.sector(self)].append(ket)
        return tuple(tuple(b) for b in buckets)


@dataclass(frozen=True, order=True)
class UncoupledKet:
    excited: tuple[int, ...]

    def photons(self, spec: CompoundSpec) -> tuple[int, ...]:
        return tuple(m - ne for m, ne in zip(spec.atoms, self.excited))

    def sector(self, spec: CompoundSpec) -> int:
        return spec.total_atoms - sum(self.excited)

    def label(self, spec: CompoundSpec) -> str:
        """``"c0;b1"`` for two-atom samples, ``"Ne=[2,1]"`` otherwise."""
        if spec.two_atom_letters:
            return ";".join(f"{_LETTERS[ne]}{2 - ne}" for ne in self.excited)
        return "Ne=[" + ",".join(str(ne) for ne in self.excited) + "]"


def enumerate_sector(spec: CompoundSpec, p: int) -> list[UncoupledKet]:
    """Kets with ``p`` emitted photons, descending lexicographic in the excited counts.

    Out-of-range ``p`` gives an empty list.
    """
    if not 0 <= p < spec.n_sectors:
        return []
    return list(spec._sectors[p])


def sector_dimensions(spec: CompoundSpec) -> list[int]:
    return [len(s) for s in spec._sectors]


def iter_sectors(spec: CompoundSpec) -> Iterator[tuple[int, list[UncoupledKet]]]:
    for p in range(spec.n_sectors):
        yield p, enumerate_sector(spec, p)


def total_dimension(atoms: Sequence[int]) -> int:
    return math.prod(m + 1 for m in atoms)
