"""Compound superradiance: coupled Dicke samples exchanging photons through one mode."""

from .basis import CompoundSpec, SampleSpec, SizeCapError, UncoupledKet, enumerate_sector, sector_dimensions
from .coupling import PhysicalScenario, alpha, beta, dipole_from_linewidth, linewidth_from_dipole, one_photon_field
from .dressed import DressedState, DressedSystem, closed_form_reference, diagonalize, dress
from .hamiltonian import build_interaction, lowering_element
from .rates import CascadeChain, TransitionTable, extract_branches, transition_rates, transverse_dipole

__all__ = [
    "CascadeChain",
    "CompoundSpec",
    "DressedState",
    "DressedSystem",
    "PhysicalScenario",
    "SampleSpec",
    "SizeCapError",
    "TransitionTable",
    "UncoupledKet",
    "alpha",
    "beta",
    "build_interaction",
    "closed_form_reference",
    "diagonalize",
    "dipole_from_linewidth",
    "dress",
    "enumerate_sector",
    "extract_branches",
    "linewidth_from_dipole",
    "lowering_element",
    "one_photon_field",
    "sector_dimensions",
    "transition_rates",
    "transverse_dipole",
]
