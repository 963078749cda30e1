"""JSON scenario configuration: schema, presets and resolution into model objects."""

from __future__ import annotations

import copy
import json
import math
from dataclasses import dataclass
from pathlib import Path

import jsonschema

from .basis import DEFAULT_ATOM_CAP, CompoundSpec, SampleSpec
from .coupling import PhysicalScenario

_NUM = {"type": "number"}
_POS = {"type": "number", "exclusiveMinimum": 0}

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "samples": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["atoms"],
                "properties": {
                    "atoms": {"type": "integer", "minimum": 1},
                    "phase": _NUM,
                    "position": _NUM,
                },
                "not": {"required": ["phase", "position"]},
            },
        },
        "coupling": {"enum": ["geometry", "uniform"]},
        "physical": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "wavelength_nm": _POS,
                "omega_rad_s": _POS,
                "linewidth_per_s": _POS,
                "dipole_Cm": _POS,
                "linewidth_convention": {"enum": ["angular", "cycles"]},
                "lambda_coupling": {"type": "number", "exclusiveMinimum": 0, "maximum": 1},
                "kr": _POS,
                "separation_m": _POS,
            },
            "not": {
                "anyOf": [
                    {"required": ["wavelength_nm", "omega_rad_s"]},
                    {"required": ["linewidth_per_s", "dipole_Cm"]},
                    {"required": ["kr", "separation_m"]},
                ]
            },
        },
        "run": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "t_max_tausp": _POS,
                "dt_out_tausp": _POS,
                "mode": {"enum": ["chain", "network"]},
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "kr_min": _POS,
                "kr_max": _POS,
                "steps": {"type": "integer", "minimum": 2},
                "n_samples": {"type": "integer", "minimum": 1},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "format": {"enum": ["csv", "json"]},
                "path": {"type": "string"},
            },
        },
    },
}

DEFAULTS = {
    "coupling": "geometry",
    "physical": {"kr": 25.0, "lambda_coupling": 1.0, "linewidth_convention": "angular"},
    "run": {"t_max_tausp": 10.0, "dt_out_tausp": 0.01, "mode": "chain"},
    "sweep": {"kr_min": 10.0, "kr_max": 100.0, "steps": 901, "n_samples": 2},
    "output": {"format": "csv"},
}

PRESETS = {
    "paper-default": {
        "samples": [{"atoms": 2, "phase": -12.5}, {"atoms": 2, "phase": 12.5}],
        "physical": {"kr": 25.0},
    },
    "ba138": {
        "samples": [{"atoms": 2}, {"atoms": 2}],
        "physical": {"wavelength_nm": 493.0, "linewidth_per_s": 1e8, "kr": 25.0},
        "sweep": {"kr_min": 10.0, "kr_max": 100.0, "steps": 901, "n_samples": 2},
    },
}


class ConfigError(ValueError):
    """The scenario configuration is malformed or inconsistent."""


def validate(doc: dict) -> None:
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path))
    if errors:
        lines = [f"{'/'.join(map(str, e.absolute_path)) or '<root>'}: {e.message}" for e in errors]
        raise ConfigError("invalid configuration:\n  " + "\n  ".join(lines))


def _merge(base: dict, over: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in over.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


@dataclass
class ScenarioConfig:
    doc: dict

    @classmethod
    def load(cls, path: str | Path | None = None, preset: str | None = None) -> "ScenarioConfig":
        doc: dict = {}
        if preset is not None:
            if preset not in PRESETS:
                raise ConfigError(f"unknown preset {preset!r}")
            doc = copy.deepcopy(PRESETS[preset])
        if path is not None:
            try:
                user = json.loads(Path(path).read_text())
            except (OSError, json.JSONDecodeError) as exc:
                raise ConfigError(f"cannot read config {path}: {exc}") from exc
            if not isinstance(user, dict):
                raise ConfigError("configuration must be a JSON object")
            validate(user)
            doc = _merge(doc, user)
        if path is None and preset is None:
            doc = copy.deepcopy(PRESETS["paper-default"])
        return cls.from_dict(doc)

    @classmethod
    def from_dict(cls, doc: dict) -> "ScenarioConfig":
        validate(doc)
        return cls(copy.deepcopy(doc))

    def _section(self, name: str) -> dict:
        return _merge(DEFAULTS[name], self.doc.get(name, {}))

    @property
    def physical(self) -> dict:
        return self._section("physical")

    @property
    def run(self) -> dict:
        return self._section("run")

    @property
    def sweep(self) -> dict:
        return self._section("sweep")

    @property
    def output(self) -> dict:
        return self._section("output")

    @property
    def coupling(self) -> str:
        return self.doc.get("coupling", DEFAULTS["coupling"])

    @property
    def is_si(self) -> bool:
        phys = self.doc.get("physical", {})
        return "wavelength_nm" in phys or "omega_rad_s" in phys

    def wavenumber(self) -> float:
        phys = self.doc.get("physical", {})
        if "wavelength_nm" in phys:
            return 2.0 * math.pi / (phys["wavelength_nm"] * 1e-9)
        if "omega_rad_s" in phys:
            from scipy.constants import c

            return phys["omega_rad_s"] / c
        return 1.0

    def reference_kr(self) -> float:
        """kr of the reference pair: explicit kr, separation_m, or the first two phases."""
        phys = self.doc.get("physical", {})
        if "separation_m" in phys:
            if not self.is_si:
                raise ConfigError("separation_m needs wavelength_nm or omega_rad_s")
            return self.wavenumber() * phys["separation_m"]
        if "kr" in phys:
            return float(phys["kr"])
        samples = self.doc.get("samples", [])
        if len(samples) >= 2 and all("phase" in s for s in samples[:2]):
            kr = abs(samples[1]["phase"] - samples[0]["phase"])
            if kr > 0:
                return float(kr)
        return float(DEFAULTS["physical"]["kr"])

    def compound(self, atom_cap: int = DEFAULT_ATOM_CAP) -> CompoundSpec:
        """Samples in order along z; missing phases give the symmetric pair convention."""
        samples = self.doc.get("samples") or [{"atoms": 2}, {"atoms": 2}]
        kr = self.reference_kr()
        k = self.wavenumber()
        n = len(samples)
        built = []
        for idx, s in enumerate(samples):
            if "phase" in s:
                phase = float(s["phase"])
            elif "position" in s:
                if not self.is_si:
                    raise ConfigError("sample positions need wavelength_nm or omega_rad_s")
                phase = k * float(s["position"])
            else:
                # evenly spaced by kr, centred on zero
                phase = (idx - (n - 1) / 2) * kr
            built.append(SampleSpec(int(s["atoms"]), phase))
        return CompoundSpec(tuple(built), coupling=self.coupling, atom_cap=atom_cap)

    def scenario(self) -> PhysicalScenario:
        phys = self.physical
        kr = self.reference_kr()
        common = {
            "coupling_efficiency": phys["lambda_coupling"],
            "linewidth_convention": phys["linewidth_convention"],
        }
        if "dipole_Cm" in phys:
            common["dipole"] = phys["dipole_Cm"]
        else:
            common["linewidth"] = phys.get("linewidth_per_s", 1.0)
        if not self.is_si:
            if "dipole_Cm" in phys:
                raise ConfigError("dipole_Cm needs an SI scenario (wavelength_nm or omega_rad_s)")
            return PhysicalScenario.reduced(kr, **common)
        k = self.wavenumber()
        omega = phys.get("omega_rad_s")
        return PhysicalScenario(k=k, r=kr / k, omega=omega, units="si", **common)
