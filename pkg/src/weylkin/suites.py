"""Run configuration and the named suites driven by the CLI."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional

import numpy as np

from . import checks
from .checks import CheckReport
from .representations import (
    KINDS,
    InvalidDimension,
    Representation,
    build,
    coherent_state,
    position_basis,
)

SUITE_ORDER = (
    "symbolic",
    "uncertainty",
    "defect",
    "generator",
    "shift",
    "eigen_shift",
    "weyl",
    "mub",
    "kernel",
    "derivative",
    "densify",
)

SUITE_KINDS = {
    "symbolic": {"fock", "grid", "clock"},
    "uncertainty": {"fock", "grid"},
    "defect": {"fock"},
    "generator": {"fock", "grid"},
    "shift": {"fock", "grid"},
    "eigen_shift": {"grid"},
    "weyl": {"grid", "clock"},
    "mub": {"fock", "grid"},
    "kernel": {"grid"},
    "derivative": {"grid"},
    "densify": {"fock", "grid"},
}

FORMATS = ("text", "json", "csv")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    rep: str = "grid"
    dim: int = 32
    hbar: float = 1.0
    spacing: float = 1.0
    tolerances: Dict[str, float] = field(default_factory=dict)
    seed: int = 0
    output_format: str = "text"
    suites: Optional[List[str]] = None
    n_states: int = 1000

    def validate(self) -> "RunConfig":
        if self.rep not in KINDS:
            raise ConfigError(f"unknown representation {self.rep!r}; choose from {KINDS}")
        if not isinstance(self.dim, int) or self.dim < 2:
            raise InvalidDimension(f"dimension must be an integer >= 2, got {self.dim!r}")
        if not self.hbar > 0:
            raise ConfigError(f"hbar must be positive, got {self.hbar}")
        if not self.spacing > 0:
            raise ConfigError(f"spacing must be positive, got {self.spacing}")
        if self.output_format not in FORMATS:
            raise ConfigError(f"unknown format {self.output_format!r}")
        if self.n_states < 1:
            raise ConfigError("states must be >= 1")
        for key in self.tolerances:
            if key not in checks.DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance key {key!r}")
        for name in self.suites or ():
            if name not in SUITE_KINDS:
                raise ConfigError(f"unknown suite {name!r}; choose from {list(SUITE_ORDER)}")
            if self.rep not in SUITE_KINDS[name]:
                raise ConfigError(f"suite {name!r} does not apply to {self.rep!r}")
        return self

    def selected_suites(self) -> List[str]:
        if self.suites:
            return list(self.suites)
        return [s for s in SUITE_ORDER if self.rep in SUITE_KINDS[s]]

    def tol(self, name: str) -> float:
        return self.tolerances.get(name, checks.DEFAULT_TOLERANCES[name])

    def build(self) -> Representation:
        return build(self.rep, self.dim, self.hbar, self.spacing)


def _parse_value(key: str, text: str):
    try:
        if key in ("dim", "seed", "states"):
            return int(text)
        if key in ("hbar", "spacing") or key.startswith("tol."):
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {text!r}") from exc
    return text


_FILE_KEYS = {"rep", "dim", "hbar", "spacing", "seed", "format", "suite", "states"}


def parse_config_text(text: str) -> dict:
    """Flat ``key = value`` lines; ``#`` starts a comment; ``tol.NAME`` sets a tolerance."""
    out: dict = {}
    tolerances: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key.startswith("tol."):
            tolerances[key[4:]] = _parse_value(key, value)
        elif key in _FILE_KEYS:
            out[key] = _parse_value(key, value)
        else:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
    if tolerances:
        out["tol"] = tolerances
    return out


def config_from_mapping(values: dict, base: RunConfig | None = None) -> RunConfig:
    cfg = replace(base) if base is not None else RunConfig()
    cfg.tolerances = dict(cfg.tolerances)
    for key, value in values.items():
        if value is None:
            continue
        if key == "rep":
            cfg.rep = value
        elif key == "dim":
            cfg.dim = value
        elif key == "hbar":
            cfg.hbar = value
        elif key == "spacing":
            cfg.spacing = value
        elif key == "seed":
            cfg.seed = value
        elif key == "format":
            cfg.output_format = value
        elif key == "states":
            cfg.n_states = value
        elif key == "suite":
            cfg.suites = [s.strip() for s in value.split(",") if s.strip()]
        elif key == "tol":
            cfg.tolerances.update(value)
        else:
            raise ConfigError(f"unknown key {key!r}")
    return cfg


def _commuting_steps(n: int):
    s = max(d for d in range(1, int(np.sqrt(n)) + 1) if n % d == 0)
    return s, n // s


def run_suite(name: str, cfg: RunConfig, rep: Representation) -> List[CheckReport]:
    t = cfg.tol
    if name == "symbolic":
        return [checks.symbolic_suite(30, 20, cfg.seed)]
    if name == "uncertainty":
        out = [checks.random_uncertainty_check(rep, cfg.n_states, cfg.seed,
                                               tol=t("uncertainty_random"))]
        if rep.kind == "grid":
            out.append(checks.packet_uncertainty_check(rep, tol=t("uncertainty_packet")))
        return out
    if name == "defect":
        return [checks.fock_defect_check(rep, tol=t("fock_defect"))]
    if name == "generator":
        a = rep.spacing if rep.kind == "grid" else 0.1
        return [checks.generator_conjugation_check(rep, [0.0, 0.0, 1.0], a, tol=t("generator"))]
    if name == "shift":
        if rep.kind == "fock":
            return [checks.shift_commutator_check(rep, 0.1, guard=0.25, tol=t("shift"))]
        return [
            checks.shift_commutator_check(rep, rep.spacing, tol=t("shift")),
            checks.shift_commutator_check(rep, rep.spacing, guarded=False, tol=t("shift_full")),
        ]
    if name == "eigen_shift":
        return [checks.eigen_shift_check(rep, 1, tol=t("eigen_shift"))]
    if name == "weyl":
        s, k = _commuting_steps(rep.dim)
        if rep.kind == "clock":
            a1, g1, am, gm = 1, 1, s, k
        else:
            dx, dp = rep.spacing, rep.momentum_spacing
            a1, g1, am, gm = dx, dp, s * dx, k * dp
        return [
            checks.weyl_relation_check(rep, a1, g1, tol=t("weyl")),
            checks.weyl_relation_check(rep, am, gm, name="weyl_commuting",
                                       tol=t("weyl_commuting")),
        ]
    if name == "mub":
        return [checks.mub_check(rep, tol=t("mub"))]
    if name == "kernel":
        return [checks.overlap_kernel_check(rep, tol=t("kernel"))]
    if name == "derivative":
        return [checks.finite_difference_derivative_check(rep, tol=t("derivative"))]
    if name == "densify":
        dims = sorted({max(2, rep.dim // 4), max(2, rep.dim // 2), rep.dim})
        if len(dims) < 2:
            dims = [2, 3]
        box = rep.dim * (rep.spacing or 1.0)
        return [checks.spectrum_densification_sweep(dims, box, rep.kind, rep.hbar)]
    raise ConfigError(f"unknown suite {name!r}")


def run(cfg: RunConfig) -> List[CheckReport]:
    """All selected suites, in declaration order."""
    cfg.validate()
    rep = cfg.build()
    reports: List[CheckReport] = []
    for name in cfg.selected_suites():
        reports.extend(run_suite(name, cfg, rep))
    return reports


def sweep(cfg: RunConfig, dims: List[int], box_length: float = 1.0):
    """Per-dimension rows of spacing and the worst deviation of each check.

    Returns ``(columns, rows)``.
    """
    if len(dims) < 2:
        raise ConfigError("sweep needs at least two dimensions")
    for d in dims:
        if d < 2:
            raise InvalidDimension(f"dimension must be >= 2, got {d}")
    if cfg.rep == "clock":
        raise ConfigError("sweep supports fock and grid")
    suites = cfg.suites or ["mub"]
    names: List[str] = []
    rows = []
    for d in dims:
        sub = replace(cfg, dim=d, spacing=box_length / d if cfg.rep == "grid" else cfg.spacing,
                      suites=suites)
        sub.validate()
        rep = sub.build()
        if rep.kind == "grid":
            spacing = rep.spacing
            extra = {}
        else:
            values = position_basis(rep).values
            spacing = float(np.diff(values).max())
            psi = coherent_state(rep, 1.0, leak_tol=1.0)
            extra = {"defect_weight": float(rep.hbar * d * abs(psi[-1]) ** 2)}
        worst: Dict[str, float] = {}
        for name in suites:
            for r in run_suite(name, sub, rep):
                worst[r.name] = max(worst.get(r.name, 0.0), r.max_deviation)
                if r.name not in names:
                    names.append(r.name)
        rows.append((d, spacing, extra, worst))
    extra_cols = sorted({k for _, _, e, _ in rows for k in e})
    columns = ["dim", "spacing"] + extra_cols + names
    table = [
        [d, sp] + [e.get(k) for k in extra_cols] + [w.get(n) for n in names]
        for d, sp, e, w in rows
    ]
    return columns, table
