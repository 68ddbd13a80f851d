"""Command-line front end.

Exit status: 0 all checks pass, 1 a mathematical condition fails,
2 configuration or usage error, 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import dataclass, fields

try:
    import tomllib as tomli
except ModuleNotFoundError:  # Python 3.10
    import tomli

from . import __version__
from .admissibility import (
    ExponentSet,
    TheoremConfig,
    default_growth_radius,
    default_t_grid,
    verify_theorem,
)
from .errors import InsufficientRangeError, ResourceCapError
from .groups import ELEMENT_CAP_ENV, group_from_name
from .growth import estimate_growth_exponent, growth_table
from .report import dumps_csv, dumps_json, write_outputs
from .weights import WeightSpec, verify_weight_axioms

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3

WEIGHT_ALIASES = {
    "poly": "polynomial", "polynomial": "polynomial",
    "subexp": "subexponential", "subexponential": "subexponential",
    "trivial": "trivial",
}


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    group: str | None = None
    weight: str | None = None
    s: float | None = None
    alpha: float | None = None
    beta: float | None = None
    p: float | None = None
    r: float | None = None
    max_radius: int | None = None
    min_radius: int | None = None
    radius: int = 6
    d1_radius: int = 6
    truncation_radius: int | None = None
    t_min: float = 1.0
    t_max: float = 1e4
    t_points: int = 25
    out: str = "."
    format: str = "both"

    def require(self, *names):
        for name in names:
            if getattr(self, name) is None:
                raise ConfigError(f"missing config field {name!r}")

    def group_model(self):
        self.require("group")
        try:
            return group_from_name(self.group)
        except ValueError as exc:
            raise ConfigError(f"group: {exc}") from None

    def weight_spec(self):
        self.require("weight")
        family = WEIGHT_ALIASES.get(str(self.weight).lower())
        if family is None:
            raise ConfigError(f"weight: unknown family {self.weight!r}; use poly, subexp or trivial")
        try:
            if family == "polynomial":
                self.require("s")
                return WeightSpec.polynomial(self.s)
            if family == "subexponential":
                self.require("alpha", "beta")
                return WeightSpec.subexponential(self.alpha, self.beta)
            return WeightSpec.trivial()
        except ValueError as exc:
            raise ConfigError(f"weight: {exc}") from None

    def exponents(self):
        self.require("p", "r")
        try:
            return ExponentSet(self.p, self.r)
        except ValueError as exc:
            raise ConfigError(f"p/r: {exc}") from None


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name, value):
    kind = _FIELD_TYPES[name]
    try:
        if "float" in kind:
            return float(value)
        if "int" in kind:
            as_float = float(value)
            if not as_float.is_integer():
                raise ValueError
            return int(as_float)
    except (TypeError, ValueError):
        raise ConfigError(f"{name}: cannot parse {value!r}") from None
    return str(value)


def load_config(path=None, overrides=None) -> RunConfig:
    """Merge a TOML key/value file with flag overrides; flags win."""
    values = {}
    if path:
        try:
            with open(path, "rb") as fh:
                data = tomli.load(fh)
        except (OSError, tomli.TOMLDecodeError) as exc:
            raise ConfigError(f"config {path}: {exc}") from None
        for key, value in data.items():
            name = key.replace("-", "_")
            if name not in _FIELD_TYPES:
                raise ConfigError(f"config {path}: unknown field {key!r}")
            values[name] = value
    for name, value in (overrides or {}).items():
        if value is not None:
            values[name] = value
    cfg = RunConfig(**{k: _coerce(k, v) for k, v in values.items()})
    if cfg.format not in {"json", "csv", "both"}:
        raise ConfigError(f"format: expected json, csv or both, got {cfg.format!r}")
    for name in ("radius", "d1_radius", "t_points"):
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name}: must be >= 1")
    if not 1 <= cfg.t_min <= cfg.t_max:
        raise ConfigError("t grid: need 1 <= t_min <= t_max")
    return cfg


def _wants(cfg, kind):
    return cfg.format in (kind, "both")


def run_verify_weight(cfg: RunConfig) -> int:
    G = cfg.group_model()
    W = cfg.weight_spec()
    rep = verify_weight_axioms(W, G, cfg.radius)
    files = {}
    if _wants(cfg, "json"):
        files["axioms.json"] = dumps_json(rep)
    if _wants(cfg, "csv"):
        files["axioms.csv"] = dumps_csv(
            ["weight", "group", "radius", "max_ratio", "submultiplicative", "symmetric", "normalized"],
            [[rep.weight, rep.group, rep.radius, rep.max_ratio,
              rep.submultiplicative, rep.symmetric, rep.normalized]])
    write_outputs(cfg.out, files)
    if rep.passed:
        print(f"{W.label} on {G.name}: weight axioms hold on B(e,{cfg.radius}) "
              f"(max ratio {rep.max_ratio:.12g})")
        return EXIT_OK
    print(f"{W.label} on {G.name}: violated {', '.join(rep.violations)}; witness {rep.witness}")
    return EXIT_FAIL


def run_estimate_growth(cfg: RunConfig) -> int:
    G = cfg.group_model()
    max_r = cfg.max_radius or default_growth_radius(G)
    est = estimate_growth_exponent(G, cfg.min_radius, max_r)
    table = growth_table(G, max_r)
    files = {}
    if _wants(cfg, "csv"):
        files["growth.csv"] = dumps_csv(
            ["tau", "count", "log_tau", "log_count"],
            [[t, c, math.log(t), math.log(c)] for t, c in table])
    if _wants(cfg, "json"):
        files["growth.json"] = dumps_json(est)
    write_outputs(cfg.out, files)
    print(f"{G.name}: d_fit={est.d_fit:.6g} C={est.c_fit:.6g} on [{est.radius_range[0]}, "
          f"{est.radius_range[1]}], verdict {est.verdict}")
    return EXIT_OK if est.is_polynomial else EXIT_FAIL


def run_check_admissibility(cfg: RunConfig) -> int:
    G = cfg.group_model()
    W = cfg.weight_spec()
    E = cfg.exponents()
    if W.poly_exponent is None:
        raise ConfigError("weight: admissibility is checked for polynomial weights only")
    tc = TheoremConfig(
        growth_min_radius=cfg.min_radius,
        growth_max_radius=cfg.max_radius,
        d1_radius=max(2, cfg.d1_radius),
        truncation_radius=cfg.truncation_radius,
        t_grid=tuple(default_t_grid(cfg.t_min, cfg.t_max, cfg.t_points)),
    )
    rep = verify_theorem(W, G, E, tc)
    files = {}
    if _wants(cfg, "json"):
        files["admissibility.json"] = dumps_json(rep)
    if _wants(cfg, "csv"):
        files["ab_curve.csv"] = dumps_csv(["tau", "a", "b", "b_error"], rep.ab_curve)
        files["tradeoff.csv"] = dumps_csv(["t", "m", "tau_star", "D_t_theta"], rep.tradeoff_curve)
    write_outputs(cfg.out, files)
    status = " ".join(f"{c}={v}" for c, v in rep.verdict.items())
    print(f"{W.label} on {G.name}, p={E.p:g}, r={E.r:g}: {status}")
    if rep.theta_predicted is not None:
        print(f"theta={rep.theta_predicted:.6g} (measured {rep.theta_measured:.6g}), "
              f"alpha={rep.alpha_predicted:.6g}, D={rep.d_constant:.6g}")
    for cond, reason in rep.reasons.items():
        print(f"reason [{cond}]: {reason}")
    return EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {
    "verify-weight": run_verify_weight,
    "estimate-growth": run_estimate_growth,
    "check-admissibility": run_check_admissibility,
}


def _exponent_arg(text):
    return math.inf if text.strip().lower() in {"inf", "infinity"} else float(text)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML key = value file; flags override its entries")
    common.add_argument("--group", help="Z, Z^d, heisenberg, Z/n or free2")
    common.add_argument("--weight", help="poly, subexp or trivial")
    common.add_argument("--s", type=float, help="polynomial exponent s >= 0")
    common.add_argument("--alpha", type=float, help="subexponential alpha > 0")
    common.add_argument("--beta", type=float, help="subexponential beta in (0, 1)")
    common.add_argument("--p", type=_exponent_arg, help="p in [1, inf]")
    common.add_argument("--r", type=_exponent_arg, help="r in [1, inf]")
    common.add_argument("--max-radius", type=int, help="largest radius of the growth fit")
    common.add_argument("--min-radius", type=int, help="smallest radius of the growth fit")
    common.add_argument("--radius", type=int, help="ball radius for the weight-axiom sweep (default 6)")
    common.add_argument("--d1-radius", type=int, help="ball radius for the splitting-constant sweep (default 6)")
    common.add_argument("--truncation-radius", type=int, help="exact-summation radius (default: automatic)")
    common.add_argument("--t-min", type=float)
    common.add_argument("--t-max", type=float)
    common.add_argument("--t-points", type=int)
    common.add_argument("--out", help="output directory (default .)")
    common.add_argument("--format", choices=["json", "csv", "both"])

    parser = argparse.ArgumentParser(
        prog="admissible",
        description="Numerical verification of (p,r)-admissible weights on groups of polynomial growth.",
        epilog=(f"Environment: {ELEMENT_CAP_ENV} sets the element budget for ball enumeration "
                "(default 10^7); ADMISSIBLE_DISABLE_NUMBA=1 selects the pure-numpy kernels. "
                "Exit status: 0 pass, 1 condition fails, 2 usage error, 3 resource cap exceeded."),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify-weight", parents=[common], help="exhaustive weight-axiom check")
    sub.add_parser("estimate-growth", parents=[common], help="ball growth table and exponent fit")
    sub.add_parser("check-admissibility", parents=[common], help="full (p,r)-admissibility pipeline")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    overrides = {k: v for k, v in vars(args).items() if k not in {"command", "config"}}
    try:
        cfg = load_config(args.config, overrides)
        return COMMANDS[args.command](cfg)
    except (ConfigError, InsufficientRangeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ResourceCapError as exc:
        where = getattr(exc, "condition", None)
        print(f"resource cap exceeded{f' during {where}' if where else ''}: {exc}", file=sys.stderr)
        return EXIT_CAP


if __name__ == "__main__":
    sys.exit(main())
