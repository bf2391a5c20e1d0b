"""Command-line front end.

Examples::

    liouville-minima --preset classic-L --mode trajectory --k 1,2 --out-dir out
    liouville-minima --spec-file chain.txt --mode verify --out-dir out
    liouville-minima --preset classic-L --mode full-report --q-max 10^7/2

Exit status: 0 success, 1 hard rule failure in a check suite, 2 invalid
input, 3 resource budget exceeded (strict-exact mode).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ResourceBudgetError, ValidationError
from .logscale import QScale
from .qchain import spec_from_text
from .report import RunConfig, presets, run

_CONFIG_KEYS = (
    "preset",
    "spec-file",
    "mode",
    "k",
    "q-min",
    "q-max",
    "q-points",
    "tail-fraction",
    "budget",
    "out-dir",
    "truncation-depth",
    "n-max",
    "cf-depth",
    "strict-exact",
    "transition-extras",
)


def parse_scale(text: str) -> QScale:
    """Parse a scale value: a plain integer (``1000``) or a power
    (``10^4``, ``10^3.5``, ``10^7/2``)."""
    text = text.strip()
    try:
        if "^" in text:
            base_text, _, exp_text = text.partition("^")
            exponent = Fraction(exp_text)
            return QScale.power(
                int(base_text), exponent.numerator, exponent.denominator
            )
        return QScale(int(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"cannot parse scale {text!r}: {exc}") from exc


def _parse_k_list(text: str) -> tuple:
    try:
        ks = tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise ValidationError(f"cannot parse dimension list {text!r}") from exc
    if not ks:
        raise ValidationError("dimension list is empty")
    return ks


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise ValidationError(f"cannot parse boolean {text!r}")


def _read_config_file(path: str) -> dict:
    """Read a ``key=value`` options file (same keys as the long CLI flags,
    without the leading dashes; ``#`` starts a comment)."""
    values = {}
    try:
        raw = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    for lineno, line in enumerate(raw.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValidationError(
                f"{path}:{lineno}: expected key=value, got {stripped!r}"
            )
        key, _, value = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ValidationError(
                f"{path}:{lineno}: unknown option {key!r}; "
                f"known options: {', '.join(_CONFIG_KEYS)}"
            )
        values[key] = value.strip()
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="liouville-minima",
        description=(
            "Divisibility-chain constructions: successive-minima "
            "trajectories, witness certificates, and consistency checks."
        ),
    )
    source = parser.add_mutually_exclusive_group()
    source.add_argument("--preset", help="named built-in configuration")
    source.add_argument(
        "--spec-file", help="path to a key=value chain description file"
    )
    parser.add_argument(
        "--list-presets", action="store_true", help="print preset names and exit"
    )
    parser.add_argument(
        "--mode",
        choices=["trajectory", "witness", "verify", "full-report"],
        help="what to compute (default: full-report)",
    )
    parser.add_argument("--k", help="comma-separated dimensions, e.g. 1,2,3")
    parser.add_argument(
        "--q-min", help="lower scale bound (integer or base^exponent)"
    )
    parser.add_argument(
        "--q-max", help="upper scale bound (integer or base^exponent)"
    )
    parser.add_argument("--q-points", type=int, help="number of grid points")
    parser.add_argument(
        "--tail-fraction",
        type=float,
        help="fraction of trailing samples used for the extreme-value window",
    )
    parser.add_argument("--budget", type=int, help="enumeration budget per sample")
    parser.add_argument("--out-dir", help="artifact directory (default: artifacts)")
    parser.add_argument(
        "--N",
        dest="truncation_depth",
        type=int,
        help="chain truncation depth for the target value (default: 4)",
    )
    parser.add_argument(
        "--n-max",
        type=int,
        help="largest chain index for witness families (default: 6)",
    )
    parser.add_argument(
        "--depth",
        dest="cf_depth",
        type=int,
        help="continued-fraction expansion depth (default: 20)",
    )
    parser.add_argument(
        "--strict-exact",
        action="store_true",
        default=None,
        help="fail (exit 3) instead of degrading when the budget is exceeded",
    )
    parser.add_argument(
        "--no-transition-extras",
        action="store_true",
        default=None,
        help="disable extra grid samples around chain transition scales",
    )
    parser.add_argument(
        "--config", help="key=value options file; explicit flags override it"
    )
    return parser


def _pick(cli_value, file_values: dict, key: str, convert):
    if cli_value is not None:
        return cli_value
    if key in file_values:
        return convert(file_values[key])
    return None


def build_config(args: argparse.Namespace) -> RunConfig:
    file_values = _read_config_file(args.config) if args.config else {}

    preset_name = args.preset or file_values.get("preset")
    spec_path = args.spec_file or file_values.get("spec-file")
    if preset_name and spec_path:
        raise ValidationError("give either a preset or a spec file, not both")
    if preset_name:
        known = presets()
        if preset_name not in known:
            raise ValidationError(
                f"unknown preset {preset_name!r}; "
                f"available: {', '.join(sorted(known))}"
            )
        base = known[preset_name]
    elif spec_path:
        try:
            spec_text = Path(spec_path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ValidationError(
                f"cannot read spec file {spec_path}: {exc}"
            ) from exc
        base = RunConfig(spec=spec_from_text(spec_text))
    else:
        raise ValidationError("a --preset or --spec-file is required")

    updates = {}
    mode = _pick(args.mode, file_values, "mode", str)
    if mode is not None:
        updates["mode"] = mode
    ks = _pick(args.k, file_values, "k", str)
    if ks is not None:
        updates["ks"] = _parse_k_list(ks)
    for attr, key, convert in (
        ("q_min", "q-min", parse_scale),
        ("q_max", "q-max", parse_scale),
        ("q_points", "q-points", int),
        ("tail_fraction", "tail-fraction", float),
        ("budget", "budget", int),
        ("out_dir", "out-dir", str),
        ("truncation_depth", "truncation-depth", int),
        ("witness_n_max", "n-max", int),
        ("cf_depth", "cf-depth", int),
    ):
        cli_value = getattr(
            args,
            {
                "witness_n_max": "n_max",
                "q_min": "q_min",
                "q_max": "q_max",
            }.get(attr, attr),
            None,
        )
        if attr in ("q_min", "q_max") and isinstance(cli_value, str):
            cli_value = parse_scale(cli_value)
        try:
            value = _pick(cli_value, file_values, key, convert)
        except ValueError as exc:
            raise ValidationError(f"bad value for {key}: {exc}") from exc
        if value is not None:
            updates[attr] = value
    strict = _pick(args.strict_exact, file_values, "strict-exact", _parse_bool)
    if strict is not None:
        updates["strict_exact"] = strict
    if args.no_transition_extras:
        updates["transition_extras"] = False
    elif "transition-extras" in file_values:
        updates["transition_extras"] = _parse_bool(file_values["transition-extras"])
    return dataclasses.replace(base, **updates)


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.list_presets:
        for name, config in sorted(presets().items()):
            print(f"{name}: {config.spec.label()}")
        return 0
    try:
        config = build_config(args)
        result = run(config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceBudgetError as exc:
        print(f"resource budget exceeded: {exc}", file=sys.stderr)
        return 3
    for note in result.notes:
        print(f"note: {note}", file=sys.stderr)
    print(
        f"wrote {len(result.artifacts)} artifacts to {result.out_dir} "
        f"(MANIFEST included)"
    )
    if result.overall is not None:
        print(f"overall={result.overall}")
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
