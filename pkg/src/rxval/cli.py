"""Command-line front end.

Configuration is an INI file with one section per subcommand, for example::

    [incoherence]
    group = RATIONALS
    alpha = sqrt2 - 1
    r = t^1
    m = 4

Series literals use ``coeffs`` (``;``-separated field elements) plus either
``tail_floor`` (a bare truncation) or ``tail`` with ``tail.level`` /
``tail.limit`` (a certified series).  ``series = witness`` selects the
incoherence witness built from ``group``, ``alpha`` and ``seq_len``.
"""
from __future__ import annotations

import argparse
import configparser
import random
import sys
from pathlib import Path
from typing import Sequence

from rxval.base_field import parse_field
from rxval.incoherence import (
    IncoherenceConfig,
    candidate_from_fields,
    build_witness_series,
    random_candidates,
    refute_generators,
    verify_report,
)
from rxval.localization import ONE_SERIES, purity_block
from rxval.power_series import (
    CertifiedSeries,
    SeriesPoly,
    chi_csv,
    chi_table,
    deserialize_series,
    geometric_grid,
    v_lambda,
)
from rxval.suites import SUITES, purity_triple, run_suites
from rxval.value_group import ValueGroup, format_ext, format_scalar, parse_scalar

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

DEFAULTS = {
    "group": "RATIONALS",
    "alpha": "sqrt2 - 1",
    "r": "t^1",
    "seq_len": "8",
    "m": "4",
}


class ConfigError(ValueError):
    pass


def _section(path: str | None, name: str) -> dict[str, str]:
    out = dict(DEFAULTS)
    if path:
        cp = configparser.ConfigParser(interpolation=None)
        cp.optionxform = str  # keep "tail.level" etc. as written
        if not cp.read(path):
            raise ConfigError(f"cannot read config {path}")
        if cp.has_section(name):
            out.update(cp.items(name))
    return out


def _has_section(path: str, name: str) -> bool:
    cp = configparser.ConfigParser(interpolation=None)
    cp.read(path)
    return cp.has_section(name)


def _group(sec: dict[str, str]) -> ValueGroup:
    try:
        return ValueGroup(sec["group"].strip().upper())
    except ValueError:
        raise ConfigError(f"unknown group {sec['group']!r}") from None


def _incoherence_config(sec: dict[str, str], order: int | None) -> IncoherenceConfig:
    try:
        return IncoherenceConfig(
            _group(sec),
            parse_scalar(sec["alpha"]),
            parse_field(sec["r"]),
            int(sec["seq_len"]),
            order if order is not None else int(sec.get("order", "32")),
        )
    except ConfigError:
        raise
    except (ValueError, KeyError) as exc:
        raise ConfigError(str(exc)) from None


def _series(sec: dict[str, str]):
    kind = sec.get("series", "literal" if "coeffs" in sec else "witness").strip()
    if kind == "witness":
        return build_witness_series(_incoherence_config(sec, None))
    if "coeffs" not in sec:
        raise ConfigError("series literal needs 'coeffs'")
    lit = {k: v for k, v in sec.items() if k in ("coeffs", "tail", "tail_floor") or k.startswith("tail.")}
    if "tail" in lit and "tail.group" not in lit and lit["tail"].strip() == "sequence":
        lit["tail.group"] = _group(sec).value
    try:
        return deserialize_series(lit)
    except (ValueError, KeyError) as exc:
        raise ConfigError(f"bad series literal: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_chi(args) -> int:
    sec = _section(args.config, "chi")
    f = _series(sec)
    try:
        lam0 = parse_scalar(sec.get("lambda0", "1"))
        steps = int(sec.get("steps", "12"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.order is not None and isinstance(f, CertifiedSeries):
        f = f.truncate(args.order)
    grid = geometric_grid(lam0, steps)
    rows = chi_table(f, grid)
    # chi is nondecreasing in lam; the grid decreases, so exact values must not rise
    exact = [r.value for r in rows if r.exact]
    for a, b in zip(exact, exact[1:]):
        if b > a:
            print(f"error: chi not monotone: {format_ext(a)} then {format_ext(b)}", file=sys.stderr)
            return EXIT_FAIL
    _emit(chi_csv(grid, rows), args.out)
    return EXIT_OK


def cmd_vlambda(args) -> int:
    sec = _section(args.config, "vlambda")
    f = _series(sec)
    try:
        lam = parse_scalar(sec.get("lambda", "1/2"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if args.order is not None and isinstance(f, CertifiedSeries):
        f = f.truncate(args.order)
    _emit(f"lambda={format_scalar(lam)} {v_lambda(f, lam)}\n", args.out)
    return EXIT_OK


def _candidates(sec: dict[str, str], cfg: IncoherenceConfig, seed: int) -> list[CertifiedSeries]:
    if "candidate.1.coeffs" in sec:
        out, i = [], 1
        while f"candidate.{i}.coeffs" in sec:
            fields = dict(sec)
            fields.setdefault(f"candidate.{i}.tail", "zero")
            try:
                out.append(candidate_from_fields(fields, i, cfg.group))
            except (ValueError, KeyError) as exc:
                raise ConfigError(f"candidate {i}: {exc}") from None
            i += 1
        return out
    try:
        m = int(sec["m"])
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if m < 1:
        raise ConfigError("m must be >= 1")
    return random_candidates(cfg, random.Random(seed), m)


def cmd_incoherence(args) -> int:
    sec = _section(args.config, "incoherence")
    cfg = _incoherence_config(sec, args.order)
    cands = _candidates(sec, cfg, args.seed)
    try:
        rep = refute_generators(cands, cfg)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    text = rep.to_text()
    _emit(text, args.out)
    res = verify_report(text, cfg)
    for step in res.failures:
        print(f"verify failed: {step}", file=sys.stderr)
    return EXIT_OK if res.ok else EXIT_FAIL


def cmd_verify(args) -> int:
    sec = _section(args.config, "verify")
    path = args.certificate or sec.get("certificate")
    if not path:
        raise ConfigError("verify needs a certificate path")
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(str(exc)) from None
    cfg = None
    if args.config and _has_section(args.config, "incoherence"):
        cfg = _incoherence_config(_section(args.config, "incoherence"), None)
    res = verify_report(text, cfg)
    if res.ok:
        print(f"OK {path}")
        return EXIT_OK
    for step in res.failures:
        print(f"FAIL {step}")
    return EXIT_FAIL


def cmd_purity(args) -> int:
    sec = _section(args.config, "purity")
    order = args.order if args.order is not None else int(sec.get("order", "8"))
    blocks = []
    if "a" in sec:
        try:
            a = parse_field(sec["a"])
            f = SeriesPoly(tuple(parse_field(x) for x in sec["f"].split(";")))
            g = SeriesPoly(tuple(parse_field(x) for x in sec["g"].split(";")))
            u_sec = {"coeffs": sec.get("u", "1"), "tail": sec.get("u.tail", "zero")}
            u_sec.update({k[2:]: v for k, v in sec.items() if k.startswith("u.tail.")})
            u = deserialize_series(u_sec) if "u" in sec else ONE_SERIES
        except (ValueError, KeyError) as exc:
            raise ConfigError(f"bad purity witness: {exc}") from None
        blocks.append(purity_block(a, f, g, u, min(order, f.order, g.order)))
    else:
        rng = random.Random(args.seed)
        for _ in range(int(sec.get("count", "3"))):
            a, f, g, u, _h = purity_triple(rng, order)
            blocks.append(purity_block(a, f, g, u, order))
    _emit("\n\n".join(b.format() for b in blocks) + "\n", args.out)
    return EXIT_OK if all(b.result == "PASS" for b in blocks) else EXIT_FAIL


def cmd_selftest(args) -> int:
    sec = _section(args.config, "selftest")
    names = [n.strip() for n in sec.get("suites", "").split(",") if n.strip()] or None
    if names:
        unknown = [n for n in names if n not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}")
    scale = float(sec.get("scale", "1.0"))
    results = run_suites(args.seed, names, scale)
    lines = []
    for r in results:
        lines.append(r.line())
        lines += [f"  {f}" for f in r.failures[:5]]
    ok = all(r.ok for r in results)
    lines.append(f"selftest seed={args.seed}: {'PASS' if ok else 'FAIL'}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "chi": cmd_chi,
    "vlambda": cmd_vlambda,
    "incoherence": cmd_incoherence,
    "verify": cmd_verify,
    "purity": cmd_purity,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rxval", description="Valuations, Newton polygons and the incoherence of R[[X]].")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("certificate", nargs="?", help="certificate file (verify only)")
    p.add_argument("--config", metavar="PATH")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--order", type=int, metavar="INT", help="truncation order N")
    p.add_argument("--out", metavar="PATH")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.order is not None and args.order < 1:
        print("error: --order must be positive", file=sys.stderr)
        return EXIT_CONFIG
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
