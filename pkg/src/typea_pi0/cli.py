"""Command-line interface: ``python -m typea_pi0 <command>``.

Exit codes: 0 ok, 2 invalid input, 3 capacity exceeded, 4 chain
verification failure, 5 failed witness in ``verify``, 6 self-test failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .abelian import parse_qz
from .chains import chain_to_base
from .errors import CapacityError, ContractViolation, UnsupportedModeError, VerificationError
from .lparam import (
    SETUP_FIELDS,
    AllowedChars,
    EdgeWitness,
    TypeASetup,
    setup_from_json,
    verify_edge_witness,
    verify_exact_witness,
)
from .report import MODES, components
from .selftest import PRESETS, TORUS_PRESETS, run_selftest, sl2_alpha
from .torus import TorusAction, cocycle_group, is_connected_over
from .weyl import Perm

EXIT_OK, EXIT_INVALID, EXIT_CAPACITY, EXIT_CHAIN, EXIT_WITNESS, EXIT_SELFTEST = 0, 2, 3, 4, 5, 6

OPTION_FIELDS = {"mode", "chars", "out", "w", "jobs"}
TORUS_FIELDS = {"s_star", "fr_star", "q", "b", "inverted_primes"}


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ContractViolation(f"cannot read {path}: {exc}") from None


def _emit(data, out: str | None):
    text = json.dumps(data, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def load_config(args) -> tuple[dict, dict]:
    """Merge preset, config file and flags into setup fields and options."""
    fields: dict = {}
    options: dict = {}
    if args.preset:
        if args.preset not in PRESETS:
            raise ContractViolation(f"unknown preset {args.preset!r}; choose from {sorted(PRESETS)}")
        fields.update(PRESETS[args.preset])
    if args.config:
        data = _read_json(args.config)
        if not isinstance(data, dict):
            raise ContractViolation("config must be a JSON object")
        unknown = set(data) - SETUP_FIELDS - OPTION_FIELDS
        if unknown:
            raise ContractViolation(f"unknown config fields {sorted(unknown)}")
        fields.update({k: v for k, v in data.items() if k in SETUP_FIELDS})
        options.update({k: v for k, v in data.items() if k in OPTION_FIELDS})
    if args.z is not None:
        fields["alpha"] = sl2_alpha(args.z)
    for flag, key in (("n", "n"), ("q", "q"), ("alpha", "alpha"), ("eps_s", "eps_s"), ("eps_fr", "eps_Fr")):
        value = getattr(args, flag)
        if value is not None:
            fields[key] = value
    if args.inverted is not None:
        fields["inverted_primes"] = [int(x) for x in args.inverted.split(",") if x.strip()]
    if args.chars is not None:
        options["chars"] = args.chars
    for key in ("mode", "out", "w", "jobs"):
        value = getattr(args, key, None)
        if value is not None:
            options[key] = value
    if "chars" in options:
        fields["allowed_chars"] = options["chars"]
    if not fields:
        raise ContractViolation("no setup given; use --preset or --config")
    return fields, options


def _setup(args) -> tuple[TypeASetup, dict]:
    fields, options = load_config(args)
    return setup_from_json(fields), options


def setup_from_echo(echo: dict) -> TypeASetup:
    """Rebuild a setup from the ``setup`` block of a report."""
    if not isinstance(echo, dict):
        raise ContractViolation("report has no setup block")
    fields = {k: echo[k] for k in ("n", "m", "a", "q", "eps_s", "eps_Fr", "inverted_primes", "allowed_chars") if k in echo}
    fields["alpha"] = echo.get("alpha_raw", echo.get("alpha", "0/1"))
    setup = setup_from_json(fields)
    if "alpha" in echo and setup.alpha != parse_qz(echo["alpha"]):
        raise ContractViolation("setup echo is inconsistent: normalized constant differs")
    return setup


def cmd_components(args) -> int:
    setup, options = _setup(args)
    mode = options.get("mode", "direct")
    if mode not in MODES:
        raise ContractViolation(f"mode must be one of {MODES}")
    jobs = int(options.get("jobs") or os.cpu_count() or 1)
    report = components(setup, mode, jobs=jobs)
    _emit(report.to_json(timing=args.timing), options.get("out"))
    return EXIT_OK


def cmd_chain(args) -> int:
    setup, options = _setup(args)
    if "w" not in options:
        raise ContractViolation("chain needs --w")
    w = Perm.parse(options["w"], setup.n)
    chain = chain_to_base(setup, w)
    data = {"setup": setup.to_json(), **chain.to_json(setup)}
    _emit(data, options.get("out"))
    return EXIT_OK


def _edge_items(data: dict):
    if "edges" in data:
        return data["edges"]
    if "steps" in data:
        return [{"w": s["from"], "w_prime": s["to"], "char": s["char"], "point": s["point"]} for s in data["steps"]]
    raise ContractViolation("file has neither edges nor steps")


def cmd_verify(args) -> int:
    data = _read_json(args.report)
    if not isinstance(data, dict):
        raise ContractViolation("report must be a JSON object")
    setup = setup_from_echo(data.get("setup"))
    items = _edge_items(data)
    for k, item in enumerate(items):
        try:
            witness = EdgeWitness.from_json(item, setup.n)
            if "translate" in item:
                ok = verify_exact_witness(setup, Perm.parse(item["translate"], setup.n), witness)
            else:
                ok = verify_edge_witness(setup, witness)
        except (ContractViolation, KeyError, TypeError, ValueError) as exc:
            print(f"edge {k}: unreadable ({exc})", file=sys.stderr)
            return EXIT_WITNESS
        if not ok:
            print(f"edge {k} ({item.get('w')} -- {item.get('w_prime')} at {item.get('char')}): FAILED", file=sys.stderr)
            return EXIT_WITNESS
    print(f"{len(items)} witnesses verified")
    return EXIT_OK


def _torus_config(args) -> tuple[TorusAction, list[int]]:
    data: dict = {}
    if args.preset:
        if args.preset not in TORUS_PRESETS:
            raise ContractViolation(f"unknown torus preset {args.preset!r}; choose from {sorted(TORUS_PRESETS)}")
        data.update(TORUS_PRESETS[args.preset])
    if args.config:
        cfg = _read_json(args.config)
        if not isinstance(cfg, dict):
            raise ContractViolation("config must be a JSON object")
        unknown = set(cfg) - TORUS_FIELDS
        if unknown:
            raise ContractViolation(f"unknown torus fields {sorted(unknown)}")
        data.update(cfg)
    if args.q is not None:
        data["q"] = args.q
    if args.b is not None:
        data["b"] = args.b
    inverted = data.pop("inverted_primes", [])
    if args.inverted is not None:
        inverted = [int(x) for x in args.inverted.split(",") if x.strip()]
    missing = {"s_star", "fr_star", "q", "b"} - set(data)
    if missing:
        raise ContractViolation(f"missing torus fields {sorted(missing)}")
    try:
        act = TorusAction(data["s_star"], data["fr_star"], int(data["q"]), int(data["b"]))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ContractViolation):
            raise
        raise ContractViolation(f"malformed torus action: {exc}") from None
    return act, inverted


def cmd_torus(args) -> int:
    act, inverted = _torus_config(args)
    g = cocycle_group(act)
    connected = is_connected_over(g, inverted)
    print(f"{g}, connected: {str(connected).lower()}")
    if args.out:
        _emit(
            {
                "free_rank": g.free_rank,
                "torsion": list(g.torsion),
                "inverted_primes": sorted(inverted),
                "connected": connected,
            },
            args.out,
        )
    return EXIT_OK


def cmd_selftest(args) -> int:
    failed = run_selftest()
    if failed is not None:
        print(f"selftest failed: {failed}", file=sys.stderr)
        return EXIT_SELFTEST
    print("selftest passed")
    return EXIT_OK


def _setup_flags(p: argparse.ArgumentParser):
    p.add_argument("--preset", help=f"one of {', '.join(sorted(PRESETS))}")
    p.add_argument("--config", help="JSON file with setup fields and options")
    p.add_argument("--n", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--alpha", help='central exponent as "num/den"')
    p.add_argument("--z", type=int, choices=(1, -1), help="sign of the central constant (sl2)")
    p.add_argument("--eps-s", dest="eps_s", type=int, choices=(1, -1))
    p.add_argument("--eps-fr", dest="eps_fr", type=int, choices=(1, -1))
    p.add_argument("--inverted", help="comma-separated inverted primes")
    p.add_argument("--chars", help="zbar-inv-D, ell-adic:L, fbar:L or a list such as 0,2")
    p.add_argument("--out", help="write JSON here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="typea-pi0", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("components", help="partition W0 and emit a JSON report")
    _setup_flags(p)
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--jobs", type=int, help="worker processes (default: all cores)")
    p.add_argument("--timing", action="store_true", help="include wall-clock time in stats")
    p.set_defaults(func=cmd_components)

    p = sub.add_parser("chain", help="certified chain from w to the base vertex")
    _setup_flags(p)
    p.add_argument("--w", help='element of W0 in cycle notation, e.g. "(1 2 3)"')
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("verify", help="re-check every witness in a report or chain file")
    p.add_argument("report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("torus", help="cocycle group of a tame torus action")
    p.add_argument("--preset", help=f"one of {', '.join(sorted(TORUS_PRESETS))}")
    p.add_argument("--config", help="JSON file with s_star, fr_star, q, b, inverted_primes")
    p.add_argument("--q", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--inverted", help="comma-separated inverted primes")
    p.add_argument("--out")
    p.set_defaults(func=cmd_torus)

    p = sub.add_parser("selftest", help="congruence sweep and golden values")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ContractViolation, UnsupportedModeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except CapacityError as exc:
        print(f"capacity: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except VerificationError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_CHAIN


if __name__ == "__main__":
    sys.exit(main())
