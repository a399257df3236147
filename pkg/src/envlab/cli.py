"""Command-line front end.

Exit codes: 0 verdict true or computation done, 1 verdict false, 2 input
error, 3 cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Callable, Optional

from . import io
from .errors import CapExceeded, EnvlabError, ParseError
from .finspace import DEFAULT_CAPS, Caps, int_preimage

OK, FALSE, INPUT_ERROR, CAP_EXCEEDED = 0, 1, 2, 3

Handler = Callable[[argparse.Namespace, Caps], tuple[dict, dict, int]]


# ---------------------------------------------------------------- finite posets


def _load_map(path: str):
    return io.parse_map(io.load_json(path))


def _star_rows(F, caps: Caps) -> dict:
    from .envelope import star

    Y = F.Y
    return {Y.render(V): F.X.render(row) for V, row in star(F, caps).rows}


def cmd_poset_envelope(args, caps):
    from .envelope import principal_envelope, principal_O2_envelope

    f = _load_map(args.map)
    inputs = {"map": io.dump_map(f)}
    if args.approx:
        approx = io.parse_approx(io.load_json(args.approx), f.codomain)
        inputs["approx"] = io.dump_approx(approx)
        F = principal_envelope(f, approx)
        return inputs, {"lattice": "finite", "envelope": F.table()}, OK
    F = principal_O2_envelope(f, caps)
    result = {
        "lattice": "O2",
        "envelope": io.dump_o2_envelope(F)["F"],
        "star": _star_rows(F, caps),
    }
    return inputs, result, OK


def cmd_poset_universal(args, caps):
    from .envelope import is_uniformly_universal

    obj = io.load_json(args.file)
    # a map file has a domain; an envelope file wraps one under "map"
    is_map = isinstance(obj, dict) and "domain" in obj
    F = io.parse_o2_envelope({"map": obj} if is_map else obj)
    v = is_uniformly_universal(F.f, F, caps)
    inputs = {"envelope": io.dump_o2_envelope(F)}
    result = {"verdict": v.verdict, "counterexample": v.counterexample, "star": _star_rows(F, caps),
              "int_preimage": {F.Y.render(V): F.X.render(int_preimage(F.f, V)) for V in F.Y.opens(caps)}}
    return inputs, result, OK if v.verdict else FALSE


def cmd_poset_compose(args, caps):
    from .envelope import compose_O2, is_uniformly_universal, principal_O2_envelope

    g, f = _load_map(args.g), _load_map(args.f)
    if f.codomain != g.domain:
        raise ParseError("the codomain of f must equal the domain of g", "$.codomain")
    F, G = principal_O2_envelope(f, caps), principal_O2_envelope(g, caps)
    GF = compose_O2(G, F, caps)
    direct = principal_O2_envelope(f.then(g), caps)
    result = {
        "composite": io.dump_o2_envelope(GF)["F"],
        "principal_of_composite": io.dump_o2_envelope(direct)["F"],
        "equals_principal": GF.F == direct.F,
        "composite_universal": is_uniformly_universal(GF.f, GF, caps).verdict,
        "f_open": f.is_open_map(caps),
        "g_continuous": g.is_continuous(),
    }
    return {"g": io.dump_map(g), "f": io.dump_map(f)}, result, OK


def cmd_poset_bundle(args, caps):
    from .bundle import advice_bundle, principal_coenvelope

    f = _load_map(args.map)
    A = advice_bundle(f, caps)
    result = A.report()
    co = principal_coenvelope(f, A.to_bundle())
    result["coenvelope"] = co.table()
    return {"map": io.dump_map(f)}, result, OK


# ---------------------------------------------------------------- piecewise-affine reals


def _load_pa(path: str):
    from .realpw import PAFunction

    return PAFunction.from_json(io.load_json(path))


def _rational(text: str, flag: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational: {text!r}", flag) from None


def cmd_real_envelope(args, caps):
    from .realpw import cluster_envelope

    f = _load_pa(args.f)
    E = cluster_envelope(f)
    return {"f": f.to_json()}, {"envelope": E.to_json(), "rendered": E.render().splitlines()}, OK


def cmd_real_compose(args, caps):
    from .realpw import cluster_envelope, kleisli_compose

    g, f = _load_pa(args.g), _load_pa(args.f)
    GF = kleisli_compose(cluster_envelope(g), cluster_envelope(f), caps)
    result = {"composite": GF.to_json(), "rendered": GF.render().splitlines()}
    return {"g": g.to_json(), "f": f.to_json()}, result, OK


def cmd_real_universal(args, caps):
    from .realpw import universality_defects

    f = _load_pa(args.f)
    defects = universality_defects(f)
    result = {"verdict": not defects, "defects": [d.to_json() for d in defects]}
    return {"f": f.to_json()}, result, OK if not defects else FALSE


def cmd_real_modulus(args, caps):
    from .realpw import fmt, local_modulus

    f = _load_pa(args.f)
    x0, eps = _rational(args.x0, "--x0"), _rational(args.eps, "--eps")
    if eps <= 0:
        raise ParseError("eps must be positive", "--eps")
    delta = local_modulus(f, x0, eps)
    result = {"x0": fmt(x0), "eps": fmt(eps), "delta": None if delta is None else fmt(delta),
              "continuous": delta is not None}
    return {"f": f.to_json()}, result, OK if delta is not None else FALSE


# ---------------------------------------------------------------- corpus


def cmd_verify_corpus(args, caps):
    from .corpus import SUITES, verify_corpus

    if not 1 <= args.max_size <= 4:
        raise ParseError("must be between 1 and 4", "--max-size")
    unknown = [s for s in args.suite or [] if s not in SUITES]
    if unknown:
        raise ParseError(f"unknown suite {unknown[0]!r}; choose from {', '.join(SUITES)}", "--suite")
    results = verify_corpus(args.max_size, args.suite, caps, triple_size=args.triple_size)
    suites = [r.to_dict() for r in results]
    ok = all(r.passed for r in results)
    result = {
        "max_size": args.max_size,
        "triple_size": min(args.triple_size, args.max_size),
        "passed": ok,
        "suites": suites,
        "checked": sum(r.checked for r in results),
    }
    return {"max_size": args.max_size, "suites": args.suite or list(SUITES)}, result, OK if ok else FALSE


COMMANDS: dict[str, Handler] = {
    "poset-envelope": cmd_poset_envelope,
    "poset-universal": cmd_poset_universal,
    "poset-compose": cmd_poset_compose,
    "poset-bundle": cmd_poset_bundle,
    "real-envelope": cmd_real_envelope,
    "real-compose": cmd_real_compose,
    "real-universal": cmd_real_universal,
    "real-modulus": cmd_real_modulus,
    "verify-corpus": cmd_verify_corpus,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--cap-opens", type=int, default=DEFAULT_CAPS.opens, metavar="N")
    common.add_argument("--cap-mu", type=int, default=DEFAULT_CAPS.mu, metavar="N")
    common.add_argument("--cap-exponential", type=int, default=DEFAULT_CAPS.exponential, metavar="N")
    common.add_argument("--cap-branches", type=int, default=DEFAULT_CAPS.branches, metavar="N")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings (breaks byte-identity)")

    p = argparse.ArgumentParser(prog="envlab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("poset-envelope", parents=[common], help="principal envelope of a finite map")
    s.add_argument("map")
    s.add_argument("--approx", metavar="FILE", help="finite approximation lattice instead of O2")
    s = sub.add_parser("poset-universal", parents=[common], help="uniform universality of an O2 envelope")
    s.add_argument("file", help="map file (principal envelope) or envelope file")
    s = sub.add_parser("poset-compose", parents=[common], help="Kleisli composite of principal envelopes")
    s.add_argument("g")
    s.add_argument("f")
    s = sub.add_parser("poset-bundle", parents=[common], help="least advice bundle of a finite map")
    s.add_argument("map")
    s = sub.add_parser("real-envelope", parents=[common], help="cluster envelope of a piecewise-affine map")
    s.add_argument("f")
    s = sub.add_parser("real-compose", parents=[common], help="Kleisli composite G.F of cluster envelopes")
    s.add_argument("g")
    s.add_argument("f")
    s = sub.add_parser("real-universal", parents=[common], help="universality defects of a cluster envelope")
    s.add_argument("f")
    s = sub.add_parser("real-modulus", parents=[common], help="local modulus of continuity")
    s.add_argument("f")
    s.add_argument("--x0", required=True)
    s.add_argument("--eps", required=True)
    s = sub.add_parser("verify-corpus", parents=[common], help="run the exhaustive property suites")
    s.add_argument("--max-size", type=int, default=3, metavar="N")
    s.add_argument("--suite", action="append", metavar="NAME")
    s.add_argument("--triple-size", type=int, default=2, metavar="N",
                   help="labeled size bound in suites over pairs of maps")
    return p


def run(argv: Optional[list[str]] = None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    caps = Caps(args.cap_opens, args.cap_mu, args.cap_exponential, args.cap_branches)
    start = time.perf_counter()
    try:
        inputs, result, code = COMMANDS[args.command](args, caps)
    except CapExceeded as exc:
        inputs, code = {}, CAP_EXCEEDED
        result = {"error": "cap_exceeded", "cap": exc.cap, "limit": exc.limit, "needed": exc.value,
                  "message": str(exc)}
    except ParseError as exc:
        inputs, code = {}, INPUT_ERROR
        result = {"error": "parse_error", "location": exc.location, "message": str(exc)}
    except EnvlabError as exc:
        inputs, code = {}, INPUT_ERROR
        result = {"error": type(exc).__name__, "message": str(exc)}
    if code in (INPUT_ERROR, CAP_EXCEEDED):
        print(f"envlab: {result['message']}", file=sys.stderr)
    timings = {"seconds": round(time.perf_counter() - start, 3)} if args.timings else None
    report = io.make_report(args.command, caps, inputs, result, code, timings)
    text = io.to_text(report) if args.format == "text" else io.to_json(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return report, code


def main(argv: Optional[list[str]] = None) -> int:
    return run(argv)[1]


if __name__ == "__main__":
    sys.exit(main())
