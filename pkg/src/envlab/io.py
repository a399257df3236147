"""JSON schemas for spaces, maps and envelopes, plus report assembly.

Every report is plain JSON with ``"schema": "envlab/1"``; the text format is
rendered from that JSON and never computed separately.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Optional

from .errors import CycleError, DuplicateNameError, EnvlabError, ParseError
from .finspace import Caps, FinSpace, PointMap, UpFamily, bits, space_from_order

SCHEMA = "envlab/1"


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {path}: {exc.msg} (line {exc.lineno})") from None


def _expect(obj: Any, kind: type, where: str, what: str) -> Any:
    if not isinstance(obj, kind) or isinstance(obj, bool):
        raise ParseError(f"expected {what}", where)
    return obj


# ---------------------------------------------------------------- spaces and maps


def parse_space(obj: Any, where: str = "$") -> FinSpace:
    _expect(obj, dict, where, "an object with 'elements' and 'le'")
    if "elements" not in obj:
        raise ParseError("missing field 'elements'", where)
    names = _expect(obj["elements"], list, f"{where}.elements", "a list of names")
    for k, s in enumerate(names):
        _expect(s, str, f"{where}.elements[{k}]", "a string")
    if not names:
        raise ParseError("a space needs at least one element", f"{where}.elements")
    pos = {s: k for k, s in enumerate(names)}
    pairs = []
    for k, pair in enumerate(_expect(obj.get("le", []), list, f"{where}.le", "a list of pairs")):
        loc = f"{where}.le[{k}]"
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError("expected a pair [lower, upper]", loc)
        for s in pair:
            if s not in pos:
                raise ParseError(f"unknown element {s!r}", loc)
        pairs.append((pos[pair[0]], pos[pair[1]]))
    try:
        return space_from_order(names, pairs)
    except (CycleError, DuplicateNameError) as exc:
        raise ParseError(str(exc), where) from None


def dump_space(X: FinSpace) -> dict:
    """Elements plus the covering-free order (all strict pairs), in element order."""
    return {
        "elements": list(X.names),
        "le": [[X.names[i], X.names[j]] for i in range(X.n) for j in bits(X.up[i]) if i != j],
    }


def parse_map(obj: Any, where: str = "$") -> PointMap:
    _expect(obj, dict, where, "an object with 'domain', 'codomain' and 'map'")
    for key in ("domain", "codomain", "map"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", where)
    X = parse_space(obj["domain"], f"{where}.domain")
    Y = parse_space(obj["codomain"], f"{where}.codomain")
    table = _expect(obj["map"], dict, f"{where}.map", "an object from domain to codomain names")
    for s in X.names:
        if s not in table:
            raise ParseError(f"no value for {s!r}", f"{where}.map")
    for s, t in table.items():
        if s not in X.names:
            raise ParseError(f"{s!r} is not in the domain", f"{where}.map")
        if t not in Y.names:
            raise ParseError(f"{t!r} is not in the codomain", f"{where}.map.{s}")
    return PointMap.from_names(X, Y, table)


def dump_map(f: PointMap) -> dict:
    return {"domain": dump_space(f.domain), "codomain": dump_space(f.codomain), "map": f.as_dict()}


# ---------------------------------------------------------------- O2 values and envelopes


def parse_family(obj: Any, Y: FinSpace, where: str) -> UpFamily:
    """A list of generator sets, each a list of names; every generator must be open."""
    _expect(obj, list, where, "a list of open sets (lists of names)")
    gens = []
    for k, gen in enumerate(obj):
        loc = f"{where}[{k}]"
        _expect(gen, list, loc, "a list of names")
        for s in gen:
            if s not in Y.names:
                raise ParseError(f"unknown element {s!r}", loc)
        mask = Y.mask_of_names(gen)
        if not Y.is_open(mask):
            raise ParseError(f"{Y.render(mask)} is not open", loc)
        gens.append(mask)
    return UpFamily.generated(gens)


def dump_family(fam: UpFamily, Y: FinSpace) -> list[list[str]]:
    return [[Y.names[i] for i in bits(A)] for A in fam.sorted_antichain(Y)]


def parse_o2_envelope(obj: Any, where: str = "$"):
    """``{"map": <map>, "F": {"x": [[...], ...]}}``; a missing ``F`` means the principal envelope."""
    from .envelope import o2_envelope, principal_O2_envelope

    _expect(obj, dict, where, "an object with 'map' and 'F'")
    if "map" not in obj:
        raise ParseError("missing field 'map'", where)
    f = parse_map(obj["map"], f"{where}.map")
    if "F" not in obj:
        return principal_O2_envelope(f)
    table = _expect(obj["F"], dict, f"{where}.F", "an object from domain names to families")
    values = []
    for s in f.domain.names:
        if s not in table:
            raise ParseError(f"no value for {s!r}", f"{where}.F")
        values.append(parse_family(table[s], f.codomain, f"{where}.F.{s}"))
    try:
        return o2_envelope(f, values)
    except EnvlabError as exc:  # NotContinuous or NotAnEnvelope from validation
        raise ParseError(str(exc), f"{where}.F") from None


def dump_o2_envelope(F) -> dict:
    return {
        "map": dump_map(F.f),
        "F": {F.X.names[x]: dump_family(v, F.Y) for x, v in enumerate(F.F)},
    }


def parse_approx(obj: Any, Y: FinSpace, where: str = "$"):
    """``{"lattice": <space>, "xi": {"y": "l"}}`` over a finite lattice."""
    from .envelope import ApproxSpace
    from .errors import NotALattice, NotContinuous
    from .lattice import FiniteLattice

    _expect(obj, dict, where, "an object with 'lattice' and 'xi'")
    for key in ("lattice", "xi"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}", where)
    Ls = parse_space(obj["lattice"], f"{where}.lattice")
    try:
        L = FiniteLattice(Ls)
    except NotALattice as exc:
        raise ParseError(str(exc), f"{where}.lattice") from None
    table = _expect(obj["xi"], dict, f"{where}.xi", "an object from space names to lattice names")
    xi = []
    for s in Y.names:
        if s not in table:
            raise ParseError(f"no value for {s!r}", f"{where}.xi")
        if table[s] not in Ls.names:
            raise ParseError(f"{table[s]!r} is not in the lattice", f"{where}.xi.{s}")
        xi.append(Ls.index(table[s]))
    try:
        return ApproxSpace(Y, L, tuple(xi))
    except NotContinuous as exc:
        raise ParseError(str(exc), f"{where}.xi") from None


def dump_approx(approx) -> dict:
    Ls = approx.lattice.space
    return {"lattice": dump_space(Ls), "xi": {approx.Y.names[y]: Ls.names[v] for y, v in enumerate(approx.xi)}}


# ---------------------------------------------------------------- reports


def caps_dict(caps: Caps) -> dict:
    return {"opens": caps.opens, "mu": caps.mu, "exponential": caps.exponential, "branches": caps.branches}


def make_report(command: str, caps: Caps, inputs: dict, result: dict, exit_code: int,
                timings: Optional[dict] = None) -> dict:
    from . import __version__

    report = {
        "schema": SCHEMA,
        "tool": {"name": "envlab", "version": __version__},
        "command": command,
        "caps": caps_dict(caps),
        "inputs": inputs,
        "result": result,
        "exit_code": exit_code,
    }
    if timings is not None:
        report["timings"] = timings
    return report


def to_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def to_text(report: dict) -> str:
    """Indented key/value rendering of a report; inputs are summarised, not repeated."""
    lines = [f"envlab {report['tool']['version']} {report['command']}  (exit {report['exit_code']})"]
    _render(report["result"], 0, lines)
    return "\n".join(lines) + "\n"


def _scalar(v: Any) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "yes" if v else "no"
    return str(v)


def _render(obj: Any, depth: int, lines: list[str]) -> None:
    pad = "  " * depth
    if isinstance(obj, dict):
        for k in sorted(obj):
            v = obj[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                _render(v, depth + 1, lines)
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                _render(v, depth + 1, lines)
            else:
                lines.append(f"{pad}- {_inline(v)}")
    else:
        lines.append(pad + _scalar(obj))


def _flat(v: Any) -> bool:
    if len(_inline(v)) > 72:
        return False
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list)) for x in v.values())
    return all(not isinstance(x, dict) and (not isinstance(x, list) or _flat(x)) for x in v)


def _inline(v: Any) -> str:
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_inline(v[k])}" for k in sorted(v)) + "}"
    if isinstance(v, list):
        return "[" + ", ".join(_inline(x) for x in v) + "]"
    return _scalar(v)
