"""Command-line front end: reports, limits, fans, diagrams, figures.

The process boundary of the package.  Subcommands parse ideals from a
small staircase grammar, run the exact machinery, and emit text, JSON,
or SVG; JSON documents all carry a schema_version field and files are
written atomically.  Exit codes: 0 success, 1 verification failure,
2 usage error (bad grammar, bad options, impossible requests), 3 an
internal invariant violation surfaced by the computation itself.

Ideal grammar, by example:

    I(4)            step sequence form
    I(1,2)^3        powers expand through the staircase product
    gens: x, y^4    monomial generators, joined by commas
"""

import argparse
import json
import os
import sys
import tempfile
from dataclasses import dataclass, replace
from typing import NamedTuple

from . import svg
from .errors import (DomainError, HilbfanError, ParseError,
                     UnsupportedMeasuringSequence)
from .fan import Fan2D, boundary_diagram, standard_fan
from .limits import elementary_limit
from .orbit import (G32, G41, G51, directional_limit, param_ideal,
                    ray_limits, select_family)
from .segre3 import coordinate_span, support_picture
from .staircase import (Staircase, from_monomials, measuring_sequence)
from .verify import run_all

SCHEMA_VERSION = 1

FAMILIES = {"g41": G41, "g32": G32, "g51": G51}


# ---------------------------------------------------------------------------
# configuration

@dataclass(frozen=True)
class Config:
    """Settings shared by the subcommands, resolved once from argv."""

    characteristic: int = 0
    family: str = "auto"
    fmt: str = "text"
    method: str = "probe"
    golden_dir: str | None = None
    jobs: int = 1


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def _config_from(args: argparse.Namespace) -> Config:
    char = getattr(args, "char", 0)
    if char != 0 and not _is_prime(char):
        raise ParseError(f"characteristic must be 0 or a prime, not {char}")
    jobs = getattr(args, "jobs", 1)
    if jobs < 1:
        raise ParseError("--jobs needs a positive worker count")
    golden = getattr(args, "golden", None) or os.environ.get("HILBFAN_GOLDEN")
    return Config(characteristic=char,
                  family=getattr(args, "family", "auto"),
                  fmt=getattr(args, "fmt", "text"),
                  method=getattr(args, "method", "probe"),
                  golden_dir=golden,
                  jobs=jobs)


# ---------------------------------------------------------------------------
# ideal grammar

class _Scan:
    """Cursor over an input string; errors carry the exact position."""

    __slots__ = ("text", "pos")

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def try_take(self, lit: str) -> bool:
        if self.text.startswith(lit, self.pos):
            self.pos += len(lit)
            return True
        return False

    def take(self, lit: str) -> None:
        if not self.try_take(lit):
            raise ParseError(f"expected {lit!r}", self.text, self.pos)

    def uint(self) -> int:
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected a number", self.text, start)
        return int(self.text[start:self.pos])

    def int_(self) -> int:
        neg = self.try_take("-")
        v = self.uint()
        return -v if neg else v

    def end(self) -> None:
        self.ws()
        if self.pos != len(self.text):
            raise ParseError("unexpected trailing input", self.text, self.pos)


def _monomial(s: _Scan) -> tuple[int, int]:
    exps = {"x": 0, "y": 0}
    seen = False
    while True:
        s.ws()
        c = s.peek()
        if c not in ("x", "y"):
            break
        s.pos += 1
        k = 1
        s.ws()
        if s.try_take("^"):
            s.ws()
            k = s.uint()
        exps[c] += k
        seen = True
        s.ws()
        if s.try_take("*"):
            s.ws()
            if s.peek() not in ("x", "y"):
                raise ParseError("expected a variable after '*'",
                                 s.text, s.pos)
    if not seen:
        raise ParseError("expected a monomial in x and y", s.text, s.pos)
    return (exps["x"], exps["y"])


def parse_ideal(text: str) -> Staircase:
    """Staircase grammar: 'I(s1,s2,...)' or 'gens: m1, m2, ...', either
    followed by an optional '^k' power."""
    s = _Scan(text)
    s.ws()
    atom_pos = s.pos
    if s.try_take("I"):
        s.ws()
        s.take("(")
        steps: list[int] = []
        s.ws()
        if not s.try_take(")"):
            while True:
                s.ws()
                p0 = s.pos
                v = s.int_()
                if v < 0:
                    raise ParseError("steps are nonnegative", text, p0)
                steps.append(v)
                s.ws()
                if s.try_take(")"):
                    break
                s.take(",")
        sc = Staircase.from_steps(steps)
    elif s.try_take("gens"):
        s.ws()
        s.take(":")
        mons = [_monomial(s)]
        s.ws()
        while s.try_take(","):
            mons.append(_monomial(s))
            s.ws()
        try:
            sc = from_monomials(mons)
        except DomainError as e:
            raise ParseError(str(e), text, atom_pos) from e
    else:
        raise ParseError("expected 'I(...)' or 'gens: ...'", text, s.pos)
    s.ws()
    if s.try_take("^"):
        s.ws()
        sc = sc ** s.uint()
    s.end()
    if sc.colength() == 0:
        raise ParseError("this is the unit ideal; nothing to report",
                         text, atom_pos)
    return sc


def parse_substitution(text: str) -> tuple[str, int]:
    """One elementary substitution 'x->x+t*y^k' (or with x, y swapped);
    returns the moved variable and the shift power."""
    s = _Scan(text)
    s.ws()
    var = s.peek()
    if var not in ("x", "y"):
        raise ParseError("substitution must start with x or y", text, s.pos)
    s.pos += 1
    other = "y" if var == "x" else "x"
    s.ws()
    s.take("->")
    s.ws()
    if not s.try_take(var):
        raise ParseError(f"the image must start with {var} itself",
                         text, s.pos)
    s.ws()
    s.take("+")
    s.ws()
    s.take("t")
    s.ws()
    s.take("*")
    s.ws()
    if not s.try_take(other):
        raise ParseError(f"the shift must move {var} toward {other}",
                         text, s.pos)
    k = 1
    s.ws()
    if s.try_take("^"):
        s.ws()
        p0 = s.pos
        k = s.uint()
        if k == 0:
            raise ParseError("shift power must be positive", text, p0)
    s.end()
    return var, k


def parse_direction(text: str) -> tuple[int, int]:
    s = _Scan(text)
    s.ws()
    m = s.int_()
    s.ws()
    s.take(",")
    s.ws()
    n = s.int_()
    s.end()
    if (m, n) == (0, 0):
        raise ParseError("direction must be nonzero", text, 0)
    return (m, n)


# ---------------------------------------------------------------------------
# report pieces

class _Output(NamedTuple):
    payload: dict
    lines: list[str]
    image: str | None = None
    code: int = 0


def _tup(v) -> str:
    if isinstance(v, tuple):
        return "(" + ", ".join(str(x) for x in v) + ")"
    return str(v)


def staircase_rows(sc: Staircase) -> list[str]:
    """ASCII staircase, top row first: '#' marks ideal monomials, '.'
    the finite cobasis below the steps."""
    h = sc.heights
    width = len(h) + 1
    top = h[0] if h else 1
    return [" ".join("#" if sc.contains_monomial(x, y) else "."
                     for x in range(width))
            for y in range(top - 1, -1, -1)]


def _ideal_fields(sc: Staircase) -> dict:
    return {"ideal": str(sc),
            "steps": list(sc.steps()),
            "heights": list(sc.heights),
            "colength": sc.colength(),
            "measuring": list(measuring_sequence(sc)),
            "staircase": staircase_rows(sc)}


def _ideal_lines(sc: Staircase, indent: str = "") -> list[str]:
    fields = (("steps", sc.steps()), ("heights", sc.heights),
              ("colength", sc.colength()),
              ("measuring", measuring_sequence(sc)))
    lines = [f"{indent}{sc}"]
    lines += [f"{indent}  {name:<10} {_tup(v)}" for name, v in fields]
    lines.append("")
    lines += [f"{indent}  {row}" for row in staircase_rows(sc)]
    return lines


def _label_json(label):
    if isinstance(label, tuple):
        return [_label_json(v) for v in label]
    return str(label)


def _explicit_family(cfg: Config, sc: Staircase):
    fam = FAMILIES[cfg.family]
    m = measuring_sequence(sc)
    if not fam.admits(m):
        raise DomainError(
            f"family {fam.name} cannot move {sc}: measuring sequence "
            f"{m} exceeds its capacity {fam.max_measuring}")
    return fam


def _check_fan_family(cfg: Config, fan: Fan2D) -> None:
    # the plane fan only exists over the automatically chosen family
    if cfg.family != "auto" and FAMILIES[cfg.family] is not fan.family:
        raise DomainError(
            f"fans use the smallest admitting family ({fan.family.name} "
            f"here); --family {cfg.family} does not apply")


# ---------------------------------------------------------------------------
# subcommand bodies

def _cmd_ideal(cfg: Config, args: argparse.Namespace) -> _Output:
    sc = parse_ideal(args.spec)
    payload = {"schema_version": SCHEMA_VERSION, "command": "ideal",
               **_ideal_fields(sc)}
    return _Output(payload, _ideal_lines(sc))


def _cmd_limit(cfg: Config, args: argparse.Namespace) -> _Output:
    sc = parse_ideal(args.spec)
    char = cfg.characteristic
    payload = {"schema_version": SCHEMA_VERSION, "command": "limit",
               "source": str(sc), "char": char}
    if args.sub is not None:
        var, power = parse_substitution(args.sub)
        other = "y" if var == "x" else "x"
        lim = elementary_limit(sc, var, power, char)
        payload |= {"mode": "substitution",
                    "substitution": f"{var} -> {var} + t*{other}^{power}",
                    "limit": _ideal_fields(lim)}
        lines = [f"limit of {sc} under {var} -> {var} + t*{other}^{power}"
                 f" (char {char})", ""]
        lines += _ideal_lines(lim, "  ")
        return _Output(payload, lines)

    u = parse_direction(args.dir)
    fam = None if cfg.family == "auto" else _explicit_family(cfg, sc)
    P = param_ideal(sc, fam, char)
    payload |= {"mode": "direction", "direction": list(u),
                "family": P.family.name}
    lim = directional_limit(P, u)
    if lim is not None:
        payload["limit"] = _ideal_fields(lim)
        lines = [f"limit of {sc} toward {_tup(u)} "
                 f"(family {P.family.name}, char {char})", ""]
        lines += _ideal_lines(lim, "  ")
        return _Output(payload, lines)
    wall = ray_limits(P, u)
    payload |= {"wall": True,
                "minus": _ideal_fields(wall.minus),
                "plus": _ideal_fields(wall.plus)}
    lines = [f"direction {_tup(u)} is a wall of the fan of {sc} "
             f"(family {P.family.name}, char {char})",
             "", "counterclockwise side:"]
    lines += _ideal_lines(wall.minus, "  ")
    lines += ["", "clockwise side:"]
    lines += _ideal_lines(wall.plus, "  ")
    return _Output(payload, lines)


def _fan_output(cfg: Config, specs: list[str]) -> _Output:
    scs = [parse_ideal(s) for s in specs]
    source = scs[0] if len(scs) == 1 else scs
    fan = standard_fan(source, char=cfg.characteristic, method=cfg.method)
    _check_fan_family(cfg, fan)
    payload = {"schema_version": SCHEMA_VERSION, "command": "fan",
               "source": [str(sc) for sc in scs],
               "family": fan.family.name, "char": fan.char,
               "rays": [list(r) for r in fan.rays],
               "cones": [{"rays": [list(r) for r in c.rays],
                          "label": _label_json(c.label),
                          "vertex": list(c.vertex)} for c in fan.cones]}
    head = " * ".join(str(sc) for sc in scs)
    lines = [f"fan of {head}  (family {fan.family.name}, char {fan.char})"]
    if fan.rays:
        lines.append("  rays  " + "  ".join(_tup(r) for r in fan.rays))
        for c in fan.cones:
            sector = f"{_tup(c.rays[0])} .. {_tup(c.rays[1])}"
            lines.append(f"  cone {sector:<20} {svg._label_text(c.label)}")
    else:
        lines.append(f"  whole plane: fixed limit "
                     f"{svg._label_text(fan.cones[0].label)}")
    image = svg.fan_svg(fan) if cfg.fmt == "svg" else None
    return _Output(payload, lines, image)


def _diagram_output(cfg: Config, spec: str) -> _Output:
    sc = parse_ideal(spec)
    fan = standard_fan(sc, char=cfg.characteristic, method=cfg.method)
    _check_fan_family(cfg, fan)
    diag = boundary_diagram(fan)
    entries = []
    for e in diag.entries:
        if isinstance(e, Staircase):
            entries.append({"ideal": list(e.steps())})
        else:
            entries.append({"ray": list(e)})
    payload = {"schema_version": SCHEMA_VERSION, "command": "diagram",
               "source": str(sc), "family": fan.family.name,
               "char": fan.char, "top_ideal": str(diag.top_ideal),
               "top_shown": diag.top_shown, "entries": entries}
    where = "leads the chain" if diag.top_shown else "not on the chain"
    lines = [f"boundary diagram of {sc}  "
             f"(family {fan.family.name}, char {fan.char})",
             f"  top ideal {svg._label_text(diag.top_ideal)} ({where})"]
    for e in diag.entries:
        if isinstance(e, Staircase):
            lines.append(f"    {e}")
        else:
            lines.append(f"  ray {_tup(e)}")
    image = svg.diagram_svg(diag) if cfg.fmt == "svg" else None
    return _Output(payload, lines, image)


def _support3_output(cfg: Config, specs: list[str]) -> _Output:
    scs = [parse_ideal(s) for s in specs]
    # auto means the full three-parameter family here: this report is
    # the three-exponent picture, not the planar fan
    fam = G51 if cfg.family == "auto" else FAMILIES[cfg.family]
    span = coordinate_span(scs, fam)
    picture = support_picture(span)
    payload = {"schema_version": SCHEMA_VERSION, "command": "support3",
               "factors": [str(sc) for sc in scs], "family": fam.name,
               "span_dimension": len(span), **picture.to_dict()}
    head = " * ".join(str(sc) for sc in scs)
    mono = sum(1 for v in picture.monomial_flags.values() if v)
    lines = [f"coordinate span support of {head}  (family {fam.name})",
             f"  span dimension {len(span)}: {mono} monomials, "
             f"{len(picture.sporadic)} sporadic generators", ""]
    lines += [f"  {row}" for row in _support_rows(picture)]
    if picture.sporadic:
        lines.append("")
        lines += [f"  off the monomial span: {p}" for p in picture.sporadic]
    image = svg.support3_svg(picture) if cfg.fmt == "svg" else None
    return _Output(payload, lines, image)


def _support_rows(picture) -> list[str]:
    """Text dot plot: one cell per (a, b) column showing the deepest
    c-exponent, parenthesized when that point is off the monomial span."""
    deepest: dict[tuple[int, int], int] = {}
    for p in picture.points:
        key = (p[0], p[1])
        deepest[key] = max(deepest.get(key, 0), p[2])
    if not deepest:
        return []
    max_a = max(k[0] for k in deepest)
    max_b = max(k[1] for k in deepest)
    rows = []
    for b in range(max_b, -1, -1):
        cells = []
        for a in range(max_a + 1):
            c = deepest.get((a, b))
            if c is None:
                cells.append(" . ")
            elif picture.monomial_flags[(a, b, c)]:
                cells.append(f" {c} ")
            else:
                cells.append(f"({c})")
        rows.append(f"b={b:<2} " + "".join(cells))
    rows.append("     " + "".join(f" {a%10} " for a in range(max_a + 1)))
    rows.append("     (a exponents; cell = deepest c, () = off the span)")
    return rows


def _cmd_fan(cfg: Config, args: argparse.Namespace) -> _Output:
    return _fan_output(cfg, args.specs)


def _cmd_diagram(cfg: Config, args: argparse.Namespace) -> _Output:
    return _diagram_output(cfg, args.spec)


def _cmd_support3(cfg: Config, args: argparse.Namespace) -> _Output:
    return _support3_output(cfg, args.specs)


def _parse_claims(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part.isdigit() or not 1 <= int(part) <= 8:
            raise ParseError(f"claims are numbered 1..8, not {part!r}")
        out.append(int(part))
    return sorted(set(out))


def _param_str(parameters: dict) -> str:
    def one(v):
        return v if isinstance(v, (int, str)) else json.dumps(v)
    return " ".join(f"{k}={one(v)}" for k, v in parameters.items())


def _cmd_verify(cfg: Config, args: argparse.Namespace) -> _Output:
    if args.n < 1:
        raise ParseError("--n needs a positive power bound")
    claims = _parse_claims(args.claims) if args.claims else None
    report = run_all(char=cfg.characteristic, method=cfg.method,
                     jobs=cfg.jobs, golden_dir=cfg.golden_dir,
                     claims=claims, max_power=args.n,
                     include_figure3=args.figure3)
    lines = []
    for r in report["reports"]:
        tag = f" [char {r['characteristic']}]" if r["characteristic"] else ""
        lines.append(f"{r['status']:<6} {r['id']:<20} "
                     f"{_param_str(r['parameters'])}{tag}")
        if r["status"] == "fail" and r["witness"] is not None:
            lines += ["         " + w
                      for w in json.dumps(r["witness"], indent=1).splitlines()]
    s = report["summary"]
    lines.append(f"summary: {s['pass']} pass, {s['fail']} fail, "
                 f"{s['range']} out of range")
    return _Output(report, lines, None, 0 if s["fail"] == 0 else 1)


def _cmd_render(cfg: Config, args: argparse.Namespace) -> _Output:
    cfg = replace(cfg, fmt="svg")
    if args.kind == "fan":
        out = _fan_output(cfg, args.specs)
    elif args.kind == "diagram":
        if len(args.specs) != 1:
            raise ParseError("diagram renders exactly one ideal")
        out = _diagram_output(cfg, args.specs[0])
    else:
        out = _support3_output(cfg, args.specs)
    _write_atomic(args.out, out.image)
    return _Output(out.payload, [f"wrote {args.out}"])


# ---------------------------------------------------------------------------
# emission

def _write_atomic(path: str, data: str) -> None:
    """Write through a same-directory temp file so readers never see a
    partial document."""
    target = os.path.abspath(path)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(target),
                               prefix=".hilbfan-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg: Config, args: argparse.Namespace, out: _Output) -> None:
    if getattr(args, "command", "") == "render":
        data = "\n".join(out.lines) + "\n"
    elif cfg.fmt == "svg":
        if out.image is None:
            raise ParseError(
                f"{args.command} has no SVG form; use --format text or json")
        data = out.image
    elif cfg.fmt == "json":
        data = json.dumps(out.payload, indent=1) + "\n"
    else:
        data = "\n".join(out.lines) + "\n"
    dest = getattr(args, "out", None)
    if dest and getattr(args, "command", "") != "render":
        _write_atomic(dest, data)
    else:
        sys.stdout.write(data)


# ---------------------------------------------------------------------------
# argument parsing

_COMMANDS = {"ideal": _cmd_ideal, "limit": _cmd_limit, "fan": _cmd_fan,
             "diagram": _cmd_diagram, "support3": _cmd_support3,
             "verify": _cmd_verify, "render": _cmd_render}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=int, default=0, metavar="P",
                        help="coefficient characteristic: 0 or a prime")
    common.add_argument("--family", choices=["auto", "g41", "g32", "g51"],
                        default="auto",
                        help="substitution family (auto: smallest admitting)")
    output = argparse.ArgumentParser(add_help=False)
    output.add_argument("--format", dest="fmt",
                        choices=["text", "json", "svg"], default="text",
                        help="output form (default text)")
    output.add_argument("-o", "--out", metavar="PATH",
                        help="write to PATH atomically instead of stdout")
    method = argparse.ArgumentParser(add_help=False)
    method.add_argument("--method", choices=["probe", "enumerate"],
                        default="probe",
                        help="exponent support search (default probe)")

    p = argparse.ArgumentParser(
        prog="hilbfan",
        description="Exact toric degenerations of finite-colength monomial "
                    "ideals in two variables: staircases, flat limits, "
                    "normal fans, boundary diagrams, support pictures.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("ideal", parents=[output],
                        help="report one ideal's staircase data")
    sp.add_argument("spec", help="ideal, e.g. 'I(1,2)' or 'gens: x, y^4'")

    sp = sub.add_parser("limit", parents=[common, output],
                        help="flat limit under a substitution or direction")
    sp.add_argument("spec")
    how = sp.add_mutually_exclusive_group(required=True)
    how.add_argument("--sub", metavar="MAP",
                     help="elementary substitution, e.g. 'x->x+t*y^2'")
    how.add_argument("--dir", metavar="M,N",
                     help="torus direction, e.g. '1,0' or '-1,-1'")

    sp = sub.add_parser("fan", parents=[common, output, method],
                        help="labeled normal fan of one or more ideals")
    sp.add_argument("specs", nargs="+")

    sp = sub.add_parser("diagram", parents=[common, output, method],
                        help="boundary diagram read off the fan")
    sp.add_argument("spec")

    sp = sub.add_parser("support3", parents=[common, output],
                        help="three-parameter coordinate span dot plot")
    sp.add_argument("specs", nargs="+")

    sp = sub.add_parser("verify", parents=[common, output, method],
                        help="run the mechanized checks and report")
    pick = sp.add_mutually_exclusive_group()
    pick.add_argument("--all", action="store_true",
                      help="every check (the default)")
    pick.add_argument("--claims", metavar="K,K,...",
                      help="restrict to these numbered formula checks")
    sp.add_argument("--n", type=int, default=6, metavar="N",
                    help="largest power to test (default 6)")
    sp.add_argument("--figure3", action="store_true",
                    help="include the three-parameter support picture")
    sp.add_argument("--jobs", type=int, default=1, metavar="J",
                    help="parallel worker processes")
    sp.add_argument("--golden", metavar="DIR",
                    help="golden file directory (or env HILBFAN_GOLDEN)")

    sp = sub.add_parser("render", parents=[common, method],
                        help="write an SVG figure to a file")
    sp.add_argument("kind", choices=["fan", "diagram", "support3"])
    sp.add_argument("specs", nargs="+")
    sp.add_argument("-o", "--out", metavar="PATH", required=True)

    return p


def _join_dir_values(argv: list[str]) -> list[str]:
    # '--dir -1,-1' would otherwise be read as two option flags
    out = []
    it = iter(argv)
    for a in it:
        if a == "--dir":
            v = next(it, None)
            out.append(a if v is None else f"--dir={v}")
        else:
            out.append(a)
    return out


def main(argv: list[str] | None = None) -> int:
    raw = sys.argv[1:] if argv is None else list(argv)
    args = build_parser().parse_args(_join_dir_values(raw))
    try:
        cfg = _config_from(args)
        if cfg.fmt == "svg" and args.command in ("ideal", "limit", "verify"):
            raise ParseError(f"{args.command} has no SVG form; "
                             "use --format text or json")
        out = _COMMANDS[args.command](cfg, args)
        _emit(cfg, args, out)
        return out.code
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (DomainError, UnsupportedMeasuringSequence, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (HilbfanError, AssertionError) as e:
        print(f"internal invariant violation: {e}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
