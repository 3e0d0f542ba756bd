"""Instance-file parsing, command dispatch, report rendering, and exit codes.

Exit-code contract: 0 = confirmed/computed, 1 = counterexample found,
2 = inconclusive, 3 = input error.  Identical invocations (file, flags,
seed) produce byte-identical machine reports.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .bhattacharya import mixed_multiplicities, product_ideal
from .idealops import IdealPresentation, NilpotentProductError
from .invariants import StabilizationError, krull_dimension, samuel_multiplicity
from .polyring import FieldSpec, ParseError, QQ, RingPresentation, prime_field
from .sequences import (
    ExponentWindow, check_superficial, is_fc, is_weak_fc, sample_element,
)
from .theorems import (
    CONFIRMED, COUNTEREXAMPLE, INCONCLUSIVE, PreconditionError,
    check_remark2, check_remark7, check_thm3, check_thm5, _plain,
)

__all__ = ["InstanceSpec", "InstanceError", "parse_instance", "run", "main"]

COMMANDS = ("mixed", "samuel", "check-fc", "check-superficial",
            "check-thm3", "check-thm5", "check-remark7", "check-remark2")

EXIT_OK = 0
EXIT_COUNTEREXAMPLE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT_ERROR = 3

_VERDICT_EXIT = {CONFIRMED: EXIT_OK, COUNTEREXAMPLE: EXIT_COUNTEREXAMPLE,
                 INCONCLUSIVE: EXIT_INCONCLUSIVE}


class InstanceError(ValueError):
    """Invalid instance file, with the offending line when known."""


@dataclass
class InstanceSpec:
    """A parsed and validated instance: ring, named ideals, optional element."""

    ring: RingPresentation
    ring_name: str
    ideals: dict
    element: object = None
    task_name: str | None = None
    task_params: dict = field(default_factory=dict)

    def i_ideals(self):
        """The ideals named I1, I2, ... in numeric order."""
        pairs = []
        for name in self.ideals:
            m = re.fullmatch(r"I(\d+)", name)
            if m:
                pairs.append((int(m.group(1)), name))
        return [self.ideals[name] for _, name in sorted(pairs)]


# ---------------------------------------------------------------------------
# Instance files.

def _strip_comments(text: str):
    lines = []
    for line in text.splitlines():
        cut = line.find("#")
        lines.append(line if cut < 0 else line[:cut])
    return lines


def _statements(text: str):
    """Yield (starting line number, statement text) for ';'-terminated statements."""
    lines = _strip_comments(text)
    buffer = []
    start = None
    for number, line in enumerate(lines, start=1):
        for ch in line:
            if ch == ";":
                yield (start if start is not None else number), "".join(buffer).strip()
                buffer = []
                start = None
            else:
                if start is None and not ch.isspace():
                    start = number
                buffer.append(ch)
        buffer.append(" ")
    tail = "".join(buffer).strip()
    if tail:
        raise InstanceError(f"line {start}: statement is missing its terminating ';'")


def _split_top_level(text: str):
    """Split on commas that are not nested inside parentheses."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current).strip())
            current = []
        else:
            current.append(ch)
    last = "".join(current).strip()
    if last or parts:
        parts.append(last)
    return [p for p in parts if p]


_RING_RE = re.compile(
    r"ring\s+(?P<name>\w+)\s*=\s*(?P<field>QQ|Fp\s*\(\s*\d+\s*\))\s*"
    r"\[(?P<vars>[^\]]*)\]\s*(?:/\s*\((?P<rels>.*)\))?\s*$", re.S)
_IDEAL_RE = re.compile(r"ideal\s+(?P<name>\w+)\s*=\s*(?P<gens>.*)$", re.S)
_ELEMENT_RE = re.compile(r"element\s*=\s*(?P<poly>.+)$", re.S)
_TASK_RE = re.compile(r"task\s+(?P<name>[\w-]+)\s*(?P<params>.*)$", re.S)
_PARAM_RE = re.compile(r"(\w+)\s*=\s*(\([^)]*\)|\S+)")


def _parse_field(text: str) -> FieldSpec:
    text = text.strip()
    if text == "QQ":
        return QQ
    m = re.fullmatch(r"Fp\s*\(\s*(\d+)\s*\)", text)
    return prime_field(int(m.group(1)))


def _parse_int_tuple(text: str, line: int, key: str):
    body = text.strip()
    if body.startswith("(") and body.endswith(")"):
        body = body[1:-1]
    try:
        return tuple(int(p.strip()) for p in body.split(",") if p.strip())
    except ValueError:
        raise InstanceError(f"line {line}: parameter {key} needs integers, got {text!r}") from None


def _parse_task_params(text: str, line: int):
    params = {}
    rest = _PARAM_RE.sub("", text).strip()
    if rest:
        raise InstanceError(f"line {line}: cannot parse task parameters near {rest!r}")
    for key, raw in _PARAM_RE.findall(text):
        if key in ("k", "eps", "window"):
            params[key] = _parse_int_tuple(raw, line, key)
        elif key in ("i", "tries", "seed", "jobs"):
            try:
                params[key] = int(raw)
            except ValueError:
                raise InstanceError(f"line {line}: parameter {key} needs an integer") from None
        elif key == "tuple":
            body = raw.strip("()")
            params[key] = tuple(p.strip() for p in body.split(",") if p.strip())
        else:
            raise InstanceError(f"line {line}: unknown task parameter {key!r}")
    return params


def parse_instance(path, field_override: FieldSpec | None = None) -> InstanceSpec:
    """Parse and eagerly validate an instance file.

    Homogeneity of every generator is always checked; when the file names J
    (and I1..Is), m-primariness of J and non-nilpotence of I = I1...Is are
    verified up front with precise diagnostics.
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InstanceError(f"cannot read {path}: {exc}") from None

    ring = None
    ring_name = None
    ideals: dict = {}
    element = None
    task_name = None
    task_params: dict = {}

    for line, statement in _statements(text):
        head = statement.split(None, 1)[0] if statement else ""
        try:
            if head == "ring":
                m = _RING_RE.fullmatch(statement)
                if not m:
                    raise InstanceError(f"line {line}: malformed ring statement")
                if ring is not None:
                    raise InstanceError(f"line {line}: duplicate ring statement")
                fieldspec = field_override or _parse_field(m.group("field"))
                variables = [v.strip() for v in m.group("vars").split(",") if v.strip()]
                base = RingPresentation(fieldspec, variables)
                relations = []
                for rel_text in _split_top_level(m.group("rels") or ""):
                    rel = base.parse(rel_text)
                    if rel.degree() < 1:
                        raise InstanceError(
                            f"line {line}: relation {rel_text!r} must have positive degree")
                    relations.append(rel)
                ring = RingPresentation(fieldspec, variables, relations)
                ring_name = m.group("name")
            elif head == "ideal":
                m = _IDEAL_RE.fullmatch(statement)
                if not m:
                    raise InstanceError(f"line {line}: malformed ideal statement")
                if ring is None:
                    raise InstanceError(f"line {line}: ideal declared before the ring")
                name = m.group("name")
                if name in ideals:
                    raise InstanceError(f"line {line}: duplicate ideal {name!r}")
                gens = [ring.parse(g) for g in _split_top_level(m.group("gens"))]
                ideals[name] = IdealPresentation(ring, gens)
            elif head == "element":
                m = _ELEMENT_RE.fullmatch(statement)
                if not m:
                    raise InstanceError(f"line {line}: malformed element statement")
                if ring is None:
                    raise InstanceError(f"line {line}: element declared before the ring")
                element = ring.parse(m.group("poly"))
            elif head == "task":
                m = _TASK_RE.fullmatch(statement)
                if not m:
                    raise InstanceError(f"line {line}: malformed task statement")
                task_name = m.group("name")
                task_params = _parse_task_params(m.group("params"), line)
            else:
                raise InstanceError(f"line {line}: unknown statement {head!r}")
        except ParseError as exc:
            raise InstanceError(f"line {line}: {exc}") from None
        except ValueError as exc:
            if isinstance(exc, InstanceError):
                raise
            raise InstanceError(f"line {line}: {exc}") from None

    if ring is None:
        raise InstanceError("the instance file declares no ring")

    spec = InstanceSpec(ring=ring, ring_name=ring_name or "A", ideals=ideals,
                        element=element, task_name=task_name, task_params=task_params)
    _validate_semantics(spec)
    return spec


def _validate_semantics(spec: InstanceSpec):
    if "J" in spec.ideals:
        dim = krull_dimension(spec.ring, spec.ideals["J"])
        if dim != 0:
            raise InstanceError(
                f"ideal J is not primary for the maximal ideal (dim A/J = {dim!r})")
    i_ideals = spec.i_ideals()
    if i_ideals:
        if any(ideal.is_zero() for ideal in i_ideals):
            raise InstanceError("the product I = I1...Is is nilpotent (an Ii is zero)")
        product = product_ideal(i_ideals)
        if product.is_zero():
            raise InstanceError("the product I = I1...Is is nilpotent (the product is zero)")
        torsion, _ = IdealPresentation.zero(spec.ring).saturate(product)
        if torsion.is_unit():
            raise InstanceError("the product I = I1...Is is nilpotent")


# ---------------------------------------------------------------------------
# Command dispatch.

DEFAULTS = {"window": (4, 3), "tries": 50, "seed": 0, "jobs": 1}


def _resolve_params(spec: InstanceSpec, flags: dict) -> dict:
    params = dict(DEFAULTS)
    params.update(spec.task_params)
    for key, value in flags.items():
        if value is not None:
            params[key] = value
    window = params["window"]
    params["window"] = ExponentWindow(base=window[0], width=window[1])
    return params


def _require(condition, message):
    if not condition:
        raise InstanceError(message)


def _tuple_ideals(spec: InstanceSpec, params: dict):
    """The ideal tuple for element-level checks: named, or (J, I1..Is)."""
    names = params.get("tuple")
    if names:
        missing = [n for n in names if n not in spec.ideals]
        _require(not missing, f"tuple references unknown ideals: {', '.join(missing)}")
        return list(names), [spec.ideals[n] for n in names]
    names = [n for n in ("J",) if n in spec.ideals]
    numbered = sorted((int(m.group(1)), n) for n in spec.ideals
                      if (m := re.fullmatch(r"I(\d+)", n)))
    names += [n for _, n in numbered]
    _require(bool(names), "no ideals named J or I1..Is in the instance file")
    return names, [spec.ideals[n] for n in names]


def _element_for_check(spec, params, ideals, index):
    if spec.element is not None:
        return spec.element
    return sample_element(ideals[index], params["seed"])


def _mixed_inputs(spec: InstanceSpec):
    _require("J" in spec.ideals, "this command needs an ideal named J")
    i_ideals = spec.i_ideals()
    _require(bool(i_ideals), "this command needs ideals named I1, I2, ...")
    return spec.ideals["J"], i_ideals


def run(command: str, spec: InstanceSpec, flags: dict | None = None):
    """Execute a command against a parsed instance: returns (exit code, report)."""
    if command not in COMMANDS:
        raise InstanceError(f"unknown command {command!r}")
    params = _resolve_params(spec, flags or {})
    window: ExponentWindow = params["window"]
    report = {
        "command": command,
        "instance": {
            "ring": str(spec.ring),
            "ideals": {name: [str(g) for g in ideal.gens]
                       for name, ideal in spec.ideals.items()},
            "element": str(spec.element) if spec.element is not None else None,
        },
        "parameters": {
            "window": {"base": window.base, "width": window.width},
            "tries": params["tries"], "seed": params["seed"], "jobs": params["jobs"],
            "k": list(params["k"]) if "k" in params else None,
            "eps": list(params["eps"]) if "eps" in params else None,
            "i": params.get("i"),
        },
    }

    if command == "mixed":
        J, i_ideals = _mixed_inputs(spec)
        try:
            table = mixed_multiplicities(spec.ring, J, i_ideals,
                                         base=window.base, jobs=params["jobs"])
        except StabilizationError as exc:
            report.update({"verdict": INCONCLUSIVE, "reason": str(exc)})
            return EXIT_INCONCLUSIVE, report
        report.update({
            "q": table.q,
            "grid": {"base": list(table.base), "width": table.width},
            "entries": _plain(table.entries),
            "verdict": "computed",
        })
        return EXIT_OK, report

    if command == "samuel":
        _require("J" in spec.ideals, "this command needs an ideal named J")
        try:
            value = samuel_multiplicity(spec.ideals["J"], spec.ring)
        except StabilizationError as exc:
            report.update({"verdict": INCONCLUSIVE, "reason": str(exc)})
            return EXIT_INCONCLUSIVE, report
        report.update({"samuel": value, "verdict": "computed"})
        return EXIT_OK, report

    if command in ("check-fc", "check-superficial"):
        names, ideals = _tuple_ideals(spec, params)
        default_i = 2 if names[0] == "J" and len(names) > 1 else 1
        i = params.get("i", default_i)
        _require(1 <= i <= len(ideals), f"index i={i} out of range 1..{len(ideals)}")
        index = i - 1
        element = _element_for_check(spec, params, ideals, index)
        report["parameters"]["i"] = i
        report["tuple"] = names
        report["element"] = str(element)
        if command == "check-superficial":
            result = check_superficial(element, ideals, index, window)
            report["superficial"] = _plain(result)
            report["verdict"] = "verified-on-window" if result.verified else "failed"
            return (EXIT_OK if result.verified else EXIT_COUNTEREXAMPLE), report
        checker = is_weak_fc if params.get("weak") else is_fc
        cert = checker(element, ideals, index, window)
        mode = "weak-fc" if params.get("weak") else "fc"
        report["certificate"] = _plain(cert)
        report["verdict"] = "verified-on-window" if cert.passes(mode) else "failed"
        return (EXIT_OK if cert.passes(mode) else EXIT_COUNTEREXAMPLE), report

    if command in ("check-thm3", "check-thm5"):
        J, i_ideals = _mixed_inputs(spec)
        _require("k" in params, "this command needs a k-vector (task k=(...) or --k)")
        checker = check_thm3 if command == "check-thm3" else check_thm5
        result = checker(spec.ring, J, i_ideals, params["k"], window=window,
                         tries=params["tries"], seed=params["seed"], base=window.base)
        report["report"] = result.as_dict()
        report["verdict"] = result.verdict
        return _VERDICT_EXIT[result.verdict], report

    if command == "check-remark7":
        J, i_ideals = _mixed_inputs(spec)
        _require("eps" in params, "this command needs an eps-vector (task eps=(...) or --eps)")
        result = check_remark7(spec.ring, J, i_ideals, params["eps"], window=window,
                               tries=params["tries"], seed=params["seed"],
                               verify_fc_equality=bool(params.get("fc_equality")))
        report["report"] = result.as_dict()
        report["verdict"] = result.verdict
        return _VERDICT_EXIT[result.verdict], report

    # check-remark2
    J, i_ideals = _mixed_inputs(spec)
    i = params.get("i", 1)
    _require(1 <= i <= len(i_ideals), f"index i={i} out of range 1..{len(i_ideals)}")
    element = spec.element
    if element is None:
        element = sample_element(i_ideals[i - 1], params["seed"])
    report["element"] = str(element)
    result = check_remark2(spec.ring, J, i_ideals, element, i - 1, window=window)
    report["report"] = result.as_dict()
    report["verdict"] = result.verdict
    return _VERDICT_EXIT[result.verdict], report


# ---------------------------------------------------------------------------
# Rendering.

def render_report(report: dict) -> str:
    """Key/value tree for humans; deterministic ordering."""
    lines = []

    def emit(key, value, indent):
        pad = "  " * indent
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            for k in value:
                emit(k, value[k], indent + 1)
        elif isinstance(value, list):
            if all(not isinstance(v, (dict, list)) for v in value):
                lines.append(f"{pad}{key}: [{', '.join(str(v) for v in value)}]")
            else:
                lines.append(f"{pad}{key}:")
                for n, v in enumerate(value):
                    emit(f"[{n}]", v, indent + 1)
        else:
            lines.append(f"{pad}{key}: {value}")

    for key in report:
        emit(key, report[key], 0)
    return "\n".join(lines) + "\n"


def machine_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Entry point.

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="mixedmult",
        description="Exact mixed-multiplicity computations and claim checking "
                    "on graded quotient rings.")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("instance", help="instance file path")
    parser.add_argument("--k", help="comma-separated k-vector, e.g. 0,1")
    parser.add_argument("--eps", help="comma-separated eps-vector, e.g. 1,1,2")
    parser.add_argument("--i", type=int, help="1-based index of the element's ideal")
    parser.add_argument("--window-base", type=int, help="window base (default 4)")
    parser.add_argument("--window-width", type=int, help="window width (default 3)")
    parser.add_argument("--tries", type=int, help="candidates per sequence step (default 50)")
    parser.add_argument("--seed", type=int, help="RNG seed (default 0)")
    parser.add_argument("--jobs", type=int, help="parallel window/grid evaluations")
    parser.add_argument("--field", help="override the instance field: QQ or Fp(p)")
    parser.add_argument("--weak", action="store_true", help="check-fc: weak-(FC) only")
    parser.add_argument("--fc-equality", action="store_true",
                        help="check-remark7: also test the equality criterion")
    parser.add_argument("--out", help="write the machine-readable JSON report here")
    return parser


def _parse_vector(text):
    if text is None:
        return None
    return tuple(int(p) for p in text.split(",") if p.strip())


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else EXIT_INPUT_ERROR

    field_override = None
    if args.field:
        try:
            field_override = _parse_field(args.field)
            if field_override is None:
                raise ValueError
        except (AttributeError, ValueError):
            print(f"error: bad --field value {args.field!r}", file=sys.stderr)
            return EXIT_INPUT_ERROR

    flags = {
        "k": _parse_vector(args.k),
        "eps": _parse_vector(args.eps),
        "i": args.i,
        "tries": args.tries,
        "seed": args.seed,
        "jobs": args.jobs,
        "weak": args.weak or None,
        "fc_equality": args.fc_equality or None,
    }
    if args.window_base is not None or args.window_width is not None:
        base = args.window_base if args.window_base is not None else DEFAULTS["window"][0]
        width = args.window_width if args.window_width is not None else DEFAULTS["window"][1]
        flags["window"] = (base, width)

    try:
        spec = parse_instance(args.instance, field_override)
        code, report = run(args.command, spec, flags)
    except (InstanceError, PreconditionError, NilpotentProductError,
            ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    report["exit_code"] = code
    sys.stdout.write(render_report(report))
    if args.out:
        Path(args.out).write_text(machine_report(report), encoding="utf-8")
    return code
