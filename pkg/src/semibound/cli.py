"""Command-line front end.

Input is a JSON document; every integer and rational is written as a
decimal string (JSON integers are tolerated, JSON floats are rejected).
Polynomials are either expression strings such as ``"x^2 + y^2 - 1"`` or
term lists ``[["coefficient", [e1, ..., en]], ...]``.

Exit codes: 0 all verdicts pass (or are inapplicable as expected),
1 a verdict fails, 2 usage or parse error, 3 a budget guard tripped.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Sequence

from . import bounds, roots
from .bounds import PowerExpr
from .elimination import (Budget, BudgetExceeded, CeilingViolation, DegenerateResultant,
                          candidate_minima, certificate_for)
from .oracle import (ComponentSpec, Enclosure, OracleBudget, OracleBudgetExceeded, OracleError,
                     example_components, reference_minimum, separation_oracle)
from .perturb import (InvalidSystemError, SemialgSystem, SubsetSelector, build_matrix_A)
from .polycore import IntPolynomial, PolynomialError, parse_polynomial

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class ParseError(ValueError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.message = message


# -- input documents ---------------------------------------------------------------

@dataclass
class InputDocument:
    variables: tuple[str, ...] = ()
    equalities: tuple[IntPolynomial, ...] = ()
    inequalities: tuple[IntPolynomial, ...] = ()
    objective: IntPolynomial | None = None
    d: int | None = None
    seed: tuple[Fraction, ...] | None = None
    box: tuple[tuple[Fraction, Fraction], ...] | None = None
    resolution: int | None = None
    systems: tuple[InputDocument, ...] = field(default_factory=tuple)

    @property
    def is_pair(self) -> bool:
        return bool(self.systems)

    def system(self) -> SemialgSystem:
        g = self.objective
        if g is None:
            # separation ignores the objective; any degree-one form keeps H and d unchanged
            g = IntPolynomial.variable(0, len(self.variables))
        return SemialgSystem(self.equalities, self.inequalities, g, self.d, self.variables)

    def component(self, resolution: int | None = None) -> ComponentSpec:
        if self.seed is None or self.box is None:
            raise ParseError("seed", "seed and box are required for this command")
        res = resolution or self.resolution or 16
        return ComponentSpec(self.seed, self.box, res)


def _reject_float(text: str):
    raise ParseError("document", f"float literal {text} is not allowed; write rationals as strings")


def _int(value: Any, path: str) -> int:
    if isinstance(value, bool):
        raise ParseError(path, "expected an integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip())
        except ValueError:
            pass
    raise ParseError(path, f"expected an integer, got {value!r}")


def _rational(value: Any, path: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(path, "expected a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if "." not in text and "e" not in text.lower():
            try:
                return Fraction(text)
            except (ValueError, ZeroDivisionError):
                pass
    raise ParseError(path, f"expected a rational 'p/q', got {value!r}")


def _polynomial(value: Any, names: Sequence[str], path: str) -> IntPolynomial:
    if isinstance(value, str):
        try:
            return parse_polynomial(value, names)
        except PolynomialError as exc:
            raise ParseError(path, str(exc)) from None
    if isinstance(value, list):
        terms: dict[tuple[int, ...], int] = {}
        for k, term in enumerate(value):
            tp = f"{path}[{k}]"
            if not (isinstance(term, list) and len(term) == 2 and isinstance(term[1], list)):
                raise ParseError(tp, "term must be [coefficient, [exponents]]")
            c = _int(term[0], tp + "[0]")
            exps = tuple(_int(e, f"{tp}[1][{j}]") for j, e in enumerate(term[1]))
            if len(exps) != len(names):
                raise ParseError(tp + "[1]", f"exponent vector has {len(exps)} entries, "
                                             f"expected {len(names)}")
            if any(e < 0 for e in exps):
                raise ParseError(tp + "[1]", "exponents must be non-negative")
            terms[exps] = terms.get(exps, 0) + c
        return IntPolynomial(len(names), terms)
    raise ParseError(path, "polynomial must be a string or a term list")


def _block(raw: Any, path: str, need_objective: bool) -> InputDocument:
    if not isinstance(raw, dict):
        raise ParseError(path or "document", "expected an object")
    known = {"variables", "equalities", "inequalities", "objective", "d", "seed", "box",
             "resolution"}
    for key in raw:
        if key not in known:
            raise ParseError(f"{path}{key}", "unknown field")
    names = raw.get("variables")
    if not (isinstance(names, list) and names and all(isinstance(v, str) for v in names)):
        raise ParseError(f"{path}variables", "expected a non-empty list of names")
    if len(set(names)) != len(names):
        raise ParseError(f"{path}variables", "duplicate variable name")
    polys = {}
    for key in ("equalities", "inequalities"):
        items = raw.get(key, [])
        if not isinstance(items, list):
            raise ParseError(f"{path}{key}", "expected a list")
        polys[key] = tuple(_polynomial(v, names, f"{path}{key}[{k}]") for k, v in enumerate(items))
    objective = None
    if "objective" in raw:
        objective = _polynomial(raw["objective"], names, f"{path}objective")
    elif need_objective:
        raise ParseError(f"{path}objective", "missing")
    d = _int(raw["d"], f"{path}d") if "d" in raw else None
    if d is not None and d % 2:
        raise ParseError(f"{path}d", "d must be even")
    seed = box = None
    if "seed" in raw:
        if not isinstance(raw["seed"], list):
            raise ParseError(f"{path}seed", "expected a list")
        seed = tuple(_rational(v, f"{path}seed[{k}]") for k, v in enumerate(raw["seed"]))
        if len(seed) != len(names):
            raise ParseError(f"{path}seed", "seed dimension does not match the variables")
    if "box" in raw:
        if not isinstance(raw["box"], list) or len(raw["box"]) != len(names):
            raise ParseError(f"{path}box", "expected one [lo, hi] pair per variable")
        sides = []
        for k, side in enumerate(raw["box"]):
            if not (isinstance(side, list) and len(side) == 2):
                raise ParseError(f"{path}box[{k}]", "expected [lo, hi]")
            lo, hi = (_rational(v, f"{path}box[{k}][{j}]") for j, v in enumerate(side))
            if not lo < hi:
                raise ParseError(f"{path}box[{k}]", "need lo < hi")
            sides.append((lo, hi))
        box = tuple(sides)
    resolution = _int(raw["resolution"], f"{path}resolution") if "resolution" in raw else None
    if resolution is not None and resolution < 1:
        raise ParseError(f"{path}resolution", "must be positive")
    doc = InputDocument(tuple(names), polys["equalities"], polys["inequalities"], objective,
                        d, seed, box, resolution)
    try:
        doc.system()
    except InvalidSystemError as exc:
        # the only d-related complaint left here is an override below the observed degree
        field_name = "d" if str(exc).startswith("d=") else "document"
        raise ParseError(f"{path}{field_name}", str(exc)) from None
    return doc


def parse_input(text: str) -> InputDocument:
    """Validate a document; raises :class:`ParseError` naming the first bad field."""
    try:
        raw = json.loads(text, parse_float=_reject_float)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if isinstance(raw, dict) and "systems" in raw:
        blocks = raw["systems"]
        if set(raw) != {"systems"}:
            raise ParseError("document", "a two-system document holds only 'systems'")
        if not (isinstance(blocks, list) and len(blocks) == 2):
            raise ParseError("systems", "expected exactly two system blocks")
        pair = tuple(_block(b, f"systems[{k}].", need_objective=False) for k, b in enumerate(blocks))
        if len(pair[0].variables) != len(pair[1].variables):
            raise ParseError("systems[1].variables", "both systems need the same number of variables")
        return InputDocument(variables=pair[0].variables, systems=pair)
    return _block(raw, "", need_objective=True)


def _poly_terms(p: IntPolynomial) -> list:
    return [[str(c), list(mono)] for mono, c in sorted(p.terms.items(), reverse=True)]


def serialize_document(doc: InputDocument) -> dict:
    """Canonical form: term lists sorted by exponent vector, rationals as strings."""
    if doc.is_pair:
        return {"systems": [serialize_document(b) for b in doc.systems]}
    out: dict[str, Any] = {
        "variables": list(doc.variables),
        "equalities": [_poly_terms(p) for p in doc.equalities],
        "inequalities": [_poly_terms(p) for p in doc.inequalities],
    }
    if doc.objective is not None:
        out["objective"] = _poly_terms(doc.objective)
    if doc.d is not None:
        out["d"] = str(doc.d)
    if doc.seed is not None:
        out["seed"] = [str(v) for v in doc.seed]
    if doc.box is not None:
        out["box"] = [[str(a), str(b)] for a, b in doc.box]
    if doc.resolution is not None:
        out["resolution"] = str(doc.resolution)
    return out


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


# -- exactness markers -------------------------------------------------------------

def exact(v: int | Fraction) -> dict:
    return {"exact": str(v)}


def enclosure(lo: Fraction, hi: Fraction) -> dict:
    return {"certified_enclosure": [str(lo), str(hi)]}


def display(x: float) -> dict:
    return {"display_only_float": f"{x:.6g}"}


def compact_text(p: PowerExpr) -> str:
    """``b^e`` with the exponent gcd pulled out, e.g. ``2^-192 * 3^-32`` as ``192^(-32)``."""
    if not p.factors:
        return "1"
    q = p.exponent_denominator()
    nums = [int(e * q) for _, e in p.factors]
    if len({x > 0 for x in nums}) != 1:
        return p.to_text()
    g = 0
    for x in nums:
        g = gcd(g, x)
    g = g if nums[0] > 0 else -g
    base = 1
    for (b, _), x in zip(p.factors, nums):
        base *= b ** (x // g)
    e = Fraction(g, q)
    return f"{base}^({e})"


def power_expr(p: PowerExpr) -> dict:
    lo, hi = p.log2_enclosure()
    return {
        "exact": p.to_text(),
        "compact": compact_text(p),
        "factors": [[str(b), str(e)] for b, e in p.factors],
        "log2": enclosure(lo, hi),
        "log2_display": display(float(lo)),
    }


def _bound_block(sys: SemialgSystem) -> dict:
    rep = bounds.bound_report(sys)
    p = rep.params
    return {
        "params": {"n": exact(p.n), "m": exact(p.m), "l": exact(p.l), "d": exact(p.d),
                   "d0": exact(p.d0), "H": exact(p.H), "H0": exact(p.H0),
                   "Htilde": exact(p.Htilde)},
        "degree_bound": exact(rep.degree_bound),
        "magnitude_bound": power_expr(rep.magnitude_bound),
        "components": [{
            "s": exact(c.s),
            "M1": exact(c.M1), "M2": exact(c.M2), "M3": exact(c.M3),
            "N1": exact(c.N1), "N2": exact(c.N2), "N3": exact(c.N3),
            "M": exact(c.M) if c.M is not None else None,
            "log2_M": enclosure(*c.log2_M),
        } for c in rep.components],
    }


def _separation(doc: InputDocument) -> tuple[PowerExpr, dict]:
    a, b = (blk.system() for blk in doc.systems)
    n = a.n
    d = max(a.d, b.d)
    H = max(a.H, b.H)
    bound = bounds.separation_bound(n, d, H, a.m, b.m)
    info = {"n": exact(n), "d": exact(d), "H": exact(H), "m1": exact(a.m), "m2": exact(b.m),
            "Htilde": exact(bounds.separation_htilde(n, H, a.m, b.m)),
            "bound": power_expr(bound)}
    return bound, info


def _certificate_block(cert, target: Fraction) -> dict:
    out = cert.as_dict()
    out["roots"] = [_root_block(cert.coefficients, r, target) for r in cert.roots]
    out["text"] = roots.to_text(cert.coefficients)
    return out


def _root_block(coeffs, interval, target: Fraction) -> dict:
    lo, hi = roots.refine_root(coeffs, interval, target)
    rat = roots.rational_root_in(coeffs, (lo, hi))
    block = {"isolating": enclosure(lo, hi), "open": lo != hi,
             "display": display(float((lo + hi) / 2))}
    if rat is not None:
        block["value"] = exact(rat)
    return block


# -- commands ----------------------------------------------------------------------

@dataclass
class Settings:
    budget: Budget = Budget()
    oracle_budget: OracleBudget = OracleBudget()
    resolution: int | None = None
    target_width: Fraction = Fraction(1, 2 ** 20)
    jobs: int = 1


def _verdict(name: str, status: str, detail: str, **values) -> dict:
    return {"name": name, "status": status, "detail": detail, **values}


def _passed(verdicts: list[dict]) -> bool:
    return all(v["status"] in ("pass", "inapplicable") for v in verdicts)


def cmd_bounds(doc: InputDocument, settings: Settings) -> dict:
    report: dict[str, Any] = {"command": "bounds", "input": serialize_document(doc)}
    summary = []
    if doc.is_pair:
        report["systems"] = [_bound_block(blk.system()) for blk in doc.systems]
        bound, info = _separation(doc)
        report["separation"] = info
        summary.append(f"separation bound {compact_text(bound)}")
    else:
        blk = _bound_block(doc.system())
        report.update(blk)
        summary.append(f"degree bound {blk['degree_bound']['exact']}")
        summary.append(f"magnitude bound {blk['magnitude_bound']['compact']}")
    report["summary"] = summary
    report["verdicts"] = []
    return report


def _parse_selector(S: str | None, sigma: str | None, sys: SemialgSystem) -> SubsetSelector | None:
    if S is None:
        if sigma is not None:
            raise ParseError("--sigma", "given without --S")
        return None
    idx = tuple(int(v) for v in S.split(",") if v.strip()) if S.strip() else ()
    if sigma is None:
        signs = tuple(1 for _ in idx)
    else:
        parts = [v.strip() for v in sigma.split(",") if v.strip()]
        if any(p not in "+-" for p in parts):
            raise ParseError("--sigma", "signs must be + or -")
        signs = tuple(1 if p == "+" else -1 for p in parts)
    try:
        sel = SubsetSelector(idx, signs)
        sel.validate(sys)
    except InvalidSystemError as exc:
        raise ParseError("--S", str(exc)) from None
    return sel


def cmd_qpoly(doc: InputDocument, settings: Settings, selector: SubsetSelector | None = None) -> dict:
    sys = doc.system()
    A = build_matrix_A(sys.n, sys.m)
    if selector is not None:
        certs = [certificate_for(sys, A, selector, settings.budget)]
    else:
        certs = candidate_minima(sys, A, settings.budget, settings.jobs).certificates
    blocks = [_certificate_block(c, settings.target_width) for c in certs]
    summary = [f"{c.selector.label()}: Q = {roots.to_text(c.coefficients)}" for c in certs]
    return {"command": "qpoly", "input": serialize_document(doc),
            "certificates": blocks, "summary": summary, "verdicts": []}


def cmd_certify(doc: InputDocument, settings: Settings) -> dict:
    sys = doc.system()
    comp = doc.component(settings.resolution)
    enc = reference_minimum(sys, comp, settings.target_width, settings.oracle_budget)
    cands = candidate_minima(sys, None, settings.budget, settings.jobs)
    rep = bounds.bound_report(sys)
    target = settings.target_width
    matches = []
    for cert in cands.certificates:
        for r in cert.roots:
            refined = roots.refine_root(cert.coefficients, r, target)
            if roots.interval_meets(refined, (enc.lo, enc.hi)):
                matches.append((cert, refined))
    verdicts = []
    if matches:
        labels = sorted({c.selector.label() for c, _ in matches})
        verdicts.append(_verdict("root_meets_enclosure", "pass",
                                 f"oracle enclosure meets a root of Q for {', '.join(labels)}",
                                 selectors=labels))
    else:
        verdicts.append(_verdict("root_meets_enclosure", "fail",
                                 "no certificate root meets the oracle enclosure"))
    if enc.lo <= 0 <= enc.hi:
        verdicts.append(_verdict("magnitude", "inapplicable", "inapplicable: minimum is zero"))
    else:
        nearest = enc.lo if enc.lo > 0 else -enc.hi
        ok = bounds.compare_abs_to_bound(nearest, rep.magnitude_bound) >= 0
        verdicts.append(_verdict("magnitude", "pass" if ok else "fail",
                                 f"|min| >= {nearest} {'>=' if ok else '<'} magnitude bound",
                                 abs_min_lower=exact(nearest)))
    degrees = []
    for cert, refined in matches:
        degrees.append(roots.root_degree(cert.coefficients, refined))
    if degrees:
        k = min(degrees)
        ok = k <= rep.degree_bound
        verdicts.append(_verdict("algebraic_degree", "pass" if ok else "fail",
                                 f"matched root degree {k} <= {rep.degree_bound}" if ok
                                 else f"matched root degree {k} > {rep.degree_bound}",
                                 degree=exact(k), bound=exact(rep.degree_bound)))
    else:
        verdicts.append(_verdict("algebraic_degree", "fail", "no matched root"))
    summary = [f"minimum in [{enc.lo}, {enc.hi}] (~{float(enc.hi):.6g})"]
    summary += [f"{v['name']}: {v['status']} ({v['detail']})" for v in verdicts]
    return {
        "command": "certify",
        "input": serialize_document(doc),
        "bounds": _bound_block(sys),
        "enclosure": _enclosure_block(enc),
        "certificates": [_certificate_block(c, target) for c in cands.certificates],
        "candidates": [enclosure(lo, hi) for lo, hi in cands.intervals],
        "verdicts": verdicts,
        "summary": summary,
    }


def _enclosure_block(enc: Enclosure) -> dict:
    return {
        "value": enclosure(enc.lo, enc.hi),
        "width": exact(enc.width),
        "witness": [exact(v) for v in enc.witness],
        "residual": exact(enc.residual),
        "certified": enc.certified,
        "cells": exact(enc.cells),
        "notes": list(enc.notes),
    }


def cmd_separate(doc: InputDocument, settings: Settings) -> dict:
    if not doc.is_pair:
        raise ParseError("systems", "separate needs a two-system document")
    a, b = doc.systems
    sa, sb = a.system(), b.system()
    enc = separation_oracle(sa, sb, a.component(settings.resolution),
                            b.component(settings.resolution), settings.target_width,
                            settings.oracle_budget)
    bound, info = _separation(doc)
    if enc.lo == 0:
        verdict = _verdict("separation", "inapplicable",
                           "inapplicable: distance enclosure reaches 0, the components may intersect")
    else:
        ok = bound.compare(enc.lo) >= 0
        verdict = _verdict("separation", "pass" if ok else "fail",
                           f"distance >= {enc.lo} {'>=' if ok else '<'} separation bound")
    return {
        "command": "separate",
        "input": serialize_document(doc),
        "assumptions": ["the first component is compact inside its box"],
        "separation": info,
        "distance": _enclosure_block(enc),
        "verdicts": [verdict],
        "summary": [f"distance in [{enc.lo}, {enc.hi}]",
                    f"separation bound {compact_text(bound)}",
                    f"{verdict['name']}: {verdict['status']}"],
    }


def example_document(n: int, d: int, H: int) -> dict:
    """Two-system document for the triangular family with two real points."""
    sys, _, upper, lower, _ = example_components(n, d, H)
    names = [f"x{i + 1}" for i in range(n)]

    def block(comp: ComponentSpec) -> dict:
        return {
            "variables": names,
            "equalities": [_poly_terms(p) for p in sys.equalities],
            "inequalities": [],
            "objective": _poly_terms(sys.objective),
            "seed": [str(v) for v in comp.seed],
            "box": [[str(a), str(b)] for a, b in comp.box],
            "resolution": str(comp.resolution),
        }

    return {"systems": [block(upper), block(lower)]}


# -- argument handling -----------------------------------------------------------

_BUDGET_KEYS = {"max_matrix_dim", "max_points", "max_work", "max_cells"}


def _parse_budget(text: str | None) -> tuple[Budget, OracleBudget]:
    if not text:
        return Budget(), OracleBudget()
    vals = {}
    for item in text.split(","):
        key, sep, val = item.partition("=")
        key = key.strip()
        if not sep or key not in _BUDGET_KEYS:
            raise ParseError("--budget", f"expected key=value with keys {sorted(_BUDGET_KEYS)}")
        vals[key] = _int(val, f"--budget {key}")
    cells = vals.pop("max_cells", OracleBudget().max_cells)
    return Budget(**vals), OracleBudget(cells)


def _width(text: str) -> Fraction:
    w = _rational(text, "--target-width")
    if w <= 0:
        raise ParseError("--target-width", "must be positive")
    return w


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", help="comma list of key=value: " + ", ".join(sorted(_BUDGET_KEYS)))
    common.add_argument("--resolution", type=int, help="oracle grid cells per axis")
    common.add_argument("--target-width", default="1/1048576",
                        help="rational enclosure width (default 2^-20)")
    common.add_argument("--output", help="write the report here instead of stdout")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="worker processes for certificate generation")
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="text adds a readable summary above the JSON report")

    parser = argparse.ArgumentParser(prog="semibound", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("bounds", "degree, magnitude and separation bounds"),
                        ("certify", "oracle minimum checked against certificates and bounds"),
                        ("separate", "distance between two seeded components")):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("input", help="document path, or - for stdin")
    p = sub.add_parser("qpoly", parents=[common], help="certificate polynomials")
    p.add_argument("input", help="document path, or - for stdin")
    p.add_argument("--S", dest="S", help="comma list of active constraint indices (1-based)")
    p.add_argument("--sigma", help="comma list of + or - per index in --S")
    p = sub.add_parser("example", parents=[common], help="emit the triangular family document")
    p.add_argument("n", type=int)
    p.add_argument("d", type=int)
    p.add_argument("H", type=int)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(report: dict, args) -> None:
    body = dumps(report)
    if args.format == "text" and report.get("summary"):
        body = "\n".join(report["summary"]) + "\n\n" + body
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(body + "\n")
    else:
        sys.stdout.write(body + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    sys.set_int_max_str_digits(0)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        budget, oracle_budget = _parse_budget(args.budget)
        settings = Settings(budget, oracle_budget, args.resolution, _width(args.target_width),
                            max(1, args.jobs))
        if args.command == "example":
            try:
                example_components(args.n, args.d, args.H)
            except ValueError as exc:
                raise ParseError("example", str(exc)) from None
            _emit(example_document(args.n, args.d, args.H), args)
            return EXIT_OK
        doc = parse_input(_read(args.input))
        if args.command == "bounds":
            report = cmd_bounds(doc, settings)
        elif args.command == "qpoly":
            if doc.is_pair:
                raise ParseError("systems", "qpoly needs a single-system document")
            report = cmd_qpoly(doc, settings, _parse_selector(args.S, args.sigma, doc.system()))
        elif args.command == "certify":
            if doc.is_pair:
                raise ParseError("systems", "certify needs a single-system document")
            report = cmd_certify(doc, settings)
        else:
            report = cmd_separate(doc, settings)
    except ParseError as exc:
        print(f"semibound: input error at {exc.path}: {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (OracleError, OSError) as exc:
        print(f"semibound: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (BudgetExceeded, OracleBudgetExceeded) as exc:
        print(f"semibound: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CeilingViolation, DegenerateResultant) as exc:
        print(f"semibound: certificate failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _emit(report, args)
    return EXIT_OK if _passed(report["verdicts"]) else EXIT_FAIL
