"""Command line front end.

One binary, subcommand per pipeline, JSON in and out.  Rationals are
printed as strings so no consumer ever rounds them; for fixed inputs the
bytes emitted are identical run to run.  Exit status 0 means the
computation succeeded, 1 means the input was readable but failed a
mathematical validation, 2 means the invocation itself was malformed.
The environment variable JBKIT_MAX_DEGREE caps every degree- or
order-like argument globally.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .bch import build_table
from .exactnum import bernoulli, format_rational, parse_rational
from .liecore import ArtinLine, LieElement
from .jbcomplex import (
    Sela,
    coboundary_gluing,
    jb_assemble,
    jb_cohomology,
    obstruction,
    special_cocycle,
    verify_cocycle,
    verify_d_squared,
)
from .jbcomplex.sela import _parse_simplex, _simplex_name
from .jbcomplex.factories import nonabelian_triangle
from .schemes import (
    PolyComplex,
    hypersurface_tangent_dgla,
    lift_deformation,
    milnor_dim,
    parse_poly,
)

__all__ = ["RunConfig", "main", "run"]


class _Usage(Exception):
    """Malformed invocation; rendered as a synopsis plus message."""


@dataclass
class RunConfig:
    """Everything a subcommand run depends on, normalized from argv."""

    subcommand: str
    paths: list = field(default_factory=list)
    caps: dict = field(default_factory=dict)
    fmt: str = "json"
    seed: int = 0


def _cap(value, what):
    """Apply the global degree cap from the environment."""
    raw = os.environ.get("JBKIT_MAX_DEGREE")
    if raw is None:
        return value
    try:
        cap = int(raw)
    except ValueError:
        raise _Usage("JBKIT_MAX_DEGREE=%r is not an integer" % raw)
    if value > cap:
        raise _Usage("%s %d exceeds JBKIT_MAX_DEGREE=%d" % (what, value, cap))
    return value


def _emit(obj, fmt="json"):
    if fmt == "text":
        print(obj)
    else:
        print(json.dumps(obj, indent=2, sort_keys=True))


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as e:
        raise _Usage("cannot read %s: %s" % (path, e))
    except json.JSONDecodeError as e:
        raise ValueError("%s is not valid JSON: %s" % (path, e))


def _vars_arg(text):
    names = tuple(v.strip() for v in text.split(",") if v.strip())
    if not names:
        raise _Usage("--vars needs a comma-separated list of names")
    return names


# -- subcommands --------------------------------------------------------------


def cmd_bernoulli(args):
    n = _cap(args.max, "--max")
    if n < 0:
        raise _Usage("--max must be nonnegative")
    rows = [(k, format_rational(bernoulli(k))) for k in range(n + 1)]
    if args.fmt == "json":
        _emit({str(k): v for k, v in rows})
    else:
        for k, v in rows:
            print("%d: %s" % (k, v))
    return 0


def _lie_terms(elt):
    labels = elt.alphabet.labels
    out = []
    for word, coeff in sorted(elt.terms.items()):
        out.append({"word": "".join(labels[i] for i in word), "coeff": format_rational(coeff)})
    return out


def cmd_bch(args):
    n = _cap(args.max_degree, "--max-degree")
    if n < 1:
        raise _Usage("--max-degree must be at least 1")
    table = build_table(n, tri=args.tri)
    out = {
        "max_degree": n,
        "bigraded": [
            {"bidegree": list(md), "terms": _lie_terms(part)}
            for md, part in sorted(table.bidegree.items())
        ],
    }
    if args.tri:
        out["trigraded"] = [
            {"tridegree": list(md), "terms": _lie_terms(part)}
            for md, part in sorted(table.tridegree.items())
        ]
    _emit(out)
    return 0


def _load_sela(data):
    if "sela" in data:
        data = data["sela"]
    sela = Sela.from_json(data)
    _cap(sela.artin_order, "artin order")
    sela.validate()
    return sela


def _element_from_json(sela, simplex, records):
    lie = sela.algebra(simplex)
    ring = ArtinLine(sela.artin_order)
    coeffs = {}
    for rec in records:
        name = rec["name"]
        if name not in lie.index:
            raise ValueError(
                "no basis element %r on simplex %s" % (name, _simplex_name(simplex))
            )
        idx = lie.index[name]
        cur = coeffs.get(idx, ring.element([0]))
        coeffs[idx] = cur + ring.t_power(int(rec["power"]), parse_rational(str(rec["coeff"])))
    return LieElement(lie, ring, coeffs)


def _load_family(data):
    """A gluing datum with a cochain: {"sela": …, "phi": …, "psi": …}."""
    sela = _load_sela(data)
    phi = {}
    for key, records in data.get("phi", {}).items():
        simplex = _parse_simplex(key, sela.indices)
        phi[simplex] = _element_from_json(sela, simplex, records)
    psi = {}
    for key, records in data.get("psi", {}).items():
        simplex = _parse_simplex(key, sela.indices)
        psi[simplex] = _element_from_json(sela, simplex, records)
    return sela, phi, psi


def _class_json(sela, cls):
    out = []
    for (simplex, b), coeff in sorted(cls.items(), key=lambda kv: (len(kv[0][0]), kv[0])):
        out.append(
            {
                "simplex": _simplex_name(simplex),
                "basis": sela.algebra(simplex).names[b],
                "coeff": format_rational(coeff),
            }
        )
    return out


def cmd_jb(args):
    data = _load_json(args.data)
    if args.action == "check":
        sela = _load_sela(data)
        jb = jb_assemble(sela)
        bad = verify_d_squared(jb)
        report = {
            "indices": list(sela.indices),
            "artin_order": sela.artin_order,
            "dimensions": {str(deg): jb.dim(deg) for deg in jb.degrees()},
            "d_squared_zero": not bad,
        }
        if bad:
            report["failures"] = [
                {"degree": deg, "source": src, "target": dst, "coeff": format_rational(v)}
                for deg, src, dst, v in bad
            ]
        _emit(report)
        return 0 if not bad else 1

    if args.action == "cohomology":
        sela = _load_sela(data)
        jb = jb_assemble(sela)
        dim, reps = jb_cohomology(jb, args.degree)
        from .jbcomplex.assemble import format_monomial

        _emit(
            {
                "degree": args.degree,
                "dimension": dim,
                "representatives": [
                    [[format_monomial(sela, m), format_rational(c)] for m, c in sorted(rep.items())]
                    for rep in reps
                ],
            }
        )
        return 0

    if args.action == "cocycle":
        sela, phi, psi = _load_family(data)
        try:
            cocycle = special_cocycle(sela, phi, psi)
        except ValueError as e:
            _emit({"valid": False, "error": str(e)})
            return 1
        jb = jb_assemble(sela)
        residual = verify_cocycle(jb, cocycle)
        _emit(
            {
                "valid": True,
                "cycle": not residual,
                "residual": [[m, format_rational(c)] for m, c in residual],
            }
        )
        return 0 if not residual else 1

    if args.action == "obstruct":
        sela, phi, psi = _load_family(data)
        _cap(args.to_order, "--to-order")
        if args.from_order != sela.artin_order:
            raise ValueError(
                "--from-order %d does not match the datum's artin order %d"
                % (args.from_order, sela.artin_order)
            )
        if args.to_order <= args.from_order:
            raise ValueError("--to-order must exceed --from-order")
        try:
            cocycle = special_cocycle(sela, phi, psi)
        except ValueError as e:
            _emit({"valid": False, "error": str(e)})
            return 1
        steps = []
        lifted = True
        for k in range(args.from_order, args.to_order):
            res = obstruction(cocycle, k + 1)
            steps.append(
                {
                    "power": res.power,
                    "vanishes": res.vanishes,
                    "class": _class_json(cocycle.sela, res.cls),
                }
            )
            if not res.vanishes:
                lifted = False
                break
            cocycle = res.lift
        _emit(
            {
                "valid": True,
                "from_order": args.from_order,
                "to_order": args.to_order,
                "steps": steps,
                "lifted": lifted,
            }
        )
        return 0 if lifted else 1

    raise _Usage("unknown jb action %r" % args.action)


def cmd_milnor(args):
    f = parse_poly(args.poly, _vars_arg(args.vars))
    try:
        dim = milnor_dim(f)
    except ValueError as e:
        _emit({"error": str(e)})
        return 1
    _emit({"dimension": dim})
    return 0


def cmd_tangent_dgla(args):
    f = parse_poly(args.poly, _vars_arg(args.vars))
    try:
        tc = hypersurface_tangent_dgla(f)
    except ValueError as e:
        _emit({"error": str(e)})
        return 1
    pc = tc.complex
    report = {
        "vars": list(pc.vars),
        "degrees": list(pc.degrees()),
        "ranks": [pc.rank(d) for d in pc.degrees()],
        "h1_ideal": [str(g) for g in tc.h1_ideal()],
    }
    try:
        report["h1_dimension"] = tc.h1_dimension()
    except ValueError as e:
        report["h1_dimension"] = None
        report["note"] = str(e)
    if args.truncate is not None:
        cap = _cap(args.truncate, "--truncate")
        report["truncated_h1"] = tc.truncated_h1(cap)
        report["truncated_ranks"] = tc.truncated_ranks(cap)
    _emit(report)
    return 0


def cmd_deform(args):
    if args.action != "lift":
        raise _Usage("unknown deform action %r" % args.action)
    vars = _vars_arg(args.vars)
    f = parse_poly(args.poly, vars)
    g = parse_poly(args.direction, vars)
    _cap(args.to_order, "--to-order")
    try:
        rep = lift_deformation(f, g, args.from_order, args.to_order)
    except ValueError as e:
        _emit({"error": str(e)})
        return 1
    eq = rep.equation()
    _emit(
        {
            "equation": None if eq is None else str(eq),
            "from_order": rep.from_order,
            "to_order": rep.to_order,
            "steps": [
                {
                    "power": s.power,
                    "vanishes": s.vanishes,
                    "class": _class_json(rep.sela, s.cls),
                }
                for s in rep.steps
            ],
            "lifted": rep.succeeded,
        }
    )
    return 0 if rep.succeeded else 1


def cmd_resolution(args):
    if args.action != "check":
        raise _Usage("unknown resolution action %r" % args.action)
    data = _load_json(args.file)
    try:
        pc = PolyComplex.from_json(data)
    except (ValueError, KeyError) as e:
        _emit({"ok": False, "error": str(e)})
        return 1
    _emit(
        {
            "ok": True,
            "vars": list(pc.vars),
            "degrees": list(pc.degrees()),
            "ranks": [pc.rank(d) for d in pc.degrees()],
        }
    )
    return 0


# -- selfcheck ----------------------------------------------------------------


def _fixture(name):
    return json.loads(resources.files("jbkit").joinpath("data/%s" % name).read_text())


def _suite_bernoulli(seed):
    want = _fixture("bernoulli.json")
    for key, val in sorted(want.items(), key=lambda kv: int(kv[0])):
        got = format_rational(bernoulli(int(key)))
        if got != val:
            return False, "bernoulli(%s) = %s, fixture says %s" % (key, got, val)
    n = max(int(k) for k in want)
    for m in range(1, n + 1):
        acc = Fraction(0)
        from .exactnum import binomial

        for k in range(m):
            acc += binomial(m + 1, k) * bernoulli(k)
        if bernoulli(m) != -acc / (m + 1):
            return False, "recurrence fails at %d" % m
    return True, "%d values against the stored table plus the recurrence" % (n + 1)


def _suite_bch(seed):
    want = _fixture("bch_reference.json")
    table = build_table(int(want["max_degree"]))
    got = {
        ",".join(str(d) for d in md): _lie_terms(part)
        for md, part in table.bidegree.items()
    }
    for key, terms in want["bigraded"].items():
        if got.get(key) != terms:
            return False, "bidegree %s disagrees with the stored series" % key
    if set(got) != set(want["bigraded"]):
        return False, "bidegree support differs from the stored series"
    return True, "series to degree %s against the stored table" % want["max_degree"]


def _suite_jb(seed):
    sela = Sela.from_json(_fixture("triangle_sela.json"))
    sela.validate()
    jb = jb_assemble(sela)
    bad = verify_d_squared(jb)
    if bad:
        return False, "d*d has %d nonzero entries" % len(bad)
    rng = random.Random(seed)
    ring = ArtinLine(sela.artin_order)
    gauges = {}
    for v in sela.simplices(1):
        lie = sela.algebra(v)
        coeffs = {}
        for i in range(lie.dim):
            series = [0] + [Fraction(rng.randrange(-2, 3)) for _ in range(sela.artin_order - 1)]
            if any(series):
                coeffs[i] = ring.element(series)
        gauges[v] = LieElement(lie, ring, coeffs)
    psi = coboundary_gluing(sela, gauges)
    cocycle = special_cocycle(sela, {}, psi)
    residual = verify_cocycle(jb, cocycle)
    if residual:
        return False, "coboundary family is not a cycle (%d terms)" % len(residual)
    return True, "d*d = 0 on %s and one seeded coboundary cocycle" % (
        "dimensions " + ",".join(str(jb.dim(d)) for d in jb.degrees())
    )


def _suite_milnor(seed):
    rows = _fixture("milnor_table.json")
    for row in rows:
        f = parse_poly(row["poly"], tuple(row["vars"]))
        got = milnor_dim(f)
        if got != row["dimension"]:
            return False, "%s: computed %d, fixture says %d" % (row["poly"], got, row["dimension"])
    return True, "%d quotient dimensions" % len(rows)


_SUITES = {
    "bernoulli": _suite_bernoulli,
    "bch": _suite_bch,
    "jb": _suite_jb,
    "milnor": _suite_milnor,
}


def cmd_selfcheck(args):
    names = [args.suite] if args.suite else sorted(_SUITES)
    for name in names:
        if name not in _SUITES:
            raise _Usage("unknown suite %r (have: %s)" % (name, ", ".join(sorted(_SUITES))))
    results = []
    for name in names:
        start = time.perf_counter()
        try:
            ok, detail = _SUITES[name](args.seed)
        except Exception as e:
            ok, detail = False, "%s: %s" % (type(e).__name__, e)
        results.append((name, ok, time.perf_counter() - start, detail))
    if args.fmt == "json":
        _emit(
            {
                name: {"pass": ok, "seconds": round(sec, 3), "detail": detail}
                for name, ok, sec, detail in results
            }
        )
    else:
        for name, ok, sec, detail in results:
            print("%-10s %s  (%.2fs)  %s" % (name, "pass" if ok else "FAIL", sec, detail))
    return 0 if all(ok for _, ok, _, _ in results) else 1


# -- wiring -------------------------------------------------------------------


def _build_parser():
    p = argparse.ArgumentParser(
        prog="jbkit",
        description="exact bracket series, glued complexes, hypersurface deformations",
    )
    sub = p.add_subparsers(dest="subcommand", required=True)

    q = sub.add_parser("bernoulli", help="table of Bernoulli numbers")
    q.add_argument("--max", type=int, required=True)
    q.add_argument("--format", dest="fmt", choices=("json", "text"), default="text")
    q.set_defaults(fn=cmd_bernoulli)

    q = sub.add_parser("bch", help="graded bracket composition series")
    q.add_argument("--max-degree", type=int, required=True)
    q.add_argument("--tri", action="store_true", help="include the trivariate split")
    q.set_defaults(fn=cmd_bch)

    q = sub.add_parser("jb", help="glued complexes: check, cohomology, cocycle, obstruct")
    q.add_argument("action", choices=("check", "cohomology", "cocycle", "obstruct"))
    q.add_argument("--data", required=True, help="gluing datum or family JSON file")
    q.add_argument("--degree", type=int, default=0)
    q.add_argument("--from-order", type=int, default=2)
    q.add_argument("--to-order", type=int, default=3)
    q.set_defaults(fn=cmd_jb)

    q = sub.add_parser("milnor", help="dimension of the quotient by an equation and its partials")
    q.add_argument("--vars", required=True)
    q.add_argument("--poly", required=True)
    q.set_defaults(fn=cmd_milnor)

    q = sub.add_parser("tangent-dgla", help="tangent complex of a hypersurface")
    q.add_argument("--vars", required=True)
    q.add_argument("--poly", required=True)
    q.add_argument("--truncate", type=int, default=None)
    q.set_defaults(fn=cmd_tangent_dgla)

    q = sub.add_parser("deform", help="lift a family up the coefficient line")
    q.add_argument("action", choices=("lift",))
    q.add_argument("--vars", required=True)
    q.add_argument("--poly", required=True)
    q.add_argument("--direction", required=True)
    q.add_argument("--from-order", type=int, default=2)
    q.add_argument("--to-order", type=int, required=True)
    q.set_defaults(fn=cmd_deform)

    q = sub.add_parser("resolution", help="verify a complex of free modules from a file")
    q.add_argument("action", choices=("check",))
    q.add_argument("--file", required=True)
    q.set_defaults(fn=cmd_resolution)

    q = sub.add_parser("selfcheck", help="run the bundled verification suites")
    q.add_argument("--suite", default=None)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--format", dest="fmt", choices=("json", "text"), default="text")
    q.set_defaults(fn=cmd_selfcheck)

    return p


def run(argv=None):
    """Parse argv and dispatch; returns the exit status."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    config = RunConfig(
        subcommand=args.subcommand,
        paths=[v for v in (getattr(args, "data", None), getattr(args, "file", None)) if v],
        caps={
            k: getattr(args, k)
            for k in ("max", "max_degree", "to_order", "truncate")
            if getattr(args, k, None) is not None
        },
        fmt=getattr(args, "fmt", "json"),
        seed=getattr(args, "seed", 0),
    )
    args.fmt = config.fmt
    try:
        return args.fn(args)
    except _Usage as e:
        parser.print_usage(sys.stderr)
        print("jbkit: error: %s" % e, file=sys.stderr)
        return 2
    except ValueError as e:
        _emit({"error": str(e)})
        return 1


def main(argv=None):
    return run(argv)
