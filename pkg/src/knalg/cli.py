"""Command-line front end: construct basis elements, evaluate products
and cocycles, act on wedge vectors, solve casimir systems, run the
verification suites, and export tables.

All output is JSON with sorted keys and every rational rendered as a
"p/q" string, so identical configurations give byte-identical files.
Exit codes: 0 success, 1 check failure or invariant violation, 2 usage
or configuration error, 3 I/O failure on output.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from .affine import GL, SL, MatrixElement, identity_matrix, matrix_basis
from .basis import basis_order_at_infinity, make_basis, kn_pairing
from .casimir import casimir_solve, gamma_extend, mixing_gamma_geometric, wedge_mixing_gamma
from .cocycles import gamma_A_basis, gamma_L_basis, gamma_mix_basis, check_locality, cocycle_A, cocycle_L, cocycle_mix
from .expr import rational_string
from .ratfun import INFINITY
from .scalars import Q, qstr
from .structure import bracket_basis, lie_basis, measure_bounds, multiply_basis
from .sugawara import apply_sugawara, sugawara_coeff, sugawara_context
from .verify import ConfigError, FAIL, JobConfig, run_suite, SUITE_NAMES
from .wedge import WedgeMonomial, WedgeVector, _basis_current_op, _basis_field_op, wedge_apply

_SUITE_CHOICES = SUITE_NAMES + ("all",)
_EXPORT_CHOICES = ("structure-table", "cocycle-table", "sugawara-coeffs", "casimir-basis")


def _load_config(path):
    if path is None:
        return JobConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return JobConfig.from_dict(data)


def _emit(payload, out):
    text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_ints(text, count, what):
    parts = [s.strip() for s in text.split(",")]
    if len(parts) != count:
        raise ValueError(f"{what} needs {count} comma-separated integers")
    try:
        return tuple(int(s) for s in parts)
    except ValueError as exc:
        raise ValueError(f"{what}: {exc}") from exc


def _parse_occupancy(text):
    if not text:
        return ()
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError as exc:
        raise ValueError(f"occupancy: {exc}") from exc


def _matrix_by_name(tag, size, name):
    if name == "I":
        return identity_matrix(size, tag)
    if size == 2 and name in ("H", "E", "F"):
        rows = {
            "H": ((Q(1), Q(0)), (Q(0), Q(-1))),
            "E": ((Q(0), Q(1)), (Q(0), Q(0))),
            "F": ((Q(0), Q(0)), (Q(1), Q(0))),
        }[name]
        return MatrixElement(rows, tag)
    hit = re.fullmatch(r"E(\d)(\d)", name)
    if hit:
        i, j = int(hit.group(1)), int(hit.group(2))
        if 1 <= i <= size and 1 <= j <= size:
            rows = tuple(
                tuple(Q(1) if (a, b) == (i - 1, j - 1) else Q(0) for b in range(size))
                for a in range(size)
            )
            return MatrixElement(rows, tag)
    raise ValueError(f"unknown matrix name {name!r} for size {size}")


def _geometry_payload(cfg):
    return [qstr(a) for a in cfg.geometry]


def _expansion_payload(exp):
    return {
        f"{n},{p}": qstr(c) for (n, p), c in exp.coeffs.items() if c
    }


def _monomial_payload(mono):
    return {"charge": mono.charge, "occupancy": list(mono.occupancy)}


def _vector_payload(v):
    terms = sorted(v.terms.items(), key=lambda kv: kv[0].occupancy)
    return [
        {"monomial": _monomial_payload(mono), "coeff": qstr(c)}
        for mono, c in terms
        if c
    ]


def _wedge_monomial(charge, occupancy):
    try:
        return WedgeMonomial(charge, occupancy)
    except AssertionError:
        raise ValueError("occupancy would have positive degree") from None


def cmd_basis(cfg, args):
    geom = cfg.geometry_object()
    weight = cfg.weight if args.weight is None else args.weight
    lo, hi = cfg.window
    degrees = [args.n] if args.n is not None else list(range(lo, hi + 1))
    points = [args.p] if args.p is not None else list(geom.point_indices())
    elements = []
    for n in degrees:
        for p in points:
            f = make_basis(geom, weight, n, p)
            orders = {
                f"P{i + 1}": f.form_order_at(pt)
                for i, pt in enumerate(geom.punctures)
            }
            orders["INFINITY"] = basis_order_at_infinity(geom, weight, n)
            elements.append(
                {
                    "n": n,
                    "p": p,
                    "function": rational_string(f.to_rational()),
                    "orders": orders,
                }
            )
    payload = {
        "geometry": _geometry_payload(cfg),
        "weight": weight,
        "elements": elements,
    }
    _emit(payload, args.out)
    return 0


def cmd_pair(cfg, args):
    geom = cfg.geometry_object()
    lam1, n, p = _parse_ints(args.left, 3, "--left")
    lam2, m, r = _parse_ints(args.right, 3, "--right")
    value = kn_pairing(make_basis(geom, lam1, n, p), make_basis(geom, lam2, m, r))
    payload = {
        "geometry": _geometry_payload(cfg),
        "left": {"weight": lam1, "n": n, "p": p},
        "right": {"weight": lam2, "m": m, "r": r},
        "value": qstr(value),
    }
    _emit(payload, args.out)
    return 0


def cmd_mult(cfg, args):
    geom = cfg.geometry_object()
    exp = multiply_basis(geom, args.n, args.p, args.m, args.r)
    payload = {
        "geometry": _geometry_payload(cfg),
        "left": {"n": args.n, "p": args.p},
        "right": {"m": args.m, "r": args.r},
        "coefficients": _expansion_payload(exp),
    }
    _emit(payload, args.out)
    return 0


def cmd_bracket(cfg, args):
    geom = cfg.geometry_object()
    exp = bracket_basis(geom, args.n, args.p, args.m, args.r)
    payload = {
        "geometry": _geometry_payload(cfg),
        "left": {"n": args.n, "p": args.p},
        "right": {"m": args.m, "r": args.r},
        "coefficients": _expansion_payload(exp),
    }
    _emit(payload, args.out)
    return 0


def cmd_cocycle(cfg, args):
    geom = cfg.geometry_object()
    if args.kind == "function":
        value = gamma_A_basis(geom, args.n, args.p, args.m, args.r)
    elif args.kind == "vector":
        value = gamma_L_basis(
            geom, args.n, args.p, args.m, args.r, cfg.projective_connection()
        )
    else:
        value = gamma_mix_basis(
            geom, args.n, args.p, args.m, args.r, cfg.affine_connection()
        )
    payload = {
        "geometry": _geometry_payload(cfg),
        "kind": args.kind,
        "left": {"n": args.n, "p": args.p},
        "right": {"m": args.m, "r": args.r},
        "connections": {"R": cfg.projective, "T": cfg.affine},
        "value": qstr(value),
    }
    _emit(payload, args.out)
    return 0


def cmd_wedge_act(cfg, args):
    rep = cfg.representation()
    charge = cfg.charge if args.charge is None else args.charge
    mono = _wedge_monomial(charge, _parse_occupancy(args.occupancy))
    v = WedgeVector.monomial(mono)
    n, p = _parse_ints(args.index, 2, "--index")
    if args.op == "current":
        x = _matrix_by_name(rep.tag, rep.size, args.x)
        op = _basis_current_op(rep, x, n, p)
    else:
        op = _basis_field_op(rep, n, p)
    result = wedge_apply(op, v)
    payload = {
        "geometry": _geometry_payload(cfg),
        "op": args.op,
        "x": args.x if args.op == "current" else None,
        "index": {"n": n, "p": p},
        "input": _monomial_payload(mono),
        "result": _vector_payload(result),
    }
    _emit(payload, args.out)
    return 0


def cmd_sugawara(cfg, args):
    rep = cfg.representation()
    charge = cfg.charge if args.charge is None else args.charge
    k, r = _parse_ints(args.mode, 2, "--mode")
    ctx = sugawara_context(rep, charge=charge)
    mono = _wedge_monomial(charge, _parse_occupancy(args.occupancy))
    result = apply_sugawara(ctx, k, r, WedgeVector.monomial(mono))
    payload = {
        "geometry": _geometry_payload(cfg),
        "mode": {"k": k, "r": r},
        "parts": [
            {"level": qstr(part.level), "kappa": qstr(part.kappa)}
            for part in ctx.parts
        ],
        "input": _monomial_payload(mono),
        "result": _vector_payload(result),
    }
    _emit(payload, args.out)
    return 0


def _candidate_payload(cand):
    return {
        "kind": cand.kind,
        "window": list(cand.window),
        "coefficients": {str(m): qstr(v) for m, v in cand.coefficients},
    }


def _casimir_gamma(cfg, source):
    geom = cfg.geometry_object()
    if source == "geometric":
        return mixing_gamma_geometric(geom, connection=cfg.affine_connection())
    return wedge_mixing_gamma(cfg.representation(), cfg.charge)


def cmd_casimir(cfg, args):
    gamma = _casimir_gamma(cfg, args.source)
    payload = {
        "geometry": _geometry_payload(cfg),
        "source": args.source,
        "window": list(cfg.window),
    }
    if args.extend:
        coeffs = {}
        for piece in args.extend.split(","):
            key, _, value = piece.partition(":")
            coeffs[int(key)] = Q(value)
        cand = gamma_extend(coeffs, gamma, cfg.window[1])
        payload["candidate"] = _candidate_payload(cand)
    else:
        report = casimir_solve(gamma, cfg.window)
        payload["candidates"] = [_candidate_payload(c) for c in report.candidates]
        payload["degenerate"] = list(report.degenerate)
    _emit(payload, args.out)
    return 0


def cmd_verify(cfg, args):
    geom = cfg.geometry_object()
    records = run_suite(args.suite, cfg)
    bounds = measure_bounds(geom, cfg.window)
    projective = cfg.projective_connection()
    affine = cfg.affine_connection()
    locality = {}
    for name, gamma, weights in (
        ("function", lambda f, g: cocycle_A(f, g), (0, 0)),
        ("vector", lambda f, g: cocycle_L(f, g, projective), (-1, -1)),
        ("mixed", lambda f, g: cocycle_mix(f, g, affine), (-1, 0)),
    ):
        window = check_locality(geom, gamma, weights, cfg.window)
        locality[name] = [window.M1, window.M2] if window else None
    payload = {
        "geometry": _geometry_payload(cfg),
        "algebra": cfg.algebra,
        "suite": args.suite,
        "bounds": {"K": bounds[0], "L": bounds[1], "M": bounds[2]},
        "locality": locality,
        "checks": [
            {"name": r.name, "status": r.status, "witness": r.witness}
            for r in records
        ],
    }
    _emit(payload, args.out)
    return 1 if any(r.status == FAIL for r in records) else 0


def _export_structure(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    product, bracket, action = {}, {}, {}
    for n in range(lo, hi + 1):
        for p in geom.point_indices():
            for m in range(lo, hi + 1):
                for r in geom.point_indices():
                    key = f"{n},{p};{m},{r}"
                    exp = _expansion_payload(multiply_basis(geom, n, p, m, r))
                    if exp:
                        product[key] = exp
                    exp = _expansion_payload(bracket_basis(geom, n, p, m, r))
                    if exp:
                        bracket[key] = exp
                    exp = _expansion_payload(lie_basis(geom, 0, n, p, m, r))
                    if exp:
                        action[key] = exp
    return {"product": product, "bracket": bracket, "action": action}


def _export_cocycles(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    projective = cfg.projective_connection()
    affine = cfg.affine_connection()
    tables = {"function": {}, "vector": {}, "mixed": {}}
    for n in range(lo, hi + 1):
        for p in geom.point_indices():
            for m in range(lo, hi + 1):
                for r in geom.point_indices():
                    key = f"{n},{p};{m},{r}"
                    value = gamma_A_basis(geom, n, p, m, r)
                    if value:
                        tables["function"][key] = qstr(value)
                    value = gamma_L_basis(geom, n, p, m, r, projective)
                    if value:
                        tables["vector"][key] = qstr(value)
                    value = gamma_mix_basis(geom, n, p, m, r, affine)
                    if value:
                        tables["mixed"][key] = qstr(value)
    tables["connections"] = {"R": cfg.projective, "T": cfg.affine}
    return tables


def _export_sugawara(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    table = {}
    for k in range(lo, hi + 1):
        for r in geom.point_indices():
            for n in range(lo, hi + 1):
                for p in geom.point_indices():
                    for m in range(lo, hi + 1):
                        for s in geom.point_indices():
                            value = sugawara_coeff(geom, k, r, n, p, m, s)
                            if value:
                                table[f"{k},{r};{n},{p};{m},{s}"] = qstr(value)
    return {"coefficients": table}


def _export_casimir(cfg):
    payload = {}
    for source in ("geometric", "module"):
        if source == "module" and cfg.geometry_object().npoints != 1:
            payload[source] = None
            continue
        report = casimir_solve(_casimir_gamma(cfg, source), cfg.window)
        payload[source] = {
            "candidates": [_candidate_payload(c) for c in report.candidates],
            "degenerate": list(report.degenerate),
        }
    return payload


def cmd_export(cfg, args):
    builders = {
        "structure-table": _export_structure,
        "cocycle-table": _export_cocycles,
        "sugawara-coeffs": _export_sugawara,
        "casimir-basis": _export_casimir,
    }
    payload = builders[args.what](cfg)
    payload["geometry"] = _geometry_payload(cfg)
    payload["window"] = list(cfg.window)
    _emit(payload, args.out)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="knalg",
        description="exact computer algebra for multipoint function, vector "
        "field and current algebras on the sphere",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="path to a JSON job configuration")
        p.add_argument("--out", help="write the JSON result to this path")

    p = sub.add_parser("basis", help="basis elements with their order tables")
    common(p)
    p.add_argument("-n", type=int, default=None, help="single degree (default: window)")
    p.add_argument("-p", type=int, default=None, help="single point index (default: all)")
    p.add_argument("--weight", type=int, default=None, help="override the configured weight")

    p = sub.add_parser("pair", help="duality pairing of two basis elements")
    common(p)
    p.add_argument("--left", required=True, help="weight,degree,point")
    p.add_argument("--right", required=True, help="weight,degree,point")

    p = sub.add_parser("mult", help="product of two degree-indexed functions")
    common(p)
    for name in ("n", "p", "m", "r"):
        p.add_argument(name, type=int)

    p = sub.add_parser("bracket", help="bracket of two degree-indexed vector fields")
    common(p)
    for name in ("n", "p", "m", "r"):
        p.add_argument(name, type=int)

    p = sub.add_parser("cocycle", help="geometric cocycle value on basis elements")
    common(p)
    p.add_argument("--kind", choices=("function", "vector", "mixed"), default="function")
    for name in ("n", "p", "m", "r"):
        p.add_argument(name, type=int)

    p = sub.add_parser("wedge-act", help="apply a current or field operator to a monomial")
    common(p)
    p.add_argument("--op", choices=("current", "field"), default="current")
    p.add_argument("--x", default="I", help="matrix name: I, H, E, F, or Eij")
    p.add_argument("--index", default="0,1", help="degree,point of the operator")
    p.add_argument("--charge", type=int, default=None)
    p.add_argument("--occupancy", default="", help="comma-separated occupied rows")

    p = sub.add_parser("sugawara", help="apply a mode of the quadratic current expression")
    common(p)
    p.add_argument("--mode", default="0,1", help="degree,point of the mode")
    p.add_argument("--charge", type=int, default=None)
    p.add_argument("--occupancy", default="", help="comma-separated occupied rows")

    p = sub.add_parser("casimir", help="solve or extend the mixing-cocycle system")
    common(p)
    p.add_argument("--source", choices=("geometric", "module"), default="geometric")
    p.add_argument("--extend", default=None, help="prescribed coefficients k:value,...")

    p = sub.add_parser("verify", help="run a verification suite")
    common(p)
    p.add_argument("--suite", choices=_SUITE_CHOICES, default="all")

    p = sub.add_parser("export", help="write a deterministic table")
    common(p)
    p.add_argument("--what", choices=_EXPORT_CHOICES, required=True)

    return parser


_HANDLERS = {
    "basis": cmd_basis,
    "pair": cmd_pair,
    "mult": cmd_mult,
    "bracket": cmd_bracket,
    "cocycle": cmd_cocycle,
    "wedge-act": cmd_wedge_act,
    "sugawara": cmd_sugawara,
    "casimir": cmd_casimir,
    "verify": cmd_verify,
    "export": cmd_export,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _load_config(args.config)
        return _HANDLERS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
