"""Verification suites: each runs the checkable identities of one
module on a configured geometry and reports machine-readable records.

A record is never silently weakened: anything that cannot be decided
inside the configured windows comes back INCONCLUSIVE.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field

from .affine import (
    GL,
    GL1,
    SL,
    AffineElement,
    CurrentElement,
    DgElement,
    MatrixElement,
    affine_bracket,
    dual_basis_pair,
    identity_matrix,
    matrix_basis,
)
from .basis import Geometry, KNExpansion, kn_pairing, make_basis
from .casimir import (
    FAIL,
    INCONCLUSIVE,
    PASS,
    DeltaOperator,
    casimir_solve,
    check_delta_commutation,
    check_pairwise_scalar,
    gamma_extend,
    mixing_gamma_geometric,
    wedge_mixing_gamma,
)
from .cocycles import (
    MIXED_SECTOR,
    VECTOR_SECTOR,
    AffineConnection,
    DOpElement,
    ProjectiveConnection,
    check_cocycle_identity,
    check_locality,
    cocycle_A,
    cocycle_L,
    cocycle_mix,
    dop_bracket,
    dop_cocycle,
    find_coboundary,
    gamma_A_basis,
    gamma_L_basis,
    gamma_mix_basis,
)
from .expr import parse_rational
from .scalars import Q, qstr
from .structure import (
    bracket_basis,
    bracket_form,
    lie_basis,
    measure_bounds,
    multiply_basis,
)
from .sugawara import (
    check_fundamental,
    coefficient_window,
    sugawara_coeff,
    sugawara_context,
)
from .wedge import (
    RepresentationData,
    WedgeVector,
    enumerate_monomials,
    extract_cocycle,
)

SUITE_NAMES = (
    "duality",
    "structure",
    "cocycles",
    "affine",
    "wedge",
    "sugawara",
    "casimir",
)

_ALGEBRAS = {"gl1": (GL1, 1), "sl2": (SL, 2), "gl2": (GL, 2)}


class ConfigError(ValueError):
    """The configuration text could not be parsed into typed values.
    Distinct from invariant violations on values that did parse."""


@dataclass(frozen=True)
class JobConfig:
    """Everything a command needs, parsed once and validated."""

    geometry: tuple = (Q(0),)
    weight: int = 0
    window: tuple = (-4, 4)
    algebra: str = "gl1"
    rank: int = 1
    dim_v: int = 0
    projective: str = "0"
    affine: str = "0"
    connection_form: tuple = ()
    depth: int = 6
    charge: int = 0
    seed: int = 0
    samples: int = 30
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(set(self.geometry)) != len(self.geometry):
            raise ValueError("punctures must be distinct")
        if not self.geometry:
            raise ValueError("at least one puncture")
        lo, hi = self.window
        if lo > hi:
            raise ValueError("window low end exceeds high end")
        if self.algebra not in _ALGEBRAS:
            raise ValueError(f"unknown algebra {self.algebra!r}")
        if self.rank < 1:
            raise ValueError("rank must be positive")

    @classmethod
    def from_dict(cls, data):
        try:
            data = dict(data)
            known = {}
            if "geometry" in data:
                known["geometry"] = tuple(Q(str(v)) for v in data.pop("geometry"))
            for name in (
                "weight",
                "rank",
                "dim_v",
                "depth",
                "charge",
                "seed",
                "samples",
            ):
                if name in data:
                    known[name] = int(data.pop(name))
            if "window" in data:
                lo, hi = data.pop("window")
                known["window"] = (int(lo), int(hi))
            for name in ("algebra", "projective", "affine"):
                if name in data:
                    known[name] = str(data.pop(name))
            if "connection_form" in data:
                known["connection_form"] = tuple(
                    tuple(str(s) for s in row) for row in data.pop("connection_form")
                )
            for text in known.get("projective", "0"), known.get("affine", "0"):
                parse_rational(text)
            for row in known.get("connection_form", ()):
                for entry in row:
                    parse_rational(entry)
        except ConfigError:
            raise
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad configuration value: {exc}") from exc
        if data:
            known["params"] = data
        return cls(**known)

    def geometry_object(self):
        return Geometry(self.geometry)

    def algebra_pair(self):
        return _ALGEBRAS[self.algebra]

    def projective_connection(self):
        return ProjectiveConnection(
            self.geometry_object(), parse_rational(self.projective)
        )

    def affine_connection(self):
        return AffineConnection(self.geometry_object(), parse_rational(self.affine))

    def representation(self):
        geom = self.geometry_object()
        tag, size = self.algebra_pair()
        connection = None
        if self.connection_form:
            from .basis import form_from_rational

            connection = tuple(
                tuple(
                    form_from_rational(geom, 1, parse_rational(entry)) for entry in row
                )
                for row in self.connection_form
            )
        return RepresentationData.fundamental(
            geom, tag, size, rank=self.rank, connection_form=connection
        )


@dataclass(frozen=True)
class CheckRecord:
    name: str
    status: str
    witness: str


def _record(name, ok, witness_pass, witness_fail=None):
    if ok:
        return CheckRecord(name, PASS, witness_pass)
    return CheckRecord(name, FAIL, witness_fail or witness_pass)


def suite_duality(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    records = []
    for lam in (-1, 0, 1, 2):
        checked = 0
        bad = None
        for n in range(lo, hi + 1):
            for p in geom.point_indices():
                f = make_basis(geom, lam, n, p)
                for m in range(lo, hi + 1):
                    for r in geom.point_indices():
                        value = kn_pairing(f, make_basis(geom, 1 - lam, m, r))
                        want = Q(1) if (m == -n and r == p) else Q(0)
                        checked += 1
                        if value != want and bad is None:
                            bad = (n, p, m, r, value)
        records.append(
            _record(
                f"duality weight {lam}",
                bad is None,
                f"{checked} pairs are exactly delta",
                f"first failure at {bad}",
            )
        )
    return records


def suite_structure(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    records = []
    bounds = measure_bounds(geom, cfg.window)
    records.append(
        CheckRecord(
            "almost-grading bounds",
            PASS,
            f"measured (K, L, M) = {bounds}, stable under window growth",
        )
    )
    if geom.npoints == 1:
        ok = True
        for n in range(lo, hi + 1):
            for m in range(lo, hi + 1):
                if dict(multiply_basis(geom, n, 1, m, 1).coeffs) != {(n + m, 1): Q(1)}:
                    ok = False
                if dict(bracket_basis(geom, n, 1, m, 1).coeffs) != (
                    {(n + m, 1): Q(m - n)} if m != n else {}
                ):
                    ok = False
                want = {(n + m, 1): Q(m)} if m != 0 else {}
                if dict(lie_basis(geom, 0, n, 1, m, 1).coeffs) != want:
                    ok = False
        records.append(
            _record(
                "classical recovery",
                ok,
                "products, brackets and actions match the Laurent/Witt formulas",
            )
        )
    rng = random.Random(cfg.seed)
    degrees = [
        (rng.randint(lo, hi), rng.randint(1, geom.npoints)) for _ in range(3 * 8)
    ]
    ok = True
    for i in range(0, len(degrees), 3):
        (n, p), (m, r), (k, s) = degrees[i : i + 3]
        total = {}

        def add_bracket(a, pa, b, pb, scale, into):
            for key, c in bracket_basis(geom, a, pa, b, pb).coeffs.items():
                into[key] = into.get(key, Q(0)) + scale * c

        inner = bracket_basis(geom, m, r, k, s)
        for (j, pj), c in inner.coeffs.items():
            add_bracket(n, p, j, pj, c, total)
        inner = bracket_basis(geom, k, s, n, p)
        for (j, pj), c in inner.coeffs.items():
            add_bracket(m, r, j, pj, c, total)
        inner = bracket_basis(geom, n, p, m, r)
        for (j, pj), c in inner.coeffs.items():
            add_bracket(k, s, j, pj, c, total)
        if any(v != 0 for v in total.values()):
            ok = False
    records.append(
        _record("vector field jacobi", ok, "8 sampled triples sum to zero exactly")
    )
    return records


def suite_cocycles(cfg):
    geom = cfg.geometry_object()
    lo, hi = cfg.window
    records = []
    if geom.npoints == 1:
        ok = True
        for n in range(-4, 5):
            if gamma_A_basis(geom, n, 1, -n, 1) != -n:
                ok = False
            if gamma_L_basis(geom, n, 1, -n, 1) != Q(n) ** 3 - Q(n):
                ok = False
            if gamma_mix_basis(geom, n, 1, -n, 1) != Q(n) * Q(n + 1):
                ok = False
        records.append(
            _record(
                "classical cocycle values",
                ok,
                "function, field and mixed values match the closed forms",
            )
        )
    projective = cfg.projective_connection()
    affine = cfg.affine_connection()
    rng = random.Random(cfg.seed)

    def rand_field():
        return make_basis(geom, -1, rng.randint(lo, hi), rng.randint(1, geom.npoints))

    def rand_fun():
        return make_basis(geom, 0, rng.randint(lo, hi), rng.randint(1, geom.npoints))

    triples = [
        (rand_field(), rand_field(), rand_field()) for _ in range(cfg.samples)
    ]
    ok = check_cocycle_identity(
        lambda e, f: cocycle_L(e, f, projective), bracket_form, triples
    )
    records.append(
        _record(
            "vector field cocycle identity",
            ok,
            f"{cfg.samples} sampled triples",
        )
    )
    dop_triples = [
        (
            DOpElement(rand_fun(), rand_field()),
            DOpElement(rand_fun(), rand_field()),
            DOpElement(rand_fun(), rand_field()),
        )
        for _ in range(cfg.samples)
    ]
    ok = check_cocycle_identity(
        lambda x, y: dop_cocycle(x, y, projective, affine), dop_bracket, dop_triples
    )
    records.append(
        _record(
            "operator algebra cocycle identity",
            ok,
            f"{cfg.samples} sampled triples with function and field parts",
        )
    )
    for name, gamma, weights in (
        ("function", lambda f, g: cocycle_A(f, g), (0, 0)),
        ("vector field", lambda f, g: cocycle_L(f, g, projective), (-1, -1)),
        ("mixed", lambda f, g: cocycle_mix(f, g, affine), (-1, 0)),
    ):
        window = check_locality(geom, gamma, weights, cfg.window)
        records.append(
            _record(
                f"locality of the {name} cocycle",
                window is not None,
                f"support window {window}, stable under scan growth",
                "no finite support window found",
            )
        )
    second_r = ProjectiveConnection(
        geom, parse_rational("1") / (parse_rational("z") - geom.punctures[0])
    )
    phi = find_coboundary(
        geom,
        VECTOR_SECTOR,
        lambda f, g: cocycle_L(f, g, projective),
        lambda f, g: cocycle_L(f, g, second_r),
        cfg.window,
    )
    records.append(
        _record(
            "projective connection independence",
            phi is not None,
            "difference of the two R-cocycles is a solvable coboundary",
        )
    )
    second_t = AffineConnection(
        geom, parse_rational("1") / (parse_rational("z") - geom.punctures[0])
    )
    phi = find_coboundary(
        geom,
        MIXED_SECTOR,
        lambda f, g: cocycle_mix(f, g, affine),
        lambda f, g: cocycle_mix(f, g, second_t),
        cfg.window,
    )
    records.append(
        _record(
            "affine connection independence",
            phi is not None,
            "difference of the two T-cocycles is a solvable coboundary",
        )
    )
    return records


def _random_current(rng, geom, tag, size, window):
    base = matrix_basis(tag, size)
    lo, hi = window
    cur = CurrentElement.zero(geom, tag, size)
    for _ in range(rng.randint(1, 3)):
        x = base[rng.randrange(len(base))].scale(Q(rng.randint(-3, 3)))
        if x.is_zero():
            continue
        cur = cur + CurrentElement.monomial(
            geom, x, rng.randint(lo, hi), rng.randint(1, geom.npoints)
        )
    return AffineElement(cur, Q(rng.randint(-2, 2)))


def suite_affine(cfg):
    geom = cfg.geometry_object()
    tag, size = cfg.algebra_pair()
    rng = random.Random(cfg.seed)
    records = []
    ok = True
    for _ in range(cfg.samples):
        x, y, z = (
            _random_current(rng, geom, tag, size, cfg.window) for _ in range(3)
        )
        total = affine_bracket(affine_bracket(x, y), z)
        total = total + affine_bracket(affine_bracket(y, z), x)
        total = total + affine_bracket(affine_bracket(z, x), y)
        if not total.is_zero():
            ok = False
    records.append(
        _record(
            f"jacobi identity in the {cfg.algebra} extension",
            ok,
            f"{cfg.samples} randomized triples, central terms included",
        )
    )
    ok = True
    for _ in range(cfg.samples // 2):
        x = _random_current(rng, geom, tag, size, cfg.window)
        y = _random_current(rng, geom, tag, size, cfg.window)
        left = affine_bracket(x, y)
        right = affine_bracket(y, x)
        if not (left + right).is_zero():
            ok = False
    records.append(_record("antisymmetry", ok, "bracket is antisymmetric"))
    basis, duals = dual_basis_pair(tag, size)
    ok = all(
        u.mul(v).trace() == (Q(1) if i == j else Q(0))
        for i, u in enumerate(basis)
        for j, v in enumerate(duals)
    )
    records.append(
        _record("trace-form dual bases", ok, f"{len(basis)} basis elements paired")
    )
    return records


def suite_wedge(cfg):
    geom = cfg.geometry_object()
    rep = cfg.representation()
    records = []
    zero_field = KNExpansion.zero(geom, -1)
    base = matrix_basis(rep.tag, rep.size)
    alpha = None
    ok = True
    span = 2
    for x in base:
        for y in base:
            trace = x.mul(y).trace()
            for n in range(-span, span + 1):
                for p in geom.point_indices():
                    for m in range(-span, span + 1):
                        for r in geom.point_indices():
                            got = extract_cocycle(
                                DgElement(
                                    CurrentElement.monomial(geom, x, n, p), zero_field
                                ),
                                DgElement(
                                    CurrentElement.monomial(geom, y, m, r), zero_field
                                ),
                                rep,
                                cfg.charge,
                                checks=2,
                            )
                            expected_shape = trace * gamma_A_basis(geom, n, p, m, r)
                            if expected_shape == 0:
                                if got != 0:
                                    ok = False
                                continue
                            ratio = got / expected_shape
                            if alpha is None:
                                alpha = ratio
                            elif ratio != alpha:
                                ok = False
    records.append(
        _record(
            "current cocycle proportional to the trace form",
            ok and alpha is not None,
            f"single sector constant alpha = {qstr(alpha)}",
        )
    )
    ok = True
    counts = []
    for d in range(0, min(cfg.depth, 6) + 1):
        monos = enumerate_monomials(cfg.charge, -d)
        counts.append(len(monos))
        if any(m.degree != -d for m in monos):
            ok = False
    if not enumerate_monomials(cfg.charge, 1) == []:
        ok = False
    records.append(
        _record(
            "degree bound and finite counts",
            ok,
            f"no positive degrees; counts per degree {counts}",
        )
    )
    return records


def suite_sugawara(cfg):
    geom = cfg.geometry_object()
    rep = cfg.representation()
    records = []
    ok = True
    for k in range(-2, 3):
        lov, hiv = coefficient_window(geom, k)
        for n in range(-3, 4):
            for m in range(-3, 4):
                for p in geom.point_indices():
                    for s in geom.point_indices():
                        for r in geom.point_indices():
                            value = sugawara_coeff(geom, k, r, n, p, m, s)
                            if value and not lov <= n + m <= hiv:
                                ok = False
                            if geom.npoints == 1 and p == s == r == 1:
                                want = Q(1) if n + m == k else Q(0)
                                if value != want:
                                    ok = False
    records.append(
        _record(
            "coefficient support window",
            ok,
            "order counting confines every nonzero coefficient",
        )
    )
    ctx = sugawara_context(rep, charge=cfg.charge)
    levels = ", ".join(
        f"c = {qstr(part.level)}, kappa = {qstr(part.kappa)}" for part in ctx.parts
    )
    samples = [
        WedgeVector.monomial(mono)
        for d in range(0, 3)
        for mono in enumerate_monomials(cfg.charge, -d)
    ]
    ok = True
    for ke in (-1, 0, 1):
        e = KNExpansion.basis(geom, -1, ke, 1)
        for na in (-1, 0, 1):
            A = KNExpansion.basis(geom, 0, na, 1)
            for x in matrix_basis(rep.tag, rep.size):
                if not check_fundamental(ctx, e, x, A, samples):
                    ok = False
    records.append(
        _record(
            "fundamental relation",
            ok,
            f"[T[e], x(A)] = x(e.A) on {len(samples)} vectors; {levels}",
        )
    )
    return records


def suite_casimir(cfg):
    geom = cfg.geometry_object()
    records = []
    if geom.npoints != 1:
        return [
            CheckRecord(
                "casimir solver",
                INCONCLUSIVE,
                "solver checks are defined for one marked point",
            )
        ]
    lo, hi = cfg.window
    gamma = mixing_gamma_geometric(geom)
    report = casimir_solve(gamma, cfg.window)
    diag_ok = all(gamma(k, k) == -Q(k) * Q(k + 1) for k in range(lo, hi + 1))
    ok = (
        diag_ok
        and report.degenerate == (-1,)
        and len(report.candidates) == 2
    )
    records.append(
        _record(
            "geometric mixed-cocycle system",
            ok,
            f"diagonal k(k+1); kernel dimension {len(report.candidates)}; "
            f"degenerate k = {list(report.degenerate)}",
        )
    )
    rep = RepresentationData.fundamental(geom, GL1, 1)
    module_gamma = wedge_mixing_gamma(rep, cfg.charge)
    report = casimir_solve(module_gamma, cfg.window)
    records.append(
        _record(
            "module mixed-cocycle system",
            report.degenerate == (-1,) and len(report.candidates) == 2,
            f"kernel dimension {len(report.candidates)}; "
            f"degenerate k = {list(report.degenerate)}",
        )
    )
    ctx = sugawara_context(rep, charge=cfg.charge)
    top = 2 * (cfg.depth + 4)
    cand = gamma_extend({0: Q(1)}, module_gamma, top)
    delta = DeltaOperator(ctx, cand)
    samples = [
        WedgeVector.monomial(mono)
        for d in range(0, 3)
        for mono in enumerate_monomials(cfg.charge, -d)
    ]
    commutation = check_delta_commutation(
        delta,
        identity_matrix(1, GL1),
        [(k, 1) for k in range(-3, 0)],
        samples,
        expect_zero=True,
    )
    records.append(
        CheckRecord(
            "extended zero mode annihilates negative currents",
            commutation.status,
            "; ".join(commutation.details) or f"{len(samples)} vectors, window {top}",
        )
    )
    rep2 = RepresentationData.fundamental(geom, SL, 2)
    ctx2 = sugawara_context(rep2)
    delta2 = DeltaOperator(ctx2, KNExpansion.basis(geom, -1, 1, 1))
    h = MatrixElement(((Q(1), Q(0)), (Q(0), Q(-1))), SL)
    e = MatrixElement(((Q(0), Q(1)), (Q(0), Q(0))), SL)
    samples2 = [
        WedgeVector.monomial(mono)
        for d in range(0, 2)
        for mono in enumerate_monomials(0, -d)
    ]
    ok = True
    for x in (h, e):
        rep_check = check_delta_commutation(
            delta2, x, [(k, 1) for k in range(-1, 2)], samples2, expect_zero=True
        )
        if rep_check.status != PASS:
            ok = False
    records.append(
        _record(
            "traceless currents commute with Delta",
            ok,
            "traceless x gives a vanishing obstruction",
        )
    )
    other = gamma_extend({-1: Q(1)}, module_gamma, top)
    pairwise = check_pairwise_scalar(
        delta, DeltaOperator(ctx, other), samples
    )
    records.append(
        CheckRecord(
            "pairwise scalar commutator",
            pairwise.status,
            f"shared scalar {qstr(pairwise.scalar)}"
            if pairwise.scalar is not None
            else "; ".join(pairwise.details),
        )
    )
    return records


_SUITES = {
    "duality": suite_duality,
    "structure": suite_structure,
    "cocycles": suite_cocycles,
    "affine": suite_affine,
    "wedge": suite_wedge,
    "sugawara": suite_sugawara,
    "casimir": suite_casimir,
}


def run_suite(name, cfg):
    """Records for one suite, or for every suite with name = "all"."""
    if name == "all":
        out = []
        for suite in SUITE_NAMES:
            out.extend(_SUITES[suite](cfg))
        return out
    if name not in _SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return _SUITES[name](cfg)
