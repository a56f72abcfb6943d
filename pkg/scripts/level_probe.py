"""Probe the central constants of the fermion representation.

Three measurements on the semi-infinite wedge module:
  1. the sector constant alpha with [x(A), y(B)] - (xy)(AB) defect
     compared against tr(xy) gamma(A, B) over a window of basis pairs;
  2. the level c and dual Coxeter-style shift kappa that the quadratic
     current expression needs, per algebra and geometry;
  3. the charge dependence of the field/current mixing cocycle: the
     scalar [Delta_e, a(A)] on the charge-m sector drifts linearly in m
     because the per-sector normal ordering differs by a coboundary.

Usage: python3 scripts/level_probe.py [--span 3] [--charges -2 3]
"""
import argparse
import sys

from knalg import (
    GL,
    GL1,
    SL,
    CurrentElement,
    DgElement,
    Geometry,
    KNExpansion,
    Q,
    RepresentationData,
    extract_cocycle,
    gamma_A_basis,
    matrix_basis,
    sugawara_context,
    wedge_mixing_gamma,
)

ALGEBRAS = (("gl1", GL1, 1), ("sl2", SL, 2), ("gl2", GL, 2))
GEOMETRIES = (Geometry((Q(0),)), Geometry((Q(0), Q(1))))


def probe_alpha(rep, span):
    geom = rep.geometry
    zero_field = KNExpansion.zero(geom, -1)
    alpha = None
    for x in matrix_basis(rep.tag, rep.size):
        for y in matrix_basis(rep.tag, rep.size):
            trace = x.mul(y).trace()
            for n in range(-span, span + 1):
                for p in geom.point_indices():
                    for m in range(-span, span + 1):
                        for r in geom.point_indices():
                            shape = trace * gamma_A_basis(geom, n, p, m, r)
                            got = extract_cocycle(
                                DgElement(CurrentElement.monomial(geom, x, n, p), zero_field),
                                DgElement(CurrentElement.monomial(geom, y, m, r), zero_field),
                                rep,
                                0,
                                checks=3,
                            )
                            if shape == 0:
                                assert got == 0, (x, y, n, p, m, r)
                                continue
                            ratio = got / shape
                            if alpha is None:
                                alpha = ratio
                            assert ratio == alpha, (x, y, n, p, m, r)
    return alpha


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--span", type=int, default=3, help="degree window half-width")
    parser.add_argument(
        "--charges", type=int, nargs=2, default=(-2, 3), help="charge range lo hi"
    )
    args = parser.parse_args(argv)

    for geom in GEOMETRIES:
        print(f"geometry with N = {geom.npoints}")
        for label, tag, size in ALGEBRAS:
            rep = RepresentationData.fundamental(geom, tag, size)
            alpha = probe_alpha(rep, args.span)
            ctx = sugawara_context(rep)
            parts = ", ".join(
                f"c = {part.level}, kappa = {part.kappa}" for part in ctx.parts
            )
            print(f"  {label}: alpha = {alpha}; quadratic parts: {parts}")

    print()
    print("mixing cocycle per charge sector (one point, rank 1):")
    rep = RepresentationData.fundamental(GEOMETRIES[0], GL1, 1)
    lo, hi = args.charges
    for n in (1, 2, 3):
        row = []
        for charge in range(lo, hi + 1):
            gamma = wedge_mixing_gamma(rep, charge)
            row.append(f"m={charge}: {gamma(n, n)}")
        print(f"  gamma(e_{n}, A_-{n}) by sector: " + "  ".join(row))
    return 0


if __name__ == "__main__":
    sys.exit(main())
