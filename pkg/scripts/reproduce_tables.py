"""Print the region diagrams and the two worked type-grid examples.

Usage: python scripts/reproduce_tables.py [--out DIR]

With --out, also writes CSV tables and an SVG of the region diagram.
"""
import argparse
from pathlib import Path

from doublegame import (
    SocialParams,
    build_dg,
    completely_pure_regular,
    crossing_points,
    example_grid,
    region_diagram,
)
from doublegame.games import format_rational
from doublegame.render import ne_table_csv, region_svg


def print_diagram(diagram):
    nrows, ncols = len(diagram.gamma_segments), len(diagram.lambda_segments)
    for r in reversed(range(nrows)):
        cells = []
        for c in range(ncols):
            eqs = diagram.cell(r, c).equilibria
            cells.append(" ".join(f"({','.join(diagram.dg.g1.label(p))})" for p in eqs) or "-")
        print("  " + " | ".join(f"{x:<19}" for x in cells))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()

    params = SocialParams.tournament()
    b_lt_a = SocialParams.symmetric(5, 4, 2, 0, "7/2")
    for title, p in (("a < b (T=5 R=3 P=1 S=0 M=5/2)", params), ("b < a (T=5 R=4 P=2 S=0 M=7/2)", b_lt_a)):
        cp = crossing_points(p)
        print(f"regions, {title}: a={format_rational(cp.a1)} b={format_rational(cp.b1)} c={format_rational(cp.c1)}")
        print_diagram(region_diagram(build_dg(p)))
        print()

    dg = build_dg(params)
    for variant in ("I", "II"):
        grid = example_grid(params, variant)
        res = completely_pure_regular(dg, grid)
        verdict = res.certificate.label(dg) if res.certificate else "none"
        print(f"example {variant}: certificate {verdict}")
        print(ne_table_csv(dg, grid))
        if args.out:
            args.out.mkdir(parents=True, exist_ok=True)
            (args.out / f"example_{variant}.csv").write_text(ne_table_csv(dg, grid))
    if args.out:
        (args.out / "regions.svg").write_text(region_svg(region_diagram(dg)))
        print(f"wrote tables to {args.out}")


if __name__ == "__main__":
    main()
