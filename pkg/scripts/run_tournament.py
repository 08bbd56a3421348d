"""Round-robin of the built-in strategies under the tournament constants.

Usage: python scripts/run_tournament.py [--rounds N] [--seed S] [--grid I|II]
"""
import argparse

from doublegame import SocialParams, build_dg, example_grid, play_match, run_tournament
from doublegame.tournament import strategy_factory

BENCHMARKS = [
    ("ALLD vs ALLD", "ALLD", "ALLD"),
    ("selfish ALLC vs selfish ALLC", "ALLC@0", "ALLC@0"),
    ("SEG vs ALLC", "SEG", "ALLC"),
    ("fully social ALLD vs SEG", "ALLD@-1", "SEG"),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rounds", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--grid", choices=("I", "II"), default="II")
    args = ap.parse_args()

    params = SocialParams.tournament()
    dg, grid = build_dg(params), example_grid(params, args.grid)

    print("benchmarks")
    for title, a, b in BENCHMARKS:
        rec = play_match(strategy_factory(a)(), strategy_factory(b)(), dg, grid, rounds=args.rounds)
        print(f"  {title:<30} {float(rec.totals[0]):>8.2f} {float(rec.totals[1]):>8.2f}")

    res = run_tournament(["SEG", "ALLC", "ALLD", "TFT"], dg, grid, rounds=args.rounds, seed=args.seed)
    print()
    print(res.ranking_csv())


if __name__ == "__main__":
    main()
