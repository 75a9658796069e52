"""Bounded model search over random necessity formulas.

For each bound, reports how many formulas got a witness, how many exhausted
the search space, and the mean number of candidate models tried.
"""

import argparse
import random
import time
from fractions import Fraction

from wmlfca.core import Sort
from wmlfca.generators import FormulaShape, random_formula
from wmlfca.search import bounded_sat
from wmlfca.semantics import satisfies


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--formulas", type=int, default=100)
    ap.add_argument("--depth", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    rng = random.Random(args.seed)
    degrees = [Fraction(0), Fraction(1, 2), Fraction(1)]
    shape = FormulaShape(sufficiency=False)
    pool = [random_formula(rng, rng.choice([Sort.OBJECT, Sort.PROPERTY]), args.depth, degrees, shape=shape)
            for _ in range(args.formulas)]
    print(f"{'bounds':>7} {'found':>6} {'exhausted':>10} {'candidates':>11} {'seconds':>8}")
    for bounds in ((1, 1), (1, 2), (2, 2), (2, 3)):
        start = time.perf_counter()
        found = exhausted = tried = 0
        for phi in pool:
            res = bounded_sat([phi], phi.sort, *bounds)
            tried += res.candidates
            if res.found:
                assert satisfies(res.model, res.world, phi)
                found += 1
            else:
                exhausted += 1
        print(f"{bounds[0]}x{bounds[1]:<5} {found:>6} {exhausted:>10} {tried / len(pool):>11.1f} "
              f"{time.perf_counter() - start:>8.2f}")


if __name__ == "__main__":
    main()
