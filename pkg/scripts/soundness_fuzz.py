"""Randomized validity check of every axiom schema and both generalization
rules, then of the multi-relational axioms; optionally of a broken schema."""

import argparse
import sys
import time

from wmlfca.calculus import check_bm_axioms, soundness_fuzz


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--max-domain", type=int, default=4)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--mutant", action="store_true", help="also fuzz the deliberately broken schema")
    args = ap.parse_args(argv)

    start = time.perf_counter()
    rep = soundness_fuzz(args.trials, args.max_domain, seed=args.seed)
    print(f"axioms: {rep.instances} instances over {len(rep.per_schema)} schemas, "
          f"{rep.ug_nec_checks} + {rep.ug_suff_checks} generalization checks, "
          f"{len(rep.counterexamples)} counterexample(s) [{time.perf_counter() - start:.1f}s]")
    for name, count in sorted(rep.per_schema.items()):
        print(f"  {name:10} {count}")
    bm = check_bm_axioms(args.trials, seed=args.seed)
    print(f"multi-relational axioms: {bm.instances} instances, {len(bm.counterexamples)} counterexample(s)")
    for cx in (rep.counterexamples + bm.counterexamples)[:5]:
        print("  " + cx.describe())
    ok = rep.sound and bm.sound
    if args.mutant:
        mut = soundness_fuzz(args.trials, args.max_domain, ["CON1-unguarded"], seed=args.seed, stop_at_first=True)
        if mut.sound:
            print("broken schema survived; the fuzzer is too weak")
            ok = False
        else:
            print("broken schema refuted:\n  " + mut.counterexamples[0].describe())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
