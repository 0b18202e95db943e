#!/usr/bin/env python3
"""Cross-check the pattern classifier against raw conditional independence.

The classifier never looks at conditional distributions — it inverts the
covariance once and reads block supports off the precision matrix.  The
oracle goes the other way: it evaluates partial covariances

    cov(x_a, x_b | x_S) = C_ab - C_aS C_SS^-1 C_Sb

for every independence statement a class implies, and never inverts the
full matrix.  The two must agree; this script shows them agreeing, first
on single queries you can check by hand, then over a batch of randomly
generated laws from each class.
"""

import argparse
from collections import Counter

import numpy as np

from cmseq.blocks import ConditioningSide, IndexInterval
from cmseq.classify import full_report
from cmseq.fixtures import ar1_law, cyclic_example_law
from cmseq.models import LawClass, random_law
from cmseq.oracle import (
    oracle_cm_interval,
    oracle_markov,
    oracle_reciprocal,
    partial_covariance,
)


def single_queries():
    ar1 = ar1_law(3)
    cov = ar1.covariance
    pc = partial_covariance(cov, [0], [2], [1])
    print("AR(1):   cov(x_0, x_2 | x_1)      =", f"{pc.item():+.6f}   (Markov screen)")
    cyc = cyclic_example_law()
    pc = partial_covariance(cyc.covariance, [0], [3], [1, 2])
    print("cyclic:  cov(x_0, x_3 | x_1, x_2) =", f"{pc.item():+.6f}   (endpoint coupling)")
    # 0.3 / 3.91 by hand: invert the 2x2 precision block left after
    # conditioning on the interior.
    print("         hand value 0.3/3.91      =", f"{0.3 / 3.91:+.6f}")
    print()
    print("oracle verdicts for the cyclic law:")
    print("  markov:    ", oracle_markov(cyc).holds)
    print("  reciprocal:", oracle_reciprocal(cyc).holds)
    worst = oracle_markov(cyc).worst_query
    print(f"  markov's worst query: x_{worst.target} vs dropped {worst.dropped}"
          f" given {worst.retained}")
    print()


def batch(per_class, base_seed):
    sides = (ConditioningSide.FIRST, ConditioningSide.LAST)
    agree = Counter()
    total = Counter()
    for law_class in LawClass:
        for i in range(per_class):
            seed = base_seed + i
            law = random_law(law_class, 3 + (seed % 4), 1 + (seed % 2), seed=seed)
            rep = full_report(law)
            full = IndexInterval(0, law.n_last)
            pairs = [
                (rep.markov.conforms, oracle_markov(law).holds),
                (rep.reciprocal.conforms, oracle_reciprocal(law).holds),
                (rep.cm_l.conforms, oracle_cm_interval(law, full, sides[1]).holds),
                (rep.cm_f.conforms, oracle_cm_interval(law, full, sides[0]).holds),
            ]
            pairs += [
                (e.witness.conforms, oracle_cm_interval(law, e.interval, e.side).holds)
                for e in rep.interval_cm
            ]
            total[law_class.value] += len(pairs)
            agree[law_class.value] += sum(a == b for a, b in pairs)
    print(f"classifier/oracle agreement over {per_class} laws per class:")
    for name in total:
        print(f"  {name:<10} {agree[name]}/{total[name]} flags agree")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--per-class", type=int, default=20)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()
    np.set_printoptions(precision=4, suppress=True)
    single_queries()
    batch(args.per_class, args.seed)


if __name__ == "__main__":
    main()
