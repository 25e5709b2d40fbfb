"""Compare every cycle detector with the SCC oracle on seeded random graphs.

    python3 scripts/oracle_sweep.py --count 200 --seed 7 --workers 3
"""
import argparse
import random
import time
from collections import Counter

from parcheck.algorithms import CYCLE_ALGORITHMS, run
from parcheck.counterexample import validate_lasso
from parcheck.engine import Driver, EngineConfig
from parcheck.graph import generate_random_graph
from parcheck.scc import tarjan_oracle


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-n", type=int, default=1000)
    ap.add_argument("--workers", type=int, default=2)
    ap.add_argument("--driver", choices=["det", "par"], default="det")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    cfg = EngineConfig(workers=args.workers, buffer_capacity=16, driver=Driver(args.driver))
    verdicts = Counter()
    seconds = Counter()
    disagreements = 0
    for _ in range(args.count):
        n = rng.randint(1, args.max_n)
        g = generate_random_graph(n, rng.uniform(0.5, 3.0), rng.uniform(0.0, 0.2), rng.getrandbits(64))
        expected = tarjan_oracle(g).result
        verdicts[expected.value] += 1
        for alg in CYCLE_ALGORITHMS:
            t0 = time.perf_counter()
            v = run(g, alg, EngineConfig(workers=1) if alg == "ndfs" else cfg)
            seconds[alg] += time.perf_counter() - t0
            if v.result is not expected or (v.lasso and validate_lasso(v.lasso, g)):
                disagreements += 1
                print(f"MISMATCH {alg}: n={n} expected {expected.value} got {v.result.value}")
    print(f"{args.count} graphs {dict(verdicts)}, {disagreements} disagreements")
    for alg in CYCLE_ALGORITHMS:
        print(f"  {alg:<10} {seconds[alg]:7.2f} s")


if __name__ == "__main__":
    main()
