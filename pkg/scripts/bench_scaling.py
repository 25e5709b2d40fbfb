"""Time parallel reachability on a generated counter model under several worker counts.

    python3 scripts/bench_scaling.py --size 80 --workers 1,2,4 --repeat 3
"""
import argparse
import json
import os

from parcheck.algorithms import run
from parcheck.automaton import product
from parcheck.cli import efficiency
from parcheck.engine import Driver, EngineConfig
from parcheck.lang import ModelSource, parse_model


def wheels_model(size: int, count: int = 3) -> str:
    names = "abcdefgh"[:count]
    lines = [f"var {x} : 0..{size - 1} init 0;" for x in names]
    for x in names:
        lines.append(f"process w{x} {{ locations t; init t; "
                     f"t -> t [{x} < {size - 1}] / {x} := {x} + 1; "
                     f"t -> t [{x} == {size - 1}] / {x} := 0; }}")
    lines.append("property { states 1; init 0; accepting 0; 0 -> 0 [true]; }")
    return "\n".join(lines)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--size", type=int, default=80, help="values per counter")
    ap.add_argument("--counters", type=int, default=3)
    ap.add_argument("--workers", default="1,2,4")
    ap.add_argument("--repeat", type=int, default=1)
    ap.add_argument("--buffer", type=int, default=1024)
    ap.add_argument("--write-model", help="also save the generated model text")
    ap.add_argument("--json-out")
    args = ap.parse_args()

    text = wheels_model(args.size, args.counters)
    if args.write_model:
        with open(args.write_model, "w") as fh:
            fh.write(text + "\n")
    model = parse_model(text)
    source = product(ModelSource(model), model.property)
    rows = []
    base = None
    for k in [int(x) for x in args.workers.split(",")]:
        cfg = EngineConfig(workers=k, buffer_capacity=args.buffer, driver=Driver.PARALLEL)
        best = min(run(source, "reach", cfg).stats.wall_time_ms for _ in range(args.repeat)) / 1000
        base = base or best
        speedup, eff = efficiency(base, best, k)
        rows.append({"workers": k, "seconds": round(best, 3), "speedup": round(speedup, 3),
                     "efficiency": round(eff, 1)})
        print(f"{k:>3} workers  {best:8.2f} s  speedup {speedup:5.2f}  efficiency {eff:5.0f}%")
    print(f"{args.size ** args.counters} states, {len(os.sched_getaffinity(0))} cpu(s) available")
    if args.json_out:
        with open(args.json_out, "w") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()
