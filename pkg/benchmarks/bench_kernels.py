"""Times the compiled simplex kernel against the pure-Python fallback.

Workloads:
  lps       200 seeded random LPs (up to 4 variables, 6 constraints)
  dense     20 seeded dense LPs with 30 variables and 30 constraints,
            where pivoting dominates the run time
  kernel    the pivot loop alone on 200 integer tableaux (12 x 12), the
            part the compiled extension replaces
  lp4       the summed-budget LP for each action of the 10-principal example
  corpus    the existence test on the 100-setting random corpus
  audit     the algorithmic-contract audit on the PoS example

Usage: python benchmarks/bench_kernels.py [--repeat N] [--only lps,lp4,...]
"""
import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from iivcg import catalog
from iivcg.audit import alg1_audit, build_grid
from iivcg.corpus import corpus
from iivcg.engine import ContractEngine
from iivcg.lp import LE, Constraint, LinearProgram, _kernel, solve, use_kernel

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "tests"))
from oracles import random_bounded_lp  # noqa: E402


def work_lps():
    lps = [random_bounded_lp(random.Random(s)) for s in range(200)]
    return lambda: [solve(lp) for lp in lps]


def dense_lp(rng: random.Random, size: int = 30) -> LinearProgram:
    cons = [
        Constraint([Fraction(rng.randint(0, 9), rng.randint(1, 4)) for _ in range(size)], LE, rng.randint(10, 60))
        for _ in range(size)
    ]
    return LinearProgram([rng.randint(1, 9) for _ in range(size)], cons, sense="max")


def work_dense():
    lps = [dense_lp(random.Random(s)) for s in range(20)]
    return lambda: [solve(lp) for lp in lps]


def integer_tableau(rng: random.Random, size: int = 12):
    """``max c·x, A x <= b`` in the kernel's row layout with the slack basis."""
    rows = []
    for i in range(size):
        slack = [1 if k == i else 0 for k in range(size)]
        rows.append([rng.randint(0, 5) for _ in range(size)] + slack + [rng.randint(5, 40), 1])
    obj = [-rng.randint(1, 9) for _ in range(size)] + [0] * size + [0, 1]
    return rows, [obj], list(range(size, 2 * size)), 2 * size


def work_kernel():
    tableaux = [integer_tableau(random.Random(s)) for s in range(200)]

    def run():
        kernel = _kernel.active()
        out = []
        for rows, objs, basis, allowed in tableaux:
            rows, objs, basis = [r[:] for r in rows], [o[:] for o in objs], basis[:]
            kernel.simplex(rows, objs, basis, allowed)
            out.append((basis, objs[0][-2:]))
        return out
    return run


def work_lp4():
    s = catalog.poa_setting(10)

    def run():
        e = ContractEngine(s)
        return [e.min_sum_m(a) for a in range(s.q)]
    return run


def work_corpus():
    settings = corpus(100)
    return lambda: [ContractEngine(s).alg2_exists().possible for s in settings]


def work_audit():
    s = catalog.pos_setting()
    grid = build_grid(s, seed=0)
    return lambda: alg1_audit(s, grid).passed


WORKLOADS = {"lps": work_lps, "dense": work_dense, "kernel": work_kernel, "lp4": work_lp4, "corpus": work_corpus, "audit": work_audit}


def best_time(fn, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--only", default=",".join(WORKLOADS))
    args = parser.parse_args(argv)
    kernels = sorted(_kernel.KERNELS)
    if "compiled" not in kernels:
        print("compiled kernel not built; timing the pure-Python kernel only")
    print(f"{'workload':10s}" + "".join(f"{k:>12s}" for k in kernels) + ("     speedup" if len(kernels) > 1 else ""))
    for name in args.only.split(","):
        fn = WORKLOADS[name]()
        times, results = {}, {}
        for k in kernels:
            use_kernel(k)
            times[k], results[k] = best_time(fn, args.repeat)
        if len(set(map(repr, results.values()))) != 1:
            raise SystemExit(f"{name}: kernels disagree")
        line = f"{name:10s}" + "".join(f"{times[k]:11.3f}s" for k in kernels)
        if len(kernels) > 1:
            line += f"{times['python'] / times['compiled']:11.2f}x"
        print(line)
    use_kernel(kernels[0] if len(kernels) == 1 else "compiled")


if __name__ == "__main__":
    main()
