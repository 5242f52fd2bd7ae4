"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Each case runs in a fresh interpreter per backend so the selection made at
import time is honoured.
"""
import argparse
import json
import os
import subprocess
import sys

CASE_CODE = r"""
import json, random, sys, timeit
from rankmax import clear_caches, kernels, oracle
from rankmax.engine import rank_maximal
from rankmax.instance import generate_random, parse_instance

repeat = int(sys.argv[1])
example = parse_instance(open(sys.argv[2]).read())

rng = random.Random(0)
graphs = []
for _ in range(200):
    n_l, n_r = rng.randint(20, 60), rng.randint(20, 60)
    graphs.append(([rng.sample(range(n_r), rng.randint(1, 6)) for _ in range(n_l)], n_r))
markets = [generate_random(40, 40, 6, 0.2, s) for s in range(50)]
small = [generate_random(7, 7, 5, 0.2, s) for s in range(100)]


def augment_eou():
    for adj, n_r in graphs:
        ml, mr = kernels.augment(adj, n_r, [-1] * len(adj), [-1] * n_r, list(range(len(adj))))
        kernels.eou(adj, n_r, ml, mr)


def phases():
    clear_caches()
    for inst in markets:
        rank_maximal(inst)


def enumeration():
    clear_caches()
    for inst in small:
        oracle.enumerate_rmm(inst)


def exhaustive():
    clear_caches()
    oracle.exhaustive_min_max(example, "a1")


out = {"backend": kernels.BACKEND}
for name, fn in [("augment+eou, 200 graphs", augment_eou), ("rank_maximal, 50 x 40x40", phases),
                 ("enumerate_rmm, 100 x 7x7", enumeration), ("exhaustive min-max, 720 lists", exhaustive)]:
    out[name] = min(timeit.repeat(fn, number=1, repeat=repeat))
print(json.dumps(out))
"""


def run(backend: str, repeat: int, example: str) -> dict:
    env = dict(os.environ)
    if backend == "python":
        env["RANKMAX_PURE_PYTHON"] = "1"
    else:
        env.pop("RANKMAX_PURE_PYTHON", None)
    res = subprocess.run(
        [sys.executable, "-c", CASE_CODE, str(repeat), example], env=env, capture_output=True, text=True, check=True
    )
    return json.loads(res.stdout)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    example = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "example.txt")

    compiled = run("cython", args.repeat, example)
    python = run("python", args.repeat, example)
    if compiled["backend"] != "cython":
        print("compiled extension not built; only the fallback is available")
    print(f"{'case':34} {'compiled':>10} {'python':>10} {'speedup':>8}")
    for key in python:
        if key == "backend":
            continue
        c, p = compiled[key], python[key]
        print(f"{key:34} {c:10.4f} {p:10.4f} {p / c:7.1f}x")


if __name__ == "__main__":
    main()
