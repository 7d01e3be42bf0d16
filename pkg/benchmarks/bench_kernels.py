"""Compare the compiled and pure-Python kernels.

    python benchmarks/bench_kernels.py [--reps 5]
"""
import argparse
import random
import timeit
from fractions import Fraction

from dao_auction import kernels


def profiles(rng, count, n, hi=100):
    return [sorted((Fraction(rng.randint(1, hi)) for _ in range(n)), reverse=True)
            for _ in range(count)]


def workloads(rng):
    small, mid, big = profiles(rng, 20, 8), profiles(rng, 20, 40), profiles(rng, 5, 200)
    alpha = Fraction(3, 2)
    return {
        "partition oracle n=8": lambda: [kernels.max_partition_wtp(v) for v in small],
        "continuous oracle n=8": lambda: [kernels.max_continuous_wtp(v) for v in small],
        "grouping scan n=40": lambda: [kernels.group_cv_scan(v) for v in mid],
        "grouping scan n=200": lambda: [kernels.group_cv_scan(v) for v in big],
        "collective WTP n=200": lambda: [kernels.collective_wtp(v, alpha) for v in big],
        "water-filling n=200": lambda: [
            kernels.collective_widths(v, kernels.collective_wtp(v, alpha) * Fraction(2, 3), alpha)
            for v in big],
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--reps", type=int, default=3)
    args = ap.parse_args()
    if not kernels.compiled_available():
        print("compiled kernels not built; only the Python backend is timed")
    names = ["python"] + (["cython"] if kernels.compiled_available() else [])
    print(f"{'workload':<24}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, fn in workloads(random.Random(0)).items():
        times, results = [], []
        for name in names:
            with kernels.use_backend(name):
                results.append(fn())
                times.append(min(timeit.repeat(fn, number=1, repeat=args.reps)))
        assert all(r == results[0] for r in results), f"backends disagree on {label}"
        speed = f"{times[0] / times[-1]:>9.1f}x" if len(times) > 1 else ""
        print(f"{label:<24}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + speed)


if __name__ == "__main__":
    main()
