"""Time the compiled kernels against the pure-Python fallback.

Run with ``python benchmarks/bench_kernels.py``.  The end-to-end rows start a
fresh interpreter per backend because the backend is fixed at import.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from betakw import _pykernels as py

try:
    from betakw import _ckernels as cy
except ImportError:
    cy = None

RNG = np.random.default_rng(0)
XS = RNG.uniform(size=2000)
LOGX = np.log(RNG.uniform(1e-6, 1 - 1e-6, 2000))

CASES = {
    "digamma x1000": lambda k: [k.digamma(0.1 + 0.01 * i) for i in range(1000)],
    "betainc_array n=2000": lambda k: k.betainc_array(0.7, 2.5, XS),
    "beta_ppf_array n=200": lambda k: k.beta_ppf_array(0.7, 2.5, XS[:200]),
    "kw_profile_sums n=2000": lambda k: k.kw_profile_sums(LOGX, 1.3),
    "series_partial 5000 terms": lambda k: k.series_partial(0, 0.5, 2.5, 1.3, 0.0, 1, 5001),
}

END_TO_END = ("import numpy as np; from betakw.dist import sample; "
              "from betakw.discrim import t_statistic; rng = np.random.default_rng(1); "
              "xs = [sample('beta', (0.5, 2.5), 200, rng) for _ in range(50)]")


def best_of(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def end_to_end(pure: bool, repeat: int) -> float:
    env = dict(os.environ, BETAKW_PURE_PYTHON="1" if pure else "0")
    code = (f"import timeit; {END_TO_END}; "
            f"print(min(timeit.repeat(lambda: [t_statistic(x) for x in xs], "
            f"number=1, repeat={repeat})))")
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True)
    return float(out.stdout.strip())


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if cy is None:
        sys.exit("compiled kernels are not built; run pip install -e . first")
    print(f"{'case':32s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speed-up':>9s}")
    rows = [(name, best_of(lambda: fn(py), args.repeat), best_of(lambda: fn(cy), args.repeat))
            for name, fn in CASES.items()]
    rows.append(("T_n on 50 samples of n=200", end_to_end(True, args.repeat),
                 end_to_end(False, args.repeat)))
    for name, tp, tc in rows:
        print(f"{name:32s} {1e3 * tp:12.3f} {1e3 * tc:12.3f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
