"""Compare the compiled and pure-Python kernels.

Run with ``python3 benchmarks/bench_kernels.py``. Each workload is timed
with ``timeit`` on both backends and the results are checked for
agreement before the speed-up is reported.
"""

import argparse
import timeit

from betaweibull._backend import get_kernels

MLE = (0.0785, 0.0659, 7.9355, 0.004987)


def workloads(k):
    a, b = MLE[0], MLE[1]
    return {
        "inc_beta x200": lambda: [k.inc_beta(y, 1 - y, 2.5, 1.7) for y in
                                  (i / 201 for i in range(1, 201))],
        "S(2.7, 0.8, 1.3) quadrature": lambda: k.st_integral(0, 2.7, 0.8, 1.3, 0, 1e-12, 10**6),
        "T(2, b+1, a-1, 1) at MLE": lambda: k.st_integral(0, 2.0, b + 1, a - 1, 1, 1e-11, 10**6),
        "combined kappa_cc integrand": lambda: k.st_integral(1, 0.0, b, a, 2, 1e-11, 10**6),
        "S series partial sum, 2000 terms": lambda: k.s_partial(2.0, 1.5, 2.5, 2000),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    py = get_kernels("python")
    try:
        cy = get_kernels("compiled")
    except ImportError:
        print("compiled kernels are not built; nothing to compare")
        return 1
    wp, wc = workloads(py), workloads(cy)
    print(f"{'workload':36s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speed-up':>9s}")
    for name in wp:
        rp, rc = wp[name](), wc[name]()
        vp = rp[0] if isinstance(rp, tuple) else rp[-1]
        vc = rc[0] if isinstance(rc, tuple) else rc[-1]
        if abs(vp - vc) > 1e-12 * max(1.0, abs(vp)):
            raise SystemExit(f"backends disagree on {name}: {vp!r} vs {vc!r}")
        number = 3
        tp = min(timeit.repeat(wp[name], number=number, repeat=args.repeat)) / number
        tc = min(timeit.repeat(wc[name], number=number, repeat=args.repeat)) / number
        print(f"{name:36s} {tp * 1e3:12.3f} {tc * 1e3:14.3f} {tp / tc:8.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
