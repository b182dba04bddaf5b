"""Time the numba kernels against their pure-numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5]

Both variants are imported side by side, so the environment flag does not
matter here.  Compilation time is excluded by a warm-up call.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from cornellqes import _accel, kernels


def cases():
    coeffs = np.linspace(1.0, -1.0, 12)
    x = np.linspace(0.0, 8.0, 200_000)
    return {
        # small beta*Theta forces ~10^5 to 10^6 terms
        "ladder_log_sum beta*Theta=1e-2": (
            kernels.ladder_log_sum_numpy,
            kernels.ladder_log_sum_numba,
            (0.015, 0.01, 1.0, 1e-14, 10, 10**7),
        ),
        "ladder_log_sum beta*Theta=1e-4": (
            kernels.ladder_log_sum_numpy,
            kernels.ladder_log_sum_numba,
            (1.5e-4, 1e-4, 1.0, 1e-14, 10, 10**7),
        ),
        "heun_recurrence N=2000": (
            kernels.heun_recurrence_numpy,
            kernels.heun_recurrence_numba,
            (-1.3, -0.7, 3.5, 4.0, 2000),
        ),
        "poly_derivs 2e5 points": (
            kernels.poly_derivs_numpy,
            kernels.poly_derivs_numba,
            (coeffs, x),
        ),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return
    print(f"{'kernel':34s} {'numpy [ms]':>12s} {'numba [ms]':>12s} {'speedup':>8s}")
    for name, (f_np, f_nb, call_args) in cases().items():
        f_nb(*call_args)
        t_np = min(timeit.repeat(lambda: f_np(*call_args), number=1, repeat=args.repeat))
        t_nb = min(timeit.repeat(lambda: f_nb(*call_args), number=1, repeat=args.repeat))
        print(f"{name:34s} {1e3 * t_np:12.3f} {1e3 * t_nb:12.3f} {t_np / t_nb:8.1f}")


if __name__ == "__main__":
    main()
