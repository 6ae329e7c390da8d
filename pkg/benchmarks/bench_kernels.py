#!/usr/bin/env python3
"""Time the compiled kernels against the NumPy fallbacks.

Covers the two hot loops: the fused softmax loss+gradient evaluated
hundreds of times per probed component, and the per-row top-component
projection removal applied to full vocabularies.  Shapes can be adjusted
from the command line; outputs are cross-checked before timing.
"""

import argparse
import time

import numpy as np

from pcdissect import _kernels_py

try:
    from pcdissect import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def bench_pair(name, make_args, run, repeats):
    args_pure = make_args()
    pure = best_of(lambda: run(_kernels_py, *args_pure), repeats)
    if _ckernels is None:
        print(f"{name:<44} numpy {pure * 1e3:9.2f} ms   (no compiled extension)")
        return
    args_comp = make_args()
    comp = best_of(lambda: run(_ckernels, *args_comp), repeats)
    print(
        f"{name:<44} numpy {pure * 1e3:9.2f} ms   cython {comp * 1e3:9.2f} ms"
        f"   speedup {pure / comp:5.2f}x"
    )


def check_agreement():
    rng = np.random.default_rng(0)
    xb = np.ascontiguousarray(np.hstack([rng.normal(size=(500, 3)), np.ones((500, 1))]))
    y = rng.integers(0, 4, size=500).astype(np.int64)
    w = np.ascontiguousarray(rng.normal(size=(4, 4)))
    loss_p, grad_p = _kernels_py.logreg_loss_grad(xb, y, w)
    loss_c, grad_c = _ckernels.logreg_loss_grad(xb, y, w)
    x = rng.normal(size=(200, 16))
    q, _ = np.linalg.qr(rng.normal(size=(16, 16)))
    u = np.ascontiguousarray(q[:, :4])
    rm_p = _kernels_py.remove_projections(x.copy(), u)
    rm_c = np.asarray(_ckernels.remove_projections(x.copy(), u))
    print(
        f"agreement: loss {abs(loss_p - loss_c):.2e}, "
        f"grad {np.abs(grad_p - grad_c).max():.2e}, "
        f"removal {np.abs(rm_p - rm_c).max():.2e}"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--rows", type=int, default=20000,
                        help="training rows for the classifier kernel")
    parser.add_argument("--vocab", type=int, default=200000,
                        help="vocabulary size for the removal kernel")
    args = parser.parse_args()

    rng = np.random.default_rng(42)
    if _ckernels is not None:
        check_agreement()
    else:
        print("compiled extension not available; timing fallback only")
    print()

    def logreg_args(n, d, c):
        def make():
            xb = np.ascontiguousarray(
                np.hstack([rng.normal(size=(n, d)), np.ones((n, 1))])
            )
            y = rng.integers(0, c, size=n).astype(np.int64)
            w = np.ascontiguousarray(rng.normal(size=(c, d + 1)) * 0.1)
            return xb, y, w

        return make

    for d, c, label in [(1, 8, "probe shape"), (1, 20, "probe shape"),
                        (100, 8, "band shape")]:
        bench_pair(
            f"logreg loss+grad  n={args.rows} d={d} C={c} ({label})",
            logreg_args(args.rows, d, c),
            lambda mod, xb, y, w: mod.logreg_loss_grad(xb, y, w),
            args.repeats,
        )
    bench_pair(
        f"logreg loss only  n={args.rows} d=1 C=8",
        logreg_args(args.rows, 1, 8),
        lambda mod, xb, y, w: mod.logreg_loss(xb, y, w),
        args.repeats,
    )

    def removal_args(n, d, top):
        def make():
            x = rng.normal(size=(n, d))
            q, _ = np.linalg.qr(rng.normal(size=(d, d)))
            return x, np.ascontiguousarray(q[:, :top])

        return make

    for top in (1, 5):
        bench_pair(
            f"projection removal  n={args.vocab} d=300 D={top}",
            removal_args(args.vocab, 300, top),
            lambda mod, x, u: mod.remove_projections(x, u),
            args.repeats,
        )


if __name__ == "__main__":
    main()
