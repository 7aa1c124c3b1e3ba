"""Minimizing the Rayleigh quotient for the first Dirichlet eigenvalue."""

import numpy as np

from plaplacian import (
    box,
    convergence_order,
    interval,
    lambda_1d,
    min_p_rayleigh,
    rasterize,
)


def main():
    print("unit interval, grid m = 64, descent vs closed form:")
    print("   p     variational      closed form      rel err")
    d = rasterize(interval(1), 1.0 / 64)
    for p, tol in ((1.5, 1e-7), (2.0, 1e-8), (3.0, 1e-6)):
        lam, _ = min_p_rayleigh(d, p, tol=tol)
        exact = lambda_1d(p, 1.0, 1)
        rel = abs(lam - exact) / exact
        print(f"  {p:3.1f} {lam:14.8f} {exact:16.8f}   {rel:10.2e}")
    print()

    # Refine h and fit the convergence rate; second order is expected at p = 2.
    p = 2.0
    exact = lambda_1d(p, 1.0, 1)
    hs, errs = [], []
    for m in (8, 16, 32, 64, 128):
        h = 1.0 / m
        lam, _ = min_p_rayleigh(rasterize(interval(1), h), p)
        hs.append(h)
        errs.append(abs(lam - exact))
    order = convergence_order(hs, errs)
    print(f"interval refinement, p = 2: errors {['%.2e' % e for e in errs]}")
    print(f"fitted order = {order:.3f}")
    print()

    sq = rasterize(box([0.0, 0.0], [1.0, 1.0]), 1.0 / 48)
    lam, u = min_p_rayleigh(sq, 2.0, tol=1e-8)
    exact = 2.0 * np.pi ** 2
    print(f"unit square, p = 2, h = 1/48: lambda_1 = {lam:.6f}"
          f"  (2 pi^2 = {exact:.6f}, rel err {abs(lam - exact) / exact:.2e})")
    print(f"minimizer has {u.values.size} interior node values, "
          f"max at the center: {float(np.max(u.values)):.4f}")


if __name__ == "__main__":
    main()
