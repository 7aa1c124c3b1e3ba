"""Tail averages of N(lambda)/lambda^(n/p) against the predicted Weyl constants."""

import numpy as np

from plaplacian import (
    box,
    counting_curve,
    estimate_weyl_constant,
    exact_spectrum,
    interval,
    log_grid,
    torus,
    volume,
    weyl_constant_1d,
)


def tail_estimate(d, p, bc, lam_max):
    s = exact_spectrum(d, p, bc, lam_max)
    curve = counting_curve(s, log_grid(100.0, lam_max))
    est = estimate_weyl_constant(curve)
    return est.c_hat / float(volume(d)), est.spread / float(volume(d))


def main():
    L = 64.0
    lam_max = 1e7
    print(f"interval of length {L}, Dirichlet, tail window of a log grid up to {lam_max:.0e}")
    print("   p      c_hat / vol      predicted      rel err    spread")
    for p in (1.5, 2.0, 3.0):
        c_hat, spread = tail_estimate(interval(L), p, "dirichlet", lam_max)
        pred = weyl_constant_1d(p)
        rel = abs(c_hat - pred) / pred
        print(f"  {p:3.1f}   {c_hat:12.8f}   {pred:12.8f}   {rel:8.2e}  {spread:8.2e}")
    print()

    pred2 = 1.0 / (4.0 * np.pi)
    print("planar domains, p = 2, predicted constant 1/(4 pi) = %.8f" % pred2)
    print("   domain          bc           c_hat / vol    rel err")
    sq = box([0.0, 0.0], [1.0, 1.0])
    for bc in ("dirichlet", "neumann"):
        c_hat, _ = tail_estimate(sq, 2.0, bc, 1e6)
        rel = abs(c_hat - pred2) / pred2
        print(f"  unit square     {bc:9s}  {c_hat:12.8f}  {rel:8.2e}")
    c_hat, _ = tail_estimate(torus([1.0, 1.0]), 2.0, "neumann", 1e6)
    rel = abs(c_hat - pred2) / pred2
    print(f"  unit torus      periodic   {c_hat:12.8f}  {rel:8.2e}")
    print()
    print("Dirichlet sits below and Neumann above: the second Weyl term is a")
    print("perimeter correction with opposite signs for the two conditions.")


if __name__ == "__main__":
    main()
