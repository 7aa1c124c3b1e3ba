"""Two-sided Weyl bracket on an L-shaped union of boxes, p = 2.

No closed-form spectrum exists for the L-shape, but its member boxes give a
Dirichlet undercount and a Neumann overcount that pinch the Weyl constant.
A small finite-difference eigensolve sits inside the bracket as a spot check.
"""

import numpy as np

from plaplacian import (
    assemble_fd,
    box_union,
    count,
    eigensolve_p2,
    log_grid,
    rasterize,
    sandwich_weyl,
    trusted_count_threshold,
    volume,
)


def main():
    d = box_union([([0, 0], [2, 1]), ([0, 1], [1, 1])])  # area 3
    vol = float(volume(d))
    grid = log_grid(10.0, 3e4)
    lower, upper, est = sandwich_weyl(d, grid)

    print("L-shape, area 3: member-box counts bracket the true N(lambda)")
    print("   lambda      lower N    upper N    lower f    upper f")
    for lam in (100.0, 1000.0, 10000.0, 30000.0):
        i = int(np.searchsorted(grid, lam * 0.999))
        print(f"  {grid[i]:9.1f} {lower.counts[i]:9d} {upper.counts[i]:9d}"
              f"  {lower.f[i] / vol:9.6f} {upper.f[i] / vol:9.6f}")
    pred = 1.0 / (4.0 * np.pi)
    print(f"\nsandwich estimate: c_hat/vol = {est.c_hat / vol:.6f}"
          f"  (1/(4 pi) = {pred:.6f}, spread/vol = {est.spread / vol:.2e})")

    # Discrete cross-check well below the trusted resolution threshold.
    op = assemble_fd(rasterize(d, 0.03125), "dirichlet")
    s = eigensolve_p2(op)
    lam_trust = trusted_count_threshold(op, 0.02)
    print(f"\nfinite differences at h = 1/32, counts trusted below {lam_trust:.0f}:")
    print("   lambda    lower N    discrete N    upper N")
    for lam in (100.0, 300.0, 1000.0):
        i = int(np.searchsorted(grid, lam * 0.999))
        print(f"  {grid[i]:7.1f} {lower.counts[i]:9d} {count(s, grid[i]):11d}"
              f" {upper.counts[i]:10d}")


if __name__ == "__main__":
    main()
