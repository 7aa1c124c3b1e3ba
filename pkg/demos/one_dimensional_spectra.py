"""Closed-form 1D spectra: pi_p, shooting cross-check, Dirichlet vs Neumann counts."""

from plaplacian import (
    count,
    exact_spectrum,
    interval,
    lambda_1d,
    pi_p,
    shooting_eigenvalue_1d,
)


def main():
    print("pi_p for a few p (decreases toward 2 as p grows):")
    for p in (1.1, 1.5, 2.0, 2.5, 3.0, 4.0, 8.0, 32.0):
        print(f"  p = {p:5.2f}   pi_p = {pi_p(p):.10f}")
    print()

    # The closed form (p-1)*(k*pi_p/L)^p should match the ODE shooting solver.
    p, L = 3.0, 1.0
    print(f"closed form vs shooting, p = {p}, L = {L}:")
    print("   k      closed form         shooting        rel diff")
    for k in range(1, 7):
        exact = lambda_1d(p, L, k)
        shot = shooting_eigenvalue_1d(p, L, k)
        rel = abs(shot - exact) / exact
        print(f"  {k:2d}  {exact:16.8f} {shot:16.8f}   {rel:9.2e}")
    print()

    # Neumann counts sit exactly one above Dirichlet on an interval
    # (the extra zero mode), so N - N0 = 1 at every level.
    p, L = 2.5, 5.0
    sd = exact_spectrum(interval(L), p, "dirichlet", 500.0)
    sn = exact_spectrum(interval(L), p, "neumann", 500.0)
    print(f"counting functions on an interval, p = {p}, L = {L}:")
    print("   lambda    N0 (Dirichlet)    N (Neumann)")
    for lam in (1.0, 5.0, 25.0, 125.0, 500.0):
        print(f"  {lam:7.1f}  {count(sd, lam):12d} {count(sn, lam):14d}")


if __name__ == "__main__":
    main()
