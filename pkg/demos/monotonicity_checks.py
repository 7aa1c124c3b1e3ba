"""Counting-function inequalities: one worked packing, then randomized sweeps."""

from fractions import Fraction

from plaplacian import (
    ExactProvider,
    Packing,
    PackingItem,
    count,
    interval,
    sweep_cutoff,
    sweep_dirichlet_monotonicity,
    sweep_neumann_monotonicity,
    sweep_scaling,
    validate_packing,
)


def worked_example(p=2.0):
    # Two disjoint sub-intervals of [0, 1]: scales 1/2 and 1/4.
    pk = Packing("sub", [
        PackingItem(Fraction(1, 2), (Fraction(0),), interval(1)),
        PackingItem(Fraction(1, 4), (Fraction(2, 3),), interval(1)),
    ], interval(1))
    print("sub-packing of the unit interval:", validate_packing(pk))

    prov = ExactProvider(p)
    amb = prov(interval(1), "dirichlet", 1e4)
    print("   lambda     N0(U)   sum N0(U_i, a_i^p lambda)")
    for lam in (50.0, 200.0, 1000.0, 5000.0):
        lhs = count(amb, lam)
        rhs = 0
        for item in pk.items:
            a = float(item.scale)
            s = prov(item.piece, "dirichlet", a ** p * lam)
            rhs += count(s, a ** p * lam)
        print(f"  {lam:8.1f} {lhs:8d} {rhs:12d}")
    print()


def run_sweeps():
    print("randomized sweeps (100 instances each):")
    sweeps = [
        ("Dirichlet monotone, intervals",
         sweep_dirichlet_monotonicity(100, seed=3, kind="interval")),
        ("Dirichlet monotone, boxes",
         sweep_dirichlet_monotonicity(100, seed=5, kind="box")),
        ("Neumann monotone, intervals",
         sweep_neumann_monotonicity(100, seed=7, kind="interval")),
        ("Neumann monotone, squares",
         sweep_neumann_monotonicity(100, seed=9, kind="square")),
        ("scaling identity",
         sweep_scaling(100, seed=11)),
        ("cutoff inequality",
         sweep_cutoff(100, seed=13)),
    ]
    for name, rep in sweeps:
        print(f"  {name:32s} verdict={rep.verdict:5s} "
              f"worst margin={rep.worst_margin:g} "
              f"violations={rep.details['violations']}")


def main():
    worked_example()
    run_sweeps()


if __name__ == "__main__":
    main()
