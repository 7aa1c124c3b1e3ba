"""Counting functions, Weyl-constant estimation, and the harness that
checks the monotonicity, scaling, cutoff, and growth-bound inequalities
against exact spectra."""
from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from .domains import (
    Domain, Packing, PackingItem, box, domain_to_json, interval, pack_cubes,
    partition_cubes, rasterize, scale_domain, torus, unit_cube,
    validate_packing, volume,
)
from .energy import Field, combine_disjoint, dirichlet_vertices, p_energy, restrict, submask_domain
from .errors import ArgumentError, EstimationError
from .exact import COUNT_CAP, Spectrum, exact_spectrum, spectrum_1d

DEFAULT_POINTS_PER_DECADE = 200


def count(s: Spectrum, lam) -> int:
    """Number of eigenvalues strictly below lam, with multiplicity."""
    idx = int(np.searchsorted(s.values, lam, side="left"))
    return int(s._cum[idx])


def count_many(s: Spectrum, lams) -> np.ndarray:
    idx = np.searchsorted(s.values, np.asarray(lams, dtype=float), side="left")
    return s._cum[idx]


def log_grid(lo, hi, points=None, per_decade=DEFAULT_POINTS_PER_DECADE):
    """Log-spaced sample grid, 200 points per decade by default."""
    if not (0 < lo < hi):
        raise ArgumentError("need 0 < lo < hi")
    if points is None:
        points = max(2, int(math.ceil(per_decade * math.log10(hi / lo))) + 1)
    return np.geomspace(lo, hi, int(points))


class CountingCurve:
    """Sampled lam -> N(lam) with the normalization f = lam^{-n/p} N."""

    def __init__(self, lambdas, counts, n, p, bc, domain_volume):
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.counts = np.asarray(counts, dtype=np.int64)
        if np.any(np.diff(self.lambdas) <= 0) or np.any(self.lambdas <= 0):
            raise ArgumentError("lambda samples must be positive increasing")
        if np.any(np.diff(self.counts) < 0):
            raise ArgumentError("counting function must be nondecreasing")
        self.n = int(n)
        self.p = float(p)
        self.bc = bc
        self.domain_volume = float(domain_volume)
        self.f = self.counts / self.lambdas ** (self.n / self.p)

    def __len__(self):
        return len(self.lambdas)


def counting_curve(s: Spectrum, lambdas) -> CountingCurve:
    return CountingCurve(lambdas, count_many(s, lambdas), s.n, s.p, s.bc,
                         s.domain_volume)


def curve_to_csv(c: CountingCurve) -> str:
    lines = ["lambda,N,f"]
    lines += [f"{float(lam)!r},{int(N)},{float(f)!r}"
              for lam, N, f in zip(c.lambdas, c.counts, c.f)]
    return "\n".join(lines) + "\n"


class WeylEstimate:
    def __init__(self, c_hat, spread, window, method):
        if not window[0] < window[1]:
            raise ArgumentError("estimation window is degenerate")
        self.c_hat = float(c_hat)
        self.spread = float(spread)
        self.window = (float(window[0]), float(window[1]))
        self.method = method

    def __repr__(self):
        return (f"WeylEstimate(c_hat={self.c_hat:.6g}, spread={self.spread:.2g}, "
                f"window=({self.window[0]:.3g}, {self.window[1]:.3g}))")


def weyl_estimate_to_json(e: WeylEstimate) -> dict:
    return {"c_hat": e.c_hat, "spread": e.spread,
            "window": [e.window[0], e.window[1]], "method": e.method}


def weyl_estimate_from_json(obj: dict) -> WeylEstimate:
    return WeylEstimate(obj["c_hat"], obj["spread"], tuple(obj["window"]),
                        obj["method"])


def estimate_weyl_constant(c: CountingCurve, window_fraction=0.5) -> WeylEstimate:
    """Tail-window average of f with its spread as the error proxy.

    The window is the top window_fraction of the lambda range on a log
    scale.  Only the leading term is averaged; no two-term fit, since
    the second-order behavior is not established for general p.
    """
    if len(c) < 100:
        raise ArgumentError("need at least 100 samples to estimate a tail")
    if not (0 < window_fraction < 1):
        raise ArgumentError("window_fraction must lie in (0, 1)")
    lo, hi = c.lambdas[0], c.lambdas[-1]
    start = math.exp(math.log(lo) + (1 - window_fraction) * math.log(hi / lo))
    sel = c.lambdas >= start
    if np.any(c.counts[sel] == 0):
        raise EstimationError("window contains zero counts; lambda range too low")
    fwin = c.f[sel]
    return WeylEstimate(fwin.mean(), fwin.max() - fwin.min(),
                        (float(c.lambdas[sel][0]), float(hi)), "tail-average")


class InequalityReport:
    """Outcome of one inequality check over a lambda grid.

    worst_margin is the minimum slack (negative means a violation).
    """

    def __init__(self, statement, lambdas, lhs, rhs, verdict, worst_margin,
                 details=None):
        self.statement = statement
        self.lambdas = np.asarray(lambdas, dtype=float)
        self.lhs = np.asarray(lhs)
        self.rhs = np.asarray(rhs)
        self.verdict = verdict
        self.worst_margin = float(worst_margin)
        self.details = dict(details) if details else {}

    def __repr__(self):
        return (f"InequalityReport({self.statement}, {self.verdict}, "
                f"worst_margin={self.worst_margin:.6g})")


def report_to_json(r: InequalityReport) -> dict:
    return {"statement": r.statement,
            "lambdas": [float(x) for x in r.lambdas],
            "lhs": [float(x) for x in r.lhs],
            "rhs": [float(x) for x in r.rhs],
            "verdict": r.verdict,
            "worst_margin": r.worst_margin,
            "details": r.details}


def report_from_json(obj: dict) -> InequalityReport:
    return InequalityReport(obj["statement"], obj["lambdas"], obj["lhs"],
                            obj["rhs"], obj["verdict"], obj["worst_margin"],
                            obj.get("details"))


class ExactProvider:
    """Cached exact spectra for one fixed p.

    Reuses a computed spectrum whenever its lambda range covers the
    request; refuses nothing that exact_spectrum supports.
    """

    def __init__(self, p, count_cap=COUNT_CAP):
        self.p = float(p)
        self.count_cap = count_cap
        self._cache = {}

    def __call__(self, d: Domain, bc: str, lam_max) -> Spectrum:
        key = (json.dumps(domain_to_json(d), sort_keys=True), bc)
        hit = self._cache.get(key)
        if hit is not None and hit[0] >= lam_max:
            return hit[1]
        s = exact_spectrum(d, self.p, bc, lam_max, count_cap=self.count_cap)
        self._cache[key] = (lam_max, s)
        return s


def _require_exact(s: Spectrum):
    if s.exactness != "exact":
        raise ArgumentError("inequality checks demand exact spectra")


def check_dirichlet_monotonicity(pk: Packing, lambdas, provider) -> InequalityReport:
    """Sub-packing inequality: N0_ambient(lam) >= sum_i N0_piece_i(a_i^p lam)."""
    if pk.relation != "sub":
        raise ArgumentError("dirichlet monotonicity needs a sub-packing")
    rep = validate_packing(pk)
    if not rep.valid:
        raise ArgumentError("invalid packing: " + "; ".join(rep.failures))
    lambdas = np.asarray(lambdas, dtype=float)
    lam_max = float(lambdas.max())
    p = provider.p
    amb = provider(pk.ambient, "dirichlet", lam_max * 1.0000001)
    _require_exact(amb)
    lhs = count_many(amb, lambdas)
    rhs = np.zeros(len(lambdas), dtype=np.int64)
    for item in pk.items:
        a = float(item.scale)
        s = provider(item.piece, "dirichlet", a ** p * lam_max * 1.0000001)
        _require_exact(s)
        rhs += count_many(s, a ** p * lambdas)
    margin = int((lhs - rhs).min())
    verdict = "pass" if margin >= 0 else "fail"
    return InequalityReport("ddm", lambdas, lhs, rhs, verdict, margin,
                            details={"pieces": len(pk.items), "p": p})


def check_neumann_monotonicity(pk: Packing, lambdas, provider) -> InequalityReport:
    """Cover inequality: N_ambient(lam) <= sum_i N_piece_i(a_i^p lam)."""
    if pk.relation != "cover":
        raise ArgumentError("neumann monotonicity needs a cover")
    rep = validate_packing(pk)
    if not rep.valid:
        raise ArgumentError("invalid packing: " + "; ".join(rep.failures))
    lambdas = np.asarray(lambdas, dtype=float)
    lam_max = float(lambdas.max())
    p = provider.p
    amb = provider(pk.ambient, "neumann", lam_max * 1.0000001)
    _require_exact(amb)
    lhs = count_many(amb, lambdas)
    rhs = np.zeros(len(lambdas), dtype=np.int64)
    for item in pk.items:
        a = float(item.scale)
        s = provider(item.piece, "neumann", a ** p * lam_max * 1.0000001)
        _require_exact(s)
        rhs += count_many(s, a ** p * lambdas)
    margin = int((rhs - lhs).min())
    verdict = "pass" if margin >= 0 else "fail"
    return InequalityReport("ndm", lambdas, lhs, rhs, verdict, margin,
                            details={"pieces": len(pk.items), "p": p})


def check_scaling(d: Domain, a, bc, lambdas, provider) -> InequalityReport:
    """Scaling identity: N_{aU}(lam) = N_U(a^p lam), checked as integers."""
    if isinstance(a, float):
        a = Fraction(a).limit_denominator(10 ** 6)
    a = Fraction(a)
    if a <= 0:
        raise ArgumentError("scale factor must be positive")
    af = float(a)
    lambdas = np.asarray(lambdas, dtype=float)
    p = provider.p
    lam_max = float(lambdas.max())
    s_base = provider(d, bc, af ** p * lam_max * 1.0000001)
    s_scaled = provider(scale_domain(d, a), bc, lam_max * 1.0000001)
    _require_exact(s_base)
    _require_exact(s_scaled)
    lhs = count_many(s_scaled, lambdas)
    rhs = count_many(s_base, af ** p * lambdas)
    worst = int(np.abs(lhs - rhs).max())
    verdict = "pass" if worst == 0 else "fail"
    return InequalityReport("scaling", lambdas, lhs, rhs, verdict, -worst,
                            details={"a": str(a), "bc": bc, "p": p})


def check_dirichlet_le_neumann(d: Domain, lambdas, provider) -> InequalityReport:
    lambdas = np.asarray(lambdas, dtype=float)
    lam_max = float(lambdas.max()) * 1.0000001
    sd = provider(d, "dirichlet", lam_max)
    sn = provider(d, "neumann", lam_max)
    _require_exact(sd)
    _require_exact(sn)
    lhs = count_many(sd, lambdas)
    rhs = count_many(sn, lambdas)
    margin = int((rhs - lhs).min())
    verdict = "pass" if margin >= 0 else "fail"
    return InequalityReport("dirichlet-le-neumann", lambdas, lhs, rhs, verdict,
                            margin, details={"p": provider.p})


def cutoff_lambda(lam1, lam2, eps) -> float:
    """The frequency lam = lam' lam'' / (lam' + lam'' + 1/eps)."""
    return lam1 * lam2 / (lam1 + lam2 + 1.0 / eps)


def check_cutoff_inequality(U: Domain, eps, lam1, lam2, p,
                            provider=None) -> InequalityReport:
    """Cutoff inequality on an interval:

        N_U(lam^p) <= N0_U(lam'^p) + N_{U_eps}(lam''^p)

    with lam = lam' lam'' / (lam' + lam'' + 1/eps) and U_eps the two
    boundary subintervals of width eps.
    """
    if U.kind != "interval":
        raise ArgumentError("the cutoff check is specialized to intervals")
    L = float(U.boxes[0][1][0])
    eps = float(eps)
    if not (0 < eps < L / 2):
        raise ArgumentError("need 0 < eps < length/2")
    if lam1 <= 0 or lam2 <= 0:
        raise ArgumentError("frequencies must be positive")
    lam = cutoff_lambda(lam1, lam2, eps)
    if provider is None:
        provider = ExactProvider(p)
    elif provider.p != float(p):
        raise ArgumentError("provider p does not match the requested p")
    sN = provider(U, "neumann", lam ** p * 1.0000001)
    s0 = provider(U, "dirichlet", lam1 ** p * 1.0000001)
    # the eps-collar of an interval is two disjoint eps-intervals; its
    # Neumann count is twice the count of one component
    s_eps = provider(interval(Fraction(eps).limit_denominator(10 ** 9)),
                     "neumann", lam2 ** p * 1.0000001)
    lhs = count(sN, lam ** p)
    rhs = count(s0, lam1 ** p) + 2 * count(s_eps, lam2 ** p)
    margin = rhs - lhs
    verdict = "pass" if margin >= 0 else "fail"
    return InequalityReport("cutoff", [lam ** p], [lhs], [rhs], verdict, margin,
                            details={"eps": eps, "lam1": lam1, "lam2": lam2,
                                     "p": p, "L": L})


def check_friedlander_bounds(c: CountingCurve, lambda_lo=None) -> InequalityReport:
    """Fit C1 = min f/vol and C2 = max f/vol over the tail window and
    assert 0 < C1 <= C2 < infinity."""
    if c.counts.max() < 10:
        raise EstimationError("curve does not extend beyond its 10th eigenvalue")
    if lambda_lo is None:
        lo, hi = c.lambdas[0], c.lambdas[-1]
        lambda_lo = math.exp(0.5 * (math.log(lo) + math.log(hi)))
    sel = c.lambdas >= lambda_lo
    if not np.any(sel):
        raise ArgumentError("window is empty")
    if np.any(c.counts[sel] == 0):
        raise EstimationError("window contains zero counts")
    fwin = c.f[sel] / c.domain_volume
    C1, C2 = float(fwin.min()), float(fwin.max())
    ok = 0 < C1 <= C2 < math.inf
    return InequalityReport(
        "friedlander", c.lambdas[sel], np.full(sel.sum(), C1),
        np.full(sel.sum(), C2), "pass" if ok else "fail", C1,
        details={"C1": C1, "C2": C2, "ratio": C2 / C1,
                 "window": [float(lambda_lo), float(c.lambdas[-1])]})


def sandwich_weyl(d: Domain, lambdas, window_fraction=0.5, count_cap=COUNT_CAP):
    """Two-sided Weyl data for a box union at p = 2.

    Lower curve: sum of member-box Dirichlet counts (the boxes are a
    sub-packing).  Upper curve: sum of member-box Neumann counts (the
    boxes are a null-overlap cover).  The estimate averages the two
    normalized tails.
    """
    if d.kind not in ("interval", "box-union"):
        raise ArgumentError("sandwich_weyl needs a box-union domain")
    lambdas = np.asarray(lambdas, dtype=float)
    lam_max = float(lambdas.max()) * 1.0000001
    lower = np.zeros(len(lambdas), dtype=np.int64)
    upper = np.zeros(len(lambdas), dtype=np.int64)
    for corner, sides in d.boxes:
        piece = interval(sides[0], start=corner[0]) if d.n == 1 else box(corner, sides)
        sd = exact_spectrum(piece, 2.0, "dirichlet", lam_max, count_cap=count_cap)
        sn = exact_spectrum(piece, 2.0, "neumann", lam_max, count_cap=count_cap)
        lower += count_many(sd, lambdas)
        upper += count_many(sn, lambdas)
    vol = float(volume(d))
    c_lo = CountingCurve(lambdas, lower, d.n, 2.0, "dirichlet", vol)
    c_hi = CountingCurve(lambdas, upper, d.n, 2.0, "neumann", vol)
    if np.any(c_lo.counts > c_hi.counts):
        raise ArgumentError("sandwich order violated; inconsistent spectra")
    e_lo = estimate_weyl_constant(c_lo, window_fraction)
    e_hi = estimate_weyl_constant(c_hi, window_fraction)
    est = WeylEstimate(0.5 * (e_lo.c_hat + e_hi.c_hat),
                       (e_hi.c_hat - e_lo.c_hat) + 0.5 * (e_lo.spread + e_hi.spread),
                       e_lo.window, "sandwich")
    return c_lo, c_hi, est


def check_constant_equality(dirichlet_est: WeylEstimate,
                            neumann_est: WeylEstimate, tol) -> InequalityReport:
    """The c0 = c theorem, empirically: the two tail estimates agree."""
    gap = abs(dirichlet_est.c_hat - neumann_est.c_hat)
    bound = tol * neumann_est.c_hat
    verdict = "pass" if gap <= bound else "fail"
    return InequalityReport(
        "constant-equality", [dirichlet_est.window[1]],
        [dirichlet_est.c_hat], [neumann_est.c_hat], verdict, bound - gap,
        details={"tol": tol, "gap": gap,
                 "dirichlet": weyl_estimate_to_json(dirichlet_est),
                 "neumann": weyl_estimate_to_json(neumann_est)})


# ---------------------------------------------------------------------------
# randomized instances for the property sweeps


def rng_stream(seed, index) -> np.random.Generator:
    """Counter-based stream: same (seed, index) gives the same draws on
    any platform and in any execution order."""
    return np.random.Generator(np.random.Philox(key=int(seed), counter=int(index)))


def random_interval_packing(rng, max_pieces=5) -> Packing:
    """Disjoint scaled unit intervals inside a rational interval."""
    m = int(rng.integers(1, max_pieces + 1))
    weights = [int(w) for w in rng.integers(1, 10, size=2 * m + 1)]
    L = Fraction(int(rng.integers(1, 5)))
    total = sum(weights)
    pos = Fraction(0)
    items = []
    for j, w in enumerate(weights):
        seg = L * Fraction(w, total)
        if j % 2 == 1:
            items.append(PackingItem(seg, (pos,), unit_cube(1)))
        pos += seg
    return Packing("sub", items, interval(L))


def random_interval_partition(rng, max_pieces=6) -> Packing:
    """Null-overlap cover of a rational interval by scaled unit intervals."""
    m = int(rng.integers(2, max_pieces + 1))
    weights = [int(w) for w in rng.integers(1, 10, size=m)]
    L = Fraction(int(rng.integers(1, 5)))
    total = sum(weights)
    pos = Fraction(0)
    items = []
    for w in weights:
        seg = L * Fraction(w, total)
        items.append(PackingItem(seg, (pos,), unit_cube(1)))
        pos += seg
    return Packing("cover", items, interval(L))


def random_box_subpacking(rng, depth_cap=4, keep=0.7) -> Packing:
    """Random dyadic cube packing of a random rational box, thinned."""
    sides = [Fraction(int(rng.integers(3, 9)), 4) for _ in range(2)]
    amb = box([0, 0], sides)
    vol = volume(amb)
    pk = pack_cubes(amb, vol * Fraction(1, 8), depth_cap=depth_cap)
    items = [it for it in pk.items if rng.random() < keep]
    if not items:
        items = [pk.items[0]]
    return Packing("sub", items, amb)


def sweep_dirichlet_monotonicity(count_, seed, kind="interval", p_set=(1.5, 2.0, 3.0),
                                 grid_points=1000, lam_hi=10 ** 4) -> InequalityReport:
    """Randomized (ddm) sweep; the report carries the worst instance."""
    worst = None
    violations = 0
    providers = {p: ExactProvider(p) for p in p_set}
    for i in range(count_):
        rng = rng_stream(seed, i)
        if kind == "interval":
            pk = random_interval_packing(rng)
            p = float(p_set[int(rng.integers(0, len(p_set)))])
        elif kind == "box":
            pk = random_box_subpacking(rng)
            p = 2.0
        else:
            raise ArgumentError(f"unknown sweep kind {kind!r}")
        grid = log_grid(1.0, lam_hi, points=grid_points)
        rep = check_dirichlet_monotonicity(pk, grid, providers[p])
        if rep.verdict == "fail":
            violations += 1
        if worst is None or rep.worst_margin < worst.worst_margin:
            worst = rep
    worst.details.update({"instances": count_, "violations": violations,
                          "seed": int(seed), "kind": kind})
    worst.verdict = "pass" if violations == 0 else "fail"
    return worst


def sweep_neumann_monotonicity(count_, seed, kind="interval", p_set=(1.5, 2.0, 3.0),
                               grid_points=1000, lam_hi=10 ** 4) -> InequalityReport:
    """Randomized (ndm) sweep over interval partitions or square covers."""
    worst = None
    violations = 0
    providers = {p: ExactProvider(p) for p in p_set}
    square_ks = (2, 3, 4)
    for i in range(count_):
        rng = rng_stream(seed, i)
        if kind == "interval":
            pk = random_interval_partition(rng)
            p = float(p_set[int(rng.integers(0, len(p_set)))])
        elif kind == "square":
            k = square_ks[i % len(square_ks)]
            pk = partition_cubes(unit_cube(2), k)
            p = 2.0
        else:
            raise ArgumentError(f"unknown sweep kind {kind!r}")
        grid = log_grid(1.0, lam_hi, points=grid_points)
        rep = check_neumann_monotonicity(pk, grid, providers[p])
        if rep.verdict == "fail":
            violations += 1
        if worst is None or rep.worst_margin < worst.worst_margin:
            worst = rep
    worst.details.update({"instances": count_, "violations": violations,
                          "seed": int(seed), "kind": kind})
    worst.verdict = "pass" if violations == 0 else "fail"
    return worst


def sweep_scaling(count_, seed, grid_points=1000, lam_hi=10 ** 4) -> InequalityReport:
    """Random (domain, a, p) triples: intervals at any p, boxes and tori at p=2."""
    worst = None
    violations = 0
    for i in range(count_):
        rng = rng_stream(seed, i)
        mode = int(rng.integers(0, 3))
        a = Fraction(int(rng.integers(1, 9)), int(rng.integers(1, 9)))
        grid = log_grid(1.0, lam_hi, points=grid_points)
        if mode == 0:
            d = interval(Fraction(int(rng.integers(1, 4))))
            p = float((1.5, 2.0, 3.0, 4.0)[int(rng.integers(0, 4))])
            bc = "dirichlet" if rng.random() < 0.5 else "neumann"
        elif mode == 1:
            d = box([0, 0], [Fraction(int(rng.integers(1, 4))),
                             Fraction(int(rng.integers(1, 4)), 2)])
            p, bc = 2.0, "dirichlet" if rng.random() < 0.5 else "neumann"
        else:
            d = torus([Fraction(int(rng.integers(1, 3))),
                       Fraction(int(rng.integers(1, 3)))])
            p, bc = 2.0, "periodic"
        rep = check_scaling(d, float(a), bc, grid, ExactProvider(p))
        if rep.verdict == "fail":
            violations += 1
        if worst is None or rep.worst_margin < worst.worst_margin:
            worst = rep
    worst.details.update({"instances": count_, "violations": violations,
                          "seed": int(seed)})
    worst.verdict = "pass" if violations == 0 else "fail"
    return worst


def sweep_cutoff(count_, seed, p_set=(1.5, 2.0, 3.0)) -> InequalityReport:
    """Random (eps, lam', lam'', p) cutoff instances on the unit interval."""
    U = interval(1)
    worst = None
    violations = 0
    providers = {p: ExactProvider(p) for p in p_set}
    for i in range(count_):
        rng = rng_stream(seed, i)
        eps = float(rng.uniform(0.02, 0.45))
        lam1 = float(10 ** rng.uniform(0.0, 3.0))
        lam2 = float(10 ** rng.uniform(0.0, 3.0))
        p = float(p_set[int(rng.integers(0, len(p_set)))])
        rep = check_cutoff_inequality(U, eps, lam1, lam2, p, providers[p])
        if rep.verdict == "fail":
            violations += 1
        if worst is None or rep.worst_margin < worst.worst_margin:
            worst = rep
    worst.details.update({"instances": count_, "violations": violations,
                          "seed": int(seed)})
    worst.verdict = "pass" if violations == 0 else "fail"
    return worst


def sweep_energy_split(count_, seed, p_set=(1.5, 2.0, 3.0, 4.0)) -> InequalityReport:
    """Random instances of the two energy split lemmas on interval grids.

    Even entries exercise E(v+w) <= max(E(v), E(w)) for disjointly
    supported Dirichlet fields; odd entries exercise E(u) >=
    min(E(u|_V), E(u|_W)) for Neumann partitions.  lambdas hold the
    instance index; lhs/rhs hold the compared energies.
    """
    idx, lhs, rhs = [], [], []
    violations = 0
    for i in range(count_):
        rng = rng_stream(seed, i)
        m = int(rng.integers(10, 40))
        j = int(rng.integers(3, m - 3))
        d = rasterize(interval(1), 1.0 / m)
        left = submask_domain(d, lambda cells: cells[:, 0] < j)
        right = submask_domain(d, lambda cells: cells[:, 0] >= j)
        p = float(p_set[int(rng.integers(0, len(p_set)))])
        if i % 2 == 0:
            v = Field(left, "dirichlet",
                      rng.standard_normal(len(dirichlet_vertices(left))))
            w = Field(right, "dirichlet",
                      rng.standard_normal(len(dirichlet_vertices(right))))
            u = combine_disjoint(v, w)
            a, b = p_energy(u, p), max(p_energy(v, p), p_energy(w, p))
            ok = a <= b * (1 + 1e-12)
        else:
            u = Field(d, "neumann", rng.standard_normal(int(d.mask.sum())))
            v, w = restrict(u, left), restrict(u, right)
            a, b = min(p_energy(v, p), p_energy(w, p)), p_energy(u, p)
            ok = b >= a * (1 - 1e-12)
        idx.append(float(i + 1))
        lhs.append(a)
        rhs.append(b)
        if not ok:
            violations += 1
    margins = np.asarray(rhs) - np.asarray(lhs)
    return InequalityReport(
        "energy-split", idx, lhs, rhs,
        "pass" if violations == 0 else "fail", float(margins.min()),
        details={"instances": count_, "violations": violations,
                 "seed": int(seed),
                 "note": "lambdas column holds the instance index"})
