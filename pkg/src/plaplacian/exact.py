"""Closed-form and oracle-grade spectra.

1D p-Laplacian eigenvalues for every p > 1 come from the generalized
sine function (parameterized by pi_p) and are certified against an
independent shooting oracle.  For p = 2, box and flat-torus spectra are
enumerated exactly from the separation-of-variables lattice formulas.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

from .domains import Domain, volume
from .errors import ArgumentError, ResourceError, SolverError, UnsupportedError

COUNT_CAP = 10 ** 7


class Spectrum:
    """Sorted eigenvalues with multiplicities.

    values      strictly increasing 1d float array
    mults       positive int array, same length
    p, bc, n    problem parameters (bc in dirichlet | neumann | periodic)
    exactness   'exact' | 'oracle' | 'discrete' | 'variational'
    """

    def __init__(self, values, mults, p, bc, n, domain_volume, exactness,
                 meta=None):
        self.values = np.asarray(values, dtype=float)
        self.mults = np.asarray(mults, dtype=np.int64)
        self.p = float(p)
        self.bc = bc
        self.n = int(n)
        self.domain_volume = float(domain_volume)
        self.exactness = exactness
        self.meta = dict(meta) if meta else {}
        if self.values.ndim != 1 or self.values.shape != self.mults.shape:
            raise ArgumentError("values and multiplicities must align")
        if len(self.values) and np.any(np.diff(self.values) <= 0):
            raise ArgumentError("spectrum values must be strictly increasing")
        if np.any(self.mults <= 0):
            raise ArgumentError("multiplicities must be positive")
        if bc == "dirichlet" and len(self.values) and self.values[0] <= 0:
            raise ArgumentError("dirichlet spectra are strictly positive")
        # cumulative multiplicities make counting a binary search
        self._cum = np.concatenate([[0], np.cumsum(self.mults)])

    def __len__(self):
        return int(self._cum[-1])

    def __repr__(self):
        return (f"Spectrum(p={self.p}, bc={self.bc}, n={self.n}, "
                f"{len(self.values)} distinct, exactness={self.exactness})")


def spectrum_to_json(s: Spectrum) -> dict:
    obj = {"p": s.p, "bc": s.bc, "n": s.n, "domain_volume": s.domain_volume,
           "exactness": s.exactness,
           "eigenvalues": [[float(v), int(m)] for v, m in zip(s.values, s.mults)]}
    if s.meta:
        obj["meta"] = s.meta
    return obj


def spectrum_from_json(obj: dict) -> Spectrum:
    pairs = obj["eigenvalues"]
    return Spectrum([v for v, _ in pairs], [m for _, m in pairs], obj["p"],
                    obj["bc"], obj["n"], obj["domain_volume"],
                    obj["exactness"], meta=obj.get("meta"))


def spectrum_to_csv(s: Spectrum) -> str:
    lines = ["value,multiplicity"]
    lines += [f"{float(v)!r},{int(m)}" for v, m in zip(s.values, s.mults)]
    return "\n".join(lines) + "\n"


def pi_p(p) -> float:
    """Generalized half-period 2*pi / (p*sin(pi/p)); pi_2 = pi."""
    if p <= 1:
        raise ArgumentError("pi_p requires p > 1")
    return 2.0 * math.pi / (p * math.sin(math.pi / p))


@njit(cache=True)
def _zero_count(lam, p, L, nsteps):
    """Zeros of u in (0, L] for the shooting solution of
    -(|u'|^{p-2}u')' = lam |u|^{p-2} u, u(0)=0, u'(0)=1.

    Integrates the first-order system u' = |phi|^{q-2} phi,
    phi' = -lam |u|^{p-2} u with fixed-step RK4; the system form avoids
    differentiating |u'|^{p-2} through u' = 0.  Returns -1 on a
    non-finite state.
    """
    q = p / (p - 1.0)
    eu = q - 1.0
    ep = p - 1.0
    h = L / nsteps
    u = 0.0
    phi = 1.0
    zeros = 0
    for _ in range(nsteps):
        if eu == 1.0:
            k1u = phi
        else:
            k1u = math.copysign(abs(phi) ** eu, phi)
        if ep == 1.0:
            k1p = -lam * u
        else:
            k1p = -lam * math.copysign(abs(u) ** ep, u)
        u2 = u + 0.5 * h * k1u
        p2 = phi + 0.5 * h * k1p
        if eu == 1.0:
            k2u = p2
        else:
            k2u = math.copysign(abs(p2) ** eu, p2)
        if ep == 1.0:
            k2p = -lam * u2
        else:
            k2p = -lam * math.copysign(abs(u2) ** ep, u2)
        u3 = u + 0.5 * h * k2u
        p3 = phi + 0.5 * h * k2p
        if eu == 1.0:
            k3u = p3
        else:
            k3u = math.copysign(abs(p3) ** eu, p3)
        if ep == 1.0:
            k3p = -lam * u3
        else:
            k3p = -lam * math.copysign(abs(u3) ** ep, u3)
        u4 = u + h * k3u
        p4 = phi + h * k3p
        if eu == 1.0:
            k4u = p4
        else:
            k4u = math.copysign(abs(p4) ** eu, p4)
        if ep == 1.0:
            k4p = -lam * u4
        else:
            k4p = -lam * math.copysign(abs(u4) ** ep, u4)
        unew = u + (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u)
        pnew = phi + (h / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        if not (math.isfinite(unew) and math.isfinite(pnew)):
            return -1
        if (unew < 0.0 and u > 0.0) or (unew > 0.0 and u < 0.0):
            zeros += 1
        u = unew
        phi = pnew
    return zeros


def _indicator(lam, p, L, k, nsteps):
    z = _zero_count(lam, p, L, nsteps)
    if z < 0:
        raise SolverError(
            f"shooting integrator went non-finite at lam={lam}, p={p}, L={L}",
            trace=[lam, p, L, nsteps])
    return z >= k


def shooting_eigenvalue_1d(p, L, k, nsteps=100_000, rtol=1e-10, lo=0.0) -> float:
    """k-th 1D Dirichlet eigenvalue by shooting: bisect lam until the
    k-th interior zero crosses x = L.

    Independent of the closed form; serves as its certifying oracle.
    A coarse pass (nsteps/8) brackets the eigenvalue cheaply, then the
    full-resolution pass bisects to width rtol*lam.
    """
    if p <= 1 or L <= 0 or k < 1:
        raise ArgumentError("need p > 1, L > 0, k >= 1")
    coarse = max(nsteps // 8, 1000)
    hi = max(2.0 * lo, 1.0)
    while not _indicator(hi, p, L, k, coarse):
        lo = hi
        hi *= 2.0
        if hi > 1e300:
            raise SolverError("shooting bracket search diverged")
    # coarse bisection: indicator error is far below this bracket width
    while hi - lo > 1e-5 * hi:
        mid = 0.5 * (lo + hi)
        if _indicator(mid, p, L, k, coarse):
            hi = mid
        else:
            lo = mid
    # re-bracket at full resolution, widening defensively
    pad = (hi - lo)
    for _ in range(40):
        flo, fhi = max(lo - pad, 0.0), hi + pad
        if (not _indicator(flo, p, L, k, nsteps)) and _indicator(fhi, p, L, k, nsteps):
            break
        pad *= 2.0
    else:
        raise SolverError(f"could not re-bracket eigenvalue k={k} at full resolution")
    lo, hi = flo, fhi
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if _indicator(mid, p, L, k, nsteps):
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


def shooting_eigenvalues_1d(p, L, kmax, nsteps=100_000, rtol=1e-10):
    """Eigenvalues k = 1..kmax, warm-starting each bracket at the last."""
    out = np.empty(kmax)
    lo = 0.0
    for k in range(1, kmax + 1):
        out[k - 1] = shooting_eigenvalue_1d(p, L, k, nsteps=nsteps, rtol=rtol, lo=lo)
        lo = out[k - 1]
    return out


def lambda_1d(p, L, k) -> float:
    """Closed-form 1D eigenvalue (p-1)*(k*pi_p/L)^p."""
    return (p - 1.0) * (k * pi_p(p) / float(L)) ** p


def spectrum_1d(p, L, bc, lam_max) -> Spectrum:
    """All 1D eigenvalues below lam_max on an interval of length L.

    Dirichlet: (p-1)*(k*pi_p/L)^p, k >= 1.  Neumann: same with k >= 0.
    """
    if lam_max <= 0:
        raise ArgumentError("lam_max must be positive")
    if bc not in ("dirichlet", "neumann"):
        raise ArgumentError(f"unsupported bc {bc!r} for an interval")
    L = float(L)
    pp = pi_p(p)
    # largest k with (p-1)(k pi_p/L)^p < lam_max
    kmax = int(math.floor((lam_max / (p - 1.0)) ** (1.0 / p) * L / pp))
    while lambda_1d(p, L, kmax + 1) < lam_max:
        kmax += 1
    while kmax >= 1 and lambda_1d(p, L, kmax) >= lam_max:
        kmax -= 1
    ks = np.arange(1, kmax + 1, dtype=float)
    values = (p - 1.0) * (ks * pp / L) ** p
    if bc == "neumann":
        values = np.concatenate([[0.0], values])
    mults = np.ones(len(values), dtype=np.int64)
    return Spectrum(values, mults, p, bc, 1, L, "exact")


def _merge_multiplicities(values, tol=1e-9):
    values = np.sort(np.asarray(values, dtype=float))
    if values.size == 0:
        return values, np.zeros(0, dtype=np.int64)
    gaps = np.diff(values) > tol * np.maximum(values[1:], 1e-12)
    bounds = np.flatnonzero(gaps) + 1
    groups = np.split(values, bounds)
    merged = np.array([g.mean() for g in groups])
    mults = np.array([len(g) for g in groups], dtype=np.int64)
    return merged, mults


def _accumulate_axes(axis_terms, lam_max, count_cap):
    acc = np.zeros(1)
    for terms in axis_terms:
        acc = (acc[:, None] + terms[None, :]).ravel()
        acc = acc[acc < lam_max]
        if acc.size > count_cap:
            raise ResourceError(
                f"lattice enumeration exceeds the cap of {count_cap} points")
    return acc


def box_spectrum_p2(sides, bc, lam_max, count_cap=COUNT_CAP) -> Spectrum:
    """Exact p=2 spectrum of a box: pi^2 * sum (k_i/L_i)^2 with k_i >= 1
    (dirichlet) or k_i >= 0 (neumann), enumerated below lam_max."""
    if lam_max <= 0:
        raise ArgumentError("lam_max must be positive")
    if bc not in ("dirichlet", "neumann"):
        raise ArgumentError(f"unsupported bc {bc!r} for a box")
    sides = [float(s) for s in sides]
    if any(s <= 0 for s in sides):
        raise ArgumentError("box sides must be positive")
    axis_terms = []
    for L in sides:
        kmax = int(math.floor(math.sqrt(lam_max) * L / math.pi)) + 1
        k0 = 1 if bc == "dirichlet" else 0
        ks = np.arange(k0, kmax + 1, dtype=float)
        axis_terms.append((math.pi * ks / L) ** 2)
    acc = _accumulate_axes(axis_terms, lam_max, count_cap)
    values, mults = _merge_multiplicities(acc)
    return Spectrum(values, mults, 2.0, bc, len(sides), math.prod(sides), "exact")


def torus_spectrum_p2(periods, lam_max, count_cap=COUNT_CAP) -> Spectrum:
    """Exact p=2 spectrum of a flat torus: 4*pi^2 * sum (k_i/L_i)^2 over
    integer vectors k, enumerated with multiplicity below lam_max."""
    if lam_max <= 0:
        raise ArgumentError("lam_max must be positive")
    periods = [float(L) for L in periods]
    if any(L <= 0 for L in periods):
        raise ArgumentError("torus periods must be positive")
    axis_terms = []
    for L in periods:
        kmax = int(math.floor(math.sqrt(lam_max) * L / (2 * math.pi))) + 1
        ks = np.arange(-kmax, kmax + 1, dtype=float)
        axis_terms.append((2 * math.pi * ks / L) ** 2)
    acc = _accumulate_axes(axis_terms, lam_max, count_cap)
    values, mults = _merge_multiplicities(acc)
    return Spectrum(values, mults, 2.0, "periodic", len(periods),
                    math.prod(periods), "exact")


def exact_spectrum(d: Domain, p, bc, lam_max, count_cap=COUNT_CAP) -> Spectrum:
    """Exact spectrum dispatcher.

    Intervals support every p > 1; single boxes and tori are p=2 only.
    Anything else has no exact spectrum here.
    """
    if d.kind == "interval":
        return spectrum_1d(p, d.boxes[0][1][0], bc, lam_max)
    if d.kind == "torus":
        if p != 2:
            raise UnsupportedError("torus spectra are exact only at p=2")
        return torus_spectrum_p2(d.periods, lam_max, count_cap=count_cap)
    if d.kind == "box-union":
        if len(d.boxes) != 1:
            raise UnsupportedError(
                "box unions have no exact spectrum; use sandwich_weyl for two-sided counts")
        if p != 2:
            raise UnsupportedError(
                "box spectra are exact only at p=2; 1D intervals cover general p")
        _, sides = d.boxes[0]
        if d.n == 1:
            return spectrum_1d(p, sides[0], bc, lam_max)
        return box_spectrum_p2(sides, bc, lam_max, count_cap=count_cap)
    raise UnsupportedError(f"no exact spectrum for domain kind {d.kind!r}")


def scale_spectrum(s: Spectrum, a) -> Spectrum:
    """Spectrum of the domain scaled by a: eigenvalues divide by a^p."""
    a = float(a)
    if a <= 0:
        raise ArgumentError("scale factor must be positive")
    return Spectrum(s.values / a ** s.p, s.mults.copy(), s.p, s.bc, s.n,
                    s.domain_volume * a ** s.n, s.exactness, meta=s.meta)


def weyl_constant_1d(p) -> float:
    """Limit of lam^{-1/p} N(lam) on the unit interval: (p-1)^{-1/p} / pi_p."""
    return (p - 1.0) ** (-1.0 / p) / pi_p(p)
