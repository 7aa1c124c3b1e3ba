"""Finite-difference spectra (p=2) and the variational first eigenvalue
for general p on grid-mask domains."""
from __future__ import annotations

import math

import numpy as np
import scipy.linalg
import scipy.ndimage
import scipy.optimize
import scipy.sparse

from .domains import Domain, volume
from .energy import (
    Field, dirichlet_vertices, energy_gradient_numerator, energy_parts,
    neumann_cells, p_energy,
)
from .errors import ArgumentError, ResourceError, SolverError
from .exact import Spectrum, _merge_multiplicities

DIM_CAP = 20_000


def _check_connected(d: Domain):
    structure = scipy.ndimage.generate_binary_structure(d.n, 1)
    _, count = scipy.ndimage.label(d.mask, structure=structure)
    if count != 1:
        raise ArgumentError(
            f"mask has {count} connected components; request each separately")


class DiscreteOperator:
    """Symmetric sparse FD Laplacian over the degrees of freedom.

    Dirichlet rows act on interior vertices with ghost zeros; Neumann
    rows act on cell centers with zero-flux (mirror) ghosts.
    """

    def __init__(self, matrix, h, bc, dof_index, domain: Domain):
        self.matrix = matrix
        self.h = float(h)
        self.bc = bc
        self.dof_index = dof_index
        self.domain = domain

    @property
    def dim(self):
        return self.matrix.shape[0]

    def __repr__(self):
        return f"DiscreteOperator({self.bc}, dim={self.dim}, h={self.h})"


def assemble_fd(d: Domain, bc: str) -> DiscreteOperator:
    """Standard (2n+1)-point stencil scaled by h^-2 on a grid mask."""
    if d.kind != "grid-mask":
        raise ArgumentError("assemble_fd requires a grid-mask domain")
    _check_connected(d)
    n, h = d.n, d.h
    if bc == "dirichlet":
        dofs = dirichlet_vertices(d)
        grid_shape = tuple(s + 1 for s in d.mask.shape)
    elif bc == "neumann":
        dofs = neumann_cells(d)
        grid_shape = d.mask.shape
    else:
        raise ArgumentError(f"unknown boundary condition {bc!r}")
    m = len(dofs)
    if m == 0:
        raise ArgumentError("mask admits no degrees of freedom at this bc")
    ids = -np.ones(grid_shape, dtype=np.int64)
    ids[tuple(dofs.T)] = np.arange(m)
    rows, cols, vals = [], [], []
    inv_h2 = 1.0 / h ** 2
    deg = np.zeros(m)
    for ax in range(n):
        lo = tuple(slice(0, -1) if j == ax else slice(None) for j in range(n))
        hi = tuple(slice(1, None) if j == ax else slice(None) for j in range(n))
        a, b = ids[lo].ravel(), ids[hi].ravel()
        both = (a >= 0) & (b >= 0)
        a, b = a[both], b[both]
        rows.extend([a, b])
        cols.extend([b, a])
        vals.extend([-inv_h2 * np.ones(len(a))] * 2)
        if bc == "neumann":
            np.add.at(deg, a, 1.0)
            np.add.at(deg, b, 1.0)
    if bc == "dirichlet":
        diag = 2.0 * n * inv_h2 * np.ones(m)
    else:
        diag = deg * inv_h2
    rows.append(np.arange(m))
    cols.append(np.arange(m))
    vals.append(diag)
    mat = scipy.sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(m, m)).tocsr()
    return DiscreteOperator(mat, h, bc, dofs, d)


def eigensolve_p2(op: DiscreteOperator, dim_cap=DIM_CAP, merge_tol=1e-9) -> Spectrum:
    """Full dense symmetric eigendecomposition of the FD operator."""
    if op.dim > dim_cap:
        raise ResourceError(f"operator dimension {op.dim} exceeds the cap {dim_cap}")
    dense = op.matrix.toarray()
    lams, vecs = scipy.linalg.eigh(dense)
    scale = max(abs(lams[0]), abs(lams[-1]))
    resid = np.linalg.norm(dense @ vecs - vecs * lams, axis=0)
    worst = float(resid.max()) / scale
    if worst > 1e-8:
        raise SolverError(f"eigensolve residual {worst:.2e} exceeds 1e-8", trace=[worst])
    if op.bc == "neumann":
        lams = lams.copy()
        lams[np.abs(lams) <= 1e-9 * scale] = 0.0
    values, mults = _merge_multiplicities(lams, tol=merge_tol)
    return Spectrum(values, mults, 2.0, op.bc, op.domain.n, volume(op.domain),
                    "discrete", meta={"h": op.h, "dim": op.dim})


def trusted_count_threshold(op: DiscreteOperator, rel_err) -> float:
    """Largest lam for which discrete eigenvalues below lam track their
    continuum counterparts within rel_err.

    Calibrated from the 1D stencil identity lam_h = lam * sinc^2(w h/2)
    (w the axis frequency, lam = w^2): the worst case puts the whole
    frequency budget on one axis, so solve 1 - sinc^2(sqrt(lam) h/2) =
    rel_err.  A heuristic extrapolation to boxes, validated against the
    exact lattice counts.
    """
    if not (0 < rel_err <= 0.1):
        raise ArgumentError("rel_err must lie in (0, 0.1]")
    f = lambda x: 1.0 - (math.sin(x) / x) ** 2 - rel_err
    x = scipy.optimize.brentq(f, 1e-9, math.pi / 2, xtol=1e-14)
    return (2.0 * x / op.h) ** 2


def flatten_spectrum(s: Spectrum) -> np.ndarray:
    """Eigenvalues repeated by multiplicity."""
    return np.repeat(s.values, s.mults)


def min_p_rayleigh(d: Domain, p, bc="dirichlet", tol=1e-8, max_outer=10_000,
                   inner_reduction=0.05, inner_cap=2_000_000, return_trace=False):
    """Minimize the p-Rayleigh quotient over Dirichlet fields.

    Inverse-power style outer iteration: given the current normalized
    iterate u with energy lam, the strictly convex inner problem

        min_v  (1/p) sum |grad v|^p h^n  -  sum |u|^{p-2} u v h^n

    is solved approximately by gradient descent with Armijo
    backtracking, warm-started at v = lam^{-1/(p-1)} u, which makes the
    outer energy sequence non-increasing for any number of inner steps.
    Returns (lam1, u1) or (lam1, u1, trace) with the per-outer energies.

    tol stops the outer loop once the relative energy decrease per
    iteration drops below it.  Pushing tol far below what the inner
    accuracy supports (roughly inner_reduction squared) buys nothing
    and stretches the run: each outer then shaves only a sliver above
    tol, so tighten inner_reduction together with tol.
    """
    if bc != "dirichlet":
        raise ArgumentError(
            "variational solver is dirichlet-only; the first Neumann "
            "eigenvalue is 0 with constant eigenfunction")
    if p <= 1:
        raise ArgumentError("p must exceed 1")
    if d.kind != "grid-mask":
        raise ArgumentError("min_p_rayleigh requires a grid-mask domain")
    _check_connected(d)
    m = len(dirichlet_vertices(d))
    if m == 0:
        raise ArgumentError("mask admits no interior vertices; refine the grid")
    hn = d.h ** d.n

    def lp_normalize(vals):
        nrm = (hn * np.sum(np.abs(vals) ** p)) ** (1.0 / p)
        return vals / nrm

    def numerator(vals):
        return energy_parts(Field(d, "dirichlet", vals), p)[0]

    u = lp_normalize(np.ones(m))
    lam = numerator(u)
    trace = [lam]
    inner_used = 0
    for _ in range(max_outer):
        b = hn * np.abs(u) ** (p - 1.0) * np.sign(u)
        v = lam ** (-1.0 / (p - 1.0)) * u

        def phi(vals):
            return numerator(vals) / p - float(b @ vals)

        g = energy_gradient_numerator(Field(d, "dirichlet", v), p) - b
        gnorm0 = float(np.linalg.norm(g))
        fval = phi(v)
        step = 1.0
        while gnorm0 > 0 and float(np.linalg.norm(g)) > inner_reduction * gnorm0:
            inner_used += 1
            if inner_used > inner_cap:
                raise SolverError(
                    f"inner gradient descent exceeded {inner_cap} iterations",
                    trace=trace)
            gsq = float(g @ g)
            s = step
            while True:
                trial = v - s * g
                ftrial = phi(trial)
                if ftrial <= fval - 1e-4 * s * gsq:
                    break
                s *= 0.5
                if s < 1e-18:
                    break
            if s < 1e-18:
                break
            v, fval = trial, ftrial
            step = min(1.0, 2.0 * s)
            g = energy_gradient_numerator(Field(d, "dirichlet", v), p) - b
        u_new = lp_normalize(v)
        lam_new = numerator(u_new)
        if lam_new > lam * (1.0 + 1e-12):
            raise SolverError(
                f"energy increased from {lam} to {lam_new}", trace=trace)
        done = abs(lam_new - lam) <= tol * lam
        u, lam = u_new, lam_new
        trace.append(lam)
        if done:
            field = Field(d, "dirichlet", u if u.sum() >= 0 else -u)
            if return_trace:
                return lam, field, trace
            return lam, field
    raise SolverError(f"no convergence after {max_outer} outer iterations",
                      trace=trace)


def convergence_order(hs, errors) -> float:
    """Least-squares slope of log(error) against log(h)."""
    hs = np.asarray(hs, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if np.any(errors <= 0):
        raise ArgumentError("errors must be positive to fit an order")
    slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    return float(slope)
