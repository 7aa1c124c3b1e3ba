"""The discrete p-Dirichlet energy and its gradient.

Fields live on grid-mask domains.  Dirichlet fields carry one value per
interior vertex (every incident cell in the mask; all other vertices
are ghost zeros), Neumann fields one value per cell center.  With this
layout the energy numerator is a plain sum of |forward difference|^p
terms, its gradient is exactly computable, and at p = 2 the quotient
coincides with the Rayleigh quotient of the assembled stencil matrix.
"""
from __future__ import annotations

import itertools

import numpy as np

from .domains import Domain
from .errors import ArgumentError

DELTA = 1e-12  # gradient regularization |grad u|^2 -> |grad u|^2 + DELTA^2 at p < 2


def dirichlet_vertices(d: Domain) -> np.ndarray:
    """Indices (m, n) of vertices whose 2^n incident cells all lie in the mask."""
    if d.kind != "grid-mask":
        raise ArgumentError("fields require a grid-mask domain")
    mask = d.mask
    n = d.n
    # vertex v is interior iff cells v-delta for delta in {0,1}^n are in the mask
    inner = None
    padded = np.pad(mask, 1, constant_values=False)
    for delta in itertools.product((0, 1), repeat=n):
        sl = tuple(slice(1 - dl, padded.shape[ax] - dl - 1)
                   for ax, dl in enumerate(delta))
        block = padded[sl]
        inner = block if inner is None else (inner & block)
    # inner has vertex-grid shape (s+1 per axis)
    return np.argwhere(inner)


def neumann_cells(d: Domain) -> np.ndarray:
    if d.kind != "grid-mask":
        raise ArgumentError("fields require a grid-mask domain")
    return np.argwhere(d.mask)


def dof_indices(d: Domain, bc: str) -> np.ndarray:
    if bc == "dirichlet":
        return dirichlet_vertices(d)
    if bc == "neumann":
        return neumann_cells(d)
    raise ArgumentError(f"unknown boundary condition {bc!r}")


def dof_coordinates(d: Domain, bc: str) -> np.ndarray:
    """Physical coordinates of the degrees of freedom."""
    idx = dof_indices(d, bc).astype(float)
    origin = np.array([float(x) for x in d.origin])
    if bc == "dirichlet":
        return origin + idx * d.h
    return origin + (idx + 0.5) * d.h


class Field:
    """Node values over a grid-mask domain with a boundary-condition tag."""

    def __init__(self, domain: Domain, bc: str, values):
        if bc not in ("dirichlet", "neumann"):
            raise ArgumentError(f"unknown boundary condition {bc!r}")
        self.domain = domain
        self.bc = bc
        self.values = np.asarray(values, dtype=float).ravel()
        expected = len(dof_indices(domain, bc))
        if len(self.values) != expected:
            raise ArgumentError(
                f"expected {expected} node values for this domain/bc, got {len(self.values)}")

    def copy_with(self, values) -> "Field":
        return Field(self.domain, self.bc, values)

    def __repr__(self):
        return f"Field({self.bc}, dofs={len(self.values)})"


def field_from_callable(d: Domain, bc: str, fn) -> Field:
    coords = dof_coordinates(d, bc)
    return Field(d, bc, np.array([fn(*xy) for xy in coords]))


def field_to_bytes(u: Field) -> bytes:
    return u.values.astype("<f8").tobytes()


def field_from_bytes(d: Domain, bc: str, data: bytes) -> Field:
    return Field(d, bc, np.frombuffer(data, dtype="<f8"))


def _dense_vertex(u: Field) -> np.ndarray:
    shape = tuple(s + 1 for s in u.domain.mask.shape)
    V = np.zeros(shape)
    idx = dirichlet_vertices(u.domain)
    V[tuple(idx.T)] = u.values
    return V


def _dense_cells(u: Field) -> np.ndarray:
    C = np.zeros(u.domain.mask.shape)
    C[u.domain.mask] = u.values
    return C


def _scaled_diffs(u: Field):
    """Per-axis forward differences / h on the cell grid.

    Dirichlet: differences of the zero-extended vertex array; every
    lattice edge touching an interior vertex is represented.  Neumann:
    differences between mask-adjacent cells; missing neighbors zero the
    component (one-sided / zero-flux).
    """
    d = u.domain
    n, h = d.n, d.h
    shape = d.mask.shape
    out = []
    if u.bc == "dirichlet":
        V = _dense_vertex(u)
        for ax in range(n):
            D = np.diff(V, axis=ax)
            sl = tuple(slice(0, shape[j]) if j != ax else slice(None)
                       for j in range(n))
            out.append(D[sl] / h)
    else:
        C = _dense_cells(u)
        M = d.mask
        for ax in range(n):
            D = np.zeros(shape)
            lo = tuple(slice(0, -1) if j == ax else slice(None) for j in range(n))
            hi = tuple(slice(1, None) if j == ax else slice(None) for j in range(n))
            edge = M[lo] & M[hi]
            D[lo] = np.where(edge, C[hi] - C[lo], 0.0)
            out.append(D / h)
    return out


def energy_parts(u: Field, p):
    """(numerator, denominator) Riemann sums of the energy quotient."""
    if p <= 1:
        raise ArgumentError("p must exceed 1")
    d = u.domain
    hn = d.h ** d.n
    diffs = _scaled_diffs(u)
    sq = sum(D * D for D in diffs)
    num = hn * float(np.sum(sq ** (p / 2.0)))
    den = hn * float(np.sum(np.abs(u.values) ** p))
    return num, den


def p_energy(u: Field, p) -> float:
    """E(u) = int |grad u|^p / int |u|^p over the grid."""
    num, den = energy_parts(u, p)
    if den == 0.0:
        raise ArgumentError("p_energy of an identically zero field")
    return num / den


def normalize(u: Field, mode: str, p) -> Field:
    """Scale u so that the chosen norm is 1; the energy is 0-homogeneous
    so this never changes p_energy."""
    num, den = energy_parts(u, p)
    if mode == "gradient-Lp":
        if num == 0.0:
            raise ArgumentError("cannot gradient-normalize a constant field")
        scale = num ** (-1.0 / p)
    elif mode == "sobolev-W1p":
        if num + den == 0.0:
            raise ArgumentError("cannot normalize the zero field")
        scale = (num + den) ** (-1.0 / p)
    else:
        raise ArgumentError(f"unknown normalization mode {mode!r}")
    return u.copy_with(u.values * scale)


def energy_gradient_numerator(u: Field, p) -> np.ndarray:
    """Gradient of u -> (1/p) * h^n * sum |grad u|^p wrt the node values.

    At p < 2 the weight |grad u|^{p-2} is regularized by DELTA; energy
    values themselves stay unregularized.
    """
    d = u.domain
    n, h = d.n, d.h
    shape = d.mask.shape
    diffs = _scaled_diffs(u)
    sq = sum(D * D for D in diffs)
    if p < 2:
        sq = sq + DELTA ** 2
    with np.errstate(divide="ignore", invalid="ignore"):
        W = np.where(sq > 0, sq ** ((p - 2.0) / 2.0), 0.0)
    factor = h ** (n - 1)
    if u.bc == "dirichlet":
        G = np.zeros(tuple(s + 1 for s in shape))
        for ax in range(n):
            F = W * diffs[ax]
            lo = tuple(slice(0, shape[j]) for j in range(n))
            hi = tuple(slice(1, shape[j] + 1) if j == ax else slice(0, shape[j])
                       for j in range(n))
            G[hi] += F
            G[lo] -= F
        idx = dirichlet_vertices(d)
        return factor * G[tuple(idx.T)]
    G = np.zeros(shape)
    for ax in range(n):
        F = W * diffs[ax]
        lo = tuple(slice(0, -1) if j == ax else slice(None) for j in range(n))
        hi = tuple(slice(1, None) if j == ax else slice(None) for j in range(n))
        G[hi] += F[lo]
        G[lo] -= F[lo]
    return factor * G[d.mask]


def discrete_p_laplacian(u: Field, p) -> Field:
    """Discrete weak p-Laplacian: the gradient of the energy numerator.

    For p = 2 this is h^n times the standard (2n+1)-point stencil
    applied to u.
    """
    if p <= 1:
        raise ArgumentError("p must exceed 1")
    return u.copy_with(energy_gradient_numerator(u, p))


def _lattice_shift(a: Domain, b: Domain):
    """Integer cell offset of domain a inside domain b (same h lattice)."""
    if abs(a.h - b.h) > 1e-12 * b.h:
        raise ArgumentError("grid spacings differ")
    shift = []
    for ax in range(a.n):
        diff = (float(a.origin[ax]) - float(b.origin[ax])) / b.h
        k = round(diff)
        if abs(diff - k) > 1e-9:
            raise ArgumentError("grids are not on a common lattice")
        shift.append(int(k))
    return tuple(shift)


def combine_disjoint(v: Field, w: Field) -> Field:
    """Zero-extended sum of fields on disjoint subdomains.

    The union field's energy satisfies E(v+w) <= max(E(v), E(w)): for
    Dirichlet layouts both Riemann sums add exactly; for Neumann the
    extra cross edges only enlarge the numerator of the comparison side.
    """
    if v.bc != w.bc:
        raise ArgumentError("cannot combine fields with different boundary conditions")
    if v.domain.n != w.domain.n or abs(v.domain.h - w.domain.h) > 1e-12 * w.domain.h:
        raise ArgumentError("fields live on incompatible grids")
    n, h = v.domain.n, v.domain.h
    origin = tuple(
        v.domain.origin[ax] if float(v.domain.origin[ax]) <= float(w.domain.origin[ax])
        else w.domain.origin[ax]
        for ax in range(n))
    base = Domain("grid-mask", n, mask=np.ones((1,) * n, dtype=bool), origin=origin, h=h)
    sv = _lattice_shift(v.domain, base)
    sw = _lattice_shift(w.domain, base)
    shape = tuple(max(sv[ax] + v.domain.mask.shape[ax], sw[ax] + w.domain.mask.shape[ax])
                  for ax in range(n))
    mask = np.zeros(shape, dtype=bool)
    slv = tuple(slice(sv[ax], sv[ax] + v.domain.mask.shape[ax]) for ax in range(n))
    slw = tuple(slice(sw[ax], sw[ax] + w.domain.mask.shape[ax]) for ax in range(n))
    overlap = np.zeros(shape, dtype=bool)
    overlap[slv] |= v.domain.mask
    if (overlap[slw] & w.domain.mask).any():
        raise ArgumentError("fields have overlapping supports")
    mask[slv] |= v.domain.mask
    mask[slw] |= w.domain.mask
    union = Domain("grid-mask", n, mask=mask, origin=origin, h=h)
    if v.bc == "neumann":
        C = np.zeros(shape)
        cv = np.zeros(v.domain.mask.shape)
        cv[v.domain.mask] = v.values
        cw = np.zeros(w.domain.mask.shape)
        cw[w.domain.mask] = w.values
        C[slv] += cv
        C[slw] += cw
        return Field(union, "neumann", C[mask])
    V = np.zeros(tuple(s + 1 for s in shape))
    for f, sh in ((v, sv), (w, sw)):
        idx = dirichlet_vertices(f.domain)
        V[tuple((idx + np.array(sh)).T)] = f.values
    idx = dirichlet_vertices(union)
    return Field(union, v.bc, V[tuple(idx.T)])


def restrict(u: Field, s: Domain) -> Field:
    """Restriction of u to the subdomain s (cellwise containment required)."""
    if s.kind != "grid-mask":
        raise ArgumentError("restriction target must be a grid-mask domain")
    shift = _lattice_shift(s, u.domain)
    sl = tuple(slice(shift[ax], shift[ax] + s.mask.shape[ax]) for ax in range(u.domain.n))
    for ax in range(u.domain.n):
        if sl[ax].stop > u.domain.mask.shape[ax] or sl[ax].start < 0:
            raise ArgumentError("subdomain extends outside the field's domain")
    if not np.all(u.domain.mask[sl] >= s.mask):
        raise ArgumentError("subdomain cells are not all contained in the field's domain")
    if u.bc == "neumann":
        C = _dense_cells(u)
        return Field(s, "neumann", C[sl][s.mask])
    V = _dense_vertex(u)
    vsl = tuple(slice(shift[ax], shift[ax] + s.mask.shape[ax] + 1)
                for ax in range(u.domain.n))
    idx = dirichlet_vertices(s)
    return Field(s, "dirichlet", V[vsl][tuple(idx.T)])


def submask_domain(d: Domain, cell_predicate) -> Domain:
    """Subdomain of the cells where cell_predicate(index_array) holds."""
    keep = np.zeros_like(d.mask)
    cells = np.argwhere(d.mask)
    flags = cell_predicate(cells)
    keep[tuple(cells[flags].T)] = True
    return Domain("grid-mask", d.n, mask=keep, origin=d.origin, h=d.h)
