"""Computational domains and cube packings.

Domains are intervals, axis-aligned box unions, rasterized grid masks,
and flat tori.  Box coordinates are stored as exact rationals so that
packing validation (disjointness, containment, volume accounting) is
free of round-off; conversion to float happens at the solver boundary.
"""
from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np

from .errors import ArgumentError, PackingError, ValidationError

KINDS = ("interval", "box-union", "grid-mask", "torus")


def _frac(x) -> Fraction:
    """Exact rational from int, float, Fraction, or 'p/q' string."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, (float, np.floating)):
        return Fraction(float(x))
    raise ArgumentError(f"cannot interpret {x!r} as an exact coordinate")


def _frac_vec(xs) -> tuple:
    return tuple(_frac(x) for x in xs)


class Domain:
    """A computational region.

    kind      one of 'interval', 'box-union', 'grid-mask', 'torus'
    n         spatial dimension
    boxes     tuple of (corner, sides) Fraction tuples (interval, box-union)
    periods   Fraction tuple (torus)
    mask      boolean cell array (grid-mask), origin + spacing h attached
    """

    def __init__(self, kind, n, boxes=(), periods=(), mask=None, origin=(), h=0.0):
        if kind not in KINDS:
            raise ArgumentError(f"unknown domain kind {kind!r}")
        if n < 1:
            raise ArgumentError("dimension must be positive")
        self.kind = kind
        self.n = int(n)
        self.boxes = tuple((tuple(c), tuple(s)) for c, s in boxes)
        self.periods = tuple(periods)
        self.mask = None if mask is None else np.asarray(mask, dtype=bool)
        self.origin = tuple(origin)
        self.h = float(h)
        self._validate()

    def _validate(self):
        if self.kind in ("interval", "box-union"):
            if not self.boxes:
                raise ValidationError("box domain with no boxes")
            if self.kind == "interval" and (self.n != 1 or len(self.boxes) != 1):
                raise ValidationError("interval must be a single 1d box")
            for corner, sides in self.boxes:
                if len(corner) != self.n or len(sides) != self.n:
                    raise ValidationError("box dimension mismatch")
                if any(s <= 0 for s in sides):
                    raise ValidationError("box sides must be strictly positive")
            for b1, b2 in itertools.combinations(self.boxes, 2):
                if _open_overlap(b1, b2):
                    raise ValidationError(
                        "boxes overlap with positive measure; only shared faces allowed")
        elif self.kind == "torus":
            if len(self.periods) != self.n:
                raise ValidationError("period vector dimension mismatch")
            if any(p <= 0 for p in self.periods):
                raise ValidationError("periods must be strictly positive")
        elif self.kind == "grid-mask":
            if self.mask is None or self.mask.ndim != self.n:
                raise ValidationError("grid-mask needs an n-dimensional cell mask")
            if self.h <= 0:
                raise ValidationError("grid spacing must be strictly positive")
            if not self.mask.any():
                raise ValidationError("grid-mask is empty")
            if len(self.origin) != self.n:
                raise ValidationError("grid-mask origin dimension mismatch")

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return (self.kind == other.kind and self.n == other.n
                and self.boxes == other.boxes and self.periods == other.periods
                and self.origin == other.origin and self.h == other.h
                and ((self.mask is None and other.mask is None)
                     or (self.mask is not None and other.mask is not None
                         and np.array_equal(self.mask, other.mask))))

    def __repr__(self):
        if self.kind in ("interval", "box-union"):
            return f"Domain({self.kind}, n={self.n}, boxes={len(self.boxes)})"
        if self.kind == "torus":
            return f"Domain(torus, periods={[str(p) for p in self.periods]})"
        return f"Domain(grid-mask, n={self.n}, cells={int(self.mask.sum())}, h={self.h})"


def interval(length, start=0) -> Domain:
    length = _frac(length)
    if length <= 0:
        raise ArgumentError("interval length must be positive")
    return Domain("interval", 1, boxes=[((_frac(start),), (length,))])


def box(corner, sides) -> Domain:
    corner, sides = _frac_vec(corner), _frac_vec(sides)
    return Domain("box-union", len(sides), boxes=[(corner, sides)])


def box_union(boxes) -> Domain:
    boxes = [(_frac_vec(c), _frac_vec(s)) for c, s in boxes]
    return Domain("box-union", len(boxes[0][0]), boxes=boxes)


def unit_cube(n) -> Domain:
    if n == 1:
        return interval(1)
    zero, one = Fraction(0), Fraction(1)
    return box([zero] * n, [one] * n)


def torus(periods) -> Domain:
    periods = _frac_vec(periods)
    return Domain("torus", len(periods), periods=periods)


def as_boxes(d: Domain):
    """Realized (corner, sides) boxes of an interval or box-union domain."""
    if d.kind not in ("interval", "box-union"):
        raise ArgumentError(f"domain kind {d.kind!r} has no box realization")
    return d.boxes


def _open_overlap(b1, b2) -> bool:
    """True iff two closed boxes overlap with positive measure."""
    (c1, s1), (c2, s2) = b1, b2
    for ax in range(len(c1)):
        lo = max(c1[ax], c2[ax])
        hi = min(c1[ax] + s1[ax], c2[ax] + s2[ax])
        if lo >= hi:
            return False
    return True


def _box_contains(outer, inner) -> bool:
    (oc, os), (ic, isz) = outer, inner
    return all(oc[ax] <= ic[ax] and ic[ax] + isz[ax] <= oc[ax] + os[ax]
               for ax in range(len(oc)))


def _box_inside_union(bx, boxes) -> bool:
    """Exact test: is the closed box bx contained in the closed box union?

    The box is split along every union-box face coordinate that crosses
    it; each resulting sub-box must lie inside a single union box.
    """
    corner, sides = bx
    n = len(corner)
    cuts = []
    for ax in range(n):
        lo, hi = corner[ax], corner[ax] + sides[ax]
        coords = {lo, hi}
        for (c, s) in boxes:
            for x in (c[ax], c[ax] + s[ax]):
                if lo < x < hi:
                    coords.add(x)
        cuts.append(sorted(coords))
    for idx in itertools.product(*(range(len(c) - 1) for c in cuts)):
        sub_c = tuple(cuts[ax][idx[ax]] for ax in range(n))
        sub_s = tuple(cuts[ax][idx[ax] + 1] - cuts[ax][idx[ax]] for ax in range(n))
        if not any(_box_contains(b, (sub_c, sub_s)) for b in boxes):
            return False
    return True


def volume(d: Domain):
    """Lebesgue volume; exact rational except for grid masks (count * h^n)."""
    if d.kind in ("interval", "box-union"):
        return sum(math.prod(sides) for _, sides in d.boxes)
    if d.kind == "torus":
        return math.prod(d.periods)
    return float(d.mask.sum()) * d.h ** d.n


def scale_domain(d: Domain, a) -> Domain:
    """Image of d under x -> a*x."""
    a = _frac(a)
    if a <= 0:
        raise ArgumentError("scale factor must be positive")
    if d.kind in ("interval", "box-union"):
        boxes = [(tuple(a * x for x in c), tuple(a * s for s in sides))
                 for c, sides in d.boxes]
        return Domain(d.kind, d.n, boxes=boxes)
    if d.kind == "torus":
        return Domain("torus", d.n, periods=tuple(a * p for p in d.periods))
    return Domain("grid-mask", d.n, mask=d.mask,
                  origin=tuple(a * x for x in d.origin), h=d.h * float(a))


def translate_domain(d: Domain, b) -> Domain:
    b = _frac_vec(b)
    if d.kind in ("interval", "box-union"):
        boxes = [(tuple(c[ax] + b[ax] for ax in range(d.n)), sides)
                 for c, sides in d.boxes]
        return Domain(d.kind, d.n, boxes=boxes)
    raise ArgumentError(f"cannot translate domain kind {d.kind!r}")


def rasterize(d: Domain, h) -> Domain:
    """Grid-mask approximation of a box domain: keep cells whose center lies in d.

    The volume bias is first order in h and immaterial downstream; grid
    masks only feed the approximate solvers.
    """
    boxes = as_boxes(d)
    h = float(h)
    if h <= 0:
        raise ArgumentError("spacing must be positive")
    min_side = min(float(s) for _, sides in boxes for s in sides)
    if h > min_side:
        raise ArgumentError(
            f"spacing {h} exceeds the smallest box side {min_side}; rasterization degenerate")
    lo = tuple(min(c[ax] for c, _ in boxes) for ax in range(d.n))
    hi = tuple(max(c[ax] + s[ax] for c, s in boxes) for ax in range(d.n))
    shape = []
    for ax in range(d.n):
        m = float(hi[ax] - lo[ax]) / h
        shape.append(int(round(m)) if abs(m - round(m)) < 1e-9 else int(math.ceil(m)))
    mask = np.zeros(shape, dtype=bool)
    lo_f = np.array([float(x) for x in lo])
    grids = np.meshgrid(*[lo_f[ax] + (np.arange(shape[ax]) + 0.5) * h
                          for ax in range(d.n)], indexing="ij")
    for c, s in boxes:
        inside = np.ones(shape, dtype=bool)
        for ax in range(d.n):
            inside &= (grids[ax] >= float(c[ax])) & (grids[ax] <= float(c[ax] + s[ax]))
        mask |= inside
    return Domain("grid-mask", d.n, mask=mask, origin=lo, h=h)


class PackingItem:
    """One scaled, translated piece a*piece + b."""

    def __init__(self, scale, offset, piece: Domain):
        self.scale = _frac(scale)
        self.offset = _frac_vec(offset)
        self.piece = piece
        if self.scale <= 0:
            raise ArgumentError("packing scale must be positive")
        if len(self.offset) != piece.n:
            raise ArgumentError("offset dimension mismatch")

    def realized_boxes(self):
        a, b = self.scale, self.offset
        return [(tuple(a * c[ax] + b[ax] for ax in range(self.piece.n)),
                 tuple(a * s for s in sides))
                for c, sides in as_boxes(self.piece)]


class Packing:
    """Scaled translated pieces inside an ambient domain.

    relation='sub'   pieces pairwise disjoint, contained in ambient
    relation='cover' pieces cover ambient up to measure zero
    """

    def __init__(self, relation, items, ambient: Domain):
        if relation not in ("sub", "cover"):
            raise ArgumentError(f"unknown packing relation {relation!r}")
        self.relation = relation
        self.items = tuple(items)
        self.ambient = ambient

    def scaled_volume(self):
        return sum(item.scale ** item.piece.n * volume(item.piece)
                   for item in self.items)

    def __repr__(self):
        return f"Packing({self.relation}, pieces={len(self.items)})"


class PackingReport:
    def __init__(self, valid, failures, piece_volume, ambient_volume):
        self.valid = valid
        self.failures = list(failures)
        self.piece_volume = piece_volume
        self.ambient_volume = ambient_volume

    def __repr__(self):
        state = "valid" if self.valid else "invalid: " + "; ".join(self.failures)
        return f"PackingReport({state})"


def validate_packing(pk: Packing) -> PackingReport:
    """Confirm or refute the packing invariants in exact rational arithmetic."""
    failures = []
    ambient_boxes = as_boxes(pk.ambient)
    realized = [item.realized_boxes() for item in pk.items]
    for i, bxs in enumerate(realized):
        for bx in bxs:
            if not _box_inside_union(bx, ambient_boxes):
                failures.append(f"piece {i} is not contained in the ambient domain")
                break
    flat = [(i, bx) for i, bxs in enumerate(realized) for bx in bxs]
    for (i, b1), (j, b2) in itertools.combinations(flat, 2):
        if i != j and _open_overlap(b1, b2):
            failures.append(f"pieces {i} and {j} overlap with positive measure")
    piece_vol = pk.scaled_volume()
    amb_vol = volume(pk.ambient)
    if piece_vol > amb_vol:
        failures.append("piece volume exceeds ambient volume")
    if pk.relation == "cover" and piece_vol != amb_vol:
        failures.append(
            f"cover volume mismatch: pieces {piece_vol} vs ambient {amb_vol}")
    return PackingReport(not failures, failures, piece_vol, amb_vol)


def _classify_cell(corner, side, boxes):
    """FULL if the closed cube lies in the union, EMPTY if it misses it."""
    n = len(corner)
    cube = (corner, (side,) * n)
    if not any(_open_overlap(cube, b) for b in boxes):
        return "empty"
    if _box_inside_union(cube, boxes):
        return "full"
    return "partial"


def pack_cubes(ambient: Domain, eps, depth_cap=12) -> Packing:
    """Dyadic sub-packing of ambient by scaled unit cubes with
    sum(a_i^n) >= vol(ambient) - eps.

    Cells of side 2^-d anchored on the dyadic lattice are kept when they
    lie fully inside the ambient box union; partial cells are refined up
    to depth_cap.  Disjointness is automatic from the lattice structure.
    """
    boxes = as_boxes(ambient)
    n = ambient.n
    vol = volume(ambient)
    eps = _frac(eps)
    if not (0 < eps < vol):
        raise ArgumentError("need 0 < eps < vol(ambient)")
    target = vol - eps
    lo = [min(c[ax] for c, _ in boxes) for ax in range(n)]
    hi = [max(c[ax] + s[ax] for c, s in boxes) for ax in range(n)]
    chosen = []
    achieved = Fraction(0)
    side = Fraction(1)
    partial = []
    ranges = [range(math.floor(lo[ax]), math.ceil(hi[ax])) for ax in range(n)]
    for idx in itertools.product(*ranges):
        corner = tuple(Fraction(i) for i in idx)
        state = _classify_cell(corner, side, boxes)
        if state == "full":
            chosen.append((side, corner))
            achieved += side ** n
        elif state == "partial":
            partial.append(corner)
    depth = 0
    while achieved < target and partial and depth < depth_cap:
        depth += 1
        side = Fraction(1, 2 ** depth)
        next_partial = []
        for corner in partial:
            for delta in itertools.product((0, 1), repeat=n):
                child = tuple(corner[ax] + delta[ax] * side for ax in range(n))
                state = _classify_cell(child, side, boxes)
                if state == "full":
                    chosen.append((side, child))
                    achieved += side ** n
                elif state == "partial":
                    next_partial.append(child)
        partial = next_partial
    if achieved < target:
        raise PackingError(
            f"dyadic packing reached volume {achieved} < target {target} "
            f"at depth cap {depth_cap}", achieved=achieved)
    cube = unit_cube(n)
    items = [PackingItem(a, corner, cube) for a, corner in chosen]
    return Packing("sub", items, ambient)


def partition_cubes(ambient: Domain, k: int) -> Packing:
    """Exact cover of ambient by k^n-per-shortest-side equal cubes.

    Every box side must be an integer multiple of (shortest side)/k.
    """
    if k < 1 or int(k) != k:
        raise ArgumentError("k must be a positive integer")
    boxes = as_boxes(ambient)
    n = ambient.n
    min_side = min(s for _, sides in boxes for s in sides)
    cube_side = min_side / k
    items = []
    cube = unit_cube(n)
    for corner, sides in boxes:
        counts = []
        for ax in range(n):
            ratio = sides[ax] / cube_side
            if ratio.denominator != 1:
                raise ArgumentError(
                    f"box side {sides[ax]} is not an integer multiple of {cube_side}")
            counts.append(ratio.numerator)
        for idx in itertools.product(*(range(c) for c in counts)):
            offset = tuple(corner[ax] + idx[ax] * cube_side for ax in range(n))
            items.append(PackingItem(cube_side, offset, cube))
    return Packing("cover", items, ambient)


def _coord_to_json(x: Fraction):
    if x.denominator == 1:
        return int(x)
    if Fraction(float(x)) == x:
        return float(x)
    return str(x)


def domain_to_json(d: Domain) -> dict:
    if d.kind in ("interval", "box-union"):
        return {"kind": d.kind, "n": d.n,
                "boxes": [{"corner": [_coord_to_json(x) for x in c],
                           "sides": [_coord_to_json(s) for s in sides]}
                          for c, sides in d.boxes]}
    if d.kind == "torus":
        return {"kind": "torus", "n": d.n,
                "periods": [_coord_to_json(p) for p in d.periods]}
    cells = sorted(map(tuple, np.argwhere(d.mask).tolist()))
    return {"kind": "grid-mask", "n": d.n, "h": d.h,
            "origin": [_coord_to_json(_frac(x)) for x in d.origin],
            "shape": list(d.mask.shape), "cells": [list(c) for c in cells]}


def domain_from_json(obj: dict) -> Domain:
    kind = obj.get("kind")
    if kind in ("interval", "box-union"):
        boxes = [(_frac_vec(b["corner"]), _frac_vec(b["sides"])) for b in obj["boxes"]]
        return Domain(kind, obj["n"], boxes=boxes)
    if kind == "torus":
        return Domain("torus", obj["n"], periods=_frac_vec(obj["periods"]))
    if kind == "grid-mask":
        mask = np.zeros(tuple(obj["shape"]), dtype=bool)
        for cell in obj["cells"]:
            mask[tuple(cell)] = True
        return Domain("grid-mask", obj["n"], mask=mask,
                      origin=_frac_vec(obj["origin"]), h=float(obj["h"]))
    raise ArgumentError(f"unknown domain kind {kind!r}")


def packing_to_json(pk: Packing) -> dict:
    return {"relation": pk.relation,
            "ambient": domain_to_json(pk.ambient),
            "items": [{"scale": str(item.scale),
                       "offset": [str(x) for x in item.offset],
                       "piece": domain_to_json(item.piece)}
                      for item in pk.items]}


def packing_from_json(obj: dict) -> Packing:
    items = [PackingItem(it["scale"], it["offset"], domain_from_json(it["piece"]))
             for it in obj["items"]]
    return Packing(obj["relation"], items, domain_from_json(obj["ambient"]))
