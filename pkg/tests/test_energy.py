from __future__ import annotations

import math

import numpy as np
import pytest

from plaplacian.domains import interval, rasterize, unit_cube
from plaplacian.energy import (
    Field, combine_disjoint, dirichlet_vertices, discrete_p_laplacian,
    dof_coordinates, energy_gradient_numerator, energy_parts,
    field_from_bytes, field_from_callable, field_to_bytes, normalize,
    p_energy, restrict, submask_domain,
)
from plaplacian.errors import ArgumentError

P_SET = (1.5, 2.0, 3.0, 4.0)


def grid_1d(m, L=1.0):
    return rasterize(interval(L), L / m)


def split_interval(d, j):
    left = submask_domain(d, lambda cells: cells[:, 0] < j)
    right = submask_domain(d, lambda cells: cells[:, 0] >= j)
    return left, right


def random_field(d, bc, rng):
    k = len(np.argwhere(d.mask)) if bc == "neumann" else len(dirichlet_vertices(d))
    return Field(d, bc, rng.standard_normal(k))


def test_dirichlet_vertices_1d():
    d = grid_1d(8)
    idx = dirichlet_vertices(d)
    assert [int(i) for i, in idx] == [1, 2, 3, 4, 5, 6, 7]
    coords = dof_coordinates(d, "dirichlet")
    assert np.allclose(coords.ravel(), np.arange(1, 8) / 8)


def test_neumann_coordinates_are_cell_centers():
    d = grid_1d(4)
    assert np.allclose(dof_coordinates(d, "neumann").ravel(),
                       [0.125, 0.375, 0.625, 0.875])


def test_energy_linear_profile_p2():
    d = grid_1d(4000)
    u = field_from_callable(d, "neumann", lambda x: x)
    assert p_energy(u, 2) == pytest.approx(3.0, abs=3e-3)


def test_energy_linear_profile_p3():
    d = grid_1d(4000)
    u = field_from_callable(d, "neumann", lambda x: x)
    assert p_energy(u, 3) == pytest.approx(4.0, abs=4e-3)


def test_energy_first_eigenfunction():
    d = grid_1d(256)
    u = field_from_callable(d, "dirichlet", lambda x: math.sin(math.pi * x))
    assert p_energy(u, 2) == pytest.approx(math.pi ** 2, rel=1e-2)


def test_energy_zero_field_rejected():
    d = grid_1d(16)
    u = Field(d, "dirichlet", np.zeros(15))
    with pytest.raises(ArgumentError):
        p_energy(u, 2)


def test_energy_homogeneity():
    rng = np.random.default_rng(3)
    d = rasterize(unit_cube(2), 1 / 12)
    for bc in ("dirichlet", "neumann"):
        u = random_field(d, bc, rng)
        base = p_energy(u, 3)
        for t in (5.0, -2.5, 1e-4):
            assert p_energy(u.copy_with(t * u.values), 3) == pytest.approx(base, rel=1e-12)


def test_normalize_removes_scale():
    rng = np.random.default_rng(4)
    d = grid_1d(32)
    u = random_field(d, "dirichlet", rng)
    a = normalize(u, "gradient-Lp", 3)
    b = normalize(u.copy_with(5 * u.values), "gradient-Lp", 3)
    assert np.allclose(a.values, b.values, rtol=1e-12)
    num, _ = energy_parts(a, 3)
    assert num == pytest.approx(1.0, rel=1e-12)
    assert p_energy(a, 3) == pytest.approx(p_energy(u, 3), rel=1e-12)


def test_normalize_sobolev():
    rng = np.random.default_rng(5)
    d = grid_1d(32)
    u = random_field(d, "neumann", rng)
    v = normalize(u, "sobolev-W1p", 1.5)
    num, den = energy_parts(v, 1.5)
    assert num + den == pytest.approx(1.0, rel=1e-12)


def test_normalize_constant_rejected():
    d = grid_1d(16)
    u = Field(d, "neumann", np.ones(16))
    with pytest.raises(ArgumentError):
        normalize(u, "gradient-Lp", 2)
    # sobolev norm still fine for constants
    v = normalize(u, "sobolev-W1p", 2)
    assert energy_parts(v, 2)[1] == pytest.approx(1.0, rel=1e-12)


def test_laplacian_constant_neumann_is_zero():
    d = rasterize(unit_cube(2), 0.25)
    u = Field(d, "neumann", np.ones(16))
    out = discrete_p_laplacian(u, 2)
    assert np.allclose(out.values, 0.0)


def test_laplacian_p2_matches_stencil_1d():
    rng = np.random.default_rng(6)
    m = 20
    d = grid_1d(m)
    u = random_field(d, "dirichlet", rng)
    h = d.h
    padded = np.concatenate([[0.0], u.values, [0.0]])
    stencil = (2 * padded[1:-1] - padded[:-2] - padded[2:]) / h ** 2
    out = discrete_p_laplacian(u, 2)
    assert np.allclose(out.values, h * stencil, rtol=1e-12)


def test_laplacian_p2_matches_stencil_2d():
    rng = np.random.default_rng(7)
    d = rasterize(unit_cube(2), 0.125)
    u = random_field(d, "dirichlet", rng)
    h = d.h
    V = np.zeros((9, 9))
    idx = dirichlet_vertices(d)
    V[tuple(idx.T)] = u.values
    stencil = (4 * V[1:-1, 1:-1] - V[:-2, 1:-1] - V[2:, 1:-1]
               - V[1:-1, :-2] - V[1:-1, 2:]) / h ** 2
    out = discrete_p_laplacian(u, 2)
    assert np.allclose(out.values, h ** 2 * stencil.ravel(), rtol=1e-12)


@pytest.mark.parametrize("p", P_SET)
@pytest.mark.parametrize("bc", ["dirichlet", "neumann"])
def test_gradient_matches_finite_differences(p, bc):
    rng = np.random.default_rng(hash((p, bc)) % 2 ** 32)
    d = rasterize(unit_cube(2), 1 / 6)
    u = random_field(d, bc, rng)
    v = random_field(d, bc, rng)
    g = energy_gradient_numerator(u, p)
    t = 1e-6

    def gnum(f):
        num, _ = energy_parts(f, p)
        return num / p

    lhs = float(g @ v.values)
    rhs = (gnum(u.copy_with(u.values + t * v.values))
           - gnum(u.copy_with(u.values - t * v.values))) / (2 * t)
    assert lhs == pytest.approx(rhs, rel=1e-6)


def test_combine_numerators_add_dirichlet():
    rng = np.random.default_rng(8)
    d = grid_1d(40)
    left, right = split_interval(d, 17)
    v = random_field(left, "dirichlet", rng)
    w = random_field(right, "dirichlet", rng)
    u = combine_disjoint(v, w)
    for p in P_SET:
        nv, dv = energy_parts(v, p)
        nw, dw = energy_parts(w, p)
        nu, du = energy_parts(u, p)
        assert nu == pytest.approx(nv + nw, rel=1e-12)
        assert du == pytest.approx(dv + dw, rel=1e-12)


def test_combine_with_zero_leaves_energy():
    rng = np.random.default_rng(9)
    d = grid_1d(30)
    left, right = split_interval(d, 14)
    v = random_field(left, "dirichlet", rng)
    w = Field(right, "dirichlet", np.zeros(len(dirichlet_vertices(right))))
    u = combine_disjoint(v, w)
    assert p_energy(u, 2.5) == pytest.approx(p_energy(v, 2.5), rel=1e-12)


def test_combine_lemma_inequality_random():
    rng = np.random.default_rng(10)
    for _ in range(100):
        m = int(rng.integers(12, 40))
        j = int(rng.integers(3, m - 3))
        d = grid_1d(m)
        left, right = split_interval(d, j)
        v = random_field(left, "dirichlet", rng)
        w = random_field(right, "dirichlet", rng)
        u = combine_disjoint(v, w)
        p = float(rng.choice(P_SET))
        assert p_energy(u, p) <= max(p_energy(v, p), p_energy(w, p)) * (1 + 1e-12)


def test_combine_rejects_overlap():
    rng = np.random.default_rng(11)
    d = grid_1d(20)
    left, _ = split_interval(d, 12)
    mid = submask_domain(d, lambda cells: (cells[:, 0] >= 8) & (cells[:, 0] < 18))
    v = random_field(left, "neumann", rng)
    w = random_field(mid, "neumann", rng)
    with pytest.raises(ArgumentError):
        combine_disjoint(v, w)


def test_restrict_preserves_supported_energy():
    rng = np.random.default_rng(12)
    d = grid_1d(40)
    left, _ = split_interval(d, 20)
    u_vals = np.zeros(len(dirichlet_vertices(d)))
    # support strictly inside the left half: vertices 1..18 of 39
    u_vals[:18] = rng.standard_normal(18)
    u = Field(d, "dirichlet", u_vals)
    ul = restrict(u, left)
    assert p_energy(u, 3) == pytest.approx(p_energy(ul, 3), rel=1e-12)


def test_restrict_neumann_superadditive_numerator():
    rng = np.random.default_rng(13)
    d = grid_1d(32)
    left, right = split_interval(d, 15)
    u = random_field(d, "neumann", rng)
    v, w = restrict(u, left), restrict(u, right)
    for p in P_SET:
        nu, du = energy_parts(u, p)
        nv, dv = energy_parts(v, p)
        nw, dw = energy_parts(w, p)
        assert du == pytest.approx(dv + dw, rel=1e-12)
        assert nu >= (nv + nw) * (1 - 1e-12)


def test_restrict_lemma_inequality_random():
    rng = np.random.default_rng(14)
    for _ in range(100):
        m = int(rng.integers(10, 40))
        j = int(rng.integers(2, m - 2))
        d = grid_1d(m)
        left, right = split_interval(d, j)
        u = random_field(d, "neumann", rng)
        v, w = restrict(u, left), restrict(u, right)
        p = float(rng.choice(P_SET))
        assert p_energy(u, p) >= min(p_energy(v, p), p_energy(w, p)) * (1 - 1e-12)


def test_restrict_rejects_non_subdomain():
    rng = np.random.default_rng(15)
    small = grid_1d(10)
    big = grid_1d(20, L=2.0)  # same h, longer interval
    u = random_field(small, "neumann", rng)
    with pytest.raises(ArgumentError):
        restrict(u, big)


def test_field_bytes_roundtrip():
    rng = np.random.default_rng(16)
    d = grid_1d(12)
    u = random_field(d, "neumann", rng)
    back = field_from_bytes(d, "neumann", field_to_bytes(u))
    assert np.array_equal(back.values, u.values)


def test_field_wrong_length_rejected():
    d = grid_1d(10)
    with pytest.raises(ArgumentError):
        Field(d, "dirichlet", np.zeros(10))  # 9 interior vertices
