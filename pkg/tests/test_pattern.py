"""Cone geometry: embedding, seam, adjacency, plaquettes and frames."""

import csv

import numpy as np
import pytest
from scipy.spatial import cKDTree

from defectlab import (PatternParams, build_flat_torus, build_pattern, frame,
                       map_point)
from defectlab.io import write_adjacency_csv, write_pattern_csv

SQ7_OVER_4 = np.sqrt(7.0) / 4.0


def params34(r_max, core_cut=0.0):
    return PatternParams(alpha=0.75, r_max=r_max, core_cut=core_cut)


# ---------------------------------------------------------------- parameters

def test_params_validation():
    with pytest.raises(ValueError):
        PatternParams(alpha=0.0, r_max=10)
    with pytest.raises(ValueError):
        PatternParams(alpha=1.2, r_max=10)
    with pytest.raises(ValueError):
        PatternParams(alpha=0.75, r_max=0.0)
    with pytest.raises(ValueError):
        PatternParams(alpha=0.75, r_max=5.0, core_cut=5.0)


def test_xi_identities():
    for alpha in (0.25, 0.5, 0.75, 1.0):
        p = PatternParams(alpha=alpha, r_max=5)
        assert abs(np.sin(p.xi) - alpha) < 1e-12
        assert abs(np.cos(p.xi) - np.sqrt(1 - alpha**2)) < 1e-12


# ----------------------------------------------------------------- map_point

def test_origin_maps_to_origin():
    assert np.array_equal(map_point(0, 0, params34(10)), np.zeros(3))


def test_unit_point_image():
    # hand substitution r=1, theta=0: (3/4, 0, -sqrt(7)/4)
    got = map_point(1, 0, params34(10))
    assert np.allclose(got, [0.75, 0.0, -SQ7_OVER_4], atol=1e-12)


def test_seam_identifies_rays():
    # theta = 3*pi/2 is glued onto theta = 0
    a = map_point(1, 0, params34(10))
    b = map_point(0, -1, params34(10))
    assert np.allclose(a, b, atol=1e-12)
    a = map_point(7, 0, params34(10))
    b = map_point(0, -7, params34(10))
    assert np.allclose(a, b, atol=1e-12)


def test_radius_preserved():
    p = params34(10)
    rng = np.random.default_rng(0)
    for _ in range(50):
        n, m = rng.integers(-9, 10, 2)
        assert abs(np.linalg.norm(map_point(n, m, p)) - np.hypot(n, m)) < 1e-10


# ------------------------------------------------------------- build_pattern

def test_radial_isometry_all_sites():
    pat = build_pattern(params34(20))
    r_img = np.linalg.norm(pat.positions, axis=1)
    assert np.max(np.abs(r_img - pat.radii)) < 1e-10


def test_site_count_oracle_r50():
    # independent enumeration of {(n,m): r <= 50, theta in [0, 3*pi/2)}
    count = 0
    for n in range(-50, 51):
        for m in range(-50, 51):
            if n == 0 and m == 0:
                count += 1
                continue
            if np.hypot(n, m) > 50.0:
                continue
            th = np.arctan2(m, n) % (2.0 * np.pi)
            if th < 1.5 * np.pi:
                count += 1
    pat = build_pattern(params34(50), with_adjacency=False)
    assert pat.n_sites == count


def test_no_duplicate_sites():
    pat = build_pattern(params34(20), with_adjacency=False)
    tree = cKDTree(pat.positions)
    assert len(tree.query_pairs(1e-6)) == 0


def test_core_cut_removes_inner_sites():
    pat = build_pattern(params34(10, core_cut=2.5), with_adjacency=False)
    assert pat.radii.min() >= 2.5
    full = build_pattern(params34(10), with_adjacency=False)
    removed = full.n_sites - pat.n_sites
    assert removed == np.count_nonzero(full.radii < 2.5)


def test_empty_pattern_raises():
    with pytest.raises(ValueError, match="empty"):
        build_pattern(PatternParams(alpha=0.75, r_max=0.9, core_cut=0.5))


def test_deterministic_ids():
    a = build_pattern(params34(15))
    b = build_pattern(params34(15))
    assert np.array_equal(a.nm, b.nm)
    assert np.array_equal(a.positions, b.positions)
    assert np.array_equal(a.adjacency.ids, b.adjacency.ids)


def test_flat_disk_is_identity_embedding():
    pat = build_pattern(PatternParams(alpha=1.0, r_max=10))
    assert np.allclose(pat.positions[:, 2], 0.0)
    assert np.array_equal(pat.positions[:, 0].astype(int), pat.nm[:, 0])
    assert np.array_equal(pat.positions[:, 1].astype(int), pat.nm[:, 1])
    # interior sites have exactly 4 neighbors at distance exactly 1
    interior = np.where(pat.radii <= 8.0)[0]
    for i in interior:
        ids, bonds = pat.adjacency.neighbors(i)
        assert len(ids) == 4
        assert np.allclose(np.linalg.norm(bonds, axis=1), 1.0)


# ----------------------------------------------------------------- adjacency

def _quarter_turns(nm, quarters):
    """Rotate a lattice point by `quarters` * pi/2 (positive = ccw)."""
    a, b = int(nm[0]), int(nm[1])
    for _ in range(quarters % 4):
        a, b = -b, a
    return (a, b)


def _seam_neighbor(nm, span):
    """Independent seam reduction of a lattice point in the removed wedge.

    A point with theta in [span, 2*pi) is unrolled back into the sector by
    rotating +-span, choosing the sign from which cut edge was crossed
    (nearer wedge half).  Valid for steps from sites at radius > 2.
    """
    a, b = int(nm[0]), int(nm[1])
    th = np.arctan2(b, a) % (2.0 * np.pi)
    if th < span - 1e-12:
        return (a, b)
    k = int(round(span / (np.pi / 2.0)))  # span in quarter turns
    if th < span + (2.0 * np.pi - span) / 2.0:
        return _quarter_turns((a, b), -k)  # crossed the theta=span edge
    return _quarter_turns((a, b), k)       # crossed the theta=0 edge


def test_far_adjacency_matches_combinatorial_oracle():
    pat = build_pattern(params34(16))
    span = pat.params.theta_span
    index = {(int(n), int(m)): i for i, (n, m) in enumerate(pat.nm)}
    far = np.where(pat.radii > 10.0)[0]
    assert len(far) > 100
    for i in far:
        n, m = int(pat.nm[i, 0]), int(pat.nm[i, 1])
        expected = set()
        for dn, dm in ((1, 0), (-1, 0), (0, 1), (0, -1)):
            key = _seam_neighbor((n + dn, m + dm), span)
            if key in index:
                expected.add(index[key])
        got = set(int(j) for j in pat.adjacency.neighbors(i)[0])
        assert got == expected, (n, m)


def test_seam_bond_present():
    # (5,0) sits on the theta=0 ray; stepping below it crosses the seam and
    # re-enters just under theta = 3*pi/2, at the site (-1,-5)
    pat = build_pattern(params34(10))
    index = {(int(n), int(m)): i for i, (n, m) in enumerate(pat.nm)}
    i, j = index[(5, 0)], index[(-1, -5)]
    ids, bonds = pat.adjacency.neighbors(i)
    assert j in set(int(x) for x in ids)
    e = bonds[list(ids).index(j)]
    assert 0.9 < np.linalg.norm(e) <= 1.0


def test_adjacency_symmetric_with_opposite_bonds():
    pat = build_pattern(params34(12))
    adj = pat.adjacency
    for i in range(0, pat.n_sites, 7):
        ids, bonds = adj.neighbors(i)
        for j, e in zip(ids, bonds):
            back_ids, back_bonds = adj.neighbors(int(j))
            k = list(back_ids).index(i)
            assert np.allclose(back_bonds[k], -e)
            assert np.allclose(
                e, pat.positions[int(j)] - pat.positions[i])


def test_tip_ring_warning():
    with pytest.warns(RuntimeWarning, match="more than 4 neighbors"):
        build_pattern(params34(6))


def test_bad_window_rejected():
    pat = build_pattern(params34(6), with_adjacency=False)
    from defectlab import build_adjacency
    with pytest.raises(ValueError):
        build_adjacency(pat, window=(1.3, 0.5))


# ---------------------------------------------------------------- plaquettes

def test_plaquette_pair_counts():
    pat = build_pattern(PatternParams(alpha=1.0, r_max=2))
    index = {(int(n), int(m)): i for i, (n, m) in enumerate(pat.nm)}
    deg = pat.adjacency.degrees
    # interior flat site with 4 neighbors -> 12 ordered pairs
    center = index[(0, 0)]
    assert deg[center] == 4
    assert len(pat.plaquettes.pairs_of(center)) == 12
    # corner site (1,1) has neighbors (1,0) and (0,1) -> 2 ordered pairs
    corner = index[(1, 1)]
    assert deg[corner] == 2
    assert len(pat.plaquettes.pairs_of(corner)) == 2


def test_collinear_pairs_have_zero_cross_product():
    pat = build_pattern(PatternParams(alpha=1.0, r_max=2))
    index = {(int(n), int(m)): i for i, (n, m) in enumerate(pat.nm)}
    center = index[(0, 0)]
    pos = pat.positions
    crosses = [np.cross(pos[z] - pos[center], pos[y] - pos[center])
               for z, y in pat.plaquettes.pairs_of(center)]
    norms = np.linalg.norm(crosses, axis=1)
    # 4 of the 12 ordered pairs are collinear (+e,-e); their cross vanishes
    assert np.count_nonzero(norms == 0.0) == 4


def test_plaquette_pairs_are_distinct_neighbors():
    pat = build_pattern(params34(8))
    for i in range(pat.n_sites):
        nbrs = set(int(x) for x in pat.adjacency.neighbors(i)[0])
        pairs = pat.plaquettes.pairs_of(i)
        assert len(pairs) == len(nbrs) * (len(nbrs) - 1)
        for z, y in pairs:
            assert z != y
            assert int(z) in nbrs and int(y) in nbrs


# -------------------------------------------------------------------- frames

def test_frame_orthonormal_1000_samples():
    rng = np.random.default_rng(42)
    p = params34(10)
    for theta0 in rng.uniform(0.0, p.theta_span, 1000):
        f = frame(theta0, p)
        assert abs(np.linalg.norm(f.a1) - 1.0) < 1e-12
        assert abs(np.linalg.norm(f.a2) - 1.0) < 1e-12
        assert abs(np.dot(f.a1, f.a2)) < 1e-12
        assert abs(np.linalg.norm(f.normal) - 1.0) < 1e-12


def test_frame_at_zero_angle():
    f = frame(0.0, params34(10))
    assert np.allclose(f.a1, [0.75, 0.0, -SQ7_OVER_4], atol=1e-12)
    assert np.allclose(f.a2, [0.0, 1.0, 0.0], atol=1e-12)


def test_twist_relations():
    p = params34(10)
    span = p.theta_span  # 3*pi/2
    f0, f1 = frame(0.0, p), frame(span, p)
    assert np.max(np.abs(f1.a1 - f0.a2)) < 1e-12
    assert np.max(np.abs(f1.a2 + f0.a1)) < 1e-12


def test_flat_frame_is_cartesian():
    f = frame(1.234, PatternParams(alpha=1.0, r_max=5))
    assert np.allclose(f.a1, [1.0, 0.0, 0.0], atol=1e-12)
    assert np.allclose(f.a2, [0.0, 1.0, 0.0], atol=1e-12)
    assert np.allclose(f.normal, [0.0, 0.0, 1.0], atol=1e-12)


# ------------------------------------------------------------------- exports

def test_pattern_csv_roundtrip(tmp_path):
    pat = build_pattern(params34(6))
    f = write_pattern_csv(pat, tmp_path / "pattern.csv")
    with f.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == pat.n_sites
    assert list(rows[0]) == ["id", "n", "m", "x", "y", "z", "radius", "theta0"]
    k = 5
    assert int(rows[k]["n"]) == pat.nm[k, 0]
    assert float(rows[k]["x"]) == pat.positions[k, 0]
    assert float(rows[k]["radius"]) == pat.radii[k]


def test_adjacency_csv_schema(tmp_path):
    pat = build_pattern(params34(6))
    f = write_adjacency_csv(pat, tmp_path / "adjacency.csv")
    with f.open() as fh:
        rows = list(csv.DictReader(fh))
    assert list(rows[0]) == ["id_from", "id_to", "ex", "ey", "ez"]
    assert len(rows) == len(pat.adjacency.ids)
    i = int(rows[0]["id_from"])
    j = int(rows[0]["id_to"])
    e = np.array([float(rows[0]["ex"]), float(rows[0]["ey"]),
                  float(rows[0]["ez"])])
    assert np.allclose(e, pat.positions[j] - pat.positions[i])


# --------------------------------------------------------------- flat torus

def test_flat_torus_structure():
    pat = build_flat_torus(5)
    assert pat.n_sites == 25
    assert np.all(pat.adjacency.degrees == 4)
    units = {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)}
    for i in range(pat.n_sites):
        _, bonds = pat.adjacency.neighbors(i)
        got = {tuple(int(c) for c in e) for e in bonds}
        assert got == units


def test_flat_torus_minimum_size():
    with pytest.raises(ValueError):
        build_flat_torus(2)
