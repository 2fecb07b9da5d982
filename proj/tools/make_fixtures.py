#!/usr/bin/env python3
"""Builds the polygonal mesh fixtures consumed by the benchmark suite.

All meshes are centroidal Voronoi tessellations. Boundary conformity comes
from mirror seeds: reflecting every seed across a boundary line makes that
line an exact union of Voronoi edges. Crack meshes additionally mirror seeds
across the crack line, so the crack is an exact union of cell edges; a seed
placed at each crack tip yields a polygonal cell that strictly contains the
tip and whose boundary crosses the crack line at Voronoi vertices.
"""

import argparse
import json
import os

import numpy as np
from scipy.spatial import Voronoi

TOL = 1e-7


# --- deterministic per-fixture RNG seeds (calibration knobs) ---
SEEDS = {
    "patch2d": 3,
    "cantilever_poly_100": 11,
    "cantilever_poly_200": 12,
    "cantilever_poly_400": 13,
    "cantilever_poly_800": 14,
    "plate_hole_1": 21,
    "plate_hole_2": 22,
    "plate_hole_3": 23,
    "plate_hole_4": 24,
    "l_shape_1": 31,
    "l_shape_2": 32,
    "l_shape_3": 33,
    "l_shape_4": 34,
    "edge_crack_1": 41,
    "edge_crack_2": 42,
    "edge_crack_3": 43,
    "edge_crack_4": 44,
    "edge_crack_5": 45,
    "inclined_crack_0": 51,
    "inclined_crack_15": 52,
    "inclined_crack_30": 53,
    "inclined_crack_45": 54,
    "inclined_crack_60": 55,
    "inclined_crack_75": 56,
    "inclined_crack_90": 57,
}


def polygon_area(P):
    x, y = P[:, 0], P[:, 1]
    return 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)


def polygon_centroid(P):
    x, y = P[:, 0], P[:, 1]
    cr = x * np.roll(y, -1) - np.roll(x, -1) * y
    a = 0.5 * np.sum(cr)
    cx = np.sum((x + np.roll(x, -1)) * cr) / (6 * a)
    cy = np.sum((y + np.roll(y, -1)) * cr) / (6 * a)
    return np.array([cx, cy])


def voronoi_cells(pts, helpers, scale):
    """Voronoi cells of the first len(pts) rows, vertices deduplicated.

    helpers holds the mirror seeds that shape the boundary; their cells are
    discarded. Returns (coords, cells) with cells as CCW vertex-id loops.
    """
    allp = np.vstack([pts, helpers])
    vor = Voronoi(allp)
    grid = scale * 1e-9
    scaled = vor.vertices / grid
    # Unbounded helper regions can carry non-finite or absurdly remote
    # vertices; park them on distinct keys that no kept cell references.
    with np.errstate(invalid="ignore"):
        bad = ~(np.abs(scaled) < 4e18).all(axis=1)
    scaled[bad] = 0.0
    keys = np.round(scaled).astype(np.int64)
    keys[bad, 0] = -(10 ** 15) - np.flatnonzero(bad)
    keys[bad, 1] = -(10 ** 15)
    vid = {}
    remap = np.empty(len(vor.vertices), dtype=np.int64)
    coords = []
    for i, k in enumerate(map(tuple, keys)):
        j = vid.setdefault(k, len(coords))
        if j == len(coords):
            coords.append(vor.vertices[i])
        remap[i] = j
    coords = np.array(coords)
    cells = []
    for i in range(len(pts)):
        reg = vor.regions[vor.point_region[i]]
        if -1 in reg or len(reg) < 3:
            raise RuntimeError(f"unbounded cell for seed {i}")
        ids = list(dict.fromkeys(remap[r] for r in reg))  # drop merged dups
        P = coords[ids]
        ang = np.arctan2(P[:, 1] - pts[i, 1], P[:, 0] - pts[i, 0])
        ids = [ids[o] for o in np.argsort(ang)]
        if len(ids) < 3:
            raise RuntimeError(f"degenerate cell for seed {i}")
        cells.append([int(j) for j in ids])
    return coords, cells


def compact(coords, cells):
    used = sorted({j for c in cells for j in c})
    remap = {j: k for k, j in enumerate(used)}
    return coords[used], [[remap[j] for j in c] for c in cells], remap


def snap_to_lines(coords, lines, tol):
    """lines: list of (axis, value) with axis 0 for x=value, 1 for y=value."""
    for axis, value in lines:
        hit = np.abs(coords[:, axis] - value) < tol
        coords[hit, axis] = value
    return coords


def validate_mesh(coords, cells, area_expect=None, area_tol=1e-8,
                  allow_collinear=False, boundary_single=True):
    total = 0.0
    for c in cells:
        P = coords[c]
        a = polygon_area(P)
        assert a > 0, "nonpositive cell area"
        total += a
        n = len(c)
        for k in range(n):
            e1 = P[(k + 1) % n] - P[k]
            e2 = P[(k + 2) % n] - P[(k + 1) % n]
            cr = e1[0] * e2[1] - e1[1] * e2[0]
            lim = -1e-12 * max(np.dot(e1, e1), np.dot(e2, e2))
            if allow_collinear:
                assert cr >= lim, "reflex vertex"
            else:
                assert cr > lim, "nonconvex cell"
    if area_expect is not None:
        assert abs(total - area_expect) < area_tol * area_expect, \
            f"area {total} != {area_expect}"
    count = {}
    for c in cells:
        for k in range(len(c)):
            e = (min(c[k], c[(k + 1) % len(c)]), max(c[k], c[(k + 1) % len(c)]))
            count[e] = count.get(e, 0) + 1
    if boundary_single:
        assert all(v <= 2 for v in count.values()), "edge in >2 cells"
    return count


def boundary_tag_edges(coords, cells, edge_count, pred):
    out = []
    for c in cells:
        for k in range(len(c)):
            a, b = c[k], c[(k + 1) % len(c)]
            if edge_count[(min(a, b), max(a, b))] != 1:
                continue
            if pred(coords[a]) and pred(coords[b]):
                out.append([int(a), int(b)])
    return out


def write_mesh(path, coords, cells, tags, sbfem=None):
    doc = {
        "dim": 2,
        "nodes": [[float(p[0]), float(p[1])] for p in coords],
        "elements": [[int(j) for j in c] for c in cells],
        "boundary_tags": tags,
    }
    if sbfem:
        doc["sbfem_cells"] = sbfem
    with open(path, "w") as f:
        json.dump(doc, f)
    print(f"{os.path.basename(path)}: {len(coords)} nodes, {len(cells)} cells"
          + (f", {len(sbfem)} sbfem" if sbfem else ""))


# --- plain domains -----------------------------------------------------------


def rect_helpers(x0, x1, y0, y1):
    def fn(p):
        return np.vstack([
            np.column_stack([2 * x0 - p[:, 0], p[:, 1]]),
            np.column_stack([2 * x1 - p[:, 0], p[:, 1]]),
            np.column_stack([p[:, 0], 2 * y0 - p[:, 1]]),
            np.column_stack([p[:, 0], 2 * y1 - p[:, 1]]),
        ])
    return fn


def lloyd(pts, helpers_fn, scale, iters, clamp_fn):
    for _ in range(iters):
        coords, cells = voronoi_cells(pts, helpers_fn(pts), scale)
        pts = np.array([polygon_centroid(coords[c]) for c in cells])
        pts = clamp_fn(pts)
    return pts


def make_rect_voronoi(name, n, x0, x1, y0, y1, tag_spec, iters=40):
    rng = np.random.default_rng(SEEDS[name])
    pts = np.column_stack([
        rng.uniform(x0, x1, n), rng.uniform(y0, y1, n)])
    m = 0.02 * min(x1 - x0, y1 - y0)
    clamp = lambda p: np.column_stack([
        np.clip(p[:, 0], x0 + m, x1 - m), np.clip(p[:, 1], y0 + m, y1 - m)])
    helpers = rect_helpers(x0, x1, y0, y1)
    scale = max(x1 - x0, y1 - y0)
    pts = lloyd(pts, helpers, scale, iters, clamp)
    coords, cells = voronoi_cells(pts, helpers(pts), scale)
    coords, cells, _ = compact(coords, cells)
    coords = snap_to_lines(coords, [(0, x0), (0, x1), (1, y0), (1, y1)],
                           TOL * scale)
    count = validate_mesh(coords, cells, area_expect=(x1 - x0) * (y1 - y0))
    tags = {}
    for tag, axis, value in tag_spec:
        edges = boundary_tag_edges(
            coords, cells, count, lambda p: abs(p[axis] - value) < TOL * scale)
        assert edges, f"no edges for tag {tag}"
        tags[tag] = edges
    return coords, cells, tags


# --- L-shape -----------------------------------------------------------------

LSEGS = [
    ((-1.0, -1.0), (0.0, -1.0), True),
    ((0.0, -1.0), (0.0, 0.0), False),   # reentrant, strict footpoint
    ((0.0, 0.0), (1.0, 0.0), False),    # reentrant, strict footpoint
    ((1.0, 0.0), (1.0, 1.0), True),
    ((1.0, 1.0), (-1.0, 1.0), True),
    ((-1.0, 1.0), (-1.0, -1.0), True),
]


def in_lshape(p):
    inside = (p[:, 0] > -1) & (p[:, 0] < 1) & (p[:, 1] > -1) & (p[:, 1] < 1)
    return inside & ~((p[:, 0] > 0) & (p[:, 1] < 0))


def seg_distance(p, a, b):
    a = np.asarray(a, dtype=float)
    d = np.asarray(b, dtype=float) - a
    t = np.clip(((p - a) @ d) / (d @ d), 0.0, 1.0)
    return np.linalg.norm(p - a - np.outer(t, d), axis=1)


def lshape_domain_distance(p):
    return np.min(np.stack([seg_distance(p, s[0], s[1]) for s in LSEGS]), axis=0)


def lshape_helpers(p, h):
    """Mirror seeds across the wall segments. A mirror is kept only when its
    distance back to the domain equals the originating wall distance, which
    rejects reflections that sneak behind the reentrant corner."""
    band = 1.6 * h
    out = []
    for (ax, ay), (bx, by), relax in LSEGS:
        a = np.array([ax, ay])
        d = np.array([bx - ax, by - ay])
        L2 = d @ d
        t = ((p - a) @ d) / L2
        lo, hi = (-0.3, 1.3) if relax else (0.0, 1.0)
        foot = a + np.outer(t, d)
        dist = np.linalg.norm(p - foot, axis=1)
        mask = (t >= lo) & (t <= hi) & (dist < band)
        mir = 2 * foot[mask] - p[mask]
        keep = ~in_lshape(mir)
        keep &= lshape_domain_distance(mir) > 0.99 * dist[mask]
        out.append(mir[keep])
    delta = 0.4 * h
    out.append(np.array([[delta, -delta]]))  # fourth corner-cluster seed
    return np.vstack(out)


def lshape_corner_seeds(h):
    delta = 0.4 * h
    return np.array([[-delta, delta], [delta, delta], [-delta, -delta]])


def lshape_clamp(p, h):
    m = 0.35 * h
    p = np.column_stack([np.clip(p[:, 0], -1 + m, 1 - m),
                         np.clip(p[:, 1], -1 + m, 1 - m)])
    bad = (p[:, 0] > -m) & (p[:, 1] < m)
    px = p[bad, 0].copy()
    py = p[bad, 1].copy()
    dx = px + m   # push distance to reach x <= -m
    dy = m - py   # push distance to reach y >= m
    p[bad, 0] = np.where(dx <= dy, -m, px)
    p[bad, 1] = np.where(dx > dy, m, py)
    rc = 0.95 * h
    r = np.hypot(p[:, 0], p[:, 1])
    tight = r < rc
    p[tight] *= (rc / r[tight])[:, None]
    bad = (p[:, 0] > -m) & (p[:, 1] < m) & tight
    p[bad, 1] = np.maximum(p[bad, 1], m)
    return p


def make_lshape(name, n, iters=40):
    rng = np.random.default_rng(SEEDS[name])
    h = np.sqrt(3.0 / n)
    fixed = lshape_corner_seeds(h)
    free = []
    while len(free) < n - 3:
        cand = rng.uniform(-1, 1, (4 * n, 2))
        keep = in_lshape(cand) & (np.hypot(cand[:, 0], cand[:, 1]) > h)
        free.extend(cand[keep].tolist())
    free = np.array(free[: n - 3])
    helpers = lambda q: lshape_helpers(q, h)
    for _ in range(iters):
        pts = np.vstack([fixed, free])
        coords, cells = voronoi_cells(pts, helpers(pts), 2.0)
        cent = np.array([polygon_centroid(coords[c]) for c in cells[3:]])
        free = lshape_clamp(cent, h)
    pts = np.vstack([fixed, free])
    coords, cells = voronoi_cells(pts, helpers(pts), 2.0)
    coords, cells, _ = compact(coords, cells)
    coords = snap_to_lines(
        coords, [(0, -1.0), (0, 1.0), (1, -1.0), (1, 1.0)], TOL * 2)
    # reentrant walls: only snap points on the wall segments
    wall_x = (np.abs(coords[:, 0]) < TOL * 2) & (coords[:, 1] < TOL)
    coords[wall_x, 0] = 0.0
    wall_y = (np.abs(coords[:, 1]) < TOL * 2) & (coords[:, 0] > -TOL)
    coords[wall_y, 1] = 0.0
    count = validate_mesh(coords, cells, area_expect=3.0)

    def on_boundary(p):
        if abs(p[0] + 1) < TOL or abs(p[0] - 1) < TOL:
            return True
        if abs(p[1] + 1) < TOL or abs(p[1] - 1) < TOL:
            return True
        if abs(p[0]) < TOL and p[1] < TOL:
            return True
        if abs(p[1]) < TOL and p[0] > -TOL:
            return True
        return False

    edges = boundary_tag_edges(coords, cells, count, on_boundary)
    single = sum(1 for v in count.values() if v == 1)
    assert len(edges) == single, f"untagged boundary edges {single - len(edges)}"
    return coords, cells, {"boundary": edges}


# --- plate with hole ---------------------------------------------------------


def plate_hole_helpers(p):
    blocks = [
        np.column_stack([-p[:, 0], p[:, 1]]),
        np.column_stack([10 - p[:, 0], p[:, 1]]),
        np.column_stack([p[:, 0], -p[:, 1]]),
        np.column_stack([p[:, 0], 10 - p[:, 1]]),
    ]
    r = np.hypot(p[:, 0], p[:, 1])
    near = r < 2.5
    rr = r[near]
    blocks.append(p[near] * ((2.0 - rr) / rr)[:, None])  # reflect r -> 2a - r
    return np.vstack(blocks)


def plate_hole_clamp(p):
    m = 0.02
    p = np.column_stack([np.clip(p[:, 0], m, 5 - m), np.clip(p[:, 1], m, 5 - m)])
    r = np.hypot(p[:, 0], p[:, 1])
    tight = r < 1 + m
    p[tight] *= ((1 + m) / r[tight])[:, None]
    return p


def make_plate_hole(name, n, iters=40):
    rng = np.random.default_rng(SEEDS[name])
    pts = []
    while len(pts) < n:
        cand = np.column_stack([rng.uniform(0, 5, 4 * n), rng.uniform(0, 5, 4 * n)])
        cand = cand[np.hypot(cand[:, 0], cand[:, 1]) > 1.05]
        pts.extend(cand.tolist())
    pts = np.array(pts[:n])
    pts = lloyd(pts, plate_hole_helpers, 5.0, iters, plate_hole_clamp)
    coords, cells = voronoi_cells(pts, plate_hole_helpers(pts), 5.0)
    coords, cells, _ = compact(coords, cells)
    coords = snap_to_lines(
        coords, [(0, 0.0), (0, 5.0), (1, 0.0), (1, 5.0)], TOL * 5)
    # hole boundary is the emergent Voronoi polyline, not snapped to the
    # circle: snapping would break cell convexity
    count = validate_mesh(coords, cells, area_expect=25 - np.pi / 4,
                          area_tol=2e-2)
    s = TOL * 5
    tags = {
        "symx": boundary_tag_edges(coords, cells, count,
                                   lambda p: abs(p[0]) < s),
        "symy": boundary_tag_edges(coords, cells, count,
                                   lambda p: abs(p[1]) < s),
        "outer_x": boundary_tag_edges(coords, cells, count,
                                      lambda p: abs(p[0] - 5) < s),
        "outer_y": boundary_tag_edges(coords, cells, count,
                                      lambda p: abs(p[1] - 5) < s),
    }
    assert all(tags.values()), "missing plate-hole tags"
    return coords, cells, tags


# --- crack meshes ------------------------------------------------------------


def tip_chain(coords, cells_all, cell_idx, tip, angle):
    """Splits the tip cell's CCW loop at the crack-entry vertex.

    Returns the open chain (entry vertex repeated at both ends) and the
    index of the on-ray exit vertex. Local frame: +x along the extension.
    """
    c, s = np.cos(angle), np.sin(angle)
    R = np.array([[c, s], [-s, c]])  # global -> local
    loop = cells_all[cell_idx]
    P = (coords[loop] - tip) @ R.T
    online = np.abs(P[:, 1]) < TOL * 10
    behind = online & (P[:, 0] < 0)
    ahead = online & (P[:, 0] > 0)
    assert behind.sum() == 1, "crack entry is not a single vertex"
    assert ahead.sum() == 1, "extension ray misses the cell boundary"
    iA = int(np.nonzero(behind)[0][0])
    chain = loop[iA:] + loop[:iA] + [loop[iA]]
    # CCW from the entry must leave on the negative local-y side
    nxt = (coords[chain[1]] - tip) @ R.T
    assert nxt[1] < 0, "tip loop not counter-clockwise"
    return chain


def split_chain_edges(coords_list, cells, chains):
    """Subdivides every chain edge into 5 segments, keeping neighbors
    conforming. coords_list is a mutable list of [x, y]."""
    directed = {}
    for ci, cell in enumerate(cells):
        for k in range(len(cell)):
            directed[(cell[k], cell[(k + 1) % len(cell)])] = (ci, k)
    insertions = {}  # (cell, edge pos) -> new node ids in cell direction
    new_chains = []
    for chain in chains:
        out = [chain[0]]
        for a, b in zip(chain[:-1], chain[1:]):
            pa = np.array(coords_list[a])
            pb = np.array(coords_list[b])
            ids = []
            for t in (0.2, 0.4, 0.6, 0.8):
                ids.append(len(coords_list))
                coords_list.append(((1 - t) * pa + t * pb).tolist())
            assert (b, a) in directed, "chain edge has no neighbor cell"
            assert (a, b) not in directed, "chain edge still owned by a cell"
            insertions[directed[(b, a)]] = ids[::-1]
            out.extend(ids)
            out.append(b)
        new_chains.append(out)
    new_cells = []
    for ci, cell in enumerate(cells):
        out = []
        for k in range(len(cell)):
            out.append(cell[k])
            out.extend(insertions.get((ci, k), []))
        new_cells.append(out)
    return new_cells, new_chains


def duplicate_crack_nodes(coords_list, cells, chains, span_pred, side_of):
    """Splits nodes on the crack span into plus/minus copies.

    Cells take the copy matching the side of their centroid; each chain's
    end copies follow the side on which the chain departs/arrives.
    """
    dup = {}
    for i, p in enumerate(list(coords_list)):
        if span_pred(np.array(p)):
            dup[i] = len(coords_list)
            coords_list.append(list(p))
    assert dup, "crack span matched no nodes"
    for cell in cells:
        if not any(j in dup for j in cell):
            continue
        P = np.array([coords_list[j] for j in cell])
        if side_of(polygon_centroid(P)) < 0:
            for k, j in enumerate(cell):
                if j in dup:
                    cell[k] = dup[j]
    fixed = []
    for chain in chains:
        a, b = chain[0], chain[-1]
        assert a == b and a in dup, "chain must close on a span vertex"
        assert not any(j in dup for j in chain[1:-1]), "span node inside chain"
        first_minus = side_of(np.array(coords_list[chain[1]])) < 0
        chain[0] = dup[a] if first_minus else a
        chain[-1] = a if first_minus else dup[a]
        fixed.append(chain)
    return fixed


def emit_crack_json(path, coords_list, elements, chains, tips, angles,
                    tag_spec, domain_area, span_pred, nvec, origin):
    side = lambda p: 1.0 if (p - origin) @ nvec > 0 else -1.0
    chains = duplicate_crack_nodes(coords_list, elements, chains,
                                   span_pred, side)
    coords = np.array(coords_list)
    count = validate_mesh(coords, elements, area_expect=None,
                          allow_collinear=True)
    total = sum(polygon_area(coords[c]) for c in elements)
    total += sum(polygon_area(np.array(
        [coords_list[j] for j in ch[:-1]])) for ch in chains)
    assert abs(total - domain_area) < 1e-6 * domain_area, \
        f"area {total} != {domain_area}"
    tags = {}
    for tag, pred in tag_spec:
        edges = boundary_tag_edges(coords, elements, count, pred)
        assert edges, f"no edges for {tag}"
        tags[tag] = edges
    sbfem = []
    for ch, t, a in zip(chains, tips, angles):
        sbfem.append({"tip": [float(t[0]), float(t[1])],
                      "chain": [int(j) for j in ch],
                      "angle": float(a)})
    write_mesh(path, coords, elements, tags, sbfem)


def make_edge_crack(name, n_half, path):
    """Double-edge-cracked strip [0,1] x [-1,1], cracks along y=0 from both
    sides to x = 0.25 and x = 0.75. Seeds mirrored across the crack line so
    it stays an exact union of cell edges."""
    rng = np.random.default_rng(SEEDS[name])
    m = 0.35 / np.sqrt(2 * n_half)
    q = np.column_stack([rng.uniform(m, 1 - m, n_half),
                         rng.uniform(m, 1 - m, n_half)])
    tips = np.array([[0.25, 0.0], [0.75, 0.0]])

    def expand(base):
        full = np.vstack([base, np.column_stack([base[:, 0], -base[:, 1]])])
        return np.vstack([full, tips])

    helpers = rect_helpers(0.0, 1.0, -1.0, 1.0)
    for _ in range(40):
        pts = expand(q)
        coords, cells = voronoi_cells(pts, helpers(pts), 2.0)
        cent = np.array([polygon_centroid(coords[c])
                         for c in cells[:n_half]])
        q = np.column_stack([np.clip(cent[:, 0], m, 1 - m),
                             np.clip(cent[:, 1], m, 1 - m)])
    pts = expand(q)
    coords, cells = voronoi_cells(pts, helpers(pts), 2.0)
    coords = snap_to_lines(coords, [(0, 0.0), (0, 1.0), (1, -1.0), (1, 1.0)],
                           TOL * 2)
    ntip0 = len(pts) - 2
    coords, cells, _ = compact(coords, cells)

    origin = np.array([0.0, 0.0])
    e = np.array([1.0, 0.0])
    nvec = np.array([0.0, 1.0])
    d = coords[:, 1]
    online = np.abs(d) < TOL * 20
    coords[online, 1] = 0.0

    chains = [tip_chain(coords, cells, ntip0, tips[0], 0.0),
              tip_chain(coords, cells, ntip0 + 1, tips[1], np.pi)]
    elements = [c for i, c in enumerate(cells) if i not in (ntip0, ntip0 + 1)]
    coords_list = [list(p) for p in coords]
    elements, chains = split_chain_edges(coords_list, elements, chains)
    xa = coords_list[chains[0][0]][0]
    xb = coords_list[chains[1][0]][0]
    assert 0.02 < xa < 0.2499 and 0.7501 < xb < 0.98

    def span_pred(p):
        if abs(p[1]) > TOL * 20:
            return False
        return p[0] <= xa + TOL or p[0] >= xb - TOL

    s = TOL * 2
    tag_spec = [("top", lambda p: abs(p[1] - 1) < s),
                ("bottom", lambda p: abs(p[1] + 1) < s)]
    emit_crack_json(path, coords_list, elements, chains, tips,
                    [0.0, np.pi], tag_spec, 2.0, span_pred, nvec, origin)


def crack_size_field(p, e):
    """Target spacing: fine along the crack segment, graded to the far field."""
    t = np.clip(p @ e, -1.0, 1.0)
    d = np.linalg.norm(p - np.outer(t, e), axis=1)
    return np.minimum(1.7, 0.24 + 0.5 * d)


def weighted_centroid(P, rho):
    c0 = P.mean(axis=0)
    n = len(P)
    M = 0.0
    S = np.zeros(2)
    for k in range(n):
        a, b = P[k], P[(k + 1) % n]
        area = 0.5 * ((a[0] - c0[0]) * (b[1] - c0[1])
                      - (a[1] - c0[1]) * (b[0] - c0[0]))
        for q in ((c0 + a) / 2, (a + b) / 2, (b + c0) / 2):
            w = (area / 3) * rho(q)
            M += w
            S += w * q
    return S / M


def make_inclined_crack(name, n_sector, beta_deg, path):
    """Center crack of half-length 1 at angle beta in [-10,10]^2. Seeds are
    graded toward the crack and symmetric under reflection across the crack
    line and point reflection about the center."""
    rng = np.random.default_rng(SEEDS[name])
    beta = np.radians(beta_deg)
    e = np.array([np.cos(beta), np.sin(beta)])
    nvec = np.array([-e[1], e[0]])
    R = np.column_stack([e, nvec])  # local -> global
    tips = np.array([e, -e])
    rho = lambda q: float(crack_size_field(q[None, :], e)[0]) ** -4

    # Pinned ring around tip A (upper half; the symmetry group completes the
    # ring and copies it to tip B). It gives every tip a regular eight-edge
    # cell, which keeps the crack-tip chain and its neighbourhood uniform.
    ring_r = 0.3
    ring_th = np.radians([22.5, 67.5, 112.5, 157.5])
    ring = (np.array([1.0, 0.0]) +
            ring_r * np.column_stack([np.cos(ring_th), np.sin(ring_th)])) @ R.T
    n_pin = len(ring)
    keep_out = 1.5 * ring_r

    def tip_push(p):
        for t in (tips[0], tips[1]):
            d = p - t
            r = np.linalg.norm(d, axis=1)
            close = r < keep_out
            p[close] = t + d[close] * (keep_out / r[close])[:, None]
        return p

    base = []
    while len(base) < n_sector:
        cand = rng.uniform(-10, 10, (32 * n_sector, 2))
        h = crack_size_field(cand, e)
        m = 0.35 * h
        loc = cand @ R
        keep = (loc[:, 0] > m) & (loc[:, 1] > m) \
            & (np.abs(cand[:, 0]) < 10 - m) & (np.abs(cand[:, 1]) < 10 - m) \
            & (np.linalg.norm(cand - tips[0], axis=1) > keep_out) \
            & (np.linalg.norm(cand - tips[1], axis=1) > keep_out) \
            & (rng.uniform(size=len(cand)) < (0.24 / h) ** 2)
        base.extend(cand[keep].tolist())
    base = np.array(base[:n_sector])

    def expand(b):
        b = np.vstack([ring, b])
        mirror = b - 2 * np.outer(b @ nvec, nvec)  # across crack line
        half = np.vstack([b, mirror])
        return np.vstack([half, -half, tips])

    helpers = rect_helpers(-10.0, 10.0, -10.0, 10.0)
    for _ in range(40):
        pts = expand(base)
        coords, cells = voronoi_cells(pts, helpers(pts), 20.0)
        cent = np.array([weighted_centroid(coords[c], rho)
                         for c in cells[n_pin:n_pin + n_sector]])
        m = 0.35 * crack_size_field(cent, e)
        loc = cent @ R
        loc[:, 0] = np.maximum(loc[:, 0], m)
        loc[:, 1] = np.maximum(loc[:, 1], m)
        cent = loc @ R.T
        lim = 10 - 0.35 * crack_size_field(cent, e)
        cent = np.clip(cent, -lim[:, None], lim[:, None])
        base = tip_push(cent)
    pts = expand(base)
    coords, cells = voronoi_cells(pts, helpers(pts), 20.0)
    coords = snap_to_lines(coords,
                           [(0, -10.0), (0, 10.0), (1, -10.0), (1, 10.0)],
                           TOL * 20)
    ntip0 = len(pts) - 2
    coords, cells, _ = compact(coords, cells)

    origin = np.array([0.0, 0.0])
    d = coords @ nvec
    online = np.abs(d) < TOL * 200
    coords[online] -= np.outer(d[online], nvec)

    chains = [tip_chain(coords, cells, ntip0, tips[0], beta),
              tip_chain(coords, cells, ntip0 + 1, tips[1], beta + np.pi)]
    elements = [c for i, c in enumerate(cells) if i not in (ntip0, ntip0 + 1)]
    coords_list = [list(p) for p in coords]
    elements, chains = split_chain_edges(coords_list, elements, chains)
    ta = np.array(coords_list[chains[0][0]]) @ e
    tb = np.array(coords_list[chains[1][0]]) @ e
    assert 0.3 < ta < 1.0 and -1.0 < tb < -0.3

    def span_pred(p):
        if abs(p @ nvec) > TOL * 200:
            return False
        return tb - TOL <= p @ e <= ta + TOL

    s = TOL * 20
    tag_spec = [("left", lambda p: abs(p[0] + 10) < s),
                ("right", lambda p: abs(p[0] - 10) < s),
                ("top", lambda p: abs(p[1] - 10) < s),
                ("bottom", lambda p: abs(p[1] + 10) < s)]
    emit_crack_json(path, coords_list, elements, chains, tips,
                    [beta, beta + np.pi], tag_spec, 400.0,
                    span_pred, nvec, origin)


# --- drivers -----------------------------------------------------------------


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", default="fixtures")
    ap.add_argument("--only", default="")
    args = ap.parse_args()
    os.makedirs(args.out, exist_ok=True)
    want = lambda s: (not args.only) or args.only in s

    if want("patch2d"):
        coords, cells, tags = make_rect_voronoi(
            "patch2d", 25, 0.0, 1.0, 0.0, 1.0, [])
        write_mesh(os.path.join(args.out, "patch2d.json"), coords, cells, tags)
    for n in (100, 200, 400, 800):
        name = f"cantilever_poly_{n}"
        if want(name):
            coords, cells, tags = make_rect_voronoi(
                name, n, 0.0, 8.0, -2.0, 2.0,
                [("left", 0, 0.0), ("right", 0, 8.0),
                 ("top", 1, 2.0), ("bottom", 1, -2.0)])
            write_mesh(os.path.join(args.out, name + ".json"),
                       coords, cells, tags)
    for i, n in enumerate((64, 128, 256, 512), start=1):
        name = f"plate_hole_{i}"
        if want(name):
            coords, cells, tags = make_plate_hole(name, n)
            write_mesh(os.path.join(args.out, name + ".json"),
                       coords, cells, tags)
    for i, n in enumerate((50, 100, 200, 400), start=1):
        name = f"l_shape_{i}"
        if want(name):
            coords, cells, tags = make_lshape(name, n)
            write_mesh(os.path.join(args.out, name + ".json"),
                       coords, cells, tags)
    for i, nh in enumerate((16, 44, 164, 614, 2468), start=1):
        name = f"edge_crack_{i}"
        if want(name):
            make_edge_crack(name, nh,
                            os.path.join(args.out, name + ".json"))
    for b in (0, 15, 30, 45, 60, 75, 90):
        name = f"inclined_crack_{b}"
        if want(name):
            make_inclined_crack(name, 70, b,
                                os.path.join(args.out, name + ".json"))


if __name__ == "__main__":
    main()
