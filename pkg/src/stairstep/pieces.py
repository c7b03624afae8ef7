"""Cutting along multicurves: pieces as honest triangulated surfaces.

A SubsurfaceDecomposition holds the reduced drawing of the cut curves, one
Piece per complementary region (fan-triangulated from the region's cells),
and transports curves disjoint from the cut into piece coordinates.  The
cut curves' canonical positions never move; a transported curve is reduced
against them one-sidedly, so pieces are stable objects.

Chord segments acquire midpoint vertices so every cell is at least a
triangle.  All extra vertices live on piece boundaries, where they do not
disturb normal-coordinate canonicity; parent marked/ideal vertices keep
their kinds.
"""

from __future__ import annotations

from fractions import Fraction

from .surface import (Surface, MultiCurve, VKIND_BOUNDARY, same_surface)
from ._strands import Strandset
from ._arrangement import Drawing, Cells
from ._chordgeom import chord_param
from .curves import validate_multicurve, minimal_drawing
from .errors import MatchingViolation, MissesSubsurface


class Piece:
    """One complementary region with its own triangulated surface."""

    def __init__(self, decomposition, region):
        self.decomposition = decomposition
        self.region = region
        cells = decomposition.cells
        parent = decomposition.surface
        cell_ids = cells.regions[region]

        self.edge_ids = {}
        self.edge_parent_increasing = {}
        boundary_edges = set()

        def get_edge(meta):
            if meta not in self.edge_ids:
                self.edge_ids[meta] = len(self.edge_ids)
            return self.edge_ids[meta]

        # cell walks: entries (edge_id, flag, head_node_or_mid)
        self.cell_walk = {}
        for cid in cell_ids:
            walk = []
            for dart in cells.cells[cid]:
                kind = cells.dart_kind(dart)
                head = cells.dart_head(dart)
                if kind == "b":
                    e, k = cells.dart_meta(dart)
                    if e in parent.boundary_edges:
                        eid = get_edge(("ab", e, k))
                        boundary_edges.add(eid)
                        walk.append((eid, 1, head))
                    else:
                        meta = ("s", e, k)
                        first = meta not in self.edge_ids
                        eid = get_edge(meta)
                        if first:
                            # intrinsic direction := this walk's direction;
                            # parent-increasing iff dart sign matches flag
                            t, sid, sign = dart
                            o = _side_flag(parent, t, _dart_side(cells, dart))
                            self.edge_parent_increasing[eid] = (sign * o == 1)
                            walk.append((eid, 1, head))
                        else:
                            walk.append((eid, -1, head))
                else:
                    h1 = get_edge(("ch", dart, 0))
                    h2 = get_edge(("ch", dart, 1))
                    boundary_edges.add(h1)
                    boundary_edges.add(h2)
                    walk.append((h1, 1, ("mid", dart)))
                    walk.append((h2, 1, head))
            if len(walk) < 3:
                raise MatchingViolation("cell of size %d" % len(walk))
            self.cell_walk[cid] = walk

        # fan triangulation
        triangles = []
        self.fan_base = {}
        self.fan_size = {}
        for cid in cell_ids:
            walk = self.cell_walk[cid]
            m = len(walk)
            self.fan_base[cid] = len(triangles)
            self.fan_size[cid] = m
            for i in range(1, m - 1):
                s0 = walk[0][:2] if i == 1 else (get_edge(("diag", cid, i)), 1)
                s1 = walk[i][:2]
                s2 = (walk[m - 1][:2] if i == m - 2
                      else (get_edge(("diag", cid, i + 1)), -1))
                triangles.append((s0, s1, s2))

        chi_surface = (cells.region_chi_cw[region]
                       - cells.region_ideal_inside[region])
        n_circ = len(cells.region_circuits[region])
        b = n_circ + cells.region_ideal_inside[region]
        if (2 - chi_surface - b) % 2:
            raise MatchingViolation("piece has odd Euler defect")
        genus = (2 - chi_surface - b) // 2

        surf = Surface(
            genus=genus,
            boundary_count=b,
            triangles=tuple(triangles),
            edge_count=len(self.edge_ids),
            name="%s/r%d" % (parent.name, region),
            boundary_edges=frozenset(boundary_edges),
        )
        kinds = self._vertex_kinds(surf, cell_ids, cells, parent)
        surf = Surface(
            genus=genus, boundary_count=b, triangles=surf.triangles,
            edge_count=surf.edge_count, name=surf.name,
            vertex_kinds=tuple(kinds),
            boundary_edges=surf.boundary_edges,
        )
        surf.check()
        self.surface = surf
        self.genus = genus
        self.chi = chi_surface
        self.contains_vertex = bool(cells.region_vertices[region])
        self.circuits = list(cells.region_circuits[region])

    def _vertex_kinds(self, surf, cell_ids, cells, parent):
        kinds = [VKIND_BOUNDARY] * surf.nvertices
        tri_idx = 0
        for cid in cell_ids:
            walk = self.cell_walk[cid]
            m = len(walk)
            heads = [w[2] for w in walk]  # node j+1 = head of element j
            for i in range(1, m - 1):
                corner_nodes = {0: heads[i - 1], 1: heads[i],
                                2: heads[m - 1]}
                for c, node in corner_nodes.items():
                    if isinstance(node, tuple) and node and node[0] == "c":
                        v = surf.corner_vertex(tri_idx, c)
                        pv = parent.corner_vertex(node[1], node[2])
                        kinds[v] = parent.vertex_kind(pv)
                tri_idx += 1
        return kinds

    def transport(self, x):
        return self.decomposition.transport_into(self, x)

    def describe(self):
        return {
            "genus": self.genus,
            "boundary": self.surface.boundary_count,
            "chi": self.chi,
            "contains_vertex": self.contains_vertex,
        }


def _dart_side(cells, dart):
    h = cells.dart_head(dart)
    t0 = cells.dart_tail(dart)
    for node in (h, t0):
        if node[0] == "p":
            return node[3]
    # both endpoints corners: corner i sits between sides i and i+1, so the
    # segment between corners a and b=(a+1)%3 lies on side b
    a, b = h[2], t0[2]
    if (a + 1) % 3 == b:
        return b
    if (b + 1) % 3 == a:
        return a
    raise MatchingViolation("corner pair does not bound a side")


def _side_flag(parent, t, s):
    return parent.triangles[t][s][1]


class SubsurfaceDecomposition:
    """Pieces of the surface cut along disjoint multicurves."""

    def __init__(self, surface, multicurves):
        self.surface = surface
        self.multicurves = list(multicurves)
        for m in self.multicurves:
            same_surface(m, self.multicurves[0])
        self.cells = minimal_drawing(
            surface, [m.coords for m in self.multicurves])
        if self.cells.crossing_count() != 0:
            raise MatchingViolation("cut curves are not disjoint")
        self.pieces = [Piece(self, r) for r in sorted(self.cells.regions)]
        comps, where = self.cells.drawing.component_map()
        self._comps = comps
        self._where = where

    @property
    def chi_per_piece(self):
        return [p.chi for p in self.pieces]

    def adjacency(self):
        """Per piece, per boundary circuit: the (family, component) pairs
        the circuit runs along (ambient circuits give an empty list)."""
        fam = self.cells.drawing.fam
        out = []
        for p in self.pieces:
            rows = []
            for ci in p.circuits:
                circ = self.cells.circuits[ci]
                comps = sorted({(fam[pid], self._where[pid][0])
                                for (_j, pid) in circ["edge_points"]})
                rows.append(comps)
            out.append(rows)
        return out

    def locate_region(self, edge, position):
        ss = self.cells.ss
        k = sum(1 for pid in ss.edge_points[edge]
                if ss.points[pid][1] < position)
        insts = self.cells.side_instances.get((edge, k))
        if not insts:
            raise MatchingViolation("no side instance at (%d,%d)" % (edge, k))
        return self.cells.region_of_cell[insts[0][1]]

    # -- transport --------------------------------------------------------

    def _fresh_overlay(self, mobile_coords):
        base = self.cells.drawing
        drawing = Drawing(self.surface)
        ss = drawing.ss
        remap = {}
        for pid in sorted(base.ss.points):
            e, pos = base.ss.points[pid]
            npid = ss.new_point(e, pos)
            remap[pid] = npid
            drawing.fam[npid] = 0
        for t in range(self.surface.ntriangles):
            seen = set()
            for (s, pid), (s2, pid2) in base.ss.match[t].items():
                key = tuple(sorted(((s, pid), (s2, pid2))))
                if key in seen:
                    continue
                seen.add(key)
                ss.add_arc(t, (s, remap[pid]), (s2, remap[pid2]))
        mobile = Strandset.from_coords(self.surface, mobile_coords, tiebreak=9)
        drawing.absorb(mobile, 1)
        return drawing

    def reduced_overlay(self, x):
        """(drawing, cells) of the cut plus x with every mobile-vs-cut bigon
        swept by moving only x.  One bigon is swept per pass and the mobile
        family is re-extracted and pulled taut before the next pass, so
        sweeps always act on a fresh canonical overlay (stacked corridor
        states are never reused).  Essential crossings may remain."""
        coords = x.coords
        guard = 0
        while True:
            guard += 1
            if guard > 5000:
                raise MatchingViolation(
                    "one-sided reduction did not terminate")
            drawing = self._fresh_overlay(coords)
            cells = Cells(drawing)
            bigs = [b for b in cells.bigons(allow_marked=True)
                    if len(b[1]["families"]) == 2]
            if not bigs:
                return drawing, cells
            _remove_one_sided(drawing, cells, bigs[0], 1)
            mobile = drawing.extract(1)
            mobile.normalize()
            coords = mobile.coords()

    def drawing_with(self, x):
        """Copy of the cut drawing plus x positioned disjointly from it;
        raises MissesSubsurface when x intersects the cut essentially."""
        drawing, cells = self.reduced_overlay(x)
        if cells.crossing_count():
            raise MissesSubsurface("curve intersects the cut essentially")
        return drawing

    def transport_into(self, piece, x):
        drawing = self.drawing_with(x)
        return _read_off(self, piece, drawing)


# ---------------------------------------------------------------------------
# one-sided reduction
# ---------------------------------------------------------------------------

def _remove_one_sided(drawing, cells, bigon, mobile_family):
    _r, circ = bigon
    seq = circ["seq"]
    n = len(seq)
    (j1, x1), (j2, x2) = circ["turns"]
    fam = drawing.fam
    ss = drawing.ss

    def run(jst, jen):
        darts, pids = [], []
        j = (jst + 1) % n
        while True:
            darts.append(seq[j])
            if j == jen:
                break
            h = cells.dart_head(seq[j])
            if h[0] == "p":
                pids.append(h[1])
            j = (j + 1) % n
        return darts, pids

    run_a, pids_a = run(j1, j2)
    run_b, pids_b = run(j2, j1)
    fam_a = fam[cells.dart_meta(run_a[0])[0][0][1]]
    if fam_a == mobile_family:
        mobile_pids = pids_a
        fixed_run, fixed_pids = run_b, pids_b
        ja, jb = j1, j2
    else:
        mobile_pids = pids_b
        fixed_run, fixed_pids = run_a, pids_a
        ja, jb = j2, j1

    d_out = seq[(ja + 1) % n]   # first mobile dart, leaving turn a
    d_arr = seq[jb]             # last mobile dart, arriving at turn b
    t_a, t_b = d_out[0], d_arr[0]
    k_mob_a = cells.dart_meta(d_out)[0]
    k_mob_b = cells.dart_meta(d_arr)[0]
    far_a = _far_port(cells, d_out, ahead=False)
    far_b = _far_port(cells, d_arr, ahead=True)

    # fixed path from turn a to turn b = reversed fixed run
    fixed_path = list(reversed(fixed_run))
    fixed_path_pids = list(reversed(fixed_pids))

    # drop the mobile run
    for pid in mobile_pids:
        for (t, s) in ss.views(pid):
            if (s, pid) in ss.match[t]:
                ss.del_arc(t, (s, pid))
    for t, k in ((t_a, k_mob_a), (t_b, k_mob_b)):
        if ss.match[t].get(k[0]) == k[1]:
            ss.del_arc(t, k[0])
    for pid in mobile_pids:
        ss.del_point(pid)
        fam.pop(pid, None)

    # parallel copy of the fixed run on its far side, strictly closer to the
    # fixed strand than anything already there
    new_points = []
    for pid in fixed_path_pids:
        e, pos = ss.points[pid]
        off = _far_side_offset(cells, circ, pid)
        npid = ss.new_point(e, _beside(ss, e, pos, off))
        fam[npid] = mobile_family
        new_points.append(npid)

    chain = [far_a] + new_points + [far_b]
    tris = [d[0] for d in fixed_path]
    if len(tris) != len(chain) - 1:
        raise MatchingViolation("parallel chain length mismatch")
    for i in range(len(chain) - 1):
        t = tris[i]
        pa = chain[i] if isinstance(chain[i], tuple) \
            else _free_port(ss, chain[i], t)
        pb = chain[i + 1] if isinstance(chain[i + 1], tuple) \
            else _free_port(ss, chain[i + 1], t)
        ss.add_arc(t, pa, pb)


def _far_port(cells, dart, ahead):
    t, sid, sign = dart
    k = cells.dart_meta(dart)[0]
    path = cells.tri[t]["chord_path"][k]
    if ahead:
        node = path[-1] if sign == 1 else path[0]
    else:
        node = path[0] if sign == 1 else path[-1]
    return (node[3], node[1])


def _beside(ss, e, base_pos, off):
    """A fresh position immediately beside base_pos on the off side, closer
    than every existing point on that side."""
    cand = base_pos + (off,)
    pts = ss.edge_points[e]
    neighbor = None
    if off > 0:
        for pid in pts:
            p = ss.points[pid][1]
            if p > base_pos:
                neighbor = p
                break
        if neighbor is not None and neighbor < cand:
            return neighbor + (-off,)
    else:
        for pid in reversed(pts):
            p = ss.points[pid][1]
            if p < base_pos:
                neighbor = p
                break
        if neighbor is not None and neighbor > cand:
            return neighbor + (-off,)
    return cand


def _far_side_offset(cells, circ, pid):
    seq = circ["seq"]
    for (j, pj) in circ["edge_points"]:
        if pj == pid:
            d = seq[j]
            t1 = d[0]
            h = cells.dart_head(d)
            s_from = h[3]
            e, _pos = cells.ss.points[pid]
            for (tt, s_, oo) in cells.surface.edge_sides(e):
                if (tt, s_) == (t1, s_from):
                    # the bigon is left of the walk; left is the +e side
                    # when leaving the o=+1 occurrence, so far side negates
                    return -1 if oo == 1 else 1
    raise MatchingViolation("junction not on bigon circuit")


def _free_port(ss, pid, t):
    free = None
    for (tt, s) in ss.views(pid):
        if tt == t and (s, pid) not in ss.match[t]:
            return (s, pid)
    raise MatchingViolation("no free port for point %d in triangle %d"
                            % (pid, t))


# ---------------------------------------------------------------------------
# reading a mobile family off as piece coordinates
# ---------------------------------------------------------------------------

def _read_off(decomposition, piece, drawing):
    cells = decomposition.cells
    parent = decomposition.surface
    ss = drawing.ss
    fam = drawing.fam
    base_ss = cells.ss

    def interval_of(e, pos):
        return sum(1 for pid in base_ss.edge_points[e]
                   if base_ss.points[pid][1] < pos)

    mobile_pids = sorted(p for p, f in fam.items() if f == 1)
    new_ss = Strandset(piece.surface)
    newpid = {}
    for pid in mobile_pids:
        e, pos = ss.points[pid]
        k = interval_of(e, pos)
        meta = ("s", e, k)
        eid = piece.edge_ids.get(meta)
        if eid is None:
            continue
        ppos = pos if piece.edge_parent_increasing[eid] else -pos
        newpid[pid] = new_ss.new_point(eid, ppos)

    chords = []
    for t in range(parent.ntriangles):
        seen = set()
        for (s, pid), (s2, pid2) in ss.match[t].items():
            if fam.get(pid) != 1 or fam.get(pid2) != 1:
                continue
            key = tuple(sorted(((s, pid), (s2, pid2))))
            if key in seen:
                continue
            seen.add(key)
            in1, in2 = pid in newpid, pid2 in newpid
            if in1 != in2:
                raise MatchingViolation("chord straddles pieces")
            if in1:
                chords.append((t, key))
    if not chords:
        raise MissesSubsurface("curve misses this piece")

    for (t, key) in chords:
        cid = _cell_of_chord(decomposition, piece, drawing, t, key)
        _cut_through_fan(decomposition, piece, drawing, new_ss, newpid,
                         t, key, cid)

    new_ss._check_complete()
    new_ss.normalize()
    coords = new_ss.coords()
    if sum(coords) == 0:
        raise MissesSubsurface("curve is isotopic off the piece")
    return validate_multicurve(piece.surface, coords)


def _cell_of_chord(decomposition, piece, drawing, t, key):
    cells = decomposition.cells
    base_ss = cells.ss
    ss = drawing.ss
    cands = None
    for (s, pid) in key:
        e, _o = decomposition.surface.triangles[t][s]
        pos = ss.points[pid][1]
        k = sum(1 for bp in base_ss.edge_points[e]
                if base_ss.points[bp][1] < pos)
        insts = cells.side_instances.get((e, k), [])
        here = set()
        for (d, c) in insts:
            if d[0] != t:
                continue
            node = cells.dart_head(d)
            node2 = cells.dart_tail(d)
            sides = {n[3] for n in (node, node2) if n[0] == "p"}
            if sides and s not in sides:
                # disambiguate edges appearing twice in one triangle
                hk = cells.dart_meta(d)
                # fall through: accept only matching side when known
                continue
            here.add(cells.cell_of_dart[d])
        cands = here if cands is None else (cands & here)
    if not cands:
        raise MatchingViolation("no cell for chord")
    if len(cands) > 1:
        raise MatchingViolation("ambiguous cell for chord")
    return cands.pop()


def _cut_through_fan(decomposition, piece, drawing, new_ss, newpid,
                     t, key, cid):
    """Split one mobile chord along the fan triangles of its cut-cell."""
    cells = decomposition.cells
    walk = piece.cell_walk[cid]
    m = len(walk)
    base = piece.fan_base[cid]
    ss = drawing.ss
    base_ss = cells.ss

    def endpoint_param(port):
        """Exact parameter along the cell walk in [j, j+1)."""
        s, pid = port
        e, _o = decomposition.surface.triangles[t][s]
        pos = ss.points[pid][1]
        k = sum(1 for bp in base_ss.edge_points[e]
                if base_ss.points[bp][1] < pos)
        eid = piece.edge_ids[("s", e, k)]
        hits = [j for j, w in enumerate(walk) if w[0] == eid]
        if len(hits) != 1:
            # the same interval bounds this cell on two sides (edge seen
            # twice by the triangle); choose by the port's side via the
            # dart's node side
            chosen = []
            for j in hits:
                dart = _dart_of_walk(cells, cid, piece, j)
                nodes = (cells.dart_head(dart), cells.dart_tail(dart))
                sides = {nd[3] for nd in nodes if nd[0] == "p"}
                if not sides or s in sides:
                    chosen.append(j)
            hits = chosen
        if len(hits) != 1:
            raise MatchingViolation("walk position ambiguous")
        j = hits[0]
        # fractional position within the element in walk direction
        frac = _fraction_along(piece, new_ss, newpid[pid], walk[j][0])
        if walk[j][1] == -1:
            frac = 1 - frac
        return j, frac

    (pa, pb) = key
    ja, fa = endpoint_param(pa)
    jb, fb = endpoint_param(pb)

    def pt2d(param):
        lo = param[0]
        f = param[1]
        # point on the convex polygon between nodes lo and lo+1
        x0, y0 = Fraction(lo), Fraction(lo) ** 2
        x1, y1 = Fraction(lo + 1), Fraction(lo + 1) ** 2
        return (x0 + (x1 - x0) * f, y0 + (y1 - y0) * f)

    A = pt2d((ja, fa))
    B = pt2d((jb, fb))

    def tri_of(j):
        return max(1, min(j, m - 2))

    ta, tb = tri_of(ja), tri_of(jb)
    if ta == tb:
        _fan_arc(piece, new_ss, base + ta - 1, newpid[pa[1]], newpid[pb[1]])
        return
    step = 1 if tb > ta else -1
    prev = newpid[pa[1]]
    i = ta
    while i != tb:
        d = i + 1 if step == 1 else i
        eid = piece.edge_ids[("diag", cid, d)]
        # exact crossing parameter of AB with the diagonal (node0, node d)
        t_ab = _diag_cross_param(A, B, d)
        npid = new_ss.new_point(eid, (t_ab, 9, newpid[pa[1]]))
        _fan_arc(piece, new_ss, base + i - 1, prev, npid)
        prev = npid
        i += step
    _fan_arc(piece, new_ss, base + tb - 1, prev, newpid[pb[1]])


def _diag_cross_param(A, B, d):
    """Parameter along the diagonal (node 0 -> node d) of its crossing with
    segment AB, exact; used to order crossings consistently."""
    x0, y0 = Fraction(0), Fraction(0)
    x1, y1 = Fraction(d), Fraction(d) ** 2
    rx, ry = x1 - x0, y1 - y0
    sx, sy = B[0] - A[0], B[1] - A[1]
    denom = rx * sy - ry * sx
    if denom == 0:
        raise MatchingViolation("degenerate fan crossing")
    qx, qy = A[0] - x0, A[1] - y0
    return (qx * sy - qy * sx) / denom


def _dart_of_walk(cells, cid, piece, j):
    """The original dart behind walk element j (chord halves collapse)."""
    orbit = cells.cells[cid]
    idx = 0
    for dart in orbit:
        kind = cells.dart_kind(dart)
        span = 2 if kind == "ch" else 1
        if idx <= j < idx + span:
            return dart
        idx += span
    raise MatchingViolation("walk index out of range")


def _fraction_along(piece, new_ss, npid, eid):
    """Normalized rank of the point among the mobile points on its edge."""
    pts = new_ss.edge_points[eid]
    i = pts.index(npid)
    return Fraction(i + 1, len(pts) + 1)


def _fan_arc(piece, new_ss, tri_index, pid_a, pid_b):
    tri = piece.surface.triangles[tri_index]
    ports = []
    for pid in (pid_a, pid_b):
        e, _pos = new_ss.points[pid]
        side = None
        for s in range(3):
            if tri[s][0] == e and (s, pid) not in new_ss.match[tri_index]:
                side = s
                break
        if side is None:
            raise MatchingViolation("arc endpoint not on fan triangle")
        ports.append((side, pid))
    new_ss.add_arc(tri_index, ports[0], ports[1])
