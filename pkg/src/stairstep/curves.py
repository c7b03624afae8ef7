"""Kernel operations on normal multicurves.

Coordinates always denote the normal form with respect to the surface's
marked triangulation.  Metric quantities (intersection numbers, filling,
disjointness) are computed in the closed-surface sense: positions are
reduced until no bigon remains, where bigons containing marked vertices are
still removable (marked points pin coordinates, punctures are real).
"""

from __future__ import annotations

from fractions import Fraction

from .surface import (
    Surface, MultiCurve, check_matching, same_surface,
    VKIND_IDEAL, VKIND_MARKED,
)
from ._strands import Strandset
from ._arrangement import Drawing, Cells
from ._moves import resolve_crossings
from .errors import (
    MatchingViolation, InessentialComponent, IsotopicComponents,
    MultiComponentInput,
)


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

def validate_multicurve(surface, coords):
    """Check matching conditions, trace components, reject inessential or
    parallel components.  Returns a MultiCurve; never repairs input."""
    coords = tuple(int(x) for x in coords)
    check_matching(surface, coords)
    if sum(coords) == 0:
        raise InessentialComponent("empty multicurve")
    ss = Strandset.from_coords(surface, coords)
    comps = ss.trace()
    comp_vecs = []
    for comp in comps:
        vec = [0] * surface.edge_count
        for (pid, _f, _t, _s) in comp:
            vec[ss.points[pid][0]] += 1
        comp_vecs.append(tuple(vec))
    seen = set()
    for vec in comp_vecs:
        if vec in seen:
            raise IsotopicComponents("two parallel components")
        seen.add(vec)
        if _component_trivial(surface, vec):
            raise InessentialComponent(
                "component %s bounds a disk or is boundary-parallel" % (vec,))
    return MultiCurve(surface, coords, len(comps))


def _component_trivial(surface, vec):
    """Does the single normal component bound a disk (possibly marked or
    once-punctured, i.e. boundary-parallel)?"""
    cells = Cells(Drawing.from_coord_families(surface, [vec]))
    for r in cells.regions:
        chi = cells.region_chi_cw[r]
        if chi != 1:
            continue
        # a disk region: if it contains at most one ideal vertex the
        # component is null-homotopic or puncture-parallel
        if cells.region_ideal_inside[r] <= 1:
            return True
    # peripheral annulus against an ambient boundary circle (cut pieces)
    for r in cells.regions:
        if cells.region_chi_cw[r] != 0 or cells.region_ideal_inside[r]:
            continue
        circs = [cells.circuits[i] for i in cells.region_circuits[r]]
        if len(circs) == 2 and any(c["ambient"] for c in circs):
            return True
    return False


# ---------------------------------------------------------------------------
# minimal position
# ---------------------------------------------------------------------------

def minimal_drawing(surface, coord_families):
    """Overlay the families and remove every bigon (marked points swept).

    Returns the final Cells object; drawing accessible as cells.drawing.
    """
    drawing = Drawing.from_coord_families(surface, coord_families)
    return reduce_drawing(drawing)


def reduce_drawing(drawing):
    while True:
        cells = Cells(drawing)
        bigs = cells.bigons(allow_marked=True)
        if not bigs:
            return cells
        resolutions = {}
        swap_pids = []
        used_chords = set()
        used_pids = set()
        for (_r, circ) in bigs:
            spec = _bigon_spec(cells, circ)
            if spec is None:
                continue
            chords_touched, xres, pids = spec
            if chords_touched & used_chords or pids & used_pids:
                continue
            used_chords |= chords_touched
            used_pids |= pids
            f0, f1 = circ["families"]
            resolutions.update(xres)
            swap_pids.append((pids, f0, f1))
        if not resolutions:
            raise MatchingViolation("bigon batch selection failed")
        resolve_crossings(drawing, resolutions)
        for (pids, f0, f1) in swap_pids:
            for p in pids:
                f = drawing.fam[p]
                drawing.fam[p] = f0 if f == f1 else (f1 if f == f0 else f)


def _bigon_spec(cells, circ):
    """Resolution spec for one empty bigon: returns (chord_keys, resolutions,
    pids) or None if degenerate."""
    seq = circ["seq"]
    (j1, x1), (j2, x2) = circ["turns"]
    n = len(seq)

    def chord_of(dart):
        return cells.dart_meta(dart)[0]

    def behind(dart):
        t, sid, sign = dart
        k = chord_of(dart)
        path = cells.tri[t]["chord_path"][k]
        node = path[0] if sign == 1 else path[-1]
        return _node_port(node)

    def ahead(dart):
        t, sid, sign = dart
        k = chord_of(dart)
        path = cells.tri[t]["chord_path"][k]
        node = path[-1] if sign == 1 else path[0]
        return _node_port(node)

    resolutions = {}
    chords_touched = set()
    for (j, x) in ((j1, x1), (j2, x2)):
        d_in = seq[j]
        d_out = seq[(j + 1) % n]
        t = d_in[0]
        k_in, k_out = chord_of(d_in), chord_of(d_out)
        if k_in == k_out:
            return None
        big_in, far_in = behind(d_in), ahead(d_in)
        far_out, big_out = behind(d_out), ahead(d_out)
        pairing = {
            (k_in, far_in): (k_out, big_out),
            (k_out, big_out): (k_in, far_in),
            (k_out, far_out): (k_in, big_in),
            (k_in, big_in): (k_out, far_out),
        }
        _x, _t, ka, kb = x
        resolutions[(t, ("x", ka, kb))] = pairing
        chords_touched.add((t, k_in))
        chords_touched.add((t, k_out))
    pids = {pid for (_j, pid) in circ["edge_points"]}
    return chords_touched, resolutions, pids


def _node_port(node):
    # ("p", pid, t, s) -> (s, pid)
    return (node[3], node[1])


# ---------------------------------------------------------------------------
# intersection / disjointness / filling
# ---------------------------------------------------------------------------

def geometric_intersection(a, b):
    """Exact geometric intersection number (closed-surface sense)."""
    same_surface(a, b)
    if a.coords == b.coords:
        return 0
    key = ("gi", b.coords)
    if key in a._cache:
        return a._cache[key]
    cells = minimal_drawing(a.surface, [a.coords, b.coords])
    n = cells.crossing_count()
    a._cache[key] = n
    b._cache[("gi", a.coords)] = n
    return n


def fills(a, b):
    """Do a and b jointly fill the surface (every complementary piece a
    disk or a boundary-parallel/punctured disk)?"""
    same_surface(a, b)
    if a.coords == b.coords:
        return False
    cells = minimal_drawing(a.surface, [a.coords, b.coords])
    for r in cells.regions:
        if not _region_trivial_for_fill(cells, r):
            return False
    return True


def _region_trivial_for_fill(cells, r):
    chi = cells.region_chi_cw[r]
    ideal = cells.region_ideal_inside[r]
    if chi == 1 and ideal <= 1:
        return True
    if chi == 0 and ideal == 0:
        circs = [cells.circuits[i] for i in cells.region_circuits[r]]
        if len(circs) == 2 and any(c["ambient"] for c in circs):
            return True
    return False


def closed_isotopic(a, b):
    """Equality as closed-surface classes: each component of a cobounds an
    annulus region with a component of b (coordinates may differ by sweeps
    across marked points, which bound no punctures)."""
    same_surface(a, b)
    if a.coords == b.coords:
        return True
    if a.component_count != b.component_count:
        return False
    cells = minimal_drawing(a.surface, [a.coords, b.coords])
    if cells.crossing_count() != 0:
        return False
    comps, where = cells.drawing.component_map()
    fam = cells.drawing.fam
    paired_a = set()
    paired_b = set()
    for r in cells.regions:
        circs = [cells.circuits[i] for i in cells.region_circuits[r]]
        if (cells.region_chi_cw[r] != 0 or len(circs) != 2
                or cells.region_ideal_inside[r]
                or any(c["ambient"] for c in circs)):
            continue
        sides = []
        for c in circs:
            pids = [pid for (_j, pid) in c["edge_points"]]
            comps_touched = {where[p][0] for p in pids}
            fams_touched = {fam[p] for p in pids}
            if len(comps_touched) != 1 or len(fams_touched) != 1:
                sides = None
                break
            sides.append((fams_touched.pop(), comps_touched.pop()))
        if not sides or {s[0] for s in sides} != {0, 1}:
            continue
        for (f, comp) in sides:
            (paired_a if f == 0 else paired_b).add(comp)
    na = sum(1 for comp in comps if fam[comp[0][0]] == 0)
    nb = len(comps) - na
    return len(paired_a) == na and len(paired_b) == nb


def disjoint(a, b):
    return geometric_intersection(a, b) == 0


# ---------------------------------------------------------------------------
# Dehn twists by resolution smoothing
# ---------------------------------------------------------------------------

def twist_image(b, axis, power):
    """The normal form of tw_axis^power(b).

    This applies the twist homeomorphism directly: the axis corridor is
    replaced by a system of n*m helix lanes (n = |power|, m = number of
    transverse crossings of b with the axis), every passage of b through the
    corridor is rerouted to wind n full turns, and the result is pulled
    taut.  The construction is valid in any transverse position.  Positive
    powers wind along the kernel's canonical orientation of the axis; the
    handedness is thereby a fixed deterministic convention.
    """
    same_surface(b, axis)
    if power == 0 or geometric_intersection(b, axis) == 0:
        return b
    surface = b.surface
    n = abs(power)

    drawing = Drawing(surface)
    aset = Strandset.from_coords(surface, axis.coords, tiebreak=0)
    drawing.absorb(aset, 0)
    bset = Strandset.from_coords(surface, b.coords, tiebreak=1)
    drawing.absorb(bset, 1)
    ss = drawing.ss
    fam = drawing.fam

    # axis direction and transverse signs; negative powers wind the other
    # way, which mirrors the lane ranks in the transverse direction
    mirror = power < 0
    comps, _where = drawing.component_map()
    sigma = {}
    directed = {}
    for comp in comps:
        if fam[comp[0][0]] != 0:
            continue
        for (pid, fv, tv, sgn) in comp:
            sigma[pid] = sgn
            if tv is None:
                continue
            t2, s2 = tv
            s_next, pid_next = ss.match[t2][(s2, pid)]
            directed[(t2, (s2, pid))] = (s_next, pid_next)

    # stations: crossings of b chords with axis chords, per triangle
    from ._moves import chords_and_crossings
    tri_data = {}
    m_total = 0
    for t in range(surface.ntriangles):
        rank, chords, _paths, crossings = chords_and_crossings(drawing, t)
        B = len(rank)
        a_chords = {}
        b_chords = {}
        for k in chords:
            if fam[k[0][1]] == 0:
                pa, pb = k
                if directed.get((t, pa)) == pb:
                    a_chords[k] = (pa, pb)
                else:
                    a_chords[k] = (pb, pa)
            else:
                b_chords[k] = []
        a_stations = {k: [] for k in a_chords}
        for (_x, k1, k2) in crossings:
            ka, kb = (k1, k2) if fam[k1[0][1]] == 0 else (k2, k1)
            a_stations[ka].append(kb)
            b_chords[kb].append(ka)
        m_total += sum(len(v) for v in a_stations.values())
        tri_data[t] = (rank, B, a_chords, a_stations, b_chords)
    if m_total == 0:
        return b
    N = n * m_total  # lanes in the corridor

    out = Strandset(surface)
    new_b = {}
    for pid in sorted(ss.points):
        if fam[pid] != 1:
            continue
        e, pos = ss.points[pid]
        new_b[pid] = out.new_point(e, pos)
    lane = {}
    for pid in sorted(sigma):
        e, pos = ss.points[pid]
        for r in range(N):
            lane[(pid, r)] = out.new_point(e, pos + (sigma[pid] * (r + 1),))

    for t in range(surface.ntriangles):
        rank, B, a_chords, a_stations, b_chords = tri_data[t]

        def on_right(port, tail, head):
            return 0 < (rank[port] - rank[tail]) % B < (rank[head] - rank[tail]) % B

        # order stations along each a chord (from its tail)
        station_info = {}
        for ka, stations in a_stations.items():
            tail, head = a_chords[ka]

            def along(kb, _tail=tail, _head=head):
                p = kb[0] if on_right(kb[0], _tail, _head) else kb[1]
                return (rank[p] - rank[_tail]) % B

            ordered = sorted(stations, key=along)
            q = len(ordered)
            for j, kb in enumerate(ordered, start=1):
                station_info[(ka, kb)] = (j, q)
            # through lanes
            (ts, tp) = tail
            (hs, hp) = head
            for r in range(N - q):
                if not mirror:
                    out.add_arc(t, (ts, lane[(tp, r)]), (hs, lane[(hp, r + q)]))
                else:
                    out.add_arc(t, (ts, lane[(tp, r + q)]), (hs, lane[(hp, r)]))

        # rewire b chords
        for kb, axes in b_chords.items():
            if not axes:
                (p1, p2) = kb
                out.add_arc(t, (p1[0], new_b[p1[1]]), (p2[0], new_b[p2[1]]))
                continue
            # order stations along the b chord from kb[0]
            b0, b1 = kb

            def alongb(ka, _b0=b0, _b1=b1):
                tail, head = a_chords[ka]
                p = tail if on_right(tail, _b0, _b1) else head
                return (rank[p] - rank[_b0]) % B

            ordered = sorted(axes, key=alongb)

            def connection_port(ka, toward_port):
                """Lane port of the station (ka, kb) facing toward_port."""
                tail, head = a_chords[ka]
                j, q = station_info[(ka, kb)]
                right = on_right(toward_port, tail, head)
                (ts, tp) = tail
                (hs, hp) = head
                if not mirror:
                    if right:
                        return (hs, lane[(hp, q - j)])
                    return (ts, lane[(tp, N - j)])
                if right:
                    return (ts, lane[(tp, j - 1)])
                return (hs, lane[(hp, N - 1 - q + j)])

            elems = [(b0[0], new_b[b0[1]])]
            for idx, ka in enumerate(ordered):
                prev_ref = b0 if idx == 0 else None
                # connect previous element to this station
                toward_prev = b0  # any port on the previous side of this axis
                elems.append(connection_port(ka, toward_prev))
                elems.append(connection_port(ka, b1))
            elems.append((b1[0], new_b[b1[1]]))
            for i in range(0, len(elems), 2):
                out.add_arc(t, elems[i], elems[i + 1])

    out.check_noncrossing()
    out.normalize()
    coords = out.coords()
    result = validate_multicurve(surface, coords)
    if result.component_count != b.component_count:
        raise MatchingViolation("twist changed component count")
    return result


# ---------------------------------------------------------------------------
# complement curves from region boundary circuits
# ---------------------------------------------------------------------------

def complement_circuit_curves(surface, multicurves, include_parallel=False):
    """Essential curves obtained by pushing the boundary circuits of the
    complementary regions of the union off into their regions.

    These are the boundary components of a regular neighborhood of the
    union.  Parallel copies of input components are dropped by default.
    Returns a list of (MultiCurve, region id); deterministic order.
    """
    coordfams = [m.coords for m in multicurves]
    cells = minimal_drawing(surface, coordfams)
    inputs = {m.coords for m in multicurves}
    comp_inputs = set()
    for m in multicurves:
        ss = Strandset.from_coords(surface, m.coords)
        for comp in ss.trace():
            vec = [0] * surface.edge_count
            for (pid, _f, _t, _s) in comp:
                vec[ss.points[pid][0]] += 1
            comp_inputs.add(tuple(vec))
    out = []
    seen = set()
    for ci in range(len(cells.circuits)):
        items = cells.circuit_walk(ci)
        if items is None:
            continue
        try:
            ss = Strandset.from_walks(surface, [items])
            ss.normalize()
            coords = ss.coords()
            mc = validate_multicurve(surface, coords)
        except (MatchingViolation, InessentialComponent, IsotopicComponents):
            continue
        if mc.component_count != 1:
            continue
        if not include_parallel and mc.coords in comp_inputs:
            continue
        if mc.coords in seen:
            continue
        seen.add(mc.coords)
        out.append((mc, cells.circuits[ci]["region"]))
    return out


# ---------------------------------------------------------------------------
# push-offs of triangulation edges (fixture construction)
# ---------------------------------------------------------------------------

def pushoff_curve(surface, edge, side=0):
    """The curve parallel to an edge-loop of the triangulation.

    The triangulation vertex is a single point; an edge is an embedded loop
    through it.  The push-off on one side crosses exactly the edge-ends
    emanating on that side.  `side` selects which of the two link arcs.
    """
    # cyclic sequence of (corner, crossed edge-end) around the vertex
    e_occ = surface.edge_sides(edge)
    # find the vertex: both ends of the loop must be at the same vertex
    t0, s0, _ = e_occ[0]
    v = surface.corner_vertex(t0, (s0 - 1) % 3)
    rot = surface.vertex_rotation(v)
    slots = []  # (corner, edge, end_is_head, triangle_of_corner)
    for (t, i) in rot:
        s_out = (i + 1) % 3
        e_out, o_out = surface.triangles[t][s_out]
        # side s_out starts at corner (t, i): tail if o=+1 else head
        end_is_head = (o_out == -1)
        slots.append(((t, i), e_out, end_is_head))
    # locate the two slots of `edge`
    locs = [i for i, (_c, e2, _h) in enumerate(slots) if e2 == edge]
    if len(locs) != 2:
        raise MatchingViolation("edge %d is not a loop at one vertex" % edge)
    i1, i2 = locs if side == 0 else (locs[1], locs[0])
    # arc strictly between i1 and i2 (cyclically)
    arc = []
    i = (i1 + 1) % len(slots)
    while i != i2:
        arc.append(slots[i])
        i = (i + 1) % len(slots)
    if not arc:
        raise InessentialComponent("push-off arc is empty")
    # walk items: consecutive arc slots connect in the corner between them;
    # slot j and j+1 flank corner of slots[j+1][0]... consecutive crossed
    # ends share the corner that separates them in the rotation, which is
    # the corner of the *next* slot.
    eta = Fraction(1, 1024)
    walk = []
    for j, ((t, i_c), e2, is_head) in enumerate(arc):
        pos = (Fraction(1) - eta if is_head else eta, 0, j)
        if j + 1 < len(arc):
            t_next = arc[j + 1][0][0]
        else:
            # closing chord: the triangle flanking `edge` on the chosen side,
            # i.e. the triangle of the corner following the last slot
            t_next = slots[i2][0][0]
        walk.append((e2, pos, t_next))
    ss = Strandset.from_walks(surface, [walk])
    ss.normalize()
    coords = ss.coords()
    return validate_multicurve(surface, coords)
