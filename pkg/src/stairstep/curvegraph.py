"""Curve-graph distance bounds, tight trees, and the certificates that
witness tightness, thickness, balance and large rotations.

Distance policy: Verified is only ever derived from finitely decided facts
(equality, disjointness, positive intersection, filling, or the exact Farey
oracle on once-punctured-torus pieces).  Quantifiers over all subsurfaces
or all markings are reported as BoundedEvidence with budgets recorded;
refutations carry the failing pair.

Piece-level quantities are computed in the ambient surface (see inpiece):
neighbors of a tree vertex are disjoint from its label, so tightness needs
no transported coordinates, only joint minimal positions.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .surface import MultiCurve, same_surface
from .curves import (geometric_intersection, fills, closed_isotopic,
                     validate_multicurve, complement_circuit_curves,
                     minimal_drawing)
from .pieces import SubsurfaceDecomposition
from .inpiece import (PieceContext, contexts, in_piece_intersection,
                      in_piece_equal, in_piece_trivial, in_piece_fills)
from .mcg import annular_distance, relative_twist, MappingClass
from .homology import homologous
from ._strands import Strandset
from .errors import (BudgetExceeded, ProjectionUndefined, NoSeparatingVertex,
                     LabelCollision, MissesSubsurface, StairstepError,
                     MatchingViolation, DisjointFromAxis)

UNBOUNDED = None

VERIFIED = "Verified"
BOUNDED = "BoundedEvidence"
REFUTED = "Refuted"


# ---------------------------------------------------------------------------
# distance bounds in the ambient surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DistanceBound:
    lower: int
    upper: object  # int or None for unbounded
    method_lower: str
    method_upper: str
    witness: tuple = ()

    def exact(self):
        return self.upper is not None and self.lower == self.upper

    def to_json(self):
        return {
            "lower": self.lower,
            "upper": self.upper,
            "method_lower": self.method_lower,
            "method_upper": self.method_upper,
            "witness": [list(w.coords) for w in self.witness],
        }


def _adjacency_threshold(surface):
    if surface.genus == 1 and surface.boundary_count == 1:
        return 1
    if surface.genus == 0 and surface.boundary_count == 4:
        return 2
    return 0


def _is_farey_surface(surface):
    return surface.genus == 1 and surface.boundary_count == 1


def distance_bounds(a, b, budget=0):
    """Distance ladder with explicit witnesses; exact on Farey surfaces."""
    same_surface(a, b)
    surface = a.surface
    if closed_isotopic(a, b):
        return DistanceBound(0, 0, "Disjoint", "Disjoint", (a,))
    if _is_farey_surface(surface) and a.component_count == b.component_count == 1:
        d = _farey_exact(a, b)
        return DistanceBound(d, d, "Farey", "Farey", ())
    thr = _adjacency_threshold(surface)
    i_ab = geometric_intersection(a, b)
    if i_ab <= thr:
        return DistanceBound(1, 1, "Disjoint", "Disjoint", (a, b))
    lower, method_lower = 2, "Intersecting"
    if thr == 0 and fills(a, b):
        lower, method_lower = 3, "Filling"
    upper, method_upper, witness = UNBOUNDED, "BallSearch", ()
    if thr == 0 and lower == 2:
        mid = _common_disjoint_curve(a, b)
        if mid is not None:
            upper, method_upper, witness = 2, "PathWitness", (a, mid, b)
    if upper is None and budget:
        path = _ball_path(a, b, budget)
        if path is not None:
            upper, method_upper, witness = (len(path) - 1, "PathWitness",
                                            tuple(path))
    if upper is not None and upper < lower:
        raise MatchingViolation("distance ladder inconsistent")
    return DistanceBound(lower, upper, method_lower, method_upper, witness)


def _farey_exact(a, b):
    from .farey import farey_distance, normalize_slope
    H = _torus_basis(a.surface)
    ca = H.class_of(a, (1,))
    cb = H.class_of(b, (1,))
    return farey_distance(normalize_slope(*ca), normalize_slope(*cb))


_TORUS_BASES = {}


def _torus_basis(surface):
    from .homology import HomologyBasis
    key = id(surface)
    if key not in _TORUS_BASES:
        from .fixtures.build import enumerate_single_curves
        pool = enumerate_single_curves(surface, 6)
        pair = None
        for i, x in enumerate(pool):
            for y in pool[i + 1:]:
                if geometric_intersection(x, y) == 1:
                    pair = (x, y)
                    break
            if pair:
                break
        if pair is None:
            raise MatchingViolation("no basis pair on the torus")
        _TORUS_BASES[key] = HomologyBasis(surface, list(pair))
    return _TORUS_BASES[key]


def _common_disjoint_curve(a, b):
    for mc, _r in complement_circuit_curves(a.surface, [a, b]):
        if (geometric_intersection(mc, a) == 0
                and geometric_intersection(mc, b) == 0
                and not closed_isotopic(mc, a) and not closed_isotopic(mc, b)):
            return mc
    return None


def _ball_path(a, b, budget):
    from collections import deque
    seen = {a.coords: None}
    nodes = {a.coords: a}
    dq = deque([(a, 0)])
    thr = _adjacency_threshold(b.surface)
    while dq:
        cur, depth = dq.popleft()
        if depth >= budget:
            continue
        for nxt in _complement_neighbors(cur):
            if nxt.coords in seen:
                continue
            seen[nxt.coords] = cur.coords
            nodes[nxt.coords] = nxt
            if (geometric_intersection(nxt, b) <= thr
                    and not closed_isotopic(nxt, b)):
                path = [b, nxt]
                back = seen[nxt.coords]
                while back is not None:
                    path.append(nodes[back])
                    back = seen[back]
                return list(reversed(path))
            dq.append((nxt, depth + 1))
    return None


def _complement_neighbors(x):
    out = []
    for mc, _r in complement_circuit_curves(x.surface, [x]):
        if geometric_intersection(mc, x) == 0 and not closed_isotopic(mc, x):
            out.append(mc)
    return out


# ---------------------------------------------------------------------------
# distances inside a piece (ambient computation)
# ---------------------------------------------------------------------------

def piece_distance_bounds(ctx, x, y):
    """Distance ladder in the curve graph of the piece.

    Exact on once-punctured-torus pieces via the Farey oracle; elsewhere
    equality/disjointness decide 0/1, intersection gives >= 2, filling the
    piece gives >= 3.  Uppers: 2 via a common disjoint essential curve in
    the piece, else the standard 2i+1 surgery bound.
    """
    if in_piece_equal(ctx, x, y):
        return DistanceBound(0, 0, "Disjoint", "Disjoint", (x,))
    unit = ctx.is_farey()
    if unit:
        d = _piece_farey_distance(ctx, x, y, unit)
        return DistanceBound(d, d, "Farey", "Farey", ())
    i_w = in_piece_intersection(ctx, x, y)
    thr = _adjacency_threshold(ctx.piece.surface)
    if i_w <= thr:
        return DistanceBound(1, 1, "Disjoint", "Disjoint", (x, y))
    lower, ml = 2, "Intersecting"
    if thr == 0 and in_piece_fills(ctx, x, y):
        lower, ml = 3, "Filling"
    upper, mu, wit = UNBOUNDED, "BallSearch", ()
    if thr == 0 and lower == 2:
        mid = _piece_common_disjoint(ctx, x, y)
        if mid is not None:
            upper, mu, wit = 2, "PathWitness", (x, mid, y)
    if upper is None:
        upper, mu = 2 * i_w + 1, "Intersecting"
    return DistanceBound(lower, upper, ml, mu, wit)


def _piece_common_disjoint(ctx, x, y):
    """An essential non-peripheral curve of the piece disjoint from both."""
    for mc, _r in complement_circuit_curves(
            ctx.surface, list(ctx.cut) + [x, y]):
        try:
            if in_piece_trivial(ctx, mc):
                continue
        except MissesSubsurface:
            continue
        try:
            if (in_piece_intersection(ctx, mc, x) == 0
                    and in_piece_intersection(ctx, mc, y) == 0):
                return mc
        except MissesSubsurface:
            continue
    return None


def in_piece_member(ctx, x):
    """Is the cut-disjoint curve x inside this piece?  Decided by checking
    that the cut-only regions of the overlay are exactly the other pieces."""
    from .inpiece import _overlay, _assert_off_cut, _region_profile
    cells = _overlay(ctx, [x])
    ncut = len(ctx.cut)
    _assert_off_cut(cells, ncut)
    fam = cells.drawing.fam
    leftover = []
    for r in cells.regions:
        touches_extra = False
        for ci in cells.region_circuits[r]:
            circ = cells.circuits[ci]
            for (_j, pid) in circ["edge_points"]:
                if fam[pid] >= ncut:
                    touches_extra = True
                    break
            if touches_extra:
                break
        if not touches_extra:
            leftover.append(_region_profile(cells, r, ncut))
    return sorted(leftover) == sorted(ctx.sibling_profiles())


_FAREY_REFS = {}


def _piece_farey_refs(ctx, unit):
    """Reference curves (mu, lam, nu) in a Farey piece.

    mu, lam is any pair with in-piece intersection equal to the unit; nu is
    the twist image tw_mu(lam), whose slope in the chart (mu, lam) is
    declared to be (2, 1) (a chart reflection absorbs the twist handedness,
    and Farey distances are chart-independent).  The twist identities force
    i(nu, mu) = unit and i(nu, lam) = unit * i(mu,lam)/...: both asserted.
    """
    key = (tuple(m.coords for m in ctx.cut), ctx.profile())
    if key in _FAREY_REFS:
        return _FAREY_REFS[key]
    from .fixtures.build import enumerate_single_curves
    pool = []

    def admit(mc):
        try:
            if in_piece_trivial(ctx, mc):
                return
            if not in_piece_member(ctx, mc):
                return
        except MissesSubsurface:
            return
        if any(in_piece_equal(ctx, mc, other) for other in pool):
            return
        pool.append(mc)

    small = enumerate_single_curves(ctx.surface, 8)
    for mc in small:
        if len(pool) >= 6:
            break
        if not crosses_cut(ctx, mc):
            admit(mc)
    for mc in small:
        if len(pool) >= 10:
            break
        if not crosses_cut(ctx, mc):
            continue
        try:
            for proj in project_to_piece(ctx, mc):
                admit(proj)
        except MissesSubsurface:
            continue

    pair = None
    for i in range(len(pool)):
        for j in range(i + 1, len(pool)):
            if in_piece_intersection(ctx, pool[i], pool[j]) == unit:
                pair = (pool[i], pool[j])
                break
        if pair:
            break
    if pair is None:
        raise MatchingViolation("no Farey reference pair in the piece")
    from .curves import twist_image
    mu, lam = pair
    nu = twist_image(lam, mu, 1)
    if (in_piece_intersection(ctx, nu, mu) != unit
            or in_piece_intersection(ctx, nu, lam) != 2 * unit):
        raise MatchingViolation("twist reference has unexpected slopes")
    _FAREY_REFS[key] = (mu, lam, nu)
    return _FAREY_REFS[key]


def _piece_slope(ctx, refs, x, unit):
    mu, lam, nu = refs
    q, rq = divmod(in_piece_intersection(ctx, x, mu), unit)
    p, rp = divmod(in_piece_intersection(ctx, x, lam), unit)
    inu, rn = divmod(in_piece_intersection(ctx, x, nu), unit)
    if rq or rp or rn:
        raise MatchingViolation("intersection not a multiple of the unit")
    # slope is (p, q) or (p, -q); nu has chart slope (2, 1)
    from .farey import normalize_slope
    plus = abs(p - 2 * q)
    minus = abs(p + 2 * q)
    if p == 0 or q == 0 or plus == inu:
        if p == 0 or q == 0 or minus != inu:
            return normalize_slope(p, q)
    if minus == inu:
        return normalize_slope(p, -q)
    raise MatchingViolation("slope reconstruction failed (%d,%d,%d)"
                            % (p, q, inu))


def _piece_farey_distance(ctx, x, y, unit):
    from .farey import farey_distance
    refs = _piece_farey_refs(ctx, unit)
    return farey_distance(_piece_slope(ctx, refs, x, unit),
                          _piece_slope(ctx, refs, y, unit))


# ---------------------------------------------------------------------------
# ambient subsurface projection
# ---------------------------------------------------------------------------

def crosses_cut(ctx, x):
    """Does x essentially intersect the cut system?"""
    from .inpiece import _overlay, _assert_off_cut
    cells = _overlay(ctx, [x])
    try:
        _assert_off_cut(cells, len(ctx.cut))
        return False
    except MissesSubsurface:
        return True


def project_to_piece(ctx, x):
    """Ambient representatives of the subsurface projection of x into the
    piece: x itself when it is isotopic into the piece, else the essential
    circuits of a neighborhood of (cut + x) that lie in the piece."""
    if not crosses_cut(ctx, x):
        if in_piece_trivial(ctx, x):
            raise MissesSubsurface("curve is inessential in the piece")
        if in_piece_member(ctx, x):
            return [x]
        raise MissesSubsurface("curve lies in another piece")
    # x crosses the cut: surger the through-arcs
    out = []
    seen = set()
    for mc, _r in complement_circuit_curves(
            ctx.surface, list(ctx.cut) + [x]):
        try:
            if in_piece_trivial(ctx, mc):
                continue
            if not in_piece_member(ctx, mc):
                continue
        except MissesSubsurface:
            continue
        if mc.coords in seen:
            continue
        seen.add(mc.coords)
        out.append(mc)
    if not out:
        raise MissesSubsurface("projection is empty")
    return out


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass
class Certificate:
    claim: str
    status: str
    parameters: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    probe_budget: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "claim": self.claim,
            "status": self.status,
            "parameters": _jsonify(self.parameters),
            "witnesses": _jsonify(self.witnesses),
            "probe_budget": _jsonify(self.probe_budget),
        }


def _jsonify(x):
    if isinstance(x, dict):
        return {str(k): _jsonify(v)
                for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, MultiCurve):
        return list(x.coords)
    if isinstance(x, DistanceBound):
        return x.to_json()
    if isinstance(x, (int, str, bool)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------------------
# tight trees
# ---------------------------------------------------------------------------

class TightTree:
    """A finite simplicial tree with multicurve labels."""

    def __init__(self, surface, edges, labels, params=None):
        self.surface = surface
        self.edges = [tuple(e) for e in edges]
        self.labels = dict(labels)
        self.params = dict(params or {})
        self.vertices = sorted(self.labels, key=str)
        self._check_tree()

    def _check_tree(self):
        adj = {v: set() for v in self.vertices}
        for (u, v) in self.edges:
            if u not in adj or v not in adj:
                raise MatchingViolation("edge endpoint has no label")
            adj[u].add(v)
            adj[v].add(u)
        if len(self.edges) != len(self.vertices) - 1:
            raise MatchingViolation("edge count is not n-1")
        seen = set()
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            stack.extend(adj[v] - seen)
        if len(seen) != len(self.vertices):
            raise MatchingViolation("tree is not connected")
        self.adj = adj

    def neighbors(self, v):
        return sorted(self.adj[v], key=str)

    def max_valence(self):
        return max((len(self.adj[v]) for v in self.vertices), default=0)

    def check_adjacent_labels(self):
        """Adjacent labels must be distinct and disjoint."""
        for (u, v) in self.edges:
            if closed_isotopic(self.labels[u], self.labels[v]):
                raise MatchingViolation("adjacent labels equal")
            if geometric_intersection(self.labels[u], self.labels[v]) > \
                    _adjacency_threshold(self.surface):
                raise MatchingViolation("adjacent labels intersect")
        return True

    def branch(self, v, w, depth=None):
        out = []
        seen = {v}
        frontier = [(w, 0)]
        while frontier:
            u, d = frontier.pop(0)
            if u in seen:
                continue
            seen.add(u)
            out.append(u)
            if depth is not None and d >= depth:
                continue
            frontier.extend((x, d + 1) for x in self.adj[u] if x not in seen)
        return out

    def to_json(self):
        return {
            "vertices": [str(v) for v in self.vertices],
            "edges": sorted([sorted([str(u), str(v)]) for (u, v) in self.edges]),
            "labels": {str(v): list(c.coords) for v, c in self.labels.items()},
            "params": _jsonify(self.params),
        }


def verify_tight_sequence(seq, homologous_flag=False, budget=0):
    """Consecutive disjoint and distinct, non-consecutive apart per the
    ladder, homologous when flagged."""
    if len(seq) < 2:
        raise MatchingViolation("sequence too short")
    surface = seq[0].surface
    thr = _adjacency_threshold(surface)
    checks = []
    status = VERIFIED
    for i in range(len(seq) - 1):
        a, b = seq[i], seq[i + 1]
        if closed_isotopic(a, b):
            return Certificate("TightGeodesic", REFUTED,
                               {"reason": "equal consecutive labels",
                                "pair": [i, i + 1]}, {"labels": [a, b]})
        if geometric_intersection(a, b) > thr:
            return Certificate("TightGeodesic", REFUTED,
                               {"reason": "consecutive labels intersect",
                                "pair": [i, i + 1]}, {"labels": [a, b]})
        checks.append(["adjacent", i, i + 1])
    for i in range(len(seq)):
        for j in range(i + 2, len(seq)):
            d = distance_bounds(seq[i], seq[j], budget=budget)
            want = j - i
            if d.upper is not None and d.upper < 2:
                return Certificate("TightGeodesic", REFUTED,
                                   {"reason": "non-consecutive labels too close",
                                    "pair": [i, j]}, {"bound": d})
            if d.lower < min(want, 3):
                status = BOUNDED
            if want > 3:
                status = BOUNDED
            checks.append(["gap", i, j, d.lower, d.upper])
    hom = []
    if homologous_flag:
        for i in range(len(seq) - 1):
            hm = homologous(seq[i], seq[i + 1])
            if hm is None:
                return Certificate("TightGeodesic", REFUTED,
                                   {"reason": "labels not homologous",
                                    "pair": [i, i + 1]}, {})
            hom.append([list(hm[0]), list(hm[1])])
    return Certificate("TightGeodesic", status,
                       {"length": len(seq), "homologous": bool(homologous_flag)},
                       {"checks": checks, "labels": list(seq),
                        "orientations": hom},
                       {"ladder_budget": budget})


def _vertex_context(tree, v):
    """The distinguished piece for tightness at v: the piece containing all
    neighbor labels."""
    dec = SubsurfaceDecomposition(tree.surface, [tree.labels[v]])
    ctxs = contexts(dec)
    nbrs = tree.neighbors(v)
    good = []
    for ctx in ctxs:
        ok = True
        for u in nbrs:
            lab = tree.labels[u]
            try:
                if in_piece_trivial(ctx, lab):
                    ok = False
                    break
                if not in_piece_member(ctx, lab):
                    ok = False
                    break
            except MissesSubsurface:
                ok = False
                break
        if ok:
            good.append(ctx)
    if not good:
        raise ProjectionUndefined(
            "no single piece of the complement of %r contains all "
            "neighbor labels" % (v,))
    return good[0], [c for c in ctxs if c is not good[0]]


def check_L_tight(tree, L, budget=0):
    """Neighbor labels around every vertex sit >= L apart in the curve
    graph of the distinguished complementary piece."""
    margins = []
    per_vertex = {}
    for v in tree.vertices:
        nbrs = tree.neighbors(v)
        if len(nbrs) < 2:
            continue
        ctx, _others = _vertex_context(tree, v)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                u, w = nbrs[i], nbrs[j]
                d = piece_distance_bounds(ctx, tree.labels[u], tree.labels[w])
                margins.append(d.lower)
                per_vertex[(str(v), str(u), str(w))] = d
                if d.upper is not None and d.upper < L:
                    return Certificate(
                        "LTight", REFUTED,
                        {"L": L, "vertex": str(v),
                         "pair": [str(u), str(w)], "margin": d.upper},
                        {"bound": d, "tree": tree.to_json()},
                        {"ball_budget": budget})
    final = VERIFIED if (not margins or min(margins) >= L) else BOUNDED
    return Certificate("LTight", final,
                       {"L": L,
                        "min_margin": min(margins) if margins else None},
                       {"pairs": per_vertex, "tree": tree.to_json()},
                       {"ball_budget": budget})


def check_R_thick(tree, R, budget=6, curve_pool=None):
    """Annular twisting of neighbor pairs about candidate axes stays
    bounded by R; BoundedEvidence at best (the subsurface quantifier is
    infinite), Refuted on a conservative annular violation."""
    surface = tree.surface
    pool = list(curve_pool or [])
    if not pool:
        from .fixtures.build import enumerate_single_curves
        pool = enumerate_single_curves(surface, budget)
    max_seen = 0
    worst = None
    for v in tree.vertices:
        nbrs = tree.neighbors(v)
        for i in range(len(nbrs)):
            for j in range(i + 1, len(nbrs)):
                lu = tree.labels[nbrs[i]]
                lw = tree.labels[nbrs[j]]
                for axis in pool:
                    if axis.component_count != 1:
                        continue
                    if closed_isotopic(axis, tree.labels[v]):
                        continue
                    try:
                        d = annular_distance(axis, lu, lw)
                    except (DisjointFromAxis, StairstepError):
                        continue
                    if d.value > max_seen:
                        max_seen = d.value
                        worst = {"vertex": str(v), "axis": axis,
                                 "pair": [str(nbrs[i]), str(nbrs[j])],
                                 "value": d.value}
                    if d.lower() > R:
                        return Certificate(
                            "RThick", REFUTED,
                            {"R": R, "value": d.value,
                             "vertex": str(v),
                             "pair": [str(nbrs[i]), str(nbrs[j])]},
                            {"axis": axis},
                            {"curve_pool": len(pool), "pool_budget": budget})
    return Certificate("RThick", BOUNDED,
                       {"R": R, "max_observed": max_seen,
                        "within_bound": max_seen <= R},
                       {"max_witness": worst or {}},
                       {"curve_pool": len(pool), "pool_budget": budget})


def check_balanced(tree, D, k, budget=0, depth=2):
    """Secondary-side control at separating vertices (balanced trees)."""
    sep = []
    for v in tree.vertices:
        dec = SubsurfaceDecomposition(tree.surface, [tree.labels[v]])
        if len(dec.pieces) == 2:
            sep.append(v)
    if not sep:
        raise NoSeparatingVertex("tree has no separating vertex")
    records = {}
    refuted = None
    for v in sep:
        if len(tree.neighbors(v)) < 1:
            continue
        primary, others = _vertex_context(tree, v)
        if not others:
            raise NoSeparatingVertex("separating vertex lost its secondary")
        secondary = others[0]
        nbrs = tree.neighbors(v)
        sec_proj = {}
        prim_proj = {}
        for w in nbrs:
            sample = tree.branch(v, w, depth=depth)
            curves = []
            for u in sample:
                try:
                    curves.extend(project_to_piece(secondary, tree.labels[u]))
                except MissesSubsurface:
                    continue
            sec_proj[w] = curves
            prim_proj[w] = [tree.labels[w]]
            diam = 0
            for i in range(len(curves)):
                for j in range(i + 1, len(curves)):
                    d = piece_distance_bounds(secondary, curves[i], curves[j])
                    val = d.upper if d.upper is not None else d.lower
                    diam = max(diam, val)
            records[(str(v), str(w))] = {"diam": diam,
                                         "sampled": len(curves)}
            if diam > D:
                refuted = {"vertex": str(v), "branch": str(w), "diam": diam}
                break
        if refuted:
            break
        ratios = []
        ws = [w for w in nbrs if sec_proj[w]]
        for i in range(len(ws)):
            for j in range(i + 1, len(ws)):
                w1, w2 = ws[i], ws[j]
                dp = _set_distance(primary, prim_proj[w1], prim_proj[w2])
                ds = _set_distance(secondary, sec_proj[w1], sec_proj[w2])
                if dp and ds:
                    ratios.append((max(dp, ds), min(dp, ds)))
        records[("ratios", str(v))] = ratios
        for (hi, lo) in ratios:
            if lo and hi > 2 * k * lo:
                refuted = {"vertex": str(v), "ratio": [hi, lo]}
                break
        if refuted:
            break
    if refuted:
        return Certificate("Balanced", REFUTED,
                           {"D": D, "k": k, "violation": _jsonify(refuted)},
                           {"records": _jsonify(records)},
                           {"depth": depth, "ball_budget": budget})
    return Certificate("Balanced", BOUNDED, {"D": D, "k": k},
                       {"records": _jsonify(records)},
                       {"depth": depth, "ball_budget": budget})


def _set_distance(ctx, xs, ys):
    best = None
    for x in xs:
        for y in ys:
            d = piece_distance_bounds(ctx, x, y)
            val = d.upper if d.upper is not None else d.lower
            if best is None or val < best:
                best = val
    return best


def check_large_rotation(rotations, geodesics, L, R, budget=0,
                         curve_pool=None):
    """(L,R)-large rotations about the shared center: all distinct
    neighbor translates >= L apart in the complement, annular twisting
    between them bounded by R."""
    if not geodesics:
        raise MatchingViolation("need at least one geodesic")
    v0 = geodesics[0][1]
    translates = []
    for j, (psi, geo) in enumerate(zip(rotations, geodesics)):
        if not closed_isotopic(psi.apply(geo[1]), v0):
            from .errors import AxisNotFixed
            raise AxisNotFixed("rotation %d does not fix the center" % j)
        translates.append(("m%d" % j, psi.apply(geo[0])))
        translates.append(("p%d" % j, psi.apply(geo[2])))
    dec = SubsurfaceDecomposition(v0.surface, [v0])
    ctxs = contexts(dec)
    ctx = None
    for c in ctxs:
        if all(in_piece_member(c, t) and not in_piece_trivial(c, t)
               for (_n, t) in translates):
            ctx = c
            break
    if ctx is None:
        raise ProjectionUndefined("translates not in one complement piece")
    pairs = {}
    margins = []
    for i in range(len(translates)):
        for j in range(i + 1, len(translates)):
            n1, t1 = translates[i]
            n2, t2 = translates[j]
            if in_piece_equal(ctx, t1, t2):
                return Certificate("LargeRotation", REFUTED,
                                   {"L": L, "R": R,
                                    "reason": "coincident neighbors",
                                    "pair": [n1, n2]},
                                   {"labels": [t1, t2]})
            d = piece_distance_bounds(ctx, t1, t2)
            pairs[(n1, n2)] = d
            margins.append(d.lower)
            if d.upper is not None and d.upper < L:
                return Certificate("LargeRotation", REFUTED,
                                   {"L": L, "R": R, "pair": [n1, n2],
                                    "distance_upper": d.upper},
                                   {"bound": d})
    max_seen = 0
    for axis in (curve_pool or []):
        if axis.component_count != 1:
            continue
        for i in range(len(translates)):
            for j in range(i + 1, len(translates)):
                try:
                    d = annular_distance(axis, translates[i][1],
                                         translates[j][1])
                except (DisjointFromAxis, StairstepError):
                    continue
                max_seen = max(max_seen, d.value)
    status = VERIFIED if (margins and min(margins) >= L
                          and max_seen <= R) else BOUNDED
    return Certificate("LargeRotation", status,
                       {"L": L, "R": R, "max_annular": max_seen,
                        "min_margin": min(margins) if margins else None},
                       {"pairs": pairs},
                       {"ball_budget": budget,
                        "pool": len(curve_pool or [])})


# ---------------------------------------------------------------------------
# orbit trees
# ---------------------------------------------------------------------------

def orbit_tree(generators, base_segments, depth, params=None):
    """The ball of the orbit tree of labeled geodesic segments.

    generators: list of MappingClass, each translating its own geodesic
    through a shared base label; base_segments[j] = (v_minus, v0, v_plus)
    with generators[j] mapping v_minus to v_plus.  Vertices: word vertices
    for reduced words up to the depth, plus one station between each word
    and its parent.  Coinciding labels raise LabelCollision.
    """
    if not generators:
        raise MatchingViolation("no generators")
    if len(base_segments) != len(generators):
        raise MatchingViolation("one base segment per generator")
    base = base_segments[0][1]
    surface = base.surface
    for seg in base_segments:
        if not closed_isotopic(seg[1], base):
            raise MatchingViolation("segments do not share the base label")

    tags = {}
    for gi in range(len(generators)):
        tags[chr(ord("a") + gi)] = (gi, 1)
        tags[chr(ord("A") + gi)] = (gi, -1)

    maps = {"": MappingClass.identity(surface)}

    def word_map(word):
        if word not in maps:
            gi, sgn = tags[word[-1]]
            maps[word] = word_map(word[:-1]).then(generators[gi].power(sgn))
        return maps[word]

    words = [""]
    frontier = [""]
    for _level in range(depth):
        nxt = []
        for w in frontier:
            for ch in sorted(tags):
                if w and w[-1] == ch.swapcase():
                    continue
                nxt.append(w + ch)
        words.extend(nxt)
        frontier = nxt

    labels = {}
    order = []

    def add_vertex(key, curve):
        for k2 in order:
            if closed_isotopic(labels[k2], curve):
                raise LabelCollision("labels of %r and %r coincide"
                                     % (k2, key))
        labels[key] = curve
        order.append(key)

    for w in sorted(words, key=lambda s: (len(s), s)):
        add_vertex(("w", w), word_map(w).apply(base))

    edges = []
    for w in sorted(words, key=lambda s: (len(s), s)):
        if not w:
            continue
        parent = w[:-1]
        gi, sgn = tags[w[-1]]
        if sgn == 1:
            station_label = word_map(parent).apply(base_segments[gi][2])
        else:
            station_label = word_map(w).apply(base_segments[gi][2])
        station = ("s", w)
        add_vertex(station, station_label)
        edges.append((("w", parent), station))
        edges.append((station, ("w", w)))
    return TightTree(surface, edges, labels, params)
