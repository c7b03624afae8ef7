"""Placed curve systems transverse to a triangulation.

A Strandset is an embedded 1-manifold drawn transversally to the edges of a
Surface: points on edges (with exact rational positions) and, inside each
triangle, a non-crossing matching of the boundary points.  This is the
working representation behind normalization, overlays, twisting and cutting.

Positions are (Fraction, int, int) triples compared lexicographically; the
integer slots are deterministic tie-breaks (family rank, parallel-copy
offset), so distinct families with coinciding fractions stay strictly
ordered.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering

from .errors import MatchingViolation


@total_ordering
class Pos:
    """A position along an edge: a tuple compared like a decimal expansion.

    Unlike raw tuples, a shorter position that is a prefix of a longer one
    compares as if padded with zeros, so appending a negative coordinate
    moves a point down and a positive one up.  The raw tuple is preserved
    (appending happens at the stored depth); equality is pad-insensitive.
    """

    __slots__ = ("t",)

    def __init__(self, t):
        if isinstance(t, Pos):
            t = t.t
        self.t = tuple(t)

    def _stripped(self):
        t = self.t
        while len(t) > 1 and t[-1] == 0:
            t = t[:-1]
        return t

    def __eq__(self, other):
        return isinstance(other, Pos) and self._stripped() == other._stripped()

    def __lt__(self, other):
        a, b = self.t, other.t
        n = max(len(a), len(b))
        for i in range(n):
            x = a[i] if i < len(a) else 0
            y = b[i] if i < len(b) else 0
            if x != y:
                return x < y
        return False

    def __hash__(self):
        return hash(self._stripped())

    def __add__(self, extra):
        return Pos(self.t + tuple(extra))

    def __neg__(self):
        return Pos(tuple(-u for u in self.t))

    def __getitem__(self, i):
        return self.t[i]

    def __repr__(self):
        return "Pos%r" % (self.t,)


class Strandset:
    """One family of disjoint strands on a surface."""

    def __init__(self, surface):
        self.surface = surface
        self.points = {}        # pid -> (edge, position)
        self.edge_points = {e: [] for e in range(surface.edge_count)}  # sorted pids
        self.match = {t: {} for t in range(surface.ntriangles)}  # (s,pid) -> (s,pid)
        self._next = 0
        self.dropped_trivial = 0

    # ---- basic editing ----------------------------------------------------

    def new_point(self, edge, pos):
        if not isinstance(pos, Pos):
            pos = Pos(pos)
        pid = self._next
        self._next += 1
        self.points[pid] = (edge, pos)
        lst = self.edge_points[edge]
        lo, hi = 0, len(lst)
        while lo < hi:
            mid = (lo + hi) // 2
            if self.points[lst[mid]][1] < pos:
                lo = mid + 1
            else:
                hi = mid
        lst.insert(lo, pid)
        return pid

    def del_point(self, pid):
        edge, _pos = self.points.pop(pid)
        self.edge_points[edge].remove(pid)

    def add_arc(self, t, port_a, port_b):
        """port = (side, pid); both must be sides of triangle t."""
        self.match[t][port_a] = port_b
        self.match[t][port_b] = port_a

    def del_arc(self, t, port_a):
        port_b = self.match[t].pop(port_a)
        if port_b != port_a:
            self.match[t].pop(port_b)
        return port_b

    # ---- views ------------------------------------------------------------

    def views(self, pid):
        """Triangle views of a point: [(t, s), ...] (1 for boundary edges)."""
        edge, _pos = self.points[pid]
        return [(t, s) for (t, s, _o) in self.surface.edge_sides(edge)]

    def other_view(self, pid, t, s):
        vs = self.views(pid)
        others = [v for v in vs if v != (t, s)]
        if not others:
            return None
        return others[0]

    def side_points(self, t, s):
        """Points on side s of triangle t, in the triangle's boundary order."""
        e, o = self.surface.triangles[t][s]
        pts = self.edge_points[e]
        return list(pts) if o == 1 else list(reversed(pts))

    # ---- constructors -----------------------------------------------------

    @staticmethod
    def from_coords(surface, coords, tiebreak=0):
        """Canonical placement of a normal multicurve."""
        from .surface import corner_counts, check_matching
        check_matching(surface, coords)
        ss = Strandset(surface)
        eps = {}
        for e in range(surface.edge_count):
            w = coords[e]
            ids = [ss.new_point(e, (Fraction(i + 1, w + 1), tiebreak, 0))
                   for i in range(w)]
            eps[e] = ids
        for t in range(surface.ntriangles):
            cs = corner_counts(surface, coords, t)
            sides = [ss.side_points(t, s) for s in range(3)]
            for i in range(3):
                j = (i + 1) % 3
                for k in range(cs[i]):
                    pa = sides[i][len(sides[i]) - 1 - k]
                    pb = sides[j][k]
                    ss.add_arc(t, (i, pa), (j, pb))
        ss._check_complete()
        return ss

    @staticmethod
    def from_walks(surface, walks):
        """Build from explicit closed walks.

        Each walk is a list of (edge, position, triangle_to_next): the strand
        crosses `edge` at `position` and connects to the next crossing inside
        `triangle_to_next` (which must see both edges).
        """
        ss = Strandset(surface)
        for walk in walks:
            pids = [ss.new_point(e, pos) for (e, pos, _t) in walk]
            n = len(walk)
            for i in range(n):
                t = walk[i][2]
                p = pids[i]
                q = pids[(i + 1) % n]
                sp = _side_in_triangle(surface, ss.points[p][0], t, ss, p)
                sq = _side_in_triangle(surface, ss.points[q][0], t, ss, q, avoid=(sp, p))
                ss.add_arc(t, (sp, p), (sq, q))
        ss._check_complete()
        return ss

    # ---- integrity ----------------------------------------------------------

    def _check_complete(self):
        """Every interior view matched exactly once; matchings non-crossing."""
        for pid in self.points:
            for (t, s) in self.views(pid):
                if (s, pid) not in self.match[t]:
                    raise MatchingViolation("unmatched port %r in triangle %d"
                                            % ((s, pid), t))
        self.check_noncrossing()

    def check_noncrossing(self):
        for t in range(self.surface.ntriangles):
            rank = self._boundary_rank(t)
            pairs = []
            seen = set()
            for port_a, port_b in self.match[t].items():
                key = tuple(sorted((port_a, port_b)))
                if key in seen:
                    continue
                seen.add(key)
                pairs.append((rank[port_a], rank[port_b]))
            for idx, (a1, b1) in enumerate(pairs):
                lo1, hi1 = min(a1, b1), max(a1, b1)
                for (a2, b2) in pairs[idx + 1:]:
                    in1 = (lo1 < a2 < hi1)
                    in2 = (lo1 < b2 < hi1)
                    if in1 != in2:
                        raise MatchingViolation(
                            "crossing arcs within one family in triangle %d" % t)

    def _boundary_rank(self, t):
        """rank[(s, pid)] = position of the port along t's boundary."""
        rank = {}
        r = 0
        for s in range(3):
            for pid in self.side_points(t, s):
                rank[(s, pid)] = r
                r += 1
            r += 1  # corner slot
        return rank

    # ---- tracing ------------------------------------------------------------

    def trace(self):
        """Decompose into components.

        Returns a list of components; each is a list of steps
        (pid, (t_from, s_from), (t_to, s_to), sign) meaning the strand leaves
        triangle t_from by crossing pid into t_to.  sign is +1 when the
        crossing exits the o=+1 occurrence of the edge.  Open arcs start and
        end with from/to view None at the boundary.
        """
        surf = self.surface
        used = set()
        components = []

        def flag_of(pid, view):
            e, _ = self.points[pid]
            for (t, s, o) in surf.edge_sides(e):
                if (t, s) == view:
                    return o
            raise AssertionError

        def walk(pid, from_view, to_view):
            """Cross pid from from_view into to_view and keep going."""
            comp = []
            while True:
                used.add(pid)
                if from_view is not None:
                    sgn = 1 if flag_of(pid, from_view) == 1 else -1
                else:
                    sgn = 1 if flag_of(pid, to_view) == -1 else -1
                comp.append((pid, from_view, to_view, sgn))
                if to_view is None:
                    return comp, None
                t2, s2 = to_view
                s_next, pid_next = self.match[t2][(s2, pid)]
                nxt_from = (t2, s_next)
                nxt_to = self.other_view(pid_next, t2, s_next)
                if pid_next in used:
                    return comp, (pid_next, nxt_from)
                pid, from_view, to_view = pid_next, nxt_from, nxt_to

        # open arcs first: start at boundary endpoints
        for pid0 in sorted(self.points):
            if pid0 in used:
                continue
            vs = self.views(pid0)
            if len(vs) == 1:
                comp, _ = walk(pid0, None, vs[0])
                components.append(comp)
        # closed components
        for pid0 in sorted(self.points):
            if pid0 in used:
                continue
            vs = self.views(pid0)
            comp, _ = walk(pid0, vs[0], vs[1])
            components.append(comp)
        return components

    def component_count(self):
        return len(self.trace())

    def coords(self):
        return tuple(len(self.edge_points[e]) for e in range(self.surface.edge_count))

    def component_coords(self):
        """Per-component coordinate vectors (undirected trace)."""
        res = []
        for comp in self.trace():
            vec = [0] * self.surface.edge_count
            for (pid, _f, _t, _sgn) in comp:
                vec[self.points[pid][0]] += 1
            res.append(tuple(vec))
        return res

    def crossing_vector(self, comp):
        """Signed edge-crossing counts of one traced component."""
        vec = [0] * self.surface.edge_count
        for (pid, _f, _t, sgn) in comp:
            vec[self.points[pid][0]] += sgn
        return tuple(vec)

    # ---- normalization --------------------------------------------------------

    def normalize(self):
        """Remove all returns (arcs with both endpoints on one side): pull taut.

        Removal of an innermost return is an isotopy across the edge; the
        result is the unique normal position of the family.  Returns self.
        """
        progress = True
        while progress:
            progress = False
            for t in range(self.surface.ntriangles):
                returns = []
                for (s, pid), (s2, pid2) in self.match[t].items():
                    if s == s2 and pid != pid2 and (s, pid) < (s2, pid2):
                        returns.append((s, pid, pid2))
                for (s, p, q) in returns:
                    if (s, p) not in self.match[t]:
                        continue
                    if self.match[t].get((s, p)) != (s, q):
                        continue
                    if not self._adjacent_on_edge(p, q):
                        continue
                    self._remove_return(t, s, p, q)
                    progress = True
        self._assert_normalish()
        return self

    def _adjacent_on_edge(self, p, q):
        e, _pos = self.points[p]
        lst = self.edge_points[e]
        ip, iq = lst.index(p), lst.index(q)
        return abs(ip - iq) == 1

    def _remove_return(self, t, s, p, q):
        other_p = self.other_view(p, t, s)
        other_q = self.other_view(q, t, s)
        self.del_arc(t, (s, p))
        if other_p is None or other_q is None:
            raise MatchingViolation("return arc on a boundary edge")
        t2, s2 = other_p  # same edge, so other_q == other_p
        u = self.del_arc(t2, (s2, p))
        if u == (s2, q):
            # the component was a tiny closed circle; it is null-homotopic
            self.dropped_trivial += 1
            self.del_point(p)
            self.del_point(q)
            return
        w = self.del_arc(t2, (s2, q))
        self.del_point(p)
        self.del_point(q)
        self.add_arc(t2, u, w)

    def _assert_normalish(self):
        for t in range(self.surface.ntriangles):
            for (s, pid), (s2, pid2) in self.match[t].items():
                if s == s2:
                    raise MatchingViolation("residual return arc in triangle %d" % t)


def _side_in_triangle(surface, edge, t, ss, pid, avoid=None):
    """The side index of triangle t that carries this point's edge.

    `avoid` skips one (side, pid) slot so that a walk entering and leaving a
    triangle through two occurrences of the same edge picks distinct slots.
    """
    for (tt, s, _o) in surface.edge_sides(edge):
        if tt != t:
            continue
        if avoid is not None and avoid == (s, pid):
            continue
        if (s, pid) in ss.match[t]:
            continue
        return s
    raise MatchingViolation("edge %d has no free side in triangle %d" % (edge, t))
