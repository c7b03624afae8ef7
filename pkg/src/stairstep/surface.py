"""Triangulated surfaces and normal multicurves.

A Surface is a triangulated compact orientable surface.  Triangles are
oriented triples of sides; side s of triangle t carries an edge index and a
direction flag.  Interior edges appear in exactly two sides with opposite
flags (this is equivalent to orientability once all triangles are taken
counterclockwise).  Boundary edges appear once.

Vertices are derived from the gluing.  Closed fixtures use one-vertex
triangulations; the vertex is treated as a marked point, which is what makes
normal coordinates canonical: equality of multicurves is equality of
coordinate vectors.  Surfaces with boundary_count > 0 use ideal-style
triangulations whose ideal vertices stand for the punctures.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import (
    MatchingViolation,
    InessentialComponent,
    IsotopicComponents,
    SurfaceMismatch,
    UnorientedInput,
    MultiComponentInput,
)

VKIND_MARKED = "marked"     # an honest point of the surface, pinned for canonicity
VKIND_IDEAL = "ideal"       # a puncture / collapsed boundary circle
VKIND_BOUNDARY = "boundary" # lies on the boundary of a cut piece


@dataclass(frozen=True)
class Surface:
    """A triangulated compact orientable surface, possibly with boundary."""

    genus: int
    boundary_count: int
    triangles: tuple  # tuple of ((e, o), (e, o), (e, o)), o in {+1, -1}
    edge_count: int
    name: str = ""
    # vertex kinds, filled in by _finish(); index = vertex id
    vertex_kinds: tuple = ()
    # edges that lie on the boundary of the surface (cut pieces only)
    boundary_edges: frozenset = frozenset()
    # boundary circles as tuples of boundary edge ids, parallel metadata
    boundary_circles: tuple = ()

    # ---- derived combinatorics -----------------------------------------

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    def _derived(self):
        cache = self._cache
        if "edge_sides" in cache:
            return cache
        edge_sides = {e: [] for e in range(self.edge_count)}
        for t, tri in enumerate(self.triangles):
            if len(tri) != 3:
                raise MatchingViolation("triangle %d is not a triple" % t)
            for s, (e, o) in enumerate(tri):
                if not (0 <= e < self.edge_count) or o not in (1, -1):
                    raise MatchingViolation("bad side (%d, %d)" % (t, s))
                edge_sides[e].append((t, s, o))
        for e, occ in edge_sides.items():
            if e in self.boundary_edges:
                if len(occ) != 1:
                    raise MatchingViolation("boundary edge %d glued %d times" % (e, len(occ)))
            else:
                if len(occ) != 2 or occ[0][2] + occ[1][2] != 0:
                    raise MatchingViolation(
                        "edge %d must appear twice with opposite directions" % e)
        cache["edge_sides"] = {e: tuple(v) for e, v in edge_sides.items()}
        cache.update(self._build_vertices(cache["edge_sides"]))
        return cache

    def _partner(self, t, s):
        """The other (t', s') occurrence of the edge on side s of t, or None."""
        e, _o = self.triangles[t][s]
        occ = self._derived()["edge_sides"][e]
        for (t2, s2, _o2) in occ:
            if (t2, s2) != (t, s):
                return (t2, s2)
        return None

    def _build_vertices(self, edge_sides):
        # Corner (t, i) sits between side i (ending there) and side i+1
        # (starting there) in the counterclockwise boundary order.
        # Rotating across the outgoing side i+1 lands at corner (t', s')
        # where (t', s') is the partner occurrence of that edge.
        corners = [(t, i) for t in range(len(self.triangles)) for i in range(3)]
        parent = {c: c for c in corners}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        rot_next = {}
        for (t, i) in corners:
            s_out = (i + 1) % 3
            e, _o = self.triangles[t][s_out]
            if e in self.boundary_edges:
                rot_next[(t, i)] = None
                continue
            t2, s2 = self._partner(t, s_out)
            rot_next[(t, i)] = (t2, s2)
            union((t, i), (t2, s2))
        # also close up across the incoming side (needed when rotations are
        # interrupted by boundary edges)
        for (t, i) in corners:
            s_in = i
            e, _o = self.triangles[t][s_in]
            if e in self.boundary_edges:
                continue
            t2, s2 = self._partner(t, s_in)
            union((t, i), (t2, (s2 - 1) % 3))

        reps = {}
        corner_vertex = {}
        for c in corners:
            r = find(c)
            if r not in reps:
                reps[r] = len(reps)
            corner_vertex[c] = reps[r]
        nvertices = len(reps)

        # rotation cycles (corner order around each vertex); only complete
        # cycles for interior vertices (no incident boundary edges)
        rotations = {}
        seen = set()
        for c in corners:
            if c in seen or rot_next[c] is None:
                continue
            cyc = []
            x = c
            while x is not None and x not in seen:
                seen.add(x)
                cyc.append(x)
                x = rot_next[x]
            if x == c:
                rotations[corner_vertex[c]] = tuple(cyc)
        return {
            "corner_vertex": corner_vertex,
            "nvertices": nvertices,
            "rotations": rotations,
        }

    # ---- public accessors ------------------------------------------------

    @property
    def ntriangles(self):
        return len(self.triangles)

    def edge_sides(self, e):
        return self._derived()["edge_sides"][e]

    def corner_vertex(self, t, i):
        return self._derived()["corner_vertex"][(t, i)]

    @property
    def nvertices(self):
        return self._derived()["nvertices"]

    def vertex_kind(self, v):
        if self.vertex_kinds:
            return self.vertex_kinds[v]
        return VKIND_IDEAL if self.boundary_count > 0 else VKIND_MARKED

    def vertex_rotation(self, v):
        """Cyclic corner order around an interior vertex."""
        return self._derived()["rotations"][v]

    def euler_characteristic(self):
        """chi of the underlying surface: ideal vertices are punctures."""
        n_ideal = sum(1 for v in range(self.nvertices)
                      if self.vertex_kind(v) == VKIND_IDEAL)
        return self.nvertices - self.edge_count + self.ntriangles - n_ideal

    def check(self):
        """Validate the structural invariants; raises MatchingViolation."""
        self._derived()
        expected = 2 - 2 * self.genus - self.boundary_count
        got = self.euler_characteristic()
        if got != expected:
            raise MatchingViolation(
                "Euler characteristic %d does not match genus %d with %d "
                "boundary components (expected %d)"
                % (got, self.genus, self.boundary_count, expected))
        return self

    # ---- serialization ---------------------------------------------------

    def to_json(self):
        return {
            "name": self.name,
            "genus": self.genus,
            "boundary": self.boundary_count,
            "edge_count": self.edge_count,
            "triangles": [[[e, o] for (e, o) in tri] for tri in self.triangles],
            "boundary_edges": sorted(self.boundary_edges),
            "vertex_kinds": list(self.vertex_kinds),
        }

    @staticmethod
    def from_json(data):
        s = Surface(
            genus=data["genus"],
            boundary_count=data["boundary"],
            triangles=tuple(tuple((e, o) for (e, o) in tri) for tri in data["triangles"]),
            edge_count=data["edge_count"],
            name=data.get("name", ""),
            vertex_kinds=tuple(data.get("vertex_kinds", ())),
            boundary_edges=frozenset(data.get("boundary_edges", ())),
        )
        return s.check()

    def __hash__(self):
        return hash((self.genus, self.boundary_count, self.triangles,
                     self.edge_count, self.boundary_edges))

    def __eq__(self, other):
        return (isinstance(other, Surface)
                and self.triangles == other.triangles
                and self.edge_count == other.edge_count
                and self.boundary_edges == other.boundary_edges)


def surface_from_polygon(word, name="", boundary_count=0):
    """Build a one-vertex surface from a polygon identification word.

    `word` is a sequence of signed letters, e.g. ["a","b","A","B"] for the
    torus (capital = inverse).  The polygon is fan-triangulated from vertex 0.
    Letters become edges 0..k-1 in order of first appearance; fan diagonals
    follow.  With boundary_count=1 the single vertex is ideal (a puncture).
    """
    n = len(word)
    letters = []
    for w in word:
        low = w.lower()
        if low not in letters:
            letters.append(low)
    if 2 * len(letters) != n:
        raise MatchingViolation("each letter must appear exactly twice")
    diagonals = [(0, k) for k in range(2, n - 1)]
    return _polygon_surface(word, diagonals, name, boundary_count)


def surface_from_polygon_with_diagonals(word, diagonals, name="", boundary_count=0):
    """Same as surface_from_polygon but with an explicit diagonal set."""
    return _polygon_surface(word, list(diagonals), name, boundary_count)


def _polygon_surface(word, diagonals, name, boundary_count):
    n = len(word)
    letters = []
    for w in word:
        low = w.lower()
        if low not in letters:
            letters.append(low)
    letter_edge = {l: i for i, l in enumerate(letters)}
    nletters = len(letters)
    diag_edge = {}
    for k, d in enumerate(sorted(diagonals)):
        diag_edge[d] = nletters + k
    edge_count = nletters + len(diag_edge)

    # orient each polygon side: side i runs from polygon vertex i to i+1;
    # the letter's intrinsic direction is its first (lowercase) occurrence.
    side_edge = []
    seen_letter = set()
    for i, w in enumerate(word):
        low = w.lower()
        e = letter_edge[low]
        direct = w == low  # lowercase occurrence runs with the side
        if low in seen_letter:
            side_edge.append((e, 1 if direct else -1))
        else:
            seen_letter.add(low)
            # first occurrence defines the intrinsic direction
            side_edge.append((e, 1 if direct else -1))
    # consistency: for orientable identifications each letter must appear
    # once with +1 and once with -1 around the polygon
    for l, e in letter_edge.items():
        flags = [o for i, (ee, o) in enumerate(side_edge) if ee == e]
        if sorted(flags) != [-1, 1]:
            raise MatchingViolation(
                "letter %r does not appear with both orientations; "
                "identification is not orientable" % l)

    # triangulate the polygon with the given diagonals.  Build the planар
    # pieces: walk the polygon with a stack-free ear approach over the chord
    # set.  We require the diagonal set to triangulate the polygon.
    chords = sorted(diag_edge)

    def diag_dir(a, b):
        # diagonal edge oriented from min to max polygon vertex
        return (min(a, b), max(a, b))

    # Decompose polygon into triangles: vertices 0..n-1, boundary edges
    # (i, i+1), chords.  Standard incremental: collect all edges, then find
    # triangles as 3-cycles that bound faces.  For fans and the symmetric
    # sets used here a simple sweep suffices: recursively split.
    all_edges = set()
    for i in range(n):
        all_edges.add((i, (i + 1) % n))
    for d in chords:
        all_edges.add(d)

    def split(poly):
        """poly: list of polygon vertex ids in ccw order; return triangles."""
        if len(poly) == 3:
            return [tuple(poly)]
        m = len(poly)
        for i in range(m):
            for j in range(i + 2, m):
                if i == 0 and j == m - 1:
                    continue  # a polygon side, not a chord
                d = diag_dir(poly[i], poly[j])
                if d in diag_edge:
                    left = poly[i: j + 1]
                    right = poly[j:] + poly[: i + 1]
                    return split(left) + split(right)
        raise MatchingViolation("diagonal set does not triangulate the polygon")

    tri_vertex_lists = split(list(range(n)))
    if len(tri_vertex_lists) != n - 2:
        raise MatchingViolation("triangulation size mismatch")

    triangles = []
    for tv in tri_vertex_lists:
        sides = []
        for k in range(3):
            a, b = tv[k], tv[(k + 1) % 3]
            if (b - a) % n == 1:
                e, o = side_edge[a]
                sides.append((e, o))
            else:
                d = diag_dir(a, b)
                e = diag_edge[d]
                sides.append((e, 1 if (a, b) == d else -1))
        triangles.append(tuple(sides))

    chi = 2 - 2 * 0  # computed below from the complex
    surf = Surface(
        genus=0,  # provisional; fixed after we know chi
        boundary_count=boundary_count,
        triangles=tuple(triangles),
        edge_count=edge_count,
        name=name,
    )
    nv = surf.nvertices
    chi_complex = nv - edge_count + len(triangles)
    chi_surface = chi_complex - (nv if boundary_count > 0 else 0) * 0
    if boundary_count > 0:
        # all vertices ideal
        chi_surface = chi_complex - nv
        kinds = tuple(VKIND_IDEAL for _ in range(nv))
        if nv != boundary_count:
            raise MatchingViolation(
                "polygon gluing has %d vertices; expected %d punctures"
                % (nv, boundary_count))
    else:
        kinds = tuple(VKIND_MARKED for _ in range(nv))
    genus = (2 - boundary_count - chi_surface)
    if genus % 2 != 0:
        raise MatchingViolation("odd Euler characteristic defect")
    genus //= 2
    surf = Surface(
        genus=genus,
        boundary_count=boundary_count,
        triangles=tuple(triangles),
        edge_count=edge_count,
        name=name,
        vertex_kinds=kinds,
    )
    surf.check()
    # letters for callers who want to find the edge of a given letter
    surf._cache["letter_edge"] = dict(letter_edge)
    surf._cache["diag_edge"] = {d: e for d, e in diag_edge.items()}
    return surf


# ---------------------------------------------------------------------------
# Normal coordinates
# ---------------------------------------------------------------------------

def corner_counts(surface, coords, t):
    """Corner arc counts (c0, c1, c2) of triangle t; corner i lies between
    sides i and i+1.  Raises MatchingViolation on parity/triangle failures."""
    w = [coords[e] for (e, _o) in surface.triangles[t]]
    if (w[0] + w[1] + w[2]) % 2 != 0:
        raise MatchingViolation("parity fails in triangle %d" % t)
    cs = []
    for i in range(3):
        c = (w[i] + w[(i + 1) % 3] - w[(i + 2) % 3]) // 2
        if c < 0:
            raise MatchingViolation("triangle inequality fails in triangle %d" % t)
        cs.append(c)
    # corner i gets the arcs joining side i to side i+1, cutting corner i:
    # its count is (w_i + w_{i+1} - w_{i+2}) / 2 which is cs[i] above.
    return tuple(cs)


def check_matching(surface, coords):
    if len(coords) != surface.edge_count:
        raise MatchingViolation("coordinate vector has wrong length")
    for x in coords:
        if x < 0 or x != int(x):
            raise MatchingViolation("coordinates must be nonnegative integers")
    for e in surface.boundary_edges:
        if coords[e] != 0:
            raise MatchingViolation("curve crosses a boundary edge")
    for t in range(surface.ntriangles):
        corner_counts(surface, coords, t)
    return True


@dataclass(frozen=True)
class MultiCurve:
    """An isotopy class of essential multicurves in normal coordinates.

    Equality is equality of coordinate vectors on the same surface.  The
    optional `orientations` entry assigns +1/-1 to each component, in the
    component order produced by tracing.
    """

    surface: Surface
    coords: tuple
    component_count: int
    orientations: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "_cache", {})

    @property
    def weight(self):
        return sum(self.coords)

    def oriented(self, orientations):
        if len(orientations) != self.component_count:
            raise UnorientedInput("need one sign per component")
        if any(o not in (1, -1) for o in orientations):
            raise UnorientedInput("orientations must be +1 or -1")
        return MultiCurve(self.surface, self.coords, self.component_count,
                          tuple(orientations))

    def __eq__(self, other):
        return (isinstance(other, MultiCurve)
                and self.surface == other.surface
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.coords, self.surface.edge_count))

    def __repr__(self):
        return "MultiCurve(%s, n=%d)" % (list(self.coords), self.component_count)

    def to_json(self):
        return list(self.coords)


def same_surface(a, b):
    if a.surface != b.surface:
        raise SurfaceMismatch("operands live on different surfaces")
