"""Exact curve-graph distances on the once-punctured torus (and the
four-holed sphere, whose curve graph is the same Farey graph).

Slopes are coprime pairs (p, q) with q > 0, or (1, 0) for infinity.  Two
slopes span an edge of the Farey graph iff |p1 q2 - p2 q1| = 1; on the
once-punctured torus that determinant is the geometric intersection number,
on the four-holed sphere it is half of it.

Distances are computed exactly by the gate method: the ideal geodesic from
x to y crosses a finite strip of Farey triangles; every edge path from x to
y must pass through an endpoint of each gate (Farey edges never cross), so
a shortest path is found by searching the finite graph on the gate
vertices.  The gate sequence is the continued-fraction mediant walk.
"""

from __future__ import annotations

from math import gcd

from .errors import MatchingViolation, InputError

INF = (1, 0)


def normalize_slope(p, q):
    if p == 0 and q == 0:
        raise InputError("slope 0/0")
    g = gcd(p, q)
    p, q = p // g, q // g
    if q < 0 or (q == 0 and p < 0):
        p, q = -p, -q
    return (p, q)


def det(a, b):
    return a[0] * b[1] - a[1] * b[0]


def slope_intersection(a, b, surface="torus"):
    """Geometric intersection of the corresponding curves."""
    d = abs(det(normalize_slope(*a), normalize_slope(*b)))
    return d if surface == "torus" else 2 * d


def mediant(a, b):
    return normalize_slope(a[0] + b[0], a[1] + b[1])


def _unimodular_to_inf(x):
    """Matrix rows (a,b),(c,d) in GL2(Z) sending x to (1,0)."""
    p, q = x
    # find r, s with p*s - q*r = 1
    if q == 0:
        return ((1, 0), (0, 1)) if p == 1 else ((-1, 0), (0, -1))
    # extended euclid
    a, b = p, q
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        qq, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - qq * x1
        y0, y1 = y1, y0 - qq * y1
    # gcd = 1 = p*x0 + q*y0, so the first row (x0, y0) sends x to 1 and the
    # second row (-q, p) kills it; det = 1
    return ((x0, y0), (-q, p))


def _apply(m, v):
    (a, b), (c, d) = m
    return (a * v[0] + b * v[1], c * v[0] + d * v[1])


def gate_vertices(x, y):
    """x, y normalized slopes; returns (vertex list, gate list) of the
    triangle strip between them, in original coordinates."""
    m = _unimodular_to_inf(x)
    y2 = normalize_slope(*_apply(m, y))
    # invert m to map back
    (a, b), (c, d) = m
    dm = a * d - b * c
    inv = ((d // dm, -b // dm), (-c // dm, a // dm))
    if y2 == INF:
        return [x], []
    p, q = y2
    if q == 0:
        raise MatchingViolation("unnormalized image slope")
    gates = []
    lo = (p // q, 1)
    hi = (p // q + 1, 1)
    verts = {INF, lo, hi, y2}
    guard = 0
    while True:
        guard += 1
        if guard > 100000:
            raise MatchingViolation("gate walk did not terminate")
        gates.append((lo, hi))
        med = mediant(lo, hi)
        verts.add(med)
        if med == y2:
            break
        # which side contains y2 = p/q: compare p/q with med
        if p * med[1] < med[0] * q:
            hi = med
        else:
            lo = med
    back = [normalize_slope(*_apply(inv, v)) for v in sorted(verts)]
    gates_back = [tuple(normalize_slope(*_apply(inv, v)) for v in g)
                  for g in gates]
    return back, gates_back


def farey_distance(x, y):
    """Exact distance in the Farey graph between two slopes."""
    x = normalize_slope(*x)
    y = normalize_slope(*y)
    if x == y:
        return 0
    if abs(det(x, y)) == 1:
        return 1
    verts, _gates = gate_vertices(x, y)
    verts = list(dict.fromkeys([x] + verts + [y]))
    n = len(verts)
    idx = {v: i for i, v in enumerate(verts)}
    adj = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if abs(det(verts[i], verts[j])) == 1:
                adj[i].append(j)
                adj[j].append(i)
    from collections import deque
    dist = {idx[x]: 0}
    dq = deque([idx[x]])
    while dq:
        u = dq.popleft()
        if u == idx[y]:
            return dist[u]
        for w in adj[u]:
            if w not in dist:
                dist[w] = dist[u] + 1
                dq.append(w)
    raise MatchingViolation("gate graph disconnected")


# ---------------------------------------------------------------------------
# slope coordinates on a triangulated once-punctured torus
# ---------------------------------------------------------------------------

class SlopeMap:
    """Bijection between slopes and normal curves on a torus fixture.

    The fixture provides basis curves mu, lam with i(mu, lam) = 1; the
    slope of a curve is its homology class in that basis, up to sign.
    """

    def __init__(self, fixture):
        self.fixture = fixture
        self.surface = fixture.surface
        self.mu = fixture.curve("mu")
        self.lam = fixture.curve("lam")
        self.H = fixture.homology

    def slope_of(self, curve):
        from .errors import MultiComponentInput
        if curve.component_count != 1:
            raise MultiComponentInput("slopes are single curves")
        cls = self.H.class_of(curve, (1,))
        return normalize_slope(cls[0], cls[1])

    def curve_of(self, slope):
        """The normal curve of a slope, built by twisting the basis."""
        from .curves import twist_image
        p, q = normalize_slope(*slope)
        # continued-fraction descent: apply inverse twists until basis
        cur = (p, q)
        ops = []
        guard = 0
        while cur not in ((1, 0), (0, 1)):
            guard += 1
            if guard > 10000:
                raise MatchingViolation("slope descent did not terminate")
            # act by whichever basis twist reduces |p| + |q|
            best = None
            for name, axis in (("mu", self.mu), ("lam", self.lam)):
                for sgn in (1, -1):
                    nxt = self._slope_twist(cur, name, sgn)
                    tot = abs(nxt[0]) + abs(nxt[1])
                    if best is None or tot < best[0]:
                        best = (tot, name, sgn, nxt)
            if best[0] >= abs(cur[0]) + abs(cur[1]):
                raise MatchingViolation("slope descent stuck at %r" % (cur,))
            _tot, name, sgn, nxt = best
            ops.append((name, -sgn))
            cur = nxt
        base = self.mu if cur == (1, 0) else self.lam
        out = base
        for (name, sgn) in reversed(ops):
            axis = self.mu if name == "mu" else self.lam
            out = twist_image(out, axis, sgn)
        return out

    _twist_action = None

    def _slope_twist(self, slope, name, sgn):
        """Action of the named basis twist on slopes, calibrated once.

        tw_mu fixes mu and maps lam to lam + k*mu; the signed k is read off
        the homology class by normalizing its lam-coefficient to +1 (the
        raw class carries an arbitrary trace orientation)."""
        if SlopeMap._twist_action is None:
            from .curves import twist_image
            action = {}
            for sg in (1, -1):
                m = self.H.class_of(twist_image(self.lam, self.mu, sg), (1,))
                if m[1] < 0:
                    m = (-m[0], -m[1])
                assert m[1] == 1
                action[("mu", sg)] = m[0]
                m = self.H.class_of(twist_image(self.mu, self.lam, sg), (1,))
                if m[0] < 0:
                    m = (-m[0], -m[1])
                assert m[0] == 1
                action[("lam", sg)] = m[1]
            SlopeMap._twist_action = action
        p, q = slope
        if name == "mu":
            k = SlopeMap._twist_action[("mu", sgn)]
            return normalize_slope(p + q * k, q)
        k = SlopeMap._twist_action[("lam", sgn)]
        return normalize_slope(p, q + p * k)
