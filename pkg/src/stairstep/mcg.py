"""Mapping classes as twist words, annular projections, renormalization.

A MappingClass is an ordered word of generators applied left to right；
generators are Dehn twists about named multicurves and triangulation
symmetries.  Twists use the kernel's fixed per-axis handedness (see
curves.twist_image); inverses are exact.

Annular distances are measured by relative twisting: the subsurface
projection distance about an axis differs from |relative twist| + 2 by at
most the returned additive error of 2, and relative twisting is located
exactly as the minimizer of n -> i(tw_axis^n(x), y).
"""

from __future__ import annotations

from dataclasses import dataclass

from .surface import MultiCurve, same_surface
from .curves import (twist_image, geometric_intersection, validate_multicurve,
                     closed_isotopic)
from ._strands import Strandset
from .errors import (DisjointFromAxis, AxisNotFixed, UnachievableBound,
                     MultiComponentInput, MatchingViolation)


# ---------------------------------------------------------------------------
# generators and words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Twist:
    curve: MultiCurve
    power: int

    def apply(self, x):
        out = x
        for comp in _components(self.curve):
            out = twist_image(out, comp, self.power)
        return out

    def inverse(self):
        return Twist(self.curve, -self.power)

    def key(self):
        return ("tw", self.curve.coords, self.power)


@dataclass(frozen=True)
class Symmetry:
    surface: object
    perm: tuple  # edge -> image edge
    name: str = ""

    def apply(self, x):
        inv = [0] * len(self.perm)
        for e, img in enumerate(self.perm):
            inv[img] = e
        coords = tuple(x.coords[inv[e]] for e in range(len(self.perm)))
        return validate_multicurve(x.surface, coords)

    def inverse(self):
        inv = [0] * len(self.perm)
        for e, img in enumerate(self.perm):
            inv[img] = e
        return Symmetry(self.surface, tuple(inv), self.name + "'")

    def key(self):
        return ("sym", self.perm)

    def order(self):
        p = list(range(len(self.perm)))
        n = 0
        while True:
            p = [self.perm[e] for e in p]
            n += 1
            if p == list(range(len(self.perm))):
                return n

    def flag_signs(self):
        """sign(e) = +1 when the automorphism maps the positive occurrence
        of e to the positive occurrence of perm[e]; used to transport
        oriented crossing vectors."""
        surf = self.surface
        tri_index = {}
        for t, tri in enumerate(surf.triangles):
            key = tuple(e for (e, _o) in tri)
            for r in range(3):
                tri_index[key[r:] + key[:r]] = (t, r)
        signs = [0] * surf.edge_count
        for t, tri in enumerate(surf.triangles):
            key = tuple(self.perm[e] for (e, _o) in tri)
            found = None
            for r in range(3):
                rot = key[r:] + key[:r]
                if rot in tri_index:
                    found = (tri_index[rot], r)
                    break
            if found is None:
                raise MatchingViolation("permutation is not an automorphism")
            (t2, r2), r = found
            for s in range(3):
                e, o = tri[s]
                s2 = (s - r + r2) % 3
                e2, o2 = surf.triangles[t2][s2]
                if e2 != self.perm[e]:
                    raise MatchingViolation("automorphism side mismatch")
                sign = 1 if o2 == o else -1
                if signs[e] and signs[e] != sign:
                    raise MatchingViolation("inconsistent automorphism signs")
                signs[e] = sign
        return signs


def _components(mc):
    if mc.component_count == 1:
        return [mc]
    ss = Strandset.from_coords(mc.surface, mc.coords)
    out = []
    for comp in ss.trace():
        vec = [0] * mc.surface.edge_count
        for (pid, _f, _t, _s) in comp:
            vec[ss.points[pid][0]] += 1
        out.append(validate_multicurve(mc.surface, tuple(vec)))
    return out


class MappingClass:
    """An ordered word of generators, applied left to right."""

    def __init__(self, surface, gens=()):
        self.surface = surface
        self.gens = tuple(gens)
        self._apply_cache = {}

    @staticmethod
    def identity(surface):
        return MappingClass(surface, ())

    @staticmethod
    def from_spec(fixture, spec):
        """Build from a JSON word spec: [["twist", name, power] |
        ["symmetry", name]] entries referencing fixture names."""
        gens = []
        for item in spec:
            if item[0] == "twist":
                gens.append(Twist(fixture.curve(item[1]), int(item[2])))
            elif item[0] == "symmetry":
                gens.append(Symmetry(fixture.surface,
                                     tuple(fixture.symmetries[item[1]]),
                                     item[1]))
            else:
                raise MatchingViolation("unknown generator %r" % (item[0],))
        return MappingClass(fixture.surface, gens)

    def apply(self, x):
        same_surface_mc(self, x)
        key = x.coords
        if key in self._apply_cache:
            return self._apply_cache[key]
        out = x
        for g in self.gens:
            out = g.apply(out)
        self._apply_cache[key] = out
        return out

    def then(self, other):
        """The class acting as self first, then other."""
        return MappingClass(self.surface, self.gens + other.gens)

    def inverse(self):
        return MappingClass(self.surface,
                            tuple(g.inverse() for g in reversed(self.gens)))

    def power(self, n):
        if n == 0:
            return MappingClass.identity(self.surface)
        base = self if n > 0 else self.inverse()
        return MappingClass(self.surface, base.gens * abs(n))

    def key(self):
        return tuple(g.key() for g in self.gens)

    def __len__(self):
        return len(self.gens)

    def to_spec(self, fixture=None):
        """JSON-able word; twist curves inline as coordinates."""
        out = []
        for g in self.gens:
            if isinstance(g, Twist):
                out.append(["twist_coords", list(g.curve.coords), g.power])
            else:
                out.append(["symmetry_perm", list(g.perm)])
        return out

    @staticmethod
    def from_raw_spec(surface, spec):
        gens = []
        for item in spec:
            if item[0] == "twist_coords":
                gens.append(Twist(validate_multicurve(surface, item[1]),
                                  int(item[2])))
            elif item[0] == "symmetry_perm":
                gens.append(Symmetry(surface, tuple(item[1])))
            else:
                raise MatchingViolation("unknown generator %r" % (item[0],))
        return MappingClass(surface, gens)


def same_surface_mc(f, x):
    if f.surface != x.surface:
        from .errors import SurfaceMismatch
        raise SurfaceMismatch("mapping class and curve on different surfaces")


def apply(f, a):
    """Spec-level operation: the exact image class f(a)."""
    return f.apply(a)


# ---------------------------------------------------------------------------
# annular projections by relative twisting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AnnularDistance:
    value: int
    additive_error: int = 2

    def lower(self):
        return max(0, self.value - self.additive_error)

    def upper(self):
        return self.value + self.additive_error


def relative_twist(axis, x, y):
    """The integer minimizing n -> i(tw_axis^n(x), y); ties round toward 0.

    This is the relative twisting of x and y about the axis up to the
    standard additive error of 1 on each side.
    """
    if axis.component_count != 1:
        raise MultiComponentInput("axis must be a single curve")
    ix = geometric_intersection(axis, x)
    iy = geometric_intersection(axis, y)
    if ix == 0:
        raise DisjointFromAxis("x misses the axis")
    if iy == 0:
        raise DisjointFromAxis("y misses the axis")
    slope = ix * iy

    def f(n):
        return geometric_intersection(twist_image(x, axis, n), y)

    reach = 4 + f(0) // max(slope, 1)
    lo, hi = -reach, reach
    vals = {}

    def val(n):
        if n not in vals:
            vals[n] = f(n)
        return vals[n]

    # widen until the minimum is strictly interior
    while True:
        best = min(val(n) for n in range(lo, hi + 1))
        mins = [n for n in range(lo, hi + 1) if val(n) == best]
        if mins[0] > lo and mins[-1] < hi:
            break
        lo -= reach
        hi += reach
        if hi - lo > 10000:
            raise MatchingViolation("relative twisting did not bracket")
    mid2 = mins[0] + mins[-1]
    # round half toward zero
    if mid2 % 2 == 0:
        return mid2 // 2
    return (mid2 + (1 if mid2 < 0 else -1)) // 2


def annular_distance(axis, x, y):
    """Projection distance in the annulus about the axis, within +-2."""
    t = relative_twist(axis, x, y)
    return AnnularDistance(value=abs(t) + 2, additive_error=2)


# ---------------------------------------------------------------------------
# subsurface projection
# ---------------------------------------------------------------------------

def subsurface_projection(piece, a):
    """Project a multicurve to an essential piece of a decomposition.

    If a can be isotoped into the piece, the projection is its transport.
    Otherwise the arcs of a through the piece are surgered along the cut:
    the boundary circuits of a neighborhood of (cut + a) that lie in the
    piece are pushed off, transported, and filtered for essentiality.
    Raises MissesSubsurface when nothing essential remains.
    """
    from .errors import (MissesSubsurface, InessentialComponent,
                         IsotopicComponents, MatchingViolation)
    from ._strands import Strandset

    dec = piece.decomposition
    try:
        return [piece.transport(a)]
    except MissesSubsurface:
        pass

    drawing, combined = dec.reduced_overlay(a)
    if combined.crossing_count() == 0:
        raise MissesSubsurface("curve can be isotoped off the subsurface")

    out = []
    seen_coords = set()
    for ci in range(len(combined.circuits)):
        items = combined.circuit_walk(ci)
        if items is None:
            continue
        e0, pos0, _t0 = items[0]
        if dec.locate_region(e0, pos0) != piece.region:
            continue
        try:
            walked = Strandset.from_walks(dec.surface, [items])
            walked.normalize()
            cand = validate_multicurve(dec.surface, walked.coords())
            proj = piece.transport(cand)
        except (MissesSubsurface, InessentialComponent, IsotopicComponents,
                MatchingViolation):
            continue
        if proj.coords in seen_coords:
            continue
        seen_coords.add(proj.coords)
        out.append(proj)
    if not out:
        raise MissesSubsurface("projection is empty")
    return out


# ---------------------------------------------------------------------------
# renormalized powers
# ---------------------------------------------------------------------------

R0 = 2  # residual twisting after renormalization, plus projection slack


def renormalize_power(psi, alpha, n, R, probes=None):
    """k_n and the word tw_alpha^{k_n} . psi^n with twisting about alpha
    bounded by R on the probe set.

    alpha must be a single curve fixed by psi (as a class).  Probes default
    to the twist curves of psi's own word that cross alpha; pass fixture
    curves for the documented probe sets.
    """
    if alpha.component_count != 1:
        raise MultiComponentInput("renormalize_power needs a single axis")
    if not closed_isotopic(psi.apply(alpha), alpha):
        raise AxisNotFixed("psi does not fix the axis class")
    if R < R0:
        raise UnachievableBound("R below the minimal achievable bound %d" % R0)
    probes = _probe_set(psi, alpha, probes)
    psi_n = psi.power(n)
    twists = []
    for x in probes:
        twists.append(relative_twist(alpha, x, psi_n.apply(x)))
    k_n = -_round_half_toward_zero_mid(min(twists), max(twists))
    word = psi_n.then(MappingClass(psi.surface, (Twist(alpha, k_n),))) \
        if k_n != 0 else psi_n
    # verify the bound on the probe set
    achieved = 0
    for x in probes:
        d = annular_distance(alpha, x, word.apply(x))
        achieved = max(achieved, d.value)
    if achieved > R:
        raise UnachievableBound(
            "probes still twist to %d > R=%d" % (achieved, R))
    return k_n, word


def _probe_set(psi, alpha, probes):
    if probes is not None:
        out = [x for x in probes if geometric_intersection(alpha, x) > 0]
        if out:
            return out
    out = []
    seen = set()
    for g in psi.gens:
        if isinstance(g, Twist):
            for comp in _components(g.curve):
                if comp.coords in seen:
                    continue
                seen.add(comp.coords)
                if geometric_intersection(alpha, comp) > 0:
                    out.append(comp)
    if not out:
        raise DisjointFromAxis(
            "no probe curve crosses the axis; pass probes explicitly")
    return out


def _round_half_toward_zero_mid(lo, hi):
    mid2 = lo + hi
    if mid2 % 2 == 0:
        return mid2 // 2
    return (mid2 + (1 if mid2 < 0 else -1)) // 2


def compose_monodromy(parts, R, probes=None):
    """The composed renormalized word of Prop.-style products.

    parts: list of (psi, alpha, p) with psi fixing the multicurve alpha.
    Each component of each alpha gets its own renormalizing twist.  The
    composite applies the first part first.
    """
    word = None
    for (psi, alpha, p) in parts:
        piece = psi.power(p)
        for comp in _components(alpha):
            if not closed_isotopic(psi.apply(comp), comp):
                raise AxisNotFixed("psi does not fix its axis component")
            try:
                t_vals = [relative_twist(comp, x, piece.apply(x))
                          for x in _probe_set(psi, comp, probes)]
            except DisjointFromAxis:
                continue
            k = -_round_half_toward_zero_mid(min(t_vals), max(t_vals))
            if k:
                piece = piece.then(
                    MappingClass(psi.surface, (Twist(comp, k),)))
        word = piece if word is None else word.then(piece)
    if word is None:
        raise MatchingViolation("empty monodromy")
    # the composite's residual twisting about each axis is re-measured by
    # the thickness certificates rather than asserted here
    return word


# ---------------------------------------------------------------------------
# induced homology action
# ---------------------------------------------------------------------------

def induced_matrix(f, basis):
    """Matrix of f on H1 in the given basis: the product of the generator
    transvections (twists) and permutation actions (symmetries).

    Twist transvection signs are calibrated per axis by probing, so the
    matrix path is independent of the path through images of curves.
    """
    from .homology import algebraic_intersection
    size = basis.rank()

    def mat_mul(m2, m1):
        return [[sum(m2[i][k] * m1[k][j] for k in range(size))
                 for j in range(size)] for i in range(size)]

    ident = [[1 if i == j else 0 for j in range(size)] for i in range(size)]
    total = ident
    omega = [[algebraic_intersection(bi, bj, (1,), (1,))
              for bj in basis.basis_curves] for bi in basis.basis_curves]

    from .homology import crossing_vector, solve_integer
    for g in f.gens:
        if isinstance(g, Symmetry):
            signs = g.flag_signs()
            cols = []
            for bc in basis.basis_curves:
                v = crossing_vector(bc, (1,) * bc.component_count)
                w = [0] * len(v)
                for e, x in enumerate(v):
                    w[g.perm[e]] = signs[e] * x
                cls = solve_integer(basis.vectors, tuple(w))
                if cls is None:
                    raise MatchingViolation("symmetry image outside H1")
                cols.append(cls)
            m = [[cols[j][i] for j in range(size)] for i in range(size)]
            total = mat_mul(m, total)
            continue
        for comp in _components(g.curve):
            gamma = basis.class_of(comp, (1,))
            eps = _twist_sign(comp, basis, omega, gamma)
            m = _transvection(gamma, omega, g.power * eps, size)
            total = mat_mul(m, total)
    return total


def _transvection(gamma, omega, coeff, size):
    # v -> v + coeff * <v, gamma> * gamma where <v,gamma> = v^T Omega gamma
    w = [sum(omega[i][j] * gamma[j] for j in range(size)) for i in range(size)]
    m = [[(1 if i == j else 0) + coeff * gamma[i] * w[j]
          for j in range(size)] for i in range(size)]
    return m


_TWIST_SIGN_CACHE = {}


def _twist_sign(axis, basis, omega, gamma):
    """Calibrate the transvection sign of the kernel's positive twist about
    this axis by probing a basis curve it crosses."""
    from .homology import algebraic_intersection
    key = (axis.coords, id(basis))
    if key in _TWIST_SIGN_CACHE:
        return _TWIST_SIGN_CACHE[key]
    size = basis.rank()
    probe = None
    for bc in basis.basis_curves:
        if geometric_intersection(bc, axis) > 0:
            c = algebraic_intersection(bc, axis, (1,), (1,))
            if c != 0:
                probe = (bc, c)
                break
    if probe is None:
        # homologically invisible twisting (e.g. separating axis)
        _TWIST_SIGN_CACHE[key] = 1
        return 1
    bc, c = probe
    img = twist_image(bc, axis, 1)
    measured = basis.class_of(img, (1,) * img.component_count)
    v = basis.class_of(bc, (1,))
    plus = tuple(v[i] + c * gamma[i] for i in range(size))
    minus = tuple(v[i] - c * gamma[i] for i in range(size))
    neg = tuple(-x for x in measured)
    if measured == plus or neg == plus:
        eps = 1
    elif measured == minus or neg == minus:
        eps = -1
    else:
        raise MatchingViolation("twist transvection calibration failed")
    _TWIST_SIGN_CACHE[key] = eps
    return eps
