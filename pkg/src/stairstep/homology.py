"""First homology of the triangulated surface via signed edge crossings.

An oriented multicurve transverse to the triangulation crosses each edge a
signed number of times; the resulting vector lies in the flow-conservation
kernel (in = out at every triangle), which is H1 of the surface minus its
ideal vertices.  For closed fixtures and once-punctured fixtures peripheral
loops are null-homologous, so this kernel computes H1 of the closed surface.

The package expresses classes in a fixed basis of named fixture curves; the
builder verifies the basis spans the integer kernel.
"""

from __future__ import annotations

from fractions import Fraction

from ._strands import Strandset
from .errors import UnorientedInput, MatchingViolation, MultiComponentInput
from .surface import same_surface


def flow_matrix(surface):
    """Rows: triangles, columns: edges; entry = sum of side flags."""
    rows = []
    for t in range(surface.ntriangles):
        row = [0] * surface.edge_count
        for (e, o) in surface.triangles[t]:
            row[e] += o
        rows.append(row)
    return rows


def integer_kernel(rows, ncols):
    """Basis of the integer kernel of the matrix, via column reduction with
    a unimodular transform (exact, no floats)."""
    m = [list(r) for r in rows]
    nrows = len(m)
    u = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col(j):
        return [m[i][j] for i in range(nrows)]

    def addmul(j_dst, j_src, c):
        for i in range(nrows):
            m[i][j_dst] += c * m[i][j_src]
        for i in range(ncols):
            u[i][j_dst] += c * u[i][j_src]

    def swap(j1, j2):
        for i in range(nrows):
            m[i][j1], m[i][j2] = m[i][j2], m[i][j1]
        for i in range(ncols):
            u[i][j1], u[i][j2] = u[i][j2], u[i][j1]

    pivot_col = 0
    for r in range(nrows):
        # find a column with a nonzero entry in row r at or after pivot_col
        nz = [j for j in range(pivot_col, ncols) if m[r][j] != 0]
        if not nz:
            continue
        # gcd-reduce row r across those columns
        while True:
            nz = [j for j in range(pivot_col, ncols) if m[r][j] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda j: abs(m[r][j]))
            j0 = nz[0]
            for j in nz[1:]:
                q = m[r][j] // m[r][j0]
                addmul(j, j0, -q)
        nz = [j for j in range(pivot_col, ncols) if m[r][j] != 0]
        if nz:
            swap(pivot_col, nz[0])
            pivot_col += 1
    kernel = []
    for j in range(pivot_col, ncols):
        kernel.append(tuple(u[i][j] for i in range(ncols)))
    return kernel


def solve_integer(basis, vec):
    """Coefficients expressing vec in the given independent integer basis,
    or None if no rational/integral solution exists."""
    ncols = len(basis)
    nrows = len(vec)
    a = [[Fraction(basis[j][i]) for j in range(ncols)] for i in range(nrows)]
    b = [Fraction(v) for v in vec]
    # gaussian elimination
    row = 0
    pivots = []
    for c in range(ncols):
        p = None
        for r in range(row, nrows):
            if a[r][c] != 0:
                p = r
                break
        if p is None:
            return None  # basis not independent for this solve
        a[row], a[p] = a[p], a[row]
        b[row], b[p] = b[p], b[row]
        inv = a[row][c]
        a[row] = [x / inv for x in a[row]]
        b[row] = b[row] / inv
        for r in range(nrows):
            if r != row and a[r][c] != 0:
                f = a[r][c]
                a[r] = [x - f * y for x, y in zip(a[r], a[row])]
                b[r] = b[r] - f * b[row]
        pivots.append(c)
        row += 1
        if row == nrows:
            break
    # consistency
    for r in range(row, nrows):
        if b[r] != 0:
            return None
    out = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        out[c] = b[i]
    if any(x.denominator != 1 for x in out):
        return None
    return tuple(int(x) for x in out)


def crossing_vector(curve, orientations=None):
    """Signed edge-crossing vector of an oriented multicurve."""
    if orientations is None:
        orientations = curve.orientations
    if orientations is None:
        raise UnorientedInput("multicurve carries no orientation")
    ss = Strandset.from_coords(curve.surface, curve.coords)
    comps = ss.trace()
    if len(orientations) != len(comps):
        raise UnorientedInput("need one sign per component")
    vec = [0] * curve.surface.edge_count
    for sign, comp in zip(orientations, comps):
        for (pid, _f, _t, sgn) in comp:
            vec[ss.points[pid][0]] += sign * sgn
    return tuple(vec)


class HomologyBasis:
    """A fixed integer basis of the cycle space, given by named curves."""

    def __init__(self, surface, basis_curves, orientations=None):
        self.surface = surface
        self.basis_curves = list(basis_curves)
        if orientations is None:
            orientations = [(1,)] * len(basis_curves)
        self.vectors = [crossing_vector(c, o)
                        for c, o in zip(basis_curves, orientations)]
        kernel = integer_kernel(flow_matrix(surface), surface.edge_count)
        if len(kernel) != len(self.vectors):
            raise MatchingViolation(
                "basis size %d != cycle space rank %d"
                % (len(self.vectors), len(kernel)))
        # verify the named curves span the integer kernel: each kernel basis
        # vector must be an integer combination of the curve vectors
        for kv in kernel:
            if solve_integer(self.vectors, kv) is None:
                raise MatchingViolation("named curves do not span H1")

    def class_of(self, curve, orientations=None):
        vec = crossing_vector(curve, orientations)
        out = solve_integer(self.vectors, vec)
        if out is None:
            raise MatchingViolation("crossing vector outside the cycle space")
        return out

    def rank(self):
        return len(self.vectors)


def algebraic_intersection(a, b, orient_a=None, orient_b=None):
    """Signed intersection number of oriented multicurves.

    Computed on the raw transverse overlay; bigon removal changes the count
    by cancelling pairs only, so no reduction is needed.
    """
    same_surface(a, b)
    from ._arrangement import Drawing
    from ._moves import chords_and_crossings
    if orient_a is None:
        orient_a = a.orientations
    if orient_b is None:
        orient_b = b.orientations
    if orient_a is None or orient_b is None:
        raise UnorientedInput("both multicurves need orientations")
    drawing = Drawing.from_coord_families(a.surface, [a.coords, b.coords])
    comps, where = drawing.component_map()
    fam = drawing.fam
    # per-component sign: family components appear in canonical trace order
    comp_sign = {}
    idx = {0: 0, 1: 0}
    for ci, comp in enumerate(comps):
        f = fam[comp[0][0]]
        signs = orient_a if f == 0 else orient_b
        if idx[f] >= len(signs):
            raise UnorientedInput("orientation count mismatch")
        comp_sign[ci] = signs[idx[f]]
        idx[f] += 1
    directed = drawing.directed_chords()
    total = 0
    for t in range(a.surface.ntriangles):
        rank, _chords, _paths, crossings = chords_and_crossings(drawing, t)
        B = len(rank)
        for (_x, k1, k2) in crossings:
            ka = k1 if fam[k1[0][1]] == 0 else k2
            kb = k2 if ka is k1 else k1
            def direction(k):
                pa, pb = k
                if directed.get((t, pa)) == pb:
                    return pa, pb
                return pb, pa
            a_tail, a_head = direction(ka)
            b_tail, b_head = direction(kb)
            sign = 1 if (0 < (rank[b_tail] - rank[a_tail]) % B
                         < (rank[a_head] - rank[a_tail]) % B) else -1
            sa = comp_sign[where[ka[0][1]][0]]
            sb = comp_sign[where[kb[0][1]][0]]
            total += sign * sa * sb
    return total


def homologous(a, b):
    """Are the multicurves homologous for some choice of orientations?

    Returns the pair of orientation tuples, or None.  The match is required
    to be through a nonzero class unless both are null-homologous single
    choices (separating curves are each null-homologous with any sign)."""
    same_surface(a, b)
    from itertools import product
    surface = a.surface
    ss_a = Strandset.from_coords(surface, a.coords)
    ss_b = Strandset.from_coords(surface, b.coords)
    na, nb = len(ss_a.trace()), len(ss_b.trace())
    seen = {}
    for sa in product((1, -1), repeat=na):
        va = crossing_vector(a, sa)
        seen[sa] = va
    for sb in product((1, -1), repeat=nb):
        vb = crossing_vector(b, sb)
        for sa, va in seen.items():
            if va == vb:
                return (sa, sb)
    return None
