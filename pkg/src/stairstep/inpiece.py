"""Piece-level metrics computed in the ambient surface.

For curves x, y inside a complementary piece W of a cut system, the joint
minimal position of (cut, x, y) in the ambient surface answers every
W-level question directly: a bigon face never contains cut strands, so the
terminal x-y crossing count equals the intersection number inside W, and
the regions of the reduced drawing are the complementary pieces of the
union.  This avoids transporting large curves into piece coordinates.

Regions are matched to pieces of the decomposition by invariants (Euler
characteristic, marked-vertex membership, boundary circuit families); the
desk fixtures always disambiguate.
"""

from __future__ import annotations

from .surface import same_surface
from .curves import minimal_drawing
from .errors import MatchingViolation, MissesSubsurface


def _region_profile(cells, r, ncut):
    """(chi_surface, has_vertex, circuit row multiset) with rows reduced to
    (families touched, number of component strands) so profiles compare
    across different drawings."""
    fam = cells.drawing.fam
    comps, where = cells.drawing.component_map()
    rows = []
    for ci in cells.region_circuits[r]:
        circ = cells.circuits[ci]
        pairs = {(fam[pid], where[pid][0]) for (_j, pid) in circ["edge_points"]}
        fams = tuple(sorted({min(f, ncut) for (f, _c) in pairs}))
        rows.append((fams, len(pairs)))
    chi = cells.region_chi_cw[r] - cells.region_ideal_inside[r]
    return (chi, bool(cells.region_vertices[r]), tuple(sorted(rows)))


class PieceContext:
    """A decomposition piece with the data needed for ambient-side checks."""

    def __init__(self, decomposition, piece):
        self.decomposition = decomposition
        self.piece = piece
        self.cut = decomposition.multicurves
        self.surface = decomposition.surface
        self._profile = _region_profile(decomposition.cells, piece.region,
                                        len(self.cut))
        self._farey = None

    def profile(self):
        return self._profile

    def sibling_profiles(self):
        dec = self.decomposition
        return [_region_profile(dec.cells, p.region, len(self.cut))
                for p in dec.pieces if p is not self.piece]

    def is_farey(self):
        """Farey unit: 1 on a once-punctured torus piece, 2 on a four-holed
        sphere piece, 0 otherwise (curve graphs of both are Farey graphs)."""
        s = self.piece.surface
        if s.genus == 1 and s.boundary_count == 1:
            return 1
        if s.genus == 0 and s.boundary_count == 4:
            return 2
        return 0


def contexts(decomposition):
    return [PieceContext(decomposition, p) for p in decomposition.pieces]


def _overlay(ctx, extras):
    """Reduced drawing of cut + extras; families 0..ncut-1 are the cut."""
    fams = [m.coords for m in ctx.cut] + [x.coords for x in extras]
    return minimal_drawing(ctx.surface, fams)


def _assert_off_cut(cells, ncut):
    fam = cells.drawing.fam
    for (_t, k1, k2) in cells.crossings:
        f1, f2 = fam[k1[0][1]], fam[k2[0][1]]
        if min(f1, f2) < ncut <= max(f1, f2):
            raise MissesSubsurface("curve intersects the cut essentially")


def in_piece_intersection(ctx, x, y):
    """Intersection number of x and y inside the piece; both must be
    isotopic off the cut."""
    same_surface(x, y)
    if x.coords == y.coords:
        return 0
    cells = _overlay(ctx, [x, y])
    ncut = len(ctx.cut)
    _assert_off_cut(cells, ncut)
    fam = cells.drawing.fam
    fx, fy = ncut, ncut + 1
    count = 0
    for (_t, k1, k2) in cells.crossings:
        if {fam[k1[0][1]], fam[k2[0][1]]} == {fx, fy}:
            count += 1
    return count


def in_piece_equal(ctx, x, y):
    """Equality of the classes inside the piece: disjoint there and
    cobounding annulus regions away from the cut."""
    if x.coords == y.coords:
        return True
    if x.component_count != y.component_count:
        return False
    cells = _overlay(ctx, [x, y])
    ncut = len(ctx.cut)
    _assert_off_cut(cells, ncut)
    fam = cells.drawing.fam
    fx, fy = ncut, ncut + 1
    for (_t, k1, k2) in cells.crossings:
        if {fam[k1[0][1]], fam[k2[0][1]]} == {fx, fy}:
            return False
    comps, where = cells.drawing.component_map()
    paired_x, paired_y = set(), set()
    for r in cells.regions:
        circs = [cells.circuits[i] for i in cells.region_circuits[r]]
        if (cells.region_chi_cw[r] != 0 or len(circs) != 2
                or cells.region_ideal_inside[r]
                or any(c["ambient"] for c in circs)):
            continue
        sides = []
        for c in circs:
            pids = [pid for (_j, pid) in c["edge_points"]]
            fams_touched = {fam[p] for p in pids}
            comps_touched = {where[p][0] for p in pids}
            if len(fams_touched) != 1 or len(comps_touched) != 1:
                sides = None
                break
            sides.append((fams_touched.pop(), comps_touched.pop()))
        if not sides:
            continue
        if {s[0] for s in sides} == {fx, fy}:
            for (f, comp) in sides:
                (paired_x if f == fx else paired_y).add(comp)
    nx = sum(1 for comp in comps if fam[comp[0][0]] == fx)
    ny = sum(1 for comp in comps if fam[comp[0][0]] == fy)
    return len(paired_x) == nx and len(paired_y) == ny


def in_piece_trivial(ctx, x):
    """Is some component of x inessential or cut-parallel in the piece?"""
    cells = _overlay(ctx, [x])
    ncut = len(ctx.cut)
    _assert_off_cut(cells, ncut)
    fam = cells.drawing.fam
    comps, where = cells.drawing.component_map()
    x_comps = [ci for ci, comp in enumerate(comps)
               if fam[comp[0][0]] == ncut]
    for target in x_comps:
        for r in cells.regions:
            touch_target = False
            only_target = True
            cut_circs = 0
            n_circs = 0
            for ci in cells.region_circuits[r]:
                n_circs += 1
                circ = cells.circuits[ci]
                pids = [pid for (_j, pid) in circ["edge_points"]]
                fams_touched = {fam[p] for p in pids}
                comps_touched = {where[p][0] for p in pids}
                if comps_touched == {target}:
                    touch_target = True
                elif fams_touched and max(fams_touched) < ncut:
                    cut_circs += 1
                else:
                    only_target = False
            if not touch_target or not only_target:
                continue
            chi = cells.region_chi_cw[r]
            ideal = cells.region_ideal_inside[r]
            if chi == 1 and ideal <= 1:
                return True   # bounds a disk or puncture disk
            if chi == 0 and ideal == 0 and cut_circs == 1 and n_circs == 2:
                return True   # annulus against the cut: peripheral
    return False


def in_piece_fills(ctx, x, y):
    """Do x and y jointly fill the piece?

    Every region touching x or y must be a disk (possibly with the marked
    point) or a peripheral annulus against the cut; the remaining regions
    must be exactly the other pieces of the cut.
    """
    cells = _overlay(ctx, [x, y])
    ncut = len(ctx.cut)
    _assert_off_cut(cells, ncut)
    fam = cells.drawing.fam
    leftover = []
    for r in cells.regions:
        touches_extra = False
        rows_all_cut = []
        n_circs = 0
        for ci in cells.region_circuits[r]:
            n_circs += 1
            circ = cells.circuits[ci]
            pids = [pid for (_j, pid) in circ["edge_points"]]
            fams_touched = {fam[p] for p in pids}
            if fams_touched and max(fams_touched) >= ncut:
                touches_extra = True
            else:
                rows_all_cut.append(ci)
        chi = cells.region_chi_cw[r]
        ideal = cells.region_ideal_inside[r]
        if touches_extra:
            if chi == 1 and ideal <= 1:
                continue
            if (chi == 0 and ideal == 0 and n_circs == 2
                    and len(rows_all_cut) == 1):
                continue  # annulus between the curves and the cut
            return False
        leftover.append(_region_profile(cells, r, ncut))
    return sorted(leftover) == sorted(ctx.sibling_profiles())
