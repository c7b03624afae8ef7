"""Transverse overlays of curve families and everything built on them.

An Arrangement drawing holds one merged Strandset plus a family id per
point.  From it we compute, per triangle, the planar subdivision induced by
the chords (cells, via a half-edge structure), glue cells across edges into
regions of the complement, and read off:

  * crossings between families (geometric intersection after bigon removal),
  * region Euler characteristics, boundary circuits and contained vertices
    (cutting, filling, essentialness),
  * parallel push-offs of region boundary circuits (complement curves,
    neighborhood boundaries, projection surgeries),
  * resolution smoothing along parallel copies of a curve (Dehn twists).

Everything is exact integer/fraction combinatorics; no floats.
"""

from __future__ import annotations

from fractions import Fraction

from ._strands import Strandset
from .surface import VKIND_MARKED, VKIND_IDEAL, VKIND_BOUNDARY
from .errors import MatchingViolation


# ---------------------------------------------------------------------------
# merged drawings
# ---------------------------------------------------------------------------

class Drawing:
    """A merged multi-family Strandset with family labels."""

    def __init__(self, surface):
        self.ss = Strandset(surface)
        self.fam = {}  #
        self.surface = surface

    @staticmethod
    def from_coord_families(surface, coord_vectors):
        d = Drawing(surface)
        for f, coords in enumerate(coord_vectors):
            single = Strandset.from_coords(surface, coords, tiebreak=f)
            d.absorb(single, f)
        return d

    def absorb(self, strandset, family):
        """Copy a standalone Strandset into the drawing under `family`."""
        remap = {}
        for pid, (e, pos) in sorted(strandset.points.items()):
            remap[pid] = self.ss.new_point(e, pos)
            self.fam[remap[pid]] = family
        for t in range(self.surface.ntriangles):
            seen = set()
            for (s, pid), (s2, pid2) in strandset.match[t].items():
                key = tuple(sorted(((s, pid), (s2, pid2))))
                if key in seen:
                    continue
                seen.add(key)
                self.ss.add_arc(t, (s, remap[pid]), (s2, remap[pid2]))

    def families(self):
        return sorted(set(self.fam.values()))

    def extract(self, family):
        """Copy one family out as a standalone Strandset."""
        out = Strandset(self.surface)
        remap = {}
        for pid in sorted(self.ss.points):
            if self.fam[pid] != family:
                continue
            e, pos = self.ss.points[pid]
            remap[pid] = out.new_point(e, pos)
        for t in range(self.surface.ntriangles):
            seen = set()
            for (s, pid), (s2, pid2) in self.ss.match[t].items():
                if pid not in remap or pid2 not in remap:
                    continue
                key = tuple(sorted(((s, pid), (s2, pid2))))
                if key in seen:
                    continue
                seen.add(key)
                out.add_arc(t, (s, remap[pid]), (s2, remap[pid2]))
        return out

    def directed_chords(self):
        """Strand directions: dict (t, port) -> port meaning the strand runs
        from the first port to the second inside triangle t."""
        directed = {}
        for comp in self.ss.trace():
            n = len(comp)
            for i in range(n):
                pid, _fv, tv, _sgn = comp[i]
                if tv is None:
                    continue
                t2, s2 = tv
                s_next, pid_next = self.ss.match[t2][(s2, pid)]
                directed[(t2, (s2, pid))] = (s_next, pid_next)
        return directed

    def component_map(self):
        """pid -> (component index, step index); also returns the trace."""
        comps = self.ss.trace()
        where = {}
        for ci, comp in enumerate(comps):
            for si, (pid, _f, _t, _s) in enumerate(comp):
                where[pid] = (ci, si)
        return comps, where


# ---------------------------------------------------------------------------
# the planar subdivision per triangle and glued regions
# ---------------------------------------------------------------------------

class Cells:
    """Faces of the drawing, glued into regions of the complement."""

    def __init__(self, drawing):
        self.drawing = drawing
        self.surface = drawing.surface
        self.ss = drawing.ss
        self.fam = drawing.fam
        self._build()

    # node encodings:
    #   ('c', t, i)            corner i of triangle t
    #   ('p', pid, t, s)       boundary occurrence of point pid on side s
    #   ('x', t, c1, c2)       crossing of chords c1 < c2 (chord keys)
    # chord key: tuple sorted ((s,pid),(s2,pid2)) within its triangle

    def _build(self):
        ss, surface = self.ss, self.surface
        self.tri = {}
        self.crossings = []           # (t, chord_a_key, chord_b_key) fam-a < fam-b
        self.cell_of_dart = {}
        self.cells = {}               # cell id -> list of darts
        self.side_instances = {}      # (e, k) -> list of (dart, cell)
        cell_counter = 0

        for t in range(surface.ntriangles):
            info = self._build_triangle(t)
            self.tri[t] = info
            for orbit in info["cells"]:
                cid = cell_counter
                cell_counter += 1
                self.cells[cid] = orbit
                for d in orbit:
                    self.cell_of_dart[d] = cid
            for (t_, c1, c2) in info["crossings"]:
                self.crossings.append((t_, c1, c2))

        # register side instances for gluing
        for t in range(surface.ntriangles):
            info = self.tri[t]
            for d, (e, k) in info["side_meta"].items():
                if d in self.cell_of_dart:
                    self.side_instances.setdefault((e, k), []).append(
                        (d, self.cell_of_dart[d]))

        # union-find cells across glued side segments
        parent = {c: c for c in self.cells}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        self.glued_pairs = []
        for (e, k), insts in sorted(self.side_instances.items()):
            if e in surface.boundary_edges:
                continue
            if len(insts) != 2:
                raise MatchingViolation("side segment (%d,%d) glued %d times"
                                        % (e, k, len(insts)))
            (d1, c1), (d2, c2) = insts
            self.glued_pairs.append(((d1, c1), (d2, c2)))
            r1, r2 = find(c1), find(c2)
            if r1 != r2:
                parent[r1] = r2

        regions = {}
        for c in self.cells:
            regions.setdefault(find(c), []).append(c)
        self.region_of_cell = {c: find(c) for c in self.cells}
        self.regions = {r: sorted(cs) for r, cs in regions.items()}

        # partner dart across each glued side segment
        self.side_partner = {}
        for (d1, c1), (d2, c2) in self.glued_pairs:
            self.side_partner[d1] = d2
            self.side_partner[d2] = d1

        self._region_stats()

    # -- per-triangle subdivision ------------------------------------------

    def _build_triangle(self, t):
        ss, surface = self.ss, self.surface
        # boundary sequence with ranks
        boundary = []
        side_of_rank = {}
        for s in range(3):
            for pid in ss.side_points(t, s):
                boundary.append(("p", pid, t, s))
            # corner s sits between side s and side s+1
            boundary.append(("c", t, s))
        rank = {node: i for i, node in enumerate(boundary)}
        B = len(boundary)

        def strictly_between(r, r1, r2):
            """Is rank r strictly inside the cyclic interval r1 -> r2 upward?"""
            return 0 < (r - r1) % B < (r2 - r1) % B

        # chords
        chords = {}
        seen = set()
        for (s, pid), (s2, pid2) in ss.match[t].items():
            key = tuple(sorted(((s, pid), (s2, pid2))))
            if key in seen:
                continue
            seen.add(key)
            n1 = ("p", key[0][1], t, key[0][0])
            n2 = ("p", key[1][1], t, key[1][0])
            chords[key] = (n1, n2)

        # crossings (only between different families)
        chord_keys = sorted(chords)
        cross_of_chord = {k: [] for k in chord_keys}
        crossings = []
        for i, k1 in enumerate(chord_keys):
            f1 = self.fam[k1[0][1]]
            n1a, n1b = chords[k1]
            r1lo, r1hi = sorted((rank[n1a], rank[n1b]))
            for k2 in chord_keys[i + 1:]:
                f2 = self.fam[k2[0][1]]
                if f1 == f2:
                    continue
                n2a, n2b = chords[k2]
                inside = (strictly_between(rank[n2a], r1lo, r1hi)
                          + strictly_between(rank[n2b], r1lo, r1hi))
                if inside == 1:
                    crossings.append((t, k1, k2))
                    cross_of_chord[k1].append(k2)
                    cross_of_chord[k2].append(k1)

        def xnode(k1, k2):
            a, b = (k1, k2) if k1 <= k2 else (k2, k1)
            return ("x", t, a, b)

        # order crossings along each chord by exact straight-chord geometry
        from ._chordgeom import order_crossings
        chords_lo_hi = {}
        for k in chord_keys:
            n_lo, n_hi = chords[k]
            if rank[n_lo] > rank[n_hi]:
                n_lo, n_hi = n_hi, n_lo
            chords_lo_hi[k] = (n_lo, n_hi)
        pairs = [(k1, k2) for (_t, k1, k2) in crossings]
        ordered = order_crossings(rank, chords_lo_hi, None, pairs)
        chord_path = {}
        for k in chord_keys:
            path = [chords_lo_hi[k][0]]
            for k2 in ordered[k]:
                path.append(xnode(k, k2))
            path.append(chords_lo_hi[k][1])
            chord_path[k] = path

        # segments and darts
        segs = []
        side_meta = {}

        def add_seg(a, b, kind, meta=None):
            sid = len(segs)
            segs.append((a, b, kind, meta))
            return sid

        # boundary segments, with (edge, interval index) metadata
        for s in range(3):
            e, o = surface.triangles[t][s]
            pts_edge_order = list(ss.edge_points[e])
            m = len(pts_edge_order)
            pts = ss.side_points(t, s)
            prev_node = ("c", t, (s - 1) % 3)
            for j, pid in enumerate(pts + [None]):
                node = ("p", pid, t, s) if pid is not None else ("c", t, s)
                # interval index in edge order:
                if o == 1:
                    k = j
                else:
                    k = m - j
                sid = add_seg(prev_node, node, "b", (e, k))
                prev_node = node

        # chord segments
        for k in chord_keys:
            path = chord_path[k]
            for i in range(len(path) - 1):
                add_seg(path[i], path[i + 1], "ch", (k, i))

        # darts: (sid, +1) runs a->b, (sid, -1) runs b->a
        def head(d):
            sid, sign = d
            a, b, _k, _m = segs[sid]
            return b if sign == 1 else a

        def tail(d):
            sid, sign = d
            a, b, _k, _m = segs[sid]
            return a if sign == 1 else b

        out_darts = {}
        for sid, (a, b, _k, _m) in enumerate(segs):
            out_darts.setdefault(a, []).append((sid, 1))
            out_darts.setdefault(b, []).append((sid, -1))

        # rotations (ccw lists of out-darts)
        rotation = {}
        for node, ds in out_darts.items():
            kind = node[0]
            if kind == "c":
                rotation[node] = list(ds)
            elif kind == "p":
                fwd = back = chordd = None
                for d in ds:
                    sid, sign = d
                    a, b, kk, meta = segs[sid]
                    if kk == "b":
                        # boundary direction: +1 dart runs with the walk
                        if sign == 1:
                            fwd = d
                        else:
                            back = d
                    else:
                        chordd = d
                if fwd is None or back is None or chordd is None:
                    raise MatchingViolation("bad point node degree in tri %d" % t)
                rotation[node] = [fwd, chordd, back]
            else:
                _x, _t, k1, k2 = node
                p1 = chord_path[k1]
                p2 = chord_path[k2]
                i1 = p1.index(node)
                i2 = p2.index(node)
                # darts along chord k1: toward later path (fwd1), earlier (back1)
                def dart_between(k, i, j):
                    # segment i..i+1 of chord k has meta (k, min(i,j))
                    for d in ds:
                        sid, sign = d
                        a, b, kk, meta = segs[sid]
                        if kk != "ch" or meta[0] != k:
                            continue
                        if meta[1] == min(i, j):
                            return d
                    raise MatchingViolation("missing chord dart")
                fwd1 = dart_between(k1, i1, i1 + 1)
                back1 = dart_between(k1, i1, i1 - 1)
                fwd2 = dart_between(k2, i2, i2 + 1)
                back2 = dart_between(k2, i2, i2 - 1)
                # handedness: chord k1 directed from its lower-rank endpoint;
                # if chord k2's lower endpoint lies left of k1, rotation is
                # [fwd1, back2, back1, fwd2], else [fwd1, fwd2, back1, back2]
                n1_lo = chord_path[k1][0]
                n1_hi = chord_path[k1][-1]
                n2_lo = chord_path[k2][0]
                left = strictly_between(rank[n2_lo], rank[n1_hi], rank[n1_lo])
                if left:
                    rotation[node] = [fwd1, back2, back1, fwd2]
                else:
                    rotation[node] = [fwd1, fwd2, back1, back2]

        # faces: next(d) = rotation-predecessor of twin(d) at head(d)
        def next_dart(d):
            sid, sign = d
            twin = (sid, -sign)
            n = head(d)
            rot = rotation[n]
            i = rot.index(twin)
            return rot[(i - 1) % len(rot)]

        orbits = []
        seen_darts = set()
        for sid in range(len(segs)):
            for sign in (1, -1):
                d = (sid, sign)
                if d in seen_darts:
                    continue
                orbit = []
                x = d
                while x not in seen_darts:
                    seen_darts.add(x)
                    orbit.append(x)
                    x = next_dart(x)
                orbits.append(orbit)

        # outer face: contains the reversed dart of boundary segment 0
        outer = None
        for orbit in orbits:
            for (sid, sign) in orbit:
                a, b, kk, meta = segs[sid]
                if kk == "b" and sign == -1:
                    outer = orbit
                    break
            if outer is not None:
                break
        cells = [o for o in orbits if o is not outer]
        nch = len(chord_keys)
        nx = len(crossings)
        if len(cells) != 1 + nch + nx:
            raise MatchingViolation(
                "face count %d != 1+%d+%d in triangle %d"
                % (len(cells), nch, nx, t))

        # global dart ids: (t, sid, sign)
        gcells = [[(t, sid, sign) for (sid, sign) in orbit] for orbit in cells]
        gside_meta = {}
        for sid, (a, b, kk, meta) in enumerate(segs):
            if kk == "b":
                for sign in (1, -1):
                    gside_meta[(t, sid, sign)] = meta

        return {
            "segs": segs,
            "rank": rank,
            "B": B,
            "chords": chords,
            "chord_path": chord_path,
            "cells": gcells,
            "crossings": crossings,
            "side_meta": gside_meta,
        }

    # -- region statistics ---------------------------------------------------

    def _seg(self, dart):
        t, sid, sign = dart
        return self.tri[t]["segs"][sid]

    def dart_kind(self, dart):
        return self._seg(dart)[2]

    def dart_meta(self, dart):
        return self._seg(dart)[3]

    def dart_head(self, dart):
        t, sid, sign = dart
        a, b, _k, _m = self.tri[t]["segs"][sid]
        return b if sign == 1 else a

    def dart_tail(self, dart):
        t, sid, sign = dart
        a, b, _k, _m = self.tri[t]["segs"][sid]
        return a if sign == 1 else b

    def _region_stats(self):
        surface = self.surface
        corner_cell = {}
        for cid, orbit in self.cells.items():
            for d in orbit:
                h = self.dart_head(d)
                if h[0] == "c":
                    corner_cell[(h[1], h[2])] = cid
        self.region_vertices = {r: set() for r in self.regions}
        for (t, i), cid in corner_cell.items():
            v = surface.corner_vertex(t, i)
            self.region_vertices[self.region_of_cell[cid]].add(v)

        glued_in_region = {r: 0 for r in self.regions}
        for (d1, c1), (d2, c2) in self.glued_pairs:
            r = self.region_of_cell[c1]
            assert r == self.region_of_cell[c2]
            glued_in_region[r] += 1

        self.region_chi_cw = {}
        self.region_ideal_inside = {}
        for r, cs in self.regions.items():
            interior_vertices = 0
            ideal = 0
            for v in self.region_vertices[r]:
                kind = surface.vertex_kind(v)
                if kind == VKIND_BOUNDARY:
                    continue
                interior_vertices += 1
                if kind == VKIND_IDEAL:
                    ideal += 1
            self.region_chi_cw[r] = len(cs) - glued_in_region[r] + interior_vertices
            self.region_ideal_inside[r] = ideal

        self._build_circuits()

    # -- region boundary circuits ---------------------------------------------

    def _orbit_index(self):
        idx = {}
        for cid, orbit in self.cells.items():
            for i, d in enumerate(orbit):
                idx[d] = (cid, i)
        return idx

    def _build_circuits(self):
        idx = self._orbit_index()
        wall = {}
        for cid, orbit in self.cells.items():
            for d in orbit:
                kind = self.dart_kind(d)
                if kind == "ch":
                    wall[d] = True
                elif kind == "b":
                    e, _k = self.dart_meta(d)[0], self.dart_meta(d)[1]
                    if e in self.surface.boundary_edges:
                        wall[d] = True

        visited = set()
        self.circuits = []           # list of dicts
        self.region_circuits = {r: [] for r in self.regions}

        for d0 in sorted(wall):
            if d0 in visited:
                continue
            seq = []
            cid, i = idx[d0]
            d = d0
            # walk: emit wall darts, jump across glued side darts
            guard = 0
            while True:
                guard += 1
                if guard > 10_000_000:
                    raise MatchingViolation("circuit walk does not close")
                if d in wall:
                    if d in visited:
                        break
                    visited.add(d)
                    seq.append(d)
                    cid, i = idx[d]
                elif d in self.side_partner:
                    cid, i = idx[self.side_partner[d]]
                # advance within the current orbit
                orbit = self.cells[cid]
                i = (i + 1) % len(orbit)
                d = orbit[i]
            if not seq:
                continue
            circ = self._circuit_info(seq)
            self.circuits.append(circ)
            self.region_circuits[circ["region"]].append(len(self.circuits) - 1)

    def _circuit_info(self, seq):
        fam = self.fam
        region = self.region_of_cell[self.cell_of_dart[seq[0]]]
        turns = []
        families = set()
        pids = []
        ambient = True
        for j, d in enumerate(seq):
            kind = self.dart_kind(d)
            if kind == "ch":
                ambient = False
                key = self.dart_meta(d)[0]
                families.add(fam[key[0][1]])
            h = self.dart_head(d)
            d2 = seq[(j + 1) % len(seq)]
            if h[0] == "x":
                k1 = self.dart_meta(d)[0]
                k2 = self.dart_meta(d2)[0]
                if k1 != k2:
                    turns.append((j, h))
            elif h[0] == "p":
                pids.append((j, h[1]))
        return {
            "seq": seq,
            "region": region,
            "turns": turns,
            "families": sorted(families),
            "edge_points": pids,
            "ambient": ambient,
        }

    # -- queries ---------------------------------------------------------------

    def crossing_count(self):
        return len(self.crossings)

    def region_is_trivial(self, r):
        """Disk, or once-punctured disk (boundary-parallel annulus)."""
        chi = self.region_chi_cw[r]
        if chi != 1:
            return False
        return self.region_ideal_inside[r] <= 1

    def region_chi_surface(self, r):
        return self.region_chi_cw[r] - self.region_ideal_inside[r]

    def circuit_walk(self, ci):
        """Walk data for pushing circuit ci off into its region.

        Returns a list of (edge, position, next_triangle) triples suitable
        for Strandset.from_walks, or None when the circuit never crosses an
        edge (it bounds inside one triangle) or runs along the ambient
        boundary.  The push-off sits on the region's side of the circuit.
        """
        circ = self.circuits[ci]
        if circ["ambient"] or not circ["edge_points"]:
            return None
        seq = circ["seq"]
        n = len(seq)
        items = []
        junctions = [(j, pid) for (j, pid) in circ["edge_points"]]
        for (j, pid) in junctions:
            d = seq[j]
            t1 = d[0]
            h = self.dart_head(d)
            s_from = h[3]
            e, pos = self.ss.points[pid]
            o = None
            for (tt, s_, oo) in self.surface.edge_sides(e):
                if (tt, s_) == (t1, s_from):
                    o = oo
                    break
            if o is None:
                raise MatchingViolation("junction side lookup failed")
            # the region (hence the push-off) lies left of the walk; when the
            # walk leaves the o=+1 occurrence the left side is the +e side
            offset = 1 if o == 1 else -1
            newpos = pos + (offset,)
            t_next = seq[(j + 1) % n][0]
            items.append((e, newpos, t_next))
        return items

    def bigons(self, allow_marked=False):
        """Regions that are empty bigons between two families."""
        out = []
        for r in self.regions:
            circs = self.region_circuits[r]
            if len(circs) != 1:
                continue
            if self.region_chi_cw[r] != 1:
                continue
            if self.region_ideal_inside[r] > 0:
                continue
            if not allow_marked and self.region_vertices[r]:
                continue
            c = self.circuits[circs[0]]
            if c["ambient"]:
                continue
            if len(c["turns"]) != 2 or len(c["families"]) != 2:
                continue
            x1, x2 = c["turns"][0][1], c["turns"][1][1]
            if x1 == x2:
                continue
            out.append((r, c))
        return out
