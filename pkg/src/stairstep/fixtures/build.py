"""Construct and verify the package's frozen fixtures.

Run as a module (python -m stairstep.fixtures.build) to regenerate the JSON
files next to this script.  Tests re-derive everything here and compare
against the frozen data, so the fixtures cannot drift silently.

Fixture inventory:

* torus.json    - once-punctured torus, slope basis curves mu, lam.
* genus2.json   - closed genus 2: Humphries-style chain a1, b1, c, b2, a2,
                  the separating curve c_sep, theta waists w1=a1, w2=a2,
                  w3=c giving the homologous pair v0 = w1, v1 = w2+w3,
                  and monodromy words psi1, psi2, rot2.
* genus3.json   - closed genus 3 with an order-2 rotation r, the curve
                  sigma with r(sigma) disjoint and (anti)homologous, words
                  for the one-riser construction, and a disjoint pair of
                  separating curves for the separating-vertex variant.
"""

from __future__ import annotations

import json
import os

from ..surface import (surface_from_polygon,
                       surface_from_polygon_with_diagonals, MultiCurve)
from ..curves import (validate_multicurve, geometric_intersection, fills,
                      twist_image, pushoff_curve, complement_circuit_curves,
                      closed_isotopic)
from ..homology import HomologyBasis, homologous
from .._strands import Strandset
from .._arrangement import Drawing, Cells
from ..homology import solve_integer
from ..errors import StairstepError, MatchingViolation

HERE = os.path.dirname(os.path.abspath(__file__))

GENUS2_WORD = list("abABcdCD")
GENUS3_WORD = list("abcdefABCDEF")
GENUS3_DIAGONALS = [(0, 2), (2, 4), (4, 6), (6, 8), (8, 10), (0, 10),
                    (0, 6), (2, 6), (0, 8)]
TORUS_WORD = list("abAB")


def enumerate_single_curves(surface, max_sum):
    """All single essential curves with coordinate sum <= max_sum, in
    lexicographic (sum, coords) order; exact but exponential, fixture use
    only."""
    tris = [tuple(e for (e, _o) in t) for t in surface.triangles]
    order = sorted(range(surface.edge_count))
    # greedy reorder so triangles complete early
    order = []
    remaining = set(range(surface.edge_count))
    while remaining:
        best, best_score = None, None
        for e in sorted(remaining):
            score = sum(1 for es in tris
                        if e in es and all(x == e or x not in remaining for x in es))
            if best_score is None or score > best_score:
                best, best_score = e, score
        order.append(best)
        remaining.discard(best)
    pos_of = {e: i for i, e in enumerate(order)}
    tri_ready = {}
    for es in tris:
        k = max(pos_of[e] for e in es)
        tri_ready.setdefault(k, []).append(es)

    found = []

    def rec(assign, i, rem):
        if i == len(order):
            vec = [0] * surface.edge_count
            for e, w in zip(order, assign):
                vec[e] = w
            found.append(tuple(vec))
            return
        for w in range(rem + 1):
            assign.append(w)
            ok = True
            for es in tri_ready.get(i, []):
                ws = [assign[pos_of[e]] for e in es]
                if sum(ws) % 2 or 2 * max(ws) > sum(ws):
                    ok = False
                    break
            if ok:
                rec(assign, i + 1, rem - w)
            assign.pop()

    rec([], 0, max_sum)
    out = []
    for vec in sorted(found, key=lambda v: (sum(v), v)):
        if sum(vec) == 0:
            continue
        ss = Strandset.from_coords(surface, vec)
        if len(ss.trace()) != 1:
            continue
        try:
            out.append(validate_multicurve(surface, vec))
        except StairstepError:
            continue
    return out


def region_shapes(surface, curves):
    """Sorted (chi_cw, n_circuits, has_vertex) profile of the complement."""
    from ..curves import minimal_drawing
    cells = minimal_drawing(surface, [c.coords for c in curves])
    if cells.crossing_count() != 0:
        raise MatchingViolation("curves are not disjoint")
    shapes = []
    for r in cells.regions:
        shapes.append((cells.region_chi_cw[r], len(cells.region_circuits[r]),
                       bool(cells.region_vertices[r])))
    return sorted(shapes)


def raw_crossings(surface, curves):
    cells = Cells(Drawing.from_coord_families(
        surface, [c.coords for c in curves]))
    return cells.crossing_count()


# ---------------------------------------------------------------------------

def build_torus():
    surf = surface_from_polygon(TORUS_WORD, name="torus", boundary_count=1)
    mu = pushoff_curve(surf, surf._cache["letter_edge"]["a"], 0)
    lam = pushoff_curve(surf, surf._cache["letter_edge"]["b"], 0)
    assert geometric_intersection(mu, lam) == 1
    H = HomologyBasis(surf, [mu, lam])
    return {
        "surface": surf.to_json(),
        "curves": {"mu": list(mu.coords), "lam": list(lam.coords)},
        "basis": ["mu", "lam"],
        "words": {},
        "symmetries": {},
    }


def build_genus2():
    surf = surface_from_polygon(GENUS2_WORD, name="genus2")
    le, de = surf._cache["letter_edge"], surf._cache["diag_edge"]
    a1 = pushoff_curve(surf, le["a"], 0)
    b1 = pushoff_curve(surf, le["b"], 1)
    a2 = pushoff_curve(surf, le["c"], 0)
    b2 = pushoff_curve(surf, le["d"], 0)
    c_sep = pushoff_curve(surf, de[(0, 4)], 0)
    H = HomologyBasis(surf, [a1, b1, a2, b2])

    # chain middle: disjoint from a1, a2; crosses b1, b2 once; class
    # +-(a1+a2); additionally transverse-disjoint from a2 in canonical
    # position so that the union v1 = a2 + c has additive coordinates
    va, vc = H.class_of(a1, (1,)), H.class_of(a2, (1,))
    targets = {tuple(sa * x + sc * y for x, y in zip(va, vc))
               for sa in (1, -1) for sc in (1, -1)}
    c = None
    for mc in enumerate_single_curves(surf, 12):
        if tuple(H.class_of(mc, (1,))) not in targets:
            continue
        if geometric_intersection(mc, a1) or geometric_intersection(mc, a2):
            continue
        if raw_crossings(surf, [a2, mc]) != 0:
            continue
        if (geometric_intersection(mc, b1) == 1
                and geometric_intersection(mc, b2) == 1):
            c = mc
            break
    assert c is not None, "no chain middle found"

    # chain checks: a1-b1-c-b2-a2 consecutive once, others disjoint
    chain = [a1, b1, c, b2, a2]
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            want = 1 if j == i + 1 else 0
            assert geometric_intersection(chain[i], chain[j]) == want, (i, j)
    for x in (a1, b1, b2, a2):
        assert geometric_intersection(c_sep, x) == 0
    assert geometric_intersection(c_sep, c) == 2

    # theta: cutting along w1+w2+w3 gives two pants
    shapes = region_shapes(surf, [a1, a2, c])
    assert shapes == [(-1, 3, False), (-1, 3, True)], shapes

    # v1 = a2 + c as a two-component multicurve homologous to v0 = a1
    v1_coords = tuple(x + y for x, y in zip(a2.coords, c.coords))
    v1 = validate_multicurve(surf, v1_coords)
    assert v1.component_count == 2
    assert homologous(a1, v1) is not None

    # z: a second curve in the 4-holed sphere complement of v1, crossing a1
    # twice: realized as a boundary circuit of a neighborhood of a2+c+b1
    z = None
    for mc, _r in complement_circuit_curves(surf, [a2, c, b1]):
        if geometric_intersection(mc, a2) or geometric_intersection(mc, c):
            continue
        if geometric_intersection(mc, a1) >= 2:
            z = mc
            break
    assert z is not None, "no 4-holed-sphere partner found"

    curves = {
        "a1": a1, "b1": b1, "c": c, "b2": b2, "a2": a2, "c_sep": c_sep,
        "w1": a1, "w2": a2, "w3": c, "v0": a1, "v1": v1, "z": z,
    }
    words = {
        # psi1 fixes v0 = a1 (all its twist curves are disjoint from a1)
        "psi1": [["twist", "c", 1], ["twist", "a2", 1], ["twist", "b2", -1]],
        # psi2 fixes v1 = a2+c (twist curves disjoint from both components)
        "psi2": [["twist", "a1", 1], ["twist", "z", -1]],
        # rotation about v0: a word of twists about curves disjoint from a1
        "rot2": [["twist", "b2", 1], ["twist", "c", -1],
                 ["twist", "b2", 1], ["twist", "c", -1]],
    }
    return {
        "surface": surf.to_json(),
        "curves": {k: list(v.coords) for k, v in curves.items()},
        "basis": ["a1", "b1", "a2", "b2"],
        "words": words,
        "symmetries": {},
    }


def _automorphism_from_vertex_shift(surf, word, shift, diagonals):
    """Edge permutation of the polygon rotation z -> z + shift."""
    n = len(word)
    letters = surf._cache["letter_edge"]
    diags = surf._cache["diag_edge"]
    perm = {}
    # sides: side i carries letter word[i]; image side i+shift
    for i in range(n):
        e1 = letters[word[i].lower()]
        e2 = letters[word[(i + shift) % n].lower()]
        if e1 in perm:
            assert perm[e1] == e2
        perm[e1] = e2
    for (u, v), e in diags.items():
        uu, vv = sorted(((u + shift) % n, (v + shift) % n))
        assert (uu, vv) in diags, "diagonal set not symmetric"
        perm[e] = diags[(uu, vv)]
    return [perm[e] for e in range(surf.edge_count)]


def check_automorphism(surf, perm):
    """perm must send triangles to triangles (up to rotation) preserving
    orientation; returns the induced triangle map."""
    tri_index = {}
    for t, tri in enumerate(surf.triangles):
        key = tuple(e for (e, _o) in tri)
        for r in range(3):
            tri_index[key[r:] + key[:r]] = t
    tmap = []
    for t, tri in enumerate(surf.triangles):
        key = tuple(perm[e] for (e, _o) in tri)
        found = None
        for r in range(3):
            rot = key[r:] + key[:r]
            if rot in tri_index:
                found = tri_index[rot]
                break
        assert found is not None, "not an automorphism"
        tmap.append(found)
    return tmap


def build_genus3():
    surf = surface_from_polygon_with_diagonals(
        GENUS3_WORD, GENUS3_DIAGONALS, name="genus3")
    le, de = surf._cache["letter_edge"], surf._cache["diag_edge"]
    perm = _automorphism_from_vertex_shift(surf, GENUS3_WORD, 6,
                                           GENUS3_DIAGONALS)
    check_automorphism(surf, perm)
    # order 2
    assert [perm[perm[e]] for e in range(len(perm))] == list(range(len(perm)))

    basis_curves = [pushoff_curve(surf, le[l], 0) for l in "abcdef"]
    H = HomologyBasis(surf, basis_curves)

    sigma = pushoff_curve(surf, de[(0, 8)], 0)
    r_sigma_coords = tuple(sigma.coords[perm.index(e)]
                           for e in range(surf.edge_count))
    r_sigma = validate_multicurve(surf, r_sigma_coords)
    assert geometric_intersection(sigma, r_sigma) == 0
    assert not closed_isotopic(sigma, r_sigma)
    assert homologous(sigma, r_sigma) is not None
    # the union separates into two one-handled pieces, the treads of the
    # one-riser construction
    shapes = region_shapes(surf, [sigma, r_sigma])
    assert sorted(ch for (ch, _n, _v) in shapes) == [-2, -2], shapes

    # pool of named small curves
    pool = []
    for d in sorted(de):
        for side in (0, 1):
            try:
                pool.append(pushoff_curve(surf, de[d], side))
            except StairstepError:
                pass
    pool = basis_curves + pool

    # psi: a word of twists about curves disjoint from sigma AND r_sigma so
    # the renormalized one-riser monodromy fixes both
    dis = []
    for mc in pool:
        if (geometric_intersection(mc, sigma) or
                geometric_intersection(mc, r_sigma)):
            continue
        if closed_isotopic(mc, sigma) or closed_isotopic(mc, r_sigma):
            continue
        if all(not closed_isotopic(mc, o) for o in dis):
            dis.append(mc)
    crossing_pairs = [(x, y) for x in dis for y in dis
                      if geometric_intersection(x, y) > 0]
    assert crossing_pairs, "no twisting pair in the complement of sigma"
    x, y = crossing_pairs[0]

    # separating pair: sep1 bounds a neighborhood of the crossing pair
    # (sigma, pc); sep2 bounds a neighborhood of sigma + pc + r_sigma.
    # Their complement has a middle piece with boundary sep1 + sep2: the
    # tread of the separating stairstep.
    pc = basis_curves[2]
    assert geometric_intersection(sigma, pc) == 1
    assert geometric_intersection(r_sigma, pc) == 1
    sep1 = None
    for mc, _r in complement_circuit_curves(surf, [sigma, pc]):
        if not any(H.class_of(mc, (1,))):
            sep1 = mc
            break
    sep2 = None
    for mc, _r in complement_circuit_curves(surf, [sigma, pc, r_sigma]):
        if any(H.class_of(mc, (1,))):
            continue
        if (geometric_intersection(mc, sep1) == 0
                and not closed_isotopic(mc, sep1)):
            sep2 = mc
            break
    assert sep1 is not None and sep2 is not None
    shapes = region_shapes(surf, [sep1, sep2])
    assert (-2, 2, False) in shapes or (-2, 2, True) in shapes, shapes
    # the twisting curves of the separating monodromies avoid both
    for w in (sigma, pc, r_sigma):
        assert geometric_intersection(w, sep1) == 0 or w is r_sigma
        assert geometric_intersection(w, sep2) == 0
    assert geometric_intersection(r_sigma, sep1) > 0  # moves sep1 around

    curves = {
        "sigma": sigma, "r_sigma": r_sigma,
        "tw_x": x, "tw_y": y,
        "sep1": sep1, "sep2": sep2,
        "pa": basis_curves[0], "pb": basis_curves[1], "pc": pc,
        "pd": basis_curves[3], "pe": basis_curves[4], "pf": basis_curves[5],
    }
    words = {
        "psi_sigma": [["twist", "tw_x", 1], ["twist", "tw_y", -1]],
        "r": [["symmetry", "r"]],
        "phi_oneriser": [["twist", "tw_x", 1], ["twist", "tw_y", -1],
                         ["symmetry", "r"]],
        # fixes sep1 (twist curves live inside its neighborhood side)
        "psi_sep1": [["twist", "sigma", 1], ["twist", "pc", -1]],
        # fixes sep2 (all three twist curves live inside N(sigma+pc+rsigma))
        "psi_sep2": [["twist", "sigma", 1], ["twist", "pc", -1],
                     ["twist", "r_sigma", 1]],
    }
    return {
        "surface": surf.to_json(),
        "curves": {k: list(v.coords) for k, v in curves.items()},
        "basis": ["pa", "pb", "pc", "pd", "pe", "pf"],
        "words": words,
        "symmetries": {"r": list(perm)},
    }


def build_all():
    return {
        "torus": build_torus(),
        "genus2": build_genus2(),
        "genus3": build_genus3(),
    }


def main():
    for name, data in build_all().items():
        path = os.path.join(HERE, "%s.json" % name)
        with open(path, "w") as fh:
            json.dump(data, fh, indent=1, sort_keys=True)
            fh.write("\n")
        print("wrote", path)


if __name__ == "__main__":
    main()
