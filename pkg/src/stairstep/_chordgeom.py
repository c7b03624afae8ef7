"""Exact straight-chord geometry inside a triangle.

Boundary nodes are mapped to points (r, r^2) on a parabola by their cyclic
rank; all nodes are then in convex position with hull order equal to rank
order.  Chords are straight segments, so crossing existence is endpoint
interleaving and crossing order along a chord comes from exact rational
intersection parameters.  This stays consistent for any number of curve
families (the pairwise interleaving rule alone does not).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MatchingViolation


def chord_param(ra, rb, rc, rd):
    """Parameter t in (0,1) along segment A=(ra,ra^2) -> B=(rb,rb^2) of its
    intersection with segment C->D, or None if parallel/degenerate."""
    ax, ay = ra, ra * ra
    bx, by = rb, rb * rb
    cx, cy = rc, rc * rc
    dx, dy = rd, rd * rd
    rxs = (bx - ax, by - ay)
    sxs = (dx - cx, dy - cy)
    denom = rxs[0] * sxs[1] - rxs[1] * sxs[0]
    if denom == 0:
        return None
    qp = (cx - ax, cy - ay)
    t = Fraction(qp[0] * sxs[1] - qp[1] * sxs[0], denom)
    return t


def order_crossings(rank, chords, chord_key_fam, pairs):
    """Crossing order along every chord.

    rank: port -> integer rank; chords: key -> (port_lo, port_hi) with
    rank(port_lo) < rank(port_hi); pairs: list of (k1, k2) crossing pairs.
    Returns dict key -> list of partner keys ordered along the chord from
    its low-rank endpoint.  Raises on exactly concurrent triples.
    """
    along = {k: [] for k in chords}
    for (k1, k2) in pairs:
        lo1, hi1 = chords[k1]
        lo2, hi2 = chords[k2]
        t1 = chord_param(rank[lo1], rank[hi1], rank[lo2], rank[hi2])
        t2 = chord_param(rank[lo2], rank[hi2], rank[lo1], rank[hi1])
        if t1 is None or t2 is None:
            raise MatchingViolation("degenerate chord intersection")
        along[k1].append((t1, k2))
        along[k2].append((t2, k1))
    out = {}
    for k, lst in along.items():
        lst.sort(key=lambda item: (item[0], item[1]))
        params = [t for (t, _k) in lst]
        if len(set(params)) != len(params):
            raise MatchingViolation(
                "concurrent chords; placement needs a perturbation")
        out[k] = [k2 for (_t, k2) in lst]
    return out
