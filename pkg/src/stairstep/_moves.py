"""Crossing resolution: the one surgery behind bigon removal and twisting.

A resolution at a crossing replaces the X by two turning arcs.  Which turn
is taken is prescribed by a pairing of the four local stubs; a stub is
(chord_key, endpoint_port) meaning the quarter of the crossing pointing
toward that endpoint of the chord.  Re-matching a triangle then amounts to
walking the chord-segment graph, turning at resolved crossings and running
straight through unresolved ones.
"""

from __future__ import annotations

from .errors import MatchingViolation


def chords_and_crossings(drawing, t):
    """Chords of triangle t with their crossing sequences.

    Returns (rank, chords, chord_path, crossings) where chord_path maps a
    chord key to [port, xnode, ..., port] with ports as (s, pid) and xnodes
    as ("x", key1, key2) (keys sorted).
    """
    ss, fam = drawing.ss, drawing.fam
    boundary = []
    for s in range(3):
        for pid in ss.side_points(t, s):
            boundary.append((s, pid))
        boundary.append(("c", s))
    rank = {node: i for i, node in enumerate(boundary)}
    B = len(boundary)

    def strictly_between(r, r1, r2):
        return 0 < (r - r1) % B < (r2 - r1) % B

    chords = []
    seen = set()
    for port_a, port_b in ss.match[t].items():
        key = tuple(sorted((port_a, port_b)))
        if key in seen:
            continue
        seen.add(key)
        chords.append(key)
    chords.sort()

    cross_of = {k: [] for k in chords}
    crossings = []
    for i, k1 in enumerate(chords):
        f1 = fam[k1[0][1]]
        r1lo, r1hi = sorted((rank[k1[0]], rank[k1[1]]))
        for k2 in chords[i + 1:]:
            if fam[k2[0][1]] == f1:
                continue
            inside = (strictly_between(rank[k2[0]], r1lo, r1hi)
                      + strictly_between(rank[k2[1]], r1lo, r1hi))
            if inside == 1:
                crossings.append(("x", k1, k2))
                cross_of[k1].append(k2)
                cross_of[k2].append(k1)

    from ._chordgeom import order_crossings
    chords_lo_hi = {}
    for k in chords:
        p_lo, p_hi = k
        if rank[p_lo] > rank[p_hi]:
            p_lo, p_hi = p_hi, p_lo
        chords_lo_hi[k] = (p_lo, p_hi)
    pairs = [(k1, k2) for (_x, k1, k2) in crossings]
    ordered = order_crossings(rank, chords_lo_hi, None, pairs)
    chord_path = {}
    for k in chords:
        path = [chords_lo_hi[k][0]]
        for k2 in ordered[k]:
            a, b = (k, k2) if k <= k2 else (k2, k)
            path.append(("x", a, b))
        path.append(chords_lo_hi[k][1])
        chord_path[k] = path
    return rank, chords, chord_path, crossings


def resolve_crossings(drawing, resolutions):
    """Apply stub pairings.

    resolutions: dict (t, xnode) -> pairing, a dict mapping each stub
    (chord_key, endpoint_port) to its partner stub; entering a crossing
    moving away from stub s's endpoint leaves toward pairing[s]'s endpoint.
    Wait: the walker enters along a chord and leaves along the paired stub.
    Concretely a walker moving along chord k toward endpoint q enters the
    crossing through the stub (k, p) where p is the endpoint it came from,
    and exits toward pairing[(k, p)]'s endpoint.

    Returns the number of dropped closed micro-loops (always an error for
    twisting; impossible for bigon removal).
    """
    ss = drawing.ss
    tris = sorted({t for (t, _x) in resolutions})
    loops = 0
    for t in tris:
        _rank, chords, chord_path, _crossings = chords_and_crossings(drawing, t)
        res_here = {x: pairing for (tt, x), pairing in resolutions.items() if tt == t}
        # index: for chord k, position of each node in its path
        pos = {}
        for k, path in chord_path.items():
            for i, node in enumerate(path):
                pos[(k, node)] = i

        turn_uses = {x: 0 for x in res_here}

        def step(k, i, direction):
            """From path position i of chord k moving +-1; returns
            ('port', port) or ('turn', k2, i2, dir2) or ('pass', k, i2, dir)."""
            j = i + direction
            node = chord_path[k][j]
            if not (isinstance(node, tuple) and node and node[0] == "x"):
                return ("port", node)
            if node in res_here:
                pairing = res_here[node]
                # stub we entered through: the endpoint of k behind us
                p_behind = chord_path[k][0] if direction == 1 else chord_path[k][-1]
                k2, p_toward = pairing[(k, p_behind)]
                i2 = pos[(k2, node)]
                dir2 = 1 if pos[(k2, p_toward)] > i2 else -1
                turn_uses[node] += 1
                return ("turn", k2, i2, dir2)
            return ("pass", k, j, direction)

        new_pairs = []
        visited_starts = set()
        for k in chords:
            for (start_i, direction) in ((0, 1), (len(chord_path[k]) - 1, -1)):
                start_port = chord_path[k][start_i]
                if (k, start_port) in visited_starts:
                    continue
                kk, ii, dd = k, start_i, direction
                guard = 0
                while True:
                    guard += 1
                    if guard > 1_000_000:
                        raise MatchingViolation("resolution walk does not end")
                    outcome = step(kk, ii, dd)
                    if outcome[0] == "port":
                        end_port = outcome[1]
                        end_chord = kk
                        break
                    else:
                        _tag, kk, ii, dd = outcome
                visited_starts.add((k, start_port))
                visited_starts.add((end_chord, end_port))
                new_pairs.append((start_port, end_port))

        for x, uses in turn_uses.items():
            if uses != 2:
                loops += 1
        if loops:
            raise MatchingViolation(
                "crossing resolution produced a closed loop inside a triangle")

        ss.match[t] = {}
        for (pa, pb) in new_pairs:
            ss.add_arc(t, pa, pb)
    return loops


def stub(chord_key, endpoint_port):
    return (chord_key, endpoint_port)
