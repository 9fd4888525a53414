"""Rotation systems for swept diagrams, and anchored map isomorphism.

Every crossing ``t`` of a full sequence becomes a 4-valent vertex with darts
``4t + {0: out-top, 1: in-top, 2: in-bottom, 3: out-bottom}`` listed in
cyclic order around the vertex.  Edges are curve segments between
consecutive crossings on the same curve.

Two diagrams are the same planar diagram when an isomorphism of these maps
sends the outer face to the outer face.  That is the comparison used for
polar symmetry (outer face to the flipped drawing's outer face, i.e. the
old innermost face) and for identifying diagrams across different
crossing sequences.
"""

from __future__ import annotations

from typing import Sequence


def edge_involution(n: int, full: Sequence[int]) -> list[int]:
    """Pair each dart with the dart at the other end of its curve segment."""
    rank = list(range(n))
    last_out: dict[int, int] = {}
    first_in: dict[int, int] = {}
    pair = [-1] * (4 * len(full))
    for t, x in enumerate(full):
        upper, lower = rank[x - 1], rank[x]
        # the upper curve descends through the crossing, the lower one rises
        for curve, d_in, d_out in ((upper, 4 * t + 1, 4 * t + 3), (lower, 4 * t + 2, 4 * t)):
            if curve in last_out:
                pair[last_out[curve]] = d_in
                pair[d_in] = last_out[curve]
            else:
                first_in[curve] = d_in
            last_out[curve] = d_out
        rank[x - 1], rank[x] = lower, upper
    if rank != list(range(n)):
        raise ValueError("sequence does not close up; not a full cycle")
    for curve, d_out in last_out.items():
        pair[d_out] = first_in[curve]
        pair[first_in[curve]] = d_out
    return pair


def _turn(d: int, step: int) -> int:
    return d - d % 4 + (d % 4 + step) % 4


def outer_darts(full: Sequence[int]) -> list[int]:
    """Darts on the boundary of the outer face (top side of every gap-1 crossing)."""
    return [4 * t + side for t, x in enumerate(full) if x == 1 for side in (1, 0)]


def anchored_isomorphic(
    n: int, full_a: Sequence[int], full_b: Sequence[int], mirror: bool = False
) -> bool:
    """Is there a map isomorphism taking A's outer face onto B's outer face?

    ``mirror=True`` asks for an orientation-reversing one.
    """
    if len(full_a) != len(full_b) or sorted(full_a) != sorted(full_b):
        return False
    pa = edge_involution(n, full_a)
    pb = edge_involution(n, full_b)
    total = len(pa)
    d0 = outer_darts(full_a)[0]
    step_b = -1 if mirror else 1
    for image in outer_darts(full_b):
        fwd = {d0: image}
        back = {image: d0}
        stack = [d0]
        ok = True
        while stack and ok:
            d = stack.pop()
            e = fwd[d]
            for d2, e2 in ((_turn(d, 1), _turn(e, step_b)), (pa[d], pb[e])):
                seen = fwd.get(d2)
                if seen is not None:
                    if seen != e2:
                        ok = False
                        break
                elif e2 in back:
                    ok = False
                    break
                else:
                    fwd[d2] = e2
                    back[e2] = d2
                    stack.append(d2)
        if ok and len(fwd) == total:
            return True
    return False
