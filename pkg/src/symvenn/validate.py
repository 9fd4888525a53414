"""Sweep simulation, Venn censuses, crosscuts and symmetry checks.

Conventions: rank 1 is the outermost curve; an entry ``i`` closes the region
at gap ``i`` (the curves at ranks ``1..i`` just before the swap) and then
swaps ranks ``i`` and ``i+1``.  Curve labels inside the sweep are ``0..n-1``
and region sets are bitmasks over them.  Public lists of curves
(:class:`CrossingList`, :class:`Crosscut`) use labels ``1..n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

from .core import (
    AlphaError,
    ClusterForm,
    as_order,
    canonical_parts,
    foata_normal_form,
    iter_normal_form,
    mirror_alpha,
)
from .maps import anchored_isomorphic

FormOrSigma = Union[ClusterForm, Sequence[int]]


class InvalidDiagramError(ValueError):
    """The operation needs a valid diagram and did not get one."""


class Reason(str, Enum):
    DUPLICATE_REGION = "duplicate-region"
    DUPLICATE_ORBIT = "duplicate-orbit"
    SHIFT_NOT_FULL_CYCLE = "shift-not-full-cycle"
    STRAND_CLOSURE_FAILURE = "strand-closure-failure"
    LENGTH_MISMATCH = "length-mismatch"
    VALUE_OUT_OF_RANGE = "value-out-of-range"


@dataclass
class ValidationReport:
    valid: bool
    reason: Reason | None = None
    failing_position: int | None = None
    census_size: int = 0
    shift_cycle: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.valid

    def describe(self) -> str:
        if self.valid:
            return f"valid ({self.census_size} regions/orbits)"
        where = "" if self.failing_position is None else f" at position {self.failing_position}"
        return f"invalid: {self.reason.value}{where}"


@dataclass(frozen=True)
class Crosscut:
    curve: int
    positions: tuple[int, ...]
    partners: tuple[int, ...]


@dataclass(frozen=True)
class CrossingList:
    curve: int
    cluster: int
    partners: tuple[int, ...] = field(default=())

    @property
    def length(self) -> int:
        return len(self.partners)

    def is_palindrome(self) -> bool:
        return self.partners == self.partners[::-1]


class SequenceRangeError(ValueError):
    def __init__(self, value: int, position: int, n: int):
        super().__init__(f"value {value} at position {position} outside [1, {n - 1}]")
        self.value = value
        self.position = position


def resolve(obj: FormOrSigma, n=None) -> tuple[int, tuple[int, ...], ClusterForm | None]:
    """Normalise a cluster form or raw cluster sequence to ``(n, sigma, form)``."""
    if isinstance(obj, ClusterForm):
        return obj.n, obj.sigma, obj
    if n is None:
        raise TypeError("a raw sequence needs the order n")
    return as_order(n).n, tuple(int(v) for v in obj), None


def sweep(n, seq: Sequence[int], start: Sequence[int] | None = None):
    """Run the sweep ray over ``seq``.

    Returns ``(closures, end)`` where ``closures`` lists ``(gap, mask)`` per
    entry and ``end`` is the final rank vector.
    """
    n = int(n)
    rank = list(range(n)) if start is None else list(start)
    closures = []
    for pos, x in enumerate(seq):
        if not 1 <= x <= n - 1:
            raise SequenceRangeError(x, pos, n)
        mask = 0
        for label in rank[:x]:
            mask |= 1 << label
        closures.append((x, mask))
        rank[x - 1], rank[x] = rank[x], rank[x - 1]
    return closures, rank


def _precheck(n: int, sigma: Sequence[int]) -> ValidationReport | None:
    want = as_order(n).cluster_length
    if len(sigma) != want:
        return ValidationReport(False, Reason.LENGTH_MISMATCH)
    for pos, x in enumerate(sigma):
        if not 1 <= x <= n - 1:
            return ValidationReport(False, Reason.VALUE_OUT_OF_RANGE, pos)
    return None


def validate_full(obj: FormOrSigma, n=None) -> ValidationReport:
    """Brute-force oracle: sweep all ``n`` clusters and check every region once."""
    n, sigma, _ = resolve(obj, n)
    bad = _precheck(n, sigma)
    if bad is not None:
        return bad
    rank = list(range(n))
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] | (1 << rank[i])
    seen = set()
    pos = 0
    for _ in range(n):
        for x in sigma:
            mask = prefix[x]
            if mask in seen:
                return ValidationReport(False, Reason.DUPLICATE_REGION, pos, len(seen))
            seen.add(mask)
            rank[x - 1], rank[x] = rank[x], rank[x - 1]
            prefix[x] = prefix[x - 1] | (1 << rank[x - 1])
            pos += 1
    if rank != list(range(n)):
        return ValidationReport(False, Reason.STRAND_CLOSURE_FAILURE, pos - 1, len(seen))
    return ValidationReport(True, census_size=len(seen))


def rotation_canonical(mask: int, n) -> int:
    """Least bitmask among the ``n`` cyclic rotations of ``mask``."""
    n = int(n)
    full = (1 << n) - 1
    if mask <= 0 or mask >= full:
        raise ValueError("rotation orbit is only defined for proper non-empty sets")
    best = mask
    m = mask
    for _ in range(n - 1):
        m = ((m << 1) | (m >> (n - 1))) & full
        if m < best:
            best = m
    return best


def canonical_table(n: int) -> list[int]:
    """``table[mask] = rotation_canonical(mask)``; index 0 and full map to themselves."""
    full = (1 << n) - 1
    table = list(range(full + 1))
    for mask in range(1, full):
        if table[mask] == mask:
            orbit = [mask]
            m = mask
            for _ in range(n - 1):
                m = ((m << 1) | (m >> (n - 1))) & full
                orbit.append(m)
            low = min(orbit)
            for m in orbit:
                table[m] = low
    return table


_TABLES: dict[int, list[int]] = {}


def orbit_table(n: int) -> list[int] | None:
    if n > 16:
        return None
    if n not in _TABLES:
        _TABLES[n] = canonical_table(n)
    return _TABLES[n]


def shift_permutation(n: int, sigma: Sequence[int]) -> list[int]:
    """Rank vector after one cluster from the identity start.

    Label ``x`` plays the role of label ``end[x]`` in the next cluster.
    """
    _, end = sweep(n, sigma)
    return end


def cycle_order(perm: Sequence[int]) -> list[int] | None:
    """Labels along the cycle through 0, or None unless ``perm`` is one n-cycle."""
    cyc = [0]
    x = perm[0]
    while x != 0:
        cyc.append(x)
        x = perm[x]
        if len(cyc) > len(perm):
            return None
    return cyc if len(cyc) == len(perm) else None


def validate_symmetric(obj: FormOrSigma, n=None) -> ValidationReport:
    """Single-cluster census of rotation orbits."""
    n, sigma, _ = resolve(obj, n)
    bad = _precheck(n, sigma)
    if bad is not None:
        return bad
    shift = shift_permutation(n, sigma)
    cyc = cycle_order(shift)
    if cyc is None:
        return ValidationReport(False, Reason.SHIFT_NOT_FULL_CYCLE, len(sigma) - 1)
    # relabel so that one cluster step acts as +1 on curve indices
    relabel = [0] * n
    for j, label in enumerate(cyc):
        relabel[label] = j
    table = orbit_table(n)
    rank = [relabel[x] for x in range(n)]
    prefix = [0] * (n + 1)
    for i in range(n):
        prefix[i + 1] = prefix[i] | (1 << rank[i])
    seen = set()
    for pos, x in enumerate(sigma):
        mask = prefix[x]
        key = table[mask] if table is not None else rotation_canonical(mask, n)
        if key in seen:
            return ValidationReport(False, Reason.DUPLICATE_ORBIT, pos, len(seen), tuple(cyc))
        seen.add(key)
        rank[x - 1], rank[x] = rank[x], rank[x - 1]
        prefix[x] = prefix[x - 1] | (1 << rank[x - 1])
    return ValidationReport(True, census_size=len(seen), shift_cycle=tuple(cyc))


def is_valid(obj: FormOrSigma, n=None) -> bool:
    return validate_symmetric(obj, n).valid


def _require_valid(n: int, sigma: Sequence[int]) -> None:
    report = validate_symmetric(sigma, n)
    if not report.valid:
        raise InvalidDiagramError(f"not a valid diagram: {report.describe()}")


def full_sequence(n: int, sigma: Sequence[int]) -> tuple[int, ...]:
    return tuple(sigma) * n


def canonical_start(n) -> list[int]:
    """Ray vector at the left border of cluster S_1, 0-based labels.

    Curves ``C_{n-1}, C_n, C_{n-3}, C_{n-2}, ..., C_2, C_3, C_1`` from the
    outside in; with it, cluster ``k`` has ``C_k`` as its crosscut.
    """
    n = as_order(n).n
    vec = []
    for hi in range(n - 1, 1, -2):
        vec += [hi - 1, hi]
    return vec + [0]


def crossing_events(n: int, full: Sequence[int], start: Sequence[int] | None = None):
    """``(upper, lower)`` labels of each crossing of ``full``."""
    rank = list(range(n)) if start is None else list(start)
    events = []
    for x in full:
        events.append((rank[x - 1], rank[x]))
        rank[x - 1], rank[x] = rank[x], rank[x - 1]
    return events


def _curve_tracks(n: int, full: Sequence[int]):
    tracks: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
    rank = list(range(n))
    for t, x in enumerate(full):
        a, b = rank[x - 1], rank[x]
        # (position, partner, +1 when moving inward)
        tracks[a].append((t, b, 1))
        tracks[b].append((t, a, -1))
        rank[x - 1], rank[x] = b, a
    return tracks


def find_crosscuts(obj: FormOrSigma, n=None) -> list[Crosscut]:
    """Every run of ``n-1`` consecutive crossings along one curve that meets
    each other curve exactly once while moving steadily across all ranks."""
    n, sigma, _ = resolve(obj, n)
    _require_valid(n, sigma)
    full = full_sequence(n, sigma)
    found = []
    width = n - 1
    for curve, track in enumerate(_curve_tracks(n, full)):
        m = len(track)
        for s in range(m):
            window = [track[(s + j) % m] for j in range(width)]
            partners = {p for _, p, _ in window}
            directions = {d for _, _, d in window}
            if len(partners) == width and len(directions) == 1:
                found.append(
                    Crosscut(
                        curve + 1,
                        tuple(t for t, _, _ in window),
                        tuple(p + 1 for _, p, _ in window),
                    )
                )
    return found


def cluster_positions(form: ClusterForm, k: int = 1) -> list[int]:
    """Global crossing indices belonging to cluster ``S_k`` (1-based ``k``).

    The cluster reaches from its left zig-zag border (``rho``) through the
    next cluster's ``rho``, plus the next cluster's first crosscut crossing,
    which commutes ahead of the next ``alpha``.
    """
    n = form.n
    size = len(form.sigma)
    base = (k - 1) * size
    total = n * size
    span = list(range(base, base + size + n - 2))
    span.append(base + size + form.crosscut_position)
    return [t % total for t in span]


def curve_crossing_lists(obj: FormOrSigma, k: int = 1, n=None) -> list[CrossingList]:
    """Partner lists ``L_{i,k}`` for every curve ``C_i`` inside cluster ``S_k``."""
    form = obj if isinstance(obj, ClusterForm) else to_cluster_form(obj, n)
    if form is None:
        raise InvalidDiagramError("sequence is not in crosscut-symmetric form")
    _require_valid(form.n, form.sigma)
    n = form.n
    events = crossing_events(n, full_sequence(n, form.sigma), canonical_start(n))
    lists: list[list[int]] = [[] for _ in range(n)]
    for t in cluster_positions(form, k):
        a, b = events[t]
        lists[a].append(b + 1)
        lists[b].append(a + 1)
    return [CrossingList(i + 1, k, tuple(p)) for i, p in enumerate(lists)]


def _peel(word: list[int], value: int) -> bool:
    """Remove the first ``value`` from the trace ``word`` if it can move to the front."""
    for i, x in enumerate(word):
        if x == value:
            del word[i]
            return True
        if abs(x - value) <= 1:
            return False
    return False


def to_cluster_form(sigma: Sequence[int], n=None) -> ClusterForm | None:
    """Recover ``alpha`` from a cluster sequence of a crosscut-symmetric diagram.

    Tries every cut of the cyclic sequence; at each, ``rho`` must peel off
    the front by commutations, the crosscut descent is the run of crossings
    of the innermost curve, and what precedes it must mirror what follows.
    Returns None when no cut works (a conservative answer).
    """
    if isinstance(sigma, ClusterForm):
        return sigma
    n = as_order(n).n
    sigma = tuple(sigma)
    size = len(sigma)
    rho, delta = canonical_parts(n)
    full = sigma * 2
    for off in range(size):
        word = list(full[off:off + size])
        if not all(_peel(word, v) for v in rho):
            continue
        form = _split_mirror(n, word, rho, delta)
        if form is not None:
            return form
    return None


def _split_mirror(n, word, rho, delta) -> ClusterForm | None:
    rank = list(range(n))
    for x in rho:
        rank[x - 1], rank[x] = rank[x], rank[x - 1]
    inner = rank[n - 1]
    tags = []
    for x in word:
        a, b = rank[x - 1], rank[x]
        tags.append(inner in (a, b))
        rank[x - 1], rank[x] = b, a
    if tuple(x for x, hit in zip(word, tags) if hit) != delta:
        return None
    size = len(word)
    # before[i]: occurrence i must precede some descent crossing
    before = list(tags)
    for i in range(size - 1, -1, -1):
        if not tags[i]:
            before[i] = any(before[j] and abs(word[i] - word[j]) <= 1 for j in range(i + 1, size))
    after = list(tags)
    for i in range(size):
        if not tags[i]:
            after[i] = any(after[j] and abs(word[i] - word[j]) <= 1 for j in range(i))
    if any(b and a and not t for b, a, t in zip(before, after, tags)):
        return None
    head = [x for x, b, t in zip(word, before, tags) if b and not t]
    tail = [x for x, b in zip(word, before) if not b]
    alpha = foata_normal_form(head)
    if foata_normal_form(mirror_alpha(alpha)) != foata_normal_form(tail):
        return None
    try:
        return ClusterForm(n, alpha)
    except AlphaError:
        return None


def check_crosscut_symmetry(obj: FormOrSigma, n=None) -> bool:
    """Palindromic partner lists for every non-crosscut curve of cluster S_1."""
    form = obj if isinstance(obj, ClusterForm) else to_cluster_form(obj, n)
    if form is None:
        return False
    lists = curve_crossing_lists(form, 1)
    size = form.n - 1
    cut = [
        cl for cl in lists
        if cl.length == size and len(set(cl.partners)) == size
    ]
    if len(cut) != 1:
        return False
    return all(cl.is_palindrome() for cl in lists if cl.curve != cut[0].curve)


def flip_sequence(n: int, seq: Sequence[int]) -> tuple[int, ...]:
    """Half-turn about the equator: reverse the sweep and turn ranks upside down."""
    return tuple(n - x for x in reversed(seq))


def polar_trace_witness(obj: FormOrSigma, n=None) -> int | None:
    """Cut offset at which the flipped sequence is trace-equivalent to a cut of
    the original, or None.  A hit proves polar symmetry; a miss proves nothing."""
    n, sigma, _ = resolve(obj, n)
    _require_valid(n, sigma)
    full = full_sequence(n, sigma)
    flipped = flip_sequence(n, full)
    period = len(sigma)
    targets = {foata_normal_form(full[o:] + full[:o]) for o in range(period)}
    for off in range(period):
        if foata_normal_form(flipped[off:] + flipped[:off]) in targets:
            return off
    return None


def check_polar_symmetry(obj: FormOrSigma, n=None) -> bool:
    """Does a half-turn about an equatorial axis map the diagram onto itself?

    Decided exactly by map isomorphism that swaps the two poles (the outer
    face must land on the flipped drawing's outer face).
    """
    n, sigma, _ = resolve(obj, n)
    _require_valid(n, sigma)
    full = full_sequence(n, sigma)
    return anchored_isomorphic(n, full, flip_sequence(n, full))


def same_diagram(a: FormOrSigma, b: FormOrSigma, n=None, mirror: bool = False) -> bool:
    """Whether two sequences draw the same planar diagram (outer face fixed)."""
    na, sa, _ = resolve(a, n)
    nb, sb, _ = resolve(b, n)
    if na != nb:
        return False
    return anchored_isomorphic(na, full_sequence(na, sa), full_sequence(nb, sb), mirror)


def normal_forms_agree(n: int, a: Sequence[int], b: Sequence[int]) -> bool:
    """Lazy comparison of two linear sequences modulo commutation."""
    if len(a) != len(b):
        return False
    for x, y in zip(iter_normal_form(a), iter_normal_form(b)):
        if x != y:
            return False
    return True
