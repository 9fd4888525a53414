"""Sequence arithmetic for crosscut-symmetric Venn diagrams.

A crossing sequence is a list of gap indices ``1..n-1``; entry ``i`` swaps
the curves at ranks ``i`` and ``i+1`` of the sweep ray (rank 1 is the
outermost curve).  A crosscut-symmetric cluster is fully determined by its
order ``n`` and the free half ``alpha``::

    sigma = rho + alpha + delta + mirror(alpha)

Everything here is exact integer arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence


class OrderError(ValueError):
    """Raised for orders that cannot carry a simple symmetric diagram."""


class AlphaError(ValueError):
    """Raised for a free half of the wrong length or with bad values."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class DiagramOrder:
    """Number of curves ``n``; odd, and both sequence lengths integral."""

    n: int

    def __post_init__(self):
        n = self.n
        if not isinstance(n, int) or isinstance(n, bool):
            raise OrderError(f"order must be an integer, got {n!r}")
        if n < 3 or n % 2 == 0:
            raise OrderError(f"order must be an odd prime (got n={n})")
        if (2**n - 2) % n or (2 ** (n - 1) - (n - 1) ** 2) % n or not _is_prime(n):
            raise OrderError(
                f"order must be an odd prime (alpha length non-integral): n={n}"
            )

    @property
    def cluster_length(self) -> int:
        return (2**self.n - 2) // self.n

    @property
    def alpha_length(self) -> int:
        return (2 ** (self.n - 1) - (self.n - 1) ** 2) // self.n

    def __int__(self) -> int:
        return self.n


def as_order(n) -> DiagramOrder:
    return n if isinstance(n, DiagramOrder) else DiagramOrder(int(n))


def sequence_lengths(n) -> tuple[int, int]:
    """Return ``(cluster_length, alpha_length)`` for order ``n``."""
    order = as_order(n)
    return order.cluster_length, order.alpha_length


def canonical_parts(n) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """The fixed zig-zag border ``rho`` and crosscut descent ``delta``.

    >>> canonical_parts(7)
    ((1, 3, 2, 5, 4), (6, 5, 4, 3, 2))
    """
    n = as_order(n).n
    rho = [1]
    for hi in range(3, n - 1, 2):
        rho += [hi, hi - 1]
    delta = list(range(n - 1, 1, -1))
    return tuple(rho), tuple(delta)


def mirror_alpha(alpha: Sequence[int]) -> tuple[int, ...]:
    """Reverse ``alpha`` and add one to every entry."""
    return tuple(v + 1 for v in reversed(alpha))


def unmirror_alpha(mirrored: Sequence[int]) -> tuple[int, ...]:
    return tuple(v - 1 for v in reversed(mirrored))


@dataclass(frozen=True)
class ClusterForm:
    """Order plus free half; the rest of the cluster sequence is forced."""

    order: DiagramOrder
    alpha: tuple[int, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "order", as_order(self.order))
        object.__setattr__(self, "alpha", tuple(int(v) for v in self.alpha))
        want = self.order.alpha_length
        if len(self.alpha) != want:
            raise AlphaError(
                f"alpha for n={self.n} must have {want} values, got {len(self.alpha)}"
            )

    @property
    def n(self) -> int:
        return self.order.n

    @property
    def sigma(self) -> tuple[int, ...]:
        return build_sigma(self)

    @property
    def crosscut_position(self) -> int:
        """Index in ``sigma`` of the first crossing of the crosscut (start of delta)."""
        return self.n - 2 + len(self.alpha)


def build_sigma(form: ClusterForm) -> tuple[int, ...]:
    """Assemble ``rho + alpha + delta + mirror(alpha)`` and range-check it."""
    n = form.n
    rho, delta = canonical_parts(form.order)
    sigma = rho + form.alpha + delta + mirror_alpha(form.alpha)
    for pos, v in enumerate(sigma):
        if not 1 <= v <= n - 1:
            raise AlphaError(f"value {v} at position {pos} outside [1, {n - 1}]")
    return sigma


def parse_sequence(text: str) -> tuple[int, ...]:
    """Parse comma- or whitespace-separated decimals; ``#`` starts a comment."""
    text = text.split("#", 1)[0]
    tokens = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    try:
        return tuple(int(t) for t in tokens)
    except ValueError as exc:
        raise AlphaError(f"cannot parse sequence {text.strip()!r}") from exc


def format_sequence(seq: Iterable[int]) -> str:
    return ",".join(str(v) for v in seq)


@dataclass(frozen=True)
class KPointRow:
    k: int
    r: int
    alpha_count: int


@dataclass(frozen=True)
class KPointTable:
    n: int
    rows: tuple[KPointRow, ...]

    def r(self, k: int) -> int:
        return self.rows[k - 1].r

    def alpha_counts(self) -> dict[int, int]:
        """Non-zero ``{value: count}`` that a canonical alpha must contain."""
        return {row.k: row.alpha_count for row in self.rows if row.alpha_count}


def left_kpoints(n: int, k: int) -> int:
    """Number of k-points left of the crosscut in one cluster (exact)."""
    num = comb(n - 1, k) + (-1) ** (k + 1)
    if num % n:
        raise OrderError(f"k-point count for n={n}, k={k} is non-integral")
    return num // n


def k_point_table(n) -> KPointTable:
    n = as_order(n).n
    rows = []
    for k in range(1, n):
        r = left_kpoints(n, k)
        # rho already holds one crossing of each value 1..n-2
        count = r - 1 if k <= n - 2 else 0
        rows.append(KPointRow(k, r, count))
    return KPointTable(n, tuple(rows))


def catalan(m: int) -> int:
    return comb(2 * m, m) // (m + 1)


def polar_crosscut_possible(n) -> bool:
    """Whether the counting obstruction to crosscut + polar symmetry is absent.

    Polar symmetry forces ``R_m <= R_{m-1} + 1`` for the middle level
    ``m = (n-1)/2``.  ``n = 2`` has no middle level and is reported possible.
    """
    n = int(n)
    if n == 2:
        return True
    n = as_order(n).n
    m = (n - 1) // 2
    r_prev = left_kpoints(n, m - 1) if m > 1 else 0
    diff = left_kpoints(n, m) - r_prev
    # closed form via the Catalan number C(2m, m) - C(2m, m-1)
    assert n * diff == catalan(m) + 2 * (-1) ** (m + 1)
    return diff <= 1


def commutes(a: int, b: int) -> bool:
    return abs(a - b) > 1


def foata_normal_form(seq: Sequence[int]) -> tuple[int, ...]:
    """Lexicographically least sequence reachable by commuting swaps.

    Two adjacent crossings ``j, k`` commute when ``|j - k| > 1``.  Greedy:
    repeatedly emit the smallest value whose earlier dependents are all
    emitted already.
    """
    return tuple(iter_normal_form(seq))


def iter_normal_form(seq: Sequence[int]):
    """Lazy version of :func:`foata_normal_form` (allows early mismatch exit)."""
    if not seq:
        return
    hi = max(seq)
    inf = len(seq)
    positions: dict[int, list[int]] = {}
    for p, v in enumerate(seq):
        positions.setdefault(v, []).append(p)
    heads = {v: 0 for v in positions}

    def nxt(v: int) -> int:
        lst = positions.get(v)
        if lst is None:
            return inf
        h = heads[v]
        return lst[h] if h < len(lst) else inf

    values = sorted(positions)
    for _ in range(len(seq)):
        for v in values:
            p = nxt(v)
            if p < inf and nxt(v - 1) > p and (v == hi or nxt(v + 1) > p):
                heads[v] += 1
                yield v
                break
        else:  # pragma: no cover - a ready element always exists
            raise RuntimeError("no ready element")
