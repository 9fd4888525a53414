"""Backtracking search over the free half ``alpha`` of the canonical form.

The sweep runs from the left zig-zag border of cluster S_1 with the curve
labels used there, so the rotation to the next cluster is the fixed
relabeling ``C_i -> C_{i+1}`` for every ``alpha``.  Orbit canonical forms are
therefore exact while ``alpha`` is still partial, and every closure left of
the crosscut also fixes its mirror region (the same set plus ``C_1``) on the
right, so both are checked at each step.

Prune rules, all sound:

* ``multiset``  -- each value ``k`` appears exactly ``R_k - 1`` times;
* ``adjacent``  -- no two equal neighbours (the region between them repeats);
* ``orbit``     -- incremental rotation-orbit census of closures and mirrors;
* final confirmation with :func:`validate_symmetric`.
"""

from __future__ import annotations

import json
import logging
import os
import time
from collections import Counter
from concurrent.futures import FIRST_COMPLETED, ProcessPoolExecutor, wait
from dataclasses import asdict, dataclass, field
from itertools import islice
from typing import Callable, Iterator, Sequence

from .core import (
    ClusterForm,
    as_order,
    canonical_parts,
    format_sequence,
    k_point_table,
    parse_sequence,
)
from .validate import orbit_table, canonical_start, rotation_canonical, validate_symmetric

log = logging.getLogger(__name__)

CHECKPOINT_VERSION = 1
# n <= 5 has an empty free half; a bare line would read as blank
EMPTY_ALPHA = "-"
ALL_PRUNES = frozenset({"multiset", "adjacent", "orbit"})
PRUNE_RULES = ("multiset", "adjacent", "orbit", "final")


class SearchConfigError(ValueError):
    pass


class CheckpointError(ValueError):
    pass


def default_split_depth(n: int) -> int:
    if n >= 11:
        return 6  # ~7.9k feasible units at n=11; depth 12 gives ~25M
    return min(2, as_order(n).alpha_length)


@dataclass
class SearchConfig:
    n: int
    limit: int | None = None
    budget_ms: int | None = None
    prefix: tuple[int, ...] = ()
    split_depth: int | None = None
    unit: tuple[int, int] | None = None
    threads: int = 1
    checkpoint_path: str | None = None
    prunes: frozenset[str] = ALL_PRUNES

    def __post_init__(self):
        self.order = as_order(self.n)
        self.n = self.order.n
        self.prefix = tuple(self.prefix)
        a = self.order.alpha_length
        if len(self.prefix) > a:
            raise SearchConfigError(f"prefix longer than alpha length {a}")
        if "multiset" in self.prunes:
            lo, hi = 2, self.n - 3
        else:
            lo, hi = 1, self.n - 2
        for v in self.prefix:
            if not lo <= v <= hi:
                raise SearchConfigError(f"prefix value {v} outside [{lo}, {hi}]")
        if "multiset" in self.prunes:
            budget = k_point_table(self.n).alpha_counts()
            used = Counter(self.prefix)
            for v, c in used.items():
                if c > budget.get(v, 0):
                    raise SearchConfigError(
                        f"prefix uses value {v} {c} times; at most {budget.get(v, 0)} allowed"
                    )
        if self.split_depth is None:
            self.split_depth = default_split_depth(self.n)
        self.split_depth = max(0, min(int(self.split_depth), a))
        if self.unit is not None:
            i, j = self.unit
            if j < 1 or not 0 <= i < j:
                raise SearchConfigError(f"unit selector {i}/{j} needs 0 <= i < j")
        if self.threads < 1:
            raise SearchConfigError("threads must be >= 1")
        self.prunes = frozenset(self.prunes)
        if not self.prunes <= ALL_PRUNES:
            raise SearchConfigError(f"unknown prune rules {set(self.prunes) - ALL_PRUNES}")
        if "orbit" in self.prunes and "multiset" not in self.prunes:
            # the fixed cluster relabeling assumes alpha values in [2, n-3]
            raise SearchConfigError("the orbit prune requires the multiset prune")

    def echo(self) -> dict:
        """The part of the configuration a checkpoint must agree with."""
        return {
            "n": self.n,
            "prefix": format_sequence(self.prefix),
            "split_depth": self.split_depth,
            "unit": None if self.unit is None else f"{self.unit[0]}/{self.unit[1]}",
            "prunes": sorted(self.prunes),
        }


def parse_unit(text: str) -> tuple[int, int]:
    try:
        i, j = (int(p) for p in text.split("/"))
    except ValueError as exc:
        raise SearchConfigError(f"unit selector must look like I/J, got {text!r}") from exc
    return i, j


@dataclass
class SearchStats:
    nodes_visited: int = 0
    prunes_by_rule: dict[str, int] = field(default_factory=lambda: dict.fromkeys(PRUNE_RULES, 0))
    valid_count: int = 0
    elapsed_ms: int = 0
    complete: bool = False

    def merge(self, other: "SearchStats") -> None:
        self.nodes_visited += other.nodes_visited
        for rule, c in other.prunes_by_rule.items():
            self.prunes_by_rule[rule] = self.prunes_by_rule.get(rule, 0) + c
        self.valid_count += other.valid_count


@dataclass
class SearchOutcome:
    alphas: list[tuple[int, ...]]
    stats: SearchStats


def split_work(n, split_depth: int) -> list[tuple[int, ...]]:
    """All prefixes of length ``split_depth`` allowed by the value counts alone.

    Their subtrees partition the search tree.
    """
    order = as_order(n)
    depth = min(split_depth, order.alpha_length)
    counts = dict(k_point_table(order).alpha_counts())
    values = sorted(counts)
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def rec():
        if len(cur) == depth:
            out.append(tuple(cur))
            return
        for v in values:
            if counts[v]:
                counts[v] -= 1
                cur.append(v)
                rec()
                cur.pop()
                counts[v] += 1

    rec()
    return out


class _Budget(Exception):
    pass


class Explorer:
    """Incremental sweep state for depth-first extension of ``alpha``."""

    def __init__(self, n: int, prunes=ALL_PRUNES):
        self.n = n
        self.prunes = frozenset(prunes)
        self.alpha_length = as_order(n).alpha_length
        table = orbit_table(n)
        self.canon = table if table is not None else None
        self.rho, _ = canonical_parts(n)
        if "multiset" in self.prunes:
            self.counts = dict(k_point_table(n).alpha_counts())
        else:
            self.counts = {v: self.alpha_length for v in range(1, n - 1)}
        self.values = sorted(self.counts)
        self.rank = canonical_start(n)
        self.prefix = [0] * (n + 1)
        for i in range(n):
            self.prefix[i + 1] = self.prefix[i] | (1 << self.rank[i])
        self.closed: set[int] = set()
        self.opened: set[int] = set()
        self.alpha: list[int] = []
        self._undo: list = []
        self.last = None
        for v in self.rho:
            if not self._push(v, mirror=False):
                raise AssertionError("zig-zag border collides with itself")
        self.base_depth = len(self._undo)

    def _key(self, mask: int) -> int:
        if self.canon is not None:
            return self.canon[mask]
        return rotation_canonical(mask, self.n)

    def _push(self, v: int, mirror: bool = True) -> bool:
        """Apply crossing ``v``; False (state unchanged) if the orbit prune fires.

        Two censuses, each one orbit per region in a valid cluster: regions
        closed by sigma's crossings and regions opened by them.  An alpha
        crossing also fixes the region opened by its partner in the mirror
        half: its own closure plus ``C_1`` (label 0, innermost until delta).
        """
        rank = self.rank
        closed = self.prefix[v]
        opened = self.prefix[v - 1] | (1 << rank[v])
        keys = None
        if "orbit" in self.prunes:
            key = self._key
            kc, ko = key(closed), key(opened)
            km = key(closed | 1) if mirror else -1
            if kc in self.closed or ko in self.opened or km in self.opened or ko == km:
                return False
            self.closed.add(kc)
            self.opened.add(ko)
            if mirror:
                self.opened.add(km)
            keys = (kc, ko, km)
        rank[v - 1], rank[v] = rank[v], rank[v - 1]
        self.prefix[v] = opened
        self._undo.append((v, keys))
        self.last = v
        return True

    def _pop(self) -> None:
        v, keys = self._undo.pop()
        if keys is not None:
            kc, ko, km = keys
            self.closed.discard(kc)
            self.opened.discard(ko)
            self.opened.discard(km)
        rank = self.rank
        rank[v - 1], rank[v] = rank[v], rank[v - 1]
        self.prefix[v] = self.prefix[v - 1] | (1 << rank[v - 1])
        self.last = self._undo[-1][0] if self._undo else None

    def extend(self, v: int, stats: SearchStats | None = None) -> bool:
        """Append ``v`` to alpha if no prune rejects it."""
        if self.counts.get(v, 0) <= 0:
            if stats:
                stats.prunes_by_rule["multiset"] += 1
            return False
        if "adjacent" in self.prunes and v == self.last:
            if stats:
                stats.prunes_by_rule["adjacent"] += 1
            return False
        if not self._push(v):
            if stats:
                stats.prunes_by_rule["orbit"] += 1
            return False
        self.counts[v] -= 1
        self.alpha.append(v)
        return True

    def retract(self) -> None:
        v = self.alpha.pop()
        self.counts[v] += 1
        self._pop()

    def reset(self) -> None:
        while self.alpha:
            self.retract()

    def enter(self, prefix: Sequence[int], stats: SearchStats | None = None) -> bool:
        """Reset and descend along ``prefix``; False if a prune cuts it off."""
        self.reset()
        for v in prefix:
            if not self.extend(v, stats):
                self.reset()
                return False
        return True

    def prefixes(self, base: Sequence[int], depth: int) -> Iterator[tuple[int, ...]]:
        """Prune-feasible extensions of ``base`` to length ``depth``, smallest first."""
        if not self.enter(base):
            return
        target = max(depth, len(base))

        def rec():
            if len(self.alpha) == target:
                yield tuple(self.alpha)
                return
            for v in self.values:
                if self.extend(v):
                    yield from rec()
                    self.retract()

        yield from rec()
        self.reset()

    def explore(
        self,
        root: Sequence[int],
        emit: Callable[[tuple[int, ...]], bool],
        stats: SearchStats,
        deadline: float | None = None,
    ) -> bool:
        """Enumerate every valid alpha below ``root``.

        ``emit`` returns False to stop early.  Returns True when the whole
        subtree was explored.
        """
        if not self.enter(root, stats):
            return True
        target = self.alpha_length
        values = self.values
        clock = [0]

        def rec() -> None:
            stats.nodes_visited += 1
            if len(self.alpha) == target:
                form = ClusterForm(self.n, tuple(self.alpha))
                if validate_symmetric(form).valid:
                    stats.valid_count += 1
                    if not emit(form.alpha):
                        raise _Budget
                else:
                    stats.prunes_by_rule["final"] += 1
                return
            clock[0] += 1
            if deadline is not None and clock[0] & 1023 == 0 and time.monotonic() > deadline:
                raise _Budget
            for v in values:
                if self.extend(v, stats):
                    rec()
                    self.retract()

        try:
            rec()
        except _Budget:
            self.reset()
            return False
        self.reset()
        return True


_WORKER: dict[tuple, Explorer] = {}


def _explorer(n: int, prunes) -> Explorer:
    key = (n, frozenset(prunes))
    if key not in _WORKER:
        _WORKER[key] = Explorer(n, prunes)
    return _WORKER[key]


def _run_unit(n, prunes, unit, deadline, limit):
    ex = _explorer(n, prunes)
    found: list[tuple[int, ...]] = []
    stats = SearchStats()

    def emit(alpha):
        found.append(alpha)
        return limit is None or len(found) < limit

    # time.monotonic is per-process; translate the deadline to a local clock
    local = None if deadline is None else time.monotonic() + max(0.0, deadline - time.time())
    finished = ex.explore(unit, emit, stats, local)
    return unit, found, stats, finished


def _write_json(path: str, payload: dict) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w") as fh:
        json.dump(payload, fh, indent=1, sort_keys=True)
        fh.write("\n")
    os.replace(tmp, path)


def load_checkpoint(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{path}: not a JSON checkpoint ({exc})") from exc
    if data.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: checkpoint version {data.get('version')!r}, expected {CHECKPOINT_VERSION}"
        )
    for key in ("config", "completed", "results", "stats"):
        if key not in data:
            raise CheckpointError(f"{path}: checkpoint lacks {key!r}")
    return data


def config_from_checkpoint(data: dict, **overrides) -> SearchConfig:
    cfg = data["config"]
    unit = cfg.get("unit")
    return SearchConfig(
        n=cfg["n"],
        prefix=parse_sequence(cfg.get("prefix", "")),
        split_depth=cfg["split_depth"],
        unit=None if unit is None else parse_unit(unit),
        prunes=frozenset(cfg.get("prunes", sorted(ALL_PRUNES))),
        **overrides,
    )


class _Ledger:
    """Completed units, results and stats, optionally mirrored to a checkpoint."""

    def __init__(self, config: SearchConfig):
        self.config = config
        self.completed: set[tuple[int, ...]] = set()
        self.results: set[tuple[int, ...]] = set()
        self.stats = SearchStats()
        self.prior_ms = 0
        self._last_flush = 0.0
        path = config.checkpoint_path
        if path and os.path.exists(path):
            data = load_checkpoint(path)
            if data["config"] != config.echo():
                raise CheckpointError(
                    f"{path}: checkpoint was written for {data['config']}, "
                    f"not {config.echo()}"
                )
            self.completed = {parse_sequence(u) for u in data["completed"]}
            self.results = {parse_sequence(r) for r in data["results"]}
            st = data["stats"]
            self.stats.nodes_visited = st.get("nodes_visited", 0)
            self.stats.valid_count = st.get("valid_count", 0)
            self.stats.prunes_by_rule.update(st.get("prunes_by_rule", {}))
            self.prior_ms = st.get("elapsed_ms", 0)

    def flush(self, force: bool = False) -> None:
        path = self.config.checkpoint_path
        if not path:
            return
        now = time.monotonic()
        if not force and now - self._last_flush < 1.0:
            return
        self._last_flush = now
        _write_json(
            path,
            {
                "format": "symvenn-checkpoint",
                "version": CHECKPOINT_VERSION,
                "config": self.config.echo(),
                "completed": sorted(format_sequence(u) for u in self.completed),
                "results": [format_sequence(r) for r in sorted(self.results)],
                "stats": asdict(self.stats),
            },
        )


def work_units(config: SearchConfig) -> Iterator[tuple[int, ...]]:
    """Units of this run: prune-feasible prefixes at the split depth, filtered by the unit selector."""
    ex = Explorer(config.n, config.prunes)
    units = ex.prefixes(config.prefix, config.split_depth)
    for idx, unit in enumerate(units):
        if config.unit is None or idx % config.unit[1] == config.unit[0]:
            yield unit


def search(
    config: SearchConfig,
    on_result: Callable[[tuple[int, ...]], None] | None = None,
) -> SearchOutcome:
    """Run (or resume) a search; ``on_result`` sees each new alpha as it is found."""
    t0 = time.time()
    deadline = None if config.budget_ms is None else t0 + config.budget_ms / 1000.0
    ledger = _Ledger(config)
    stats = ledger.stats
    limit = config.limit
    emitted = 0
    stopped = False

    def accept(unit, found, unit_stats, finished) -> bool:
        nonlocal emitted
        stats.merge(unit_stats)
        truncated = False
        for alpha in found:
            if alpha in ledger.results:
                continue
            if limit is not None and emitted >= limit:
                truncated = True
                break
            ledger.results.add(alpha)
            emitted += 1
            if on_result:
                on_result(alpha)
        if finished and not truncated:
            ledger.completed.add(unit)
        ledger.flush()
        return finished and not truncated and (limit is None or emitted < limit)

    pending = (u for u in work_units(config) if u not in ledger.completed)
    if config.threads == 1:
        for unit in pending:
            remaining = None if limit is None else limit - emitted
            if not accept(*_run_unit(config.n, config.prunes, unit, deadline, remaining)):
                stopped = True
                break
            if deadline is not None and time.time() > deadline:
                stopped = True
                break
    else:
        stopped = _run_parallel(config, pending, accept, deadline, lambda: emitted)

    all_units_done = not stopped and next(
        (u for u in work_units(config) if u not in ledger.completed), None
    ) is None
    stats.complete = all_units_done
    stats.elapsed_ms = ledger.prior_ms + int((time.time() - t0) * 1000)
    stats.valid_count = len(ledger.results)
    ledger.flush(force=True)
    return SearchOutcome(sorted(ledger.results), stats)


def _run_parallel(config, pending, accept, deadline, emitted) -> bool:
    limit = config.limit
    stopped = False
    with ProcessPoolExecutor(max_workers=config.threads) as pool:
        inflight = set()
        feed = iter(pending)

        def top_up():
            for unit in islice(feed, 2 * config.threads - len(inflight)):
                remaining = None if limit is None else limit - emitted()
                inflight.add(pool.submit(_run_unit, config.n, config.prunes, unit, deadline, remaining))

        top_up()
        while inflight:
            done, _ = wait(inflight, return_when=FIRST_COMPLETED)
            for fut in done:
                inflight.discard(fut)
                if not accept(*fut.result()):
                    stopped = True
            if stopped or (deadline is not None and time.time() > deadline):
                stopped = True
                for fut in inflight:
                    fut.cancel()
                # collect whatever already finished so checkpoints stay truthful
                for fut in inflight:
                    if not fut.cancelled():
                        accept(*fut.result())
                break
            top_up()
    return stopped


def resume(checkpoint_path: str, on_result=None, **overrides) -> SearchOutcome:
    """Continue a checkpointed search; only unfinished units run."""
    data = load_checkpoint(checkpoint_path)
    config = config_from_checkpoint(data, checkpoint_path=checkpoint_path, **overrides)
    return search(config, on_result)


def write_results(path: str, alphas: Sequence[Sequence[int]], stats: SearchStats, n: int) -> str:
    """Sorted results file plus a JSON sidecar; returns the sidecar path."""
    with open(path, "w", newline="\n") as fh:
        for alpha in sorted(tuple(a) for a in alphas):
            fh.write((format_sequence(alpha) or EMPTY_ALPHA) + "\n")
    meta = f"{path}.json"
    _write_json(
        meta,
        {
            "n": n,
            "valid_count": stats.valid_count,
            "nodes": stats.nodes_visited,
            "elapsed_ms": stats.elapsed_ms,
            "complete": stats.complete,
            "version": CHECKPOINT_VERSION,
            "prunes_by_rule": stats.prunes_by_rule,
        },
    )
    return meta


def read_alpha_file(path: str) -> list[tuple[int, ...]]:
    """One alpha per line; blank lines and ``#`` comments are ignored."""
    out = []
    with open(path) as fh:
        for line in fh:
            body = line.split("#", 1)[0].strip()
            if body == EMPTY_ALPHA:
                out.append(())
            elif body:
                out.append(parse_sequence(body))
    return out
