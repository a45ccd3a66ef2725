"""
Exact clique and independent-set search on bitrow graphs.

One engine, two faces: independent sets are cliques of the complement.
Derangement graphs are dense, so their complements are the easy side.
"""
import logging
import time
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Sequence

from src.config.settings import DEFAULT_ENUM_CAP, DEFAULT_TIME_BUDGET
from .derangement_graph import Graph, graph_complement, iter_bits
from .exceptions import BudgetExceededError, GraphTooLargeError

logger = logging.getLogger(__name__)

SOLVER_VERTEX_CAP = 5000
_CHECK_EVERY = 256


def popcount(x: int) -> int:
    return bin(x).count('1')


class _TargetReached(Exception):
    pass


class _Deadline:
    def __init__(self, budget: Optional[float]):
        self.budget = budget
        self.stop_at = None if budget is None else time.monotonic() + budget
        self.ticks = 0

    def tick(self):
        self.ticks += 1
        if self.stop_at is not None and self.ticks % _CHECK_EVERY == 0 and time.monotonic() > self.stop_at:
            raise BudgetExceededError(f"Time budget of {self.budget:g}s exceeded")


def greedy_color_bound(rows: Sequence[int], candidates: int) -> int:
    """Number of colours a greedy colouring of the candidates uses."""
    colors = 0
    uncolored = candidates
    while uncolored:
        colors += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            uncolored ^= low
            available &= ~rows[v]
            available &= ~low
    return colors


@dataclass
class SolveResult:
    """
    Outcome of an optimum search.

    size is None when the budget ran out ("not computed"); lower_bound and
    witness then hold the best clique found so far.
    """

    size: Optional[int]
    witness: List[int] = field(default_factory=list)
    lower_bound: int = 0
    nodes: int = 0

    @property
    def exact(self) -> bool:
        return self.size is not None

    @property
    def status(self) -> str:
        return 'exact' if self.exact else 'not-computed'


class CliqueSolver:
    """
    Branch and bound maximum clique with greedy colouring bounds.

    Args:
        graph: Graph to search
        time_budget: Seconds before giving up, None for no limit
    """

    def __init__(self, graph: Graph, time_budget: Optional[float] = DEFAULT_TIME_BUDGET):
        if graph.vertex_count > SOLVER_VERTEX_CAP:
            raise GraphTooLargeError(f"{graph.vertex_count} vertices exceeds the solver cap of {SOLVER_VERTEX_CAP}")
        self.graph = graph
        self.rows = graph.rows
        self.time_budget = time_budget
        self._best: List[int] = []
        self._target: Optional[int] = None
        self._deadline = None

    def _color_sort(self, candidates: int):
        rows = self.rows
        order, bounds = [], []
        uncolored = candidates
        color = 0
        while uncolored:
            color += 1
            available = uncolored
            while available:
                low = available & -available
                v = low.bit_length() - 1
                order.append(v)
                bounds.append(color)
                uncolored ^= low
                available &= ~rows[v]
                available &= ~low
        return order, bounds

    def _expand(self, clique: List[int], candidates: int):
        self._deadline.tick()
        order, bounds = self._color_sort(candidates)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(self._best):
                return
            v = order[i]
            clique.append(v)
            narrowed = candidates & self.rows[v]
            if narrowed:
                self._expand(clique, narrowed)
            elif len(clique) > len(self._best):
                self._best = sorted(clique)
                logger.debug(f"New incumbent of size {len(self._best)}")
                if self._target is not None and len(self._best) >= self._target:
                    raise _TargetReached()
            clique.pop()
            candidates &= ~(1 << v)

    def solve(self,
              initial: Optional[Sequence[int]] = None,
              upper_bound: Optional[int] = None,
              target: Optional[int] = None) -> SolveResult:
        """
        Find a maximum clique.

        Args:
            initial: A known clique used as the starting incumbent
            upper_bound: A proven bound on the clique number; reaching it ends the search
            target: Stop as soon as a clique of this size is found (result is then a
                lower bound unless it also meets upper_bound)

        Returns:
            SolveResult with the exact size, or size None if the budget ran out
        """
        n = self.graph.vertex_count
        self._best = sorted(initial) if initial else []
        if initial and not self.graph.is_clique(self._best):
            raise ValueError("Initial incumbent is not a clique")
        self._deadline = _Deadline(self.time_budget)
        stop_at = [b for b in (upper_bound, target) if b is not None]
        self._target = min(stop_at) if stop_at else None

        if n == 0:
            return SolveResult(0, [], 0, 0)
        if self._target is not None and len(self._best) >= self._target:
            exact = upper_bound is not None and len(self._best) >= upper_bound
            size = len(self._best) if exact or target is None else None
            return SolveResult(size if exact else (None if target is not None else size),
                               list(self._best), len(self._best), 0)
        try:
            self._expand([], self.graph.all_mask)
            finished = True
        except _TargetReached:
            finished = upper_bound is not None and len(self._best) >= upper_bound
        except BudgetExceededError:
            logger.warning(f"Clique search stopped by the time budget with incumbent {len(self._best)}")
            return SolveResult(None, list(self._best), len(self._best), self._deadline.ticks)

        best = list(self._best)
        size = len(best) if finished else None
        return SolveResult(size, best, len(best), self._deadline.ticks)


def max_clique(X: Graph,
               time_budget: Optional[float] = DEFAULT_TIME_BUDGET,
               initial: Optional[Sequence[int]] = None,
               upper_bound: Optional[int] = None) -> SolveResult:
    result = CliqueSolver(X, time_budget).solve(initial=initial, upper_bound=upper_bound)
    if result.witness and not X.is_clique(result.witness):
        raise AssertionError("Clique witness failed verification")
    return result


def find_clique_of_size(X: Graph, size: int,
                        time_budget: Optional[float] = DEFAULT_TIME_BUDGET) -> Optional[List[int]]:
    """A clique of the given size, or None if none exists (BudgetExceededError if undecided)."""
    result = CliqueSolver(X, time_budget).solve(target=size)
    if len(result.witness) >= size:
        return sorted(result.witness)[:size]
    if result.exact:
        return None
    raise BudgetExceededError(f"No clique of size {size} found within the budget",
                              partial=result.witness)


def max_independent_set(X: Graph,
                        time_budget: Optional[float] = DEFAULT_TIME_BUDGET,
                        initial: Optional[Sequence[int]] = None,
                        upper_bound: Optional[int] = None) -> SolveResult:
    result = max_clique(graph_complement(X), time_budget, initial, upper_bound)
    if result.witness and not X.is_independent(result.witness):
        raise AssertionError("Independent set witness failed verification")
    return result


def iter_cliques(X: Graph,
                 size: int,
                 through_vertex: Optional[int] = None,
                 time_budget: Optional[float] = None) -> Iterator[List[int]]:
    """
    Yield every clique of exactly the given size in lexicographic order.

    Args:
        X: Graph to search
        size: Clique size
        through_vertex: Only cliques containing this vertex
        time_budget: Seconds before BudgetExceededError
    """
    rows = X.rows
    deadline = _Deadline(time_budget)
    required = through_vertex

    def extend(clique: List[int], candidates: int, has_required: bool):
        need = size - len(clique)
        if need == 0:
            if has_required:
                yield list(clique)
            return
        while candidates:
            deadline.tick()
            if popcount(candidates) < need:
                return
            if not has_required and not (candidates >> required & 1):
                return
            if need > 1 and greedy_color_bound(rows, candidates) < need:
                return
            low = candidates & -candidates
            v = low.bit_length() - 1
            if not has_required and v > required:
                return
            higher = ~((low << 1) - 1)
            clique.append(v)
            yield from extend(clique, candidates & rows[v] & higher, has_required or v == required)
            clique.pop()
            candidates ^= low

    if size == 0:
        yield []
        return
    yield from extend([], X.all_mask, required is None)


def iter_transversals(rows: Sequence[int],
                      parts: Sequence[int],
                      required: Optional[int] = None,
                      time_budget: Optional[float] = None) -> Iterator[List[int]]:
    """
    Yield independent sets that take exactly one vertex from each part.

    When the parts are cliques and their number equals the independence
    number, these are exactly the maximum independent sets. Search picks the
    part with the fewest live candidates first and prunes any part left empty.

    Args:
        rows: Adjacency rows (a list or a lazy row provider)
        parts: Bitmasks of the clique parts, pairwise disjoint
        required: Only sets containing this vertex
        time_budget: Seconds before BudgetExceededError
    """
    deadline = _Deadline(time_budget)
    domains = list(parts)
    if required is not None:
        owner = [i for i, part in enumerate(domains) if part >> required & 1]
        if not owner:
            return
        domains[owner[0]] = 1 << required

    def extend(domains: List[int], chosen: List[int]):
        if not domains:
            yield sorted(chosen)
            return
        deadline.tick()
        i = min(range(len(domains)), key=lambda k: popcount(domains[k]))
        rest = domains[:i] + domains[i + 1:]
        for v in iter_bits(domains[i]):
            keep = ~rows[v]
            narrowed = [d & keep for d in rest]
            if 0 in narrowed:
                continue
            chosen.append(v)
            yield from extend(narrowed, chosen)
            chosen.pop()

    if any(d == 0 for d in domains):
        return
    yield from extend(domains, [])


def _collect(source: Iterator[List[int]], cap: int, what: str) -> List[List[int]]:
    collected = []
    try:
        for item in source:
            collected.append(item)
            if len(collected) > cap:
                raise BudgetExceededError(f"More than {cap} {what} (enumeration cap)", partial=collected[:cap])
    except BudgetExceededError as exc:
        if exc.partial is None:
            exc.partial = collected
        raise
    return collected


def enumerate_max_cliques(X: Graph,
                          omega: int,
                          through_vertex: Optional[int] = None,
                          cap: int = DEFAULT_ENUM_CAP,
                          time_budget: Optional[float] = None) -> List[List[int]]:
    return _collect(iter_cliques(X, omega, through_vertex, time_budget), cap, 'maximum cliques')


def enumerate_max_independent_sets(X: Graph,
                                   alpha: int,
                                   through_vertex: Optional[int] = None,
                                   cap: int = DEFAULT_ENUM_CAP,
                                   time_budget: Optional[float] = None,
                                   cover: Optional[Sequence[Sequence[int]]] = None) -> List[List[int]]:
    """
    All independent sets of size alpha, in lexicographic order.

    Args:
        X: Graph
        alpha: Independence number, computed beforehand
        through_vertex: Restrict to sets containing this vertex
        cap: Maximum number of sets before BudgetExceededError
        time_budget: Seconds before BudgetExceededError
        cover: Optional partition of the vertices into alpha cliques; enables
            the one-per-clique search

    Returns:
        Sorted list of sorted vertex lists
    """
    if cover is not None and len(cover) == alpha:
        parts = []
        for clique in cover:
            mask = 0
            for v in clique:
                mask |= 1 << v
            parts.append(mask)
        found = _collect(iter_transversals(X.rows, parts, through_vertex, time_budget), cap,
                         'maximum independent sets')
        return sorted(found)
    return _collect(iter_cliques(graph_complement(X), alpha, through_vertex, time_budget), cap,
                    'maximum independent sets')
