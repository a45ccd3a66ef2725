"""
EKR and strict-EKR verdicts for permutation groups.

A group with a clique C in its derangement graph of size |G|/|G_x| is
settled without search: the translates C*s, s in G_x, split G into
|G_x| cliques, so no intersecting set can beat the stabilizer and every
maximum one takes a single element from each translate.
"""
import logging
from typing import List, Literal, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from src.config.settings import (DEFAULT_ENUM_CAP, DEFAULT_TIME_BUDGET,
                                 INTERSECTION_CHECK_CAP,
                                 INTERSECTION_CHECK_ORDER, SCHEMA_VERSION)
from .derangement_graph import (DerangementRows, Graph, derangement_graph,
                                graph_complement)
from .exceptions import BudgetExceededError, GroupError, VerificationError
from .group import PermutationGroup
from .permutation import (Permutation, agreement_count, compose, cycle_type,
                          intersects, inverse, order, to_cycles)
from .solver import (SOLVER_VERTEX_CAP, enumerate_max_cliques,
                     enumerate_max_independent_sets, find_clique_of_size,
                     iter_cliques, iter_transversals, max_clique,
                     max_independent_set)

logger = logging.getLogger(__name__)

EkrVerdict = Literal['yes', 'no', 'refuted-by-witness', 'unknown']
StrictVerdict = Literal['yes', 'no', 'not-applicable', 'unknown']


class CliqueCocliqueResult(BaseModel):
    product: int
    group_order: int
    tight: bool
    intersection_verified: Optional[bool] = None


class EkrWitnesses(BaseModel):
    max_independent_set: List[str] = Field(default_factory=list)
    max_clique: List[str] = Field(default_factory=list)
    refuting_set: List[str] = Field(default_factory=list)
    non_coset_set: List[str] = Field(default_factory=list)


class EkrReport(BaseModel):
    """One JSON-lines record per analyzed group; field order is the wire order."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal['ekr'] = 'ekr'
    label: str = ''
    description: str
    degree: int
    order: int
    transitive: bool
    max_stabilizer: int
    alpha: Optional[int] = None
    alpha_lower_bound: int
    omega: int
    omega_exact: bool
    ekr: EkrVerdict
    strict_ekr: StrictVerdict
    method: Literal['clique-cover', 'branch-and-bound', 'none']
    identity_maxima_checked: int = 0
    clique_coclique: CliqueCocliqueResult
    witnesses: EkrWitnesses = Field(default_factory=EkrWitnesses)
    notes: List[str] = Field(default_factory=list)


def _cycle_texts(elements: Sequence[Permutation]) -> List[str]:
    return [to_cycles(g) for g in sorted(elements)]


def is_intersecting_set(G: PermutationGroup, S: Sequence[Permutation]) -> bool:
    """True when every two elements of S agree on some point."""
    for g in S:
        G.index_of(g)
    members = list(S)
    return all(intersects(a, b) for i, a in enumerate(members) for b in members[i + 1:])


def is_t_intersecting_set(S: Sequence[Permutation], t: int) -> bool:
    """True when every two distinct elements of S agree on at least t points."""
    members = list(S)
    return all(agreement_count(a, b) >= t for i, a in enumerate(members) for b in members[i + 1:])


def stabilizer_coset_of(G: PermutationGroup, S: Sequence[Permutation]) -> Optional[Tuple[int, int]]:
    """
    Points (x, y) with S == {g in G : g(x) = y}, or None.

    Only stabilizers of maximum size are considered.
    """
    members = set(S)
    if not members:
        return None
    sizes = G.stabilizer_sizes()
    best = max(sizes)
    if len(members) != best:
        return None
    first = min(members)
    for x in range(G.degree):
        if sizes[x] != best:
            continue
        y = first(x)
        if all(g(x) == y for g in members):
            # same size and contained in the coset, so equal
            return x, y
    return None


def cyclic_alpha_prediction(sigma: Permutation) -> int:
    """|<sigma>| divided by the length of the shortest cycle of sigma (fixed points count)."""
    return order(sigma) // min(cycle_type(sigma))


def translation_lemma_holds(gamma: Graph, G: PermutationGroup, S: Sequence[int], g: Permutation) -> bool:
    """For an independent vertex set S, S * g^-1 is independent of the same size."""
    g_inv = inverse(g)
    moved = {G.index[compose(G.elements[v], g_inv)] for v in S}
    return len(moved) == len(set(S)) and gamma.is_independent(sorted(moved))


def _semiregular_cyclic_clique(G: PermutationGroup, size: int) -> Optional[List[Permutation]]:
    # an element whose cycles all have length `size` generates a clique of that size
    if size == 1:
        return [G.identity]
    if G.degree % size:
        return None
    wanted = [size] * (G.degree // size)
    for g in G.elements:
        if cycle_type(g) == wanted:
            powers = [G.identity]
            for _ in range(size - 1):
                powers.append(compose(g, powers[-1]))
            return powers
    return None


def find_cover_clique(G: PermutationGroup,
                      size: int,
                      gamma: Optional[Graph] = None,
                      time_budget: Optional[float] = DEFAULT_TIME_BUDGET) -> Optional[List[Permutation]]:
    """
    A clique of the derangement graph with the given size, or None if none was found.

    Semiregular cyclic subgroups are tried first, then the clique solver
    when the group is small enough to build the graph.
    """
    clique = _semiregular_cyclic_clique(G, size)
    if clique is not None:
        logger.debug(f"{G.description}: cyclic clique of size {size} from {to_cycles(clique[-1])}")
        return clique
    if gamma is None:
        if G.order > SOLVER_VERTEX_CAP:
            return None
        gamma = derangement_graph(G)
    try:
        found = find_clique_of_size(gamma, size, time_budget)
    except BudgetExceededError:
        logger.warning(f"{G.description}: no clique of size {size} found within the budget")
        return None
    if found is None:
        return None
    return [G.elements[i] for i in found]


def find_sharply_transitive_clique(G: PermutationGroup,
                                   time_budget: Optional[float] = DEFAULT_TIME_BUDGET) -> Optional[List[Permutation]]:
    """
    A clique of size degree in the derangement graph (a sharply transitive set).

    None means none was found within the budget, not that none exists.
    """
    if not G.is_transitive():
        raise GroupError(f"{G.description} is not transitive")
    clique = find_cover_clique(G, G.degree, time_budget=time_budget)
    if clique is None:
        logger.info(f"{G.description}: no sharply transitive set found")
    return clique


def clique_cover(G: PermutationGroup, clique: Sequence[Permutation]) -> List[List[int]]:
    """
    Right translates C*s of a clique C over a maximum stabilizer G_x, as index lists.

    Raises VerificationError unless they partition G into cliques.
    """
    members = list(clique)
    if any(intersects(a, b) for i, a in enumerate(members) for b in members[i + 1:]):
        raise VerificationError("Cover seed is not a clique of the derangement graph")
    stab = G.stabilizer(G.max_stabilizer_point())
    if len(members) * len(stab) != G.order:
        raise VerificationError(f"Clique of size {len(members)} cannot cover {G.description} "
                                f"with {len(stab)} translates")
    parts = [sorted(G.index[compose(c, s)] for c in members) for s in stab]
    covered = set()
    for part in parts:
        covered.update(part)
    if len(covered) != G.order:
        raise VerificationError(f"Translates of the clique overlap in {G.description}")
    return sorted(parts)


def _mask(vertices: Sequence[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def clique_coclique_check(G: PermutationGroup,
                          alpha: int,
                          omega: int,
                          exact: bool = True,
                          gamma: Optional[Graph] = None,
                          cover: Optional[Sequence[Sequence[int]]] = None,
                          enum_cap: int = INTERSECTION_CHECK_CAP,
                          time_budget: Optional[float] = DEFAULT_TIME_BUDGET) -> CliqueCocliqueResult:
    """
    Check omega * alpha <= |G|, and in the tight case that maxima meet.

    Args:
        G: The group
        alpha: Independence number (or a lower bound when exact is False)
        omega: Clique number (or a lower bound when exact is False)
        exact: Whether both numbers are exact; tightness needs exact values
        gamma: Derangement graph if already built
        cover: Clique cover of gamma, speeds up enumerating independent sets
        enum_cap: Per-side cap on enumerated maxima; over it the check is skipped
        time_budget: Seconds for the enumerations
    """
    product = alpha * omega
    if product > G.order:
        raise VerificationError(f"{G.description}: omega * alpha = {product} exceeds |G| = {G.order}")
    tight = exact and product == G.order
    result = CliqueCocliqueResult(product=product, group_order=G.order, tight=tight)
    if not tight:
        return result

    if gamma is None:
        if G.order > INTERSECTION_CHECK_ORDER:
            return result
        gamma = derangement_graph(G)
    try:
        independents = enumerate_max_independent_sets(gamma, alpha, cap=enum_cap,
                                                      time_budget=time_budget, cover=cover)
        cliques = enumerate_max_cliques(gamma, omega, cap=enum_cap, time_budget=time_budget)
    except BudgetExceededError as exc:
        logger.info(f"{G.description}: maxima intersection check skipped ({exc})")
        return result
    clique_masks = [_mask(c) for c in cliques]
    result.intersection_verified = all(_mask(s) & c for s in independents for c in clique_masks)
    if not result.intersection_verified:
        raise VerificationError(f"{G.description}: a maximum clique misses a maximum independent set")
    return result


class EkrAnalyzer:
    """
    Decide the EKR and strict-EKR properties of a group.

    Args:
        time_budget: Seconds per solve
        enum_cap: Maximum identity-containing maxima examined by the strict check
        decide_strict: Whether to run the strict check at all
    """

    def __init__(self,
                 time_budget: Optional[float] = DEFAULT_TIME_BUDGET,
                 enum_cap: int = DEFAULT_ENUM_CAP,
                 decide_strict: bool = True):
        self.time_budget = time_budget
        self.enum_cap = enum_cap
        self.decide_strict = decide_strict

    def analyze(self, G: PermutationGroup, label: str = '') -> EkrReport:
        order_ = G.order
        max_stab = G.max_stabilizer_size()
        stab = G.stabilizer(G.max_stabilizer_point())
        stab_idx = G.indices_of(stab)
        notes: List[str] = []
        logger.info(f"Analyzing {label or G.description}: order {order_}, max stabilizer {max_stab}")

        gamma = None
        clique = _semiregular_cyclic_clique(G, order_ // max_stab)
        if clique is None and order_ <= SOLVER_VERTEX_CAP:
            gamma = derangement_graph(G)
            clique = find_cover_clique(G, order_ // max_stab, gamma, self.time_budget)

        cover = None
        alpha_witness: List[int] = []
        omega_witness: List[int] = []
        if clique is not None:
            cover = clique_cover(G, clique)
            method = 'clique-cover'
            alpha, alpha_lower, alpha_witness = max_stab, max_stab, stab_idx
            omega, omega_exact = len(clique), True
            omega_witness = G.indices_of(clique)
            notes.append(f"clique cover: {len(cover)} translates of a clique of size {len(clique)}")
        elif gamma is not None:
            method = 'branch-and-bound'
            omega_result = max_clique(gamma, self.time_budget)
            omega, omega_exact = omega_result.lower_bound, omega_result.exact
            omega_witness = omega_result.witness
            # any clique bounds alpha from above
            upper = order_ // max(1, omega)
            alpha_result = max_independent_set(gamma, self.time_budget, initial=stab_idx, upper_bound=upper)
            alpha, alpha_lower, alpha_witness = alpha_result.size, alpha_result.lower_bound, alpha_result.witness
            if not omega_exact:
                notes.append(f"omega not computed within budget; best clique {omega}")
            if alpha is None:
                notes.append(f"alpha not computed within budget; best independent set {alpha_lower}")
        else:
            method = 'none'
            alpha, alpha_lower, alpha_witness = None, max_stab, stab_idx
            omega, omega_exact = 1, False
            omega_witness = [0]
            notes.append(f"no clique cover found and order {order_} exceeds the solver cap {SOLVER_VERTEX_CAP}")

        witness_elements = [G.elements[i] for i in alpha_witness]
        if not is_intersecting_set(G, witness_elements):
            raise VerificationError(f"{G.description}: independent set witness is not intersecting")
        witnesses = EkrWitnesses(
            max_independent_set=_cycle_texts(witness_elements),
            max_clique=_cycle_texts([G.elements[i] for i in omega_witness]),
        )

        if alpha is not None:
            ekr = 'yes' if alpha == max_stab else 'no'
        elif alpha_lower > max_stab:
            ekr = 'refuted-by-witness'
        else:
            ekr = 'unknown'
        if ekr in ('no', 'refuted-by-witness'):
            witnesses.refuting_set = witnesses.max_independent_set

        clique_coclique = clique_coclique_check(
            G, alpha if alpha is not None else alpha_lower, omega,
            exact=alpha is not None and omega_exact, gamma=gamma, cover=cover,
            time_budget=self.time_budget)
        if clique_coclique.tight and clique_coclique.intersection_verified is None:
            notes.append("tight bound: maxima intersection check skipped")

        strict, checked = self._strict_verdict(G, ekr, gamma, cover, alpha, witnesses, notes)

        report = EkrReport(
            label=label,
            description=G.description,
            degree=G.degree,
            order=order_,
            transitive=G.is_transitive(),
            max_stabilizer=max_stab,
            alpha=alpha,
            alpha_lower_bound=alpha_lower,
            omega=omega,
            omega_exact=omega_exact,
            ekr=ekr,
            strict_ekr=strict,
            method=method,
            identity_maxima_checked=checked,
            clique_coclique=clique_coclique,
            witnesses=witnesses,
            notes=notes,
        )
        logger.info(f"{label or G.description}: ekr={ekr}, strict={strict}, alpha={alpha}, omega={omega}")
        return report

    def _strict_verdict(self, G, ekr, gamma, cover, alpha, witnesses, notes):
        if ekr in ('no', 'refuted-by-witness'):
            return 'not-applicable', 0
        if ekr == 'unknown':
            return 'unknown', 0
        if not self.decide_strict:
            notes.append("strict check not requested")
            return 'unknown', 0

        if cover is not None:
            rows = gamma.rows if gamma is not None else DerangementRows(G)
            source = iter_transversals(rows, [_mask(part) for part in cover], required=0,
                                       time_budget=self.time_budget)
        else:
            source = iter_cliques(graph_complement(gamma), alpha, through_vertex=0,
                                  time_budget=self.time_budget)

        checked = 0
        try:
            for found in source:
                if checked >= self.enum_cap:
                    raise BudgetExceededError(f"more than {self.enum_cap} identity-containing maxima")
                checked += 1
                elements = [G.elements[i] for i in found]
                if stabilizer_coset_of(G, elements) is None:
                    if not is_intersecting_set(G, elements):
                        raise VerificationError(f"{G.description}: enumerated set is not intersecting")
                    witnesses.non_coset_set = _cycle_texts(elements)
                    return 'no', checked
        except BudgetExceededError as exc:
            notes.append(f"strict check incomplete ({exc}): {checked} identity-containing maxima "
                         f"examined, all point stabilizers")
            return 'unknown', checked
        return 'yes', checked


def check_ekr(G: PermutationGroup,
              label: str = '',
              decide_strict: bool = True,
              time_budget: Optional[float] = DEFAULT_TIME_BUDGET,
              enum_cap: int = DEFAULT_ENUM_CAP) -> EkrReport:
    return EkrAnalyzer(time_budget, enum_cap, decide_strict).analyze(G, label)
