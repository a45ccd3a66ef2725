"""
Explicit intersecting sets larger than every point stabilizer.

Two families are built here: block-pattern sets in the affine group of
order 960 acting on the 20 lines of the plane over GF(4), and the sets
of Sym(2t) fixing at least t+1 of the first t+2 points, which refute EKR
for the action on ordered t-tuples.
"""
import itertools
import logging
import math
from typing import List, Literal, Optional, Sequence, Tuple, Union

from pydantic import BaseModel, Field

from src.config.settings import (M20_BLOCK_SHAPE, M20_DEGREE, M20_ORDER,
                                 M20_STABILIZER, M20_WITNESS_SIZE,
                                 SCHEMA_VERSION)
from .constructions import InducedTupleGroup, symmetric_group
from .ekr import is_intersecting_set, is_t_intersecting_set
from .exceptions import GroupError, VerificationError
from .group import BlockSystem, PermutationGroup, find_block_systems
from .permutation import Permutation, agreement_count, intersects, to_cycles

logger = logging.getLogger(__name__)

BlockPattern = Sequence[Tuple[int, int]]

# blocks 1->1, 2->2, 3->3, 4->5 (0-based below)
STANDARD_M20_PATTERN: Tuple[Tuple[int, int], ...] = ((0, 0), (1, 1), (2, 2), (3, 4))


class RefutationCertificate(BaseModel):
    """An intersecting set checked against the largest point stabilizer."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal['refutation'] = 'refutation'
    label: str = ''
    description: str
    degree: int
    order: int
    set_size: int
    max_stabilizer_size: int
    verified: bool
    intersecting_set: List[str] = Field(default_factory=list)
    failing_pair: Optional[List[str]] = None
    notes: List[str] = Field(default_factory=list)


class RepairVerdict(BaseModel):
    """EKR verdict for the internal product of the degree-20 group with Sym(n)."""

    schema_version: int = SCHEMA_VERSION
    kind: Literal['repair'] = 'repair'
    n: int
    alpha: int
    max_stabilizer: int
    ekr: Literal['yes', 'refuted-by-witness']
    conditional: bool
    notes: List[str] = Field(default_factory=list)


def pattern_from_text(text: str) -> Tuple[Tuple[int, int], ...]:
    """Parse "1:1,2:2,3:3,4:5" (1-based source:target blocks) into 0-based pairs."""
    pairs = []
    for item in text.replace(' ', '').split(','):
        if not item:
            continue
        try:
            source, target = (int(part) for part in item.split(':'))
        except ValueError:
            raise GroupError(f"Malformed block constraint {item!r}; expected source:target")
        if source < 1 or target < 1:
            raise GroupError(f"Block numbers are 1-based, got {item!r}")
        pairs.append((source - 1, target - 1))
    if len(pairs) != 4:
        raise GroupError(f"A block pattern has 4 constraints, got {len(pairs)}")
    return tuple(pairs)


def verify_m20_fixture(G: PermutationGroup) -> BlockSystem:
    """
    Accept a generator fixture for the order-960 group only if it passes every gate.

    Returns:
        The block system with 5 blocks of size 4
    """
    if G.degree != M20_DEGREE:
        raise VerificationError(f"Fixture acts on {G.degree} points, expected {M20_DEGREE}")
    if G.order != M20_ORDER:
        raise VerificationError(f"Fixture has order {G.order}, expected {M20_ORDER}")
    if not G.is_transitive():
        raise VerificationError("Fixture is not transitive")
    if G.max_stabilizer_size() != M20_STABILIZER:
        raise VerificationError(f"Fixture has max stabilizer {G.max_stabilizer_size()}, expected {M20_STABILIZER}")
    block_count, block_size = M20_BLOCK_SHAPE
    for system in find_block_systems(G):
        if system.block_count == block_count and system.block_size == block_size:
            logger.info(f"Fixture accepted: order {G.order}, blocks {system.describe()}")
            return system
    raise VerificationError(f"Fixture has no block system of {block_count} blocks of size {block_size}")


def block_pattern_witness(G: PermutationGroup,
                          blocks: BlockSystem,
                          pattern: BlockPattern = STANDARD_M20_PATTERN) -> List[Permutation]:
    """
    Elements moving the blocks in at least three of four prescribed ways.

    Args:
        G: Transitive group preserving the block system
        blocks: The block system
        pattern: Four (source block, target block) pairs, 0-based

    Returns:
        The elements in canonical order, checked intersecting
    """
    if not blocks.is_invariant_under(G):
        raise GroupError(f"Block system {blocks.describe()} is not preserved by {G.description}")
    if len(pattern) != 4:
        raise GroupError(f"A block pattern has 4 constraints, got {len(pattern)}")
    for source, target in pattern:
        if not (0 <= source < blocks.block_count and 0 <= target < blocks.block_count):
            raise GroupError(f"Block constraint {source + 1}:{target + 1} is out of range 1..{blocks.block_count}")

    selected = []
    for g in G.elements:
        moves = blocks.block_permutation(g)
        if sum(1 for source, target in pattern if moves[source] == target) >= 3:
            selected.append(g)
    if not is_intersecting_set(G, selected):
        raise VerificationError(f"Block pattern {_pattern_text(pattern)} does not give an intersecting set "
                                f"in {G.description}")
    logger.info(f"Block pattern {_pattern_text(pattern)}: {len(selected)} elements")
    return selected


def _pattern_text(pattern: BlockPattern) -> str:
    return ','.join(f"{s + 1}:{t + 1}" for s, t in pattern)


def t_intersecting_family(t: int) -> List[Permutation]:
    """
    Elements of Sym(2t) fixing at least t+1 of the points 0..t+1.

    Built from fixed-point patterns: either all t+2 points are fixed, or
    exactly one point i of them moves, into the last t-2 points.
    """
    if t < 2:
        raise GroupError(f"t must be at least 2, got {t}")
    n = 2 * t
    head = list(range(t + 2))
    tail = list(range(t + 2, n))
    family = []
    for arrangement in itertools.permutations(tail):
        images = list(range(n))
        for x, y in zip(tail, arrangement):
            images[x] = y
        family.append(Permutation(images))
    for i in head:
        free = [i] + tail
        for arrangement in itertools.permutations(free):
            if arrangement[0] == i:
                continue
            images = list(range(n))
            for x, y in zip(free, arrangement):
                images[x] = y
            family.append(Permutation(images))
    family.sort()
    if not is_t_intersecting_set(family, t):
        raise VerificationError(f"Family for t={t} is not {t}-intersecting")
    return family


def t_intersecting_scan(t: int) -> List[Permutation]:
    """Same family found by scanning every element of Sym(2t)."""
    if t < 2:
        raise GroupError(f"t must be at least 2, got {t}")
    found = []
    for images in itertools.permutations(range(2 * t)):
        if sum(1 for x in range(t + 2) if images[x] == x) >= t + 1:
            found.append(Permutation(images))
    return found


def t_intersecting_closed_form(t: int) -> int:
    return math.factorial(t - 2) * (t * t - 3)


def quadratic_bound(t: int) -> int:
    """(t^2 + t - 1)(t - 2)!, the size often quoted for this family."""
    return (t * t + t - 1) * math.factorial(t - 2)


def naive_family_count(t: int) -> int:
    """
    Count that lets the moving point return to itself.

    C(t+2, t+2)(t-2)! + C(t+2, t+1)(t-1)(t-2)! counts the all-fixed
    elements t+3 times and so exceeds the true size.
    """
    return math.comb(t + 2, t + 2) * math.factorial(t - 2) + math.comb(t + 2, t + 1) * math.factorial(t - 1)


def refute_ekr(G: Union[PermutationGroup, InducedTupleGroup],
               S: Sequence[Permutation],
               label: str = '',
               notes: Optional[List[str]] = None) -> RefutationCertificate:
    """
    Certify that S is intersecting and larger than every point stabilizer.

    For a tuple action, S holds base-group elements; they are compared
    through their induced permutations, built one element at a time.
    A failed check yields verified = False with the offending pair.
    """
    base = G.base if isinstance(G, InducedTupleGroup) else G
    members = sorted(set(S))
    for g in members:
        base.index_of(g)
    acting = [G.induced(g) for g in members] if isinstance(G, InducedTupleGroup) else members

    failing = None
    for i, a in enumerate(acting):
        for j in range(i + 1, len(acting)):
            if not intersects(a, acting[j]):
                failing = [to_cycles(members[i]), to_cycles(members[j])]
                break
        if failing:
            break

    if isinstance(G, InducedTupleGroup) and failing is None:
        # intersecting on tuples is t-intersecting on points
        for i, a in enumerate(members):
            for b in members[i + 1:]:
                if agreement_count(a, b) < G.t:
                    raise VerificationError(f"Induced action disagrees with {G.t}-intersection")

    max_stab = G.max_stabilizer_size()
    verified = failing is None and len(members) > max_stab
    certificate = RefutationCertificate(
        label=label,
        description=G.description,
        degree=G.degree,
        order=G.order,
        set_size=len(members),
        max_stabilizer_size=max_stab,
        verified=verified,
        intersecting_set=[to_cycles(g) for g in members],
        failing_pair=failing,
        notes=list(notes or []),
    )
    if verified:
        logger.info(f"{G.description}: intersecting set of size {len(members)} beats stabilizer {max_stab}")
    else:
        logger.info(f"{G.description}: no refutation (size {len(members)}, stabilizer {max_stab}, "
                    f"failing pair {failing})")
    return certificate


def m20_certificate(G: PermutationGroup,
                    pattern: BlockPattern = STANDARD_M20_PATTERN,
                    label: str = 'M20') -> RefutationCertificate:
    blocks = verify_m20_fixture(G)
    witness = block_pattern_witness(G, blocks, pattern)
    notes = [f"block pattern {_pattern_text(pattern)} on blocks {blocks.describe()}"]
    if len(witness) == M20_WITNESS_SIZE:
        notes.append(f"{M20_WITNESS_SIZE} is a lower bound for alpha; maximality is open")
    return refute_ekr(G, witness, label, notes)


def t_intersecting_certificate(t: int, label: str = '') -> RefutationCertificate:
    """Refute EKR for Sym(2t) acting on ordered t-tuples."""
    family = t_intersecting_family(t)
    scanned = t_intersecting_scan(t)
    if scanned != family:
        raise VerificationError(f"t={t}: constructed family ({len(family)}) differs from scan ({len(scanned)})")
    tuples = InducedTupleGroup(symmetric_group(2 * t), t)
    notes = [
        f"exhaustive scan of Sym({2 * t}): {len(scanned)} elements (authoritative)",
        f"closed form (t-2)!(t^2-3) = {t_intersecting_closed_form(t)}",
        f"quoted bound (t^2+t-1)(t-2)! = {quadratic_bound(t)} disagrees with the scan"
        if quadratic_bound(t) != len(scanned) else f"quoted bound (t^2+t-1)(t-2)! = {quadratic_bound(t)}",
        f"naive fixed-point count = {naive_family_count(t)}",
    ]
    return refute_ekr(tuples, family, label or f"Sym({2 * t}) on {t}-tuples", notes)


def internal_product_repair(n: int, alpha_lower: int = M20_WITNESS_SIZE) -> RepairVerdict:
    """
    Verdict for the degree-20 group times Sym(n) from the direct-product formula.

    alpha = max(alpha_20 * n!, (n-1)! * 960). With alpha_20 = 64 this equals
    the largest stabilizer exactly when n <= 15; for larger n the 64-set
    alone already refutes EKR.
    """
    if n < 1:
        raise GroupError(f"n must be at least 1, got {n}")
    sym_order = math.factorial(n)
    alpha = max(alpha_lower * sym_order, math.factorial(n - 1) * M20_ORDER)
    max_stab = max(M20_STABILIZER * sym_order, math.factorial(n - 1) * M20_ORDER)
    if alpha == max_stab:
        return RepairVerdict(n=n, alpha=alpha, max_stabilizer=max_stab, ekr='yes', conditional=True,
                             notes=[f"assumes alpha of the degree-20 factor is {alpha_lower}"])
    return RepairVerdict(n=n, alpha=alpha, max_stabilizer=max_stab, ekr='refuted-by-witness', conditional=False,
                         notes=[f"{alpha_lower} * {n}! exceeds every point stabilizer"])
