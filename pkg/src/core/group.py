"""
Enumerated permutation groups.

sympy.combinatorics does the group theory (Schreier-Sims order, element
generation, orbits, stabilizers, minimal blocks); PermutationGroup keeps
the enumerated elements in canonical order so that they can serve as
graph vertices.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy.combinatorics import PermutationGroup as SymPermutationGroup

from src.config.settings import DEFAULT_ELEMENT_CAP
from .exceptions import GroupError, GroupTooLargeError, PermutationError
from .permutation import (Permutation, compose, identity, inverse,
                          is_derangement, to_cycles)

logger = logging.getLogger(__name__)


class PermutationGroup:
    """
    A finite permutation group with every element enumerated.

    Elements are kept in canonical order (lexicographic on image tuples),
    so the identity is always element 0 and indices are stable across runs.

    Args:
        degree: Number of points acted on
        generators: Generating permutations
        elements: All group elements, in any order
        description: Human readable name used in reports
    """

    def __init__(self,
                 degree: int,
                 generators: Sequence[Permutation],
                 elements: Iterable[Permutation],
                 description: str = '',
                 sympy_group: Optional[SymPermutationGroup] = None):
        self.degree = degree
        self.generators = tuple(generators)
        self.elements = tuple(sorted(set(elements)))
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.description = description or f"group of order {len(self.elements)} on {degree} points"
        self._stabilizer_sizes = None
        self._sympy = sympy_group

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, g):
        return g in self.index

    def __repr__(self):
        return f"PermutationGroup({self.description!r}, degree={self.degree}, order={self.order})"

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    @property
    def as_sympy(self) -> SymPermutationGroup:
        if self._sympy is None:
            gens = self.generators or (identity(self.degree),)
            self._sympy = SymPermutationGroup([g.as_sympy for g in gens])
        return self._sympy

    def _from_sympy(self, subgroup: SymPermutationGroup) -> List[Permutation]:
        return sorted(Permutation._trusted(tuple(af)) for af in subgroup.generate(af=True))

    def index_of(self, g: Permutation) -> int:
        try:
            return self.index[g]
        except KeyError:
            raise GroupError(f"{to_cycles(g)} is not an element of {self.description}")

    def indices_of(self, elements: Iterable[Permutation]) -> List[int]:
        return sorted(self.index_of(g) for g in elements)

    def _check_point(self, x: int):
        if not 0 <= x < self.degree:
            raise GroupError(f"Point {x} is out of range for degree {self.degree}")

    def orbit(self, x: int) -> List[int]:
        self._check_point(x)
        return sorted(self.as_sympy.orbit(x))

    def orbits(self) -> List[List[int]]:
        """Orbits sorted by their minimum point."""
        return sorted(sorted(orb) for orb in self.as_sympy.orbits())

    def is_transitive(self) -> bool:
        return self.degree == 1 or bool(self.as_sympy.is_transitive())

    def stabilizer(self, x: int) -> List[Permutation]:
        self._check_point(x)
        return self._from_sympy(self.as_sympy.stabilizer(x))

    def stabilizer_of_points(self, points: Sequence[int]) -> List[Permutation]:
        """Pointwise stabilizer of the given points."""
        for x in points:
            self._check_point(x)
        if not points:
            return list(self.elements)
        return self._from_sympy(self.as_sympy.pointwise_stabilizer(list(points)))

    def stabilizer_sizes(self) -> List[int]:
        if self._stabilizer_sizes is None:
            # orbit-stabilizer: |G_x| * |x^G| == |G|
            sizes = [0] * self.degree
            for orb in self.orbits():
                for x in orb:
                    sizes[x] = self.order // len(orb)
            self._stabilizer_sizes = sizes
        return list(self._stabilizer_sizes)

    def max_stabilizer_size(self) -> int:
        return max(self.stabilizer_sizes())

    def max_stabilizer_point(self) -> int:
        """Lowest point whose stabilizer has maximum size."""
        sizes = self.stabilizer_sizes()
        return sizes.index(max(sizes))

    def max_stabilizers(self) -> Dict[int, List[Permutation]]:
        """Stabilizers of maximum size, keyed by point."""
        sizes = self.stabilizer_sizes()
        best = max(sizes)
        return {x: self.stabilizer(x) for x in range(self.degree) if sizes[x] == best}

    def derangement_set(self) -> List[Permutation]:
        return [g for g in self.elements if is_derangement(g)]

    def is_subgroup_set(self, elements: Iterable[Permutation]) -> bool:
        """True when the given elements of this group form a subgroup."""
        subset = set(elements)
        if not subset or self.identity not in subset:
            return False
        inverses = [inverse(b) for b in subset]
        return all(compose(a, b_inv) in subset for a in subset for b_inv in inverses)

    def same_elements(self, other: 'PermutationGroup') -> bool:
        return self.degree == other.degree and self.elements == other.elements


def orbit(G: PermutationGroup, x: int) -> List[int]:
    return G.orbit(x)


def stabilizer(G: PermutationGroup, x: int) -> List[Permutation]:
    return G.stabilizer(x)


def max_stabilizer_size(G: PermutationGroup) -> int:
    return G.max_stabilizer_size()


def derangement_set(G: PermutationGroup) -> List[Permutation]:
    return G.derangement_set()


def generate(degree: int,
             generators: Sequence[Permutation],
             element_cap: Optional[int] = None,
             description: str = '') -> PermutationGroup:
    """
    Enumerate the group generated by the given permutations.

    The order comes from Schreier-Sims first, so a group over the cap is
    rejected before any element is listed.

    Args:
        degree: Number of points
        generators: Generating permutations, all of the given degree
        element_cap: Maximum number of elements before giving up
        description: Name carried into reports

    Returns:
        The enumerated PermutationGroup
    """
    cap = DEFAULT_ELEMENT_CAP if element_cap is None else element_cap
    for g in generators:
        if g.degree != degree:
            raise PermutationError(f"Generator {to_cycles(g)} has degree {g.degree}, expected {degree}")

    # identity generators add nothing
    start = identity(degree)
    gens = []
    for g in generators:
        if g != start and g not in gens:
            gens.append(g)

    sym = SymPermutationGroup([g.as_sympy for g in gens or [start]])
    group_order = int(sym.order())
    if group_order > cap:
        raise GroupTooLargeError(cap)
    elements = [Permutation._trusted(tuple(af)) for af in sym.generate(af=True)]

    logger.debug(f"Generated {description or 'group'}: order {group_order} on {degree} points")
    return PermutationGroup(degree, gens, elements, description, sympy_group=sym)


@dataclass(frozen=True)
class BlockSystem:
    """A partition of the points into equal-size blocks, sorted by minimum."""

    blocks: Tuple[Tuple[int, ...], ...]
    block_of: Tuple[int, ...]

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]]) -> 'BlockSystem':
        ordered = sorted(tuple(sorted(b)) for b in blocks)
        degree = sum(len(b) for b in ordered)
        block_of = [-1] * degree
        for i, block in enumerate(ordered):
            for x in block:
                if not 0 <= x < degree or block_of[x] != -1:
                    raise GroupError(f"Blocks do not partition 0..{degree - 1}")
                block_of[x] = i
        if len({len(b) for b in ordered}) > 1:
            raise GroupError("Blocks must all have the same size")
        return cls(tuple(ordered), tuple(block_of))

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    @property
    def block_size(self) -> int:
        return len(self.blocks[0])

    def image_block(self, g: Permutation, b: int) -> Optional[int]:
        """Index of the block g maps block b onto, or None if g splits it."""
        targets = {self.block_of[g(x)] for x in self.blocks[b]}
        return targets.pop() if len(targets) == 1 else None

    def block_permutation(self, g: Permutation) -> Tuple[int, ...]:
        images = tuple(self.image_block(g, b) for b in range(self.block_count))
        if None in images:
            raise GroupError(f"{to_cycles(g)} does not preserve the block system")
        return images

    def is_invariant_under(self, G: PermutationGroup) -> bool:
        if len(self.block_of) != G.degree:
            return False
        movers = G.generators or G.elements
        return all(self.image_block(g, b) is not None
                   for g in movers for b in range(self.block_count))

    def describe(self) -> str:
        return ' | '.join('{' + ' '.join(str(x + 1) for x in b) + '}' for b in self.blocks)


def _smallest_block_system(G: PermutationGroup, a: int, b: int) -> BlockSystem:
    # minimal_block labels every point with the representative of its block
    classes: Dict[int, List[int]] = {}
    for x, representative in enumerate(G.as_sympy.minimal_block([a, b])):
        classes.setdefault(representative, []).append(x)
    return BlockSystem.from_blocks(classes.values())


def find_block_systems(G: PermutationGroup) -> List[BlockSystem]:
    """
    All minimal nontrivial block systems of a transitive group.

    Returns:
        Block systems ordered by block size then blocks; empty when G is primitive
    """
    if not G.is_transitive():
        raise GroupError(f"{G.description} is not transitive")
    found = {}
    for y in range(1, G.degree):
        system = _smallest_block_system(G, 0, y)
        if system.block_count > 1:
            found[system.blocks] = system

    # keep the systems whose block through 0 contains no smaller one
    first_blocks = {key: set(s.blocks[s.block_of[0]]) for key, s in found.items()}
    minimal = [
        s for key, s in found.items()
        if not any(other < first_blocks[key] for k, other in first_blocks.items() if k != key)
    ]
    minimal.sort(key=lambda s: (s.block_size, s.blocks))
    logger.debug(f"{G.description}: {len(minimal)} minimal block system(s)")
    return minimal


@dataclass
class FrobeniusClassification:
    is_frobenius: bool
    kernel: Optional[List[Permutation]] = None
    complement_order: Optional[int] = None


def classify_frobenius(G: PermutationGroup) -> FrobeniusClassification:
    """
    Decide whether a transitive group acts as a Frobenius group.

    No non-identity element may fix two points and some non-identity element
    must fix one. The kernel is then the derangements plus the identity.
    """
    if not G.is_transitive():
        raise GroupError(f"{G.description} is not transitive")

    fixes_one = False
    for g in G.elements[1:]:
        fixed = sum(1 for i, x in enumerate(g.images) if i == x)
        if fixed >= 2:
            return FrobeniusClassification(False)
        if fixed == 1:
            fixes_one = True
    if not fixes_one:
        return FrobeniusClassification(False)

    kernel = [G.identity] + G.derangement_set()
    if len(kernel) != G.degree or not G.is_subgroup_set(kernel):
        # cannot happen for a genuine Frobenius action
        raise GroupError(f"{G.description}: derangements plus identity do not form a kernel of order {G.degree}")
    complement_order = G.max_stabilizer_size()
    if complement_order * G.degree != G.order or (G.degree - 1) % complement_order:
        raise GroupError(f"{G.description}: complement order {complement_order} is inconsistent")
    return FrobeniusClassification(True, sorted(kernel), complement_order)
