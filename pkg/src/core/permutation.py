"""
Permutations of {0, ..., n-1}.

Points are 0-based in memory and 1-based in every piece of text, so
"(1 2)" is the transposition of points 0 and 1. Composition applies the
right factor first: compose(p, q)(i) == p(q(i)).

Cycle structure, order, inverses, powers and conjugation come from
sympy.combinatorics. sympy multiplies left factor first, so compose(p, q)
is q.as_sympy * p.as_sympy there.
"""
import functools
import re
from typing import Iterable, List, Sequence, Tuple

from sympy.combinatorics import Permutation as SymPermutation

from .exceptions import PermutationError

_CYCLE_RE = re.compile(r'\(([^()]*)\)')


@functools.total_ordering
class Permutation:
    """
    Immutable bijection on {0, ..., degree-1} stored as an image tuple.

    Args:
        images: images[i] is the image of point i
    """

    __slots__ = ('_images', '_hash', '_sympy')

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if not images:
            raise PermutationError("Permutation degree must be at least 1")
        if sorted(images) != list(range(len(images))):
            raise PermutationError(f"Images {images} are not a bijection on {len(images)} points")
        self._images = images
        self._hash = hash(images)
        self._sympy = None

    @classmethod
    def _trusted(cls, images: Tuple[int, ...]) -> 'Permutation':
        # images already known to be a bijection
        p = cls.__new__(cls)
        p._images = images
        p._hash = hash(images)
        p._sympy = None
        return p

    @classmethod
    def from_sympy(cls, sym: SymPermutation) -> 'Permutation':
        return cls._trusted(tuple(sym.array_form))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> 'Permutation':
        """Build from 0-based cycles; points not listed are fixed."""
        if degree < 1:
            raise PermutationError("Permutation degree must be at least 1")
        parts = [list(cycle) for cycle in cycles]
        seen = set()
        for cycle in parts:
            for point in cycle:
                if not 0 <= point < degree:
                    raise PermutationError(f"Point {point + 1} is out of range for degree {degree}")
                if point in seen:
                    raise PermutationError(f"Point {point + 1} is repeated")
                seen.add(point)
        parts = [cycle for cycle in parts if len(cycle) > 1]
        if not parts:
            return identity(degree)
        return cls.from_sympy(SymPermutation(parts, size=degree))

    @property
    def images(self) -> Tuple[int, ...]:
        return self._images

    @property
    def degree(self) -> int:
        return len(self._images)

    @property
    def as_sympy(self) -> SymPermutation:
        if self._sympy is None:
            self._sympy = SymPermutation(list(self._images))
        return self._sympy

    def __call__(self, point: int) -> int:
        return self._images[point]

    def __len__(self):
        return len(self._images)

    def __iter__(self):
        return iter(self._images)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images == other._images

    def __lt__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._images < other._images

    def __mul__(self, other: 'Permutation') -> 'Permutation':
        return compose(self, other)

    def __repr__(self):
        return f"Permutation({to_cycles(self)}, degree={self.degree})"

    def __str__(self):
        return to_cycles(self)


def identity(n: int) -> Permutation:
    if n < 1:
        raise PermutationError("Permutation degree must be at least 1")
    return Permutation._trusted(tuple(range(n)))


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Return the permutation i -> p(q(i)) (q is applied first)."""
    if p.degree != q.degree:
        raise PermutationError(f"Degree mismatch: {p.degree} != {q.degree}")
    pi = p.images
    return Permutation._trusted(tuple(pi[x] for x in q.images))


def inverse(p: Permutation) -> Permutation:
    return Permutation.from_sympy(~p.as_sympy)


def power(p: Permutation, k: int) -> Permutation:
    """Return p**k; negative k uses the inverse."""
    return Permutation.from_sympy(p.as_sympy ** k)


def fixed_points(p: Permutation) -> List[int]:
    return [i for i, x in enumerate(p.images) if i == x]


def fixed_point_count(p: Permutation) -> int:
    return sum(1 for i, x in enumerate(p.images) if i == x)


def is_derangement(p: Permutation) -> bool:
    return all(i != x for i, x in enumerate(p.images))


def support(p: Permutation) -> List[int]:
    return sorted(p.as_sympy.support())


def agreement_count(p: Permutation, q: Permutation) -> int:
    """
    Number of points on which p and q agree.

    This equals fixed_point_count(compose(p, inverse(q))) without building
    the quotient.
    """
    if p.degree != q.degree:
        raise PermutationError(f"Degree mismatch: {p.degree} != {q.degree}")
    return sum(1 for a, b in zip(p.images, q.images) if a == b)


def intersects(p: Permutation, q: Permutation) -> bool:
    """True when p(i) == q(i) for some point i."""
    if p.degree != q.degree:
        raise PermutationError(f"Degree mismatch: {p.degree} != {q.degree}")
    return any(a == b for a, b in zip(p.images, q.images))


def cycles(p: Permutation, include_fixed: bool = False) -> List[Tuple[int, ...]]:
    """Canonical 0-based cycles: each starts at its minimum, sorted by minimum."""
    form = p.as_sympy.full_cyclic_form if include_fixed else p.as_sympy.cyclic_form
    return [tuple(cycle) for cycle in form]


def cycle_type(p: Permutation) -> List[int]:
    structure = p.as_sympy.cycle_structure
    return [length for length in sorted(structure) for _ in range(structure[length])]


def order(p: Permutation) -> int:
    return int(p.as_sympy.order())


def to_cycles(p: Permutation) -> str:
    """Canonical 1-based cycle text; the identity prints as "()"."""
    parts = cycles(p)
    if not parts:
        return '()'
    return ''.join('(' + ' '.join(str(x + 1) for x in c) + ')' for c in parts)


def parse_cycles(text: str, degree: int) -> Permutation:
    """
    Parse 1-based cycle notation such as "(1 2)(3 4 5)".

    Args:
        text: Whitespace separated parenthesized cycles; "()" is the identity
        degree: Number of points acted on

    Returns:
        The permutation applying the listed cycles, fixing everything else
    """
    if degree < 1:
        raise PermutationError("Permutation degree must be at least 1")
    stripped = text.strip()
    if not stripped:
        raise PermutationError("Empty cycle text")
    # everything outside the parentheses must be whitespace
    leftover = _CYCLE_RE.sub(' ', stripped)
    if leftover.strip():
        raise PermutationError(f"Malformed cycle text {text!r}")

    parsed = []
    for body in _CYCLE_RE.findall(stripped):
        tokens = body.replace(',', ' ').split()
        try:
            labels = [int(tok) for tok in tokens]
        except ValueError:
            raise PermutationError(f"Non-integer label in cycle ({body})")
        for label in labels:
            if not 1 <= label <= degree:
                raise PermutationError(f"Label {label} is out of range 1..{degree}")
        parsed.append([label - 1 for label in labels])
    return Permutation.from_cycles(parsed, degree)


def relabel(p: Permutation, mapping: Sequence[int]) -> Permutation:
    """
    Move p along a point relabeling.

    Returns r with r(mapping[i]) == mapping[p(i)], i.e. the conjugate of p
    by the relabeling.
    """
    if len(mapping) != p.degree or sorted(mapping) != list(range(p.degree)):
        raise PermutationError("Relabeling must be a bijection of the same degree")
    # sympy's p ^ h is ~h * p * h, which is the conjugate taken here
    return Permutation.from_sympy(p.as_sympy ^ SymPermutation(list(mapping)))
