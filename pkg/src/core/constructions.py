"""
Constructors for the group families studied here, with the point encodings
each product uses:

- external product: mixed radix over factor points, factor 1 most significant
- internal product: factor i acts on its own window of consecutive points
- wreath product G wr H: point (x, j) is j * m + x, m = degree of G
- tuple action: injective t-tuples in lexicographic order
"""
import itertools
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

from sympy.combinatorics import PermutationGroup as SymPermutationGroup

from .exceptions import GroupError, VerificationError
from .group import PermutationGroup, generate
from .permutation import Permutation, identity, order, to_cycles

logger = logging.getLogger(__name__)


def symmetric_group(n: int, element_cap: Optional[int] = None) -> PermutationGroup:
    if n < 1:
        raise GroupError("Sym(n) needs n >= 1")
    gens = []
    if n >= 2:
        gens.append(Permutation.from_cycles([(0, 1)], n))
    if n >= 3:
        gens.append(Permutation.from_cycles([tuple(range(n))], n))
    return generate(n, gens, element_cap, description=f"Sym({n})")


def cyclic_group(p: Permutation) -> PermutationGroup:
    G = generate(p.degree, [p], description=f"<{to_cycles(p)}>")
    if G.order != order(p):
        raise VerificationError(f"Cyclic group of {to_cycles(p)} has order {G.order}, expected {order(p)}")
    return G


def dihedral_group(n: int) -> PermutationGroup:
    """Symmetries of the regular n-gon: the rotation and the reflection fixing vertex 0."""
    if n < 3:
        raise GroupError("Dihedral group needs n >= 3")
    rotation = Permutation([(i + 1) % n for i in range(n)])
    reflection = Permutation([(-i) % n for i in range(n)])
    return generate(n, [rotation, reflection], description=f"D({n})")


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, math.isqrt(p) + 1))


def _primitive_root(p: int) -> int:
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)):
            return g
    return 1


def affine_group(p: int) -> PermutationGroup:
    """AGL(1, p) for a prime p, generated by x -> x + 1 and x -> g x."""
    if not _is_prime(p):
        raise GroupError(f"affine_group needs a prime, got {p}")
    shift = Permutation([(x + 1) % p for x in range(p)])
    gens = [shift]
    if p > 2:
        g = _primitive_root(p)
        gens.append(Permutation([(g * x) % p for x in range(p)]))
    return generate(p, gens, description=f"AGL(1,{p})")


def _check_factors(groups: Sequence[PermutationGroup]):
    if not groups:
        raise GroupError("A product needs at least one factor")


def _mixed_radix(digits: Sequence[int], radices: Sequence[int]) -> int:
    value = 0
    for d, r in zip(digits, radices):
        value = value * r + d
    return value


def _mixed_digits(value: int, radices: Sequence[int]) -> Tuple[int, ...]:
    digits = []
    for r in reversed(radices):
        value, d = divmod(value, r)
        digits.append(d)
    return tuple(reversed(digits))


def encode_external_point(coords: Sequence[int], degrees: Sequence[int]) -> int:
    return _mixed_radix(coords, degrees)


def decode_external_point(point: int, degrees: Sequence[int]) -> Tuple[int, ...]:
    return _mixed_digits(point, degrees)


def external_direct_product(groups: Sequence[PermutationGroup],
                            element_cap: Optional[int] = None) -> PermutationGroup:
    """
    G_1 x ... x G_k acting componentwise on tuples of points.

    Args:
        groups: The factors, at least one
        element_cap: Enumeration cap passed to generate

    Returns:
        The product acting on prod(deg_i) mixed-radix encoded points
    """
    _check_factors(groups)
    degrees = [G.degree for G in groups]
    degree = math.prod(degrees)
    points = [decode_external_point(p, degrees) for p in range(degree)]

    gens = []
    for i, G in enumerate(groups):
        for g in G.generators:
            images = []
            for coords in points:
                moved = list(coords)
                moved[i] = g(coords[i])
                images.append(encode_external_point(moved, degrees))
            gens.append(Permutation(images))

    description = ' x '.join(G.description for G in groups)
    product = generate(degree, gens, element_cap, description=description)
    expected = math.prod(G.order for G in groups)
    if product.order != expected:
        raise VerificationError(f"{description}: order {product.order}, expected {expected}")
    return product


def external_components(product_element: Permutation,
                        groups: Sequence[PermutationGroup]) -> Tuple[Permutation, ...]:
    """Split an element of an external product back into its factors."""
    degrees = [G.degree for G in groups]
    result = []
    for i, n_i in enumerate(degrees):
        images = []
        for x in range(n_i):
            coords = [0] * len(degrees)
            coords[i] = x
            image = product_element(encode_external_point(coords, degrees))
            images.append(decode_external_point(image, degrees)[i])
        result.append(Permutation(images))
    return tuple(result)


def internal_offsets(groups: Sequence[PermutationGroup]) -> List[int]:
    return list(itertools.accumulate([0] + [G.degree for G in groups[:-1]]))


def internal_direct_product(groups: Sequence[PermutationGroup],
                            element_cap: Optional[int] = None) -> PermutationGroup:
    """G_1 . G_2 ... G_k with factor i acting on its window of points."""
    _check_factors(groups)
    degree = sum(G.degree for G in groups)
    offsets = internal_offsets(groups)

    gens = []
    for G, offset in zip(groups, offsets):
        for g in G.generators:
            images = list(range(degree))
            for x in range(G.degree):
                images[offset + x] = offset + g(x)
            gens.append(Permutation(images))

    description = ' . '.join(G.description for G in groups)
    product = generate(degree, gens, element_cap, description=description)
    expected = math.prod(G.order for G in groups)
    if product.order != expected:
        raise VerificationError(f"{description}: order {product.order}, expected {expected}")
    return product


def internal_components(product_element: Permutation,
                        groups: Sequence[PermutationGroup]) -> Tuple[Permutation, ...]:
    result = []
    for G, offset in zip(groups, internal_offsets(groups)):
        result.append(Permutation([product_element(offset + x) - offset for x in range(G.degree)]))
    return tuple(result)


def _check_partition(parts: Sequence[int]):
    if not parts or any(p < 1 for p in parts):
        raise GroupError(f"Invalid partition {list(parts)}: parts must be positive")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise GroupError(f"Invalid partition {list(parts)}: parts must be weakly decreasing")


def young_subgroup(parts: Sequence[int], element_cap: Optional[int] = None) -> PermutationGroup:
    _check_partition(parts)
    factors = [symmetric_group(p, element_cap) for p in parts]
    G = internal_direct_product(factors, element_cap)
    G.description = f"Sym([{','.join(str(p) for p in parts)}])"
    return G


def wreath_element(m: int, n: int, gs: Sequence[Permutation], h: Permutation) -> Permutation:
    """The permutation (x, j) -> (g_j(x), h(j)) with (x, j) encoded as j * m + x."""
    images = [0] * (m * n)
    for j in range(n):
        for x in range(m):
            images[j * m + x] = h(j) * m + gs[j](x)
    return Permutation(images)


def wreath_components(element: Permutation, m: int, n: int) -> Tuple[Tuple[Permutation, ...], Permutation]:
    h = Permutation([element(j * m) // m for j in range(n)])
    gs = tuple(Permutation([element(j * m + x) % m for x in range(m)]) for j in range(n))
    return gs, h


def wreath_product(G: PermutationGroup, H: PermutationGroup,
                   element_cap: Optional[int] = None) -> PermutationGroup:
    """
    G wr H in its imprimitive action on m * n points.

    Generators are each generator of G placed in each coordinate, plus each
    generator of H permuting the coordinates.
    """
    m, n = G.degree, H.degree
    id_m, id_n = identity(m), identity(n)
    gens = []
    for g in G.generators:
        for j in range(n):
            gs = [id_m] * n
            gs[j] = g
            gens.append(wreath_element(m, n, gs, id_n))
    for h in H.generators:
        gens.append(wreath_element(m, n, [id_m] * n, h))

    description = f"{G.description} wr {H.description}"
    W = generate(m * n, gens, element_cap, description=description)
    expected = G.order ** n * H.order
    if W.order != expected:
        raise VerificationError(f"{description}: order {W.order}, expected {expected}")
    return W


class InducedTupleGroup:
    """
    A group acting on the injective t-tuples of its points.

    Elements stay in the base group; the induced permutation of degree
    n(n-1)...(n-t+1) is only built when asked for.

    Args:
        base: Group acting on n points
        t: Tuple length, 1 <= t <= n
    """

    def __init__(self, base: PermutationGroup, t: int):
        if not 1 <= t <= base.degree:
            raise GroupError(f"Tuple length {t} out of range 1..{base.degree}")
        self.base = base
        self.t = t
        self.tuples = list(itertools.permutations(range(base.degree), t))
        self.rank: Dict[Tuple[int, ...], int] = {tup: i for i, tup in enumerate(self.tuples)}
        self.description = f"{base.description} on ordered {t}-tuples"
        self._materialized = None

    @property
    def degree(self) -> int:
        return len(self.tuples)

    @property
    def order(self) -> int:
        return self.base.order

    def __len__(self):
        return self.base.order

    def induced(self, g: Permutation) -> Permutation:
        return Permutation._trusted(tuple(
            self.rank[tuple(g(a) for a in tup)] for tup in self.tuples
        ))

    def element(self, i: int) -> Permutation:
        return self.induced(self.base.elements[i])

    def tuple_orbits(self) -> List[List[int]]:
        # orbits of the induced generators, without enumerating the induced group
        gens = [self.induced(g) for g in self.base.generators] or [identity(self.degree)]
        action = SymPermutationGroup([g.as_sympy for g in gens])
        return sorted(sorted(orb) for orb in action.orbits())

    def max_stabilizer_size(self) -> int:
        # orbit-stabilizer on the tuple orbits
        return self.base.order // min(len(o) for o in self.tuple_orbits())

    def materialize(self, element_cap: Optional[int] = None) -> PermutationGroup:
        """Full PermutationGroup on the tuple points (small groups only)."""
        if self._materialized is None:
            gens = [self.induced(g) for g in self.base.generators]
            self._materialized = generate(self.degree, gens, element_cap, description=self.description)
            if self._materialized.order != self.base.order:
                raise VerificationError(f"{self.description}: induced order {self._materialized.order} "
                                        f"differs from {self.base.order}")
        return self._materialized


def induced_tuple_action(G: PermutationGroup, t: int) -> InducedTupleGroup:
    group = InducedTupleGroup(G, t)
    logger.info(f"{group.description}: degree {group.degree}, order {group.order}")
    return group
