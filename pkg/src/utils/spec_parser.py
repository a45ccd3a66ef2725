"""
Group spec files.

A spec file holds records separated by blank lines. Each record is a set
of `key: value` lines; `#` starts a comment. See docs/spec_grammar.md.
"""
import logging
import os
import re
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

from src.core.constructions import (affine_group, cyclic_group, dihedral_group,
                                    external_direct_product,
                                    induced_tuple_action,
                                    internal_direct_product, symmetric_group,
                                    wreath_product, young_subgroup)
from src.core.exceptions import (GroupError, GroupTooLargeError,
                                 PermutationError, SpecParseError)
from src.core.group import PermutationGroup, generate
from src.core.permutation import Permutation, parse_cycles

logger = logging.getLogger(__name__)

KEYS = ('label', 'degree', 'gens', 'include', 'construct')
CONSTRUCTS = ('symmetric', 'cyclic', 'dihedral', 'young', 'affine',
              'external', 'internal', 'wreath', 'tuples')
_KEY_RE = re.compile(r'^([A-Za-z_]+)\s*:\s*(.*)$')
_LABEL_RE = re.compile(r'^[A-Za-z0-9_.\-]+$')


@dataclass
class GroupSpec:
    """One record of a spec file."""

    label: str
    line: int
    source: Optional[str] = None
    degree: Optional[int] = None
    generators: List[str] = field(default_factory=list)
    include: Optional[str] = None
    construct: Optional[str] = None
    args: List[str] = field(default_factory=list)

    def error(self, message: str) -> SpecParseError:
        return SpecParseError(f"{self.label}: {message}", self.line or None, self.source)


def _strip_comment(line: str) -> str:
    return line.split('#', 1)[0].rstrip()


def _records(text: str) -> List[List[Tuple[int, str]]]:
    records, current = [], []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            if current:
                records.append(current)
                current = []
            continue
        line = _strip_comment(raw)
        if line.strip():
            current.append((number, line.strip()))
    if current:
        records.append(current)
    return records


def _parse_int(value: str, what: str, line: int, source: Optional[str]) -> int:
    try:
        return int(value)
    except ValueError:
        raise SpecParseError(f"{what} must be an integer, got {value!r}", line, source)


def _parse_record(lines: List[Tuple[int, str]], source: Optional[str]) -> GroupSpec:
    first_line = lines[0][0]
    spec = GroupSpec(label='', line=first_line, source=source)
    seen = set()
    in_gens = False
    for number, line in lines:
        if line.startswith('('):
            if not in_gens:
                raise SpecParseError("Cycle line outside a gens: block", number, source)
            spec.generators.append(line)
            continue
        match = _KEY_RE.match(line)
        if not match:
            raise SpecParseError(f"Expected 'key: value', got {line!r}", number, source)
        key, value = match.group(1).lower(), match.group(2).strip()
        if key not in KEYS:
            raise SpecParseError(f"Unknown key {key!r}; expected one of {', '.join(KEYS)}", number, source)
        if key in seen:
            raise SpecParseError(f"Duplicate key {key!r}", number, source)
        seen.add(key)
        in_gens = key == 'gens'

        if key == 'label':
            if not _LABEL_RE.match(value):
                raise SpecParseError(f"Invalid label {value!r}", number, source)
            spec.label = value
        elif key == 'degree':
            spec.degree = _parse_int(value, 'degree', number, source)
            if spec.degree < 1:
                raise SpecParseError("degree must be at least 1", number, source)
        elif key == 'gens':
            if value:
                spec.generators.append(value)
        elif key == 'include':
            if not value:
                raise SpecParseError("include: needs a path", number, source)
            spec.include = value
        elif key == 'construct':
            words = value.split()
            if not words or words[0].lower() not in CONSTRUCTS:
                raise SpecParseError(f"Unknown construct {value!r}; expected one of {', '.join(CONSTRUCTS)}",
                                     number, source)
            spec.construct = words[0].lower()
            spec.args = words[1:]

    if not spec.label:
        spec.label = f"line{first_line}"
    if spec.construct is None and spec.degree is None and spec.include is None:
        raise SpecParseError(f"{spec.label}: record needs degree: with gens:, include: or construct:",
                             first_line, source)
    return spec


def parse_spec_text(text: str, source: Optional[str] = None) -> List[GroupSpec]:
    specs = [_parse_record(lines, source) for lines in _records(text)]
    labels = set()
    for spec in specs:
        if spec.label in labels:
            raise SpecParseError(f"Duplicate label {spec.label!r}", spec.line, source)
        labels.add(spec.label)
    logger.debug(f"Parsed {len(specs)} group spec(s) from {source or 'text'}")
    return specs


def parse_spec_file(path: str) -> List[GroupSpec]:
    try:
        with open(path, encoding='utf-8') as f:
            text = f.read()
    except OSError as exc:
        raise SpecParseError(f"Cannot read spec file: {exc}", source=path)
    return parse_spec_text(text, source=path)


def load_generator_file(path: str) -> Tuple[int, List[Permutation]]:
    """
    Read a generator file: `degree: n` followed by one cycle string per line.

    Returns:
        (degree, generators)
    """
    try:
        with open(path, encoding='utf-8') as f:
            lines = f.read().splitlines()
    except OSError as exc:
        raise SpecParseError(f"Cannot read generator file: {exc}", source=path)

    degree = None
    generators = []
    for number, raw in enumerate(lines, start=1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        match = _KEY_RE.match(line)
        if match and match.group(1).lower() == 'degree':
            if degree is not None:
                raise SpecParseError("Duplicate degree", number, path)
            degree = _parse_int(match.group(2).strip(), 'degree', number, path)
            continue
        if degree is None:
            raise SpecParseError("Generator file must start with 'degree: n'", number, path)
        try:
            generators.append(parse_cycles(line, degree))
        except PermutationError as exc:
            raise SpecParseError(str(exc), number, path)
    if degree is None:
        raise SpecParseError("Generator file has no degree", source=path)
    return degree, generators


def load_group_file(path: str, description: str = '', element_cap: Optional[int] = None) -> PermutationGroup:
    degree, generators = load_generator_file(path)
    return generate(degree, generators, element_cap, description or os.path.basename(path))


def build_factor(atom: str,
                 known: Optional[Dict[str, PermutationGroup]] = None,
                 element_cap: Optional[int] = None,
                 spec: Optional[GroupSpec] = None) -> PermutationGroup:
    """Group for a factor atom such as sym:3, cycle:4, dihedral:5, young:2,2, affine:7 or an earlier label."""
    spec = spec or GroupSpec(label=atom, line=0)
    known = known or {}
    if atom in known:
        return known[atom]
    name, _, value = atom.partition(':')
    if not value:
        raise spec.error(f"Unknown factor {atom!r}: not an earlier label or a name:value atom")
    if name == 'young':
        return young_subgroup(_partition(spec, value), element_cap)
    number = _atom_int(spec, atom, value)
    if name == 'sym':
        return symmetric_group(number, element_cap)
    if name == 'cycle':
        return cyclic_group(Permutation([(i + 1) % number for i in range(number)]))
    if name == 'dihedral':
        return dihedral_group(number)
    if name == 'affine':
        return affine_group(number)
    raise spec.error(f"Unknown factor kind {name!r} in {atom!r}")


def _atom_int(spec: GroupSpec, atom: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise spec.error(f"Factor {atom!r} needs an integer")


def _partition(spec: GroupSpec, text: str) -> List[int]:
    try:
        return [int(part) for part in text.replace(' ', '').strip('[]').split(',') if part]
    except ValueError:
        raise spec.error(f"Invalid partition {text!r}")


def _single_int(spec: GroupSpec) -> int:
    if len(spec.args) != 1:
        raise spec.error(f"construct: {spec.construct} takes one integer")
    return _atom_int(spec, spec.args[0], spec.args[0])


def _explicit_generators(spec: GroupSpec) -> Tuple[int, List[Permutation]]:
    degree, generators = spec.degree, []
    if spec.include:
        path = spec.include
        if spec.source and not os.path.isabs(path):
            path = os.path.join(os.path.dirname(spec.source), path)
        included_degree, generators = load_generator_file(path)
        if degree is not None and degree != included_degree:
            raise spec.error(f"degree {degree} differs from the included file's degree {included_degree}")
        degree = included_degree
    if degree is None:
        raise spec.error("generators need a degree")
    generators = generators + [parse_cycles(text, degree) for text in spec.generators]
    return degree, generators


def _build(spec: GroupSpec, known: Dict[str, PermutationGroup], element_cap: Optional[int]) -> PermutationGroup:
    kind = spec.construct
    if kind is None:
        degree, generators = _explicit_generators(spec)
        return generate(degree, generators, element_cap, description=spec.label)
    if kind == 'symmetric':
        return symmetric_group(_single_int(spec), element_cap)
    if kind == 'dihedral':
        return dihedral_group(_single_int(spec))
    if kind == 'affine':
        return affine_group(_single_int(spec))
    if kind == 'young':
        return young_subgroup(_partition(spec, ''.join(spec.args)), element_cap)
    if kind == 'cyclic':
        _, generators = _explicit_generators(spec)
        if len(generators) != 1:
            raise spec.error(f"construct: cyclic needs exactly one generator, got {len(generators)}")
        return cyclic_group(generators[0])

    if kind == 'tuples':
        if len(spec.args) != 2:
            raise spec.error("construct: tuples needs a factor and a tuple length")
        base = build_factor(spec.args[0], known, element_cap, spec)
        t = _atom_int(spec, spec.args[1], spec.args[1])
        return induced_tuple_action(base, t).materialize(element_cap)

    factors = [build_factor(atom, known, element_cap, spec) for atom in spec.args]
    if kind == 'external':
        if not factors:
            raise spec.error("construct: external needs at least one factor")
        return external_direct_product(factors, element_cap)
    if kind == 'internal':
        if not factors:
            raise spec.error("construct: internal needs at least one factor")
        return internal_direct_product(factors, element_cap)
    if len(factors) != 2:
        raise spec.error("construct: wreath needs two factors")
    return wreath_product(factors[0], factors[1], element_cap)


def build_group(spec: GroupSpec,
                known: Optional[Dict[str, PermutationGroup]] = None,
                element_cap: Optional[int] = None) -> PermutationGroup:
    """
    Build the group a spec record describes.

    Args:
        spec: Parsed record
        known: Groups of earlier records by label, usable as factors
        element_cap: Enumeration cap

    Returns:
        The enumerated group
    """
    try:
        return _build(spec, known or {}, element_cap)
    except GroupTooLargeError:
        raise
    except SpecParseError:
        raise
    except (PermutationError, GroupError) as exc:
        raise spec.error(str(exc))


def build_groups(specs: List[GroupSpec], element_cap: Optional[int] = None) -> List[Tuple[GroupSpec, PermutationGroup]]:
    known: Dict[str, PermutationGroup] = {}
    built = []
    for spec in specs:
        G = build_group(spec, known, element_cap)
        known[spec.label] = G
        built.append((spec, G))
    return built


def build_groups_per_record(specs: List[GroupSpec],
                            element_cap: Optional[int] = None) -> List[Tuple[GroupSpec, Optional[PermutationGroup],
                                                                             Optional[GroupTooLargeError]]]:
    """
    Build every record, keeping a cap failure with its record instead of raising.

    A record that names a failed earlier record as a factor fails the same
    way. Parse errors still raise.

    Returns:
        (spec, group or None, cap error or None) per record, in input order
    """
    known: Dict[str, PermutationGroup] = {}
    failed: Dict[str, GroupTooLargeError] = {}
    built = []
    for spec in specs:
        inherited = next((failed[atom] for atom in spec.args if atom in failed), None)
        if inherited is not None:
            failed[spec.label] = inherited
            built.append((spec, None, inherited))
            continue
        try:
            G = build_group(spec, known, element_cap)
        except GroupTooLargeError as e:
            logger.warning(f"{spec.label}: {e}")
            failed[spec.label] = e
            built.append((spec, None, e))
            continue
        known[spec.label] = G
        built.append((spec, G, None))
    return built
