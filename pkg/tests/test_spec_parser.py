import os

import pytest

from src.core.constructions import (affine_group, dihedral_group,
                                    symmetric_group, young_subgroup)
from src.core.exceptions import GroupTooLargeError, SpecParseError
from src.utils.spec_parser import (build_factor, build_group, build_groups,
                                   build_groups_per_record, load_generator_file, parse_spec_file,
                                   parse_spec_text)


def test_parse_records():
    text = """
# two records
label: D5
construct: dihedral 5

degree: 5
gens: (1 2)(3 4 5)   # one generator
(1 2)
"""
    first, second = parse_spec_text(text)
    assert first.label == 'D5'
    assert (first.construct, first.args) == ('dihedral', ['5'])
    assert second.label == 'line6'
    assert second.degree == 5
    assert second.generators == ['(1 2)(3 4 5)', '(1 2)']


@pytest.mark.parametrize('text, line', [
    ("label: a\nlabel: b\n", 2),
    ("colour: red\n", 1),
    ("label: a\nconstruct: torus 3\n", 2),
    ("label: a\ndegree: five\n", 2),
    ("label: a\ndegree: 3\n(1 2)\n", 3),
    ("label: bad label\nconstruct: symmetric 3\n", 1),
    ("label: a\n", 1),
    ("label: a\nconstruct: symmetric 3\n\nlabel: a\nconstruct: symmetric 2\n", 4),
])
def test_parse_errors_name_the_line(text, line):
    with pytest.raises(SpecParseError) as info:
        parse_spec_text(text, source='groups.spec')
    assert info.value.line == line
    assert str(info.value).startswith(f"groups.spec:{line}: ")


def test_empty_spec():
    assert parse_spec_text("") == []
    assert parse_spec_text("# only a comment\n\n") == []


def test_build_constructs():
    text = """
label: S4
construct: symmetric 4

label: D6
construct: dihedral 6

label: A7
construct: affine 7

label: Y
construct: young 3,2,2

label: C
degree: 5
construct: cyclic
gens: (1 2)(3 4 5)

label: E
construct: external C sym:2

label: I
construct: internal sym:3 cycle:2

label: W
construct: wreath sym:2 sym:2

label: T
construct: tuples sym:4 2
"""
    groups = {spec.label: G for spec, G in build_groups(parse_spec_text(text))}
    assert groups['S4'].same_elements(symmetric_group(4))
    assert groups['D6'].same_elements(dihedral_group(6))
    assert groups['A7'].same_elements(affine_group(7))
    assert groups['Y'].same_elements(young_subgroup([3, 2, 2]))
    assert groups['C'].order == 6
    assert (groups['E'].degree, groups['E'].order) == (10, 12)
    assert (groups['I'].degree, groups['I'].order) == (5, 12)
    assert (groups['W'].degree, groups['W'].order) == (4, 8)
    assert (groups['T'].degree, groups['T'].order) == (12, 24)


@pytest.mark.parametrize('text', [
    "construct: cyclic\ndegree: 4\ngens: (1 2)\n(3 4)\n",
    "construct: wreath sym:2\n",
    "construct: external nowhere\n",
    "construct: external sym:x\n",
    "construct: dihedral 2\n",
    "construct: young 2,3\n",
    "construct: affine 8\n",
    "degree: 3\ngens: (1 4)\n",
    "construct: tuples sym:3\n",
])
def test_build_errors_are_parse_errors(text):
    spec, = parse_spec_text(text)
    with pytest.raises(SpecParseError):
        build_group(spec)


def test_element_cap_is_not_a_parse_error():
    spec, = parse_spec_text("construct: symmetric 6\n")
    with pytest.raises(GroupTooLargeError):
        build_group(spec, element_cap=100)


def test_cap_failures_stay_with_their_record():
    specs = parse_spec_text("label: S6\nconstruct: symmetric 6\n\nlabel: D5\nconstruct: dihedral 5\n"
                            "\nlabel: P\nconstruct: external S6 D5\n")
    (s6, s6_group, s6_error), (d5, d5_group, d5_error), (p, p_group, p_error) = build_groups_per_record(specs, 100)
    assert s6_group is None and isinstance(s6_error, GroupTooLargeError)
    assert d5_group.order == 10 and d5_error is None
    assert p_group is None and p_error is s6_error


def test_build_factor():
    assert build_factor('sym:3').order == 6
    assert build_factor('cycle:4').order == 4
    assert build_factor('dihedral:5').order == 10
    assert build_factor('young:2,2').order == 4
    assert build_factor('affine:5').order == 20
    S3 = symmetric_group(3)
    assert build_factor('mine', {'mine': S3}) is S3
    with pytest.raises(SpecParseError):
        build_factor('torus:3')


def test_include_is_relative_to_the_spec_file(write_file):
    write_file('c5.gens', "# five cycle\ndegree: 5\n(1 2 3 4 5)\n")
    path = write_file('groups.spec', "label: C5\ninclude: c5.gens\n")
    (spec, G), = build_groups(parse_spec_file(path))
    assert G.order == 5
    assert spec.source == path


def test_include_degree_must_agree(write_file):
    write_file('c5.gens', "degree: 5\n(1 2 3 4 5)\n")
    path = write_file('groups.spec', "degree: 6\ninclude: c5.gens\n")
    spec, = parse_spec_file(path)
    with pytest.raises(SpecParseError):
        build_group(spec)


def test_generator_files(write_file, data_dir):
    degree, generators = load_generator_file(os.path.join(data_dir, 'm20.gens'))
    assert degree == 20
    assert len(generators) == 4

    missing_degree = write_file('bad.gens', "(1 2)\n")
    with pytest.raises(SpecParseError):
        load_generator_file(missing_degree)
    with pytest.raises(SpecParseError):
        parse_spec_file(os.path.join(data_dir, 'no_such.spec'))


def test_sample_spec_builds(data_dir):
    built = build_groups(parse_spec_file(os.path.join(data_dir, 'sample.spec')))
    assert [spec.label for spec, _ in built] == ['D5', 'C_2_3', 'AGL1_5', 'Y322', 'Z3xZ3', 'S3.Z2', 'S2wrS2']
    orders = {spec.label: G.order for spec, G in built}
    assert orders == {'D5': 10, 'C_2_3': 6, 'AGL1_5': 20, 'Y322': 24, 'Z3xZ3': 9, 'S3.Z2': 12, 'S2wrS2': 8}
