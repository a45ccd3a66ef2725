import json

import pytest

from src.core.constructions import (affine_group, cyclic_group,
                                    dihedral_group, symmetric_group,
                                    young_subgroup)
from src.core.derangement_graph import derangement_graph
from src.core.ekr import (EkrAnalyzer, check_ekr, clique_coclique_check,
                          clique_cover, cyclic_alpha_prediction,
                          find_sharply_transitive_clique, is_intersecting_set,
                          is_t_intersecting_set, stabilizer_coset_of,
                          translation_lemma_holds)
from src.core.exceptions import GroupError, VerificationError
from src.core.group import generate
from src.core.permutation import identity, parse_cycles
from src.core.solver import enumerate_max_independent_sets, max_independent_set


def klein_on_six_points():
    # every non-identity element fixes two points, so the whole group intersects
    return generate(6, [parse_cycles("(1 2)(3 4)", 6), parse_cycles("(1 2)(5 6)", 6)])


def test_is_intersecting_set():
    S3 = symmetric_group(3)
    assert is_intersecting_set(S3, S3.stabilizer(1))
    assert not is_intersecting_set(S3, [identity(3), parse_cycles("(1 2 3)", 3)])
    # (1 2) and (1 3) agree on no point
    assert not is_intersecting_set(S3, [identity(3), parse_cycles("(1 2)", 3), parse_cycles("(1 3)", 3)])
    with pytest.raises(GroupError):
        is_intersecting_set(cyclic_group(parse_cycles("(1 2 3)", 3)), [parse_cycles("(1 2)", 3)])


def test_is_t_intersecting_set():
    family = [identity(4), parse_cycles("(3 4)", 4)]
    assert is_t_intersecting_set(family, 2)
    assert not is_t_intersecting_set(family, 3)


def test_stabilizer_coset_of():
    S3 = symmetric_group(3)
    assert stabilizer_coset_of(S3, S3.stabilizer(0)) == (0, 0)
    coset = [g for g in S3 if g(0) == 1]
    assert stabilizer_coset_of(S3, coset) == (0, 1)
    assert stabilizer_coset_of(S3, [identity(3), parse_cycles("(1 2 3)", 3)]) is None
    assert stabilizer_coset_of(S3, []) is None


def test_cyclic_alpha_prediction():
    assert cyclic_alpha_prediction(parse_cycles("(1 2)(3 4 5)", 5)) == 3
    assert cyclic_alpha_prediction(parse_cycles("(1 2 3)(4 5 6 7)", 7)) == 4
    assert cyclic_alpha_prediction(parse_cycles("(1 2 3)", 4)) == 3


def test_translation_lemma():
    G = dihedral_group(5)
    gamma = derangement_graph(G)
    for x in range(G.degree):
        stabilizer = G.indices_of(G.stabilizer(x))
        assert all(translation_lemma_holds(gamma, G, stabilizer, g) for g in G)


@pytest.mark.parametrize('make', [
    lambda: affine_group(5),
    lambda: young_subgroup([3, 2]),
    lambda: young_subgroup([2, 2, 2]),
    lambda: dihedral_group(6),
], ids=['AGL(1,5)', 'Young(3,2)', 'Young(2,2,2)', 'D6'])
def test_translation_lemma_on_every_maximum(make):
    G = make()
    assert G.order <= 60
    gamma = derangement_graph(G)
    maxima = enumerate_max_independent_sets(gamma, max_independent_set(gamma, None).size)
    assert maxima
    for S in maxima:
        assert all(translation_lemma_holds(gamma, G, S, g) for g in G)


def test_translation_lemma_covers_non_coset_maxima(agl):
    G = agl[5]
    gamma = derangement_graph(G)
    maxima = enumerate_max_independent_sets(gamma, 4)
    assert len(maxima) == 625
    non_coset = [S for S in maxima if stabilizer_coset_of(G, [G.elements[v] for v in S]) is None]
    # 25 cosets of the five point stabilizers are the only coset maxima
    assert len(non_coset) == 600
    for S in non_coset:
        assert all(translation_lemma_holds(gamma, G, S, g) for g in G)


def test_clique_coclique_check():
    G = cyclic_group(parse_cycles("(1 2)(3 4 5)", 5))
    result = clique_coclique_check(G, alpha=3, omega=2)
    assert (result.product, result.group_order, result.tight) == (6, 6, True)
    assert result.intersection_verified is True

    S3 = symmetric_group(3)
    result = clique_coclique_check(S3, alpha=2, omega=3)
    assert result.tight and result.intersection_verified

    loose = clique_coclique_check(dihedral_group(4), alpha=2, omega=2, exact=False)
    assert not loose.tight
    assert loose.intersection_verified is None

    with pytest.raises(VerificationError):
        clique_coclique_check(S3, alpha=3, omega=3)


def test_sharply_transitive_cliques():
    six = cyclic_group(parse_cycles("(1 2 3 4 5 6)", 6))
    assert sorted(find_sharply_transitive_clique(six)) == list(six.elements)

    D5 = dihedral_group(5)
    rotations = find_sharply_transitive_clique(D5)
    assert len(rotations) == 5
    assert all(g(1) == (g(0) + 1) % 5 for g in rotations)

    with pytest.raises(GroupError):
        find_sharply_transitive_clique(young_subgroup([2, 2]))


def test_clique_cover_partitions_group():
    G = symmetric_group(4)
    clique = find_sharply_transitive_clique(G)
    parts = clique_cover(G, clique)
    assert len(parts) == 6
    assert sorted(v for part in parts for v in part) == list(range(24))
    gamma = derangement_graph(G)
    assert all(gamma.is_clique(part) for part in parts)

    with pytest.raises(VerificationError):
        clique_cover(G, G.stabilizer(0)[:2])


@pytest.mark.parametrize('G, alpha, strict', [
    (cyclic_group(parse_cycles("(1 2)(3 4 5)", 5)), 3, 'yes'),
    (dihedral_group(6), 2, 'yes'),
    (symmetric_group(4), 6, 'yes'),
    (affine_group(5), 4, 'no'),
], ids=['C(2,3)', 'D6', 'Sym(4)', 'AGL(1,5)'])
def test_check_ekr_verdicts(G, alpha, strict):
    report = check_ekr(G, 'g')
    assert report.ekr == 'yes'
    assert report.alpha == alpha == report.max_stabilizer
    assert report.strict_ekr == strict
    assert report.method == 'clique-cover'
    assert report.clique_coclique.tight
    assert report.identity_maxima_checked >= 1
    if strict == 'no':
        non_coset = [parse_cycles(text, G.degree) for text in report.witnesses.non_coset_set]
        assert len(non_coset) == alpha
        assert is_intersecting_set(G, non_coset)
        assert stabilizer_coset_of(G, non_coset) is None


def test_check_ekr_refutes_when_stabilizers_are_small():
    G = klein_on_six_points()
    report = check_ekr(G, 'klein')
    assert report.max_stabilizer == 2
    assert report.alpha == 4
    assert report.ekr == 'no'
    assert report.strict_ekr == 'not-applicable'
    assert report.method == 'branch-and-bound'
    assert len(report.witnesses.refuting_set) == 4
    assert report.clique_coclique.intersection_verified is True


def test_strict_check_can_be_skipped():
    report = EkrAnalyzer(decide_strict=False).analyze(dihedral_group(5), 'D5')
    assert report.ekr == 'yes'
    assert report.strict_ekr == 'unknown'
    assert "strict check not requested" in report.notes


def test_strict_check_respects_enumeration_cap():
    report = EkrAnalyzer(enum_cap=1).analyze(symmetric_group(4), 'S4')
    assert report.ekr == 'yes'
    assert report.strict_ekr == 'unknown'
    assert report.identity_maxima_checked == 1
    assert any(note.startswith("strict check incomplete") for note in report.notes)


def test_report_serializes_in_field_order():
    report = check_ekr(dihedral_group(4), 'D4')
    data = json.loads(report.model_dump_json())
    assert list(data)[:4] == ['schema_version', 'kind', 'label', 'description']
    assert data['kind'] == 'ekr'
    assert data['witnesses']['max_independent_set'][0] == '()'
