"""End-to-end verdicts on the standard group families."""
import pytest

from src.core.constructions import (cyclic_group, dihedral_group,
                                    external_direct_product, symmetric_group,
                                    wreath_product, young_subgroup)
from src.core.derangement_graph import derangement_graph
from src.core.ekr import (check_ekr, clique_coclique_check,
                          cyclic_alpha_prediction, is_intersecting_set,
                          stabilizer_coset_of)
from src.core.permutation import parse_cycles
from src.core.solver import max_clique, max_independent_set

CYCLIC_FIXTURES = [
    ("(1 2 3 4 5)", 5, 1),
    ("(1 2)(3 4 5)", 5, 3),
    ("(1 2)(3 4)(5 6 7)", 7, 3),
    ("(1 2 3)(4 5 6 7)", 7, 4),
    ("(1 2)(3 4 5)(6 7 8 9)", 9, 6),
]

YOUNG_NOT_STRICT = {(3, 2), (2, 2, 2), (3, 3), (3, 2, 2)}
YOUNG_FAST = [(2,), (3,), (4,), (2, 2), (5,), (3, 2), (4, 2), (3, 3), (2, 2, 2), (5, 2), (4, 3), (3, 2, 2)]


@pytest.mark.parametrize('text, degree, alpha', CYCLIC_FIXTURES, ids=[f[0] for f in CYCLIC_FIXTURES])
def test_cyclic_groups_are_strict(text, degree, alpha):
    sigma = parse_cycles(text, degree)
    report = check_ekr(cyclic_group(sigma))
    assert (report.ekr, report.strict_ekr) == ('yes', 'yes')
    assert report.alpha == alpha == cyclic_alpha_prediction(sigma)


@pytest.mark.parametrize('n', range(3, 11))
def test_dihedral_groups_are_strict(n):
    report = check_ekr(dihedral_group(n))
    assert (report.ekr, report.strict_ekr, report.alpha) == ('yes', 'yes', 2)


@pytest.mark.parametrize('q', [5, 7, 11, 13])
def test_frobenius_dichotomy(agl, q):
    affine = check_ekr(agl[q], f'AGL(1,{q})')
    assert (affine.ekr, affine.strict_ekr) == ('yes', 'no')
    assert affine.alpha == q - 1

    # dihedral groups of prime degree are Frobenius with a complement of order 2
    dihedral = check_ekr(dihedral_group(q))
    assert (dihedral.ekr, dihedral.strict_ekr) == ('yes', 'yes')


@pytest.mark.parametrize('parts', YOUNG_FAST, ids=[','.join(map(str, p)) for p in YOUNG_FAST])
def test_young_subgroups(parts):
    report = check_ekr(young_subgroup(parts))
    assert report.ekr == 'yes'
    assert report.strict_ekr == ('no' if tuple(parts) in YOUNG_NOT_STRICT else 'yes')


@pytest.mark.slow
@pytest.mark.parametrize('n', [6, 7])
def test_large_symmetric_groups_are_strict(n):
    report = check_ekr(young_subgroup([n]), time_budget=None)
    assert (report.ekr, report.strict_ekr) == ('yes', 'yes')


def test_non_strict_young_witness_is_intersecting():
    G = young_subgroup([3, 3])
    report = check_ekr(G)
    non_coset = [parse_cycles(text, G.degree) for text in report.witnesses.non_coset_set]
    assert len(non_coset) == report.alpha == 12
    assert is_intersecting_set(G, non_coset)
    assert stabilizer_coset_of(G, non_coset) is None


@pytest.mark.parametrize('m, alpha', [(2, 2), (3, 12)])
def test_wreath_products_have_ekr(m, alpha):
    G = wreath_product(symmetric_group(m), symmetric_group(2))
    report = check_ekr(G, decide_strict=False)
    assert report.ekr == 'yes'
    # |G|^(n-1) * |G_x| * |H_j| with n = 2
    assert report.alpha == alpha == G.max_stabilizer_size()


@pytest.mark.slow
def test_sym4_wreath_sym2_is_strict():
    G = wreath_product(symmetric_group(4), symmetric_group(2))
    assert G.order == 1152
    report = check_ekr(G, time_budget=600.0)
    assert report.ekr == 'yes'
    if report.strict_ekr == 'unknown':
        assert report.identity_maxima_checked >= 1
        assert any(note.startswith("strict check incomplete") for note in report.notes)
    else:
        assert report.strict_ekr == 'yes'


VERTEX_TRANSITIVE = {
    'Sym(3)': lambda: symmetric_group(3),
    'Sym(4)': lambda: symmetric_group(4),
    'D5': lambda: dihedral_group(5),
    'D6': lambda: dihedral_group(6),
    'C(2,3)': lambda: cyclic_group(parse_cycles("(1 2)(3 4 5)", 5)),
    'Young(3,2)': lambda: young_subgroup([3, 2]),
    'Young(2,2,2)': lambda: young_subgroup([2, 2, 2]),
    'Z3xZ3': lambda: external_direct_product([cyclic_group(parse_cycles("(1 2 3)", 3))] * 2),
}


@pytest.mark.parametrize('name', list(VERTEX_TRANSITIVE))
def test_clique_coclique_bound_on_derangement_graphs(name):
    G = VERTEX_TRANSITIVE[name]()
    gamma = derangement_graph(G)
    alpha = max_independent_set(gamma, None).size
    omega = max_clique(gamma, None).size
    result = clique_coclique_check(G, alpha, omega, gamma=gamma, time_budget=None)
    assert result.product == alpha * omega <= G.order
    if result.tight:
        assert result.intersection_verified is True


def test_clique_coclique_bound_on_affine_group(agl):
    G = agl[5]
    gamma = derangement_graph(G)
    result = clique_coclique_check(G, 4, 5, gamma=gamma, time_budget=None)
    assert result.tight
    assert result.intersection_verified is True
