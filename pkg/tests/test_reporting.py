import io

import pytest

from src.core.constructions import affine_group, cyclic_group, dihedral_group
from src.core.derangement_graph import derangement_graph, spectrum
from src.core.ekr import EkrReport, check_ekr
from src.core.permutation import parse_cycles
from src.core.products import ProductReport, check_product
from src.core.witness import (RefutationCertificate, RepairVerdict,
                              internal_product_repair,
                              t_intersecting_certificate)
from src.utils.reporting import (ScalarRecord, SpectrumRecord, spectrum_record,
                                 summary_table, write_record)


def _line(record) -> str:
    stream = io.StringIO()
    write_record(record, stream)
    line, = stream.getvalue().splitlines()
    return line


def _c3():
    return cyclic_group(parse_cycles("(1 2 3)", 3))


RECORDS = {
    'ekr': (EkrReport, lambda: check_ekr(dihedral_group(4), 'D4')),
    'refutation': (RefutationCertificate, lambda: t_intersecting_certificate(4)),
    'unverified refutation': (RefutationCertificate, lambda: t_intersecting_certificate(2)),
    'product': (ProductReport, lambda: check_product('external', [_c3(), _c3()])),
    'scalar': (ScalarRecord, lambda: ScalarRecord(kind='alpha', label='C', description='C', order=6, value=3,
                                                  exact=True, lower_bound=3, witness=['()', '(1 2)', '(3 4 5)'])),
    'spectrum': (SpectrumRecord, lambda: spectrum_record('A5', 'AGL(1,5)',
                                                         spectrum(derangement_graph(affine_group(5))))),
    'repair': (RepairVerdict, lambda: internal_product_repair(15)),
}


@pytest.mark.parametrize('name', list(RECORDS))
def test_records_survive_the_wire_format(name):
    model, build = RECORDS[name]
    record = build()
    assert model.model_validate_json(_line(record)) == record


def test_summary_table_has_one_row_per_record():
    records = [check_ekr(dihedral_group(n), f'D{n}') for n in (3, 4)] + [internal_product_repair(16)]
    table = summary_table(records)
    assert len(table) == 3
    assert list(table['label'][:2]) == ['D3', 'D4']
