import json
import os

from src.cli.main import (EXIT_BUDGET, EXIT_OK, EXIT_PARSE, EXIT_VERIFICATION,
                          run)
from src.config.settings import M20_FIXTURE


def records(capsys):
    out = capsys.readouterr().out
    return [json.loads(line) for line in out.splitlines() if line.strip()]


def test_check_ekr_dihedral(write_file, capsys):
    spec = write_file('d5.spec', "label: D5\nconstruct: dihedral 5\n")
    assert run(['check-ekr', spec]) == EXIT_OK
    record, = records(capsys)
    assert record['kind'] == 'ekr'
    assert record['label'] == 'D5'
    assert (record['ekr'], record['strict_ekr'], record['alpha']) == ('yes', 'yes', 2)


def test_check_ekr_empty_spec(write_file, capsys):
    spec = write_file('empty.spec', "")
    assert run(['check-ekr', spec]) == EXIT_OK
    captured = capsys.readouterr()
    assert captured.out == ""
    assert "No records." in captured.err


def test_records_keep_input_order_with_workers(write_file, capsys):
    spec = write_file('many.spec', "\n\n".join(f"label: D{n}\nconstruct: dihedral {n}" for n in range(3, 9)))
    assert run(['--workers', '3', 'check-ekr', spec]) == EXIT_OK
    assert [r['label'] for r in records(capsys)] == [f"D{n}" for n in range(3, 9)]


def test_parse_error_exit_code(write_file, capsys):
    spec = write_file('bad.spec', "label: X\nconstruct: torus 3\n")
    assert run(['check-ekr', spec]) == EXIT_PARSE
    assert capsys.readouterr().out == ""


def test_usage_errors(capsys):
    assert run([]) == EXIT_PARSE
    assert run(['check-ekr']) == EXIT_PARSE
    assert run(['--workers', '0', 'check-ekr', 'x.spec']) == EXIT_PARSE
    assert run(['witness', 't-intersecting']) == EXIT_PARSE


def test_missing_spec_file_is_a_parse_error(tmp_path):
    assert run(['alpha', os.path.join(tmp_path, 'absent.spec')]) == EXIT_PARSE


def test_element_cap_exhaustion(write_file, capsys):
    spec = write_file('big.spec', "construct: symmetric 6\n")
    assert run(['--element-cap', '100', 'check-ekr', spec]) == EXIT_BUDGET


def test_alpha_and_omega(write_file, capsys):
    spec = write_file('c.spec', "label: C\ndegree: 5\nconstruct: cyclic\ngens: (1 2)(3 4 5)\n")
    assert run(['alpha', spec]) == EXIT_OK
    alpha, = records(capsys)
    assert (alpha['kind'], alpha['value'], alpha['exact']) == ('alpha', 3, True)
    assert len(alpha['witness']) == 3

    assert run(['omega', spec]) == EXIT_OK
    omega, = records(capsys)
    assert (omega['kind'], omega['value'], omega['exact']) == ('omega', 2, True)


def test_spectrum(write_file, capsys):
    spec = write_file('agl.spec', "label: A5\nconstruct: affine 5\n")
    assert run(['spectrum', spec]) == EXIT_OK
    record, = records(capsys)
    assert record['vertex_count'] == 20
    assert record['eigenvalues'] == [[4, 4], [-1, 16]]


def test_dump_graph_to_stdout(write_file, capsys):
    spec = write_file('c3.spec', "label: C3\ndegree: 3\nconstruct: cyclic\ngens: (1 2 3)\n")
    assert run(['dump-graph', spec]) == EXIT_OK
    assert capsys.readouterr().out == "0 1\n0 2\n1 2\n"


def test_dump_graph_to_file(write_file, tmp_path, capsys):
    spec = write_file('two.spec', "label: S3\nconstruct: symmetric 3\n\nlabel: C3\nconstruct: affine 3\n")
    target = os.path.join(tmp_path, 'edges.txt')
    assert run(['dump-graph', spec, '--label', 'S3', '--output', target]) == EXIT_OK
    record, = records(capsys)
    assert (record['kind'], record['vertex_count'], record['edge_count']) == ('graph', 6, 6)
    with open(target, encoding='utf-8') as f:
        assert len(f.read().splitlines()) == 6
    assert run(['dump-graph', spec, '--label', 'nope']) == EXIT_PARSE


def test_witness_t_intersecting(capsys):
    assert run(['witness', 't-intersecting', '--t', '4']) == EXIT_OK
    record, = records(capsys)
    assert (record['set_size'], record['max_stabilizer_size'], record['verified']) == (26, 24, True)


def test_unverified_certificate_exit_code(capsys):
    assert run(['witness', 't-intersecting', '--t', '2']) == EXIT_VERIFICATION
    record, = records(capsys)
    assert record['verified'] is False


def test_witness_m20(capsys):
    assert run(['witness', 'm20', M20_FIXTURE]) == EXIT_OK
    record, = records(capsys)
    assert (record['set_size'], record['max_stabilizer_size'], record['verified']) == (64, 48, True)


def test_witness_m20_rejects_wrong_fixture(write_file, capsys):
    genfile = write_file('c5.gens', "degree: 5\n(1 2 3 4 5)\n")
    assert run(['witness', 'm20', genfile]) == EXIT_VERIFICATION
    assert capsys.readouterr().out == ""


def test_witness_m20_repair(capsys):
    assert run(['witness', 'm20-repair', '--n', '16']) == EXIT_OK
    assert run(['witness', 'm20-repair', '--n', '15']) == EXIT_OK
    refuted, repaired = records(capsys)
    assert refuted['ekr'] == 'refuted-by-witness'
    assert (repaired['ekr'], repaired['conditional']) == ('yes', True)


def test_product(capsys):
    assert run(['product', '--kind', 'external', 'cycle:3', 'cycle:3']) == EXIT_OK
    record, = records(capsys)
    assert record['kind'] == 'product'
    assert record['alpha'] == record['predicted_alpha'] == 1
    assert record['graph_identity_holds'] is True


def test_product_with_generator_file(write_file, capsys):
    genfile = write_file('c3.gens', "degree: 3\n(1 2 3)\n")
    assert run(['product', '--kind', 'internal', genfile, 'sym:2']) == EXIT_OK
    record, = records(capsys)
    assert (record['degree'], record['order']) == (5, 6)


def test_product_with_spec_labels(write_file, capsys):
    spec = write_file('factors.spec', "label: C3\ndegree: 3\nconstruct: cyclic\ngens: (1 2 3)\n"
                                      "\nlabel: D4\nconstruct: dihedral 4\n")
    assert run(['product', '--kind', 'external', '--spec', spec, 'D4', 'C3']) == EXIT_OK
    record, = records(capsys)
    assert (record['degree'], record['order']) == (12, 24)
    assert record['alpha_law_holds'] is True
    assert run(['product', '--kind', 'external', '--spec', spec, 'D4', 'C7']) == EXIT_PARSE


def test_no_strict_flag(write_file, capsys):
    spec = write_file('d4.spec', "construct: dihedral 4\n")
    assert run(['--no-strict', 'check-ekr', spec]) == EXIT_OK
    record, = records(capsys)
    assert record['strict_ekr'] == 'unknown'


def test_log_file(write_file, tmp_path, capsys):
    spec = write_file('d3.spec', "construct: dihedral 3\n")
    log_dir = os.path.join(tmp_path, 'logs')
    assert run(['--log-dir', log_dir, 'check-ekr', spec]) == EXIT_OK
    assert len(os.listdir(log_dir)) == 1


def test_oversized_record_keeps_other_records(write_file, capsys):
    spec = write_file('mixed.spec', "label: D5\nconstruct: dihedral 5\n\nlabel: S6\nconstruct: symmetric 6\n"
                                    "\nlabel: D4\nconstruct: dihedral 4\n")
    assert run(['--element-cap', '100', 'check-ekr', spec]) == EXIT_BUDGET
    assert [r['label'] for r in records(capsys)] == ['D5', 'D4']


def test_dump_graph_skips_oversized_records(write_file, capsys):
    spec = write_file('dump.spec', "label: S6\nconstruct: symmetric 6\n\nlabel: C3\ndegree: 3\n"
                                   "construct: cyclic\ngens: (1 2 3)\n")
    assert run(['--element-cap', '100', 'dump-graph', spec, '--label', 'C3']) == EXIT_OK
    assert capsys.readouterr().out == "0 1\n0 2\n1 2\n"
    assert run(['--element-cap', '100', 'dump-graph', spec]) == EXIT_BUDGET
