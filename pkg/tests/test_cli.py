import json

import pytest

from dgr.conjecture_pkg.main_wf import instant_check, tau_check, singer_check, doubling_check
from dgr.io_pkg.dgr_file import read_dgr_file, write_dgr_file
from dgr.parser import get_parser, read_parser, parse_argument, parse_triplet, parse_range
from dgr.run_main import execute_workflow


def run_dgr(out, *command, threads=1):
    return execute_workflow(['--out', str(out), '--threads', str(threads), '--verbose', '0'] + list(command))


######################
#PARSER
######################


def test_search_budget_syntax():
    opts = read_parser(get_parser(), ['--search_budget', 'nodes=10,attempt_secs=2.5', 'tables'])
    assert opts.search_budget == {'secs': None, 'nodes': 10, 'xi_nodes': 200000, 'attempt_secs': 2.5}
    with pytest.raises(ValueError, match="key=value"):
        parse_argument('nodes', {'nodes': int}, {'nodes': None}, 'search_budget')
    with pytest.raises(ValueError, match="not part of the available options"):
        parse_argument('depth=3', {'nodes': int}, {'nodes': None}, 'search_budget')
    with pytest.raises(ValueError, match="must be a number"):
        parse_argument('nodes=many', {'nodes': int}, {'nodes': None}, 'search_budget')


def test_parser_checks():
    parser = get_parser()
    with pytest.raises(ValueError):
        read_parser(parser, ['--threads', '0', 'tables'])
    with pytest.raises(ValueError, match="--N"):
        read_parser(parser, ['conjecture', '--id', '1', '--I', '2', '--J', '2'])
    with pytest.raises(ValueError, match="together"):
        read_parser(parser, ['search-seeded', '--k', '2'])
    assert parse_triplet('2,3,7', 'enumerate_pool') == (2, 3, 7)
    with pytest.raises(ValueError):
        parse_triplet('2,3', 'enumerate_pool')
    with pytest.raises(ValueError, match="prove_absent"):
        read_parser(parser, ['search-exact', '3', '2', '--prove-absent'])
    assert read_parser(parser, ['search-exact', '3', '2', '6', '--prove-absent']).prove_absent
    assert parse_range('7-13', 'I_range') == range(7, 14)
    for bad in ['13-7', '0-3', '7', 'a-b']:
        with pytest.raises(ValueError, match="I_range"):
            parse_range(bad, 'I_range')


######################
#COMMANDS
######################


def test_input_errors_and_reruns(tmp_path):
    assert run_dgr(tmp_path / 'c1', 'conjecture', '--id', '1', '--I', '2') == 3
    out = tmp_path / 'tau'
    assert run_dgr(out, 'tables', '--table', 'tau') == 0
    assert (out / 'table_tau.txt').read_text().split()[0] == 'J'
    # a second run into the same folder needs --force
    assert run_dgr(out, 'tables', '--table', 'tau') == 3
    assert execute_workflow(['--out', str(out), '--threads', '1', '--verbose', '0', '--force', 'tables']) == 0
    assert (out / 'table_H.txt').is_file()


def test_search_exact_writes_the_witness(tmp_path):
    assert run_dgr(tmp_path, 'search-exact', '3', '2', '6') == 0
    d = read_dgr_file(tmp_path / 'witness_I3_J2_n6.dgr')[0]
    assert (d.I, d.J, d.n) == (3, 2, 6)
    with open(tmp_path / 'search_exact_report.json') as f:
        assert json.load(f)['status'] == 'witness'


def test_prove_absent(tmp_path):
    # the shortest 4-mark ruler is 1,2,5,7, so none fits in {1..6}
    assert run_dgr(tmp_path / 'absent', '--search_budget', 'nodes=1', 'search-exact', '1', '4', '6',
                   '--prove_absent') == 0
    with open(tmp_path / 'absent' / 'search_exact_report.json') as f:
        assert json.load(f)['status'] == 'proven-absent'
    assert run_dgr(tmp_path / 'refuted', 'search-exact', '3', '2', '6', '--prove-absent') == 1
    assert (tmp_path / 'refuted' / 'witness_I3_J2_n6.dgr').is_file()


def test_tables_default_to_the_published_grid(tmp_path):
    assert run_dgr(tmp_path / 'grid', 'tables') == 0
    lines = (tmp_path / 'grid' / 'table_H.txt').read_text().splitlines()
    assert lines[0].split() == ['J/I', '7', '8', '9', '10', '11', '12', '13']
    assert [line.split()[0] for line in lines[1:]] == ['10', '11', '12', '13']
    assert lines[1].split()[1] == '74*'

    assert run_dgr(tmp_path / 'all', 'tables', '--extended') == 0
    lines = (tmp_path / 'all' / 'table_H.txt').read_text().splitlines()
    assert '25' in lines[0].split()
    assert '5' in [line.split()[0] for line in lines[1:]]

    assert run_dgr(tmp_path / 'narrow', 'tables', '--I_range', '8-9', '--J_range', '12-12') == 0
    lines = (tmp_path / 'narrow' / 'table_H.txt').read_text().splitlines()
    assert lines[1].split() == ['12', '109', '115']


def test_budget_and_resume(tmp_path):
    frontier = tmp_path / 'frontier.json'
    code = run_dgr(tmp_path / 'stopped', '--search_budget', 'nodes=1', 'search-exact', '3', '4', '20',
                   '--checkpoint', str(frontier))
    assert code == 2
    assert frontier.is_file()
    assert run_dgr(tmp_path / 'resumed', 'search-exact', '3', '4', '20', '--resume', str(frontier)) == 0
    assert (tmp_path / 'resumed' / 'witness_I3_J4_n20.dgr').is_file()


def test_enumerate(tmp_path):
    assert run_dgr(tmp_path, 'enumerate', '3', '6') == 0
    lines = (tmp_path / 'rulers_J3_n6.txt').read_text().splitlines()
    assert lines[0] == '1,2,4'
    with open(tmp_path / 'enumerate_report.json') as f:
        report = json.load(f)
    assert report['count'] == len(lines)
    assert report['complete']


def test_seeded_extension(tmp_path, small_dgr):
    seeds = tmp_path / 'seeds.dgr'
    write_dgr_file([small_dgr], seeds)
    assert run_dgr(tmp_path / 'out', 'search-seeded', '--seeds', str(seeds), '--k', '2', '--m', '9') == 0
    witness = read_dgr_file(tmp_path / 'out' / 'witness_I3_J3_n9.dgr')[0]
    assert witness.is_regular()


def test_constructions(tmp_path):
    assert run_dgr(tmp_path / 'singer', 'constructions', 'singer', '--q', '2', '3') == 0
    with open(tmp_path / 'singer' / 'singer_report.json') as f:
        assert [row['q'] for row in json.load(f)['singer']] == [2, 3]
    assert run_dgr(tmp_path / 'double', 'constructions', 'double', '--times', '1') == 0
    assert (tmp_path / 'double' / 'doubled_I16_J10_n160.dgr').is_file()


def test_conjecture_report(tmp_path):
    assert run_dgr(tmp_path, 'conjecture', '--id', '2') == 0
    with open(tmp_path / 'conjecture2_report.json') as f:
        assert json.load(f)['verdict'] == 'verified-on-range'


######################
#VERIFY WORKFLOW
######################


def test_verify_reports_the_fixture_mismatches(tmp_path):
    assert run_dgr(tmp_path, 'verify', '--checks', 'fixtures') == 1
    with open(tmp_path / 'verify_summary.json') as f:
        summary = json.load(f)
    assert summary['checks']['fixtures']['verdict'] == 'violation'
    assert summary['exit_code'] == 1


def test_verify_registry_checks(tmp_path):
    assert run_dgr(tmp_path, 'verify', '--checks', 'conjecture2', 'tau') == 0
    with open(tmp_path / 'verify_summary.json') as f:
        summary = json.load(f)
    assert sorted(summary['checks']) == ['conjecture2', 'tau']
    assert (tmp_path / 'verify_reports' / 'tau.json').is_file()


def test_instant_checks(registry):
    report, verdict = tau_check(registry)
    assert verdict == 'verified-on-range'
    assert [r['J'] for r in report['tau']] == [5, 10, 11, 12, 13]

    report, verdict = singer_check(registry.g_registry, qs=[2, 3])
    assert verdict == 'verified-on-range'
    assert all(row['perfect'] and row['golomb'] for row in report['singer'])

    report, verdict = doubling_check()
    assert verdict == 'verified-on-range'
    assert {tuple(row['from']) for row in report['doubling']} >= {(8, 10), (13, 13)}

    with pytest.raises(ValueError):
        instant_check('everything')
