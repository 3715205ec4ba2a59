import os
from nipype.pipeline import engine as pe
from nipype.interfaces import utility as niu
from nipype.interfaces.utility import Function

INSTANT_CHECKS = ['fixtures', 'conjecture2', 'conjecture3', 'conjecture5_6', 'tau', 'theorems',
                  'singer', 'doubling', 'theorem4']

SINGER_Q = [2, 3, 4, 5, 7, 8, 9]
THEOREM4_P = [2, 3]


def init_verify_wf(opts, name='dgr_verify_wf'):
    """
    Workflow running every instant check of the verification suite: one node per check,
    each writing its JSON report under {out}/verify_reports/, joined into a summary.

    Workflow:
        parameters
            opts: command line interface parameters; opts.output_dir, opts.registry_dir
                and opts.verify_checks are read

        outputs
            summary_file: verify_summary.json, the verdict of every check
    """
    workflow = pe.Workflow(name=name)

    checks = list(getattr(opts, 'verify_checks', None) or INSTANT_CHECKS)
    for check in checks:
        if check not in INSTANT_CHECKS:
            raise ValueError(f"Unknown check {check}. The available checks are {INSTANT_CHECKS}.")

    check_split = pe.Node(niu.IdentityInterface(fields=['check_name']),
                          name="check_split")
    check_split.iterables = [('check_name', checks)]

    check_node = pe.Node(Function(input_names=['check_name', 'out_dir', 'registry_dir'],
                                  output_names=['report_file', 'verdict'],
                                  function=run_instant_check),
                         name='run_instant_check')
    check_node.inputs.out_dir = os.path.abspath(str(opts.output_dir))
    check_node.inputs.registry_dir = str(getattr(opts, 'registry_dir', None) or 'none')

    summary_joinnode = pe.JoinNode(Function(input_names=['report_files', 'verdicts', 'out_dir'],
                                            output_names=['summary_file'],
                                            function=write_verify_summary),
                                   name='verify_summary',
                                   joinsource='check_split',
                                   joinfield=['report_files', 'verdicts'])
    summary_joinnode.inputs.out_dir = os.path.abspath(str(opts.output_dir))

    workflow.connect([
        (check_split, check_node, [
            ("check_name", "check_name"),
            ]),
        (check_node, summary_joinnode, [
            ("report_file", "report_files"),
            ("verdict", "verdicts"),
            ]),
        ])

    return workflow


def run_instant_check(check_name, out_dir, registry_dir):
    import os
    from dgr.conjecture_pkg.main_wf import instant_check
    from dgr.io_pkg.reports import write_report

    registry_dir = None if registry_dir == 'none' else registry_dir
    report, verdict = instant_check(check_name, registry_dir)
    report_file = write_report(report, f'{out_dir}/verify_reports/{check_name}.json', kind=check_name)
    return os.path.abspath(report_file), verdict


def write_verify_summary(report_files, verdicts, out_dir):
    import os
    import json
    from dgr.io_pkg.reports import write_report, exit_code_for

    checks = {}
    for report_file, verdict in zip(report_files, verdicts):
        with open(report_file, 'r') as f:
            kind = json.load(f).get('kind', os.path.basename(report_file))
        checks[kind] = {'verdict': verdict, 'report': report_file}
    summary = {'checks': checks, 'exit_code': exit_code_for(list(verdicts))}
    summary_file = write_report(summary, f'{out_dir}/verify_summary.json', kind='verify')
    return os.path.abspath(summary_file)


def instant_check(check_name, registry_dir=None):
    """Run one named check over the shipped (or given) data; returns (report dict, verdict)."""
    from nipype import logging
    log = logging.getLogger('nipype.workflow')

    from dgr.io_pkg.registry import BoundsRegistry
    from dgr.conjecture_pkg import conjectures

    registry = BoundsRegistry.load(registry_dir)
    log.info(f"Running the {check_name} check.")

    if check_name == 'fixtures':
        from dgr.io_pkg.fixtures import FixtureSet, validate_fixtures
        report = validate_fixtures(FixtureSet.load(registry_dir), registry)
        return report.to_dict(), report.verdict
    if check_name == 'conjecture2':
        report = conjectures.verify_conjecture2(registry)
        return report.to_dict(), report.verdict
    if check_name == 'conjecture3':
        report = conjectures.verify_conjecture3(registry)
        return report.to_dict(), report.verdict
    if check_name == 'conjecture5_6':
        report = conjectures.verify_conjecture5_6(registry)
        return report.to_dict(), report.verdict
    if check_name == 'theorems':
        report = conjectures.theorem_checks(conjectures.verify_conjecture2(registry),
                                            conjectures.verify_conjecture3(registry), registry)
        return report.to_dict(), report.verdict
    if check_name == 'tau':
        return tau_check(registry)
    if check_name == 'singer':
        return singer_check(registry.g_registry)
    if check_name == 'doubling':
        return doubling_check(registry_dir)
    if check_name == 'theorem4':
        from dgr.constructions_pkg.theorem4 import theorem4_check
        reports = [theorem4_check(p, registry) for p in THEOREM4_P]
        verdict = conjectures.VERIFIED if all(r.ok for r in reports) else conjectures.VIOLATION
        return {'theorem4': [r.to_dict() for r in reports], 'verdict': verdict}, verdict
    raise ValueError(f"Unknown check {check_name}. The available checks are {INSTANT_CHECKS}.")


def tau_check(registry):
    from dgr.conjecture_pkg.tau import tau_bounds
    from dgr.conjecture_pkg.conjectures import VERIFIED, VIOLATION

    records = []
    verdict = VERIFIED
    for J in sorted(set(registry.J_values()) | set(registry.tau)):
        try:
            records.append(tau_bounds(J, registry).to_dict())
        except ValueError as e:
            records.append({'J': J, 'error': str(e)})
            verdict = VIOLATION
    return {'tau': records, 'verdict': verdict}, verdict


def singer_check(g_registry, qs=None):
    from dgr.constructions_pkg.singer import singer_g_bound
    from dgr.core_pkg.ruler import is_golomb
    from dgr.conjecture_pkg.conjectures import VERIFIED, VIOLATION

    rows = []
    verdict = VERIFIED
    for q in (qs or SINGER_Q):
        bound = singer_g_bound(q, g_registry)
        row = bound.to_dict()
        row['perfect'] = bound.singer.is_perfect()
        row['golomb'] = is_golomb(bound.ruler.marks)
        if not (row['perfect'] and row['golomb'] and bound.consistent):
            verdict = VIOLATION
        rows.append(row)
    return {'singer': rows, 'verdict': verdict}, verdict


def doubling_check(data_dir=None, times=2):
    from dgr.io_pkg.fixtures import FixtureSet
    from dgr.constructions_pkg.doubling import iterate_doubling
    from dgr.core_pkg.dgr_set import validate_dgr
    from dgr.conjecture_pkg.conjectures import VERIFIED, VIOLATION

    fixtures = FixtureSet.load(data_dir)
    rows = []
    verdict = VERIFIED
    for (I, J), d in sorted(fixtures.table4.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        if d.n != I * J or len(d.marks) != d.n:
            continue
        for doubled in iterate_doubling(d, times):
            ok = bool(validate_dgr(doubled)) and doubled.is_regular()
            rows.append({'from': [I, J], 'I': doubled.I, 'J': doubled.J, 'n': doubled.n, 'valid': ok})
            if not ok:
                verdict = VIOLATION
    return {'doubling': rows, 'verdict': verdict}, verdict
