import os
import json
import pickle
from nipype import logging, config
from .parser import get_parser, read_parser
from .io_pkg.reports import write_report, exit_code_for, EXIT_INPUT_ERROR


def execute_workflow(args=None):
    # generates the parser CLI and execute the command based on specified parameters; returns the exit code
    parser = get_parser()
    try:
        opts = read_parser(parser, args)
    except ValueError as e:
        log = logging.getLogger('nipype.workflow')
        log.critical(f'dgr input error: {e}')
        return EXIT_INPUT_ERROR

    if opts.dgr_command is None:
        parser.print_help()
        return EXIT_INPUT_ERROR

    # convert the output path to absolute if not already the case
    opts.output_dir = os.path.abspath(str(opts.output_dir))
    if not os.path.isdir(opts.output_dir):
        os.makedirs(opts.output_dir)

    try:
        log = prep_logging(opts, opts.output_dir)
    except ValueError as e:
        log = logging.getLogger('nipype.workflow')
        log.critical(f'dgr input error: {e}')
        return EXIT_INPUT_ERROR

    from .__version__ import __version__
    log.info('Running dgr - version: '+__version__)

    # print complete CLI command
    args = 'CLI INPUTS: \n'
    for arg in vars(opts):
        input = f'-> {arg} = {getattr(opts, arg)} \n'
        args += input
    log.info(args)

    cli_file = f'{opts.output_dir}/dgr_{opts.dgr_command}.pkl'
    with open(cli_file, 'wb') as handle:
        pickle.dump(opts, handle, protocol=pickle.HIGHEST_PROTOCOL)

    commands = {
        'verify': verify,
        'enumerate': enumerate_command,
        'search-exact': search_exact,
        'search-seeded': search_seeded,
        'constructions': constructions,
        'conjecture': conjecture,
        'tables': tables,
    }
    try:
        statuses = commands[opts.dgr_command](opts, log)
    except ValueError as e:
        log.critical(f'dgr input error: {e}')
        return EXIT_INPUT_ERROR
    except Exception as e:
        log.critical(f'dgr failed: {e}')
        raise

    exit_code = exit_code_for(statuses)
    log.info(f'dgr {opts.dgr_command} finished with {statuses}, exit code {exit_code}.')
    return exit_code


def prep_logging(opts, output_folder):
    cli_file = f'{output_folder}/dgr_{opts.dgr_command}.pkl'
    if os.path.isfile(cli_file) and not opts.force:
        raise ValueError(f"""
            A previous run was indicated by the presence of {cli_file}.
            This can lead to inconsistencies between previous outputs and the log files.
            To prevent this, we recommend using a new --out folder for the {opts.dgr_command}
            command. To continue with your execution, the {cli_file} file must be
            removed (use --force to automatically do so).
            """)

    # remove old versions of the log if already existing
    log_path = f'{output_folder}/dgr_{opts.dgr_command}.log'
    if os.path.isfile(log_path):
        os.remove(log_path)

    config.update_config({'logging': {'log_directory': output_folder,
                                    'log_to_file': True}})

    # setting workflow logging level
    if opts.verbose==0:
        level="WARNING"
    elif opts.verbose==1:
        level="INFO"
    elif opts.verbose>=2:
        level="DEBUG"
        config.enable_debug_mode()
    else:
        raise ValueError(f"--verbose must be provided an integer of 0 or above. {opts.verbose} was provided instead.")

    # nipype has hard-coded 'pypeline.log' filename; we rename it after it is created, and change the handlers
    logging.update_logging(config)
    if os.path.isfile(f'{output_folder}/pypeline.log'):
        os.rename(f'{output_folder}/pypeline.log', log_path)
    # change the handlers path to the desired file
    for logger in logging.loggers.keys():
        log = logging.getLogger(logger)
        for handler in log.handlers:
            if hasattr(handler, 'baseFilename'):
                handler.baseFilename = log_path

    # set the defined level of verbose
    log = logging.getLogger('nipype.workflow')
    log.setLevel(level)
    log.debug('Debug ON')
    return log


def search_config(opts, **changes):
    from .search_pkg.config import SearchConfig
    return SearchConfig.from_opts(opts).replace(**changes)


def load_registry(opts):
    from .io_pkg.registry import BoundsRegistry
    return BoundsRegistry.load(opts.registry_dir)


def write_witness(d, opts, name):
    from .io_pkg.dgr_file import write_dgr_file
    path = f'{opts.output_dir}/{name}.dgr'
    write_dgr_file([d], path)
    if opts.figures:
        from .visualization import plot_dgr
        plot_dgr(d, f'{opts.output_dir}/{name}', figure_format=opts.figure_format)
    return path


def verify(opts, log):
    from .conjecture_pkg.main_wf import init_verify_wf
    opts.verify_checks = opts.checks
    workflow = init_verify_wf(opts)
    workflow.base_dir = opts.output_dir

    log.info(f'Running workflow with {opts.plugin} plugin.')
    # execute workflow, with plugin_args limiting the load for parallel execution
    graph_out = workflow.run(plugin=opts.plugin, plugin_args={'max_jobs': 50, 'dont_resubmit_completed_jobs': True,
                                                  'n_procs': opts.threads})
    # save the workflow execution
    workflow_file = f'{opts.output_dir}/dgr_verify_workflow.pkl'
    with open(workflow_file, 'wb') as handle:
        pickle.dump(graph_out, handle, protocol=pickle.HIGHEST_PROTOCOL)

    with open(f'{opts.output_dir}/verify_summary.json', 'r') as f:
        summary = json.load(f)
    for name, check in sorted(summary['checks'].items()):
        log.info(f'{name}: {check["verdict"]}')
    return [check['verdict'] for check in summary['checks'].values()]


def enumerate_command(opts, log):
    from .utils import format_marks
    config = search_config(opts)
    budget = config.make_budget()
    complete = True
    count = 0
    if opts.I is None:
        from .core_pkg.enumeration import enumerate_rulers
        stream = (r.marks for r in enumerate_rulers(opts.J, opts.n))
        out_file = f'{opts.output_dir}/rulers_J{opts.J}_n{opts.n}.txt'
    else:
        from .search_pkg.exact import enumerate_dgrs
        stream = enumerate_dgrs(opts.I, opts.J, opts.n, config, budget=budget)
        out_file = f'{opts.output_dir}/dgrs_I{opts.I}_J{opts.J}_n{opts.n}.dgr'

    from .io_pkg.dgr_file import emit_dgr_file
    with open(out_file, 'w') as f:
        for item in stream:
            if opts.limit is not None and count >= opts.limit:
                complete = False
                break
            count += 1
            if opts.count_only:
                continue
            if opts.I is None:
                f.write(format_marks(item) + '\n')
            else:
                f.write(('\n' if count > 1 else '') + emit_dgr_file([item]).decode('utf-8'))
    if budget.hit:
        complete = False
    status = 'budget-exhausted' if budget.hit else 'verified-on-range'
    report = {'J': opts.J, 'n': opts.n, 'I': opts.I, 'count': count, 'complete': complete,
              'limit': opts.limit, 'status': status, 'file': None if opts.count_only else out_file}
    write_report(report, f'{opts.output_dir}/enumerate_report.json', kind='enumerate')
    log.info(f'{count} items enumerated ({"complete" if complete else "truncated"}).')
    return [status]


def search_exact(opts, log):
    from .search_pkg.exact import find_dgr_exact, compute_H
    from .search_pkg.checkpoint import save_frontier, load_frontier
    from .io_pkg.dgr_file import read_dgr_file
    config = search_config(opts, max_n=opts.max_n)
    prove_absent = getattr(opts, 'prove_absent', False)
    if prove_absent and config.node_budget is not None:
        log.info(f'--prove_absent lifts the node limit of {config.node_budget}.')
        config = config.replace(node_budget=None)

    seed = None
    if opts.seed is not None:
        seed = read_dgr_file(opts.seed)[0]

    if opts.n is None:
        value = compute_H(opts.I, opts.J, config)
        log.info(f'H({opts.I},{opts.J}): {value.status} {value.value}')
        if value.witness is not None:
            write_witness(value.witness, opts, f'witness_I{opts.I}_J{opts.J}_n{value.value}')
        if opts.merge:
            merge_into_registry(value, opts, log)
        write_report(value, f'{opts.output_dir}/search_exact_report.json', kind='compute_H')
        return [value.status]

    frontier = None
    if opts.resume is not None:
        data = load_frontier(opts.resume, opts.I, opts.J, opts.n)
        frontier = data['frontier']
        if data['seed'] is not None:
            from .core_pkg.dgr_set import DgrSet
            seed = DgrSet(data['seed'], n=opts.n)
        log.info(f'Resuming from {opts.resume} with {len(frontier)} open subtrees.')

    result = find_dgr_exact(opts.I, opts.J, opts.n, config, seed=seed, frontier=frontier)
    log.info(f'({opts.I},{opts.J},{opts.n})-DGR search: {result.status} after {result.nodes} nodes.')
    if result.status == 'witness':
        write_witness(result.witness, opts, f'witness_I{opts.I}_J{opts.J}_n{opts.n}')
    elif result.status == 'budget-exhausted' and opts.checkpoint is not None:
        save_frontier(opts.checkpoint, opts.I, opts.J, opts.n, result.frontier, nodes=result.nodes, seed=seed)
    write_report(result, f'{opts.output_dir}/search_exact_report.json', kind='find_dgr_exact')
    if prove_absent and result.status == 'witness':
        log.warning(f'A ({opts.I},{opts.J},{opts.n})-DGR exists: the claimed absence is refuted.')
        return ['counterexample']
    return [result.status]


def merge_into_registry(value, opts, log):
    if opts.registry_dir is None:
        raise ValueError("--merge writes to the registry files, which needs --registry_dir.")
    registry = load_registry(opts)
    kept = registry.merge(value)
    registry.save(opts.registry_dir)
    log.info(f'Registry entry for H({value.I},{value.J}): {kept}')


def search_seeded(opts, log):
    from .search_pkg.seeded import (SeedPool, collect_seed_pool, seeded_extend, bound_descent, chain_descent,
                                    write_descent_log, descent_table)
    from .io_pkg.dgr_file import read_dgr_file
    config = search_config(opts)

    if opts.enumerate_pool is not None:
        I, J, n = opts.enumerate_pool
        pool = collect_seed_pool(I, J, n, config)
    elif opts.seeds is not None:
        pool = SeedPool(read_dgr_file(opts.seeds), source=str(opts.seeds))
    else:
        from .io_pkg.fixtures import FixtureSet
        pool = SeedPool([FixtureSet.load(opts.registry_dir).table1[(6, 10)]], source='table1:I=6,J=10')
    log.info(f'Seed pool: {pool}')

    if opts.k is not None:
        result = seeded_extend(pool, opts.k, opts.m, config)
        log.info(f'Extension with k={opts.k} at m={opts.m}: {result.status}')
        if result.witness is not None:
            write_witness(result.witness, opts, f'witness_I{pool.I + 1}_J{pool.J}_n{opts.m}')
        write_report(result, f'{opts.output_dir}/search_seeded_report.json', kind='seeded_extend')
        return [result.status]

    registry = load_registry(opts)
    if opts.target_I is None:
        results = [bound_descent(pool, config, registry=registry)]
    else:
        results = chain_descent(pool, opts.target_I, config, registry=registry)
    for r in results:
        if r.witness is not None:
            write_witness(r.witness, opts, f'witness_I{r.I}_J{r.J}_n{r.m}')
    write_descent_log(results, f'{opts.output_dir}/descent_log.json', seeds=pool)
    table = descent_table(results)
    log.info('Descent trace:\n' + table.to_string(index=False))
    table.to_csv(f'{opts.output_dir}/descent_table.csv', index=False)
    if opts.figures:
        from .visualization import plot_descent
        plot_descent(results, f'{opts.output_dir}/descent', figure_format=opts.figure_format)
    return [r.status for r in results]


def constructions(opts, log):
    from .conjecture_pkg.main_wf import singer_check
    from .conjecture_pkg.conjectures import VERIFIED, VIOLATION

    if opts.construction == 'singer':
        registry = load_registry(opts)
        report, verdict = singer_check(registry.g_registry, qs=opts.q)
        write_report(report, f'{opts.output_dir}/singer_report.json', kind='singer')
        return [verdict]

    if opts.construction == 'double':
        from .constructions_pkg.doubling import iterate_doubling
        from .core_pkg.dgr_set import validate_dgr
        if opts.in_file is None:
            from .io_pkg.fixtures import FixtureSet
            d = FixtureSet.load(opts.registry_dir).table4[(8, 10)]
        else:
            from .io_pkg.dgr_file import read_dgr_file
            d = read_dgr_file(opts.in_file)[0]
        rows = []
        verdict = VERIFIED
        for doubled in iterate_doubling(d, opts.times):
            ok = bool(validate_dgr(doubled)) and doubled.is_regular()
            verdict = verdict if ok else VIOLATION
            rows.append({'I': doubled.I, 'J': doubled.J, 'n': doubled.n, 'valid': ok,
                         'file': write_witness(doubled, opts, f'doubled_I{doubled.I}_J{doubled.J}_n{doubled.n}')})
            log.info(f'Doubled to a regular ({doubled.I},{doubled.J},{doubled.n})-DGR: {ok}')
        write_report({'doubling': rows, 'verdict': verdict}, f'{opts.output_dir}/doubling_report.json', kind='double')
        return [verdict]

    from .constructions_pkg.theorem4 import theorem4_check
    registry = load_registry(opts)
    config = search_config(opts, theorem4_search_max=opts.theorem4_search_max)
    reports = [theorem4_check(p, registry, config) for p in opts.p]
    verdict = VERIFIED if all(r.ok for r in reports) else VIOLATION
    write_report({'theorem4': reports, 'verdict': verdict}, f'{opts.output_dir}/theorem4_report.json', kind='theorem4')
    return [verdict]


def conjecture(opts, log):
    from .conjecture_pkg import conjectures
    registry = load_registry(opts)
    config = search_config(opts, subset_cap=int(opts.subset_cap))

    if opts.conjecture_id == '1':
        report = conjectures.verify_conjecture1(opts.I, opts.J, opts.N, config, registry=registry, y_mode=opts.y_mode)
    elif opts.conjecture_id == '2':
        report = conjectures.verify_conjecture2(registry)
    elif opts.conjecture_id == '3':
        report = conjectures.verify_conjecture3(registry)
    elif opts.conjecture_id == '4':
        report = conjectures.verify_conjecture4(opts.I, opts.J, config, registry=registry, mode=opts.mode)
    elif opts.conjecture_id == '5_6':
        report = conjectures.verify_conjecture5_6(registry)
    else:
        report = conjectures.theorem_checks(conjectures.verify_conjecture2(registry),
                                            conjectures.verify_conjecture3(registry), registry)
    log.info(f'Conjecture {opts.conjecture_id}: {report.verdict}')
    write_report(report, f'{opts.output_dir}/conjecture{opts.conjecture_id}_report.json', kind='conjecture')
    return [report.verdict]


def tables(opts, log):
    from .io_pkg.registry import registry_table
    registry = load_registry(opts)
    if opts.extended:
        data = registry_table(registry, fmt=opts.table_format, table=opts.table)
    else:
        data = registry_table(registry, fmt=opts.table_format, table=opts.table,
                              I_range=opts.I_range, J_range=opts.J_range)
    extension = 'json' if opts.table_format == 'json' else 'txt'
    out_file = f'{opts.output_dir}/table_{opts.table}.{extension}'
    with open(out_file, 'wb') as f:
        f.write(data)
    print(data.decode('utf-8'), end='')
    return ['verified-on-range']
