import os
import argparse
from pathlib import Path
import pathos.multiprocessing as multiprocessing  # Better multiprocessing

from dgr.conjecture_pkg.main_wf import INSTANT_CHECKS


def get_parser():
    """Build parser object"""
    parser = argparse.ArgumentParser(
        description=
            "dgr searches, constructs and verifies disjoint Golomb rulers (DGRs): sets of I \n"
            "pairwise-disjoint J-mark Golomb rulers within {1..n}, and the least such n, H(I,J).",
        formatter_class=argparse.RawTextHelpFormatter)

    subparsers = parser.add_subparsers(
        title='Commands',
        description=
            "Instant checks over the shipped tables are run with 'verify'. The searches \n"
            "('enumerate', 'search-exact', 'search-seeded', 'conjecture') are budgeted and report \n"
            "budget-exhausted rather than running indefinitely.",
        help='Description',
        dest='dgr_command',
        metavar='Command')

    verify = subparsers.add_parser("verify",
        help=
            "\n"
            "Validate the shipped fixtures against the bounds registry, scan the registry for\n"
            "Conjectures 2, 3, 5 and 6, derive the tau(J) records, check the implications between\n"
            "the conjectures, and check the Singer, doubling and Theorem 4 constructions. One JSON\n"
            "report is written per check, and a verify_summary.json.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    enumerate_parser = subparsers.add_parser("enumerate",
        help=
            "\n"
            "Stream every J-mark Golomb ruler within {1..n} (or every (I,J,n)-DGR with --I) in\n"
            "lexicographic order.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    search_exact = subparsers.add_parser("search-exact",
        help=
            "\n"
            "Complete backtracking search for an (I,J,n)-DGR, or for H(I,J) when n is omitted.\n"
            "The search ends with a witness, a proof of absence, or an exhausted budget (with a\n"
            "resumable checkpoint when --checkpoint is given).\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    search_seeded = subparsers.add_parser("search-seeded",
        help=
            "\n"
            "Upper-bound H(I+1,J) from a pool of (I,J,n)-DGRs: k-subsets of the pool, shifted by b\n"
            "steps, are completed with I+1-k new rulers while the target length m descends.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    constructions = subparsers.add_parser("constructions",
        help=
            "\n"
            "Algebraic constructions: Singer perfect difference sets (q+1 marks modulo q^2+q+1),\n"
            "doubling of regular DGRs, and the Theorem 4 values at prime powers p.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    conjecture = subparsers.add_parser("conjecture",
        help=
            "\n"
            "Verify one conjecture on a bounded range: 1 (every H(I,J)-subset of {1..N} holds I\n"
            "disjoint rulers), 2, 3, 5_6 (registry scans), 4 (extension of any ruler to a regular\n"
            "DGR), or the implications between them.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)
    tables = subparsers.add_parser("tables",
        help=
            "\n"
            "Render the bounds registry: the H(I,J) table (rows J, columns I, exact values marked\n"
            "with '*') or the tau(J) table.\n"
            "\n",
        formatter_class=argparse.RawTextHelpFormatter)

    ####Execution
    g_execution = parser.add_argument_group(
        title='Execution Options',
        description=
            "Options for parallel execution, budgets and outputs. They must be provided before\n"
            "the command."
        )
    g_execution.add_argument(
        '--out', dest='output_dir', type=Path, default=Path('dgr_outputs'),
        help=
            "The output folder for reports, witnesses, checkpoints and logs.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--threads', type=int, default=multiprocessing.cpu_count(),
        help=
            "Number of worker processes for the searches. With 1, everything runs in-process.\n"
            "Defaults to number of CPUs.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--budget_secs', '--budget-secs', dest='budget_secs', type=float, default=None,
        help=
            "Wall-clock budget (in seconds) of the whole command. Without a budget, searches\n"
            "run to completion.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--search_budget', type=str, default='secs=none,nodes=none,xi_nodes=200000,attempt_secs=none',
        help=
            "Finer budgets, as key=value pairs separated by commas:\n"
            "   nodes: search nodes for one exact search.\n"
            "   xi_nodes: search nodes for completing one seeded candidate.\n"
            "   attempt_secs: seconds for one (k, m) attempt of the seeded search.\n"
            "   secs: same as --budget_secs, which takes precedence when given.\n"
            "Use 'none' for no limit.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--seed_order', '--seed-order', dest='seed_order', default='near', choices=['near', 'subset'],
        help=
            "Order of the seeded candidates: 'near' takes the shift b of smallest |b| first,\n"
            "'subset' enumerates subsets first and shifts within each subset.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--memory_cap_gb', type=float, default=2.0,
        help=
            "Memory cap (in GiB) for a materialized conflict graph; above it the graph is\n"
            "streamed instead.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        '--registry_dir', type=str, default=None,
        help=
            "Folder holding table2_H.txt, table3_tau.txt, g_optimal.txt and the fixture files,\n"
            "replacing the data shipped with the package.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        "-p", "--plugin", default='Linear',
        choices=['Linear', 'MultiProc'],
        help=
            "Specify the nipype plugin running the 'verify' workflow.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        "--figures", dest='figures', action='store_true',
        help=
            "Write a figure next to each witness and descent log.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        "--figure_format", default='png',
        choices=['png', 'svg'],
        help=
            "Select the file format for figures.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        "--verbose", type=int, default=1,
        help=
            "Set the verbose level. 0=WARNING, 1=INFO, 2 or above=DEBUG.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    g_execution.add_argument(
        "-f", "--force", dest='force', action='store_true',
        help=
            "The command will not stop if previous outputs are encountered. \n"
            "Previous outputs will be overwritten.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Verify
    verify.add_argument(
        '--checks', type=str, nargs="*", default=INSTANT_CHECKS, choices=INSTANT_CHECKS,
        help=
            "Subset of the checks to run.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Enumerate
    enumerate_parser.add_argument(
        'J', type=int,
        help="Number of marks per ruler.\n\n")
    enumerate_parser.add_argument(
        'n', type=int,
        help="Largest allowed mark.\n\n")
    enumerate_parser.add_argument(
        '--I', dest='I', type=int, default=None,
        help=
            "Enumerate (I,J,n)-DGRs instead of single rulers.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    enumerate_parser.add_argument(
        '--limit', type=int, default=None,
        help=
            "Stop after this many items.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    enumerate_parser.add_argument(
        '--count_only', dest='count_only', action='store_true',
        help=
            "Only count the items, without writing them.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Exact search
    search_exact.add_argument(
        'I', type=int,
        help="Number of rulers.\n\n")
    search_exact.add_argument(
        'J', type=int,
        help="Number of marks per ruler.\n\n")
    search_exact.add_argument(
        'n', type=int, nargs='?', default=None,
        help=
            "Largest allowed mark. When omitted, n ascends from the pigeonhole bound IJ\n"
            "until a DGR is found, which computes H(I,J).\n"
            "\n"
        )
    search_exact.add_argument(
        '--max_n', type=int, default=None,
        help=
            "Largest n tried when computing H(I,J).\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--seed', type=Path, default=None,
        help=
            "A DGR file whose first block is a partial DGR that the witness must contain.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--checkpoint', type=str, default=None,
        help=
            "File receiving the open subtrees when the budget runs out.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--resume', type=str, default=None,
        help=
            "Resume the search from a checkpoint file written with --checkpoint.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--prove_absent', '--prove-absent', dest='prove_absent', action='store_true',
        help=
            "Claim that no (I,J,n)-DGR exists. The node limit of --search_budget is lifted so\n"
            "that only --budget_secs bounds the search, the exit code is 0 when the absence is\n"
            "proven and 1 when a witness refutes the claim. Needs n. Without this flag, any\n"
            "search that exhausts its tree also reports proven-absent.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--no_symmetry', dest='no_symmetry', action='store_true',
        help=
            "Disable the mirror symmetry reduction.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_exact.add_argument(
        '--merge', dest='merge', action='store_true',
        help=
            "Merge an exact or improved value of H(I,J) into the registry files of --registry_dir.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Seeded search
    search_seeded.add_argument(
        '--seeds', type=Path, default=None,
        help=
            "DGR file holding the seed pool, all (I,J,n)-DGRs with the same I, J and n. By\n"
            "default, the (6,10,70)-DGR opening the shipped descent trace.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--enumerate_pool', type=str, default=None,
        help=
            "Build the pool from every (I,J,n)-DGR instead of --seeds, given as 'I,J,n' and\n"
            "capped by --pool_cap.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--target_I', type=int, default=None,
        help=
            "Chain the descent level by level up to target_I rulers. By default a single level\n"
            "(I+1) is run.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--k_policy', type=str, default='auto',
        help=
            "k values tried at each m level: 'auto' (I-2 down to 1), an integer k (k down to 1),\n"
            "or a descending list such as '3,2,1'.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--k', type=int, default=None,
        help=
            "Run a single extension attempt with this k at --m, instead of the descent.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--m', type=int, default=None,
        help=
            "Target length of the single attempt run with --k.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--m0', type=int, default=None,
        help=
            "First m level of the descent. Defaults to the midpoint of {a..n+J-1}, where\n"
            "a = max(n+1, (I+1)J).\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--max_m', type=int, default=None,
        help=
            "Largest m level tried while ascending. Defaults to n+J.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    search_seeded.add_argument(
        '--pool_cap', type=int, default=1000,
        help=
            "Largest number of DGRs kept in an enumerated pool.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Constructions
    constructions.add_argument(
        'construction', choices=['singer', 'double', 'theorem4'],
        help="The construction to run.\n\n")
    constructions.add_argument(
        '--q', type=int, nargs="*", default=[2, 3, 4, 5, 7, 8, 9],
        help=
            "Prime powers for the Singer construction.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    constructions.add_argument(
        '--in', dest='in_file', type=Path, default=None,
        help=
            "DGR file holding a regular DGR to double. By default, the shipped (8,10,80)-DGR.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    constructions.add_argument(
        '--times', type=int, default=2,
        help=
            "Number of successive doublings.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    constructions.add_argument(
        '--p', type=int, nargs="*", default=[2, 3],
        help=
            "Prime powers p at which the Theorem 4 values are checked.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    constructions.add_argument(
        '--theorem4_search_max', type=int, default=3,
        help=
            "Largest p for which the Theorem 4 values are also checked by direct search.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Conjectures
    conjecture.add_argument(
        '--id', dest='conjecture_id', default='2', choices=['1', '2', '3', '4', '5_6', 'theorems'],
        help=
            "The conjecture to verify.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    conjecture.add_argument(
        '--I', dest='I', type=int, default=None,
        help="I for Conjectures 1 and 4.\n(default: %(default)s)\n\n")
    conjecture.add_argument(
        '--J', dest='J', type=int, default=None,
        help="J for Conjectures 1 and 4.\n(default: %(default)s)\n\n")
    conjecture.add_argument(
        '--N', dest='N', type=int, default=None,
        help=
            "Conjecture 1 is tested on the subsets of {1..N}.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    conjecture.add_argument(
        '--y_mode', dest='y_mode', action='store_true',
        help=
            "For Conjecture 1, also compute Y_N(I,J), the least size such that every subset of\n"
            "{1..N} of that size holds I disjoint J-mark rulers.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    conjecture.add_argument(
        '--mode', default='single', choices=['single', 'pairs'],
        help=
            "For Conjecture 4: 'single' extends every ruler within {1..(I+1)J} to a regular\n"
            "(I+1,J,(I+1)J)-DGR; 'pairs' checks that every two disjoint rulers within {1..IJ}\n"
            "lie in a common regular (I,J,IJ)-DGR.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    conjecture.add_argument(
        '--subset_cap', type=float, default=1e8,
        help=
            "Largest number of subsets (Conjecture 1) or seeds (Conjecture 4) attempted; above\n"
            "it the verdict is infeasible-at-scale.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    ####Tables
    tables.add_argument(
        '--format', dest='table_format', default='text', choices=['text', 'json'],
        help=
            "Output format.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    tables.add_argument(
        '--table', default='H', choices=['H', 'tau'],
        help=
            "The table to render.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    tables.add_argument(
        '--I_range', '--I-range', dest='I_range', type=str, default='7-13',
        help=
            "Columns of the H table, as 'first-last' numbers of rulers.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    tables.add_argument(
        '--J_range', '--J-range', dest='J_range', type=str, default='10-13',
        help=
            "Rows of the H table and of the tau table, as 'first-last' numbers of marks.\n"
            "(default: %(default)s)\n"
            "\n"
        )
    tables.add_argument(
        '--extended', dest='extended', action='store_true',
        help=
            "Render every registry entry, ignoring --I_range and --J_range.\n"
            "(default: %(default)s)\n"
            "\n"
        )

    return parser


def read_parser(parser, args):
    if args is None:
        opts = parser.parse_args()
    else:
        opts = parser.parse_args(args)

    if opts.dgr_command is None:
        return opts

    opts.search_budget = parse_argument(opt=opts.search_budget,
        key_value_pairs = {'secs':float, 'nodes':int, 'xi_nodes':int, 'attempt_secs':float},
        defaults = {'secs':None, 'nodes':None, 'xi_nodes':200000, 'attempt_secs':None},
        name='search_budget')
    if opts.budget_secs is None:
        opts.budget_secs = opts.search_budget['secs']

    if opts.threads < 1:
        raise ValueError(f"--threads must be at least 1, {opts.threads} was provided.")
    if opts.budget_secs is not None and opts.budget_secs <= 0:
        raise ValueError(f"--budget_secs must be positive, {opts.budget_secs} was provided.")
    if opts.registry_dir is not None:
        opts.registry_dir = os.path.abspath(opts.registry_dir)
        if not os.path.isdir(opts.registry_dir):
            raise ValueError(f"--registry_dir {opts.registry_dir} doesn't exists.")

    if opts.dgr_command == 'enumerate':
        if opts.J < 1 or opts.n < 1:
            raise ValueError(f"J and n must be positive integers, J={opts.J} and n={opts.n} were provided.")
    elif opts.dgr_command == 'search-exact':
        if opts.I < 1 or opts.J < 1:
            raise ValueError(f"I and J must be positive integers, I={opts.I} and J={opts.J} were provided.")
        if opts.resume is not None and opts.n is None:
            raise ValueError("--resume needs the n of the interrupted search.")
        if opts.prove_absent and opts.n is None:
            raise ValueError("--prove_absent needs the n whose DGRs are claimed absent.")
        for name, path in [('--seed', opts.seed), ('--resume', opts.resume)]:
            if path is not None and not os.path.isfile(path):
                raise ValueError(f"{name} file {path} doesn't exists.")
    elif opts.dgr_command == 'search-seeded':
        if opts.seeds is not None and opts.enumerate_pool is not None:
            raise ValueError(f"""
                Either a seed file (--seeds) or an enumerated pool (--enumerate_pool) can be
                provided, not both.
                """)
        if opts.seeds is not None and not os.path.isfile(opts.seeds):
            raise ValueError(f"--seeds file {opts.seeds} doesn't exists.")
        if opts.enumerate_pool is not None:
            opts.enumerate_pool = parse_triplet(opts.enumerate_pool, 'enumerate_pool')
        if (opts.k is None) != (opts.m is None):
            raise ValueError("--k and --m must be provided together.")
    elif opts.dgr_command == 'constructions':
        if opts.in_file is not None and not os.path.isfile(opts.in_file):
            raise ValueError(f"--in file {opts.in_file} doesn't exists.")
        if opts.times < 1:
            raise ValueError(f"--times must be at least 1, {opts.times} was provided.")
    elif opts.dgr_command == 'conjecture':
        if opts.conjecture_id in ['1', '4'] and (opts.I is None or opts.J is None):
            raise ValueError(f"Conjecture {opts.conjecture_id} needs both --I and --J.")
        if opts.conjecture_id == '1' and opts.N is None:
            raise ValueError("Conjecture 1 needs --N, the size of the universe {1..N}.")
    elif opts.dgr_command == 'tables':
        opts.I_range = parse_range(opts.I_range, 'I_range')
        opts.J_range = parse_range(opts.J_range, 'J_range')

    return opts


def parse_argument(opt, key_value_pairs, defaults, name):
    key_list = list(key_value_pairs.keys())
    l = opt.split(',')
    opt_dict = {}
    for e in l:
        if not '=' in e:
            raise ValueError(f"Provided option must follow the 'key=value' syntax, {e} was found instead for --{name}.")
        s = e.split('=')
        if not len(s)==2:
            raise ValueError(f"Provided option must follow the 'key=value' syntax, {e} was found instead for --{name}.")
        [key,value] = s
        if not key in key_list:
            raise ValueError(f"The provided key {key} is not part of the available options {key_list} for --{name}.")
        if key_value_pairs[key] in [int,float]:
            if value=='none':
                value=None
            else:
                try:
                    value = key_value_pairs[key](value)
                except ValueError:
                    raise ValueError(f"The value {value} for the key {key} of --{name} must be a number or 'none'.")
        else:
            if not value in key_value_pairs[key]:
                raise ValueError(f"The provided value {value} is not part of the available options {key_value_pairs[key]} for the key {key} for --{name}.")
            if value=='true':
                value=True
            elif value=='false':
                value=False
        opt_dict[key]=value

    for key in key_list:
        if not key in list(opt_dict.keys()):
            opt_dict[key]=defaults[key]
    return opt_dict


def parse_triplet(opt, name):
    try:
        values = [int(v) for v in opt.split(',')]
    except ValueError:
        raise ValueError(f"--{name} must be three integers 'I,J,n', {opt} was provided.")
    if not len(values)==3:
        raise ValueError(f"--{name} must be three integers 'I,J,n', {opt} was provided.")
    return tuple(values)


def parse_range(opt, name):
    try:
        first, last = [int(v) for v in opt.split('-')]
    except ValueError:
        raise ValueError(f"--{name} must be two integers 'first-last', {opt} was provided.")
    if first < 1 or last < first:
        raise ValueError(f"--{name} must satisfy 1 <= first <= last, {opt} was provided.")
    return range(first, last + 1)
