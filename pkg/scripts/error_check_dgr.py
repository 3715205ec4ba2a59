#! /usr/bin/env python

import os
import tempfile
import subprocess
from dgr.utils import generate_token_data

'''PARAMETERS NOT TESTED
search-seeded:
    --target_I: the regular chain from (7,10,74) to (8,10,80) takes up to an hour; its descent
        is covered by the slow test suite (test_table1_regular_level_eight)
    --enumerate_pool: enumerating (6,10,70)-DGRs is out of reach here
conjecture:
    --id 4 at (4,5): hours of search, covered by the slow test suite
    --id 1: only tested on small (I,J,N)
'''


import argparse
def get_parser():
    """Build parser object"""
    parser = argparse.ArgumentParser(
        description=
            "Parser to handle testing using token data.",
        formatter_class=argparse.RawTextHelpFormatter)
    parser.add_argument(
        "--complete", dest='complete', action='store_true',
        help=
            "Run a complete testing of the commands, including the seeded reproduction (minutes)."
        )
    parser.add_argument(
        '--output_dir', action='store', type=str,
        help=
            "Provide an output directory instead of using a temporary directory.\n"
            "This prevents the deletion of outputs.\n"
        )
    return parser

parser = get_parser()
opts = parser.parse_args()

if opts.output_dir is None:
    tmppath = tempfile.mkdtemp()
else:
    tmppath = opts.output_dir

generate_token_data(tmppath)


def run(command, expected=0):
    process = subprocess.run(
        command,
        shell=True,
        )
    if not process.returncode == expected:
        raise RuntimeError(f"'{command}' exited with {process.returncode}, {expected} was expected.")


# the shipped fixtures exceed their registry cell at (10,12) and (9,13), which the check reports
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/fixtures verify --checks fixtures", expected=1)

command = f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/verify verify --checks conjecture2 conjecture3 \
    conjecture5_6 tau theorems singer doubling theorem4"
run(command)

run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/enumerate enumerate 5 12")
run(f"dgr --force --verbose 1 --threads 2 --out {tmppath}/outputs/enumerate_dgr enumerate 3 6 --I 2 --limit 10")

run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/H search-exact 4 3")
run(f"dgr --force --verbose 1 --threads 2 --out {tmppath}/outputs/exact search-exact 3 2 6 --no_symmetry")
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/seeded_exact search-exact 4 3 12 \
    --seed {tmppath}/inputs/token_small.dgr")

# a node budget too small to finish, then resumed from the checkpoint
run(f"dgr --force --verbose 1 --threads 1 --search_budget nodes=1 --out {tmppath}/outputs/checkpoint \
    search-exact 3 4 20 --checkpoint {tmppath}/outputs/checkpoint/frontier.json", expected=2)
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/checkpoint \
    search-exact 3 4 20 --resume {tmppath}/outputs/checkpoint/frontier.json")

run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/singer constructions singer --q 2 3 4 5")
run(f"dgr --force --verbose 1 --threads 1 --figures --out {tmppath}/outputs/double constructions double --times 2")
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/double_token constructions double \
    --in {tmppath}/inputs/token_regular.dgr --times 1")
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/theorem4 constructions theorem4 --p 2 3")

run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/c2 conjecture --id 2")
run(f"dgr --force --verbose 1 --threads 2 --out {tmppath}/outputs/c1 conjecture --id 1 --I 2 --J 2 --N 7 --y_mode")
run(f"dgr --force --verbose 1 --threads 1 --out {tmppath}/outputs/c4 conjecture --id 4 --I 2 --J 2 --mode single")

run(f"dgr --force --verbose 1 --out {tmppath}/outputs/tables tables --format text --table H")
run(f"dgr --force --verbose 1 --out {tmppath}/outputs/tables tables --format json --table tau")

# input errors exit with 3
run(f"dgr --force --out {tmppath}/outputs/errors conjecture --id 1 --I 2", expected=3)
run(f"dgr --force --out {tmppath}/outputs/errors --search_budget nodes=many search-exact 2 3 6", expected=3)

if opts.complete:
    run(f"dgr --force --verbose 1 --budget_secs 1800 --figures --out {tmppath}/outputs/seeded search-seeded \
        --seeds {tmppath}/inputs/table1_seed.dgr --k 1 --m 74")
    run(f"dgr --force --verbose 1 --budget_secs 1800 --figures --out {tmppath}/outputs/descent search-seeded \
        --seeds {tmppath}/inputs/table1_seed.dgr")
