#! /usr/bin/env python

from dgr.utils import generate_token_data
from dgr.run_main import execute_workflow

import tempfile
tmppath = tempfile.mkdtemp()

generate_token_data(tmppath)

output_folder = f'{tmppath}/outputs'

#### HERE ARE SET THE DESIRED PARAMETERS FOR THE SEEDED SEARCH
args = [
        '--out', output_folder,
        '--threads', '1',
        '--budget_secs', '600',
        '-f',
        '--verbose', '2',
        'search-seeded',
        '--seeds', f'{tmppath}/inputs/table1_seed.dgr',
        '--k', '1', '--m', '74',
        ]

execute_workflow(args=args)



'''

args = [
        '--out', output_folder,
        '--threads', '1',
        '-f',
        'search-exact', '2', '3', '6',
        '--seed', f'{tmppath}/inputs/token_small.dgr',
        ]
execute_workflow(args=args)

'''
