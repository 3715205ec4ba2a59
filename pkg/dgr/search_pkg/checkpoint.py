import os
import json

FRONTIER_SCHEMA = 'dgr-frontier/1'


def save_frontier(path, I, J, n, frontier, nodes=0, seed=None):
    """Write the frontier of an interrupted exact search: a list of DFS stacks of frames."""
    from nipype import logging
    log = logging.getLogger('nipype.workflow')

    data = {
        'schema': FRONTIER_SCHEMA,
        'I': I,
        'J': J,
        'n': n,
        'nodes': nodes,
        'seed': None if seed is None else [list(r) for r in seed.rulers],
        'frontier': frontier,
    }
    folder = os.path.dirname(os.path.abspath(path))
    os.makedirs(folder, exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=1)
    log.info(f"Checkpoint with {len(frontier)} open subtrees written to {path}.")
    return path


def load_frontier(path, I=None, J=None, n=None):
    with open(path) as f:
        data = json.load(f)
    if data.get('schema') != FRONTIER_SCHEMA:
        raise ValueError(f"{path} is not a search checkpoint (schema {data.get('schema')!r}, expected {FRONTIER_SCHEMA!r}).")
    for key, value in (('I', I), ('J', J), ('n', n)):
        if value is not None and data[key] != value:
            raise ValueError(f"""The checkpoint {path} was written for {key}={data[key]},
but the search was launched with {key}={value}.""")
    return data
