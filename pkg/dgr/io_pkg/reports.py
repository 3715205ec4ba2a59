import os
import json

REPORT_SCHEMA = 'dgr-report/1'

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_BUDGET = 2
EXIT_INPUT_ERROR = 3

_exit_codes = {
    'verified-on-range': EXIT_OK,
    'witness': EXIT_OK,
    'proven-absent': EXIT_OK,
    'exact': EXIT_OK,
    'upper-bound': EXIT_OK,
    'consistent': EXIT_OK,
    'vacuous': EXIT_OK,
    'counterexample': EXIT_VIOLATION,
    'violation': EXIT_VIOLATION,
    'budget-exhausted': EXIT_BUDGET,
    'infeasible-at-scale': EXIT_BUDGET,
    'not-found': EXIT_BUDGET,
    'lower-bound': EXIT_BUDGET,
}


def exit_code_for(statuses):
    """The exit code of a run: any violation wins over an exhausted budget, which wins over success."""
    if isinstance(statuses, str):
        statuses = [statuses]
    codes = [_exit_codes.get(s, EXIT_OK) for s in statuses]
    if EXIT_VIOLATION in codes:
        return EXIT_VIOLATION
    if EXIT_BUDGET in codes:
        return EXIT_BUDGET
    return EXIT_OK


def _to_jsonable(value):
    if hasattr(value, 'to_dict'):
        return _to_jsonable(value.to_dict())
    if isinstance(value, dict):
        return {str(k): _to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, set, frozenset, range)):
        items = [_to_jsonable(v) for v in value]
        return sorted(items) if isinstance(value, (set, frozenset)) else items
    return value


def write_report(report, path, kind=None):
    """Write a report (a dict or an object with to_dict) as JSON with a versioned schema field."""
    data = _to_jsonable(report)
    if not isinstance(data, dict):
        data = {'result': data}
    data = dict(data)
    data.setdefault('schema', REPORT_SCHEMA)
    if kind is not None:
        data['kind'] = kind
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, 'w') as f:
        json.dump(data, f, indent=1, sort_keys=True)
        f.write('\n')
    return path
