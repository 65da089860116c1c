import json
import os

import jsonschema
import pytest

import contextlab
from contextlab._internal import cli, graphbounds
from contextlab._internal import scenario as scn


def run(capsys, *argv, **kwargs):
    code = cli.main(list(argv), environ=kwargs.get('environ', {}))
    out, err = capsys.readouterr()
    return code, out


def test_verify_default(capsys):
    code, out = run(capsys, 'verify')
    assert code == 0
    assert '20/20 projector decompositions verified' in out
    assert 'FAILED' not in out
    assert 'differs at A19 (XZZ)' in out


def test_verify_corrupted_scenario(capsys, tmp_path):
    obj = scn.scenario_to_json(scn.fully_contextual_c_scenario())
    obj['contexts'][0] = [0, 3]
    path = tmp_path / 'broken.json'
    path.write_text(json.dumps(obj))
    code, out = run(capsys, 'verify', '--scenario', str(path))
    assert code == 1
    assert 'FAILED c4: exclusivity of contexts' in out
    assert '10/10 projector decompositions verified' in out


def test_verify_unnormalized_scenario(capsys, tmp_path):
    obj = scn.scenario_to_json(scn.fully_contextual_c_scenario())
    obj['vectors'][0] = [[0, 0], [0, 0], [1, 0], [1, 0]]
    path = tmp_path / 'unnormalized.json'
    path.write_text(json.dumps(obj))
    code, out = run(capsys, 'verify', '--scenario', str(path))
    assert code == 1
    assert 'scenario invariants' in out


def test_missing_scenario_file_is_a_usage_error(capsys):
    code, out = run(capsys, 'sweep', '--scenario', 'does-not-exist.json')
    assert code == 2
    assert out == ''


def test_sweep_kcbs_twin_csv(capsys):
    code, out = run(capsys, 'sweep', '--scenario', 'kcbs-twin')
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == 'theta_deg,value,closed_form,nchv_bound,gp_bound'
    assert [line.split(',')[1] for line in lines[1:]] == \
        ['1.500', '1.750', '2.000', '2.250', '2.354', '2.405', '2.500']
    assert lines[1] == '180.000,1.500,1.500,2.000,2.500'


def test_sweep_single_angle(capsys):
    code, out = run(capsys, 'sweep', '--scenario', 'c4', '--theta', '0')
    assert out.splitlines()[1:] == ['0.000,3.500,3.500,3.000,3.500']


def test_sweep_c4_dat(capsys):
    code, out = run(capsys, 'sweep', '--scenario', 'c4', '--format', 'dat')
    lines = out.splitlines()
    data = [line for line in lines if not line.startswith('#')]
    assert len(data) == 8
    assert all(len(row.split()) == 5 for row in data)
    assert data[0].split()[3:] == ['3.000000', '3.500000']
    assert lines[-1] == '# critical_angle_deg 70.528779'


def test_sweep_json(capsys):
    code, out = run(capsys, 'sweep', '--scenario', 'c4', '--format', 'json', '--theta', '69.23')
    obj = json.loads(out)
    assert obj['scenario'] == 'c4'
    assert abs(obj['rows'][0]['value'] - 3.016) < 1e-3
    assert abs(obj['critical_angle_deg'] - 70.5287794) < 1e-6


def test_bounds(capsys):
    code, out = run(capsys, 'bounds', '--scenario', 'c4')
    obj = json.loads(out)
    assert (obj['alpha'], obj['alpha_star']) == (3, 3.5)
    code, out = run(capsys, 'bounds', '--pentagon')
    obj = json.loads(out)
    assert (obj['alpha'], obj['alpha_star']) == (2, 2.5)


def test_eval(capsys):
    code, out = run(capsys, 'eval', '--scenario', 'kcbs-twin', '--theta', '45')
    header, row = out.splitlines()
    values = dict(zip(header.split(','), row.split(',')))
    assert values['value'] == '2.354'
    assert values['pauli_value'] == '2.354'
    assert values['fidelity_target'] == ''


def test_nmr_exact(capsys):
    code, out = run(capsys, 'nmr', '--scenario', 'kcbs-twin', '--epsilon', '1', '--shots', 'exact')
    obj = json.loads(out)
    assert code == 0
    assert abs(obj['value'] - 2.5) < 1e-10
    assert obj['stderr'] == 0
    assert obj['shots'] == 'exact'


def test_nmr_seed_from_environment(capsys):
    code, out = run(capsys, 'nmr', '--scenario', 'c4', '--shots', '1000',
                    environ={'CONTEXTLAB_SEED': '7'})
    obj = json.loads(out)
    assert obj['seed'] == 7
    assert len(obj['repetitions']) == 3


def test_identical_config_gives_identical_files(capsys, tmp_path):
    for name in ('a.json', 'b.json'):
        cli.main(['--output', str(tmp_path / name), 'nmr', '--scenario', 'c4', '--shots', '500',
                  '--seed', '3'], environ={})
    assert (tmp_path / 'a.json').read_bytes() == (tmp_path / 'b.json').read_bytes()
    for name in ('a.csv', 'b.csv'):
        cli.main(['--output', str(tmp_path / name), 'sweep', '--scenario', 'kcbs-twin'], environ={})
    assert (tmp_path / 'a.csv').read_bytes() == (tmp_path / 'b.csv').read_bytes()


def test_export_scenario_round_trips_through_verify(capsys, tmp_path):
    code, out = run(capsys, 'export-scenario', '--scenario', 'kcbs-twin')
    path = tmp_path / 'kcbs.json'
    path.write_text(out)
    assert json.loads(out)['bounds'] == {'nchv': 2.0, 'qm': 2.5, 'gp': 2.5}
    code, out = run(capsys, 'verify', '--scenario', str(path))
    assert code == 0


@pytest.mark.parametrize("argv", [
    ['sweep', '--theta', '360'],
    ['sweep', '--theta', '-1'],
    ['nmr', '--shots', '0'],
    ['nmr', '--shots', 'many'],
    ['nmr', '--epsilon', '0'],
    ['eval', '--epsilon', '1.5'],
])
def test_usage_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 2


def test_bad_seed_in_environment(capsys):
    code, out = run(capsys, 'nmr', environ={'CONTEXTLAB_SEED': 'abc'})
    assert code == 2


def test_argparse_errors_exit_with_two(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(['bounds', '--format', 'dat'], environ={})
    assert e.value.code == 2


def write_scenario(tmp_path, obj, name='scenario.json'):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def one_qubit_scenario(n_vectors=2):
    up = [[1.0, 0.0], [0.0, 0.0]]
    down = [[0.0, 0.0], [1.0, 0.0]]
    vectors = [up, down] if n_vectors == 2 else [up] * n_vectors
    return {
        'name': 'qubit', 'dim': 2, 'vectors': vectors, 'contexts': [[0, 1]],
        'context_weight': 1.0, 'reference_state': up,
        'bounds': {'nchv': 1.0, 'qm': 1.0, 'gp': 1.0},
    }


def corrupt_bounds(obj):
    obj['bounds'] = {'nchv': 3.5, 'qm': 3.0, 'gp': 3.5}


def corrupt_index(obj):
    obj['contexts'][0] = [0, 10]


def drop_contexts(obj):
    obj['contexts'] = []


@pytest.mark.parametrize("corrupt", [corrupt_bounds, corrupt_index, drop_contexts],
                         ids=['bounds', 'index', 'no-contexts'])
def test_verify_reports_broken_scenario_invariants(capsys, tmp_path, corrupt):
    obj = scn.scenario_to_json(scn.fully_contextual_c_scenario())
    corrupt(obj)
    path = write_scenario(tmp_path, obj)
    code, out = run(capsys, 'verify', '--scenario', path)
    assert code == 1
    assert 'FAILED %s: scenario invariants' % path in out


def test_verify_unknown_scenario_is_a_usage_error(capsys):
    code, out = run(capsys, 'verify', '--scenario', 'no-such-scenario')
    assert code == 2
    assert out == ''


def test_nmr_without_mappings_is_a_usage_error(capsys, tmp_path):
    path = write_scenario(tmp_path, one_qubit_scenario())
    code, out = run(capsys, 'nmr', '--scenario', path)
    assert code == 2
    assert out == ''


def test_bounds_above_the_vertex_budget_is_a_usage_error(capsys, tmp_path):
    obj = one_qubit_scenario(n_vectors=graphbounds.MAX_VERTICES + 1)
    obj['contexts'] = [[0]]
    path = write_scenario(tmp_path, obj)
    code, out = run(capsys, 'bounds', '--scenario', path)
    assert code == 2


def load_schema(name):
    path = os.path.join(os.path.dirname(contextlab.__file__), 'schema', '%s.schema.json' % name)
    with open(path) as f:
        return json.load(f)


@pytest.mark.parametrize("schema, argv", [
    ('sweep', ['sweep', '--scenario', 'c4', '--format', 'json']),
    ('sweep', ['sweep', '--scenario', '{user}', '--format', 'json', '--theta', '0', '90']),
    ('bounds', ['bounds', '--scenario', 'c4']),
    ('bounds', ['bounds', '--pentagon']),
    ('nmr', ['nmr', '--scenario', 'kcbs-twin', '--shots', 'exact']),
    ('nmr', ['nmr', '--scenario', 'c4', '--shots', '1000', '--seed', '11']),
    ('scenario', ['export-scenario', '--scenario', 'kcbs-twin']),
], ids=['sweep', 'sweep-user', 'bounds', 'bounds-pentagon', 'nmr-exact', 'nmr-shots', 'export'])
def test_json_output_matches_shipped_schema(capsys, tmp_path, schema, argv):
    user = scn.scenario_to_json(scn.kcbs_twin_scenario())
    user['name'] = 'user-kcbs'
    path = write_scenario(tmp_path, user)
    code, out = run(capsys, *[a.replace('{user}', path) for a in argv])
    assert code == 0
    jsonschema.validate(json.loads(out), load_schema(schema))
