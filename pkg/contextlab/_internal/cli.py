"""
Command line front end.

    contextlab verify [--scenario NAME|FILE]
    contextlab eval --scenario kcbs-twin --theta 45
    contextlab sweep --scenario c4 --format dat
    contextlab bounds --scenario c4
    contextlab nmr --scenario kcbs-twin --epsilon 1 --shots exact
    contextlab export-scenario --scenario c4

Tables and JSON go to stdout or --output, written once when the command is done;
log lines go to stderr. Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
import argparse
import csv
import io
import json
import os
import sys

from . import logger
from . import graphbounds
from . import nmrsim
from . import scenario as scn
from . import verify
from .dispatcher import Dispatcher
from .error import (ContextLabError, LinearProgramError, ScenarioError, ScenarioNotFoundError,
                    UsageError, VerificationError)

log = logger.Logger('cli')

COMMANDS = ('verify', 'eval', 'sweep', 'bounds', 'nmr', 'export-scenario')
FORMATS = ('csv', 'json', 'dat')
DEFAULT_SEED = 12345
SEED_ENV = 'CONTEXTLAB_SEED'

SWEEP_COLUMNS = ('theta_deg', 'value', 'closed_form', 'nchv_bound', 'gp_bound')
EVAL_COLUMNS = ('theta_deg', 'value', 'pauli_value', 'pseudopure_value',
                'fidelity_prepared', 'fidelity_target')
NMR_COLUMNS = ('value', 'stderr', 'epsilon', 'shots', 'seed')

_DEFAULT_FORMAT = {
    'verify': None, 'eval': 'csv', 'sweep': 'csv', 'bounds': 'json', 'nmr': 'json',
    'export-scenario': 'json',
}
_ALLOWED_FORMATS = {
    'eval': ('csv', 'json'), 'sweep': FORMATS, 'bounds': ('csv', 'json'),
    'nmr': ('csv', 'json'), 'export-scenario': ('json',), 'verify': (None,),
}


def parse_shots(text):
    """'exact' or a positive integer; None stands for exact."""
    if text is None or str(text).lower() == 'exact':
        return None
    try:
        shots = int(text)
    except ValueError:
        raise UsageError('shots must be a positive integer or "exact", got %r' % text)
    if shots < 1:
        raise UsageError('shots must be at least 1, got %d' % shots)
    return shots


def resolve_seed(seed, environ=None):
    environ = os.environ if environ is None else environ
    if seed is not None:
        return int(seed)
    text = environ.get(SEED_ENV)
    if text:
        try:
            return int(text)
        except ValueError:
            raise UsageError('%s must be an integer, got %r' % (SEED_ENV, text))
    return DEFAULT_SEED


class RunConfig(object):
    """Validated options of one command."""

    def __init__(self, command, scenario='kcbs-twin', theta_list=None, epsilon=1.0, shots=None,
                 seed=DEFAULT_SEED, output_format=None, output_path=None, repetitions=3,
                 workers=1, strict=False, normalize=True, pentagon=False):
        if command not in COMMANDS:
            raise UsageError('unknown command %r' % command)
        if output_format is None:
            output_format = _DEFAULT_FORMAT[command]
        if output_format not in _ALLOWED_FORMATS[command]:
            raise UsageError('%s does not write %s output' % (command, output_format))
        thetas = None
        if theta_list is not None:
            thetas = [float(t) for t in theta_list]
            for t in thetas:
                if not 0.0 <= t < 360.0:
                    raise UsageError('theta %g outside [0, 360)' % t)
        epsilon = float(epsilon)
        if not 0.0 < epsilon <= 1.0:
            raise UsageError('epsilon %g outside (0, 1]' % epsilon)
        if shots is not None and shots < 1:
            raise UsageError('shots must be at least 1, got %d' % shots)
        if repetitions < 1:
            raise UsageError('repetitions must be at least 1, got %d' % repetitions)
        if workers < 1:
            raise UsageError('workers must be at least 1, got %d' % workers)
        self.command = command
        self.scenario = scenario
        self.theta_list = thetas
        self.epsilon = epsilon
        self.shots = shots
        self.seed = seed
        self.output_format = output_format
        self.output_path = output_path
        self.repetitions = repetitions
        self.workers = workers
        self.strict = strict
        self.normalize = normalize
        self.pentagon = pentagon

    @classmethod
    def from_args(cls, args, environ=None):
        return cls(
            args.command,
            scenario=getattr(args, 'scenario', None) or 'kcbs-twin',
            theta_list=getattr(args, 'theta', None),
            epsilon=getattr(args, 'epsilon', 1.0),
            shots=parse_shots(getattr(args, 'shots', None)),
            seed=resolve_seed(getattr(args, 'seed', None), environ),
            output_format=getattr(args, 'format', None),
            output_path=args.output,
            repetitions=getattr(args, 'repetitions', 3),
            workers=getattr(args, 'workers', 1),
            strict=getattr(args, 'strict', False),
            normalize=not getattr(args, 'raw', False),
            pentagon=getattr(args, 'pentagon', False))

    def __repr__(self):
        return 'RunConfig(%s)' % ', '.join('%s=%r' % kv for kv in sorted(vars(self).items()))


def _fmt3(value):
    return '' if value is None else '%.3f' % value


def _csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator='\n')
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt3(v) if isinstance(v, float) or v is None else v for v in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + '\n'


def _dat_text(header, columns, rows, footer=()):
    lines = ['# %s' % h for h in header]
    lines.append('# ' + ' '.join(columns))
    for row in rows:
        lines.append(' '.join('nan' if v is None else '%.6f' % v for v in row))
    lines.extend('# %s' % f for f in footer)
    return '\n'.join(lines) + '\n'


def _critical_angle_or_none(s):
    try:
        return scn.critical_angle(s)
    except ScenarioError as e:
        log.info('no critical angle: %s' % e)
        return None


def cmd_sweep(config):
    s = scn.load_scenario(config.scenario)
    records = scn.rotation_sweep(s, config.theta_list, workers=config.workers)
    rows = [(r.theta, r.value, r.closed_form_value, s.bound_nchv, s.bound_gp) for r in records]
    critical = _critical_angle_or_none(s)
    if config.output_format == 'json':
        return _json_text({
            'scenario': s.name,
            'rows': [dict(zip(SWEEP_COLUMNS, row)) for row in rows],
            'critical_angle_deg': critical,
        })
    if config.output_format == 'dat':
        footer = ['critical_angle_deg %s' % ('nan' if critical is None else '%.6f' % critical)]
        header = ['scenario %s' % s.name,
                  'bound lines: nchv %g (dotted), gp %g (dashed)' % (s.bound_nchv, s.bound_gp)]
        return _dat_text(header, SWEEP_COLUMNS, rows, footer)
    return _csv_text(SWEEP_COLUMNS, rows)


def cmd_eval(config):
    s = scn.load_scenario(config.scenario)
    agg = scn.scenario_observable(s)
    model = nmrsim.PseudopureModel(config.epsilon, s.n_qubits)
    thetas = config.theta_list if config.theta_list is not None else [0.0]
    rows = []
    for theta in thetas:
        ideal = scn.rotated_state(s, theta)
        prepared = nmrsim.pps_state(ideal, model)
        fid = nmrsim.state_fidelities(s.name, ideal, prepared, theta)
        rows.append((theta, scn.evaluate(s, ideal), scn.evaluate_via_pauli(s, ideal, agg, s.dim),
                     scn.evaluate(s, prepared), fid['prepared_vs_ideal'], fid['ideal_vs_target']))
    if config.output_format == 'json':
        return _json_text({
            'scenario': s.name,
            'epsilon': config.epsilon,
            'rows': [dict(zip(EVAL_COLUMNS, row)) for row in rows],
        })
    return _csv_text(EVAL_COLUMNS, rows)


def cmd_bounds(config):
    if config.pentagon:
        g = graphbounds.pentagon_graph()
        name = 'pentagon'
    else:
        s = scn.load_scenario(config.scenario)
        g = graphbounds.build_graph(s.vectors)
        name = s.name
    report = graphbounds.bound_report(g)
    if config.output_format == 'csv':
        return _csv_text(('alpha', 'alpha_star'),
                         [(report.independence_number, report.fractional_packing)])
    out = report.to_json()
    out['graph'] = name
    return _json_text(out)


def cmd_nmr(config):
    s = scn.load_scenario(config.scenario)
    agg = scn.scenario_observable(s)
    mappings = nmrsim.builtin_mappings(s.n_qubits)
    theta = config.theta_list[0] if config.theta_list else 0.0
    model = nmrsim.PseudopureModel(config.epsilon, s.n_qubits)
    state = nmrsim.pps_state(scn.rotated_state(s, theta), model)
    if config.shots is None:
        result = nmrsim.measure_inequality_nmr(
            s, state, agg, mappings, seed=config.seed, epsilon=config.epsilon,
            normalize=config.normalize, strict=config.strict)
        out = result.to_json()
    else:
        result = nmrsim.repeat_measurement(
            s, state, agg, mappings, repetitions=config.repetitions, shots=config.shots,
            seed=config.seed, epsilon=config.epsilon, normalize=config.normalize,
            strict=config.strict)
        out = result.to_json()
    out['scenario'] = s.name
    out['theta_deg'] = theta
    if config.output_format == 'csv':
        return _csv_text(NMR_COLUMNS, [(result.value, result.stderr, config.epsilon,
                                        'exact' if config.shots is None else config.shots,
                                        config.seed)])
    return _json_text(out)


def cmd_export_scenario(config):
    return _json_text(scn.scenario_to_json(scn.load_scenario(config.scenario)))


def cmd_verify(config, explicit_scenario=False, verbose=False):
    lines = []

    def on_check(event, sender, check, **named):
        if verbose or not check.passed:
            lines.append(repr(check))

    dispatcher = Dispatcher()
    dispatcher.connect(on_check, verify.EVENT_CHECK_PASSED)
    dispatcher.connect(on_check, verify.EVENT_CHECK_FAILED)
    suite = verify.VerificationSuite(dispatcher, seed=config.seed)
    if explicit_scenario:
        try:
            scenarios = [scn.load_scenario(config.scenario)]
        except ScenarioNotFoundError:
            raise
        except ContextLabError as e:
            # the file parsed but breaks a scenario invariant
            suite.record('%s: scenario invariants' % config.scenario, False, str(e))
            scenarios = []
    else:
        scenarios = None
    if scenarios is None:
        scenarios = [factory() for _, factory in sorted(scn.SCENARIOS.items())]
    report = suite.run(scenarios)
    lines.extend(report.summary_lines())
    return '\n'.join(lines) + '\n', report.exit_code()


def build_parser():
    parser = argparse.ArgumentParser(
        prog='contextlab',
        description='Fully contextual correlation inequalities: identities, sweeps, bounds, NMR readout.')
    parser.add_argument('-v', '--verbose', action='count', default=0, help='more log output (repeatable)')
    parser.add_argument('-q', '--quiet', action='store_true', help='errors only')
    parser.add_argument('--output', default=None, help='write the result here instead of stdout')
    sub = parser.add_subparsers(dest='command', metavar='COMMAND')
    sub.required = True

    def scenario_arg(p, required=False):
        p.add_argument('--scenario', default=None, required=required,
                       help='registry name (%s) or scenario JSON file' % ', '.join(sorted(scn.SCENARIOS)))

    p = sub.add_parser('verify', help='run the identity suite')
    scenario_arg(p)

    p = sub.add_parser('eval', help='evaluate the rotated reference state')
    scenario_arg(p)
    p.add_argument('--theta', type=float, nargs='+', default=None, help='angles in degrees')
    p.add_argument('--epsilon', type=float, default=1.0, help='pseudopure polarization')
    p.add_argument('--format', choices=('csv', 'json'), default=None)

    p = sub.add_parser('sweep', help='value against rotation angle')
    scenario_arg(p)
    p.add_argument('--theta', type=float, nargs='+', default=None,
                   help='angles in degrees (default: the tabulated grid)')
    p.add_argument('--format', choices=FORMATS, default=None)
    p.add_argument('--workers', type=int, default=1)

    p = sub.add_parser('bounds', help='independence and fractional packing numbers')
    scenario_arg(p)
    p.add_argument('--pentagon', action='store_true', help='use the KCBS pentagon instead')
    p.add_argument('--format', choices=('csv', 'json'), default=None)

    p = sub.add_parser('nmr', help='simulated NMR readout')
    scenario_arg(p)
    p.add_argument('--theta', type=float, nargs=1, default=None, help='angle in degrees')
    p.add_argument('--epsilon', type=float, default=1.0)
    p.add_argument('--shots', default='exact', help='positive integer or "exact"')
    p.add_argument('--seed', type=int, default=None, help='default: $%s or %d' % (SEED_ENV, DEFAULT_SEED))
    p.add_argument('--repetitions', type=int, default=3)
    p.add_argument('--raw', action='store_true', help='do not divide readings by epsilon')
    p.add_argument('--strict', action='store_true', help='fail on terms without a mapping')
    p.add_argument('--format', choices=('csv', 'json'), default=None)

    p = sub.add_parser('export-scenario', help='write a scenario as JSON')
    scenario_arg(p)
    return parser


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with io.open(path, 'w', encoding='utf-8', newline='\n') as f:
        f.write(text)
    log.info('wrote %s' % path)


_HANDLERS = {
    'eval': cmd_eval,
    'sweep': cmd_sweep,
    'bounds': cmd_bounds,
    'nmr': cmd_nmr,
    'export-scenario': cmd_export_scenario,
}


def main(argv=None, environ=None):
    args = build_parser().parse_args(argv)
    logger.set_level_all(logger.level_from_flags(args.verbose, args.quiet))
    try:
        config = RunConfig.from_args(args, environ)
        log.debug('%s' % config)
        if config.command == 'verify':
            text, code = cmd_verify(config, explicit_scenario=args.scenario is not None,
                                    verbose=args.verbose > 0)
        else:
            text, code = _HANDLERS[config.command](config), 0
        _write(text, config.output_path)
        return code
    except (VerificationError, LinearProgramError) as e:
        # an identity that must hold does not
        log.error('%s: %s' % (args.command, e))
        return 1
    except ContextLabError as e:
        # unknown or malformed input, or input the library does not support
        log.error('%s: %s' % (args.command, e))
        return 2
    except (IOError, OSError) as e:
        log.error('%s: %s' % (args.command, e))
        return 2


if __name__ == '__main__':
    raise SystemExit(main())
