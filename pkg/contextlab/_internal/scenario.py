"""
Contextuality scenarios: vectors, contexts, bounds, and their evaluation on states.

Two scenarios are built in. The KCBS-twin test sums the probabilities of ten
projectors on an 8 dimensional space over five four-element contexts with weight 1/2;
the fully contextual test on a 4 dimensional space sums the ten probabilities
directly. Both are rotated away from their reference state by a real rotation on
qubit 1 (the most significant bit).
"""
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor

from . import logger
from . import graphbounds
from . import hilbert
from . import pauli
from .error import (ContextLabError, DimensionError, NormalizationError, ScenarioError,
                    ScenarioNotFoundError)

log = logger.Logger('scenario')

SUMMATIONS = ('contexts', 'projectors')
DEFAULT_THETAS = tuple(float(t) for t in range(0, 181, 15))
CLOSED_FORM_TOL = 1e-9

_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)


def _kcbs_twin_closed_form(theta_deg):
    return 2.0 + math.cos(math.radians(theta_deg)) / 2.0


def _c4_closed_form(theta_deg):
    return 2.75 + 0.75 * math.cos(math.radians(theta_deg))


# keyed by scenario name; a loaded scenario reusing a built-in name is still
# compared, and the sweep warns when its values drift from the formula
CLOSED_FORMS = {
    'kcbs-twin': _kcbs_twin_closed_form,
    'c4': _c4_closed_form,
}

TABLE_THETAS = {
    'kcbs-twin': (180.0, 120.0, 90.0, 60.0, 45.0, 36.0, 0.0),
    'c4': (180.0, 120.0, 90.0, 69.23, 60.0, 45.0, 30.0, 0.0),
}


class ContextualityScenario(object):
    """
    Immutable description of a sum-of-probabilities contextuality test.

    ``summation='contexts'`` evaluates weight * sum over contexts of the context
    probabilities; ``summation='projectors'`` evaluates weight * sum over all
    projectors and keeps the contexts for exclusivity checks only.
    """

    def __init__(self, name, vectors, contexts, context_weight, reference_state,
                 bound_nchv, bound_qm, bound_gp, summation='contexts', rotation_qubit=0):
        if not name:
            raise ScenarioError('scenario needs a name')
        if summation not in SUMMATIONS:
            raise ScenarioError('summation must be one of %s, got %r' % (SUMMATIONS, summation))
        vectors = [v if isinstance(v, hilbert.StateVector) else hilbert.StateVector(v)
                   for v in vectors]
        if not vectors:
            raise ScenarioError('scenario %s has no vectors' % name)
        dim = vectors[0].dim
        for i, v in enumerate(vectors):
            if v.dim != dim:
                raise DimensionError('vector %d has dim %d, expected %d' % (i, v.dim, dim))
            if not v.is_normalized():
                raise NormalizationError('vector %d has norm %.12g' % (i, v.norm()))
        n_qubits = hilbert.qubit_count(dim)
        if not isinstance(reference_state, hilbert.StateVector):
            reference_state = hilbert.StateVector(reference_state)
        if reference_state.dim != dim:
            raise DimensionError('reference state has dim %d, expected %d' % (reference_state.dim, dim))
        if not reference_state.is_normalized():
            raise NormalizationError('reference state has norm %.12g' % reference_state.norm())
        if not contexts:
            raise ScenarioError('scenario %s has no contexts' % name)
        cleaned = []
        for k, ctx in enumerate(contexts):
            ctx = tuple(int(i) for i in ctx)
            if not ctx:
                raise ScenarioError('context %d is empty' % k)
            if len(set(ctx)) != len(ctx):
                raise ScenarioError('context %d repeats an index: %s' % (k, list(ctx)))
            for i in ctx:
                if not 0 <= i < len(vectors):
                    raise ScenarioError('context %d refers to vector %d of %d' % (k, i, len(vectors)))
            cleaned.append(ctx)
        if context_weight <= 0:
            raise ScenarioError('context weight must be positive, got %g' % context_weight)
        if not bound_nchv <= bound_qm <= bound_gp:
            raise ScenarioError('bounds out of order: nchv %g, qm %g, gp %g'
                                % (bound_nchv, bound_qm, bound_gp))
        if not 0 <= rotation_qubit < n_qubits:
            raise ScenarioError('rotation qubit %d out of range for %d qubits' % (rotation_qubit, n_qubits))
        self.name = name
        self.dim = dim
        self.n_qubits = n_qubits
        self.vectors = tuple(vectors)
        self.contexts = tuple(cleaned)
        self.context_weight = float(context_weight)
        self.reference_state = reference_state
        self.bound_nchv = float(bound_nchv)
        self.bound_qm = float(bound_qm)
        self.bound_gp = float(bound_gp)
        self.summation = summation
        self.rotation_qubit = rotation_qubit
        self._projectors = tuple(hilbert.projector_from_vector(v) for v in self.vectors)

    @property
    def projectors(self):
        return self._projectors

    def multiplicities(self):
        """Weight of each projector in the evaluated sum."""
        if self.summation == 'projectors':
            return [self.context_weight] * len(self.vectors)
        counts = [0] * len(self.vectors)
        for ctx in self.contexts:
            for i in ctx:
                counts[i] += 1
        return [self.context_weight * c for c in counts]

    def closed_form(self, theta_deg):
        """Value of the rotated reference state by formula, or None when none is known."""
        formula = CLOSED_FORMS.get(self.name)
        return formula(theta_deg) if formula is not None else None

    def table_thetas(self):
        return TABLE_THETAS.get(self.name, DEFAULT_THETAS)

    def __repr__(self):
        return 'ContextualityScenario(%s, dim=%d, vectors=%d, contexts=%d)' % (
            self.name, self.dim, len(self.vectors), len(self.contexts))


def kcbs_twin_scenario():
    """Ten projectors on C^8 in five contexts {i, i+1, i+5, i+7}; value 5/2 on |000>."""
    s8 = 1.0 / math.sqrt(8.0)
    comps = [
        ((_R2, -_R2, 0, 0, 2, 0, 0, 0), s8),
        ((_R2, 0, 0, _R2, -1, _R3, 0, 0), s8),
        ((1, -1, -1, -1, 0, 0, 0, 0), 0.5),
        ((1, -1, 1, 1, 0, 0, 0, 0), 0.5),
        ((_R2, 0, 0, -_R2, -1, _R3, 0, 0), s8),
        ((_R2, 0, -_R2, 0, -1, -_R3, 0, 0), s8),
        ((_R2, 0, _R2, 0, -1, -_R3, 0, 0), s8),
        ((1, 1, 1, -1, 0, 0, 0, 0), 0.5),
        ((_R2, _R2, 0, 0, 2, 0, 0, 0), s8),
        ((1, 1, -1, 1, 0, 0, 0, 0), 0.5),
    ]
    vectors = [hilbert.StateVector.from_components(c, scale) for c, scale in comps]
    # index arithmetic wraps so that 4 + 1 = 0 and 3 + 7 = 5
    contexts = [[i, (i + 1) % 5, 5 + i % 5, 5 + (i + 2) % 5] for i in range(5)]
    return ContextualityScenario(
        'kcbs-twin', vectors, contexts, 0.5, hilbert.StateVector.basis(8, 0),
        bound_nchv=2.0, bound_qm=2.5, bound_gp=2.5, summation='contexts')


def fully_contextual_c_scenario():
    """Ten projectors on C^4 measured one at a time; value 7/2 on |11>."""
    r = 1.0 / _R2
    comps = [
        ((0, 0, 1, 1), r),
        ((1, -1, 1, -1), 0.5),
        ((1, -1, -1, 1), 0.5),
        ((1, 0, 0, -1), r),
        ((1, 1, 1, 1), 0.5),
        ((0, 1, 0, -1), r),
        ((-1, 1, 1, 1), 0.5),
        ((1, 0, 0, 1), r),
        ((1, 1, 1, -1), 0.5),
        ((1, 1, -1, 1), 0.5),
    ]
    vectors = [hilbert.StateVector.from_components(c, scale) for c, scale in comps]
    contexts = graphbounds.build_graph(vectors).sorted_edges()
    return ContextualityScenario(
        'c4', vectors, contexts, 1.0, hilbert.StateVector.basis(4, 3),
        bound_nchv=3.0, bound_qm=3.5, bound_gp=3.5, summation='projectors')


SCENARIOS = {
    'kcbs-twin': kcbs_twin_scenario,
    'c4': fully_contextual_c_scenario,
}


def _check_state_dim(s, state):
    if state.dim != s.dim:
        raise DimensionError('state of dim %d for scenario %s of dim %d' % (state.dim, s.name, s.dim))


def projector_probabilities(s, state):
    """Tr[rho Pi_j] for every projector."""
    _check_state_dim(s, state)
    return [hilbert.expectation(state, p) for p in s.projectors]


def evaluate(s, state):
    """Inequality value of a density operator."""
    probs = projector_probabilities(s, state)
    return float(sum(m * p for m, p in zip(s.multiplicities(), probs)))


def context_probabilities(s, state):
    """Per-context sums of projector probabilities."""
    probs = projector_probabilities(s, state)
    return [sum(probs[i] for i in ctx) for ctx in s.contexts]


def scenario_observable(s):
    """The aggregate observable whose expectation divided by dim is the inequality value."""
    scaled = [m * p for m, p in zip(s.multiplicities(), s.projectors)]
    return pauli.aggregate_observable(scaled, s.dim, n_qubits=s.n_qubits)


def evaluate_via_pauli(s, state, agg, divisor):
    """(1/divisor) Tr[rho . agg]."""
    if divisor == 0:
        raise ScenarioError('divisor must be non-zero')
    _check_state_dim(s, state)
    if agg.n_qubits != s.n_qubits:
        raise DimensionError('%d-qubit observable for a %d-qubit scenario' % (agg.n_qubits, s.n_qubits))
    return hilbert.expectation(state, pauli.reconstruct(agg)) / divisor


def rotated_state(s, theta_deg):
    """Reference state rotated by theta (degrees) on the scenario's rotation qubit."""
    unitary = hilbert.embed_rotation(math.radians(theta_deg), s.rotation_qubit, s.n_qubits)
    return hilbert.DensityOperator.pure(s.reference_state.evolve(unitary))


class SweepRecord(object):
    def __init__(self, theta, value, closed_form_value):
        self.theta = theta
        self.value = value
        self.closed_form_value = closed_form_value

    def deviation(self):
        if self.closed_form_value is None:
            return 0.0
        return abs(self.value - self.closed_form_value)

    def __repr__(self):
        return 'SweepRecord(theta=%g, value=%.6f, closed_form=%s)' % (
            self.theta, self.value, self.closed_form_value)


def _sweep_point(s, theta):
    value = evaluate(s, rotated_state(s, theta))
    record = SweepRecord(float(theta), value, s.closed_form(theta))
    if record.deviation() > CLOSED_FORM_TOL:
        log.warn('%s at %g deg: direct %.12f, closed form %.12f'
                 % (s.name, theta, value, record.closed_form_value))
    return record


def rotation_sweep(s, thetas=None, workers=1):
    """
    Evaluate the rotated reference state at each angle (degrees). Records come back
    in input order whatever ``workers`` is.
    """
    if thetas is None:
        thetas = s.table_thetas()
    thetas = [float(t) for t in thetas]
    log.info('sweep %s over %d angles' % (s.name, len(thetas)))
    if workers <= 1 or len(thetas) < 2:
        return [_sweep_point(s, t) for t in thetas]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: _sweep_point(s, t), thetas))


def critical_angle(s, lo=0.0, hi=180.0, tol=1e-9):
    """Rotation angle (degrees) where the value crosses the non-contextual bound."""

    def excess(theta):
        return evaluate(s, rotated_state(s, theta)) - s.bound_nchv

    f_lo = excess(lo)
    f_hi = excess(hi)
    if f_lo * f_hi > 0:
        raise ScenarioError('%s does not cross its bound %g between %g and %g deg'
                            % (s.name, s.bound_nchv, lo, hi))
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        f_mid = excess(mid)
        if f_mid == 0:
            return mid
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


class ContextCheck(object):
    def __init__(self, members, max_overlap, probability_sum, tol):
        self.members = list(members)
        self.max_overlap = max_overlap
        self.probability_sum = probability_sum
        self.orthogonal = max_overlap <= tol


class ExclusivityReport(object):
    """Per-context orthogonality and probability sums on the reference state."""

    def __init__(self, scenario_name, checks, projector_total, check_sums, tol):
        self.scenario_name = scenario_name
        self.checks = checks
        self.projector_total = projector_total
        self.check_sums = check_sums
        self.tol = tol

    def failures(self):
        out = []
        for k, c in enumerate(self.checks):
            if not c.orthogonal:
                out.append('context %d %s: max overlap %.3g' % (k, c.members, c.max_overlap))
            if self.check_sums and abs(c.probability_sum - 1.0) > self.tol:
                out.append('context %d %s: probabilities sum to %.12f'
                           % (k, c.members, c.probability_sum))
        return out

    @property
    def ok(self):
        return not self.failures()


def validate_exclusivity(s, tol=hilbert.TOL):
    """
    For every context, the largest |<v_a|v_b>| over its pairs and the sum of its
    probabilities on the reference state. Sums are required to be 1 only when the
    scenario sums over contexts.
    """
    ref = s.reference_state
    weights = [abs(v.inner(ref)) ** 2 for v in s.vectors]
    checks = []
    for ctx in s.contexts:
        overlap = 0.0
        for i, a in enumerate(ctx):
            for b in ctx[i + 1:]:
                overlap = max(overlap, abs(s.vectors[a].inner(s.vectors[b])))
        checks.append(ContextCheck(ctx, overlap, sum(weights[i] for i in ctx), tol))
    report = ExclusivityReport(s.name, checks, float(sum(weights)), s.summation == 'contexts', tol)
    for line in report.failures():
        log.warn('%s: %s' % (s.name, line))
    return report


def _encode_vector(v):
    return [[float(a.real), float(a.imag)] for a in v.amplitudes]


def _decode_vector(pairs):
    try:
        return hilbert.StateVector([complex(re, im) for re, im in pairs])
    except (TypeError, ValueError) as e:
        raise ScenarioError('bad vector encoding: %s' % e)


def scenario_to_json(s):
    return {
        'name': s.name,
        'dim': s.dim,
        'vectors': [_encode_vector(v) for v in s.vectors],
        'contexts': [list(ctx) for ctx in s.contexts],
        'context_weight': s.context_weight,
        'reference_state': _encode_vector(s.reference_state),
        'bounds': {'nchv': s.bound_nchv, 'qm': s.bound_qm, 'gp': s.bound_gp},
        'summation': s.summation,
        'rotation_qubit': s.rotation_qubit,
    }


def scenario_from_json(obj):
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except ValueError as e:
            raise ScenarioError('scenario is not valid JSON: %s' % e)
    try:
        vectors = [_decode_vector(v) for v in obj['vectors']]
        dim = int(obj['dim'])
        if vectors and vectors[0].dim != dim:
            raise DimensionError('declared dim %d, vectors have dim %d' % (dim, vectors[0].dim))
        bounds = obj['bounds']
        return ContextualityScenario(
            obj['name'], vectors, obj['contexts'], float(obj['context_weight']),
            _decode_vector(obj['reference_state']),
            float(bounds['nchv']), float(bounds['qm']), float(bounds['gp']),
            summation=obj.get('summation', 'contexts'),
            rotation_qubit=int(obj.get('rotation_qubit', 0)))
    except KeyError as e:
        raise ScenarioError('scenario JSON lacks field %s' % e)
    except (TypeError, ValueError) as e:
        raise ScenarioError('malformed scenario JSON: %s' % e)


def load_scenario(name_or_path):
    """A registry name ("kcbs-twin", "c4") or the path of a scenario JSON file."""
    if name_or_path in SCENARIOS:
        return SCENARIOS[name_or_path]()
    if not os.path.isfile(name_or_path):
        raise ScenarioNotFoundError('unknown scenario %r (registry: %s)'
                                    % (name_or_path, ', '.join(sorted(SCENARIOS))))
    try:
        with open(name_or_path, 'r') as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ScenarioNotFoundError('cannot read %s: %s' % (name_or_path, e))
    try:
        return scenario_from_json(text)
    except ContextLabError as e:
        log.error('loading %s: %s' % (name_or_path, e))
        raise


if __name__ == '__main__':
    for factory in (kcbs_twin_scenario, fully_contextual_c_scenario):
        s = factory()
        print(s)
        for record in rotation_sweep(s):
            print('  %7.2f  %.3f' % (record.theta, record.value))
        print('  critical angle %.4f deg' % critical_angle(s))
        print('  A/B: %s' % scenario_observable(s).format())
