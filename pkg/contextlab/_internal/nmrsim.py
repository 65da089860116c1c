"""
NMR readout of multi-qubit Pauli observables.

An NMR spectrometer only reports single-spin z magnetizations. A product observable P
is read by first applying a unitary U with U^dagger Z_r U = P and then reading qubit r:
Tr[(U rho U^dagger) Z_r] = Tr[rho P]. Samples are pseudopure states
(1 - eps)/2^n 1 + eps |psi><psi|, whose traceless part carries the signal.
"""
import math

import numpy as np

from . import logger
from . import hilbert
from . import pauli
from .error import DimensionError, MappingError, PolarizationError, VerificationError

log = logger.Logger('nmrsim')

CNOT = 'CNOT'
Y90 = 'Y90'
X90 = 'X90'
IDENTITY = 'IDENTITY'

_P0 = np.array([[1, 0], [0, 0]], dtype=complex)
_P1 = np.array([[0, 0], [0, 1]], dtype=complex)


def _half_pi(sigma, sign):
    """exp(-i sign (pi/4) sigma)"""
    c = math.cos(math.pi / 4)
    s = math.sin(math.pi / 4)
    return c * np.eye(2, dtype=complex) - 1j * sign * s * sigma


class GateStep(object):
    """One pulse-level gate. Qubit indices are 0-based, qubit 0 being the most significant."""

    def __init__(self, kind, qubits=(), sign=1):
        if kind not in (CNOT, Y90, X90, IDENTITY):
            raise MappingError('unknown gate kind %r' % kind)
        qubits = tuple(int(q) for q in qubits)
        arity = {CNOT: 2, Y90: 1, X90: 1, IDENTITY: 0}[kind]
        if len(qubits) != arity:
            raise MappingError('%s takes %d qubit(s), got %d' % (kind, arity, len(qubits)))
        if kind == CNOT and qubits[0] == qubits[1]:
            raise MappingError('CNOT control and target coincide (%d)' % qubits[0])
        if sign not in (1, -1):
            raise MappingError('sign must be +1 or -1, got %r' % sign)
        self.kind = kind
        self.qubits = qubits
        self.sign = sign

    @classmethod
    def cnot(cls, control, target):
        return cls(CNOT, (control, target))

    @classmethod
    def y90(cls, qubit, sign=1):
        return cls(Y90, (qubit,), sign)

    @classmethod
    def x90(cls, qubit, sign=1):
        return cls(X90, (qubit,), sign)

    @classmethod
    def identity(cls):
        return cls(IDENTITY)

    def matrix(self, n_qubits):
        for q in self.qubits:
            if not 0 <= q < n_qubits:
                raise MappingError('%s acts on qubit %d of %d' % (self.label(), q, n_qubits))
        dim = 2 ** n_qubits
        if self.kind == IDENTITY:
            return np.eye(dim, dtype=complex)
        if self.kind == CNOT:
            control, target = self.qubits
            eye = np.eye(2, dtype=complex)
            off = hilbert.tensor_all([_P0 if q == control else eye for q in range(n_qubits)])
            on = hilbert.tensor_all([_P1 if q == control else pauli.SIGMA['X'] if q == target else eye
                                     for q in range(n_qubits)])
            return off + on
        sigma = pauli.SIGMA['Y'] if self.kind == Y90 else pauli.SIGMA['X']
        return hilbert.embed_operator(_half_pi(sigma, self.sign), self.qubits[0], n_qubits)

    def label(self):
        """Pulse notation with 1-based qubits, e.g. CNOT12, Y1, X2bar."""
        if self.kind == IDENTITY:
            return '1'
        if self.kind == CNOT:
            return 'CNOT%d%d' % (self.qubits[0] + 1, self.qubits[1] + 1)
        name = self.kind[0] + str(self.qubits[0] + 1)
        return name if self.sign > 0 else name + 'bar'

    def __eq__(self, other):
        return (isinstance(other, GateStep) and other.kind == self.kind
                and other.qubits == self.qubits and other.sign == self.sign)

    def __hash__(self):
        return hash((self.kind, self.qubits, self.sign))

    def __repr__(self):
        return 'GateStep(%s)' % self.label()


def compose_unitary(steps, n_qubits):
    """U = G_k ... G_2 G_1 for steps listed in the order they are applied."""
    dim = 2 ** n_qubits
    u = np.eye(dim, dtype=complex)
    for step in steps:
        u = step.matrix(n_qubits) @ u
    return u


class MeasurementMapping(object):
    """Reads ``observable`` as the z magnetization of ``readout_qubit`` after ``steps``."""

    def __init__(self, observable, steps, readout_qubit):
        if not isinstance(observable, pauli.PauliString):
            observable = pauli.PauliString(observable)
        self.observable = observable
        self.steps = tuple(steps) if steps else (GateStep.identity(),)
        self.n_qubits = observable.n_qubits
        if not 0 <= readout_qubit < self.n_qubits:
            raise MappingError('readout qubit %d out of range for %s' % (readout_qubit, observable))
        self.readout_qubit = readout_qubit
        self._unitary = compose_unitary(self.steps, self.n_qubits)
        self._z = hilbert.embed_operator(pauli.SIGMA['Z'], readout_qubit, self.n_qubits)

    @property
    def unitary(self):
        return self._unitary

    def heisenberg_defect(self):
        """max |U^dagger Z_r U - P| entrywise."""
        u = self._unitary
        mapped = u.conj().T @ self._z @ u
        return float(np.max(np.abs(mapped - self.observable.matrix())))

    def readout(self, rho):
        """Tr[(U rho U^dagger) Z_r]"""
        if rho.dim != 2 ** self.n_qubits:
            raise DimensionError('%d-qubit mapping applied to state of dim %d' % (self.n_qubits, rho.dim))
        return hilbert.expectation(rho.evolve(self._unitary), self._z)

    def contract_defect(self, states):
        worst = 0.0
        for rho in states:
            direct = hilbert.expectation(rho, self.observable.matrix())
            worst = max(worst, abs(self.readout(rho) - direct))
        return worst

    def verify_contract(self, states, tol=hilbert.TOL):
        worst = self.contract_defect(states)
        if worst > tol:
            raise VerificationError('mapping %s: readout deviates by %.3g' % (self.describe(), worst))
        return worst

    def describe(self):
        # pulse products are written latest gate first, as U = CNOT12 Y2 Y1
        unitary = '.'.join(s.label() for s in reversed(self.steps))
        return '<%s> = Tr[U rho U+ Z%d], U = %s' % (self.observable, self.readout_qubit + 1, unitary)

    def __repr__(self):
        return 'MeasurementMapping(%s)' % self.describe()


def _three_qubit_mappings():
    c = GateStep.cnot
    return [
        MeasurementMapping('IIZ', [], 2),
        MeasurementMapping('IZI', [], 1),
        MeasurementMapping('IZZ', [c(1, 2)], 2),
        MeasurementMapping('ZII', [], 0),
        MeasurementMapping('ZIZ', [c(0, 2)], 2),
        MeasurementMapping('ZZI', [c(0, 1)], 1),
        MeasurementMapping('ZZZ', [c(0, 1), c(1, 2)], 2),
    ]


def _two_qubit_mappings():
    c = GateStep.cnot
    return [
        MeasurementMapping('XX', [GateStep.y90(0), GateStep.y90(1), c(0, 1)], 1),
        MeasurementMapping('YY', [GateStep.x90(0, -1), GateStep.x90(1, -1), c(0, 1)], 1),
        MeasurementMapping('ZI', [], 0),
        MeasurementMapping('ZZ', [c(0, 1)], 1),
        MeasurementMapping('IZ', [], 1),
    ]


def builtin_mappings(n_qubits):
    """The readout tables of the three-spin and two-spin experiments."""
    if n_qubits == 3:
        return _three_qubit_mappings()
    if n_qubits == 2:
        return _two_qubit_mappings()
    raise MappingError('no built-in mapping table for %d qubits' % n_qubits)


class PseudopureModel(object):
    def __init__(self, epsilon, n_qubits):
        epsilon = float(epsilon)
        if not 0.0 < epsilon <= 1.0:
            raise PolarizationError('epsilon %g outside (0, 1]' % epsilon)
        if n_qubits < 1:
            raise DimensionError('pseudopure model needs at least one qubit')
        self.epsilon = epsilon
        self.n_qubits = n_qubits

    @property
    def dim(self):
        return 2 ** self.n_qubits

    def __repr__(self):
        return 'PseudopureModel(epsilon=%g, n_qubits=%d)' % (self.epsilon, self.n_qubits)


def pps_state(pure, model):
    """(1 - eps)/2^n 1 + eps |pure><pure|"""
    if isinstance(pure, hilbert.DensityOperator):
        target = pure.matrix
        dim = pure.dim
    else:
        target = hilbert.projector_from_vector(pure)
        dim = target.shape[0]
    if dim != model.dim:
        raise DimensionError('state of dim %d for a %d-qubit model' % (dim, model.n_qubits))
    eps = model.epsilon
    mixed = (1.0 - eps) / dim * np.eye(dim, dtype=complex)
    return hilbert.DensityOperator(mixed + eps * target)


# ideal tomography targets for the unrotated and the fully rotated reference states
TOMOGRAPHY_TARGETS = {
    'kcbs-twin': {
        0.0: hilbert.StateVector.basis(8, 0),
        180.0: hilbert.StateVector.basis(8, 4),
    },
    'c4': {
        0.0: hilbert.StateVector.basis(4, 3),
        180.0: hilbert.StateVector([0, -1, 0, 0]),
    },
}


def tomography_target(scenario_name, theta_deg):
    """The tabulated target state, or None for angles without one."""
    return TOMOGRAPHY_TARGETS.get(scenario_name, {}).get(float(theta_deg) % 360.0)


def state_fidelities(scenario_name, ideal, prepared, theta_deg):
    """
    Fidelity of the prepared (pseudopure) state against the ideal rotated state and,
    where a tabulated target exists, of the ideal state against that target.
    """
    out = {'prepared_vs_ideal': hilbert.fidelity(prepared, ideal), 'ideal_vs_target': None}
    target = tomography_target(scenario_name, theta_deg)
    if target is not None:
        out['ideal_vs_target'] = hilbert.fidelity(ideal, hilbert.DensityOperator.pure(target))
    return out


class TermReading(object):
    def __init__(self, label, coefficient, exact, sampled=None, stderr=0.0, mapped=True):
        self.label = label
        self.coefficient = coefficient
        self.exact = exact
        self.sampled = sampled
        self.stderr = stderr
        self.mapped = mapped

    @property
    def estimate(self):
        return self.exact if self.sampled is None else self.sampled

    def to_json(self):
        return {'coefficient': self.coefficient, 'exact': self.exact,
                'sampled': self.sampled, 'mapped': self.mapped}


class NmrResult(object):
    def __init__(self, value, stderr, per_term, epsilon, shots, seed, normalized=True):
        self.value = value
        self.stderr = stderr
        self.per_term = per_term
        self.epsilon = epsilon
        self.shots = shots
        self.seed = seed
        self.normalized = normalized

    def unmapped(self):
        return [t.label for t in self.per_term if not t.mapped]

    def to_json(self):
        return {
            'value': self.value,
            'stderr': self.stderr,
            'per_term': dict((t.label, t.to_json()) for t in self.per_term),
            'epsilon': self.epsilon,
            'shots': 'exact' if self.shots is None else self.shots,
            'seed': self.seed,
        }

    def __repr__(self):
        return 'NmrResult(%.6f +- %.6f, shots=%s)' % (self.value, self.stderr, self.shots or 'exact')


def _measure(scenario, state, agg, mappings, shots, rng, divisor, epsilon, normalize, strict):
    if shots is not None and shots < 1:
        raise MappingError('shots must be at least 1, got %r' % shots)
    if not 0.0 < epsilon <= 1.0:
        raise PolarizationError('epsilon %g outside (0, 1]' % epsilon)
    if state.dim != scenario.dim:
        raise DimensionError('state of dim %d for scenario %s of dim %d'
                             % (state.dim, scenario.name, scenario.dim))
    if divisor is None:
        divisor = scenario.dim
    if divisor == 0:
        raise MappingError('divisor must be non-zero')
    by_label = dict((m.observable.label, m) for m in mappings)
    scale = 1.0 / epsilon if normalize else 1.0
    readings = []
    total = agg.identity_coefficient()
    variance = 0.0
    for label, coeff in agg.non_identity_terms():
        mapping = by_label.get(label)
        if mapping is None:
            if strict:
                raise MappingError('no readout mapping for %s' % label)
            log.warn('%s has no readout mapping; using the exact expectation' % label)
            raw = hilbert.expectation(state, pauli.pauli_matrix(label))
            reading = TermReading(label, coeff, raw * scale, mapped=False)
        else:
            raw = mapping.readout(state)
            reading = TermReading(label, coeff, raw * scale)
            if shots is not None:
                p_up = min(1.0, max(0.0, (1.0 + raw) / 2.0))
                ups = rng.binomial(shots, p_up)
                mean = 2.0 * ups / shots - 1.0
                reading.sampled = mean * scale
                reading.stderr = math.sqrt(max(1.0 - mean * mean, 0.0) / shots) * scale
        readings.append(reading)
        total += coeff * reading.estimate
        variance += (coeff * reading.stderr) ** 2
    return total / divisor, math.sqrt(variance) / abs(divisor), readings


def measure_inequality_nmr(scenario, state, agg, mappings, shots=None, seed=None, divisor=None,
                           epsilon=1.0, normalize=True, strict=False):
    """
    Inequality value read out term by term through the mapping unitaries.

    ``shots=None`` is exact mode. With finite shots every mapped term becomes the mean
    of ``shots`` +-1 outcomes. The identity term is a constant and is never sampled.
    ``normalize`` divides readings by epsilon, undoing the pseudopure attenuation.
    """
    rng = np.random.default_rng(seed)
    value, stderr, readings = _measure(scenario, state, agg, mappings, shots, rng,
                                       divisor, epsilon, normalize, strict)
    log.info('%s: %.6f +- %.6f (shots=%s, epsilon=%g)'
             % (scenario.name, value, stderr, shots or 'exact', epsilon))
    return NmrResult(value, stderr, readings, epsilon, shots, seed, normalize)


class RepeatedResult(object):
    def __init__(self, runs, seed):
        self.runs = runs
        self.seed = seed
        values = np.array([r.value for r in runs])
        self.value = float(np.mean(values))
        if len(runs) > 1:
            self.stderr = float(np.std(values, ddof=1) / math.sqrt(len(runs)))
        else:
            self.stderr = runs[0].stderr

    def to_json(self):
        first = self.runs[0]
        return {
            'value': self.value,
            'stderr': self.stderr,
            'repetitions': [r.value for r in self.runs],
            'per_term': first.to_json()['per_term'],
            'epsilon': first.epsilon,
            'shots': 'exact' if first.shots is None else first.shots,
            'seed': self.seed,
        }

    def __repr__(self):
        return 'RepeatedResult(%.6f +- %.6f over %d runs)' % (self.value, self.stderr, len(self.runs))


def repeat_measurement(scenario, state, agg, mappings, repetitions=3, shots=None, seed=None,
                       divisor=None, epsilon=1.0, normalize=True, strict=False):
    """Independent repetitions with child seeds; error bar is the standard error of the mean."""
    if repetitions < 1:
        raise MappingError('repetitions must be at least 1, got %r' % repetitions)
    children = np.random.SeedSequence(seed).spawn(repetitions)
    runs = []
    for child in children:
        value, stderr, readings = _measure(scenario, state, agg, mappings, shots,
                                           np.random.default_rng(child), divisor, epsilon,
                                           normalize, strict)
        runs.append(NmrResult(value, stderr, readings, epsilon, shots, None, normalize))
    result = RepeatedResult(runs, seed)
    log.info('%s: %d repetitions -> %s' % (scenario.name, repetitions, result))
    return result
