"""
n-qubit Pauli strings and real-weighted sums of them.

A label such as ``'XZI'`` means sigma_x on qubit 1 (most significant), sigma_z on
qubit 2 and identity on qubit 3.
"""
import itertools
import json
import math

import numpy as np

from . import logger
from . hilbert import hermiticity_defect, is_power_of_two, qubit_count, tensor_all, TOL
from .error import DimensionError, HermiticityError

log = logger.Logger('pauli')

PRUNE_TOL = 1e-12
ALPHABET = 'IXYZ'

SIGMA = {
    'I': np.array([[1, 0], [0, 1]], dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
}

# sigma[b, b ^ x] for b = 0, 1; the only non-zero entry of each row
_ROW_PHASE = {
    'I': np.array([1, 1], dtype=complex),
    'X': np.array([1, 1], dtype=complex),
    'Y': np.array([-1j, 1j], dtype=complex),
    'Z': np.array([1, -1], dtype=complex),
}

# operator table of the three-qubit experiment, A0 .. A35
THREE_QUBIT_TABLE = (
    'IIX', 'IIZ', 'IXI', 'IXX', 'IXZ', 'IYY', 'IZI', 'IZX', 'IZZ',
    'XII', 'XIX', 'XIZ', 'XXI', 'XXX', 'XXZ', 'XYX', 'XYY', 'XZI',
    'XZX', 'XZZ', 'YIY', 'YXY', 'YYI', 'YYX', 'YYZ', 'YZY', 'ZII',
    'ZIX', 'ZIZ', 'ZXI', 'ZXX', 'ZXZ', 'ZYY', 'ZZI', 'ZZX', 'ZZZ',
)

# observables of the two-qubit experiment, B0 .. B4
TWO_QUBIT_TABLE = ('XX', 'YY', 'ZI', 'ZZ', 'IZ')

_TABLES = {3: ('A', THREE_QUBIT_TABLE), 2: ('B', TWO_QUBIT_TABLE)}


class PauliString(object):
    """Tensor product of single-qubit operators from {I, X, Y, Z}."""

    def __init__(self, label):
        if isinstance(label, PauliString):
            label = label.label
        label = str(label).upper()
        if not label:
            raise DimensionError('empty Pauli label')
        bad = set(label) - set(ALPHABET)
        if bad:
            raise DimensionError('invalid Pauli symbols %s in %r' % (''.join(sorted(bad)), label))
        self.label = label

    @property
    def n_qubits(self):
        return len(self.label)

    def is_identity(self):
        return set(self.label) == {'I'}

    def x_mask(self):
        """Bit mask of the qubits the string flips (X or Y), qubit 1 as the top bit."""
        mask = 0
        for ch in self.label:
            mask = (mask << 1) | (1 if ch in 'XY' else 0)
        return mask

    def row_phases(self):
        """phase[j] with P|k> non-zero only at row j = k ^ x_mask: P[j, j ^ x] = phase[j]."""
        return tensor_all([_ROW_PHASE[ch] for ch in self.label])

    def matrix(self):
        return pauli_matrix(self)

    def __eq__(self, other):
        return isinstance(other, PauliString) and other.label == self.label

    def __lt__(self, other):
        return self.label < other.label

    def __hash__(self):
        return hash(self.label)

    def __str__(self):
        return self.label

    def __repr__(self):
        return 'PauliString(%r)' % self.label


def identity_label(n_qubits):
    return 'I' * n_qubits


def all_labels(n_qubits):
    """Every n-qubit label, ordered lexicographically with I < X < Y < Z."""
    return [''.join(p) for p in itertools.product(ALPHABET, repeat=n_qubits)]


def pauli_matrix(p):
    """2**n x 2**n matrix of a Pauli string, by chained tensor products."""
    p = PauliString(p)
    return tensor_all([SIGMA[ch] for ch in p.label])


def table_label(index, n_qubits=3):
    _, table = _TABLES[n_qubits]
    return table[index]


def table_index(label):
    """Index of a label in its operator table, or None when it is not listed."""
    label = PauliString(label).label
    entry = _TABLES.get(len(label))
    if entry is None or label not in entry[1]:
        return None
    return entry[1].index(label)


def table_name(label):
    """'A26' / 'B3' style name for reports, or the bare label."""
    label = PauliString(label).label
    if label == identity_label(len(label)):
        return '1'
    index = table_index(label)
    if index is None:
        return label
    return '%s%d' % (_TABLES[len(label)][0], index)


class PauliPolynomial(object):
    """
    Sum_P c_P P with real c_P, identity term included. Immutable; ``terms`` returns a copy.
    """

    def __init__(self, n_qubits, terms=None, prune=PRUNE_TOL):
        if n_qubits < 1:
            raise DimensionError('Pauli polynomial needs at least one qubit')
        self.n_qubits = n_qubits
        cleaned = {}
        for label, coeff in (terms or {}).items():
            label = PauliString(label).label
            if len(label) != n_qubits:
                raise DimensionError('term %s does not act on %d qubits' % (label, n_qubits))
            coeff = complex(coeff)
            if abs(coeff.imag) > TOL:
                raise HermiticityError('complex coefficient %s on %s' % (coeff, label))
            coeff = cleaned.get(label, 0.0) + coeff.real
            cleaned[label] = coeff
        self._terms = dict(sorted((k, v) for k, v in cleaned.items() if abs(v) >= prune))

    @property
    def terms(self):
        return dict(self._terms)

    def labels(self):
        return list(self._terms)

    def coefficient(self, label):
        return self._terms.get(PauliString(label).label, 0.0)

    def identity_coefficient(self):
        return self.coefficient(identity_label(self.n_qubits))

    def non_identity_terms(self):
        ident = identity_label(self.n_qubits)
        return [(k, v) for k, v in self._terms.items() if k != ident]

    def scaled(self, factor):
        return PauliPolynomial(self.n_qubits, {k: v * factor for k, v in self._terms.items()})

    def __add__(self, other):
        if other.n_qubits != self.n_qubits:
            raise DimensionError('adding %d- and %d-qubit polynomials' % (self.n_qubits, other.n_qubits))
        merged = dict(self._terms)
        for k, v in other._terms.items():
            merged[k] = merged.get(k, 0.0) + v
        return PauliPolynomial(self.n_qubits, merged)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        return (isinstance(other, PauliPolynomial) and other.n_qubits == self.n_qubits
                and other._terms == self._terms)

    def __ne__(self, other):
        return not self.__eq__(other)

    def isclose(self, other, tol=PRUNE_TOL):
        if other.n_qubits != self.n_qubits:
            return False
        labels = set(self._terms) | set(other._terms)
        return all(abs(self.coefficient(k) - other.coefficient(k)) <= tol for k in labels)

    def to_json(self):
        return {'n': self.n_qubits, 'terms': dict(self._terms)}

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj['n']), {k: float(v) for k, v in obj['terms'].items()})

    def format(self, precision=6):
        """Human readable, e.g. '+1*A1 +4*A6 ... +10*1'."""
        if not self._terms:
            return '0'
        parts = []
        for label, coeff in self._terms.items():
            parts.append('%+.*g*%s' % (precision, coeff, table_name(label)))
        return ' '.join(parts)

    def __repr__(self):
        return 'PauliPolynomial(n=%d, %s)' % (self.n_qubits, self.format())


def _check_hermitian_square(H):
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise DimensionError('operator of shape %s is not square' % (H.shape,))
    if not is_power_of_two(H.shape[0]) or H.shape[0] < 2:
        raise DimensionError('operator dimension %d is not a power of two' % H.shape[0])
    defect = hermiticity_defect(H)
    if defect > TOL:
        raise HermiticityError('operator not Hermitian (defect %.3g)' % defect)
    return H


def decompose(H, prune=PRUNE_TOL):
    """Coefficients c_P = Tr[P H] / 2**n of a Hermitian operator."""
    H = _check_hermitian_square(H)
    dim = H.shape[0]
    n = qubit_count(dim)
    rows = np.arange(dim)
    terms = {}
    for label in all_labels(n):
        p = PauliString(label)
        # Tr[P H] = sum_j P[j, j^x] H[j^x, j]
        cols = rows ^ p.x_mask()
        trace = np.sum(p.row_phases() * H[cols, rows])
        terms[label] = trace / dim
    poly = PauliPolynomial(n, terms, prune=prune)
    log.debug('decompose: %d-qubit operator -> %d terms' % (n, len(poly)))
    return poly


def reconstruct(poly):
    """Sum_P c_P P as a dense matrix."""
    dim = 2 ** poly.n_qubits
    out = np.zeros((dim, dim), dtype=complex)
    for label, coeff in poly.terms.items():
        out += coeff * pauli_matrix(label)
    return out


def aggregate_observable(projectors, weight, n_qubits=None):
    """decompose(weight * sum of projectors)."""
    projectors = [np.asarray(p, dtype=complex) for p in projectors]
    if not projectors:
        return PauliPolynomial(n_qubits or 1)
    shape = projectors[0].shape
    for p in projectors[1:]:
        if p.shape != shape:
            raise DimensionError('projectors of shapes %s and %s' % (shape, p.shape))
    total = weight * np.sum(projectors, axis=0)
    return decompose(total)


class TermMismatch(object):
    def __init__(self, label, derived, printed):
        self.label = label
        self.derived = derived
        self.printed = printed

    def describe(self):
        return '%s (%s): derived %+.6f, printed %+.6f' % (
            table_name(self.label), self.label, self.derived, self.printed)

    def __repr__(self):
        return 'TermMismatch(%s)' % self.describe()


def compare_polynomials(derived, printed, tol=1e-9):
    """Term-level differences between a derived and a transcribed expansion."""
    labels = sorted(set(derived.labels()) | set(printed.labels()))
    out = []
    for label in labels:
        d = derived.coefficient(label)
        p = printed.coefficient(label)
        if abs(d - p) > tol:
            out.append(TermMismatch(label, d, p))
    return out


# Published expansions, term by term, as they are typeset. Keys are table indices,
# ID is the identity. Each entry is (prefactor, {index: coefficient}).
ID = -1
_R2 = math.sqrt(2.0)
_R3 = math.sqrt(3.0)
_R6 = math.sqrt(6.0)

_PRINTED_THREE_QUBIT = [
    (1 / 16., {0: -1, 1: 1, 6: 2, 7: -1, 8: 1,
               9: _R2, 10: -_R2, 11: _R2, 17: _R2, 18: -_R2, 19: _R2, 20: -_R2, 25: -_R2,
               27: -1, 28: -1, 34: -1, 35: -1, ID: 2}),
    (1 / 32., {0: -_R3, 1: -1, 3: 2, 5: -2, 6: 2, 7: -_R3, 8: 1,
               9: -_R2, 10: _R2 * _R6, 11: -_R2, 12: _R2 * _R6, 13: -_R2, 14: -_R2 * _R6,
               15: _R2, 16: _R2, 17: -_R2, 18: _R2 * _R6,
               19: -_R2, 20: -_R2 * _R6, 21: -_R2, 22: _R2 * _R6, 23: -_R2, 24: -_R2 * _R6,
               25: -_R2 * _R6,
               27: _R3, 28: 1, 30: 2, 32: -2, 33: -2, 34: _R3, 35: 3, ID: 4}),
    (1 / 8., {4: -1, 5: 1, 7: -1, 26: 1, 31: -1, 32: 1, 34: -1, ID: 1}),
    (1 / 8., {4: 1, 5: -1, 7: -1, 26: 1, 31: 1, 32: -1, 34: -1, ID: 1}),
    (1 / 32., {0: -_R3, 1: -1, 3: -2, 5: 2, 6: 2, 7: -_R3, 8: 1,
               9: -_R2, 10: _R2 * _R6, 11: -_R2, 12: -_R2 * _R6, 13: _R2, 14: _R2 * _R6,
               15: -_R2, 16: -_R2, 17: -_R2, 18: _R2 * _R6,
               19: -_R2, 20: -_R2 * _R6, 21: _R2, 22: -_R2 * _R6, 23: _R2, 24: _R2 * _R6,
               25: -_R2 * _R6,
               27: _R3, 28: 1, 30: -2, 32: 2, 33: -2, 34: _R3, 35: 3, ID: 4}),
    # the A19 sign is a discretionary hyphen in the source, so it renders as '+'
    (1 / 32., {0: _R3, 1: 1, 2: -2, 4: -2, 6: 2, 7: _R3, 8: -1,
               9: -_R2, 10: -_R2 * _R6, 11: -_R2, 12: _R2, 13: _R2 * _R6, 14: _R2,
               16: _R2 * _R6, 17: -_R2, 18: -_R2 * _R6,
               19: _R2, 20: _R2 * _R6, 21: -_R2 * _R6, 22: _R2, 23: _R2 * _R6, 24: _R2,
               25: _R2 * _R6,
               27: -_R3, 28: 3, 29: -2, 31: -2, 33: -2, 34: -_R3, 35: 1, ID: 4}),
    (1 / 32., {0: _R3, 1: 1, 2: 2, 4: 2, 6: 2, 7: _R3, 8: -1,
               9: -_R2, 10: -_R2 * _R6, 11: -_R2, 12: -_R2, 13: -_R2 * _R6, 14: -_R2,
               16: -_R2 * _R6, 17: -_R2, 18: -_R2 * _R6,
               19: -_R2, 20: _R2 * _R6, 21: _R2 * _R6, 22: -_R2, 23: -_R2 * _R6, 24: -_R2,
               25: _R2 * _R6,
               27: -_R3, 28: 3, 29: 2, 31: 2, 33: -2, 34: -_R3, 35: 1, ID: 4}),
    (1 / 8., {4: 1, 5: 1, 7: 1, 26: 1, 31: 1, 32: 1, 34: 1, ID: 1}),
    (1 / 16., {0: 1, 1: 1, 6: 2, 7: 1, 8: 1,
               9: _R2, 10: _R2, 11: _R2, 17: _R2, 18: _R2, 19: _R2, 20: _R2, 25: _R2,
               27: 1, 28: -1, 34: 1, 35: -1, ID: 2}),
    (1 / 8., {4: -1, 5: -1, 7: 1, 26: 1, 31: -1, 32: -1, 34: 1, ID: 1}),
]

_PRINTED_TWO_QUBIT = [
    (1 / 4., {'ZI': -1, 'ZX': -1, 'IX': 1, 'II': 1}),
    (1 / 4., {'XI': 1, 'XX': -1, 'IX': -1, 'II': 1}),
    (1 / 4., {'XI': -1, 'XX': 1, 'IX': -1, 'II': 1}),
    (1 / 4., {'XX': -1, 'YY': 1, 'ZZ': 1, 'II': 1}),
    (1 / 4., {'XI': 1, 'XX': 1, 'IX': 1, 'II': 1}),
    (1 / 4., {'XI': -1, 'XZ': 1, 'IZ': -1, 'II': 1}),
    (1 / 4., {'XZ': -1, 'YY': 1, 'ZX': -1, 'II': 1}),
    (1 / 4., {'XX': 1, 'YY': -1, 'ZZ': 1, 'II': 1}),
    (1 / 4., {'XZ': 1, 'YY': 1, 'ZX': 1, 'II': 1}),
    (1 / 4., {'XZ': -1, 'YY': -1, 'ZX': 1, 'II': 1}),
]


def _three_qubit_label(index):
    return 'III' if index == ID else THREE_QUBIT_TABLE[index]


def printed_decompositions(n_qubits):
    """The ten published projector expansions for the 3-qubit or the 2-qubit scenario."""
    if n_qubits == 3:
        return [PauliPolynomial(3, {_three_qubit_label(i): pre * c for i, c in body.items()})
                for pre, body in _PRINTED_THREE_QUBIT]
    if n_qubits == 2:
        return [PauliPolynomial(2, {k: pre * c for k, c in body.items()})
                for pre, body in _PRINTED_TWO_QUBIT]
    raise DimensionError('no published expansions for %d qubits' % n_qubits)
