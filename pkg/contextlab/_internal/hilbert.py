"""
Dense linear algebra for small multi-qubit Hilbert spaces.

Operators are plain ``numpy`` complex arrays (a "complex matrix" below). States and
density operators are thin immutable wrappers that validate themselves once, at
construction. Basis ordering is the computational basis |q1 q2 ... qn> with qubit 1
as the most significant bit, so index 0 is |00...0>.
"""
import functools

import numpy as np

from . import logger
from .error import DimensionError, HermiticityError, NormalizationError

log = logger.Logger('hilbert')

TOL = 1e-10
STRICT_TOL = 1e-12
MAX_QUBITS = 10


def _frozen(array):
    array = np.array(array, dtype=complex)
    array.setflags(write=False)
    return array


def is_power_of_two(n):
    return n >= 1 and (n & (n - 1)) == 0


def qubit_count(dim):
    """Number of qubits of a 2**n dimensional space."""
    if not is_power_of_two(dim):
        raise DimensionError('dimension %d is not a power of two' % dim)
    n = dim.bit_length() - 1
    if n > MAX_QUBITS:
        raise DimensionError('dimension %d exceeds 2**%d' % (dim, MAX_QUBITS))
    return n


def hermiticity_defect(matrix):
    """max |M - M^dagger| entrywise."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise DimensionError('matrix of shape %s is not square' % (matrix.shape,))
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def is_hermitian(matrix, tol=TOL):
    return hermiticity_defect(matrix) <= tol


class StateVector(object):
    """Ket of a finite dimensional space. Amplitudes are stored read-only."""

    def __init__(self, amplitudes):
        amplitudes = _frozen(amplitudes)
        if amplitudes.ndim != 1 or amplitudes.size == 0:
            raise DimensionError('state vector must be a non-empty 1-D array')
        if not np.any(amplitudes):
            raise NormalizationError('zero vector')
        self.amplitudes = amplitudes

    @classmethod
    def from_components(cls, components, scale=1.0):
        """Build ``scale * components``; the form the vectors are written in, e.g. (1/2)(1,-1,-1,-1)."""
        return cls(scale * np.asarray(components, dtype=complex))

    @classmethod
    def basis(cls, dim, index):
        if not 0 <= index < dim:
            raise DimensionError('basis index %d out of range for dim %d' % (index, dim))
        amps = np.zeros(dim, dtype=complex)
        amps[index] = 1.0
        return cls(amps)

    @property
    def dim(self):
        return self.amplitudes.size

    @property
    def n_qubits(self):
        return qubit_count(self.dim)

    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol=TOL):
        return abs(self.norm() - 1.0) <= tol

    def normalized(self):
        return StateVector(self.amplitudes / self.norm())

    def inner(self, other):
        """<self|other>"""
        if other.dim != self.dim:
            raise DimensionError('inner product of dims %d and %d' % (self.dim, other.dim))
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def evolve(self, unitary):
        unitary = np.asarray(unitary)
        if unitary.shape != (self.dim, self.dim):
            raise DimensionError('unitary of shape %s on state of dim %d' % (unitary.shape, self.dim))
        return StateVector(unitary @ self.amplitudes)

    def __eq__(self, other):
        return isinstance(other, StateVector) and np.array_equal(self.amplitudes, other.amplitudes)

    def __hash__(self):
        return hash(self.amplitudes.tobytes())

    def __repr__(self):
        return 'StateVector(%s)' % np.array2string(self.amplitudes, precision=4)


class DensityOperator(object):
    """Hermitian, unit trace, positive semidefinite operator."""

    def __init__(self, matrix, tol=STRICT_TOL):
        matrix = _frozen(matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise DimensionError('density operator must be square, got %s' % (matrix.shape,))
        defect = hermiticity_defect(matrix)
        if defect > tol:
            raise HermiticityError('density operator not Hermitian (defect %.3g)' % defect)
        trace = complex(np.trace(matrix))
        if abs(trace - 1.0) > tol:
            raise NormalizationError('density operator trace is %s, expected 1' % trace)
        smallest = float(np.min(np.linalg.eigvalsh(matrix)))
        if smallest < -TOL:
            raise NormalizationError('density operator has negative eigenvalue %.3g' % smallest)
        self.matrix = matrix

    @classmethod
    def pure(cls, state):
        return cls(projector_from_vector(state))

    @classmethod
    def maximally_mixed(cls, dim):
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def dim(self):
        return self.matrix.shape[0]

    @property
    def n_qubits(self):
        return qubit_count(self.dim)

    def purity(self):
        return float(np.real(np.einsum('ij,ji->', self.matrix, self.matrix)))

    def evolve(self, unitary):
        """U rho U^dagger"""
        unitary = np.asarray(unitary)
        if unitary.shape != self.matrix.shape:
            raise DimensionError('unitary of shape %s on operator of dim %d' % (unitary.shape, self.dim))
        out = unitary @ self.matrix @ unitary.conj().T
        # rounding can leave a 1e-17 anti-Hermitian part; symmetrize before validation
        return DensityOperator((out + out.conj().T) / 2)

    def mix(self, other, weight):
        """(1 - weight) * self + weight * other"""
        if other.dim != self.dim:
            raise DimensionError('cannot mix dims %d and %d' % (self.dim, other.dim))
        return DensityOperator((1.0 - weight) * self.matrix + weight * other.matrix)

    def __repr__(self):
        return 'DensityOperator(dim=%d, purity=%.6f)' % (self.dim, self.purity())


def tensor_product(a, b):
    """Kronecker product a (x) b; dimensions multiply."""
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def tensor_all(factors):
    """a (x) b (x) c ... for a non-empty sequence of factors."""
    factors = list(factors)
    if not factors:
        raise DimensionError('empty tensor product')
    return functools.reduce(tensor_product, factors)


def projector_from_vector(v, tol=TOL):
    """|v><v| for a unit vector v."""
    if not isinstance(v, StateVector):
        v = StateVector(v)
    if not v.is_normalized(tol):
        raise NormalizationError('vector has norm %.12g, expected 1' % v.norm())
    amps = v.amplitudes
    return np.outer(amps, amps.conj())


def rotation_unitary(theta):
    """
    Real rotation [[cos t/2, -sin t/2], [sin t/2, cos t/2]] of angle theta (radians).
    """
    c = np.cos(theta / 2.0)
    s = np.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def embed_operator(op, active_qubit, n_qubits):
    """op on qubit ``active_qubit`` (0 is the most significant) and identity elsewhere."""
    if n_qubits < 1 or n_qubits > MAX_QUBITS:
        raise DimensionError('unsupported qubit count %d' % n_qubits)
    if not 0 <= active_qubit < n_qubits:
        raise DimensionError('qubit index %d out of range for %d qubits' % (active_qubit, n_qubits))
    eye = np.eye(2, dtype=complex)
    return tensor_all([op if q == active_qubit else eye for q in range(n_qubits)])


def embed_rotation(theta, active_qubit, n_qubits):
    """U_theta on the active qubit, identity on the others."""
    return embed_operator(rotation_unitary(theta), active_qubit, n_qubits)


def expectation(rho, obs, tol=TOL):
    """Tr[rho . obs] for a Hermitian observable."""
    obs = np.asarray(obs)
    if obs.shape != rho.matrix.shape:
        raise DimensionError('observable of shape %s on state of dim %d' % (obs.shape, rho.dim))
    defect = hermiticity_defect(obs)
    if defect > tol:
        raise HermiticityError('observable not Hermitian (defect %.3g)' % defect)
    value = complex(np.einsum('ij,ji->', rho.matrix, obs))
    if abs(value.imag) > tol:
        raise HermiticityError('expectation has imaginary part %.3g' % value.imag)
    return value.real


def fidelity(rho_a, rho_b):
    """
    Normalized Hilbert-Schmidt overlap |Tr[ra rb]| / sqrt(Tr[ra^2] Tr[rb^2]).
    Equals |<a|b>|^2 for pure states.
    """
    if rho_a.dim != rho_b.dim:
        raise DimensionError('fidelity of dims %d and %d' % (rho_a.dim, rho_b.dim))
    pa = rho_a.purity()
    pb = rho_b.purity()
    if pa <= 0.0 or pb <= 0.0:
        raise NormalizationError('zero purity input')
    overlap = abs(complex(np.einsum('ij,ji->', rho_a.matrix, rho_b.matrix)))
    return min(1.0, overlap / np.sqrt(pa * pb))


def is_unitary(matrix, tol=STRICT_TOL):
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    eye = np.eye(matrix.shape[0])
    return float(np.max(np.abs(matrix @ matrix.conj().T - eye))) <= tol


def random_state(dim, rng):
    """Haar random pure state."""
    amps = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return StateVector(amps / np.linalg.norm(amps))


def random_density_operator(dim, rng, rank=None):
    """G G^dagger / Tr for a Gaussian dim x rank matrix G; full rank by default."""
    rank = rank or dim
    g = rng.normal(size=(dim, rank)) + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    rho = rho / np.trace(rho)
    return DensityOperator((rho + rho.conj().T) / 2)
