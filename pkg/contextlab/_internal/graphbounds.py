"""
Orthogonality graphs and the classical / generalized-probabilistic bounds.

The non-contextual bound of a sum of exclusive-event probabilities is the
independence number alpha(G) of its orthogonality graph; the bound over all theories
respecting exclusivity is the fractional packing number alpha*(G), the optimum of

    maximize sum_i w_i  subject to  sum_{i in Q} w_i <= 1 for every maximal clique Q,
                                    0 <= w_i <= 1.
"""
from fractions import Fraction

import numpy as np

from . import logger
from .error import DimensionError, GraphBudgetError, LinearProgramError

log = logger.Logger('graphbounds')

EDGE_TOL = 1e-9
MAX_VERTICES = 24


class OrthogonalityGraph(object):
    """Undirected simple graph on vertices 0 .. n-1; edges mean exclusivity."""

    def __init__(self, n_vertices, edges=()):
        if n_vertices < 0:
            raise DimensionError('negative vertex count')
        normalized = set()
        for a, b in edges:
            a, b = int(a), int(b)
            if a == b:
                raise DimensionError('self-loop on vertex %d' % a)
            if not (0 <= a < n_vertices and 0 <= b < n_vertices):
                raise DimensionError('edge (%d, %d) outside %d vertices' % (a, b, n_vertices))
            normalized.add((min(a, b), max(a, b)))
        self.n_vertices = int(n_vertices)
        self.edges = frozenset(normalized)
        self._adj = [0] * self.n_vertices
        for a, b in self.edges:
            self._adj[a] |= 1 << b
            self._adj[b] |= 1 << a

    def has_edge(self, a, b):
        return bool(self._adj[a] >> b & 1)

    def neighbors(self, v):
        return {u for u in range(self.n_vertices) if self._adj[v] >> u & 1}

    def adjacency_masks(self):
        return list(self._adj)

    def sorted_edges(self):
        return sorted(self.edges)

    def __eq__(self, other):
        return (isinstance(other, OrthogonalityGraph) and other.n_vertices == self.n_vertices
                and other.edges == self.edges)

    def __hash__(self):
        return hash((self.n_vertices, self.edges))

    def __repr__(self):
        return 'OrthogonalityGraph(n=%d, edges=%d)' % (self.n_vertices, len(self.edges))


def _amplitudes(v):
    return np.asarray(getattr(v, 'amplitudes', v), dtype=complex)


def build_graph(vectors, tol=EDGE_TOL):
    """Edge (i, j) iff |<v_i|v_j>| < tol."""
    if tol <= 0:
        raise DimensionError('edge tolerance must be positive, got %g' % tol)
    amps = [_amplitudes(v) for v in vectors]
    for a in amps[1:]:
        if a.shape != amps[0].shape:
            raise DimensionError('vectors of dims %d and %d' % (amps[0].size, a.size))
    edges = []
    for i in range(len(amps)):
        for j in range(i + 1, len(amps)):
            if abs(np.vdot(amps[i], amps[j])) < tol:
                edges.append((i, j))
    log.debug('build_graph: %d vertices, %d edges' % (len(amps), len(edges)))
    return OrthogonalityGraph(len(amps), edges)


def pentagon_graph():
    """The KCBS cycle C5."""
    return OrthogonalityGraph(5, [(i, (i + 1) % 5) for i in range(5)])


def complete_graph(n):
    return OrthogonalityGraph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def _check_budget(g):
    if g.n_vertices > MAX_VERTICES:
        raise GraphBudgetError('%d vertices exceed the exact enumeration budget of %d'
                               % (g.n_vertices, MAX_VERTICES))


def _popcount(x):
    return bin(x).count('1')


def independence_number(g):
    """Size of the largest independent set, by branch and bound over vertex subsets."""
    _check_budget(g)
    adj = g.adjacency_masks()
    best = [0]

    def search(candidates, size):
        if size + _popcount(candidates) <= best[0]:
            return
        if not candidates:
            best[0] = size
            return
        # vertex of maximum degree inside the candidate set; a vertex with no
        # neighbours left is always taken
        v = max((u for u in range(g.n_vertices) if candidates >> u & 1),
                key=lambda u: _popcount(adj[u] & candidates))
        bit = 1 << v
        if not adj[v] & candidates:
            search(candidates & ~bit, size + 1)
            return
        search(candidates & ~bit & ~adj[v], size + 1)
        search(candidates & ~bit, size)

    search((1 << g.n_vertices) - 1, 0)
    return best[0]


def maximal_cliques(g):
    """All maximal cliques (Bron-Kerbosch with pivoting), each sorted, list sorted."""
    _check_budget(g)
    if g.n_vertices == 0:
        return []
    neighbors = [g.neighbors(v) for v in range(g.n_vertices)]
    found = []

    def expand(clique, candidates, excluded):
        if not candidates and not excluded:
            found.append(sorted(clique))
            return
        pivot = max(candidates | excluded, key=lambda u: len(candidates & neighbors[u]))
        for v in sorted(candidates - neighbors[pivot]):
            expand(clique + [v], candidates & neighbors[v], excluded & neighbors[v])
            candidates = candidates - {v}
            excluded = excluded | {v}

    expand([], set(range(g.n_vertices)), set())
    return sorted(found)


class SimplexTableau(object):
    """
    Dense tableau for  max c.x  s.t.  A x <= b, x >= 0  with b >= 0, so the slack
    basis is feasible and no first phase is needed. Entries are Fractions and
    Bland's rule picks pivots, which rules out cycling.
    """

    def __init__(self, A, b, c):
        self.m = len(A)
        self.n = len(c)
        self.A = [[Fraction(v) for v in row] for row in A]
        self.b = [Fraction(v) for v in b]
        self.c = [Fraction(v) for v in c]
        if any(v < 0 for v in self.b):
            raise LinearProgramError('right hand side must be non-negative')
        self.value = Fraction(0)
        self.nb_vars = list(range(self.n))
        self.b_vars = list(range(self.n, self.n + self.m))
        self.pivots = 0

    def pivot(self, i, j):
        piv = self.A[i][j]
        delta = self.c[j] / piv
        self.value += delta * self.b[i]
        for l in range(self.n):
            self.c[l] -= delta * self.A[i][l]
        self.c[j] = -delta
        for l in range(self.n):
            self.A[i][l] = 1 / piv if l == j else self.A[i][l] / piv
        self.b[i] /= piv
        for k in range(self.m):
            if k != i:
                f = self.A[k][j]
                if f == 0:
                    continue
                for l in range(self.n):
                    self.A[k][l] = -f / piv if l == j else self.A[k][l] - f * self.A[i][l]
                self.b[k] -= f * self.b[i]
        self.nb_vars[j], self.b_vars[i] = self.b_vars[i], self.nb_vars[j]
        self.pivots += 1

    def bland_primal_step(self):
        try:
            v, j = min((self.nb_vars[j], j) for j in range(self.n) if self.c[j] > 0)
        except ValueError:
            return 'optimal'
        try:
            ratio, v, i = min((self.b[i] / self.A[i][j], self.b_vars[i], i)
                              for i in range(self.m) if self.A[i][j] > 0)
        except ValueError:
            return 'unbounded'
        self.pivot(i, j)
        return 'go_on'

    def solve(self):
        while True:
            ret = self.bland_primal_step()
            if ret in ('optimal', 'unbounded'):
                return ret

    def primal_solution(self):
        x = [Fraction(0)] * self.n
        for i, var in enumerate(self.b_vars):
            if var < self.n:
                x[var] = self.b[i]
        return x


def _packing_lp(g, cliques):
    n = g.n_vertices
    rows = []
    rhs = []
    for q in cliques:
        rows.append([1 if v in q else 0 for v in range(n)])
        rhs.append(1)
    for v in range(n):
        rows.append([1 if u == v else 0 for u in range(n)])
        rhs.append(1)
    return SimplexTableau(rows, rhs, [1] * n)


def fractional_packing(g, cliques=None):
    """Exact optimum and weights of the clique-constrained packing LP."""
    if cliques is None:
        cliques = maximal_cliques(g)
    if g.n_vertices == 0:
        return Fraction(0), []
    tableau = _packing_lp(g, [set(q) for q in cliques])
    status = tableau.solve()
    if status != 'optimal':
        raise LinearProgramError('packing LP ended %s' % status)
    log.debug('packing LP: %d constraints, %d pivots, optimum %s'
              % (tableau.m, tableau.pivots, tableau.value))
    return tableau.value, tableau.primal_solution()


def fractional_packing_number(g):
    value, weights = fractional_packing(g)
    return float(value)


def extra_edges(g, contexts):
    """Edges of g not joining two members of one context."""
    covered = set()
    for ctx in contexts:
        ctx = sorted(ctx)
        for i, a in enumerate(ctx):
            for b in ctx[i + 1:]:
                covered.add((a, b))
    return sorted(e for e in g.edges if e not in covered)


class BoundReport(object):
    def __init__(self, independence_number, fractional_packing, maximal_cliques, weights=None):
        self.independence_number = independence_number
        self.fractional_packing = fractional_packing
        self.maximal_cliques = maximal_cliques
        self.weights = weights or []
        if independence_number > fractional_packing + 1e-9:
            raise LinearProgramError('alpha %d exceeds alpha* %.12g'
                                     % (independence_number, fractional_packing))

    def to_json(self):
        return {
            'alpha': self.independence_number,
            'alpha_star': self.fractional_packing,
            'cliques': [list(q) for q in self.maximal_cliques],
        }

    def __repr__(self):
        return 'BoundReport(alpha=%d, alpha_star=%.6f, cliques=%d)' % (
            self.independence_number, self.fractional_packing, len(self.maximal_cliques))


def bound_report(g):
    cliques = maximal_cliques(g)
    value, weights = fractional_packing(g, cliques)
    alpha = independence_number(g)
    log.info('bounds: alpha=%d alpha*=%s over %d maximal cliques' % (alpha, value, len(cliques)))
    return BoundReport(alpha, float(value), cliques, [float(w) for w in weights])
