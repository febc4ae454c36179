"""Parameters of a Gaussian ancestral graph model.

A model on graph G is parameterized by a triple (lam, beta, omega):

* ``lam`` is the concentration (inverse covariance) matrix of the
  variables in the undirected block, sparse over missing undirected
  edges;
* ``beta`` holds the directed-edge coefficients, with ``beta[i, j]``
  the coefficient on variable j in the equation for variable i, so that
  the residual transform is ``eps = (I - beta) @ Y``;
* ``omega`` is the residual covariance of the arrowhead-block variables,
  sparse over missing bidirected edges.

The implied covariance is
``sigma = inv(I - beta) @ blockdiag(inv(lam), omega) @ inv(I - beta).T``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DimensionMismatch, NotPositiveDefinite, SingularMatrix
from .graph import AncestralGraph


@dataclass(frozen=True)
class IndexMap:
    """Translates between graph vertex indices and compact block positions."""

    vertices: tuple

    _pos: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(int(v) for v in self.vertices))
        object.__setattr__(self, "_pos", {v: k for k, v in enumerate(self.vertices)})
        if len(self._pos) != len(self.vertices):
            raise ValueError("duplicate vertices in index map")

    def __len__(self):
        return len(self.vertices)

    def __contains__(self, v):
        return int(v) in self._pos

    def position(self, v) -> int:
        try:
            return self._pos[int(v)]
        except KeyError:
            raise KeyError(f"vertex {v} not in this block") from None

    def positions(self, vs) -> list:
        return [self.position(v) for v in vs]


def _assert_spd(m: np.ndarray, what: str) -> None:
    if m.size == 0:
        return
    if not np.allclose(m, m.T, atol=1e-10):
        raise NotPositiveDefinite(f"{what} is not symmetric")
    try:
        linalg.cholesky(m, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(f"{what} is not positive definite") from None


@dataclass(frozen=True)
class ParamSet:
    """Validated parameter triple tied to a graph.

    Use :meth:`for_graph` to construct; it checks shapes, the exact-zero
    sparsity pattern of each matrix, and positive definiteness of ``lam``
    and ``omega``.
    """

    graph: AncestralGraph
    lam: np.ndarray
    beta: np.ndarray
    omega: np.ndarray
    un_map: IndexMap
    disp_map: IndexMap

    @classmethod
    def for_graph(
        cls,
        graph: AncestralGraph,
        lam=None,
        beta=None,
        omega=None,
        *,
        validate: bool = True,
    ) -> "ParamSet":
        """Build a parameter set; omitted matrices default to identity.

        The default is ``lam = I``, ``beta = 0``, ``omega = I``, which is
        a valid parameter set for every graph.
        """
        un = sorted(graph.un_vertices)
        disp = sorted(set(range(graph.n)) - graph.un_vertices)
        un_map = IndexMap(tuple(un))
        disp_map = IndexMap(tuple(disp))

        lam = np.eye(len(un)) if lam is None else np.array(lam, dtype=float)
        beta = np.zeros((graph.n, graph.n)) if beta is None else np.array(beta, dtype=float)
        omega = np.eye(len(disp)) if omega is None else np.array(omega, dtype=float)

        ps = cls(graph, lam, beta, omega, un_map, disp_map)
        if validate:
            ps._validate()
        return ps

    def _validate(self):
        g = self.graph
        if self.lam.shape != (len(self.un_map), len(self.un_map)):
            raise DimensionMismatch("lam shape does not match the undirected block")
        if self.beta.shape != (g.n, g.n):
            raise DimensionMismatch("beta must be square over all vertices")
        if self.omega.shape != (len(self.disp_map), len(self.disp_map)):
            raise DimensionMismatch("omega shape does not match the arrowhead block")

        for a, b in zip(*np.nonzero(self.lam)):
            if a == b:
                continue
            va, vb = self.un_map.vertices[a], self.un_map.vertices[b]
            if vb not in g.ne(va):
                raise ValueError(
                    f"lam[{a}, {b}] nonzero but vertices {va}, {vb} share no undirected edge"
                )
        for i, j in zip(*np.nonzero(self.beta)):
            if j not in g.pa(i):
                raise ValueError(f"beta[{i}, {j}] nonzero but {j} is not a parent of {i}")
        for a, b in zip(*np.nonzero(self.omega)):
            if a == b:
                continue
            va, vb = self.disp_map.vertices[a], self.disp_map.vertices[b]
            if vb not in g.sp(va):
                raise ValueError(
                    f"omega[{a}, {b}] nonzero but vertices {va}, {vb} share no bidirected edge"
                )

        _assert_spd(self.lam, "lam")
        _assert_spd(self.omega, "omega")


def psi(params: ParamSet) -> np.ndarray:
    """Residual covariance over all vertices: blockdiag(inv(lam), omega).

    The undirected block carries the covariance-scale inverse of ``lam``;
    the two blocks are uncorrelated.
    """
    g = params.graph
    out = np.zeros((g.n, g.n))
    un = list(params.un_map.vertices)
    disp = list(params.disp_map.vertices)
    if un:
        out[np.ix_(un, un)] = _spd_inverse(params.lam, "lam")
    if disp:
        out[np.ix_(disp, disp)] = params.omega
    return out


def _spd_inverse(m: np.ndarray, what: str) -> np.ndarray:
    try:
        c = linalg.cho_factor(m, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(f"{what} is not positive definite") from None
    inv = linalg.cho_solve(c, np.eye(m.shape[0]))
    return 0.5 * (inv + inv.T)


def build_sigma(params: ParamSet) -> np.ndarray:
    """Implied covariance matrix of the model at these parameters."""
    g = params.graph
    a = np.eye(g.n) - params.beta
    psi_m = psi(params)
    try:
        x = np.linalg.solve(a, psi_m)
        sigma = np.linalg.solve(a, x.T).T
    except np.linalg.LinAlgError:
        raise SingularMatrix("I - beta is singular") from None
    return 0.5 * (sigma + sigma.T)


def residuals(y: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """Residual transform ``(I - beta) @ y`` of a variables-by-cases matrix."""
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or beta.shape != (y.shape[0], y.shape[0]):
        raise DimensionMismatch(
            f"data {y.shape} incompatible with beta {np.shape(beta)}"
        )
    return (np.eye(y.shape[0]) - beta) @ y


def conditional_variance(params: ParamSet, i) -> float:
    """Residual variance of vertex ``i`` given the other arrowhead residuals.

    ``omega[i, i] - omega[i, -i] @ inv(omega[-i, -i]) @ omega[-i, i]``
    where ``-i`` ranges over the arrowhead block without ``i``.
    """
    if i not in params.disp_map:
        raise ValueError(f"vertex {i} is not in the arrowhead block")
    pos = params.disp_map.position(i)
    rest = [k for k in range(len(params.disp_map)) if k != pos]
    w_ii = params.omega[pos, pos]
    if not rest:
        return float(w_ii)
    w_ri = params.omega[rest, pos]
    try:
        c = linalg.cho_factor(params.omega[np.ix_(rest, rest)], lower=True)
    except linalg.LinAlgError:
        raise SingularMatrix("omega[-i, -i] is not positive definite") from None
    return float(w_ii - w_ri @ linalg.cho_solve(c, w_ri))


def pseudo_variables(params: ParamSet, eps: np.ndarray, i) -> np.ndarray:
    """Covariates standing in for the spouses of ``i`` in its regression.

    Rows of ``inv(omega[-i, -i])`` indexed by the spouses of ``i``, applied
    to the residual rows of the arrowhead block without ``i``.  Returns an
    array of shape (number of spouses, cases), spouse rows in ascending
    vertex order.
    """
    g = params.graph
    if i not in params.disp_map:
        raise ValueError(f"vertex {i} is not in the arrowhead block")
    if eps.ndim != 2 or eps.shape[0] != g.n:
        raise DimensionMismatch("eps must have one row per vertex")
    sp = sorted(g.sp(i))
    rest_v = [v for v in params.disp_map.vertices if v != i]
    rest_pos = params.disp_map.positions(rest_v)
    if not sp:
        return np.zeros((0, eps.shape[1]))
    omega_rr = params.omega[np.ix_(rest_pos, rest_pos)]
    sel = np.zeros((len(rest_v), len(sp)))
    for col, s in enumerate(sp):
        sel[rest_v.index(s), col] = 1.0
    try:
        c = linalg.cho_factor(omega_rr, lower=True)
    except linalg.LinAlgError:
        raise SingularMatrix("omega[-i, -i] is not positive definite") from None
    rows = linalg.cho_solve(c, sel).T
    return rows @ eps[rest_v, :]
