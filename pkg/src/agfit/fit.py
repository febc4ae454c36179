"""Maximum likelihood fitting by iterative conditional fitting.

The likelihood of a Gaussian ancestral graph model factors into an
undirected part over the vertices without parents or spouses and a
regression part over the rest.  The undirected part is fitted once by
iterative proportional fitting (IPF) over the maximal cliques; the
regression part is fitted by iterative conditional fitting (ICF), which
cycles through the arrowhead-block vertices and solves, for each vertex
in turn, a least squares problem in its parents and in pseudo-variables
standing in for its spouses.  Each step maximizes the likelihood over
the free parameters of one vertex with all others held fixed, so the
likelihood never decreases.

Everything here works from the sample covariance: every regression in
the ICF update can be expressed through cross products of linear
combinations of the variables, so raw data are never required.
"""

from __future__ import annotations

from dataclasses import dataclass

import networkx as nx
import numpy as np
from scipy import linalg

from .errors import (
    DimensionMismatch,
    MaxIterationsExceeded,
    NotMaximal,
    NotPositiveDefinite,
    SingularDesign,
)
from .graph import AncestralGraph
from .mseparation import is_maximal
from .params import IndexMap, ParamSet, pseudo_variables, residuals
from .stats import SampleStats, degrees_of_freedom, deviance, log_likelihood


@dataclass(frozen=True)
class FitConfig:
    """Knobs of the fitting loop.

    ``lambda_mode`` selects how the undirected block is handled: fitted
    by IPF (default), pinned to the identity, or pinned to a supplied
    concentration matrix ``lambda0``.  ``check_maximality`` defaults to
    None, meaning the (exponential) maximality check runs only when the
    graph has at most ``maximality_limit`` vertices.  ``restarts`` adds
    randomized re-runs of the ICF stage, keeping the best likelihood;
    ``seed`` makes them reproducible.
    """

    tolerance: float = 1e-6
    max_cycles: int = 5000
    lambda_mode: str = "ipf"
    lambda0: np.ndarray | None = None
    check_maximality: bool | None = None
    maximality_limit: int = 16
    restarts: int = 0
    seed: int | None = None

    def __post_init__(self):
        if self.tolerance <= 0:
            raise ValueError("tolerance must be positive")
        if self.max_cycles < 1:
            raise ValueError("max_cycles must be at least 1")
        if self.lambda_mode not in ("ipf", "identity", "fixed"):
            raise ValueError(f"unknown lambda_mode {self.lambda_mode!r}")
        if self.lambda_mode == "fixed" and self.lambda0 is None:
            raise ValueError("lambda_mode 'fixed' requires lambda0")
        if self.restarts < 0:
            raise ValueError("restarts cannot be negative")


@dataclass(frozen=True)
class FitResult:
    """Fitted model: implied covariance, parameters, and fit diagnostics.

    ``logliks`` holds the log-likelihood of the starting point followed
    by one value per completed ICF cycle; it is non-decreasing up to
    roundoff.  ``iterations`` counts completed ICF cycles, including the
    cycle whose covariance change triggered convergence.
    """

    sigma_hat: np.ndarray
    params: ParamSet
    deviance: float
    df: int
    iterations: int
    converged: bool
    logliks: tuple

    @property
    def lambda_hat(self) -> np.ndarray:
        return self.params.lam

    @property
    def beta_hat(self) -> np.ndarray:
        return self.params.beta

    @property
    def omega_hat(self) -> np.ndarray:
        return self.params.omega


# -- undirected block ---------------------------------------------------------


def fit_undirected_ipf(
    g_un: AncestralGraph,
    s_un: np.ndarray,
    tolerance: float = 1e-6,
    max_cycles: int = 5000,
) -> np.ndarray:
    """Concentration matrix of an undirected model fitted to ``s_un``.

    Cycles through the maximal cliques, replacing each clique block of
    the concentration matrix so that the implied covariance matches the
    sample covariance on that clique while the conditional distribution
    of the remaining variables given the clique is untouched.  Converges
    when every clique block of the implied covariance is within
    ``tolerance`` of the sample block.  The result is exactly zero at
    missing edges.
    """
    if g_un.directed_pairs or g_un.bidirected_pairs:
        raise ValueError("IPF expects a purely undirected graph")
    p = g_un.n
    s_un = np.asarray(s_un, dtype=float)
    if s_un.shape != (p, p):
        raise DimensionMismatch("s_un does not match the graph")
    if p == 0:
        return np.zeros((0, 0))
    try:
        linalg.cholesky(s_un, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite("s_un is not positive definite") from None

    nxg = nx.Graph()
    nxg.add_nodes_from(range(p))
    nxg.add_edges_from(g_un.undirected_pairs)
    cliques = sorted(sorted(c) for c in nx.find_cliques(nxg))

    k = np.diag(1.0 / np.diag(s_un))
    all_idx = np.arange(p)
    eye = np.eye(p)
    for _ in range(max_cycles):
        for cl in cliques:
            rest = np.setdiff1d(all_idx, cl, assume_unique=False)
            scc = s_un[np.ix_(cl, cl)]
            cho = linalg.cho_factor(scc, lower=True)
            scc_inv = linalg.cho_solve(cho, np.eye(len(cl)))
            if rest.size:
                krr = k[np.ix_(rest, rest)]
                krc = k[np.ix_(rest, cl)]
                update = scc_inv + krc.T @ linalg.cho_solve(
                    linalg.cho_factor(krr, lower=True), krc
                )
            else:
                update = scc_inv
            k[np.ix_(cl, cl)] = 0.5 * (update + update.T)
        w = linalg.cho_solve(linalg.cho_factor(k, lower=True), eye)
        err = max(
            np.max(np.abs(w[np.ix_(cl, cl)] - s_un[np.ix_(cl, cl)])) for cl in cliques
        )
        if err < tolerance:
            return 0.5 * (k + k.T)
    raise MaxIterationsExceeded(
        f"IPF did not reach tolerance {tolerance} in {max_cycles} cycles"
    )


# -- single ICF update --------------------------------------------------------


class _VertexPlan:
    """Precomputed index bookkeeping for the ICF update of one vertex."""

    def __init__(self, g: AncestralGraph, i: int, disp: list, dpos: dict):
        self.i = i
        self.i_pos = dpos[i]
        self.pa = sorted(g.pa(i))
        self.sp = sorted(g.sp(i))
        self.m_v = [v for v in disp if v != i]
        self.m_pos = [dpos[v] for v in self.m_v]
        self.sp_sel = [self.m_v.index(s) for s in self.sp]
        self.q = len(self.pa) + len(self.sp)


def _icf_step_cov(
    s: np.ndarray, beta: np.ndarray, omega: np.ndarray, plan: _VertexPlan
) -> None:
    """One conditional maximization, updating ``beta`` and ``omega`` in place.

    Works from the sample covariance: the regression of the vertex on its
    parents and pseudo-variables reduces to normal equations in ``C s C.T``
    where the rows of C are the coefficient vectors of the covariates as
    linear combinations of the observed variables.
    """
    i = plan.i
    n = s.shape[0]
    if plan.q == 0:
        omega[plan.i_pos, plan.i_pos] = s[i, i]
        return

    cho_mm = None
    if plan.sp:
        omega_mm = omega[np.ix_(plan.m_pos, plan.m_pos)]
        try:
            cho_mm = linalg.cho_factor(omega_mm, lower=True)
        except linalg.LinAlgError:
            raise NotPositiveDefinite(
                "omega[-i, -i] lost positive definiteness"
            ) from None

    c_rows = np.zeros((plan.q, n))
    for r, j in enumerate(plan.pa):
        c_rows[r, j] = 1.0
    if plan.sp:
        sel = np.zeros((len(plan.m_v), len(plan.sp)))
        for col, pos in enumerate(plan.sp_sel):
            sel[pos, col] = 1.0
        inv_rows = linalg.cho_solve(cho_mm, sel).T
        resid_rows = -beta[plan.m_v, :]
        resid_rows[np.arange(len(plan.m_v)), plan.m_v] += 1.0
        c_rows[len(plan.pa):, :] = inv_rows @ resid_rows

    gram = c_rows @ s @ c_rows.T
    moment = c_rows @ s[:, i]
    try:
        cho_g = linalg.cho_factor(0.5 * (gram + gram.T), lower=True)
    except linalg.LinAlgError:
        raise SingularDesign(
            f"design for vertex {i} is numerically rank deficient"
        ) from None
    coef = linalg.cho_solve(cho_g, moment)

    w_cond = float(s[i, i] - coef @ moment)
    if w_cond <= 0:
        raise SingularDesign(
            f"residual variance for vertex {i} collapsed to {w_cond}"
        )

    beta[i, :] = 0.0
    if plan.pa:
        beta[i, plan.pa] = coef[: len(plan.pa)]
    w_row = np.zeros(len(plan.m_v))
    quad = 0.0
    if plan.sp:
        w_row[plan.sp_sel] = coef[len(plan.pa):]
        quad = float(w_row @ linalg.cho_solve(cho_mm, w_row))
    omega[plan.i_pos, plan.m_pos] = w_row
    omega[plan.m_pos, plan.i_pos] = w_row
    omega[plan.i_pos, plan.i_pos] = w_cond + quad


def icf_step(g: AncestralGraph, i, params: ParamSet, y: np.ndarray) -> ParamSet:
    """One ICF update of vertex ``i`` from a variables-by-cases data matrix.

    Computes residuals with the current coefficients, forms the
    pseudo-variables for the spouses of ``i``, regresses variable ``i``
    on its parents and those pseudo-variables, and writes back the new
    row of ``beta``, the new bidirected row and column of ``omega``, and
    the new residual variance.  Rows are taken as centered: cross
    products are used as they stand.  Returns a new parameter set; the
    input is unchanged.
    """
    i = g._check_vertex(i)
    if i not in params.disp_map:
        raise ValueError(f"vertex {i} is not in the arrowhead block")
    y = np.asarray(y, dtype=float)
    if y.ndim != 2 or y.shape[0] != g.n:
        raise DimensionMismatch("y must have one row per vertex")
    n_cases = y.shape[1]

    pa = sorted(g.pa(i))
    sp = sorted(g.sp(i))
    beta = params.beta.copy()
    omega = params.omega.copy()
    disp = list(params.disp_map.vertices)
    dpos = {v: k for k, v in enumerate(disp)}
    i_pos = dpos[i]
    m_v = [v for v in disp if v != i]
    m_pos = [dpos[v] for v in m_v]

    if not pa and not sp:
        omega[i_pos, i_pos] = float(y[i] @ y[i]) / n_cases
        return ParamSet(g, params.lam, beta, omega, params.un_map, params.disp_map)

    eps = residuals(y, params.beta)
    z = pseudo_variables(params, eps, i)
    design = np.vstack([y[pa, :], z]) if pa else z
    gram = design @ design.T / n_cases
    moment = design @ y[i] / n_cases
    try:
        cho_g = linalg.cho_factor(0.5 * (gram + gram.T), lower=True)
    except linalg.LinAlgError:
        raise SingularDesign(
            f"design for vertex {i} is numerically rank deficient"
        ) from None
    coef = linalg.cho_solve(cho_g, moment)

    w_cond = float(y[i] @ y[i]) / n_cases - float(coef @ moment)
    if w_cond <= 0:
        raise SingularDesign(f"residual variance for vertex {i} collapsed to {w_cond}")

    beta[i, :] = 0.0
    if pa:
        beta[i, pa] = coef[: len(pa)]
    w_row = np.zeros(len(m_v))
    quad = 0.0
    if sp:
        sp_sel = [m_v.index(v) for v in sp]
        w_row[sp_sel] = coef[len(pa):]
        omega_mm = params.omega[np.ix_(m_pos, m_pos)]
        quad = float(
            w_row
            @ linalg.cho_solve(linalg.cho_factor(omega_mm, lower=True), w_row)
        )
    omega[i_pos, m_pos] = w_row
    omega[m_pos, i_pos] = w_row
    omega[i_pos, i_pos] = w_cond + quad
    return ParamSet(g, params.lam, beta, omega, params.un_map, params.disp_map)


# -- full fit -----------------------------------------------------------------


def _assemble_sigma(n, un, disp, psi_un, omega, beta) -> np.ndarray:
    psi_m = np.zeros((n, n))
    if un:
        psi_m[np.ix_(un, un)] = psi_un
    if disp:
        psi_m[np.ix_(disp, disp)] = omega
    a = np.eye(n) - beta
    x = np.linalg.solve(a, psi_m)
    sigma = np.linalg.solve(a, x.T).T
    return 0.5 * (sigma + sigma.T)


def _lambda_stage(g, s, un, config) -> np.ndarray:
    if not un:
        return np.zeros((0, 0))
    if config.lambda_mode == "identity":
        return np.eye(len(un))
    if config.lambda_mode == "fixed":
        lam = np.array(config.lambda0, dtype=float)
        ParamSet.for_graph(g, lam=lam)  # shape, sparsity and definiteness check
        return lam
    return fit_undirected_ipf(
        g.subgraph(un), s[np.ix_(un, un)], tolerance=config.tolerance,
        max_cycles=config.max_cycles,
    )


def fit(g: AncestralGraph, stats: SampleStats, config: FitConfig | None = None) -> FitResult:
    """Maximum likelihood fit of the model defined by ``g``.

    The undirected block is fitted first (see ``lambda_mode``) and held
    fixed; ICF then cycles through the arrowhead-block vertices in
    ascending index order until the largest entrywise change of the
    implied covariance over one full cycle drops below ``tolerance``.
    When the cycle budget runs out the best parameters so far are
    returned with ``converged=False``.

    The graph must be maximal for the fit to target the intended
    independence model; the check is skipped above
    ``config.maximality_limit`` vertices unless explicitly requested.
    """
    config = config or FitConfig()
    if stats.p != g.n:
        raise DimensionMismatch(
            f"sample dimension {stats.p} does not match graph order {g.n}"
        )
    check = config.check_maximality
    if check is None:
        check = g.n <= config.maximality_limit
    if check and not is_maximal(g, max_vertices=config.maximality_limit):
        raise NotMaximal("graph has an inseparable non-adjacent pair; complete it first")

    un = sorted(g.un_vertices)
    disp = sorted(set(range(g.n)) - g.un_vertices)
    s = stats.s
    lam = _lambda_stage(g, s, un, config)
    psi_un = (
        linalg.cho_solve(linalg.cho_factor(lam, lower=True), np.eye(len(un)))
        if un
        else np.zeros((0, 0))
    )

    dpos = {v: k for k, v in enumerate(disp)}
    plans = [_VertexPlan(g, i, disp, dpos) for i in disp]
    rng = np.random.default_rng(config.seed)

    best = None
    for run in range(config.restarts + 1):
        if run == 0:
            beta0 = np.zeros((g.n, g.n))
            omega0 = np.diag(s[disp, disp]) if disp else np.zeros((0, 0))
        else:
            beta0 = np.zeros((g.n, g.n))
            for tail, head in g.directed_pairs:
                beta0[head, tail] = rng.normal(0.0, 0.5)
            omega0 = (
                np.diag(s[disp, disp] * rng.uniform(0.5, 2.0, len(disp)))
                if disp
                else np.zeros((0, 0))
            )
        result = _run_icf(g, stats, lam, psi_un, beta0, omega0, un, disp, plans, config)
        if best is None or result.logliks[-1] > best.logliks[-1]:
            best = result
    return best


def _run_icf(g, stats, lam, psi_un, beta, omega, un, disp, plans, config) -> FitResult:
    s = stats.s
    sigma = _assemble_sigma(g.n, un, disp, psi_un, omega, beta)
    logliks = [log_likelihood(sigma, stats)]
    iterations = 0
    converged = not disp
    for cycle in range(1, config.max_cycles + 1):
        if not disp:
            break
        for plan in plans:
            _icf_step_cov(s, beta, omega, plan)
        new_sigma = _assemble_sigma(g.n, un, disp, psi_un, omega, beta)
        logliks.append(log_likelihood(new_sigma, stats))
        delta = float(np.max(np.abs(new_sigma - sigma)))
        sigma = new_sigma
        iterations = cycle
        if delta < config.tolerance:
            converged = True
            break

    params = ParamSet(
        g, lam.copy(), beta.copy(), omega.copy(),
        IndexMap(tuple(un)), IndexMap(tuple(disp)),
    )
    return FitResult(
        sigma_hat=sigma,
        params=params,
        deviance=deviance(sigma, stats),
        df=degrees_of_freedom(g),
        iterations=iterations,
        converged=converged,
        logliks=tuple(logliks),
    )


def fit_dag_closed_form(
    g: AncestralGraph, stats: SampleStats, config: FitConfig | None = None
) -> FitResult:
    """Exact one-pass fit for graphs without bidirected edges.

    Each vertex with parents is regressed on them directly; the
    undirected block is handled exactly as in :func:`fit`.  For such
    graphs the ICF updates do not interact, so this closed form equals
    the iterative fit.
    """
    config = config or FitConfig()
    if g.bidirected_pairs:
        raise ValueError("closed form requires a graph without bidirected edges")
    if stats.p != g.n:
        raise DimensionMismatch(
            f"sample dimension {stats.p} does not match graph order {g.n}"
        )
    un = sorted(g.un_vertices)
    disp = sorted(set(range(g.n)) - g.un_vertices)
    s = stats.s
    lam = _lambda_stage(g, s, un, config)
    psi_un = (
        linalg.cho_solve(linalg.cho_factor(lam, lower=True), np.eye(len(un)))
        if un
        else np.zeros((0, 0))
    )

    beta = np.zeros((g.n, g.n))
    omega = np.zeros((len(disp), len(disp)))
    for pos, i in enumerate(disp):
        pa = sorted(g.pa(i))
        if pa:
            spp = s[np.ix_(pa, pa)]
            spi = s[pa, i]
            try:
                coef = linalg.cho_solve(linalg.cho_factor(spp, lower=True), spi)
            except linalg.LinAlgError:
                raise SingularDesign(
                    f"parent covariance for vertex {i} is rank deficient"
                ) from None
            beta[i, pa] = coef
            omega[pos, pos] = float(s[i, i] - coef @ spi)
        else:
            omega[pos, pos] = s[i, i]

    sigma = _assemble_sigma(g.n, un, disp, psi_un, omega, beta)
    params = ParamSet(g, lam, beta, omega, IndexMap(tuple(un)), IndexMap(tuple(disp)))
    return FitResult(
        sigma_hat=sigma,
        params=params,
        deviance=deviance(sigma, stats),
        df=degrees_of_freedom(g),
        iterations=1,
        converged=True,
        logliks=(log_likelihood(sigma, stats),),
    )
