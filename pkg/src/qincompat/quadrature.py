"""Adaptive Gauss-Legendre quadrature with interval subdivision.

``adaptive_gl`` integrates a vectorized scalar integrand; ``adaptive_gl_batch``
integrates a whole batch of integrands sharing one interval (used for the
innermost level of nested integrals, where the outer level supplies a node
batch).  Panels are accepted when the coarse rule and its two half-panel
refinements agree; square-root edges are handled by the subdivision
cascading toward the singular endpoint.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np


class QuadratureBudgetError(RuntimeError):
    """Requested tolerance was not reached within the node budget."""


@lru_cache(maxsize=None)
def _rule(order: int):
    x, w = np.polynomial.legendre.leggauss(order)
    return x, w


class _Budget:
    __slots__ = ("nodes", "limit")

    def __init__(self, limit: int):
        self.nodes = 0
        self.limit = limit

    def spend(self, n: int):
        self.nodes += n
        if self.nodes > self.limit:
            raise QuadratureBudgetError(f"node budget {self.limit} exhausted")


def _panel(f, lo, hi, x, w, budget):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    budget.spend(x.size)
    return half * float(w @ f(mid + half * x))


def _refine(f, lo, hi, tol, x, w, budget, whole, depth):
    mid = 0.5 * (lo + hi)
    left = _panel(f, lo, mid, x, w, budget)
    right = _panel(f, mid, hi, x, w, budget)
    better = left + right
    if abs(whole - better) <= tol or depth >= 42:
        return better
    return _refine(f, lo, mid, 0.5 * tol, x, w, budget, left, depth + 1) + _refine(
        f, mid, hi, 0.5 * tol, x, w, budget, right, depth + 1
    )


def adaptive_gl(f, lo, hi, tol, order: int = 21, node_limit: int = 50_000_000, budget=None):
    """Integral of ``f`` over [lo, hi] to absolute tolerance ``tol``.

    ``f`` maps a node array to a value array.  Returns (value, nodes_used)
    when no external budget is supplied, else just the value.
    """
    own = budget is None
    if own:
        budget = _Budget(node_limit)
    if hi <= lo:
        return (0.0, 0) if own else 0.0
    x, w = _rule(order)
    whole = _panel(f, lo, hi, x, w, budget)
    value = _refine(f, lo, hi, tol, x, w, budget, whole, 0)
    return (value, budget.nodes) if own else value


def _panel_batch(f, lo, hi, x, w, budget):
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    vals = f(mid + half * x)  # shape (batch, order)
    budget.spend(vals.size)
    return half * (vals @ w)


def _refine_batch(f, lo, hi, tol, x, w, budget, whole, depth):
    mid = 0.5 * (lo + hi)
    left = _panel_batch(f, lo, mid, x, w, budget)
    right = _panel_batch(f, mid, hi, x, w, budget)
    better = left + right
    if float(np.abs(whole - better).max()) <= tol or depth >= 42:
        return better
    return _refine_batch(f, lo, mid, 0.5 * tol, x, w, budget, left, depth + 1) + _refine_batch(
        f, mid, hi, 0.5 * tol, x, w, budget, right, depth + 1
    )


def adaptive_gl_batch(f, lo, hi, tol, order: int = 21, budget=None, node_limit: int = 50_000_000):
    """Batched integral over a shared interval.

    ``f`` maps a node array of shape (k,) to values of shape (batch, k);
    returns the batch of integrals, refining until every component meets
    ``tol``.
    """
    own = budget is None
    if own:
        budget = _Budget(node_limit)
    x, w = _rule(order)
    if hi <= lo:
        probe = np.asarray(f(np.array([0.5 * (lo + hi)])))
        zeros = np.zeros(probe.shape[0])
        return (zeros, budget.nodes) if own else zeros
    whole = _panel_batch(f, lo, hi, x, w, budget)
    value = _refine_batch(f, lo, hi, tol, x, w, budget, whole, 0)
    return (value, budget.nodes) if own else value
