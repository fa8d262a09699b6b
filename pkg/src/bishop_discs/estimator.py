"""scikit-learn style front end for families of glued discs.

Rows of ``X`` are disc parameters ``[c_1, ..., c_n, t_1, ..., t_n]``.
``fit`` certifies the cutoff (tau, delta) for the configured manifold and
grid; ``transform`` solves the Bishop equation for every row and returns the
boundary traces as real feature vectors.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .discs import build_disc
from .errors import InvalidInput
from .manifolds import CutoffGraph, DilationFamily, ManifoldGraph, build_collar, choose_tau_delta, from_spec
from .solver import EPS_PICARD, DiscParameters, solve
from .spectral import CircleGrid


class BishopDiscFamily(TransformerMixin, BaseEstimator):
    """Discs attached along the upper semicircle to ``y = h(x, d)``.

    Parameters
    ----------
    manifold : dict or ManifoldGraph
        Manifold spec such as ``{"kind": "quadratic", "n": 1}``.
    n_nodes : int
        Circle grid size (even, >= 8).
    contraction_target : float
        Certified contraction factor of the Picard map.
    dilation : float
        The ``d`` of the dilation family ``h(x, d) = h(d x) / d``.
    tol : float
        Picard residual floor.
    alphas : tuple of float
        Hoelder exponents recorded on every disc.
    """

    def __init__(self, manifold=None, n_nodes=512, contraction_target=0.5, dilation=1.0,
                 tol=EPS_PICARD, alphas=()):
        self.manifold = manifold
        self.n_nodes = n_nodes
        self.contraction_target = contraction_target
        self.dilation = dilation
        self.tol = tol
        self.alphas = alphas

    def _graph(self) -> ManifoldGraph:
        spec = self.manifold if self.manifold is not None else {"kind": "quadratic", "n": 1}
        base = spec if isinstance(spec, ManifoldGraph) else from_spec(spec)
        return DilationFamily(base).at(self.dilation)

    def fit(self, X=None, y=None):
        graph = self._graph()
        if X is not None:
            X = check_array(X)
            if X.shape[1] != 2 * graph.n:
                raise InvalidInput(f"expected {2 * graph.n} columns [c, t], got {X.shape[1]}")
        self.grid_ = CircleGrid(int(self.n_nodes))
        self.collar_ = build_collar(self.grid_, graph.n)
        self.T_norm_ = self.grid_.hilbert_sup_norm
        self.cutoff_: CutoffGraph = choose_tau_delta(graph, self.contraction_target, self.T_norm_)
        self.tau_ = self.cutoff_.tau
        self.delta_ = self.cutoff_.delta
        self.n_features_in_ = 2 * graph.n
        return self

    def _params(self, X):
        check_is_fitted(self, "cutoff_")
        X = check_array(X)
        n = self.cutoff_.n
        if X.shape[1] != 2 * n:
            raise InvalidInput(f"expected {2 * n} columns [c, t], got {X.shape[1]}")
        return [DiscParameters(row[:n], row[n:], self.dilation) for row in X]

    def solve(self, X):
        """Bishop solutions, one per row."""
        return [solve(self.cutoff_, self.collar_, p, tol=self.tol) for p in self._params(X)]

    def discs(self, X):
        """Certified analytic discs, one per row."""
        return [build_disc(sol, self.cutoff_, self.collar_, alphas=self.alphas) for sol in self.solve(X)]

    def transform(self, X):
        """Boundary traces as ``[Re U, Im U]`` flattened; shape ``(m, 2 N n)``."""
        rows = []
        for disc in self.discs(X):
            v = disc.trace.values
            rows.append(np.concatenate([v.real.ravel(), v.imag.ravel()]))
        return np.asarray(rows)

    def evaluate(self, X, zeta):
        """Interior values ``H(zeta)`` for every row; shape ``(m,) + zeta.shape + (n,)``."""
        return np.asarray([disc(zeta) for disc in self.discs(X)])
