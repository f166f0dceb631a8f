"""Scikit-learn style facade over the filter and fitting engines.

These wrappers add nothing algorithmic; they package the functional API
as estimators so filters drop into sklearn pipelines and model-selection
tooling (get_params/set_params/clone all work).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .errors import InvalidConfig
from .filters import FilterSpec, SolverOptions, apply_filter
from .fitting import SampledTarget, fit_polynomial, fit_rational
from .graph import Graph
from .operators import build_operator
from .presets import make_preset


class GraphFilter(BaseEstimator, TransformerMixin):
    """Apply one graph filter to node feature matrices.

    Parameters
    ----------
    graph : Graph
        The fixed graph the filter runs on.
    model : str or FilterSpec
        Preset name (see presets.PRESET_NAMES) or an explicit FilterSpec.
    model_params : dict or None
        Preset parameters, e.g. {"alpha": 0.1} for ppnp.
    tolerance : float
        Residual tolerance for rational solves.
    """

    def __init__(self, graph: Graph | None = None, model="gcn",
                 model_params: dict | None = None, tolerance: float = 1e-10):
        self.graph = graph
        self.model = model
        self.model_params = model_params
        self.tolerance = tolerance

    def fit(self, X=None, y=None):
        if self.graph is None:
            raise InvalidConfig("GraphFilter needs a graph")
        if isinstance(self.model, FilterSpec):
            if self.model_params:
                raise InvalidConfig("model_params only apply to preset names")
            self.filter_spec_ = self.model
        else:
            self.filter_spec_ = make_preset(self.model, **(self.model_params or {}))
        self.operator_ = build_operator(self.graph, self.filter_spec_.basis)
        return self

    def transform(self, X) -> np.ndarray:
        check_is_fitted(self, "filter_spec_")
        opts = SolverOptions(tolerance=self.tolerance)
        return apply_filter(self.filter_spec_, self.graph, X, opts=opts, op=self.operator_)


class PolynomialResponseFitter(BaseEstimator):
    """Least-squares polynomial fit to a sampled frequency response.

    fit takes eigenvalue samples X (1-D) and target gains y; predict
    evaluates the fitted response.
    """

    def __init__(self, degree: int = 8, grid_size: int | None = None):
        self.degree = degree
        self.grid_size = grid_size

    def _target(self, X, y) -> SampledTarget:
        lam = np.asarray(X, dtype=np.float64).ravel()
        return SampledTarget(lam, np.asarray(y, dtype=np.float64).ravel())

    def fit(self, X, y):
        kwargs = {"grid_size": self.grid_size} if self.grid_size else {}
        self.result_ = fit_polynomial(self._target(X, y), self.degree, **kwargs)
        self.filter_spec_ = self.result_.coeffs
        self.max_error_ = self.result_.max_error
        self.rms_error_ = self.result_.rms_error
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self, "result_")
        return self.result_.evaluate(np.asarray(X, dtype=np.float64))


class RationalResponseFitter(PolynomialResponseFitter):
    """Iteratively reweighted rational fit to a sampled response."""

    def __init__(self, num_degree: int = 4, den_degree: int = 4,
                 grid_size: int | None = None, refine_iterations: int = 400):
        self.num_degree = num_degree
        self.den_degree = den_degree
        self.grid_size = grid_size
        self.refine_iterations = refine_iterations

    def fit(self, X, y):
        kwargs = {"grid_size": self.grid_size} if self.grid_size else {}
        self.result_ = fit_rational(
            self._target(X, y), self.num_degree, self.den_degree,
            refine_iterations=self.refine_iterations, **kwargs,
        )
        self.filter_spec_ = self.result_.coeffs
        self.max_error_ = self.result_.max_error
        self.rms_error_ = self.result_.rms_error
        return self
