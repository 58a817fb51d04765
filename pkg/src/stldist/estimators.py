"""scikit-learn style wrappers around the monitor and the formula metrics.

These are thin adapters so the library drops into pipelines; all the work
happens in :mod:`stldist.monitor`, :mod:`stldist.ph` and :mod:`stldist.sd`.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin

from .boxes import AosConfig
from .formula import Formula
from .monitor import Trace, robustness
from .parser import parse_formula
from .ph import ph
from .sd import sd


def _as_formula(f) -> Formula:
    return parse_formula(f) if isinstance(f, str) else f


def _as_traces(X, domain=None) -> list:
    if len(X) and isinstance(X[0], Trace):
        return list(X)
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2:  # (samples, steps), one dimension
        arr = arr[:, :, None]
    if arr.ndim != 3:
        raise ValueError(f"expected traces or an array of shape (samples, steps[, dims]), got {arr.shape}")
    if domain is None:
        domain = [(min(0.0, arr[:, :, j].min()), max(1.0, arr[:, :, j].max())) for j in range(arr.shape[2])]
    return [Trace.from_rows(a.tolist(), domain) for a in arr]


class RobustnessMonitor(BaseEstimator, TransformerMixin):
    """Maps traces to their robustness against a fixed formula.

    ``transform`` returns a column of robustness values and ``predict``
    the satisfaction verdicts (robustness >= 0).
    """

    def __init__(self, formula=None, t: int = 0, domain=None):
        self.formula = formula
        self.t = t
        self.domain = domain

    def fit(self, X=None, y=None):
        if self.formula is None:
            raise ValueError("RobustnessMonitor needs a formula")
        self.formula_ = _as_formula(self.formula)
        return self

    def _scores(self, X):
        if not hasattr(self, "formula_"):
            self.fit()
        return np.array([float(robustness(s, self.formula_, self.t)) for s in _as_traces(X, self.domain)])

    def transform(self, X):
        return self._scores(X)[:, None]

    def predict(self, X):
        return self._scores(X) >= 0

    def score(self, X, y):
        return float(np.mean(self.predict(X) == np.asarray(y, dtype=bool)))


class FormulaDistance(BaseEstimator, TransformerMixin):
    """Distance of each input formula to a reference formula.

    ``metric`` is ``"ph"`` (undirected Pompeiu-Hausdorff) or ``"sd"``
    (symmetric difference of area-of-satisfaction boxes).  Usable as a loss
    when ranking candidate formulae against a ground truth.
    """

    def __init__(self, reference=None, metric: str = "ph", domain=None, T=None, delta=1):
        self.reference = reference
        self.metric = metric
        self.domain = domain
        self.T = T
        self.delta = delta

    def fit(self, X=None, y=None):
        if self.reference is None:
            raise ValueError("FormulaDistance needs a reference formula")
        if self.metric not in ("ph", "sd"):
            raise ValueError(f"metric must be 'ph' or 'sd', got {self.metric!r}")
        self.reference_ = _as_formula(self.reference)
        return self

    def _distance(self, f) -> float:
        f = _as_formula(f)
        if self.metric == "ph":
            return float(ph(f, self.reference_, self.domain, self.T).undirected)
        x_max = [hi for _, hi in self.domain] if self.domain else ()
        cfg = AosConfig(x_max=x_max, delta=self.delta, T=self.T)
        return float(sd(f, self.reference_, cfg).distance)

    def transform(self, X):
        if not hasattr(self, "reference_"):
            self.fit()
        return np.array([[self._distance(f)] for f in X])
