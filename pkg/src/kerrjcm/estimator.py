"""scikit-learn style front end.

``fit`` solves every photon block once; ``transform`` maps scaled times to the
measures ``[entropy, concurrence, negativity, norm_error]``::

    est = EntanglementDynamics(chi=0.4, delta=5.0).fit()
    est.transform(np.linspace(0, 30, 601))
"""
from __future__ import annotations

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_int, check_real, check_scaled_times
from .dynamics import density_matrices, measures_from_rhos, worker_count
from .model import ModelParams
from .state import WEIGHTINGS, BlockEnsemble, JointState


class EntanglementDynamics(TransformerMixin, BaseEstimator):
    """Entanglement of two identical atoms with two Kerr-coupled cavity modes.

    Parameters are in units of the atom-field coupling: ``chi`` is the Kerr
    strength over lambda, ``delta`` the common detuning over lambda. The
    fields start in coherent states with mean photon numbers ``alpha1_sq`` and
    ``alpha2_sq``, the atoms in ``cos(beta/2)|ee> + sin(beta/2)|gg>``.

    Attributes
    ----------
    params_ : ModelParams
    ensemble_ : BlockEnsemble
    n_blocks_ : int
    """

    feature_names = ("entropy", "concurrence", "negativity", "norm_error")

    def __init__(self, chi=0.4, delta=5.0, beta=0.0, alpha1_sq=10.0, alpha2_sq=10.0,
                 n_max=40, tail_tol=1e-8, weighting="projected", n_jobs=None):
        self.chi = chi
        self.delta = delta
        self.beta = beta
        self.alpha1_sq = alpha1_sq
        self.alpha2_sq = alpha2_sq
        self.n_max = n_max
        self.tail_tol = tail_tol
        self.weighting = weighting
        self.n_jobs = n_jobs

    def _build_params(self) -> ModelParams:
        chi = check_real("chi", self.chi)
        delta = check_real("delta", self.delta)
        beta = check_real("beta", self.beta, low=0.0, high=math.pi)
        a1 = check_real("alpha1_sq", self.alpha1_sq, low=0.0)
        a2 = check_real("alpha2_sq", self.alpha2_sq, low=0.0)
        n_max = check_int("n_max", self.n_max, low=1)
        tail_tol = check_real("tail_tol", self.tail_tol, positive=True)
        if self.weighting not in WEIGHTINGS:
            raise ValueError(f"weighting must be one of {WEIGHTINGS}")
        base = ModelParams(beta=beta, alpha1=math.sqrt(a1), alpha2=math.sqrt(a2),
                           n_max=n_max, tail_tol=tail_tol)
        return base.with_scaled(chi, delta)

    def fit(self, X=None, y=None):
        self.params_ = self._build_params()
        self.ensemble_ = BlockEnsemble(self.params_, self.weighting)
        self.n_blocks_ = len(self.ensemble_.solutions)
        return self

    def _workers(self) -> int:
        if self.n_jobs is None:
            return worker_count()
        return max(1, check_int("n_jobs", self.n_jobs, low=1))

    def density_matrices(self, X) -> np.ndarray:
        check_is_fitted(self, "ensemble_")
        return density_matrices(self.ensemble_, check_scaled_times(X), self._workers())

    def transform(self, X) -> np.ndarray:
        taus = check_scaled_times(X)
        rhos = self.density_matrices(taus)
        return measures_from_rhos(taus, rhos).as_array()

    def state(self, tau: float) -> JointState:
        check_is_fitted(self, "ensemble_")
        tau = float(check_scaled_times([tau])[0])
        return JointState(tau, self.ensemble_.tables([tau])[0], self.ensemble_.initial_norm)

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names, dtype=object)
