"""scikit-learn style wrappers.

The physics is a forward model, so ``fit`` only validates hyper-parameters
(or, for `Delta0Optimizer`, runs the comb-extent search). Frequencies play
the role of samples: ``X`` is an array of detunings of shape (n,) or (n, 1).
Because both classes follow the estimator protocol, ``get_params``,
``set_params``, ``clone`` and ``ParameterGrid`` sweeps work as usual.
"""

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils import check_array
from sklearn.utils.validation import check_is_fitted

from .bandwidth import SCAN_STEP, optimize_delta0
from .medium import CombDesign
from .response import efficiency, efficiency_at, phase_profile

__all__ = ["AFCSpectralResponse", "Delta0Optimizer"]


def _frequencies(X):
    X = check_array(np.asarray(X, dtype=float).reshape(len(X), -1), ensure_2d=True)
    if X.shape[1] != 1:
        raise ValueError(f"expected a single frequency column, got {X.shape[1]}")
    return X[:, 0]


class AFCSpectralResponse(TransformerMixin, BaseEstimator):
    """Map frequency samples to depth, phase, response and efficiency.

    ``transform`` returns an (n, 5) array with columns
    ``D, phi, re_gamma, im_gamma, eta``; ``predict`` returns eta alone.
    """

    def __init__(self, d0=30.0, finesse=5.0, delta0=0.8, delta=0.01, dilution=True, kappa=True,
                 area_factor=1.0):
        self.d0 = d0
        self.finesse = finesse
        self.delta0 = delta0
        self.delta = delta
        self.dilution = dilution
        self.kappa = kappa
        self.area_factor = area_factor

    def fit(self, X=None, y=None):
        self.design_ = CombDesign(**self.get_params())
        self.n_features_in_ = 1
        return self

    def _response(self, X):
        check_is_fitted(self, "design_")
        # the profile needs a strictly increasing grid
        grid, inv = np.unique(_frequencies(X), return_inverse=True)
        resp = efficiency(self.design_, phase_profile(self.design_, grid, cache=False))
        return resp.depth[inv], resp.phase[inv], resp.gamma[inv], resp.eta[inv]

    def transform(self, X):
        depth, phase, gamma, eta = self._response(X)
        return np.column_stack([depth, phase, gamma.real, gamma.imag, eta])

    def predict(self, X):
        return self._response(X)[3]

    def get_feature_names_out(self, input_features=None):
        return np.array(["D", "phi", "re_gamma", "im_gamma", "eta"], dtype=object)


class Delta0Optimizer(BaseEstimator):
    """Choose the comb extent that maximises the band where eta >= eta_target.

    Attributes set by ``fit``: ``delta0_``, ``delta_qm_``, ``result_`` (a
    BandwidthResult) and ``design_``.
    """

    def __init__(self, d0=30.0, finesse=5.0, eta_target=0.9, search=(0.0, 2.5), step=SCAN_STEP, tol=1e-3,
                 dilution=True, kappa=True, area_factor=1.0, grid=None):
        self.d0 = d0
        self.finesse = finesse
        self.eta_target = eta_target
        self.search = search
        self.step = step
        self.tol = tol
        self.dilution = dilution
        self.kappa = kappa
        self.area_factor = area_factor
        self.grid = grid

    def fit(self, X=None, y=None):
        """Run the search. `X`, if given, is used as the symmetric evaluation grid."""
        base = CombDesign(d0=self.d0, finesse=self.finesse, dilution=self.dilution, kappa=self.kappa,
                          area_factor=self.area_factor)
        omega = self.grid if X is None else _frequencies(X)
        self.result_ = optimize_delta0(self.d0, self.finesse, self.eta_target, search=self.search, base=base,
                                       omega=omega, step=self.step, tol=self.tol)
        self.delta0_ = self.result_.delta0
        self.delta_qm_ = self.result_.delta_qm
        self.design_ = self.result_.design
        return self

    def predict(self, X):
        """Efficiency of the optimised design at the given frequencies."""
        check_is_fitted(self, "design_")
        return efficiency_at(self.design_, _frequencies(X))

    def score(self, X=None, y=None):
        check_is_fitted(self, "delta_qm_")
        return self.delta_qm_
