"""Named filter presets for nine propagation models.

Each preset reduces a published propagation rule to a FilterSpec:

==========  ===========  =================  =====================================
name        family       basis              form
==========  ===========  =================  =====================================
gcn         linear       ADJ_RENORM         M X
sage        linear       ADJ_RW_SELF_LOOP   M X   (M = Dh^-1 (I + A))
gin         linear       ADJ_RAW            ((1 + epsilon) I + A) X
chebnet     polynomial   ADJ_SYM            sum_k theta_k T_k(-M) X
dcnn        polynomial   ADJ_RW             sum_{j>=1} psi_j M^j X
sgc         polynomial   ADJ_RENORM         M^K X
ar_lp       rational     ADJ_RW             ((1+alpha) I - alpha M)^-1 X
ppnp        rational     ADJ_RW_SELF_LOOP   alpha (I - (1-alpha) M)^-1 X
arma        rational     ADJ_RW_SELF_LOOP   b (I - a M)^-1 X
==========  ===========  =================  =====================================

T_k is the Chebyshev polynomial of the first kind; chebnet's series in the
shifted Laplacian L - I = -M is expanded into plain powers of M at build
time. ar_lp's denominator is divided through by (1 + alpha) so the stored
bias is 1.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import chebyshev

from .errors import InvalidParam, UnknownModel
from .filters import FilterSpec, linear_filter, polynomial_filter, rational_filter
from .operators import Scheme

PRESET_NAMES = (
    "gcn",
    "sage",
    "gin",
    "chebnet",
    "dcnn",
    "sgc",
    "ar_lp",
    "ppnp",
    "arma",
)


def _scalar(params, key, default=None, required=False):
    if key not in params:
        if required:
            raise InvalidParam(f"missing required parameter {key!r}")
        return default
    try:
        return float(params.pop(key))
    except (TypeError, ValueError) as exc:
        raise InvalidParam(f"parameter {key!r} must be a real number") from exc


def _vector(params, key):
    if key not in params:
        raise InvalidParam(f"missing required parameter {key!r}")
    raw = params.pop(key)
    if np.isscalar(raw):
        raw = [raw]
    try:
        vec = [float(v) for v in raw]
    except (TypeError, ValueError) as exc:
        raise InvalidParam(f"parameter {key!r} must be a list of reals") from exc
    if not vec:
        raise InvalidParam(f"parameter {key!r} must be nonempty")
    return vec


def make_preset(name: str, **params) -> FilterSpec:
    """Build the FilterSpec for a named model. See the module table."""
    if name not in PRESET_NAMES:
        raise UnknownModel(f"unknown model {name!r}; choose from {', '.join(PRESET_NAMES)}")
    params = dict(params)

    if name == "gcn":
        spec = linear_filter(0.0, 1.0, Scheme.ADJ_RENORM, name=name)
    elif name == "sage":
        # the mean aggregator including the node itself: Dh^-1 (I + A)
        spec = linear_filter(0.0, 1.0, Scheme.ADJ_RW_SELF_LOOP, name=name)
    elif name == "gin":
        eps = _scalar(params, "epsilon", default=0.0)
        spec = linear_filter(1.0 + eps, 1.0, Scheme.ADJ_RAW, name=name)
    elif name == "chebnet":
        theta = _vector(params, "theta")
        # sum_k theta_k T_k(-M): flip odd coefficients, then expand to powers
        signed = [t * (-1.0) ** k for k, t in enumerate(theta)]
        coeffs = chebyshev.cheb2poly(signed)
        spec = polynomial_filter(coeffs, Scheme.ADJ_SYM, name=name)
    elif name == "dcnn":
        psi = _vector(params, "psi")
        spec = polynomial_filter([0.0] + psi, Scheme.ADJ_RW, name=name)
    elif name == "sgc":
        k = _scalar(params, "K", default=2.0)
        if k < 0 or k != int(k):
            raise InvalidParam("sgc needs an integer K >= 0")
        spec = polynomial_filter([0.0] * int(k) + [1.0], Scheme.ADJ_RENORM, name=name)
    elif name == "ar_lp":
        alpha = _scalar(params, "alpha", default=1.0)
        if alpha <= 0:
            raise InvalidParam("ar_lp needs alpha > 0")
        scale = 1.0 / (1.0 + alpha)
        spec = rational_filter([scale], [-alpha * scale], Scheme.ADJ_RW, name=name)
    elif name == "ppnp":
        alpha = _scalar(params, "alpha", default=0.1)
        if not 0.0 < alpha <= 1.0:
            raise InvalidParam("ppnp needs alpha in (0, 1]")
        spec = rational_filter([alpha], [-(1.0 - alpha)], Scheme.ADJ_RW_SELF_LOOP, name=name)
    else:  # arma
        a = _scalar(params, "a", default=0.5)
        b = _scalar(params, "b", default=0.5)
        if not abs(a) < 1.0:
            raise InvalidParam("arma needs |a| < 1")
        spec = rational_filter([b], [-a], Scheme.ADJ_RW_SELF_LOOP, name=name)

    if params:
        raise InvalidParam(f"unknown parameters for {name}: {', '.join(sorted(params))}")
    return spec
