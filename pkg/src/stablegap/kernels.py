"""Free transition kernels, the one-sided stable subordinator, and their identities.

The two building blocks are the Cauchy transition density (Fourier multiplier
exp(-t |xi|)) and the Gaussian density with multiplier exp(-t |xi|^2). They are
linked by subordination: integrating the Gaussian kernel in its time variable
against the 1/2-stable subordinator density recovers the Cauchy kernel.
"""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from ._quad import log_panels
from .errors import ValidationError

# cached log-s quadrature grid for subordination integrals
_SUB_GRID = None


def _dist_sq(x, y, dim):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if dim == 1:
        return (x - y) ** 2
    d = x - y
    return np.sum(d * d, axis=-1)


def cauchy_constant(dim):
    """Normalizing constant of the Cauchy kernel: Gamma((d+1)/2) / pi^((d+1)/2)."""
    return float(np.exp(gammaln((dim + 1) / 2) - (dim + 1) / 2 * np.log(np.pi)))


def cauchy_kernel(t, x, y, dim=None):
    """Transition density of the symmetric 1-stable process in R^d.

    p(t, x, y) = c_d * t / (t^2 + |x-y|^2)^((d+1)/2).
    """
    if dim is None:
        dim = 1 if np.asarray(x).ndim == 0 or np.asarray(x).shape[-1:] not in [(2,)] else 2
    if np.any(np.asarray(t) <= 0):
        raise ValidationError("time must be positive")
    r2 = _dist_sq(x, y, dim)
    return cauchy_constant(dim) * t / (t**2 + r2) ** ((dim + 1) / 2)


def gaussian_kernel(t, x, y, dim=1, log=False):
    """Transition density with multiplier exp(-t |xi|^2):

    p(t, x, y) = (4 pi t)^(-d/2) exp(-|x-y|^2 / (4 t)).

    With ``log=True`` returns the log-density (safe for large exponents).
    """
    if np.any(np.asarray(t) <= 0):
        raise ValidationError("time must be positive")
    r2 = _dist_sq(x, y, dim)
    logp = -dim / 2 * np.log(4 * np.pi * t) - r2 / (4 * t)
    return logp if log else np.exp(logp)


def subordinator_density_half(t, s):
    """Density in s of the 1/2-stable subordinator at time t:

    g(t, s) = t (4 pi)^(-1/2) s^(-3/2) exp(-t^2 / (4 s)),  s > 0.
    """
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    if np.any(t <= 0):
        raise ValidationError("time must be positive")
    out = np.zeros(np.broadcast(t, s).shape)
    pos = np.broadcast_to(s, out.shape) > 0
    tb = np.broadcast_to(t, out.shape)
    sb = np.broadcast_to(s, out.shape)
    out[pos] = (
        tb[pos] / np.sqrt(4 * np.pi) * sb[pos] ** -1.5 * np.exp(-tb[pos] ** 2 / (4 * sb[pos]))
    )
    return out if out.ndim else float(out)


def subordination_grid():
    """Shared log-s Gauss-Legendre grid for subordination integrals.

    Covers s in [1e-16, 1e12]; integrands of the form g(t, s) * F(s) with F
    smooth in log s are integrated essentially to machine accuracy for
    t in [1e-5, 1e3].
    """
    global _SUB_GRID
    if _SUB_GRID is None:
        s, w_log = log_panels(1e-16, 1e12, panels_per_decade=2, nodes_per_panel=12)
        _SUB_GRID = (s, w_log)
    return _SUB_GRID


def subordinated_gaussian(t, x, y, dim=1):
    """Integral over s of gaussian_kernel(s, x, y) * g_{1/2}(t, s).

    By the subordination identity this equals cauchy_kernel(t, x, y); the
    quadrature is independent of that closed form and is used to verify it.
    """
    s, w = subordination_grid()
    r2 = np.atleast_1d(_dist_sq(x, y, dim))
    g = subordinator_density_half(t, s)
    vals = np.exp(-dim / 2 * np.log(4 * np.pi * s)[None, :] - r2[:, None] / (4 * s)[None, :])
    out = vals @ (w * g)
    return out[0] if out.size == 1 else out


def sample_subordinator_increment(dt, beta, rng, size=None):
    """Increments of the beta-stable subordinator over a step of length dt.

    Uses the Kanter product representation: with U uniform on (0,1) and W
    standard exponential,

        S = (A(pi U) / W)^((1-beta)/beta),
        A(u) = sin(beta u)^(beta/(1-beta)) sin((1-beta) u) / sin(u)^(1/(1-beta)),

    has Laplace transform exp(-lambda^beta); the increment is dt^(1/beta) * S.
    """
    if not 0 < beta < 1:
        raise ValidationError("beta must lie in (0, 1)")
    if not dt > 0:
        raise ValidationError("dt must be positive")
    u = rng.uniform(0.0, 1.0, size)
    w = rng.exponential(1.0, size)
    pu = np.pi * u
    a = np.sin(beta * pu) ** (beta / (1 - beta)) * np.sin((1 - beta) * pu) / np.sin(pu) ** (
        1 / (1 - beta)
    )
    return dt ** (1 / beta) * (a / w) ** ((1 - beta) / beta)
