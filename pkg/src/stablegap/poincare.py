"""Weighted Poincare inequalities for symmetric log-concave-like weights.

For a positive symmetric weight g on (-l, l) and antisymmetric f, the sharp
directional inequality

    integral f'^2 g  >=  (pi^2 / (4 l^2)) integral f^2 g

is verified here by minimizing the discrete Rayleigh quotient over a P1
finite-element space on the half-interval (odd extension, free endpoint).
The module also provides discrete log-concavity tests, the corresponding
2D directional check on rectangles, iterated-kernel survival probabilities
of the process observed along a finite time skeleton, and the elementary
exponential-weight derivative inequality used by the gap bounds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import diags
from scipy.sparse.linalg import eigsh

from ._quad import panel_gauss
from .errors import UnsupportedConfigurationError, ValidationError
from .kernels import cauchy_kernel


@dataclass(frozen=True)
class WeightProfile:
    """Positive weight sampled on a uniform grid (cell centers of (-l, l))."""

    grid: np.ndarray
    values: np.ndarray
    symmetric: bool

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "grid", g)
        object.__setattr__(self, "values", v)
        if g.ndim != 1 or g.shape != v.shape:
            raise ValidationError("grid and values must be matching 1D arrays")
        if np.any(v <= 0) or not np.all(np.isfinite(v)):
            raise ValidationError("weight samples must be positive and finite")
        if self.symmetric:
            sym_err = np.max(np.abs(v - v[::-1]))
            grid_err = np.max(np.abs(g + g[::-1]))
            if sym_err > 1e-10 * np.max(v) or grid_err > 1e-10 * np.max(np.abs(g)):
                raise ValidationError("profile marked symmetric but samples are not")

    @classmethod
    def from_function(cls, fn, l, n=2048, symmetric=True):
        """Sample fn at the n cell centers of a uniform partition of (-l, l)."""
        edges = np.linspace(-l, l, n + 1)
        centers = 0.5 * (edges[:-1] + edges[1:])
        return cls(centers, np.asarray(fn(centers), dtype=float), symmetric)


def ground_state_weight(result, n=2048):
    """phi_1^2 of a 1D spectral result as a WeightProfile on its interval."""
    (a, b), = result.domain.bounding_box()
    l = 0.5 * (b - a)
    phi = result.eigenfunction(1)
    return WeightProfile.from_function(lambda x: phi(x) ** 2, l, n=n)


def is_log_concave(profile, tol=1e-9):
    """Midpoint concavity of log g over all adjacent grid triples.

    Returns True when every discrete second difference of log g is at most
    tol * max|log g| (quadrature noise can flip exact-zero differences).
    """
    g = profile.grid
    dg = np.diff(g)
    if np.max(np.abs(dg - dg[0])) > 1e-9 * abs(dg[0]):
        raise ValidationError("log-concavity test needs a uniform grid")
    lg = np.log(profile.values)
    second = lg[:-2] - 2 * lg[1:-1] + lg[2:]
    return bool(np.all(second <= tol * max(1.0, np.max(np.abs(lg)))))


@dataclass
class RayleighOutcome:
    """Minimal weighted Rayleigh quotient against its closed-form bound."""

    quotient: float
    bound: float
    passed: bool
    minimizer_grid: np.ndarray
    minimizer: np.ndarray

    def to_json(self):
        return {
            "schema": 1,
            "quotient": self.quotient,
            "bound": self.bound,
            "pass": self.passed,
        }


def min_antisymmetric_quotient(profile, l, tol=1e-4):
    """Minimize (integral f'^2 g) / (integral f^2 g) over odd f on (-l, l).

    Odd functions are parameterized by their restriction to (0, l) in a P1
    finite-element space with f(0) = 0 and a free (natural) condition at l;
    g is taken piecewise constant per cell. The minimal generalized
    eigenvalue is compared with pi^2 / (4 l^2).
    """
    if not profile.symmetric:
        raise ValidationError("the antisymmetric quotient needs a symmetric weight")
    m = profile.grid.size
    if m < 16:
        raise UnsupportedConfigurationError("weight grid too coarse (< 16 nodes)")
    # cell values of g on (0, l): the right half of the profile
    if m % 2 != 0:
        raise UnsupportedConfigurationError("need an even number of cell samples")
    gc = profile.values[m // 2 :]
    n = gc.size
    h = l / n
    # P1 stiffness/mass with piecewise-constant weight; unknowns at nodes 1..n
    kd = np.concatenate([(gc[:-1] + gc[1:]) / h, [gc[-1] / h]])
    ko = -gc[1:] / h
    md = np.concatenate([(gc[:-1] + gc[1:]) * h / 3, [gc[-1] * h / 3]])
    mo = gc[1:] * h / 6
    K = diags([ko, kd, ko], [-1, 0, 1], format="csc")
    M = diags([mo, md, mo], [-1, 0, 1], format="csc")
    vals, vecs = eigsh(K, k=1, M=M, sigma=0, which="LM")
    quotient = float(vals[0])
    bound = np.pi**2 / (4 * l**2)
    nodes = np.linspace(0.0, l, n + 1)
    f = np.concatenate([[0.0], vecs[:, 0]])
    f /= np.max(np.abs(f))
    return RayleighOutcome(quotient, bound, bool(quotient >= bound - tol), nodes, f)


def directional_quotient_2d(domain, weight, f, tol=1e-10, n_panels=24, fd_step=1e-6):
    """Directional Poincare check on a rectangle symmetric in x1:

    lhs = integral |df/dx1|^2 w,  rhs = (pi^2 / (4 L^2)) integral f^2 w,

    for an x1-antisymmetric test function f and x1-symmetric weight w, both
    callables of an (n, 2) array. Returns {"lhs", "rhs", "pass"}.
    """
    if domain.kind != "rectangle":
        raise ValidationError("directional quotient is defined on rectangles")
    (a1, b1), (a2, b2) = domain.params
    if abs(a1 + b1) > 1e-12 * (b1 - a1):
        raise ValidationError("rectangle must be symmetric in x1")
    L = 0.5 * (b1 - a1)
    x1, w1 = panel_gauss(np.linspace(a1, b1, n_panels + 1), 6)
    x2, w2 = panel_gauss(np.linspace(a2, b2, n_panels + 1), 6)
    g1, g2 = np.meshgrid(x1, x2, indexing="ij")
    pts = np.column_stack([g1.ravel(), g2.ravel()])
    refl = pts.copy()
    refl[:, 0] *= -1
    fv = np.asarray(f(pts), dtype=float)
    if np.max(np.abs(np.asarray(f(refl)) + fv)) > 1e-8 * max(1.0, np.max(np.abs(fv))):
        raise ValidationError("test function is not antisymmetric in x1")
    wv = np.asarray(weight(pts), dtype=float)
    plus = pts.copy()
    plus[:, 0] += fd_step
    minus = pts.copy()
    minus[:, 0] -= fd_step
    d1 = (np.asarray(f(plus)) - np.asarray(f(minus))) / (2 * fd_step)
    ww = np.outer(w1, w2).ravel()
    lhs = float(np.sum(d1**2 * wv * ww))
    rhs = float(np.pi**2 / (4 * L**2) * np.sum(fv**2 * wv * ww))
    return {"lhs": lhs, "rhs": rhs, "pass": bool(lhs >= rhs - tol - 1e-9 * abs(rhs))}


def skeleton_survival(domain, x, times, alpha=1.0, n_panels=24, nodes=4):
    """P_x(X_{t_1} in D, ..., X_{t_n} in D) for the free process observed on
    a finite time skeleton, by iterated kernel quadrature over D^n (n <= 4).
    alpha = 1 only (closed-form kernel)."""
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if times.size > 4:
        raise UnsupportedConfigurationError(
            "deterministic skeleton quadrature supports n <= 4 times"
        )
    if np.any(np.diff(times) <= 0) or times[0] <= 0:
        raise ValidationError("times must be strictly increasing and positive")
    if alpha != 1.0:
        raise UnsupportedConfigurationError("closed-form kernel requires alpha = 1")
    dim = domain.dim
    if dim == 1:
        x0 = np.array([float(x)])
        if not domain.contains(x0)[0]:
            raise ValidationError("starting point must lie in D")
        qs, ws = [], []
        for a, b in domain.intervals:
            q, w = panel_gauss(np.linspace(a, b, n_panels + 1), nodes)
            qs.append(q)
            ws.append(w)
        pts = np.concatenate(qs)
        ww = np.concatenate(ws)
        diff = np.abs(pts[:, None] - pts[None, :])
    else:
        if domain.kind != "rectangle":
            raise UnsupportedConfigurationError("2D skeleton supports rectangles")
        x0 = np.asarray(x, dtype=float)[None, :]
        if not domain.contains(x0)[0]:
            raise ValidationError("starting point must lie in D")
        (a1, b1), (a2, b2) = domain.params
        q1, w1 = panel_gauss(np.linspace(a1, b1, n_panels + 1), nodes)
        q2, w2 = panel_gauss(np.linspace(a2, b2, n_panels + 1), nodes)
        g1, g2 = np.meshgrid(q1, q2, indexing="ij")
        pts = np.column_stack([g1.ravel(), g2.ravel()])
        ww = np.outer(w1, w2).ravel()
        diff = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=2)
    v = np.ones(pts.shape[0])
    gaps = np.diff(np.concatenate([[0.0], times]))
    for dt in gaps[:0:-1]:
        v = (cauchy_kernel(dt, diff, 0.0, dim) * ww[None, :]) @ v
    if dim == 1:
        d0 = np.abs(pts - x0[0])
    else:
        d0 = np.linalg.norm(pts - x0, axis=1)
    return float(np.sum(cauchy_kernel(gaps[0], d0, 0.0, dim) * ww * v))


def segment_log_concavity(domain, segment, times, n_points=25, tol=1e-7):
    """Discrete log-concavity of the skeleton survival probability along an
    axis-parallel segment ((start, end) points in D). Returns the maximal
    second difference of the log (<= tol means log-concave)."""
    a = np.asarray(segment[0], dtype=float)
    b = np.asarray(segment[1], dtype=float)
    lam = np.linspace(0.0, 1.0, n_points)
    vals = []
    for s in lam:
        p = a + s * (b - a)
        vals.append(skeleton_survival(domain, p if domain.dim == 2 else float(p), times))
    lg = np.log(np.asarray(vals))
    second = lg[:-2] - 2 * lg[1:-1] + lg[2:]
    return float(np.max(second))


def check_lemma_derivative(ts, fs, c, tol=1e-12):
    """Exponentially weighted energy of a sampled function on [0, T]:

        I = integral over [0, T] of (f^2 + f'^2) e^(-c t),

    which dominates f(0)^2 / (c + 1). Returns {"I", "bound", "pass",
    "ratio"}; f' is a second-order finite difference of the samples.
    """
    if c <= 0:
        raise ValidationError("rate c must be positive")
    ts = np.asarray(ts, dtype=float)
    fs = np.asarray(fs, dtype=float)
    if ts.size < 3 or ts[0] != 0.0 or np.any(np.diff(ts) <= 0):
        raise ValidationError("need increasing samples starting at t = 0")
    df = np.gradient(fs, ts)
    integrand = (fs**2 + df**2) * np.exp(-c * ts)
    I = float(np.trapezoid(integrand, ts))
    bound = float(fs[0] ** 2 / (c + 1.0))
    return {
        "I": I,
        "bound": bound,
        "pass": bool(I >= bound - tol - 1e-9 * bound),
        "ratio": I / bound if bound > 0 else np.inf,
    }
