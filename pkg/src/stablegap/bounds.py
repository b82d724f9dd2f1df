"""Closed-form spectral bounds and the Bessel-zero evaluations behind them.

Bessel functions of the first kind are evaluated self-contained: an ascending
power series for small argument and the large-argument (Hankel) asymptotic
expansion beyond, with zeros located by Newton iteration seeded from the
McMahon expansion. Everything here is cheap, deterministic, and independent
of the variational solver, so the two sides can be compared in tests.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import gamma, gammaln

from .errors import ValidationError

_SERIES_CUTOFF = 12.0


def besselj(p, x):
    """J_p(x) for real order p and x > 0, series below x=11, asymptotic above."""
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    if np.any(x <= 0):
        raise ValidationError("besselj expects x > 0")
    out = np.empty_like(x)
    small = x < _SERIES_CUTOFF
    if np.any(small):
        out[small] = _besselj_series(p, x[small])
    if np.any(~small):
        out[~small] = _besselj_asymptotic(p, x[~small])
    return float(out[0]) if scalar else out


def _besselj_series(p, x):
    # ascending series sum_m (-1)^m (x/2)^(2m+p) / (m! Gamma(m+p+1)); the
    # terms come from an exact multiplicative recurrence and are accumulated
    # with compensated summation, which keeps the cancellation error near the
    # series cutoff at the level of one rounding of the largest term
    if p < 0 and p == int(p):
        return (-1.0) ** int(-p) * _besselj_series(-p, x)
    half = x / 2.0
    term = half**p / gamma(p + 1.0)
    out = term.copy()
    comp = np.zeros_like(x)
    for m in range(1, 90):
        term = -term * half * half / (m * (m + p))
        y = term - comp
        t = out + y
        comp = (t - out) - y
        out = t
        if m > 4 and np.all(np.abs(term) < 1e-18 * (1.0 + np.abs(out))):
            break
    return out


def _besselj_asymptotic(p, x):
    # J_p(x) ~ sqrt(2/(pi x)) [P(p,x) cos(chi) - Q(p,x) sin(chi)],
    # chi = x - (p/2 + 1/4) pi, with the standard inverse-power expansions.
    mu = 4 * p * p
    chi = x - (0.5 * p + 0.25) * np.pi
    P = np.ones_like(x)
    Q = np.zeros_like(x)
    term = np.ones_like(x)
    active = np.ones(x.shape, dtype=bool)  # entries still below optimal truncation
    k = 0
    while k < 60 and np.any(active):
        t_next = term * ((mu - (2 * k + 1) ** 2) / (8.0 * (k + 1))) / x
        if k > 1:
            active &= np.abs(t_next) < np.abs(term)  # freeze once the series diverges
        term = t_next
        k += 1
        contrib = np.where(active, term * (-1.0) ** (k // 2), 0.0)
        if k % 2 == 1:
            Q += contrib
        else:
            P += contrib
        active &= np.abs(term) >= 1e-18
    return np.sqrt(2.0 / (np.pi * x)) * (P * np.cos(chi) - Q * np.sin(chi))


def besselj_derivative(p, x):
    """J_p'(x) = J_(p-1)(x) - (p/x) J_p(x)."""
    return besselj(p - 1, x) - (p / np.asarray(x, dtype=float)) * besselj(p, x)


def bessel_zero(p, k, maxiter=50):
    """k-th positive zero of J_p (k >= 1), Newton from the McMahon seed."""
    if k < 1 or int(k) != k:
        raise ValidationError("zero index k must be a positive integer")
    if p < -0.5:
        raise ValidationError("orders below -1/2 are not supported")
    mu = 4 * p * p
    beta = (k + 0.5 * p - 0.25) * np.pi
    x = beta - (mu - 1) / (8 * beta) - 4 * (mu - 1) * (7 * mu - 31) / (3 * (8 * beta) ** 3)
    for _ in range(maxiter):
        f = besselj(p, x)
        df = besselj_derivative(p, x)
        step = f / df
        x -= step
        if abs(step) < 1e-15 * x:
            break
    return float(x)


def bessel_zero_table(p, count):
    """First ``count`` zeros of J_p with their residuals |J_p(zero)|."""
    zeros = np.array([bessel_zero(p, k) for k in range(1, count + 1)])
    residuals = np.abs(np.array([besselj(p, z) for z in zeros]))
    return zeros, residuals


# ---------------- spectral brackets and gap bounds ----------------


def ball_laplacian_eigenvalues(dim, radius):
    """(mu1, mu2): lowest Dirichlet-Laplacian eigenvalue of the ball of the
    given radius, and the lowest one among x1-antisymmetric eigenfunctions.

    mu1 = j(d/2-1, 1)^2 / r^2,  mu2 = j(d/2, 1)^2 / r^2.
    """
    if radius <= 0:
        raise ValidationError("radius must be positive")
    j0 = bessel_zero(dim / 2 - 1, 1)
    j1 = bessel_zero(dim / 2, 1)
    return j0**2 / radius**2, j1**2 / radius**2


def stable_eigenvalue_bracket(mu, alpha):
    """Bracket [mu^(alpha/2) / 2, mu^(alpha/2)] for the alpha-stable eigenvalue
    corresponding to a Dirichlet-Laplacian eigenvalue mu of the ball."""
    if not 0 < alpha <= 2:
        raise ValidationError("alpha must lie in (0, 2]")
    if mu <= 0:
        raise ValidationError("mu must be positive")
    top = mu ** (alpha / 2)
    return 0.5 * top, top


def ball_bracket(dim, radius, alpha=1.0):
    """Brackets for lambda1 and lambda* of the alpha-stable process on a ball."""
    mu1, mu2 = ball_laplacian_eigenvalues(dim, radius)
    return stable_eigenvalue_bracket(mu1, alpha), stable_eigenvalue_bracket(mu2, alpha)


def gap_upper(dim, inradius, alpha=1.0):
    """Upper bound on lambda2 - lambda1 via the largest inscribed ball:

    (j(d/2,1)^alpha - j(d/2-1,1)^alpha / 2) / r^alpha.
    """
    if inradius <= 0:
        raise ValidationError("inradius must be positive")
    j0 = bessel_zero(dim / 2 - 1, 1)
    j1 = bessel_zero(dim / 2, 1)
    return (j1**alpha - 0.5 * j0**alpha) / inradius**alpha


def main_gap_constants(dim):
    """(C_d, C'_d) in the lower bound lambda* - lambda1 >= min(C_d r / L^2, C'_d / r).

    C_d = pi^2 (d+1) / (2 pi d (d+2) + 4 (d+1)),  C'_d = 4 C_d / pi^2.
    """
    if dim < 1 or int(dim) != dim:
        raise ValidationError("dimension must be a positive integer")
    c = np.pi**2 * (dim + 1) / (2 * np.pi * dim * (dim + 2) + 4 * (dim + 1))
    return float(c), float(4 * c / np.pi**2)


def gap_lower_main(dim, half_extent, inradius):
    """min(C_d r / L^2, C'_d / r) for the Cauchy process on an x1-symmetric
    convex domain with horizontal half-extent L and inradius r."""
    if inradius <= 0 or half_extent <= 0:
        raise ValidationError("geometry parameters must be positive")
    if inradius > half_extent + 1e-12:
        raise ValidationError("inradius cannot exceed the half-extent")
    c, cp = main_gap_constants(dim)
    return min(c * inradius / half_extent**2, cp / inradius)


def disk_gap_lower(radius):
    """Simplified disk bound: lambda* - lambda1 >= 1 / (6 r)."""
    if radius <= 0:
        raise ValidationError("radius must be positive")
    return 1.0 / (6.0 * radius)


def rectangle_gap_lower(half_extent):
    """Simplified bound for the rectangle (-L, L) x (-1, 1):
    lambda* - lambda1 >= min(2 / (5 L^2), 1/6)."""
    if half_extent < 1:
        raise ValidationError("rectangle bound assumes L >= 1")
    return min(2.0 / (5.0 * half_extent**2), 1.0 / 6.0)


def weighted_poincare_constant(dim):
    """C(d) = pi d (d+2) / (4 (d+1)), the constant in the weighted Poincare
    inequality for the ground-state weight."""
    if dim < 1 or int(dim) != dim:
        raise ValidationError("dimension must be a positive integer")
    return float(np.pi * dim * (dim + 2) / (4 * (dim + 1)))


def final_inequality(lambda1, half_extent):
    """Gap lower bound in terms of lambda1 for x1-symmetric convex planar
    domains of inradius 1: min(pi^2 / (4 (2 lambda1 + 1) L^2), 1 / (2 lambda1 + 1))."""
    if lambda1 <= 0 or half_extent <= 0:
        raise ValidationError("arguments must be positive")
    c = 2 * lambda1 + 1
    return min(np.pi**2 / (4 * c * half_extent**2), 1.0 / c)


@dataclass
class BoundReport:
    """All closed-form rows that apply to one domain."""

    dim: int
    alpha: float
    inradius: float
    half_extent: float
    lambda1_bracket: tuple
    lambda_star_bracket: tuple
    gap_upper: float
    rows: dict = field(default_factory=dict)

    def to_json(self):
        return {
            "dim": self.dim,
            "alpha": self.alpha,
            "inradius": self.inradius,
            "half_extent": self.half_extent,
            "lambda1_bracket": list(self.lambda1_bracket),
            "lambda_star_bracket": list(self.lambda_star_bracket),
            "gap_upper": self.gap_upper,
            "rows": self.rows,
        }


def render_table(report):
    """Aligned text table of a BoundReport."""
    rows = [
        ("dim", report.dim),
        ("alpha", report.alpha),
        ("inradius", report.inradius),
        ("half_extent", report.half_extent),
        ("lambda1_lower", report.lambda1_bracket[0]),
        ("lambda1_upper", report.lambda1_bracket[1]),
        ("lambda_star_lower", report.lambda_star_bracket[0]),
        ("lambda_star_upper", report.lambda_star_bracket[1]),
        ("gap_upper", report.gap_upper),
    ] + sorted(report.rows.items())
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v:.9g}" for k, v in rows)


def build_report(domain, alpha=1.0, lambda1=None):
    """Assemble every closed-form bound applicable to ``domain``.

    ``lambda1`` (if supplied, e.g. from the variational solver) enables the
    lambda1-dependent gap row.
    """
    summ = domain.summarize()
    d, r, L = summ.dim, summ.inradius, summ.half_extent
    br1, br2 = ball_bracket(d, r, alpha)
    report = BoundReport(
        dim=d,
        alpha=alpha,
        inradius=r,
        half_extent=L,
        lambda1_bracket=br1,
        lambda_star_bracket=br2,
        gap_upper=gap_upper(d, r, alpha),
    )
    if alpha == 1.0 and summ.symmetric_x1 and summ.convex:
        report.rows["gap_lower_main"] = gap_lower_main(d, L, r)
        cd, cpd = main_gap_constants(d)
        report.rows["C_d"] = cd
        report.rows["C_prime_d"] = cpd
        if domain.kind == "disk":
            report.rows["gap_lower_disk"] = disk_gap_lower(r)
        if domain.kind == "rectangle" and abs(r - 1.0) < 1e-12 and L >= 1:
            report.rows["gap_lower_rectangle"] = rectangle_gap_lower(L)
        if lambda1 is not None and d == 2 and abs(r - 1.0) < 1e-12:
            report.rows["gap_lower_from_lambda1"] = final_inequality(lambda1, L)
    return report
