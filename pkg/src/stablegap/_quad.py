"""Shared quadrature helpers: Gauss-Legendre panel grids on lines and log scales."""

from __future__ import annotations

import numpy as np
from numpy.polynomial.legendre import leggauss


def panel_gauss(edges, nodes_per_panel=10):
    """Composite Gauss-Legendre rule on the panels defined by ``edges``.

    Parameters
    ----------
    edges : array_like
        Increasing panel boundaries, length npanels + 1.
    nodes_per_panel : int
        Gauss-Legendre nodes per panel.

    Returns
    -------
    x, w : ndarray
        Quadrature nodes and weights.
    """
    edges = np.asarray(edges, dtype=float)
    if edges.ndim != 1 or edges.size < 2 or np.any(np.diff(edges) <= 0):
        raise ValueError("edges must be strictly increasing with at least two entries")
    xg, wg = leggauss(nodes_per_panel)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * np.diff(edges)
    x = (mid[:, None] + half[:, None] * xg[None, :]).ravel()
    w = (half[:, None] * wg[None, :]).ravel()
    return x, w


def uniform_panels(lo, hi, panel_width, nodes_per_panel=10):
    """Uniform panels of width at most ``panel_width`` covering [lo, hi]."""
    n = max(1, int(np.ceil((hi - lo) / panel_width)))
    return panel_gauss(np.linspace(lo, hi, n + 1), nodes_per_panel)


def log_panels(lo, hi, panels_per_decade=2, nodes_per_panel=10):
    """Log-spaced panels on [lo, hi], suited to integrands smooth in log x."""
    if lo <= 0 or hi <= lo:
        raise ValueError("need 0 < lo < hi")
    ndec = np.log10(hi / lo)
    n = max(1, int(np.ceil(ndec * panels_per_decade)))
    edges = np.exp(np.linspace(np.log(lo), np.log(hi), n + 1))
    return panel_gauss(edges, nodes_per_panel)


def graded_panels(lo, hi, focus, inner_width, growth=1.5, nodes_per_panel=10):
    """Panels refined toward ``focus`` (must satisfy lo <= focus <= hi).

    Panel widths start at ``inner_width`` next to the focus point and grow
    geometrically away from it.
    """
    def side(a, b):
        # edges from a (near focus) to b
        out = [a]
        w = inner_width
        while out[-1] < b:
            out.append(min(b, out[-1] + w))
            w *= growth
        return out

    right = side(focus, hi)
    left = [2 * focus - e for e in side(focus, 2 * focus - lo)]
    edges = np.array(sorted(set(left + right)))
    edges = edges[(edges >= lo) & (edges <= hi)]
    if edges[0] > lo:
        edges = np.concatenate([[lo], edges])
    if edges[-1] < hi:
        edges = np.concatenate([edges, [hi]])
    return panel_gauss(edges, nodes_per_panel)
