"""Small hand-built coverage instances with known behaviour."""

from __future__ import annotations

import numpy as np

from .coverage import Instance


def unit_square_instance(kappa: int = 2) -> Instance:
    """Corners of the unit square; sites at (0, 0) and (1, 1), radius 1.05.

    Each site covers three corners, the pair covers all four.
    """
    points = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
    return Instance(points, [(0.0, 0.0), (1.0, 1.0)], [1.05, 1.05], kappa)


def _cluster(center, size):
    cx, cy = center
    return [(cx, cy + 0.01 * k) for k in range(size)]


def stage3_rewire_instance() -> Instance:
    """Eight sites, kappa = 4, on which ResQue Greedy beats plain greedy.

    Point clusters (sizes in brackets) and the sites covering them::

        X [12]: sites 0, 1     Y [4]: sites 0, 2     Z [7]: site 0
        W2 [10]: site 1        W3 [9]: site 2        U [8]: site 3
        V [8]: site 4          one private point each for sites 5, 6, 7

    Greedy takes 0, 1, 2, 3 (value 50).  Site 1 is the element site 0
    overlaps most, so the ledger drops at stage 3, site 0 is stepped back,
    site 3 replaces it and the run ends at {1, 2, 3, 4} (value 51).
    """
    clusters = [
        ((-1.5, 0.0), 12),  # X
        ((1.5, 0.0), 4),  # Y
        ((0.0, 0.0), 7),  # Z
        ((-4.0, 0.0), 10),  # W2
        ((4.0, 0.0), 9),  # W3
        ((0.0, 10.0), 8),  # U
        ((10.0, 10.0), 8),  # V
        ((20.0, 0.0), 1),
        ((20.0, 10.0), 1),
        ((20.0, 20.0), 1),
    ]
    points = [p for c, k in clusters for p in _cluster(c, k)]
    sites = [(0.0, 0.0), (-3.0, 0.0), (3.0, 0.0), (0.0, 10.0), (10.0, 10.0), (20.0, 0.0), (20.0, 10.0), (20.0, 20.0)]
    radii = [2.0, 1.6, 1.6, 1.0, 1.0, 1.0, 1.0, 1.0]
    return Instance(np.array(points), sites, radii, 4)
