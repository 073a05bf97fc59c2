"""Spectral energy of Erdős–Rényi random graphs.

Graph energy, Laplacian energy and empirical spectral distributions of
G(n, p), a from-scratch symmetric eigensolver, and exact moment calculus
for free convolution.
"""

__version__ = "0.1.0"

from .eigensym import ConvergenceError, Spectrum, eigenvalues, scaled_spectrum
from .energy import (
    EnergyReport,
    energy_sandwich,
    graph_energy,
    kyfan_check,
    laplacian_energy,
    matrix_energy,
)
from .freeconv import (
    MomentSequence,
    TruncatedSeries,
    abs_moment_bounds,
    free_convolve,
    moments_to_t,
    normal_moments,
    psi_moments,
    semicircle_moments,
    t_to_moments,
)
from .rgraph import (
    GraphSample,
    adjacency,
    centered_adjacency,
    centering_drift,
    gutman_matrix,
    l1_matrix,
    l2_matrix,
    laplacian,
    sample_graph,
)
from .specdist import (
    EmpiricalDist,
    SemicircleLaw,
    abs_mean,
    dist_moment,
    esd,
    ks_distance,
    semicircle_abs_moment,
    semicircle_cdf,
)
