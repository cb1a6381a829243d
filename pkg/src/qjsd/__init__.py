"""Quantum Jensen-Shannon divergence and related quantum-state distances,
with Monte Carlo and simulated-annealing verification that the square root
of the divergence behaves as a metric."""

from .anneal import (
    AnnealResult,
    AnnealSchedule,
    decode_state,
    minimize,
    objective_single,
    objective_symmetrized,
    run_anneal,
)
from .audit import (
    AuditReport,
    Histogram,
    TriangleSample,
    histogram_merge,
    regenerate_triplet,
    run_audit,
    triangle_defect,
)
from .divergences import (
    classical_jsd,
    classical_jsd_sqrt_metric_check,
    d_h_by_optimization,
    d_h_closed_form,
    djs1_lower_bound,
    fidelity,
    g_function,
    hilbert_schmidt_distance,
    kl_divergence,
    measured_jsd,
    phi_pure,
    pure_triangle_scan,
    qjsd,
    qjsd_spectral,
    qjsd_sqrt,
    qjsd_via_relative_entropy,
    relative_entropy,
    schoenberg_check,
    shannon_entropy,
    von_neumann_entropy,
    wootters_distance,
)
from .linalg import EigenDecomposition, eigh, hs_inner, matrix_sqrt
from .states import (
    StateSampler,
    density_from_pure,
    derive_seed,
    haar_unitary,
    linear_entropy,
    partial_trace_second,
    projective_povm,
    purification,
    read_state_file,
    sample_state,
    simplex_point,
    write_state_file,
)

__version__ = "0.1.0"
