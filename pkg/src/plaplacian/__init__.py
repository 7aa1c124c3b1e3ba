"""Spectra of the p-Laplacian on intervals, boxes, box unions, and flat
tori, with counting-function analysis of the Weyl law and its companion
inequalities."""

from .domains import (
    Domain, Packing, PackingItem, box, box_union, domain_from_json,
    domain_to_json, interval, pack_cubes, packing_from_json, packing_to_json,
    partition_cubes, rasterize, scale_domain, torus, translate_domain,
    unit_cube, validate_packing, volume,
)
from .energy import (
    Field, combine_disjoint, dirichlet_vertices, discrete_p_laplacian,
    energy_gradient_numerator, energy_parts, field_from_callable,
    neumann_cells, normalize, p_energy, restrict, submask_domain,
)
from .errors import (
    ArgumentError, EstimationError, PackingError, ResourceError, SolverError,
    UnsupportedError, ValidationError,
)
from .exact import (
    Spectrum, exact_spectrum, lambda_1d, pi_p, scale_spectrum,
    shooting_eigenvalue_1d, shooting_eigenvalues_1d, spectrum_1d,
    spectrum_from_json, spectrum_to_csv, spectrum_to_json, weyl_constant_1d,
)
from .discrete import (
    DiscreteOperator, assemble_fd, convergence_order, eigensolve_p2,
    flatten_spectrum, min_p_rayleigh, trusted_count_threshold,
)
from .weyl import (
    CountingCurve, ExactProvider, InequalityReport, WeylEstimate,
    check_constant_equality, check_cutoff_inequality,
    check_dirichlet_le_neumann, check_dirichlet_monotonicity,
    check_friedlander_bounds, check_neumann_monotonicity, check_scaling,
    count, count_many, counting_curve, curve_to_csv, cutoff_lambda,
    estimate_weyl_constant, log_grid, report_from_json, report_to_json,
    rng_stream, sandwich_weyl, sweep_cutoff, sweep_dirichlet_monotonicity,
    sweep_energy_split, sweep_neumann_monotonicity, sweep_scaling,
    weyl_estimate_from_json, weyl_estimate_to_json,
)

__all__ = [
    "ArgumentError", "CountingCurve", "DiscreteOperator", "Domain",
    "EstimationError", "ExactProvider", "Field", "InequalityReport",
    "Packing", "PackingError", "PackingItem", "ResourceError", "SolverError",
    "Spectrum", "UnsupportedError", "ValidationError", "WeylEstimate",
    "assemble_fd", "box", "box_union", "check_constant_equality",
    "check_cutoff_inequality", "check_dirichlet_le_neumann",
    "check_dirichlet_monotonicity", "check_friedlander_bounds",
    "check_neumann_monotonicity", "check_scaling", "combine_disjoint",
    "convergence_order", "count", "count_many", "counting_curve",
    "curve_to_csv", "cutoff_lambda", "dirichlet_vertices",
    "discrete_p_laplacian", "domain_from_json", "domain_to_json",
    "eigensolve_p2", "energy_gradient_numerator", "energy_parts",
    "estimate_weyl_constant", "exact_spectrum", "field_from_callable",
    "flatten_spectrum", "interval", "lambda_1d", "log_grid",
    "min_p_rayleigh", "neumann_cells", "normalize", "p_energy", "pack_cubes",
    "packing_from_json", "packing_to_json", "partition_cubes", "pi_p",
    "rasterize", "report_from_json", "report_to_json", "restrict",
    "rng_stream", "sandwich_weyl", "scale_domain", "scale_spectrum",
    "shooting_eigenvalue_1d", "shooting_eigenvalues_1d", "spectrum_1d",
    "spectrum_from_json", "spectrum_to_csv", "spectrum_to_json",
    "submask_domain", "sweep_cutoff", "sweep_dirichlet_monotonicity",
    "sweep_energy_split", "sweep_neumann_monotonicity", "sweep_scaling",
    "torus", "translate_domain", "trusted_count_threshold", "unit_cube",
    "validate_packing", "volume", "weyl_constant_1d",
    "weyl_estimate_from_json", "weyl_estimate_to_json",
]

__version__ = "0.1.0"
