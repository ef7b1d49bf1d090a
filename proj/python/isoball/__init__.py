"""Isoperimetric profile M(eps, n) of the unit-volume ball and the distance
bound D(eps, n) built on it."""

from ._isoball import (
    LensShape,
    NumericError,
    __version__,
    ball_volume,
    cap_area,
    cap_volume,
    cli,
    dimension_scan,
    distance_bound,
    flat_cut_free_area,
    general_cap_free_area_at_volume,
    growth_ode,
    iso_profile,
    iso_value,
    lens_from_rho,
    lens_profile,
    minimize_profile,
    reg_inc_beta,
    run_lemma_suite,
    solve_rho_for_volume,
    sphere_area,
    unit_volume_radius,
)

__all__ = [
    "LensShape",
    "NumericError",
    "ball_volume",
    "cap_area",
    "cap_volume",
    "cli",
    "dimension_scan",
    "distance_bound",
    "flat_cut_free_area",
    "general_cap_free_area_at_volume",
    "growth_ode",
    "iso_profile",
    "iso_value",
    "lens_from_rho",
    "lens_profile",
    "minimize_profile",
    "reg_inc_beta",
    "run_lemma_suite",
    "solve_rho_for_volume",
    "sphere_area",
    "unit_volume_radius",
]
