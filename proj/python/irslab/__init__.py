"""Fuchsian groups, Dirichlet domains and invariant random subgroups."""

from ._core import (
    FuchsianGroup,
    HPoint,
    IrslabError,
    Isometry,
    certify_group,
    check_cusp_strip,
    check_funnel_sector,
    cusp_strip_area,
    cyclic_group,
    degenerate,
    dilation,
    dirichlet_area,
    dirichlet_svg,
    distance,
    escape_is_abelian,
    estimate,
    euler_char,
    fiber_bound,
    frobenius_distance,
    funnel_sector_area,
    load_group,
    pair_of_pants,
    parse_group,
    pinch_member,
    punctured_torus,
    rotation_about_i,
    snapshot_size,
    translation_length,
)

__all__ = [name for name in dir() if not name.startswith("_")]
