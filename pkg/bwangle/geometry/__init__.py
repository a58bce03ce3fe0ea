from .rho import (
    AngleOutcome,
    PairGeometry,
    euclid_angle,
    pair_geometry,
    rho_angle,
    rho_angles,
    rho_cosines,
    rho_product,
    special_angle,
)
