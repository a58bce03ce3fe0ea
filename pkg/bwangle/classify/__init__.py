from .upsilon import UpsilonResult, hexagon_mu_bound, upsilon
from .classes import ClassMembership, Membership, class_report
from .sweep import (
    conjecture_sweep,
    hexagon_family,
    hoelder_family,
    product_conjecture,
    product_family,
    properness_table,
    rho_grid_from_spec,
)
