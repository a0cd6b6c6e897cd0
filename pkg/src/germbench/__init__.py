"""Exact computations with finite inverse semigroups, their spectra and germ groupoids."""

from .action import Action, GermGroupoid, build_germ_groupoid, germ_equal, validate_action
from .certificate import (
    Certificate,
    check_certificate,
    convert_orientation,
    pullback_certificate,
    uniform_certificate,
    verify_amenability_transfer,
)
from .groupoid import FiniteGroupoid, GroupoidHom, check_axioms, is_d_bijective, is_homomorphism, is_r_bijective
from .partial import PartialBijection, compose_partial
from .rho import rho_bundle, rho_point, rho_tilde, verify_rhofacts
from .semigroup import (
    InverseSemigroup,
    adjoin_zero,
    build_from_table,
    cyclic_group,
    double_zero_example,
    symmetric_inverse_monoid,
)
from .spectrum import canonical_action, enumerate_filters, tight_spectrum, theta_apply, ultrafilters

__version__ = "0.1.0"
