"""Exact q-series engine for homological blocks of Seifert homology spheres.

The package computes building q-series by iterating a fixed-point
character transform over simply-laced root systems, in exact rational
arithmetic, and cross-validates the results against a rank-1 closed
form and an independent plumbing-graph oracle.
"""

from .errors import AmbiguousMatchError, GroupTooLargeError, QBlocksError, TruncationError
from .qser import QSeries, add, euler_product, expand_eta, false_theta, monomial, mul, scale
from .rootsys import (
    RootSystem, WeylElement, build_root_system, dot_action, inner_product,
    longest_element, minuscule_weights, weyl_group,
)
from .repdata import (
    kostant_convolution, kostant_partition, multiplicity_freudenthal,
    multiplicity_kostant, weyl_dim,
)
from .blocks import (
    BlockLabel, ShiftedLabel, conformal_exponent, make_block_label, make_shifted,
    q0, shifted_from_weight, star_act, weight_space_character,
)
from .abengine import atiyah_bott_euler, nested_character, nested_character_mform
from .sl2closed import compositions_identity_check, example3_series
from .zhatref import (
    MatchResult, NoMatch, PlumbingGraph, SeifertData, match_linear_combination,
    seifert_to_plumbing, zhat_series,
)

__version__ = "0.1.0"
