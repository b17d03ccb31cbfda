"""Exact growth computations for monomial graded linear series and ideal families."""

from .asymptotics import LimitReport, analyze, divergence_certificate
from .families import GradedIdealFamily, check_family, colength_sequence, make_family_E1
from .lacunary import LacunarySeq, sigma, witness_near_half, witness_near_zero
from .monomial import ExpVec, MonomialIdeal, QuotientRing, colength, ideal_contains, ideal_product, standard_monomials
from .okounkov import MonomialValuation, body_estimate, semigroup_sample
from .series import GradedSeries, GrowthModel, dim_piece, index, kodaira_iitaka, make_example

__version__ = "0.1.0"
