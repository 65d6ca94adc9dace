"""Exact combinatorics and generating series for logarithmic GW/PT theory of toric threefold pairs."""

from .exact_arith import (I, GaussianRational, QForm, TruncatedULaurent, exp_series, series_inverse,
                          series_product, substitute_q_to_u)
from .geometry import (ElementaryGeometry, Kind, TranslationGroup, collapsed_directions, cone_lattice,
                       contains_point, factoring_functionals, translation_group)
from .lattice import (IntegerMatrix, SmithDecomposition, hermite_normal_form, integer_kernel,
                      primitive_part, smith_normal_form)
from .poset_enum import (DegenerationCatalog, enumerate_4valent_curves, four_valent_star,
                         gl3_normal_form, one_step_degenerations, smaller_stars)
from .series_engine import (CheckResult, GWSeries, InsufficientPrecision, PartitionVector, Prefactor,
                            PTSeries, Side, compare_correspondence, correspondence_check, fit_prefactor,
                            glue_degeneration, is_laurent_polynomial, linear_star_series,
                            partition_stats, principal_gw, principal_pt, principal_pt_displayed,
                            principal_series)
from .stars_complexes import (ChowOneComplex, ComplexRay, Edge, Star, StarDiscreteData,
                              TrivalentNormalization, Vertex, asymptotic_star, discrete_data,
                              is_balanced, is_visible_complex, is_visible_star,
                              multiplicity_and_normalize, stabilize, star_at_vertex)

__version__ = "0.1.0"
