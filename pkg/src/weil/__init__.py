"""Exact computations with Weil algebras: presentations, tensor products,
equalizers and finite limits, fibered tensors, jets of smooth maps and the
relative prolongation of trivial bundles."""

from .algebra import (AlgebraHom, Element, NotAHom, NotInMaximalIdeal, NotWeil, Presentation,
                      RelationViolated, WeilAlgebra, WeilError, aug_hom, augment, build_weil_algebra,
                      compose, hom_from_generator_images, identity_hom, multiply, nilpotency_index,
                      parse_presentation, reals, tensor, tensor_assoc, tensor_hom, tensor_infinity,
                      weil_algebra)
from .bundles import (FiberedProlongation, IteratedProlongationSpace, TrivialBundleModel,
                      euclidean_check, fibered_prolong, iterated_prolongation, m_microlinearity_check,
                      weil_exponentiability_check)
from .category import (Cone, Diagram, LimitResult, check_fibered_assoc, clear_caches, equalizer, fibered_tensor,
                       finite_limit, lim_fibered_comparison, product_w)
from .expr import Expr, parse_expr
from .parsing import ParseError
from .prolongation import (DomainError, ModeError, WPoint, eval_jet, prolong_map, prolongation_space,
                           taylor_coefficients, w_point)

__version__ = "0.1.0"
