"""Knot Floer complexes CFK^infty of (1,1)-knots from genus one doubly pointed diagrams."""

from .diagram import (Diagram11, DiagramError, NotEmbedded, NotTransverse, NotS3,
                      BasepointOnCurve, SchemaError, DiagramSyntaxError, Generator,
                      intersections, validate, ensure_valid, parse_diagram, load_diagram,
                      serialize_diagram)
from .domains import (CellComplex, DomainChain, WindowTooSmall, NotSameAlphaLine,
                      build_arrangement, winding_domain, basepoint_multiplicities,
                      maslov_index, connecting_domain, periodic_domain)
from .complex import (Arrow, CFKComplex, StabilizationFailure, AsymmetricGradings,
                      AmbiguousShift, NotS3Homology, GradingMismatch, enumerate_disks,
                      alexander_gradings, maslov_gradings, build_complex, d_squared_check,
                      simplify_basis, decompose, direct_sum, make_box, mirror)
from .invariants import (LaurentPolynomial, PLFunction, NormalizationError, NonIntegerSlope,
                         hfk_ranks, alexander_polynomial, determinant, upsilon, tau,
                         is_convex, is_thin, lspace_obstructions, fox_milnor_square_test)
from .families import (FamilySpec, UnknownName, build_family, build_test_knot,
                       oracle_hfk, oracle_alexander, oracle_determinant)

__version__ = "0.1.0"
