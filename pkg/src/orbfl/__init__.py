"""Exact-arithmetic orbital integrals for pairs of quadratic embeddings over
F_q((t)): both sides of the matching identity, the derivative identity in the
odd-valuation regime, and the maximal-order reduction to rank 2 over L."""

from .closed import (closed_form_analytic, closed_form_geometric, verify_afl,
                     verify_fl)
from .errors import (DegenerateInputError, GuardError,
                     InsufficientPrecisionError, OrbflError, RelationError,
                     UnsupportedError)
from .instances import OrbitInstance, dump_instance, generate, load_instance
from .lattice import Lattice, enumerate_between, index_exp
from .orbital import (HeckeFunction, OrbitalPolynomial, hecke_eval,
                      orbital_analytic, orbital_geometric, transfer_exponent)
from .pairs import (EmbeddingPair, build_matched_partner, build_pair,
                    embed_partner_from_wz, geometric_pair, matching_invariant,
                    regularity, verify_base_change)
from .quadratic import QuadAlg, QuadElem
from .reduction import (ReducedPair, reduced_wz, shift_pair,
                        verify_orbit_reduction)
from .series import Series

__version__ = "1.0.0"
