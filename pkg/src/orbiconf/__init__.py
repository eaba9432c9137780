"""Exact homology of configuration spaces of global-quotient orbifolds."""

from .chains import ChainComplex, HomologyBasis, HomologyReport
from .comma import (ActionGroupoid, CommaCategory, ConfGroupoid, FiniteGroupoid, ForgetfulFunctor, SmallCategory,
                    comma_category, comma_report, conf_groupoid, skeleton, verify_comma_invariance)
from .config import (Coefficients, CompactSupportPair, DeletedProductComplex, chi_c_report, compact_support_pair,
                     conf_homology, deleted_product, stratum_model)
from .errors import CapacityError, InputError, NotRegularError, OrbiconfError, PreconditionError
from .groups import (Character, ComplexAction, FiniteGroup, WreathProduct, isotypic_chain_complex,
                     quotient_complex, wreath_character, wreath_product)
from .linalg import SmithForm, SparseMatrix, kernel_basis, rank_rational, smith_normal_form
from .maps import (InducedMap, MapContext, duality_check, forget_map, stabilisation_map, transfer, verify_dold,
                   verify_stability, verify_transfer_degree)
from .orbifold import (GlobalQuotientOrbifold, StabilisationData, block_factorisation_holds, orientation_character,
                       singular_locus)
from .simplicial import (SimplicialComplex, barycentric_subdivide, face_poset, homology, order_complex,
                         product_complex, subdivide)

__version__ = "0.1.0"
