"""Finite laboratory for powerset-enriched monads, Kleisli monoids and exponentiability."""

from .algebra import Algebra, L, check_algebra, test_algebra
from .errors import (CapExceeded, HypothesisUnmet, KleisliLabError, MalformedSurface,
                     MonadMismatch, NoAdjoint, NoClosedForm, NotALattice, NotExponentiable)
from .expo import (adjunction_count, check_couniversal, conv, conv_closed_form, conv_is_algebra,
                   couniversal_search, criterion, dagger_scan, decide, exponential,
                   nbhd_structure)
from .instances import (Filter, FilterMonad, Monad, PowersetMonad, UpFamily, UpSetMonad,
                        VFun, VPowersetMonad, make_monad)
from .kleisli import (KleisliMonoid, box_product, check_monoid, enumerate_monoids,
                      final_structure, hom_set, initial_structure, is_hom)
from .monad import check_all_laws, check_enrichment, check_lax_monoidal, check_monad_laws
from .order import FinMap, FinOrder, FinSet
from .quantale import Quantale, bool2, chain_min, load_quantale, lukasiewicz
from .report import Caps, CheckReport
from .surface import elaborate, encode, load_instance, opens_of, save_instance

test_algebra.__test__ = False

__all__ = [name for name in dir() if not name.startswith("_")]
