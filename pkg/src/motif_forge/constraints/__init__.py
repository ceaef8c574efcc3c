"""Hard constraints, desirability functions and their declarative specs."""
from .base import (Desirability, HardConstraintBundle, MotifPredicate, PairPredicate,
                   PairwiseConstraint, SetPredicate, as_desirability, as_motif_predicate,
                   as_pair_predicate, as_set_predicate, compose_desirabilities, fold_pairwise,
                   lift_motif_to_desirability, lift_pairwise_to_desirability)
from .catalogue import *  # noqa: F401,F403
from .masks import (Mask, build_mask_from_signal, points_mask, read_mask_csv, region_mask,
                    soften_mask)
from .specs import KINDS, ConstraintSpec, Fragment, assemble, build
