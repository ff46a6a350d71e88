"""Base sizes of finite permutation groups: stabiliser chains, finite fields,
classical matrix groups, fixed point ratio sums and random bases."""

from .perm import Perm
from .permcore import PermGroup, schreier_sims

__all__ = ["Perm", "PermGroup", "schreier_sims"]
