"""Iterated wreath products of cyclic groups as labelled tree portraits.

Membership tests for derived subgroups of Sylow 2-subgroups of symmetric and
alternating groups, and a constructive solver writing every derived element
as a single commutator.
"""
from wrcomm._backend import BACKEND
from wrcomm.errors import (GuardExceeded, InvariantViolation, NotInSubgroupError, ParseError,
                           SignatureError, WrcommError)
from wrcomm.groups import (GroupId, GroupKind, is_in_Bk_derived, is_in_Gk, is_in_Gk_derived,
                           is_in_wreath_derived, sample_derived, sample_element,
                           standard_generators)
from wrcomm.solver import (CommutatorWitness, solve, solve_Bk_derived, solve_cyclic_tower,
                           solve_Gk_derived)
from wrcomm.tree import (AritySignature, TreeAut, commutator, conjugate, identity, inverse,
                         level_profile, multiply, random_element, signature)
from wrcomm.wrformat import export_witness, import_witness, parse_element, serialize_element

__all__ = [
    "BACKEND", "AritySignature", "CommutatorWitness", "GroupId", "GroupKind", "GuardExceeded",
    "InvariantViolation", "NotInSubgroupError", "ParseError", "SignatureError", "TreeAut",
    "WrcommError", "commutator", "conjugate", "export_witness", "identity", "import_witness",
    "inverse", "is_in_Bk_derived", "is_in_Gk", "is_in_Gk_derived", "is_in_wreath_derived",
    "level_profile", "multiply", "parse_element", "random_element", "sample_derived",
    "sample_element", "serialize_element", "signature", "solve", "solve_Bk_derived",
    "solve_Gk_derived", "solve_cyclic_tower", "standard_generators",
]
