"""Binary cubic forms, cubic field enumeration, local monogenicity
obstructions, exact per-discriminant field counts and genus-one curve
searches."""

from .forms import (
    BinaryCubicForm,
    UnimodularAction,
    act,
    canonicalize,
    disc,
    equivalent,
    hessian,
    index_form_of_field,
    is_maximal,
    jacobian_covariant,
    splitting_type,
)
from .enumeration import FieldTable, enumerate_fields, fields_with_discriminant
from .localmono import density_no_obstruction, locally_monogenic, no_local_obstruction, represents_one_at_p
from .quadclass import cft_count_fields, class_group, three_rank
from .sigmasets import SigmaSpec, sigma_members, verify_counts
from .genusone import hasse_candidates, locally_soluble, monogenic_witness, thue_search

__version__ = "0.1.0"

__all__ = [
    "BinaryCubicForm", "UnimodularAction", "act", "canonicalize", "disc", "equivalent",
    "hessian", "index_form_of_field", "is_maximal", "jacobian_covariant", "splitting_type",
    "FieldTable", "enumerate_fields", "fields_with_discriminant",
    "density_no_obstruction", "locally_monogenic", "no_local_obstruction", "represents_one_at_p",
    "cft_count_fields", "class_group", "three_rank",
    "SigmaSpec", "sigma_members", "verify_counts",
    "hasse_candidates", "locally_soluble", "monogenic_witness", "thue_search",
]
