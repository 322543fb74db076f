"""
redei-blocks - exact verification toolkit for 2-blocks with minimal nonabelian defect groups
"""

__version__ = "0.1.0"

from .nf_group import GroupParams, NfElement, AbelianType
from .generic_group import CayleyGroup, SubgroupRef, build_nf_group, build_a4_semidirect
from .morphisms import Automorphism, automorphism_group, order3_automorphism
from .subsections import SubsectionSet, t_set_rs1, t_set_req_s
from .invariants import BlockInvariants, invariants_rs1, invariants_req_s_special, invariants_eB3
from .intforms import IntMatrix, QuadForm, smith_normal_form, reduce_qf
from .decomp import CycloColumnFamily, SearchCaps, SearchResult, exclusion_search_r2
from .checks import CheckReport, run_check, verify_all, list_checks
from .errors import ToolkitError, InvalidParametersError, CapExceededError, UnknownCheckError
from .server import server

__all__ = [
    "__version__",
    "GroupParams",
    "NfElement",
    "AbelianType",
    "CayleyGroup",
    "SubgroupRef",
    "build_nf_group",
    "build_a4_semidirect",
    "Automorphism",
    "automorphism_group",
    "order3_automorphism",
    "SubsectionSet",
    "t_set_rs1",
    "t_set_req_s",
    "BlockInvariants",
    "invariants_rs1",
    "invariants_req_s_special",
    "invariants_eB3",
    "IntMatrix",
    "QuadForm",
    "smith_normal_form",
    "reduce_qf",
    "CycloColumnFamily",
    "SearchCaps",
    "SearchResult",
    "exclusion_search_r2",
    "CheckReport",
    "run_check",
    "verify_all",
    "list_checks",
    # Errors
    "ToolkitError",
    "InvalidParametersError",
    "CapExceededError",
    "UnknownCheckError",
    "server",
]
