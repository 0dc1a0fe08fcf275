from kthit.reduction.cnf import CnfFormula, ReductionOutput, reduce_cnf_td, reduce_cnf_ved, satisfiable
from kthit.reduction.gadget import ABGadget, GraphBuilder, build_ab_gadget, find_anticomplete_pair, has_stable_cutset
