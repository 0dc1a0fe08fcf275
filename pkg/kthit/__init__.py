from kthit.decomposition import RootDecomposition, bed_at_most, bed_value, compute_bed_root
from kthit.graph import Graph
from kthit.kernel import Kernelizer, ModulatorInstance, kernelize
from kthit.solver import EktSolver, ExtendedInstance, SolveBudget, solve_ekt
