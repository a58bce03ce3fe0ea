from .check import AxiomReport, AxiomResult, axiom_discrepancy, check_axioms
from .counterexamples import reproduce_counterexamples
