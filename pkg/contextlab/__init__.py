"""
Fully contextual correlations

Encodes two contextuality inequalities, an eight dimensional KCBS-twin test and a four
dimensional ten-projector test, whose quantum value on a suitable state reaches the
bound of any theory respecting exclusivity. The package checks their projector and Pauli
identities, evaluates them under rotation of the state, computes the classical and
generalized-probabilistic bounds from the orthogonality graphs and simulates their
NMR readout.
"""
from contextlab._internal.error import ContextLabError
from contextlab._internal.hilbert import (DensityOperator, StateVector, embed_rotation,
                                          expectation, fidelity, projector_from_vector,
                                          tensor_product)
from contextlab._internal.pauli import (PauliPolynomial, PauliString, aggregate_observable,
                                        decompose, reconstruct)
from contextlab._internal.scenario import (ContextualityScenario, SweepRecord, evaluate,
                                           evaluate_via_pauli, fully_contextual_c_scenario,
                                           kcbs_twin_scenario, load_scenario, rotation_sweep,
                                           validate_exclusivity)
from contextlab._internal.graphbounds import (BoundReport, OrthogonalityGraph, build_graph,
                                              fractional_packing_number, independence_number,
                                              maximal_cliques)
from contextlab._internal.nmrsim import (GateStep, MeasurementMapping, PseudopureModel,
                                         builtin_mappings, compose_unitary,
                                         measure_inequality_nmr, pps_state)

__all__ = [
    "ContextLabError",
    "StateVector", "DensityOperator", "tensor_product", "projector_from_vector",
    "embed_rotation", "expectation", "fidelity",
    "PauliString", "PauliPolynomial", "decompose", "reconstruct", "aggregate_observable",
    "ContextualityScenario", "SweepRecord", "kcbs_twin_scenario", "fully_contextual_c_scenario",
    "validate_exclusivity", "evaluate", "evaluate_via_pauli", "rotation_sweep", "load_scenario",
    "OrthogonalityGraph", "BoundReport", "build_graph", "independence_number", "maximal_cliques",
    "fractional_packing_number",
    "GateStep", "MeasurementMapping", "PseudopureModel", "compose_unitary", "builtin_mappings",
    "pps_state", "measure_inequality_nmr",
]
