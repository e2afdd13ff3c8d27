"""Desk-scale simulator for a (t,n)-threshold quantum secure multiparty
summation protocol: prime-field secret sharing, a qudit state-vector
engine, a protocol orchestrator, and an adversary harness.
"""
from .zmod import FieldElement, lagrange_coefficient, smallest_valid_prime
from .shamir import (
    Polynomial,
    Share,
    Shadow,
    add_shares,
    compute_shadow,
    generate_shares,
    reconstruct,
)
from .qudit import (
    MeasurementOutcome,
    QuditState,
    analytic_post_transform_state,
    apply_iqft,
    apply_qft,
    apply_shift,
    measure_all,
    prepare_ghz,
    sample_counts,
)
from .protocol import ProtocolTranscript, RunConfig, aggregate, run_protocol
from .adversary import (
    AttackReport,
    collusion_inference,
    intercept_and_measure,
    intercept_resend,
)

__version__ = "0.1.0"

__all__ = [
    "FieldElement",
    "lagrange_coefficient",
    "smallest_valid_prime",
    "Polynomial",
    "Share",
    "Shadow",
    "add_shares",
    "compute_shadow",
    "generate_shares",
    "reconstruct",
    "MeasurementOutcome",
    "QuditState",
    "analytic_post_transform_state",
    "apply_iqft",
    "apply_qft",
    "apply_shift",
    "measure_all",
    "prepare_ghz",
    "sample_counts",
    "ProtocolTranscript",
    "RunConfig",
    "aggregate",
    "run_protocol",
    "AttackReport",
    "collusion_inference",
    "intercept_and_measure",
    "intercept_resend",
]
