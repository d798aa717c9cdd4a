"""Dense superoperator laboratory: Kraus channels, the QCC evaluator and EAOQEC pipelines."""

from .channels import (
    KrausChannel,
    canonical_kraus,
    check_density_matrix,
    compose,
    partial_trace_B,
    partial_trace_channel,
    random_density_matrix,
    random_pure_state,
    trace_norm,
)
from .eaoqec import EaoqecSpec, eaoqec_pipeline, eaoqec_stages, stage_agreement
from .instances import (
    CheckResult,
    eaoqec_instance,
    eaqec_instance,
    oqec_instance,
    qec_instance,
    reduction_suite,
)
from .qcc import LinkingMap, QccResult, qcc_check, qcc_inaccuracy, subsume_links

__all__ = [
    "CheckResult",
    "EaoqecSpec",
    "KrausChannel",
    "LinkingMap",
    "QccResult",
    "canonical_kraus",
    "check_density_matrix",
    "compose",
    "eaoqec_instance",
    "eaoqec_pipeline",
    "eaoqec_stages",
    "eaqec_instance",
    "oqec_instance",
    "partial_trace_B",
    "partial_trace_channel",
    "qcc_check",
    "qcc_inaccuracy",
    "qec_instance",
    "random_density_matrix",
    "random_pure_state",
    "reduction_suite",
    "stage_agreement",
    "subsume_links",
    "trace_norm",
]
