"""Hybrid quantum temporal convolution toolkit (python surface).

Thin wrappers over the C++ core: statevector primitives, the shared-circuit
model operations, data generators and metrics. See the package README for the
command-line interface that drives full experiments.
"""

from hqtcn._core import (
    angle_embed,
    apply_gate,
    auroc,
    basis_state,
    expectation_pauli_z,
    generate_narma,
    make_rotation,
    model_param_count,
    mse,
    narma10,
    partial_trace,
    qcnn_baseline_param_count,
    qcnn_forward,
    qcnn_gradient,
    quantum_param_count,
    receptive_field,
    window_indices,
)

__all__ = [
    "angle_embed",
    "apply_gate",
    "auroc",
    "basis_state",
    "expectation_pauli_z",
    "generate_narma",
    "make_rotation",
    "model_param_count",
    "mse",
    "narma10",
    "partial_trace",
    "qcnn_baseline_param_count",
    "qcnn_forward",
    "qcnn_gradient",
    "quantum_param_count",
    "receptive_field",
    "window_indices",
]

__version__ = "0.1.0"
