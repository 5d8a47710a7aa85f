"""Quantum-kernel SVMs on a dense statevector simulator.

Feature-map circuits (Hadamard layers plus Pauli-string exponentials with a
tunable rotation factor) induce a fidelity kernel that feeds a regularized
dual SVM solver; a classical RBF kernel is included as the baseline.
"""

from .datasets import (
    Dataset,
    PcaTransform,
    apply_pca,
    balanced_subsample,
    fit_pca_2d,
    gen_adhoc_complex,
    gen_xor,
    load_csv,
    prepare_dataset,
    save_csv,
    scale_to_angle_range,
    train_test_split,
)
from .errors import (
    ConfigError,
    DataError,
    GenerationError,
    QksvmError,
    ResourceError,
    TrainingError,
)
from .feature_map import (
    FeatureMapSpec,
    build_feature_state,
    data_map_phi,
    expand_terms,
)
from .kernels import (
    QuantumKernelSpec,
    RbfKernelSpec,
    cross_matrix,
    gram_matrix,
    kernel_spec_from_dict,
    quantum_kernel,
    rbf_kernel,
)
from .simulator import (
    PauliString,
    StateVector,
    apply_hadamard_all,
    apply_pauli_exponential,
    inner_product,
    new_zero_state,
)
from .svm import (
    RegularizationParams,
    SvmModel,
    TrainReport,
    accuracy,
    compute_bias,
    decision_function,
    decision_function_batch,
    fit,
    load_model,
    predict,
    save_model,
    solve_dual,
)

__version__ = "0.1.0"
