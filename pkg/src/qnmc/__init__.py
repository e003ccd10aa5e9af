"""Quantum-inspired nearest mean classification."""

from .classifier import (
    ClassicalModel,
    QuantumModel,
    TrainingError,
    classify_nmc,
    classify_qnmc,
    predict_nmc,
    predict_qnmc,
    train_nmc,
    train_qnmc,
    verify_centroid_inequality,
)
from .datagen import (
    Dataset,
    RescaleGrid,
    SplitSpec,
    gen_balance,
    gen_banana,
    gen_gaussian,
    gen_moon,
    load_csv,
    load_manifest,
    rescale,
    split,
)
from .encoding import (
    DensityPattern,
    EncodingError,
    EncodingKind,
    Pattern,
    encode,
    encode_dataset,
    encode_norm_augmented,
    encode_stereo_2d,
    encode_stereo_projector,
    recover_norm,
)
from .experiment import ExperimentConfig, run_experiment, run_sweep
from .hermitian import (
    ContractError,
    DensityMatrix,
    eigenvalues_hermitian,
    eigh_hermitian,
    purity,
    trace_distance,
)
from .metrics import aggregate, class_indices, confusion, summarize_runs
from .report import emit_report

__version__ = "0.1.0"
