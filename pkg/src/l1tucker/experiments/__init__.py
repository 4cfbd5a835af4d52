"""Experiment harness: data synthesis, corruption models, studies, result I/O."""
from .classification import (
    ClassifyExperimentSpec,
    ImageDataset,
    run_classification,
    run_classification_sweep,
    synthesize_digit_pool,
)
from .idx import IdxFormatError, load_idx_images, load_mnist_dir
from .reconstruction import (
    ReconExperimentSpec,
    corrupt,
    gen_tucker_tensor,
    nse,
    run_reconstruction_sweep,
)
from .results import ResultRow, ResultTable, emit_results

__all__ = [
    "ClassifyExperimentSpec",
    "ImageDataset",
    "IdxFormatError",
    "ReconExperimentSpec",
    "ResultRow",
    "ResultTable",
    "corrupt",
    "emit_results",
    "gen_tucker_tensor",
    "load_idx_images",
    "load_mnist_dir",
    "nse",
    "run_classification",
    "run_classification_sweep",
    "run_reconstruction_sweep",
    "synthesize_digit_pool",
]
