"""svmtrain: offline SVM training harness for the svmcert verifier.

Fits one-versus-one SVM multi-classifiers (linear, polynomial, RBF) on
configurable dataset subsets and exports models in the interchange text
format plus CSV test slices, cross-validating every export against the
verifier's own predictions.
"""

from .datasets import DatasetMissing, load_split
from .export import samples_to_csv, svc_to_interchange
from .train import TrainConfig, TrainResult, train_and_export, verifier_predictions

__version__ = "0.1.0"

__all__ = [
    "DatasetMissing",
    "load_split",
    "samples_to_csv",
    "svc_to_interchange",
    "TrainConfig",
    "TrainResult",
    "train_and_export",
    "verifier_predictions",
]
