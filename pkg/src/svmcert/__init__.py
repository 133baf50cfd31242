"""svmcert: abstract-interpretation robustness certification for SVMs.

Sound verification of SVM classifiers under adversarial perturbations,
built on two floating-point-sound numeric domains: intervals and
reduced affine forms.  For linear classifiers the interval verifier is
also complete and synthesises concrete counterexample pairs.
"""

from ._core import BACKEND_NAME
from .abstract import (
    AbstractVerdict,
    abstract_decision_interval,
    abstract_decision_raf,
    classify_hybrid,
    counterexample_linear,
    sign_sharp,
)
from .interval import BOTTOM, Interval
from .multiclass import VoteRange, abstract_votes, m_ovo_sharp, verify_multiclass
from .perturb import FrameSpec, LinfSpec, frame_region, linf_region, region_to_raf
from .raf import RAF, BilinearRange, bilinear_range, raf_exp, raf_mul, raf_pow, to_interval
from .svm_model import Kernel, SvmModel, load_model, parse_model, predict_ovo, serialize_model

__version__ = "0.1.0"

__all__ = [
    "BACKEND_NAME",
    "__version__",
    "AbstractVerdict",
    "abstract_decision_interval",
    "abstract_decision_raf",
    "classify_hybrid",
    "counterexample_linear",
    "sign_sharp",
    "BOTTOM",
    "Interval",
    "VoteRange",
    "abstract_votes",
    "m_ovo_sharp",
    "verify_multiclass",
    "FrameSpec",
    "LinfSpec",
    "frame_region",
    "linf_region",
    "region_to_raf",
    "RAF",
    "BilinearRange",
    "bilinear_range",
    "raf_exp",
    "raf_mul",
    "raf_pow",
    "to_interval",
    "Kernel",
    "SvmModel",
    "load_model",
    "parse_model",
    "predict_ovo",
    "serialize_model",
]
