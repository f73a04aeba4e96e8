"""Angular-margin losses: single-center AAM-Softmax and its sub-center form."""
from .aggregate import DegenerateVectorError, aggregate_similarity, normalize
from .bank import SubCenterBank
from .aam import LossConfig, LossOutput, aam_softmax_loss, subcenter_loss
from .gradcheck import loss_backward_check

__all__ = [
    "DegenerateVectorError",
    "normalize",
    "aggregate_similarity",
    "SubCenterBank",
    "LossConfig",
    "LossOutput",
    "aam_softmax_loss",
    "subcenter_loss",
    "loss_backward_check",
]
