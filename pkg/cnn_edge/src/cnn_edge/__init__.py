"""Edge-probability network for pectoral boundary detection.

A pared-down VGG16 (four stages, no fully-connected layers) with side
outputs after stages 2 and 4, trained with a class-balanced boundary loss
and exported as EPM1 probability rasters for the segmentation engine.
"""

from .augment import augment
from .errors import CnnEdgeError, DegenerateLabels, InsufficientData, ShapeError
from .export import export_maps
from .loss import LossConfig, balanced_loss, balanced_loss_grad, class_weights
from .model import EdgeNet, build_net, parameter_count
from .train import TrainConfig, load_corpus, train

__version__ = "0.1.0"
