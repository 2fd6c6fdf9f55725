"""
Graph convolutional KERNel Laboratory LIbrary
===

Renormalized Laplacian kernels, their smoothing behavior, block model
datasets and small node classifiers trained on fixed kernels.
"""

__version__ = "0.1.0"

from . import _config
from . import errors
from . import dtypes
from . import math
from . import kernels
from . import synth
from . import models
from . import suite
from . import bench
from . import utils
from . import workflows


# For convenience, some functions and classes are imported directly in here

from .dtypes import Graph, DegreeVector, Dataset, Split
from .kernels import KernelSpec, parse_kernel, build_kernel, detect_self_smoothing
from .synth import SbmConfig, generate, get_preset
from .models import ModelConfig, TrainReport, train
