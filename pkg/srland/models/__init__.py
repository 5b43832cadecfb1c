# models package
from .schemas import Manifest, RunConfig, RunRecord
from .types import (DensityProfile, DiffusionModel, GroundTruth, ImageCube, LabeledSet, LabelMap,
                    MarkovChain, ModeSet, SparseAffinity)
