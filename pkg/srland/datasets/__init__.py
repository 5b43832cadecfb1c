# datasets package
from .npy import load_npy_cube, load_npy_labels, write_cube, write_labels, write_npy
from .synthetic import synthesize_scene
