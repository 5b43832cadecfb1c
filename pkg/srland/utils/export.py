"""
Artifact writers for label maps: NPY grid, PPM render and CSV listing.
"""
import os
from typing import Dict

import numpy as np
import pandas as pd
from PIL import Image

from srland.datasets.npy import write_npy
from srland.models.types import LabelMap

# Label 0 renders black; labels 1..16 use these colours, cycling beyond 16.
PALETTE = np.array([
    (230, 25, 75), (60, 180, 75), (255, 225, 25), (0, 130, 200),
    (245, 130, 48), (145, 30, 180), (70, 240, 240), (240, 50, 230),
    (210, 245, 60), (250, 190, 212), (0, 128, 128), (220, 190, 255),
    (170, 110, 40), (255, 250, 200), (128, 0, 0), (170, 255, 195),
], dtype=np.uint8)


def colorize(grid: np.ndarray) -> np.ndarray:
    grid = np.asarray(grid, dtype=np.int64)
    rgb = PALETTE[(np.maximum(grid, 1) - 1) % len(PALETTE)]
    rgb[grid <= 0] = 0
    return rgb


def write_label_npy(path: os.PathLike, label_map: LabelMap) -> None:
    write_npy(path, label_map.as_grid().astype(np.int64))


def write_label_ppm(path: os.PathLike, label_map: LabelMap) -> None:
    Image.fromarray(colorize(label_map.as_grid())).save(path, format='PPM')


def label_frame(label_map: LabelMap) -> pd.DataFrame:
    rows, cols = np.divmod(np.arange(label_map.labels.size), label_map.width)
    return pd.DataFrame({'row': rows, 'col': cols, 'label': label_map.labels,
                         'provenance': label_map.provenance.astype(str)})


def write_label_csv(path: os.PathLike, label_map: LabelMap) -> None:
    label_frame(label_map).to_csv(path, index=False)


def dump_arrays(directory: os.PathLike, arrays: Dict[str, np.ndarray]) -> Dict[str, str]:
    os.makedirs(directory, exist_ok=True)
    written = {}
    for name, arr in arrays.items():
        path = os.path.join(directory, f"{name}.npy")
        write_npy(path, np.asarray(arr))
        written[name] = path
    return written
