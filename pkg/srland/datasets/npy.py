"""
NPY v1.0 readers and writers for image cubes, ground truth and label maps.
"""
import logging
import os
from typing import Union

import numpy as np
from numpy.lib import format as npy_format

from srland.exceptions import DataError, DataFormatError, ShapeError
from srland.models.types import GroundTruth, ImageCube

logger = logging.getLogger(__name__)

PathLike = Union[str, os.PathLike]


def read_npy(path: PathLike) -> np.ndarray:
    if not os.path.exists(path):
        raise DataFormatError(f"input file not found: {path}")
    with open(path, 'rb') as f:
        try:
            version = npy_format.read_magic(f)
        except ValueError as e:
            raise DataFormatError(f"{path}: not an NPY file ({e})") from e
        try:
            if version == (1, 0):
                shape, fortran_order, dtype = npy_format.read_array_header_1_0(f)
            elif version == (2, 0):
                shape, fortran_order, dtype = npy_format.read_array_header_2_0(f)
            else:
                raise DataFormatError(f"{path}: unsupported NPY version {version}")
        except ValueError as e:
            raise DataFormatError(f"{path}: malformed NPY header ({e})") from e
        if dtype.hasobject:
            raise DataFormatError(f"{path}: object arrays are not supported")
        count = int(np.prod(shape)) if shape else 1
        payload = f.read(count * dtype.itemsize)
        if len(payload) != count * dtype.itemsize:
            raise DataFormatError(f"{path}: truncated payload")
    order = 'F' if fortran_order else 'C'
    return np.frombuffer(payload, dtype=dtype).reshape(shape, order=order)


def load_npy_cube(path: PathLike) -> ImageCube:
    """Read an (n1, n2, D) real array into an ImageCube of float64 values."""
    values = read_npy(path)
    if values.ndim != 3:
        raise ShapeError(f"{path}: expected rank 3 (n1, n2, D), got shape {values.shape}")
    if not (np.issubdtype(values.dtype, np.floating) or np.issubdtype(values.dtype, np.integer)):
        raise DataFormatError(f"{path}: element type {values.dtype} is not real")
    values = values.astype(np.float64)
    bad = np.flatnonzero(~np.isfinite(values))
    if bad.size:
        row, col, band = np.unravel_index(bad[0], values.shape)
        raise DataError(
            f"{path}: non-finite value at flat index {int(bad[0])} (row {row}, col {col}, band {band})")
    cube = ImageCube.from_array(values)
    logger.info("loaded cube %s: %dx%d pixels, %d bands", path, cube.height, cube.width, cube.bands)
    return cube


def load_npy_labels(path: PathLike) -> GroundTruth:
    values = read_npy(path)
    if values.ndim != 2:
        raise ShapeError(f"{path}: expected rank 2 (n1, n2), got shape {values.shape}")
    if not (np.issubdtype(values.dtype, np.integer) or np.issubdtype(values.dtype, np.floating)):
        raise DataFormatError(f"{path}: element type {values.dtype} is not numeric")
    return GroundTruth.from_array(values)


def write_npy(path: PathLike, array: np.ndarray) -> None:
    """Write a C-ordered little-endian NPY v1.0 file."""
    array = np.ascontiguousarray(array)
    if array.dtype.byteorder == '>':
        array = array.astype(array.dtype.newbyteorder('<'))
    with open(path, 'wb') as f:
        npy_format.write_array(f, array, version=(1, 0), allow_pickle=False)


def write_cube(path: PathLike, cube: ImageCube) -> None:
    write_npy(path, cube.as_array())


def write_labels(path: PathLike, gt: GroundTruth) -> None:
    write_npy(path, gt.labels.reshape(gt.height, gt.width))
