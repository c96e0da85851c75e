"""File formats: result CSVs, PGM images, MovieLens ratings, triplets, sensing problems."""
from pathlib import Path
from typing import Optional, Tuple, Union
import logging
import re

import numpy as np
import pandas as pd

from src.core.exceptions import DatasetMissing, DimensionMismatch, InvalidParameter
from src.cs.models import SensingProblem, WeightVector
from src.harness.models import RatingsDataset
from src.mc.models import MaskedMatrix, MaskSet

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]
FLOAT_FORMAT = "%.17g"
MOVIELENS_COLUMNS = ["user", "item", "rating", "timestamp"]


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    """Write a result frame as CSV with a header row and 17 significant digits."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    logger.debug(f"wrote {len(frame)} rows to {path}")
    return path


def read_frame(path: PathLike) -> pd.DataFrame:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file: {path}")
    return pd.read_csv(path)


# ---------------------------------------------------------------- images

def _pgm_header(raw: bytes) -> Tuple[int, int, int, int]:
    """Parse width, height, maxval and the offset of the pixel data."""
    tokens = []
    pos = 0
    comment = re.compile(rb"#[^\n]*\n?")
    while len(tokens) < 4:
        while pos < len(raw) and raw[pos:pos + 1].isspace():
            pos += 1
        match = comment.match(raw, pos)
        if match:
            pos = match.end()
            continue
        start = pos
        while pos < len(raw) and not raw[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise InvalidParameter("truncated PGM header")
        tokens.append(raw[start:pos])
    if tokens[0] != b"P5":
        raise InvalidParameter(f"not a binary PGM file (magic {tokens[0]!r})")
    width, height, maxval = (int(t) for t in tokens[1:])
    # exactly one whitespace byte separates the header from the data
    return width, height, maxval, pos + 1


def read_pgm(path: PathLike) -> np.ndarray:
    """Read a binary (P5) PGM image normalized to [0, 1]."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such image: {path}")
    raw = path.read_bytes()
    width, height, maxval, offset = _pgm_header(raw)
    dtype = np.dtype(">u2") if maxval > 255 else np.dtype(np.uint8)
    pixels = np.frombuffer(raw, dtype=dtype, count=width * height, offset=offset)
    return pixels.reshape(height, width).astype(np.float64) / maxval


def write_pgm(path: PathLike, image: np.ndarray) -> Path:
    """Write an image with values in [0, 1] (clipped) as 8-bit binary PGM."""
    image = np.asarray(image, dtype=np.float64)
    if image.ndim != 2:
        raise DimensionMismatch(f"an image must be two-dimensional, got shape {image.shape}")
    pixels = np.round(np.clip(image, 0.0, 1.0) * 255.0).astype(np.uint8)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = f"P5\n{image.shape[1]} {image.shape[0]}\n255\n".encode("ascii")
    path.write_bytes(header + pixels.tobytes())
    return path


def write_difference_map(path: PathLike, difference: np.ndarray) -> Path:
    """Write |difference| scaled linearly so that its maximum maps to 255."""
    difference = np.abs(np.asarray(difference, dtype=np.float64))
    peak = float(difference.max()) if difference.size else 0.0
    return write_pgm(path, difference / peak if peak > 0 else difference)


# ---------------------------------------------------------------- ratings

def load_movielens(path: PathLike) -> RatingsDataset:
    """
    Load MovieLens ratings, detecting the format from the first line.

    ``user::item::rating::timestamp`` (ratings.dat, 1M/10M) and tab-separated
    ``user item rating timestamp`` (u.data, 100K) are accepted; timestamps
    are dropped.

    Raises:
        DatasetMissing: if the file does not exist
    """
    path = Path(path)
    if not path.is_file():
        raise DatasetMissing(f"MovieLens ratings not found at {path}")
    with path.open("r", encoding="latin-1") as fh:
        first = fh.readline()
    if "::" in first:
        frame = pd.read_csv(path, sep="::", engine="python", header=None, names=MOVIELENS_COLUMNS)
    else:
        frame = pd.read_csv(path, sep="\t", header=None, names=MOVIELENS_COLUMNS)
    logger.info(f"loaded {len(frame)} ratings from {path}")
    return RatingsDataset.from_frame(frame.drop(columns="timestamp"))


# ---------------------------------------------------------------- triplets

def read_triplets(path: PathLike, shape: Optional[Tuple[int, int]] = None) -> MaskedMatrix:
    """
    Read ``row,col,value`` triplets (0-based indices, header row) as observations.

    The matrix shape defaults to (max row + 1, max col + 1).
    """
    frame = read_frame(path)
    missing = {"row", "col", "value"} - set(frame.columns)
    if missing:
        raise InvalidParameter(f"triplet file {path} lacks columns {sorted(missing)}")
    rows = frame["row"].to_numpy(dtype=np.int64)
    cols = frame["col"].to_numpy(dtype=np.int64)
    if shape is None:
        if not len(frame):
            raise InvalidParameter("cannot infer the shape of an empty triplet file")
        shape = (int(rows.max()) + 1, int(cols.max()) + 1)
    return MaskedMatrix(MaskSet(shape[0], shape[1], rows, cols), frame["value"].to_numpy(dtype=np.float64))


def write_triplets(path: PathLike, obs: MaskedMatrix) -> Path:
    frame = pd.DataFrame({"row": obs.mask.rows, "col": obs.mask.cols, "value": obs.values})
    return write_frame(frame, path)


def write_matrix(path: PathLike, matrix: np.ndarray) -> Path:
    """Dense matrix as CSV with columns c_0..c_{n-1}."""
    matrix = np.asarray(matrix, dtype=np.float64)
    frame = pd.DataFrame(matrix, columns=[f"c_{j}" for j in range(matrix.shape[1])])
    return write_frame(frame, path)


# ---------------------------------------------------------------- sensing problems

def read_problem(path: PathLike) -> SensingProblem:
    """Read a problem CSV with columns a_0..a_{N-1}, y (one row per measurement)."""
    frame = read_frame(path)
    if "y" not in frame.columns:
        raise InvalidParameter(f"problem file {path} lacks the y column")
    a_columns = sorted(
        (c for c in frame.columns if re.fullmatch(r"a_\d+", str(c))),
        key=lambda c: int(str(c)[2:]),
    )
    if not a_columns:
        raise InvalidParameter(f"problem file {path} has no a_j columns")
    return SensingProblem(A=frame[a_columns].to_numpy(dtype=np.float64), y=frame["y"].to_numpy(dtype=np.float64))


def write_problem(path: PathLike, problem: SensingProblem) -> Path:
    frame = pd.DataFrame(problem.A, columns=[f"a_{j}" for j in range(problem.N)])
    frame["y"] = problem.y
    return write_frame(frame, path)


def read_vector(path: PathLike, column: str) -> np.ndarray:
    """Read a single-column vector file; the column is ``column`` or the first one."""
    frame = read_frame(path)
    if column in frame.columns:
        return frame[column].to_numpy(dtype=np.float64)
    return frame.iloc[:, 0].to_numpy(dtype=np.float64)


def read_weights(path: PathLike) -> WeightVector:
    return WeightVector(read_vector(path, "w"))


def write_vector(path: PathLike, values: np.ndarray, column: str) -> Path:
    return write_frame(pd.DataFrame({column: np.asarray(values, dtype=np.float64)}), path)
