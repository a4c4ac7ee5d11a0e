"""
Dataset construction: random generators, Matrix Market files and IDX image files.

Every loader returns a dense float64 matrix; sparse inputs are densified.
"""
import os
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IdxFormatError, InvalidArgumentError, MatrixMarketParseError

GENERATOR_KINDS = ("boolean", "gaussian", "uniform")
IDX3_UBYTE_MAGIC = 0x00000803


@dataclass(frozen=True)
class Generator:
    kind: str
    rows: int
    cols: int
    seed: int = 0


@dataclass(frozen=True)
class MatrixMarket:
    path: Path


@dataclass(frozen=True)
class IdxImages:
    path: Path
    max_images: int


@dataclass(frozen=True)
class DatasetSpec:
    """Named dataset source.

    ``rank_limit`` (exclusive) caps the ranks a sweep will request on this dataset.
    """
    name: str
    source: object
    rank_limit: int | None = None


def generate(kind, rows, cols, seed=0):
    if kind not in GENERATOR_KINDS:
        raise InvalidArgumentError(f"unknown generator kind {kind!r}")
    if rows < 1 or cols < 1:
        raise InvalidArgumentError(f"generator dims must be >= 1, got {rows}x{cols}")
    rng = np.random.default_rng(seed)
    if kind == "boolean":
        return rng.integers(0, 2, size=(rows, cols)).astype(np.float64)
    if kind == "gaussian":
        return rng.standard_normal((rows, cols))
    return rng.random((rows, cols))


@dataclass(frozen=True)
class MatrixMarketFile:
    rows: int
    cols: int
    symmetry: str
    stored_entries: int
    row_idx: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def to_dense(self):
        out = np.zeros((self.rows, self.cols))
        np.add.at(out, (self.row_idx, self.col_idx), self.values)
        if self.symmetry == "symmetric":
            off = self.row_idx != self.col_idx
            np.add.at(out, (self.col_idx[off], self.row_idx[off]), self.values[off])
        return out


def parse_matrix_market(path):
    """Parse a real coordinate Matrix Market file without densifying it."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Matrix Market file not found: {path}")

    with open(path, "r") as fh:
        header = fh.readline()
        tokens = header.lower().split()
        if len(tokens) != 5 or tokens[0] != "%%matrixmarket" or tokens[1] != "matrix":
            raise MatrixMarketParseError(path, 1, f"bad header {header.strip()!r}")
        fmt, field, symmetry = tokens[2:]
        if fmt != "coordinate":
            raise MatrixMarketParseError(path, 1, f"unsupported format {fmt!r}")
        if field not in ("real", "integer"):
            raise MatrixMarketParseError(path, 1, f"non-real field {field!r}")
        if symmetry not in ("general", "symmetric"):
            raise MatrixMarketParseError(path, 1, f"unsupported symmetry {symmetry!r}")

        lineno = 1
        size = None
        for line in fh:
            lineno += 1
            stripped = line.strip()
            if stripped and not stripped.startswith("%"):
                size = stripped.split()
                break
        if size is None:
            raise MatrixMarketParseError(path, lineno, "missing size line")
        try:
            rows, cols, nnz = (int(t) for t in size)
        except ValueError:
            raise MatrixMarketParseError(path, lineno, f"bad size line {' '.join(size)!r}")
        if rows < 1 or cols < 1 or nnz < 0:
            raise MatrixMarketParseError(path, lineno, f"invalid dimensions {rows} {cols} {nnz}")
        if symmetry == "symmetric" and rows != cols:
            raise MatrixMarketParseError(path, lineno, "symmetric matrix must be square")

        ri = np.empty(nnz, dtype=np.int64)
        ci = np.empty(nnz, dtype=np.int64)
        vals = np.empty(nnz)
        count = 0
        for line in fh:
            lineno += 1
            stripped = line.strip()
            if not stripped or stripped.startswith("%"):
                continue
            if count == nnz:
                raise MatrixMarketParseError(path, lineno, f"more than {nnz} entries")
            parts = stripped.split()
            if len(parts) != 3:
                raise MatrixMarketParseError(path, lineno, f"expected 'i j value', got {stripped!r}")
            try:
                i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
            except ValueError:
                raise MatrixMarketParseError(path, lineno, f"unparseable entry {stripped!r}")
            if not (1 <= i <= rows and 1 <= j <= cols):
                raise MatrixMarketParseError(path, lineno, f"index ({i}, {j}) out of range")
            if not np.isfinite(v):
                raise MatrixMarketParseError(path, lineno, f"non-finite value {parts[2]!r}")
            ri[count], ci[count], vals[count] = i - 1, j - 1, v
            count += 1
        if count != nnz:
            raise MatrixMarketParseError(path, lineno, f"expected {nnz} entries, found {count}")

    return MatrixMarketFile(rows, cols, symmetry, nnz, ri, ci, vals)


def load_matrix_market(path):
    return parse_matrix_market(path).to_dense()


def load_idx_images(path, max_images):
    """First ``max_images`` images of an IDX3 ubyte file, one flattened image per column."""
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"IDX file not found: {path}")
    raw = path.read_bytes()
    if len(raw) < 16:
        raise IdxFormatError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, count, rows, cols = struct.unpack(">IIII", raw[:16])
    if magic != IDX3_UBYTE_MAGIC:
        raise IdxFormatError(f"{path}: bad magic 0x{magic:08x}, expected 0x{IDX3_UBYTE_MAGIC:08x}")
    if max_images < 1:
        raise InvalidArgumentError(f"max_images must be >= 1, got {max_images}")
    if max_images > count:
        raise InvalidArgumentError(
            f"{path}: requested {max_images} images but only {count} available")
    pixels = rows * cols
    need = 16 + max_images * pixels
    if len(raw) < need:
        raise IdxFormatError(f"{path}: truncated, need {need} bytes, have {len(raw)}")
    images = np.frombuffer(raw, dtype=np.uint8, count=max_images * pixels, offset=16)
    return images.reshape(max_images, pixels).T.astype(np.float64)


def resolve(spec):
    src = spec.source
    if isinstance(src, Generator):
        return generate(src.kind, src.rows, src.cols, src.seed)
    if isinstance(src, MatrixMarket):
        return load_matrix_market(src.path)
    if isinstance(src, IdxImages):
        return load_idx_images(src.path, src.max_images)
    raise InvalidArgumentError(f"unknown dataset source {src!r}")


def density(a):
    return np.count_nonzero(a) / a.size


# name -> (SuiteSparse matrix name, exclusive rank limit)
SPARSE_DATASETS = {
    "sparse1": ("1138_bus", None),
    "sparse2": ("Vehicle_10NN", None),
    "sparse3": ("Spectro_NN", 400),
}
IMAGE_DATASETS = {"mnist": "mnist", "fashion": "fashion"}
SYNTHETIC_SHAPE = (784, 1000)
IMAGE_COUNT = 5000
DATASET_NAMES = ("boolean", "gaussian", "uniform", "mnist", "fashion",
                 "sparse1", "sparse2", "sparse3")


def data_dir():
    return Path(os.environ.get("ID_DATA_DIR", "data"))


def _find_mtx(root, name):
    for cand in (root / f"{name}.mtx", root / name / f"{name}.mtx"):
        if cand.is_file():
            return cand
    return root / f"{name}.mtx"


def _find_idx(root, sub):
    for fname in ("train-images-idx3-ubyte", "train-images.idx3-ubyte"):
        cand = root / sub / fname
        if cand.is_file():
            return cand
    return root / sub / "train-images-idx3-ubyte"


def named_dataset(name, root=None, seed=0):
    """Spec for one of the eight benchmark datasets.

    File-backed datasets are looked up under ``root`` (default ``$ID_DATA_DIR``):
    ``<name>.mtx`` or ``<name>/<name>.mtx`` for SuiteSparse matrices and
    ``mnist/train-images-idx3-ubyte``, ``fashion/train-images-idx3-ubyte``.
    """
    root = Path(root) if root is not None else data_dir()
    if name in GENERATOR_KINDS:
        return DatasetSpec(name, Generator(name, *SYNTHETIC_SHAPE, seed=seed))
    if name in SPARSE_DATASETS:
        mtx, limit = SPARSE_DATASETS[name]
        return DatasetSpec(name, MatrixMarket(_find_mtx(root, mtx)), rank_limit=limit)
    if name in IMAGE_DATASETS:
        return DatasetSpec(name, IdxImages(_find_idx(root, IMAGE_DATASETS[name]), IMAGE_COUNT))
    raise InvalidArgumentError(f"unknown dataset {name!r}; choose from {', '.join(DATASET_NAMES)}")


def is_available(spec):
    src = spec.source
    if isinstance(src, Generator):
        return True
    return Path(src.path).is_file()
