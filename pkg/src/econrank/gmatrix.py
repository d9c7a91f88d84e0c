"""Column-stochastic and Google matrices built from a money matrix.

The import-direction matrix S normalizes each money column by its column
sum (the source node's export volume), so S describes where a unit of
money spent at a node came from.  The export-direction matrix S* applies
the same construction to the transposed flows.  Nodes with zero volume
(dangling columns) get the uniform column 1/N.

The Google matrix G = alpha * S + (1 - alpha) * v 1^T is never
materialized densely: it is kept as the (S, alpha, v) triple and applied
as a matrix-vector (or matrix-block) product, which is all that rank
computation and reduced-matrix extraction need.  Dense materialization is
available for small matrices and tests.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .config import DEFAULT_TOLERANCES
from .errors import DegenerateInputError, RangeError, ValidationError
from .money import MoneyMatrix

Direction = str  # "import" | "export"


def _check_direction(direction: str) -> None:
    if direction not in ("import", "export"):
        raise RangeError(f"direction must be 'import' or 'export', got {direction!r}")


@dataclass(frozen=True, eq=False)
class VolumeVectors:
    """Per-node import volumes (row sums) and export volumes (column sums)."""

    v_import: np.ndarray
    v_export: np.ndarray


def compute_volumes(matrix: MoneyMatrix) -> VolumeVectors:
    """Total import and export volume of every node."""
    v_import = np.asarray(matrix.values.sum(axis=1)).ravel()
    v_export = np.asarray(matrix.values.sum(axis=0)).ravel()
    return VolumeVectors(v_import=v_import, v_export=v_export)


@dataclass(frozen=True, eq=False)
class StochasticMatrix:
    """Sparse column-normalized matrix plus uniform columns for dangling nodes.

    ``matrix`` holds the normalized non-dangling columns; columns listed in
    ``dangling_mask`` are logically the uniform vector 1/N and are kept out
    of the sparse structure.
    """

    matrix: sp.csc_matrix
    dangling_mask: np.ndarray
    direction: Direction = "import"

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def dangling_columns(self) -> tuple[int, ...]:
        """1-based indices of columns replaced by the uniform column."""
        return tuple(int(j) + 1 for j in np.flatnonzero(self.dangling_mask))

    def dot(self, x: np.ndarray) -> np.ndarray:
        """Apply S to a vector or to a block of column vectors."""
        y = self.matrix @ x
        if self.dangling_mask.any():
            if x.ndim == 1:
                y = y + x[self.dangling_mask].sum() / self.n
            else:
                y = y + x[self.dangling_mask, :].sum(axis=0)[None, :] / self.n
        return y

    def tdot(self, y: np.ndarray) -> np.ndarray:
        """Apply S^T to a vector or block."""
        out = self.matrix.T @ y
        if self.dangling_mask.any():
            if y.ndim == 1:
                out[self.dangling_mask] = y.sum() / self.n
            else:
                out[self.dangling_mask, :] = y.sum(axis=0)[None, :] / self.n
        return out

    def column(self, j: int) -> np.ndarray:
        """Dense column at 0-based position j."""
        if self.dangling_mask[j]:
            return np.full(self.n, 1.0 / self.n)
        return self.matrix[:, [j]].toarray().ravel()

    def block(self, row_positions: np.ndarray, col_positions: np.ndarray) -> np.ndarray:
        """Dense sub-block S[rows, cols] with dangling columns filled in."""
        sub = self.matrix[:, col_positions].tocsr()[row_positions, :].toarray()
        dang = np.flatnonzero(self.dangling_mask[col_positions])
        if dang.size:
            sub[:, dang] = 1.0 / self.n
        return sub

    def dense(self) -> np.ndarray:
        out = self.matrix.toarray()
        out[:, self.dangling_mask] = 1.0 / self.n
        return out

    def column_sums(self) -> np.ndarray:
        sums = np.asarray(self.matrix.sum(axis=0)).ravel()
        sums[self.dangling_mask] = (1.0 / self.n) * self.n
        return sums


@dataclass(frozen=True, eq=False)
class PersonalizationVector:
    """Strictly positive teleportation vector normalized to sum 1."""

    v: np.ndarray

    def __post_init__(self):
        if self.v.ndim != 1 or self.v.size == 0:
            raise ValidationError("personalization vector must be a non-empty 1-D array")
        if self.v.min() <= 0:
            raise ValidationError("personalization vector entries must be strictly positive")
        if abs(self.v.sum() - 1.0) > DEFAULT_TOLERANCES.column_sum:
            raise ValidationError(f"personalization vector sums to {self.v.sum()!r}, not 1")

    @classmethod
    def uniform(cls, n: int) -> "PersonalizationVector":
        return cls(np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class GoogleMatrix:
    """Lazy G = alpha * S + (1 - alpha) * v 1^T, applied as an operator."""

    S: StochasticMatrix
    alpha: float
    v: PersonalizationVector
    direction: Direction = field(default="import")

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise RangeError(f"alpha must be in (0, 1), got {self.alpha}")
        if self.v.v.shape[0] != self.S.n:
            raise ValidationError("personalization vector length does not match matrix size")
        _check_direction(self.direction)

    @property
    def n(self) -> int:
        return self.S.n

    def dot(self, x: np.ndarray) -> np.ndarray:
        """G x for a vector, or G X column-wise for a block X."""
        y = self.alpha * self.S.dot(x)
        if x.ndim == 1:
            return y + (1.0 - self.alpha) * x.sum() * self.v.v
        return y + (1.0 - self.alpha) * self.v.v[:, None] * x.sum(axis=0)[None, :]

    def tdot(self, y: np.ndarray) -> np.ndarray:
        """G^T y for a vector or block."""
        out = self.alpha * self.S.tdot(y)
        if y.ndim == 1:
            return out + (1.0 - self.alpha) * (self.v.v @ y)
        return out + (1.0 - self.alpha) * (self.v.v @ y)[None, :]

    def column(self, j: int) -> np.ndarray:
        """Dense column at 0-based position j."""
        return self.alpha * self.S.column(j) + (1.0 - self.alpha) * self.v.v

    def block(self, row_positions: np.ndarray, col_positions: np.ndarray) -> np.ndarray:
        """Dense sub-block G[rows, cols]."""
        s_block = self.S.block(row_positions, col_positions)
        return self.alpha * s_block + (1.0 - self.alpha) * self.v.v[row_positions, None]

    def dense(self) -> np.ndarray:
        return self.alpha * self.S.dense() + (1.0 - self.alpha) * self.v.v[:, None]


def build_stochastic(matrix: MoneyMatrix, direction: Direction) -> StochasticMatrix:
    """Column-stochastic matrix for the chosen flow direction.

    direction="import" normalizes money columns by export volume;
    direction="export" does the same on the transposed flows.  Zero-volume
    columns become the uniform column and are recorded as dangling.
    """
    _check_direction(direction)
    flows = matrix.values if direction == "import" else matrix.values.T.tocsc()
    col_sums = np.asarray(flows.sum(axis=0)).ravel()
    dangling = col_sums == 0.0
    with np.errstate(divide="ignore"):
        inv = np.where(dangling, 0.0, 1.0 / np.where(dangling, 1.0, col_sums))
    normalized = (flows @ sp.diags(inv)).tocsc()
    normalized.sort_indices()
    return StochasticMatrix(matrix=normalized, dangling_mask=dangling, direction=direction)


def build_personalization(matrix: MoneyMatrix, direction: Direction) -> PersonalizationVector:
    """Teleportation vector: democratic over countries, volume-weighted over sectors.

    Every country gets weight 1/n_countries, distributed over its sectors
    proportionally to each sector's share of total world volume (import
    volumes for direction="import", export volumes for "export").  Zero
    entries are floored at 1e-12 of the mass and the vector renormalized,
    keeping it strictly positive.
    """
    _check_direction(direction)
    volumes = compute_volumes(matrix)
    vol = volumes.v_import if direction == "import" else volumes.v_export
    total = vol.sum()
    if total <= 0.0:
        raise DegenerateInputError("cannot build a personalization vector for a zero-flow network")
    sector_share = vol.reshape(matrix.n_countries, matrix.n_sectors).sum(axis=0) / total
    v = np.tile(sector_share / matrix.n_countries, matrix.n_countries)
    if (v == 0.0).any():
        v = np.where(v == 0.0, 1e-12 * v.sum(), v)
        v = v / v.sum()
    return PersonalizationVector(v=v)


def build_google(
    S: StochasticMatrix,
    alpha: float = 0.5,
    v: PersonalizationVector | None = None,
) -> GoogleMatrix:
    """Assemble the Google-matrix operator; v defaults to uniform.

    Any strictly positive normalized vector may be supplied as v, which is
    the substitution hook for alternative teleportation weightings.
    """
    if v is None:
        v = PersonalizationVector.uniform(S.n)
    return GoogleMatrix(S=S, alpha=alpha, v=v, direction=S.direction)


def stochastic_triplets_csv(S: StochasticMatrix) -> str:
    """Sparse triplet dump ``row,col,value`` (1-based indices) of the stored columns.

    Dangling columns are uniform 1/N and are listed in the companion JSON
    (see dangling_columns_json) instead of being expanded here.
    """
    coo = S.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    out = io.StringIO()
    out.write("row,col,value\n")
    for k in order:
        out.write(f"{coo.row[k] + 1},{coo.col[k] + 1},{repr(float(coo.data[k]))}\n")
    return out.getvalue()


def dangling_columns_json(S: StochasticMatrix) -> str:
    """JSON document listing dangling columns (1-based) and the uniform value."""
    doc = {
        "n": S.n,
        "direction": S.direction,
        "uniform_value": 1.0 / S.n,
        "dangling_columns": list(S.dangling_columns),
    }
    return json.dumps(doc, indent=2, sort_keys=True)
