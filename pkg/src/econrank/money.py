"""The money-flow matrix over (country, sector) nodes.

Nodes are (country, sector) pairs flattened to 1-based indices
``i = s + (c - 1) * n_sectors``.  Element (i, i') of the matrix is the
currency amount flowing from source node i' to destination node i, so
column i' holds everything node i' sells and row i holds everything node
i buys.  Same-node self-loops are excluded: the diagonal is always zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import RangeError, ValidationError


def flatten_index(country_index: int, sector_index: int, n_sectors: int, n_countries: int | None = None) -> int:
    """1-based node index for a (country, sector) pair.

    ``n_countries`` is optional; when given, the country upper bound is
    enforced as well.
    """
    if n_sectors < 1:
        raise RangeError(f"n_sectors must be >= 1, got {n_sectors}")
    if country_index < 1:
        raise RangeError(f"country_index must be >= 1, got {country_index}")
    if n_countries is not None and country_index > n_countries:
        raise RangeError(f"country_index {country_index} exceeds n_countries={n_countries}")
    if not 1 <= sector_index <= n_sectors:
        raise RangeError(f"sector_index {sector_index} outside 1..{n_sectors}")
    return sector_index + (country_index - 1) * n_sectors


def unflatten_index(node_index: int, n_sectors: int) -> tuple[int, int]:
    """Inverse of flatten_index: node index -> (country_index, sector_index)."""
    if n_sectors < 1:
        raise RangeError(f"n_sectors must be >= 1, got {n_sectors}")
    if node_index < 1:
        raise RangeError(f"node_index must be >= 1, got {node_index}")
    country = (node_index - 1) // n_sectors + 1
    sector = (node_index - 1) % n_sectors + 1
    return country, sector


@dataclass(frozen=True, eq=False)
class MoneyMatrix:
    """Validated sparse N x N table of non-negative money flows.

    Treated as immutable after construction; safe for concurrent reads.
    """

    values: sp.csc_matrix
    n_countries: int
    n_sectors: int
    year: int = 0

    def __post_init__(self):
        n = self.n_countries * self.n_sectors
        if self.n_countries < 1 or self.n_sectors < 1:
            raise RangeError("n_countries and n_sectors must both be >= 1")
        if self.values.shape != (n, n):
            raise ValidationError(f"matrix shape {self.values.shape} does not match N={n} nodes")
        if self.values.nnz and self.values.data.min() < 0:
            raise ValidationError("money flows must be non-negative")
        if np.any(self.values.diagonal() != 0.0):
            raise ValidationError("diagonal (same-node self-loop) entries must be zero")

    @property
    def n_nodes(self) -> int:
        return self.n_countries * self.n_sectors

    @property
    def total_flow(self) -> float:
        return float(self.values.sum())

    @classmethod
    def from_dense(cls, array, n_countries: int, n_sectors: int, year: int = 0) -> "MoneyMatrix":
        values = sp.csc_matrix(np.asarray(array, dtype=float))
        values.eliminate_zeros()
        values.sort_indices()
        return cls(values=values, n_countries=n_countries, n_sectors=n_sectors, year=year)

    @classmethod
    def from_coo(cls, rows, cols, vals, n_countries: int, n_sectors: int, year: int = 0) -> "MoneyMatrix":
        n = n_countries * n_sectors
        values = sp.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsc()
        values.eliminate_zeros()
        values.sort_indices()
        return cls(values=values, n_countries=n_countries, n_sectors=n_sectors, year=year)

    def transposed(self) -> "MoneyMatrix":
        """Flows with source and destination swapped (exports become imports)."""
        return MoneyMatrix(
            values=self.values.T.tocsc(),
            n_countries=self.n_countries,
            n_sectors=self.n_sectors,
            year=self.year,
        )

    def scaled(self, factor: float) -> "MoneyMatrix":
        if factor < 0:
            raise RangeError(f"scale factor must be >= 0, got {factor}")
        return MoneyMatrix(
            values=(self.values * factor).tocsc(),
            n_countries=self.n_countries,
            n_sectors=self.n_sectors,
            year=self.year,
        )

    def equals(self, other: "MoneyMatrix") -> bool:
        """Bit-exact equality of dimensions, year, and stored values."""
        if (self.n_countries, self.n_sectors, self.year) != (other.n_countries, other.n_sectors, other.year):
            return False
        diff = self.values != other.values
        return diff.nnz == 0 if sp.issparse(diff) else not bool(diff)


def synthesize_network(n_countries: int, n_sectors: int, seed: int, density: float = 1.0, year: int = 0) -> MoneyMatrix:
    """Deterministic random money matrix for tests and demos.

    Off-diagonal cells are kept with probability ``density``; kept cells
    get log-normal flow values.  Repeated calls with the same arguments
    produce bit-identical matrices.
    """
    if n_countries < 1 or n_sectors < 1:
        raise RangeError("n_countries and n_sectors must both be >= 1")
    if not 0.0 < density <= 1.0:
        raise RangeError(f"density must be in (0, 1], got {density}")
    n = n_countries * n_sectors
    rng = np.random.default_rng(seed)
    dense = rng.lognormal(mean=3.0, sigma=1.0, size=(n, n))
    if density < 1.0:
        dense *= rng.random(size=(n, n)) < density
    np.fill_diagonal(dense, 0.0)
    return MoneyMatrix.from_dense(dense, n_countries, n_sectors, year=year)
