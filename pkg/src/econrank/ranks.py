"""PageRank/CheiRank computation, orderings, and aggregations.

Rank vectors are stationary distributions of the import- and
export-direction Google matrices, obtained by plain power iteration
(deterministic, no acceleration).  The iteration starts from the
personalization vector and stops when the L1 change of the iterate drops
to the tolerance; with damping alpha the change contracts at least by
alpha per step, so the residual sequence is non-increasing.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import ConvergenceError, ValidationError
from .gmatrix import GoogleMatrix
from .registries import CountryRegistry, SectorRegistry

RANK_TOL = DEFAULT_TOLERANCES.rank_tol
RANK_MAX_ITER = DEFAULT_TOLERANCES.rank_max_iter


@dataclass(frozen=True, eq=False)
class RankVector:
    """Probability vector over nodes plus convergence bookkeeping."""

    p: np.ndarray
    direction: str  # "pagerank" | "cheirank"
    iterations_used: int
    residual: float
    residual_history: tuple[float, ...] = ()

    def __post_init__(self):
        if self.direction not in ("pagerank", "cheirank"):
            raise ValidationError(f"direction must be 'pagerank' or 'cheirank', got {self.direction!r}")
        if abs(self.p.sum() - 1.0) > DEFAULT_TOLERANCES.column_sum:
            raise ValidationError(f"rank vector sums to {self.p.sum()!r}, not 1")
        if self.p.min() <= 0:
            raise ValidationError("rank vector entries must be strictly positive")

    @property
    def n(self) -> int:
        return self.p.shape[0]


@dataclass(frozen=True, eq=False)
class RankOrdering:
    """Permutation K of 1..N: K[j] is the node holding rank position j+1."""

    K: np.ndarray

    def positions(self) -> np.ndarray:
        """Inverse permutation: positions[i] is the 1-based rank of node i+1."""
        inv = np.empty(self.K.shape[0], dtype=int)
        inv[self.K - 1] = np.arange(1, self.K.shape[0] + 1)
        return inv


def power_iterate(G: GoogleMatrix, tol: float = RANK_TOL, max_iter: int = RANK_MAX_ITER) -> RankVector:
    """Stationary vector of G by power iteration from the personalization vector.

    Returns the first iterate whose L1 distance to its predecessor is at
    most ``tol``; raises ConvergenceError with the last residual if
    ``max_iter`` steps are not enough.
    """
    if tol <= 0:
        raise ValidationError(f"tol must be positive, got {tol}")
    if max_iter < 1:
        raise ValidationError(f"max_iter must be >= 1, got {max_iter}")
    direction = "pagerank" if G.direction == "import" else "cheirank"
    x = G.v.v.copy()
    residuals: list[float] = []
    for iteration in range(1, max_iter + 1):
        x_next = G.dot(x)
        residual = float(np.abs(x_next - x).sum())
        residuals.append(residual)
        x = x_next
        if residual <= tol:
            return RankVector(
                p=x,
                direction=direction,
                iterations_used=iteration,
                residual=residual,
                residual_history=tuple(residuals),
            )
    raise ConvergenceError(
        f"power iteration did not reach tol={tol} within {max_iter} iterations",
        residual=residuals[-1],
    )


def order_ranks(rank: RankVector) -> RankOrdering:
    """Descending-probability ordering; ties broken by ascending node index."""
    n = rank.n
    order = np.lexsort((np.arange(n), -rank.p))
    return RankOrdering(K=order + 1)


def aggregate_by_country(rank: RankVector, countries: CountryRegistry, sectors: SectorRegistry) -> np.ndarray:
    """Per-country probability: sum of the country's sector nodes."""
    n_c, n_s = len(countries), len(sectors)
    if rank.n != n_c * n_s:
        raise ValidationError(f"rank vector has {rank.n} nodes, registries imply {n_c * n_s}")
    return rank.p.reshape(n_c, n_s).sum(axis=1)


def aggregate_by_sector(rank: RankVector, countries: CountryRegistry, sectors: SectorRegistry) -> np.ndarray:
    """Per-sector probability: sum over all countries."""
    n_c, n_s = len(countries), len(sectors)
    if rank.n != n_c * n_s:
        raise ValidationError(f"rank vector has {rank.n} nodes, registries imply {n_c * n_s}")
    return rank.p.reshape(n_c, n_s).sum(axis=0)


def rank_table_csv(
    pagerank: RankVector,
    cheirank: RankVector,
    countries: CountryRegistry,
    sectors: SectorRegistry,
) -> str:
    """Node-level table ``node,country,sector,P,K,Pstar,Kstar``."""
    if pagerank.n != cheirank.n:
        raise ValidationError("rank vectors have different lengths")
    n_s = len(sectors)
    k_pos = order_ranks(pagerank).positions()
    kstar_pos = order_ranks(cheirank).positions()
    out = io.StringIO()
    out.write("node,country,sector,P,K,Pstar,Kstar\n")
    for i in range(pagerank.n):
        c, s = divmod(i, n_s)
        out.write(
            f"{i + 1},{countries.codes[c]},{sectors.codes[s]},"
            f"{repr(float(pagerank.p[i]))},{k_pos[i]},"
            f"{repr(float(cheirank.p[i]))},{kstar_pos[i]}\n"
        )
    return out.getvalue()


def country_table_csv(
    pagerank: RankVector,
    cheirank: RankVector,
    countries: CountryRegistry,
    sectors: SectorRegistry,
) -> str:
    """Country-level table ``country,P,K,Pstar,Kstar`` from aggregated probabilities."""
    p_c = aggregate_by_country(pagerank, countries, sectors)
    pstar_c = aggregate_by_country(cheirank, countries, sectors)
    n_c = len(countries)
    k_pos = np.empty(n_c, dtype=int)
    k_pos[np.lexsort((np.arange(n_c), -p_c))] = np.arange(1, n_c + 1)
    kstar_pos = np.empty(n_c, dtype=int)
    kstar_pos[np.lexsort((np.arange(n_c), -pstar_c))] = np.arange(1, n_c + 1)
    out = io.StringIO()
    out.write("country,P,K,Pstar,Kstar\n")
    for c in range(n_c):
        out.write(f"{countries.codes[c]},{repr(float(p_c[c]))},{k_pos[c]},{repr(float(pstar_c[c]))},{kstar_pos[c]}\n")
    return out.getvalue()
