"""Root-system combinatorics for the classical Cartan series A, B, C, D.

Every root is stored by its integer coordinates in the simple-root basis,
so the height of a root is just the coordinate sum.  Identifiers are
stable integers: positive roots come first, ordered by (height, then a
deterministic tie-break favouring earlier simple roots), and the negative
of root ``k`` sits at ``k + n_positive``.  In particular ids ``0..r-1``
are the simple roots.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError

SUPPORTED_SERIES = ("A", "B", "C", "D")

# dim(G) per series as a function of the rank, used for counting checks.
DIMENSION = {
    "A": lambda r: (r + 1) ** 2 - 1,
    "B": lambda r: r * (2 * r + 1),
    "C": lambda r: r * (2 * r + 1),
    "D": lambda r: r * (2 * r - 1),
}


def _euclidean_data(series: str, rank: int):
    """Simple roots and positive roots as vectors in the standard ambient space."""
    if series == "A":
        m = rank + 1
        e = np.eye(m)
        simple = [e[i] - e[i + 1] for i in range(rank)]
        pos = [e[i] - e[j] for i in range(m) for j in range(m) if i < j]
    elif series == "B":
        e = np.eye(rank)
        simple = [e[i] - e[i + 1] for i in range(rank - 1)] + [e[rank - 1]]
        pos = [e[i] - e[j] for i in range(rank) for j in range(rank) if i < j]
        pos += [e[i] + e[j] for i in range(rank) for j in range(rank) if i < j]
        pos += [e[i] for i in range(rank)]
    elif series == "C":
        e = np.eye(rank)
        simple = [e[i] - e[i + 1] for i in range(rank - 1)] + [2 * e[rank - 1]]
        pos = [e[i] - e[j] for i in range(rank) for j in range(rank) if i < j]
        pos += [e[i] + e[j] for i in range(rank) for j in range(rank) if i < j]
        pos += [2 * e[i] for i in range(rank)]
    elif series == "D":
        e = np.eye(rank)
        simple = [e[i] - e[i + 1] for i in range(rank - 1)] + [e[rank - 2] + e[rank - 1]]
        pos = [e[i] - e[j] for i in range(rank) for j in range(rank) if i < j]
        pos += [e[i] + e[j] for i in range(rank) for j in range(rank) if i < j]
    else:  # pragma: no cover - guarded by build_root_system
        raise ConfigurationError(f"unsupported series {series!r}")
    return np.array(simple), np.array(pos)


@dataclass(frozen=True)
class RootSystem:
    """Roots of a classical simple Lie algebra in simple-root coordinates.

    ``coords[k]`` are the integers expressing root ``k`` over the simple
    roots and ``heights[k]`` is their sum.
    """

    series: str
    rank: int
    coords: np.ndarray          # (n_roots, rank) int
    heights: np.ndarray         # (n_roots,) int
    n_positive: int
    _index: dict = field(repr=False, default_factory=dict)

    def __post_init__(self):
        lookup = {tuple(int(c) for c in row): k for k, row in enumerate(self.coords)}
        object.__setattr__(self, "_index", lookup)

    @property
    def n_roots(self) -> int:
        return self.coords.shape[0]

    @property
    def simple(self) -> tuple:
        return tuple(range(self.rank))

    def is_positive(self, k: int) -> bool:
        return k < self.n_positive

    def negative(self, k: int) -> int:
        """Id of the root opposite to root ``k``."""
        return k + self.n_positive if k < self.n_positive else k - self.n_positive

    def root_id(self, coords) -> int:
        return self._index[tuple(int(c) for c in coords)]

    @property
    def highest_height(self) -> int:
        return int(self.heights.max())


def build_root_system(series: str, rank: int) -> RootSystem:
    """Construct the root system of the given classical type.

    D requires rank >= 3 (D_2 is not simple); A, B, C accept rank >= 1.
    """
    if series not in SUPPORTED_SERIES:
        raise ConfigurationError(f"series must be one of {SUPPORTED_SERIES}, got {series!r}")
    if rank < 1:
        raise ConfigurationError(f"rank must be >= 1, got {rank}")
    if series == "D" and rank < 3:
        raise ConfigurationError("series D needs rank >= 3")

    simple_vecs, pos_vecs = _euclidean_data(series, rank)
    # Simple roots are linearly independent, so integer coordinates are the
    # (exact, after rounding) least-squares solution in the ambient space.
    sol, *_ = np.linalg.lstsq(simple_vecs.T, pos_vecs.T, rcond=None)
    coords = np.rint(sol.T).astype(int)
    if not np.allclose(coords @ simple_vecs, pos_vecs, atol=1e-9):
        raise ConfigurationError("root coordinates failed to reconstruct the roots")

    heights = coords.sum(axis=1)
    order = sorted(range(len(coords)), key=lambda k: (heights[k], tuple(-c for c in coords[k])))
    coords = coords[order]
    heights = heights[order]

    all_coords = np.vstack([coords, -coords])
    all_heights = np.concatenate([heights, -heights])
    rs = RootSystem(series, rank, all_coords, all_heights, n_positive=len(coords))

    n_pos_expected = (DIMENSION[series](rank) - rank) // 2
    if rs.n_positive != n_pos_expected:
        raise ConfigurationError(
            f"{series}{rank}: got {rs.n_positive} positive roots, expected {n_pos_expected}"
        )
    return rs


def height_spaces(rs: RootSystem) -> dict:
    """Partition of the root ids by height; level 0 (the Cartan) is not a root level."""
    levels: dict = {}
    for k in range(rs.n_roots):
        levels.setdefault(int(rs.heights[k]), []).append(k)
    return levels
