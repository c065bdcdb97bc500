"""Tuples of square complex matrices of a common size."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

import numpy as np

from .errors import DimensionError

__all__ = ["MatrixTuple"]


@dataclass(frozen=True)
class MatrixTuple:
    """d square complex matrices of common size n; immutable once built."""

    mats: tuple = field(repr=False)

    def __post_init__(self):
        if len(self.mats) < 1:
            raise DimensionError("matrix tuple needs at least one member")
        frozen = []
        n = None
        for idx, m in enumerate(self.mats):
            a = np.asarray(m, dtype=complex)
            if a.ndim != 2 or a.shape[0] != a.shape[1]:
                raise DimensionError(f"member {idx} is not square: shape {a.shape}")
            if n is None:
                n = a.shape[0]
            elif a.shape[0] != n:
                raise DimensionError(
                    f"member {idx} has size {a.shape[0]}, expected {n}"
                )
            if not np.all(np.isfinite(a.real)) or not np.all(np.isfinite(a.imag)):
                raise DimensionError(f"member {idx} has non-finite entries")
            a = a.copy()
            a.flags.writeable = False
            frozen.append(a)
        object.__setattr__(self, "mats", tuple(frozen))

    @classmethod
    def from_arrays(cls, arrays: Sequence) -> "MatrixTuple":
        return cls(tuple(arrays))

    @property
    def n(self) -> int:
        return self.mats[0].shape[0]

    @property
    def d(self) -> int:
        return len(self.mats)

    def __len__(self) -> int:
        return len(self.mats)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.mats)

    def __getitem__(self, i) -> np.ndarray:
        return self.mats[i]

    def as_stack(self) -> np.ndarray:
        """All members as a (d, n, n) array."""
        return np.stack(self.mats)

    def is_real(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(m.imag)) <= tol for m in self.mats)

    def scaled(self, c: complex) -> "MatrixTuple":
        return MatrixTuple(tuple(c * m for m in self.mats))

    def conjugated(self, s: np.ndarray) -> "MatrixTuple":
        """Simultaneous similarity (S X_i S^{-1}) applied to every member."""
        s = np.asarray(s, dtype=complex)
        s_inv = np.linalg.inv(s)
        return MatrixTuple(tuple(s @ m @ s_inv for m in self.mats))
