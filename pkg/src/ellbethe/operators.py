"""Matrices tagged with the bases they map between.

A label is any hashable value with a ``matches`` method.  Two kinds are used
throughout the package: :class:`TensorLabel` for plain tensor products of
representation spaces, and :class:`BetheLabel` for spaces of Bethe vectors,
whose identity includes the spectral parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LabelMismatchError

LABEL_ATOL = 1e-12


def _spin_text(twice):
    return f"{twice // 2}" if twice % 2 == 0 else f"{twice}/2"


@dataclass(frozen=True)
class TensorLabel:
    """``V^{l_1} (x) ... (x) V^{l_k}``; spins are stored as ``2l``."""

    twice_spins: tuple[int, ...]

    def matches(self, other) -> bool:
        return isinstance(other, TensorLabel) and self.twice_spins == other.twice_spins

    @property
    def dim(self) -> int:
        return int(np.prod([t + 1 for t in self.twice_spins])) if self.twice_spins else 1

    def __str__(self):
        return "V[" + ",".join(_spin_text(t) for t in self.twice_spins) + "]"


@dataclass(frozen=True)
class BetheLabel:
    """Space of Bethe vectors for an ordered chain.

    The spectral parameters are part of the identity; they are compared
    with an absolute tolerance so that values produced by different but
    equivalent arithmetic (``z + kappa`` computed twice) still match.
    """

    twice_spins: tuple[int, ...]
    z: tuple[complex, ...]
    lambda_ring: complex
    r: int

    def matches(self, other) -> bool:
        if not isinstance(other, BetheLabel):
            return False
        if self.twice_spins != other.twice_spins or self.r != other.r:
            return False
        if abs(self.lambda_ring - other.lambda_ring) > LABEL_ATOL:
            return False
        return all(abs(a - b) <= LABEL_ATOL for a, b in zip(self.z, other.z))

    def __str__(self):
        spins = ",".join(_spin_text(t) for t in self.twice_spins)
        zs = ",".join(f"{w.real:.6g}{w.imag:+.6g}j" for w in self.z)
        return f"B[{spins}; {zs}]"


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """A complex matrix from ``domain`` to ``codomain``."""

    matrix: np.ndarray
    domain: object
    codomain: object

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex)
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @property
    def shape(self):
        return self.matrix.shape

    def __matmul__(self, other):
        if isinstance(other, OperatorMatrix):
            if not self.domain.matches(other.codomain):
                raise LabelMismatchError(
                    f"cannot compose: left expects {self.domain}, right produces {other.codomain}"
                )
            return OperatorMatrix(self.matrix @ other.matrix, other.domain, self.codomain)
        return NotImplemented

    def apply(self, vec, label=None) -> np.ndarray:
        """Apply to a coefficient vector; ``label`` (if given) must match the domain."""
        if label is not None and not self.domain.matches(label):
            raise LabelMismatchError(f"vector lives in {label}, operator expects {self.domain}")
        return self.matrix @ np.asarray(vec, dtype=complex)

    def __repr__(self):
        return f"OperatorMatrix({self.codomain} <- {self.domain}, shape={self.shape})"
