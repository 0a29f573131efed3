# src/algebra/theta_matrix.py
"""
Dense (2n+1)x(2n+1) matrices indexed by Theta = {1..n, 0, -n..-1}.

Rows and columns are stored in the basis order e_1..e_n, e_0, e_-n..e_-1.
"""
import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.algebra.ring_core import Ring, RingElem
from src.utils.errors import InvalidIndexError, MatrixShapeError, NotInvertibleError

logger = logging.getLogger(__name__)


def theta(n: int) -> List[int]:
    """Theta in basis order."""
    return list(range(1, n + 1)) + [0] + list(range(-n, 0))


def theta_hb(n: int) -> List[int]:
    return [i for i in theta(n) if i != 0]


def position(i: int, n: int) -> int:
    if not -n <= i <= n:
        raise InvalidIndexError(f"index {i} outside Theta for n={n}")
    if i > 0:
        return i - 1
    if i == 0:
        return n
    return 2 * n + 1 + i


def index_at(pos: int, n: int) -> int:
    if not 0 <= pos <= 2 * n:
        raise InvalidIndexError(f"position {pos} outside 0..{2 * n}")
    if pos < n:
        return pos + 1
    if pos == n:
        return 0
    return pos - 2 * n - 1


def eps(i: int) -> int:
    """Sign of a hyperbolic index."""
    if i == 0:
        raise InvalidIndexError("eps is undefined at index 0")
    return 1 if i > 0 else -1


def theta_less(i: int, j: int, n: int) -> bool:
    """The order of Theta used for display: 1 < ... < n < 0 < -n < ... < -1."""
    return position(i, n) < position(j, n)


class ThetaMatrix:
    """Immutable matrix over a validated ring addressed by Theta indices."""

    __slots__ = ("ring", "n", "data", "_key")

    def __init__(self, ring: Ring, n: int, data: np.ndarray):
        size = 2 * n + 1
        if data.shape != (ring.deg, size, size):
            raise MatrixShapeError(f"expected shape {(ring.deg, size, size)}, got {data.shape}")
        self.ring = ring
        self.n = n
        self.data = np.asarray(data, dtype=np.int64)
        self.data.setflags(write=False)
        self._key = None

    # constructors -------------------------------------------------------------
    @classmethod
    def zeros_array(cls, ring: Ring, n: int) -> np.ndarray:
        size = 2 * n + 1
        return np.zeros((ring.deg, size, size), dtype=np.int64)

    @classmethod
    def identity(cls, ring: Ring, n: int) -> "ThetaMatrix":
        data = cls.zeros_array(ring, n)
        data[0] = np.eye(2 * n + 1, dtype=np.int64) % ring.modulus
        return cls(ring, n, data)

    @classmethod
    def from_entries(cls, ring: Ring, n: int, entries: Dict[Tuple[int, int], RingElem], base_identity: bool = True) -> "ThetaMatrix":
        """Identity (or zero) matrix with the given entries added."""
        data = cls.identity(ring, n).data.copy() if base_identity else cls.zeros_array(ring, n)
        for (i, j), x in entries.items():
            p, q = position(i, n), position(j, n)
            cur = ring.arr_entry(data, p, q)
            ring.arr_set(data, p, q, cur + x)
        return cls(ring, n, data)

    @classmethod
    def basis(cls, ring: Ring, n: int, i: int, j: int) -> "ThetaMatrix":
        """The matrix unit e^{ij}."""
        return cls.from_entries(ring, n, {(i, j): ring.one}, base_identity=False)

    @classmethod
    def from_rows(cls, ring: Ring, n: int, rows: Sequence[Sequence[RingElem]]) -> "ThetaMatrix":
        """Rows listed in basis order."""
        data = cls.zeros_array(ring, n)
        size = 2 * n + 1
        if len(rows) != size or any(len(r) != size for r in rows):
            raise MatrixShapeError(f"expected a {size}x{size} array")
        for p, row in enumerate(rows):
            for q, x in enumerate(row):
                ring.arr_set(data, p, q, ring(x))
        return cls(ring, n, data)

    # access -------------------------------------------------------------------
    def __getitem__(self, ij: Tuple[int, int]) -> RingElem:
        i, j = ij
        return self.ring.arr_entry(self.data, position(i, self.n), position(j, self.n))

    def rows(self) -> List[List[RingElem]]:
        size = 2 * self.n + 1
        return [[self.ring.arr_entry(self.data, p, q) for q in range(size)] for p in range(size)]

    def column(self, j: int) -> "ThetaVector":
        q = position(j, self.n)
        return ThetaVector(self.ring, self.n, self.data[:, :, q].copy())

    def row(self, i: int) -> "ThetaVector":
        p = position(i, self.n)
        return ThetaVector(self.ring, self.n, self.data[:, p, :].copy())

    @property
    def size(self) -> int:
        return 2 * self.n + 1

    # arithmetic ---------------------------------------------------------------
    def _check(self, other: "ThetaMatrix") -> None:
        if self.n != other.n or self.ring != other.ring:
            raise MatrixShapeError("matrices over different rings or of different size")

    def __matmul__(self, other):
        if isinstance(other, ThetaVector):
            data = self.ring.arr_mul(self.data, other.data[:, :, np.newaxis])[:, :, 0]
            return ThetaVector(self.ring, self.n, data)
        self._check(other)
        return ThetaMatrix(self.ring, self.n, self.ring.arr_mul(self.data, other.data))

    __mul__ = __matmul__

    def __add__(self, other: "ThetaMatrix") -> "ThetaMatrix":
        self._check(other)
        return ThetaMatrix(self.ring, self.n, self.ring.arr_reduce(self.data + other.data))

    def __sub__(self, other: "ThetaMatrix") -> "ThetaMatrix":
        self._check(other)
        return ThetaMatrix(self.ring, self.n, self.ring.arr_reduce(self.data - other.data))

    def scale(self, s: RingElem) -> "ThetaMatrix":
        return ThetaMatrix(self.ring, self.n, self.ring.arr_scale(s, self.data))

    def conj_entries(self) -> "ThetaMatrix":
        return ThetaMatrix(self.ring, self.n, self.ring.arr_conj(self.data))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaMatrix):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and np.array_equal(self.data, other.data)

    def __hash__(self) -> int:
        if self._key is None:
            self._key = hash((self.n, self.data.tobytes()))
        return self._key

    def is_identity(self) -> bool:
        return self == ThetaMatrix.identity(self.ring, self.n)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self.rows())
        return f"ThetaMatrix(n={self.n}, [{body}])"

    # inversion ----------------------------------------------------------------
    def charpoly(self) -> List[RingElem]:
        return berkowitz_vector(self.ring, self.data)

    def det(self) -> RingElem:
        coeffs = self.charpoly()
        size = self.size
        return coeffs[-1] if size % 2 == 0 else -coeffs[-1]

    def inverse_or_none(self) -> Optional["ThetaMatrix"]:
        return mat_inv(self)

    def inverse(self) -> "ThetaMatrix":
        inv = mat_inv(self)
        if inv is None:
            raise NotInvertibleError("determinant is not a unit")
        return inv


class ThetaVector:
    """Column (or row) vector addressed by Theta indices."""

    __slots__ = ("ring", "n", "data")

    def __init__(self, ring: Ring, n: int, data: np.ndarray):
        if data.shape != (ring.deg, 2 * n + 1):
            raise MatrixShapeError(f"bad vector shape {data.shape}")
        self.ring = ring
        self.n = n
        self.data = np.asarray(data, dtype=np.int64)

    @classmethod
    def from_entries(cls, ring: Ring, n: int, entries: Dict[int, RingElem]) -> "ThetaVector":
        data = np.zeros((ring.deg, 2 * n + 1), dtype=np.int64)
        for i, x in entries.items():
            data[:, position(i, n)] = ring(x).c
        return cls(ring, n, data)

    @classmethod
    def unit(cls, ring: Ring, n: int, i: int) -> "ThetaVector":
        return cls.from_entries(ring, n, {i: ring.one})

    def __getitem__(self, i: int) -> RingElem:
        return RingElem(self.ring, tuple(int(v) for v in self.data[:, position(i, self.n)]))

    def items(self) -> Iterable[Tuple[int, RingElem]]:
        for i in theta(self.n):
            yield i, self[i]

    def __add__(self, other: "ThetaVector") -> "ThetaVector":
        return ThetaVector(self.ring, self.n, self.ring.arr_reduce(self.data + other.data))

    def __sub__(self, other: "ThetaVector") -> "ThetaVector":
        return ThetaVector(self.ring, self.n, self.ring.arr_reduce(self.data - other.data))

    def __neg__(self) -> "ThetaVector":
        return ThetaVector(self.ring, self.n, self.ring.arr_reduce(-self.data))

    def scale(self, s: RingElem) -> "ThetaVector":
        """Right multiplication u * s (the ring is commutative)."""
        return ThetaVector(self.ring, self.n, self.ring.arr_scale(s, self.data[:, :, np.newaxis])[:, :, 0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, ThetaVector):
            return NotImplemented
        return self.n == other.n and self.ring == other.ring and np.array_equal(self.data, other.data)

    def __repr__(self) -> str:
        return "ThetaVector(" + ", ".join(f"{i}:{x}" for i, x in self.items()) + ")"


def berkowitz_vector(ring: Ring, data: np.ndarray) -> List[RingElem]:
    """
    Division-free characteristic polynomial coefficients [1, c1, ..., cN]
    of det(xI - A), computed by the Berkowitz recursion.
    """
    size = data.shape[1]
    if size == 0:
        return [ring.one]
    if size == 1:
        return [ring.one, -ring.arr_entry(data, 0, 0)]
    a = ring.arr_entry(data, 0, 0)
    row = data[:, 0:1, 1:]
    col = data[:, 1:, 0:1]
    sub = data[:, 1:, 1:]
    diags = [ring.one, -a]
    vec = col
    for _ in range(size - 1):
        diags.append(-ring.arr_entry(ring.arr_mul(row, vec), 0, 0))
        vec = ring.arr_mul(sub, vec)
    inner = berkowitz_vector(ring, sub)
    out = []
    for i in range(size + 1):
        acc = ring.zero
        for j in range(min(i + 1, size)):
            acc = acc + diags[i - j] * inner[j]
        out.append(acc)
    return out


def mat_inv(a: ThetaMatrix) -> Optional[ThetaMatrix]:
    """
    Adjugate-based inverse; None when the determinant is not a unit.

    Uses Cayley-Hamilton: adj(A) = (-1)^(N+1) (A^(N-1) + c1 A^(N-2) + ... + c_(N-1) I).
    """
    ring, size = a.ring, a.size
    coeffs = berkowitz_vector(ring, a.data)
    det = coeffs[-1] if size % 2 == 0 else -coeffs[-1]
    det_inv = ring.unit_inverse(det)
    if det_inv is None:
        return None
    eye = ThetaMatrix.identity(ring, a.n).data
    acc = eye.copy()
    for c in coeffs[1:size]:
        acc = ring.arr_reduce(ring.arr_mul(acc, a.data) + ring.arr_scale(c, eye))
    sign = ring.one if size % 2 == 1 else -ring.one
    inv = ThetaMatrix(a.ring, a.n, ring.arr_scale(sign * det_inv, acc))
    if not (a @ inv).is_identity():
        raise NotInvertibleError("adjugate inverse failed its product check")
    return inv


def commutator(a: ThetaMatrix, b: ThetaMatrix) -> ThetaMatrix:
    """[a, b] = a b a^-1 b^-1."""
    return a @ b @ a.inverse() @ b.inverse()


def conjugate(h: ThetaMatrix, g: ThetaMatrix) -> ThetaMatrix:
    """^h g = h g h^-1."""
    return h @ g @ h.inverse()


def product(mats: Iterable[ThetaMatrix], ring: Ring, n: int) -> ThetaMatrix:
    acc = ThetaMatrix.identity(ring, n)
    for m in mats:
        acc = acc @ m
    return acc
