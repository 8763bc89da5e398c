"""Dense matrices over exact ring or localized entries.

Sizes here are tiny (2x2 and 3x3), so determinants go by cofactor expansion
and inverses by the adjugate divided through a unit determinant.
"""

from __future__ import annotations

from fractions import Fraction

from .localize import LocalizedElement
from .ring import (
    Coeff,
    ColstabError,
    Mode,
    RingDescriptor,
    RingElement,
    format_element,
    parse_element,
)


class ShapeError(ColstabError):
    pass


class NotAUnitError(ColstabError):
    def __init__(self, det):
        super().__init__(f"determinant {det} is not a unit")
        self.det = det


class Mat:
    """Rectangular matrix; all entries share one ring descriptor and one entry kind."""

    __slots__ = ("rows", "ring", "localized", "_hash")

    def __init__(self, rows):
        rows = [list(r) for r in rows]
        if not rows or not rows[0]:
            raise ShapeError("matrix must be nonempty")
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise ShapeError("ragged rows")
        first = rows[0][0]
        localized = isinstance(first, LocalizedElement)
        ring = first.ring
        for r in rows:
            for x in r:
                if isinstance(x, LocalizedElement) != localized or x.ring != ring:
                    raise ShapeError("entries must share one ring and one entry kind")
        self.rows = rows
        self.ring = ring
        self.localized = localized
        self._hash = None

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(tuple(r) for r in self.rows))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ShapeError("addition needs equal shapes")
        return Mat(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.rows, other.rows)]
        )

    def __sub__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return Mat([[-x for x in r] for r in self.rows])

    def __mul__(self, other):
        if isinstance(other, Mat):
            if self.ncols != other.nrows:
                raise ShapeError(
                    f"cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}"
                )
            cols = list(zip(*other.rows))
            return Mat(
                [[_dot(row, col) for col in cols] for row in self.rows]
            )
        if isinstance(other, (RingElement, LocalizedElement, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (RingElement, LocalizedElement, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, factor) -> Mat:
        return Mat([[x * factor for x in r] for r in self.rows])

    def apply_column(self, column):
        """Matrix times column vector, returned as a list."""
        column = list(column)
        if len(column) != self.ncols:
            raise ShapeError("column length mismatch")
        return [_dot(row, column) for row in self.rows]

    def map(self, fn) -> Mat:
        return Mat([[fn(x) for x in r] for r in self.rows])

    def det(self):
        if self.nrows != self.ncols:
            raise ShapeError("determinant needs a square matrix")
        return _det(self.rows)

    def adjugate(self) -> Mat:
        if self.nrows != self.ncols:
            raise ShapeError("adjugate needs a square matrix")
        n = self.nrows
        if n == 1:
            return identity(self.ring, 1, localized=self.localized)
        cof = [
            [_cofactor(self.rows, i, j) for j in range(n)] for i in range(n)
        ]
        return Mat([[cof[j][i] for j in range(n)] for i in range(n)])

    def inverse(self) -> Mat:
        """Adjugate divided through the determinant; raises unless the determinant is a unit."""
        d = self.det()
        witness = d.unit_inverse()
        if witness is None:
            raise NotAUnitError(d)
        return self.adjugate().scale(witness)

    def __str__(self):
        return "[" + "; ".join(", ".join(str(x) for x in r) for r in self.rows) + "]"

    def __repr__(self):
        return f"Mat({self!s})"


def _dot(row, col):
    acc = None
    for a, b in zip(row, col):
        term = a * b
        acc = term if acc is None else acc + term
    return acc


def _det(rows):
    n = len(rows)
    if n == 1:
        return rows[0][0]
    if n == 2:
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    acc = None
    for i in range(n):
        term = rows[i][0] * _cofactor(rows, i, 0)
        acc = term if acc is None else acc + term
    return acc


def _cofactor(rows, i, j):
    minor = [r[:j] + r[j + 1 :] for k, r in enumerate(rows) if k != i]
    m = _det(minor)
    return m if (i + j) % 2 == 0 else -m


# -- builders -------------------------------------------------------------------


def _entry(ring: RingDescriptor, value, localized: bool):
    elem = ring.const(value) if isinstance(value, (int, Fraction)) else value
    return LocalizedElement(elem, 0) if localized else elem


def identity(ring: RingDescriptor, n: int, localized: bool = False) -> Mat:
    return Mat(
        [
            [_entry(ring, 1 if i == j else 0, localized) for j in range(n)]
            for i in range(n)
        ]
    )


def zeros(ring: RingDescriptor, nrows: int, ncols: int, localized: bool = False) -> Mat:
    return Mat([[_entry(ring, 0, localized) for _ in range(ncols)] for _ in range(nrows)])


def matrix_unit(ring: RingDescriptor, n: int, i: int, j: int) -> Mat:
    """n x n matrix with a single unit entry at row i, column j (1-based)."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("matrix unit index out of range")
    return Mat(
        [
            [ring.const(1 if (r, c) == (i - 1, j - 1) else 0) for c in range(n)]
            for r in range(n)
        ]
    )


def transvection(ring: RingDescriptor, n: int, i: int, j: int, a: RingElement) -> Mat:
    """Identity plus a single off-diagonal entry a at (i, j)."""
    if i == j:
        raise ValueError("transvection indices must differ")
    return identity(ring, n) + matrix_unit(ring, n, i, j).scale(a)


def diagonal(ring: RingDescriptor, entries) -> Mat:
    entries = list(entries)
    n = len(entries)
    rows = [
        [
            entries[i] if i == j else ring.zero
            for j in range(n)
        ]
        for i in range(n)
    ]
    return Mat(rows)


def promote(m: Mat, ring: RingDescriptor) -> Mat:
    """Reinterpret a ring-element matrix in a larger ring."""
    if m.localized:
        raise ShapeError("cannot promote a localized matrix")
    return m.map(lambda x: x.promote(ring))


def to_localized(m: Mat) -> Mat:
    if m.localized:
        return m
    return m.map(lambda x: LocalizedElement(x, 0))


# -- JSON document codec ----------------------------------------------------------

_MODES = {mode.value: mode for mode in Mode}
_COEFFS = {coeff.value: coeff for coeff in Coeff}


def ring_to_document(ring: RingDescriptor) -> dict:
    return {"mode": ring.mode.value, "nvars": ring.nvars, "coeff": ring.coeff.value}


def ring_from_document(doc: dict) -> RingDescriptor:
    try:
        mode = _MODES[doc["mode"]]
        coeff = _COEFFS.get(doc.get("coeff", "int"))
        nvars = int(doc["nvars"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeError(f"bad ring document: {exc}") from exc
    if coeff is None:
        raise ShapeError(f"bad coefficient domain {doc.get('coeff')!r}")
    return RingDescriptor(mode, nvars, coeff)


def mat_to_document(m: Mat) -> dict:
    if m.localized:
        raise ShapeError("only ring-element matrices serialize to documents")
    return {
        "ring": ring_to_document(m.ring),
        "entries": [[format_element(x) for x in row] for row in m.rows],
    }


def mat_from_document(doc: dict) -> Mat:
    if not isinstance(doc, dict) or "ring" not in doc or "entries" not in doc:
        raise ShapeError("matrix document needs 'ring' and 'entries'")
    ring = ring_from_document(doc["ring"])
    entries = doc["entries"]
    if not isinstance(entries, list) or not all(isinstance(r, list) for r in entries):
        raise ShapeError("'entries' must be a list of rows")
    return Mat([[parse_element(ring, text) for text in row] for row in entries])
