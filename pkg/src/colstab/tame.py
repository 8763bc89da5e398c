"""Generators of the tame stabilizer, word sampling, and the Cohn matrix.

Two families generate the tame subgroup: row perturbations T(i, j, k; a) that
cancel against the column, and embedded 2x2 one-parameter stabilizers
S(i, j; a).  Parameters may be arbitrary ring elements; membership is
certified on construction.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .matrix import Mat, identity, matrix_unit
from .ring import (
    Mode,
    NotDivisibleError,
    RingDescriptor,
    RingElement,
    format_element,
)
from .stab import (
    ColstabError,
    StabMatrix,
    annihilator_block,
    check_stab,
    rho,
)


class NotInStab2Error(ColstabError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Letter:
    """One generator token: kind 'T' with indices (i, j, k) or 'S' with (i, j)."""

    kind: str
    indices: tuple
    param: RingElement

    def to_obj(self) -> dict:
        obj = {"kind": self.kind}
        if self.kind == "T":
            obj["i"], obj["j"], obj["k"] = self.indices
        else:
            obj["i"], obj["j"] = self.indices
        obj["a"] = format_element(self.param)
        return obj

    @staticmethod
    def from_obj(ring: RingDescriptor, obj: dict) -> "Letter":
        kind = obj["kind"]
        param = ring.parse(obj["a"])
        if kind == "T":
            return Letter("T", (obj["i"], obj["j"], obj["k"]), param)
        if kind == "S":
            return Letter("S", (obj["i"], obj["j"]), param)
        raise ValueError(f"unknown letter kind {kind!r}")

    def evaluate(self, ring: RingDescriptor) -> StabMatrix:
        if self.kind == "T":
            i, j, k = self.indices
            return gen_T(ring, i, j, k, self.param)
        i, j = self.indices
        return gen_S(ring, i, j, self.param)


@dataclass(frozen=True)
class TameWord:
    letters: tuple

    def to_json(self) -> list:
        return [letter.to_obj() for letter in self.letters]

    @staticmethod
    def from_json(ring: RingDescriptor, data: list) -> "TameWord":
        return TameWord(tuple(Letter.from_obj(ring, obj) for obj in data))

    def __len__(self):
        return len(self.letters)


def gen_T(ring: RingDescriptor, i: int, j: int, k: int, a) -> StabMatrix:
    """Row perturbation: identity plus a*c_k at (i, j) minus a*c_j at (i, k)."""
    if i in (j, k) or j >= k:
        raise ValueError("indices must satisfy i not in {j, k} and j < k")
    for idx in (i, j, k):
        if not 1 <= idx <= 3:
            raise ValueError("indices must lie in 1..3")
    if isinstance(a, int):
        a = ring.const(a)
    m = (
        identity(ring, 3)
        + matrix_unit(ring, 3, i, j).scale(a * ring.c(k))
        - matrix_unit(ring, 3, i, k).scale(a * ring.c(j))
    )
    return check_stab(m)


def gen_S(ring: RingDescriptor, i: int, j: int, a) -> StabMatrix:
    """Embedded one-parameter 2x2 stabilizer acting on rows and columns i, j."""
    if not (1 <= i < j <= 3):
        raise ValueError("indices must satisfy 1 <= i < j <= 3")
    if isinstance(a, int):
        a = ring.const(a)
    ci, cj = ring.c(i), ring.c(j)
    m = (
        identity(ring, 3)
        + matrix_unit(ring, 3, i, i).scale(a * ci * cj)
        - matrix_unit(ring, 3, i, j).scale(a * ci * ci)
        + matrix_unit(ring, 3, j, i).scale(a * cj * cj)
        - matrix_unit(ring, 3, j, j).scale(a * ci * cj)
    )
    return check_stab(m)


def stab2(a: RingElement) -> Mat:
    """The 2x2 stabilizer of the column (c1, c2): identity plus a times the
    square-zero block."""
    ring = a.ring
    return identity(ring, 2) + annihilator_block(ring).scale(a)


def stab2_param(m: Mat) -> RingElement:
    """Invert stab2, rejecting anything outside the one-parameter family."""
    if m.nrows != 2 or m.ncols != 2 or m.localized:
        raise NotInStab2Error("input must be a 2x2 ring-element matrix")
    ring = m.ring
    col = [ring.c(1), ring.c(2)]
    image = m.apply_column(col)
    defect = [img - c for img, c in zip(image, col)]
    if any(defect):
        raise NotInStab2Error("matrix does not stabilize the column", defect)
    det = m.det()
    if det != ring.one:
        raise NotInStab2Error("determinant is not 1", det)
    try:
        upper = (m[0, 0] - ring.one).divide_exact(ring.c(2))
        a = upper.divide_exact(ring.c(1))
    except NotDivisibleError as exc:
        raise NotInStab2Error(f"entry fails the shape: {exc}", m[0, 0]) from exc
    if stab2(a) != m:
        raise NotInStab2Error("matrix is not in the one-parameter family", m[0, 1])
    return a


def eval_word(ring: RingDescriptor, word: TameWord) -> StabMatrix:
    result = identity(ring, 3)
    for letter in word.letters:
        result = result * letter.evaluate(ring).mat
    return check_stab(result)


_T_INDICES = ((1, 2, 3), (2, 1, 3), (3, 1, 2))
_S_INDICES = ((1, 2), (1, 3), (2, 3))


def _random_param(rng: random.Random, ring: RingDescriptor, coeff_bound: int) -> RingElement:
    coeff = rng.randint(-coeff_bound, coeff_bound)
    exps = [0] * ring.nvars
    for _ in range(rng.randint(0, 2)):
        idx = rng.randrange(ring.nvars)
        if ring.mode is Mode.POLYNOMIAL:
            exps[idx] += 1
        else:
            exps[idx] += rng.choice((-1, 1))
    return ring.monomial(coeff, exps)


def sample_tame(
    ring: RingDescriptor, seed: int, length: int, coeff_bound: int = 2
) -> TameWord:
    """Deterministic word sampler: uniform token kinds and index tuples,
    parameters monomials of total degree at most 2 with bounded coefficients."""
    rng = random.Random(seed)
    letters = []
    for _ in range(length):
        param = _random_param(rng, ring, coeff_bound)
        if rng.random() < 0.5:
            letters.append(Letter("T", rng.choice(_T_INDICES), param))
        else:
            letters.append(Letter("S", rng.choice(_S_INDICES), param))
    return TameWord(tuple(letters))


def is_triangular(b: Mat) -> bool:
    return b[1, 0].is_zero or b[0, 1].is_zero


def prop2_check(ring: RingDescriptor, letter: Letter) -> bool:
    """Whether the image of a single generator token is triangular."""
    return is_triangular(rho(letter.evaluate(ring)).mat)


def cohn_matrix(ring: RingDescriptor) -> Mat:
    """The classical unit-determinant 2x2 matrix outside the elementary subgroup."""
    if ring.mode is not Mode.POLYNOMIAL:
        raise ValueError("the Cohn matrix lives over the polynomial ring")
    if ring.nvars < 2:
        raise ValueError("the Cohn matrix needs at least two variables")
    a1, a2 = ring.var(1), ring.var(2)
    one = ring.one
    return Mat(
        [
            [one + a1 * a2, -(a1 * a1)],
            [a2 * a2, one - a1 * a2],
        ]
    )
