"""The stabilizer of the column (c1, c2, c3) in GL(3) and its congruence image.

A certified stabilizer fixes the column exactly and has unit determinant.
Conjugating by the upper-triangular matrix with the column in its last column
localizes a stabilizer to a 2x2 block over denominators in c3; splitting that
block along powers of c3 yields four residues in the first two variables,
which assemble into a 2x2 congruence-type matrix.  The map onto those matrices
is a group homomorphism, and every matrix of the congruence scheme with a
vanishing determinant defect lifts back to an explicit 3x3 stabilizer.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .localize import LocalizedElement, loc_decompose
from .matrix import Mat, identity, mat_to_document, transvection
from .ring import (
    ColstabError,
    NotDivisibleError,
    RingDescriptor,
    RingElement,
    c_adic_decompose,
    delta_split_linear,
    delta_split_quadratic,
    format_element,
    in_delta,
)


class NotStabilizingError(ColstabError):
    def __init__(self, defect):
        super().__init__(
            "matrix does not stabilize the column; defect "
            + str([format_element(x) for x in defect])
        )
        self.defect = defect


class NotInvertibleError(ColstabError):
    def __init__(self, det):
        super().__init__(f"determinant {det} is not a unit")
        self.det = det


class RelationFailedError(ColstabError):
    """An exact division demanded by the residue relations failed."""


class NotInSchemeError(ColstabError):
    pass


def column(ring: RingDescriptor, n: int = 3):
    """The stabilized column (c_1, ..., c_n)."""
    return [ring.c(i) for i in range(1, n + 1)]


def annihilator_block(ring: RingDescriptor) -> Mat:
    """The rank-one, square-zero 2x2 matrix annihilating the column (c1, c2)."""
    c1, c2 = ring.c(1), ring.c(2)
    return Mat([[c1 * c2, -(c1 * c1)], [c2 * c2, -(c1 * c2)]])


def conjugator(ring: RingDescriptor) -> Mat:
    """Upper-triangular change of basis carrying the column into its last column."""
    one, zero = ring.one, ring.zero
    return Mat(
        [
            [one, zero, ring.c(1)],
            [zero, one, ring.c(2)],
            [zero, zero, ring.c(3)],
        ]
    )


@dataclass(frozen=True)
class StabMatrix:
    """A 3x3 matrix certified to fix the column and to have unit determinant."""

    mat: Mat
    certified: bool = True

    @property
    def ring(self) -> RingDescriptor:
        return self.mat.ring

    def __mul__(self, other: "StabMatrix") -> "StabMatrix":
        return StabMatrix(self.mat * other.mat)

    def inverse(self) -> "StabMatrix":
        return StabMatrix(self.mat.inverse())

    def __str__(self):
        return str(self.mat)


def check_stab(m: Mat) -> StabMatrix:
    """Certify membership in the stabilizer group, or raise with a witness."""
    if m.nrows != 3 or m.ncols != 3 or m.localized:
        raise NotStabilizingError([])
    col = column(m.ring)
    image = m.apply_column(col)
    defect = [img - c for img, c in zip(image, col)]
    if any(defect):
        raise NotStabilizingError(defect)
    det = m.det()
    if not det.is_unit():
        raise NotInvertibleError(det)
    return StabMatrix(m)


def reduce(a: StabMatrix) -> Mat:
    """Localized 2x2 block of the conjugated stabilizer.

    Every entry lies in the depth-one module (denominator exponent at most 1).
    """
    ring = a.ring
    c3 = ring.c(3)
    diff = a.mat - identity(ring, 3)
    rows = []
    for i in range(2):
        ci = ring.c(i + 1)
        row = []
        for j in range(2):
            base = ring.one if i == j else ring.zero
            num = (base + diff[i, j]) * c3 - ci * diff[2, j]
            entry = LocalizedElement(num, 1)
            assert entry.denom_exp <= 1
            row.append(entry)
        rows.append(row)
    return Mat(rows)


@dataclass(frozen=True)
class ReductionParts:
    """Parts of a reduced block along powers of c3.

    identity + pole * c3^-1 + order0 + order1 * c3 + tail * c3^2 reconstructs
    the block; pole, order0 and order1 are free of variable 3.
    """

    pole: Mat
    order0: Mat
    order1: Mat
    tail: Mat

    def reconstruct(self) -> Mat:
        ring = self.pole.ring
        c3 = ring.c(3)
        loc = lambda m, e: m.map(lambda x: LocalizedElement(x, e))
        return (
            loc(identity(ring, 2), 0)
            + loc(self.pole, 1)
            + loc(self.order0, 0)
            + loc(self.order1 * c3, 0)
            + loc(self.tail * (c3 * c3), 0)
        )


def r_decompose(r: Mat) -> ReductionParts:
    """Entrywise depth-two split of a reduced block minus the identity."""
    ring = r.ring
    diff = r - identity(ring, 2, localized=r.localized)
    pole, order0, order1, tail = [], [], [], []
    for i in range(2):
        row = [[], [], [], []]
        for j in range(2):
            entry = diff[i, j]
            if not isinstance(entry, LocalizedElement):
                entry = LocalizedElement(entry, 0)
            dec = loc_decompose(entry, 2)
            row[0].append(dec.pole)
            row[1].append(dec.heads[0])
            row[2].append(dec.heads[1])
            row[3].append(dec.tail)
        pole.append(row[0])
        order0.append(row[1])
        order1.append(row[2])
        tail.append(row[3])
    return ReductionParts(Mat(pole), Mat(order0), Mat(order1), Mat(tail))


@dataclass(frozen=True)
class ResidueQuadruple:
    """The four residues of a stabilizer with respect to c3."""

    alpha: RingElement
    beta: RingElement
    gamma: RingElement
    delta: RingElement

    def to_matrix(self) -> Mat:
        ring = self.alpha.ring
        one = ring.one
        return Mat([[one + self.beta, self.alpha], [self.delta, one + self.gamma]])

    def __iter__(self):
        return iter((self.alpha, self.beta, self.gamma, self.delta))

    def __str__(self):
        return (
            f"(alpha={self.alpha}, beta={self.beta}, "
            f"gamma={self.gamma}, delta={self.delta})"
        )


def _solve_multiple(m: Mat, block: Mat) -> RingElement:
    """The unique scalar s with m = s * block, checking all four entries."""
    try:
        s = m[0, 0].divide_exact(block[0, 0])
    except NotDivisibleError as exc:
        raise RelationFailedError(f"inexact division in residue relation: {exc}") from exc
    if block.scale(s) != m:
        raise RelationFailedError("matrix is not a scalar multiple of the block")
    return s


def residues(a: StabMatrix) -> ResidueQuadruple:
    """Residues extracted from the reduction relations; the authoritative route."""
    block = annihilator_block(a.ring)
    parts = r_decompose(reduce(a))
    alpha = _solve_multiple(parts.pole, block)
    beta = _solve_multiple(parts.order0 * block, block)
    gamma = _solve_multiple(block * parts.order0, block)
    delta = _solve_multiple(block * parts.order1 * block, block)
    return ResidueQuadruple(alpha, beta, gamma, delta)


def residues_closed_form(a: StabMatrix) -> ResidueQuadruple:
    """Residues from closed formulas in the c3-heads of the matrix minus identity."""
    ring = a.ring
    c1, c2 = ring.c(1), ring.c(2)
    diff = a.mat - identity(ring, 3)

    def heads(i: int, j: int):
        dec = c_adic_decompose(diff[i, j], 3, 2)
        return dec.heads[0], dec.heads[1]

    a11_0, a11_1 = heads(0, 0)
    a12_0, a12_1 = heads(0, 1)
    a21_0, a21_1 = heads(1, 0)
    a22_0, a22_1 = heads(1, 1)
    a31_0, a31_1 = heads(2, 0)
    a32_0, a32_1 = heads(2, 1)
    try:
        alpha = (-a31_0).divide_exact(c2)
        alpha_check = a32_0.divide_exact(c1)
        gamma = a11_0 - a21_0.divide_exact(c2) * c1
    except NotDivisibleError as exc:
        raise RelationFailedError(f"inexact division in closed form: {exc}") from exc
    if alpha != alpha_check:
        raise RelationFailedError("the two closed forms for alpha disagree")
    beta = -a31_1 * c1 - a32_1 * c2
    delta = (a11_1 - a22_1) * c1 * c2 + a12_1 * c2 * c2 - a21_1 * c1 * c1
    return ResidueQuadruple(alpha, beta, gamma, delta)


def compose_residues(q: ResidueQuadruple, q2: ResidueQuadruple) -> ResidueQuadruple:
    """Residues of a product from the residues of the factors (same operand order)."""
    alpha, beta, gamma, delta = q
    alpha2, beta2, gamma2, delta2 = q2
    return ResidueQuadruple(
        alpha + alpha * gamma2 + alpha2 + alpha2 * beta,
        beta + beta2 + beta * beta2 + alpha * delta2,
        gamma + gamma2 + gamma * gamma2 + delta * alpha2,
        delta + delta2 + delta * beta2 + gamma * delta2,
    )


def _two_variable(g: RingElement) -> bool:
    return all(g.free_of(k) for k in range(3, g.ring.nvars + 1))


def in_scheme(b: Mat) -> bool:
    """Membership in the congruence scheme: diagonal 1 modulo the augmentation
    ideal, lower-left in its square, unit determinant, two-variable entries."""
    if b.nrows != 2 or b.ncols != 2 or b.localized:
        return False
    ring = b.ring
    one = ring.one
    entries = [b[0, 0] - one, b[0, 1], b[1, 0], b[1, 1] - one]
    if not all(_two_variable(x) for x in entries):
        return False
    return (
        in_delta(b[0, 0] - one, 1)
        and in_delta(b[1, 1] - one, 1)
        and in_delta(b[1, 0], 2)
        and b.det().is_unit()
    )


@dataclass(frozen=True)
class CongruenceMatrix:
    """A 2x2 matrix validated against the congruence scheme."""

    mat: Mat

    def __post_init__(self):
        if not in_scheme(self.mat):
            raise NotInSchemeError("matrix does not satisfy the congruence scheme")

    @property
    def ring(self) -> RingDescriptor:
        return self.mat.ring

    def residues(self) -> ResidueQuadruple:
        one = self.ring.one
        return ResidueQuadruple(
            self.mat[0, 1], self.mat[0, 0] - one, self.mat[1, 1] - one, self.mat[1, 0]
        )


def rho(a: StabMatrix) -> CongruenceMatrix:
    """The homomorphism onto congruence-type 2x2 matrices over two variables."""
    return CongruenceMatrix(residues(a).to_matrix())


@dataclass(frozen=True)
class CandidateSplits:
    """Free coordinates of a lifted stabilizer candidate."""

    alpha: RingElement
    beta1: RingElement
    beta2: RingElement
    gamma1: RingElement
    gamma2: RingElement
    d11: RingElement
    d12: RingElement
    d12p: RingElement
    d22: RingElement


def candidate_from_splits(splits: CandidateSplits) -> tuple[Mat, RingElement]:
    """Explicit column-fixing 3x3 matrix assembled from split coordinates.

    Returns the matrix together with its determinant defect: the difference
    between the candidate determinant and the determinant of the 2x2 matrix
    the splits reconstruct.  The defect vanishes exactly when the candidate is
    as invertible as its 2x2 source.
    """
    s = splits
    ring = s.alpha.ring
    one = ring.one
    c1, c2, c3 = ring.c(1), ring.c(2), ring.c(3)
    cand = Mat(
        [
            [
                one + s.gamma2 * c2 + s.d12p * c3,
                -s.gamma2 * c1 + s.d22 * c3,
                -s.d12p * c1 - s.d22 * c2,
            ],
            [
                -s.gamma1 * c2 - s.d11 * c3,
                one + s.gamma1 * c1 - s.d12 * c3,
                s.d11 * c1 + s.d12 * c2,
            ],
            [
                -s.alpha * c2 - s.beta1 * c3,
                s.alpha * c1 - s.beta2 * c3,
                one + s.beta1 * c1 + s.beta2 * c2,
            ],
        ]
    )
    defect = (
        s.d12p * c3
        + s.gamma1 * s.d12p * c1 * c3
        - s.d12 * c3
        - s.d12p * s.d12 * c3 * c3
        - s.gamma2 * s.d12 * c2 * c3
        + s.beta2 * s.d12p * c2 * c3
        - s.beta1 * s.d12 * c1 * c3
        - s.beta1 * s.d22 * c2 * c3
        + s.gamma1 * s.d22 * c2 * c3
        - s.gamma2 * s.d11 * c1 * c3
        + s.d11 * s.d22 * c3 * c3
        + s.beta2 * s.d11 * c1 * c3
    )
    return cand, defect


def matrix_from_splits(splits: CandidateSplits) -> Mat:
    """The 2x2 matrix a split tuple reconstructs."""
    ring = splits.alpha.ring
    c1, c2 = ring.c(1), ring.c(2)
    beta = splits.beta1 * c1 + splits.beta2 * c2
    gamma = splits.gamma1 * c1 + splits.gamma2 * c2
    delta = (
        splits.d11 * c1 * c1
        + (splits.d12 + splits.d12p) * c1 * c2
        + splits.d22 * c2 * c2
    )
    return ResidueQuadruple(splits.alpha, beta, gamma, delta).to_matrix()


def canonical_splits(b: CongruenceMatrix) -> CandidateSplits:
    q = b.residues()
    beta1, beta2 = delta_split_linear(q.beta)
    gamma1, gamma2 = delta_split_linear(q.gamma)
    d11, d12, d12p, d22 = delta_split_quadratic(q.delta)
    return CandidateSplits(q.alpha, beta1, beta2, gamma1, gamma2, d11, d12, d12p, d22)


def build_preimage_candidate(b: CongruenceMatrix) -> tuple[Mat, RingElement]:
    """Candidate preimage of a scheme matrix via the canonical splits.

    The candidate always fixes the column; it is a certified stabilizer
    exactly when the returned determinant defect is zero and the source
    determinant is a unit.
    """
    if b.ring.nvars < 3:
        raise NotInSchemeError("lifting needs a ring with at least three variables")
    return candidate_from_splits(canonical_splits(b))


@dataclass(frozen=True)
class SearchBudget:
    """Bounds for the transvection-preimage search."""

    word_length: int = 4
    coeff_bound: int = 2
    split_bound: int = 2


DEFAULT_BUDGET = SearchBudget()


@dataclass(frozen=True)
class PreimageReport:
    status: str  # "SUCCESS" | "OBSTRUCTED"
    preimage: Optional[StabMatrix] = None
    transcript: Optional[dict] = None
    stage: Optional[str] = None
    obstruction: Optional[RingElement] = None

    @property
    def ok(self) -> bool:
        return self.status == "SUCCESS"

    def to_document(self) -> dict:
        doc = {"status": self.status}
        if self.stage is not None:
            doc["stage"] = self.stage
        if self.obstruction is not None:
            doc["obstruction"] = format_element(self.obstruction)
        if self.preimage is not None:
            doc["preimage"] = mat_to_document(self.preimage.mat)
        if self.transcript is not None:
            doc["transcript"] = self.transcript
        return doc


def _specialize_mat(m: Mat, k: int) -> Mat:
    return m.map(lambda x: x.specialize(k))


def _generator_images(ring: RingDescriptor, coeff_bound: int):
    """Images of single tame letters with constant parameters, with witnesses."""
    from . import tame  # deferred import; tame builds on this module

    letters = []
    for value in range(-coeff_bound, coeff_bound + 1):
        if value == 0:
            continue
        a = ring.const(value)
        for (i, j, k) in ((1, 2, 3), (2, 1, 3), (3, 1, 2)):
            letters.append(tame.Letter("T", (i, j, k), a))
        for (i, j) in ((1, 2), (1, 3), (2, 3)):
            letters.append(tame.Letter("S", (i, j), a))
    images = []
    for letter in letters:
        images.append((rho(tame.eval_word(ring, tame.TameWord((letter,)))).mat, letter))
    return images


def _search_transvection_preimage(
    ring: RingDescriptor, nu: RingElement, budget: SearchBudget
) -> Optional[StabMatrix]:
    """Bounded search for a stabilizer whose image is the lower transvection by nu*c1*c2.

    Tries candidate lifts over alternative lower-left splits first, then tame
    words up to the budgeted length via a meet-in-the-middle scan.
    """
    from . import tame

    zero = ring.zero
    target = transvection(ring, 2, 2, 1, nu * ring.c(1) * ring.c(2))
    # alternative splits of the lower-left coefficient
    for s in range(-budget.split_bound, budget.split_bound + 1):
        d12 = ring.const(s)
        splits = CandidateSplits(
            zero, zero, zero, zero, zero, zero, d12, nu - d12, zero
        )
        cand, defect = candidate_from_splits(splits)
        if defect.is_zero and cand.det().is_unit():
            lifted = StabMatrix(cand)
            if rho(lifted).mat == target:
                return lifted
    # tame words up to the budgeted length, split into two halves
    half = max(budget.word_length // 2, 1)
    images = _generator_images(ring, budget.coeff_bound)
    seen: dict[Mat, tuple] = {identity(ring, 2): ()}
    frontier = [(identity(ring, 2), ())]
    for _ in range(half):
        new_frontier = []
        for mat, word in frontier:
            for img, letter in images:
                prod = mat * img
                if prod not in seen:
                    seen[prod] = word + (letter,)
                    new_frontier.append((prod, word + (letter,)))
        frontier = new_frontier
    for mat, word in seen.items():
        need = mat.inverse() * target
        other = seen.get(need)
        if other is None:
            continue
        candidate_word = tame.TameWord(word + other)
        lifted = tame.eval_word(ring, candidate_word)
        if rho(lifted).mat == target:
            return lifted
    return None


def preimage(b: CongruenceMatrix, budget: SearchBudget = DEFAULT_BUDGET) -> PreimageReport:
    """Construct a certified stabilizer mapping onto a scheme matrix.

    Factors the input through its variable-2 specialization, corrects the
    mixed lower-left coordinate by a transvection, lifts both factors
    explicitly, and searches for a preimage of the correcting transvection
    when it is nontrivial.  Reports the residual coordinate as an obstruction
    when the bounded search fails.
    """
    ring = b.ring
    if ring.nvars < 3:
        raise NotInSchemeError("preimage needs a ring with at least three variables")
    c1, c2 = ring.c(1), ring.c(2)

    base = CongruenceMatrix(_specialize_mat(b.mat, 2))
    lift_base, defect = build_preimage_candidate(base)
    assert defect.is_zero
    first = check_stab(lift_base)

    remainder = base.mat.inverse() * b.mat
    _, mu, _, _ = delta_split_quadratic(remainder[1, 0])
    correction = transvection(ring, 2, 2, 1, -mu * c1 * c2)
    corrected = CongruenceMatrix(remainder * correction)
    lift_corr, defect2 = build_preimage_candidate(corrected)
    assert defect2.is_zero
    second = check_stab(lift_corr)

    if mu.is_zero:
        result = first * second
    else:
        lifted_t = _search_transvection_preimage(ring, -mu, budget)
        if lifted_t is None:
            return PreimageReport(
                status="OBSTRUCTED", stage="transvection-preimage", obstruction=mu
            )
        result = first * second * lifted_t.inverse()

    image = rho(result)
    if image.mat != b.mat:
        return PreimageReport(
            status="OBSTRUCTED", stage="verification", obstruction=mu
        )
    transcript = {
        "image_matches": True,
        "determinant": format_element(result.mat.det()),
        "rho": [[format_element(x) for x in row] for row in image.mat.rows],
    }
    return PreimageReport(status="SUCCESS", preimage=result, transcript=transcript)


def in_H(a: StabMatrix) -> bool:
    """Membership in the explicit kernel subgroup: the matrix minus identity has
    first two columns divisible by c3^2 and last column divisible by c3."""
    ring = a.ring
    c3 = ring.c(3)
    c3_sq = c3 * c3
    diff = a.mat - identity(ring, 3)
    for i in range(3):
        for j in range(3):
            divisor = c3 if j == 2 else c3_sq
            try:
                diff[i, j].divide_exact(divisor)
            except NotDivisibleError:
                return False
    return True
