"""Exact rational linear algebra over basis-indexed graded vector spaces.

Everything downstream (cohomology, Hodge operators, Cartan complexes)
reduces to kernels, images and quotients of per-degree rational matrices.
All arithmetic uses ``fractions.Fraction``; there is no floating point
anywhere.  The canonical representative of a subspace is the reduced row
echelon form of its generator matrix, which makes every "choose a basis"
step deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


class LinAlgError(Exception):
    """Base class for errors raised by this module."""


class DegreeError(LinAlgError):
    """A degree absent from a graded space was addressed."""


class NotSubcomplexError(LinAlgError):
    """quotient() was called with im not contained in ker."""


class AmbientMismatchError(LinAlgError):
    """Two subspaces of different ambient degrees were compared."""


def fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(entries: Iterable) -> Vec:
    return tuple(fr(x) for x in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(nrows: int, ncols: int) -> Mat:
    row = (Fraction(0),) * ncols
    return tuple(row for _ in range(nrows))


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
        for i in range(n)
    )


def mat_mul(a: Mat, b: Mat) -> Mat:
    """a @ b with a: m x n, b: n x p."""
    if a and b:
        assert len(a[0]) == len(b), "shape mismatch"
    p = len(b[0]) if b else 0
    bt = tuple(zip(*b)) if b else ()
    out = []
    for row in a:
        out.append(
            tuple(
                sum((x * y for x, y in zip(row, col)), Fraction(0))
                for col in bt
            )
            if bt
            else (Fraction(0),) * p
        )
    return tuple(out)


def mat_vec(a: Mat, v: Vec) -> Vec:
    return tuple(sum((x * y for x, y in zip(row, v)), Fraction(0)) for row in a)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Mat) -> Mat:
    c = fr(c)
    return tuple(tuple(c * x for x in r) for r in a)


def transpose(a: Mat) -> Mat:
    return tuple(zip(*a)) if a else ()


def is_zero_mat(a: Mat) -> bool:
    return all(all(x == 0 for x in r) for r in a)


def rref(a: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns (Gauss-Jordan, exact)."""
    rows = [list(r) for r in a]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, nrows):
            if rows[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = Fraction(1) / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def row_space(a: Mat) -> Mat:
    """Canonical (RREF) basis of the row space, zero rows dropped."""
    r, piv = rref(a)
    return r[: len(piv)]


def nullspace(a: Mat, ncols: Optional[int] = None) -> Mat:
    """Canonical basis of {v : a v = 0}, rows in RREF."""
    if ncols is None:
        ncols = len(a[0]) if a else 0
    if not a:
        return identity(ncols)
    r, piv = rref(a)
    pivset = set(piv)
    free = [c for c in range(ncols) if c not in pivset]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        basis.append(tuple(v))
    return row_space(tuple(basis)) if basis else ()


def reduce_against(rows: Mat, pivots: Sequence[int], v: Vec) -> Vec:
    """Residual of v after elimination by RREF rows."""
    w = list(v)
    for row, p in zip(rows, pivots):
        if w[p] != 0:
            f = w[p]
            w = [x - f * y for x, y in zip(w, row)]
    return tuple(w)


def solve(a: Mat, b: Vec) -> Optional[Vec]:
    """One exact solution of a x = b with free variables set to 0.

    Returns None when the system is inconsistent.  The choice of
    particular solution is deterministic (echelon-least).
    """
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    aug = tuple(row + (bi,) for row, bi in zip(a, b))
    if not aug:
        return (Fraction(0),) * ncols if all(x == 0 for x in b) else None
    r, piv = rref(aug)
    if ncols in piv:
        return None
    x = [Fraction(0)] * ncols
    for i, p in enumerate(piv):
        x[p] = r[i][ncols]
    return tuple(x)


def solve_many(a: Mat, bs: Sequence[Vec]) -> list[Optional[Vec]]:
    """Solve a x = b for several right-hand sides, sharing the elimination."""
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    k = len(bs)
    if nrows == 0:
        return [
            (Fraction(0),) * ncols if all(x == 0 for x in b) else None
            for b in bs
        ]
    aug = tuple(
        row + tuple(bs[j][i] for j in range(k)) for i, row in enumerate(a)
    )
    r, piv = rref(aug)
    piv_main = [p for p in piv if p < ncols]
    sols: list[Optional[Vec]] = []
    for j in range(k):
        col = ncols + j
        # consistent iff no pivot row has zero main part and nonzero rhs
        ok = True
        for i in range(len(piv_main), len(r)):
            if all(r[i][c] == 0 for c in range(ncols)) and r[i][col] != 0:
                ok = False
                break
        # rows beyond rank of [a] but within rank of aug
        for i, p in enumerate(piv):
            if p >= ncols and r[i][col] != 0:
                ok = False
        if not ok:
            sols.append(None)
            continue
        x = [Fraction(0)] * ncols
        for i, p in enumerate(piv_main):
            x[p] = r[i][col]
        sols.append(tuple(x))
    return sols


class GradedSpace:
    """Finite-dimensional graded vector space with labelled bases.

    Degrees with dimension 0 are represented explicitly, so degree-shifted
    compositions never index a missing block.
    """

    def __init__(self, labels: dict[int, Sequence[str]]):
        self._labels = {k: tuple(v) for k, v in sorted(labels.items())}
        for k, labs in self._labels.items():
            if len(set(labs)) != len(labs):
                raise LinAlgError(f"duplicate basis labels in degree {k}")

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self._labels)

    def labels(self, k: int) -> tuple[str, ...]:
        return self._labels.get(k, ())

    def dim(self, k: int) -> int:
        return len(self._labels.get(k, ()))

    def has_degree(self, k: int) -> bool:
        return k in self._labels

    def total_dim(self) -> int:
        return sum(len(v) for v in self._labels.values())

    def zero_vec(self, k: int) -> Vec:
        return (Fraction(0),) * self.dim(k)

    def basis_vec(self, k: int, i: int) -> Vec:
        n = self.dim(k)
        return tuple(Fraction(1 if j == i else 0) for j in range(n))

    def __eq__(self, other):
        return isinstance(other, GradedSpace) and self._labels == other._labels

    def __repr__(self):
        dims = {k: len(v) for k, v in self._labels.items()}
        return f"GradedSpace({dims})"


class LinearOp:
    """Degree-homogeneous linear map between graded spaces.

    ``blocks[k]`` maps the degree-k block of the source to degree
    ``k + shift`` of the target; missing blocks are zero.
    """

    def __init__(self, source: GradedSpace, target: GradedSpace, shift: int,
                 blocks: dict[int, Mat]):
        self.source = source
        self.target = target
        self.shift = shift
        self.blocks = {}
        for k, b in blocks.items():
            nr, nc = len(b), (len(b[0]) if b else 0)
            want = (target.dim(k + shift), source.dim(k))
            if nr == 0 and want[0] == 0:
                continue
            if (nr, nc) != want:
                raise LinAlgError(
                    f"block {k} has shape {(nr, nc)}, expected {want}")
            if not is_zero_mat(b):
                self.blocks[k] = b

    @classmethod
    def zero(cls, source: GradedSpace, target: GradedSpace, shift: int):
        return cls(source, target, shift, {})

    @classmethod
    def identity_op(cls, space: GradedSpace):
        return cls(space, space, 0,
                   {k: identity(space.dim(k)) for k in space.degrees})

    def block(self, k: int) -> Mat:
        if k in self.blocks:
            return self.blocks[k]
        return zeros(self.target.dim(k + self.shift), self.source.dim(k))

    def apply_block(self, k: int, v: Vec) -> Vec:
        return mat_vec(self.block(k), v)

    def compose(self, other: "LinearOp") -> "LinearOp":
        """self after other (degree shifts add)."""
        if other.target is not self.source and other.target != self.source:
            raise LinAlgError("composition space mismatch")
        shift = self.shift + other.shift
        blocks = {}
        for k in other.source.degrees:
            mid = self.source.dim(k + other.shift)
            if mid == 0:
                b = zeros(self.target.dim(k + shift), other.source.dim(k))
            else:
                b = mat_mul(self.block(k + other.shift), other.block(k))
            blocks[k] = b
        return LinearOp(other.source, self.target, shift, blocks)

    def add(self, other: "LinearOp") -> "LinearOp":
        if self.shift != other.shift:
            raise LinAlgError("cannot add operators of different shifts")
        blocks = {
            k: mat_add(self.block(k), other.block(k))
            for k in self.source.degrees
        }
        return LinearOp(self.source, self.target, self.shift, blocks)

    def sub(self, other: "LinearOp") -> "LinearOp":
        return self.add(other.scale(-1))

    def scale(self, c) -> "LinearOp":
        return LinearOp(self.source, self.target, self.shift,
                        {k: mat_scale(c, b) for k, b in self.blocks.items()})

    def is_zero(self) -> bool:
        return not self.blocks

    def equals(self, other: "LinearOp") -> bool:
        return self.shift == other.shift and self.sub(other).is_zero()

    def __repr__(self):
        return f"LinearOp(shift={self.shift}, blocks={sorted(self.blocks)})"


def commutator(a: LinearOp, b: LinearOp) -> LinearOp:
    return a.compose(b).sub(b.compose(a))


def anticommutator(a: LinearOp, b: LinearOp) -> LinearOp:
    return a.compose(b).add(b.compose(a))


@dataclass(frozen=True)
class Subspace:
    """Subspace of one degree block, stored as canonical RREF rows."""

    space: GradedSpace
    degree: int
    rows: Mat  # reduced row echelon form, no zero rows
    pivots: tuple[int, ...]

    @classmethod
    def from_vectors(cls, space: GradedSpace, degree: int,
                     vectors: Iterable[Vec]) -> "Subspace":
        m = tuple(vectors)
        r, piv = rref(m) if m else ((), ())
        return cls(space, degree, r[: len(piv)], piv)

    @classmethod
    def zero(cls, space: GradedSpace, degree: int) -> "Subspace":
        return cls(space, degree, (), ())

    @classmethod
    def full(cls, space: GradedSpace, degree: int) -> "Subspace":
        n = space.dim(degree)
        return cls(space, degree, identity(n), tuple(range(n)))

    @property
    def dim(self) -> int:
        return len(self.rows)

    def contains(self, v: Vec) -> bool:
        return all(x == 0 for x in reduce_against(self.rows, self.pivots, v))

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.rows)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Intersection via the kernel of the stacked coordinate map."""
        _check_ambient(self, other)
        n = self.space.dim(self.degree)
        a, b = self.rows, other.rows
        if not a or not b:
            return Subspace.zero(self.space, self.degree)
        # v = x.a = y.b ; solve [a^T | -b^T] (x,y)^T = 0
        stacked = tuple(
            tuple(a[i][c] for i in range(len(a)))
            + tuple(-b[j][c] for j in range(len(b)))
            for c in range(n)
        )
        null = nullspace(stacked, len(a) + len(b))
        vecs = [
            tuple(
                sum((coef[i] * a[i][c] for i in range(len(a))), Fraction(0))
                for c in range(n)
            )
            for coef in null
        ]
        return Subspace.from_vectors(self.space, self.degree, vecs)

    def sum(self, other: "Subspace") -> "Subspace":
        _check_ambient(self, other)
        return Subspace.from_vectors(self.space, self.degree,
                                     self.rows + other.rows)


def _check_ambient(a: Subspace, b: Subspace):
    if a.degree != b.degree or a.space.dim(a.degree) != b.space.dim(b.degree):
        raise AmbientMismatchError(
            f"subspaces live in different ambient degrees: "
            f"{a.degree} vs {b.degree}")


def kernel(op: LinearOp, degree: int) -> Subspace:
    """Canonical echelon basis of the nullspace of the degree block."""
    if not op.source.has_degree(degree):
        raise DegreeError(f"degree {degree} absent from source space")
    rows = nullspace(op.block(degree), op.source.dim(degree))
    return Subspace.from_vectors(op.source, degree, rows)


def image(op: LinearOp, degree: int) -> Subspace:
    """Canonical echelon basis of the column space of the degree block."""
    if not op.source.has_degree(degree):
        raise DegreeError(f"degree {degree} absent from source space")
    cols = transpose(op.block(degree))
    return Subspace.from_vectors(op.target, degree + op.shift, cols)


def quotient(ker: Subspace, im: Subspace) -> tuple[int, Mat]:
    """Dimension of ker/im and a deterministic lifted representative basis.

    Representatives are the echelon completion: kernel rows that increase
    the rank over the image, in echelon order.
    """
    _check_ambient(ker, im)
    if not ker.contains_subspace(im):
        bad = next(r for r in im.rows if not ker.contains(r))
        raise NotSubcomplexError(
            f"image vector not in kernel (d^2 != 0 upstream?): {bad}")
    rows = list(im.rows)
    pivots = list(im.pivots)
    reps = []
    for r in ker.rows:
        res = reduce_against(tuple(rows), tuple(pivots), r)
        if any(x != 0 for x in res):
            reps.append(r)
            p = next(i for i, x in enumerate(res) if x != 0)
            res = tuple(x / res[p] for x in res)
            rows.append(res)
            pivots.append(p)
    return len(reps), tuple(reps)


def subspace_equal(a: Subspace, b: Subspace) -> tuple[bool, Optional[Vec]]:
    """Equality of canonical forms; on failure a witness vector is returned.

    The witness lies in exactly one of the two subspaces.
    """
    _check_ambient(a, b)
    if a.rows == b.rows:
        return True, None
    for r in a.rows:
        if not b.contains(r):
            return False, r
    for r in b.rows:
        if not a.contains(r):
            return False, r
    return True, None  # pragma: no cover - RREF uniqueness makes this dead
