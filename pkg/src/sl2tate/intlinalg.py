"""Exact linear algebra over Z: HNF, SNF, kernels, cokernels, and finitely
generated abelian groups presented by relation matrices.

All matrices are small and dense; entries are arbitrary-precision Python ints.
Conventions:
  * hnf() is a row-style Hermite normal form: H = U*M with U unimodular,
    pivots positive, entries above each pivot reduced into [0, pivot).
  * snf() returns the invariant factors d1 | d2 | ... (1s kept, 0s dropped).
  * cokernel(M) treats the columns of M as relations among row-many
    generators, i.e. the group Z^rows / colspan(M).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with g = gcd(a, b) >= 0 and x*a + y*b = g."""
    x, next_x = 1, 0
    y, next_y = 0, 1
    g, next_g = a, b
    while next_g:
        q = g // next_g
        x, next_x = next_x, x - q * next_x
        y, next_y = next_y, y - q * next_y
        g, next_g = next_g, g - q * next_g
    if g < 0:
        x, y, g = -x, -y, -g
    return g, x, y


@dataclass(frozen=True)
class IntMatrix:
    entries: tuple[tuple[int, ...], ...]

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]]) -> "IntMatrix":
        rows = [tuple(int(x) for x in r) for r in rows]
        if rows:
            n = len(rows[0])
            if any(len(r) != n for r in rows):
                raise ValueError("ragged rows")
        return IntMatrix(tuple(rows))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)))

    @staticmethod
    def zero(r: int, c: int) -> "IntMatrix":
        return IntMatrix(tuple(tuple(0 for _ in range(c)) for _ in range(r)))

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i]

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.entries)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(zip(*self.entries)) if self.entries else ())

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch")
        ot = other.transpose()
        return IntMatrix(
            tuple(
                tuple(sum(a * b for a, b in zip(row, col)) for col in ot.entries)
                for row in self.entries
            )
        )

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if self.nrows == 0:
            return ()
        if len(v) != self.ncols:
            raise ValueError("shape mismatch")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self.entries)

    def stack(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.ncols and self.entries and other.entries:
            raise ValueError("shape mismatch")
        return IntMatrix(self.entries + other.entries)

    def augment(self, other: "IntMatrix") -> "IntMatrix":
        if self.nrows != other.nrows:
            raise ValueError("shape mismatch")
        return IntMatrix(tuple(a + b for a, b in zip(self.entries, other.entries)))

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        n = self.nrows
        if n != self.ncols:
            raise ValueError("determinant of non-square matrix")
        if n == 0:
            return 1
        m = [list(r) for r in self.entries]
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k] != 0:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]


def _hnf_rows(rows: list[list[int]], track: list[list[int]] | None = None) -> int:
    """In-place row HNF; returns the rank.  `track` (same row count) gets the
    same row operations applied, so passing the identity yields U."""
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0

    def rowop_sub(i, k, q):
        # rows[i] -= q * rows[k]
        ri, rk = rows[i], rows[k]
        for j in range(ncols):
            ri[j] -= q * rk[j]
        if track is not None:
            ti, tk = track[i], track[k]
            for j in range(len(ti)):
                ti[j] -= q * tk[j]

    def swap(i, k):
        rows[i], rows[k] = rows[k], rows[i]
        if track is not None:
            track[i], track[k] = track[k], track[i]

    def negate(i):
        rows[i] = [-x for x in rows[i]]
        if track is not None:
            track[i] = [-x for x in track[i]]

    pivot_row = 0
    for col in range(ncols):
        if pivot_row >= nrows:
            break
        # gcd-reduce entries in this column below pivot_row down to one entry
        while True:
            nz = [i for i in range(pivot_row, nrows) if rows[i][col] != 0]
            if not nz:
                break
            imin = min(nz, key=lambda i: abs(rows[i][col]))
            if imin != pivot_row:
                swap(pivot_row, imin)
            done = True
            for i in range(pivot_row + 1, nrows):
                if rows[i][col] != 0:
                    q = rows[i][col] // rows[pivot_row][col]
                    rowop_sub(i, pivot_row, q)
                    if rows[i][col] != 0:
                        done = False
            if done:
                break
        if rows[pivot_row][col] == 0:
            continue
        if rows[pivot_row][col] < 0:
            negate(pivot_row)
        p = rows[pivot_row][col]
        # reduce the entries above the pivot into [0, p)
        for i in range(pivot_row):
            q = rows[i][col] // p
            if q:
                rowop_sub(i, pivot_row, q)
        pivot_row += 1
    return pivot_row


def hnf(M: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row Hermite normal form.  Returns (H, U) with H = U*M, U unimodular."""
    rows = [list(r) for r in M.entries]
    track = [[1 if i == j else 0 for j in range(M.nrows)] for i in range(M.nrows)]
    _hnf_rows(rows, track)
    return IntMatrix.from_rows(rows), IntMatrix.from_rows(track)


def hnf_canonical(M: IntMatrix) -> IntMatrix:
    """HNF with zero rows dropped: the canonical basis of the row lattice."""
    rows = [list(r) for r in M.entries]
    rank = _hnf_rows(rows)
    return IntMatrix.from_rows(rows[:rank])


def rank(M: IntMatrix) -> int:
    rows = [list(r) for r in M.entries]
    return _hnf_rows(rows)


def snf_with_transforms(M: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form: returns (S, U, V) with S = U*M*V diagonal,
    diagonal entries nonnegative with d1 | d2 | ..., U and V unimodular."""
    nr, nc = M.nrows, M.ncols
    a = [list(r) for r in M.entries]
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    v = [[1 if i == j else 0 for j in range(nc)] for i in range(nc)]

    def row_sub(i, k, q):
        for j in range(nc):
            a[i][j] -= q * a[k][j]
        for j in range(nr):
            u[i][j] -= q * u[k][j]

    def col_sub(j, k, q):
        for i in range(nr):
            a[i][j] -= q * a[i][k]
        for i in range(nc):
            v[i][j] -= q * v[i][k]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]

    def col_swap(j, k):
        for i in range(nr):
            a[i][j], a[i][k] = a[i][k], a[i][j]
        for i in range(nc):
            v[i][j], v[i][k] = v[i][k], v[i][j]

    t = 0
    while t < min(nr, nc):
        # find a nonzero pivot of minimal absolute value
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        # clear row and column t
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_sub(i, t, q)
                    if a[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_sub(j, t, q)
                    if a[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
        # enforce divisibility: a[t][t] must divide everything below-right
        fixed = False
        for i in range(t + 1, nr):
            for j in range(t + 1, nc):
                if a[i][j] % a[t][t] != 0:
                    # add row i to row t, then restart the clearing
                    for jj in range(nc):
                        a[t][jj] += a[i][jj]
                    for jj in range(nr):
                        u[t][jj] += u[i][jj]
                    fixed = True
                    break
            if fixed:
                break
        if fixed:
            continue
        if a[t][t] < 0:
            for j in range(nc):
                a[t][j] = -a[t][j]
            for j in range(nr):
                u[t][j] = -u[t][j]
        t += 1
    return IntMatrix.from_rows(a), IntMatrix.from_rows(u), IntMatrix.from_rows(v)


def snf(M: IntMatrix) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of M; 1s kept, zero diagonal dropped."""
    s, _, _ = snf_with_transforms(M)
    diag = [s[i, i] for i in range(min(s.nrows, s.ncols))]
    return tuple(d for d in diag if d != 0)


def kernel(M: IntMatrix) -> IntMatrix:
    """Canonical basis (rows, in HNF) of {v : M v = 0}.  Saturated by
    construction since it comes from a unimodular transform."""
    ht, ut = hnf(M.transpose())
    vecs = [ut.row(i) for i in range(ht.nrows) if all(x == 0 for x in ht.row(i))]
    if not vecs:
        return IntMatrix.from_rows([])
    return hnf_canonical(IntMatrix.from_rows(vecs))


def solve_integer(M: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """One integer solution x of M x = b, or None if none exists."""
    s, u, v = snf_with_transforms(M)
    c = u.apply(list(b))
    n = M.ncols
    z = [0] * n
    for i in range(len(c)):
        d = s[i, i] if i < min(s.nrows, s.ncols) else 0
        if d == 0:
            if c[i] != 0:
                return None
        else:
            if c[i] % d != 0:
                return None
            if i < n:
                z[i] = c[i] // d
    return v.apply(z)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Finite abelian group in invariant-factor form d1 | d2 | ..., di >= 2."""
    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError("invariant factors must be >= 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a != 0:
                raise ValueError("invariant factors must form a divisibility chain")

    @property
    def order(self) -> int:
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors

    @property
    def zero(self) -> tuple[int, ...]:
        return (0,) * len(self.invariant_factors)

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        return tuple(x % d for x, d in zip(v, self.invariant_factors))

    def add(self, v, w) -> tuple[int, ...]:
        return self.reduce([a + b for a, b in zip(v, w)])

    def neg(self, v) -> tuple[int, ...]:
        return self.reduce([-a for a in v])

    def scale(self, k: int, v) -> tuple[int, ...]:
        return self.reduce([k * a for a in v])

    def elements(self) -> Iterator[tuple[int, ...]]:
        yield from itertools.product(*(range(d) for d in self.invariant_factors))

    def element_order(self, v) -> int:
        v = self.reduce(v)
        o = 1
        for x, d in zip(v, self.invariant_factors):
            if x:
                o_i = d // _gcd(x, d)
                o = o * o_i // _gcd(o, o_i)
        return o

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_elementary_2(self) -> bool:
        return all(d == 2 for d in self.invariant_factors)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


@dataclass(frozen=True)
class FinGenAbGroup:
    """Finitely generated abelian group: Z^free_rank x (finite torsion part)."""
    free_rank: int
    torsion: FiniteAbelianGroup

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def torsion_order(self) -> int:
        return self.torsion.order

    def describe(self) -> str:
        parts = [f"Z^{self.free_rank}"] if self.free_rank else []
        parts += [f"Z/{d}" for d in self.torsion.invariant_factors]
        return " x ".join(parts) if parts else "0"


@dataclass
class Cokernel:
    """Z^ngens / colspan(relations), with the SNF change of basis retained so
    that ambient vectors can be projected to canonical coordinates."""
    group: FinGenAbGroup
    # row i of `basis_change` maps ambient coords to the i-th SNF coordinate
    basis_change: IntMatrix
    # invariant factor (0 = free) attached to each retained SNF coordinate
    factors: tuple[int, ...]
    # ambient-coordinate representatives of the retained generators
    generators: tuple[tuple[int, ...], ...]

    def project(self, v: Sequence[int]) -> tuple[int, ...]:
        w = self.basis_change.apply(list(v))
        return tuple(x % d if d else x for x, d in zip(w, self.factors))


def cokernel(M: IntMatrix) -> Cokernel:
    """Quotient of Z^(M.nrows) by the column span of M."""
    s, u, _ = snf_with_transforms(M)
    n = M.nrows
    diag = [s[i, i] if i < min(s.nrows, s.ncols) else 0 for i in range(n)]
    keep = [i for i in range(n) if diag[i] != 1]
    factors = tuple(diag[i] for i in keep)
    torsion = tuple(d for d in factors if d != 0)
    free = sum(1 for d in factors if d == 0)
    # new generators: columns of U^-1 (solve U * g_i = e_i exactly)
    uinv = _unimodular_inverse(u)
    gens = tuple(uinv.col(i) for i in keep)
    basis_change = IntMatrix.from_rows([u.row(i) for i in keep])
    group = FinGenAbGroup(free, FiniteAbelianGroup(torsion))
    return Cokernel(group, basis_change, factors, gens)


def _unimodular_inverse(u: IntMatrix) -> IntMatrix:
    """Exact inverse of a unimodular integer matrix (still integral)."""
    n = u.nrows
    aug = [list(u.row(i)) + [1 if j == i else 0 for j in range(n)] for i in range(n)]
    rank_ = _hnf_rows(aug)
    if rank_ != n or any(aug[i][i] != 1 for i in range(n)):
        raise ValueError("matrix is not unimodular")
    return IntMatrix.from_rows([row[n:] for row in aug])


def lattice_quotient(sub: IntMatrix, sup: IntMatrix) -> tuple[int, ...]:
    """Invariant factors of L_sup / L_sub for row lattices with L_sub <= L_sup
    of the same rank.  Raises if sub is not contained in sup."""
    a = _express_in_basis(sub, sup)
    return snf(a)


def _express_in_basis(vecs: IntMatrix, basis: IntMatrix) -> IntMatrix:
    """Write each row of `vecs` as an integer combination of the rows of
    `basis` (which must be Z-independent)."""
    out = []
    bt = basis.transpose()
    for i in range(vecs.nrows):
        x = solve_integer(bt, vecs.row(i))
        if x is None:
            raise ValueError("vector not in the lattice")
        out.append(x)
    return IntMatrix.from_rows(out)


# ---------------------------------------------------------------------------
# homomorphisms between presented abelian groups
#
# A presentation is (ngens, relation matrix R) meaning Z^ngens / colspan(R).
# A hom is an integer matrix T whose column i gives the image of source
# generator i in the target's generator coordinates.


def presented_hom_cokernel(T: IntMatrix, R_target: IntMatrix) -> Cokernel:
    """Cokernel of the induced map: target / (image + target relations)."""
    if R_target.ncols == 0:
        return cokernel(T)
    return cokernel(T.augment(R_target))


def presented_hom_kernel(
    R_source: IntMatrix, T: IntMatrix, R_target: IntMatrix
) -> tuple[FinGenAbGroup, tuple[tuple[int, ...], ...]]:
    """Kernel of the induced map on presented groups.

    Returns the abstract kernel and source-coordinate vectors generating it.
    """
    k = T.ncols  # number of source generators
    # x in ker iff T x lies in colspan(R_target): solve [T | R_target] (x, y) = 0
    big = T.augment(R_target) if R_target.ncols else T
    kern = kernel(big)
    lat_rows = [kern.row(i)[:k] for i in range(kern.nrows)]
    # source relations always sit inside the kernel lattice
    lat_rows += [R_source.col(j) for j in range(R_source.ncols)]
    lat = hnf_canonical(IntMatrix.from_rows([r for r in lat_rows if any(r)]))
    if lat.nrows == 0:
        return FinGenAbGroup(0, FiniteAbelianGroup(())), ()
    # kernel group = lat / colspan(R_source), presented on lat's basis
    if R_source.ncols:
        rel_in_lat = _express_in_basis(
            IntMatrix.from_rows([R_source.col(j) for j in range(R_source.ncols)]), lat
        ).transpose()
    else:
        rel_in_lat = IntMatrix.from_rows([[] for _ in range(lat.nrows)])
    ck = cokernel(rel_in_lat)
    gens = []
    for g in ck.generators:
        # g is in lat-basis coordinates; expand to source coordinates
        vec = [0] * k
        for coeff, row in zip(g, lat.entries):
            for j in range(k):
                vec[j] += coeff * row[j]
        gens.append(tuple(vec))
    return ck.group, tuple(gens)


def subgroup_quotient(factors: Sequence[int], vectors: Sequence[Sequence[int]]) -> Cokernel:
    """Quotient of prod Z/factors (0 = free factor Z) by the subgroup the
    given coordinate vectors generate."""
    n = len(factors)
    cols = [list(v) for v in vectors]
    for i, d in enumerate(factors):
        if d:
            cols.append([d if j == i else 0 for j in range(n)])
    if cols:
        m = IntMatrix.from_rows([[c[i] for c in cols] for i in range(n)])
    else:
        m = IntMatrix.from_rows([[] for _ in range(n)])
    return cokernel(m)


def subgroup_contains(factors: Sequence[int], vectors: Sequence[Sequence[int]], x) -> bool:
    """Is x in the subgroup of prod Z/factors generated by `vectors`?"""
    n = len(factors)
    cols = [list(v) for v in vectors]
    for i, d in enumerate(factors):
        if d:
            cols.append([d if j == i else 0 for j in range(n)])
    if not cols:
        return all(v == 0 for v in x)
    m = IntMatrix.from_rows([[c[i] for c in cols] for i in range(n)])
    return solve_integer(m, list(x)) is not None


def mat_inverse_fraction(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Inverse of a square matrix over Q by Gauss-Jordan elimination."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(1 if j == i else 0) for j in range(n)]
         for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [row[n:] for row in a]


def solve_fraction(M: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve M x = b over Q (M square invertible)."""
    n = len(M)
    a = [[Fraction(x) for x in row] + [Fraction(b[i])] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return [a[i][n] for i in range(n)]
