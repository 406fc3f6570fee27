"""Fractional ideals as HNF lattices over the integral basis, prime
factorization of rational primes, and exact root finding in number fields.

An ideal is stored as (num, den): num is an n x n matrix in canonical row
HNF whose rows are lattice vectors in integral-basis coordinates, den a
positive integer, the ideal being (1/den) * rowlattice(num).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

import sympy

from . import polytools as pt
from .errors import IndexDivisor, NotInvertible, SearchExhausted
from .intlinalg import IntMatrix, hnf_canonical, kernel, solve_integer
from .numberfield import NFElement, NumberField


class FractionalIdeal:
    def __init__(self, field: NumberField, num: IntMatrix, den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num = hnf_canonical(num)
        if num.nrows != field.degree:
            raise ValueError("lattice must have full rank")
        # normalize: divide out the gcd of den and all entries
        g = den
        for row in num.entries:
            for x in row:
                g = gcd(g, x)
        if g > 1:
            num = IntMatrix.from_rows([[x // g for x in row] for row in num.entries])
            den //= g
        self.field = field
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def unit(field: NumberField) -> "FractionalIdeal":
        return FractionalIdeal(field, IntMatrix.identity(field.degree))

    @staticmethod
    def from_generators(field: NumberField, gens) -> "FractionalIdeal":
        """The fractional O-ideal generated by the given field elements."""
        rows: list[list[Fraction]] = []
        for g in gens:
            if not isinstance(g, NFElement):
                g = field.rational(g)
            for i in range(field.degree):
                prod = g * field.basis_element(i)
                rows.append(list(prod.basis_coords()))
        return FractionalIdeal._from_fraction_rows(field, rows)

    @staticmethod
    def _from_fraction_rows(field, rows) -> "FractionalIdeal":
        den = 1
        for r in rows:
            for x in r:
                den = lcm(den, Fraction(x).denominator)
        int_rows = [[int(Fraction(x) * den) for x in r] for r in rows]
        return FractionalIdeal(field, IntMatrix.from_rows(int_rows), den)

    @staticmethod
    def principal(field: NumberField, el: NFElement) -> "FractionalIdeal":
        if el.is_zero():
            raise ValueError("zero element does not generate a fractional ideal")
        return FractionalIdeal.from_generators(field, [el])

    # -- basic data ----------------------------------------------------------

    def basis_elements(self) -> list[NFElement]:
        """The Z-basis of the lattice as field elements."""
        out = []
        for row in self.num.entries:
            coords = [Fraction(x, self.den) for x in row]
            out.append(self.field.from_basis_coords(coords))
        return out

    def norm(self) -> Fraction:
        d = 1
        for i in range(self.num.nrows):
            d *= self.num[i, i]
        return Fraction(abs(d), self.den ** self.field.degree)

    def contains(self, el: NFElement) -> bool:
        coords = [Fraction(c) * self.den for c in el.basis_coords()]
        if any(c.denominator != 1 for c in coords):
            return False
        return solve_integer(self.num.transpose(), [int(c) for c in coords]) is not None

    def contains_ideal(self, other: "FractionalIdeal") -> bool:
        return all(self.contains(b) for b in other.basis_elements())

    def __eq__(self, other):
        return (isinstance(other, FractionalIdeal) and self.field == other.field
                and self.den == other.den and self.num == other.num)

    def __hash__(self):
        return hash((self.field.min_poly, self.num, self.den))

    def __repr__(self):
        return f"FractionalIdeal(norm={self.norm()}, den={self.den})"

    # -- arithmetic ----------------------------------------------------------

    def __mul__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        a = self.basis_elements()
        b = other.basis_elements()
        rows = [list((x * y).basis_coords()) for x in a for y in b]
        return FractionalIdeal._from_fraction_rows(self.field, rows)

    def __add__(self, other: "FractionalIdeal") -> "FractionalIdeal":
        rows = [list(x.basis_coords()) for x in self.basis_elements()]
        rows += [list(x.basis_coords()) for x in other.basis_elements()]
        return FractionalIdeal._from_fraction_rows(self.field, rows)

    def __pow__(self, e: int) -> "FractionalIdeal":
        if e < 0:
            return self.inverse() ** (-e)
        acc = FractionalIdeal.unit(self.field)
        base = self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def scale(self, el: NFElement) -> "FractionalIdeal":
        rows = [list((el * b).basis_coords()) for b in self.basis_elements()]
        return FractionalIdeal._from_fraction_rows(self.field, rows)

    def colon(self, other: "FractionalIdeal") -> "FractionalIdeal":
        """(self : other) = {x in K : x * other <= self}."""
        field = self.field
        n = field.degree
        # work with the integral generators w of other's numerator lattice;
        # the answer then gets rescaled by other.den at the end
        int_gens = [field.from_basis_coords(row) for row in other.num.entries]
        w0 = int_gens[0]
        # any solution x' of x' * L_int <= self has basis coords with
        # denominator dividing m = self.den * |N(w0)|
        m = self.den * abs(int(w0.norm()))
        # write x' = z/m; condition per generator w:
        #   self.den * A_w z = m * (H^T c) for some integer vector c
        blocks = [_int_mult_matrix(field, w) for w in int_gens]
        k = len(blocks)
        ht = self.num.transpose()
        rows = []
        for bi, a_w in enumerate(blocks):
            for i in range(n):
                row = [self.den * a_w[i][j] for j in range(n)]
                for cj in range(k):
                    for j in range(n):
                        row.append(-m * ht[i, j] if cj == bi else 0)
                rows.append(row)
        kern = kernel(IntMatrix.from_rows(rows))
        z_rows = [list(kern.row(i)[:n]) for i in range(kern.nrows)]
        z_rows = [r for r in z_rows if any(r)]
        if len(z_rows) < n:
            raise ValueError("colon ideal degenerate")
        scaled = [[x * other.den for x in r] for r in z_rows]
        return FractionalIdeal(field, IntMatrix.from_rows(scaled), m)

    def inverse(self) -> "FractionalIdeal":
        inv = FractionalIdeal.unit(self.field).colon(self)
        if inv * self != FractionalIdeal.unit(self.field):
            raise NotInvertible("ideal is not invertible in this order")
        return inv

    def valuation(self, prime: "PrimeIdeal") -> int:
        """v_P(self), exact, via containment in powers of P."""
        # split off the denominator: v(I) = v(num-lattice) - v(den * O)
        num_ideal = FractionalIdeal(self.field, self.num)
        v = _integral_valuation(num_ideal, prime)
        if self.den > 1:
            v -= prime.e * _rational_valuation(self.den, prime.p)
        return v


def _int_mult_matrix(field, w):
    """Multiplication by the integral element w as an integer matrix on
    integral-basis coordinates (column j = coords of w * b_j)."""
    wc = w.basis_coords()
    if any(c.denominator != 1 for c in wc):
        raise ValueError("generator not integral")
    n = field.degree
    mat = [[0] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if wc[k]:
                for i in range(n):
                    mat[i][j] += int(wc[k]) * field.mult_table[k][j][i]
    return mat


def _integral_valuation(ideal: FractionalIdeal, prime: "PrimeIdeal") -> int:
    nrm = ideal.norm()
    assert nrm.denominator == 1
    bound = 0
    n = int(nrm)
    while n % prime.p == 0:
        n //= prime.p
        bound += 1
    v = 0
    power = FractionalIdeal.unit(ideal.field)
    while v <= bound:
        nxt = power * prime.ideal
        if not nxt.contains_ideal(ideal):
            return v
        power = nxt
        v += 1
    return v


def _rational_valuation(n: int, p: int) -> int:
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


@dataclass(frozen=True)
class PrimeIdeal:
    p: int
    ideal: FractionalIdeal
    e: int  # ramification index
    f: int  # residue degree

    def __repr__(self):
        return f"PrimeIdeal(p={self.p}, e={self.e}, f={self.f})"


def factor_rational_prime(field: NumberField, p: int) -> list[PrimeIdeal]:
    """Kummer-Dedekind factorization of (p) using a generator whose index is
    prime to p.  Tries the power-basis root, the basis elements and pairwise
    sums before giving up with IndexDivisor."""
    n = field.degree
    candidates = [field.gen()]
    candidates += [field.basis_element(i) for i in range(1, n)]
    candidates += [field.basis_element(i) + field.basis_element(j)
                   for i in range(1, n) for j in range(i + 1, n)]
    disc_k = field.discriminant
    for g in candidates:
        mp = g.min_poly_over_q()
        if pt.degree(mp) != n or any(not isinstance(c, int) for c in mp):
            continue
        disc_g = pt.discriminant(mp)
        index_sq = disc_g // disc_k
        assert disc_g == index_sq * disc_k
        idx = _exact_isqrt(index_sq)
        if idx % p == 0:
            continue
        out = []
        for fac, mult in pt.factor_mod_p(mp, p):
            lift = [c if c <= p // 2 else c - p for c in fac]
            gen_el = _eval_int_poly(lift, g)
            ideal = FractionalIdeal.from_generators(field, [field.rational(p), gen_el])
            out.append(PrimeIdeal(p, ideal, e=mult, f=pt.degree(fac)))
        assert sum(pr.e * pr.f for pr in out) == n
        assert all(pr.ideal.norm() == p**pr.f for pr in out)
        if n <= 6:
            # sanity: the product of P^e recovers (p); skipped for large
            # degrees where the e-fold ideal product gets expensive
            prod = FractionalIdeal.unit(field)
            for pr in out:
                prod = prod * pr.ideal ** pr.e
            assert prod == FractionalIdeal.principal(field, field.rational(p))
        return sorted(out, key=lambda pr: (pr.f, pr.e, pr.ideal.num.entries))
    # p divides the index of every monogenic generator tried (it may be a
    # common index divisor, e.g. two residue-degree-2 primes above 2 while
    # F_2 has a single irreducible quadratic); fall back to splitting the
    # F_p-algebra O/pO directly
    return _factor_by_algebra_splitting(field, p)


def _mod_rref(rows, p):
    """Reduced row echelon form mod p; returns (rows, pivot columns)."""
    m = [[x % p for x in row] for row in rows]
    piv = []
    r = 0
    ncols = len(m[0]) if m else 0
    for j in range(ncols):
        k = next((i for i in range(r, len(m)) if m[i][j]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        inv = pow(m[r][j], -1, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][j]:
                f = m[i][j]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        piv.append(j)
        r += 1
    return m[:r], piv


def _mod_kernel(rows, p, ncols):
    """Basis of the right kernel mod p of a matrix given by rows."""
    rref, piv = _mod_rref(rows, p) if rows else ([], [])
    free = [j for j in range(ncols) if j not in piv]
    out = []
    for j in free:
        v = [0] * ncols
        v[j] = 1
        for r, pj in enumerate(piv):
            v[pj] = (-rref[r][j]) % p
        out.append(v)
    return out


def _mod_solve_span(span, vec, p):
    """Express vec in the span of the given vectors mod p (must succeed)."""
    n = len(vec)
    rows = [[span[c][r] for c in range(len(span))] + [vec[r]]
            for r in range(n)]
    rref, piv = _mod_rref(rows, p)
    assert len(span) not in piv, "vector must lie in the span"
    sol = [0] * len(span)
    for r, j in enumerate(piv):
        sol[j] = rref[r][len(span)]
    return sol


def _factor_by_algebra_splitting(field: NumberField, p: int) -> list[PrimeIdeal]:
    """Factor (p) without a monogenic generator: decompose A = O/pO into
    local pieces along eigenspaces of Frobenius-fixed elements; the maximal
    ideal of each piece together with the other pieces lifts to a prime
    above p."""
    n = field.degree
    one = field.from_basis_coords([Fraction(1)] + [Fraction(0)] * (n - 1))
    assert (one - field.one()).is_zero(), \
        "integral basis must start with 1 for the splitting fallback"

    def a_mul(v, w):
        x = field.from_basis_coords([Fraction(c) for c in v])
        y = field.from_basis_coords([Fraction(c) for c in w])
        return [int(c) % p for c in (x * y).basis_coords()]

    def a_pow_p(v):
        out = [1] + [0] * (n - 1)
        base, e = v, p
        while e:
            if e & 1:
                out = a_mul(out, base)
            base = a_mul(base, base)
            e >>= 1
        return out

    def lift(span, v):
        return [sum(c * span[j][i] for j, c in enumerate(v)) % p
                for i in range(n)]

    # components: subspaces of A (spanned by A-coordinate vectors) that are
    # ideal-subalgebras whose direct sum is A; split until each is local
    components = [[[1 if i == j else 0 for i in range(n)] for j in range(n)]]
    local = []  # (span, radical vectors in component coordinates)
    while components:
        span = components.pop()
        k = len(span)
        frob_cols = [_mod_solve_span(span, a_pow_p(v), p) for v in span]
        frob = [[frob_cols[c][r] for c in range(k)] for r in range(k)]
        fr_pow = [[1 if i == j else 0 for j in range(k)] for i in range(k)]
        q = 1
        while q < n:
            fr_pow = [[sum(fr_pow[i][t] * frob[t][j] for t in range(k)) % p
                       for j in range(k)] for i in range(k)]
            q *= p
        rad = _mod_kernel(fr_pow, p, k)
        # Frobenius-fixed elements mod radical: solve (F - 1)x = R y over
        # the stacked system and keep the x parts
        fmi = [[(frob[i][j] - (1 if i == j else 0)) % p for j in range(k)]
               for i in range(k)]
        stacked = [[fmi[i][j] for j in range(k)] +
                   [(-rad[c][i]) % p for c in range(len(rad))]
                   for i in range(k)]
        fix = [v[:k] for v in _mod_kernel(stacked, p, k + len(rad))]
        fix_dim = len(_mod_rref(fix, p)[1]) if fix else 0
        if fix_dim - len(rad) <= 1:
            local.append((span, rad))
            continue
        # some fixed element has at least two eigenvalues and splits the
        # component into its generalized eigenspaces (all eigenvalues lie in
        # F_p because b^p = b modulo nilpotents)
        for b in fix:
            mb = [[0] * k for _ in range(k)]
            for j in range(k):
                col = _mod_solve_span(span, a_mul(lift(span, b), span[j]), p)
                for i in range(k):
                    mb[i][j] = col[i]
            pieces = []
            for lam in range(p):
                m_l = [[(mb[i][j] - (lam if i == j else 0)) % p
                        for j in range(k)] for i in range(k)]
                m_pow = m_l
                for _ in range(k - 1):
                    m_pow = [[sum(m_pow[i][t] * m_l[t][j]
                                  for t in range(k)) % p
                              for j in range(k)] for i in range(k)]
                eig = _mod_kernel(m_pow, p, k)
                if eig:
                    pieces.append([lift(span, v) for v in eig])
            if len(pieces) >= 2:
                assert sum(len(pc) for pc in pieces) == k
                components.extend(pieces)
                break
        else:
            raise AssertionError("non-local component admits no splitting")

    out = []
    p_ideal = FractionalIdeal.principal(field, field.rational(p))
    for idx, (span, rad) in enumerate(local):
        f = len(span) - len(rad)
        gens = [field.rational(p)]
        for v in rad:
            gens.append(field.from_basis_coords(
                [Fraction(c) for c in lift(span, v)]))
        for j, (other, _) in enumerate(local):
            if j != idx:
                for v in other:
                    gens.append(field.from_basis_coords(
                        [Fraction(c) for c in v]))
        ideal = FractionalIdeal.from_generators(field, gens)
        assert ideal.norm() == p**f
        e = 1
        while (ideal ** (e + 1)).contains_ideal(p_ideal):
            e += 1
        out.append(PrimeIdeal(p, ideal, e=e, f=f))
    assert sum(pr.e * pr.f for pr in out) == n
    prod = FractionalIdeal.unit(field)
    for pr in out:
        prod = prod * pr.ideal ** pr.e
    assert prod == p_ideal
    return sorted(out, key=lambda pr: (pr.f, pr.e, pr.ideal.num.entries))


def _exact_isqrt(m: int) -> int:
    import math

    r = math.isqrt(m)
    assert r * r == m
    return r


def _eval_int_poly(coeffs, el: NFElement) -> NFElement:
    acc = el.field.zero()
    for c in reversed(coeffs):
        acc = acc * el + el.field.rational(c)
    return acc


# ---------------------------------------------------------------------------
# bounded lattice searches


def search_elements(ideal: FractionalIdeal, bounds=(1, 2, 3, 5, 8, 13)):
    """Yield (element, norm) over nonzero lattice combinations with
    coefficients in growing boxes.  Each box only yields vectors not already
    seen in smaller boxes; elements come in a deterministic order."""
    basis = ideal.basis_elements()
    n = len(basis)
    field = ideal.field
    use_form = field.degree <= 4
    prev = 0
    for b in bounds:
        for combo in itertools.product(range(-b, b + 1), repeat=n):
            if all(abs(c) <= prev for c in combo):
                continue
            if not any(combo):
                continue
            el = field.zero()
            for c, v in zip(combo, basis):
                if c:
                    el = el + v * c
            if use_form and ideal.den == 1:
                coords = [sum(c * ideal.num[i, j] for i, c in enumerate(combo))
                          for j in range(n)]
                nrm = Fraction(field.norm_of_int_coords(coords))
            else:
                nrm = el.norm()
            yield el, nrm
        prev = b


def principal_generator(ideal: FractionalIdeal, s_prime_ideals=(), bounds=(1, 2, 3, 5, 8, 13)) -> NFElement:
    """Find a generator of the ideal, exactly, or -- when S-primes are given --
    up to S-units: (el) must equal ideal * (product of the S-primes to some
    powers).  Raises SearchExhausted when the coefficient boxes run out."""
    target = ideal.norm()
    rational_s = sorted({pr.p for pr in s_prime_ideals})
    inv = None
    for el, nrm in search_elements(ideal, bounds):
        ratio = nrm / target
        num, den = abs(ratio.numerator), ratio.denominator
        for p in rational_s:
            while num % p == 0:
                num //= p
            while den % p == 0:
                den //= p
        if num != 1 or den != 1:
            continue
        quot = FractionalIdeal.principal(ideal.field, el)
        if not s_prime_ideals:
            if quot == ideal:
                return el
            continue
        if inv is None:
            inv = ideal.inverse()
        q = quot * inv
        for pr in s_prime_ideals:
            v = q.valuation(pr)
            if v:
                q = q * pr.ideal ** (-v)
        if q == FractionalIdeal.unit(ideal.field):
            return el
    raise SearchExhausted(f"no principal generator in boxes up to {bounds[-1]}")


# ---------------------------------------------------------------------------
# exact root finding in a number field


def nf_poly_trim(p):
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def nf_poly_divmod(p, q):
    p = nf_poly_trim(p)
    q = nf_poly_trim(q)
    if not q:
        raise ZeroDivisionError
    field = q[-1].field
    inv_lead = q[-1].inverse()
    quot = [field.zero()] * max(0, len(p) - len(q) + 1)
    while len(p) >= len(q):
        c = p[-1] * inv_lead
        shift = len(p) - len(q)
        quot[shift] = c
        for i in range(len(q)):
            p[shift + i] = p[shift + i] - c * q[i]
        p = nf_poly_trim(p[:-1])
    return quot, p


def nf_poly_gcd(p, q):
    p, q = nf_poly_trim(p), nf_poly_trim(q)
    while q:
        _, r = nf_poly_divmod(p, q)
        p, q = q, r
    if p:
        lead_inv = p[-1].inverse()
        p = [c * lead_inv for c in p]
    return p


def find_root(coeffs, field: NumberField) -> NFElement | None:
    """First root in `field` of the polynomial with the given coefficients
    (NFElements or rationals, constant-first), or None.

    Cheap candidates (small rationals, and monomials in a built-in root of
    unity) are tried first with exact verification; the general case runs a
    resultant-based factorization, which is exact and needs no precision
    management."""
    coeffs = [c if isinstance(c, NFElement) else field.rational(c) for c in coeffs]
    coeffs = nf_poly_trim(coeffs)
    if len(coeffs) <= 1:
        raise ValueError("constant polynomial")

    def is_root(el):
        acc = field.zero()
        for c in reversed(coeffs):
            acc = acc * el + c
        return acc.is_zero()

    if len(coeffs) == 2:
        root = -coeffs[0] * coeffs[1].inverse()
        return root

    for cand in _cheap_candidates(field):
        if is_root(cand):
            return cand

    return _trager_root(coeffs, field)


def _cheap_candidates(field):
    for r in (0, 1, -1, 2, -2):
        yield field.rational(r)
    m = field.root_of_unity_order
    if m:
        theta = field.gen()
        pows = [field.one()]
        for _ in range(m - 1):
            pows.append(pows[-1] * theta)
        for j in range(m):
            yield pows[j]
            yield -pows[j]
        for j in range(1, m):
            # 2cos-type candidates theta^j + theta^-j
            yield pows[j] + pows[(m - j) % m]


def _trager_root(coeffs, field):
    n = field.degree
    d = len(coeffs) - 1
    f = [Fraction(c) for c in field.min_poly]
    x, T = sympy.symbols("x T")
    f_sym = sum(Fraction(c) * x**i for i, c in enumerate(field.min_poly))
    # coefficients of g as polynomials in x (theta)
    g_coeff_sym = [sum(Fraction(cc) * x**i for i, cc in enumerate(c.coords)) for c in coeffs]
    for s in range(0, 10):
        g_sym = sum(gc * (T - s * x) ** k for k, gc in enumerate(g_coeff_sym))
        norm_poly = sympy.Poly(sympy.resultant(f_sym, sympy.expand(g_sym), x), T)
        if sympy.degree(sympy.gcd(norm_poly, norm_poly.diff(T)), T) > 0:
            continue  # not squarefree; shift again
        _, factors = sympy.factor_list(norm_poly)
        for fac, _mult in sorted(factors, key=lambda fm: sympy.degree(fm[0], T)):
            if sympy.degree(fac, T) > n:
                continue
            # h(T + s*theta) as a polynomial with coefficients in the field
            h_coeffs = [Fraction(c) for c in reversed(sympy.Poly(fac, T).all_coeffs())]
            shifted = _shift_poly(h_coeffs, field, s)
            g_nf = list(coeffs)
            common = nf_poly_gcd(g_nf, shifted)
            if len(common) == 2:
                return -common[0] * common[1].inverse()
        return None
    return None


def _shift_poly(q_coeffs, field, s):
    """q(T + s*theta) as an NFElement-coefficient polynomial in T."""
    theta = field.gen()
    shift = theta * s
    out = [field.zero() for _ in range(len(q_coeffs))]
    # Horner in T: q(T + a) built by repeated multiplication by (T + a)
    acc = [field.zero()]
    for c in reversed(q_coeffs):
        # acc = acc * (T + shift) + c
        new = [field.zero()] * (len(acc) + 1)
        for i, a in enumerate(acc):
            new[i + 1] = new[i + 1] + a
            new[i] = new[i] + a * shift
        new[0] = new[0] + field.rational(c)
        acc = new
    return nf_poly_trim(acc)


def sqrt_in_field(el: NFElement) -> NFElement | None:
    """An exact square root of el in its own field, or None."""
    field = el.field
    return find_root([-el, field.zero(), field.one()], field)
