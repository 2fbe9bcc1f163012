"""Exact arithmetic in prime fields, one-step extension towers, polynomials
and dense linear algebra over them.

Representation conventions, used everywhere in the package:

* A prime-field value is an integer residue in [0, p).
* An extension-field value is a tuple of n base-field values, the coefficients
  of the representative polynomial in low-degree-first order.
* A polynomial over a field is a tuple of field values, low-degree first, with
  no trailing zeros; () is the zero polynomial.
* Every field value has a canonical integer code: the residue itself for a
  prime field, and sum(code(c_i) * q**i) for an extension over a field of
  order q.  Codes order the elements and serialize them.

The canonical modulus of an extension of degree n is the monic irreducible
polynomial of degree n whose integer code (the code vector read as base-q
digits, low to high) is smallest.  That makes every derived object, tensors
included, reproducible byte for byte.

All arithmetic is exact; there is no floating point in this module.  Moduli
are limited to p < 2**61 so residues stay single-word with double-width
intermediate products.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterator, Sequence, Union

from .ntheory import is_prime, mobius, prime_power_split

MAX_PRIME = 1 << 61

Value = Union[int, tuple]  # raw field value: int residue or tuple of base values


class SingularMatrixError(ValueError):
    """Raised when Gaussian elimination finds no pivot; carries the column."""

    def __init__(self, pivot_col: int):
        super().__init__(f"singular matrix: no pivot in column {pivot_col}")
        self.pivot_col = pivot_col


class FieldElement:
    """A field value bound to its field, with operator arithmetic.

    Thin wrapper for API ergonomics; hot paths use the field methods on raw
    values directly.
    """

    __slots__ = ("field", "value")

    def __init__(self, field, value: Value):
        self.field = field
        self.value = value

    def _coerce(self, other) -> Value:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError(f"field mismatch: {self.field} vs {other.field}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other % self.field.order)
        raise TypeError(f"cannot coerce {other!r} into {self.field}")

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.value, self._coerce(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.value, self._coerce(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.value, self._coerce(other)))

    def __truediv__(self, other):
        return FieldElement(self.field, self.field.div(self.value, self._coerce(other)))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return FieldElement(self.field, self.field.inv(self.field.pow(self.value, -k)))
        return FieldElement(self.field, self.field.pow(self.value, k))

    __radd__ = __add__
    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self._coerce(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.field), self.value))

    def __repr__(self):
        return f"{self.field}({self.to_int()})"

    def coords(self) -> tuple:
        """Coordinates over the immediate base field, low degree first."""
        if isinstance(self.value, tuple):
            return self.value
        return (self.value,)

    def to_int(self) -> int:
        return self.field.to_int(self.value)


class PrimeField:
    """The field of integers modulo a prime p, 2 <= p < 2**61."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not (2 <= p < MAX_PRIME):
            raise ValueError(f"prime modulus out of supported range: {p}")
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p

    @property
    def order(self) -> int:
        return self.p

    @property
    def char(self) -> int:
        return self.p

    zero = 0
    one = 1

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.p})")
        return pow(a, self.p - 2, self.p)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        return pow(a, k, self.p)

    def from_int(self, code: int) -> int:
        if not 0 <= code < self.p:
            raise ValueError(f"code {code} out of range for GF({self.p})")
        return code

    def to_int(self, a: int) -> int:
        return a

    def elements(self) -> Iterator[int]:
        return iter(range(self.p))

    def element(self, v) -> FieldElement:
        if isinstance(v, FieldElement):
            if v.field != self:
                raise ValueError("field mismatch")
            return v
        if isinstance(v, int):
            return FieldElement(self, v % self.p)
        raise TypeError(f"cannot build GF({self.p}) element from {v!r}")

    def random(self, rng) -> int:
        return rng.randrange(self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


class ExtensionField:
    """A degree-n extension of a base field in polynomial basis.

    The modulus must be monic irreducible of degree n over the base; it is
    verified on construction.  Values are tuples of n base values.
    """

    __slots__ = ("base", "degree", "modulus", "zero", "one", "_reduction")

    def __init__(self, base, degree: int, modulus: Sequence | None = None):
        if degree < 1:
            raise ValueError("extension degree must be >= 1")
        self.base = base
        self.degree = degree
        if modulus is None:
            modulus = find_irreducible(base, degree)
        modulus = tuple(modulus)
        if len(modulus) != degree + 1 or modulus[-1] != base.one:
            raise ValueError("modulus must be monic of degree equal to the extension degree")
        if not is_irreducible(base, modulus):
            raise ValueError("modulus is reducible over the base field")
        self.modulus = modulus
        self.zero = (base.zero,) * degree
        self.one = (base.one,) + (base.zero,) * (degree - 1)
        # u**k mod modulus for k in [degree, 2*degree-2], used by mul
        self._reduction = _power_reduction_rows(base, modulus, 2 * degree - 1)

    @property
    def order(self) -> int:
        return self.base.order**self.degree

    @property
    def char(self) -> int:
        return self.base.char

    def add(self, a: tuple, b: tuple) -> tuple:
        bf = self.base
        return tuple(bf.add(x, y) for x, y in zip(a, b))

    def sub(self, a: tuple, b: tuple) -> tuple:
        bf = self.base
        return tuple(bf.sub(x, y) for x, y in zip(a, b))

    def neg(self, a: tuple) -> tuple:
        bf = self.base
        return tuple(bf.neg(x) for x in a)

    def mul(self, a: tuple, b: tuple) -> tuple:
        # schoolbook product, then reduction by precomputed powers of u
        bf = self.base
        n = self.degree
        if n == 1:
            return (bf.mul(a[0], b[0]),)
        prod = [bf.zero] * (2 * n - 1)
        for i, ai in enumerate(a):
            if ai == bf.zero:
                continue
            for j, bj in enumerate(b):
                prod[i + j] = bf.add(prod[i + j], bf.mul(ai, bj))
        res = prod[:n]
        for k in range(n, 2 * n - 1):
            ck = prod[k]
            if ck == bf.zero:
                continue
            row = self._reduction[k]
            for j in range(n):
                res[j] = bf.add(res[j], bf.mul(ck, row[j]))
        return tuple(res)

    def inv(self, a: tuple) -> tuple:
        if a == self.zero:
            raise ZeroDivisionError(f"inverse of zero in {self}")
        g, u, _ = poly_xgcd(self.base, _trim(self.base, a), self.modulus)
        # g is a nonzero constant; scale u by its inverse
        c = self.base.inv(g[0])
        scaled = tuple(self.base.mul(c, x) for x in u)
        return tuple(scaled[i] if i < len(scaled) else self.base.zero for i in range(self.degree))

    def div(self, a: tuple, b: tuple) -> tuple:
        return self.mul(a, self.inv(b))

    def pow(self, a: tuple, k: int) -> tuple:
        result = self.one
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def from_int(self, code: int) -> tuple:
        if not 0 <= code < self.order:
            raise ValueError(f"code {code} out of range for {self}")
        q = self.base.order
        out = []
        for _ in range(self.degree):
            out.append(self.base.from_int(code % q))
            code //= q
        return tuple(out)

    def to_int(self, a: tuple) -> int:
        q = self.base.order
        code = 0
        for c in reversed(a):
            code = code * q + self.base.to_int(c)
        return code

    def elements(self) -> Iterator[tuple]:
        return (self.from_int(k) for k in range(self.order))

    def element(self, v) -> FieldElement:
        if isinstance(v, FieldElement):
            if v.field != self:
                raise ValueError("field mismatch")
            return v
        if isinstance(v, int):
            return FieldElement(self, self.from_int(v % self.order))
        if isinstance(v, (tuple, list)):
            if len(v) > self.degree:
                raise ValueError(f"too many coordinates for {self}")
            coords = [self.base.element(c).value for c in v]
            coords += [self.base.zero] * (self.degree - len(coords))
            return FieldElement(self, tuple(coords))
        raise TypeError(f"cannot build {self} element from {v!r}")

    def random(self, rng) -> tuple:
        return tuple(self.base.random(rng) for _ in range(self.degree))

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.degree == self.degree
            and other.base == self.base
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("GFext", self.base, self.degree, self.modulus))

    def __repr__(self):
        return f"GF({self.base.order}^{self.degree})"


Field = Union[PrimeField, ExtensionField]


@lru_cache(maxsize=None)
def make_field(q: int) -> Field:
    """The field with q elements over its canonical (smallest-code) modulus."""
    p, s = prime_power_split(q)
    if s == 1:
        return PrimeField(p)
    return ExtensionField(PrimeField(p), s)


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Dispatch one arithmetic operation: add | sub | mul | inv | div.

    For op == "inv" the second operand is ignored.
    """
    if a.field != b.field:
        raise ValueError("operands live in different fields")
    f = a.field
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "inv":
        return FieldElement(f, f.inv(a.value))
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# polynomial arithmetic over an arbitrary field
# (coefficient tuples, low degree first, trailing zeros trimmed)


def _trim(field, coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == field.zero:
        coeffs.pop()
    return tuple(coeffs)


def poly_deg(poly: tuple) -> int:
    return len(poly) - 1  # deg(0) == -1 by convention


def poly_add(field, a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] = field.add(out[i], c)
    return _trim(field, out)


def poly_sub(field, a: tuple, b: tuple) -> tuple:
    out = list(a) + [field.zero] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] = field.sub(out[i], c)
    return _trim(field, out)


def poly_mul(field, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    out = [field.zero] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == field.zero:
            continue
        for j, bj in enumerate(b):
            out[i + j] = field.add(out[i + j], field.mul(ai, bj))
    return _trim(field, out)


def poly_divmod(field, a: tuple, b: tuple) -> tuple[tuple, tuple]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    db = len(b) - 1
    lead_inv = field.inv(b[-1])
    quot = [field.zero] * max(0, len(a) - db)
    for i in range(len(a) - db - 1, -1, -1):
        f = rem[i + db]
        if f == field.zero:
            continue
        f = field.mul(f, lead_inv)
        quot[i] = f
        for j, c in enumerate(b):
            rem[i + j] = field.sub(rem[i + j], field.mul(f, c))
    return _trim(field, quot), _trim(field, rem[:db])


def poly_mod(field, a: tuple, b: tuple) -> tuple:
    return poly_divmod(field, a, b)[1]


def poly_gcd(field, a: tuple, b: tuple) -> tuple:
    while b:
        a, b = b, poly_mod(field, a, b)
    if a:
        c = field.inv(a[-1])
        a = tuple(field.mul(c, x) for x in a)  # monic normalization
    return a


def poly_xgcd(field, a: tuple, b: tuple) -> tuple[tuple, tuple, tuple]:
    """Extended gcd: returns (g, u, v) with u*a + v*b = g."""
    r0, r1 = a, b
    s0, s1 = (field.one,), ()
    t0, t1 = (), (field.one,)
    while r1:
        q, r = poly_divmod(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(field, s0, poly_mul(field, q, s1))
        t0, t1 = t1, poly_sub(field, t0, poly_mul(field, q, t1))
    return r0, s0, t0


def poly_eval(field, poly: tuple, x: Value) -> Value:
    acc = field.zero
    for c in reversed(poly):
        acc = field.add(field.mul(acc, x), c)
    return acc


def poly_pow_mod(field, a: tuple, k: int, mod: tuple) -> tuple:
    result = (field.one,)
    a = poly_mod(field, a, mod)
    while k:
        if k & 1:
            result = poly_mod(field, poly_mul(field, result, a), mod)
        a = poly_mod(field, poly_mul(field, a, a), mod)
        k >>= 1
    return result


def _power_reduction_rows(field, modulus: tuple, count: int) -> dict[int, tuple]:
    """u**k mod modulus as degree-n coefficient rows, for n <= k < count."""
    n = len(modulus) - 1
    rows: dict[int, tuple] = {}
    # u**n = -(low part of modulus)
    cur = [field.neg(c) for c in modulus[:n]]
    rows[n] = tuple(cur)
    for k in range(n + 1, count):
        top = cur[-1]
        cur = [field.zero] + cur[:-1]
        if top != field.zero:
            for j in range(n):
                cur[j] = field.add(cur[j], field.mul(top, field.neg(modulus[j])))
        rows[k] = tuple(cur)
    return rows


def is_irreducible(field, poly: tuple) -> bool:
    """Irreducibility over the field, by gcd with x**(q**d) - x for d <= n/2.

    x**(q**d) - x is the product of all monic irreducibles of degree dividing
    d, so a nontrivial gcd at any d <= n/2 is exactly a proper factor.
    """
    n = poly_deg(poly)
    if n < 1:
        return False
    if n == 1:
        return True
    if poly[-1] == field.zero:
        raise ValueError("polynomial must have nonzero leading coefficient")
    q = field.order
    x = (field.zero, field.one)
    w = x
    for _ in range(n // 2):
        w = poly_pow_mod(field, w, q, poly)
        if poly_deg(poly_gcd(field, poly_sub(field, w, x), poly)) >= 1:
            return False
    return True


def find_irreducible(field, n: int) -> tuple:
    """The canonical monic irreducible of degree n: smallest integer code.

    A monic candidate c_0 + c_1 u + ... + u**n is ranked by the integer
    sum(code(c_i) * q**i); candidates are scanned in that order and the first
    irreducible one is returned.  Deterministic, and existence is guaranteed
    for every q and n >= 1.
    """
    if n < 1:
        raise ValueError("degree must be >= 1")
    if n == 1:
        return (field.zero, field.one)
    q = field.order
    for code in range(q**n):
        coeffs = []
        k = code
        for _ in range(n):
            coeffs.append(field.from_int(k % q))
            k //= q
        if coeffs[0] == field.zero:
            continue  # divisible by u
        cand = tuple(coeffs) + (field.one,)
        if is_irreducible(field, cand):
            return cand
    raise AssertionError("unreachable: irreducibles exist for every degree")


def count_places_rational_ff(q: int, d: int) -> int:
    """Number of degree-d places of the rational function field over GF(q).

    d == 1 counts the q affine points plus infinity; d >= 2 counts monic
    irreducible polynomials of degree d via the necklace formula.
    """
    prime_power_split(q)  # validates q
    if d < 1:
        raise ValueError("place degree must be >= 1")
    if d == 1:
        return q + 1
    total = 0
    for e in range(1, d + 1):
        if d % e == 0:
            total += mobius(e) * q ** (d // e)
    return total // d


# ---------------------------------------------------------------------------
# dense matrices over a field


class Matrix:
    """Dense row-major matrix of raw field values."""

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, rows: int, cols: int, entries: Sequence):
        if rows * cols != len(entries):
            raise ValueError("entry count does not match shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = list(entries)

    @classmethod
    def from_rows(cls, field, rows: Sequence[Sequence]) -> "Matrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(field, r, c, flat)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        m = cls(field, n, n, [field.zero] * (n * n))
        for i in range(n):
            m[i, i] = field.one
        return m

    @classmethod
    def zero(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, rows, cols, [field.zero] * (rows * cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def __setitem__(self, ij, v):
        i, j = ij
        self.entries[i * self.cols + j] = v

    def row(self, i: int) -> list:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def copy(self) -> "Matrix":
        return Matrix(self.field, self.rows, self.cols, list(self.entries))

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and other.field == self.field
            and other.rows == self.rows
            and other.cols == self.cols
            and other.entries == self.entries
        )

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        f = self.field
        out = Matrix.zero(f, self.rows, other.cols)
        for i in range(self.rows):
            base = i * self.cols
            for k in range(self.cols):
                a = self.entries[base + k]
                if a == f.zero:
                    continue
                obase = k * other.cols
                tbase = i * other.cols
                for j in range(other.cols):
                    out.entries[tbase + j] = f.add(
                        out.entries[tbase + j], f.mul(a, other.entries[obase + j])
                    )
        return out

    def matvec(self, vec: Sequence) -> list:
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        f = self.field
        out = []
        for i in range(self.rows):
            acc = f.zero
            base = i * self.cols
            for j, v in enumerate(vec):
                if v != f.zero:
                    acc = f.add(acc, f.mul(self.entries[base + j], v))
            out.append(acc)
        return out

    def to_int_lists(self) -> list[list[int]]:
        f = self.field
        return [[f.to_int(self[i, j]) for j in range(self.cols)] for i in range(self.rows)]


def solve_linear(m: Matrix, rhs: Matrix) -> Matrix:
    """Solve m @ x = rhs by Gaussian elimination with first-nonzero pivoting.

    m must be square.  Raises SingularMatrixError naming the failing pivot
    column.  Deterministic: the first row with a nonzero entry is the pivot.
    """
    if m.rows != m.cols:
        raise ValueError("solve_linear expects a square matrix")
    if rhs.rows != m.rows:
        raise ValueError("rhs row count mismatch")
    f = m.field
    n = m.rows
    a = m.copy()
    b = rhs.copy()
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r, col] != f.zero), None)
        if pivot is None:
            raise SingularMatrixError(col)
        if pivot != col:
            for j in range(n):
                a[col, j], a[pivot, j] = a[pivot, j], a[col, j]
            for j in range(b.cols):
                b[col, j], b[pivot, j] = b[pivot, j], b[col, j]
        inv = f.inv(a[col, col])
        for j in range(col, n):
            a[col, j] = f.mul(inv, a[col, j])
        for j in range(b.cols):
            b[col, j] = f.mul(inv, b[col, j])
        for r in range(n):
            if r == col:
                continue
            factor = a[r, col]
            if factor == f.zero:
                continue
            for j in range(col, n):
                a[r, j] = f.sub(a[r, j], f.mul(factor, a[col, j]))
            for j in range(b.cols):
                b[r, j] = f.sub(b[r, j], f.mul(factor, b[col, j]))
    return b


def invert(m: Matrix) -> Matrix:
    return solve_linear(m, Matrix.identity(m.field, m.rows))


def select_independent_rows(m: Matrix, need: int) -> list[int]:
    """Indices of the first `need` linearly independent rows, in order.

    Greedy: rows are taken in their given order; a row joins the basis iff it
    does not reduce to zero against the rows already kept.
    """
    f = m.field
    basis: list[tuple[int, list]] = []  # (pivot col, reduced row)
    picked: list[int] = []
    for i in range(m.rows):
        row = m.row(i)
        for pc, brow in basis:
            factor = row[pc]
            if factor != f.zero:
                row = [f.sub(x, f.mul(factor, y)) for x, y in zip(row, brow)]
        pc = next((j for j, x in enumerate(row) if x != f.zero), None)
        if pc is None:
            continue
        inv = f.inv(row[pc])
        row = [f.mul(inv, x) for x in row]
        basis.append((pc, row))
        picked.append(i)
        if len(picked) == need:
            return picked
    raise SingularMatrixError(need - 1)


def all_monic_polys(field, degree: int) -> Iterator[tuple]:
    """Monic degree-d polynomials in canonical (integer code) order."""
    q = field.order
    for code in range(q**degree):
        coeffs = []
        k = code
        for _ in range(degree):
            coeffs.append(field.from_int(k % q))
            k //= q
        yield tuple(coeffs) + (field.one,)


def irreducible_polys(field, degree: int) -> Iterator[tuple]:
    """Monic irreducible degree-d polynomials in canonical order."""
    for cand in all_monic_polys(field, degree):
        if is_irreducible(field, cand):
            yield cand
