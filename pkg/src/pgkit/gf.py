"""Table-driven arithmetic in small finite fields GF(q).

Elements are plain ints in ``range(q)``.  For q = p**k the integer is the
base-p digit encoding of the polynomial representative, constant term in
the lowest digit, so in GF(4) = GF(2)[x]/(x^2+x+1) the element ``x`` is 2
and ``x + 1`` is 3.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# Monic irreducible reduction polynomials, low-degree coefficient first:
# x^2+x+1 -> (1, 1, 1).
BUILTIN_POLYS: dict[int, tuple[int, int, tuple[int, ...]]] = {
    4: (2, 2, (1, 1, 1)),
    8: (2, 3, (1, 1, 0, 1)),
    9: (3, 2, (1, 0, 1)),
}


class FieldError(ValueError):
    """Unsupported field order or invalid field operation."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True, eq=False)
class FieldSpec:
    """GF(q) with precomputed q x q addition and multiplication tables."""

    q: int
    p: int
    k: int
    reduction_poly: tuple[int, ...]
    add_table: tuple[tuple[int, ...], ...] = field(repr=False)
    mul_table: tuple[tuple[int, ...], ...] = field(repr=False)
    neg_table: tuple[int, ...] = field(repr=False)
    inv_table: tuple[int | None, ...] = field(repr=False)

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    def sub(self, a: int, b: int) -> int:
        return self.add_table[a][self.neg_table[b]]

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def inv(self, a: int) -> int:
        r = self.inv_table[a]
        if r is None:
            raise FieldError("0 has no multiplicative inverse")
        return r

    @property
    def elements(self) -> range:
        return range(self.q)

    def primitive_element(self) -> int:
        """Smallest generator of the multiplicative group."""
        for g in range(2 if self.q > 2 else 1, self.q):
            x, order = g, 1
            while x != 1:
                x = self.mul(x, g)
                order += 1
            if order == self.q - 1:
                return g
        raise FieldError(f"no primitive element in GF({self.q})")  # unreachable for fields

    def __reduce__(self):
        return (field_make, (self.q,))


def _digits(v: int, p: int, k: int) -> list[int]:
    out = []
    for _ in range(k):
        out.append(v % p)
        v //= p
    return out


def _undigits(ds: list[int], p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


def _poly_mulmod(a: list[int], b: list[int], p: int, poly: tuple[int, ...]) -> list[int]:
    k = len(poly) - 1
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % p
    # x^k == -(poly[0] + poly[1] x + ... + poly[k-1] x^(k-1))
    for deg in range(len(prod) - 1, k - 1, -1):
        c = prod[deg]
        if c:
            prod[deg] = 0
            for i, pc in enumerate(poly[:k]):
                prod[deg - k + i] = (prod[deg - k + i] - c * pc) % p
    return prod[:k]


def field_make(q: int) -> FieldSpec:
    """Build GF(q) for prime q or q in {4, 8, 9}.

    Raises:
        FieldError: if q is not prime and has no built-in reduction polynomial.
    """
    if not isinstance(q, int) or isinstance(q, bool):
        raise FieldError(f"field order must be an integer, got {q!r}")
    if is_prime(q):
        p, k, poly = q, 1, ()
        add = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
        mul = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
    elif q in BUILTIN_POLYS:
        p, k, poly = BUILTIN_POLYS[q]
        digs = [_digits(v, p, k) for v in range(q)]
        add = tuple(
            tuple(_undigits([(x + y) % p for x, y in zip(digs[a], digs[b])], p) for b in range(q))
            for a in range(q)
        )
        mul = tuple(
            tuple(_undigits(_poly_mulmod(digs[a], digs[b], p, poly), p) for b in range(q))
            for a in range(q)
        )
    else:
        raise FieldError(
            f"unsupported field order {q}: need a prime or one of {sorted(BUILTIN_POLYS)}"
        )
    neg = tuple(next(b for b in range(q) if add[a][b] == 0) for a in range(q))
    inv = (None,) + tuple(next(b for b in range(1, q) if mul[a][b] == 1) for a in range(1, q))
    return FieldSpec(q, p, k, poly, add, mul, neg, inv)
