"""Exact scalar arithmetic over Q, F_p, and simple extensions F_p[a]/(m).

A :class:`Field` instance owns the arithmetic on *raw* values:

* rationals        -> ``fractions.Fraction`` (always in lowest terms,
                      positive denominator -- Fraction guarantees this),
* prime fields     -> ``int`` in ``[0, p)``,
* extension fields -> ``tuple`` of ints of length ``deg(min_poly)``,
                      coefficients of the residue polynomial.

:class:`Scalar` is a thin wrapper pairing a raw value with its field; it
exists so that callers can do ordinary ``+ - * /`` arithmetic without
carrying the field around by hand.  All heavy code paths work on raw
values directly.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import MalformedInput

RATIONALS = "Rationals"
PRIME = "PrimeField"
EXTENSION = "ExtensionField"


def is_prime(n):
    """Deterministic primality by trial division (intended for n < 2**31)."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# polynomial helpers over F_p (dense coefficient lists, lowest degree first)

def _poly_trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mul_mod(a, b, m, p):
    """a*b reduced mod the monic polynomial m, all over F_p."""
    prod = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    # reduce: m is monic of degree d
    d = len(m) - 1
    while len(prod) > d:
        top = prod.pop()
        if top:
            k = len(prod) - d
            for i in range(d):
                prod[k + i] = (prod[k + i] - top * m[i]) % p
    return _poly_trim(prod)


def _poly_divmod(a, b, p):
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, -1, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = (a[-1] * inv_lb) % p
        q[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % p
        _poly_trim(a)
        if not a:
            break
    return q, a


def _poly_inverse_mod(a, m, p):
    """Inverse of a modulo m over F_p via extended Euclid; None if not coprime."""
    r0, r1 = list(m), _poly_trim(list(a))
    s0, s1 = [], [1]
    while r1:
        q, r = _poly_divmod(r0, r1, p)
        # s = s0 - q*s1
        s = list(s0) + [0] * max(0, len(q) + len(s1) - 1 - len(s0))
        for i, qi in enumerate(q):
            if qi:
                for j, sj in enumerate(s1):
                    idx = i + j
                    s[idx] = (s[idx] - qi * sj) % p
        r0, r1 = r1, _poly_trim(r)
        s0, s1 = s1, _poly_trim(s)
    if len(r0) != 1:
        return None
    inv_r0 = pow(r0[0], -1, p)
    return _poly_trim([(c * inv_r0) % p for c in s0])


def _is_irreducible(m, p):
    """Exhaustive root / quadratic-factor search; fine for the small p used here."""
    deg = len(m) - 1
    for r in range(p):
        acc, powr = 0, 1
        for c in m:
            acc = (acc + c * powr) % p
            powr = (powr * r) % p
        if acc == 0:
            return False
    if deg == 4:
        # no roots rules out linear factors; still need to exclude (quadratic)^2
        # or a product of two irreducible quadratics
        for b in range(p):
            for c in range(p):
                _, rem = _poly_divmod(list(m), [c, b, 1], p)
                if not rem:
                    return False
    return True


class Field:
    """Immutable field description plus arithmetic on raw values."""

    __slots__ = ("kind", "p", "min_poly", "_deg")

    def __init__(self, kind, p=None, min_poly=None):
        self.kind = kind
        self.p = p
        self.min_poly = tuple(min_poly) if min_poly is not None else None
        if kind == RATIONALS:
            if p is not None or min_poly is not None:
                raise MalformedInput("rationals take no modulus")
            self._deg = 1
        elif kind == PRIME:
            if not isinstance(p, int) or p >= 2**31 or not is_prime(p):
                raise MalformedInput(f"modulus {p!r} is not a prime below 2**31")
            if min_poly is not None:
                raise MalformedInput("prime field takes no min_poly")
            self._deg = 1
        elif kind == EXTENSION:
            if not isinstance(p, int) or p >= 2**31 or not is_prime(p):
                raise MalformedInput(f"modulus {p!r} is not a prime below 2**31")
            m = self.min_poly
            if m is None or not (3 <= len(m) <= 5):
                raise MalformedInput("min_poly must have degree in [2, 4]")
            if any(not isinstance(c, int) or not (0 <= c < p) for c in m):
                raise MalformedInput("min_poly coefficients must be reduced mod p")
            if m[-1] != 1:
                raise MalformedInput("min_poly must be monic")
            if not _is_irreducible(m, p):
                raise MalformedInput("min_poly is reducible over F_p")
            self._deg = len(m) - 1
        else:
            raise MalformedInput(f"unknown field kind {kind!r}")

    # constructors ---------------------------------------------------------
    @staticmethod
    def rationals():
        return Field(RATIONALS)

    @staticmethod
    def prime(p):
        return Field(PRIME, p)

    @staticmethod
    def extension(p, min_poly):
        return Field(EXTENSION, p, min_poly)

    # identity -------------------------------------------------------------
    def __eq__(self, other):
        return (isinstance(other, Field) and self.kind == other.kind
                and self.p == other.p and self.min_poly == other.min_poly)

    def __hash__(self):
        return hash((self.kind, self.p, self.min_poly))

    def __repr__(self):
        if self.kind == RATIONALS:
            return "Q"
        if self.kind == PRIME:
            return f"F{self.p}"
        return f"F{self.p}[a]/{list(self.min_poly)}"

    @property
    def characteristic(self):
        return 0 if self.kind == RATIONALS else self.p

    @property
    def degree(self):
        return self._deg

    def order(self):
        """Number of elements, or None for the rationals."""
        if self.kind == RATIONALS:
            return None
        return self.p ** self._deg

    # raw arithmetic ---------------------------------------------------------
    def zero(self):
        if self.kind == RATIONALS:
            return Fraction(0)
        if self.kind == PRIME:
            return 0
        return (0,) * self._deg

    def one(self):
        if self.kind == RATIONALS:
            return Fraction(1)
        if self.kind == PRIME:
            return 1
        return (1,) + (0,) * (self._deg - 1)

    def from_int(self, n):
        if self.kind == RATIONALS:
            return Fraction(n)
        if self.kind == PRIME:
            return n % self.p
        return (n % self.p,) + (0,) * (self._deg - 1)

    def coerce(self, v):
        """Normalize v (int, Fraction, tuple/list, or Scalar) to a raw value."""
        if isinstance(v, Scalar):
            if v.field != self:
                raise MalformedInput("scalar from a different field")
            return v.value
        if isinstance(v, bool):
            raise MalformedInput("bool is not a scalar")
        if isinstance(v, int):
            return self.from_int(v)
        if self.kind == RATIONALS:
            if isinstance(v, Fraction):
                return v
            raise MalformedInput(f"cannot coerce {v!r} into Q")
        if self.kind == EXTENSION and isinstance(v, (tuple, list)):
            if len(v) > self._deg:
                raise MalformedInput("residue longer than extension degree")
            c = tuple(int(x) % self.p for x in v)
            return c + (0,) * (self._deg - len(c))
        raise MalformedInput(f"cannot coerce {v!r} into {self!r}")

    def add(self, a, b):
        if self.kind == RATIONALS:
            return a + b
        if self.kind == PRIME:
            return (a + b) % self.p
        return tuple((x + y) % self.p for x, y in zip(a, b))

    def sub(self, a, b):
        if self.kind == RATIONALS:
            return a - b
        if self.kind == PRIME:
            return (a - b) % self.p
        return tuple((x - y) % self.p for x, y in zip(a, b))

    def neg(self, a):
        if self.kind == RATIONALS:
            return -a
        if self.kind == PRIME:
            return (-a) % self.p
        return tuple((-x) % self.p for x in a)

    def mul(self, a, b):
        if self.kind == RATIONALS:
            return a * b
        if self.kind == PRIME:
            return (a * b) % self.p
        c = _poly_mul_mod(list(a), list(b), list(self.min_poly), self.p)
        return tuple(c) + (0,) * (self._deg - len(c))

    def inv(self, a):
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONALS:
            return 1 / a
        if self.kind == PRIME:
            return pow(a, -1, self.p)
        c = _poly_inverse_mod(list(a), list(self.min_poly), self.p)
        return tuple(c) + (0,) * (self._deg - len(c))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow_int(self, a, n):
        if n < 0:
            return self.pow_int(self.inv(a), -n)
        r, b = self.one(), a
        while n:
            if n & 1:
                r = self.mul(r, b)
            b = self.mul(b, b)
            n >>= 1
        return r

    def is_zero(self, a):
        if self.kind == EXTENSION:
            return all(x == 0 for x in a)
        return a == 0

    def is_one(self, a):
        return a == self.one()

    # sampling / enumeration -------------------------------------------------
    def elements(self):
        """All elements (finite fields only)."""
        if self.kind == PRIME:
            return list(range(self.p))
        if self.kind == EXTENSION:
            out = [()]
            for _ in range(self._deg):
                out = [t + (c,) for t in out for c in range(self.p)]
            return out
        raise MalformedInput("cannot enumerate an infinite field")

    def random(self, rng, bound=4):
        """Small random element; for Q a small integer (possibly zero)."""
        if self.kind == RATIONALS:
            return Fraction(rng.small_int(bound))
        if self.kind == PRIME:
            return rng.randrange(self.p)
        return tuple(rng.randrange(self.p) for _ in range(self._deg))

    def random_nonzero(self, rng, bound=4):
        while True:
            v = self.random(rng, bound)
            if not self.is_zero(v):
                return v

    # text -------------------------------------------------------------------
    def format(self, a):
        if self.kind == RATIONALS:
            return str(a)
        if self.kind == PRIME:
            return str(a)
        return ",".join(str(c) for c in a)

    def parse(self, s):
        """Inverse of :meth:`format`; also accepts plain ints for any field."""
        if isinstance(s, int):
            return self.from_int(s)
        if not isinstance(s, str):
            raise MalformedInput(f"scalar string expected, got {s!r}")
        s = s.strip()
        if self.kind == RATIONALS:
            try:
                return Fraction(s)
            except (ValueError, ZeroDivisionError) as exc:
                raise MalformedInput(f"bad rational {s!r}") from exc
        if self.kind == PRIME:
            try:
                return int(s, 10) % self.p
            except ValueError as exc:
                raise MalformedInput(f"bad residue {s!r}") from exc
        try:
            coeffs = [int(part, 10) for part in s.split(",")]
        except ValueError as exc:
            raise MalformedInput(f"bad extension residue {s!r}") from exc
        return self.coerce(coeffs)

    def describe(self):
        """JSON-able field description."""
        d = {"kind": self.kind}
        if self.p is not None:
            d["p"] = self.p
        if self.min_poly is not None:
            d["min_poly"] = list(self.min_poly)
        return d

    @staticmethod
    def from_description(d):
        kind = d.get("kind")
        if kind == RATIONALS:
            return Field.rationals()
        if kind == PRIME:
            return Field.prime(d.get("p"))
        if kind == EXTENSION:
            return Field.extension(d.get("p"), d.get("min_poly", ()))
        raise MalformedInput(f"unknown field kind {kind!r}")


class Scalar:
    """A field element: a raw value tagged with its field."""

    __slots__ = ("field", "value")

    def __init__(self, field, value):
        self.field = field
        self.value = field.coerce(value)

    def _raw(self, other):
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise MalformedInput("scalars from different fields")
            return other.value
        return self.field.coerce(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._raw(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._raw(other)))

    def __rsub__(self, other):
        return Scalar(self.field, self.field.sub(self._raw(other), self.value))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._raw(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._raw(other)))

    def __rtruediv__(self, other):
        return Scalar(self.field, self.field.div(self._raw(other), self.value))

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __pow__(self, n):
        return Scalar(self.field, self.field.pow_int(self.value, n))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.field == other.field and self.value == other.value
        try:
            return self.value == self.field.coerce(other)
        except MalformedInput:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"Scalar({self.field!r}, {self.field.format(self.value)})"

    def __str__(self):
        return self.field.format(self.value)
