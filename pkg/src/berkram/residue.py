"""Residue fields: the rationals and towers of finite fields.

A residue field is presented as a small handle object with a uniform
protocol (``zero``, ``one``, ``from_int``, ``char``, ``size``,
``elements()``) so polynomial code in :mod:`berkram.rpoly` can work over
either.  Elements of the rationals are plain ``fractions.Fraction``;
elements of a finite field are :class:`FFElem`, which carries its field
handle and supports the usual arithmetic operators.

Finite fields are built as towers: ``FiniteField(p)`` is the prime
field, and ``FiniteField.extend(minpoly)`` adjoins a root of a monic
irreducible polynomial over the current level.  Tower sizes stay tiny in
practice (desk-scale instances), so root finding is exhaustive search.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedExtension

# Exhaustive enumeration of a tower is the root-finding workhorse; refuse
# to build towers where that becomes unreasonable.
MAX_TOWER_SIZE = 1_000_000


class RationalField:
    """Handle for the field of rational numbers (residue char 0)."""

    char = 0
    size = None  # infinite

    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, n: int) -> Fraction:
        return Fraction(n)

    def is_zero(self, x: Fraction) -> bool:
        return x == 0

    def coerce(self, x) -> Fraction:
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise TypeError(f"cannot coerce {x!r} into the rationals")

    def elements(self):
        raise UnsupportedExtension("cannot enumerate the rationals")

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")


QQ = RationalField()


@dataclass(frozen=True)
class FFElem:
    """Element of a finite field tower level.

    ``payload`` is an int in [0, p) at the prime level, else a tuple of
    elements of the base level (ascending powers of the generator,
    length = extension degree).
    """

    field: "FiniteField"
    payload: object

    def __add__(self, other):
        return self.field.add(self, self.field.coerce(other))

    __radd__ = __add__

    def __neg__(self):
        return self.field.neg(self)

    def __sub__(self, other):
        return self.field.add(self, self.field.neg(self.field.coerce(other)))

    def __rsub__(self, other):
        return self.field.add(self.field.coerce(other), self.field.neg(self))

    def __mul__(self, other):
        return self.field.mul(self, self.field.coerce(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self.field.mul(self, self.field.inv(self.field.coerce(other)))

    def __rtruediv__(self, other):
        return self.field.mul(self.field.coerce(other), self.field.inv(self))

    def __pow__(self, n: int):
        return self.field.pow(self, n)

    def __bool__(self):
        return not self.field.is_zero(self)

    def __repr__(self):
        return self.field.render(self)


class FiniteField:
    """A level of a finite-field tower F_{p^m}.

    The prime level stores arithmetic mod p; an extension level stores a
    monic irreducible ``minpoly`` (tuple of base elements, ascending,
    without the leading 1) over its ``base`` level and a printable
    generator name.
    """

    def __init__(self, p: int, base: "FiniteField | None" = None,
                 minpoly: tuple = (), gen_name: str = "g"):
        if base is None:
            if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
                raise ValueError(f"residue characteristic must be prime, got {p}")
            self.p = p
            self.base = None
            self.minpoly = ()
            self.degree = 1
            self.size = p
            self.gen_name = None
        else:
            self.p = base.p
            self.base = base
            self.minpoly = tuple(minpoly)  # length = degree, monic implied
            self.degree = len(minpoly)
            self.size = base.size ** self.degree
            self.gen_name = gen_name
            if self.size > MAX_TOWER_SIZE:
                raise UnsupportedExtension(
                    f"finite field tower of size {self.size} exceeds the supported bound")
        self.char = self.p

    # -- construction -------------------------------------------------

    @property
    def zero(self) -> FFElem:
        return self.from_int(0)

    @property
    def one(self) -> FFElem:
        return self.from_int(1)

    def from_int(self, n: int) -> FFElem:
        if self.base is None:
            return FFElem(self, n % self.p)
        coeffs = [self.base.from_int(n)] + [self.base.zero] * (self.degree - 1)
        return FFElem(self, tuple(coeffs))

    def gen(self) -> FFElem:
        """Generator of this level over its base."""
        if self.base is None:
            raise ValueError("prime field has no tower generator")
        coeffs = [self.base.zero] * self.degree
        coeffs[1 if self.degree > 1 else 0] = self.base.one
        if self.degree == 1:
            # x - c : generator is the constant root
            return FFElem(self, (self.base.neg(self.minpoly[0]),))
        return FFElem(self, tuple(coeffs))

    def coerce(self, x) -> FFElem:
        if isinstance(x, FFElem):
            if x.field is self or x.field == self:
                return x
            return self.embed(x)
        if isinstance(x, int):
            return self.from_int(x)
        raise TypeError(f"cannot coerce {x!r} into {self!r}")

    def embed(self, x: FFElem) -> FFElem:
        """Embed an element of a lower tower level as a constant."""
        if x.field == self:
            return x
        if self.base is None:
            raise TypeError(f"{x!r} does not live in {self!r}")
        inner = self.base.embed(x) if x.field != self.base else x
        coeffs = [inner] + [self.base.zero] * (self.degree - 1)
        return FFElem(self, tuple(coeffs))

    # -- arithmetic ---------------------------------------------------

    def is_zero(self, x: FFElem) -> bool:
        if self.base is None:
            return x.payload == 0
        return all(self.base.is_zero(c) for c in x.payload)

    def add(self, x: FFElem, y: FFElem) -> FFElem:
        if self.base is None:
            return FFElem(self, (x.payload + y.payload) % self.p)
        return FFElem(self, tuple(self.base.add(a, b)
                                  for a, b in zip(x.payload, y.payload)))

    def neg(self, x: FFElem) -> FFElem:
        if self.base is None:
            return FFElem(self, (-x.payload) % self.p)
        return FFElem(self, tuple(self.base.neg(c) for c in x.payload))

    def mul(self, x: FFElem, y: FFElem) -> FFElem:
        if self.base is None:
            return FFElem(self, (x.payload * y.payload) % self.p)
        b = self.base
        n = self.degree
        prod = [b.zero] * (2 * n - 1)
        for i, xi in enumerate(x.payload):
            if b.is_zero(xi):
                continue
            for j, yj in enumerate(y.payload):
                prod[i + j] = b.add(prod[i + j], b.mul(xi, yj))
        # reduce modulo the monic minpoly: x^n = -minpoly
        for k in range(2 * n - 2, n - 1, -1):
            c = prod[k]
            if b.is_zero(c):
                continue
            prod[k] = b.zero
            for j, mj in enumerate(self.minpoly):
                prod[k - n + j] = b.add(prod[k - n + j], b.neg(b.mul(c, mj)))
        return FFElem(self, tuple(prod[:n]))

    def pow(self, x: FFElem, n: int) -> FFElem:
        if n < 0:
            return self.pow(self.inv(x), -n)
        result = self.one
        base = x
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def inv(self, x: FFElem) -> FFElem:
        if self.is_zero(x):
            raise ZeroDivisionError("inverse of zero in finite field")
        # x^(q-2) works at every level and avoids a tower-aware euclid
        return self.pow(x, self.size - 2)

    def pth_root(self, x: FFElem) -> FFElem:
        """Inverse of Frobenius (unique in a finite field)."""
        return self.pow(x, self.size // self.p)

    # -- enumeration / misc -------------------------------------------

    def elements(self):
        if self.base is None:
            for n in range(self.p):
                yield FFElem(self, n)
        else:
            def rec(i):
                if i == self.degree:
                    yield ()
                    return
                for rest in rec(i + 1):
                    for c in self.base.elements():
                        yield (c,) + rest
            for tup in rec(0):
                yield FFElem(self, tup)

    def extend(self, minpoly_coeffs, gen_name: str = None) -> "FiniteField":
        """Adjoin a root of a monic irreducible polynomial over this level.

        ``minpoly_coeffs`` lists all coefficients ascending including the
        leading 1; linear polynomials return the field unchanged.
        """
        coeffs = [self.coerce(c) for c in minpoly_coeffs]
        if len(coeffs) < 2 or self.is_zero(coeffs[-1]):
            raise ValueError("minimal polynomial must be monic nonconstant")
        lead = coeffs[-1]
        if not self.is_zero(self.add(lead, self.neg(self.one))):
            coeffs = [self.mul(c, self.inv(lead)) for c in coeffs]
        if len(coeffs) == 2:
            return self
        from .rpoly import is_irreducible
        if not is_irreducible(self, tuple(coeffs)):
            raise ValueError("minimal polynomial is reducible")
        name = gen_name or self._next_gen_name()
        return FiniteField(self.p, base=self, minpoly=tuple(coeffs[:-1]),
                           gen_name=name)

    def _next_gen_name(self):
        depth = 0
        f = self
        while f.base is not None:
            depth += 1
            f = f.base
        return "g" if depth == 0 else f"g{depth + 1}"

    def render(self, x: FFElem) -> str:
        if self.base is None:
            return str(x.payload)
        parts = []
        for i, c in enumerate(x.payload):
            if self.base.is_zero(c):
                continue
            cs = self.base.render(c)
            if i == 0:
                parts.append(cs)
            else:
                head = "" if cs == "1" else f"{cs}*"
                parts.append(f"{head}{self.gen_name}" + (f"^{i}" if i > 1 else ""))
        return " + ".join(parts) if parts else "0"

    def __repr__(self):
        if self.base is None:
            return f"F{self.p}"
        return f"{self.base!r}[{self.gen_name}]/deg{self.degree}"

    def __eq__(self, other):
        return (isinstance(other, FiniteField) and self.p == other.p
                and self.base == other.base and self.minpoly == other.minpoly)

    def __hash__(self):
        return hash((self.p, self.degree, self.minpoly))
