"""Exact arithmetic in computable non-Archimedean fields.

Three field models are supported, chosen so that every identity the
library checks is exact integer or rational data:

``equichar0``
    Truncated Puiseux-type series in a uniformizer ``t`` with rational
    coefficients; residue field is the rationals, residue characteristic 0.

``equicharp``
    The same series shape over a tower of finite fields of
    characteristic p (so the field itself has characteristic p).

``mixed``
    The rationals with a root pi = p^(1/N) adjoined for a configured
    ramification index N.  Elements are finite sums of unit rational
    multiples of powers of pi; arithmetic is exact (a number field), and
    ord(p) = 1 so that ord(p^(1/(p-1))) = 1/(p-1).

An element is stored as an ascending tuple of ``(exponent, coefficient)``
terms plus a precision cap: all exponents are below the cap, and the cap
is ``None`` for exact elements.  Only exact elements are certified zero;
an empty inexact element raises :class:`ZeroWithinPrecision` wherever a
certified answer is required.

Elements and fields are immutable values; all operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import (NegativeValuation, SemanticError, UnsupportedExtension,
                     ZeroWithinPrecision)
from .residue import QQ, FFElem, FiniteField

INF = math.inf

EQUICHAR0 = "equichar0"
EQUICHARP = "equicharp"
MIXED = "mixed"


def _vp(x: Fraction, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


class GroundField:
    """Configuration of one computable valued field.

    Instances are immutable; ``extend_coefficients`` and
    ``with_ram_index`` return fresh fields.
    """

    def __init__(self, mode: str, p: int = 0, ram_index: int = 1,
                 residue_field=None, precision: Fraction = None):
        if mode not in (EQUICHAR0, EQUICHARP, MIXED):
            raise ValueError(f"unknown field mode {mode!r}")
        if mode == EQUICHAR0 and p != 0:
            raise ValueError("equichar0 has residue characteristic 0")
        if mode in (EQUICHARP, MIXED) and p < 2:
            raise ValueError(f"mode {mode} needs a prime residue characteristic")
        if ram_index < 1:
            raise ValueError("ramification index must be >= 1")
        self.mode = mode
        self.p = p
        self.ram_index = ram_index
        if residue_field is None:
            residue_field = QQ if mode == EQUICHAR0 else FiniteField(p)
        self.residue_field = residue_field
        if precision is None:
            precision = Fraction(64, ram_index)
        self.precision = Fraction(precision)
        self.uniformizer_name = "p" if mode == MIXED else "t"

    # -- identity -------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, GroundField) and self.mode == other.mode
                and self.p == other.p and self.ram_index == other.ram_index
                and self.residue_field == other.residue_field)

    def __hash__(self):
        return hash((self.mode, self.p, self.ram_index))

    def __repr__(self):
        bits = [self.mode]
        if self.p:
            bits.append(f"p={self.p}")
        if self.ram_index != 1:
            bits.append(f"N={self.ram_index}")
        return f"GroundField({', '.join(bits)})"

    # -- structure queries -----------------------------------------------

    @property
    def residue_char(self) -> int:
        return self.p

    @property
    def field_char(self) -> int:
        return self.p if self.mode == EQUICHARP else 0

    def in_value_group(self, s: Fraction) -> bool:
        return (Fraction(s) * self.ram_index).denominator == 1

    def with_ram_index(self, n: int) -> "GroundField":
        if n == self.ram_index:
            return self
        if self.mode == MIXED:
            raise UnsupportedExtension(
                "mixed-mode ramification index is fixed at configuration")
        return GroundField(self.mode, self.p, n, self.residue_field,
                           self.precision)

    def extend_coefficients(self, minpoly_coeffs) -> "GroundField":
        """Adjoin a root of an irreducible polynomial to the residue field.

        Only finite towers support genuine extensions; elsewhere a linear
        minimal polynomial is a no-op and anything else is an
        UnsupportedExtension.
        """
        if len(minpoly_coeffs) == 2:
            return self
        if self.mode != EQUICHARP:
            raise UnsupportedExtension(
                f"cannot adjoin a degree-{len(minpoly_coeffs) - 1} residue root "
                f"in {self.mode} mode")
        tower = self.residue_field.extend(minpoly_coeffs)
        return GroundField(self.mode, self.p, self.ram_index, tower,
                           self.precision)

    # -- element constructors ---------------------------------------------

    def _coerce_coeff(self, c):
        if self.mode == EQUICHAR0:
            return QQ.coerce(c)
        if self.mode == EQUICHARP:
            return self.residue_field.coerce(c)
        if isinstance(c, FFElem):
            c = Fraction(c.payload)
        return QQ.coerce(c)

    def zero(self) -> "FieldElement":
        return FieldElement(self, (), None)

    def one(self) -> "FieldElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "FieldElement":
        return self.from_coeff(n, Fraction(0))

    def from_rational(self, q: Fraction) -> "FieldElement":
        return self.from_coeff(Fraction(q), Fraction(0))

    def from_coeff(self, c, exp) -> "FieldElement":
        """The single-term element c * u^exp (u the uniformizer)."""
        c = self._coerce_coeff(c)
        return make_element(self, [(Fraction(exp), c)], None)

    def uniformizer_pow(self, exp) -> "FieldElement":
        exp = Fraction(exp)
        one = QQ.one if self.mode != EQUICHARP else self.residue_field.one
        return make_element(self, [(exp, one)], None)

    def lift(self, r) -> "FieldElement":
        """A canonical lift of a residue-field element (ord >= 0, residue r)."""
        if self.mode == MIXED:
            if isinstance(r, FFElem):
                r = r.payload
            return self.from_rational(Fraction(r))
        return self.from_coeff(r, Fraction(0))

    def residue_of_coeff(self, c):
        """Image of a term coefficient in the residue field."""
        if self.mode == MIXED:
            fp = self.residue_field
            num = fp.from_int(c.numerator)
            den = fp.from_int(c.denominator)
            return num / den
        return c


def ground_field(mode: str, p: int = 0, ram_index: int = 1,
                 precision=None) -> GroundField:
    return GroundField(mode, p=p, ram_index=ram_index, precision=precision)


# -------------------------------------------------------------------------
# element construction with canonicalization
# -------------------------------------------------------------------------

def make_element(field: GroundField, terms, prec) -> "FieldElement":
    """Canonicalize a term list into a FieldElement.

    Merges equal exponents, drops zero coefficients and terms at or above
    the precision cap; in mixed mode also merges exponent classes mod 1
    and re-splits unit parts.
    """
    merged = {}
    rf = field.residue_field
    for exp, c in terms:
        exp = Fraction(exp)
        if exp in merged:
            merged[exp] = merged[exp] + c
        else:
            merged[exp] = c
    if field.mode == MIXED:
        merged = _mixed_canonical(field, merged)
        out = []
        for exp in sorted(merged):
            out.append((exp, merged[exp]))
    else:
        out = []
        for exp in sorted(merged):
            c = merged[exp]
            zero = (c == 0) if field.mode == EQUICHAR0 else rf.is_zero(c)
            if not zero:
                out.append((exp, c))
    if prec is not None:
        prec = Fraction(prec)
        out = [(e, c) for (e, c) in out if e < prec]
    return FieldElement(field, tuple(out), prec)


def _mixed_canonical(field: GroundField, merged: dict) -> dict:
    p, n = field.p, field.ram_index
    classes = {}
    for exp, c in merged.items():
        if (exp * n).denominator != 1:
            raise SemanticError(
                f"exponent {exp} outside the value group (1/{n})Z of the "
                f"mixed tower")
        frac = exp - math.floor(exp)
        classes.setdefault(frac, []).append((exp, Fraction(c)))
    out = {}
    for frac, parts in classes.items():
        total = Fraction(0)
        for exp, u in parts:
            k = exp - frac  # integer
            total += u * Fraction(p) ** int(k)
        if total == 0:
            continue
        w = _vp(total, p)
        unit = total / Fraction(p) ** w
        out[frac + w] = unit
    return out


@dataclass(frozen=True)
class FieldElement:
    """A truncated generalized power series in the uniformizer.

    ``terms`` is strictly ascending in exponent; ``prec`` is an exclusive
    exponent cap or None for exact elements.
    """

    field: GroundField
    terms: tuple
    prec: object  # Fraction | None

    # -- basic queries --------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    @property
    def is_exact_zero(self) -> bool:
        return self.prec is None and not self.terms

    def ord(self):
        """The valuation; +inf only for certified (exact) zero."""
        if self.terms:
            return self.terms[0][0]
        if self.prec is None:
            return INF
        raise ZeroWithinPrecision(
            f"no term below precision O(u^{self.prec}); cannot certify ord")

    def ord_lower_bound(self):
        """Always defined: ord for visible elements, the cap otherwise."""
        if self.terms:
            return self.terms[0][0]
        return INF if self.prec is None else self.prec

    def is_unit_certain(self) -> bool:
        return bool(self.terms) and self.terms[0][0] == 0

    def residue(self):
        """Image in the residue field (requires ord >= 0)."""
        rf = self.field.residue_field
        if not self.terms:
            if self.prec is None:
                return rf.zero if self.field.mode != EQUICHAR0 else QQ.zero
            if self.prec <= 0:
                raise ZeroWithinPrecision(
                    "precision cap <= 0: residue not determined")
            return rf.zero if self.field.mode != EQUICHAR0 else QQ.zero
        e0 = self.terms[0][0]
        if e0 < 0:
            raise NegativeValuation(f"residue of an element with ord {e0} < 0")
        if e0 > 0 or (self.prec is not None and self.prec <= 0):
            if self.prec is not None and self.prec <= 0:
                raise ZeroWithinPrecision(
                    "precision cap <= 0: residue not determined")
            return rf.zero if self.field.mode != EQUICHAR0 else QQ.zero
        c0 = self.terms[0][1]
        return self.field.residue_of_coeff(c0)

    # -- arithmetic -------------------------------------------------------

    def _check_compat(self, other: "FieldElement"):
        if self.field != other.field:
            raise SemanticError(
                f"elements of incompatible fields {self.field!r} and "
                f"{other.field!r}")

    def __add__(self, other: "FieldElement") -> "FieldElement":
        self._check_compat(other)
        prec = _min_prec(self.prec, other.prec)
        return make_element(self.field, self.terms + other.terms, prec)

    def __neg__(self) -> "FieldElement":
        return FieldElement(self.field,
                            tuple((e, -c) for (e, c) in self.terms), self.prec)

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        self._check_compat(other)
        if self.is_exact_zero or other.is_exact_zero:
            return self.field.zero()
        prec = None
        if self.prec is not None:
            prec = _min_prec(prec, self.prec + other.ord_lower_bound())
        if other.prec is not None:
            prec = _min_prec(prec, other.prec + self.ord_lower_bound())
        out = []
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                out.append((e1 + e2, c1 * c2))
        return make_element(self.field, out, prec)

    def __pow__(self, n: int) -> "FieldElement":
        if n < 0:
            return self.field.one() / self ** (-n)
        result = self.field.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other: "FieldElement") -> "FieldElement":
        self._check_compat(other)
        return self * other.inverse(hint=self)

    def inverse(self, hint: "FieldElement" = None) -> "FieldElement":
        """Multiplicative inverse, truncated per the precision contract.

        Exact single-term elements invert exactly; mixed-mode elements
        invert exactly via the pi-polynomial representation; general
        series invert by geometric expansion up to the working cap.
        """
        if not self.terms:
            raise ZeroWithinPrecision(
                "cannot certify the divisor is nonzero" if self.prec is not None
                else "division by exact zero")
        field = self.field
        e0, c0 = self.terms[0]
        if field.mode == MIXED:
            return _mixed_inverse(self)
        cinv = (1 / c0) if field.mode == EQUICHAR0 else (field.residue_field.one / c0)
        lead_inv = make_element(field, [(-e0, cinv)], None)
        if len(self.terms) == 1:
            if self.prec is None:
                return lead_inv
            return make_element(field, lead_inv.terms, self.prec - 2 * e0)
        # self = c0 u^e0 (1 + u_part); invert the unit part geometrically
        u = (self * lead_inv) - field.one()  # ord > 0
        if self.prec is not None:
            rel_target = self.prec - e0
        else:
            rel_target = field.precision
        rel_target = max(rel_target, u.ord_lower_bound())
        series = field.one()
        powu = field.one()
        step = u.ord_lower_bound()
        if step == INF:
            series = field.one()
        else:
            k = 1
            while k * step < rel_target:
                powu = (powu * (-u)).truncate(rel_target)
                series = series + powu
                k += 1
        series = series.truncate(rel_target)
        return (series * lead_inv).truncate(rel_target - e0)

    def truncate(self, cap) -> "FieldElement":
        """Forget all terms at or above cap; never raises precision."""
        if cap is None:
            return self
        cap = Fraction(cap)
        prec = cap if self.prec is None else min(self.prec, cap)
        return make_element(self.field, self.terms, prec)

    def truncate_below(self, cap) -> "FieldElement":
        """Exact element made of the terms with exponent < cap.

        This is the canonical-center operation: the result represents the
        same ball of radius exponent >= cap.
        """
        cap = Fraction(cap)
        return make_element(self.field,
                            [(e, c) for (e, c) in self.terms if e < cap], None)

    def shift_exp(self, e) -> "FieldElement":
        """Multiply by uniformizer^e (exact, shifts precision too)."""
        e = Fraction(e)
        prec = None if self.prec is None else self.prec + e
        return make_element(self.field,
                            [(ee + e, c) for (ee, c) in self.terms], prec)

    def map_coeffs(self, fn) -> "FieldElement":
        return make_element(self.field,
                            [(e, fn(c)) for (e, c) in self.terms], self.prec)

    # -- misc ------------------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"<{render_element(self)}>"


def _min_prec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _mixed_inverse(x: FieldElement) -> FieldElement:
    """Exact inverse in the mixed tower Q(p^(1/N))."""
    field = x.field
    p, n = field.p, field.ram_index
    vec = [Fraction(0)] * n
    for e, u in x.terms:
        j = int(e * n)
        q, r = divmod(j, n)
        vec[r] += u * Fraction(p) ** q
    inv = _poly_inverse_mod_radical(vec, p, n)
    terms = []
    for r, a in enumerate(inv):
        if a == 0:
            continue
        w = _vp(a, p)
        terms.append((Fraction(r, n) + w, a / Fraction(p) ** w))
    return make_element(field, terms, None)


def _poly_inverse_mod_radical(vec, p, n):
    """Inverse of sum a_r x^r modulo x^n - p over the rationals."""
    if n == 1:
        return [1 / vec[0]]
    # extended Euclid over Q[x]
    import berkram.rpoly as rp
    mod = tuple([Fraction(-p)] + [Fraction(0)] * (n - 1) + [Fraction(1)])
    a = rp.normalize(QQ, tuple(vec))
    r0, r1 = mod, a
    s0, s1 = (), (Fraction(1),)
    while rp.degree(r1) > 0:
        q, r = rp.divmod_poly(QQ, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, rp.sub(QQ, s0, rp.mul(QQ, q, s1))
    if rp.is_zero(r1):
        raise ZeroDivisionError("element not invertible (radical polynomial not coprime)")
    c = r1[0]
    inv = rp.scalar_mul(QQ, 1 / c, s1)
    inv = rp.divmod_poly(QQ, inv, mod)[1]
    return [inv[i] if i < len(inv) else Fraction(0) for i in range(n)]


# -------------------------------------------------------------------------
# rendering (the element literal grammar lives in cli.py; this is the
# printing half, shared so reprs round-trip)
# -------------------------------------------------------------------------

def render_element(x: FieldElement) -> str:
    field = x.field
    u = field.uniformizer_name
    parts = []
    for e, c in x.terms:
        parts.append(_render_term(field, e, c, u))
    body = ""
    for i, part in enumerate(parts):
        if i == 0:
            body = part
        elif part.startswith("-"):
            body += " - " + part[1:]
        else:
            body += " + " + part
    if not parts:
        body = "0"
    if x.prec is not None:
        body += f" + O({u}^{_render_exp(x.prec)})" if parts else f"O({u}^{_render_exp(x.prec)})"
    return body


def _render_exp(e: Fraction) -> str:
    return str(e.numerator) if e.denominator == 1 else f"({e.numerator}/{e.denominator})"


def _render_coeff(field, c) -> str:
    if field.mode == EQUICHARP:
        s = field.residue_field.render(c)
        return f"({s})" if ("+" in s or " " in s) else s
    return str(c)


def _render_term(field, e, c, u) -> str:
    cs = _render_coeff(field, c)
    if e == 0:
        return cs
    power = u if e == 1 else f"{u}^{_render_exp(e)}"
    if cs == "1":
        return power
    if cs == "-1":
        return f"-{power}"
    return f"{cs}*{power}"
