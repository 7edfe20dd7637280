"""Dense univariate polynomials over a residue field.

Polynomials are tuples of coefficients in ascending degree with no
trailing zeros (the zero polynomial is the empty tuple).  Every function
takes the field handle explicitly; coefficients are ``Fraction`` over
the rationals or :class:`berkram.residue.FFElem` over a finite tower.

Also provides homogeneous binary forms of a fixed degree, used for
reductions of rational maps: a form of degree D is a plain tuple
``(c_0, ..., c_D)`` where ``c_i`` multiplies X^i Y^(D-i).
"""

from __future__ import annotations

from fractions import Fraction

from .errors import UnsupportedExtension
from .residue import QQ, FiniteField


def normalize(field, coeffs) -> tuple:
    coeffs = list(coeffs)
    while coeffs and field.is_zero(coeffs[-1]):
        coeffs.pop()
    return tuple(coeffs)


def degree(poly) -> int:
    """Degree, with deg 0 = -1 by convention."""
    return len(poly) - 1


def is_zero(poly) -> bool:
    return len(poly) == 0


def constant(field, c) -> tuple:
    c = field.coerce(c)
    return () if field.is_zero(c) else (c,)


def add(field, f, g) -> tuple:
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else field.zero
        b = g[i] if i < len(g) else field.zero
        out.append(a + b)
    return normalize(field, out)


def neg(field, f) -> tuple:
    return tuple(-c for c in f)


def sub(field, f, g) -> tuple:
    return add(field, f, neg(field, g))


def mul(field, f, g) -> tuple:
    if not f or not g:
        return ()
    out = [field.zero] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if field.is_zero(a):
            continue
        for j, b in enumerate(g):
            out[i + j] = out[i + j] + a * b
    return normalize(field, out)


def scalar_mul(field, c, f) -> tuple:
    if field.is_zero(c):
        return ()
    return normalize(field, tuple(c * a for a in f))


def divmod_poly(field, f, g):
    """Euclidean division; g must be nonzero."""
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    q = [field.zero] * max(0, len(f) - len(g) + 1)
    r = list(f)
    ginv = field.one / g[-1]
    while len(r) >= len(g) and r:
        c = r[-1] * ginv
        k = len(r) - len(g)
        q[k] = c
        for i, b in enumerate(g):
            r[k + i] = r[k + i] - c * b
        while r and field.is_zero(r[-1]):
            r.pop()
    return normalize(field, q), normalize(field, r)


def monic(field, f) -> tuple:
    if not f:
        return f
    return scalar_mul(field, field.one / f[-1], f)


def gcd_monic(field, f, g) -> tuple:
    """Monic gcd by the Euclidean algorithm."""
    a, b = f, g
    while b:
        a, b = b, divmod_poly(field, a, b)[1]
    return monic(field, a)


def derivative(field, f) -> tuple:
    out = []
    for i in range(1, len(f)):
        c = f[i]
        acc = field.zero
        for _ in range(i):  # i * c without assuming an int action
            acc = acc + c
        out.append(acc)
    return normalize(field, out)


def evaluate(field, f, x):
    acc = field.zero
    for c in reversed(f):
        acc = acc * x + c
    return acc


def shift(field, f, a) -> tuple:
    """Taylor shift f(z + a) by synthetic division."""
    out = list(f)
    if field.is_zero(a):
        return tuple(out)
    n = len(out)
    for i in range(n - 1):
        for j in range(n - 2, i - 1, -1):
            out[j] = out[j] + a * out[j + 1]
    return normalize(field, out)


def root_multiplicity(field, f, a) -> int:
    m = 0
    g = f
    while g and field.is_zero(evaluate(field, g, a)):
        g, r = divmod_poly(field, g, (-a, field.one))
        assert not r
        m += 1
    return m


def pow_mod(field, f, n: int, mod) -> tuple:
    result = (field.one,)
    base = divmod_poly(field, f, mod)[1]
    while n:
        if n & 1:
            result = divmod_poly(field, mul(field, result, base), mod)[1]
        base = divmod_poly(field, mul(field, base, base), mod)[1]
        n >>= 1
    return result


# ----------------------------------------------------------------------
# squarefree decomposition (characteristic aware)
# ----------------------------------------------------------------------

def squarefree_decomposition(field, f):
    """Return [(g_i, m_i)] with f = lc * prod g_i^{m_i}, g_i monic
    squarefree and pairwise coprime, m_i strictly increasing."""
    f = monic(field, f)
    if degree(f) <= 0:
        return []
    p = field.char
    out = {}
    _sqfree_rec(field, f, 1, out, p)
    return sorted(((g, m) for (m, g) in _collect(field, out)), key=lambda t: t[1])


def _collect(field, out):
    merged = {}
    for m, g in out.items():
        if degree(g) >= 1:
            merged[m] = merged.get(m, (field.one,))
            merged[m] = mul(field, merged[m], g)
    return list(merged.items())


def _sqfree_rec(field, f, mult, out, p):
    if degree(f) <= 0:
        return
    df = derivative(field, f)
    if not df:
        # f = h(z^p); take p-th roots of coefficients (Frobenius is onto)
        if p == 0:
            raise AssertionError("zero derivative in characteristic 0")
        h = []
        for i in range(0, len(f), p):
            c = f[i]
            h.append(field.pth_root(c) if isinstance(field, FiniteField) else c)
        _sqfree_rec(field, normalize(field, h), mult * p, out, p)
        return
    g = gcd_monic(field, f, df)
    w = divmod_poly(field, f, g)[0]  # product of squarefree factors
    k = 1
    while degree(w) >= 1:
        y = gcd_monic(field, w, g)
        factor = divmod_poly(field, w, y)[0]
        if degree(factor) >= 1:
            key = mult * k
            prev = out.get(key, (field.one,))
            out[key] = mul(field, prev, factor)
        w = y
        g = divmod_poly(field, g, y)[0]
        k += 1
    if degree(g) >= 1:
        _sqfree_rec(field, g, mult, out, p)


# ----------------------------------------------------------------------
# roots
# ----------------------------------------------------------------------

def roots_with_multiplicity(field, f):
    """All roots of f inside the field itself, as [(root, mult)].

    Over the rationals this is the rational root theorem (complete); over
    a finite tower it is exhaustive search.  Roots outside the field are
    simply not listed.
    """
    if degree(f) < 1:
        return []
    if isinstance(field, FiniteField):
        out = []
        for x in field.elements():
            if field.is_zero(evaluate(field, f, x)):
                out.append((x, root_multiplicity(field, f, x)))
        return out
    return _rational_roots(f)


def _rational_roots(f):
    den_lcm = 1
    for c in f:
        den_lcm = den_lcm * c.denominator // _gcd(den_lcm, c.denominator)
    zf = [int(c * den_lcm) for c in f]
    shift_zeros = 0
    while zf and zf[0] == 0:
        zf.pop(0)
        shift_zeros += 1
    out = []
    if shift_zeros:
        out.append((Fraction(0), shift_zeros))
    if len(zf) <= 1:
        return out
    a0, an = abs(zf[0]), abs(zf[-1])
    for num in _divisors(a0):
        for den in _divisors(an):
            for sgn in (1, -1):
                r = Fraction(sgn * num, den)
                if evaluate(QQ, f, r) == 0:
                    if not any(r == seen for seen, _ in out):
                        out.append((r, root_multiplicity(QQ, f, r)))
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _divisors(n):
    if n == 0:
        return []
    fac = _factorize(n)
    divs = [1]
    for p, e in fac.items():
        divs = [d * p ** k for d in divs for k in range(e + 1)]
    return sorted(set(divs))


def _factorize(n):
    n = abs(n)
    fac = {}
    for p in (2, 3, 5):
        while n % p == 0:
            fac[p] = fac.get(p, 0) + 1
            n //= p
    d = 7
    while d * d <= n and d < 100_000:
        while n % d == 0:
            fac[d] = fac.get(d, 0) + 1
            n //= d
        d += 2
    if n > 1:
        for q in _pollard_factor(n):
            fac[q] = fac.get(q, 0) + 1
    return fac


def _pollard_factor(n):
    """Fully factor n (> 1, no small factors) into primes."""
    if n == 1:
        return []
    if _is_probable_prime(n):
        return [n]
    d = _pollard_rho(n)
    return _pollard_factor(d) + _pollard_factor(n // d)


def _is_probable_prime(n):
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n):
    if n % 2 == 0:
        return 2
    for c in range(1, 50):
        x = y = 2
        d = 1
        while d == 1:
            x = (x * x + c) % n
            y = (y * y + c) % n
            y = (y * y + c) % n
            d = _gcd(abs(x - y), n)
        if d != n:
            return d
    raise UnsupportedExtension(f"failed to factor {n} for rational root search")


# ----------------------------------------------------------------------
# irreducibility / one irreducible factor (finite fields only)
# ----------------------------------------------------------------------

def is_irreducible(field: FiniteField, f) -> bool:
    """Rabin test over a finite field: f monic nonconstant."""
    n = degree(f)
    if n < 1:
        return False
    if n == 1:
        return True
    q = field.size
    x = (field.zero, field.one)
    # x^(q^n) == x mod f
    h = x
    for _ in range(n):
        h = pow_mod(field, h, q, f)
    if normalize(field, sub(field, h, x)):
        return False
    for r in sorted({_p for _p in _factorize(n)}):
        h = x
        for _ in range(n // r):
            h = pow_mod(field, h, q, f)
        g = gcd_monic(field, sub(field, h, x), f)
        if degree(g) > 0:
            return False
    return True


def smallest_irreducible_factor(field: FiniteField, f, rng=None) -> tuple:
    """One monic irreducible factor of smallest degree of a squarefree
    monic polynomial with no roots in the field (Cantor-Zassenhaus)."""
    import random
    rng = rng or random.Random(0x5EED)
    f = monic(field, f)
    q = field.size
    x = (field.zero, field.one)
    # distinct-degree: peel off factors of degree d = 2, 3, ...
    h = pow_mod(field, x, q, f)
    d = 1
    rest = f
    while degree(rest) > 0:
        d += 1
        if 2 * d > degree(rest):
            return rest  # rest itself is irreducible
        h = pow_mod(field, h, q, rest)
        g = gcd_monic(field, sub(field, h, x), rest)
        if degree(g) > 0:
            return _equal_degree_split(field, g, d, rng)
        # keep h reduced as rest shrinks (rest unchanged here)
    raise AssertionError("no factor found in nonconstant polynomial")


def _equal_degree_split(field, f, d, rng):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    while degree(f) > d:
        a = tuple(_random_elem(field, rng) for _ in range(degree(f)))
        a = normalize(field, a)
        if degree(a) < 1:
            continue
        if field.char == 2:
            # trace map
            t = a
            acc = a
            for _ in range(d * _two_power(field.size) - 1):
                t = divmod_poly(field, mul(field, t, t), f)[1]
                acc = add(field, acc, t)
            g = gcd_monic(field, acc, f)
        else:
            e = (field.size ** d - 1) // 2
            b = pow_mod(field, a, e, f)
            g = gcd_monic(field, sub(field, b, (field.one,)), f)
        if 0 < degree(g) < degree(f):
            f = g if degree(g) <= degree(f) - degree(g) else divmod_poly(field, f, g)[0]
    return monic(field, f)


def _two_power(q):
    k = 0
    while q > 1:
        q //= 2
        k += 1
    return k


def _random_elem(field, rng):
    from .residue import FFElem
    if field.base is None:
        return field.from_int(rng.randrange(field.p))
    return FFElem(field, tuple(_random_elem(field.base, rng)
                               for _ in range(field.degree)))


# ----------------------------------------------------------------------
# homogeneous binary forms of fixed degree
# ----------------------------------------------------------------------

def form_from_poly(field, f, D: int) -> tuple:
    """Homogenize a polynomial of degree <= D to a degree-D form."""
    if degree(f) > D:
        raise ValueError("degree exceeds the form degree")
    return tuple(f[i] if i < len(f) else field.zero for i in range(D + 1))


def form_is_zero(field, F) -> bool:
    return all(field.is_zero(c) for c in F)


def form_y_multiplicity(field, F) -> int:
    """Multiplicity of the root at infinity [1:0], i.e. the Y-power."""
    D = len(F) - 1
    i = D
    while i >= 0 and field.is_zero(F[i]):
        i -= 1
    return D - i


def form_dehomogenize(field, F) -> tuple:
    """F(z, 1) as a polynomial."""
    return normalize(field, F)


def form_gcd(field, F, G):
    """Monic gcd of two forms, returned as (poly_part, y_mult).

    The gcd form is y^y_mult * homogenize(poly_part).  If one form is
    zero the gcd is the other (normalized monic).
    """
    if form_is_zero(field, F):
        g = form_dehomogenize(field, G)
        return monic(field, g), form_y_multiplicity(field, G)
    if form_is_zero(field, G):
        f = form_dehomogenize(field, F)
        return monic(field, f), form_y_multiplicity(field, F)
    yf, yg = form_y_multiplicity(field, F), form_y_multiplicity(field, G)
    g = gcd_monic(field, form_dehomogenize(field, F), form_dehomogenize(field, G))
    return g, min(yf, yg)
