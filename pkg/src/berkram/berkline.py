"""Geometry of the Berkovich projective line over a ground field.

Points are stored in the ord scale: the ball point written zeta(a; s)
is the sup-seminorm over the closed disk of radius q^(-s) about a, so
larger s means a smaller ball and all metric geometry is exact rational
arithmetic.  A ball is type II when s lies in the value group (1/N)Z of
the active tower and type III otherwise; classical points are type I
(balls of radius exponent +inf), and infinity is a distinguished
variant.

Ball centers are canonicalized at construction (terms with exponent >= s
are dropped), so structural equality and hashing agree with the
containment criterion for equality of balls.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import (PrecisionExhausted, SemanticError, TypeIIIUnsupported,
                     ZeroWithinPrecision)
from .ratmap import Mobius, Poly, RationalMap
from .valfield import INF, FieldElement, GroundField, render_element

INFDIR = "inf"  # the tangent direction toward infinity


@dataclass(frozen=True)
class BerkPoint:
    """A point of the Berkovich projective line of type I, II or III."""

    field: GroundField
    kind: str                    # 'ball' | 'point' | 'inf'
    center: FieldElement = None  # None for 'inf'
    s: object = None             # Fraction for 'ball', INF conceptually for 'point'

    @staticmethod
    def ball(center: FieldElement, s) -> "BerkPoint":
        s = Fraction(s)
        if center.prec is not None and center.prec < s:
            raise PrecisionExhausted(
                f"ball center known below the radius exponent {s}")
        return BerkPoint(center.field, "ball", center.truncate_below(s), s)

    @staticmethod
    def classical(value: FieldElement) -> "BerkPoint":
        return BerkPoint(value.field, "point", value, None)

    @staticmethod
    def infinity(field: GroundField) -> "BerkPoint":
        return BerkPoint(field, "inf", None, None)

    @staticmethod
    def gauss(field: GroundField) -> "BerkPoint":
        return BerkPoint.ball(field.zero(), Fraction(0))

    # -- classification ------------------------------------------------

    def type_tag(self) -> str:
        if self.kind == "inf":
            return "I"
        if self.kind == "point":
            return "I"
        return "II" if self.field.in_value_group(self.s) else "III"

    @property
    def is_ball(self) -> bool:
        return self.kind == "ball"

    @property
    def is_infinity(self) -> bool:
        return self.kind == "inf"

    def radius_exp(self):
        """The ord-scale diameter exponent (INF for type I)."""
        return self.s if self.kind == "ball" else INF

    def render(self) -> str:
        if self.kind == "inf":
            return "inf"
        if self.kind == "point":
            return f"pt({render_element(self.center)})"
        s = self.s
        stx = str(s.numerator) if s.denominator == 1 else f"{s.numerator}/{s.denominator}"
        return f"zeta({render_element(self.center)}; ord={stx})"

    def __repr__(self):
        return self.render()

    def sort_key(self):
        if self.kind == "inf":
            return (2, 0, "")
        if self.kind == "point":
            return (1, 0, render_element(self.center))
        return (0, self.s, render_element(self.center))


def center_ord_distance(x: BerkPoint, y: BerkPoint):
    """ord of the difference of centers (INF when equal)."""
    delta = x.center - y.center
    if delta.is_exact_zero:
        return INF
    if not delta.terms:
        raise ZeroWithinPrecision("center difference not resolved at precision")
    return delta.terms[0][0]


def join(x: BerkPoint, y: BerkPoint) -> BerkPoint:
    """Least upper bound for the containment order."""
    if x.is_infinity or y.is_infinity:
        return BerkPoint.infinity(x.field)
    level = min(center_ord_distance(x, y), x.radius_exp(), y.radius_exp())
    if level == INF:
        return x
    return BerkPoint.ball(x.center, level)


def compare(x: BerkPoint, y: BerkPoint) -> str:
    """One of 'eq', 'lt' (x strictly below y), 'gt', 'incomparable'."""
    if x.is_infinity and y.is_infinity:
        return "eq"
    if x.is_infinity:
        return "gt"
    if y.is_infinity:
        return "lt"
    sx, sy = x.radius_exp(), y.radius_exp()
    dist = center_ord_distance(x, y)
    x_in_y = sx >= sy and dist >= sy
    y_in_x = sy >= sx and dist >= sx
    if x_in_y and y_in_x:
        return "eq"
    if x_in_y:
        return "lt"
    if y_in_x:
        return "gt"
    return "incomparable"


def contains(outer: BerkPoint, inner: BerkPoint) -> bool:
    return compare(inner, outer) in ("eq", "lt")


def rho(x: BerkPoint, y: BerkPoint):
    """Path distance in the ord scale; +inf when either is type I."""
    if x.kind != "ball" or y.kind != "ball":
        return INF
    j = join(x, y)
    return (x.s - j.s) + (y.s - j.s)


# -------------------------------------------------------------------------
# seminorm evaluation
# -------------------------------------------------------------------------

def seminorm_eval(f: Poly, x: BerkPoint):
    """ord of |f| at x: plain evaluation at type I, the Taylor-shift
    sup-norm at balls.  Returns INF only for the certified zero case."""
    if x.is_infinity:
        raise SemanticError("seminorm of a polynomial at infinity")
    if x.kind == "point":
        v = f.evaluate(x.center)
        if v.is_exact_zero:
            return INF
        if not v.terms:
            raise ZeroWithinPrecision("value not resolved at precision")
        return v.terms[0][0]
    shifted = f.taylor_shift(x.center)
    best = INF
    ambiguous = INF
    for i, c in enumerate(shifted.coeffs):
        if c.terms:
            best = min(best, c.terms[0][0] + i * x.s)
        elif not c.is_exact_zero:
            ambiguous = min(ambiguous, c.prec + i * x.s)
    if best == INF:
        if ambiguous < INF:
            raise ZeroWithinPrecision("sup norm not resolved at precision")
        return INF
    if ambiguous < best:
        raise ZeroWithinPrecision("sup norm not resolved at precision")
    return best


def rational_seminorm(phi: RationalMap, x: BerkPoint):
    """ord |phi(x)| = ord |f(x)| - ord |g(x)|."""
    num = seminorm_eval(phi.f, x)
    den = seminorm_eval(phi.g, x)
    if num == INF:
        return INF
    if den == INF:
        return -INF
    return num - den


# -------------------------------------------------------------------------
# tangent directions
# -------------------------------------------------------------------------

@dataclass(frozen=True)
class TangentDirection:
    """A tangent direction at a type II point, keyed by P1(residue field).

    ``direction`` is a residue-field element for the directions inside
    the ball and the marker INFDIR for the outward component.  ``coord``
    records the affine chart moving the Gauss point to ``at``.
    """

    at: BerkPoint
    direction: object
    coord: Mobius = None

    def render(self) -> str:
        d = "inf" if self.direction == INFDIR else repr(self.direction)
        return f"dir({d} at {self.at.render()})"

    def __repr__(self):
        return self.render()


def gauss_chart(x: BerkPoint, log: list = None) -> Mobius:
    """The affine map z -> u^s z + center sending the Gauss point to x.

    In the Puiseux modes a radius exponent outside the active value group
    silently raises the ramification index (the event is recorded in the
    run log); the mixed tower is fixed, so there it is an error.
    """
    field = x.field
    if not x.is_ball:
        raise SemanticError("chart requested at a non-ball point")
    if not field.in_value_group(x.s):
        if field.mode == "mixed":
            raise TypeIIIUnsupported(
                f"radius exponent {x.s} outside the value group "
                f"(1/{field.ram_index})Z of the mixed tower")
        if log is not None:
            log.append({"event": "ram-index-raise",
                        "needed_denominator": x.s.denominator,
                        "at": x.render()})
    alpha = field.uniformizer_pow(x.s)
    return Mobius.affine(alpha, x.center)


def direction_from(x: BerkPoint, target: BerkPoint) -> TangentDirection:
    """The tangent direction at the type II point x containing target."""
    if x.type_tag() != "II":
        raise TypeIIIUnsupported("tangent directions are enumerated at type II points")
    if target == x:
        raise SemanticError("no direction from a point to itself")
    coord = gauss_chart(x)
    if target.is_infinity or compare(target, x) in ("gt", "incomparable"):
        return TangentDirection(x, INFDIR, coord)
    delta = target.center - x.center
    if delta.is_exact_zero:
        return TangentDirection(x, x.field.residue_field.zero, coord)
    scaled = delta.shift_exp(-x.s)
    return TangentDirection(x, scaled.residue(), coord)


def direction_ball(v: TangentDirection) -> BerkPoint:
    """A representative ball one value-group step inside direction v
    (only for directions other than the outward one)."""
    if v.direction == INFDIR:
        raise SemanticError("the outward direction has no inner ball")
    x = v.at
    step = Fraction(1, x.field.ram_index)
    center = x.center + x.field.lift(v.direction).shift_exp(x.s)
    return BerkPoint.ball(center, x.s + step)


# -------------------------------------------------------------------------
# image of a point
# -------------------------------------------------------------------------

def _value_to_point(field: GroundField, v) -> BerkPoint:
    return BerkPoint.infinity(field) if v is None else BerkPoint.classical(v)


def value_at_infinity(phi: RationalMap):
    d = phi.degree
    top_f = phi.f.coeff(d)
    top_g = phi.g.coeff(d)
    if top_g.is_exact_zero:
        return None
    if not top_g.terms:
        raise ZeroWithinPrecision("leading denominator coefficient undecidable")
    return top_f / top_g


def regular_center(phi: RationalMap, x: BerkPoint, avoid_zero_of=None):
    """A center of the ball x where the denominator is certified nonzero.

    Walks a deterministic sequence of in-ball representatives; optionally
    also dodges zeros of a second polynomial.
    """
    field = phi.field
    candidates = [x.center]
    step = Fraction(1, field.ram_index)
    reps = _residue_reps(field, 12)
    for depth in range(4):
        for r in reps:
            shift = field.lift(r).shift_exp(x.s + depth * step)
            candidates.append(x.center + shift)
    for a in candidates:
        ga = phi.g.evaluate(a)
        if not ga.terms:
            continue
        if avoid_zero_of is not None:
            ha = avoid_zero_of.evaluate(a)
            if not ha.terms:
                continue
        return a
    raise PrecisionExhausted("could not find a pole-free center representative")


def _residue_reps(field: GroundField, count: int):
    rf = field.residue_field
    if field.mode == "equichar0":
        out = []
        k = 1
        while len(out) < count:
            out.extend([Fraction(k), Fraction(-k)])
            k += 1
        return out[:count]
    return [e for e in itertools.islice(rf.elements(), count + 1)
            if not rf.is_zero(e)]


def image_point(phi: RationalMap, x: BerkPoint, log: list = None) -> BerkPoint:
    """The image of x under the map induced on the Berkovich line.

    For a ball the image center is extracted digit by digit: conjugate
    the source chart to the Gauss point and, while the reduction stays
    constant, subtract the lifted constant and rescale.  When the
    reduction becomes nonconstant the accumulated affine chart reads off
    the image ball exactly.  (The naive formula zeta(phi(a); |phi -
    phi(a)|) fails when the ball carries surplus: phi(a) need not lie in
    the image ball.)
    """
    field = phi.field
    if x.is_infinity:
        return _value_to_point(field, value_at_infinity(phi))
    if x.kind == "point":
        return _value_to_point(field, phi.evaluate(x.center))
    if not field.in_value_group(x.s):
        if field.mode == "mixed":
            raise TypeIIIUnsupported(
                f"image chart needs radius exponent {x.s} in the value group "
                f"(1/{field.ram_index})Z")
        if log is not None:
            log.append({"event": "ram-index-raise",
                        "needed_denominator": x.s.denominator,
                        "at": x.render()})
    f1 = phi.f.taylor_shift(x.center).scale_arg_exp(x.s)
    g1 = phi.g.taylor_shift(x.center).scale_arg_exp(x.s)
    return _image_digit_loop(field, f1, g1, allow_swap=True)


def _image_digit_loop(field, num: Poly, den: Poly, allow_swap: bool) -> BerkPoint:
    from .ratmap import RationalMap as RM, normalize, reduce_map
    c_acc = field.zero()
    sigma_acc = Fraction(0)
    rf = field.residue_field
    guard = 0
    while True:
        guard += 1
        if guard > 4 * int(field.precision * field.ram_index) + 16:
            raise PrecisionExhausted("image digit extraction did not terminate")
        psi = normalize(RM.make(num, den, check_coprime=False))
        red = reduce_map(psi)
        if red.degree_red >= 1:
            return BerkPoint.ball(c_acc, sigma_acc)
        cn, cd = red.num_form[0], red.den_form[0]
        if rf.is_zero(cd):
            if not allow_swap:
                raise PrecisionExhausted("image loop hit infinity twice")
            inner = _image_digit_loop(field, den, num, allow_swap=False)
            return _invert_ball_point(inner)
        gamma = cn / cd
        if not rf.is_zero(gamma):
            lifted = field.lift(gamma).shift_exp(sigma_acc)
            c_acc = c_acc + lifted
            num = psi.f - psi.g.scale(field.lift(gamma))
        else:
            num = psi.f
        den = psi.g
        delta = _poly_min_ord_certified(num) - _poly_min_ord_certified(den)
        if delta <= 0:
            raise PrecisionExhausted("image digit loop made no progress")
        if sigma_acc + delta >= field.precision:
            raise PrecisionExhausted(
                f"image radius exponent beyond the working precision {field.precision}")
        sigma_acc += delta
        num = num.shift_exp_all(-delta)


def _poly_min_ord_certified(f: Poly):
    best = INF
    bound = INF
    for c in f.coeffs:
        if c.terms:
            best = min(best, c.terms[0][0])
        elif not c.is_exact_zero:
            bound = min(bound, c.prec)
    if best == INF or bound < best:
        raise ZeroWithinPrecision("minimal coefficient ord not certified")
    return best


def _invert_ball_point(p: BerkPoint) -> BerkPoint:
    """Image of a ball point under z -> 1/z."""
    c = p.center
    if c.is_exact_zero or (c.terms and c.terms[0][0] >= p.s):
        return BerkPoint.ball(p.field.zero(), -p.s)
    oc = c.terms[0][0]
    return BerkPoint.ball(c.inverse(), p.s - 2 * oc)


def apply_mobius_point(sigma: Mobius, x: BerkPoint) -> BerkPoint:
    """Image of a point under a Moebius map (via the rational map action)."""
    return image_point(sigma.as_rational_map(), x)


# -------------------------------------------------------------------------
# finite subtrees (hulls)
# -------------------------------------------------------------------------

class Skeleton:
    """A finite metric tree of Berkovich points with annotations.

    Vertices are keyed by hashable identities; ball/inf vertices use the
    point itself, leaf objects supply their own keys.  Edge lengths are
    Fractions or INF.  Annotation dictionaries are free-form (the
    analysis layer stores multiplicities and flags there).
    """

    def __init__(self):
        self._points = {}
        self._ann = {}
        self._adj = {}
        self._edges = {}

    # -- construction --------------------------------------------------

    def add_vertex(self, key, point) -> None:
        if key not in self._points:
            self._points[key] = point
            self._ann[key] = {}
            self._adj[key] = set()

    def add_edge(self, k1, k2, length) -> None:
        if k1 == k2:
            raise SemanticError("self loop in skeleton")
        e = frozenset((k1, k2))
        if e not in self._edges:
            self._edges[e] = {"length": length}
            self._adj[k1].add(k2)
            self._adj[k2].add(k1)

    # -- queries ---------------------------------------------------------

    def vertex_keys(self):
        return list(self._points)

    def point(self, key):
        return self._points[key]

    def ann(self, key) -> dict:
        return self._ann[key]

    def neighbors(self, key):
        return sorted(self._adj[key], key=lambda k: str(k))

    def edges(self):
        return [(tuple(sorted(e, key=str)), data) for e, data in
                sorted(self._edges.items(), key=lambda kv: sorted(map(str, kv[0])))]

    def edge_data(self, k1, k2) -> dict:
        return self._edges[frozenset((k1, k2))]

    def has_vertex(self, key) -> bool:
        return key in self._points

    def __len__(self):
        return len(self._points)

    def subtree_components(self, vertex_pred, edge_pred):
        """Connected components of the subgraph selected by predicates."""
        keys = [k for k in self._points if vertex_pred(k)]
        seen = set()
        comps = []
        for start in keys:
            if start in seen:
                continue
            comp = []
            stack = [start]
            seen.add(start)
            while stack:
                k = stack.pop()
                comp.append(k)
                for n in self._adj[k]:
                    if n in seen or not vertex_pred(n):
                        continue
                    if not edge_pred(k, n):
                        continue
                    seen.add(n)
                    stack.append(n)
            comps.append(sorted(comp, key=str))
        return comps


def hull(inputs, refine_budget: int = 64) -> Skeleton:
    """Connected hull of a set of points as a finite metric tree.

    ``inputs`` may contain BerkPoints and leaf objects exposing ``key``,
    ``ball`` (a BerkPoint proxy known to isolate the leaf), ``refinable``
    and ``refine()``.  Refinable leaves are refined until no other input
    sits inside their proxy ball, so every pairwise join is exact.
    """
    if not inputs:
        raise SemanticError("hull of an empty set")
    points = []      # (key, BerkPoint) honest points
    leaves = []      # leaf objects
    for item in inputs:
        if isinstance(item, BerkPoint):
            points.append(item)
        else:
            leaves.append(item)
    points = _dedupe_points(points)

    for _ in range(refine_budget):
        conflict = _find_leaf_conflict(points, leaves)
        if conflict is None:
            break
        conflict.refine()
    else:
        if _find_leaf_conflict(points, leaves) is not None:
            raise PrecisionExhausted("leaf separation exceeded the refinement budget")

    field = points[0].field if points else leaves[0].ball.field
    has_inf = any(p.is_infinity for p in points)
    finite_points = [p for p in points if not p.is_infinity]
    ball_like = list(finite_points) + [leaf.ball for leaf in leaves]
    balls = [p for p in ball_like if p.is_ball]
    for x, y in itertools.combinations(ball_like, 2):
        j = join(x, y)
        if j.is_ball:
            balls.append(j)
    balls = _dedupe_points(balls)
    balls.sort(key=lambda b: b.sort_key())

    sk = Skeleton()
    for b in balls:
        sk.add_vertex(b, b)
    # parent = smallest strictly containing ball
    for b in balls:
        best = None
        for c in balls:
            if c is b or c == b:
                continue
            if contains(c, b) and (best is None or c.s > best.s):
                best = c
        if best is not None:
            sk.add_edge(b, best, b.s - best.s)

    # classical leaves hang below the smallest ball containing them
    for p in finite_points:
        if p.is_ball:
            continue
        sk.add_vertex(("pt", p), p)
        host = _smallest_container(balls, p)
        if host is not None:
            sk.add_edge(("pt", p), host, INF)
    for leaf in leaves:
        sk.add_vertex(leaf.key, leaf)
        sk.add_vertex(leaf.ball, leaf.ball)
        sk.add_edge(leaf.key, leaf.ball, INF)

    if has_inf:
        top = BerkPoint.infinity(field)
        sk.add_vertex(top, top)
        if balls:
            root = min(balls, key=lambda b: (b.s, b.sort_key()))
            sk.add_edge(top, root, INF)
        else:
            # a single classical point plus infinity: join through any ball
            for p in finite_points:
                if not p.is_ball:
                    g = BerkPoint.ball(p.center, Fraction(0))
                    sk.add_vertex(g, g)
                    sk.add_edge(("pt", p), g, INF)
                    sk.add_edge(top, g, INF)
    return sk


def _dedupe_points(points):
    out = []
    for p in points:
        if not any(p == q for q in out):
            out.append(p)
    return out


def _smallest_container(balls, p):
    best = None
    for b in balls:
        if contains(b, p) and (best is None or b.s > best.s):
            best = b
    return best


def _find_leaf_conflict(points, leaves):
    for leaf in leaves:
        if not leaf.refinable:
            continue
        lb = leaf.ball
        for p in points:
            if p.is_infinity:
                continue
            if contains(lb, p):
                return leaf
        for other in leaves:
            if other is leaf:
                continue
            if getattr(other, "cluster_tag", None) is not None and \
                    other.cluster_tag == getattr(leaf, "cluster_tag", object()):
                continue
            if contains(lb, other.ball):
                return leaf
    return None
