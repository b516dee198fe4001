"""Closed-form generating functions of adsorbing 2-sided prudent walks.

``R(u, v)`` counts walks ending on the E side of their box and ``T(u, v)``
walks ending on the N side, with ``u`` marking the distance ``i`` to the
NE corner, ``v`` the height ``j`` of the endpoint and ``a`` surface steps.
``W = R + T - T(0, v)`` removes the double count of NE-corner walks.

Everything is computed as truncated power series in ``z``.  Expressions that
are Laurent in ``z`` term by term (``A(vL, v)``, ``C(vL, v)``, ...) are
never formed; they are combined over a common denominator first and the
single remaining division is checked for valuation.  The unit

    U(v) = (lambda(v) - z) / (v z^2),   U = 1 + O(z),

takes care of the removable ``0/0`` at ``v = 0``.

Specialisations (``u_spec`` / ``v_spec``) may be ``None`` or a symbol name
(symbolic), a rational number, one of the named series ``"uL"``, ``"vL"``,
``"L"`` (``u*Lambda``, ``v*Lambda``, ``Lambda``), or any Series of
valuation at least one.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from .errors import ValuationError
from .series import DEFAULT_ORDER, Poly, Series, series_div

PIECES = ("L", "M", "A", "B", "C", "H", "I", "J")


class KernelContext:
    """Order and fugacity of one kernel computation, with its cached building blocks.

    Work happens at ``order + pad`` internally so that the few valuation
    losses along the pipeline never eat into the requested order.
    """

    def __init__(self, order: int = DEFAULT_ORDER, a=None, pad: int = 8):
        if order < 0:
            raise ValueError("order must be non-negative")
        self.order = order
        self.pad = pad
        self.work = order + pad
        if a is None or a == "a":
            self.a_value = None
            self.a = Poly.symbol("a")
        else:
            self.a_value = Fraction(a)
            self.a = Poly(self.a_value)
        self._lam_cache: dict = {}
        self._blocks: dict = {}

    # -- basic values ------------------------------------------------------
    @property
    def z(self) -> Series:
        return Series.z(self.work)

    def const(self, c) -> Series:
        return Series.constant(c, self.work)

    def value(self, spec, default: str) -> Series:
        """The Series that a specialisation stands for."""
        if spec is None:
            spec = default
        if isinstance(spec, Series):
            return spec
        if isinstance(spec, str):
            if spec in ("a", "u", "v", "w"):
                return self.const(Poly.symbol(spec))
            if spec == "L":
                return capital_lambda(self)
            if spec in ("uL", "vL", "wL"):
                return capital_lambda(self) * Poly.symbol(spec[0])
            raise ValueError(f"unknown specialisation {spec!r}")
        return self.const(Fraction(spec))

    def _key(self, spec, default):
        if spec is None:
            return default
        if isinstance(spec, Series):
            return None
        if isinstance(spec, str):
            return spec
        return Fraction(spec)

    # -- lambda(v) and friends --------------------------------------------
    def lam(self, v_spec=None) -> Series:
        """``lambda(v)`` with ``v`` specialised."""
        key = self._key(v_spec, "v")
        if key is not None and ("lam", key) in self._lam_cache:
            return self._lam_cache[("lam", key)]
        base = lambda_series(self)
        if key == "v":
            out = base
        else:
            out = base.substitute("v", self._subs_value(v_spec))
        if key is not None:
            self._lam_cache[("lam", key)] = out
        return out

    def unit(self, v_spec=None) -> Series:
        """``U(v) = (lambda(v) - z)/(v z^2)`` with ``v`` specialised."""
        key = self._key(v_spec, "v")
        if key is not None and ("U", key) in self._lam_cache:
            return self._lam_cache[("U", key)]
        base = self._blocks.get("U")
        if base is None:
            lam = lambda_series(self)
            diff = (lam - self.z).shift(-2)
            base = Series._raw([c.exact_div(Poly.symbol("v")) for c in diff], diff.order)
            self._blocks["U"] = base
        out = base if key == "v" else base.substitute("v", self._subs_value(v_spec))
        if key is not None:
            self._lam_cache[("U", key)] = out
        return out

    def _subs_value(self, spec):
        if isinstance(spec, (int, Fraction)) and not isinstance(spec, bool):
            return Fraction(spec)
        if isinstance(spec, str) and spec in ("a", "u", "v", "w"):
            return Poly.symbol(spec)
        return self.value(spec, "v")

    def J(self) -> Series:
        if "J" not in self._blocks:
            Lm, z, a = capital_lambda(self), self.z, self.a
            self._blocks["J"] = 1 + Lm - z * Lm - z * z * Lm - Lm * a + z * z * Lm * a
        return self._blocks["J"]


def lambda_series(ctx: KernelContext) -> Series:
    """The power-series root ``lambda(v)`` of ``L(u, v) = 0`` in ``u``."""
    if "lambda" not in ctx._blocks:
        z, v = ctx.z, Poly.symbol("v")
        p = 1 + z * z - z * v + z ** 3 * v
        s = (p * p - 4 * z * z).sqrt()
        lam = (p - s).shift(-1) * Fraction(1, 2)
        assert lam.valuation == 1
        ctx._blocks["lambda"] = lam
    return ctx._blocks["lambda"]


def capital_lambda(ctx: KernelContext) -> Series:
    """``Lambda = lambda(1)`` from its own closed form."""
    if "Lambda" not in ctx._blocks:
        z = ctx.z
        p = 1 - z + z ** 2 + z ** 3
        disc = 1 - 2 * z - z ** 2 - z ** 4 + 2 * z ** 5 + z ** 6
        lam = (p - disc.sqrt()).shift(-1) * Fraction(1, 2)
        assert lam.valuation == 1
        ctx._blocks["Lambda"] = lam
    return ctx._blocks["Lambda"]


# ---------------------------------------------------------------------------
# kernel pieces
# ---------------------------------------------------------------------------

def _check_unit(s: Series, what: str) -> None:
    if s.valuation != 0:
        raise ValuationError(f"{what} should be a unit, has valuation {s.valuation}")


def _hi_parts(ctx: KernelContext, q_spec):
    """Shared pieces of ``H(q)`` and ``I(q)``: numerators and denominators."""
    q = ctx.value(q_spec, "u")
    lq = ctx.lam(q * capital_lambda(ctx))
    z, a, Lm = ctx.z, ctx.a, capital_lambda(ctx)
    common = (1 - z * Lm) * (1 - (1 - z - z * z + Lm) * lq)
    return z, a, Lm, lq, common


def h_series(ctx: KernelContext, q_spec=None) -> Series:
    z, a, Lm, lq, common = _hi_parts(ctx, q_spec)
    num = (1 - z * z) * (1 - Lm * Lm) * (1 - z * a * (1 + z) * lq + z * a * lq * lq)
    den = ctx.J() * common * (1 - z * a * lq)
    _check_unit(den, "denominator of H")
    return num / den


def i_series(ctx: KernelContext, q_spec=None) -> Series:
    z, a, Lm, lq, common = _hi_parts(ctx, q_spec)
    num = (Lm - z) * (1 - z - z * z - a + z * z * a + Lm) * (z - (1 - z * Lm) * lq)
    # the last factor of num carries the z that the denominator divides out
    den = ctx.J() * common
    _check_unit(den, "denominator of I")
    return num.shift(-1) / den


def kernel_fraction(ctx: KernelContext, which: str, u_spec=None, v_spec=None) -> tuple[Series, Series]:
    """``(numerator, denominator)`` of ``L, M, A, B`` or ``C`` at the given point.

    ``A`` and ``C`` use ``lambda(v)`` at the same ``v``.
    """
    u = ctx.value(u_spec, "u")
    v = ctx.value(v_spec, "v")
    z, a = ctx.z, ctx.a
    if which == "L":
        den = (u - z) * (1 - z * u)
        return den - z * u * v * (1 - z * z), den
    if which == "M":
        den = (v - z * u) * (u - z * v)
        return den - z * u * v * (1 - z * z), den
    if which == "B":
        num = -z * u * (u + v - z * v - z * z * v - v * a + z * z * v * a)
        return num, (u - z * v) * (v - z * u)
    lam = ctx.lam(v_spec if v_spec is not None else "v")
    if which == "A":
        num = v * (u - z * z * u - z * u * lam * a + z * z * v * lam * a)
        return num, (u - z * v) * (v - z * u) * (1 - z * lam * a)
    if which == "C":
        num = -z * v * (z * u - u * lam + z * v * lam)
        return num, (lam - z) * (u - z * v)
    raise ValueError(f"kernel_fraction supports L, M, A, B, C, not {which!r}")


def kernel_pieces(ctx: KernelContext, which: str, u_spec=None, v_spec=None) -> Series:
    """One named building block as a Series.

    ``H`` and ``I`` take their argument ``q`` through ``u_spec``; ``J`` takes
    none.  For ``L, M, A, B, C`` the fraction is divided out, which fails
    with NonDivisibleError or ValuationError when the result is not a power
    series with polynomial coefficients at this specialisation.
    """
    if which not in PIECES:
        raise ValueError(f"unknown piece {which!r}; expected one of {PIECES}")
    if which == "H":
        return h_series(ctx, u_spec)
    if which == "I":
        return i_series(ctx, u_spec)
    if which == "J":
        return ctx.J()
    num, den = kernel_fraction(ctx, which, u_spec, v_spec)
    return series_div(num, den)


def h_i_unsimplified(ctx: KernelContext, q_spec=None) -> tuple[tuple[Series, Series], tuple[Series, Series]]:
    """``H(q)`` and ``I(q)`` as (numerator, denominator) pairs built from A, B, C.

    ``H = -A(q, qL)/B(q, qL) + C(q, qL) A(qL^2, qL) / (B(q, qL) C(qL^2, qL))``
    ``I = C(q, qL) B(qL^2, qL) / (B(q, qL) C(qL^2, qL))``
    """
    q = ctx.value(q_spec, "u")
    Lm = capital_lambda(ctx)
    v = q * Lm
    u2 = v * Lm
    A1n, A1d = kernel_fraction(ctx, "A", q, v)
    B1n, B1d = kernel_fraction(ctx, "B", q, v)
    C1n, C1d = kernel_fraction(ctx, "C", q, v)
    A2n, A2d = kernel_fraction(ctx, "A", u2, v)
    B2n, B2d = kernel_fraction(ctx, "B", u2, v)
    C2n, C2d = kernel_fraction(ctx, "C", u2, v)
    # -A1/B1 + (C1 A2)/(B1 C2)  =  (-A1n B1d C2n A2d + C1n A2n B1d C2d ... ) / ...
    h_num = B1d * (-A1n * C2n * A2d * C1d + C1n * A2n * C2d * A1d)
    h_den = B1n * A1d * C2n * A2d * C1d
    i_num = C1n * B2n * B1d * C2d
    i_den = C1d * B2d * B1n * C2n
    return (h_num, h_den), (i_num, i_den)


# ---------------------------------------------------------------------------
# the solution
# ---------------------------------------------------------------------------

def r_u0_series(ctx: KernelContext, u_spec=None) -> Series:
    """``R(u, 0) = sum_n H(u L^{2n}) prod_{k<n} I(u L^{2k})``."""
    u = ctx.value(u_spec, "u")
    Lm2 = capital_lambda(ctx) ** 2
    n_terms = ceil(ctx.work / 4) + 1
    total = Series.zero(ctx.work)
    prod = ctx.const(1)
    q = u
    for n in range(n_terms):
        if prod.valuation > ctx.work:
            break
        total = total + h_series(ctx, q) * prod
        prod = prod * i_series(ctx, q)
        q = q * Lm2
    return total


def t_zv_series(ctx: KernelContext, v_spec=None) -> Series:
    """``T(z, v)``, the N-side series with the endpoint at the NE corner's column."""
    key = ("Tz", ctx._key(v_spec, "v"))
    if key[1] is not None and key in ctx._blocks:
        return ctx._blocks[key]
    z, a, Lm = ctx.z, ctx.a, capital_lambda(ctx)
    v = ctx.value(v_spec, "v")
    lam = ctx.lam(v_spec)
    U = ctx.unit(v_spec)
    r_star = r_u0_series(ctx, v * Lm)
    K = Lm + 1 - z - z * z - a + z * z * a
    inner = (Lm - z * z * Lm - z * Lm * lam * a + z * z * lam * a) / (1 - z * lam * a) \
        - z * Lm * K * r_star
    numer = z * U * inner
    e = z * Lm - Lm * lam + z * lam
    if e.valuation != 2 or numer.valuation < 2:
        raise ValuationError("unexpected valuation while assembling T(z, v)")
    out = numer.shift(-2) / ((1 - z * Lm) * e.shift(-2))
    if key[1] is not None:
        ctx._blocks[key] = out
    return out


@dataclass
class Solution:
    R: Series
    T: Series
    W: Series
    T0: Series
    order: int


def full_solution(ctx: KernelContext, u_spec=None, v_spec=None) -> Solution:
    """``R(u, v)``, ``T(u, v)`` and ``W(u, v)`` truncated at ``ctx.order``."""
    z, a = ctx.z, ctx.a
    u = ctx.value(u_spec, "u")
    v = ctx.value(v_spec, "v")
    lam = ctx.lam(v_spec)
    U = ctx.unit(v_spec)
    Tz = t_zv_series(ctx, v_spec)
    R0 = r_u0_series(ctx, u_spec)
    zu, zv = z * u, z * v
    inv_la = 1 / (1 - z * lam * a)

    a_part = v * (u - z * z * u - zu * lam * a + z * zv * lam * a) * inv_la
    b_part = -zu * (u + v - zv - z * zv - v * a + z * zv * a)
    c_part = -v * (lam - zu * U) * (v - zu) / U
    m_num = (v - zu) * (u - zv) - zu * v * (1 - z * z)
    R = (a_part + b_part * R0 + c_part * Tz) / m_num

    l_num = (u - z) * (1 - zu) - zu * v * (1 - z * z)
    t_num = (1 / (1 - zu * a) - inv_la) * (u - z) * (1 - zu) \
        + ((u - z) / U - z * zv) * (1 - zu) * Tz
    T = t_num / l_num
    T0 = 1 - inv_la + (1 / U + zv) * Tz

    N = ctx.order
    for name, s in (("R", R), ("T", T), ("T(0,v)", T0)):
        if s.order < N:
            raise ValuationError(f"{name} exact only to order {s.order} < {N}; raise pad")
    R, T, T0 = R.truncate(N), T.truncate(N), T0.truncate(N)
    return Solution(R=R, T=T, W=R + T - T0, T0=T0, order=N)


def w_series(order: int, a=None, u=1, v=1) -> Series:
    """``W(z; u, v; a)``; ``v=1`` gives tails and ``v=0`` loops."""
    ctx = KernelContext(order, a=a)
    return full_solution(ctx, u, v).W


# ---------------------------------------------------------------------------
# functional equations
# ---------------------------------------------------------------------------

@dataclass
class ResidualReport:
    equation: str
    max_order: int
    first_failing_order: Optional[int] = None
    failing_coefficient: Optional[Poly] = None

    @property
    def passed(self) -> bool:
        return self.first_failing_order is None

    def describe(self) -> str:
        if self.passed:
            return f"{self.equation}: residual zero through z^{self.max_order}"
        return (f"{self.equation}: residual nonzero at z^{self.first_failing_order}: "
                f"{self.failing_coefficient}")

    def to_json(self) -> dict:
        return {
            "equation": self.equation,
            "max_order": self.max_order,
            "passed": self.passed,
            "first_failing_order": self.first_failing_order,
            "failing_coefficient": None if self.failing_coefficient is None
            else self.failing_coefficient.to_json(),
        }


def _report(name: str, residual: Series, order: int) -> ResidualReport:
    for k in range(min(order, residual.order) + 1):
        if residual[k]:
            return ResidualReport(name, order, k, residual[k])
    if residual.order < order:
        raise ValuationError(f"{name}: residual only known to order {residual.order}")
    return ResidualReport(name, order)


def two_sided_residuals(R: Series, T: Series, order: int) -> list[ResidualReport]:
    """Residuals of the step-by-step relations for ``R(u, v)`` and ``T(u, v)``.

    Both sides are multiplied through by their denominators so that the
    residual is a power series with polynomial coefficients.
    """
    n = min(order, R.order, T.order)
    R, T = R.truncate(n), T.truncate(n)
    z = Series.z(n)
    u = Series.constant(Poly.symbol("u"), n)
    v = Series.constant(Poly.symbol("v"), n)
    a = Poly.symbol("a")
    zu, zv = z * u, z * v

    Tz = T.substitute("u", z)
    R_zv_v = R.substitute("u", zv)
    R_zv_0 = R.subs({"u": zv, "v": 0})
    R_u_zu = R.substitute("v", zu)
    R_u_0 = R.substitute("v", 0)

    uz, onezu = u - z, 1 - zu
    geo = 1 / (1 - zu * a)
    lhs_t = (uz * onezu - zu * v * (1 - z * z)) * T
    rhs_t = uz * onezu * geo - z * zv * onezu * Tz \
        + uz * onezu * (z * R_zv_v - z * (1 - a) * R_zv_0)

    uzv, vzu = u - zv, v - zu
    lhs_r = (vzu * uzv - zu * v * (1 - z * z)) * R
    rhs_r = uzv * vzu * (1 + zv * Tz) - z * zv * vzu * R_zv_v - z * zu * uzv * R_u_zu \
        - zu * (1 - a) * vzu * R_u_0 + z * zv * (1 - a) * vzu * R_zv_0
    return [_report("T-equation", lhs_t - rhs_t, n), _report("R-equation", lhs_r - rhs_r, n)]


def three_sided_residuals(R: Series, T: Series, order: int) -> list[ResidualReport]:
    """Residuals of the 3-sided relations for ``R*(u, v, w)`` and ``T*(u, v, w)``.

    ``R*`` counts walks ending on the E side (``u``: distance to the top,
    ``v``: height, ``w``: distance to the W side); ``T*`` walks ending on the
    top (``u``, ``w``: distances to the E and W sides, ``v``: height).
    """
    n = min(order, R.order, T.order)
    R, T = R.truncate(n), T.truncate(n)
    z = Series.z(n)
    u = Series.constant(Poly.symbol("u"), n)
    v = Series.constant(Poly.symbol("v"), n)
    w = Series.constant(Poly.symbol("w"), n)
    a = Poly.symbol("a")
    zu, zv, zw = z * u, z * v, z * w

    def Rs(uu, vv, ww):
        return R.subs({"u": uu, "v": vv, "w": ww})

    def Ts(uu, vv, ww):
        return T.subs({"u": uu, "v": vv, "w": ww})

    def lstar(x, y, t):
        return (x - z * t) * (t - z * x) - z * x * y * t * (1 - z * z), (x - z * t) * (t - z * x)

    # T* equation, multiplied by (u - zw)(w - zu)
    ln, ld = lstar(u, v, w)
    lhs_t = ln * T
    rhs_t = ld * (1 + zw * Rs(zv, v, w) + zw * (a - 1) * Rs(zv, 0, w)
                  + zu * Rs(zv, v, u) + zu * (a - 1) * Rs(zv, 0, u)) \
        - z * zv * w * (w - zu) * Ts(zw, v, w) - z * zu * v * (u - zw) * Ts(u, v, zu)

    # R* equation, multiplied by (u - zv)(v - zu)
    ln, ld = lstar(u, w, v)
    lhs_r = ln * R
    rhs_r = ld * (1 + zv * Ts(zw, v, w)) \
        - z * zv * w * (v - zu) * Rs(zv, v, w) - z * zu * w * (u - zv) * Rs(u, zu, w) \
        + zu * w * (a - 1) * (v - zu) * Rs(u, 0, w) - z * zv * w * (a - 1) * (v - zu) * Rs(zv, 0, w)
    return [_report("T*-equation", lhs_t - rhs_t, n), _report("R*-equation", lhs_r - rhs_r, n)]


def _series_from_refined(table, side: str, order: int, three: bool) -> Series:
    coeffs = []
    for n in range(order + 1):
        acc = {}
        for key, poly in table.refined[n].items():
            if key[0] != side:
                continue
            i, j = key[1], key[2]
            k = key[3] if three else 0
            for (e_a, *_), c in poly.terms().items():
                e = (e_a, i, j, k)
                acc[e] = acc.get(e, 0) + c
        coeffs.append(Poly(acc))
    return Series(coeffs, order)


def enumerated_series(fam_sides: str, order: int) -> tuple[Series, Series]:
    """``(R, T)`` (or ``(R*, T*)``) assembled from enumeration refined counts.

    For 3-sided walks the variables follow the relations' conventions:
    ``R*``: ``u`` = distance to top, ``v`` = height, ``w`` = distance to W side;
    ``T*``: ``u`` = distance to E side, ``v`` = height, ``w`` = distance to W side.
    """
    from .walks import WalkFamily, count_walks_dp, enumerate_walks
    three = fam_sides == "three_sided"
    if three:
        table = enumerate_walks(WalkFamily("three_sided", "tail"), order)
    else:
        table = count_walks_dp(order, None, "tail")
    return (_series_from_refined(table, "R", order, three),
            _series_from_refined(table, "T", order, three))


def verify_functional_equations(family: str = "two_sided", order: int = 20, source: str = "solution",
                                perturb: Optional[tuple[str, int]] = None) -> list[ResidualReport]:
    """Check the step-by-step relations to ``order``.

    ``source`` is ``"solution"`` (closed forms, symbolic ``u, v, a``) or
    ``"enumeration"``; 3-sided walks always use enumeration.  ``perturb``
    adds 1 to the constant monomial of ``R`` or ``T`` at the given order,
    which a correct check must flag at exactly that order.
    """
    from .walks import WalkFamily
    sides = WalkFamily(family).sides
    if sides == "one_sided":
        raise ValueError("no functional equations are implemented for one-sided walks")
    if sides == "three_sided" or source == "enumeration":
        R, T = enumerated_series(sides, order)
    elif source == "solution":
        sol = full_solution(KernelContext(order), None, None)
        R, T = sol.R, sol.T
    else:
        raise ValueError(f"unknown source {source!r}")
    if perturb is not None:
        which, k = perturb
        bump = Series.from_dict({k: 1}, order)
        if which == "R":
            R = R + bump
        elif which == "T":
            T = T + bump
        else:
            raise ValueError("perturb must target 'R' or 'T'")
    if sides == "three_sided":
        return three_sided_residuals(R, T, order)
    return two_sided_residuals(R, T, order)

