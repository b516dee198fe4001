"""Exact truncated power series in ``z`` over a polynomial ring ``Q[a, u, v, w]``.

``Poly`` stores its terms in a dict keyed by a packed integer: each symbol
owns a 16-bit field, ``a`` in the most significant one, so monomial
multiplication is integer addition and integer order on keys is lex order
with ``a > u > v > w``.  Coefficients are ``int`` when integral and
``Fraction`` otherwise.

``Series`` holds the coefficients of ``z^0 .. z^order``; ``order`` is the
highest power known exactly.  Every operation returns a series whose
``order`` is the order to which the result is guaranteed exact.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence, Union

from .errors import BranchError, NonDivisibleError, TruncationError, ValuationError

SYMBOLS = ("a", "u", "v", "w")
_BITS = 16
_MASK = (1 << _BITS) - 1
_SHIFT = {s: _BITS * (len(SYMBOLS) - 1 - i) for i, s in enumerate(SYMBOLS)}
MAX_DEGREE = (1 << (_BITS - 1)) - 1

DEFAULT_ORDER = 50

Number = Union[int, Fraction]


def _norm(c):
    if isinstance(c, Fraction) and c.denominator == 1:
        return c.numerator
    return c


def _as_number(c) -> Number:
    if isinstance(c, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(c, int):
        return c
    if isinstance(c, Rational):
        return _norm(Fraction(c))
    raise TypeError(f"coefficients must be exact rationals, got {type(c).__name__}")


def _pack(exps: Sequence[int]) -> int:
    if len(exps) > len(SYMBOLS):
        raise ValueError(f"at most {len(SYMBOLS)} exponents, got {len(exps)}")
    key = 0
    for s, e in zip(SYMBOLS, exps):
        if not isinstance(e, int) or e < 0:
            raise ValueError(f"exponents must be non-negative integers, got {e!r}")
        if e > MAX_DEGREE:
            raise ValueError(f"exponent {e} exceeds MAX_DEGREE={MAX_DEGREE}")
        key |= e << _SHIFT[s]
    return key


def _unpack(key: int) -> tuple[int, ...]:
    return tuple((key >> _SHIFT[s]) & _MASK for s in SYMBOLS)


def _divides(dkey: int, key: int) -> bool:
    for s in SYMBOLS:
        sh = _SHIFT[s]
        if ((key >> sh) & _MASK) < ((dkey >> sh) & _MASK):
            return False
    return True


class Poly:
    """Exact polynomial in ``a, u, v, w`` with rational coefficients.

    ``Poly({(0, 2, 1): 3})`` is ``3*u^2*v``; exponent tuples follow
    ``SYMBOLS`` order and may be shorter than four.  ``Poly(5)`` is a constant.
    Instances are immutable.
    """

    __slots__ = ("_t",)

    def __init__(self, terms=None):
        if terms is None:
            self._t = {}
        elif isinstance(terms, Poly):
            self._t = terms._t
        elif isinstance(terms, Mapping):
            t: dict[int, Number] = {}
            for exps, c in terms.items():
                c = _as_number(c)
                if c:
                    k = _pack(exps)
                    t[k] = _norm(t.get(k, 0) + c)
                    if not t[k]:
                        del t[k]
            self._t = t
        else:
            c = _as_number(terms)
            self._t = {0: c} if c else {}

    @classmethod
    def _wrap(cls, t: dict) -> "Poly":
        p = object.__new__(cls)
        p._t = t
        return p

    @classmethod
    def symbol(cls, name: str) -> "Poly":
        return cls._wrap({1 << _SHIFT[name]: 1})

    @classmethod
    def monomial(cls, coeff=1, **exps: int) -> "Poly":
        c = _as_number(coeff)
        if not c:
            return cls()
        return cls._wrap({_pack([exps.get(s, 0) for s in SYMBOLS]): c})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> dict[tuple[int, ...], Number]:
        return {_unpack(k): c for k, c in sorted(self._t.items(), reverse=True)}

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def __bool__(self) -> bool:
        return bool(self._t)

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and 0 in self._t)

    def constant(self) -> Number:
        """Value of the constant term."""
        return self._t.get(0, 0)

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def degree(self, symbol: str) -> int:
        """Degree in ``symbol``; -1 for the zero polynomial."""
        if not self._t:
            return -1
        sh = _SHIFT[symbol]
        return max((k >> sh) & _MASK for k in self._t)

    def symbols(self) -> set[str]:
        return {s for s in SYMBOLS if any((k >> _SHIFT[s]) & _MASK for k in self._t)}

    def leading(self) -> tuple[tuple[int, ...], Number]:
        """Lex-leading exponent tuple and coefficient."""
        k = max(self._t)
        return _unpack(k), self._t[k]

    def content_monomial(self) -> tuple[int, ...]:
        """Componentwise minimum exponent over all terms."""
        if not self._t:
            return (0,) * len(SYMBOLS)
        return tuple(min((k >> _SHIFT[s]) & _MASK for k in self._t) for s in SYMBOLS)

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly(other)

    def __add__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        if not other._t:
            return self
        t = dict(self._t)
        for k, c in other._t.items():
            s = t.get(k, 0) + c
            if s:
                t[k] = _norm(s)
            else:
                t.pop(k, None)
        return Poly._wrap(t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._wrap({k: -c for k, c in self._t.items()})

    def __sub__(self, other) -> "Poly":
        try:
            other = self._coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                c = _as_number(other)
            except TypeError:
                return NotImplemented
            if not c:
                return Poly()
            return Poly._wrap({k: _norm(v * c) for k, v in self._t.items()})
        acc: dict[int, Number] = {}
        _mul_into(acc, self._t, other._t)
        return Poly._wrap(_strip(acc))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("Poly powers must be non-negative integers")
        result, base = Poly(1), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def exact_div(self, other) -> "Poly":
        """Quotient ``self / other``; raises NonDivisibleError on a remainder."""
        other = self._coerce(other)
        if not other._t:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self._t:
            return self
        if len(other._t) == 1:
            (dk, dc), = other._t.items()
            inv = Fraction(1, 1) / dc
            t = {}
            for k, c in self._t.items():
                if dk and not _divides(dk, k):
                    raise NonDivisibleError(f"{self} is not divisible by {other}")
                t[k - dk] = _norm(c * inv)
            return Poly._wrap(t)
        # lex long division; for an exact quotient the leading term of the
        # remainder is always divisible by the leading term of the divisor
        dk = max(other._t)
        inv = Fraction(1, 1) / other._t[dk]
        rem = dict(self._t)
        q: dict[int, Number] = {}
        while rem:
            rk = max(rem)
            if not _divides(dk, rk):
                raise NonDivisibleError(f"{self} is not divisible by {other}")
            qk = rk - dk
            qc = _norm(rem[rk] * inv)
            q[qk] = qc
            for k, c in other._t.items():
                kk = k + qk
                s = rem.get(kk, 0) - qc * c
                if s:
                    rem[kk] = _norm(s)
                else:
                    rem.pop(kk, None)
        return Poly._wrap(q)

    def subs(self, values: Mapping[str, object]) -> "Poly":
        """Simultaneous substitution of symbols by Polys or rationals."""
        vals = {s: self._coerce(v) for s, v in values.items()}
        if not vals or not self._t:
            return self
        powers: dict[tuple[str, int], Poly] = {}
        acc: dict[int, Number] = {}
        for k, c in self._t.items():
            rest = k
            factor = Poly._wrap({0: c})
            for s, val in vals.items():
                sh = _SHIFT[s]
                e = (k >> sh) & _MASK
                if e:
                    rest -= e << sh
                    key = (s, e)
                    if key not in powers:
                        powers[key] = val ** e
                    factor = factor * powers[key]
                    if not factor._t:
                        break
            for fk, fc in factor._t.items():
                kk = fk + rest
                acc[kk] = acc.get(kk, 0) + fc
        return Poly._wrap(_strip(acc))

    def evaluate(self, **values) -> Number:
        """Fully evaluate at rational values; every symbol present must be given."""
        p = self.subs(values)
        if not p.is_constant():
            raise ValueError(f"symbols {sorted(p.symbols())} left unevaluated")
        return p.constant()

    def diff(self, symbol: str) -> "Poly":
        sh = _SHIFT[symbol]
        one = 1 << sh
        t = {}
        for k, c in self._t.items():
            e = (k >> sh) & _MASK
            if e:
                t[k - one] = c * e
        return Poly._wrap(t)

    # -- comparison / display ----------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._t == other._t
        try:
            return self._t == Poly(other)._t
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._t.items()))

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        if not self._t:
            return "0"
        parts = []
        for k in sorted(self._t, reverse=True):
            c = self._t[k]
            mono = "*".join(
                s if e == 1 else f"{s}^{e}"
                for s, e in zip(SYMBOLS, _unpack(k)) if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def to_json(self) -> dict[str, str]:
        """``{"e_a,e_u,e_v,e_w": "p/q"}`` with exact decimal-string coefficients."""
        return {",".join(map(str, _unpack(k))): str(c)
                for k, c in sorted(self._t.items())}

    @classmethod
    def from_json(cls, data: Mapping[str, str]) -> "Poly":
        return cls({tuple(int(e) for e in k.split(",")): _norm(Fraction(c))
                    for k, c in data.items()})


def _strip(t: dict) -> dict:
    return {k: _norm(c) for k, c in t.items() if c}


def _mul_into(acc: dict, t1: dict, t2: dict) -> None:
    if len(t1) > len(t2):
        t1, t2 = t2, t1
    get = acc.get
    for k1, c1 in t1.items():
        for k2, c2 in t2.items():
            k = k1 + k2
            acc[k] = get(k, 0) + c1 * c2


ZERO = Poly()
ONE = Poly(1)


# ---------------------------------------------------------------------------
# Series
# ---------------------------------------------------------------------------

def _to_poly(c) -> Poly:
    return c if isinstance(c, Poly) else Poly(c)


class Series:
    """Power series in ``z`` truncated after ``z^order``.

    ``coeffs[k]`` is the exact ``z^k`` coefficient for every ``k <= order``.
    """

    __slots__ = ("coeffs", "order", "_val")

    def __init__(self, coeffs: Iterable = (), order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        cs = [_to_poly(c) for c in coeffs][: order + 1]
        cs.extend([ZERO] * (order + 1 - len(cs)))
        self.coeffs: tuple[Poly, ...] = tuple(cs)
        self.order = order
        self._val = None

    @classmethod
    def _raw(cls, coeffs: list, order: int) -> "Series":
        s = object.__new__(cls)
        s.coeffs = tuple(coeffs)
        s.order = order
        s._val = None
        return s

    @classmethod
    def zero(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls((), order)

    @classmethod
    def constant(cls, c, order: int = DEFAULT_ORDER) -> "Series":
        return cls([c], order)

    @classmethod
    def z(cls, order: int = DEFAULT_ORDER) -> "Series":
        return cls([0, 1], order)

    @classmethod
    def from_dict(cls, terms: Mapping[int, object], order: int = DEFAULT_ORDER) -> "Series":
        """Build from ``{power of z: coefficient}``; powers beyond ``order`` are dropped."""
        cs = [ZERO] * (order + 1)
        for k, c in terms.items():
            if k < 0:
                raise ValueError("negative powers of z are not supported")
            if k <= order:
                cs[k] = cs[k] + _to_poly(c)
        return cls._raw(cs, order)

    # -- inspection ---------------------------------------------------------

    @property
    def truncation_order(self) -> int:
        return self.order

    @property
    def valuation(self) -> int:
        if self._val is None:
            self._val = next((k for k, c in enumerate(self.coeffs) if c), self.order + 1)
        return self._val

    def is_zero(self) -> bool:
        return self.valuation > self.order

    def __getitem__(self, k: int) -> Poly:
        if not 0 <= k <= self.order:
            raise IndexError(f"z^{k} is outside the exact range 0..{self.order}")
        return self.coeffs[k]

    def __len__(self) -> int:
        return self.order + 1

    def symbols(self) -> set[str]:
        out: set[str] = set()
        for c in self.coeffs:
            out |= c.symbols()
        return out

    def truncate(self, n: int) -> "Series":
        if n > self.order:
            raise TruncationError(f"cannot extend a series exact to z^{self.order} to z^{n}")
        return Series._raw(self.coeffs[: n + 1], n)

    def numbers(self) -> list[Number]:
        """Coefficients as rationals; every coefficient must be a constant."""
        out = []
        for k, c in enumerate(self.coeffs):
            if not c.is_constant():
                raise ValueError(f"coefficient of z^{k} is not constant: {c}")
            out.append(c.constant())
        return out

    def first_difference(self, other: "Series") -> int | None:
        """Smallest k within both exact ranges where the coefficients differ."""
        n = min(self.order, other.order)
        for k in range(n + 1):
            if self.coeffs[k] != other.coeffs[k]:
                return k
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, Series):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None

    def __repr__(self) -> str:
        shown = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            zk = "" if k == 0 else ("z" if k == 1 else f"z^{k}")
            cs = str(c)
            if not zk:
                shown.append(cs)
            elif c == 1:
                shown.append(zk)
            elif c.is_monomial():
                shown.append(f"{cs}*{zk}")
            else:
                shown.append(f"({cs})*{zk}")
        body = " + ".join(shown) if shown else "0"
        return f"{body} + O(z^{self.order + 1})"

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> "Series":
        if isinstance(other, Series):
            return other
        return Series._raw([_to_poly(other)] + [ZERO] * self.order, self.order)

    def __add__(self, other) -> "Series":
        return series_add(self, self._coerce(other))

    __radd__ = __add__

    def __neg__(self) -> "Series":
        return Series._raw([-c for c in self.coeffs], self.order)

    def __sub__(self, other) -> "Series":
        return series_add(self, -self._coerce(other))

    def __rsub__(self, other) -> "Series":
        return series_add(-self, self._coerce(other))

    def __mul__(self, other) -> "Series":
        if isinstance(other, Series):
            return series_mul(self, other)
        p = _to_poly(other)
        return Series._raw([c * p for c in self.coeffs], self.order)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Series":
        if isinstance(other, Series):
            return series_div(self, other)
        p = _to_poly(other)
        return Series._raw([c.exact_div(p) for c in self.coeffs], self.order)

    def __rtruediv__(self, other) -> "Series":
        return series_div(self._coerce(other), self)

    def __pow__(self, n: int) -> "Series":
        if not isinstance(n, int) or n < 0:
            raise ValueError("Series powers must be non-negative integers")
        result = Series.constant(1, self.order)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k: int) -> "Series":
        """Multiply by ``z^k`` (``k < 0`` divides, requiring valuation >= -k)."""
        if k >= 0:
            return Series._raw([ZERO] * k + list(self.coeffs), self.order + k)
        if self.valuation < -k:
            raise ValuationError(f"cannot divide by z^{-k}: valuation is {self.valuation}")
        return Series._raw(self.coeffs[-k:], self.order + k)

    def sqrt(self) -> "Series":
        return series_sqrt(self)

    def subs(self, values: Mapping[str, object]) -> "Series":
        return series_substitute_many(self, values)

    def substitute(self, symbol: str, value) -> "Series":
        return series_substitute(self, symbol, value)

    def derivative(self, symbol: str) -> "Series":
        return series_derivative(self, symbol)

    def map_coeffs(self, fn) -> "Series":
        return Series._raw([_to_poly(fn(c)) for c in self.coeffs], self.order)

    def to_json(self) -> dict:
        return {"order": self.order, "coeffs": [c.to_json() for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: Mapping) -> "Series":
        return cls([Poly.from_json(c) for c in data["coeffs"]], int(data["order"]))


# ---------------------------------------------------------------------------
# operations
# ---------------------------------------------------------------------------

def series_add(x: Series, y: Series) -> Series:
    n = min(x.order, y.order)
    return Series._raw([x.coeffs[k] + y.coeffs[k] for k in range(n + 1)], n)


def _mul_lists(xc: Sequence[Poly], yc: Sequence[Poly], n: int) -> list[Poly]:
    xs = [p._t for p in xc[: n + 1]]
    ys = [p._t for p in yc[: n + 1]]
    nx = [i for i, t in enumerate(xs) if t]
    ny = [j for j, t in enumerate(ys) if t]
    out = [ZERO] * (n + 1)
    if not nx or not ny:
        return out
    lo = nx[0] + ny[0]
    for k in range(lo, n + 1):
        acc: dict[int, Number] = {}
        for i in nx:
            j = k - i
            if j < ny[0]:
                break
            t2 = ys[j]
            if t2:
                _mul_into(acc, xs[i], t2)
        if acc:
            out[k] = Poly._wrap(_strip(acc))
    return out


def series_mul(x: Series, y: Series) -> Series:
    """Cauchy product, exact to ``min(order_x, order_y)``."""
    n = min(x.order, y.order)
    return Series._raw(_mul_lists(x.coeffs, y.coeffs, n), n)


def _div_lists(xc: Sequence[Poly], yc: Sequence[Poly], n: int) -> list[Poly]:
    """q[0..n] with q*y = x, assuming y[0] != 0."""
    d0 = yc[0]
    ys = [p._t for p in yc[: n + 1]]
    ny = [j for j, t in enumerate(ys) if t and j > 0]
    const_inv = None
    if d0.is_constant():
        const_inv = Fraction(1, 1) / d0.constant()
    q: list[Poly] = []
    qs: list[dict] = []
    for k in range(n + 1):
        acc = dict(xc[k]._t) if k < len(xc) else {}
        get = acc.get
        for j in ny:
            if j > k:
                break
            qt = qs[k - j]
            if qt:
                for k1, c1 in qt.items():
                    for k2, c2 in ys[j].items():
                        kk = k1 + k2
                        acc[kk] = get(kk, 0) - c1 * c2
        num = Poly._wrap(_strip(acc))
        if const_inv is not None:
            qk = Poly._wrap({kk: _norm(c * const_inv) for kk, c in num._t.items()})
        else:
            try:
                qk = num.exact_div(d0)
            except NonDivisibleError:
                raise NonDivisibleError(
                    f"series division: z^{k} numerator {num} not divisible by "
                    f"leading coefficient {d0}") from None
        q.append(qk)
        qs.append(qk._t)
    return q


def series_div(x: Series, y: Series) -> Series:
    """Quotient ``q`` with ``q*y = x`` to order ``min(N_x, N_y) - valuation(y)``."""
    vy = y.valuation
    if vy > y.order:
        raise ValuationError("division by a series that is zero to its order")
    n = min(x.order, y.order) - vy
    if n < 0:
        raise TruncationError("divisor valuation exceeds the available order")
    if x.valuation < vy and x.valuation <= min(x.order, y.order):
        raise ValuationError(
            f"valuation of divisor ({vy}) exceeds valuation of dividend ({x.valuation})")
    xs = x.coeffs[vy: vy + n + 1]
    ys = y.coeffs[vy: vy + n + 1]
    return Series._raw(_div_lists(xs, ys, n), n)


def series_sqrt(x: Series) -> Series:
    """Principal square root (constant term 1) by Newton iteration."""
    if x.coeffs[0] != ONE:
        raise BranchError(f"constant coefficient must be 1, got {x.coeffs[0]}")
    n = x.order
    s = [ONE]
    prec = 1
    half = Fraction(1, 2)
    while prec < n + 1:
        prec = min(2 * prec, n + 1)
        m = prec - 1
        padded = s + [ZERO] * (m + 1 - len(s))
        quot = _div_lists(x.coeffs[: m + 1], padded, m)
        s = [(padded[k] + quot[k]) * half for k in range(m + 1)]
    return Series._raw(s, n)


def _split_values(values: Mapping[str, object]):
    poly_vals: dict[str, Poly] = {}
    series_vals: dict[str, Series] = {}
    for sym, val in values.items():
        if sym not in _SHIFT:
            raise ValueError(f"unknown symbol {sym!r}")
        if isinstance(val, Series):
            if val.valuation == 0 and any(val.coeffs[1:]):
                raise TruncationError(
                    f"substituting {sym} := series of valuation 0 that is not constant in z")
            if val.valuation >= 1 and val.valuation <= val.order:
                series_vals[sym] = val
            else:
                poly_vals[sym] = val.coeffs[0]
        else:
            poly_vals[sym] = _to_poly(val)
    return poly_vals, series_vals


def series_substitute_many(x: Series, values: Mapping[str, object]) -> Series:
    """Simultaneous substitution of several symbols.

    Rational or Poly values act coefficientwise.  Series values must have
    valuation >= 1 and the result is exact to ``min(order_x, order_value)``.
    """
    poly_vals, series_vals = _split_values(values)
    if not series_vals:
        return Series._raw([c.subs(poly_vals) for c in x.coeffs], x.order)

    n = min([x.order] + [s.order for s in series_vals.values()])
    syms = list(series_vals)
    shifts = [_SHIFT[s] for s in syms]
    vals = [series_vals[s].valuation for s in syms]

    # group by the exponents of the series-valued symbols
    groups: dict[tuple[int, ...], list[dict]] = {}
    for k in range(n + 1):
        t = x.coeffs[k]._t
        for key, c in t.items():
            exps = tuple((key >> sh) & _MASK for sh in shifts)
            if k + sum(e * v for e, v in zip(exps, vals)) > n:
                continue
            rest = key - sum(e << sh for e, sh in zip(exps, shifts))
            g = groups.get(exps)
            if g is None:
                g = groups[exps] = [dict() for _ in range(n + 1)]
            g[k][rest] = c

    powers: dict[tuple[str, int], Series] = {}

    def power(sym: str, e: int) -> Series:
        key = (sym, e)
        if key not in powers:
            base = series_vals[sym].truncate(n)
            if e == 1:
                powers[key] = base
            else:
                half = e // 2
                p = series_mul(power(sym, half), power(sym, e - half))
                powers[key] = p
        return powers[key]

    total = [ZERO] * (n + 1)
    for exps, cols in groups.items():
        part = [Poly._wrap(t).subs(poly_vals) if t else ZERO for t in cols]
        for sym, e in zip(syms, exps):
            if e:
                part = _mul_lists(part, power(sym, e).coeffs, n)
        total = [a + b for a, b in zip(total, part)]
    return Series._raw(total, n)


def series_substitute(x: Series, symbol: str, value) -> Series:
    return series_substitute_many(x, {symbol: value})


def series_derivative(x: Series, symbol: str) -> Series:
    if symbol not in _SHIFT:
        raise ValueError(f"unknown symbol {symbol!r}")
    return Series._raw([c.diff(symbol) for c in x.coeffs], x.order)


def z_poly(coeffs: Sequence, order: int) -> Series:
    """Polynomial in z given by its low-to-high coefficients, as a series."""
    return Series(coeffs, order)
