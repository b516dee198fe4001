"""Free energy, surface density, critical points and series analysis.

Exact rational arithmetic is used for root isolation only; everything that
comes out of this module is a 64-bit float.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import OptimizeWarning, brentq, curve_fit

from .errors import DegenerateError, NearCriticalWarning, OscillationWarning, UnsupportedModel

ROOT_TOL = 1e-12
CHECK_TOL = 1e-6
NEAR_CRITICAL = 1e-9

# ---------------------------------------------------------------------------
# exact univariate polynomials: coefficient lists, lowest degree first
# ---------------------------------------------------------------------------


def _trim(p: Sequence) -> list[Fraction]:
    out = [Fraction(c) for c in p]
    while out and out[-1] == 0:
        out.pop()
    return out


def _deriv(p: list[Fraction]) -> list[Fraction]:
    return [k * c for k, c in enumerate(p)][1:]


def _divmod(p: list[Fraction], d: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    p = list(p)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(p) - len(d) + 1, 0)
    lead = d[-1]
    for k in range(len(p) - len(d), -1, -1):
        c = p[k + len(d) - 1] / lead
        q[k] = c
        if c:
            for i, dc in enumerate(d):
                p[k + i] -= c * dc
    return _trim(q), _trim(p[: len(d) - 1])


def _gcd(p: list[Fraction], q: list[Fraction]) -> list[Fraction]:
    while q:
        p, q = q, _divmod(p, q)[1]
    return [c / p[-1] for c in p] if p else p


def _eval(p: Sequence, x):
    acc = 0 * x
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _squarefree_parts(p: list[Fraction]) -> list[tuple[list[Fraction], int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with ``f_i`` square-free and coprime."""
    dp = _deriv(p)
    g = _gcd(p, dp)
    b = _divmod(p, g)[0]
    c = _divmod(dp, g)[0] if g else dp
    parts = []
    i = 1
    while len(b) > 1:
        d = [x - y for x, y in _zip_longest(c, _deriv(b))]
        d = _trim(d)
        a = _gcd(b, d) if d else b
        if len(a) > 1:
            parts.append((a, i))
        b = _divmod(b, a)[0]
        c = _divmod(d, a)[0] if d else []
        i += 1
    return parts


def _zip_longest(x, y):
    n = max(len(x), len(y))
    return [(x[k] if k < len(x) else 0, y[k] if k < len(y) else 0) for k in range(n)]


def _sturm(p: list[Fraction]) -> list[list[Fraction]]:
    seq = [p, _deriv(p)]
    while seq[-1]:
        r = _divmod(seq[-2], seq[-1])[1]
        if not r:
            break
        seq.append([-c for c in r])
    return seq


def _sign_changes(seq, x) -> int:
    signs = [s for s in (_sign(_eval(p, x)) for p in seq) if s]
    return sum(1 for s, t in zip(signs, signs[1:]) if s != t)


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class RealRoot:
    value: float
    lo: Fraction
    hi: Fraction
    multiplicity: int = 1


def _refine(p: list[Fraction], lo: Fraction, hi: Fraction, tol: float) -> tuple[Fraction, Fraction]:
    """Bisect a sign-changing bracket ``[lo, hi]`` of a square-free ``p``."""
    slo = _sign(_eval(p, lo))
    if slo == 0:
        return lo, lo
    if _sign(_eval(p, hi)) == 0:
        return hi, hi
    for _ in range(400):
        scale = max(abs(lo), abs(hi))
        if hi - lo <= tol * max(scale, Fraction(1, 10 ** 6)) and hi - lo <= 2 ** -52 * scale + Fraction(1, 10 ** 300):
            break
        mid = (lo + hi) / 2
        sm = _sign(_eval(p, mid))
        if sm == 0:
            return mid, mid
        if sm == slo:
            lo = mid
        else:
            hi = mid
        # keep the rationals small
        lo, hi = _simplify_bracket(lo, hi, p, slo)
    return lo, hi


def _simplify_bracket(lo, hi, p, slo):
    if lo.denominator.bit_length() > 256:
        d = 1 << 200
        nlo = Fraction(math.floor(lo * d), d)
        if _sign(_eval(p, nlo)) == slo:
            lo = nlo
        nhi = Fraction(math.ceil(hi * d), d)
        if _sign(_eval(p, nhi)) not in (slo, 0):
            hi = nhi
    return lo, hi


def isolate_real_roots(p: Sequence, interval: tuple = (-math.inf, math.inf),
                       tol: float = ROOT_TOL) -> list[RealRoot]:
    """All real roots of ``p`` (coefficients lowest degree first) in ``[lo, hi]``.

    Roots are isolated exactly with Sturm sequences on the square-free parts
    and then bisected to relative width ``tol`` or better.
    """
    coeffs = _trim(p)
    if not coeffs:
        raise DegenerateError("cannot isolate the roots of the zero polynomial")
    lo, hi = interval
    if lo >= hi:
        raise ValueError("interval must satisfy lo < hi")
    if math.isinf(lo) or math.isinf(hi):
        # Cauchy bound
        bound = 1 + max(abs(c / coeffs[-1]) for c in coeffs[:-1]) if len(coeffs) > 1 else Fraction(1)
        lo = -bound if math.isinf(lo) else lo
        hi = bound if math.isinf(hi) else hi
    lo, hi = Fraction(lo), Fraction(hi)
    roots: list[RealRoot] = []
    for part, mult in _squarefree_parts(coeffs):
        seq = _sturm(part)
        for root in _isolate(part, seq, lo, hi):
            a, b = root
            if a != b:
                a, b = _refine(part, a, b, tol)
            roots.append(RealRoot(float((a + b) / 2), a, b, mult))
    return sorted(roots, key=lambda r: r.value)


def _isolate(p, seq, lo, hi) -> list[tuple[Fraction, Fraction]]:
    out = []
    if _eval(p, lo) == 0:
        out.append((lo, lo))
    if _eval(p, hi) == 0:
        out.append((hi, hi))
    stack = [(lo, hi)]
    while stack:
        a, b = stack.pop()
        # number of roots in (a, b]
        n = _sign_changes(seq, a) - _sign_changes(seq, b)
        if _eval(p, b) == 0:
            n -= 1
        if n <= 0:
            continue
        if n == 1 and _sign(_eval(p, a)) * _sign(_eval(p, b)) < 0:
            out.append((a, b))
            continue
        m = (a + b) / 2
        if _eval(p, m) == 0:
            out.append((m, m))
        stack.extend([(a, m), (m, b)])
    return out


# ---------------------------------------------------------------------------
# the critical polynomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CriticalPolynomials:
    """Integer coefficient lists, lowest degree first.

    ``adsorbed`` is bivariate: ``{(power of z, power of a): coefficient}``.
    """

    tails_desorbed: tuple = (1, -2, -2, 2)
    adsorbed: tuple = ((0, 0, 1), (0, 1, -1), (1, 1, -1), (1, 2, 1),
                       (2, 1, 1), (3, 1, 1), (3, 2, -1))
    loops_desorbed: tuple = (1, -3, -1, 6, 0, 0, 0, -7, -1, 3, 1)
    loops_critical_a: tuple = (1, -7, 45, -143, 277, -346, 285, -155, 54, -11, 1)

    def adsorbed_in_z(self, a) -> list:
        """Coefficients in ``z`` of the adsorbed polynomial at fixed ``a``."""
        return bivariate_in_z(self.adsorbed, a)


CRITICAL_POLYNOMIALS = CriticalPolynomials()


def bivariate_in_z(terms, a) -> list:
    out = [0] * (max(t[0] for t in terms) + 1)
    for i, j, c in terms:
        out[i] += c * a ** j
    return out


def bivariate_in_a(terms, z) -> list:
    out = [0] * (max(t[1] for t in terms) + 1)
    for i, j, c in terms:
        out[j] += c * z ** i
    return out


def _bivariate_eval(terms, z: float, a: float, dz: int = 0, da: int = 0) -> float:
    total = 0.0
    for i, j, c in terms:
        if i < dz or j < da:
            continue
        ci = math.perm(i, dz) * math.perm(j, da)
        total += c * ci * z ** (i - dz) * a ** (j - da)
    return total


# ---------------------------------------------------------------------------
# adsorption models
# ---------------------------------------------------------------------------

@dataclass
class AdsorptionModel:
    """A model whose dominant singularity is ``z_des`` below ``a_c`` and the
    root of ``F(z, a) = 0`` above it.

    ``desorbed`` is either an integer polynomial (root taken in ``(0, 1)``) or
    an exact float.  ``a_c_poly`` optionally pins ``a_c`` to a root of an
    integer polynomial in ``(1, a_c_bracket)``; otherwise ``a_c`` is where
    ``F(z_des, a)`` vanishes.  ``adsorbed`` of ``None`` marks a model with a
    single phase (``z = 1/a``).  ``crossover`` is the crossover exponent as
    stated for the model; it is carried as metadata and never measured.
    """

    name: str
    desorbed: object
    adsorbed: Optional[tuple]
    a_c_poly: Optional[tuple] = None
    a_c_exact: Optional[str] = None
    a_c_value: Optional[float] = None
    crossover: Optional[float] = None
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def z_desorbed(self) -> float:
        if "z_des" not in self._cache:
            if isinstance(self.desorbed, tuple):
                roots = isolate_real_roots(self.desorbed, (0, 1))
                if len(roots) != 1:
                    raise ValueError(f"{self.name}: expected one desorbed root in (0, 1)")
                self._cache["z_des"] = roots[0].value
            else:
                self._cache["z_des"] = float(self.desorbed)
        return self._cache["z_des"]

    @property
    def has_transition(self) -> bool:
        return self.adsorbed is not None

    @property
    def a_c(self) -> Optional[float]:
        """Critical fugacity: where the adsorbed root reaches ``z_des``."""
        if not self.has_transition:
            return None
        if "a_c" not in self._cache:
            if self.a_c_value is not None:
                self._cache["a_c"] = float(self.a_c_value)
            elif self.a_c_poly is not None:
                roots = isolate_real_roots(self.a_c_poly, (1, 2))
                self._cache["a_c"] = roots[0].value
            else:
                self._cache["a_c"] = self.crossing()
        return self._cache["a_c"]

    def crossing(self) -> float:
        """Largest ``a > 1`` with ``F(z_des, a) = 0``, where the branches meet.

        Smaller roots are crossings of a branch that turns back above
        ``z_des``.  A tangential meeting (continuous density) may be lost to
        rounding of ``z_des``; the stationary point of ``F(z_des, .)`` is
        used then.
        """
        zd = self.desorbed if isinstance(self.desorbed, Fraction) else Fraction(self.z_desorbed)
        poly = bivariate_in_a(self.adsorbed, zd)
        roots = [r for r in isolate_real_roots(poly, (1, 100)) if r.value > 1]
        if not roots:
            roots = [r for r in isolate_real_roots(_deriv(_trim(poly)), (1, 100)) if r.value > 1]
        if not roots:
            raise ValueError(f"{self.name}: no crossing found")
        return roots[-1].value

    def z_adsorbed(self, a: float, cap: Optional[float] = None) -> float:
        """Smallest root of ``F(., a)`` in ``(0, cap]`` (default cap ``z_des``)."""
        if not self.has_transition:
            return 1.0 / a
        cap = self.z_desorbed if cap is None else cap
        poly = bivariate_in_z(self.adsorbed, Fraction(a))
        roots = [r for r in isolate_real_roots(poly, (0, Fraction(cap) * (1 + Fraction(1, 10 ** 12))))
                 if r.value > 0]
        if not roots:
            raise ValueError(f"{self.name}: no adsorbed root in (0, {cap}] at a={a}")
        if len({round(r.value, 12) for r in roots}) > 1:
            raise ValueError(f"{self.name}: adsorbed root not unique in (0, {cap}] at a={a}")
        return min(roots[0].value, cap)

    def z_c(self, a: float) -> float:
        _check_a(a)
        if not self.has_transition:
            return 1.0 / a
        if a <= self.a_c:
            return self.z_desorbed
        return self.z_adsorbed(a)

    def phase(self, a: float) -> str:
        if not self.has_transition:
            return "adsorbed"
        return "desorbed" if a <= self.a_c else "adsorbed"


def _check_a(a: float) -> None:
    if not a > 0:
        raise ValueError(f"fugacity must be positive, got {a}")


_DYCK = ((2, 2, 1), (0, 1, -1), (0, 0, 1))             # a^2 z^2 - a + 1
_MOTZKIN_EDGE = ((1, 2, 1), (1, 1, -1), (1, 0, 1), (0, 1, -1), (0, 0, 1))  # (a^2-a+1) z - a + 1
_MOTZKIN_VERTEX = ((2, 2, 1), (1, 2, 1), (1, 1, -1), (0, 1, -1), (0, 0, 1))  # a^2z^2 + a(a-1)z - a + 1
_NE_TAILS = ((1, 1, 1), (0, 0, -1))                    # a z - 1

MODELS: dict[str, AdsorptionModel] = {
    # a_c = 2 exactly: F(z, 2) = -(tails_desorbed polynomial)
    "prudent_tails": AdsorptionModel("prudent_tails", CRITICAL_POLYNOMIALS.tails_desorbed,
                                     CRITICAL_POLYNOMIALS.adsorbed, a_c_exact="2", a_c_value=2.0,
                                     crossover=1.0),
    "prudent_loops": AdsorptionModel("prudent_loops", CRITICAL_POLYNOMIALS.loops_desorbed,
                                     CRITICAL_POLYNOMIALS.adsorbed,
                                     a_c_poly=CRITICAL_POLYNOMIALS.loops_critical_a, crossover=1.0),
    "dyck": AdsorptionModel("dyck", Fraction(1, 2), _DYCK, a_c_exact="2", a_c_value=2.0,
                            crossover=0.5),
    "motzkin_edge": AdsorptionModel("motzkin_edge", Fraction(1, 3), _MOTZKIN_EDGE,
                                    a_c_exact="2", a_c_value=2.0, crossover=0.5),
    "motzkin_vertex": AdsorptionModel("motzkin_vertex", Fraction(1, 3), _MOTZKIN_VERTEX,
                                      a_c_exact="3/2", a_c_value=1.5, crossover=0.5),
    # the partially-directed adsorbed singularity satisfies the same cubic as prudent walks
    "partially_directed_edge": AdsorptionModel("partially_directed_edge", (-1, 2, 1),
                                               CRITICAL_POLYNOMIALS.adsorbed,
                                               a_c_exact="(2+sqrt(2))/2",
                                               a_c_value=(2 + math.sqrt(2)) / 2, crossover=0.5),
    "ne_directed_tails": AdsorptionModel("ne_directed_tails", Fraction(1, 2), _NE_TAILS,
                                         a_c_exact="2", a_c_value=2.0),
    "ne_directed_loops": AdsorptionModel("ne_directed_loops", Fraction(1), None),
}

ALIASES = {
    "tails": "prudent_tails", "loops": "prudent_loops",
    "prudent_tail": "prudent_tails", "prudent_loop": "prudent_loops",
}


def get_model(model) -> AdsorptionModel:
    """Look up a model by name or alias; a DirectedModel maps to its own entry."""
    if isinstance(model, AdsorptionModel):
        return model
    name = getattr(model, "phase_key", None) or model
    if not isinstance(name, str):
        raise UnsupportedModel(f"unsupported model {model!r}")
    name = ALIASES.get(name, name)
    if name not in MODELS:
        raise UnsupportedModel(f"no free energy available for {name!r}")
    return MODELS[name]


@dataclass(frozen=True)
class PhasePoint:
    alpha: float
    a: float
    f: float
    rho: float
    phase: str


def free_energy(model, a: float) -> float:
    """``f = -log z_c(a)``."""
    return -math.log(get_model(model).z_c(a))


def _implicit_density(m: AdsorptionModel, a: float, z: float) -> float:
    if not m.has_transition:
        return 1.0
    fa = _bivariate_eval(m.adsorbed, z, a, da=1)
    fz = _bivariate_eval(m.adsorbed, z, a, dz=1)
    return (a / z) * fa / fz


def surface_density(model, a: float, side: Optional[str] = None) -> float:
    """``rho = d f / d alpha`` from implicit differentiation of ``F(z, a) = 0``.

    Within ``1e-9`` of ``a_c`` the density is two-valued: pass ``side="-"``
    or ``side="+"`` for the one-sided limits; otherwise NaN is returned with
    a NearCriticalWarning.
    """
    m = get_model(model)
    _check_a(a)
    if not m.has_transition:
        return 1.0
    a_c = m.a_c
    if abs(a - a_c) <= NEAR_CRITICAL:
        if side == "-":
            return 0.0
        if side == "+":
            return _implicit_density(m, a_c, m.z_desorbed)
        warnings.warn(f"a={a} is within {NEAR_CRITICAL} of a_c={a_c}; density is two-valued",
                      NearCriticalWarning, stacklevel=2)
        return math.nan
    if a < a_c:
        return 0.0
    return _implicit_density(m, a, m.z_adsorbed(a))


def density_finite_difference(model, a: float, h: float = 1e-5) -> float:
    """Central difference of ``f`` in ``alpha = log a``."""
    alpha = math.log(a)
    return (free_energy(model, math.exp(alpha + h)) - free_energy(model, math.exp(alpha - h))) / (2 * h)


def phase_point(model, a: float) -> PhasePoint:
    m = get_model(model)
    return PhasePoint(math.log(a), a, free_energy(m, a), surface_density(m, a, side="+"), m.phase(a))


@dataclass(frozen=True)
class CriticalPoint:
    model: str
    a_c: Optional[float]
    z_c: Optional[float]
    rho_minus: Optional[float]
    rho_plus: Optional[float]
    exact: Optional[str] = None
    crossing: Optional[float] = None
    crossover: Optional[float] = None

    @property
    def jump(self) -> float:
        if self.a_c is None:
            return 0.0
        return self.rho_plus - self.rho_minus

    @property
    def order(self) -> str:
        if self.a_c is None:
            return "none"
        return "first" if self.jump > CHECK_TOL else "second"


def critical_point(model) -> CriticalPoint:
    m = get_model(model)
    if not m.has_transition:
        return CriticalPoint(m.name, None, None, None, None)
    a_c = m.a_c
    rho_plus = _implicit_density(m, a_c, m.z_desorbed)
    return CriticalPoint(m.name, a_c, m.z_desorbed, 0.0, rho_plus, m.a_c_exact, m.crossing(),
                         m.crossover)


# ---------------------------------------------------------------------------
# ratio method
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SingularityEstimate:
    z_c: float
    method: str
    n_terms: int
    uncertainty: float
    growth: float
    period: int = 1


def _alternates(d: np.ndarray) -> bool:
    s = np.sign(d)
    return len(s) >= 4 and bool(np.all(s != 0)) and bool(np.all(s[1:] == -s[:-1]))


def _aitken(x: np.ndarray) -> np.ndarray:
    """Aitken's delta-squared transform; terms with a vanishing second difference are kept."""
    d2 = x[2:] - 2 * x[1:-1] + x[:-2]
    out = x[2:].copy()
    ok = d2 != 0
    out[ok] = x[2:][ok] - (x[2:][ok] - x[1:-1][ok]) ** 2 / d2[ok]
    return out


def ratio_estimate(coeffs: Sequence, tail: int = 6, extrapolation: Optional[str] = "auto") -> SingularityEstimate:
    """Radius of convergence from the ratios ``r_n = c_n / c_{n-1}``.

    ``extrapolation="aitken"`` applies Aitken's delta-squared transform to the
    ratios, which removes a geometric correction (a second singularity close
    to the dominant one); ``"linear"`` uses ``n r_n - (n-1) r_{n-1}``, which
    removes a ``1/n`` correction (algebraic singularity); ``None`` keeps the
    raw ratio.  ``"auto"`` takes whichever of the two extrapolated sequences
    varies least over its last ``tail`` terms.  The uncertainty is the larger
    of that variation and the disagreement between the two extrapolations.
    Series with vanishing odd coefficients are analysed on the even
    subsequence, whose ratios estimate ``mu**2``.
    """
    c = np.array([float(x) for x in coeffs])
    if len(c) < 20:
        raise ValueError("ratio analysis needs at least 20 coefficients")
    period = 1
    if np.all(c[1::2] == 0) and np.all(c[0::2] > 0):
        c = c[0::2]
        period = 2
    if not np.all(c > 0):
        raise ValueError("ratio analysis needs positive coefficients")
    lag = 1
    r = c[1:] / c[:-1]
    if _alternates(np.diff(r)[-8:]):
        warnings.warn("coefficient ratios alternate; using every other term", OscillationWarning,
                      stacklevel=2)
        lag = 2
        r = c[2:] / c[:-2]
    n = np.arange(lag, len(c), dtype=float)
    linear = n[1:] * r[1:] - n[:-1] * r[:-1]
    aitken = _aitken(r)
    power = period * lag
    # a negative extrapolant has no real root; it shows up as nan and loses the comparison
    with np.errstate(invalid="ignore"):
        seqs = {"linear": linear ** (1.0 / power), "aitken": aitken ** (1.0 / power)}

    def variation(x):
        window = x[-tail:]
        if not np.all(np.isfinite(window)):
            return math.inf
        return float(window.max() - window.min())

    if extrapolation == "auto":
        extrapolation = min(seqs, key=lambda k: variation(seqs[k]))
    if extrapolation in seqs:
        est, method = seqs[extrapolation], "ratio+extrapolation"
        other = seqs["aitken" if extrapolation == "linear" else "linear"]
        spread = max(variation(est), abs(float(est[-1] - other[-1])))
    elif extrapolation is None:
        est, method = r ** (1.0 / power), "ratio"
        spread = variation(est)
    else:
        raise ValueError(f"unknown extrapolation {extrapolation!r}")
    mu = float(est[-1])
    return SingularityEstimate(1.0 / mu, method, len(coeffs), spread / mu ** 2, mu, power)


# ---------------------------------------------------------------------------
# height scaling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PowerLawFit:
    amplitude: float
    exponent: float
    constant: float
    window: tuple[int, int]
    residual_norm: float


def fit_power_law(ns, hs, window: Optional[tuple[int, int]] = None) -> PowerLawFit:
    """Least-squares ``h ~ A n^gamma + B`` over ``window``."""
    ns = np.asarray(ns, dtype=float)
    hs = np.asarray(hs, dtype=float)
    if window is not None:
        keep = (ns >= window[0]) & (ns <= window[1])
        ns, hs = ns[keep], hs[keep]
    win = (int(ns.min()), int(ns.max()))
    if np.allclose(hs, 0):
        return PowerLawFit(0.0, 0.0, 0.0, win, 0.0)

    def model(n, A, g, B):
        return A * n ** g + B

    p0 = (hs[-1] / ns[-1] ** 0.75, 0.75, 0.0)
    with warnings.catch_warnings():
        # an exact power law leaves the covariance undetermined; only popt is used
        warnings.simplefilter("ignore", OptimizeWarning)
        popt, _ = curve_fit(model, ns, hs, p0=p0, maxfev=20000)
    res = float(np.linalg.norm(model(ns, *popt) - hs))
    return PowerLawFit(float(popt[0]), float(popt[1]), float(popt[2]), win, res)


@dataclass(frozen=True)
class LinearFit:
    slope: float
    intercept: float
    window: tuple[int, int]
    residual_norm: float
    mean_value: float


def fit_linear(ns, hs, window: tuple[int, int]) -> LinearFit:
    ns = np.asarray(ns, dtype=float)
    hs = np.asarray(hs, dtype=float)
    keep = (ns >= window[0]) & (ns <= window[1])
    ns, hs = ns[keep], hs[keep]
    slope, intercept = np.polyfit(ns, hs, 1)
    res = float(np.linalg.norm(slope * ns + intercept - hs))
    return LinearFit(float(slope), float(intercept), window, res, float(hs.mean()))


# ---------------------------------------------------------------------------
# linear height growth from the pole of the generating function
# ---------------------------------------------------------------------------

def _lambda_float(z: float, v: float) -> float:
    p = 1 + z * z - z * v + z ** 3 * v
    return (p - math.sqrt(p * p - 4 * z * z)) / (2 * z)


def _capital_lambda_float(z: float) -> float:
    return _lambda_float(z, 1.0)


def _tails_pole_factor(z: float, v: float) -> float:
    """Vanishes at the simple pole of ``W(z; 1, v; 1)``; ``v`` marks the endpoint height."""
    L = _capital_lambda_float(z)
    lv = _lambda_float(z, v)
    return z * L - L * lv + z * lv


def _loops_pole_factor(z: float, u: float) -> float:
    """Vanishes at the simple pole of ``R(z; u, 0; 1)``; ``u`` marks the height."""
    L = _capital_lambda_float(z)
    return (1 - z - z * z + L) * _lambda_float(z, u * L) - 1


_POLE_FACTORS = {
    "prudent_tails": (_tails_pole_factor, 0.39, 0.41),
    "prudent_loops": (_loops_pole_factor, 0.40, 0.414),
}


def pole_location(model: str, s: float = 1.0) -> float:
    """Dominant pole of the height-marked generating function at marker value ``s``."""
    try:
        factor, lo, hi = _POLE_FACTORS[ALIASES.get(model, model)]
    except KeyError:
        raise UnsupportedModel(f"no pole factor for {model!r}") from None
    return brentq(lambda z: factor(z, s), lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def asymptotic_height_slope(model: str, h: float = 1e-6) -> float:
    """``lim <x_n>/n = -rho'(1)/rho(1)`` for the marked height ``x``.

    For prudent tails ``x`` is the endpoint height; for prudent loops it is
    the maximum height.  A simple pole ``rho(s)`` moving with the marker gives
    a mean that grows linearly with this slope.
    """
    rho = pole_location(model)
    d = (pole_location(model, 1 + h) - pole_location(model, 1 - h)) / (2 * h)
    return -d / rho


@dataclass(frozen=True)
class TransitionRow:
    model: str
    gamma: float
    transition: str
    jump: float
    consistent: bool
    n_max: int


def classify_consistency(gamma: float, transition: str) -> bool:
    """Linear height with a first-order transition, at most ``n^{3/4}`` with a second-order one."""
    if transition == "first":
        return 0.9 <= gamma <= 1.1
    if transition == "second":
        return gamma <= 0.75 + 0.05
    return True


def transition_height_report(n_prudent: int = 200, n_baseline: int = 1000) -> list[TransitionRow]:
    """One row per model: fitted height exponent, transition order, consistency."""
    from .baselines import DirectedModel, baseline_height_profile
    from .walks import WalkFamily, height_statistics

    rows = []
    cases = [
        ("prudent_tails", lambda: height_statistics(WalkFamily("two_sided", "tail"), n_prudent), "prudent_tails"),
        ("prudent_loops", lambda: height_statistics(WalkFamily("two_sided", "loop"), n_prudent), "prudent_loops"),
    ]
    for dm in (DirectedModel("ne_directed", "edge", "tail"), DirectedModel("ne_directed", "edge", "loop"),
               DirectedModel("dyck", "vertex", "loop"), DirectedModel("dyck", "vertex", "tail"),
               DirectedModel("motzkin", "edge", "loop"), DirectedModel("motzkin", "edge", "tail"),
               DirectedModel("partially_directed", "edge", "loop"),
               DirectedModel("partially_directed", "edge", "tail")):
        cases.append((dm.label, (lambda dm=dm: baseline_height_profile(dm, n_baseline)), dm.phase_key))
    for label, make, key in cases:
        table = make()
        ns, _, hs = table.float_means()
        n_top = int(ns.max())
        fit = fit_power_law(ns, hs, (max(n_top // 2, 1), n_top))
        cp = critical_point(key)
        rows.append(TransitionRow(label, fit.exponent, cp.order, cp.jump,
                                  classify_consistency(fit.exponent, cp.order), n_top))
    return rows
