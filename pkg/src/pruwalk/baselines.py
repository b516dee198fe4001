"""Directed adsorption models used as references: NE-directed walks, Dyck
paths, Motzkin paths and partially-directed walks in the upper half-plane.

All four are counted with transfer matrices indexed by the current height.
Partially-directed walks also remember whether the last vertical step went
up or down, since a step may not undo the previous one.

Weighting: with ``edge`` weights a step earns ``a`` when both of its ends lie
on the surface; with ``vertex`` weights every step that arrives on the
surface does (the starting vertex is not weighted).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import LimitError, UnsupportedModel
from .phase import PowerLawFit, fit_power_law
from .series import Poly
from .walks import HeightTable, WeightTable

MODEL_NAMES = ("ne_directed", "dyck", "motzkin", "partially_directed")
PARTITION_LIMIT = 5000
SYMBOLIC_LIMIT = 200
EXACT_HEIGHT_LIMIT = 400
# relative probability mass allowed on the highest float strip
TAIL_TOL = 1e-13

GROWTH = {
    "ne_directed": 2.0,
    "dyck": 2.0,
    "motzkin": 3.0,
    "partially_directed": 1 + math.sqrt(2),
}


@dataclass(frozen=True)
class DirectedModel:
    name: str
    weighting: str = "edge"
    endpoint: str = "tail"

    def __post_init__(self):
        if self.name not in MODEL_NAMES:
            raise UnsupportedModel(f"unknown directed model {self.name!r}")
        if self.weighting not in ("edge", "vertex"):
            raise ValueError("weighting must be 'edge' or 'vertex'")
        if self.endpoint not in ("tail", "loop"):
            raise ValueError("endpoint must be 'tail' or 'loop'")
        if self.name == "dyck" and self.weighting != "vertex":
            raise UnsupportedModel("Dyck paths have no steps along the surface; use vertex weights")

    @property
    def label(self) -> str:
        return f"{self.name}_{self.endpoint}s"

    @property
    def phase_key(self) -> Optional[str]:
        """Name of the matching free-energy model in ``phase.MODELS``."""
        if self.name == "ne_directed":
            return f"ne_directed_{self.endpoint}s"
        if self.name == "dyck":
            return "dyck"
        if self.name == "motzkin":
            return f"motzkin_{self.weighting}"
        if self.weighting == "edge":
            return "partially_directed_edge"
        return None


# ---------------------------------------------------------------------------
# one transfer step on stacked height vectors
# ---------------------------------------------------------------------------
#
# A state is a tuple of arrays whose first axis is the height.  Trailing axes
# (surface-step count, strip index, maximum height) ride along untouched,
# except that "times a" may act on the surface-step axis.


def _up(x):
    out = np.zeros_like(x)
    out[1:] = x[:-1]
    return out


def _down(x):
    out = np.zeros_like(x)
    out[:-1] = x[1:]
    return out


class _Weight:
    """Multiplication by ``a`` on the height-0 slice."""

    def __init__(self, a, nu_axis: Optional[int] = None):
        self.a = a
        self.nu_axis = nu_axis

    def at_surface(self, x):
        if self.nu_axis is None and self.a == 1:
            return x
        out = x.copy()
        if self.nu_axis is None:
            out[0] = x[0] * self.a
        else:
            sl = np.moveaxis(out[0], self.nu_axis - 1, 0)
            src = np.moveaxis(x[0], self.nu_axis - 1, 0)
            sl[1:] = src[:-1]
            sl[0] = 0
        return out


def _step(model: DirectedModel, state: tuple, w: _Weight) -> tuple:
    vertex = model.weighting == "vertex"
    if model.name == "ne_directed":
        (c,) = state
        return (_up(c) + w.at_surface(c),)
    if model.name == "dyck":
        (c,) = state
        return (_up(c) + w.at_surface(_down(c)),)
    if model.name == "motzkin":
        (c,) = state
        down = _down(c)
        return (_up(c) + w.at_surface(c) + (w.at_surface(down) if vertex else down),)
    # partially directed: (last step E or start, last step N, last step S)
    e, n, s = state
    new_e = w.at_surface(e + n + s)
    new_n = _up(e + n)
    down = _down(e + s)
    new_s = w.at_surface(down) if vertex else down
    return new_e, new_n, new_s


def _initial(model: DirectedModel, shape: tuple, dtype) -> tuple:
    parts = 3 if model.name == "partially_directed" else 1
    state = tuple(np.zeros(shape, dtype=dtype) for _ in range(parts))
    state[0][(0,) * len(shape)] = 1
    return state


def _total(state) -> np.ndarray:
    return sum(state[1:], state[0])


# ---------------------------------------------------------------------------
# partition functions
# ---------------------------------------------------------------------------

def baseline_partition(model: DirectedModel, n_max: int, a=None) -> WeightTable:
    """``Z_n(a)`` for ``n <= n_max`` by a height-indexed transfer matrix.

    ``a=None`` keeps ``a`` symbolic (``n_max <= 200``); rational ``a`` is
    exact up to ``n_max <= 5000``.
    """
    if n_max > PARTITION_LIMIT:
        raise LimitError(f"n_max={n_max} exceeds {PARTITION_LIMIT}")
    symbolic = a is None
    if symbolic and n_max > SYMBOLIC_LIMIT:
        raise LimitError(f"symbolic a is limited to n_max <= {SYMBOLIC_LIMIT}")
    H = n_max + 2
    if symbolic:
        state = _initial(model, (H, n_max + 1), object)
        w = _Weight(None, nu_axis=1)
    else:
        a = a if isinstance(a, int) else Fraction(a)
        state = _initial(model, (H,), object)
        w = _Weight(a)
    totals = []
    for n in range(n_max + 1):
        if n:
            state = _step(model, state, w)
        tot = _total(state)
        val = tot[0] if model.endpoint == "loop" else tot.sum(axis=0)
        if symbolic:
            totals.append(Poly({(nu,): int(c) for nu, c in enumerate(val) if c}))
        else:
            totals.append(Poly(val))
    return WeightTable(model.name, model.endpoint, totals)


@dataclass(frozen=True)
class CriticalFugacity:
    expression: str
    value: float
    minimal_polynomial: tuple  # integer coefficients, lowest degree first


_CRITICAL = {
    ("dyck", "vertex"): CriticalFugacity("2", 2.0, (-2, 1)),
    ("motzkin", "edge"): CriticalFugacity("2", 2.0, (-2, 1)),
    ("motzkin", "vertex"): CriticalFugacity("3/2", 1.5, (-3, 2)),
    ("partially_directed", "edge"): CriticalFugacity("(2+sqrt(2))/2", (2 + math.sqrt(2)) / 2, (1, -4, 2)),
    ("partially_directed", "vertex"): CriticalFugacity(
        "(1+sqrt(2))*(sqrt(5)-1)/2", (1 + math.sqrt(2)) * (math.sqrt(5) - 1) / 2, (1, 2, -7, 2, 1)),
    ("ne_directed", "edge"): CriticalFugacity("2", 2.0, (-2, 1)),
    ("ne_directed", "vertex"): CriticalFugacity("2", 2.0, (-2, 1)),
}


def baseline_critical_fugacity(model: DirectedModel) -> CriticalFugacity:
    """Closed-form critical fugacity (tails and loops share it)."""
    if model.name == "ne_directed" and model.endpoint == "loop":
        raise UnsupportedModel("NE-directed loops lie in the surface and have no transition")
    try:
        return _CRITICAL[(model.name, model.weighting)]
    except KeyError:
        raise UnsupportedModel(f"no critical fugacity for {model}") from None


# ---------------------------------------------------------------------------
# heights at a = 1
# ---------------------------------------------------------------------------

def _ne_heights(model: DirectedModel, n_max: int) -> HeightTable:
    if model.endpoint == "loop":
        return HeightTable([1] * (n_max + 1), [0] * (n_max + 1), [0] * (n_max + 1), label=model.label)
    counts = [2 ** n for n in range(n_max + 1)]
    sums = [n * 2 ** n // 2 for n in range(n_max + 1)]
    return HeightTable(counts, sums, list(sums), label=model.label)


def _endpoint_sums(model, n_max, dtype, growth):
    """Counts and endpoint-height sums from the unrestricted transfer matrix."""
    H = n_max + 2
    state = _initial(model, (H,), dtype)
    w = _Weight(1)
    heights = np.arange(H)
    counts, esums = [], []
    for n in range(n_max + 1):
        if n:
            state = _step(model, state, w)
            if growth != 1:
                state = tuple(s / growth for s in state)
        tot = _total(state)
        if model.endpoint == "loop":
            counts.append(tot[0])
            esums.append(0 * tot[0])
        else:
            counts.append(tot.sum())
            esums.append((tot * heights).sum())
    return counts, esums


def _cumulative_max_sums(model, n_max, strips, dtype, growth, counts):
    """``sum_lambda (count_n - count_n(max height <= lambda))`` for every n.

    All strips ``0 <= lambda < strips`` are advanced together as the columns
    of one array; heights above a strip's ceiling are cleared every step.
    """
    H = strips + 1
    state = _initial(model, (H, strips), dtype)
    for s in state:
        s[0, :] = 0
    state[0][0, :] = 1
    mask = (np.arange(H)[:, None] <= np.arange(strips)[None, :]).astype(dtype)
    if growth != 1:
        mask = mask / growth
    w = _Weight(1)
    sums = []
    for n in range(n_max + 1):
        if n:
            state = tuple(s * mask for s in _step(model, state, w))
        tot = _total(state)
        below = tot[0] if model.endpoint == "loop" else tot.sum(axis=0)
        # strips with lambda >= n hold every walk: they contribute nothing
        sums.append((counts[n] - below[: min(n, strips)]).sum() if n else 0 * counts[0])
    return sums, below


def _direct_max_sums(model, n_max):
    """Exact max-height sums from a transfer matrix over (height, maximum)."""
    H = n_max + 2
    state = _initial(model, (H, H), object)
    w = _Weight(1)
    diag = np.arange(H - 1)
    maxes = np.arange(H)
    sums = []
    for n in range(n_max + 1):
        if n:
            new = _step(model, state, w)
            fixed = []
            for s in new:
                # an up step from height == max leaves the walk at (m + 1, m): raise the max
                s = s.copy()
                s[diag + 1, diag + 1] += s[diag + 1, diag]
                s[diag + 1, diag] = 0
                fixed.append(s)
            state = tuple(fixed)
        tot = _total(state)
        rows = tot[0] if model.endpoint == "loop" else tot.sum(axis=0)
        sums.append((rows * maxes).sum())
    return sums


def baseline_height_profile(model: DirectedModel, n_max: int, exact: Optional[bool] = None,
                            method: str = "cumulative") -> HeightTable:
    """Endpoint- and maximum-height sums at ``a = 1`` for ``n <= n_max``.

    ``exact=True`` counts with integers (cost cubic in ``n_max``);
    ``exact=False`` runs the same cumulative count in floats normalised by
    the growth constant, keeping only strips below a ceiling that is raised
    until walks whose maximum reaches it carry under ``TAIL_TOL`` of the
    weight.  The default is exact up to
    ``n_max = 400``.  ``method="direct"`` tracks (height, maximum) pairs
    instead and is exact only.
    """
    if n_max > PARTITION_LIMIT:
        raise LimitError(f"n_max={n_max} exceeds {PARTITION_LIMIT}")
    if model.name == "ne_directed":
        return _ne_heights(model, n_max)
    if exact is None:
        exact = n_max <= EXACT_HEIGHT_LIMIT
    if method == "direct":
        if not exact:
            raise ValueError("the (height, maximum) transfer matrix is exact only")
        counts, esums = _endpoint_sums(model, n_max, object, 1)
        return HeightTable(counts, esums, _direct_max_sums(model, n_max), label=model.label)
    if method != "cumulative":
        raise ValueError(f"unknown method {method!r}")
    if exact:
        counts, esums = _endpoint_sums(model, n_max, object, 1)
        hsums, _ = _cumulative_max_sums(model, n_max, n_max + 1, object, 1, counts)
        return HeightTable(counts, esums, hsums, label=model.label)
    growth = GROWTH[model.name]
    counts, esums = _endpoint_sums(model, n_max, float, growth)
    strips = min(n_max + 1, int(9 * math.sqrt(n_max)) + 16)
    while True:
        hsums, below = _cumulative_max_sums(model, n_max, strips, float, growth, counts)
        # walks whose maximum sits on the top strip estimate the mass cut off above it;
        # comparing with the unrestricted count instead would only measure rounding
        if strips > n_max or below[-1] - below[-2] <= TAIL_TOL * below[-1]:
            break
        strips = min(n_max + 1, (3 * strips) // 2)
    return HeightTable(counts, esums, hsums, exact=False, growth=growth, label=model.label)


# ---------------------------------------------------------------------------
# amplitude fits
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AsymptoticFit:
    model: str
    amplitude: float
    exponent: float
    constant: float
    correction: float
    window: tuple[int, int]
    residual_norm: float


def fit_sqrt_amplitude(table: HeightTable, window: Optional[tuple[int, int]] = None,
                       model: str = "") -> AsymptoticFit:
    """Least squares ``<h_n> = A n^{1/2} + B + C n^{-1/2}`` over ``window``.

    The default window is ``[n_max/2, n_max]``; lengths with no walks (odd
    Dyck loops) are skipped.
    """
    ns, _, hs = table.float_means()
    n_max = int(ns.max())
    lo, hi = window or (n_max // 2, n_max)
    if lo < ns.min() or hi > n_max:
        raise ValueError("fit window must lie inside the computed range")
    keep = (ns >= max(lo, 1)) & (ns <= hi)
    n, h = ns[keep].astype(float), hs[keep]
    X = np.column_stack([np.sqrt(n), np.ones_like(n), 1 / np.sqrt(n)])
    coef, *_ = np.linalg.lstsq(X, h, rcond=None)
    res = float(np.linalg.norm(X @ coef - h))
    return AsymptoticFit(model or table.label, float(coef[0]), 0.5, float(coef[1]), float(coef[2]),
                         (lo, hi), res)


def fit_height_exponent(table: HeightTable, window: Optional[tuple[int, int]] = None,
                        model: str = "") -> AsymptoticFit:
    """Free-exponent fit ``<h_n> = A n^gamma + B``."""
    ns, _, hs = table.float_means()
    fit: PowerLawFit = fit_power_law(ns, hs, window)
    return AsymptoticFit(model or table.label, fit.amplitude, fit.exponent, fit.constant, 0.0,
                         fit.window, fit.residual_norm)
