"""Adsorbing prudent walks in the upper half-plane: exhaustive enumeration,
the last-inflating-step transfer counter for 2-sided walks, and height sums.

Geometry: walks start at the origin, never go below ``y = 0`` and earn one
factor of ``a`` for every step with both endpoints on ``y = 0``.  A walk is
on the N side of its box when ``y == y_max`` and on the E side when
``x == x_max``; degenerate (zero-height or zero-width) boxes need no special
casing under these definitions.

Refinement keys follow the generating functions of the kernel solver:

``("R", i, j)``  walks ending on the E side, ``i = y_max - y``, ``j = y``
``("T", i, j)``  walks ending on the N side, ``i = x_max - x``, ``j = y``

For 3-sided walks a fourth entry ``k`` is the distance to the W side
(``x - x_min``), and ``("L", i, j, k)`` records W-side endings with ``k``
measured to the E side.  NE-corner walks appear under both ``R`` and ``T``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Optional

import numpy as np

from .errors import LimitError
from .series import Poly, Series

STEPS = {"N": (0, 1), "S": (0, -1), "E": (1, 0), "W": (-1, 0)}

SIDES = ("one_sided", "two_sided", "three_sided")
ENDPOINTS = ("tail", "loop")

DFS_LIMIT = 16
DP_LIMIT = 200

_FAMILY_ALIASES = {
    "1sided": "one_sided", "1-sided": "one_sided", "one_sided": "one_sided",
    "2sided": "two_sided", "2-sided": "two_sided", "two_sided": "two_sided",
    "3sided": "three_sided", "3-sided": "three_sided", "three_sided": "three_sided",
}


@dataclass(frozen=True)
class WalkFamily:
    sides: str = "two_sided"
    endpoint: str = "tail"

    def __post_init__(self):
        sides = _FAMILY_ALIASES.get(self.sides)
        if sides is None:
            raise ValueError(f"unknown family {self.sides!r}; expected one of {SIDES}")
        object.__setattr__(self, "sides", sides)
        if self.endpoint not in ENDPOINTS:
            raise ValueError(f"endpoint must be one of {ENDPOINTS}, got {self.endpoint!r}")

    def accepts_position(self, x: int, y: int, xmin: int, xmax: int, ymax: int) -> bool:
        if self.sides == "one_sided":
            return x == xmax
        if self.sides == "two_sided":
            return y == ymax or x == xmax
        return y == ymax or x == xmax or x == xmin


@dataclass(frozen=True)
class Walk:
    steps: tuple[str, ...] = ()

    def __post_init__(self):
        steps = tuple(self.steps)
        bad = [s for s in steps if s not in STEPS]
        if bad:
            raise ValueError(f"invalid steps {bad}")
        object.__setattr__(self, "steps", steps)

    @classmethod
    def parse(cls, text: str) -> "Walk":
        return cls(tuple(text.replace(",", "").replace(" ", "").upper()))

    def __len__(self) -> int:
        return len(self.steps)

    @cached_property
    def vertices(self) -> tuple[tuple[int, int], ...]:
        x = y = 0
        out = [(0, 0)]
        for s in self.steps:
            dx, dy = STEPS[s]
            x += dx
            y += dy
            out.append((x, y))
        return tuple(out)

    @property
    def box(self) -> tuple[int, int, int]:
        """``(x_min, x_max, y_max)``; ``y_min`` is the surface."""
        xs = [p[0] for p in self.vertices]
        ys = [p[1] for p in self.vertices]
        return min(xs), max(xs), max(ys)

    @property
    def surface_edges(self) -> int:
        v = self.vertices
        return sum(1 for p, q in zip(v, v[1:]) if p[1] == 0 and q[1] == 0)

    @property
    def endpoint_height(self) -> int:
        return self.vertices[-1][1]

    @property
    def max_height(self) -> int:
        return self.box[2]


def _ray_blocked(occupied, x, y, dx, dy, xmin, xmax, ymax) -> bool:
    """True if an occupied vertex lies on the ray from (x, y) in direction (dx, dy)."""
    x += dx
    y += dy
    while xmin <= x <= xmax and 0 <= y <= ymax:
        if (x, y) in occupied:
            return True
        x += dx
        y += dy
    return False


def _width_one_violation(x, y, dx, dy, xmin, xmax) -> bool:
    return dy == 0 and y == 0 and xmax - xmin == 1 and xmin <= x + dx <= xmax


def is_admissible(w: Walk, fam: WalkFamily) -> bool:
    """Self-avoiding, half-plane, prudent, and in the family at every prefix."""
    x = y = 0
    xmin = xmax = ymax = 0
    occupied = {(0, 0)}
    for s in w.steps:
        dx, dy = STEPS[s]
        if _ray_blocked(occupied, x, y, dx, dy, xmin, xmax, ymax):
            return False
        if fam.sides == "three_sided" and _width_one_violation(x, y, dx, dy, xmin, xmax):
            return False
        x += dx
        y += dy
        if y < 0 or (x, y) in occupied:
            return False
        occupied.add((x, y))
        xmin, xmax, ymax = min(xmin, x), max(xmax, x), max(ymax, y)
        if not fam.accepts_position(x, y, xmin, xmax, ymax):
            return False
    return fam.endpoint == "tail" or y == 0


def _refined_keys(fam: WalkFamily, x, y, xmin, xmax, ymax) -> list[tuple]:
    keys = []
    if fam.sides == "three_sided":
        if x == xmax:
            keys.append(("R", ymax - y, y, x - xmin))
        if y == ymax:
            keys.append(("T", xmax - x, y, x - xmin))
        if x == xmin:
            keys.append(("L", ymax - y, y, xmax - x))
    else:
        if x == xmax:
            keys.append(("R", ymax - y, y))
        if y == ymax:
            keys.append(("T", xmax - x, y))
    return keys


@dataclass
class WeightTable:
    """Per-length partition functions ``Z_n(a)`` as Polys in ``a``.

    ``refined[n]`` maps a refinement key (see module docstring) to the
    weighted count of length-``n`` walks with that key, when available.
    """

    family: str
    endpoint: str
    totals: list[Poly]
    refined: Optional[list[dict[tuple, Poly]]] = None

    @property
    def n_max(self) -> int:
        return len(self.totals) - 1

    def at(self, a) -> list:
        """``Z_n(a)`` for rational ``a`` (exact) or float ``a``."""
        if isinstance(a, float):
            return [sum(float(c) * a ** e[0] for e, c in p.terms().items())
                    for p in self.totals]
        return [p.evaluate(a=a) for p in self.totals]

    def counts(self) -> list[int]:
        return self.at(1)

    def series(self, a=None) -> Series:
        """Generating function ``sum Z_n z^n`` (``a`` symbolic unless given)."""
        cs = self.totals if a is None else [p.subs({"a": a}) for p in self.totals]
        return Series(cs, self.n_max)


def _to_poly_a(counts: dict[int, int]) -> Poly:
    return Poly({(nu,): c for nu, c in counts.items()})


def _walk_dfs(fam: WalkFamily, n_max: int) -> Iterator[tuple[int, int, int, int, int, int, int]]:
    """Yield ``(n, x, y, xmin, xmax, ymax, nu)`` for every admissible prefix."""
    occupied = {(0, 0)}
    three = fam.sides == "three_sided"

    def rec(n, x, y, xmin, xmax, ymax, nu):
        yield n, x, y, xmin, xmax, ymax, nu
        if n == n_max:
            return
        for dx, dy in STEPS.values():
            nx, ny = x + dx, y + dy
            if ny < 0 or (nx, ny) in occupied:
                continue
            if _ray_blocked(occupied, x, y, dx, dy, xmin, xmax, ymax):
                continue
            if three and _width_one_violation(x, y, dx, dy, xmin, xmax):
                continue
            nxmin, nxmax, nymax = min(xmin, nx), max(xmax, nx), max(ymax, ny)
            if not fam.accepts_position(nx, ny, nxmin, nxmax, nymax):
                continue
            occupied.add((nx, ny))
            yield from rec(n + 1, nx, ny, nxmin, nxmax, nymax,
                           nu + (1 if y == 0 and ny == 0 else 0))
            occupied.discard((nx, ny))

    yield from rec(0, 0, 0, 0, 0, 0, 0)


def enumerate_walks(fam: WalkFamily, n_max: int, limit: int = DFS_LIMIT) -> WeightTable:
    """Exact weighted counts by depth-first generation with prefix pruning."""
    if n_max > limit:
        raise LimitError(f"n_max={n_max} exceeds the enumeration guard {limit}")
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    totals = [defaultdict(int) for _ in range(n_max + 1)]
    refined = [defaultdict(lambda: defaultdict(int)) for _ in range(n_max + 1)]
    loop = fam.endpoint == "loop"
    for n, x, y, xmin, xmax, ymax, nu in _walk_dfs(fam, n_max):
        if loop and y != 0:
            continue
        totals[n][nu] += 1
        for key in _refined_keys(fam, x, y, xmin, xmax, ymax):
            refined[n][key][nu] += 1
    return WeightTable(
        family=fam.sides,
        endpoint=fam.endpoint,
        totals=[_to_poly_a(t) for t in totals],
        refined=[{k: _to_poly_a(v) for k, v in r.items()} for r in refined],
    )


# ---------------------------------------------------------------------------
# transfer counter for 2-sided walks
# ---------------------------------------------------------------------------

def _dp_arrays(n_max: int, a):
    """Arrays ``T[n][i, j(, nu)]`` and ``R[n][i, j(, nu)]`` of weighted counts.

    With ``a is None`` a trailing axis indexes the number of surface steps;
    otherwise entries are exact numbers with ``a`` already applied.
    """
    symbolic = a is None

    def blank(m):
        shape = (m + 1, m + 1, m + 1) if symbolic else (m + 1, m + 1)
        return np.zeros(shape, dtype=object)

    T = [blank(m) for m in range(n_max + 1)]
    R = [blank(m) for m in range(n_max + 1)]
    for m in range(n_max + 1):
        # case 1: empty walk or W steps only, all along the surface
        if symbolic:
            T[m][m, 0, m] += 1
        else:
            T[m][m, 0] += a ** m
    R[0][0, 0] += 1

    for n in range(n_max):
        Tn, Rn = T[n], R[n]
        nu = slice(0, n + 1)
        idx = (..., nu) if symbolic else (...,)

        # last inflating step N, taken from a walk ending on the top side
        for k in range(0, n_max - n):
            m = n + 1 + k
            if k <= n:
                # then k E steps (stays on top; k == i reaches the NE corner)
                T[m][(slice(0, n + 1 - k), slice(1, n + 2)) + idx] += Tn[(slice(k, n + 1), slice(0, n + 1)) + idx]
                # then all i E steps, recorded as a walk on the right side
                R[m][(0, slice(1, n + 2)) + idx] += Tn[(k, slice(0, n + 1)) + idx]
            if k >= 1:
                # then k W steps along the new top row
                T[m][(slice(k, n + 1 + k), slice(1, n + 2)) + idx] += Tn[(slice(0, n + 1), slice(0, n + 1)) + idx]

        # last inflating step E, taken from a walk ending on the right side;
        # the E step is a surface step exactly when j == 0
        if symbolic:
            Rw = np.zeros((n + 1, n + 1, n + 2), dtype=object)
            Rw[:, :, : n + 1] = Rn
            Rw[:, 0, 1:] = Rn[:, 0, :]
            Rw[:, 0, 0] = 0
            idx = (..., slice(0, n + 2))
        else:
            Rw = Rn.copy()
            Rw[:, 0] = Rn[:, 0] * a
        for k in range(0, n_max - n):
            m = n + 1 + k
            if k > n:
                break
            # then k N steps to the top of the box: NE corner on the top side
            T[m][(0, slice(k, k + n + 1)) + idx] += Rw[(k, slice(0, n + 1)) + idx]
            # then k S steps
            R[m][(slice(k, n + 1 + k), slice(0, n + 1 - k)) + idx] += Rw[(slice(0, n + 1), slice(k, n + 1)) + idx]
            # then k >= 1 N steps, not beyond the top
            if k >= 1:
                R[m][(slice(0, n + 1 - k), slice(k, n + 1 + k)) + idx] += Rw[(slice(k, n + 1), slice(0, n + 1)) + idx]
    return T, R


def _poly_from_nu(vec) -> Poly:
    return Poly({(nu,): int(c) for nu, c in enumerate(vec) if c})


def count_walks_dp(n_max: int, a=None, endpoint: str = "tail",
                   limit: int = DP_LIMIT) -> WeightTable:
    """Weighted counts of 2-sided walks from the last-inflating-step decomposition.

    ``a=None`` keeps ``a`` symbolic; a rational ``a`` gives constant Polys.
    Walks ending at the NE corner are counted once.
    """
    if n_max > limit:
        raise LimitError(f"n_max={n_max} exceeds the transfer-counter guard {limit}")
    if endpoint not in ENDPOINTS:
        raise ValueError(f"endpoint must be one of {ENDPOINTS}")
    if a is not None:
        a = Fraction(a) if not isinstance(a, int) else a
    T, R = _dp_arrays(n_max, a)
    totals, refined = [], []
    for n in range(n_max + 1):
        Tn, Rn = T[n], R[n]
        if endpoint == "loop":
            tot = Rn[:, 0].sum(axis=0) + Tn[:, 0].sum(axis=0) - Tn[0, 0]
        else:
            tot = Rn.sum(axis=(0, 1)) + Tn.sum(axis=(0, 1)) - Tn[0].sum(axis=0)
        ref = {}
        for side, arr in (("R", Rn), ("T", Tn)):
            for i in range(n + 1):
                for j in range(n + 1):
                    if endpoint == "loop" and j:
                        continue
                    val = arr[i, j]
                    if a is None:
                        if any(val):
                            ref[(side, i, j)] = _poly_from_nu(val)
                    elif val:
                        ref[(side, i, j)] = Poly(val)
        totals.append(_poly_from_nu(tot) if a is None else Poly(tot))
        refined.append(ref)
    return WeightTable("two_sided", endpoint, totals, refined)


# ---------------------------------------------------------------------------
# heights
# ---------------------------------------------------------------------------

@dataclass
class HeightTable:
    """Per-length weighted count and sums of endpoint and maximum heights.

    ``exact`` tables hold integers/rationals.  Inexact (float) tables from the
    long directed-model runs hold counts and sums divided by ``growth**n``;
    the means are unaffected.
    """

    counts: list
    endpoint_sums: list
    max_sums: list
    exact: bool = True
    growth: float = 1.0
    label: str = ""

    @property
    def n_max(self) -> int:
        return len(self.counts) - 1

    def _mean(self, sums) -> list:
        out = []
        for c, s in zip(self.counts, sums):
            if not c:
                out.append(None)
            elif self.exact:
                out.append(Fraction(s) / c)
            else:
                out.append(s / c)
        return out

    @property
    def mean_endpoint(self) -> list:
        return self._mean(self.endpoint_sums)

    @property
    def mean_max(self) -> list:
        return self._mean(self.max_sums)

    def float_means(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """``(n, <e_n>, <h_n>)`` over lengths with a non-zero count."""
        ns, es, hs = [], [], []
        for n, (e, h) in enumerate(zip(self.mean_endpoint, self.mean_max)):
            if e is not None:
                ns.append(n)
                es.append(float(e))
                hs.append(float(h))
        return np.array(ns), np.array(es), np.array(hs)


def _dfs_heights(fam: WalkFamily, n_max: int, a) -> HeightTable:
    counts = [0] * (n_max + 1)
    esum = [0] * (n_max + 1)
    hsum = [0] * (n_max + 1)
    for n, x, y, xmin, xmax, ymax, nu in _walk_dfs(fam, n_max):
        if fam.endpoint == "loop" and y:
            continue
        w = a ** nu
        counts[n] += w
        esum[n] += w * y
        hsum[n] += w * ymax
    return HeightTable(counts, esum, hsum, label=f"{fam.sides} {fam.endpoint}s")


def _dp_heights(n_max: int, a, endpoint: str) -> HeightTable:
    T, R = _dp_arrays(n_max, a)
    counts, esum, hsum = [], [], []
    for n in range(n_max + 1):
        Tn, Rn = T[n], R[n]
        i = np.arange(n + 1).reshape(-1, 1)
        j = np.arange(n + 1).reshape(1, -1)
        if endpoint == "loop":
            c = Rn[:, 0].sum() + Tn[:, 0].sum() - Tn[0, 0]
            e = 0
            h = (Rn[:, 0] * np.arange(n + 1)).sum()
        else:
            c = Rn.sum() + Tn.sum() - Tn[0].sum()
            e = (Rn * j).sum() + (Tn * j).sum() - (Tn[0] * j[0]).sum()
            h = (Rn * (i + j)).sum() + (Tn * j).sum() - (Tn[0] * j[0]).sum()
        counts.append(c)
        esum.append(e)
        hsum.append(h)
    return HeightTable(counts, esum, hsum, label=f"two_sided {endpoint}s")


def height_statistics(fam: WalkFamily, n_max: int, a=1) -> HeightTable:
    """Exact endpoint- and maximum-height sums of ``fam`` walks up to ``n_max``.

    2-sided walks use the transfer counter (maximum height is ``i + j`` on
    the E side and ``j`` on the N side); other families use enumeration.
    """
    a = Fraction(a) if not isinstance(a, int) else a
    if fam.sides == "two_sided":
        if n_max > DP_LIMIT:
            raise LimitError(f"n_max={n_max} exceeds the transfer-counter guard {DP_LIMIT}")
        return _dp_heights(n_max, a, fam.endpoint)
    if n_max > DFS_LIMIT:
        raise LimitError(f"n_max={n_max} exceeds the enumeration guard {DFS_LIMIT}")
    return _dfs_heights(fam, n_max, a)
