"""Unit-distance counting: exact algebraic, fast grid-hashed float, the
square-grid baseline, and two-squares representation counts.

The exact counter never makes a floating-point decision: coarse interval
boxes may only rule a pair out, and surviving pairs are decided by the
symbolic identity |difference|^2 = 1 in the field.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .errors import BoxTooSmall, ParseError, TooLargeEps
from .numberfield import CMStructure, FieldElement, NumberField, abs_sq

# neighbor-cell offsets for cell size 1: 21 cells cover the unit annulus
_HALF_OFFSETS = ((0, 1), (0, 2), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2),
                 (2, -1), (2, 0), (2, 1))


@dataclass
class PlanarFloatSet:
    """Plain float points with an annulus tolerance."""

    points: "object"   # (n, 2) float ndarray
    eps: float

    def __post_init__(self):
        import numpy as np

        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ParseError("points must be an (n, 2) array")
        if not np.isfinite(pts).all():
            raise ParseError("points contain NaN or infinity")
        self.points = pts
        if self.eps < 0:
            raise ValueError("eps must be nonnegative")


@dataclass
class DistanceCensus:
    unit_pairs: int
    method: str                   # "exact" | "hashed" | "brute"
    n_points: int
    eps: Optional[float] = None
    runtime_ms: float = 0.0
    duplicate_pairs: int = 0
    warnings: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        out = {
            "unit_pairs": self.unit_pairs,
            "method": self.method,
            "n_points": self.n_points,
            "eps": self.eps,
            "runtime_ms": round(self.runtime_ms, 3),
        }
        if self.duplicate_pairs:
            out["duplicate_pairs"] = self.duplicate_pairs
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out


def unit_pair_indices(points, cm: CMStructure) -> List[Tuple[int, int]]:
    """Index pairs (i < j) with |x_i - x_j| = 1, decided symbolically.

    A low-precision coordinate key prunes pairs: the squared float distance
    carries a rigorous error bound, so pruning cannot drop a true pair, and
    every surviving pair is decided by abs_sq(x - y) == 1 exactly.
    """
    import numpy as np

    pts = list(getattr(points, "exact_points", points))
    field = cm.field
    one = field.one()
    rep = cm.pair_reps[0]
    boxes = [z.embed(rep, 40) for z in pts]
    n = len(pts)
    if n < 2:
        return []
    xs = np.array([float(b.re.midpoint()) for b in boxes])
    ys = np.array([float(b.im.midpoint()) for b in boxes])
    # |fl(d^2) - d^2| <= ~8u M^2 per IEEE754 plus the 2^-40 box widths;
    # inflate generously, the margin only affects pruning efficiency
    m = float(max(np.max(np.abs(xs)), np.max(np.abs(ys)), 1.0))
    margin = 1e-6 + 64.0 * m * m * 2.0 ** -40
    out = []
    block = 4096
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        for j0 in range(i0, n, block):
            j1 = min(j0 + block, n)
            dx = xs[i0:i1, None] - xs[None, j0:j1]
            dy = ys[i0:i1, None] - ys[None, j0:j1]
            close = np.abs(dx * dx + dy * dy - 1.0) <= margin
            if i0 == j0:
                close = np.triu(close, k=1)
            for ii, jj in zip(*np.nonzero(close)):
                i, j = i0 + int(ii), j0 + int(jj)
                d = boxes[i] - boxes[j]
                m2 = d.abs_sq()
                if m2.hi < 1 or m2.lo > 1:
                    continue
                if abs_sq(pts[i] - pts[j], cm) == one:
                    out.append((i, j))
    return out


def count_exact(points, cm: CMStructure) -> DistanceCensus:
    """Unordered pairs with |x - y| = 1 (symbolic; see unit_pair_indices)."""
    t0 = time.perf_counter()
    pts = list(getattr(points, "exact_points", points))
    pairs = unit_pair_indices(pts, cm)
    ms = (time.perf_counter() - t0) * 1000
    return DistanceCensus(unit_pairs=len(pairs), method="exact",
                          n_points=len(pts), runtime_ms=ms)


def _pair_distances_ok(xl, yl, xr, yr, eps):
    import numpy as np

    dx = xl - xr
    dy = yl - yr
    d = np.sqrt(dx * dx + dy * dy)
    return np.abs(d - 1.0) <= eps


def count_float(ps: PlanarFloatSet, method: str = "hashed") -> DistanceCensus:
    """Pairs with | |x-y| - 1 | <= eps among float points.

    "hashed" buckets points into unit cells so each point only meets the
    <= 21 cells its annulus can intersect; "brute" is the blockwise O(n^2)
    reference.  Both evaluate the identical float expression, so they
    agree exactly.
    """
    import numpy as np

    if ps.eps >= 0.1:
        raise TooLargeEps(f"eps = {ps.eps} >= 0.1")
    t0 = time.perf_counter()
    pts = ps.points
    n = len(pts)
    warnings = []
    dup = _duplicate_pairs(pts)
    if dup:
        warnings.append(f"{dup} coincident point pairs (distance 0, never unit)")
    if method == "brute":
        count = _count_brute(pts, ps.eps)
    elif method == "hashed":
        count = _count_hashed(pts, ps.eps)
    else:
        raise ValueError(f"unknown method {method!r}")
    ms = (time.perf_counter() - t0) * 1000
    return DistanceCensus(unit_pairs=int(count), method=method, n_points=n,
                          eps=ps.eps, runtime_ms=ms, duplicate_pairs=dup,
                          warnings=tuple(warnings))


def _duplicate_pairs(pts) -> int:
    import numpy as np

    view = np.ascontiguousarray(pts).view([("x", float), ("y", float)]).ravel()
    _, counts = np.unique(view, return_counts=True)
    return int(sum(c * (c - 1) // 2 for c in counts if c > 1))


def _count_brute(pts, eps, block: int = 2048) -> int:
    import numpy as np

    n = len(pts)
    x = pts[:, 0]
    y = pts[:, 1]
    total = 0
    for i0 in range(0, n, block):
        i1 = min(i0 + block, n)
        for j0 in range(i0, n, block):
            j1 = min(j0 + block, n)
            ok = _pair_distances_ok(x[i0:i1, None], y[i0:i1, None],
                                    x[None, j0:j1], y[None, j0:j1], eps)
            if i0 == j0:
                ok = np.triu(ok, k=1)
            total += int(ok.sum())
    return total


def _cross_indices(starts_a, sizes_a, starts_b, sizes_b):
    """Flat index arrays for the blockwise cartesian products
    [starts_a[t], +sizes_a[t]) x [starts_b[t], +sizes_b[t])."""
    import numpy as np

    m = sizes_a * sizes_b
    total = int(m.sum())
    if total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    block = np.repeat(np.arange(len(m)), m)
    excl = np.concatenate(([0], np.cumsum(m)[:-1]))
    within = np.arange(total, dtype=np.int64) - excl[block]
    nb = sizes_b[block]
    left = starts_a[block] + within // nb
    right = starts_b[block] + within % nb
    return left, right


def _count_hashed(pts, eps) -> int:
    import numpy as np

    n = len(pts)
    if n < 2:
        return 0
    cells = np.floor(pts).astype(np.int64)
    # pack cell coords into one int64 key (coordinates fit in 31 bits)
    shift = np.int64(1) << np.int64(31)
    base = np.int64(1) << np.int64(30)
    key = (cells[:, 0] + base) * shift + (cells[:, 1] + base)
    order = np.argsort(key, kind="stable")
    skey = key[order]
    x = pts[order, 0]
    y = pts[order, 1]
    starts = np.flatnonzero(np.concatenate(([True], skey[1:] != skey[:-1])))
    sizes = np.diff(np.concatenate((starts, [n])))
    ukeys = skey[starts]
    total = 0

    def tally(left, right, triangular=False):
        if len(left) == 0:
            return 0
        if triangular:
            keep = left < right
            left, right = left[keep], right[keep]
        dx = x[left] - x[right]
        dy = y[left] - y[right]
        d = np.sqrt(dx * dx + dy * dy)
        return int((np.abs(d - 1.0) <= eps).sum())

    # same-cell pairs (i < j inside each cell)
    multi = sizes > 1
    total += tally(*_cross_indices(starts[multi], sizes[multi],
                                   starts[multi], sizes[multi]),
                   triangular=True)

    # directed neighbor offsets
    for dx_c, dy_c in _HALF_OFFSETS:
        nkey = ukeys + np.int64(dx_c) * shift + np.int64(dy_c)
        pos = np.searchsorted(ukeys, nkey)
        pos_c = np.clip(pos, 0, len(ukeys) - 1)
        match = np.flatnonzero(ukeys[pos_c] == nkey)
        if len(match) == 0:
            continue
        tgt = pos_c[match]
        total += tally(*_cross_indices(starts[match], sizes[match],
                                       starts[tgt], sizes[tgt]))
    return total


# ---------------------------------------------------------------------------
# Square-grid baseline
# ---------------------------------------------------------------------------

@dataclass
class GridResult:
    n: int
    side: int
    m: int                      # squared distance normalized to 1
    r2_in_grid: int             # signed representations realizable in-grid
    predicted_pairs: int
    points: "object"            # (n, 2) floats, scaled by 1/sqrt(m)

    def to_dict(self) -> dict:
        return {"n": self.n, "side": self.side, "m": self.m,
                "r2_in_grid": self.r2_in_grid,
                "predicted_pairs": self.predicted_pairs}


def erdos_grid(n: int) -> GridResult:
    """sqrt(n) x sqrt(n) grid scaled so that a most-represented realizable
    squared distance m becomes 1 (ties toward smaller m)."""
    import numpy as np

    s = math.isqrt(n)
    if s * s != n or s < 2:
        raise ValueError("n must be a perfect square >= 4")
    cap = 2 * (s - 1) * (s - 1)
    best_m, best_r2 = None, -1
    for m in range(1, cap + 1):
        r2 = _r2_in_grid(m, s - 1)
        if r2 > best_r2:
            best_m, best_r2 = m, r2
    predicted = _predicted_grid_pairs(best_m, s)
    xs, ys = np.meshgrid(np.arange(s), np.arange(s))
    pts = np.stack([xs.ravel(), ys.ravel()], axis=1).astype(float)
    pts /= math.sqrt(best_m)
    return GridResult(n=n, side=s, m=best_m, r2_in_grid=best_r2,
                      predicted_pairs=predicted, points=pts)


def _r2_in_grid(m: int, amax: int) -> int:
    """Signed representations m = a^2 + b^2 with |a|, |b| <= amax."""
    count = 0
    for a in range(-amax, amax + 1):
        rest = m - a * a
        if rest < 0:
            continue
        b = math.isqrt(rest)
        if b * b == rest and b <= amax:
            count += 2 if b > 0 else 1
    return count


def _predicted_grid_pairs(m: int, s: int) -> int:
    total = 0
    for a in range(-(s - 1), s):
        rest = m - a * a
        if rest < 0:
            continue
        b = math.isqrt(rest)
        if b * b == rest and b <= s - 1:
            for bb in ({b, -b} if b else {0}):
                total += (s - abs(a)) * (s - abs(bb))
    return total // 2


# ---------------------------------------------------------------------------
# Two-squares representation counting
# ---------------------------------------------------------------------------

def r2_count_rational(alpha: int) -> int:
    """Ordered pairs (x, y) in Z^2 with x^2 + y^2 = alpha."""
    if alpha < 0:
        return 0
    if alpha == 0:
        return 1
    s = math.isqrt(alpha)
    count = 0
    for xv in range(-s, s + 1):
        rest = alpha - xv * xv
        t = math.isqrt(rest)
        if t * t == rest:
            count += 2 if t > 0 else 1
    return count


def r2_count(F: NumberField, alpha: FieldElement, box: Fraction) -> int:
    """Ordered pairs (x, y) in O_F^2 with x^2 + y^2 = alpha, F totally real.

    All solutions satisfy |sigma(x)|, |sigma(y)| <= sqrt(sigma(alpha)), so
    box >= max_sigma sqrt(sigma(alpha)) makes the lattice search complete;
    smaller boxes are rejected (BoxTooSmall) rather than risking an
    undercount.
    """
    from .enumeration import real_lattice_points_in_box

    if not F.is_totally_real():
        raise ValueError("r2_count needs a totally real field")
    box = Fraction(box)
    if F.n == 1:
        a = (alpha.power_coords()[0] if isinstance(alpha, FieldElement)
             else Fraction(alpha))
        if a.denominator != 1:
            return 0
        if a > box * box:
            raise BoxTooSmall(f"box^2 = {box * box} < alpha = {a}")
        return r2_count_rational(int(a))

    # completeness precondition: sigma(alpha) <= box^2 in every embedding
    gap = box * box * F.one() - alpha
    for i in range(F.n):
        if _real_sign(gap, i) < 0:
            raise BoxTooSmall(
                f"box = {box} is below sqrt(sigma(alpha)) in embedding {i}")
    # negative alpha in any embedding means no solutions
    for i in range(F.n):
        if _real_sign(alpha, i) < 0:
            return 0

    basis = [F.element([Fraction(1 if k == j else 0) for k in range(F.n)])
             for j in range(F.n)]
    pts = real_lattice_points_in_box(basis, box)
    squares = {}
    for y in pts:
        sq = y * y
        squares.setdefault(tuple(sq.coords), []).append(y)
    count = 0
    for x in pts:
        need = alpha - x * x
        count += len(squares.get(tuple(need.coords), ()))
    return count


def _real_sign(z: FieldElement, root_index: int) -> int:
    """Sign of the real embedding sigma_i(z), decided exactly."""
    if z.is_zero():
        return 0
    bits = 64
    while True:
        box = z.embed(root_index, bits)
        if box.re.lo > 0:
            return 1
        if box.re.hi < 0:
            return -1
        bits *= 2
