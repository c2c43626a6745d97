"""Deterministic, parallel classification and escape-time rasterizer.

Each pixel is seeded at its cell center and classified with exactly the
same rules as :func:`expbouquet.classify.classify_point` (respectively
:func:`expbouquet.fatoufn.fatou_classify` for the drift map), evaluated
in vectorized form: the kernel keeps per-pixel magnitude towers as
(level, mantissa) arrays whose updates mirror ``TowerReal`` operation by
operation.  The grid is cut into fixed horizontal blocks that are pure
functions of the render description, so output bytes are identical
across runs, worker counts and scheduling orders.
"""

from __future__ import annotations

import math
import multiprocessing
import os
from dataclasses import dataclass

import numpy as np

from .classify import ATTRACTING_BAND, CYCLE_DETECT_TOL
from .expmap import MAG_GUARD, RE_OVERFLOW, _TINY, Params, max_modulus_iterates
from .fatoufn import BOUNDED_BOX, DRIFT_THRESHOLD, DRIFT_WINDOW, _RE_UNDERFLOW
from .towerfloat import LN_H

__all__ = [
    "RenderSpec",
    "ImageGrid",
    "default_viewport",
    "render",
    "classify_grid",
    "escape_fraction",
    "write_pgm",
    "classification_csv",
    "TAG_NAMES",
]

# Pixel tag codes (values index the classification color table).
TAG_FAST = 0
TAG_SLOW = 1
TAG_BOUNDED = 2
TAG_BASIN = 3
TAG_UNDECIDED = 4

TAG_NAMES = ("FastEscaping", "EscapingSlow", "NonEscapingBounded", "Basin", "Undecided")

_CLASS_COLORS = np.array([0, 96, 192, 255, 128], dtype=np.uint8)

_NAN_C = complex(math.nan, math.nan)


def default_viewport(map_kind: str, a: complex = 0j) -> tuple[float, float, float, float]:
    """Documented default viewports per map and parameter."""
    if map_kind == "exponential" and a == -2:
        return (-4.0, 8.0, -8.0, 8.0)
    return (-4.0, 10.0, -12.0, 12.0)


@dataclass(frozen=True)
class RenderSpec:
    """Full description of one raster: map, viewport, grid and coloring."""

    map_kind: str  # "exponential" | "fatou"
    a: complex = 0j
    viewport: tuple[float, float, float, float] | None = None
    width: int = 800
    height: int = 800
    max_iter: int = 60
    bailout: float = 1e10
    coloring: str = "classification"  # | "escape-count"

    def __post_init__(self) -> None:
        if self.map_kind not in ("exponential", "fatou"):
            raise ValueError(f"unknown map kind {self.map_kind!r}")
        if self.coloring not in ("classification", "escape-count"):
            raise ValueError(f"unknown coloring {self.coloring!r}")
        if self.viewport is None:
            object.__setattr__(self, "viewport", default_viewport(self.map_kind, self.a))
        x0, x1, y0, y1 = self.viewport
        if not (x0 < x1 and y0 < y1):
            raise ValueError("viewport must satisfy x_min < x_max, y_min < y_max")
        if self.width < 1 or self.height < 1 or self.width * self.height > 10**8:
            raise ValueError("grid must be nonempty with width*height <= 1e8")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")
        if not 0.0 < self.bailout <= MAG_GUARD:
            raise ValueError("bailout must be in (0, 1e15]")
        object.__setattr__(self, "a", complex(self.a))


@dataclass(frozen=True)
class ImageGrid:
    """Row-major byte raster (top row first)."""

    width: int
    height: int
    pixels: bytes

    def __post_init__(self) -> None:
        if len(self.pixels) != self.width * self.height:
            raise ValueError("pixel buffer size does not match dimensions")


def _block_rows(spec: RenderSpec) -> int:
    """Rows per work block: fixed by the render description alone (never by worker count)."""
    per_pixel_step = 40  # bytes of orbit/tower history per pixel per step
    budget = 3 * 10**8
    rows = budget // max(1, spec.width * (spec.max_iter + 11) * per_pixel_step)
    return int(max(1, min(64, rows)))


def _pixel_centers(spec: RenderSpec, y_start: int, y_stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Cell-center seed coordinates for rows [y_start, y_stop)."""
    x0, x1, y0, y1 = spec.viewport
    dx = (x1 - x0) / spec.width
    dy = (y1 - y0) / spec.height
    xs = x0 + (np.arange(spec.width, dtype=np.float64) + 0.5) * dx
    ys = y1 - (np.arange(y_start, y_stop, dtype=np.float64) + 0.5) * dy
    return xs, ys


def _exp_block(spec: RenderSpec, y_start: int, y_stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Classify one row block of an exponential-map raster.

    Returns (tags, exits) with shape (rows, width); exit is -1 where the
    orbit never crossed the bailout within ``max_iter`` steps.
    """
    a = spec.a
    abs_a = abs(a)
    radius = Params(a).radius
    depth = spec.max_iter
    total = depth + 10
    bailout = spec.bailout

    xs, ys = _pixel_centers(spec, y_start, y_stop)
    z0 = (xs[None, :] + 1j * ys[:, None]).reshape(-1)
    npix = z0.size

    # Orbit history for cycle detection; tower history for escape tests.
    zhist = np.full((total + 1, npix), _NAN_C, dtype=np.complex128)
    absz = np.full((total + 1, npix), np.nan, dtype=np.float64)
    lvh = np.zeros((depth + 1, npix), dtype=np.int64)
    mth = np.zeros((depth + 1, npix), dtype=np.float64)

    cur = z0.astype(np.complex128)
    zhist[0] = cur
    absz[0] = np.abs(cur)
    model = np.zeros(npix, dtype=bool)  # pixel switched to the growth model

    with np.errstate(all="ignore"):
        big0 = absz[0] >= MAG_GUARD
        lvh[0] = np.where(big0, 1, 0)
        mth[0] = np.where(big0, np.log(np.maximum(absz[0], 1.0)), np.maximum(absz[0], _TINY))

        for n in range(1, total + 1):
            zprev = cur
            az = absz[n - 1]
            # Switch rules, in the same priority order as the scalar track:
            # magnitude past the bailout (or the tower guard) first, then
            # real part past the direct-exp range.
            cross = ~model & ((az > bailout) | (az >= MAG_GUARD))
            model = model | cross
            reov = ~model & (zprev.real > RE_OVERFLOW)
            model = model | reov
            direct = ~model

            w = np.exp(zprev) + a
            cur = np.where(direct, w, _NAN_C)
            zhist[n] = cur
            absz[n] = np.abs(cur)

            if n > depth:
                continue  # towers only feed escape tests, which stop at depth

            plv = lvh[n - 1]
            pmt = mth[n - 1]
            # exp(value) + |a| on towers, branch for branch as in TowerReal:
            #   level >= 1          -> (level+1, m)
            #   level 0, m < ln(H)  -> from_real(exp(m) + |a|)
            #   level 0, m <= 700   -> (1, m + log1p(|a| exp(-m)))
            #   level 0, m >  700   -> (1, m)
            val_small = np.exp(np.minimum(pmt, LN_H)) + abs_a
            big_small = val_small >= MAG_GUARD
            lv_small = np.where(big_small, 1, 0)
            mt_small = np.where(big_small, np.log(np.maximum(val_small, 1.0)), val_small)
            corr = np.log1p(abs_a * np.exp(-np.minimum(pmt, RE_OVERFLOW)))
            mt_mid = np.where(pmt > RE_OVERFLOW, pmt, pmt + corr)
            lv_grow = np.where(plv >= 1, plv + 1, np.where(pmt < LN_H, lv_small, 1))
            mt_grow = np.where(plv >= 1, pmt, np.where(pmt < LN_H, mt_small, mt_mid))

            azn = absz[n]
            big_n = azn >= MAG_GUARD
            lv_dir = np.where(big_n, 1, 0)
            mt_dir = np.where(big_n, np.log(np.maximum(azn, 1.0)), np.maximum(azn, _TINY))

            lvh[n] = np.where(direct, lv_dir, lv_grow)
            mth[n] = np.where(direct, mt_dir, mt_grow)
            if reov.any():
                # log-magnitude of the unrepresentable exp(z) is exactly Re z
                lvh[n][reov] = 1
                mth[n][reov] = zprev.real[reov]

        # --- escape scan over steps 0..depth (strict tower > bailout) -------
        if bailout >= MAG_GUARD:
            bail_lv, bail_mt = 1, LN_H
        else:
            bail_lv, bail_mt = 0, bailout
        crossed = (lvh > bail_lv) | ((lvh == bail_lv) & (mth > bail_mt))
        escaped = crossed.any(axis=0)
        exits = np.where(escaped, np.argmax(crossed, axis=0), -1).astype(np.int64)

        tags = np.full(npix, TAG_BOUNDED, dtype=np.uint8)

        # --- fast-escape offset search on escaped pixels ---------------------
        esc_idx = np.nonzero(escaped)[0]
        if esc_idx.size:
            m_towers = max_modulus_iterates(a, radius, depth)
            m_lv = np.array([t.level for t in m_towers], dtype=np.int64)
            m_mt = np.array([t.mantissa for t in m_towers], dtype=np.float64)
            lv_esc = lvh[:, esc_idx]
            mt_esc = mth[:, esc_idx]
            remaining = np.arange(esc_idx.size)
            found = np.full(esc_idx.size, -1, dtype=np.int64)
            for ell in range(max(0, depth - 2)):
                if remaining.size == 0:
                    break
                span = depth - ell + 1
                olv = lv_esc[ell : ell + span][:, remaining]
                omt = mt_esc[ell : ell + span][:, remaining]
                dominates = (olv > m_lv[:span, None]) | (
                    (olv == m_lv[:span, None]) & (omt >= m_mt[:span, None])
                )
                ok = dominates.all(axis=0)
                found[remaining[ok]] = ell
                remaining = remaining[~ok]
            tags[esc_idx] = np.where(found >= 0, TAG_FAST, TAG_SLOW)

        # --- basin detection on bounded pixels -------------------------------
        bounded = ~escaped
        if bounded.any():
            attract_cut = math.log1p(-ATTRACTING_BAND)
            assigned = np.zeros(npix, dtype=bool)
            for q in range(1, min(32, depth) + 1):
                close = (
                    bounded
                    & ~assigned
                    & (np.abs(zhist[depth] - zhist[depth - q]) < CYCLE_DETECT_TOL)
                    & (np.abs(zhist[total] - zhist[total - q]) < CYCLE_DETECT_TOL)
                )
                if not close.any():
                    continue
                # Ascending sequential window sum, matching the scalar
                # classifier's summation order term for term.
                acc = zhist[total - q].real.copy()
                for i in range(total - q + 1, total):
                    acc = acc + zhist[i].real
                close &= acc < attract_cut
                tags[close] = TAG_BASIN
                assigned |= close

    rows = y_stop - y_start
    return tags.reshape(rows, spec.width), exits.reshape(rows, spec.width)


def _fatou_block(spec: RenderSpec, y_start: int, y_stop: int) -> tuple[np.ndarray, np.ndarray]:
    """Classify one row block of a drift-map raster."""
    depth = spec.max_iter
    xs, ys = _pixel_centers(spec, y_start, y_stop)
    z = (xs[None, :] + 1j * ys[:, None]).reshape(-1).astype(np.complex128)
    npix = z.size

    run = np.zeros(npix, dtype=np.int64)
    exits = np.full(npix, -1, dtype=np.int64)
    undecided = np.zeros(npix, dtype=bool)
    active = np.ones(npix, dtype=bool)
    max_abs = np.abs(z)

    with np.errstate(all="ignore"):
        for n in range(1, depth + 1):
            under = active & (z.real < _RE_UNDERFLOW)
            if under.any():
                undecided |= under
                active &= ~under
            if not active.any():
                break
            w = z + 1.0 + np.exp(-z)
            drifting = (w.real > DRIFT_THRESHOLD) & (w.real > z.real)
            run = np.where(active & drifting, run + 1, 0)
            hit = active & (run == DRIFT_WINDOW)
            if hit.any():
                exits[hit] = n - DRIFT_WINDOW + 1
                active &= ~hit
            z = np.where(active, w, z)
            max_abs = np.where(active, np.maximum(max_abs, np.abs(z)), max_abs)

    tags = np.full(npix, TAG_UNDECIDED, dtype=np.uint8)
    escaped = exits >= 0
    tags[escaped] = TAG_SLOW
    tags[~escaped & ~undecided & (max_abs <= BOUNDED_BOX)] = TAG_BOUNDED
    rows = y_stop - y_start
    return tags.reshape(rows, spec.width), exits.reshape(rows, spec.width)


def _classify_block(args: tuple[RenderSpec, int, int]) -> tuple[int, np.ndarray, np.ndarray]:
    spec, y_start, y_stop = args
    if spec.map_kind == "exponential":
        tags, exits = _exp_block(spec, y_start, y_stop)
    else:
        tags, exits = _fatou_block(spec, y_start, y_stop)
    return y_start, tags, exits


def classify_grid(spec: RenderSpec, workers: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-pixel classification tags and first-exit steps for a raster.

    Returns (tags, exits) of shape (height, width); exits hold -1 where
    the orbit never crossed the bailout.  ``workers`` affects speed only,
    never output bytes.
    """
    if workers is None:
        workers = os.cpu_count() or 1
    rows = _block_rows(spec)
    blocks = [(spec, y, min(y + rows, spec.height)) for y in range(0, spec.height, rows)]
    tags = np.empty((spec.height, spec.width), dtype=np.uint8)
    exits = np.empty((spec.height, spec.width), dtype=np.int64)
    if workers <= 1 or len(blocks) == 1:
        results = map(_classify_block, blocks)
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(workers, len(blocks))) as pool:
            results = pool.map(_classify_block, blocks, chunksize=1)
    for y_from, btags, bexits in results:
        tags[y_from : y_from + btags.shape[0]] = btags
        exits[y_from : y_from + bexits.shape[0]] = bexits
    return tags, exits


def render(spec: RenderSpec, workers: int | None = None) -> ImageGrid:
    """Rasterize ``spec`` to bytes; identical output for any worker count."""
    tags, exits = classify_grid(spec, workers)
    if spec.coloring == "classification":
        img = _CLASS_COLORS[tags]
    else:
        # Escape count: 255*n/max_iter rounded half to even; never-exiting
        # pixels saturate at 255.
        scaled = np.rint(255.0 * exits / spec.max_iter)
        scaled = np.where(exits < 0, 255.0, scaled)
        img = np.clip(scaled, 0.0, 255.0).astype(np.uint8)
    return ImageGrid(width=spec.width, height=spec.height, pixels=img.tobytes())


def escape_fraction(spec: RenderSpec, workers: int | None = None) -> float:
    """Fraction of pixels classified as escaping (slow or fast)."""
    tags, _ = classify_grid(spec, workers)
    return float(np.mean((tags == TAG_FAST) | (tags == TAG_SLOW)))


def write_pgm(grid: ImageGrid, path: str) -> None:
    """Write a binary PGM (P5, maxval 255, row-major, top row first)."""
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(grid.pixels)


def classification_csv(spec: RenderSpec, workers: int | None = None) -> str:
    """Per-pixel dump ``x,y,tag,exit`` (exit blank when the orbit never exits)."""
    tags, exits = classify_grid(spec, workers)
    lines = ["x,y,tag,exit"]
    for y in range(spec.height):
        trow = tags[y]
        erow = exits[y]
        for x in range(spec.width):
            e = erow[x]
            lines.append(f"{x},{y},{TAG_NAMES[trow[x]]},{e if e >= 0 else ''}")
    return "\n".join(lines) + "\n"
