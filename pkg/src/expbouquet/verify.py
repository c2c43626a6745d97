"""Self-check suites behind the ``verify`` CLI subcommand.

Each suite returns a list of ``(name, ok, detail)`` rows, one row per
check; the CLI prints one line per row and exits 0 iff every row passed.
Pseudo-random checks draw from a generator seeded by the environment
variable ``EXPBOUQUET_SEED`` (default 0), so runs are reproducible.

The suites mirror the package's acceptance checks: ``tower`` covers the
arithmetic laws of the tower representation, ``maxmod`` the circle
maximum-modulus closed form and its growth bounds, ``lemma7`` the orbit
domination index and the half-plane margin formula, ``semiconj`` the
exponential semiconjugacy of the drift map, ``separation`` hair
endpoints and strip separation, and ``figures`` the reference renders.
"""

from __future__ import annotations

import cmath
import math
import os
import time
from typing import Callable

import numpy as np
import scipy.ndimage

from .classify import find_cycle
from .expmap import Params, eval_map, max_modulus
from .fatoufn import fatou_eval, semiconj_residual
from .render import RenderSpec, escape_fraction, render
from .symbolic import (
    ExternalAddress,
    SeparationConfig,
    endpoint_estimate,
    find_domination_index,
    itinerary,
    real_part_margin,
    separation_index,
)
from .towerfloat import H, TowerReal

Check = tuple[str, bool, str]

#: The five parameters exercised by the maximum-modulus checks.
ORACLE_PARAMS = (-2 + 0j, -1 + 0j, 5 + 3.14j, 2.06 + 1.57j, 1.004 + 2.9j)

#: The four parameters with reference figures.
FIGURE_PARAMS = (-2 + 0j, 5 + 3.14j, 2.06 + 1.57j, 1.004 + 2.9j)

ORACLE_RADII = (math.pi, 4.0, 7.0, 12.0, 20.0)


def _seed() -> int:
    return int(os.environ.get("EXPBOUQUET_SEED", "0") or "0")


def _fmt_complex(a: complex) -> str:
    return f"{a.real:g}{a.imag:+g}i"


def format_check(row: Check) -> str:
    name, ok, detail = row
    line = f"{name}: {'ok' if ok else 'FAIL'}"
    return f"{line} ({detail})" if detail else line


# ---------------------------------------------------------------------------
# tower: arithmetic laws of the level/mantissa representation


def suite_tower(n_values: int = 100_000) -> list[Check]:
    """Round-trip, monotonicity, and ordinary-range laws over seeded values."""
    rng = np.random.default_rng(_seed())
    # Mixed-scale sample: signed log-uniform magnitudes plus a plain
    # uniform band.  Negative values stay above -H (unrepresentable below).
    n_log = n_values - n_values // 4
    u = rng.uniform(-40.0, 700.0, n_log)
    sign = rng.choice(np.array([-1.0, 1.0]), n_log)
    u[sign < 0] = np.minimum(u[sign < 0], 34.0)
    xs = np.concatenate([sign * np.exp(u), rng.uniform(-1e3, 1e3, n_values // 4)])
    rng.shuffle(xs)
    values = xs.tolist()

    t0 = time.perf_counter()
    from_real = TowerReal.from_real
    exp_fn = math.exp
    rt_fail = mono_fail = ord_fail = 0
    prev_x = values[0]
    prev_t = from_real(prev_x)
    prev_e = prev_t.exp()
    for x in values:
        t = from_real(x)
        e = t.exp()
        # Ordinary range: from_real is exact below H, exp agrees with the
        # float exponential while that stays finite.
        if abs(x) < H and t.value() != x:
            ord_fail += 1
        if x <= 700.0:
            ev = e.value()
            if not math.isfinite(ev) or abs(ev - exp_fn(x)) > 1e-12 * exp_fn(x):
                ord_fail += 1
        # Round-trip: ln(exp(t)) recovers t (ln needs a positive value, so
        # stay above the underflow floor of exp).
        if x > -700.0:
            r = e.ln()
            if r.level != t.level or abs(r.mantissa - t.mantissa) > 1e-12 * max(
                1.0, abs(t.mantissa)
            ):
                rt_fail += 1
        # Monotonicity: comparisons follow the float order, and exp never
        # inverts order.  (Strictness can be lost to rounding: distinct
        # inputs near 0 or below the underflow floor share an exponential.)
        want = (x > prev_x) - (x < prev_x)
        if t.cmp(prev_t) != want:
            mono_fail += 1
        elif want != 0 and e.cmp(prev_e) == -want:
            mono_fail += 1
        prev_x, prev_t, prev_e = x, t, e
    dt = time.perf_counter() - t0

    n = len(values)
    return [
        ("tower-roundtrip", rt_fail == 0, f"{rt_fail} failures over {n} values"),
        ("tower-monotone", mono_fail == 0, f"{mono_fail} failures over {n} values"),
        ("tower-ordinary-range", ord_fail == 0, f"{ord_fail} failures over {n} values"),
        ("tower-runtime", dt < 2.0, f"{dt:.3f}s (budget 2s)"),
    ]


# ---------------------------------------------------------------------------
# maxmod: circle maximum against a brute-force oracle, and growth bounds


def circle_max_oracle(a: complex, r: float, n: int = 1 << 18) -> float:
    """Brute-force maximum of ``|e^z + a|`` on ``|z| = r``.

    Dense sampling plus one parabolic refinement of the winning node;
    accurate to ~1e-10 relative, far below the 1e-6 comparison band.
    """
    theta = np.linspace(-math.pi, math.pi, n, endpoint=False)
    u = r * np.cos(theta)
    v = r * np.sin(theta)
    e = np.exp(u)
    re = e * np.cos(v) + a.real
    im = e * np.sin(v) + a.imag
    m2 = re * re + im * im
    k = int(np.argmax(m2))
    f0, f1, f2 = m2[(k - 1) % n], m2[k], m2[(k + 1) % n]
    denom = f0 - 2.0 * f1 + f2
    best = f1
    if denom < 0.0:
        step = theta[1] - theta[0]
        t_star = theta[k] + 0.5 * step * (f0 - f2) / denom
        uu = r * math.cos(t_star)
        vv = r * math.sin(t_star)
        w = complex(math.exp(uu) * math.cos(vv) + a.real, math.exp(uu) * math.sin(vv) + a.imag)
        best = max(best, abs(w) ** 2)
    return math.sqrt(best)


def suite_maxmod() -> list[Check]:
    """Closed-form circle maximum vs. brute force, then growth inequalities."""
    rows: list[Check] = []
    t0 = time.perf_counter()
    for a in ORACLE_PARAMS:
        worst = 0.0
        for r in ORACLE_RADII:
            got = max_modulus(a, r)
            want = circle_max_oracle(a, r)
            worst = max(worst, abs(got - want) / want)
        rows.append(
            (
                f"maxmod-oracle[a={_fmt_complex(a)}]",
                worst < 1e-6,
                f"max rel err {worst:.3e} over 5 radii",
            )
        )
    dt = time.perf_counter() - t0
    rows.append(("maxmod-oracle-runtime", dt < 5.0, f"{dt:.3f}s (budget 5s)"))

    t0 = time.perf_counter()
    for a in ORACLE_PARAMS:
        big = 3.0 + 2.0 * abs(a)
        ok = True
        for k in range(101):
            r = big + k
            m = max_modulus(a, r)
            if not (m > r and m - r >= math.exp(r - 1.0) - r):
                ok = False
                break
        rows.append(
            (
                f"maxmod-growth[a={_fmt_complex(a)}]",
                ok,
                "M(r) > r and M(r)-r >= e^(r-1)-r on 101 radii",
            )
        )
    dt = time.perf_counter() - t0
    rows.append(("maxmod-growth-runtime", dt < 1.0, f"{dt:.3f}s (budget 1s)"))
    return rows


# ---------------------------------------------------------------------------
# lemma7: orbit domination index and half-plane margin formula


def suite_growth_domination() -> list[Check]:
    """Domination indices for a=-2 and the separating-margin formula."""
    rows: list[Check] = []
    p = Params(a=-2 + 0j)

    t0 = time.perf_counter()
    cycle, _ = find_cycle(p, -1.8 + 0j, 1)
    fp = cycle[0]
    kappas = (1e2, 1e3, 1e4, 3e4, 1e5)
    ns = [find_domination_index(p, 10 + 0j, fp, k, depth=64) for k in kappas]
    dt = time.perf_counter() - t0
    rows.append(("domination[kappa=1000]", ns[1] == 1, f"n={ns[1]}"))
    rows.append(("domination[kappa=30000]", ns[3] == 2, f"n={ns[3]}"))
    finite = all(n is not None for n in ns)
    monotone = finite and all(ns[i] <= ns[i + 1] for i in range(len(ns) - 1))
    rows.append(
        (
            "domination-monotone",
            monotone,
            "n(kappa)=" + ",".join(str(n) for n in ns) + " over kappa=1e2..1e5",
        )
    )
    rows.append(("domination-runtime", dt < 1.0, f"{dt:.3f}s (budget 1s)"))

    t0 = time.perf_counter()
    margin = real_part_margin(p, SeparationConfig(c=3.0, delta=2.0 * math.pi + 1.0))
    rows.append(("margin-exact", margin == 13.0, f"margin={margin!r} (want 13.0)"))
    rng = np.random.default_rng(_seed())
    bad = 0
    for _ in range(100):
        a = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        cfg = SeparationConfig(
            c=float(rng.uniform(1.0, 20.0)),
            delta=2.0 * math.pi + float(rng.uniform(0.0, 20.0)),
            kappa=float(rng.uniform(0.1, 10.0)),
        )
        q = Params(a=a)
        if not real_part_margin(q, cfg) >= q.radius + 6.0:
            bad += 1
    dt = time.perf_counter() - t0
    rows.append(("margin-dominates-radius", bad == 0, f"{bad} failures over 100 configs"))
    rows.append(("margin-runtime", dt < 1.0, f"{dt:.3f}s (budget 1s)"))
    return rows


# ---------------------------------------------------------------------------
# semiconj: the drift map's exponential semiconjugacy


def suite_semiconj() -> list[Check]:
    """Scaled residual, 2*pi*i periodicity, and odd-multiple fixed points."""
    rows: list[Check] = []
    rng = np.random.default_rng(_seed())
    pts = rng.uniform(-5.0, 5.0, (10_000, 2))

    t0 = time.perf_counter()
    worst = 0.0
    for x, y in pts:
        z = complex(x, y)
        scale = max(1.0, abs(cmath.exp(-fatou_eval(z))))
        worst = max(worst, semiconj_residual(z) / scale)
    rows.append(("semiconj-residual", worst < 1e-12, f"max scaled residual {worst:.3e}"))

    two_pi_i = complex(0.0, 2.0 * math.pi)
    worst = 0.0
    for x, y in pts[:2000]:
        z = complex(x, y)
        worst = max(worst, abs(fatou_eval(z + two_pi_i) - (fatou_eval(z) + two_pi_i)))
    rows.append(("semiconj-periodicity", worst < 1e-12, f"max defect {worst:.3e}"))

    worst = 0.0
    for k in range(-2, 3):
        z = complex(0.0, (2 * k + 1) * math.pi)
        worst = max(worst, abs(fatou_eval(z) - z))
    rows.append(("semiconj-fixed-points", worst < 1e-12, f"max defect {worst:.3e} for |k|<=2"))
    dt = time.perf_counter() - t0
    rows.append(("semiconj-runtime", dt < 2.0, f"{dt:.3f}s (budget 2s)"))
    return rows


# ---------------------------------------------------------------------------
# separation: hair endpoints, itineraries, and strip separation


def _bisect_real_fixed_point(a_real: float, lo: float, hi: float) -> float:
    """Bisection root of ``e^x + a = x`` on ``[lo, hi]`` (sign change assumed)."""
    g = lambda x: math.exp(x) + a_real - x
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm < 0.0) == (glo < 0.0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


SEPARATION_ADDRESSES = (
    ExternalAddress((), (0,)),
    ExternalAddress((), (1,)),
    ExternalAddress((0, 1), (0,)),
    ExternalAddress((0, -1), (0,)),
    ExternalAddress((0, 0, 2), (0,)),
)


def suite_separation() -> list[Check]:
    """Endpoint oracles, itinerary prefixes, and pairwise separation indices."""
    rows: list[Check] = []
    p = Params(a=-2 + 0j)

    t0 = time.perf_counter()
    ep0 = endpoint_estimate(p, SEPARATION_ADDRESSES[0], tol=1e-8)
    want = _bisect_real_fixed_point(-2.0, 1.0, 2.0)
    err = abs(ep0.z - want)
    rows.append(
        (
            "endpoint-zero-address",
            ep0.converged and err <= 1e-8,
            f"|z - bisection root| = {err:.3e}",
        )
    )

    ep1 = endpoint_estimate(p, SEPARATION_ADDRESSES[1], tol=1e-8)
    defect = abs(eval_map(p.a, ep1.z) - ep1.z)
    rows.append(
        ("endpoint-one-address", ep1.converged and defect < 1e-7, f"|f(z)-z| = {defect:.3e}")
    )
    dt = time.perf_counter() - t0
    rows.append(("endpoint-runtime", dt < 5.0, f"{dt:.3f}s (budget 5s)"))

    t0 = time.perf_counter()
    endpoints = [endpoint_estimate(p, s, tol=1e-8) for s in SEPARATION_ADDRESSES]
    bad = sum(
        1
        for ep in endpoints
        if itinerary(p, ep.z, 5) != ep.address.entries(5)
    )
    rows.append(("itinerary-prefixes", bad == 0, f"{bad} mismatches over 5 addresses"))

    bad = 0
    pairs = 0
    for i in range(len(endpoints)):
        for j in range(i + 1, len(endpoints)):
            pairs += 1
            si, sj = SEPARATION_ADDRESSES[i], SEPARATION_ADDRESSES[j]
            expected = next(k for k in range(64) if si.entry(k) != sj.entry(k))
            got = separation_index(p, endpoints[i].z, endpoints[j].z, depth=16)
            if got != expected:
                bad += 1
    rows.append(
        ("pairwise-separation", bad == 0, f"{bad} mismatches over {pairs} pairs")
    )
    dt = time.perf_counter() - t0
    rows.append(("separation-runtime", dt < 5.0, f"{dt:.3f}s (budget 5s)"))
    return rows


# ---------------------------------------------------------------------------
# figures: reference renders (timing, determinism, stability, interleaving)


def _escape_fraction_from_bytes(px: np.ndarray) -> float:
    """Escaping fraction recovered from classification colors (0 and 96)."""
    return float(np.count_nonzero((px == 0) | (px == 96)) / px.size)


def suite_figures(threads: int | None = None) -> list[Check]:
    """Render the four reference parameters and check the figure contracts."""
    rows: list[Check] = []
    workers = threads if threads else 4

    specs = [
        RenderSpec(map_kind="exponential", a=a, width=800, height=800)
        for a in FIGURE_PARAMS
    ]
    t0 = time.perf_counter()
    grids = [render(s, workers=workers) for s in specs]
    dt = time.perf_counter() - t0
    rows.append(
        (
            "figures-timing",
            dt < 30.0,
            f"{dt:.2f}s for four 800x800 renders on {workers} workers (budget 30s)",
        )
    )

    base = grids[0].pixels
    same = all(render(specs[0], workers=w).pixels == base for w in (1, 7))
    rows.append(
        ("figures-identity[a=-2+0i]", same, "byte-identical across 1, 7 workers")
    )

    for spec, grid in zip(specs, grids):
        px800 = np.frombuffer(grid.pixels, dtype=np.uint8)
        small = RenderSpec(
            map_kind=spec.map_kind, a=spec.a, width=400, height=400
        )
        f400 = escape_fraction(small, workers=workers)
        f800 = _escape_fraction_from_bytes(px800)
        diff = abs(f400 - f800)
        rows.append(
            (
                f"figures-escape-fraction[a={_fmt_complex(spec.a)}]",
                diff < 0.02,
                f"|{f400:.5f} - {f800:.5f}| = {diff:.5f}",
            )
        )

    px = np.frombuffer(grids[0].pixels, dtype=np.uint8).reshape(800, 800)
    fast = px == 0
    basin = px == 255
    near_basin = scipy.ndimage.maximum_filter(
        basin.astype(np.uint8), size=17, mode="constant", cval=0
    ).astype(bool)
    cols = np.arange(800)[None, :]
    violations = int(np.count_nonzero(fast & (cols >= 200) & ~near_basin))
    rows.append(
        (
            "figures-interleaving",
            violations == 0,
            f"{violations} FastEscaping pixels outside the left quarter "
            "lack a Basin pixel within Chebyshev distance 8",
        )
    )
    return rows


SUITES: dict[str, Callable[..., list[Check]]] = {
    "tower": suite_tower,
    "maxmod": suite_maxmod,
    "lemma7": suite_growth_domination,
    "semiconj": suite_semiconj,
    "separation": suite_separation,
    "figures": suite_figures,
}


def run_suite(name: str, threads: int | None = None) -> list[Check]:
    """Run one named suite; ``threads`` only affects the figures suite."""
    if name not in SUITES:
        raise ValueError(f"unknown verify suite {name!r}")
    if name == "figures":
        return suite_figures(threads=threads)
    return SUITES[name]()
