"""Boundary restrictions of inner functions as transformations of the line.

When the measure behind a half-plane map is singular, the map is inner
and its boundary restriction ``T(x) = lim F(x + iy)`` (y -> 0+) preserves
Lebesgue measure.  For an atomic singular part the restriction is the
generalized Boole transformation

    T(x) = x + c + sum_k w_k / (t_k - x),       w_k > 0,

strictly increasing from -inf to +inf on each of the k+1 branches cut by
the poles.  The lab provides orbits, preimages, the branch-derivative
preservation identity, the iterated-transform recurrence sums whose
divergence characterizes conservativity, the norming-based divergence
criterion, Hopf ratio experiments, and the integer-lattice tail example.

Orbit loops optionally compile with numba when it is installed; the pure
numpy fallback vectorizes across starting points.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import clt as cl
from . import measures as ms
from . import transforms as tf
from .errors import PoleProximity

__all__ = [
    "RationalBooleMap",
    "boundary_map",
    "boole_map",
    "eval_T",
    "eval_dT",
    "preimages",
    "preservation_check",
    "AaronsonSums",
    "aaronson_sums",
    "ConservativityReport",
    "conservativity_criterion",
    "HopfResult",
    "hopf_ratio",
    "KERNELS",
    "kernel_integral",
    "OrbitRecord",
    "occupation_time",
    "LatticeTailLab",
    "lattice_tail_lab",
]

#: orbit points closer than this (relative) to a pole truncate the orbit
POLE_TOL = 1e-13


@dataclass(frozen=True)
class RationalBooleMap:
    """Generalized Boole transformation ``T(x) = x + c + sum w_k/(t_k - x)``.

    All weights positive, pole positions strictly increasing.  `T` is
    strictly increasing on each of the ``k+1`` maximal intervals between
    poles and maps each onto all of the line.
    """

    c: float
    pole_positions: np.ndarray
    pole_weights: np.ndarray

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.pole_positions, dtype=float))
        w = np.atleast_1d(np.asarray(self.pole_weights, dtype=float))
        if t.shape != w.shape:
            raise ValueError("pole positions and weights must have equal length")
        if len(t) and np.any(np.diff(t) <= 0):
            raise ValueError("pole positions must be strictly increasing")
        if np.any(w <= 0):
            raise ValueError("pole weights must be positive")
        t.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "pole_positions", t)
        object.__setattr__(self, "pole_weights", w)

    @property
    def n_poles(self) -> int:
        return len(self.pole_positions)

    def to_json(self) -> str:
        return json.dumps({"c": self.c,
                           "poles": [[float(t), float(w)] for t, w in
                                     zip(self.pole_positions, self.pole_weights)]})

    @classmethod
    def from_json(cls, text: str | dict) -> "RationalBooleMap":
        doc = json.loads(text) if isinstance(text, str) else text
        poles = np.asarray(doc.get("poles", []), dtype=float).reshape(-1, 2)
        return cls(float(doc["c"]), poles[:, 0], poles[:, 1])


def boundary_map(rep: tf.NevanlinnaRep) -> RationalBooleMap:
    """Boundary restriction of the map synthesized from ``(a, sigma)``.

    Uses the partial-fraction identity
    ``(1 + t z)/(t - z) = -t + (1 + t^2)/(t - z)``, i.e.
    ``w_k = s_k (1 + t_k^2)`` and ``c = a - sum s_k t_k``.  An empty sigma
    gives the pole-free translation ``x + a``.
    """
    if rep.sigma is None:
        return RationalBooleMap(rep.a, np.empty(0), np.empty(0))
    t = rep.sigma.positions
    s = rep.sigma.masses
    return RationalBooleMap(rep.a - float((s * t).sum()), t, s * (1.0 + t * t))


def boole_map(r: float = 1.0) -> RationalBooleMap:
    """The map ``x -> x - r/x`` (the classical case at r = 1)."""
    return RationalBooleMap(0.0, np.array([0.0]), np.array([float(r)]))


def _pole_distance(T: RationalBooleMap, x: np.ndarray) -> np.ndarray:
    if T.n_poles == 0:
        return np.full(np.shape(x), np.inf)
    return np.abs(x[..., None] - T.pole_positions).min(axis=-1)


def eval_T(T: RationalBooleMap, x):
    """Evaluate the transformation; raises :class:`PoleProximity` on poles."""
    xa = np.asarray(x, dtype=float)
    tol = POLE_TOL * (1.0 + np.abs(xa))
    if np.any(_pole_distance(T, xa) < tol):
        raise PoleProximity("evaluation point is numerically on a pole")
    if T.n_poles == 0:
        out = xa + T.c
    else:
        out = xa + T.c + (T.pole_weights / (T.pole_positions - xa[..., None])).sum(axis=-1)
    return out if out.ndim else float(out)


def eval_dT(T: RationalBooleMap, x):
    """Derivative ``1 + sum w_k/(t_k - x)^2``; strictly above 1 with poles."""
    xa = np.asarray(x, dtype=float)
    tol = POLE_TOL * (1.0 + np.abs(xa))
    if np.any(_pole_distance(T, xa) < tol):
        raise PoleProximity("evaluation point is numerically on a pole")
    if T.n_poles == 0:
        out = np.ones_like(xa)
    else:
        out = 1.0 + (T.pole_weights / (T.pole_positions - xa[..., None]) ** 2).sum(axis=-1)
    return out if out.ndim else float(out)


def preimages(T: RationalBooleMap, y: float) -> np.ndarray:
    """All solutions of ``T(x) = y``: exactly one per branch interval.

    Bisection with expanding brackets on the unbounded branches; residuals
    certified below ``1e-10 * (1 + |y|)``.
    """
    if T.n_poles == 0:
        return np.array([y - T.c])
    t = T.pole_positions

    def g(x):
        return x + T.c + (T.pole_weights / (t - x)).sum() - y

    roots = np.empty(T.n_poles + 1)
    # left unbounded branch: g -> -inf at -inf, +inf at t[0]-
    lo = t[0] - 1.0 - abs(y - T.c)
    while g(lo) >= 0:
        lo = t[0] - 2.0 * (t[0] - lo)
    eps = 0.5
    while g(t[0] - eps) <= 0:
        eps *= 0.5
    roots[0] = _bisect(g, lo, t[0] - eps)
    # interior branches
    for i in range(T.n_poles - 1):
        gap = t[i + 1] - t[i]
        eps = 0.25 * gap
        while g(t[i] + eps) >= 0:
            eps *= 0.5
        lo = t[i] + eps
        eps = 0.25 * gap
        while g(t[i + 1] - eps) <= 0:
            eps *= 0.5
        roots[i + 1] = _bisect(g, lo, t[i + 1] - eps)
    # right unbounded branch
    hi = t[-1] + 1.0 + abs(y - T.c)
    while g(hi) <= 0:
        hi = t[-1] + 2.0 * (hi - t[-1])
    eps = 0.5
    while g(t[-1] + eps) >= 0:
        eps *= 0.5
    roots[-1] = _bisect(g, t[-1] + eps, hi)
    resid = np.abs(np.array([g(r) for r in roots]))
    # steep branches bound the attainable y-residual by T'(x) * ulp(x)
    slope_floor = 8.0 * np.finfo(float).eps * (1.0 + np.abs(roots)) * eval_dT(T, roots)
    tol = 1e-10 * (1.0 + abs(y)) + slope_floor
    if np.any(resid > tol):
        raise RuntimeError(
            f"preimage residual {resid.max():.3g} exceeds {np.max(tol):.3g}")
    return roots


def _bisect(g, lo: float, hi: float) -> float:
    glo = g(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        gm = g(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def preservation_check(T: RationalBooleMap, y_list) -> float:
    """Max deviation of ``sum over preimages of 1/T'`` from 1.

    The identity holding for a.e. y is equivalent to T preserving Lebesgue
    measure.
    """
    worst = 0.0
    for y in np.atleast_1d(np.asarray(y_list, dtype=float)):
        xs = preimages(T, float(y))
        worst = max(worst, abs(float((1.0 / eval_dT(T, xs)).sum()) - 1.0))
    return worst


# ---------------------------------------------------------------------------
# Conservativity diagnostics
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AaronsonSums:
    """Terms and partial sums of ``Im(-1/F^(n)(z))``; divergence of the
    series is equivalent to conservativity of the boundary restriction."""

    z: complex
    terms: np.ndarray
    partial_sums: np.ndarray


def aaronson_sums(m: ms.Measure, N: int, z: complex = 1j) -> AaronsonSums:
    """Single-pass recurrence sums for the map of a singular measure.

    Cost O(N); all terms are positive and the partial sums nondecreasing.
    """
    zc = complex(z)
    if zc.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    terms = np.empty(N)
    if isinstance(m, ms.AtomicMeasure) and len(m) <= 64:
        # fast scalar path: plain python complex arithmetic beats numpy here
        atoms = [(float(t), float(w)) for t, w in zip(m.positions, m.masses)]
        w = zc
        for n in range(N):
            g = 0j
            for t, mass in atoms:
                g += mass / (w - t)
            w = 1.0 / g
            terms[n] = (-1.0 / w).imag
    else:
        step = tf._one_step_evaluator(m)
        w = np.asarray([zc])
        for n in range(N):
            w = step(w)
            terms[n] = float((-1.0 / w).imag[0])
    return AaronsonSums(zc, terms, np.cumsum(terms))


@dataclass(frozen=True)
class ConservativityReport:
    """Partial sums of ``1/B_n^2`` with divergence-model fits.

    The verdict states which growth model fits best at the horizon; it is
    a model comparison, never a proof of (non)conservativity.
    """

    ns: np.ndarray
    partial_sums: np.ndarray
    fits: dict
    verdict: str
    h_index_estimate: float
    norming_provenance: str

    def to_json(self) -> str:
        return json.dumps({
            "schema_version": 1,
            "verdict": self.verdict,
            "norming_provenance": self.norming_provenance,
            "h_index_estimate": self.h_index_estimate,
            "fits": self.fits,
            "rows": [{"N": int(n), "sum": float(s)}
                     for n, s in zip(self.ns, self.partial_sums)],
        })


def _fit_rmse(xdesign: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, float]:
    coef, *_ = np.linalg.lstsq(xdesign, s, rcond=None)
    resid = s - xdesign @ coef
    return coef, float(np.sqrt(np.mean(resid**2)))


def conservativity_criterion(m: ms.Measure, N: int, *,
                             B: cl.NormingSequence | None = None,
                             n_checkpoints: int = 40) -> ConservativityReport:
    """Divergence diagnosis of ``sum 1/B_n^2`` for the norming constants of `m`.

    Fits ``a*log n + b``, ``a*loglog n + b``, and a convergent model
    ``a - b/n^g`` to the partial sums at log-spaced checkpoints; the verdict
    is the best divergent model unless the convergent fit wins by a factor
    of 2 in RMSE.  Includes the slow-variation diagnostic for H of `m`.
    """
    if B is None:
        B = cl.norming_constants(m, N=N)
    elif B.ns[0] != 1 or len(B.ns) < N or np.any(np.diff(B.ns) != 1):
        raise ValueError("given norming constants must cover n = 1..N")
    inv2 = 1.0 / B.values[:N] ** 2
    sums = np.cumsum(inv2)
    ns = np.unique(np.geomspace(10, N, n_checkpoints).astype(np.int64))
    s = sums[ns - 1]

    ones = np.ones_like(s)
    fits = {}
    coef, rmse = _fit_rmse(np.column_stack([np.log(ns), ones]), s)
    fits["log"] = {"alpha": float(coef[0]), "beta": float(coef[1]), "rmse": rmse}
    coef, rmse = _fit_rmse(np.column_stack([np.log(np.log(ns)), ones]), s)
    fits["loglog"] = {"alpha": float(coef[0]), "beta": float(coef[1]), "rmse": rmse}
    best_conv = None
    for g in (0.25, 0.5, 1.0, 2.0):
        coef, rmse = _fit_rmse(np.column_stack([ones, -1.0 / ns.astype(float) ** g]), s)
        if best_conv is None or rmse < best_conv[2]:
            best_conv = (g, coef, rmse)
    fits["convergent"] = {"gamma": best_conv[0], "alpha": float(best_conv[1][0]),
                          "beta": float(best_conv[1][1]), "rmse": best_conv[2]}

    div_name = "log" if fits["log"]["rmse"] <= fits["loglog"]["rmse"] else "loglog"
    if fits["convergent"]["rmse"] * 2.0 < fits[div_name]["rmse"]:
        verdict = "convergent-fit-preferred"
    else:
        verdict = f"divergent ({div_name}) at horizon {N}"

    xs = np.geomspace(B.values[-1], 10 * B.values[-1], 5)
    try:
        h_idx = cl.slow_variation_report(cl.h_function(m), [2.0], xs).index_estimate
    except (ValueError, TypeError):
        h_idx = math.nan
    return ConservativityReport(ns, s, fits, verdict, h_idx, B.provenance)


# ---------------------------------------------------------------------------
# Orbits: Hopf ratios and occupation times
# ---------------------------------------------------------------------------

KERNELS = ("cauchy", "gauss", "indicator")


def kernel_integral(kind: str, a: float = 0.0, b: float = 0.0) -> float:
    """Lebesgue integral of a named kernel over the whole line."""
    if kind == "cauchy":
        return math.pi
    if kind == "gauss":
        return math.sqrt(math.pi)
    if kind == "indicator":
        return b - a
    raise ValueError(f"unknown kernel {kind!r}")


def _kernel_values(kind: str, x: np.ndarray, a: float, b: float) -> np.ndarray:
    if kind == "cauchy":
        return 1.0 / (1.0 + x * x)
    if kind == "gauss":
        return np.exp(-x * x)
    if kind == "indicator":
        return ((x >= a) & (x <= b)).astype(float)
    raise ValueError(f"unknown kernel {kind!r}")


def _orbit_sums_numpy(T: RationalBooleMap, x0: np.ndarray, N: int, checkpoints,
                      fk, gk):
    """Vectorized-over-starts orbit loop; returns ratio table and flags."""
    fkind, fa, fb = fk
    gkind, ga, gb = gk
    x = x0.astype(float).copy()
    sf = np.zeros(len(x0))
    sg = np.zeros(len(x0))
    alive = np.ones(len(x0), dtype=bool)
    truncated = np.full(len(x0), -1, dtype=np.int64)
    ratios = np.empty((len(checkpoints), len(x0)))
    t, w, c = T.pole_positions, T.pole_weights, T.c
    ci = 0
    for j in range(N):
        if T.n_poles:
            d = np.abs(x[:, None] - t).min(axis=1)
            hit = alive & (d < POLE_TOL * (1.0 + np.abs(x)))
            if hit.any():
                truncated[hit] = j
                alive &= ~hit
        sf[alive] += _kernel_values(fkind, x[alive], fa, fb)
        sg[alive] += _kernel_values(gkind, x[alive], ga, gb)
        if T.n_poles:
            x[alive] = x[alive] + c + (w / (t - x[alive, None])).sum(axis=1)
        else:
            x[alive] = x[alive] + c
        if ci < len(checkpoints) and j + 1 == checkpoints[ci]:
            with np.errstate(invalid="ignore", divide="ignore"):
                ratios[ci] = sf / sg
            ci += 1
    return ratios, truncated


_NUMBA_CACHE: dict = {}


def _orbit_sums_numba():
    """Build (once) the compiled orbit kernel; returns None without numba."""
    if "fn" in _NUMBA_CACHE:
        return _NUMBA_CACHE["fn"]
    try:
        import numba
    except ImportError:
        _NUMBA_CACHE["fn"] = None
        return None

    @numba.njit(cache=True, nogil=True)
    def run(c, t, w, x0, N, checkpoints, fcode, fa, fb, gcode, ga, gb, pole_tol):
        nstart = x0.shape[0]
        ratios = np.empty((checkpoints.shape[0], nstart))
        truncated = np.full(nstart, -1, dtype=np.int64)
        for s in range(nstart):
            x = x0[s]
            sf = 0.0
            sg = 0.0
            ci = 0
            for j in range(N):
                hit = False
                for k in range(t.shape[0]):
                    if abs(x - t[k]) < pole_tol * (1.0 + abs(x)):
                        hit = True
                        break
                if hit:
                    truncated[s] = j
                    for cj in range(ci, checkpoints.shape[0]):
                        ratios[cj, s] = sf / sg if sg > 0 else np.nan
                    break
                if fcode == 0:
                    sf += 1.0 / (1.0 + x * x)
                elif fcode == 1:
                    sf += math.exp(-x * x)
                else:
                    sf += 1.0 if (fa <= x <= fb) else 0.0
                if gcode == 0:
                    sg += 1.0 / (1.0 + x * x)
                elif gcode == 1:
                    sg += math.exp(-x * x)
                else:
                    sg += 1.0 if (ga <= x <= gb) else 0.0
                acc = x + c
                for k in range(t.shape[0]):
                    acc += w[k] / (t[k] - x)
                x = acc
                if ci < checkpoints.shape[0] and j + 1 == checkpoints[ci]:
                    ratios[ci, s] = sf / sg if sg > 0 else np.nan
                    ci += 1
        return ratios, truncated

    _NUMBA_CACHE["fn"] = run
    return run


def _normalize_kernel(spec) -> tuple[str, float, float]:
    if isinstance(spec, str):
        if spec == "indicator":
            raise ValueError("indicator kernel needs an interval: ('indicator', a, b)")
        return (spec, 0.0, 0.0)
    kind, a, b = spec[0], float(spec[1]), float(spec[2])
    if kind != "indicator":
        raise ValueError("only the indicator kernel takes parameters")
    if b <= a:
        raise ValueError("indicator interval must be nondegenerate")
    return (kind, a, b)


@dataclass(frozen=True)
class HopfResult:
    """Running Birkhoff-sum ratios at checkpoints, per starting point."""

    checkpoints: np.ndarray
    ratios: np.ndarray              # shape (n_checkpoints, n_starts)
    target: float
    truncated_at: np.ndarray        # -1 where the orbit survived


def hopf_ratio(T: RationalBooleMap, f, g, x0, N: int,
               checkpoints=None) -> HopfResult:
    """Ratio of Birkhoff sums of two integrable kernels along orbits.

    For a conservative ergodic map the ratio tends a.e. to the ratio of
    the integrals (the `target` field).  Kernels are named closed forms:
    ``'cauchy'`` (``1/(1+x^2)``), ``'gauss'`` (``exp(-x^2)``), or
    ``('indicator', a, b)``.
    """
    if N > 10**8:
        raise ValueError("orbit horizon capped at 1e8 steps")
    fk = _normalize_kernel(f)
    gk = _normalize_kernel(g)
    x0 = np.atleast_1d(np.asarray(x0, dtype=float))
    if checkpoints is None:
        checkpoints = [10**k for k in range(3, 9) if 10**k <= N]
        if not checkpoints or checkpoints[-1] != N:
            checkpoints.append(N)
    checkpoints = np.asarray(sorted(set(int(c) for c in checkpoints)), dtype=np.int64)
    if checkpoints[-1] > N:
        raise ValueError("checkpoints must not exceed N")
    target = kernel_integral(*fk) / kernel_integral(*gk)

    run = _orbit_sums_numba()
    if run is not None:
        codes = {"cauchy": 0, "gauss": 1, "indicator": 2}
        ratios, truncated = run(T.c, T.pole_positions, T.pole_weights, x0, N,
                                checkpoints, codes[fk[0]], fk[1], fk[2],
                                codes[gk[0]], gk[1], gk[2], POLE_TOL)
    else:
        ratios, truncated = _orbit_sums_numpy(T, x0, N, checkpoints, fk, gk)
    return HopfResult(checkpoints, ratios, target, truncated)


@dataclass(frozen=True)
class OrbitRecord:
    """Occupation statistics of orbits in a window."""

    window: tuple
    steps: int
    visits: np.ndarray
    truncated_at: np.ndarray

    def to_json(self) -> str:
        return json.dumps({
            "schema_version": 1,
            "window": list(self.window),
            "steps": self.steps,
            "visits": [int(v) for v in self.visits],
            "truncated_at": [int(t) for t in self.truncated_at],
        })


def _visit_counts_numba():
    if "visits" in _NUMBA_CACHE:
        return _NUMBA_CACHE["visits"]
    try:
        import numba
    except ImportError:
        _NUMBA_CACHE["visits"] = None
        return None

    @numba.njit(cache=True, nogil=True)
    def run(c, t, w, x0, N, a, b, pole_tol):
        nstart = x0.shape[0]
        counts = np.zeros(nstart, dtype=np.int64)
        truncated = np.full(nstart, -1, dtype=np.int64)
        for s in range(nstart):
            x = x0[s]
            for j in range(N):
                hit = False
                for k in range(t.shape[0]):
                    if abs(x - t[k]) < pole_tol * (1.0 + abs(x)):
                        hit = True
                        break
                if hit:
                    truncated[s] = j
                    break
                if a <= x <= b:
                    counts[s] += 1
                acc = x + c
                for k in range(t.shape[0]):
                    acc += w[k] / (t[k] - x)
                x = acc
        return counts, truncated

    _NUMBA_CACHE["visits"] = run
    return run


def _visit_counts_numpy(T: RationalBooleMap, x0: np.ndarray, N: int,
                        a: float, b: float):
    t, w, c = T.pole_positions, T.pole_weights, T.c
    x = x0.astype(float).copy()
    alive = np.ones(len(x0), dtype=bool)
    truncated = np.full(len(x0), -1, dtype=np.int64)
    counts = np.zeros(len(x0), dtype=np.int64)
    for j in range(N):
        if T.n_poles:
            d = np.abs(x[:, None] - t).min(axis=1)
            hit = alive & (d < POLE_TOL * (1.0 + np.abs(x)))
            if hit.any():
                truncated[hit] = j
                alive &= ~hit
        counts[alive] += (x[alive] >= a) & (x[alive] <= b)
        if T.n_poles:
            x[alive] = x[alive] + c + (w / (t - x[alive, None])).sum(axis=1)
        else:
            x[alive] = x[alive] + c
    return counts, truncated


def occupation_time(T: RationalBooleMap, x0_list, N: int, A: tuple) -> OrbitRecord:
    """Visit counts of orbits to the bounded interval ``A`` over N steps.

    For conservative maps the counts grow without bound along a.e. orbit
    (a diagnostic, not a proof); a pole hit truncates the orbit and is
    flagged.
    """
    a, b = float(A[0]), float(A[1])
    if not (b > a and math.isfinite(a) and math.isfinite(b)):
        raise ValueError("occupation window must be a bounded interval")
    x0 = np.atleast_1d(np.asarray(x0_list, dtype=float))
    run = _visit_counts_numba()
    if run is not None:
        counts, truncated = run(T.c, T.pole_positions, T.pole_weights, x0,
                                N, a, b, POLE_TOL)
    else:
        counts, truncated = _visit_counts_numpy(T, x0, N, a, b)
    return OrbitRecord((a, b), N, counts, truncated)


# ---------------------------------------------------------------------------
# Integer-lattice tail example
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeTailLab:
    """Integer-lattice discretization of the symmetric ``x**-2``-tail law.

    Holds the atomic singular part, its transform and boundary
    restriction, the closed-form norming constants, and the truncated
    mass defect.
    """

    sigma: ms.AtomicMeasure
    rep: tf.NevanlinnaRep
    map: tf.NevanlinnaMap
    T: RationalBooleMap
    B: cl.NormingSequence | None
    mass_defect: float


def lattice_tail_sigma(K: int, *, symmetrized: bool = True) -> tuple[ms.AtomicMeasure, float]:
    """Bin the unit-cutoff ``|t|**-3`` density onto the integers ``|k| <= K``.

    With `symmetrized` binning each cell ``[k, k+1)`` splits its mass
    half to each endpoint, so the discretized measure has mean 0 exactly
    (the plain left-endpoint binning, kept for comparison, shifts the mean
    to -1/2).  Returns the measure and the truncated mass defect.
    """
    if K < 10:
        raise ValueError("truncation K must be at least 10")
    k = np.arange(1, K + 1, dtype=float)
    # cell masses nu([k, k+1)) of the tail law: (k^-2 - (k+1)^-2)/2
    cells = 0.5 * (k**-2.0 - (k + 1.0) ** -2.0)
    if symmetrized:
        # atom k gets half of cell [k-1, k) and half of cell [k, k+1)
        prev = np.concatenate(([0.0], cells[:-1]))
        p = 0.5 * (prev + cells)
        positions = np.concatenate((-k[::-1], k))
        masses = np.concatenate((p[::-1], p))
    else:
        positions = np.concatenate((-(k + 1.0)[::-1], k))
        masses = np.concatenate((cells[::-1], cells))
    sigma = ms.AtomicMeasure(positions, masses, is_probability=False)
    return sigma, 1.0 - sigma.total_mass


def lattice_tail_lab(K: int, N: int | None = None, *,
                     symmetrized: bool = True) -> LatticeTailLab:
    """Assemble the lattice-tail example: sigma, transform, boundary map,
    and the closed-form constants ``B_n = sqrt(n log n)``."""
    sigma, defect = lattice_tail_sigma(K, symmetrized=symmetrized)
    rep = tf.NevanlinnaRep(a=0.0, sigma=sigma)
    B = None
    if N is not None:
        ns = np.arange(1, N + 1)
        vals = np.sqrt(ns * np.log(np.maximum(ns, 2)))
        B = cl.NormingSequence(ns, vals, "closed-form sqrt(n log n)")
    return LatticeTailLab(sigma, rep, tf.NevanlinnaMap(rep), boundary_map(rep),
                          B, defect)
