"""Seeded random subcomplexes and Monte Carlo sweeps.

Every (k+1)-cell draws its inclusion uniform from a Philox stream keyed by
``(seed, trial)`` at counter position ``cell index``.  A trial is therefore
reproducible on its own, independent of how trials are spread over workers.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .cochain import Cochain, coboundary, cohomology_vanishes
from .complex import Complex, build_simplex_skeleton, keep_top_cells
from .errors import BudgetExceeded, InvalidParameter
from .expansion import coboundary_expansion

MODELS = ("erdos-renyi", "linial-meshulam", "p-subcomplex")
MODEL_ALIASES = {"er": "erdos-renyi", "gnp": "erdos-renyi", "lm": "linial-meshulam"}
MEASURES = ("cohomology-vanishing", "connectivity", "exact-expansion", "coboundary-concentration")
CSV_HEADER = ("p", "trials", "successes", "fraction", "std_err", "mean_value", "indeterminate")
MASK64 = (1 << 64) - 1


@dataclass
class SampleSpec:
    model: str
    n: int
    k: int
    p: float
    seed: int
    trial: int = 0
    ambient: Complex | None = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        self.model = MODEL_ALIASES.get(self.model, self.model)
        if self.model not in MODELS:
            raise InvalidParameter(f"unknown model {self.model!r}")
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"p={self.p} outside [0, 1]")
        if self.model == "erdos-renyi" and self.k != 0:
            raise InvalidParameter("G(n,p) has k = 0")


def ambient_complex(model: str, n: int, k: int, ambient: Complex | None = None) -> Complex:
    model = MODEL_ALIASES.get(model, model)
    if model == "erdos-renyi":
        return build_simplex_skeleton(n, 1)
    if model == "linial-meshulam":
        return build_simplex_skeleton(n, k + 1)
    if ambient is None:
        raise InvalidParameter("p-subcomplex model needs an ambient complex")
    if ambient.top_dim != k + 1:
        raise InvalidParameter(f"ambient complex must have dimension k+1={k + 1}")
    return ambient


def cell_uniforms(seed: int, trial: int, count: int) -> np.ndarray:
    """Counter-based uniforms: entry i belongs to cell i of trial ``trial``."""
    key = (seed & MASK64) | ((trial & MASK64) << 64)
    gen = np.random.Generator(np.random.Philox(key=key))
    return gen.random(count)


def sample_from(ambient: Complex, p: float, seed: int, trial: int = 0) -> Complex:
    top = ambient.top_dim
    if p >= 1.0:
        return ambient
    u = cell_uniforms(seed, trial, ambient.count(top))
    return keep_top_cells(ambient, np.flatnonzero(u < p).tolist())


def sample(spec: SampleSpec) -> Complex:
    """Full k-skeleton plus each (k+1)-cell independently with probability p."""
    amb = ambient_complex(spec.model, spec.n, spec.k, spec.ambient)
    return sample_from(amb, spec.p, spec.seed, spec.trial)


# -- experiment configuration ---------------------------------------------------------


@dataclass
class ExperimentConfig:
    model: str
    n: int
    k: int
    p_grid: list[float]
    trials_per_point: int
    seed: int = 0
    epsilon: float = 0.5
    omega: float = 0.0
    measure: str = "cohomology-vanishing"
    workers: int = 1

    def __post_init__(self):
        self.model = MODEL_ALIASES.get(self.model, self.model)
        if self.model not in MODELS:
            raise InvalidParameter(f"unknown model {self.model!r}")
        if self.measure not in MEASURES:
            raise InvalidParameter(f"unknown measure {self.measure!r}")
        if self.trials_per_point < 1:
            raise InvalidParameter("trials_per_point must be >= 1")
        if any(b <= a for a, b in zip(self.p_grid, self.p_grid[1:])):
            raise InvalidParameter("p_grid must be strictly increasing")
        if any(not 0 <= p <= 1 for p in self.p_grid):
            raise InvalidParameter("p_grid values must lie in [0, 1]")
        if not 0 < self.epsilon < 1:
            raise InvalidParameter("epsilon must lie in (0, 1)")

    @classmethod
    def from_json(cls, obj: dict) -> ExperimentConfig:
        obj = dict(obj)
        if isinstance(obj.get("p_grid"), str):
            obj["p_grid"] = parse_p_grid(obj["p_grid"])
        obj.setdefault("trials_per_point", obj.pop("trials", 1))
        return cls(**obj)

    def to_json(self) -> dict:
        return asdict(self)


def parse_p_grid(text: str) -> list[float]:
    """``start:stop:step`` with both endpoints included, or a comma list."""
    if ":" not in text:
        return [float(v) for v in text.split(",") if v.strip()]
    start, stop, step = (float(v) for v in text.split(":"))
    if step <= 0 or stop < start:
        raise InvalidParameter(f"bad p-grid {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 10) for i in range(count)]


@dataclass
class CurvePoint:
    p: float
    trials: int
    successes: int
    mean_value: float
    std_err: float
    indeterminate: int = 0
    exact_mean: Fraction | None = field(default=None, compare=False)

    @property
    def fraction(self) -> float:
        return self.successes / self.trials if self.trials else float("nan")

    @property
    def fraction_std_err(self) -> float:
        if not self.trials:
            return float("nan")
        f = self.fraction
        return math.sqrt(f * (1 - f) / self.trials)


def _aggregate(p: float, outcomes: Sequence[tuple[bool, Fraction | float] | None],
               binary: bool) -> CurvePoint:
    done = [o for o in outcomes if o is not None]
    indeterminate = len(outcomes) - len(done)
    trials = len(done)
    successes = sum(1 for ok, _ in done if ok)
    if not trials:
        return CurvePoint(p, 0, 0, float("nan"), float("nan"), indeterminate)
    if binary:
        f = successes / trials
        return CurvePoint(p, trials, successes, f, math.sqrt(f * (1 - f) / trials), indeterminate)
    vals = [v for _, v in done]
    exact = sum((Fraction(v) for v in vals), Fraction(0)) / trials
    arr = np.array([float(v) for v in vals])
    se = float(arr.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    return CurvePoint(p, trials, successes, float(exact), se, indeterminate, exact)


# -- trial execution -------------------------------------------------------------------

_STATE: dict = {}


def _init_worker(state: dict) -> None:
    _STATE.clear()
    _STATE.update(state)


def _run_task(task: tuple[int, float, list[int]]):
    _, p, trials = task
    return [_one_trial(p, t) for t in trials]


def _one_trial(p: float, trial: int):
    amb: Complex = _STATE["ambient"]
    k: int = _STATE["k"]
    y = sample_from(amb, p, _STATE["seed"], trial)
    measure = _STATE["measure"]
    if measure in ("cohomology-vanishing", "connectivity"):
        ok = cohomology_vanishes(y, k)
        return ok, 1.0 if ok else 0.0
    if measure == "exact-expansion":
        h_x: Fraction = _STATE["h_ambient"]
        rep = coboundary_expansion(y, k, **_STATE.get("solver", {}))
        if not rep.exact:
            return None
        target = Fraction((1 - _STATE["epsilon"])) * Fraction(p) * h_x
        ratio = rep.value / (Fraction(p) * h_x) if p > 0 else Fraction(0)
        return rep.value >= target, ratio
    raise InvalidParameter(f"measure {measure!r} is not a per-trial sweep measure")


def _run_grid(state: dict, p_grid: Sequence[float], trials: int, workers: int,
              binary: bool) -> list[CurvePoint]:
    chunk = max(1, min(50, trials // max(1, 4 * workers) or 1))
    tasks = []
    for gi, p in enumerate(p_grid):
        for lo in range(0, trials, chunk):
            tasks.append((gi, p, list(range(lo, min(trials, lo + chunk)))))
    if workers > 1:
        with ProcessPoolExecutor(workers, initializer=_init_worker, initargs=(state,)) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        _init_worker(state)
        results = [_run_task(t) for t in tasks]
    per_point: list[list] = [[] for _ in p_grid]
    for (gi, _, _), res in zip(tasks, results):
        per_point[gi].extend(res)
    return [_aggregate(p, outs, binary) for p, outs in zip(p_grid, per_point)]


def default_workers() -> int:
    return int(os.environ.get("COBEX_WORKERS", "1"))


def threshold_sweep(cfg: ExperimentConfig, ambient: Complex | None = None,
                    max_cells: int = 200_000) -> list[CurvePoint]:
    """Fraction of trials with H^k = 0 (connectivity when k = 0) per grid point."""
    if cfg.measure not in ("cohomology-vanishing", "connectivity"):
        raise InvalidParameter("threshold_sweep measures cohomology vanishing or connectivity")
    amb = ambient_complex(cfg.model, cfg.n, cfg.k, ambient)
    if amb.count(cfg.k + 1) > max_cells:
        raise BudgetExceeded(f"{amb.count(cfg.k + 1)} cells exceeds the sweep limit {max_cells}")
    state = {"ambient": amb, "k": cfg.k, "seed": cfg.seed, "measure": cfg.measure}
    return _run_grid(state, cfg.p_grid, cfg.trials_per_point, cfg.workers, binary=True)


def expansion_inheritance_mc(ambient: Complex, k: int, cfg: ExperimentConfig,
                             solver: dict | None = None) -> tuple[Fraction, list[CurvePoint]]:
    """Per grid point: fraction with h^k(Y) >= (1-eps) p h^k(X), and mean h^k(Y)/(p h^k(X))."""
    rep = coboundary_expansion(ambient, k, **(solver or {}))
    if not rep.exact or not rep.value:
        raise BudgetExceeded("ambient expansion must be exactly solvable and positive")
    state = {
        "ambient": ambient, "k": k, "seed": cfg.seed, "measure": "exact-expansion",
        "h_ambient": rep.value, "epsilon": Fraction(cfg.epsilon).limit_denominator(10**6),
        "solver": solver or {},
    }
    return rep.value, _run_grid(state, cfg.p_grid, cfg.trials_per_point, cfg.workers, binary=False)


def theoretical_threshold(n_k_cells: int, h: Fraction | float, epsilon: float,
                          omega: float = 0.0) -> float:
    """(2 log |X^k| + omega) / (eps^2 h), the sufficient density for inheritance."""
    return (2 * math.log(n_k_cells) + omega) / (epsilon**2 * float(h))


# -- Chernoff concentration ------------------------------------------------------------


@dataclass
class TailCheck:
    epsilon: float
    frequency: float
    bound: float
    sigma: float

    @property
    def ok(self) -> bool:
        return self.frequency <= self.bound + 3 * self.sigma


@dataclass
class ConcentrationStats:
    p: float
    trials: int
    full_norm: int
    mean: float
    std_err: float
    tails: list[TailCheck]

    @property
    def expected_mean(self) -> float:
        return self.p * self.full_norm

    @property
    def mean_ok(self) -> bool:
        return abs(self.mean - self.expected_mean) <= 3 * self.std_err + 1e-12


def surviving_coboundary_norms(ambient: Complex, k: int, beta: Cochain, p: float,
                               trials: int, seed: int) -> np.ndarray:
    """|d beta|_Y for each trial, with Y drawn exactly as ``sample_from`` draws it."""
    support = np.array(coboundary(ambient, k)(beta).support(), dtype=np.int64)
    m = ambient.count(k + 1)
    out = np.empty(trials, dtype=np.int64)
    for t in range(trials):
        if p >= 1.0:
            out[t] = support.size
            continue
        u = cell_uniforms(seed, t, m)
        out[t] = int(np.count_nonzero(u[support] < p))
    return out


def coboundary_concentration(ambient: Complex, k: int, beta: Cochain, p: float, trials: int,
                             seed: int, epsilons: Sequence[float] = (0.3, 0.5)) -> ConcentrationStats:
    """Empirical lower tail of |d beta|_Y against exp(-eps^2 p |d beta| / 2)."""
    full = coboundary(ambient, k)(beta).weight()
    if full == 0:
        raise InvalidParameter("beta must have a nonzero coboundary")
    norms = surviving_coboundary_norms(ambient, k, beta, p, trials, seed)
    mean = float(norms.mean())
    se = float(norms.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    tails = []
    for eps in epsilons:
        freq = float(np.mean(norms <= (1 - eps) * p * full))
        bound = math.exp(-(eps**2) / 2 * p * full)
        tails.append(TailCheck(eps, freq, bound, math.sqrt(max(freq * (1 - freq), 0.0) / trials)))
    return ConcentrationStats(p, trials, full, mean, se, tails)


# -- curve utilities ---------------------------------------------------------------------


def crossing_point(points: Sequence[CurvePoint], level: float = 0.5) -> float | None:
    """Linear interpolation of the first p where the success fraction reaches ``level``."""
    prev = None
    for pt in points:
        if pt.trials and pt.fraction >= level:
            if prev is None:
                return pt.p
            f0, f1 = prev.fraction, pt.fraction
            return prev.p + (level - f0) * (pt.p - prev.p) / (f1 - f0)
        prev = pt
    return None


def monotone_violations(values: Sequence[float], std_errs: Sequence[float],
                        sigmas: float = 2.0) -> list[tuple[int, int]]:
    """Pairs i < j where value i exceeds value j by more than ``sigmas`` combined errors."""
    out = []
    for i in range(len(values)):
        for j in range(i + 1, len(values)):
            slack = sigmas * math.hypot(std_errs[i], std_errs[j])
            if values[i] - values[j] > slack + 1e-12:
                out.append((i, j))
    return out


def curve_to_csv(points: Sequence[CurvePoint]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for pt in points:
        writer.writerow([
            f"{pt.p:.10g}", pt.trials, pt.successes, f"{pt.fraction:.10g}",
            f"{pt.std_err:.10g}", f"{pt.mean_value:.10g}", pt.indeterminate,
        ])
    return buf.getvalue()


def write_csv(points: Sequence[CurvePoint], path) -> None:
    with open(path, "w", newline="") as fh:
        fh.write(curve_to_csv(points))


def load_config(path) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_json(json.load(fh))
