"""Synthetic benchmarks: predictive KL versus class count, the Monte-Carlo
scaling law, and an empirical check of the closed-form KL bound.

Each dataset draws logit means and standard deviations i.i.d. uniform over a
per-activation box, estimates the "true" predictive by Monte Carlo and scores
every approximation by KL divergence. Sub-streams are derived from the master
seed and the (C, dataset, family, purpose) indices, so reports are identical
for any thread count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from ._io import dumps, fmt
from .errors import DegenerateInputError, ValidationError
from .gaussian import Activation, LogitGaussian
from .metrics import kl_simplex
from .monte_carlo import McConfig, derive_seed, make_rng, mc_simplex_stats
from .predictives import (
    closed_form_predictive,
    laplace_bridge_predictive,
    mean_field_softmax_predictive,
    shekhovtsov_flach_predictive,
)
from .specfun import sigmoid

FORMAT_VERSION = "1"
HIGH_TRUTH_SAMPLES = 1_000_000
DEFAULT_CLASSES = (2, 5, 10, 50, 100, 500, 1000)
CSV_HEADER = "method,C,mean_kl,std_kl,n_excluded"

# family -> (index used in seed derivation, activation fed to the MC sampler)
FAMILIES = {
    "normcdf": (0, Activation.NORMCDF),
    "sigmoid": (1, Activation.SIGMOID),
    "softmax": (2, "softmax"),
}
_DATA, _TRUTH, _MC = 0, 1, 2


@dataclass(frozen=True)
class ActivationRange:
    mu_lo: float
    mu_hi: float
    sigma_lo: float
    sigma_hi: float

    def __post_init__(self):
        if not (self.mu_lo <= self.mu_hi and 0 <= self.sigma_lo <= self.sigma_hi):
            raise ValidationError(f"bad activation range {self}")


def default_ranges():
    return {
        "sigmoid": ActivationRange(-1.0, 1.0, 0.0, 1.0),
        "softmax": ActivationRange(-0.5 - math.log(2), 0.5 - math.log(2), 0.0, 0.5),
        "normcdf": ActivationRange(
            -math.sqrt(math.pi / 8), math.sqrt(math.pi / 8), 0.0, math.pi / 8
        ),
    }


def _family_of(method):
    return METHODS[method][0]


@dataclass(frozen=True)
class SyntheticConfig:
    class_counts: Tuple[int, ...] = DEFAULT_CLASSES
    datasets_per_c: int = 100
    truth_samples: int = 10_000
    budget: int = 10_000
    master_seed: int = 0
    ranges: Dict[str, ActivationRange] = field(default_factory=default_ranges)
    # "sigma": draw standard deviations uniformly; "variance": draw variances
    # uniformly between the squared sigma bounds.
    sigma_mode: str = "sigma"
    # "true-approx" scores KL(true || approx); "approx-true" reverses it.
    kl_direction: str = "true-approx"
    high_truth: bool = False
    methods: Optional[Tuple[str, ...]] = None
    threads: Optional[int] = None

    def __post_init__(self):
        object.__setattr__(self, "class_counts", tuple(int(c) for c in self.class_counts))
        if not self.class_counts or any(c < 2 for c in self.class_counts):
            raise ValidationError("class counts must be at least 2")
        if self.datasets_per_c < 1 or self.truth_samples < 1 or self.budget < 1:
            raise ValidationError("datasets, truth samples and budget must be positive")
        if self.sigma_mode not in ("sigma", "variance"):
            raise ValidationError(f"unknown sigma mode {self.sigma_mode!r}")
        if self.kl_direction not in ("true-approx", "approx-true"):
            raise ValidationError(f"unknown KL direction {self.kl_direction!r}")
        missing = set(FAMILIES) - set(self.ranges)
        if missing:
            raise ValidationError(f"missing activation ranges for {sorted(missing)}")
        if self.methods is not None:
            object.__setattr__(self, "methods", tuple(self.methods))
            unknown = set(self.methods) - set(METHODS)
            if unknown:
                raise ValidationError(f"unknown methods {sorted(unknown)}")

    @property
    def effective_truth_samples(self):
        return HIGH_TRUTH_SAMPLES if self.high_truth else self.truth_samples

    @property
    def method_names(self):
        return self.methods if self.methods is not None else tuple(METHODS)

    def to_dict(self):
        d = asdict(self)
        d["ranges"] = {k: asdict(v) for k, v in self.ranges.items()}
        d["class_counts"] = list(self.class_counts)
        d["methods"] = list(self.method_names)
        d["effective_truth_samples"] = self.effective_truth_samples
        d.pop("threads")
        return d


def _mc(g, family, cfg, C, d):
    fam_id, act = FAMILIES[family]
    seed = derive_seed(cfg.master_seed, C, d, fam_id, _MC)
    return mc_simplex_stats(g, act, McConfig(budget=cfg.budget, seed=seed)).predictive


METHODS = {
    "closed_form_normcdf": ("normcdf", lambda g, *_: closed_form_predictive(g, "normcdf")),
    "closed_form_sigmoid": ("sigmoid", lambda g, *_: closed_form_predictive(g, "sigmoid")),
    "mc_normcdf": ("normcdf", lambda g, cfg, C, d: _mc(g, "normcdf", cfg, C, d)),
    "mc_sigmoid": ("sigmoid", lambda g, cfg, C, d: _mc(g, "sigmoid", cfg, C, d)),
    "mc_softmax": ("softmax", lambda g, cfg, C, d: _mc(g, "softmax", cfg, C, d)),
    "mean_field_softmax": ("softmax", lambda g, *_: mean_field_softmax_predictive(g)),
    "laplace_bridge": ("softmax", lambda g, *_: laplace_bridge_predictive(g).predictive),
    "shekhovtsov_flach": ("softmax", lambda g, *_: shekhovtsov_flach_predictive(g)),
}


def draw_dataset(cfg, family, C, d):
    """Logit Gaussian for one synthetic dataset of the given family."""
    fam_id, _ = FAMILIES[family]
    rng = make_rng(derive_seed(cfg.master_seed, C, d, fam_id, _DATA))
    r = cfg.ranges[family]
    mu = rng.uniform(r.mu_lo, r.mu_hi, C)
    if cfg.sigma_mode == "sigma":
        var = rng.uniform(r.sigma_lo, r.sigma_hi, C) ** 2
    else:
        var = rng.uniform(r.sigma_lo**2, r.sigma_hi**2, C)
    return LogitGaussian(mu, var)


def _evaluate_dataset(cfg, C, d):
    methods = cfg.method_names
    families = sorted({_family_of(m) for m in methods}, key=lambda f: FAMILIES[f][0])
    out = {}
    for family in families:
        fam_id, act = FAMILIES[family]
        g = draw_dataset(cfg, family, C, d)
        truth_cfg = McConfig(
            samples=cfg.effective_truth_samples,
            seed=derive_seed(cfg.master_seed, C, d, fam_id, _TRUTH),
        )
        truth = mc_simplex_stats(g, act, truth_cfg).predictive
        for m in methods:
            if _family_of(m) != family:
                continue
            try:
                approx = np.asarray(METHODS[m][1](g, cfg, C, d))
            except (DegenerateInputError, ValidationError):
                # e.g. Laplace bridge without variance; counted as excluded
                out[m] = None
                continue
            if cfg.kl_direction == "true-approx":
                out[m] = kl_simplex(truth, approx)
            else:
                out[m] = kl_simplex(approx, truth)
    return out


@dataclass(frozen=True)
class BenchRow:
    method: str
    C: int
    mean_kl: float
    std_kl: float
    n_excluded: int


@dataclass
class BenchReport:
    rows: list
    config: dict
    format_version: str = FORMAT_VERSION

    def get(self, method, C):
        for r in self.rows:
            if r.method == method and r.C == C:
                return r
        raise KeyError((method, C))

    def mean_kl(self, method):
        """Mean KL per class count for one method, in class-count order."""
        rows = [r for r in self.rows if r.method == method]
        return {r.C: r.mean_kl for r in rows}

    def to_csv(self):
        lines = [CSV_HEADER]
        for r in self.rows:
            lines.append(f"{r.method},{r.C},{fmt(r.mean_kl)},{fmt(r.std_kl)},{r.n_excluded}")
        return "\n".join(lines) + "\n"

    def sidecar(self):
        return {
            "format_version": self.format_version,
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
        }


def _resolve_threads(threads):
    env = os.environ.get("SIMPLEX_THREADS")
    if env:
        return max(1, int(env))
    if threads:
        return max(1, int(threads))
    return os.cpu_count() or 1


def _run_tasks(fn, tasks, threads):
    n = _resolve_threads(threads)
    if n == 1:
        return [fn(*t) for t in tasks]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(lambda t: fn(*t), tasks))


def run_fig1(cfg):
    """KL(true || approx) for every method and class count; see module doc."""
    tasks = [(cfg, C, d) for C in cfg.class_counts for d in range(cfg.datasets_per_c)]
    results = _run_tasks(_evaluate_dataset, tasks, cfg.threads)
    rows = []
    for m in cfg.method_names:
        for C in cfg.class_counts:
            kls = [res[m] for (_, c, _), res in zip(tasks, results) if c == C]
            vals = np.array([k for k in kls if k is not None], dtype=np.float64)
            n_ex = len(kls) - vals.size
            mean = float(vals.mean()) if vals.size else float("nan")
            std = float(vals.std()) if vals.size else float("nan")
            rows.append(BenchRow(m, C, mean, std, n_ex))
    return BenchReport(rows, cfg.to_dict())


@dataclass
class McScalingReport:
    # activation family -> {C: mean KL of the budgeted MC predictive}
    mean_kl: Dict[str, Dict[int, float]]
    # activation family -> log-log slope, None where undefined
    slopes: Dict[str, Optional[float]]
    degenerate: bool
    fig1: BenchReport

    def to_csv(self):
        lines = ["activation,C,mean_kl"]
        for fam, table in self.mean_kl.items():
            for C, v in table.items():
                lines.append(f"{fam},{C},{fmt(v)}")
        return "\n".join(lines) + "\n"

    def sidecar(self):
        return {
            "format_version": FORMAT_VERSION,
            "config": self.fig1.config,
            "slopes": self.slopes,
            "degenerate": self.degenerate,
        }


def loglog_slope(cs, kls):
    """Least-squares slope of log KL against log C; None if any KL <= 0."""
    kls = np.asarray(kls, dtype=np.float64)
    if np.any(~(kls > 0)) or np.any(~np.isfinite(kls)):
        return None
    return float(np.polyfit(np.log(np.asarray(cs, dtype=np.float64)), np.log(kls), 1)[0])


def run_mc_scaling(cfg, families: Sequence[str] = tuple(FAMILIES)):
    """Growth of budgeted-MC KL with C; slope near 1 means linear growth."""
    cs = sorted(set(cfg.class_counts))
    if len(cs) < 3 or cs[-1] < 10 * cs[0]:
        raise ValidationError("need at least 3 class counts spanning a decade")
    methods = tuple(f"mc_{f}" for f in families)
    sub = SyntheticConfig(**{**_cfg_kwargs(cfg), "methods": methods})
    report = run_fig1(sub)
    table, slopes = {}, {}
    for f in families:
        means = report.mean_kl(f"mc_{f}")
        table[f] = {C: means[C] for C in cs}
        slopes[f] = loglog_slope(cs, [means[C] for C in cs])
    degenerate = any(s is None for s in slopes.values())
    return McScalingReport(table, slopes, degenerate, report)


def _cfg_kwargs(cfg):
    return {
        "class_counts": cfg.class_counts,
        "datasets_per_c": cfg.datasets_per_c,
        "truth_samples": cfg.truth_samples,
        "budget": cfg.budget,
        "master_seed": cfg.master_seed,
        "ranges": cfg.ranges,
        "sigma_mode": cfg.sigma_mode,
        "kl_direction": cfg.kl_direction,
        "high_truth": cfg.high_truth,
        "methods": cfg.methods,
        "threads": cfg.threads,
    }


@dataclass
class TheoremBoundReport:
    mu_range: Tuple[float, float]
    var_range: Tuple[float, float]
    num_classes: int
    delta: float
    u: float
    Delta: float
    M: float
    # "ok", or "inapplicable" when Delta >= 1
    status: str
    kl: np.ndarray
    total_var: np.ndarray
    kappa: float
    bound_satisfied: bool
    n_violations: int

    def to_csv(self):
        lines = ["trial,kl,var_sum,bound"]
        for i, (k, v) in enumerate(zip(self.kl, self.total_var)):
            lines.append(f"{i},{fmt(k)},{fmt(v)},{fmt(self.M + self.kappa * v)}")
        return "\n".join(lines) + "\n"

    def summary(self):
        return {
            "format_version": FORMAT_VERSION,
            "mu_range": list(self.mu_range),
            "var_range": list(self.var_range),
            "C": self.num_classes,
            "delta": self.delta,
            "u": self.u,
            "Delta": self.Delta,
            "M": self.M,
            "status": self.status,
            "kappa": self.kappa,
            "bound_satisfied": self.bound_satisfied,
            "n_violations": self.n_violations,
            "max_kl": float(np.max(self.kl)) if self.kl.size else None,
        }


# Absolute allowance for rounding when comparing a KL against the bound.
BOUND_ATOL = 1e-12


def probit_error_stats(mu_range, var_range, grid=(41, 21), samples=100_000, seed=0):
    """Sup/inf statistics of the probit approximation over a (mu, var) box.

    ``q`` is a Monte-Carlo estimate of E[sigmoid(Y)] sharing one set of
    normal draws across the grid; ``q_hat`` is the probit approximation.
    Returns ``(delta, u, Delta)`` = (sup(q_hat - q), inf q, sup((q - q_hat)/q)).
    """
    mus = np.linspace(mu_range[0], mu_range[1], grid[0])
    vs = np.linspace(var_range[0], var_range[1], grid[1])
    z = make_rng(seed).standard_normal(samples)
    delta, u, Delta = -np.inf, np.inf, -np.inf
    for v in vs:
        sd = math.sqrt(v)
        s = math.sqrt(1.0 + math.pi / 8.0 * v)
        for mu in mus:
            # a point mass needs no sampling
            q = float(np.mean(sigmoid(mu + sd * z))) if sd > 0 else float(sigmoid(mu))
            qh = float(sigmoid(mu / s))
            delta = max(delta, qh - q)
            u = min(u, q)
            Delta = max(Delta, (q - qh) / q)
    return delta, u, Delta


def run_theorem_check(
    mu_range,
    var_range,
    num_classes,
    trials=100,
    seed=0,
    grid=(41, 21),
    grid_samples=100_000,
    truth_samples=100_000,
):
    """Compare empirical KL(p || p_hat) for sigmoid against ``M(K) + kappa Var``.

    ``kappa`` is the nonnegative least-squares slope of ``max(KL - M, 0)``
    against ``Var(sum_c Q_c)`` over the trials; the bound holds when every
    trial satisfies ``KL <= M + kappa Var`` up to BOUND_ATOL.
    """
    mu_range = (float(mu_range[0]), float(mu_range[1]))
    var_range = (float(var_range[0]), float(var_range[1]))
    if not (mu_range[0] <= mu_range[1] and 0 <= var_range[0] <= var_range[1]):
        raise ValidationError("box must be ordered with nonnegative variances")
    if num_classes < 2 or trials < 1:
        raise ValidationError("need at least 2 classes and 1 trial")
    delta, u, Delta = probit_error_stats(
        mu_range, var_range, grid, grid_samples, derive_seed(seed, 0)
    )
    if not u > 0:
        raise ValidationError("inf q must be positive on the box")
    if Delta < 1:
        status = "ok"
        M = math.log((1.0 + delta / u) / (1.0 - Delta))
    else:
        status = "inapplicable"
        M = math.inf
    kls, tvars = [], []
    for t in range(trials):
        rng = make_rng(derive_seed(seed, 1, t))
        mu = rng.uniform(mu_range[0], mu_range[1], num_classes)
        var = rng.uniform(var_range[0], var_range[1], num_classes)
        g = LogitGaussian(mu, var)
        p_hat = closed_form_predictive(g, Activation.SIGMOID)
        stats = mc_simplex_stats(
            g, Activation.SIGMOID, McConfig(samples=truth_samples, seed=derive_seed(seed, 2, t))
        )
        kls.append(kl_simplex(stats.predictive, p_hat))
        tvars.append(stats.total_var)
    kl = np.array(kls)
    tv = np.array(tvars)
    if status == "ok":
        excess = np.maximum(kl - M, 0.0)
        denom = float(np.sum(tv * tv))
        kappa = float(np.sum(excess * tv) / denom) if denom > 0 else 0.0
        violations = int(np.sum(kl > M + kappa * tv + BOUND_ATOL))
    else:
        kappa = 0.0
        violations = 0
    return TheoremBoundReport(
        mu_range,
        var_range,
        int(num_classes),
        float(delta),
        float(u),
        float(Delta),
        float(M),
        status,
        kl,
        tv,
        kappa,
        status == "ok" and violations == 0,
        violations,
    )


def write_outputs(out_dir, stem, csv_text, sidecar):
    os.makedirs(out_dir, exist_ok=True)
    csv_path = os.path.join(out_dir, f"{stem}.csv")
    json_path = os.path.join(out_dir, f"{stem}.json")
    with open(csv_path, "w", newline="") as fh:
        fh.write(csv_text)
    with open(json_path, "w") as fh:
        fh.write(dumps(sidecar) + "\n")
    return csv_path, json_path
