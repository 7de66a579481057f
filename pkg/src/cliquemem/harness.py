"""Monte Carlo experiments reproducing the density and error-rate curves.

Seeding scheme
--------------
Every sweep point gets its own 64-bit seed::

    point_seed = SeedSequence(base_seed, spawn_key=(profile_index, point_index)).generate_state(1, uint64)[0]

From it, the learned network uses ``SeedSequence(point_seed, spawn_key=(0,))``
and trial (or probe block) ``t`` uses ``SeedSequence(point_seed, spawn_key=(1, t))``.
Trials are therefore independent of how they are split across workers, and
each CSV row can be replayed from its ``seed`` column alone. Series that
differ only by iteration count share networks and trials.
"""
from __future__ import annotations

import csv
import enum
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from importlib import resources
from pathlib import Path
from typing import Iterable, Iterator, TextIO

import numpy as np

from . import theory
from .blurred import DistortionKind, anagram, decode_distorted, permute_pairwise
from .classify import accept, clique_mask
from .core import (
    CliqueNetwork,
    OrderProfile,
    Placement,
    SparseMessage,
    Topology,
    new_network,
    random_messages,
    sample_order,
)
from .retrieval import blind_recover, guided_recover, is_success

__all__ = [
    "Mode",
    "ExperimentSpec",
    "CurvePoint",
    "SpecFormatError",
    "InfeasibleSpecError",
    "LearnedSet",
    "point_seed",
    "build_learned",
    "run_experiment",
    "emit_csv",
    "emit_plot",
    "parse_spec",
    "format_spec",
    "load_spec",
    "preset",
    "preset_names",
    "binomial_interval",
    "CSV_COLUMNS",
]

CSV_COLUMNS = ("x", "sim_rate", "ci_low", "ci_high", "theory", "trials", "errors", "seed")
PROBE_BLOCK = 100_000


class Mode(enum.Enum):
    DENSITY = "density"
    BLIND = "blind"
    GUIDED = "guided"
    CLASSIFY = "classify"
    PAIRWISE = "pairwise"
    ANAGRAM = "anagram"
    ORDER = "order"


class SpecFormatError(ValueError):
    pass


class InfeasibleSpecError(ValueError):
    pass


@dataclass
class ExperimentSpec:
    """One figure-style experiment.

    ``sweep`` holds message counts, except in ``order`` mode where it holds
    message orders. Each entry of ``profiles`` (and of ``p0`` in order mode)
    and each iteration count gives one output series.
    """

    mode: Mode
    sweep: list[float]
    figure_id: str = "custom"
    chi: int = 100
    l: int = 64
    profiles: list[OrderProfile] = field(default_factory=lambda: [OrderProfile.constant(12)])
    placement: Placement = Placement.UNIFORM
    erased: int | None = None
    alpha: float | None = None
    iterations: list[int] = field(default_factory=lambda: [1])
    trials: int = 1000
    min_errors: int = 0
    max_trials: int | None = None
    seed: int = 0
    p0: list[float] = field(default_factory=list)
    gamma: int = 1
    fresh_network: bool = False

    @property
    def topology(self) -> Topology:
        return Topology(self.chi, self.l)

    @property
    def trial_cap(self) -> int:
        return max(self.trials, self.max_trials or self.trials)

    def erased_for(self, c: int) -> int:
        if self.erased is not None:
            return self.erased
        return int(math.floor(self.alpha * c + 0.5))

    def validate(self) -> None:
        try:
            topo = self.topology
        except ValueError as exc:
            raise InfeasibleSpecError(str(exc)) from exc
        if not self.sweep:
            raise InfeasibleSpecError("sweep is empty")
        if self.mode is Mode.ORDER:
            if not self.p0 or self.alpha is None:
                raise InfeasibleSpecError("order mode needs p0 and alpha")
            for p in self.p0:
                if not 0 < p < 1:
                    raise InfeasibleSpecError(f"p0 must lie in (0, 1), got {p}")
            if not 0 <= self.alpha < 1:
                raise InfeasibleSpecError(f"alpha must lie in [0, 1), got {self.alpha}")
            return
        if self.trials < 1:
            raise InfeasibleSpecError(f"trials must be >= 1, got {self.trials}")
        if not self.profiles:
            raise InfeasibleSpecError("no message order given")
        if any(m < 0 for m in self.sweep):
            raise InfeasibleSpecError("message counts must be non-negative")
        if any(k < 1 for k in self.iterations) or not self.iterations:
            raise InfeasibleSpecError("iteration counts must be >= 1")
        for prof in self.profiles:
            if prof.c_max > topo.chi:
                raise InfeasibleSpecError(f"order {prof.c_max} exceeds chi={topo.chi}")
        if self.mode in (Mode.BLIND, Mode.GUIDED):
            if (self.erased is None) == (self.alpha is None):
                raise InfeasibleSpecError("give exactly one of erased / alpha")
            if self.alpha is not None and not 0 <= self.alpha < 1:
                raise InfeasibleSpecError(f"alpha must lie in [0, 1), got {self.alpha}")
            for prof in self.profiles:
                for c in prof.orders:
                    if not 0 <= self.erased_for(c) < c:
                        raise InfeasibleSpecError(f"cannot erase {self.erased_for(c)} of {c} characters")
        if self.mode in (Mode.PAIRWISE, Mode.ANAGRAM) and self.placement is not Placement.CONTIGUOUS:
            raise InfeasibleSpecError("distorted decoding needs contiguous placement")
        if self.mode in (Mode.BLIND, Mode.GUIDED, Mode.PAIRWISE, Mode.ANAGRAM):
            if any(m < 1 for m in self.sweep):
                raise InfeasibleSpecError("recovery needs at least one learned message")


@dataclass
class CurvePoint:
    series: str
    x: float
    sim_rate: float
    ci_low: float
    ci_high: float
    theory: float
    trials: int
    errors: int
    seed: int
    wall_time: float = 0.0

    def row(self) -> list[str]:
        return [_fmt(self.x), _fmt(self.sim_rate), _fmt(self.ci_low), _fmt(self.ci_high),
                _fmt(self.theory), str(self.trials), str(self.errors), str(self.seed)]


def _fmt(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return ""
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


Z95 = 1.959963984540054


def binomial_interval(errors: int, trials: int) -> tuple[float, float]:
    """95% interval: normal approximation, Wilson score below 30 events."""
    if trials <= 0:
        return float("nan"), float("nan")
    p = errors / trials
    if min(errors, trials - errors) >= 30:
        half = Z95 * math.sqrt(p * (1 - p) / trials)
        return max(0.0, p - half), min(1.0, p + half)
    z2 = Z95 * Z95
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = Z95 * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return lo, hi


def point_seed(base_seed: int, profile_index: int, point_index: int) -> int:
    ss = np.random.SeedSequence(base_seed, spawn_key=(profile_index, point_index))
    return int(ss.generate_state(1, np.uint64)[0])


def _network_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(0,)))


def _trial_rng(seed: int, t: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(1, t)))


# ------------------------------------------------------------------ learned sets


@dataclass
class LearnedSet:
    """Learned messages as padded ``(M, c_max)`` arrays plus per-row orders."""

    clusters: np.ndarray
    fanals: np.ndarray
    orders: np.ndarray

    def __len__(self):
        return len(self.orders)

    def message(self, u: int) -> SparseMessage:
        c = int(self.orders[u])
        return SparseMessage.from_arrays(self.clusters[u, :c], self.fanals[u, :c])

    def contains(self, clusters: np.ndarray, fanals: np.ndarray) -> bool:
        """Whether the sorted-by-cluster message is among the learned ones."""
        c = len(clusters)
        rows = self.orders == c
        if not rows.any():
            return False
        same = (self.clusters[rows, :c] == clusters) & (self.fanals[rows, :c] == fanals)
        return bool(same.all(axis=1).any())


def build_learned(
    topology: Topology,
    profile: OrderProfile,
    count: int,
    rng: np.random.Generator,
    placement: Placement = Placement.UNIFORM,
) -> tuple[CliqueNetwork, LearnedSet]:
    """Draw ``count`` i.i.d. messages and learn them into a fresh network."""
    orders = np.asarray(sample_order(profile, rng, size=count), dtype=np.int64)
    clusters = np.zeros((count, profile.c_max), dtype=np.int64)
    fanals = np.zeros((count, profile.c_max), dtype=np.int64)
    net = new_network(topology)
    for c in profile.orders:
        idx = np.flatnonzero(orders == c)
        if not idx.size:
            continue
        cl, fa = random_messages(topology, c, len(idx), rng, placement)
        clusters[idx, :c] = cl
        fanals[idx, :c] = fa
        net.learn_batch(cl, fa)
    return net, LearnedSet(clusters, fanals, orders)


# ------------------------------------------------------------------ trials


@dataclass
class _Context:
    spec: ExperimentSpec
    profile: OrderProfile
    seed: int
    network: CliqueNetwork | None
    learned: LearnedSet | None
    count: int


_WORKER_CTX: _Context | None = None


def _init_worker(ctx: _Context) -> None:
    global _WORKER_CTX
    _WORKER_CTX = ctx


def _worker_block(bounds: tuple[int, int]) -> np.ndarray:
    return _run_block(_WORKER_CTX, *bounds)


def _run_block(ctx: _Context, lo: int, hi: int) -> np.ndarray:
    errors = np.zeros(len(ctx.spec.iterations), dtype=np.int64)
    for t in range(lo, hi):
        errors += _trial(ctx, t)
    return errors


def _trial(ctx: _Context, t: int) -> np.ndarray:
    spec = ctx.spec
    rng = _trial_rng(ctx.seed, t)
    net, learned = ctx.network, ctx.learned
    if spec.fresh_network:
        net, learned = build_learned(spec.topology, ctx.profile, ctx.count, rng, spec.placement)
    u = int(rng.integers(len(learned)))
    truth = learned.message(u)
    out = np.zeros(len(spec.iterations), dtype=np.int64)
    if spec.mode in (Mode.BLIND, Mode.GUIDED):
        c = truth.order
        drop = rng.choice(c, spec.erased_for(c), replace=False)
        partial = truth.without_clusters(np.asarray(truth.clusters)[drop])
        for k, iters in enumerate(spec.iterations):
            if spec.mode is Mode.BLIND:
                outcome = blind_recover(net, partial, iters, spec.gamma)
            else:
                outcome = guided_recover(net, partial, truth.clusters, iters, spec.gamma)
            out[k] = not is_success(outcome, truth)
    else:
        if spec.mode is Mode.PAIRWISE:
            distorted, kind = permute_pairwise(truth), DistortionKind.PAIRWISE_PERMUTED
        else:
            distorted, kind = anagram(truth, rng), DistortionKind.ANAGRAM
        for k, iters in enumerate(spec.iterations):
            outcome = decode_distorted(net, distorted, kind, iters, spec.gamma)
            out[k] = not is_success(outcome, truth)
    return out


def _count_trials(ctx: _Context, lo: int, hi: int, pool: ProcessPoolExecutor | None, workers: int):
    if pool is None:
        return _run_block(ctx, lo, hi)
    step = max(1, math.ceil((hi - lo) / workers))
    bounds = [(s, min(hi, s + step)) for s in range(lo, hi, step)]
    return sum(pool.map(_worker_block, bounds))


def _stop(spec: ExperimentSpec, done: int, errors) -> bool:
    if done >= spec.trial_cap:
        return True
    return spec.min_errors <= 0 or int(np.min(errors)) >= spec.min_errors


# ------------------------------------------------------------------ theory columns


def _theory(spec: ExperimentSpec, profile: OrderProfile, count: float, d_measured: float) -> float:
    chi, l = spec.chi, spec.l
    if spec.mode is Mode.DENSITY:
        return theory.expected_density(chi, l, profile, count)
    if spec.mode is Mode.CLASSIFY:
        return theory.p_type2(profile.c_min, d_measured)
    d = theory.expected_density(chi, l, profile, count)
    if spec.mode is Mode.BLIND:
        if spec.alpha is not None and not profile.is_constant:
            return theory.p_error_variable(chi, l, profile.c_min, profile.c_max, spec.alpha, d)
        vals = [theory.p_error_blind(chi, l, c, spec.erased_for(c), d) for c in profile.orders]
        return float(np.mean(vals))
    if spec.mode is Mode.GUIDED:
        vals = [theory.p_error_guided(l, c, spec.erased_for(c), d) for c in profile.orders]
        return float(np.mean(vals))
    kind = "pairwise" if spec.mode is Mode.PAIRWISE else "anagram"
    vals = [theory.p_error_distorted_contiguous(chi, l, c, count / profile.lam, kind) for c in profile.orders]
    return float(np.mean(vals))


# ------------------------------------------------------------------ runner


def _series_label(spec: ExperimentSpec, profile: OrderProfile, iters: int | None) -> str:
    label = f"c{profile}"
    if iters is not None and spec.mode not in (Mode.DENSITY, Mode.CLASSIFY):
        label += f"_it{iters}"
    return label


def run_experiment(spec: ExperimentSpec, workers: int = 1) -> Iterator[CurvePoint]:
    """Run ``spec`` and yield one :class:`CurvePoint` per series and sweep value.

    Raises :class:`InfeasibleSpecError` before doing any work if the spec
    cannot be run.
    """
    spec.validate()
    if spec.mode is Mode.ORDER:
        yield from _run_order(spec)
        return
    for pi, profile in enumerate(spec.profiles):
        for xi, m in enumerate(spec.sweep):
            yield from _run_point(spec, pi, profile, xi, int(m), workers)


def _run_order(spec: ExperimentSpec) -> Iterator[CurvePoint]:
    nan = float("nan")
    for p0 in spec.p0:
        for c in spec.sweep:
            m = theory.diversity_vs_order(spec.chi, spec.l, spec.alpha, p0, c)
            yield CurvePoint(f"p0_{p0:g}", c, nan, nan, nan, m, 0, 0, spec.seed)


def _run_point(spec, pi, profile, xi, count, workers) -> Iterator[CurvePoint]:
    seed = point_seed(spec.seed, pi, xi)
    start = time.perf_counter()
    topo = spec.topology
    net = learned = None
    if not spec.fresh_network or spec.mode in (Mode.DENSITY, Mode.CLASSIFY):
        net, learned = build_learned(topo, profile, count, _network_rng(seed), spec.placement)

    if spec.mode is Mode.DENSITY:
        q = topo.q_bits
        lo, hi = binomial_interval(net.edge_count, q)
        yield CurvePoint(_series_label(spec, profile, None), count, net.density(), lo, hi,
                         _theory(spec, profile, count, net.density()), q, net.edge_count, seed,
                         time.perf_counter() - start)
        return

    if spec.mode is Mode.CLASSIFY:
        trials, errors = _classify_point(spec, profile, net, learned, seed)
        d = net.density()
        lo, hi = binomial_interval(errors, trials)
        yield CurvePoint(_series_label(spec, profile, None), d, errors / max(trials, 1), lo, hi,
                         _theory(spec, profile, count, d), trials, errors, seed,
                         time.perf_counter() - start)
        return

    ctx = _Context(spec, profile, seed, net, learned, count)
    pool = None
    if workers > 1:
        # one pool per point: workers receive this point's network once
        pool = ProcessPoolExecutor(max_workers=workers, initializer=_init_worker, initargs=(ctx,))
    try:
        errors = np.zeros(len(spec.iterations), dtype=np.int64)
        done = 0
        target = spec.trials
        while True:
            errors += _count_trials(ctx, done, target, pool, workers)
            done = target
            if _stop(spec, done, errors):
                break
            target = min(spec.trial_cap, done + spec.trials)
    finally:
        if pool is not None:
            pool.shutdown()
    elapsed = time.perf_counter() - start
    th = _theory(spec, profile, count, float("nan"))
    for k, iters in enumerate(spec.iterations):
        e = int(errors[k])
        lo, hi = binomial_interval(e, done)
        yield CurvePoint(_series_label(spec, profile, iters), count, e / done, lo, hi, th,
                         done, e, seed, elapsed)


def _classify_point(spec, profile, net, learned, seed) -> tuple[int, int]:
    """Count false acceptances among random probes on random clusters.

    Probes are screened with the vectorised clique test; every candidate is
    then run through the decoder's :func:`accept`. Probes equal to a learned
    message are dropped from the count.
    """
    if not profile.is_constant:
        raise InfeasibleSpecError("classification needs a constant message order")
    c = profile.c_min
    topo = spec.topology
    trials = errors = 0
    block = 0
    while True:
        rng = _trial_rng(seed, block)
        size = min(PROBE_BLOCK, spec.trial_cap - trials) if spec.trial_cap > trials else 0
        if size <= 0:
            break
        cl, fa = random_messages(topo, c, size, rng)
        hits = np.flatnonzero(clique_mask(net, cl, fa))
        excluded = 0
        for h in hits:
            if learned.contains(cl[h], fa[h]):
                excluded += 1
            elif accept(net, SparseMessage.from_arrays(cl[h], fa[h])):
                errors += 1
        trials += size - excluded
        block += 1
        if trials >= spec.trials and _stop(spec, trials, [errors]):
            break
    return trials, errors


# ------------------------------------------------------------------ output


def emit_csv(points: Iterable[CurvePoint], destination: str | Path | TextIO) -> None:
    """Write points with the fixed column set; no timing data, so output is reproducible."""
    if hasattr(destination, "write"):
        _write_csv(points, destination)
        return
    with open(destination, "w", newline="") as fh:
        _write_csv(points, fh)


def _write_csv(points, fh) -> None:
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for p in points:
        w.writerow(p.row())


_AXES = {
    Mode.DENSITY: ("messages learned M", "density", False),
    Mode.BLIND: ("messages learned M", "error rate", True),
    Mode.GUIDED: ("messages learned M", "error rate", True),
    Mode.PAIRWISE: ("messages learned M", "error rate", True),
    Mode.ANAGRAM: ("messages learned M", "error rate", True),
    Mode.CLASSIFY: ("density d", "type II error rate", True),
    Mode.ORDER: ("message order c", "diversity M", False),
}


def emit_plot(points: Iterable[CurvePoint], destination: str | Path, mode: Mode = Mode.BLIND,
              title: str | None = None) -> None:
    """Line chart of simulated (markers) and theoretical (lines) values, as SVG."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    points = list(points)
    xlabel, ylabel, logy = _AXES[mode]
    fig, ax = plt.subplots(figsize=(6, 4.5))
    series: dict[str, list[CurvePoint]] = {}
    for p in points:
        series.setdefault(p.series, []).append(p)
    for label, pts in series.items():
        xs = [p.x for p in pts]
        sim = [p.sim_rate for p in pts]
        th = [p.theory for p in pts]
        if not all(math.isnan(v) for v in sim):
            ys = [v if not (logy and v <= 0) else np.nan for v in sim]
            ax.plot(xs, ys, "o", label=f"{label} simulated")
        if not all(math.isnan(v) for v in th):
            ax.plot(xs, th, "-", label=f"{label} theory")
    if logy:
        ax.set_yscale("log")
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if title:
        ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    if series:
        ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(destination, format="svg", metadata={"Date": None})
    plt.close(fig)


# ------------------------------------------------------------------ spec files


def _parse_profile(tok: str) -> OrderProfile:
    if ".." in tok:
        lo, hi = tok.split("..")
        return OrderProfile.uniform(int(lo), int(hi))
    return OrderProfile.constant(int(tok))


def _split(value: str) -> list[str]:
    return value.replace(",", " ").split()


def _number(tok: str) -> float:
    v = float(tok)
    return int(v) if v.is_integer() else v


_BOOL = {"true": True, "yes": True, "1": True, "false": False, "no": False, "0": False}


def parse_spec(text: str) -> ExperimentSpec:
    """Parse the flat ``key = value`` spec format (``#`` starts a comment)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SpecFormatError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        raw[key] = value
    known = {f.name for f in fields(ExperimentSpec)} | {"figure", "order"}
    unknown = set(raw) - known
    if unknown:
        raise SpecFormatError(f"unknown keys: {', '.join(sorted(unknown))}")
    if "mode" not in raw or "sweep" not in raw:
        raise SpecFormatError("spec needs at least 'mode' and 'sweep'")
    try:
        kw = dict(
            mode=Mode(raw["mode"]),
            sweep=[_number(t) for t in _split(raw["sweep"])],
        )
        if "figure" in raw or "figure_id" in raw:
            kw["figure_id"] = raw.get("figure", raw.get("figure_id"))
        for key in ("chi", "l", "trials", "min_errors", "max_trials", "seed", "gamma", "erased"):
            if key in raw:
                kw[key] = int(raw[key])
        if "alpha" in raw:
            kw["alpha"] = float(raw["alpha"])
        if "order" in raw or "profiles" in raw:
            kw["profiles"] = [_parse_profile(t) for t in _split(raw.get("order", raw.get("profiles")))]
        if "placement" in raw:
            kw["placement"] = Placement(raw["placement"])
        if "iterations" in raw:
            kw["iterations"] = [int(t) for t in _split(raw["iterations"])]
        if "p0" in raw:
            kw["p0"] = [float(t) for t in _split(raw["p0"])]
        if "fresh_network" in raw:
            kw["fresh_network"] = _BOOL[raw["fresh_network"].lower()]
    except (ValueError, KeyError) as exc:
        raise SpecFormatError(f"bad value: {exc}") from exc
    return ExperimentSpec(**kw)


def format_spec(spec: ExperimentSpec) -> str:
    lines = [
        f"figure = {spec.figure_id}",
        f"mode = {spec.mode.value}",
        f"chi = {spec.chi}",
        f"l = {spec.l}",
        f"order = {' '.join(str(p) for p in spec.profiles)}",
        f"placement = {spec.placement.value}",
    ]
    if spec.erased is not None:
        lines.append(f"erased = {spec.erased}")
    if spec.alpha is not None:
        lines.append(f"alpha = {spec.alpha!r}")
    lines += [
        f"iterations = {' '.join(map(str, spec.iterations))}",
        f"sweep = {' '.join(_fmt(m) for m in spec.sweep)}",
        f"trials = {spec.trials}",
        f"min_errors = {spec.min_errors}",
    ]
    if spec.max_trials is not None:
        lines.append(f"max_trials = {spec.max_trials}")
    lines.append(f"seed = {spec.seed}")
    if spec.p0:
        lines.append(f"p0 = {' '.join(repr(p) for p in spec.p0)}")
    if spec.gamma != 1:
        lines.append(f"gamma = {spec.gamma}")
    if spec.fresh_network:
        lines.append("fresh_network = true")
    return "\n".join(lines) + "\n"


def load_spec(path: str | Path) -> ExperimentSpec:
    return parse_spec(Path(path).read_text())


#: Short figure names mapped to their first (or only) preset.
PRESET_ALIASES = {"fig3": "fig3a", "fig5": "fig5_c9", "fig7": "fig7_6_18"}


def preset_names() -> list[str]:
    files = resources.files("cliquemem") / "presets"
    return sorted(p.name[:-5] for p in files.iterdir() if p.name.endswith(".spec"))


def preset(name: str, **overrides) -> ExperimentSpec:
    """Load a shipped figure preset, e.g. ``preset("fig3a", trials=500)``."""
    name = PRESET_ALIASES.get(name, name)
    res = resources.files("cliquemem") / "presets" / f"{name}.spec"
    if not res.is_file():
        raise KeyError(f"no preset {name!r}; available: {', '.join(preset_names())}")
    spec = parse_spec(res.read_text())
    return replace(spec, **overrides) if overrides else spec
