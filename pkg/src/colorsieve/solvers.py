"""Decision procedures built from colorings, evaluators and sieves.

Every solver produces a stream of *jobs* (one evaluator under one coloring)
in a fixed order and answers YES at the first job whose sieve value is
nonzero.  With ``parallelism > 1`` jobs are evaluated in batches by a
process pool, but results are consumed in stream order, so answers and
statistics are identical to the sequential run.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterator, Optional

from .graph_core import (
    ArcColoredDigraph,
    GraphError,
    OutBranching,
    exchange_out_branching,
    has_out_branching,
    maximum_matching,
)
from .kirchhoff_poly import (
    GUIDE,
    HASH,
    ColorPartition,
    SievedEvaluator,
    build_color_evaluator,
    build_kirchhoff_evaluator,
)
from .planar_pfaffian import PlanarEmbeddedGraph, build_matching_evaluator, kasteleyn_orient
from .sieve import DEFAULT_MEMORY_BUDGET, shared_table, shared_witnesses, sieve_full
from .splitters import colors_for, greedy_splitter, perfect_hash_family

ALPHA_STAR = 1.302017


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolveConfig:
    k: int
    space_mode: str = "poly"
    alpha_star: float = ALPHA_STAR
    memory_budget: int = DEFAULT_MEMORY_BUDGET
    parallelism: int = 1
    recover: bool = False

    def __post_init__(self):
        if self.k < 1:
            raise SolverError("k must be at least 1")
        if self.space_mode not in ("poly", "exp"):
            raise SolverError(f"unknown space mode {self.space_mode!r}")
        if self.alpha_star <= 1:
            raise SolverError("alpha_star must exceed 1")
        if self.parallelism < 1:
            raise SolverError("parallelism must be positive")


@dataclass
class SolveStats:
    colorings: int = 0
    skipped: int = 0
    evaluations: int = 0
    peak_table: int = 0
    elapsed: float = 0.0

    def merge(self, other: "SolveStats") -> None:
        self.colorings += other.colorings
        self.skipped += other.skipped
        self.evaluations += other.evaluations
        self.peak_table = max(self.peak_table, other.peak_table)
        self.elapsed += other.elapsed


@dataclass
class SolveReport:
    answer: bool
    witness: Optional[OutBranching] = None
    stats: SolveStats = field(default_factory=SolveStats)
    reason: str = ""


@dataclass(frozen=True)
class Job:
    """One sieve run.  ``k_target is None`` means the full sieve over all
    classes; otherwise the shared sieve looking for ``required`` plus
    ``k_target`` further classes."""

    evaluator: SievedEvaluator
    k_target: Optional[int] = None
    required: tuple[int, ...] = ()
    memory_budget: int = DEFAULT_MEMORY_BUDGET

    @property
    def evaluations(self) -> int:
        return 1 << self.evaluator.k


def run_job(job: Job) -> bool:
    if job.k_target is None:
        return sieve_full(job.evaluator) != 0
    table = shared_table(job.evaluator, job.memory_budget)
    return bool(shared_witnesses(table, job.k_target, job.required))


# None marks a coloring skipped without evaluation (an empty class forces zero).
JobStream = Iterator[Optional[Job]]


def _account(job: Optional[Job], stats: SolveStats) -> None:
    if job is None:
        stats.skipped += 1
        return
    stats.colorings += 1
    stats.evaluations += job.evaluations
    if job.k_target is not None:
        stats.peak_table = max(stats.peak_table, job.evaluations)


def run_jobs(jobs: JobStream, parallelism: int, stats: SolveStats) -> bool:
    """OR over the stream, stopping at the first positive job in stream order."""
    if parallelism <= 1:
        for job in jobs:
            _account(job, stats)
            if job is not None and run_job(job):
                return True
        return False
    batch_size = 4 * parallelism
    with ProcessPoolExecutor(max_workers=parallelism) as pool:
        while True:
            batch = []
            for job in jobs:
                batch.append(job)
                if len(batch) == batch_size:
                    break
            if not batch:
                return False
            live = [j for j in batch if j is not None]
            results = iter(pool.map(run_job, live))
            for job in batch:
                _account(job, stats)
                if job is not None and next(results):
                    return True


# --------------------------------------------------------------------------
# coloring families


class _SingleEmpty:
    """The one coloring of an empty hash target."""

    def __iter__(self):
        yield ()


def _hash_family(universe: int, k_target: int, cfg: SolveConfig, cache: dict):
    """Colorings of ``universe`` points: perfect hash family (poly) or
    ``(universe, k_target, ceil(alpha k_target))``-splitter (exp).  Returns
    ``(family, number of hash classes)``."""
    if k_target == 0:
        return _SingleEmpty(), 0
    key = (universe, k_target)
    if key not in cache:
        if cfg.space_mode == "poly":
            cache[key] = (perfect_hash_family(universe, k_target), k_target)
        else:
            fam = greedy_splitter(universe, k_target, cfg.alpha_star)
            cache[key] = (fam, colors_for(k_target, cfg.alpha_star))
    return cache[key]


def _enough_classes(vec, k_target: int) -> bool:
    return len(set(vec)) >= k_target


def _finish(report: SolveReport, started: float) -> SolveReport:
    report.stats.elapsed = time.perf_counter() - started
    return report


# --------------------------------------------------------------------------
# k-Internal Out-Branching


def _kiob_jobs(d: ArcColoredDigraph, roots, matching_arcs, cfg: SolveConfig) -> JobStream:
    k = cfg.k
    t = len(matching_arcs)
    matched = {v for a in matching_arcs for v in d.arcs[a][:2]}
    outside = [v for v in d.vertices() if v not in matched]
    cache: dict = {}
    for r in roots:
        for c in range(0, min(t, k - t) + 1):
            k_out = k - t - c
            if k_out > len(outside):
                continue
            family, hash_classes = _hash_family(len(outside), k_out, cfg, cache)
            for both in combinations(matching_arcs, c):
                base: dict[int, Optional[int]] = {}
                cls = 0
                for a in both:
                    base[d.arcs[a].tail] = cls + 1
                    base[d.arcs[a].head] = cls + 2
                    cls += 2
                for a in matching_arcs:
                    if a not in both:
                        cls += 1
                        base[d.arcs[a].tail] = cls
                        base[d.arcs[a].head] = cls
                guide = cls
                provenance = (GUIDE,) * guide + (HASH,) * hash_classes
                for vec in family:
                    if not _enough_classes(vec, k_out):
                        yield None
                        continue
                    class_of = dict(base)
                    for v in outside:
                        class_of[v] = None
                    for v, color in zip(outside, vec):
                        class_of[v] = guide + color
                    part = ColorPartition(guide + hash_classes, class_of, provenance)
                    ev = build_kirchhoff_evaluator(d, r, part)
                    if cfg.space_mode == "poly":
                        yield Job(ev)
                    else:
                        yield Job(ev, k_out, tuple(range(1, guide + 1)), cfg.memory_budget)


def solve_kiob(d: ArcColoredDigraph, cfg: SolveConfig) -> SolveReport:
    """Does ``d`` have an out-branching with at least ``cfg.k`` internal vertices?"""
    started = time.perf_counter()
    if d.colored:
        d = ArcColoredDigraph(d.n, tuple((a.tail, a.head) for a in d.arcs))
    roots = sorted(has_out_branching(d))
    if not roots:
        return _finish(SolveReport(False, reason="digraph has no out-branching"), started)
    matching = maximum_matching(d)
    t = len(matching)
    if t >= cfg.k:
        # every matching arc keeps an internal endpoint after the exchange
        witness = exchange_out_branching(d, matching) if cfg.recover else None
        return _finish(SolveReport(True, witness, reason=f"maximum matching of size {t} >= k"), started)
    report = SolveReport(False)
    jobs = _kiob_jobs(d, roots, sorted(matching.arcs), cfg)
    report.answer = run_jobs(jobs, cfg.parallelism, report.stats)
    if report.answer and cfg.recover:
        report.witness = recover_kiob_witness(d, cfg.k, cfg)
    return _finish(report, started)


def _branching_from_arcs(d: ArcColoredDigraph, arc_ids: list[int]) -> OutBranching:
    parent: list[Optional[int]] = [None] * d.n
    for a in arc_ids:
        head = d.arcs[a].head
        if parent[head - 1] is not None:
            raise GraphError(f"vertex {head} has two entering arcs")
        parent[head - 1] = a
    roots = [v for v in d.vertices() if parent[v - 1] is None]
    if len(roots) != 1:
        raise GraphError("arc set is not an out-branching")
    return OutBranching(roots[0], tuple(parent))


def recover_kiob_witness(d: ArcColoredDigraph, k: int, cfg: Optional[SolveConfig] = None) -> OutBranching:
    """Self-reduction: drop each arc whose removal keeps the instance positive.

    What survives is exactly a k-internal out-branching.
    """
    cfg = replace(cfg or SolveConfig(k), k=k, recover=False)
    if not solve_kiob(d, cfg).answer:
        raise SolverError(f"no out-branching with {k} internal vertices")
    keep = list(range(d.m))  # original arc ids of the current graph
    cur = d
    i = 0
    while i < cur.m:
        cand = cur.without_arc(i)
        if solve_kiob(cand, cfg).answer:
            cur = cand
            del keep[i]
        else:
            i += 1
    witness = _branching_from_arcs(d, keep)
    if not witness.is_valid(d) or len(witness.internal_vertices(d)) < k:
        raise SolverError("self-reduction produced an invalid witness")
    return witness


# --------------------------------------------------------------------------
# k-Colorful Out-Branching


def _colorful_jobs(d: ArcColoredDigraph, roots, cfg: SolveConfig) -> JobStream:
    t = d.num_colors
    family, hash_classes = _hash_family(t, cfg.k, cfg, {})
    provenance = (HASH,) * hash_classes
    for r in roots:
        for vec in family:
            if not _enough_classes(vec, cfg.k):
                yield None
                continue
            part = ColorPartition(hash_classes, {c: vec[c - 1] for c in range(1, t + 1)}, provenance)
            ev = build_color_evaluator(d, r, part)
            if cfg.space_mode == "poly":
                yield Job(ev)
            else:
                yield Job(ev, cfg.k, (), cfg.memory_budget)


def _require_colored(d: ArcColoredDigraph) -> None:
    if d.arcs and not d.colored:
        raise SolverError("colorful out-branching needs every arc colored")


def solve_colorful_ob(d: ArcColoredDigraph, cfg: SolveConfig) -> SolveReport:
    """Does ``d`` have an out-branching using at least ``cfg.k`` arc colors?"""
    started = time.perf_counter()
    _require_colored(d)
    roots = sorted(has_out_branching(d))
    if not roots:
        return _finish(SolveReport(False, reason="digraph has no out-branching"), started)
    if d.num_colors < cfg.k:
        return _finish(SolveReport(False, reason=f"only {d.num_colors} colors present"), started)
    report = SolveReport(False)
    report.answer = run_jobs(_colorful_jobs(d, roots, cfg), cfg.parallelism, report.stats)
    return _finish(report, started)


def solve_colorful_ob_exact(d: ArcColoredDigraph, cfg: SolveConfig) -> SolveReport:
    """Colorful out-branching when exactly ``k`` colors are present: the
    colors themselves are the classes, one full sieve per root."""
    started = time.perf_counter()
    _require_colored(d)
    if d.num_colors != cfg.k:
        raise SolverError(
            f"instance has {d.num_colors} colors, not k={cfg.k}; use solve_colorful_ob"
        )
    roots = sorted(has_out_branching(d))
    if not roots:
        return _finish(SolveReport(False, reason="digraph has no out-branching"), started)
    part = ColorPartition.identity(range(1, cfg.k + 1))
    jobs = (Job(build_color_evaluator(d, r, part)) for r in roots)
    report = SolveReport(False)
    report.answer = run_jobs(jobs, cfg.parallelism, report.stats)
    return _finish(report, started)


# --------------------------------------------------------------------------
# planar k-Colorful Perfect Matching


def solve_colorful_pm(g: PlanarEmbeddedGraph, cfg: SolveConfig) -> SolveReport:
    """Does the planar graph ``g`` have a perfect matching using at least ``cfg.k`` colors?"""
    started = time.perf_counter()
    if g.n % 2:
        return _finish(SolveReport(False, reason="odd vertex count"), started)
    t = g.num_colors
    if t < cfg.k:
        return _finish(SolveReport(False, reason=f"only {t} colors present"), started)
    orientation = kasteleyn_orient(g, allow_disconnected=True)
    family, hash_classes = _hash_family(t, cfg.k, cfg, {})
    provenance = (HASH,) * hash_classes

    def jobs() -> JobStream:
        for vec in family:
            if not _enough_classes(vec, cfg.k):
                yield None
                continue
            part = ColorPartition(hash_classes, {c: vec[c - 1] for c in range(1, t + 1)}, provenance)
            ev = build_matching_evaluator(g, orientation, part)
            if cfg.space_mode == "poly":
                yield Job(ev)
            else:
                yield Job(ev, cfg.k, (), cfg.memory_budget)

    report = SolveReport(False)
    report.answer = run_jobs(jobs(), cfg.parallelism, report.stats)
    return _finish(report, started)


