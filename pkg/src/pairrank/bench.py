"""Two-phase convergence measurement and trace capture.

Phase one solves the instance to high precision with the fast rule; phase two
counts, per algorithm and per random restart, the sweeps needed to bring
every player's p1 = pi/(pi+1) within a criterion tolerance of that reference.
p1 is better behaved across players than the raw strengths, so the per-player
criterion and the RMS metric both live on that scale.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .core import (
    ComparisonData,
    MaxSweepsExceeded,
    PairRankError,
    SolverSpec,
    Strengths,
    validate,
)
from .solvers import (
    _initial_state,
    fit,
    objective_for,
    prepare_initial_state,
    rule_for,
    sweep,
)
from .synth import _logistic_from


@dataclass(frozen=True)
class BenchSpec:
    """Replicated convergence measurement over a list of solver specs."""

    algorithms: tuple[SolverSpec, ...]
    criterion_tol: float = 1e-6
    replicates: int = 100
    seed_base: int = 0
    reference_tol: float = 1e-13

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        if not self.algorithms:
            raise PairRankError("need at least one algorithm to benchmark")
        if self.replicates < 1:
            raise PairRankError("need at least one replicate")
        if not (0 < self.reference_tol <= 0.01 * self.criterion_tol):
            raise PairRankError("reference tolerance must be far below the criterion tolerance")


@dataclass(frozen=True)
class AlgorithmBench:
    label: str
    spec: SolverSpec
    iterations: np.ndarray
    mean: float
    std: float
    speed_up_vs_zermelo: float | None


@dataclass(frozen=True)
class BenchReport:
    spec: BenchSpec
    results: tuple[AlgorithmBench, ...]

    def for_label(self, label: str) -> AlgorithmBench:
        for r in self.results:
            if r.label == label:
                return r
        raise KeyError(label)


def reference_fit(
    data: ComparisonData,
    spec: SolverSpec,
    tolerance: float = 1e-13,
    max_sweeps: int = 1_000_000,
) -> Strengths:
    """Solve the instance to high precision with the fast rule of spec's mode.

    The result serves as the fixed reference against which iteration counts
    and RMS deviations are measured; it is independent of the initialization
    to well below the measurement tolerances.
    """
    ties_model = "newman-ties" if spec.ties_model == "davidson" else spec.ties_model
    ref_spec = replace(
        spec,
        algorithm="newman",
        alpha=0.0,
        ties_model=ties_model,
        tolerance=tolerance,
        max_sweeps=max_sweeps,
    )
    result = fit(data, ref_spec, record_trace=False)
    if result.terminated != "converged":
        raise MaxSweepsExceeded(
            f"reference fit did not reach tolerance {tolerance:g} in {max_sweeps} sweeps"
        )
    return result.strengths


def rms_p1_deviation(pi: np.ndarray, reference: np.ndarray) -> float:
    """Root-mean-square gap of p1 = pi/(pi+1) between a state and a reference."""
    pi = np.asarray(pi, dtype=np.float64)
    reference = np.asarray(reference, dtype=np.float64)
    if pi.shape != reference.shape:
        raise PairRankError(f"length mismatch: {pi.shape} vs {reference.shape}")
    diff = pi / (pi + 1.0) - reference / (reference + 1.0)
    return float(np.sqrt(np.mean(diff**2)))


def _within(state: Strengths, ref: Strengths, tol: float, check_nu: bool) -> bool:
    if float(np.max(np.abs(state.p1() - ref.p1()))) >= tol:
        return False
    if check_nu and abs(state.nu - ref.nu) >= tol:
        return False
    return True


def iterations_to_convergence(
    data: ComparisonData,
    spec: SolverSpec,
    reference: Strengths,
    criterion_tol: float = 1e-6,
    initial: Strengths | None = None,
) -> int:
    """Full sweeps until every p1 (and nu, for ties) is within tol of the reference.

    The state before the first sweep already counts: starting at the
    reference itself reports zero sweeps.
    """
    validate(data, spec)
    working = data.with_half_win_ties() if spec.ties_model == "half-win" else data
    rule = rule_for(spec)
    check_nu = rule.uses_ties and working.total_ties > 0
    if check_nu and reference.nu is None:
        raise PairRankError("reference for a ties rule must carry a tie parameter")

    if initial is not None:
        state = prepare_initial_state(initial, rule)
    else:
        state = _initial_state(working, spec, rule)

    for k in range(spec.max_sweeps + 1):
        if _within(state, reference, criterion_tol, check_nu):
            return k
        if k == spec.max_sweeps:
            break
        state = sweep(working, state, rule)
    raise MaxSweepsExceeded(
        f"{spec.label()} did not reach the convergence criterion in {spec.max_sweeps} sweeps"
    )


def _family_key(spec: SolverSpec) -> tuple:
    rule = rule_for(spec)
    if rule.uses_ties:
        return ("ties",)
    return (spec.mode, spec.ties_model == "half-win")


def _references(
    data: ComparisonData, specs: tuple[SolverSpec, ...], tolerance: float
) -> dict[tuple, Strengths]:
    refs: dict[tuple, Strengths] = {}
    for spec in specs:
        key = _family_key(spec)
        if key not in refs:
            refs[key] = reference_fit(data, spec, tolerance=tolerance)
    return refs


def _is_classic(spec: SolverSpec) -> bool:
    rule = rule_for(spec)
    return rule.kind in ("map-zermelo", "davidson") or (
        rule.kind == "alpha" and rule.alpha == 1.0
    )


def run_bench(data: ComparisonData, bench: BenchSpec) -> BenchReport:
    """Measure mean iterations to convergence per algorithm over replicates.

    Replicate r draws one logistic initialization from seed_base + r and every
    algorithm starts from that same state, so differences in counts reflect
    the update rules alone.  Speed-ups are reported against the classic-rule
    member of the same model family, when one is present in the list.
    """
    for spec in bench.algorithms:
        validate(data, spec)
    refs = _references(data, bench.algorithms, bench.reference_tol)

    counts = np.zeros((len(bench.algorithms), bench.replicates), dtype=np.int64)
    n = data.n_players
    for r in range(bench.replicates):
        rng = np.random.default_rng(bench.seed_base + r)
        pi0 = np.exp(_logistic_from(rng, n))
        for a, spec in enumerate(bench.algorithms):
            rule = rule_for(spec)
            start = Strengths(pi0, 1.0 if rule.uses_ties else None)
            counts[a, r] = iterations_to_convergence(
                data,
                spec,
                refs[_family_key(spec)],
                criterion_tol=bench.criterion_tol,
                initial=start,
            )

    baselines: dict[tuple, float] = {}
    for a, spec in enumerate(bench.algorithms):
        if _is_classic(spec) and _family_key(spec) not in baselines:
            baselines[_family_key(spec)] = float(np.mean(counts[a]))

    results = []
    for a, spec in enumerate(bench.algorithms):
        mean = float(np.mean(counts[a]))
        std = float(np.std(counts[a], ddof=1)) if bench.replicates > 1 else 0.0
        base = baselines.get(_family_key(spec))
        speed_up = (base / mean) if (base is not None and mean > 0) else None
        results.append(
            AlgorithmBench(
                label=spec.label(),
                spec=spec,
                iterations=counts[a].copy(),
                mean=mean,
                std=std,
                speed_up_vs_zermelo=speed_up,
            )
        )
    return BenchReport(spec=bench, results=tuple(results))


@dataclass(frozen=True)
class TraceTable:
    """Per-algorithm, per-sweep objective and RMS deviation, CSV-shaped."""

    rows: tuple[tuple[str, int, float, float], ...]

    columns = ("algorithm", "sweep", "objective", "rms_p1")

    def for_algorithm(self, label: str) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        picked = [(s, o, m) for (lbl, s, o, m) in self.rows if lbl == label]
        if not picked:
            raise KeyError(label)
        sweeps, obj, rms = zip(*picked)
        return np.array(sweeps), np.array(obj), np.array(rms)

    def labels(self) -> list[str]:
        seen = dict.fromkeys(lbl for (lbl, _, _, _) in self.rows)
        return list(seen)


def trace_run(
    data: ComparisonData,
    specs: list[SolverSpec] | tuple[SolverSpec, ...],
    n_sweeps: int,
    seed: int = 0,
    reference_tol: float = 1e-13,
) -> TraceTable:
    """Run each spec for a fixed number of sweeps from one shared start.

    Records, after every sweep, the spec's objective value and the RMS p1
    deviation from that spec's own high-precision reference.  Row 0 is the
    shared initial state.
    """
    specs = tuple(specs)
    for spec in specs:
        validate(data, spec)
    refs = _references(data, specs, reference_tol)

    pi0 = np.exp(_logistic_from(np.random.default_rng(seed), data.n_players))
    rows: list[tuple[str, int, float, float]] = []
    for spec in specs:
        working = data.with_half_win_ties() if spec.ties_model == "half-win" else data
        rule = rule_for(spec)
        objective = objective_for(spec, working)
        ref = refs[_family_key(spec)]
        state = prepare_initial_state(
            Strengths(pi0, 1.0 if rule.uses_ties else None), rule
        )
        label = spec.label()
        for k in range(n_sweeps + 1):
            rows.append(
                (label, k, objective.value(state), rms_p1_deviation(state.pi, ref.pi))
            )
            if k < n_sweeps:
                state = sweep(working, state, rule)
    return TraceTable(rows=tuple(rows))
