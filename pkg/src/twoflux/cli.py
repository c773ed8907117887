"""Experiment registry and command-line driver.

Subcommands:
  study    convergence study over a delta list, CSV + gnuplot output
  run      a single solve (front tracking or Godunov) with snapshot output
  riemann  one interface Riemann query, printed as a table
  suite    the property batteries (conservation, admissibility, bounds)

Identical configurations (including seeds) produce byte-identical outputs,
except for the measured runtime_s column of the records CSV.
"""

from __future__ import annotations

import argparse
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import analysis, discretize, fluxes, godunov, tracker
from .errors import CFLError, ConfigError, TwoFluxError
from .problems import EXPERIMENTS, TwoFluxProblem, experiment
from .riemann import gamma_check, solve_interface
from .stepfn import StepFunction, read_staircase, write_staircase

DEFAULT_DELTAS = tuple(2.0 ** -k for k in range(3, 9))
REFERENCE_CHOICES = ("auto", "fronttracking", "godunov")


@dataclass(frozen=True)
class ExperimentConfig:
    problem: TwoFluxProblem
    deltas: tuple = DEFAULT_DELTAS
    restricted: bool = True
    reference: str = "auto"
    out_dir: str | None = None
    seed: int = 0
    event_log: bool = False

    def __post_init__(self):
        if not self.deltas or any(d <= 0 for d in self.deltas):
            raise ConfigError("deltas must be positive")
        if any(b >= a for a, b in zip(self.deltas, self.deltas[1:])):
            raise ConfigError("deltas must be strictly decreasing")
        if self.reference not in REFERENCE_CHOICES:
            raise ConfigError(f"reference must be one of {REFERENCE_CHOICES}")


# ---------------------------------------------------------------------------
# reference solutions
# ---------------------------------------------------------------------------


def _fronttracking_reference(prob: TwoFluxProblem, delta_ref: float,
                             restricted: bool) -> StepFunction:
    state = prob.tracker_state(delta_ref, restricted=restricted)
    state.advance(prob.T)
    return state.sample()


def _godunov_reference(prob: TwoFluxProblem, target_error: float):
    """Refine the oracle grid until its Richardson error estimate is small.

    Successive-refinement distances stand in for the unknown true error; the
    grid is refined until the estimate drops below a tenth of target_error
    (or a hard resolution floor is reached).
    """
    lam = prob.cfl_lambda()
    dx = 2.0 ** -6
    profiles = []
    for _ in range(6):
        grid = godunov.run(prob.g, prob.f, prob.u0, prob.u_left, prob.u_right,
                           prob.X, prob.T, dx, lam)
        profiles.append(godunov.profile(grid))
        if len(profiles) >= 2:
            est = analysis.l1_distance(profiles[-2], profiles[-1])
            if est < 0.1 * target_error:
                break
        dx *= 0.5
    return profiles[-1]


def _measure_factory(config: ExperimentConfig):
    """Returns (measure(StepFunction) -> float, reference description)."""
    prob = config.problem
    exact = prob.exact_solution(prob.T) if config.reference == "auto" else None
    if exact is not None:
        span = prob.bound_constants().Y + 1.0

        def measure(snap: StepFunction) -> float:
            return analysis.l1_distance_to_profile(snap, exact, -span, span)

        return measure, "exact characteristic solution"
    if config.reference in ("auto", "fronttracking"):
        delta_ref = min(config.deltas) / 16.0
        ref = _fronttracking_reference(prob, delta_ref, config.restricted)
        return (lambda snap: analysis.l1_distance(snap, ref)), \
            f"front tracking at delta={delta_ref:g}"
    # godunov reference: the error scale at the finest delta, estimated from
    # the distance between the two finest front tracking resolutions
    fine = _fronttracking_reference(prob, min(config.deltas), config.restricted)
    finer = _fronttracking_reference(prob, min(config.deltas) / 2, config.restricted)
    provisional = max(analysis.l1_distance(fine, finer), 1e-5)
    ref = _godunov_reference(prob, provisional)
    return (lambda snap: analysis.l1_distance(snap, ref)), "refined Godunov oracle"


# ---------------------------------------------------------------------------
# study
# ---------------------------------------------------------------------------


def _study_one(prob: TwoFluxProblem, delta: float, restricted: bool,
               constants, measure) -> analysis.ErrorRecord:
    t0 = time.perf_counter()
    state = prob.tracker_state(delta, restricted=restricted)
    state.advance(prob.T)
    snap = state.sample()
    err = measure(snap)
    if restricted:
        gap = 0.0
    else:
        gap = analysis.l1_distance(prob.initial_data(delta, False), prob.u0)
    if constants.K3 is not None:
        rhs = analysis.bv_bound_rhs(constants, delta, restricted, gap)
    else:
        rhs = analysis.main_bound_rhs(constants, delta, restricted, gap)
    return analysis.ErrorRecord(delta, err, rhs, time.perf_counter() - t0,
                                state.peak_front_count)


def run_convergence_study(config: ExperimentConfig):
    """Records plus fitted rate for every delta in the configuration.

    Deltas run concurrently; results are merged in delta order so output is
    deterministic.
    """
    prob = config.problem
    constants = prob.bound_constants()
    measure, ref_desc = _measure_factory(config)
    with ThreadPoolExecutor(max_workers=min(8, len(config.deltas))) as pool:
        futures = [
            pool.submit(_study_one, prob, d, config.restricted, constants, measure)
            for d in config.deltas
        ]
        records = [f.result() for f in futures]
    fit = analysis.fit_rate(records)
    if config.out_dir:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{prob.name}-records.csv").write_text(analysis.records_to_csv(records))
        (out / f"{prob.name}-study.dat").write_text(analysis.records_to_gnuplot(records))
    return records, fit, ref_desc


def _print_study(records, fit, ref_desc, file=sys.stdout):
    print(f"reference: {ref_desc}", file=file)
    print("delta      l1_error     bound_rhs    order  runtime_s  fronts", file=file)
    prev = None
    for r in records:
        if prev is not None and r.l1_error > 0 and prev.l1_error > 0:
            order = math.log(prev.l1_error / r.l1_error) / math.log(prev.delta / r.delta)
            order_s = f"{order:5.2f}"
        else:
            order_s = "    -"
        print(f"{r.delta:<10.4g} {r.l1_error:<12.4e} {r.bound_rhs:<12.4e} "
              f"{order_s}  {r.runtime:<9.3f}  {r.front_count}", file=file)
        prev = r
    print(f"fitted rate: {fit.slope:.4f}", file=file)
    within = all(r.l1_error <= r.bound_rhs for r in records)
    print(f"errors within guaranteed bound: {'yes' if within else 'NO'}", file=file)


# ---------------------------------------------------------------------------
# single runs
# ---------------------------------------------------------------------------


def run_single(config: ExperimentConfig, mode: str, delta: float,
               times, dx: float | None = None):
    """One solver run; returns [(time, StepFunction)] snapshots."""
    prob = config.problem
    times = sorted(set(float(t) for t in times))
    if any(t < 0 or t > prob.T + 1e-12 for t in times):
        raise ConfigError(f"snapshot times must lie in [0, {prob.T}]")
    snaps = []
    if mode == "tracking":
        state = prob.tracker_state(delta, restricted=config.restricted,
                                   record_events=config.event_log)
        for t in times:
            state.advance(t)
            snaps.append((t, state.sample()))
        extra = state
    elif mode == "godunov":
        gd, fd = prob.interpolants(delta)
        u0d = prob.initial_data(delta, config.restricted)
        lam = prob.cfl_lambda()
        if dx is None:
            dx = delta / 4.0
        remaining = list(times)
        collected = {}
        raw_rows = {}

        def collect(grid):
            while remaining and grid.time >= remaining[0] - 1e-12:
                t = remaining.pop(0)
                collected[t] = godunov.profile(grid)
                raw_rows[t] = (grid.centers(), grid.cells.copy())

        grid = godunov.run(gd, fd, u0d, prob.u_left, prob.u_right, prob.X,
                           prob.T, dx, lam, on_step=collect)
        for t in times:
            if t not in collected:
                collected[t] = godunov.profile(grid)
                raw_rows[t] = (grid.centers(), grid.cells.copy())
            snaps.append((t, collected[t]))
        extra = grid
    else:
        raise ConfigError(f"unknown mode '{mode}'")
    if config.out_dir:
        out = Path(config.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for t, snap in snaps:
            tag = f"{prob.name}-{mode}-t{t:g}"
            if mode == "godunov":
                centers, cells = raw_rows[t]
                lines = ["x_center,value"]
                lines += [f"{float(x)!r},{float(v)!r}" for x, v in zip(centers, cells)]
                (out / f"{tag}.csv").write_text("\n".join(lines) + "\n")
            else:
                (out / f"{tag}.csv").write_text(write_staircase(snap))
        if config.event_log and mode == "tracking" and extra.events is not None:
            lines = ["time,location,incoming,outgoing"]
            for ev in extra.events:
                lines.append(f"{ev.time!r},{ev.location!r},"
                             f"{len(ev.incoming)},{len(ev.outgoing)}")
            (out / f"{prob.name}-events.csv").write_text("\n".join(lines) + "\n")
    return snaps


# ---------------------------------------------------------------------------
# property suite
# ---------------------------------------------------------------------------


@dataclass
class SuiteResult:
    name: str
    passed: bool
    detail: str = ""


def _random_staircase(rng, prob: TwoFluxProblem, max_jumps: int = 10) -> StepFunction:
    nj = int(rng.integers(1, max_jumps))
    pos = np.sort(rng.uniform(-0.9 * prob.X, 0.9 * prob.X, nj))
    pos = pos[np.concatenate([[True], np.diff(pos) > 1e-9])]
    lo = prob.u_min + 0.02 * prob.span
    hi = prob.u_max - 0.02 * prob.span
    vals = rng.uniform(lo, hi, pos.size + 1)
    return StepFunction(pos, vals)


def run_property_suite(config: ExperimentConfig, delta: float = 2.0 ** -4,
                       trials: int = 8):
    """Execute the invariant batteries; returns a list of SuiteResult."""
    prob = config.problem
    rng = np.random.default_rng(config.seed)
    gd, fd = prob.interpolants(delta)
    results: list[SuiteResult] = []

    def battery(name):
        def wrap(fn):
            try:
                detail = fn() or ""
                results.append(SuiteResult(name, True, detail))
            except AssertionError as exc:
                results.append(SuiteResult(name, False, str(exc)))
            except TwoFluxError as exc:
                results.append(SuiteResult(name, False, f"{type(exc).__name__}: {exc}"))
            return fn
        return wrap

    constants = prob.bound_constants()
    states = []
    for _ in range(trials):
        u0 = _random_staircase(rng, prob)
        st = tracker.init(gd, fd, u0, prob.T)
        st.advance(prob.T)
        states.append((u0, st))

    @battery("rankine_hugoniot")
    def _rh():
        worst = 0.0
        for _, st in states:
            for fr in st.fronts():
                if fr.kind == "interface":
                    continue
                q = gd if (fr.position < 0 or (fr.position == 0 and fr.speed <= 0)) else fd
                lhs = fr.speed * (fr.right_state - fr.left_state)
                rhs = float(q(fr.right_state)) - float(q(fr.left_state))
                err = abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))
                worst = max(worst, err)
                assert err <= 1e-12, f"RH relative error {err}"
        return f"worst relative defect {worst:.2e}"

    @battery("invariant_region")
    def _region():
        for _, st in states:
            snap = st.sample()
            assert snap.values.min() >= prob.u_min - 1e-12, f"below u_min: {snap.values.min()}"
            assert snap.values.max() <= prob.u_max + 1e-12, f"above u_max: {snap.values.max()}"
        return f"{len(states)} runs stayed in [{prob.u_min}, {prob.u_max}]"

    @battery("mass_balance")
    def _mass():
        scale = max(1.0, prob.T * max(gd.sup_norm, fd.sup_norm))
        worst = 0.0
        for u0, st in states:
            snap = st.sample()
            h1 = snap.indefinite_integral(u0.left_value)
            h0 = u0.indefinite_integral(u0.left_value)
            probe = constants.Y + abs(u0.positions).max() + 1.0
            dm = h1(probe) - h0(probe)
            expect = prob.T * (float(gd(u0.left_value)) - float(fd(u0.right_value)))
            err = abs(dm - expect)
            worst = max(worst, err)
            assert err <= 1e-10 * scale, f"mass defect {err}"
        return f"worst defect {worst:.2e}"

    @battery("l1_contraction")
    def _contraction():
        for _ in range(trials):
            u0 = _random_staircase(rng, prob)
            perturbed = np.clip(
                u0.values + rng.uniform(-0.05, 0.05, u0.values.size) * prob.span,
                prob.u_min, prob.u_max,
            )
            perturbed[0] = u0.values[0]
            perturbed[-1] = u0.values[-1]
            v0 = StepFunction(u0.positions, perturbed)
            d0 = analysis.l1_distance(u0, v0)
            su = tracker.init(gd, fd, u0, prob.T).advance(prob.T)
            sv = tracker.init(gd, fd, v0, prob.T).advance(prob.T)
            dT = analysis.l1_distance(su.sample(), sv.sample())
            assert dT <= d0 + 1e-12, f"contraction violated: {dT} > {d0}"
        return f"{trials} perturbed pairs contracted"

    @battery("gamma_traces")
    def _gamma():
        count = 0
        for _, st in states:
            for t, um, up in st.interface_traces():
                res = gamma_check(gd, fd, um, up)
                assert res.passed, f"trace ({um}, {up}) at t={t} fails admissibility"
                count += 1
        return f"{count} trace pairs admissible"

    @battery("support_confinement")
    def _support():
        for _, st in states:
            for fr in st.fronts():
                assert abs(fr.position) <= constants.Y + 1e-10, \
                    f"front at {fr.position} beyond Y={constants.Y}"
        return f"all fronts inside [-{constants.Y}, {constants.Y}]"

    @battery("hat_stability_tracker")
    def _hat_tracker():
        d1, d2 = delta, delta / 4.0
        g1, f1 = prob.interpolants(d1)
        g2, f2 = prob.interpolants(d2)
        u1 = prob.initial_data(d1)
        u2 = prob.initial_data(d2)
        s1 = tracker.init(g1, f1, u1, prob.T).advance(prob.T)
        s2 = tracker.init(g2, f2, u2, prob.T).advance(prob.T)
        lhs = analysis.linf_hat_distance(s1.sample(), s2.sample(), prob.u_left)
        gap = max(fluxes.sup_gap(g1, g2), fluxes.sup_gap(f1, f2))
        rhs = analysis.linf_hat_distance(u1, u2, prob.u_left) + prob.T * gap
        assert lhs <= rhs + 1e-12, f"integrated distance {lhs} exceeds bound {rhs}"
        return f"{lhs:.3e} <= {rhs:.3e}"

    @battery("hat_stability_godunov")
    def _hat_godunov():
        dx = 2.0 ** -5
        lam = prob.cfl_lambda()
        u0d = prob.initial_data(delta)
        ga = godunov.make_grid(prob.g, prob.f, prob.u0, prob.u_left, prob.u_right,
                               prob.X, prob.T, dx, lam)
        gb = godunov.make_grid(gd, fd, u0d, prob.u_left, prob.u_right,
                               prob.X, prob.T, dx, lam)
        pad = (prob.g.deriv2_bound + prob.f.deriv2_bound) \
            * (prob.span / fluxes.DENSE_GRID) ** 2 / 8.0
        gap = max(fluxes.sup_gap(prob.g, gd), fluxes.sup_gap(prob.f, fd)) + pad
        n = godunov.step_count(prob.T, ga.dt)
        prev = float(np.max(np.abs(ga.hat - gb.hat)))
        for _ in range(n):
            godunov.step(ga)
            godunov.step(gb)
            cur = float(np.max(np.abs(ga.hat - gb.hat)))
            assert cur <= prev + ga.dt * gap + 1e-12, \
                f"per-step integrated drift {cur} > {prev} + dt*gap"
            prev = cur
        return f"{n} steps within per-step budget"

    @battery("local_variation_bound")
    def _bv_local():
        lam = prob.cfl_lambda()
        u0d = prob.initial_data(delta)
        tv0 = prob.u0.total_variation()
        for dx in (2.0 ** -5, 2.0 ** -6, 2.0 ** -7):
            def check(grid):
                xs = grid.centers()
                u = grid.cells
                fwd = np.abs(np.diff(u))
                for r in (0.25, 0.5, 1.0):
                    right = np.sum(fwd[:-1][xs[:-2] > r])
                    left = np.sum(fwd[1:][xs[2:] < -r])
                    bound = tv0 + 4.0 * constants.K1 / r
                    assert left + right < bound, \
                        f"local variation {left + right} >= {bound} at r={r}"

            godunov.run(gd, fd, u0d, prob.u_left, prob.u_right, prob.X, prob.T,
                        dx, lam, on_step=check)
        return "three grid levels, r in {0.25, 0.5, 1}"

    @battery("cfl_guard")
    def _cfl():
        bad = 1.2 / max(gd.lipschitz, fd.lipschitz)
        try:
            godunov.make_grid(gd, fd, prob.initial_data(delta), prob.u_left,
                              prob.u_right, prob.X, prob.T, 2.0 ** -5, bad)
        except CFLError:
            return "oversized time step rejected"
        raise AssertionError("CFL violation was not rejected")

    @battery("interpolation_bounds")
    def _interp():
        for q in (prob.g, prob.f):
            if isinstance(q, fluxes.PiecewiseLinearFlux):
                continue
            for d in (delta, delta / 2):
                qd = fluxes.interpolant_for(q, d)
                gap = fluxes.sup_gap(q, qd)
                bound = 0.125 * q.deriv2_bound * d * d
                assert gap <= bound + 1e-12, f"interpolation gap {gap} > {bound}"
        for _ in range(trials):
            u0 = _random_staircase(rng, prob)
            part = discretize.bv_partition(u0, prob.X, delta)
            u0d = discretize.project_restricted(u0, part)
            hat = analysis.linf_hat_distance(u0, u0d, u0.left_value)
            assert hat <= delta ** 2 + 1e-12, f"projection hat error {hat} > delta^2"
        return "flux and data interpolation within guarantees"

    return results


def _print_suite(results, file=sys.stdout):
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  ({r.detail})" if r.detail else ""
        print(f"{status} {r.name}{detail}", file=file)
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} batteries passed", file=file)
    return not failed


# ---------------------------------------------------------------------------
# config file parsing
# ---------------------------------------------------------------------------


def _parse_bool(text: str) -> bool:
    val = text.strip().lower()
    if val in ("1", "true", "yes", "on"):
        return True
    if val in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"expected a boolean, got {text!r}")


def parse_deltas(text: str):
    """Comma-separated deltas; '2^-6' and plain floats are both accepted."""
    out = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "^" in item:
            base, exp = item.split("^")
            out.append(float(base) ** float(exp))
        else:
            out.append(float(item))
    if not out:
        raise ConfigError("empty delta list")
    return tuple(out)


def parse_config_text(text: str) -> dict:
    """Plain-text key/value pairs with inline CSV blocks introduced by 'key:'."""
    scalars: dict[str, str] = {}
    blocks: dict[str, list[str]] = {}
    current: list[str] | None = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            current = None
            continue
        if "=" in line and current is None:
            key, value = line.split("=", 1)
            scalars[key.strip()] = value.split("#")[0].strip()
        elif line.endswith(":"):
            current = blocks.setdefault(line[:-1].strip(), [])
        elif current is not None:
            current.append(line)
        else:
            raise ConfigError(f"cannot parse config line: {raw!r}")
    return {"scalars": scalars, "blocks": blocks}


def _flux_from_config(parsed: dict, key: str):
    if key in parsed["blocks"]:
        rows = [tuple(float(t) for t in line.split(",")) for line in parsed["blocks"][key]]
        bp = np.array([r[0] for r in rows])
        val = np.array([r[1] for r in rows])
        return fluxes.PiecewiseLinearFlux(bp, val, label=key)
    if key in parsed["scalars"]:
        return fluxes.parse_flux_spec(parsed["scalars"][key])
    raise ConfigError(f"config is missing flux '{key}'")


def problem_from_config(text: str) -> TwoFluxProblem:
    parsed = parse_config_text(text)
    scalars = parsed["scalars"]
    if "experiment" in scalars:
        base = experiment(scalars["experiment"])
    else:
        base = None
    g = _flux_from_config(parsed, "flux_left") if (
        "flux_left" in scalars or "flux_left" in parsed["blocks"]) else (base.g if base else None)
    f = _flux_from_config(parsed, "flux_right") if (
        "flux_right" in scalars or "flux_right" in parsed["blocks"]) else (base.f if base else None)
    if g is None or f is None:
        raise ConfigError("config must define flux_left and flux_right (or an experiment)")
    if "initial_data" in parsed["blocks"]:
        u0 = read_staircase(parsed["blocks"]["initial_data"])
    elif base is not None:
        u0 = base.u0
    else:
        raise ConfigError("config must define initial_data (or an experiment)")

    def scalar(key, cast, default):
        if key in scalars:
            return cast(scalars[key])
        return default

    return TwoFluxProblem(
        g=g, f=f, u0=u0,
        X=scalar("X", float, base.X if base else 1.0),
        T=scalar("T", float, base.T if base else 0.5),
        u_min=scalar("u_min", float, base.u_min if base else 0.0),
        u_max=scalar("u_max", float, base.u_max if base else 1.0),
        rho=scalar("rho", float, base.rho if base else None),
        exact=base.exact if base is not None and "initial_data" not in parsed["blocks"] else None,
        name=scalar("name", str, base.name if base else "custom"),
    )


def config_from_args(args) -> ExperimentConfig:
    if getattr(args, "config", None):
        text = Path(args.config).read_text()
        prob = problem_from_config(text)
        parsed = parse_config_text(text)["scalars"]
    elif getattr(args, "experiment", None):
        prob = experiment(args.experiment)
        parsed = {}
    else:
        raise ConfigError("need --experiment NAME or --config FILE")
    if getattr(args, "tfinal", None) is not None:
        prob = replace(prob, T=args.tfinal)
    deltas = DEFAULT_DELTAS
    if parsed.get("deltas"):
        deltas = parse_deltas(parsed["deltas"])
    if getattr(args, "deltas", None):
        deltas = parse_deltas(args.deltas)
    restricted = _parse_bool(parsed["restricted_init"]) if "restricted_init" in parsed else True
    if getattr(args, "restricted_init", None) is not None:
        restricted = _parse_bool(args.restricted_init)
    reference = parsed.get("reference", "auto")
    if getattr(args, "reference", None):
        reference = args.reference
    seed = int(parsed.get("seed", 0))
    if getattr(args, "seed", None) is not None:
        seed = args.seed
    event_log = _parse_bool(args.event_log) if getattr(args, "event_log", None) else False
    return ExperimentConfig(
        problem=prob, deltas=deltas, restricted=restricted, reference=reference,
        out_dir=getattr(args, "out", None), seed=seed, event_log=event_log,
    )


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------


def _add_common(p):
    p.add_argument("--experiment", choices=sorted(EXPERIMENTS), help="built-in experiment")
    p.add_argument("--config", help="plain-text config file")
    p.add_argument("--tfinal", type=float, help="override the time horizon")
    p.add_argument("--out", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twoflux",
        description="Front tracking and Godunov solvers for two-flux conservation laws",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("study", help="convergence study with error bounds")
    _add_common(p)
    p.add_argument("--deltas", help="comma list, e.g. 2^-3,2^-4,2^-5")
    p.add_argument("--restricted-init", dest="restricted_init",
                   help="use the fine-variation projection (true/false)")
    p.add_argument("--reference", choices=REFERENCE_CHOICES)
    p.add_argument("--seed", type=int)

    p = sub.add_parser("run", help="single solve with snapshots")
    _add_common(p)
    p.add_argument("--mode", choices=("tracking", "godunov"), default="tracking")
    p.add_argument("--delta", type=float, default=2.0 ** -6)
    p.add_argument("--dx", type=float, help="Godunov cell width (default delta/4)")
    p.add_argument("--times", help="comma list of snapshot times (default: tfinal)")
    p.add_argument("--restricted-init", dest="restricted_init")
    p.add_argument("--event-log", dest="event_log", help="write collision log (true/false)")
    p.add_argument("--suite", help="run the property suite instead (true/false)")
    p.add_argument("--seed", type=int)

    p = sub.add_parser("riemann", help="single interface Riemann query")
    _add_common(p)
    p.add_argument("--delta", type=float, default=2.0 ** -6)
    p.add_argument("--ul", type=float, required=True)
    p.add_argument("--ur", type=float, required=True)

    p = sub.add_parser("suite", help="property batteries")
    _add_common(p)
    p.add_argument("--delta", type=float, default=2.0 ** -4)
    p.add_argument("--seed", type=int)
    p.add_argument("--trials", type=int, default=8)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "study":
            config = config_from_args(args)
            records, fit, ref_desc = run_convergence_study(config)
            _print_study(records, fit, ref_desc)
            return 0
        if args.command == "run":
            if getattr(args, "suite", None) and _parse_bool(args.suite):
                config = config_from_args(args)
                return 0 if _print_suite(run_property_suite(config)) else 1
            config = config_from_args(args)
            times = (parse_deltas(args.times) if args.times
                     else (config.problem.T,))
            snaps = run_single(config, args.mode, args.delta, times, args.dx)
            for t, snap in snaps:
                print(f"t={t:g}: {snap.jump_count} jumps, "
                      f"TV={snap.total_variation():.6g}")
            return 0
        if args.command == "riemann":
            config = config_from_args(args)
            prob = config.problem
            gd, fd = prob.interpolants(args.delta)
            sol = solve_interface(gd, fd, args.ul, args.ur)
            print(f"trace pair: u_minus={sol.trace.u_minus!r} "
                  f"u_plus={sol.trace.u_plus!r} flux_level={sol.trace.flux_level!r}")
            print("side   speed          left_state     right_state")
            for fr in sol.left_fan:
                print(f"left   {fr.speed:<14.8g} {fr.left:<14.8g} {fr.right:<14.8g}")
            print(f"iface  {0.0:<14.8g} {sol.trace.u_minus:<14.8g} {sol.trace.u_plus:<14.8g}")
            for fr in sol.right_fan:
                print(f"right  {fr.speed:<14.8g} {fr.left:<14.8g} {fr.right:<14.8g}")
            return 0
        if args.command == "suite":
            config = config_from_args(args)
            results = run_property_suite(config, delta=args.delta,
                                         trials=args.trials)
            return 0 if _print_suite(results) else 1
    except TwoFluxError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
