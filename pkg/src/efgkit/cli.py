"""Command-line experiment harness.

Subcommands::

    efgkit solve    run one solver with periodic metric checkpoints
    efgkit eval     evaluate strategy files
    efgkit sweep    exploitation/exploitability trade-off over p
    efgkit compare  exact RNR against MCRNR on a node-visit axis

Exit codes: 0 success, 2 argument error, 3 input validation error, 4 I/O error.
Output files go to ``--out-dir``, else ``$EFGKIT_OUTPUT_DIR``, else the
current directory.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import exact
from .core import BehaviorStrategy, Game, Player, StrategyProfile
from .errors import EfgError, IncompleteModelError, ParameterError
from .games import is_kuhn, parse_game
from .mccfr import MccfrConfig, RegretTables, _sample, _update, average_strategy
from .mcts import MctsConfig, UctTables, extract_visit_strategy, mcts_iteration
from .records import SWEEP_COLUMNS, RunRecord
from .rng import make_rng, spawn_seeds
from .rnr import (
    DEFAULT_P_VALUES,
    MODES,
    ROOT,
    Restriction,
    RestrictionSpec,
    RnrProfile,
    convergence_compare,
    rnr_cfr_state,
    tradeoff_sweep,
)
from .strategy_file import format_prob, load_profile, load_strategies, save_profile
from .tree import GameTree, build_tree

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_IO = 0, 2, 3, 4
OUTPUT_ENV = "EFGKIT_OUTPUT_DIR"
ALGORITHMS = ("cfr", "mccfr", "mcts", "rnr", "mcrnr")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    game: str
    algo: str
    iterations: int
    seed: int = 0
    eval_every: int = 0
    epsilon: float = 0.6
    C: float = 2.0
    p: float = 0.0
    mode: str = ROOT
    sigma_fix: tuple[str, ...] = ()
    out_dir: str = "."
    csv_path: str | None = None
    strategy_path: str | None = None
    stop_below: float | None = None
    timing: bool = False

    def __post_init__(self) -> None:
        if self.algo not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algo!r}")
        if self.iterations < 0:
            raise UsageError("--iters must be non-negative")
        if self.eval_every < 0:
            raise UsageError("--eval-every must be non-negative")
        if self.algo in ("rnr", "mcrnr") and not self.sigma_fix and self.p > 0:
            raise UsageError(f"{self.algo} with p > 0 needs --sigma-fix")

    def stem(self) -> str:
        return f"{self.algo}_{self.game.replace(':', '-')}_s{self.seed}"

    def outputs(self) -> tuple[Path, Path]:
        base = Path(self.out_dir)
        csv_path = Path(self.csv_path) if self.csv_path else base / f"{self.stem()}.csv"
        strat = Path(self.strategy_path) if self.strategy_path else base / f"{self.stem()}_strategy.txt"
        return csv_path, strat


# -- solver adapters -----------------------------------------------------------


class _Runner:
    """Uniform step/profile interface over the solvers."""

    nodes_visited = 0

    def step(self) -> None:
        raise NotImplementedError

    def profile(self) -> StrategyProfile:
        raise NotImplementedError


class _Cfr(_Runner):
    def __init__(self, tree: GameTree):
        self.state = exact.CfrState.new(tree)

    def step(self) -> None:
        exact.cfr_iteration(self.state)
        self.nodes_visited = self.state.nodes_visited

    def profile(self) -> StrategyProfile:
        return self.state.average_profile()


class _Mccfr(_Runner):
    def __init__(self, tree: GameTree, cfg: RunConfig):
        self.tree = tree
        self.tables = RegretTables(tree)
        self.rng = make_rng(cfg.seed)
        self.epsilon = cfg.epsilon

    def step(self) -> None:
        t = self.tables
        _update(t, _sample(self.tree, t, self.epsilon, self.rng), t.t + 1)
        self.nodes_visited = t.nodes_visited

    def profile(self) -> StrategyProfile:
        return average_strategy(self.tables)


class _Mcts(_Runner):
    def __init__(self, tree: GameTree, cfg: RunConfig):
        self.tables = UctTables(tree)
        self.config = MctsConfig(C=cfg.C, seed=cfg.seed)
        self.rng = make_rng(cfg.seed)

    def step(self) -> None:
        mcts_iteration(self.tables.tree, self.tables, self.config, self.rng)
        self.nodes_visited = self.tables.nodes_visited

    def profile(self) -> StrategyProfile:
        return extract_visit_strategy(self.tables)


def _fix_specs(cfg: RunConfig, fix: StrategyProfile | None) -> dict[Player, RestrictionSpec]:
    return {
        pl: RestrictionSpec(None if fix is None else fix[pl], cfg.p, cfg.mode) for pl in (Player.P1, Player.P2)
    }


class _Rnr(_Runner):
    """Exact RNR; one iteration advances both restricted runs."""

    def __init__(self, game: Game, cfg: RunConfig, fix: StrategyProfile | None):
        if cfg.mode != ROOT:
            raise UsageError("exact rnr supports --mode root only")
        specs = _fix_specs(cfg, fix)
        self.states = {pl: rnr_cfr_state(game, specs[pl], pl) for pl in (Player.P1, Player.P2)}

    def step(self) -> None:
        for state in self.states.values():
            exact.cfr_iteration(state)
        self.nodes_visited = sum(s.nodes_visited for s in self.states.values())

    def profile(self) -> StrategyProfile:
        sides = {
            pl: s.tree.strategy_from_slots(s.average_slots(), pl.opponent) for pl, s in self.states.items()
        }
        return StrategyProfile(sides[Player.P2], sides[Player.P1])


class _Mcrnr(_Runner):
    """Sampled RNR; one iteration advances both restricted runs."""

    def __init__(self, tree: GameTree, cfg: RunConfig, fix: StrategyProfile | None):
        specs = _fix_specs(cfg, fix)
        order = (Player.P1, Player.P2)
        self.tree = tree
        self.epsilon = cfg.epsilon
        self.tables = {pl: RegretTables(tree) for pl in order}
        self.restrictions = {pl: Restriction(tree, specs[pl], pl) for pl in order}
        self.rngs = {pl: make_rng(s) for pl, s in zip(order, spawn_seeds(cfg.seed, 2))}

    def step(self) -> None:
        for pl, t in self.tables.items():
            _update(t, _sample(self.tree, t, self.epsilon, self.rngs[pl], self.restrictions[pl]), t.t + 1)
        self.nodes_visited = sum(t.nodes_visited for t in self.tables.values())

    def profile(self) -> StrategyProfile:
        return RnrProfile.assemble(
            average_strategy(self.tables[Player.P2]), average_strategy(self.tables[Player.P1])
        ).sigma_star


def _load_fix(paths: Sequence[str], tree: GameTree) -> StrategyProfile | None:
    if not paths:
        return None
    found = load_strategies(*paths)
    for strat in found.values():
        tree.check_strategy(strat)
    for pl in (Player.P1, Player.P2):
        strat = found.get(pl, BehaviorStrategy.uniform(pl))
        missing = [k for k in tree.infosets if k.player is pl and k.obs not in strat.table]
        if missing:
            raise IncompleteModelError(
                f"fixed strategy for player {pl.label} has no entry for {missing[0].obs.hex()} "
                f"({missing[0].obs.decode(errors='replace')!r})"
            )
    return StrategyProfile(found[Player.P1], found[Player.P2])


def _make_runner(game: Game, tree: GameTree, cfg: RunConfig) -> _Runner:
    if cfg.algo == "cfr":
        return _Cfr(tree)
    if cfg.algo == "mccfr":
        MccfrConfig(epsilon=cfg.epsilon)
        return _Mccfr(tree, cfg)
    if cfg.algo == "mcts":
        MctsConfig(C=cfg.C)
        return _Mcts(tree, cfg)
    fix = _load_fix(cfg.sigma_fix, tree)
    if cfg.algo == "rnr":
        return _Rnr(game, cfg, fix)
    MccfrConfig(epsilon=cfg.epsilon)
    return _Mcrnr(tree, cfg, fix)


def profile_metrics(tree: GameTree, profile: StrategyProfile) -> dict[str, float]:
    """Metrics of the long-format CSV that apply to ``tree``'s game."""
    out = {
        "exploitability": exact.exploitability(tree, profile),
        "ev_p1": tree.expected_value(tree.behavior_arrays(profile), Player.P1),
    }
    if is_kuhn(tree.game):
        out["sqre"] = exact.kuhn_squared_error(profile)
        out["dom_e"] = exact.dominated_error(profile)
    return out


def run_solve(cfg: RunConfig) -> RunRecord:
    """Run ``cfg`` and write its CSV and final strategy; returns the record."""
    game = parse_game(cfg.game)
    tree = build_tree(game)
    runner = _make_runner(game, tree, cfg)
    record = RunRecord(game.name, cfg.algo, cfg.seed)
    start = time.perf_counter()
    for it in range(1, cfg.iterations + 1):
        runner.step()
        last = it == cfg.iterations
        if (cfg.eval_every and it % cfg.eval_every == 0) or last:
            ms = (time.perf_counter() - start) * 1000.0
            metrics = profile_metrics(tree, runner.profile())
            for name, value in metrics.items():
                record.add(it, name, value, ms, runner.nodes_visited)
            if cfg.stop_below is not None and metrics["exploitability"] <= cfg.stop_below:
                break
    csv_path, strat_path = cfg.outputs()
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    strat_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        record.write_csv(fh, timing=cfg.timing)
    profile = runner.profile() if cfg.iterations else tree.profile_from_slots(tree.uniform_slots())
    save_profile(strat_path, profile)
    return record


# -- commands ----------------------------------------------------------------


def _out_dir(args) -> str:
    return args.out_dir or os.environ.get(OUTPUT_ENV) or "."


def cmd_solve(args) -> int:
    seeds = args.seeds or [args.seed]
    if len(seeds) > 1 and (args.csv or args.strategy):
        raise UsageError("--csv/--strategy name a single run; omit them with several seeds")
    configs = [
        RunConfig(
            game=args.game,
            algo=args.algo,
            iterations=args.iters,
            seed=s,
            eval_every=args.eval_every,
            epsilon=args.epsilon,
            C=args.C,
            p=args.p,
            mode=args.mode,
            sigma_fix=tuple(args.sigma_fix or ()),
            out_dir=_out_dir(args),
            csv_path=args.csv,
            strategy_path=args.strategy,
            stop_below=args.stop_below,
            timing=args.timing,
        )
        for s in seeds
    ]
    if args.parallel_seeds > 1 and len(configs) > 1:
        with ProcessPoolExecutor(max_workers=args.parallel_seeds) as pool:
            records = list(pool.map(run_solve, configs))
    else:
        records = [run_solve(c) for c in configs]
    for cfg, rec in zip(configs, records):
        csv_path, strat_path = cfg.outputs()
        final = rec.values("exploitability")
        tail = f" final exploitability {final[-1]:.6g}" if final else ""
        print(f"seed {cfg.seed}: wrote {csv_path} and {strat_path};{tail}")
    return EXIT_OK


EVAL_METRICS = ("exploitability", "ev_p1", "ev_p2", "sqre", "dom_e")


def cmd_eval(args) -> int:
    game = parse_game(args.game)
    tree = build_tree(game)
    found = load_strategies(*args.strategy)
    for strat in found.values():
        tree.check_strategy(strat)
    profile = load_profile(*args.strategy)
    wanted = args.metrics or [m for m in EVAL_METRICS if m not in ("sqre", "dom_e") or is_kuhn(game)]
    values = {}
    sigma = tree.behavior_arrays(profile)
    for m in wanted:
        if m == "exploitability":
            values[m] = exact.exploitability(tree, profile)
        elif m == "ev_p1":
            values[m] = tree.expected_value(sigma, Player.P1)
        elif m == "ev_p2":
            values[m] = tree.expected_value(sigma, Player.P2)
        elif m == "sqre":
            values[m] = exact.kuhn_squared_error(profile, game)
        elif m == "dom_e":
            values[m] = exact.dominated_error(profile, game)
    for m, v in values.items():
        print(f"{m}: {v:.12g}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["game", *values])
    writer.writerow([game.name, *(format_prob(v) for v in values.values())])
    print(buf.getvalue(), end="")
    return EXIT_OK


def cmd_sweep(args) -> int:
    game = parse_game(args.game)
    tree = build_tree(game)
    fix = _load_fix(args.sigma_fix, tree)
    p_values = args.p if args.p else list(DEFAULT_P_VALUES)
    seeds = args.seeds or [args.seed]
    out = Path(args.csv) if args.csv else Path(_out_dir(args)) / f"sweep_{args.game.replace(':', '-')}.csv"
    rows = []
    for seed in seeds:
        for pt in tradeoff_sweep(tree, fix, p_values, args.iters, seed, args.epsilon, args.mode):
            rows.append([repr(pt.p), str(seed), format_prob(pt.exploitation),
                         format_prob(pt.exploitability), game.name, str(args.iters)])
            print(f"p={pt.p:g} seed={seed}: exploitation {pt.exploitation:.6g}, "
                  f"exploitability {pt.exploitability:.6g}")
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        writer.writerows(rows)
    print(f"wrote {out}")
    return EXIT_OK


def cmd_compare(args) -> int:
    game = parse_game(args.game)
    tree = build_tree(game)
    fix = _load_fix(args.sigma_fix, tree)
    if fix is None:
        if args.p > 0:
            raise UsageError("compare with p > 0 needs --sigma-fix")
        fix = StrategyProfile.uniform()
    ex, sa = convergence_compare(game, fix, args.p, args.checkpoints, args.seed, args.epsilon)
    base = Path(_out_dir(args))
    base.mkdir(parents=True, exist_ok=True)
    stem = f"{args.game.replace(':', '-')}_p{args.p:g}_s{args.seed}"
    for rec in (ex, sa):
        path = base / f"compare_{rec.algo}_{stem}.csv"
        with open(path, "w", encoding="utf-8", newline="") as fh:
            rec.write_csv(fh, timing=args.timing)
        last = rec.rows[-1]
        print(f"{rec.algo}: {len(rec.rows)} checkpoints, final exploitability {last.value:.6g} "
              f"at {last.nodes_visited} nodes; wrote {path}")
    return EXIT_OK


# -- argument parsing --------------------------------------------------------


def _probability(text: str) -> float:
    v = float(text)
    if not 0.0 <= v <= 1.0:
        raise argparse.ArgumentTypeError(f"{text} is not in [0, 1]")
    return v


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="efgkit", description="Solvers for two-player zero-sum extensive-form games.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--game", required=True, help="kuhn, ocp:N, goof:N, bluff:N or pam:RxCxH")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--epsilon", type=float, default=0.6, help="MCCFR exploration (default 0.6)")
        p.add_argument("--out-dir", help=f"output directory (default ${OUTPUT_ENV} or .)")
        p.add_argument("--timing", action="store_true", help="record wall time in CSV rows")

    s = sub.add_parser("solve", help="run a solver and write metrics and strategy")
    common(s)
    s.add_argument("--algo", required=True, choices=ALGORITHMS)
    s.add_argument("--iters", type=int, required=True)
    s.add_argument("--eval-every", type=int, default=0, help="checkpoint period (0: final only)")
    s.add_argument("--C", type=float, default=2.0, help="UCT exploration coefficient")
    s.add_argument("--p", type=_probability, default=0.0, help="restriction confidence")
    s.add_argument("--mode", choices=MODES, default=ROOT)
    s.add_argument("--sigma-fix", nargs="+", metavar="FILE")
    s.add_argument("--csv")
    s.add_argument("--strategy")
    s.add_argument("--stop-below", type=float, help="stop once exploitability reaches this value")
    s.add_argument("--seeds", type=int, nargs="+", help="run several seeds")
    s.add_argument("--parallel-seeds", type=int, default=1, metavar="K")
    s.set_defaults(func=cmd_solve)

    e = sub.add_parser("eval", help="evaluate strategy files")
    e.add_argument("--game", required=True)
    e.add_argument("--strategy", nargs="+", required=True, metavar="FILE")
    e.add_argument("--metrics", nargs="+", choices=EVAL_METRICS)
    e.set_defaults(func=cmd_eval)

    w = sub.add_parser("sweep", help="exploitation/exploitability trade-off over p")
    common(w)
    w.add_argument("--sigma-fix", nargs="+", required=True, metavar="FILE")
    w.add_argument("--p", type=_probability, nargs="+")
    w.add_argument("--iters", type=int, default=100_000, help="iterations per restricted run")
    w.add_argument("--seeds", type=int, nargs="+")
    w.add_argument("--mode", choices=MODES, default=ROOT)
    w.add_argument("--csv")
    w.set_defaults(func=cmd_sweep)

    c = sub.add_parser("compare", help="exact RNR vs MCRNR at node-visit checkpoints")
    common(c)
    c.add_argument("--sigma-fix", nargs="+", metavar="FILE")
    c.add_argument("--p", type=_probability, default=0.5)
    c.add_argument("--checkpoints", type=int, nargs="+", required=True, metavar="NODES")
    c.set_defaults(func=cmd_compare)
    return parser


def _message(exc: Exception) -> str:
    # KeyError subclasses would otherwise print their message quoted
    return str(exc.args[0]) if exc.args else type(exc).__name__


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ParameterError) as exc:
        print(f"efgkit: error: {_message(exc)}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"efgkit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except EfgError as exc:
        print(f"efgkit: invalid input: {_message(exc)}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
