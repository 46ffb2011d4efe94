"""Restricted Nash responses, exact and sampled.

With probability ``p`` the *restricted* player is forced to follow a fixed
opponent model ``sigma_fix``; the other player learns a counter-strategy that
exploits the model while staying hard to exploit itself.

Two restriction modes are supported:

``root``
    A coin at the root decides, once per episode, whether the restricted
    player follows ``sigma_fix`` for the whole game (probability ``p``) or
    plays its own regret-matching strategy.  The unrestricted player never
    observes the coin.
``mix``
    At every information set the restricted player acts with
    ``p * sigma_fix(I) + (1 - p) * sigma_rm(I)``.

The exact variant materializes the root-coin game (:func:`transform_rnr_game`)
and runs vanilla CFR on it.  The sampled variant reuses the outcome-sampling
machinery of :mod:`efgkit.mccfr` with the coin drawn inside the sampler.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .core import BehaviorStrategy, Game, History, InfoSetKey, Player, StrategyProfile, as_player
from .errors import GameMismatchError, ParameterError
from .exact import CfrState, as_tree, cfr_iteration, exploitability
from .mccfr import MccfrConfig, RegretTables, SampleRecord, _sample, _update, average_strategy, missing_model
from .records import RunRecord
from .rng import make_rng, spawn_seeds
from .tree import GameTree

ROOT = "root"
MIX = "mix"
MODES = (ROOT, MIX)
DEFAULT_P_VALUES = (0.0, 0.5, 0.7, 0.8, 0.9, 0.93, 0.97, 1.0)


@dataclass(frozen=True, eq=False)
class RestrictionSpec:
    """``sigma_fix`` may be omitted only when ``p == 0``."""

    sigma_fix: BehaviorStrategy | None
    p: float
    mode: str = ROOT

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise ParameterError(f"p must lie in [0, 1], got {self.p}")
        if self.mode not in MODES:
            raise ParameterError(f"unknown restriction mode {self.mode!r}")
        if self.sigma_fix is None and self.p > 0.0:
            raise ParameterError("a fixed strategy is required when p > 0")


class Restriction:
    """A :class:`RestrictionSpec` bound to a compiled tree and a restricted player."""

    def __init__(self, tree: GameTree, spec: RestrictionSpec, restricted: Player):
        restricted = as_player(restricted)
        fix = spec.sigma_fix
        if fix is not None and fix.player is not restricted:
            raise ParameterError(
                f"fixed strategy belongs to player {fix.player.label}, restricted player is {restricted.label}"
            )
        self.tree = tree
        self.spec = spec
        self.player = int(restricted)
        self.p = spec.p
        self.mix = spec.mode == MIX and spec.p > 0.0
        self._table: list[list[float] | None] = []
        for idx, key in enumerate(tree.infosets):
            probs = fix.table.get(key.obs) if fix is not None and key.player is restricted else None
            if probs is not None and len(probs) != tree.infoset_actions[idx]:
                raise GameMismatchError(f"fixed strategy entry for {key} has {len(probs)} actions")
            self._table.append(list(probs) if probs is not None else None)

    def draw_coin(self, rng) -> bool:
        """True when this episode runs in the restricted subtree."""
        if self.mix or self.p <= 0.0:
            return False
        if self.p >= 1.0:
            return True
        return rng.random() < self.p

    def fixed(self, idx: int) -> list[float]:
        probs = self._table[idx]
        if probs is None:
            raise missing_model(self.tree.infosets[idx])
        return probs


# -- the transformed game ------------------------------------------------------


class RnrGame(Game):
    """Root-coin game: coin 0 leads to the restricted copy, coin 1 to the original.

    Histories are ``(coin,) + h``.  In the restricted copy, the restricted
    player's decisions are chance nodes distributed as ``sigma_fix``.
    Observation keys are those of the base game for both copies, so the
    unrestricted player's information sets span both.
    """

    RESTRICTED, FREE = 0, 1

    def __init__(self, base: Game, spec: RestrictionSpec, restricted: Player):
        if spec.mode != ROOT:
            raise ParameterError("the game transformation applies to root-coin restrictions")
        self.base = base
        self.spec = spec
        self.restricted = as_player(restricted)
        self.name = f"rnr({base.name},p={spec.p:g},restricted={self.restricted.label})"
        self.num_chance_outcomes = max(2, base.num_chance_outcomes)

    def _forced(self, h: History) -> bool:
        return h[0] == self.RESTRICTED and self.base.current_player(h[1:]) is self.restricted

    def is_terminal(self, h: History) -> bool:
        return bool(h) and self.base.is_terminal(h[1:])

    def current_player(self, h: History) -> Player:
        if not h or self._forced(h):
            return Player.CHANCE
        return self.base.current_player(h[1:])

    def num_actions(self, h: History) -> int:
        return 2 if not h else self.base.num_actions(h[1:])

    def chance_probs(self, h: History) -> tuple[float, ...]:
        if not h:
            return (self.spec.p, 1.0 - self.spec.p)
        if self._forced(h):
            rest = h[1:]
            n = self.base.num_actions(rest)
            fix = self.spec.sigma_fix
            if fix is None:
                return (1.0 / n,) * n
            key = InfoSetKey(self.restricted, self.base.infoset_key(rest, self.restricted))
            probs = fix.table.get(key.obs)
            if probs is None:
                raise missing_model(key)
            if len(probs) != n:
                raise GameMismatchError(f"fixed strategy entry for {key} has {len(probs)} actions")
            return probs
        return self.base.chance_probs(h[1:])

    def utility(self, z: History, player: Player) -> float:
        return self.base.utility(z[1:], player)

    def infoset_key(self, h: History, player: Player) -> bytes:
        return self.base.infoset_key(h[1:], player)

    def action_name(self, h: History, a: int) -> str:
        if not h:
            return ("restricted", "free")[a]
        return self.base.action_name(h[1:], a)


def transform_rnr_game(game: Game, spec: RestrictionSpec, restricted: Player) -> RnrGame:
    return RnrGame(game, spec, restricted)


def rnr_cfr_state(game: Game, spec: RestrictionSpec, restricted: Player) -> CfrState:
    """CFR state over a freshly compiled transformed game."""
    return CfrState.new(GameTree(transform_rnr_game(game, spec, restricted)))


def solve_rnr_exact(
    game: Game, spec: RestrictionSpec, restricted: Player, iterations: int
) -> BehaviorStrategy:
    """Unrestricted player's average CFR strategy in the transformed game."""
    state = rnr_cfr_state(game, spec, restricted)
    for _ in range(iterations):
        cfr_iteration(state)
    free = as_player(restricted).opponent
    return state.tree.strategy_from_slots(state.average_slots(), free)


# -- sampled RNR -------------------------------------------------------------


def _restriction(tree: GameTree, spec, restricted) -> Restriction:
    if isinstance(spec, Restriction):
        if spec.tree is not tree or spec.player != int(as_player(restricted)):
            raise ParameterError("prepared restriction was built for another tree or player")
        return spec
    return Restriction(tree, spec, restricted)


def mcrnr_iteration(
    game: Game | GameTree,
    spec: RestrictionSpec | Restriction,
    restricted: Player,
    tables: RegretTables,
    t: int | None = None,
    rng=None,
    config: MccfrConfig = MccfrConfig(),
) -> SampleRecord:
    """One sampled restricted episode, applied to ``tables`` in place.

    Restricted-player nodes driven by the model are sampled exactly from
    ``sigma_fix`` and receive no updates.  Everything else is updated as in
    outcome-sampling MCCFR.
    """
    if rng is None:
        raise ParameterError("an explicit random stream is required")
    if t is None:
        t = tables.t + 1
    if t < 1:
        raise ParameterError("iteration index starts at 1")
    restriction = _restriction(tables.tree, spec, restricted)
    rec = _sample(tables.tree, tables, config.epsilon, rng, restriction)
    _update(tables, rec, t)
    return rec


def run_mcrnr(
    game: Game | GameTree,
    spec: RestrictionSpec,
    restricted: Player,
    config: MccfrConfig,
    every: int = 0,
    callback: Callable[[RegretTables], bool | None] | None = None,
    tables: RegretTables | None = None,
) -> RegretTables:
    tree = as_tree(game)
    tables = tables or RegretTables(tree)
    restriction = Restriction(tree, spec, restricted)
    rng = make_rng(config.seed)
    eps = config.epsilon
    for t in range(tables.t + 1, tables.t + config.iterations + 1):
        _update(tables, _sample(tree, tables, eps, rng, restriction), t)
        if every and callback is not None and t % every == 0:
            if callback(tables):
                break
    return tables


@dataclass(frozen=True)
class RnrProfile:
    """Counter-strategy pair built from two restricted runs."""

    sigma_star: StrategyProfile

    @classmethod
    def assemble(cls, restricting_p2: StrategyProfile, restricting_p1: StrategyProfile) -> "RnrProfile":
        """P1's side comes from the run restricting P2 and vice versa."""
        return cls(StrategyProfile(restricting_p2.p1, restricting_p1.p2))


def _fix_spec(sigma_fix: StrategyProfile | None, player: Player, p: float, mode: str) -> RestrictionSpec:
    return RestrictionSpec(None if sigma_fix is None else sigma_fix[player], p, mode)


def run_mcrnr_alternating(
    game: Game | GameTree,
    sigma_fix: StrategyProfile | None,
    p: float,
    config: MccfrConfig,
    mode: str = ROOT,
) -> tuple[RnrProfile, dict[Player, RegretTables]]:
    """Single stream; the restricted player switches every iteration (P2 first)."""
    tree = as_tree(game)
    order = (Player.P2, Player.P1)
    tables = {pl: RegretTables(tree) for pl in order}
    restrictions = {pl: Restriction(tree, _fix_spec(sigma_fix, pl, p, mode), pl) for pl in order}
    rng = make_rng(config.seed)
    for k in range(config.iterations):
        pl = order[k % 2]
        tab = tables[pl]
        _update(tab, _sample(tree, tab, config.epsilon, rng, restrictions[pl]), tab.t + 1)
    profile = RnrProfile.assemble(average_strategy(tables[Player.P2]), average_strategy(tables[Player.P1]))
    return profile, tables


def mcrnr_pair(
    game: Game | GameTree,
    sigma_fix: StrategyProfile | None,
    p: float,
    iterations: int,
    seed: int,
    epsilon: float = 0.6,
    mode: str = ROOT,
) -> RnrProfile:
    """Two separate runs (restricting P1, restricting P2) with spawned seeds."""
    tree = as_tree(game)
    seeds = spawn_seeds(seed, 2)
    avg = {}
    for pl, s in zip((Player.P1, Player.P2), seeds):
        config = MccfrConfig(epsilon=epsilon, seed=s, iterations=iterations)
        avg[pl] = average_strategy(run_mcrnr(tree, _fix_spec(sigma_fix, pl, p, mode), pl, config))
    return RnrProfile.assemble(avg[Player.P2], avg[Player.P1])


# -- analysis ----------------------------------------------------------------


@dataclass(frozen=True)
class TradeoffPoint:
    p: float
    exploitation: float
    exploitability: float
    seed: int = 0
    iterations: int = 0
    profile: StrategyProfile | None = field(default=None, repr=False, compare=False)


def model_payoff(game: Game | GameTree, counter: StrategyProfile, sigma_fix: StrategyProfile) -> float:
    """``u_1(sigma_1*, fix_2) + u_2(sigma_2*, fix_1)``."""
    tree = as_tree(game)
    u1 = tree.expected_value(tree.behavior_arrays(StrategyProfile(counter.p1, sigma_fix.p2)), Player.P1)
    u2 = tree.expected_value(tree.behavior_arrays(StrategyProfile(sigma_fix.p1, counter.p2)), Player.P2)
    return u1 + u2


def exploitation(
    game: Game | GameTree, counter: StrategyProfile, baseline: StrategyProfile, sigma_fix: StrategyProfile
) -> float:
    """Payoff gained against the model by ``counter`` relative to ``baseline``, summed over seats."""
    return model_payoff(game, counter, sigma_fix) - model_payoff(game, baseline, sigma_fix)


def tradeoff_sweep(
    game: Game | GameTree,
    sigma_fix: StrategyProfile,
    p_values: Sequence[float] = DEFAULT_P_VALUES,
    iterations: int = 100_000,
    seed: int = 0,
    epsilon: float = 0.6,
    mode: str = ROOT,
    baseline: StrategyProfile | None = None,
) -> list[TradeoffPoint]:
    """One :class:`TradeoffPoint` per ``p``.

    Every point reuses the same pair of run seeds.  Unless ``baseline`` is
    given, the equilibrium baseline is the ``p = 0`` counter-profile of the
    same seeds, so the ``p = 0`` point has exploitation exactly 0.
    """
    tree = as_tree(game)
    cache: dict[float, StrategyProfile] = {}

    def counter(p: float) -> StrategyProfile:
        if p not in cache:
            cache[p] = mcrnr_pair(tree, sigma_fix, p, iterations, seed, epsilon, mode).sigma_star
        return cache[p]

    base = baseline if baseline is not None else counter(0.0)
    points = []
    for p in p_values:
        prof = counter(float(p))
        points.append(
            TradeoffPoint(
                p=float(p),
                exploitation=exploitation(tree, prof, base, sigma_fix),
                exploitability=exploitability(tree, prof),
                seed=seed,
                iterations=iterations,
                profile=prof,
            )
        )
    return points


def _assembled_exploitability(base_tree: GameTree, states: dict[Player, CfrState]) -> float:
    p1 = states[Player.P2].tree.strategy_from_slots(states[Player.P2].average_slots(), Player.P1)
    p2 = states[Player.P1].tree.strategy_from_slots(states[Player.P1].average_slots(), Player.P2)
    return exploitability(base_tree, StrategyProfile(p1, p2))


def convergence_compare(
    game: Game,
    sigma_fix: StrategyProfile,
    p: float,
    checkpoints: Sequence[int],
    seed: int = 0,
    epsilon: float = 0.6,
) -> tuple[RunRecord, RunRecord]:
    """Exact RNR and MCRNR at matching cumulative node-visit budgets.

    Each solver advances both restricted runs one iteration at a time.  At
    every budget in ``checkpoints`` it records the exploitability of the
    assembled counter-profile.  ``iteration`` counts iterations of the pair
    of runs.  A budget already passed by the previous checkpoint forces at
    least one more iteration, so iteration indices stay strictly increasing.
    """
    budgets = sorted(int(c) for c in checkpoints)
    if not budgets or budgets[0] <= 0:
        raise ParameterError("checkpoints must be positive node budgets")
    tree = as_tree(game)
    order = (Player.P1, Player.P2)

    exact = RunRecord(game.name, "rnr", seed)
    states = {pl: rnr_cfr_state(game, _fix_spec(sigma_fix, pl, p, ROOT), pl) for pl in order}
    start = time.perf_counter()
    it = nodes = 0
    for budget in budgets:
        advanced = False
        while nodes < budget or not advanced:
            for pl in order:
                cfr_iteration(states[pl])
                nodes += states[pl].tree.num_nodes
            it += 1
            advanced = True
        ms = (time.perf_counter() - start) * 1000.0
        exact.add(it, "exploitability", _assembled_exploitability(tree, states), ms, nodes)

    sampled = RunRecord(game.name, "mcrnr", seed)
    tables = {pl: RegretTables(tree) for pl in order}
    restrictions = {pl: Restriction(tree, _fix_spec(sigma_fix, pl, p, ROOT), pl) for pl in order}
    rngs = {pl: make_rng(s) for pl, s in zip(order, spawn_seeds(seed, 2))}
    start = time.perf_counter()
    it = 0
    for budget in budgets:
        advanced = False
        while sum(t.nodes_visited for t in tables.values()) < budget or not advanced:
            for pl in order:
                tab = tables[pl]
                _update(tab, _sample(tree, tab, epsilon, rngs[pl], restrictions[pl]), tab.t + 1)
            it += 1
            advanced = True
        ms = (time.perf_counter() - start) * 1000.0
        prof = RnrProfile.assemble(average_strategy(tables[Player.P2]), average_strategy(tables[Player.P1]))
        nodes = sum(t.nodes_visited for t in tables.values())
        sampled.add(it, "exploitability", exploitability(tree, prof.sigma_star), ms, nodes)
    return exact, sampled
