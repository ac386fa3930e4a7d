"""Designer-facing characterization: goals, likelihood rules, desirability,
thresholds, and decay parameters, plus the text format they are loaded from.

The file format is line-oriented with four sections:

    [goals]         goal <id> significance=<x> init_likelihood=<v>
    [rules]         on <event_kind> [entity=<id>]: <effect>; <effect>; ...
    [desirability]  desire <event_kind> <goal> <value>   |   mode delta_scaled
    [emotion]       threshold/decay_rate/decay_scale/cull_epsilon/
                    history_window/axiom lines

See data/FORMATS.md for the full grammar. `#` starts a comment anywhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

from .emotions import (
    DEFAULT_AXIOMS,
    AxiomSet,
    BeliefState,
    EmotionType,
    Goal,
    GoalBelief,
    GoalStatus,
    Thresholds,
    make_axiom_set,
)
from .events import SIMULATOR_EVENT_KINDS

DEFAULT_DECAY_RATE = 0.005
# Negative multiplier applied to the decay rate inside the exponential;
# must sit strictly inside (-1, 0).
DEFAULT_DECAY_SCALE = -1.0 + 1e-9
DEFAULT_CULL_EPSILON = 0.01
DEFAULT_HISTORY_WINDOW = 10_000

_IDENT = re.compile(r"^[A-Za-z][A-Za-z0-9_-]*$")


class ConfigError(ValueError):
    """Raised by parsing when a configuration document is unusable."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems))
        self.problems = problems


@dataclass(frozen=True)
class GoalSetup(Goal):
    """A goal plus the agent's initial likelihood belief for it."""

    initial_likelihood: float = 0.5


@dataclass(frozen=True)
class SetLikelihood:
    goal_id: str
    value: float


@dataclass(frozen=True)
class AddLikelihood:
    goal_id: str
    delta: float
    floor: float = 0.0


@dataclass(frozen=True)
class SetStatus:
    goal_id: str
    status: GoalStatus


RuleEffect = SetLikelihood | AddLikelihood | SetStatus


@dataclass(frozen=True)
class LikelihoodRule:
    """Maps one event kind (optionally narrowed to one entity) to ordered
    belief effects."""

    event_kind: str
    effects: tuple[RuleEffect, ...]
    entity: str | None = None

    def matches(self, kind: str, payload: Mapping[str, object]) -> bool:
        if kind != self.event_kind:
            return False
        return self.entity is None or payload.get("entity") == self.entity


@dataclass(frozen=True)
class DesirabilityEntry:
    event_kind: str
    goal_id: str
    value: float


TABLE_MODE = "table"
DELTA_SCALED_MODE = "delta_scaled"


@dataclass(frozen=True)
class DesirabilitySpec:
    mode: str = TABLE_MODE
    entries: tuple[DesirabilityEntry, ...] = ()

    def lookup(self, event_kind: str, goal_id: str) -> float:
        for entry in self.entries:
            if entry.event_kind == event_kind and entry.goal_id == goal_id:
                return entry.value
        return 0.0


@dataclass(frozen=True)
class DecayParams:
    """Per-type decay rates plus the shared exponent scale and cull bound."""

    rates: Mapping[EmotionType, float]
    scale: float = DEFAULT_DECAY_SCALE
    cull_epsilon: float = DEFAULT_CULL_EPSILON

    def rate(self, etype: EmotionType) -> float:
        return self.rates[etype]


def uniform_rates(rate: float = DEFAULT_DECAY_RATE) -> dict[EmotionType, float]:
    return {etype: rate for etype in EmotionType}


def uniform_thresholds(value: float = 0.0) -> dict[EmotionType, float]:
    return {etype: value for etype in EmotionType}


@dataclass(frozen=True)
class CharacterizationConfig:
    goals: tuple[GoalSetup, ...]
    rules: tuple[LikelihoodRule, ...] = ()
    desirability: DesirabilitySpec = field(default_factory=DesirabilitySpec)
    thresholds: Thresholds = field(default_factory=uniform_thresholds)
    decay: DecayParams = field(default_factory=lambda: DecayParams(uniform_rates()))
    axioms: AxiomSet = DEFAULT_AXIOMS
    history_window: int = DEFAULT_HISTORY_WINDOW

    def goal(self, goal_id: str) -> GoalSetup:
        for g in self.goals:
            if g.id == goal_id:
                return g
        raise KeyError(f"unknown goal {goal_id!r}")

    def goal_ids(self) -> tuple[str, ...]:
        return tuple(g.id for g in self.goals)


# ---------------------------------------------------------------------------
# Rule semantics
# ---------------------------------------------------------------------------

def apply_rules(
    beliefs: BeliefState,
    kind: str,
    payload: Mapping[str, object],
    rules: tuple[LikelihoodRule, ...],
) -> BeliefState:
    """Apply every matching rule's effects in declaration order.

    Goals already achieved or failed are never modified. Referencing a goal
    with no belief facts is a hard fault (validation is expected to have
    rejected such configs).
    """
    out = beliefs
    for rule in rules:
        if not rule.matches(kind, payload):
            continue
        for effect in rule.effects:
            belief = out.get(effect.goal_id)
            if belief.status.terminal:
                continue
            if isinstance(effect, SetLikelihood):
                out = out.replace(effect.goal_id, GoalBelief(belief.status, effect.value))
            elif isinstance(effect, AddLikelihood):
                assert belief.likelihood is not None
                value = belief.likelihood + effect.delta
                value = min(1.0, max(effect.floor, max(0.0, value)))
                out = out.replace(effect.goal_id, GoalBelief(belief.status, value))
            else:
                out = out.replace(effect.goal_id, GoalBelief(effect.status, belief.likelihood))
    return out


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

_EFFECT_RE = re.compile(
    r"^(?P<name>set_likelihood|add_likelihood|set_status)\s*"
    r"\(\s*(?P<goal>[A-Za-z][A-Za-z0-9_-]*)\s*,\s*(?P<arg>[^,()]+?)\s*"
    r"(?:,\s*floor\s*=\s*(?P<floor>[^,()]+?)\s*)?\)$"
)
_RULE_HEAD_RE = re.compile(
    r"^on\s+(?P<kind>[A-Za-z][A-Za-z0-9_-]*)(?:\s+entity=(?P<entity>[A-Za-z0-9_-]+))?\s*$"
)


class _Parser:
    def __init__(self, text: str):
        self.problems: list[str] = []
        self.lines = text.splitlines()

    def error(self, lineno: int, message: str) -> None:
        self.problems.append(f"line {lineno}: {message}")

    def parse_float(self, lineno: int, token: str, what: str) -> float | None:
        try:
            return float(token)
        except ValueError:
            self.error(lineno, f"{what}: not a number: {token!r}")
            return None

    def parse_int(self, lineno: int, token: str, what: str) -> int | None:
        try:
            return int(token)
        except ValueError:
            self.error(lineno, f"{what}: not an integer: {token!r}")
            return None


def _parse_effect(p: _Parser, lineno: int, text: str) -> RuleEffect | None:
    m = _EFFECT_RE.match(text)
    if m is None:
        p.error(lineno, f"unrecognized effect: {text!r}")
        return None
    name, goal_id, arg = m.group("name"), m.group("goal"), m.group("arg")
    if name == "set_status":
        if m.group("floor") is not None:
            p.error(lineno, "set_status takes no floor argument")
            return None
        try:
            status = GoalStatus(arg.strip())
        except ValueError:
            p.error(lineno, f"set_status: expected achieved or failed, got {arg!r}")
            return None
        if not status.terminal:
            p.error(lineno, "set_status: only achieved or failed may be set by rules")
            return None
        return SetStatus(goal_id, status)
    value = p.parse_float(lineno, arg, name)
    if value is None:
        return None
    if name == "set_likelihood":
        if m.group("floor") is not None:
            p.error(lineno, "set_likelihood takes no floor argument")
            return None
        if not 0.0 <= value <= 1.0:
            p.error(lineno, f"set_likelihood value {value} outside [0, 1]")
            return None
        return SetLikelihood(goal_id, value)
    floor = 0.0
    if m.group("floor") is not None:
        parsed = p.parse_float(lineno, m.group("floor"), "floor")
        if parsed is None:
            return None
        floor = parsed
        if not 0.0 <= floor <= 1.0:
            p.error(lineno, f"floor {floor} outside [0, 1]")
            return None
    return AddLikelihood(goal_id, value, floor)


def _parse_goal_line(p: _Parser, lineno: int, line: str) -> GoalSetup | None:
    tokens = line.split()
    if not tokens or tokens[0] != "goal" or len(tokens) != 4:
        p.error(lineno, f"expected 'goal <id> significance=<x> init_likelihood=<v>', got {line!r}")
        return None
    goal_id = tokens[1]
    if not _IDENT.match(goal_id):
        p.error(lineno, f"bad goal id {goal_id!r}")
        return None
    kwargs: dict[str, float] = {}
    for token in tokens[2:]:
        key, sep, raw = token.partition("=")
        if not sep or key not in ("significance", "init_likelihood"):
            p.error(lineno, f"unknown goal field {token!r}")
            return None
        value = p.parse_float(lineno, raw, key)
        if value is None:
            return None
        kwargs[key] = value
    if set(kwargs) != {"significance", "init_likelihood"}:
        p.error(lineno, "goal needs both significance and init_likelihood")
        return None
    if not 0.0 < kwargs["significance"] <= 1.0:
        p.error(lineno, f"significance {kwargs['significance']} outside (0, 1]")
        return None
    if not 0.0 <= kwargs["init_likelihood"] <= 1.0:
        p.error(lineno, f"init_likelihood {kwargs['init_likelihood']} outside [0, 1]")
        return None
    return GoalSetup(goal_id, kwargs["significance"], kwargs["init_likelihood"])


def _parse_rule_line(p: _Parser, lineno: int, line: str) -> LikelihoodRule | None:
    head, sep, tail = line.partition(":")
    if not sep:
        p.error(lineno, f"rule line needs 'on <kind>: <effects>', got {line!r}")
        return None
    m = _RULE_HEAD_RE.match(head.strip())
    if m is None:
        p.error(lineno, f"bad rule header {head.strip()!r}")
        return None
    effects = []
    for chunk in tail.split(";"):
        chunk = chunk.strip()
        if not chunk:
            p.error(lineno, "empty effect in rule")
            continue
        effect = _parse_effect(p, lineno, chunk)
        if effect is not None:
            effects.append(effect)
    if not effects:
        return None
    return LikelihoodRule(m.group("kind"), tuple(effects), m.group("entity"))


_ETYPE_BY_NAME = {etype.value: etype for etype in EmotionType}


def _etype_targets(p: _Parser, lineno: int, token: str) -> list[EmotionType] | None:
    if token == "all":
        return list(EmotionType)
    etype = _ETYPE_BY_NAME.get(token)
    if etype is None:
        p.error(lineno, f"unknown emotion type {token!r}")
        return None
    return [etype]


def parse_config(text: str) -> CharacterizationConfig:
    """Parse a characterization document; raises ConfigError listing every
    problem found, each prefixed with its line number."""
    p = _Parser(text)
    section: str | None = None
    goals: list[GoalSetup] = []
    rules: list[LikelihoodRule] = []
    entries: list[DesirabilityEntry] = []
    mode = TABLE_MODE
    mode_line: int | None = None
    thresholds = uniform_thresholds()
    rates = uniform_rates()
    scale = DEFAULT_DECAY_SCALE
    cull_epsilon = DEFAULT_CULL_EPSILON
    window = DEFAULT_HISTORY_WINDOW
    axiom_pairs: list[tuple[EmotionType, EmotionType]] = []

    for lineno, raw in enumerate(p.lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in ("goals", "rules", "desirability", "emotion"):
                p.error(lineno, f"unknown section [{name}]")
                section = None
            else:
                section = name
            continue
        if section is None:
            p.error(lineno, f"content outside any section: {line!r}")
            continue
        if section == "goals":
            goal = _parse_goal_line(p, lineno, line)
            if goal is not None:
                goals.append(goal)
        elif section == "rules":
            rule = _parse_rule_line(p, lineno, line)
            if rule is not None:
                rules.append(rule)
        elif section == "desirability":
            tokens = line.split()
            if tokens[0] == "mode":
                if len(tokens) != 2 or tokens[1] != DELTA_SCALED_MODE:
                    p.error(lineno, f"expected 'mode delta_scaled', got {line!r}")
                else:
                    mode = DELTA_SCALED_MODE
                    mode_line = lineno
            elif tokens[0] == "desire":
                if len(tokens) != 4:
                    p.error(lineno, f"expected 'desire <event> <goal> <value>', got {line!r}")
                    continue
                value = p.parse_float(lineno, tokens[3], "desirability value")
                if value is None:
                    continue
                if not -1.0 <= value <= 1.0:
                    p.error(lineno, f"desirability value {value} outside [-1, 1]")
                    continue
                entries.append(DesirabilityEntry(tokens[1], tokens[2], value))
            else:
                p.error(lineno, f"unrecognized desirability line {line!r}")
        elif section == "emotion":
            tokens = line.split()
            key = tokens[0]
            if key in ("threshold", "decay_rate") and len(tokens) == 3:
                targets = _etype_targets(p, lineno, tokens[1])
                value = p.parse_float(lineno, tokens[2], key)
                if targets is None or value is None:
                    continue
                table = thresholds if key == "threshold" else rates
                for etype in targets:
                    table[etype] = value
            elif key == "decay_scale" and len(tokens) == 2:
                value = p.parse_float(lineno, tokens[1], key)
                if value is not None:
                    scale = value
            elif key == "cull_epsilon" and len(tokens) == 2:
                value = p.parse_float(lineno, tokens[1], key)
                if value is not None:
                    cull_epsilon = value
            elif key == "history_window" and len(tokens) == 2:
                value = p.parse_int(lineno, tokens[1], key)
                if value is not None:
                    window = value
            elif key == "axiom" and len(tokens) == 3:
                a = _ETYPE_BY_NAME.get(tokens[1])
                b = _ETYPE_BY_NAME.get(tokens[2])
                if a is None or b is None or a is b:
                    p.error(lineno, f"axiom needs two distinct emotion types, got {line!r}")
                else:
                    axiom_pairs.append((a, b))
            else:
                p.error(lineno, f"unrecognized emotion setting {line!r}")

    if mode == DELTA_SCALED_MODE and entries:
        p.error(mode_line or 0, "delta_scaled mode excludes desire entries")
    if not goals:
        p.problems.append("no goals defined")
    if p.problems:
        raise ConfigError(p.problems)

    return CharacterizationConfig(
        goals=tuple(goals),
        rules=tuple(rules),
        desirability=DesirabilitySpec(mode, tuple(entries)),
        thresholds=thresholds,
        decay=DecayParams(rates, scale, cull_epsilon),
        axioms=make_axiom_set(axiom_pairs) if axiom_pairs else DEFAULT_AXIOMS,
        history_window=window,
    )


# ---------------------------------------------------------------------------
# Validation and serialization
# ---------------------------------------------------------------------------

def validate_config(
    config: CharacterizationConfig,
    known_event_kinds: frozenset[str] = SIMULATOR_EVENT_KINDS,
) -> list[str]:
    """Every invariant violation and warning, one human-readable line each."""
    problems: list[str] = []
    ids = [g.id for g in config.goals]
    if not ids:
        problems.append("no goals defined")
    for goal_id in sorted({i for i in ids if ids.count(i) > 1}):
        problems.append(f"duplicate goal id {goal_id!r}")
    known_goals = set(ids)
    for g in config.goals:
        if not 0.0 <= g.initial_likelihood <= 1.0:
            problems.append(f"goal {g.id!r}: init_likelihood {g.initial_likelihood} outside [0, 1]")

    rule_kinds = {rule.event_kind for rule in config.rules}
    for rule in config.rules:
        for effect in rule.effects:
            if effect.goal_id not in known_goals:
                problems.append(
                    f"rule on {rule.event_kind!r} references unknown goal {effect.goal_id!r}"
                )
    for entry in config.desirability.entries:
        if entry.goal_id not in known_goals:
            problems.append(
                f"desirability for {entry.event_kind!r} references unknown goal {entry.goal_id!r}"
            )
        if not -1.0 <= entry.value <= 1.0:
            problems.append(f"desirability value {entry.value} outside [-1, 1]")
        if entry.event_kind not in rule_kinds and entry.event_kind not in known_event_kinds:
            problems.append(
                f"warning: desirability event kind {entry.event_kind!r} matches no rule "
                "or simulator event"
            )

    for etype in EmotionType:
        threshold = config.thresholds[etype]
        if not 0.0 <= threshold < 1.0:
            problems.append(f"threshold for {etype} is {threshold}, outside [0, 1)")
        rate = config.decay.rates[etype]
        if not rate > 0.0:
            problems.append(f"decay rate for {etype} is {rate}, must be positive")
    if not -1.0 < config.decay.scale < 0.0:
        problems.append(f"decay_scale {config.decay.scale} outside (-1, 0)")
    if not config.decay.cull_epsilon > 0.0:
        problems.append(f"cull_epsilon {config.decay.cull_epsilon} must be positive")
    if config.history_window < 1:
        problems.append(f"history_window {config.history_window} must be >= 1")
    return problems


def _format_effect(effect: RuleEffect) -> str:
    if isinstance(effect, SetLikelihood):
        return f"set_likelihood({effect.goal_id}, {effect.value!r})"
    if isinstance(effect, AddLikelihood):
        if effect.floor:
            return f"add_likelihood({effect.goal_id}, {effect.delta!r}, floor={effect.floor!r})"
        return f"add_likelihood({effect.goal_id}, {effect.delta!r})"
    return f"set_status({effect.goal_id}, {effect.status.value})"


def serialize_config(config: CharacterizationConfig) -> str:
    """Canonical text form; parse(serialize(parse(x))) == parse(x)."""
    lines = ["[goals]"]
    for g in config.goals:
        lines.append(
            f"goal {g.id} significance={g.significance!r} init_likelihood={g.initial_likelihood!r}"
        )
    lines.append("")
    lines.append("[rules]")
    for rule in config.rules:
        entity = f" entity={rule.entity}" if rule.entity else ""
        effects = "; ".join(_format_effect(e) for e in rule.effects)
        lines.append(f"on {rule.event_kind}{entity}: {effects}")
    lines.append("")
    lines.append("[desirability]")
    if config.desirability.mode == DELTA_SCALED_MODE:
        lines.append("mode delta_scaled")
    for entry in config.desirability.entries:
        lines.append(f"desire {entry.event_kind} {entry.goal_id} {entry.value!r}")
    lines.append("")
    lines.append("[emotion]")
    for etype in EmotionType:
        lines.append(f"threshold {etype.value} {config.thresholds[etype]!r}")
    for etype in EmotionType:
        lines.append(f"decay_rate {etype.value} {config.decay.rates[etype]!r}")
    lines.append(f"decay_scale {config.decay.scale!r}")
    lines.append(f"cull_epsilon {config.decay.cull_epsilon!r}")
    lines.append(f"history_window {config.history_window}")
    for pair in sorted(config.axioms, key=lambda pr: sorted(e.value for e in pr)):
        a, b = sorted(pair, key=lambda e: e.value)
        lines.append(f"axiom {a.value} {b.value}")
    return "\n".join(lines) + "\n"
