"""The event-driven transition function: belief update, terminal cleanup,
exponential decay, and the merge of new emotions into the active set.

`step` is pure: one (state, event) pair always produces the same successor.
Tick events advance the clock by one and decay; every other event updates
beliefs, runs appraisal against the pre-cleanup beliefs, and merges.
"""

from __future__ import annotations

import math
from typing import Iterable, Sequence

from .appraisal import AppraisalDimensions, NewEmotion, dimensions_for, new_emotions
from .config import (
    CharacterizationConfig,
    ConfigError,
    DecayParams,
    apply_rules,
    validate_config,
)
from .emotions import (
    AgentState,
    AxiomSet,
    BeliefState,
    EmotionHistory,
    EmotionInstance,
    EmotionState,
    EmotionType,
    GoalBelief,
    GoalStatus,
    conflicts_of,
)
from .events import Event


class TransitionError(ValueError):
    """A step was asked to process an event it cannot accept."""


def apply_event_to_beliefs(
    beliefs: BeliefState, event: Event, rules: Sequence
) -> BeliefState:
    """The post-event beliefs, before terminal cleanup."""
    return apply_rules(beliefs, event.kind, event.payload, tuple(rules))


def terminal_cleanup(beliefs: BeliefState) -> BeliefState:
    """Drop the likelihood fact of every achieved or failed goal."""
    out = beliefs
    for goal_id in beliefs.goal_ids():
        belief = beliefs.get(goal_id)
        if belief.status.terminal and belief.likelihood is not None:
            out = out.replace(goal_id, GoalBelief(belief.status, None))
    return out


def decayed_intensity(peak: float, t0: int, t: int, rate: float, scale: float) -> float:
    """Closed-form intensity of an episode at time t >= t0."""
    return peak * math.exp(scale * rate * (t - t0))


def decay_emotions(emotions: EmotionState, t: int, params: DecayParams) -> EmotionState:
    """Recompute every instance from its peak; drop those below the cull
    bound. Recomputing from the peak keeps repeated decay at the same time
    exact."""
    survivors = []
    for inst in emotions:
        if t < inst.t0:
            raise TransitionError(f"decay asked for time {t} before trigger {inst.t0}")
        intensity = decayed_intensity(inst.peak, inst.t0, t, params.rate(inst.etype), params.scale)
        if intensity >= params.cull_epsilon:
            survivors.append(
                EmotionInstance(inst.etype, inst.goal_id, intensity, inst.t0, inst.peak)
            )
    return EmotionState(survivors)


def _as_instance(new: NewEmotion) -> EmotionInstance:
    return EmotionInstance(new.etype, new.goal_id, new.intensity, new.time, new.intensity)


def _enforce_axioms(
    instances: dict[tuple[EmotionType, str], EmotionInstance], axioms: AxiomSet
) -> None:
    """Drop the weaker side of any remaining conflicting pair.

    With the default axioms this never fires (the activation guards are
    disjoint); configured extra pairs can make simultaneously triggered
    emotions conflict, resolved here by intensity, then recency.
    """
    order = list(EmotionType)
    changed = True
    while changed:
        changed = False
        for key in sorted(instances, key=lambda k: (order.index(k[0]), k[1])):
            etype, goal_id = key
            for conflict in conflicts_of(etype, axioms):
                other = instances.get((conflict, goal_id))
                if other is None:
                    continue
                inst = instances[key]
                loser = min(
                    (inst, other),
                    key=lambda i: (i.intensity, i.t0, -order.index(i.etype)),
                )
                del instances[(loser.etype, loser.goal_id)]
                changed = True
                break
            if changed:
                break


def merge(
    new: Iterable[NewEmotion], decayed: EmotionState, axioms: AxiomSet
) -> EmotionState:
    """Combine newly triggered emotions with the decayed active set.

    Decayed instances survive unless re-triggered or displaced by a new
    conflicting emotion for the same goal; re-triggered instances keep
    whichever side has the higher intensity (ties go to the new one), along
    with that side's own peak and trigger time.
    """
    new_by_key = {(n.etype, n.goal_id): n for n in new}
    out: dict[tuple[EmotionType, str], EmotionInstance] = {}
    for inst in decayed:
        key = (inst.etype, inst.goal_id)
        fresh = new_by_key.get(key)
        if fresh is None:
            displaced = any(
                (conflict, inst.goal_id) in new_by_key
                for conflict in conflicts_of(inst.etype, axioms)
            )
            if not displaced:
                out[key] = inst
        elif inst.intensity > fresh.intensity:
            out[key] = inst
        else:
            out[key] = _as_instance(fresh)
    for key, fresh in new_by_key.items():
        if key not in out and decayed.get(*key) is None:
            out[key] = _as_instance(fresh)
    _enforce_axioms(out, axioms)
    return EmotionState(out.values())


def initial_state(config: CharacterizationConfig) -> AgentState:
    """State at time 0: every goal proceeding at its initial likelihood, with
    hope and fear seeded from that prospect where they clear their
    thresholds."""
    facts = {}
    instances = []
    for goal in config.goals:
        facts[goal.id] = GoalBelief(GoalStatus.PROCEEDING, goal.initial_likelihood)
        hope = goal.initial_likelihood * goal.significance - config.thresholds[EmotionType.HOPE]
        fear = (1.0 - goal.initial_likelihood) * goal.significance - config.thresholds[
            EmotionType.FEAR
        ]
        for etype, intensity in ((EmotionType.HOPE, hope), (EmotionType.FEAR, fear)):
            if intensity > 0.0:
                intensity = min(intensity, 1.0)
                instances.append(EmotionInstance(etype, goal.id, intensity, 0, intensity))
    emotions = EmotionState(instances)
    history = EmotionHistory(config.history_window).record(0, emotions)
    return AgentState(0, BeliefState(facts), emotions, history)


def step(
    state: AgentState,
    event: Event,
    config: CharacterizationConfig,
    dims: AppraisalDimensions | None = None,
) -> AgentState:
    """One transition. Ticks advance time and decay; other events update
    beliefs and appraise against the pre-cleanup belief state."""
    if event.time < state.time:
        raise TransitionError(
            f"event {event.kind!r} at time {event.time} behind state time {state.time}"
        )
    if event.is_tick:
        t = state.time + 1
        emotions = decay_emotions(state.emotions, t, config.decay)
        return AgentState(t, state.beliefs, emotions, state.history.record(t, emotions))

    if dims is None:
        dims = dimensions_for(config)
    t = state.time
    k_after = apply_rules(state.beliefs, event.kind, event.payload, config.rules)
    fresh = new_emotions(
        state.beliefs, k_after, event, config.goals, state.history, dims, config.thresholds, t
    )
    decayed = decay_emotions(state.emotions, t, config.decay)
    merged = merge(fresh, decayed, config.axioms)
    return AgentState(t, terminal_cleanup(k_after), merged, state.history.record(t, merged))


class Engine:
    """Binds a validated characterization to the pure transition functions."""

    def __init__(self, config: CharacterizationConfig):
        hard = [p for p in validate_config(config) if not p.startswith("warning:")]
        if hard:
            raise ConfigError(hard)
        self.config = config
        self.dims = dimensions_for(config)

    def initial_state(self) -> AgentState:
        return initial_state(self.config)

    def step(self, state: AgentState, event: Event) -> AgentState:
        return step(state, event, self.config, self.dims)

    def run(self, events: Iterable[Event]) -> list[AgentState]:
        """The state trajectory: initial state plus one state per event."""
        states = [self.initial_state()]
        for event in events:
            states.append(self.step(states[-1], event))
        return states
