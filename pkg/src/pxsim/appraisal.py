"""Appraisal: desirability of events and the activation functions that turn
belief changes into new emotions.

All functions here are pure. Activation functions return the activation
intensity when their guards hold and the value is strictly positive, else
None. Joy/distress appraise the event's desirability; hope/fear look only at
the likelihood change; satisfaction/disappointment fire on confirmed goal
status, gated on the emotion history.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .config import DELTA_SCALED_MODE, CharacterizationConfig, apply_rules
from .emotions import (
    BeliefState,
    EmotionHistory,
    EmotionType,
    Goal,
    GoalStatus,
    Thresholds,
)
from .events import Event

DesirabilityFn = Callable[[BeliefState, Event, Goal], float]


@dataclass(frozen=True)
class AppraisalDimensions:
    """The appraisal dimension tuple; only desirability is active.

    The remaining slots are carried for forward compatibility and never
    consulted.
    """

    des: DesirabilityFn
    praisew: object | None = None
    des_other: object | None = None
    liking: object | None = None


def desirability(beliefs: BeliefState, event: Event, goal: Goal, config: CharacterizationConfig) -> float:
    """Signed desirability of `event` for `goal` in [-1, 1].

    Table mode returns the configured constant (0 for unlisted pairs). In
    delta-scaled mode the value is the likelihood change the event induces,
    weighted by significance and clamped.
    """
    spec = config.desirability
    if spec.mode != DELTA_SCALED_MODE:
        return spec.lookup(event.kind, goal.id)
    before = beliefs.likelihood(goal.id)
    if before is None:
        return 0.0
    updated = apply_rules(beliefs, event.kind, event.payload, config.rules)
    after = updated.likelihood(goal.id)
    if after is None:
        return 0.0
    return max(-1.0, min(1.0, (after - before) * goal.significance))


def dimensions_for(config: CharacterizationConfig) -> AppraisalDimensions:
    """Appraisal dimensions bound to a characterization config."""
    def des(beliefs: BeliefState, event: Event, goal: Goal) -> float:
        return desirability(beliefs, event, goal, config)

    return AppraisalDimensions(des=des)


@dataclass(frozen=True)
class NewEmotion:
    """A freshly triggered emotion, stamped with its trigger time."""

    etype: EmotionType
    goal_id: str
    intensity: float
    time: int

    def __post_init__(self) -> None:
        if not self.intensity > 0.0:
            raise ValueError("new emotions must have strictly positive intensity")


def _positive(value: float) -> float | None:
    if value > 0.0:
        return min(value, 1.0)
    return None


def activate_joy(
    k_old: BeliefState,
    k_new: BeliefState,
    event: Event,
    goal: Goal,
    dims: AppraisalDimensions,
    thresholds: Thresholds,
) -> float | None:
    """Desirability minus threshold, when the goal's likelihood has become
    certain (1) in the post-event beliefs and the event is desirable."""
    if k_new.likelihood(goal.id) != 1.0:
        return None
    des = dims.des(k_old, event, goal)
    if des <= 0.0:
        return None
    return _positive(des - thresholds[EmotionType.JOY])


def activate_distress(
    k_old: BeliefState,
    k_new: BeliefState,
    event: Event,
    goal: Goal,
    dims: AppraisalDimensions,
    thresholds: Thresholds,
) -> float | None:
    """|desirability| minus threshold, when the likelihood has hit 0 and the
    event is undesirable."""
    if k_new.likelihood(goal.id) != 0.0:
        return None
    des = dims.des(k_old, event, goal)
    if des >= 0.0:
        return None
    return _positive(abs(des) - thresholds[EmotionType.DISTRESS])


def activate_hope(
    k_old: BeliefState,
    k_new: BeliefState,
    goal: Goal,
    thresholds: Thresholds,
) -> float | None:
    """New likelihood times significance, on a strict rise short of certainty.

    Desirability is not consulted: a likelihood increase already presupposes a
    desirable event.
    """
    v = k_old.likelihood(goal.id)
    v_new = k_new.likelihood(goal.id)
    if v is None or v_new is None or not v < v_new < 1.0:
        return None
    return _positive(v_new * goal.significance - thresholds[EmotionType.HOPE])


def activate_fear(
    k_old: BeliefState,
    k_new: BeliefState,
    goal: Goal,
    thresholds: Thresholds,
) -> float | None:
    """(1 - new likelihood) times significance, on a strict drop short of 0."""
    v = k_old.likelihood(goal.id)
    v_new = k_new.likelihood(goal.id)
    if v is None or v_new is None or not 0.0 < v_new < v:
        return None
    return _positive((1.0 - v_new) * goal.significance - thresholds[EmotionType.FEAR])


def _in_history_or_step(
    etype: EmotionType,
    goal_id: str,
    history: EmotionHistory,
    same_step: Iterable[NewEmotion],
) -> bool:
    if any(n.etype is etype and n.goal_id == goal_id for n in same_step):
        return True
    return history.ever_active(etype, goal_id)


def activate_satisfaction(
    k_new: BeliefState,
    goal: Goal,
    history: EmotionHistory,
    same_step: Iterable[NewEmotion],
    thresholds: Thresholds,
) -> float | None:
    """Significance minus threshold when the goal is confirmed achieved and
    both hope and joy preceded it (joy may be from this very step)."""
    if k_new.status(goal.id) is not GoalStatus.ACHIEVED:
        return None
    if not history.ever_active(EmotionType.HOPE, goal.id):
        return None
    if not _in_history_or_step(EmotionType.JOY, goal.id, history, same_step):
        return None
    return _positive(goal.significance - thresholds[EmotionType.SATISFACTION])


def activate_disappointment(
    k_new: BeliefState,
    goal: Goal,
    history: EmotionHistory,
    same_step: Iterable[NewEmotion],
    thresholds: Thresholds,
) -> float | None:
    """Significance minus threshold when the goal is confirmed failed after
    hope, with distress recorded or co-triggered."""
    if k_new.status(goal.id) is not GoalStatus.FAILED:
        return None
    if not history.ever_active(EmotionType.HOPE, goal.id):
        return None
    if not _in_history_or_step(EmotionType.DISTRESS, goal.id, history, same_step):
        return None
    return _positive(goal.significance - thresholds[EmotionType.DISAPPOINTMENT])


def new_emotions(
    k_old: BeliefState,
    k_new: BeliefState,
    event: Event,
    goals: Iterable[Goal],
    history: EmotionHistory,
    dims: AppraisalDimensions,
    thresholds: Thresholds,
    t: int,
) -> tuple[NewEmotion, ...]:
    """All positive activations for one non-tick event, in the fixed order
    joy, distress, hope, fear, satisfaction, disappointment per goal.

    Joy/distress produced earlier in the same call satisfy the history guards
    of satisfaction/disappointment.
    """
    if event.is_tick:
        raise ValueError("tick events trigger no appraisal")
    out: list[NewEmotion] = []
    for goal in goals:
        candidates: list[tuple[EmotionType, float | None]] = [
            (EmotionType.JOY, activate_joy(k_old, k_new, event, goal, dims, thresholds)),
            (EmotionType.DISTRESS, activate_distress(k_old, k_new, event, goal, dims, thresholds)),
            (EmotionType.HOPE, activate_hope(k_old, k_new, goal, thresholds)),
            (EmotionType.FEAR, activate_fear(k_old, k_new, goal, thresholds)),
        ]
        for etype, intensity in candidates:
            if intensity is not None:
                out.append(NewEmotion(etype, goal.id, intensity, t))
        satisfaction = activate_satisfaction(k_new, goal, history, out, thresholds)
        if satisfaction is not None:
            out.append(NewEmotion(EmotionType.SATISFACTION, goal.id, satisfaction, t))
        disappointment = activate_disappointment(k_new, goal, history, out, thresholds)
        if disappointment is not None:
            out.append(NewEmotion(EmotionType.DISAPPOINTMENT, goal.id, disappointment, t))
    return tuple(out)
