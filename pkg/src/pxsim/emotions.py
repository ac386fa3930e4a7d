"""Core domain types of the emotion transition system.

An agent state bundles discrete time, per-goal beliefs (status and
likelihood), the set of active emotion instances, and a bounded history of
recent emotion snapshots. Everything here is an immutable value; transitions
build new states rather than mutating old ones.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping


class EmotionType(enum.Enum):
    """The six event-based emotion types, in fixed evaluation order."""

    JOY = "joy"
    DISTRESS = "distress"
    HOPE = "hope"
    FEAR = "fear"
    SATISFACTION = "satisfaction"
    DISAPPOINTMENT = "disappointment"

    def __str__(self) -> str:
        return self.value


# Well-being emotions displace their prospect-based counterparts for the
# same goal; satisfaction and disappointment have no conflict partner.
DEFAULT_AXIOMS: frozenset[frozenset[EmotionType]] = frozenset(
    {
        frozenset({EmotionType.HOPE, EmotionType.JOY}),
        frozenset({EmotionType.FEAR, EmotionType.DISTRESS}),
    }
)

AxiomSet = frozenset[frozenset[EmotionType]]

# Per-type activation thresholds, each in [0, 1).
Thresholds = Mapping[EmotionType, float]

ZERO_THRESHOLDS: Thresholds = {etype: 0.0 for etype in EmotionType}


def make_axiom_set(pairs: Iterable[tuple[EmotionType, EmotionType]]) -> AxiomSet:
    """Build an axiom set from unordered, irreflexive emotion-type pairs."""
    out = set()
    for a, b in pairs:
        if a is b:
            raise ValueError(f"axiom pair must name two distinct emotion types, got {a}/{b}")
        out.add(frozenset({a, b}))
    return frozenset(out)


def conflicts_of(etype: EmotionType, axioms: AxiomSet) -> frozenset[EmotionType]:
    """Emotion types that may not coexist with `etype` for one goal."""
    out = set()
    for pair in axioms:
        if etype in pair:
            out.update(pair - {etype})
    return frozenset(out)


class GoalStatus(enum.Enum):
    PROCEEDING = "proceeding"
    ACHIEVED = "achieved"
    FAILED = "failed"

    @property
    def terminal(self) -> bool:
        return self is not GoalStatus.PROCEEDING

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class Goal:
    """A goal identity with its static significance weight in (0, 1]."""

    id: str
    significance: float

    def __post_init__(self) -> None:
        if not 0.0 < self.significance <= 1.0:
            raise ValueError(f"goal {self.id!r}: significance {self.significance} outside (0, 1]")


@dataclass(frozen=True)
class GoalBelief:
    """Status plus likelihood for one goal; likelihood is absent iff terminal."""

    status: GoalStatus
    likelihood: float | None

    def __post_init__(self) -> None:
        if self.likelihood is not None and not 0.0 <= self.likelihood <= 1.0:
            raise ValueError(f"likelihood {self.likelihood} outside [0, 1]")


class BeliefState:
    """Immutable per-goal belief facts.

    Updates return new instances; the internal dict is never exposed for
    mutation.
    """

    __slots__ = ("_facts",)

    def __init__(self, facts: Mapping[str, GoalBelief]):
        self._facts = dict(facts)

    def __contains__(self, goal_id: str) -> bool:
        return goal_id in self._facts

    def __iter__(self) -> Iterator[str]:
        return iter(self._facts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BeliefState) and self._facts == other._facts

    def __repr__(self) -> str:
        inner = ", ".join(
            f"{gid}:{b.status.value}/{b.likelihood}" for gid, b in sorted(self._facts.items())
        )
        return f"BeliefState({inner})"

    def get(self, goal_id: str) -> GoalBelief:
        try:
            return self._facts[goal_id]
        except KeyError:
            raise KeyError(f"no belief facts for goal {goal_id!r}") from None

    def status(self, goal_id: str) -> GoalStatus:
        return self.get(goal_id).status

    def likelihood(self, goal_id: str) -> float | None:
        return self.get(goal_id).likelihood

    def goal_ids(self) -> tuple[str, ...]:
        return tuple(self._facts)

    def replace(self, goal_id: str, belief: GoalBelief) -> BeliefState:
        if goal_id not in self._facts:
            raise KeyError(f"no belief facts for goal {goal_id!r}")
        facts = dict(self._facts)
        facts[goal_id] = belief
        return BeliefState(facts)


@dataclass(frozen=True)
class EmotionInstance:
    """One active emotion episode for one goal.

    `peak` is the intensity at trigger time `t0`; `intensity` is the current
    (possibly decayed) value, always in (0, peak].
    """

    etype: EmotionType
    goal_id: str
    intensity: float
    t0: int
    peak: float

    def __post_init__(self) -> None:
        if not 0.0 < self.intensity <= self.peak <= 1.0:
            raise ValueError(
                f"{self.etype} for {self.goal_id!r}: intensity {self.intensity} "
                f"and peak {self.peak} must satisfy 0 < intensity <= peak <= 1"
            )


class EmotionState:
    """Active emotion instances, at most one per (etype, goal)."""

    __slots__ = ("_active",)

    def __init__(self, instances: Iterable[EmotionInstance] = ()):
        ordered = sorted(instances, key=lambda i: (list(EmotionType).index(i.etype), i.goal_id))
        seen: set[tuple[EmotionType, str]] = set()
        for inst in ordered:
            key = (inst.etype, inst.goal_id)
            if key in seen:
                raise ValueError(f"duplicate emotion instance for {key}")
            seen.add(key)
        self._active: tuple[EmotionInstance, ...] = tuple(ordered)

    def __iter__(self) -> Iterator[EmotionInstance]:
        return iter(self._active)

    def __len__(self) -> int:
        return len(self._active)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, EmotionState) and self._active == other._active

    def __repr__(self) -> str:
        inner = ", ".join(f"{i.etype}({i.goal_id})={i.intensity:.4f}" for i in self._active)
        return f"EmotionState({inner})"

    def get(self, etype: EmotionType, goal_id: str) -> EmotionInstance | None:
        for inst in self._active:
            if inst.etype is etype and inst.goal_id == goal_id:
                return inst
        return None

    def instances(self) -> tuple[EmotionInstance, ...]:
        return self._active


EMPTY_EMOTIONS = EmotionState()


@dataclass(frozen=True)
class AxiomViolation:
    goal_id: str
    pair: frozenset[EmotionType]

    def __repr__(self) -> str:
        names = "/".join(sorted(e.value for e in self.pair))
        return f"AxiomViolation({self.goal_id!r}, {names})"


def check_axioms(emotions: EmotionState, axioms: AxiomSet) -> list[AxiomViolation]:
    """Every (goal, pair) where both members of an excluded pair are active."""
    violations = []
    goal_ids = {inst.goal_id for inst in emotions}
    for goal_id in sorted(goal_ids):
        for pair in axioms:
            if all(emotions.get(etype, goal_id) is not None for etype in pair):
                violations.append(AxiomViolation(goal_id, pair))
    return violations


class EmotionHistory:
    """Time-indexed emotion snapshots kept for a bounded window.

    The entry for time t is the last emotion state recorded at t; entries
    older than `window` ticks are evicted on each record.
    """

    __slots__ = ("window", "_entries")

    def __init__(self, window: int, entries: Mapping[int, EmotionState] | None = None):
        if window < 1:
            raise ValueError(f"history window must be >= 1, got {window}")
        self.window = window
        self._entries: dict[int, EmotionState] = dict(entries) if entries else {}

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, EmotionHistory)
            and self.window == other.window
            and self._entries == other._entries
        )

    def record(self, t: int, emotions: EmotionState) -> EmotionHistory:
        entries = {time: snap for time, snap in self._entries.items() if time >= t - self.window}
        entries[t] = emotions
        return EmotionHistory(self.window, entries)

    def snapshot_at(self, t: int) -> EmotionState | None:
        return self._entries.get(t)

    def times(self) -> tuple[int, ...]:
        return tuple(sorted(self._entries))

    def ever_active(self, etype: EmotionType, goal_id: str) -> bool:
        """Whether (etype, goal) appears in any retained snapshot."""
        return any(snap.get(etype, goal_id) is not None for snap in self._entries.values())


def history_peak(
    history: EmotionHistory, etype: EmotionType, goal_id: str, t0: int
) -> float | None:
    """Peak intensity of the episode triggered at t0, if still in the window.

    The snapshot recorded at trigger time holds the instance at its peak; once
    that snapshot is evicted the lookup comes back empty.
    """
    snap = history.snapshot_at(t0)
    if snap is None:
        return None
    inst = snap.get(etype, goal_id)
    if inst is None or inst.t0 != t0:
        return None
    return inst.peak


@dataclass(frozen=True)
class AgentState:
    """One state of the transition system: time, beliefs, emotions, history."""

    time: int
    beliefs: BeliefState
    emotions: EmotionState
    history: EmotionHistory = field(compare=False)
