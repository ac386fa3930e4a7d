"""Events that drive the transition system, plus the simulator vocabulary."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

TICK = "tick"
BUTTON_PRESSED = "button_pressed"
DOOR_OPENED = "door_opened"
DOOR_CLOSED = "door_closed"
FIRE_DAMAGE = "fire_damage"
LEVEL_COMPLETED = "level_completed"
AGENT_DIED = "agent_died"
STEP_CAP_REACHED = "step_cap_reached"

# Every event kind the grid simulator can emit.
SIMULATOR_EVENT_KINDS: frozenset[str] = frozenset(
    {
        TICK,
        BUTTON_PRESSED,
        DOOR_OPENED,
        DOOR_CLOSED,
        FIRE_DAMAGE,
        LEVEL_COMPLETED,
        AGENT_DIED,
        STEP_CAP_REACHED,
    }
)


@dataclass(frozen=True)
class Event:
    """A timestamped occurrence; `payload` carries entity ids and amounts."""

    kind: str
    time: int
    payload: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind == TICK and self.payload:
            raise ValueError("tick events carry no payload")
        if self.time < 0:
            raise ValueError(f"event time must be non-negative, got {self.time}")

    @property
    def is_tick(self) -> bool:
        return self.kind == TICK

    def entity(self) -> str | None:
        value = self.payload.get("entity")
        return value if isinstance(value, str) else None


def tick(time: int) -> Event:
    return Event(TICK, time)
