"""Per-project event fan-out: one ordered channel carrying revision bumps,
suggestion events, and chat events to every subscriber.

Subscribers get a buffered queue; beyond the buffer cap the oldest events are
dropped and the subscriber must detect the seq gap and resync via GET.
"""

from __future__ import annotations

import json
import queue
import threading
from collections import deque
from typing import Any, Iterator, Optional

BUFFER_LIMIT = 1000


class EventBus:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._seq = 0
        self._history: deque[dict[str, Any]] = deque(maxlen=BUFFER_LIMIT)
        self._subscribers: list[queue.Queue] = []

    def publish(self, event_type: str, payload: Any) -> dict[str, Any]:
        with self._lock:
            self._seq += 1
            event = {"seq": self._seq, "type": event_type, "payload": payload}
            self._history.append(event)
            for sub in self._subscribers:
                if sub.qsize() >= BUFFER_LIMIT:
                    try:
                        sub.get_nowait()  # drop-oldest
                    except queue.Empty:
                        pass
                sub.put(event)
        return event

    def subscribe(self) -> queue.Queue:
        sub: queue.Queue = queue.Queue()
        with self._lock:
            self._subscribers.append(sub)
        return sub

    def unsubscribe(self, sub: queue.Queue) -> None:
        with self._lock:
            if sub in self._subscribers:
                self._subscribers.remove(sub)

    def since(self, seq: int) -> tuple[list[dict[str, Any]], bool]:
        """Buffered events after ``seq``; gap=True when the buffer no longer
        reaches back that far, so the client must resync."""
        with self._lock:
            events = [e for e in self._history if e["seq"] > seq]
            oldest = self._history[0]["seq"] if self._history else self._seq + 1
            gap = seq + 1 < oldest and self._seq > seq
        return events, gap

    @property
    def seq(self) -> int:
        with self._lock:
            return self._seq


def sse_stream(
    bus: EventBus,
    since_seq: int = 0,
    limit: Optional[int] = None,
    heartbeat_seconds: float = 15.0,
) -> Iterator[str]:
    """Server-sent events generator. ``limit`` closes the stream after that
    many events (used by tests and polling clients)."""
    sub = bus.subscribe()
    sent = 0
    try:
        backlog, gap = bus.since(since_seq)
        if gap:
            yield _format({"seq": since_seq, "type": "gap", "payload": {}})
        for event in backlog:
            yield _format(event)
            sent += 1
            if limit is not None and sent >= limit:
                return
        last_seq = backlog[-1]["seq"] if backlog else since_seq
        while True:
            try:
                event = sub.get(timeout=heartbeat_seconds)
            except queue.Empty:
                yield ": heartbeat\n\n"
                continue
            if event["seq"] <= last_seq:
                continue
            yield _format(event)
            last_seq = event["seq"]
            sent += 1
            if limit is not None and sent >= limit:
                return
    finally:
        bus.unsubscribe(sub)


def _format(event: dict[str, Any]) -> str:
    return f"id: {event['seq']}\ndata: {json.dumps(event, sort_keys=True)}\n\n"
