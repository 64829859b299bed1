"""HTTP transport funnel with a global offline guard and rate limiting.

Every live network request in the package goes through :func:`http_request`,
so switching the process offline (``set_offline(True)``) turns any attempted
network call into a hard ``OfflineViolation``.  Tests rely on this to prove
fixture completeness.
"""

from __future__ import annotations

import threading
import time
from collections import deque
from typing import Callable

_offline = False
_request_count = 0
_lock = threading.Lock()


class NetworkError(RuntimeError):
    pass


class OfflineViolation(NetworkError):
    """A live network request was attempted while offline mode is on."""


class RateLimited(NetworkError):
    """Backoff budget exhausted while waiting for a rate-limit slot."""


def set_offline(value: bool) -> None:
    global _offline
    _offline = bool(value)


def is_offline() -> bool:
    return _offline


def request_count() -> int:
    return _request_count


def http_request(
    method: str,
    url: str,
    *,
    params: dict | None = None,
    json_body: dict | None = None,
    headers: dict | None = None,
    timeout: float = 30.0,
) -> tuple[int, str]:
    """Issue a live HTTP request; returns (status_code, body text)."""
    global _request_count
    if _offline:
        raise OfflineViolation(f"offline mode forbids {method} {url}")
    with _lock:
        _request_count += 1
    import requests

    try:
        resp = requests.request(
            method, url, params=params, json=json_body, headers=headers, timeout=timeout
        )
    except requests.Timeout as exc:
        raise NetworkError(f"timeout talking to {url}") from exc
    except requests.RequestException as exc:
        raise NetworkError(f"transport failure talking to {url}: {exc}") from exc
    return resp.status_code, resp.text


Transport = Callable[..., tuple[int, str]]


class RateLimiter:
    """Caps in-flight requests and requests per second for one endpoint.

    The clock and sleep functions are injectable so the limiter can be
    property-tested against a virtual clock.
    """

    def __init__(
        self,
        max_in_flight: int = 4,
        max_per_second: int = 5,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
        max_wait: float = 60.0,
    ):
        if max_in_flight < 1 or max_per_second < 1:
            raise ValueError("limits must be >= 1")
        self.max_in_flight = max_in_flight
        self.max_per_second = max_per_second
        self._clock = clock
        self._sleep = sleep
        self._max_wait = max_wait
        self._in_flight = 0
        self._recent: deque[float] = deque()
        self._lock = threading.Lock()

    def _window_count(self, now: float) -> int:
        while self._recent and self._recent[0] <= now - 1.0:
            self._recent.popleft()
        return len(self._recent)

    def acquire(self) -> None:
        waited = 0.0
        while True:
            with self._lock:
                now = self._clock()
                if (
                    self._in_flight < self.max_in_flight
                    and self._window_count(now) < self.max_per_second
                ):
                    self._in_flight += 1
                    self._recent.append(now)
                    return
            if waited >= self._max_wait:
                raise RateLimited(
                    f"no slot after {waited:.1f}s "
                    f"(in flight {self._in_flight}/{self.max_in_flight})"
                )
            self._sleep(0.05)
            waited += 0.05

    def release(self) -> None:
        with self._lock:
            self._in_flight = max(0, self._in_flight - 1)

    @property
    def in_flight(self) -> int:
        return self._in_flight

    def __enter__(self):
        self.acquire()
        return self

    def __exit__(self, *exc):
        self.release()
        return False
