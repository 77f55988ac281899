"""Token bucket shared across worker threads, plus retry with exponential backoff."""

import threading
import time


class TokenBucket:
    def __init__(self, rate: float = 10.0, capacity: float | None = None, clock=time.monotonic, sleep=time.sleep):
        if rate <= 0:
            raise ValueError("rate must be positive")
        self.rate = float(rate)
        self.capacity = float(capacity if capacity is not None else max(1.0, rate))
        self._tokens = self.capacity
        self._clock = clock
        self._sleep = sleep
        self._last = clock()
        self._lock = threading.Lock()

    def _refill(self):
        now = self._clock()
        self._tokens = min(self.capacity, self._tokens + (now - self._last) * self.rate)
        self._last = now

    def acquire(self, n: float = 1.0):
        while True:
            with self._lock:
                self._refill()
                # tolerance: a sleep of exactly the deficit can refill to just under n
                if self._tokens >= n - 1e-9:
                    self._tokens = max(0.0, self._tokens - n)
                    return
                wait = (n - self._tokens) / self.rate
            self._sleep(wait)


class RetryExhausted(Exception):
    def __init__(self, attempts, last):
        super().__init__(f"gave up after {attempts} attempts: {last}")
        self.attempts = attempts
        self.last = last


def backoff_delays(max_attempts=5, base=1.0, factor=2.0):
    """Sleeps between attempts: base, base*factor, ... (max_attempts - 1 values)."""
    return [base * factor ** i for i in range(max_attempts - 1)]


def call_with_retry(fn, retryable, max_attempts=5, base=1.0, factor=2.0, sleep=time.sleep, before_attempt=None):
    """Call ``fn`` until it succeeds, retrying exceptions of type ``retryable``.

    Other exceptions propagate immediately.  ``before_attempt`` runs before each
    try (used for rate limiting so retries also pay a token).
    """
    delays = backoff_delays(max_attempts, base, factor)
    for attempt in range(max_attempts):
        if before_attempt is not None:
            before_attempt()
        try:
            return fn()
        except retryable as exc:
            if attempt == max_attempts - 1:
                raise RetryExhausted(max_attempts, exc) from exc
            sleep(delays[attempt])
