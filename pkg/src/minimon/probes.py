"""Measurement probes in the four styles whose overhead the harness compares.

* ``DirectFullProbe`` -- inlined enter/exit calls producing FullRecords
  with trace metadata.
* ``DirectDurationProbe`` -- inlined enter/exit producing minimal
  DurationRecords, touching no trace state.
* ``AggregatingProbe`` -- sums durations per signature and emits one
  AggregatedRecord per window of W invocations.
* ``intercept`` -- a generic interception layer (per-call context
  allocation, dynamic dispatch, extra call indirection) emitting the
  same FullRecords a direct probe would; models the cost of
  aspect-weaving style instrumentation.

Durations come from a monotonic nanosecond clock, never wall-clock time.
"""

from __future__ import annotations

import threading
import time
from enum import Enum
from typing import Callable, Optional

from .records import AggregatedRecord, DurationRecord, FullRecord
from .trace_registry import NO_TRACE, TraceRegistry

__all__ = [
    "ProbeKind",
    "AggregationState",
    "CallContext",
    "DirectFullProbe",
    "DirectDurationProbe",
    "AggregatingProbe",
    "aggregate_duration",
    "intercept",
    "BENCH_HOSTNAME",
    "BENCH_SESSION_ID",
    "DEFAULT_AGGREGATION_WINDOW",
]

monotonic_ns = time.perf_counter_ns

# Constant host/session identity: the benchmark is single-process, but
# FullRecord carries both so its per-record cost stays realistic.
BENCH_HOSTNAME = "bench-host"
BENCH_SESSION_ID = "s0"

DEFAULT_AGGREGATION_WINDOW = 1000


class ProbeKind(Enum):
    NONE = "none"
    INTERCEPTOR_FULL = "interceptor-full"
    DIRECT_FULL = "direct-full"
    DIRECT_DURATION = "direct-duration"
    DIRECT_AGGREGATING = "direct-aggregating"


class AggregationState:
    """Windowed sum/count accumulator for one signature."""

    __slots__ = ("signature", "window", "counter", "sum")

    def __init__(self, signature: str, window: int = DEFAULT_AGGREGATION_WINDOW):
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        self.signature = signature
        self.window = window
        self.counter = 0
        self.sum = 0


def aggregate_duration(state: AggregationState, duration: int) -> Optional[AggregatedRecord]:
    """Fold one duration into the window; returns a record when it fills."""
    state.sum += duration
    state.counter += 1
    if state.counter == state.window:
        record = AggregatedRecord(state.signature, state.counter, state.sum)
        state.counter = 0
        state.sum = 0
        return record
    return None


class DirectFullProbe:
    """Enter/exit probe emitting FullRecords with trace metadata."""

    def __init__(self, emit: Callable, registry: TraceRegistry | None = None):
        self._emit = emit
        self.registry = registry if registry is not None else TraceRegistry()

    def enter(self, signature: str):
        registry = self.registry
        trace_id = registry.recall_trace_id()
        if trace_id == NO_TRACE:
            trace_id = registry.begin_trace()
        eoi, ess = registry.enter_method()
        return signature, monotonic_ns(), trace_id, eoi, ess

    def exit(self, token) -> None:
        tout = monotonic_ns()
        signature, tin, trace_id, eoi, ess = token
        self._emit(FullRecord(signature, tin, tout, trace_id, eoi, ess,
                              BENCH_HOSTNAME, BENCH_SESSION_ID))
        self.registry.exit_method()


class DirectDurationProbe:
    """Enter/exit probe emitting minimal DurationRecords."""

    def __init__(self, emit: Callable):
        self._emit = emit

    def enter(self) -> int:
        return monotonic_ns()

    def exit(self, signature: str, tin: int) -> None:
        self._emit(DurationRecord(signature, monotonic_ns() - tin))


class AggregatingProbe:
    """Enter/exit probe that aggregates durations per signature.

    State is kept per calling thread (no hot-path synchronization); call
    :meth:`flush` from each producing thread before pipeline shutdown to
    emit any residual partial window (count < W).
    """

    def __init__(self, emit: Callable, window: int = DEFAULT_AGGREGATION_WINDOW):
        if window < 1:
            raise ValueError(f"window must be >= 1, got {window}")
        self._emit = emit
        self.window = window
        self._local = threading.local()

    def _states(self) -> dict:
        states = getattr(self._local, "states", None)
        if states is None:
            states = {}
            self._local.states = states
        return states

    def enter(self) -> int:
        return monotonic_ns()

    def exit(self, signature: str, tin: int) -> None:
        duration = monotonic_ns() - tin
        states = self._states()
        state = states.get(signature)
        if state is None:
            state = AggregationState(signature, self.window)
            states[signature] = state
        record = aggregate_duration(state, duration)
        if record is not None:
            self._emit(record)

    def flush(self) -> int:
        """Emit partial windows of the calling thread; returns emit count."""
        emitted = 0
        for state in self._states().values():
            if state.counter > 0:
                self._emit(AggregatedRecord(state.signature, state.counter, state.sum))
                state.counter = 0
                state.sum = 0
                emitted += 1
        return emitted


class CallContext:
    """Per-invocation join-point context an interceptor allocates.

    Owns the wrapped callable and its (boxed) arguments; the actual
    invocation happens through :meth:`proceed`, mirroring how weaving
    frameworks route the original call through the join point.
    """

    __slots__ = ("signature", "argument_descriptors", "_fn", "_args", "_kwargs")

    allocated = 0  # class-wide allocation counter, for tests

    def __init__(self, signature: str, fn: Callable, args: tuple, kwargs: dict):
        self.signature = signature
        self.argument_descriptors = [repr(a) for a in args] + [
            f"{k}={v!r}" for k, v in kwargs.items()]
        self._fn = fn
        self._args = args
        self._kwargs = kwargs
        CallContext.allocated += 1

    def proceed(self):
        return _invoke(self._fn, self._args, self._kwargs)


class Interceptor:
    """Dynamically dispatched before/after interface for intercepted calls."""

    def before(self, context: CallContext):
        raise NotImplementedError

    def after(self, context: CallContext, token) -> None:
        raise NotImplementedError


class FullRecordInterceptor(Interceptor):
    """Interceptor whose after-handler emits the same FullRecord a
    DirectFullProbe would."""

    def __init__(self, emit: Callable, registry: TraceRegistry | None = None):
        self._probe = DirectFullProbe(emit, registry)

    def before(self, context: CallContext):
        return self._probe.enter(context.signature)

    def after(self, context: CallContext, token) -> None:
        self._probe.exit(token)


def _invoke(fn: Callable, args: tuple, kwargs: dict):
    # Deliberate extra indirection level on every intercepted call.
    return fn(*args, **kwargs)


def intercept(wrapped: Callable, signature: str, emit: Callable,
              registry: TraceRegistry | None = None) -> Callable:
    """Wrap ``wrapped`` in a monitoring interceptor.

    Each invocation allocates a fresh :class:`CallContext` (boxing the
    arguments), dispatches through the :class:`Interceptor` interface
    before and after the call, and reaches ``wrapped`` through the
    context's ``proceed`` plus one further indirect call. The wrapped
    callable's behavior is unchanged; an exception inside it still
    triggers the after-handler (record emitted at unwind time).
    """
    interceptor: Interceptor = FullRecordInterceptor(emit, registry)

    def proxy(*args, **kwargs):
        context = CallContext(signature, wrapped, args, kwargs)
        token = interceptor.before(context)
        try:
            return context.proceed()
        finally:
            interceptor.after(context, token)

    return proxy
