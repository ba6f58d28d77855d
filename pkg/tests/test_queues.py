import collections
import random
import threading
import time

import pytest

from minimon.queues import BlockingLinkedQueue, QueueKind, SyncRingQueue, make_queue


class FifoModel:
    """Reference FIFO, optionally with ring-style overwrite when full."""

    def __init__(self, capacity, overwrite):
        self.capacity = capacity
        self.overwrite = overwrite
        self.items = collections.deque()
        self.enqueued = 0
        self.dequeued = 0
        self.overwritten = 0

    def put(self, item):
        if len(self.items) == self.capacity:
            assert self.overwrite, "model put on a full blocking queue"
            self.items.popleft()
            self.overwritten += 1
        self.items.append(item)
        self.enqueued += 1

    def take(self):
        if not self.items:
            return None
        self.dequeued += 1
        return self.items.popleft()


@pytest.mark.parametrize("capacity", [1, 3, 10])
def test_sync_ring_matches_model(capacity):
    rng = random.Random(7)
    queue = SyncRingQueue(capacity)
    model = FifoModel(capacity, overwrite=True)
    for i in range(10_000):
        if rng.random() < 0.6:
            queue.put(i)
            model.put(i)
        else:
            assert queue.take() == model.take()
    while True:
        got, want = queue.take(), model.take()
        assert got == want
        if got is None:
            break
    stats = queue.stats()
    assert (stats.enqueued, stats.dequeued, stats.overwritten) == (
        model.enqueued, model.dequeued, model.overwritten)


@pytest.mark.parametrize("capacity", [1, 3, 10])
def test_blocking_linked_matches_model(capacity):
    rng = random.Random(11)
    queue = BlockingLinkedQueue(capacity)
    model = FifoModel(capacity, overwrite=False)
    for i in range(10_000):
        if len(model.items) < capacity and rng.random() < 0.6:
            queue.put(i)
            model.put(i)
        else:
            assert queue.take() == model.take()
    stats = queue.stats()
    assert (stats.enqueued, stats.dequeued, stats.overwritten) == (
        model.enqueued, model.dequeued, 0)


def test_ring_overwrites_oldest():
    queue = SyncRingQueue(3)
    for i in (1, 2, 3, 4):
        queue.put(i)
    assert [queue.take() for _ in range(3)] == [2, 3, 4]
    assert queue.take() is None
    assert queue.stats().overwritten == 1


def test_ring_without_overflow():
    queue = SyncRingQueue(3)
    queue.put(1)
    queue.put(2)
    assert [queue.take(), queue.take()] == [1, 2]
    assert queue.stats().overwritten == 0


def test_ring_keeps_last_capacity_elements():
    queue = SyncRingQueue(5)
    for i in range(17):
        queue.put(i)
    drained = []
    while (item := queue.take()) is not None:
        drained.append(item)
    assert drained == list(range(12, 17))


def test_blocking_fifo_order():
    queue = BlockingLinkedQueue(2)
    queue.put("a")
    queue.put("b")
    assert queue.take() == "a"


def test_empty_take_returns_none():
    for kind in QueueKind:
        assert make_queue(kind, 4).take() is None


def test_take_with_timeout_waits_for_data():
    queue = BlockingLinkedQueue(4)
    threading.Timer(0.05, lambda: queue.put("x")).start()
    assert queue.take(timeout=2.0) == "x"


def test_fresh_queue_stats_zero():
    for kind in QueueKind:
        stats = make_queue(kind, 3).stats()
        assert (stats.enqueued, stats.dequeued, stats.overwritten) == (0, 0, 0)
        assert stats.capacity == 3


def test_stats_invariant_random_ops():
    # enqueued = dequeued + in_queue + overwritten at every point
    rng = random.Random(3)
    for kind in QueueKind:
        queue = make_queue(kind, 4)
        live = 0
        for i in range(2000):
            if rng.random() < 0.7:
                if kind is QueueKind.BLOCKING_LINKED and live >= 4:
                    continue
                queue.put(i)
                live = min(live + 1, 4)
            else:
                if queue.take() is not None:
                    live -= 1
            stats = queue.stats()
            assert stats.enqueued == stats.dequeued + live + stats.overwritten


def test_blocked_producer_resumes_after_take():
    queue = BlockingLinkedQueue(2)
    queue.put(1)
    queue.put(2)
    done = threading.Event()

    def producer():
        queue.put(3)  # blocks until the consumer takes
        done.set()

    thread = threading.Thread(target=producer)
    thread.start()
    time.sleep(0.05)
    assert not done.is_set()
    assert queue.take() == 1
    assert done.wait(timeout=2.0)
    thread.join()
    assert [queue.take(), queue.take()] == [2, 3]


def test_ring_never_exceeds_capacity_and_reuses_slots():
    queue = SyncRingQueue(4)
    slots = queue._slots
    for i in range(100):
        queue.put(i)
        assert len(queue) <= 4
        assert queue._slots is slots  # fixed array, no reallocation


def test_capacity_validation():
    with pytest.raises(ValueError):
        SyncRingQueue(0)
    with pytest.raises(ValueError):
        BlockingLinkedQueue(-1)
