import time

import pytest

from minimon.pipeline import Pipeline, PipelineConfig, WriterKind
from minimon.probes import ProbeKind
from minimon.queues import QueueKind
from minimon.records import DurationRecord, deserialize


def null_pipeline(tmp_path, queue=QueueKind.BLOCKING_LINKED, capacity=16):
    return Pipeline(PipelineConfig(
        probe=ProbeKind.DIRECT_DURATION, queue=queue, queue_capacity=capacity,
        writer=WriterKind.NULL, output_path=str(tmp_path / "m.log")))


def file_pipeline(tmp_path, queue=QueueKind.BLOCKING_LINKED, capacity=16):
    return Pipeline(PipelineConfig(
        probe=ProbeKind.DIRECT_DURATION, queue=queue, queue_capacity=capacity,
        writer=WriterKind.FILE, output_path=str(tmp_path / "m.log")))


def test_null_writer_counts_enqueued(tmp_path):
    pipeline = null_pipeline(tmp_path).start()
    for i in range(100):
        pipeline.new_monitoring_record(DurationRecord("a()", i))
    report = pipeline.shutdown()
    assert report.enqueued == 100
    assert report.written == 100
    assert report.dropped == 0


def test_file_writer_outputs_parseable_lines(tmp_path):
    pipeline = file_pipeline(tmp_path).start()
    records = [DurationRecord("a()", i) for i in range(3)]
    for record in records:
        pipeline.new_monitoring_record(record)
    pipeline.shutdown()
    lines = (tmp_path / "m.log").read_text().splitlines()
    assert [deserialize(line) for line in lines] == records


def test_start_twice_is_error(tmp_path):
    pipeline = null_pipeline(tmp_path).start()
    with pytest.raises(RuntimeError):
        pipeline.start()
    pipeline.shutdown()


def test_emit_before_start_is_error(tmp_path):
    pipeline = null_pipeline(tmp_path)
    with pytest.raises(RuntimeError):
        pipeline.new_monitoring_record(DurationRecord("a()", 1))


def test_record_after_shutdown_is_counted_drop(tmp_path):
    pipeline = null_pipeline(tmp_path).start()
    pipeline.new_monitoring_record(DurationRecord("a()", 1))
    pipeline.shutdown()
    pipeline.new_monitoring_record(DurationRecord("a()", 2))
    # counters are frozen in the first report; the drop is still counted
    assert pipeline._dropped == 1


def test_shutdown_idempotent(tmp_path):
    pipeline = null_pipeline(tmp_path).start()
    pipeline.new_monitoring_record(DurationRecord("a()", 1))
    first = pipeline.shutdown()
    second = pipeline.shutdown()
    assert first is second


def test_shutdown_empty_pipeline(tmp_path):
    pipeline = file_pipeline(tmp_path).start()
    report = pipeline.shutdown()
    assert (report.enqueued, report.written, report.overwritten, report.dropped) == (
        0, 0, 0, 0)
    assert (tmp_path / "m.log").read_text() == ""


def test_shutdown_bounded_time_on_empty_queue(tmp_path):
    pipeline = null_pipeline(tmp_path).start()
    start = time.monotonic()
    pipeline.shutdown()
    assert time.monotonic() - start < 2.0


def test_ring_overwrite_with_paused_writer(tmp_path):
    capacity = 8
    pipeline = null_pipeline(tmp_path, queue=QueueKind.SYNC_RING,
                             capacity=capacity).start()
    pipeline.pause_writer()
    for i in range(2 * capacity):
        pipeline.new_monitoring_record(DurationRecord("a()", i))
    pipeline.resume_writer()
    report = pipeline.shutdown()
    assert report.overwritten == capacity
    assert report.written == report.enqueued - report.overwritten


@pytest.mark.parametrize("capacity", [1, 10, 1000])
def test_writer_completeness_fifo(tmp_path, capacity):
    pipeline = file_pipeline(tmp_path, capacity=capacity).start()
    records = [DurationRecord("a()", i) for i in range(500)]
    for record in records:
        pipeline.new_monitoring_record(record)
    report = pipeline.shutdown()
    lines = (tmp_path / "m.log").read_text().splitlines()
    assert report.written == report.enqueued == 500
    assert [deserialize(line) for line in lines] == records


def test_unwritable_output_path_fails_at_start(tmp_path):
    pipeline = Pipeline(PipelineConfig(
        writer=WriterKind.FILE, output_path=str(tmp_path / "no" / "dir" / "x.log")))
    with pytest.raises(OSError):
        pipeline.start()


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(queue_capacity=0)
    with pytest.raises(ValueError):
        PipelineConfig(aggregation_window=0)
