import numpy as np
import pytest

from dlmsim.rng import RngStream, StreamFactory, next_uniform, stream_id_for


def test_same_seed_and_stream_repeat():
    a = RngStream(7, 0)
    b = RngStream(7, 0)
    assert [next_uniform(a) for _ in range(3)] == [next_uniform(b) for _ in range(3)]


def test_draws_in_half_open_unit_interval():
    x = RngStream(3, "x").uniforms(100_000)
    assert x.min() >= 0.0 and x.max() < 1.0


def test_mean_of_million_draws():
    assert abs(RngStream(11, 0).uniforms(1_000_000).mean() - 0.5) < 0.002


def test_streams_are_uncorrelated():
    a = RngStream(5, 0).uniforms(100_000)
    b = RngStream(5, 1).uniforms(100_000)
    assert abs(np.corrcoef(a, b)[0, 1]) < 0.01


def test_batched_and_single_draws_agree():
    a = RngStream(2, "s")
    b = RngStream(2, "s")
    first = [a.next_uniform() for _ in range(10)]
    got = np.concatenate([first, a.uniforms(3000), [a.next_uniform()]])
    want = b.uniforms(3011)
    assert np.array_equal(got, want)


def test_stream_ids_are_stable_and_distinct():
    assert stream_id_for("mzi/bs1") == stream_id_for("mzi/bs1")
    assert stream_id_for("mzi/bs1") != stream_id_for("mzi/bs2")
    assert 0 <= stream_id_for("anything") < 2**63


def test_adding_a_component_leaves_other_streams_alone():
    f = StreamFactory(1, "net/")
    before = f.stream("bs1").uniforms(5)
    f.stream("new-component").uniforms(100)
    assert np.array_equal(f.stream("bs1").uniforms(5), before)
    assert f.child("a").stream("b").stream_id == stream_id_for("net/a/b")


def test_negative_seed_rejected():
    with pytest.raises(ValueError):
        RngStream(-1, 0)


def test_uniform_and_bit_ranges():
    s = RngStream(0, 0)
    assert all(2.0 <= s.uniform(2.0, 3.0) < 3.0 for _ in range(100))
    assert {s.bit() for _ in range(100)} == {0, 1}
