"""Tests for the automaton model: streams, parameters, head layout and construction."""

import pytest

from src.automata.model import (
    END,
    AutomatonParams,
    Direction,
    ExplicitStates,
    Stream,
    StreamSide,
    head_layout,
    make_automaton,
)
from src.utils.errors import (
    InvalidParameterError,
    InvalidStartStateError,
    StateBudgetExceededError,
)


def advance_all(k):
    def delta(state, symbols):
        return state, (True,) * k

    return delta


class TestStream:
    """Stream construction and positions."""

    def test_positions_are_one_based(self):
        s = Stream.of(["a1", "b2"])
        assert len(s) == 2
        assert s.item(1) == "a1"
        assert s.item(2) == "b2"

    def test_position_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            Stream.of(["a1"]).item(2)

    def test_end_token_is_not_a_data_item(self):
        with pytest.raises(InvalidParameterError) as exc_info:
            Stream.of(["a1", "end"])
        assert "end" in str(exc_info.value)

    def test_empty_stream(self):
        assert len(Stream()) == 0
        assert str(Stream.of(["a1", "b1"])) == "a1 b1"

    def test_end_marker_is_singleton(self):
        assert repr(END) == "end"
        assert type(END)() is END


class TestParams:
    """AutomatonParams invariants."""

    @pytest.mark.parametrize("kf,kb,k", [(0, 0, 0), (1, 0, 2), (1, 1, 4), (3, 2, 10)])
    def test_head_count(self, kf, kb, k):
        assert AutomatonParams(domain_size=4, m=1, kf=kf, kb=kb).k == k

    @pytest.mark.parametrize("field,value", [("m", 0), ("kf", -1), ("kb", -1)])
    def test_invalid_values(self, field, value):
        kwargs = {"domain_size": 4, "m": 3, "kf": 1, "kb": 0}
        kwargs[field] = value
        with pytest.raises(InvalidParameterError):
            AutomatonParams(**kwargs)


class TestHeadLayout:
    """Canonical head order."""

    def test_canonical_order(self):
        labels = [h.label for h in head_layout(2, 1)]
        assert labels == ["S-f1", "S-f2", "S-b1", "T-f1", "T-f2", "T-b1"]

    def test_indices_are_a_bijection(self):
        heads = head_layout(2, 3)
        assert [h.index for h in heads] == list(range(10))

    def test_stream_and_direction(self):
        heads = head_layout(1, 1)
        assert heads[1].stream is StreamSide.S and heads[1].direction is Direction.BACKWARD
        assert heads[2].stream is StreamSide.T and heads[2].is_forward


class TestMakeAutomaton:
    """Validated construction."""

    def test_declared_sizes(self):
        params = AutomatonParams(domain_size=4, m=3, kf=1, kb=0)
        a = make_automaton(params, ["p", "q", "r"], "p", {"p"}, advance_all(2))
        assert a.params.k == 2
        assert a.states.size == 3
        assert a.is_accepting("p")
        assert not a.is_accepting("q")

    def test_budget_exceeded(self):
        params = AutomatonParams(domain_size=4, m=3, kf=1, kb=0)
        with pytest.raises(StateBudgetExceededError) as exc_info:
            make_automaton(params, ["p", "q", "r", "s", "t"], "p", {"p"}, advance_all(2))
        assert exc_info.value.details["declared"] == 5

    def test_invalid_start(self):
        params = AutomatonParams(domain_size=4, m=3, kf=1, kb=0)
        with pytest.raises(InvalidStartStateError):
            make_automaton(params, ["p", "q"], "z", {"p"}, advance_all(2))

    def test_zero_heads(self):
        params = AutomatonParams(domain_size=4, m=1, kf=0, kb=0)
        a = make_automaton(params, ["p"], "p", lambda q: True, advance_all(0))
        assert a.params.k == 0
        assert a.heads == ()

    def test_explicit_states_preserve_order(self):
        states = ExplicitStates(["q", "p", "q"])
        assert list(states) == ["q", "p"]
        assert states.size == 2
        assert "p" in states
        assert ["unhashable"] not in states
