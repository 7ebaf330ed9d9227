import pytest

from delinf._iteration.dataclasses import IterationState, Phase
from delinf.stop_conditions import (
    IntersectionStopCondition,
    IterationsExhausted,
    Stabilized,
    UnionStopCondition,
)


class TestStopCondition:
    def test_eq(self):
        stop_condition = IterationsExhausted(3)
        assert stop_condition == IterationsExhausted(3)
        assert stop_condition != IterationsExhausted(4)
        assert stop_condition != Stabilized()
        assert stop_condition != 3


class TestIterationsExhausted:
    def test_iterations_exhausted(self):
        stop_condition = IterationsExhausted(3)
        assert stop_condition.is_met(None) is False

        state = IterationState(iteration=1, previous=0, result=1, phase=Phase.CHANGED)
        assert stop_condition.is_met(state) is False

        state = IterationState(iteration=2, previous=1, result=2, phase=Phase.CHANGED)
        assert stop_condition.is_met(state) is False

        state = IterationState(iteration=3, previous=2, result=3, phase=Phase.CHANGED)
        assert stop_condition.is_met(state) is True

    def test_invalid_max_iterations(self):
        with pytest.raises(ValueError):
            IterationsExhausted(0)

        with pytest.raises(ValueError):
            IterationsExhausted(-1)


class TestStabilized:
    def test_stabilized(self):
        stop_condition = Stabilized()
        assert stop_condition.is_met(None) is False

        state = IterationState(iteration=1, previous=0, result=1, phase=Phase.CHANGED)
        assert stop_condition.is_met(state) is False

        state = IterationState(iteration=2, previous=1, result=1, phase=Phase.STABILIZED)
        assert stop_condition.is_met(state) is True

    def test_no_result_is_not_stabilized(self):
        state = IterationState(iteration=1, previous=..., phase=Phase.RUNNING)
        assert Stabilized().is_met(state) is False

    def test_failed_iteration_is_not_stabilized(self):
        state = IterationState(iteration=1, previous=1, result=1, phase=Phase.FAILED)
        state.exception = RuntimeError()
        assert Stabilized().is_met(state) is False


class TestIntersectionStopCondition:
    def test_all_conditions_met(self):
        state = IterationState(iteration=3, previous=1, result=2, phase=Phase.CHANGED)
        stop_condition = IntersectionStopCondition(IterationsExhausted(3), Stabilized())
        assert stop_condition.is_met(state) is False  # Stabilized not met
        state.result = 1
        assert stop_condition.is_met(state) is True

    def test_creation_via_and(self):
        stop_condition = IterationsExhausted(3) & Stabilized()
        assert isinstance(stop_condition, IntersectionStopCondition)

        state = IterationState(iteration=1, previous=1, result=1)
        assert stop_condition.is_met(state) is False


class TestUnionStopCondition:
    def test_any_condition_met(self):
        stop_condition = UnionStopCondition(IterationsExhausted(3), Stabilized())
        state = IterationState(iteration=3, previous=1, result=2)
        assert stop_condition.is_met(state) is True  # IterationsExhausted met
        state = IterationState(iteration=1, previous=2, result=2)
        assert stop_condition.is_met(state) is True  # Stabilized met

    def test_no_conditions_met(self):
        stop_condition = UnionStopCondition(IterationsExhausted(3), Stabilized())
        state = IterationState(iteration=1, previous=1, result=2)
        assert stop_condition.is_met(state) is False

    def test_creation_via_or(self):
        stop_condition = IterationsExhausted(3) | Stabilized()
        assert isinstance(stop_condition, UnionStopCondition)
        assert stop_condition.is_met(IterationState(iteration=3, previous=0, result=1))


class TestInvertedStopCondition:
    def test_inverted_stop_condition(self):
        stop_condition = ~Stabilized()
        assert stop_condition.is_met(None) is False

        state = IterationState(iteration=1, previous=0, result=1)
        assert stop_condition.is_met(state) is True

        state = IterationState(iteration=1, previous=1, result=1)
        assert stop_condition.is_met(state) is False

    def test_double_inversion(self):
        original_stop_condition = IterationsExhausted(2)
        inverted_stop_condition = ~original_stop_condition
        assert ~inverted_stop_condition is original_stop_condition
        assert ~original_stop_condition == inverted_stop_condition
