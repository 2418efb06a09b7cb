import math
import numpy as np
import pytest
import tabmg.utils as U
from test.utils import *


HORIZONS = [1, 2, 4, 8]
STEPS = [1, 2, 3, 5, 10, 37, 100, 500, 2000]


@pytest.mark.parametrize('schedule', [
    U.AlphaSchedule(3),
    U.EagerSchedule(),
    U.CustomSchedule([1.0, 0.5, 0.25, 0.9, 0.1]),
])
def test_weights_sum_to_one(schedule):
    for t in range(1, 6):
        assert abs(schedule.weights(t).weights.sum() - 1.0) <= 1e-12


def test_alpha_values():
    schedule = U.AlphaSchedule(2)
    assert schedule.value(1) == 1.0
    assert schedule.value(4) == pytest.approx(0.5)
    with pytest_print_raises(ValueError):
        schedule.value(0)
    with pytest_print_raises(ValueError):
        U.AlphaSchedule(0)


def test_weight_vector_advance():
    schedule = U.AlphaSchedule(4)
    vector = U.WeightVector.first(schedule)
    for t in range(2, 30):
        vector = vector.advance(schedule)
    assert np.allclose(vector.weights, schedule.weights(29).weights,
                       rtol=0, atol=1e-14)
    assert vector[29] == pytest.approx(schedule.value(29))
    with pytest_print_raises(IndexError):
        vector[30]


def test_eager_weights():
    w = U.EagerSchedule().weights(5)
    assert list(w.weights) == [0, 0, 0, 0, 1]


@pytest.mark.parametrize('H', HORIZONS)
def test_alpha_tail_sum(H):
    schedule = U.AlphaSchedule(H)
    for j in (1, 3):
        total = schedule.tail_sum(j, 10 ** 5)
        assert total == pytest.approx(1 + 1.0 / H, abs=1e-4)
        assert total <= 1 + 1.0 / H + 1e-12
    assert schedule.c_beta() == 1 + 1.0 / H


@pytest.mark.parametrize('H', HORIZONS)
def test_alpha_convolution_bounds(H):
    schedule = U.AlphaSchedule(H)
    for t in STEPS:
        w = schedule.weights(t).weights
        i = np.arange(1, t + 1)
        s = (w / np.sqrt(i)).sum()
        assert 1 / math.sqrt(t) - 1e-12 <= s <= 2 / math.sqrt(t) + 1e-12
        assert w.max() <= 2.0 * H / t + 1e-12
        assert (w ** 2).sum() <= 2.0 * H / t + 1e-12


@pytest.mark.parametrize('schedule', [
    U.AlphaSchedule(1),
    U.AlphaSchedule(6),
    U.EagerSchedule(),
    U.CustomSchedule([1.0] + [1.0 / t for t in range(2, 10 ** 4 + 1)]),
    U.CustomSchedule([1.0] + [0.5] * (10 ** 4 - 1)),
])
def test_weights_match_advance_long(schedule):
    T = 10 ** 4
    vector = U.WeightVector.first(schedule)
    for t in range(2, T + 1):
        vector = vector.advance(schedule)
    direct = schedule.weights(T).weights
    assert np.allclose(direct, vector.weights, rtol=1e-10, atol=1e-300)
    assert direct[-1] == schedule.value(T)
    assert abs(direct.sum() - 1.0) <= 1e-9
    assert U.weight_vector(schedule, T).t == T


@pytest.mark.parametrize('schedule', [U.AlphaSchedule(H) for H in HORIZONS]
                         + [U.EagerSchedule()])
def test_harmonic_convolution(schedule):
    c = schedule.c_beta()
    for T in STEPS[1:]:
        w = schedule.weights(T).weights
        X = (w / np.arange(1, T + 1)).sum()
        assert X <= 2 * c * math.log(T) / T + 1e-12


@pytest.mark.parametrize('H', HORIZONS)
def test_alpha_decaying_sequences(H):
    schedule = U.AlphaSchedule(H)
    for T in STEPS:
        w = schedule.weights(T).weights
        i = np.arange(1, T + 1)
        alpha = (H + 1.0) / (H + i)
        assert (w / i ** 2).sum() <= 4.0 / T + 1e-12
        B = (w * alpha).sum()
        assert B <= (H + 1.0) ** 2 / (H * (H + T)) + 1e-12
        assert (w * alpha ** 2).sum() <= min(B, 4.0 * H / T) + 1e-12


@pytest.mark.parametrize('H', HORIZONS)
def test_ftrl_weight_sums(H):
    schedule = U.AlphaSchedule(H)
    for t in (2, 3, 10, 60):
        w = [schedule.w(i) for i in range(1, t)]
        lhs = (1 / schedule.w(t - 1) - 1 / schedule.w(t)) * sum(w)
        assert lhs == pytest.approx(H / (H + 1.0), rel=1e-10)
        assert schedule.w(t) / schedule.w(t - 1) == pytest.approx(
            (H + t - 1.0) / (t - 1.0), rel=1e-12)


@pytest.mark.slow
@pytest.mark.parametrize('H', HORIZONS)
def test_alpha_convolution_bounds_full(H):
    schedule = U.AlphaSchedule(H)
    vector = U.WeightVector.first(schedule)
    for t in range(1, 10 ** 4 + 1):
        if t > 1:
            vector = vector.advance(schedule)
        w = vector.weights
        s = (w / np.sqrt(np.arange(1, t + 1))).sum()
        assert 1 / math.sqrt(t) - 1e-12 <= s <= 2 / math.sqrt(t) + 1e-12
        assert w.max() <= 2.0 * H / t + 1e-12
        assert (w ** 2).sum() <= 2.0 * H / t + 1e-12


@pytest.mark.parametrize('H', HORIZONS)
def test_ftrl_weights(H):
    schedule = U.AlphaSchedule(H)
    assert schedule.w(0) == schedule.w(1) == 1.0
    for t in (2, 5, 17):
        assert schedule.w(t) == math.comb(H + t - 1, t - 1)
        weights = schedule.weights(t)
        # alpha_t^i / alpha_t^1 = w_i
        for i in (1, 2, t):
            assert weights[i] / weights[1] == pytest.approx(schedule.w(i),
                                                            rel=1e-12)
        assert schedule.weight_ratio(t) == pytest.approx(
            schedule.w(t - 1) / schedule.w(t), rel=1e-12)
        # generic formula of the base class agrees with the closed form
        assert U.Schedule.weight_ratio(schedule, t) == pytest.approx(
            schedule.weight_ratio(t), rel=1e-12)


def test_custom_schedule_errors():
    with pytest_print_raises(ValueError):
        U.CustomSchedule([0.5, 0.5])
    with pytest_print_raises(ValueError):
        U.CustomSchedule([1.0, 1.5])
    schedule = U.CustomSchedule([1.0, 0.5])
    with pytest_print_raises(U.ScheduleError):
        schedule.value(3)
    with pytest_print_raises(ValueError):
        schedule.c_beta()
    with pytest_print_raises(ValueError):
        schedule.w(2)


def test_make_schedule():
    assert isinstance(U.make_schedule('alpha', horizon=2), U.AlphaSchedule)
    assert isinstance(U.make_schedule(U.ScheduleKind.eager), U.EagerSchedule)
    custom = U.make_schedule('custom', rates=[1.0, 0.3])
    assert custom.value(2) == 0.3
    with pytest_print_raises(ValueError):
        U.make_schedule('cosine')
