"""Unit tests for the tabular Q-learning building blocks."""

import math
import random

import numpy as np
import pytest
import scipy.stats

from autodrive.env import StepEvents
from autodrive.qlearn import (
    ACTION_SETS,
    EVAL_EPSILON,
    QConfig,
    QTable,
    decay,
    discretize,
    evaluate,
    load_qtable,
    save_qtable,
    select_action,
    step_reward,
    train,
    update_q,
)

from conftest import make_corridor


def test_discretize_frozen_values():
    assert discretize((150.0,) * 5, 300.0, 11) == (5,) * 5
    assert discretize((0.0,) * 5, 300.0, 11) == (0,) * 5
    # The cap distance lands past the last edge and clamps into the top bucket.
    assert discretize((300.0,) * 5, 300.0, 11) == (10,) * 5
    assert discretize((299.9,) * 5, 300.0, 11) == (10,) * 5
    assert discretize((27.2, 0.0, 300.0, 81.8, 82.0), 300.0, 11) == (0, 0, 10, 2, 3)


def test_discretize_single_bucket():
    assert discretize((0.0, 100.0, 300.0, 5.0, 299.0), 300.0, 1) == (0,) * 5


def test_discretize_rejects_bad_distances():
    with pytest.raises(ValueError):
        discretize((-1.0, 0.0, 0.0, 0.0, 0.0), 300.0, 11)
    with pytest.raises(ValueError):
        discretize((math.nan, 0.0, 0.0, 0.0, 0.0), 300.0, 11)
    with pytest.raises(ValueError):
        discretize((math.inf, 0.0, 0.0, 0.0, 0.0), 300.0, 11)


def test_select_action_greedy_prefers_lowest_index_on_ties():
    q = QTable.zeros(3, 6)
    s = (0, 0, 0, 0, 0)
    rng = random.Random(0)
    state_before = rng.getstate()
    assert select_action(q, s, 0.0, rng) == 0
    # Greedy selection must not consume randomness.
    assert rng.getstate() == state_before

    q.values[s + (4,)] = 2.0
    q.values[s + (1,)] = 2.0
    assert select_action(q, s, 0.0, rng) == 1
    q.values[s + (3,)] = 7.5
    assert select_action(q, s, 0.0, rng) == 3


def test_select_action_explores_uniformly_at_epsilon_one():
    q = QTable.zeros(2, 6)
    q.values[(0, 0, 0, 0, 0, 2)] = 100.0  # exploration must ignore the table
    rng = random.Random(123)
    n = 6000
    counts = [0] * 6
    for _ in range(n):
        counts[select_action(q, (0, 0, 0, 0, 0), 1.0, rng)] += 1
    expected = n / 6
    chi2 = sum((c - expected) ** 2 / expected for c in counts)
    assert chi2 < scipy.stats.chi2.ppf(0.99, df=5)


def test_update_q_frozen_nonterminal():
    q = QTable.zeros(2, 3)
    s = (0, 0, 0, 0, 0)
    s2 = (1, 1, 1, 1, 1)
    q.values[s2 + (1,)] = 100.0
    update_q(q, s, 0, -1000.0, s2, alpha=0.8, gamma=0.99, terminal=False)
    # 0.8 * (-1000 + 0.99 * 100 - 0)
    assert q.values[s + (0,)] == pytest.approx(-720.8, abs=1e-12)


def test_update_q_terminal_ignores_next_state():
    q = QTable.zeros(2, 3)
    s = (0, 0, 0, 0, 0)
    s2 = (1, 1, 1, 1, 1)
    q.values[s2 + (2,)] = 1e6
    update_q(q, s, 1, -800.0, s2, alpha=0.5, gamma=0.99, terminal=True)
    assert q.values[s + (1,)] == pytest.approx(-400.0, abs=1e-12)


def test_update_q_alpha_one_overwrites():
    q = QTable.zeros(2, 3)
    s = (0, 0, 0, 0, 0)
    s2 = (1, 0, 0, 0, 0)
    q.values[s + (0,)] = 55.0
    q.values[s2 + (0,)] = 4.0
    update_q(q, s, 0, 10.0, s2, alpha=1.0, gamma=0.5, terminal=False)
    assert q.values[s + (0,)] == pytest.approx(12.0)


def test_update_q_rejects_nonfinite_reward():
    q = QTable.zeros(2, 3)
    s = (0, 0, 0, 0, 0)
    with pytest.raises(ValueError):
        update_q(q, s, 0, math.nan, s, 0.5, 0.99, False)


def test_step_reward_composition():
    assert step_reward(StepEvents(), 500.0) == 0.0
    assert step_reward(StepEvents(crossed_checkpoint=True), 0.0) == 10.0
    assert step_reward(StepEvents(crossed_checkpoint=True, crossed_finish=True), 0.0) == 60.0
    assert step_reward(StepEvents(crashed=True), 840.0) == pytest.approx(-916.0)
    assert step_reward(
        StepEvents(crossed_checkpoint=True, crashed=True), 840.0
    ) == pytest.approx(-906.0)
    # Truncation alone earns nothing.
    assert step_reward(StepEvents(truncated=True), 9999.0) == 0.0


def test_decay_schedule():
    assert decay(0.8, 0.9995, 0.001) == pytest.approx(0.8 * 0.9995)
    assert decay(0.0005, 0.9, 0.001) == 0.001
    assert decay(0.001, 0.9, 0.001) == 0.001


def test_qconfig_validation():
    with pytest.raises(ValueError):
        QConfig(action_set="four")
    with pytest.raises(ValueError):
        QConfig(buckets=0)
    with pytest.raises(ValueError):
        QConfig(epsilon0=1.5)
    assert QConfig(action_set="three").actions == ACTION_SETS["three"]
    assert len(QConfig().actions) == 6


def test_qtable_validation():
    with pytest.raises(ValueError):
        QTable(np.zeros((3, 3, 3, 3, 3)))
    with pytest.raises(ValueError):
        QTable(np.zeros((3, 3, 3, 3, 4, 6)))
    t = QTable.zeros(11, 6, seed=9)
    assert t.buckets == 11
    assert t.action_count == 6
    assert t.seed == 9


def test_qtable_save_load_round_trip(tmp_path):
    rng = np.random.default_rng(5)
    t = QTable(rng.standard_normal((4,) * 5 + (3,)), seed=17)
    path = tmp_path / "table.bin"
    save_qtable(t, path)
    back = load_qtable(path)
    assert back.seed == 17
    assert back.buckets == 4
    assert back.action_count == 3
    np.testing.assert_array_equal(back.values, t.values)


def test_load_qtable_rejects_corrupt_files(tmp_path):
    t = QTable.zeros(3, 3)
    path = tmp_path / "table.bin"
    save_qtable(t, path)
    raw = path.read_bytes()

    bad_magic = tmp_path / "magic.bin"
    bad_magic.write_bytes(b"XTBL1" + raw[5:])
    with pytest.raises(ValueError):
        load_qtable(bad_magic)

    truncated = tmp_path / "short.bin"
    truncated.write_bytes(raw[:-16])
    with pytest.raises(ValueError):
        load_qtable(truncated)

    no_header = tmp_path / "hdr.bin"
    no_header.write_bytes(b"QTBL1 {\"buckets\": 3}\n" + raw.split(b"\n", 1)[1])
    with pytest.raises(ValueError):
        load_qtable(no_header)


def _tiny_cfg(**kw) -> QConfig:
    base = dict(
        episodes_train=6,
        episodes_eval=3,
        max_steps=60,
        buckets=5,
        seed=3,
    )
    base.update(kw)
    return QConfig(**base)


def test_train_is_deterministic():
    track = make_corridor()
    cfg = _tiny_cfg()
    q1, rec1 = train(track, cfg)
    q2, rec2 = train(track, cfg)
    np.testing.assert_array_equal(q1.values, q2.values)
    assert rec1 == rec2
    assert len(rec1) == cfg.episodes_train


def test_train_records_decay_chain():
    track = make_corridor()
    cfg = _tiny_cfg(epsilon0=0.5, epsilon_decay=0.9, epsilon_min=0.3,
                    lr0=1.0, lr_decay=0.5, lr_min=0.2)
    _q, recs = train(track, cfg)
    eps = [r.epsilon for r in recs]
    lrs = [r.lr for r in recs]
    want_eps = [0.5]
    want_lr = [1.0]
    for _ in range(cfg.episodes_train - 1):
        want_eps.append(decay(want_eps[-1], 0.9, 0.3))
        want_lr.append(decay(want_lr[-1], 0.5, 0.2))
    assert eps == pytest.approx(want_eps)
    assert lrs == pytest.approx(want_lr)
    # lr floor reached: 1.0, 0.5, 0.25, then pinned.
    assert lrs[3:] == [0.2] * (cfg.episodes_train - 3)
    assert all(r.terminal in ("crashed", "truncated") for r in recs)


def test_evaluate_uses_fixed_epsilon_and_no_learning():
    track = make_corridor()
    cfg = _tiny_cfg()
    q, _ = train(track, cfg)
    before = q.values.copy()
    recs = evaluate(q, track, cfg)
    np.testing.assert_array_equal(q.values, before)
    assert len(recs) == cfg.episodes_eval
    assert all(r.epsilon == EVAL_EPSILON for r in recs)
    assert all(r.lr == 0.0 for r in recs)
    again = evaluate(q, track, cfg)
    assert recs == again


def test_three_action_table_shape():
    track = make_corridor()
    cfg = _tiny_cfg(action_set="three")
    q, recs = train(track, cfg)
    assert q.values.shape == (5,) * 5 + (3,)
    assert recs[0].steps > 0
