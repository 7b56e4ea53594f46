"""The learner must reach the exact dynamic-programming solution on a chain MDP.

With alpha fixed at 1 and deterministic transitions, every backup overwrites
the entry with the Bellman target, so after enough exploratory episodes the
table equals value iteration's fixpoint to float precision.
"""

import pytest

from autodrive.qlearn import QConfig, train_task

from chain_mdp import GAMMA, N_ACTIONS, N_STATES, ChainTask, solve_chain


def test_chain_mdp_converges_to_value_iteration():
    cfg = QConfig(
        episodes_train=2000,
        episodes_eval=1,
        max_steps=100,
        epsilon0=1.0,
        epsilon_min=1.0,
        epsilon_decay=1.0,
        lr0=1.0,
        lr_min=1.0,
        lr_decay=1.0,
        gamma=GAMMA,
        buckets=N_STATES,
        action_set="three",
        seed=0,
    )
    q, records = train_task(ChainTask(), cfg)
    exact = solve_chain()
    for s in range(N_STATES - 1):
        for a in range(N_ACTIONS):
            got = q.values[(s, 0, 0, 0, 0, a)]
            assert got == pytest.approx(exact[s][a], abs=1e-9), (s, a)
        greedy = max(range(N_ACTIONS), key=lambda a: q.values[(s, 0, 0, 0, 0, a)])
        assert greedy == max(range(N_ACTIONS), key=lambda a: exact[s][a])
    # The absorbing state is never updated from.
    assert all(q.values[(4, 0, 0, 0, 0, a)] == 0.0 for a in range(N_ACTIONS))
    assert len(records) == 2000
    assert any(r.terminal == "crashed" for r in records)
