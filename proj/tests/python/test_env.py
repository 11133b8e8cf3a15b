# Copyright 2026 The Coins Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math
import random

import pytest

import coins

COLLECT_RIGHT = [(2, 2), (4, 4)]


def collect(scheme, matching, collector):
    game = coins.Game({"width": 7, "depth": 7, "spawn_prob": 0.0, "scheme": scheme}, seed=1,
                      colors=("red", "blue"))
    game.set_player_positions(COLLECT_RIGHT)
    row, col = COLLECT_RIGHT[collector]
    own = ["red", "blue"][collector]
    other = ["blue", "red"][collector]
    game.set_coin(row, col + 1, own if matching else other)
    joint = ["no_op", "no_op"]
    joint[collector] = "move_right"
    return game.step(joint)


@pytest.mark.parametrize(
    "scheme,matching,expected",
    [("canonical", True, (1, 0)), ("canonical", False, (1, -2)),
     ("offset", True, (3, 2)), ("offset", False, (3, 0))],
)
@pytest.mark.parametrize("collector", [0, 1])
def test_reward_tables(scheme, matching, expected, collector):
    record = collect(scheme, matching, collector)
    assert len(record["events"]) == 1
    assert record["rewards"][collector] == expected[0]
    assert record["rewards"][1 - collector] == expected[1]
    table = coins.reward_scheme(scheme)
    row = table["matching" if matching else "mismatching"]
    assert (row["self"], row["other"]) == expected


def test_game_is_deterministic_per_seed():
    rng = random.Random(0)
    actions = [[rng.choice(coins.ACTIONS) for _ in range(2)] for _ in range(200)]

    def play(seed):
        game = coins.Game({"spawn_prob": 0.05}, seed=seed)
        return [game.step(a) for a in actions], game.snapshot()

    assert play(3) == play(3)
    assert play(3)[1]["grid"] != play(4)[1]["grid"] or play(3)[0] != play(4)[0]


def test_episode_terminates_at_horizon():
    game = coins.Game({"horizon": 5}, seed=2)
    for _ in range(5):
        assert not game.terminal
        game.step([0, 0])
    assert game.terminal and game.step_index == 5


def test_task_config_presets_and_validation():
    assert coins.task_config()["width"] == 11
    assert coins.task_config(preset="tutorial")["horizon"] == 1500
    with pytest.raises(coins.ConfigError):
        coins.task_config({"spawn_prob": 2.0})
    with pytest.raises(coins.ConfigError):
        coins.task_config(preset="nope")


def test_svo_utility_properties():
    rng = random.Random(6)
    for _ in range(1000):
        a, b = rng.uniform(-5, 5), rng.uniform(-5, 5)
        assert coins.svo_utility(a, [b], 0) == pytest.approx(a, abs=1e-12)
        assert coins.svo_utility(a, [b], 90) == pytest.approx(b, abs=1e-12)
        assert coins.svo_utility(a, [b], 45) == pytest.approx(coins.svo_utility(b, [a], 45),
                                                              abs=1e-12)
    assert coins.svo_utility(1, [-2], 45) == pytest.approx(-math.sqrt(2) / 2, abs=1e-12)


def test_tremble_rates():
    n = 50000
    assert set(coins.tremble("move_up", 0.0, n, seed=1)) == {"move_up"}
    same = coins.tremble("move_up", 0.5, n, seed=2).count("move_up") / n
    assert abs(same - 0.6) < 4 * math.sqrt(0.24 / n)
    draws = coins.tremble("no_op", 1.0, n, seed=3)
    for action in coins.ACTIONS:
        assert abs(draws.count(action) / n - 0.2) < 4 * math.sqrt(0.16 / n)
    with pytest.raises(coins.ConfigError):
        coins.tremble("no_op", 1.5)
