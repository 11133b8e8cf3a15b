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

"""Coins: a mixed-motive gridworld, prosocial agents and human-study tooling.

The heavy lifting lives in the compiled ``coins._coins`` extension; this
package re-exports it and adds a few policy-spec helpers.
"""

from coins._coins import (  # noqa: F401
    ACTIONS,
    PROTOCOL_VERSION,
    ConfigError,
    Game,
    NumericalError,
    ProtocolError,
    ScriptedParticipant,
    SeparationError,
    Session,
    StudyServer,
    ValidationError,
    analyze,
    bonus_cents,
    compare_models,
    epsilon_sweep,
    evaluate_pair,
    export_sessions,
    fit_fractional_logit,
    fit_linear,
    fit_logistic,
    format_dollars,
    icc,
    likert_to_unit,
    one_way_anova,
    reward_scheme,
    simulate_study,
    spearman_brown,
    spearman_brown_inverse,
    study_config,
    svo_utility,
    task_config,
    train,
    tremble,
    two_way_anova,
)

__version__ = "0.1.0"


def scripted(theta=0.0, epsilon=0.0):
    """Policy spec for the scripted agent nearest to ``theta`` degrees."""
    kind = "scripted_prosocial" if theta >= 22.5 else "scripted_selfish"
    return {"kind": kind, "theta": float(theta), "epsilon": float(epsilon)}


def learned(checkpoint, agent_index=0, epsilon=0.0):
    """Policy spec for one network of a training checkpoint."""
    return {
        "kind": "learned",
        "checkpoint": str(checkpoint),
        "agent": int(agent_index),
        "epsilon": float(epsilon),
    }
