# Copyright 2026 The coopee Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Energy-efficiency optimization for network-coded harvesting relay networks.

Scenarios and policies are plain dicts with the same layout as the JSON
files read by the ``coopee`` command-line tool.
"""

from __future__ import annotations

import json
import os
from typing import Any, Dict, Iterable, Union

from . import _core
from ._core import InvalidInput, regularized_lower_gamma

__all__ = [
    "InvalidInput",
    "load_scenario",
    "optimize",
    "baseline",
    "outage",
    "validate",
    "simulate",
    "sweep",
    "compare",
    "regularized_lower_gamma",
]

Scenario = Union[Dict[str, Any], str, os.PathLike]


def _text(scenario: Scenario) -> str:
    if isinstance(scenario, dict):
        return json.dumps(scenario)
    return _core.load_scenario(os.fspath(scenario))


def load_scenario(path: Union[str, os.PathLike]) -> Dict[str, Any]:
    """Reads and validates a scenario file."""
    return json.loads(_core.load_scenario(os.fspath(path)))


def optimize(scenario: Scenario, *, max_outer: int = 50, calibrate: bool = True) -> Dict[str, Any]:
    """Runs the Dinkelbach optimizer. ``status`` is "converged" on success."""
    return json.loads(_core.optimize(_text(scenario), max_outer, calibrate))


def baseline(scenario: Scenario, name: str, *, max_outer: int = 50) -> Dict[str, Any]:
    """One of depleted_energy, no_transfer, uniform_power, nonc_df."""
    return json.loads(_core.baseline(_text(scenario), name, max_outer))


def outage(scenario: Scenario, policy: Dict[str, Any], *, exact: bool = True) -> Dict[str, Any]:
    return json.loads(_core.outage(_text(scenario), json.dumps(policy), exact))


def validate(scenario: Scenario, policy: Dict[str, Any]) -> Dict[str, Any]:
    return json.loads(_core.validate(_text(scenario), json.dumps(policy)))


def simulate(
    scenario: Scenario, policy: Dict[str, Any], *, trials: int = 100_000, seed: int = 1, threads: int = 0
) -> Dict[str, Any]:
    """Monte Carlo outage estimate; identical for any thread count."""
    return json.loads(_core.simulate(_text(scenario), json.dumps(policy), trials, seed, threads))


def sweep(scenario: Scenario, spec: str, *, workers: int = 0, exact: bool = True) -> str:
    """CSV table for a sweep such as ``"pr_out_0=1e-4,1e-5"``."""
    return _core.sweep(_text(scenario), spec, workers, exact)


def compare(scenario: Scenario, thresholds: Iterable[float], *, workers: int = 0) -> str:
    return _core.compare(_text(scenario), list(thresholds), workers)
