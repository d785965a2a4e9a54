"""Synchronization analysis for multi-agent networks over switching digraphs.

Node and graph ids are 1-based, matching the JSON formats used by the CLI.
"""

import json

import numpy as np

from . import _core
from ._core import (
    DivergenceError,
    InputError,
    SyncnetError,
    expm,
    exp_growth_bound,
    observability_rank,
    preset_names,
    rank,
    render_svg,
)

__all__ = [
    "DivergenceError",
    "InputError",
    "SyncnetError",
    "Trajectory",
    "analyze_graph",
    "check_condition",
    "expm",
    "exp_growth_bound",
    "has_spanning_tree",
    "laplacian",
    "observability_rank",
    "pairwise_deviation",
    "preset",
    "preset_names",
    "rank",
    "render_svg",
    "simulate",
]


def _scenario_text(scenario):
    return scenario if isinstance(scenario, str) else json.dumps(scenario)


def laplacian(graph):
    return _core.laplacian_json(json.dumps(graph))


def has_spanning_tree(graph):
    return _core.has_spanning_tree_json(json.dumps(graph))


def analyze_graph(graph):
    return json.loads(_core.analyze_graph_json(json.dumps(graph)))


def preset(name):
    return json.loads(_core.preset_json(name))


def check_condition(scenario, gamma=None):
    return json.loads(_core.check_condition_json(_scenario_text(scenario), gamma))


class Trajectory:
    def __init__(self, times, states, switch_events, n, diverged):
        self.times = np.asarray(times)
        self.states = np.asarray(states)
        self.switch_events = list(switch_events)
        self.n = n
        self.diverged = diverged

    def pairwise_deviation(self):
        return np.array([pairwise_deviation(x, self.n) for x in self.states])


def pairwise_deviation(x, n):
    agents = np.asarray(x).reshape(-1, n)
    diff = agents[:, None, :] - agents[None, :, :]
    return float(np.sqrt((diff**2).sum(axis=-1)).max())


def simulate(scenario, seed=None, phi=None, dt=-1.0, horizon=-1.0):
    """Runs a preset name or a scenario dict. A diverged run returns its partial trajectory."""
    return Trajectory(*_core.simulate(_scenario_text(scenario), seed, phi, dt, horizon))
