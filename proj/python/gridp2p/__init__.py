"""Peer-to-peer energy trading simulator.

Scenarios are passed as JSON documents (see ``case_study``); results come back as
plain dictionaries.
"""

import json

from ._core import (
    ConfigurationError,
    DomainError,
    IoError,
    PreconditionError,
    ValidationError,
    case_study,
    clear,
    compare,
    cps_cost,
    max_willingness_price,
    mid_market_prices,
    min_b,
    optimal_grid_purchase,
    peak_price,
    simulate,
    utility_buy,
    utility_sell,
    validate_scenario,
)


def load_scenario(path):
    """Reads and validates a scenario file, returning the canonical JSON text."""
    with open(path, encoding="utf-8") as fh:
        return validate_scenario(fh.read())


def scenario_dict(scenario_json):
    return json.loads(scenario_json)


__all__ = [
    "ConfigurationError",
    "DomainError",
    "IoError",
    "PreconditionError",
    "ValidationError",
    "case_study",
    "clear",
    "compare",
    "cps_cost",
    "load_scenario",
    "max_willingness_price",
    "mid_market_prices",
    "min_b",
    "optimal_grid_purchase",
    "peak_price",
    "scenario_dict",
    "simulate",
    "utility_buy",
    "utility_sell",
    "validate_scenario",
]
