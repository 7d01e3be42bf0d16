"""Scenario files and canonical report serialization.

A scenario is UTF-8 JSON::

    {"version": "1", "alpha": "1",
     "daos": [{"name": "G", "values": ["100", "90"], "bids": ["100", "90"],
               "mechanism": "collective"}]}

``alpha`` defaults to ``"0"`` and ``bids`` to ``values``.  Every number is a
decimal or ``p/q`` string (plain JSON integers are accepted too).
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import NEG_INF, MechanismError, as_nonnegative, fmt
from .harness import AuctionInstance, DaoSpec, Mechanism

SCENARIO_VERSION = "1"


class ScenarioError(MechanismError):
    """Malformed scenario input."""


@dataclass(frozen=True)
class ScenarioFile:
    version: str
    alpha: Fraction
    daos: tuple[DaoSpec, ...]

    def instance(self, seed: int = 0) -> AuctionInstance:
        return AuctionInstance(self.daos, seed)

    def echo(self) -> dict:
        return {
            "version": self.version,
            "alpha": fmt(self.alpha),
            "daos": [
                {
                    "name": d.name,
                    "values": [fmt(v) for v in d.values],
                    "bids": [fmt(b) for b in d.bids],
                    "mechanism": d.mechanism.value,
                }
                for d in self.daos
            ],
        }


def _num(raw: Any, what: str) -> Fraction:
    if isinstance(raw, bool) or not isinstance(raw, (str, int)):
        raise ScenarioError(f"{what}: expected a decimal string, got {raw!r}")
    try:
        return as_nonnegative(raw if isinstance(raw, int) else str(raw))
    except MechanismError as exc:
        raise ScenarioError(f"{what}: {exc}") from exc


def parse_scenario(data: Any) -> ScenarioFile:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    version = str(data.get("version", SCENARIO_VERSION))
    alpha = _num(data.get("alpha", "0"), "alpha")
    raw_daos = data.get("daos")
    if not isinstance(raw_daos, list) or not raw_daos:
        raise ScenarioError("scenario needs a non-empty 'daos' list")
    daos = []
    for i, raw in enumerate(raw_daos):
        if not isinstance(raw, dict):
            raise ScenarioError(f"dao {i}: expected an object")
        name = str(raw.get("name", f"dao{i}"))
        values = raw.get("values")
        if not isinstance(values, list) or not values:
            raise ScenarioError(f"dao {name}: 'values' must be a non-empty list")
        vals = [_num(v, f"dao {name} value") for v in values]
        bids_raw = raw.get("bids", values)
        if not isinstance(bids_raw, list) or len(bids_raw) != len(vals):
            raise ScenarioError(f"dao {name}: 'bids' must match 'values' in length")
        bids = [_num(b, f"dao {name} bid") for b in bids_raw]
        try:
            mech = Mechanism(raw.get("mechanism", "baseline"))
        except ValueError as exc:
            raise ScenarioError(f"dao {name}: unknown mechanism {raw.get('mechanism')!r}") from exc
        daos.append(DaoSpec(tuple(vals), tuple(bids), mech, alpha, name))
    return ScenarioFile(version, alpha, tuple(daos))


def load_scenario(path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from exc
    if not text.strip():
        raise ScenarioError(f"{path}: empty scenario file")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{path}: invalid JSON: {exc}") from exc
    return parse_scenario(data)


def instance_to_scenario(instance: AuctionInstance) -> dict:
    alpha = instance.daos[0].alpha if instance.daos else Fraction(0)
    return ScenarioFile(SCENARIO_VERSION, alpha, instance.daos).echo()


def jsonable(obj: Any) -> Any:
    """Recursively render Fractions (and -inf) as canonical strings."""
    if isinstance(obj, Fraction) or obj == NEG_INF:
        return fmt(obj)
    if isinstance(obj, Mechanism):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


def approx(obj: Any) -> Any:
    """Decimal convenience copy; never authoritative."""
    if isinstance(obj, Fraction):
        return float(obj)
    if isinstance(obj, dict):
        return {k: approx(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [approx(v) for v in obj]
    return obj


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def rows_to_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(c) if isinstance(c, Fraction) else c for c in row])
    return buf.getvalue()
