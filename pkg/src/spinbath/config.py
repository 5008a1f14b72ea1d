"""Configuration file handling.

The format is JSON with coupling frequencies in Hz and dissipation rates
in 1/s:

    {
      "name": "...",
      "center_gamma_per_s": 0.0,
      "groups": [{"count": 8, "j_center_hz": 6.42, "gamma_per_s": 0.0,
                  "label": "II"}],
      "nonrwa": {"parts": 4, "m": 2, "n": 3, "j23_hz": 8.02,
                 "delta_omega_hz": 24.8}
    }

Serialization is byte-stable for identical systems, and parse(serialize(s))
reproduces s (Hz values are emitted so that the Hz -> rad/s multiplication
recovers the stored value exactly).
"""

from __future__ import annotations

import json

from .model import GroupSpec, NonRwaSpec, SpinSystem, hz, to_hz, validate


class ConfigError(ValueError):
    """Raised with every problem found in a configuration, not just the first."""

    def __init__(self, problems: list[str]):
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


_GROUP_FIELDS = {"count", "j_center_hz", "gamma_per_s", "label"}
_NONRWA_FIELDS = {"parts", "m", "n", "j23_hz", "delta_omega_hz"}
_TOP_FIELDS = {"name", "center_gamma_per_s", "groups", "nonrwa"}


def serialize_config(system: SpinSystem) -> str:
    doc: dict = {
        "name": system.name,
        "center_gamma_per_s": system.center_gamma,
        "groups": [
            {
                "count": g.count,
                "j_center_hz": to_hz(g.j_center),
                "gamma_per_s": g.gamma,
                "label": g.label,
            }
            for g in system.groups
        ],
    }
    if system.nonrwa is not None:
        nr = system.nonrwa
        doc["nonrwa"] = {
            "parts": nr.parts,
            "m": nr.m,
            "n": nr.n,
            "j23_hz": to_hz(nr.j23),
            "delta_omega_hz": to_hz(nr.delta_omega),
        }
    return json.dumps(doc, indent=2) + "\n"


def _number(doc, key, problems, where, default=None, required=True):
    if key not in doc:
        if required:
            problems.append(f"missing field {where}{key}")
        return default
    v = doc[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        problems.append(f"{where}{key} must be a number")
        return default
    return v


def _integer(doc, key, problems, where):
    v = _number(doc, key, problems, where)
    if v is None:
        return None
    if not isinstance(v, int):
        problems.append(f"{where}{key} must be an integer")
        return None
    return v


def parse_config(text: str) -> SpinSystem:
    """Parse and validate a configuration; raises :class:`ConfigError` with
    all problems found."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(
            [f"syntax error at line {exc.lineno}, column {exc.colno}: {exc.msg}"]
        ) from None
    problems: list[str] = []
    if not isinstance(doc, dict):
        raise ConfigError(["top level must be an object"])
    for key in doc:
        if key not in _TOP_FIELDS:
            problems.append(f"unknown field {key}")

    name = doc.get("name", "")
    if not isinstance(name, str):
        problems.append("name must be a string")
        name = ""
    center_gamma = _number(
        doc, "center_gamma_per_s", problems, "", default=0.0, required=False
    )

    groups: list[GroupSpec] = []
    raw_groups = doc.get("groups", [])
    if not isinstance(raw_groups, list):
        problems.append("groups must be a list")
        raw_groups = []
    for i, raw in enumerate(raw_groups):
        where = f"groups[{i}]."
        if not isinstance(raw, dict):
            problems.append(f"groups[{i}] must be an object")
            continue
        for key in raw:
            if key not in _GROUP_FIELDS:
                problems.append(f"unknown field {where}{key}")
        count = _integer(raw, "count", problems, where)
        j_hz = _number(raw, "j_center_hz", problems, where)
        g_rate = _number(raw, "gamma_per_s", problems, where, default=0.0, required=False)
        label = raw.get("label", "")
        if not isinstance(label, str):
            problems.append(f"{where}label must be a string")
            label = ""
        if count is not None and j_hz is not None:
            groups.append(GroupSpec(count, hz(j_hz), g_rate, label))

    nonrwa = None
    if "nonrwa" in doc:
        raw = doc["nonrwa"]
        if not isinstance(raw, dict):
            problems.append("nonrwa must be an object")
        else:
            for key in raw:
                if key not in _NONRWA_FIELDS:
                    problems.append(f"unknown field nonrwa.{key}")
            parts = _integer(raw, "parts", problems, "nonrwa.")
            m = _integer(raw, "m", problems, "nonrwa.")
            n = _integer(raw, "n", problems, "nonrwa.")
            j23_hz = _number(raw, "j23_hz", problems, "nonrwa.")
            dw_hz = _number(raw, "delta_omega_hz", problems, "nonrwa.")
            if None not in (parts, m, n, j23_hz, dw_hz):
                nonrwa = NonRwaSpec(parts, m, n, hz(j23_hz), hz(dw_hz))

    if problems:
        raise ConfigError(problems)
    system = SpinSystem(
        center_gamma=center_gamma,
        groups=tuple(groups),
        nonrwa=nonrwa,
        name=name,
    )
    violations = validate(system)
    if violations:
        raise ConfigError(violations)
    return system
