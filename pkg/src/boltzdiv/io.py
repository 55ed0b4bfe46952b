"""Problem files: JSON parsing with path-qualified errors, and export."""

from __future__ import annotations

import json
import math
import os
from pathlib import Path
from typing import Any, Union

from .errors import DivisionError, ProblemSyntaxError, ValidationError, Violation
from .model import (
    DEFAULT_CAKE_SIZE,
    DivisionProblem,
    FlavorLayout,
    Player,
    PreferenceMatrix,
    problem_violations,
)

TOP_KEYS = ("cake_size", "players", "flavors", "preferences")
PLAYER_KEYS = ("id", "contribution", "need", "amplitude")
FLAVOR_KEYS = ("name", "size")


class ProblemIOError(DivisionError, OSError):
    """The problem file could not be read."""


def _is_number(x) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool)


class _Reader:
    def __init__(self):
        self.violations: list[Violation] = []

    def error(self, code: str, path: str, message: str):
        self.violations.append(Violation(code, path, message))

    def check_keys(self, obj: dict, allowed, path: str):
        for key in obj:
            if key not in allowed:
                where = f"{path}.{key}" if path else key
                self.error("UnknownKey", where, f"unknown key {key!r} (allowed: {', '.join(allowed)})")

    def number(self, obj: dict, key: str, path: str, default=None):
        where = f"{path}.{key}" if path else key
        if key not in obj:
            if default is None:
                self.error("MissingField", where, "required field is missing")
                return math.nan
            return default
        value = obj[key]
        if not _is_number(value):
            self.error("InvalidType", where, f"expected a number, got {json.dumps(value)}")
            return math.nan
        return float(value)

    def string(self, obj: dict, key: str, path: str) -> str:
        where = f"{path}.{key}"
        if key not in obj:
            self.error("MissingField", where, "required field is missing")
            return ""
        value = obj[key]
        if not isinstance(value, str):
            self.error("InvalidType", where, f"expected a string, got {json.dumps(value)}")
            return str(value)
        return value


def problem_from_dict(doc: Any) -> DivisionProblem:
    """Build and validate a problem from a decoded JSON document."""
    r = _Reader()
    if not isinstance(doc, dict):
        raise ValidationError([Violation("InvalidType", "$", "top level must be a JSON object")])
    r.check_keys(doc, TOP_KEYS, "")
    cake_size = r.number(doc, "cake_size", "", default=DEFAULT_CAKE_SIZE)

    players: list[Player] = []
    raw_players = doc.get("players")
    if raw_players is None:
        r.error("MissingField", "players", "required field is missing")
    elif not isinstance(raw_players, list):
        r.error("InvalidType", "players", "expected a list of player objects")
    else:
        for j, item in enumerate(raw_players):
            path = f"players[{j}]"
            if not isinstance(item, dict):
                r.error("InvalidType", path, "expected an object")
                continue
            r.check_keys(item, PLAYER_KEYS, path)
            players.append(
                Player(
                    id=r.string(item, "id", path),
                    contribution=r.number(item, "contribution", path),
                    need=r.number(item, "need", path),
                    amplitude=r.number(item, "amplitude", path, default=1.0),
                )
            )

    het = None
    has_flavors, has_prefs = "flavors" in doc, "preferences" in doc
    if has_flavors != has_prefs:
        missing = "preferences" if has_flavors else "flavors"
        r.error("MissingField", missing, "'flavors' and 'preferences' must be given together")
    elif has_flavors:
        names, sizes = [], []
        raw_flavors = doc["flavors"]
        if not isinstance(raw_flavors, list):
            r.error("InvalidType", "flavors", "expected a list of flavor objects")
        else:
            for i, item in enumerate(raw_flavors):
                path = f"flavors[{i}]"
                if not isinstance(item, dict):
                    r.error("InvalidType", path, "expected an object")
                    continue
                r.check_keys(item, FLAVOR_KEYS, path)
                names.append(r.string(item, "name", path))
                sizes.append(r.number(item, "size", path))
        rows = []
        raw_prefs = doc["preferences"]
        if not isinstance(raw_prefs, list):
            r.error("InvalidType", "preferences", "expected a list of rows")
        else:
            for j, row in enumerate(raw_prefs):
                path = f"players[{j}].preferences"
                if not isinstance(row, list) or not all(_is_number(w) for w in row):
                    r.error("InvalidType", path, "expected a list of numbers")
                    continue
                rows.append(tuple(float(w) for w in row))
        het = (FlavorLayout(tuple(names), tuple(sizes)), PreferenceMatrix(tuple(rows)))

    problem = DivisionProblem(tuple(players), cake_size, het)
    # domain checks run even after schema errors; skip paths already reported
    reported = {v.path for v in r.violations}
    violations = r.violations + [v for v in problem_violations(problem) if v.path not in reported]
    if violations:
        raise ValidationError(violations)
    return problem


def parse_problem_text(text: str) -> DivisionProblem:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemSyntaxError(exc.msg, exc.lineno, exc.colno) from None
    return problem_from_dict(doc)


def load_problem(path: Union[str, os.PathLike]) -> DivisionProblem:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ProblemIOError(f"cannot read {os.fspath(path)}: {exc}") from exc
    return parse_problem_text(text)


def parse_problem(source: Union[str, os.PathLike]) -> DivisionProblem:
    """Parse a problem from a path, or from JSON text if ``source`` is a string starting with '{'."""
    if isinstance(source, str) and source.lstrip().startswith("{"):
        return parse_problem_text(source)
    return load_problem(source)


def problem_to_dict(problem: DivisionProblem) -> dict:
    players = []
    for p in problem.players:
        item = {"id": p.id, "contribution": p.contribution, "need": p.need}
        if p.amplitude != 1.0:
            item["amplitude"] = p.amplitude
        players.append(item)
    doc: dict = {"cake_size": problem.cake_size, "players": players}
    if problem.is_heterogeneous:
        doc["flavors"] = [
            {"name": name, "size": size}
            for name, size in zip(problem.layout.flavors, problem.layout.sizes)
        ]
        doc["preferences"] = [list(row) for row in problem.preferences.weights]
    return doc


def dump_problem(problem: DivisionProblem) -> str:
    return json.dumps(problem_to_dict(problem), indent=2) + "\n"


def bundled_fixture(name: str) -> Path:
    """Path of a problem file shipped with the package (e.g. ``reference_homog.json``)."""
    return Path(__file__).resolve().parent / "data" / name
