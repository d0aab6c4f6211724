"""Reading and writing the three-file dataset format.

A dataset directory holds::

    nodes.csv    id,level
    edges.csv    source,target,weight
    groups.json  [{"gid": 0, "members": [..], "leader": 7, "independent": false}, ...]

Subordinate/superior lists are not stored separately; they follow from the
leader and members of each group.
"""

from __future__ import annotations

import csv
import json
import re
from pathlib import Path
from typing import Union

from .model import (
    Edge,
    Group,
    GroupPartition,
    Network,
    NodeRecord,
    Violation,
    id_key,
    sorted_ids,
    validate_network,
    validate_partition,
)

NODES_FILE = "nodes.csv"
EDGES_FILE = "edges.csv"
GROUPS_FILE = "groups.json"

NODES_HEADER = ["id", "level"]
EDGES_HEADER = ["source", "target", "weight"]

_INT = re.compile(r"^[+-]?\d+$")
_TOKEN = re.compile(r"^[^\s,\"]+$")

PathLike = Union[str, Path]


class DatasetError(Exception):
    """Base class for dataset problems."""


class FormatError(DatasetError):
    """A row or file does not follow the grammar."""

    def __init__(self, path, line, message):
        self.path, self.line = path, line
        where = f"{path}:{line}" if line is not None else str(path)
        super().__init__(f"{where}: {message}")


class ValidationError(DatasetError):
    """Parsed data violates network or partition invariants."""

    def __init__(self, violations: list[Violation]):
        self.violations = violations
        lines = "\n".join(f"  - {v}" for v in violations)
        super().__init__(f"{len(violations)} violation(s):\n{lines}")


def _parse_id(token: str):
    return int(token) if _INT.match(token) else token


def _read_rows(path: Path, header: list[str]):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            first = next(reader)
        except StopIteration:
            raise FormatError(path, 1, "missing header") from None
        if [h.strip() for h in first] != header:
            raise FormatError(path, 1, f"expected header {','.join(header)}, got {','.join(first)}")
        for row in reader:
            line = reader.line_num
            if not row or all(not c.strip() for c in row):
                raise FormatError(path, line, "blank row")
            if len(row) != len(header):
                raise FormatError(path, line, f"expected {len(header)} fields, got {len(row)}")
            cells = [c.strip() for c in row]
            for c in cells:
                if not _TOKEN.match(c):
                    raise FormatError(path, line, f"malformed field {c!r}")
            yield line, cells


def _read_int(path, line, token, what):
    if not _INT.match(token):
        raise FormatError(path, line, f"{what} must be an integer, got {token!r}")
    return int(token)


def read_nodes(path: Path) -> list[NodeRecord]:
    return [
        NodeRecord(_parse_id(node_id), _read_int(path, line, level, "level"))
        for line, (node_id, level) in _read_rows(path, NODES_HEADER)
    ]


def read_edges(path: Path) -> list[Edge]:
    return [
        Edge(_parse_id(s), _parse_id(t), _read_int(path, line, w, "weight"))
        for line, (s, t, w) in _read_rows(path, EDGES_HEADER)
    ]


def _json_id(path, value):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise FormatError(path, None, f"node id must be an integer or string, got {value!r}")
    return value


def read_groups(path: Path) -> GroupPartition:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(path, exc.lineno, f"invalid JSON: {exc.msg}") from None
    if not isinstance(data, list):
        raise FormatError(path, None, "expected a JSON array of groups")
    groups = []
    for k, obj in enumerate(data):
        if not isinstance(obj, dict) or set(obj) - {"gid", "members", "leader", "independent"}:
            raise FormatError(path, None, f"group #{k}: unexpected structure")
        if "gid" not in obj or "members" not in obj:
            raise FormatError(path, None, f"group #{k}: gid and members are required")
        gid = obj["gid"]
        if isinstance(gid, bool) or not isinstance(gid, int):
            raise FormatError(path, None, f"group #{k}: gid must be an integer")
        if not isinstance(obj["members"], list):
            raise FormatError(path, None, f"group {gid}: members must be a list")
        members = [_json_id(path, m) for m in obj["members"]]
        if len(set(members)) != len(members):
            raise FormatError(path, None, f"group {gid}: repeated member")
        leader = obj.get("leader")
        if leader is not None:
            leader = _json_id(path, leader)
        independent = obj.get("independent", False)
        if not isinstance(independent, bool):
            raise FormatError(path, None, f"group {gid}: independent must be a boolean")
        groups.append(Group(gid, frozenset(members), leader, independent))
    return GroupPartition(tuple(groups))


def load_dataset(directory: PathLike, *, validate: bool = True) -> tuple[Network, GroupPartition]:
    """Load and validate a dataset directory.

    Raises ``FileNotFoundError`` for a missing file, ``FormatError`` for a
    malformed row and ``ValidationError`` when invariants fail.
    """
    directory = Path(directory)
    for name in (NODES_FILE, EDGES_FILE, GROUPS_FILE):
        if not (directory / name).is_file():
            raise FileNotFoundError(f"{directory / name}: no such file")
    net = Network(tuple(read_nodes(directory / NODES_FILE)), tuple(read_edges(directory / EDGES_FILE)))
    part = read_groups(directory / GROUPS_FILE)
    if validate:
        violations = validate_network(net)
        if not violations:
            violations, _ = validate_partition(net, part)
        if violations:
            raise ValidationError(violations)
    return net, part


def groups_to_json(part: GroupPartition) -> str:
    rows = [
        {
            "gid": g.gid,
            "members": sorted_ids(g.members),
            "leader": g.leader,
            "independent": g.independent,
        }
        for g in part.canonical().groups
    ]
    return json.dumps(rows, indent=2) + "\n"


def save_dataset(net: Network, part: GroupPartition, directory: PathLike) -> None:
    """Write ``net`` and ``part`` in canonical order (sorted ids and pairs)."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    net = net.canonical()
    lines = [",".join(NODES_HEADER)] + [f"{n.id},{n.level}" for n in net.nodes]
    (directory / NODES_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    lines = [",".join(EDGES_HEADER)] + [f"{e.source},{e.target},{e.weight}" for e in net.edges]
    (directory / EDGES_FILE).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
    (directory / GROUPS_FILE).write_text(groups_to_json(part), encoding="utf-8", newline="\n")


def anonymize_check(net: Network) -> list[str]:
    """Warn about node ids that look like they still carry identity."""
    warnings = []
    for n in sorted(net.nodes, key=lambda n: id_key(n.id)):
        if not isinstance(n.id, int) or isinstance(n.id, bool):
            warnings.append(f"non-numeric id {n.id!r}")
    return warnings
