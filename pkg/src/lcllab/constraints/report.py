from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator


@dataclass(frozen=True, order=True)
class Violation:
    node: int
    rule: str
    radius: int
    msg: str = ""

    def to_json(self) -> str:
        return json.dumps({"node": self.node, "rule": self.rule, "radius": self.radius, "msg": self.msg})


class ViolationReport:
    """Violations sorted by (node, rule); empty iff every checked rule holds."""

    def __init__(self, entries: Iterable[Violation] = ()):
        self.entries = sorted(set(entries), key=lambda v: (v.node, _rule_key(v.rule), v.msg))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Violation]:
        return iter(self.entries)

    def __eq__(self, other) -> bool:
        if isinstance(other, ViolationReport):
            return self.entries == other.entries
        return NotImplemented

    @property
    def ok(self) -> bool:
        return not self.entries

    def nodes(self) -> set[int]:
        return {v.node for v in self.entries}

    def rules(self) -> set[str]:
        return {v.rule for v in self.entries}

    def at(self, node: int) -> list[Violation]:
        return [v for v in self.entries if v.node == node]

    def to_jsonl(self) -> str:
        return "\n".join(v.to_json() for v in self.entries)

    def __repr__(self) -> str:
        head = ", ".join(f"{v.node}:{v.rule}" for v in self.entries[:6])
        more = "" if len(self.entries) <= 6 else f", ... (+{len(self.entries) - 6})"
        return f"ViolationReport([{head}{more}])"


def _rule_key(rule: str):
    prefix, _, num = rule.rpartition(".")
    return (prefix, int(num)) if num.isdigit() else (rule, 0)
