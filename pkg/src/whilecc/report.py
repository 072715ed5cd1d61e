"""Line-oriented check reports: PASS/FAIL rows plus a machine summary.

Every row records a check verified on specific samples; no row ever claims
a universal statement.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field


@dataclass
class Report:
    name: str
    rows: list = field(default_factory=list)

    def add(self, ok: bool, check: str, sample: str, detail: str = "") -> bool:
        self.rows.append((bool(ok), check, sample, detail))
        return ok

    @property
    def ok(self) -> bool:
        return all(r[0] for r in self.rows)

    @property
    def failures(self) -> list:
        return [r for r in self.rows if not r[0]]

    def lines(self) -> list[str]:
        return [f"{'PASS' if ok else 'FAIL'} {check} {sample} {detail}".rstrip()
                for ok, check, sample, detail in self.rows]

    def summary(self) -> dict:
        return {
            "report": self.name,
            "scope": "verified on samples",
            "total": len(self.rows),
            "passed": sum(1 for r in self.rows if r[0]),
            "failed": len(self.failures),
            "rows": [{"ok": ok, "check": check, "sample": sample, "detail": detail}
                     for ok, check, sample, detail in self.rows],
        }

    def to_json(self) -> str:
        return json.dumps(self.summary(), indent=2, sort_keys=True)

    def __str__(self):
        return "\n".join(self.lines())
