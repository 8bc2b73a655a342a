"""Debug trace: one event per line, fields separated by single spaces.

Events: ``visit <s>``, ``edge <s> <t>``, ``color <s> <old> <new>``,
``report <kind>``, and for the SCC checks ``roots-push <s>``,
``roots-pop <s>``, ``collapse <B>``, ``inactive <s>``.  States are printed
as their interned index; ``B`` as comma-separated acceptance indices.
"""

from __future__ import annotations


class Trace:
    """Collects events in memory and optionally streams them to a file."""

    def __init__(self, stream=None):
        self.events: list[tuple] = []
        self.stream = stream

    def __call__(self, *event):
        self.events.append(event)
        if self.stream is not None:
            self.stream.write(" ".join(str(x) for x in event) + "\n")

    def lines(self) -> list[str]:
        return [" ".join(str(x) for x in e) for e in self.events]

    def of_kind(self, kind):
        return [e for e in self.events if e[0] == kind]


def parse_trace(text: str) -> list[tuple]:
    out = []
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = line.split()
        out.append(tuple(int(p) if p.lstrip("-").isdigit() else p for p in parts))
    return out


def format_accset(mask: int) -> str:
    idx = []
    j = 1
    while mask:
        if mask & 1:
            idx.append(str(j))
        mask >>= 1
        j += 1
    return ",".join(idx) if idx else "-"
