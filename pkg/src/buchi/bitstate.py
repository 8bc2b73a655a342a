"""Approximate (bitstate) mode for the two-bit nested searches.

Only colours are stored, two bits per hash slot; states themselves are never
kept except on the current search path.  A cyan slot is trusted only if the
state really is on the path, so every counterexample is genuine and all the
uncertainty sits in the empty verdict.
"""

from __future__ import annotations

import hashlib

from .automata import PROBABLY_EMPTY, AutomatonProvider, Verdict
from .errors import ConfigError, ContractError
from .metrics import Metrics
from .ndfs import COLOUR_NAMES, WHITE, NestedSearch

MIN_BITS, MAX_BITS = 10, 40
# 2**26 slots pack into 16 MiB; larger tables are kept sparse
_DENSE_LIMIT = 26


class BitstateTable:
    def __init__(self, bits: int, seed: int = 0):
        if not MIN_BITS <= bits <= MAX_BITS:
            raise ConfigError(f"bitstate table exponent must be in [{MIN_BITS}, {MAX_BITS}], got {bits}")
        self.bits = bits
        self.seed = seed
        self.mask = (1 << bits) - 1
        self._key = (seed % 2**64).to_bytes(8, "big")
        self.dense = bits <= _DENSE_LIMIT
        if self.dense:
            self._cells = bytearray((1 << bits) // 4)
        else:
            self._cells = {}
        self.used = 0

    @property
    def slots(self) -> int:
        return 1 << self.bits

    def slot(self, desc: bytes) -> int:
        h = hashlib.blake2b(desc, digest_size=8, key=self._key).digest()
        return int.from_bytes(h, "big") & self.mask

    def get(self, desc: bytes) -> int:
        i = self.slot(desc)
        if self.dense:
            return (self._cells[i >> 2] >> ((i & 3) * 2)) & 3
        return self._cells.get(i, 0)

    def set(self, desc: bytes, colour: int) -> int:
        i = self.slot(desc)
        if self.dense:
            byte, shift = i >> 2, (i & 3) * 2
            old = (self._cells[byte] >> shift) & 3
            self._cells[byte] = (self._cells[byte] & ~(3 << shift)) | (colour << shift)
        else:
            old = self._cells.get(i, 0)
            self._cells[i] = colour
        if old == WHITE and colour != WHITE:
            self.used += 1
        return old


class BitstateSearch(NestedSearch):
    """The same blue/red logic with colours looked up by hashed descriptor."""

    def __init__(self, p, mode, table: BitstateTable, trace=None):
        super().__init__(p, mode, trace)
        self.table = table

    def state(self, desc):
        return desc

    def descriptor(self, s):
        return s

    def is_accepting(self, s):
        return bool(self.p.acceptance(s) & 1)

    def get_colour(self, s):
        return self.table.get(s)

    def set_colour(self, s, new):
        old = self.table.set(s, new)
        if self.trace is not None:
            self.trace("color", self.label(s), COLOUR_NAMES[old], COLOUR_NAMES[new])

    def on_path(self, t):
        return t in self.path_index

    def label(self, s):
        return s.hex()

    def finish_metrics(self):
        self.metrics.distinct_states = self.table.used


def bitstate_check(p: AutomatonProvider, algo="and", bits=20, runs=1, seed=0, trace=None):
    """Run the AND or SD search ``runs`` times with independently keyed hashes.

    Returns the first counterexample found, or a ``probably-empty`` verdict.
    Metrics are summed over the runs actually performed.
    """
    if algo not in ("and", "sd"):
        raise ConfigError(f"bitstate mode supports 'and' and 'sd', got {algo!r}")
    if not MIN_BITS <= bits <= MAX_BITS:
        raise ConfigError(f"bitstate table exponent must be in [{MIN_BITS}, {MAX_BITS}], got {bits}")
    if runs < 1:
        raise ConfigError("runs must be >= 1")
    if p.conditions() != 1:
        raise ContractError(f"bitstate search needs k=1, got k={p.conditions()}")
    total = Metrics(aux_bits_per_state=2)
    for r in range(runs):
        table = BitstateTable(bits, seed + r)
        verdict, metrics = BitstateSearch(p, algo, table, trace).run()
        total += metrics
        if verdict.is_counterexample:
            return verdict, total
    return Verdict(PROBABLY_EMPTY), total
