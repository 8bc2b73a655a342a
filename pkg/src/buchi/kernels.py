"""Backend selection for the emptiness checks.

The compiled module ``_ckernels`` runs the searches over CSR arrays when the
automaton is explicit.  If it is missing (no compiler at install time) or the
environment variable ``BUCHI_PURE`` is set to a non-empty value other than
``0``, every check goes through the provider-based Python searches.  Both
paths produce the same verdicts and the same counters; only ``wall_time``
differs.

Traces and debug checkers hook into the Python searches, so requesting
either one always selects the Python path.
"""

from __future__ import annotations

import os
import time
from array import array
from itertools import accumulate, chain

from .automata import (
    AutomatonProvider,
    ExplicitGBA,
    ExplicitProvider,
    Verdict,
    encode_state,
    full_mask,
)
from .errors import ConfigError, ContractError
from .metrics import Metrics
from .ndfs import and_check, ndfs_baseline, sd_check
from .scc_algos import ascc_check, c99_check, extract_lasso, gv_check

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

COMPILED = _ckernels is not None
BACKEND = "compiled" if COMPILED and os.environ.get("BUCHI_PURE", "") in ("", "0") else "python"

ALGORITHMS = ("and", "baseline", "sd", "ascc", "gv", "c99")
NESTED = ("and", "baseline", "sd")

_PYTHON = {
    "and": and_check,
    "baseline": ndfs_baseline,
    "sd": sd_check,
    "ascc": ascc_check,
    "gv": gv_check,
    "c99": c99_check,
}


def _check_algo(algo):
    if algo not in _PYTHON:
        raise ConfigError(f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}")


def _check_contract(algo, k):
    if algo in NESTED and k != 1:
        raise ContractError(f"nested DFS needs a Büchi automaton (k=1), got k={k}")
    if algo == "gv" and k != 1:
        raise ContractError(f"GV handles Büchi automata only (k=1), got k={k}")


class _CSRView:
    """Lasso-extraction view over a kernel's final search state."""

    def __init__(self, g: ExplicitGBA, path, cursors, nums, scope):
        self.g = g
        self.path = path
        self._pos = {s: i for i, s in enumerate(path)}
        self._cursor = dict(zip(path, cursors))
        self._nums = nums
        self._scope = scope

    def path_pos(self, s):
        return self._pos[s]

    def num(self, s):
        return self._nums[s]

    def acc(self, s):
        return self.g.acc[s]

    def in_scope(self, s):
        return self._scope[s] == 1

    def explored(self, s):
        row = self.g.succ[s]
        cur = self._cursor.get(s)
        return row if cur is None else row[:cur]


def _arrays(g: ExplicitGBA):
    indptr = array("i", accumulate(map(len, g.succ), initial=0))
    indices = array("i", chain.from_iterable(g.succ))
    return indptr, indices, array("q", g.acc)


def compiled_check(g: ExplicitGBA, algo: str, weak_asserted=True):
    """Run ``algo`` on ``g`` with the compiled kernel; ``(Verdict, Metrics)``."""
    if _ckernels is None:
        raise ConfigError("the compiled backend is not available")
    _check_algo(algo)
    _check_contract(algo, g.k)
    indptr, indices, acc = _arrays(g)
    t0 = time.perf_counter()
    if algo == "and":
        found, counts, payload = _ckernels.nested(0, indptr, indices, acc, g.init)
    elif algo == "sd":
        found, counts, payload = _ckernels.nested(1, indptr, indices, acc, g.init)
    elif algo == "baseline":
        found, counts, payload = _ckernels.baseline(indptr, indices, acc, g.init)
    else:
        mode = ("ascc", "gv", "c99").index(algo)
        found, counts, payload = _ckernels.scc(mode, indptr, indices, acc, g.init, full_mask(g.k))
    elapsed = time.perf_counter() - t0
    post, succ, distinct, trans, depth = counts
    metrics = Metrics(
        post_calls=post,
        successors_generated=succ,
        distinct_states=distinct,
        transitions_explored=trans,
        max_search_depth=depth,
        aux_bits_per_state=2 if algo in NESTED else 0,
        descriptor_bytes=4 * distinct,
        wall_time=elapsed,
    )
    if not found:
        verdict = Verdict.empty()
    else:
        if algo in NESTED:
            prefix, loop = payload
        else:
            path, cursors, root, floor, nums, scope = payload
            view = _CSRView(g, path, cursors, nums, scope)
            prefix, loop = extract_lasso(view, root, full_mask(g.k), floor)
        verdict = Verdict.counterexample([encode_state(s) for s in prefix],
                                         [encode_state(s) for s in loop])
    if algo == "sd" and not weak_asserted:
        verdict = verdict.with_flags("unsound-if-not-weak")
    return verdict, metrics


def run_algorithm(p: AutomatonProvider, algo: str, backend=None, trace=None,
                  debug=None, weak_asserted=True):
    """Run one exact emptiness check and return ``(Verdict, Metrics)``.

    ``backend`` is ``"compiled"``, ``"python"`` or ``None`` (module default).
    The compiled path needs an explicit automaton and no trace or debug hooks;
    otherwise the Python search runs.
    """
    _check_algo(algo)
    backend = backend or BACKEND
    if backend not in ("compiled", "python"):
        raise ConfigError(f"unknown backend {backend!r}")
    if backend == "compiled" and not COMPILED:
        raise ConfigError("the compiled backend is not available")
    use_kernel = (backend == "compiled" and isinstance(p, ExplicitProvider)
                  and trace is None and debug is None and p.g.k < 63)
    if use_kernel:
        return compiled_check(p.g, algo, weak_asserted)
    if algo == "sd":
        return sd_check(p, weak_asserted=weak_asserted, trace=trace, debug=debug)
    return _PYTHON[algo](p, trace=trace, debug=debug)
