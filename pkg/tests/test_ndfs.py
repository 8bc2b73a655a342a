import io

import pytest

from buchi.automata import encode_state, explicit_provider, is_weak
from buchi.bench import run_differential
from buchi.errors import ContractError
from buchi.generators import GenConfig, weak_random
from buchi.invariants import ColourChecker
from buchi.ndfs import BaselineSearch, NestedSearch, and_check, ndfs_baseline, sd_check
from buchi.oracle import oracle_emptiness, validate_lasso
from buchi.trace import Trace, parse_trace

from conftest import chain_with_sink, gba, random_instances

E = encode_state


def dag10():
    edges = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (4, 6), (5, 7), (6, 7), (7, 8), (8, 9)]
    return gba(10, edges, {2: 1, 5: 1, 8: 1})


class NoAllredReset(NestedSearch):
    """Mutant: forgets to clear the all-red flag when a successor is not red."""

    def note_successor(self, frame, c):
        pass


class TestBaseline:
    def test_self_loop(self, self_loop):
        v, _ = ndfs_baseline(explicit_provider(self_loop))
        assert v.is_counterexample and v.loop == (E(0),) and v.prefix == ()

    def test_nonaccepting_cycle(self):
        v, _ = ndfs_baseline(explicit_provider(gba(2, [(0, 1), (1, 0)])))
        assert v.is_empty

    def test_reports_only_from_red_search(self):
        # 0 -> 1(acc) -> 0: the blue search sees the back edge but has no cyan check
        trace = Trace()
        v, m = ndfs_baseline(explicit_provider(gba(2, [(0, 1), (1, 0)], {1: 1})), trace=trace)
        assert v.loop == (E(1), E(0))
        assert v.prefix == (E(0),)
        # blue: 0, 1; red from 1: 1 again, then 0, whose edge returns to the seed
        assert m.post_calls == 4

    def test_chain_counts(self):
        _, m = ndfs_baseline(explicit_provider(chain_with_sink()))
        assert (m.post_calls, m.successors_generated) == (20, 20)


class TestAND:
    def test_self_loop_reported_by_blue_search(self, self_loop):
        trace = Trace()
        v, m = and_check(explicit_provider(self_loop), trace=trace)
        assert v.loop == (E(0),)
        assert m.post_calls == 1
        assert ("color", 0, "cyan", "red") not in trace.events

    def test_dag_never_starts_red_search(self):
        trace = Trace()
        v, m = and_check(explicit_provider(dag10()), trace=trace)
        assert v.is_empty
        assert m.post_calls == 10
        finals = {}
        for _, s, _, new in trace.of_kind("color"):
            finals[s] = new
        assert set(finals.values()) == {"red"}

    def test_chain_counts(self):
        # the red search runs once, from state 8; its predecessors are all-red
        _, m = and_check(explicit_provider(chain_with_sink()))
        assert (m.post_calls, m.successors_generated) == (12, 12)
        assert m.transitions_explored == 12
        assert m.max_search_depth == 10

    def test_red_hit_lasso(self):
        # 0 -> 1(acc) -> 2 -> 0: only the red search from 1 closes the cycle
        v, m = and_check(explicit_provider(gba(3, [(0, 1), (1, 2), (2, 0)], {1: 1})))
        assert v.prefix == ()
        assert v.loop == (E(0), E(1), E(2))

    def test_contract(self):
        with pytest.raises(ContractError):
            and_check(explicit_provider(gba(1, [(0, 0)], k=2)))
        with pytest.raises(ContractError):
            ndfs_baseline(explicit_provider(gba(1, [(0, 0)], k=0)))

    def test_random_against_oracle_and_baseline(self):
        for g in random_instances(400, seed=1, k_choices=(1,)):
            p = explicit_provider(g)
            want = oracle_emptiness(g)
            v, m = and_check(p)
            b, mb = ndfs_baseline(p)
            assert v.kind == want.kind == b.kind
            for got in (v, b):
                if got.is_counterexample:
                    assert validate_lasso(p, got)
            if want.is_empty:
                reach = len(g.reachable())
                assert m.post_calls <= mb.post_calls <= 2 * reach
                assert m.successors_generated <= mb.successors_generated


class TestSD:
    def test_accepting_two_cycle(self):
        g = gba(2, [(0, 1), (1, 0)], {0: 1, 1: 1})
        v, _ = sd_check(explicit_provider(g))
        assert v.is_counterexample

    def test_nonaccepting_cycles(self):
        g = gba(3, [(0, 1), (1, 0), (1, 2)], {2: 1})
        assert is_weak(g)
        assert sd_check(explicit_provider(g))[0].is_empty

    def test_flag(self):
        v, _ = sd_check(explicit_provider(gba(1, [])), weak_asserted=False)
        assert "unsound-if-not-weak" in v.flags
        assert sd_check(explicit_provider(gba(1, [])))[0].flags == ()

    def test_weak_instances(self):
        for seed in range(500):
            g = weak_random(GenConfig(n=1 + seed % 50, avg_out_degree=1.8, acc_density=0.3, seed=seed))
            v, m = sd_check(explicit_provider(g))
            assert v.kind == oracle_emptiness(g).kind
            if v.is_empty:
                assert m.post_calls == len(g.reachable())
            else:
                assert validate_lasso(explicit_provider(g), v)


def test_colour_invariants_hold_every_step():
    for g in random_instances(150, seed=2, n_max=25, k_choices=(1,)):
        for mode in ("and", "sd"):
            if mode == "sd" and not is_weak(g):
                continue
            checker = ColourChecker(g)
            v, _ = NestedSearch(explicit_provider(g), mode, debug=checker).run()
            assert v.kind == oracle_emptiness(g).kind
            assert checker.steps > 0


def test_trace_stream_and_events():
    out = io.StringIO()
    trace = Trace(out)
    and_check(explicit_provider(gba(3, [(0, 1), (1, 2), (2, 0)], {1: 1})), trace=trace)
    events = parse_trace(out.getvalue())
    assert events == trace.events
    assert events[0] == ("color", 0, "white", "cyan")
    assert events[1] == ("visit", 0)
    assert events[-1] == ("report", "counterexample")
    allowed = {("white", "cyan"), ("cyan", "red"), ("cyan", "blue"), ("blue", "red")}
    assert all((e[2], e[3]) in allowed for e in events if e[0] == "color")


def test_mutant_is_caught_by_differential():
    def mutant(p):
        return NoAllredReset(p, "and").run()

    summary = run_differential(1000, ranges={"n": (1, 30), "k": (1, 1)}, seed=0,
                               algorithms={"and": mutant})
    assert not summary.passed
    failure = summary.failures[0]
    assert "oracle says counterexample" in failure.reason
    # shrunk to a handful of states
    assert int(failure.instance.split("gba ")[1].split()[0]) <= 4


def test_mutant_misses_known_cycle():
    g = gba(3, [(0, 1), (1, 2), (2, 0)], {1: 1})
    assert NoAllredReset(explicit_provider(g), "and").run()[0].is_empty
    assert and_check(explicit_provider(g))[0].is_counterexample


def test_baseline_search_is_the_subclass():
    assert issubclass(BaselineSearch, NestedSearch)
