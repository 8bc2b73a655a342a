import pytest

from buchi.automata import ExplicitGBA, decode_state, degeneralize, encode_state, explicit_provider
from buchi.errors import ContractError, InvariantViolation
from buchi.generators import gen_gba_ring, gen_nonacc_scc_chain
from buchi.invariants import SCCChecker
from buchi.oracle import oracle_emptiness, validate_lasso
from buchi.scc_algos import ASCCSearch, C99Search, GVSearch, ascc_check, c99_check, extract_lasso, gv_check
from buchi.trace import Trace

from conftest import chain_with_sink, gba, random_instances

E = encode_state
CHECKS = {"ascc": ascc_check, "gv": gv_check, "c99": c99_check}


def test_k2_single_state_in_both_sets():
    v, _ = ascc_check(explicit_provider(gba(1, [(0, 0)], {0: 0b11}, k=2)))
    assert v.loop == (E(0),)


def test_k2_cycle_missing_a_condition():
    v, _ = ascc_check(explicit_provider(gba(2, [(0, 1), (1, 0)], {0: 1, 1: 1}, k=2)))
    assert v.is_empty


def test_k2_loop_visits_both_witnesses():
    g = gba(4, [(0, 1), (1, 2), (2, 3), (3, 1)], {1: 0b01, 3: 0b10}, k=2)
    for check in (ascc_check, c99_check):
        v, _ = check(explicit_provider(g))
        assert v.prefix == (E(0),)
        assert set(v.loop) == {E(1), E(2), E(3)}
        assert validate_lasso(explicit_provider(g), v)


def test_k0_any_cycle_counts():
    g = gba(3, [(0, 1), (1, 2), (2, 1)], k=0)
    assert ascc_check(explicit_provider(g))[0].loop == (E(1), E(2))
    assert ascc_check(explicit_provider(gba(2, [(0, 1)], k=0)))[0].is_empty


def test_gv_examples():
    v, m = gv_check(explicit_provider(gba(1, [(0, 0)], {0: 1})))
    assert v.loop == (E(0),) and m.transitions_explored == 1
    assert gv_check(explicit_provider(gba(3, [(0, 1), (1, 2), (2, 0)])))[0].is_empty
    with pytest.raises(ContractError):
        gv_check(explicit_provider(gba(1, [], k=2)))


def test_gv_cycle_dipping_below_accepting_state():
    # 0 -> 1 -> 2(acc) -> 3 -> 1: the loop through 2 has to pass through 1
    g = gba(4, [(0, 1), (1, 2), (2, 3), (3, 1)], {2: 1})
    v, _ = gv_check(explicit_provider(g))
    assert validate_lasso(explicit_provider(g), v)
    assert v.prefix == (E(0), E(1))


def test_c99_extra_post_calls():
    ring = gba(10, [(i, (i + 1) % 10) for i in range(10)])
    _, ma = ascc_check(explicit_provider(ring))
    _, mc = c99_check(explicit_provider(ring))
    assert ma.post_calls == 10
    assert mc.post_calls == 20 > ma.post_calls


def test_c99_reports_before_any_removal():
    v, m = c99_check(explicit_provider(gba(1, [(0, 0)], {0: 1})))
    assert v.is_counterexample and m.post_calls == 1


def test_chain_counts():
    p = explicit_provider(chain_with_sink())
    for check, want in ((ascc_check, 10), (gv_check, 10), (c99_check, 20)):
        _, m = check(p)
        assert (m.post_calls, m.successors_generated) == (want, want)


def test_gba_ring_explores_fewer_states_than_degeneralized():
    for n in (1, 2, 5, 17):
        g = gen_gba_ring(n)
        va, ma = ascc_check(explicit_provider(g))
        vg, mg = gv_check(explicit_provider(degeneralize(g)))
        assert va.is_empty and vg.is_empty
        assert (ma.distinct_states, mg.distinct_states) == (n, 2 * n)


def test_random_against_oracle():
    for g in random_instances(400, seed=4):
        p = explicit_provider(g)
        want = oracle_emptiness(g)
        results = {}
        for name, check in CHECKS.items():
            if name == "gv" and g.k != 1:
                continue
            v, m = check(p)
            assert v.kind == want.kind, name
            if v.is_counterexample:
                assert validate_lasso(p, v)
            results[name] = m
        if want.is_empty:
            reach = len(g.reachable())
            assert results["ascc"].post_calls == reach
            assert results["c99"].post_calls >= results["ascc"].post_calls
        elif g.k == 1:
            assert results["gv"].transitions_explored == results["ascc"].transitions_explored


def test_nonacc_chain_c99_falls_behind():
    for seed in range(30):
        g = gen_nonacc_scc_chain(1 + seed % 6, 1 + seed % 5, seed=seed)
        _, ma = ascc_check(explicit_provider(g))
        _, mc = c99_check(explicit_provider(g))
        assert mc.post_calls > ma.post_calls


@pytest.mark.parametrize("cls", [ASCCSearch, GVSearch, C99Search])
def test_debug_invariants(cls):
    steps = 0
    for g in random_instances(80, seed=5, n_max=20, k_choices=(1,) if cls is GVSearch else (0, 1, 2, 3)):
        checker = SCCChecker(g)
        v, _ = cls(explicit_provider(g), debug=checker).run()
        assert v.kind == oracle_emptiness(g).kind
        steps += checker.steps
    assert steps > 200


def test_debug_checker_catches_corruption():
    class Broken(ASCCSearch):
        def collapse(self, t):
            super().collapse(t)
            u, B = self.roots.pop()
            self.roots.append((u, 0))  # forget the accumulated acceptance set

    g = gba(3, [(0, 1), (1, 2), (2, 1)], {2: 0b01}, k=2)
    assert ASCCSearch(explicit_provider(g), debug=SCCChecker(g)).run()[0].is_empty
    with pytest.raises(InvariantViolation, match="carries"):
        Broken(explicit_provider(g), debug=SCCChecker(g)).run()


@pytest.mark.parametrize("cls", [ASCCSearch, C99Search, GVSearch])
def test_reports_as_soon_as_explored_graph_has_a_counterexample(cls):
    for g in random_instances(200, seed=6, k_choices=(1,) if cls is GVSearch else (0, 1, 2, 3)):
        trace = Trace()
        search = cls(explicit_provider(g), trace=trace)
        v, _ = search.run()
        if v.is_empty:
            continue
        refs = len(search.store)
        acc = [g.acc[decode_state(search.store.descriptor(r))] for r in range(refs)]
        edges = [(e[1], e[2]) for e in trace.of_kind("edge")]

        def explored(upto):
            succ = [[] for _ in range(refs)]
            for s, t in edges[:upto]:
                if t not in succ[s]:
                    succ[s].append(t)
            return ExplicitGBA(refs, 0, succ, acc, g.k)

        assert oracle_emptiness(explored(len(edges))).is_counterexample
        assert oracle_emptiness(explored(len(edges) - 1)).is_empty


def test_trace_events():
    trace = Trace()
    ascc_check(explicit_provider(gba(2, [(0, 1), (1, 0)], {1: 0b11}, k=2)), trace=trace)
    kinds = [e[0] for e in trace.events]
    # B reaches K at the first pop, before the collapse loop gets to state 0
    assert kinds == ["visit", "roots-push", "edge", "visit", "roots-push", "edge",
                     "roots-pop", "collapse", "report"]
    assert trace.events[-2] == ("collapse", "1,2")


def test_extract_lasso_without_cycle_is_an_error():
    class View:
        path = [0]

        def path_pos(self, s):
            return 0

        def num(self, s):
            return 1

        def acc(self, s):
            return 1

        def in_scope(self, s):
            return True

        def explored(self, s):
            return []

    with pytest.raises(InvariantViolation):
        extract_lasso(View(), 0, 1)
