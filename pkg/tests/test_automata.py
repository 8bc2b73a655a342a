import itertools
import random

import pytest
from hypothesis import given, settings

from buchi.automata import (
    ExplicitGBA,
    InternStore,
    Verdict,
    acc_indices,
    acc_mask,
    decode_state,
    degeneralize,
    encode_state,
    explicit_provider,
    full_mask,
    is_weak,
    materialize,
    scc_decompose,
)
from buchi.errors import CapacityError, ContractError, FormatError
from buchi.generators import GenConfig, random_gba, weak_random
from buchi.oracle import oracle_emptiness, simple_cycles

from conftest import gba, gbas


def closure(g):
    reach = {}
    for s in range(g.n):
        seen, todo = {s}, [s]
        while todo:
            x = todo.pop()
            for t in g.succ[x]:
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
        reach[s] = seen
    return reach


class TestIntern:
    def test_idempotent(self):
        store = InternStore()
        assert store.intern(b"abc") == (0, True)
        assert store.intern(b"abc") == (0, False)

    def test_dense_in_call_order(self):
        store = InternStore()
        assert store.intern(b"x")[0] == 0
        assert store.intern(b"y")[0] == 1
        assert store.descriptor(1) == b"y"

    def test_thousand_random_descriptors(self):
        rng = random.Random(7)
        descs = set()
        while len(descs) < 1000:
            descs.add(bytes(rng.randrange(256) for _ in range(rng.randint(1, 12))))
        store = InternStore()
        refs = [store.intern(d)[0] for d in descs]
        assert sorted(refs) == list(range(1000))
        assert all(store.lookup(d) == store.intern(d)[0] for d in descs)
        assert store.total_bytes() == sum(len(d) for d in descs)

    def test_capacity(self):
        store = InternStore(capacity=2)
        store.intern(b"a")
        store.intern(b"b")
        store.intern(b"a")
        with pytest.raises(CapacityError):
            store.intern(b"c")


def test_acceptance_masks():
    assert acc_mask([1, 3]) == 0b101
    assert acc_indices(0b101) == {1, 3}
    assert full_mask(0) == 0
    assert full_mask(3) == 0b111
    with pytest.raises(ValueError):
        acc_mask([0])


def test_descriptor_roundtrip():
    for i in (0, 1, 255, 2**31):
        assert decode_state(encode_state(i)) == i
    assert len(encode_state(5)) == 4


class TestExplicit:
    def test_validation(self):
        with pytest.raises(FormatError):
            ExplicitGBA(2, 2, [[], []], [0, 0])
        with pytest.raises(FormatError):
            ExplicitGBA(2, 0, [[1, 1], []], [0, 0])
        with pytest.raises(FormatError):
            ExplicitGBA(2, 0, [[2], []], [0, 0])
        with pytest.raises(FormatError):
            ExplicitGBA(1, 0, [[]], [0b10], k=1)

    def test_provider_self_loop(self, self_loop):
        p = explicit_provider(self_loop)
        s0 = p.initial()
        assert list(p.post(s0)) == [s0]

    def test_provider_chain(self):
        p = explicit_provider(gba(3, [(0, 1), (1, 2)]))
        s1, s2 = encode_state(1), encode_state(2)
        assert list(p.post(s1)) == [s2]
        assert list(p.post(s2)) == []

    def test_provider_traversal_matches_bfs(self):
        g = random_gba(GenConfig(n=20, avg_out_degree=1.5, seed=3))
        h, descs = materialize(explicit_provider(g))
        assert sorted(decode_state(d) for d in descs) == sorted(g.reachable())
        assert h.n == len(g.reachable())

    def test_csr_keeps_order(self):
        g = gba(3, [(0, 2), (0, 1), (2, 0)])
        assert g.csr() == ([0, 2, 2, 3], [2, 1, 0])


class TestSCC:
    def test_single_state(self):
        assert [c.nontrivial for c in scc_decompose(gba(1, []))] == [False]
        assert [c.nontrivial for c in scc_decompose(gba(1, [(0, 0)]))] == [True]

    def test_two_triangles(self):
        edges = [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]
        comps = scc_decompose(gba(6, edges))
        assert [set(c.states) for c in comps] == [{0, 1, 2}, {3, 4, 5}]
        assert all(c.nontrivial for c in comps)

    def test_unreachable_states_skipped(self):
        comps = scc_decompose(gba(3, [(0, 0), (1, 2)]))
        assert [c.states for c in comps] == [(0,)]

    @settings(max_examples=150, deadline=None)
    @given(gbas(max_n=14, max_k=1))
    def test_against_transitive_closure(self, g):
        reach = closure(g)
        comps = scc_decompose(g)
        seen = [s for c in comps for s in c.states]
        assert sorted(seen) == sorted(g.reachable())
        index = {s: i for i, c in enumerate(comps) for s in c.states}
        for a, b in itertools.product(seen, repeat=2):
            mutual = b in reach[a] and a in reach[b]
            assert mutual == (index[a] == index[b])
            # topological: a reaches b only if b's component is not earlier
            if b in reach[a]:
                assert index[a] <= index[b]
        for c in comps:
            s = c.states[0]
            assert c.nontrivial == (len(c.states) > 1 or s in g.succ[s])


class TestWeak:
    def test_examples(self):
        assert is_weak(gba(2, [(0, 1), (1, 0)], {0: 1, 1: 1}))
        assert not is_weak(gba(2, [(0, 1), (1, 0)], {0: 1}))

    def test_contract(self):
        with pytest.raises(ContractError):
            is_weak(gba(1, [], k=2))

    def test_weak_random(self):
        for seed in range(100):
            assert is_weak(weak_random(GenConfig(n=15, avg_out_degree=2, seed=seed, acc_density=0.4)))

    @settings(max_examples=100, deadline=None)
    @given(gbas(max_n=10, k=1))
    def test_weak_loops_stay_on_one_side(self, g):
        if not is_weak(g):
            return
        for cyc in simple_cycles(g, g.reachable()):
            flags = {g.acc[s] & 1 for s in cyc}
            assert len(flags) == 1


class TestDegeneralize:
    def test_size(self):
        g = gba(3, [(0, 1), (1, 2), (2, 0)], {0: 1, 1: 2}, k=2)
        assert degeneralize(g).n == 6

    def test_k1_identity(self):
        g = random_gba(GenConfig(n=12, seed=4))
        d = degeneralize(g)
        assert (d.n, d.init, d.succ, d.acc, d.k) == (g.n, g.init, g.succ, g.acc, 1)

    def test_k0_all_accepting(self):
        d = degeneralize(gba(2, [(0, 1), (1, 0)], k=0))
        assert d.k == 1 and d.acc == [1, 1]
        assert oracle_emptiness(d).is_counterexample

    def test_preserves_emptiness(self):
        rng = random.Random(11)
        for seed in range(500):
            g = random_gba(GenConfig(n=rng.randint(1, 20), k=rng.randint(1, 3),
                                     avg_out_degree=rng.uniform(0.8, 2.5),
                                     acc_density=rng.uniform(0.1, 0.6), seed=seed))
            assert oracle_emptiness(g).kind == oracle_emptiness(degeneralize(g)).kind


def test_verdict_shape():
    v = Verdict.counterexample([b"a"], [b"b"])
    assert v.is_counterexample and not v.is_empty
    assert Verdict.empty() == Verdict.empty(flags=("x",))
    with pytest.raises(ValueError):
        Verdict.counterexample([], [])
    assert v.to_json() == {"kind": "counterexample", "prefix": ["61"], "loop": ["62"]}
