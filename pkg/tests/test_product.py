import random

import pytest

from buchi.automata import ExplicitGBA, is_weak, materialize
from buchi.errors import FormatError
from buchi.generators import GenConfig, random_gba, weak_random
from buchi.guards import TRUE, parse_guard
from buchi.kernels import run_algorithm
from buchi.ndfs import and_check
from buchi.oracle import oracle_emptiness, validate_lasso
from buchi.product import (
    KripkeStructure,
    LabeledGBA,
    ProductProvider,
    eager_product,
    format_kripke,
    format_labeled_gba,
    parse_kripke,
    parse_labeled_gba,
    product_provider,
)
from buchi.scc_algos import ascc_check

PROPS = ["p", "q", "r"]


def random_kripke(rng, n_max=15):
    n = rng.randint(1, n_max)
    succ = [rng.sample(range(n), rng.randint(0 if rng.random() < 0.1 else 1, min(n, 3))) for _ in range(n)]
    labels = [frozenset(p for p in PROPS if rng.random() < 0.5) for _ in range(n)]
    return KripkeStructure(n, 0, succ, labels)


def random_guard(rng):
    return parse_guard(rng.choice(["true", "p", "!p", "q", "p & q", "p | !r", "!(p & q)", "r", "false"]))


def random_labeled(rng, n_max=5, k=1, weak=False):
    cfg = GenConfig(n=rng.randint(1, n_max), avg_out_degree=1.5, k=k,
                    acc_density=0.4, seed=rng.randrange(10**6))
    g = weak_random(cfg) if weak else random_gba(cfg)
    return LabeledGBA(g, [[random_guard(rng) for _ in row] for row in g.succ])


def single(props, guard, accepting=True):
    m = KripkeStructure(1, 0, [[0]], [frozenset(props)])
    a = LabeledGBA(ExplicitGBA(1, 0, [[0]], [1 if accepting else 0], 1), [[parse_guard(guard)]])
    return m, a


def test_self_loop_guard_holds():
    m, a = single({"p"}, "p")
    v, _ = ascc_check(product_provider(m, a))
    assert v.is_counterexample
    assert v.loop == (ProductProvider.encode(0, 0),)


def test_self_loop_guard_fails():
    m, a = single({"p"}, "!p")
    p = product_provider(m, a)
    assert list(p.post(p.initial())) == []
    assert ascc_check(p)[0].is_empty


def test_successor_order_m_outer_a_inner():
    m = KripkeStructure(3, 0, [[2, 1], [], []], [frozenset(), frozenset({"p"}), frozenset({"p"})])
    g = ExplicitGBA(3, 0, [[2, 1], [], []], [0, 0, 0], 1)
    p = product_provider(m, LabeledGBA(g))
    post = [ProductProvider.decode(d) for d in p.post(p.initial())]
    assert post == [(2, 2), (2, 1), (1, 2), (1, 1)]


def test_guard_reads_target_labels():
    m = KripkeStructure(2, 0, [[1], [1]], [frozenset({"p"}), frozenset()])
    m_g = ExplicitGBA(1, 0, [[0]], [1], 1)
    p = product_provider(m, LabeledGBA(m_g, [[parse_guard("p")]]))
    # the source is labelled p but the target is not, so no step exists
    assert list(p.post(p.initial())) == []


def _reachable_product(m, a):
    g, descs = materialize(product_provider(m, a))
    pairs = [ProductProvider.decode(d) for d in descs]
    return {(pairs[s], pairs[t]) for s in range(g.n) for t in g.succ[s]}, set(pairs)


def test_lazy_equals_eager():
    rng = random.Random(3)
    for _ in range(200):
        m = random_kripke(rng)
        a = random_labeled(rng, k=rng.randint(0, 2))
        lazy_edges, lazy_states = _reachable_product(m, a)
        eg, pairs = eager_product(m, a)
        reach = set(eg.reachable())
        eager_edges = {(pairs[s], pairs[t]) for s in reach for t in eg.succ[s]}
        assert lazy_states == {pairs[s] for s in reach}
        assert lazy_edges == eager_edges
        # emptiness agrees with the oracle on the materialized product
        v, _ = ascc_check(product_provider(m, a))
        assert v.kind == oracle_emptiness(eg).kind
        if v.is_counterexample:
            assert validate_lasso(product_provider(m, a), v)


def test_labels_read_only_for_expanded_states():
    rng = random.Random(5)
    for _ in range(100):
        m = random_kripke(rng)
        a = random_labeled(rng)
        p = product_provider(m, a)
        _, metrics = and_check(p)
        g, descs = materialize(product_provider(m, a))
        reached_m = {ProductProvider.decode(d)[0] for d in descs}
        allowed = {t for u in reached_m for t in m.succ[u]}
        assert p.labels_read <= allowed
        assert metrics.post_calls <= len(descs) * 2


def test_early_report_reads_few_labels():
    n = 5000
    m = KripkeStructure(n, 0, [sorted({(i + 1) % n, 0}) for i in range(n)], [frozenset({"p"})] * n)
    a = LabeledGBA(ExplicitGBA(1, 0, [[0]], [1], 1), [[TRUE]])
    p = product_provider(m, a)
    v, metrics = and_check(p)
    assert v.is_counterexample
    assert len(p.labels_read) <= metrics.distinct_states
    assert len(p.labels_read) < 10


def test_weakness_transfers_to_product():
    rng = random.Random(9)
    for _ in range(100):
        m = random_kripke(rng, n_max=10)
        a = random_labeled(rng, weak=True)
        assert is_weak(a.gba)
        g, _ = materialize(product_provider(m, a))
        assert is_weak(g)
        v, metrics = run_algorithm(product_provider(m, a), "sd")
        assert v.kind == oracle_emptiness(g).kind
        if v.is_empty:
            assert metrics.post_calls == g.n


def test_text_formats_roundtrip():
    rng = random.Random(1)
    for _ in range(50):
        m = random_kripke(rng)
        a = random_labeled(rng, k=2)
        m2 = parse_kripke(format_kripke(m))
        assert (m2.n, m2.init, m2.succ, m2.labels) == (m.n, m.init, m.succ, m.labels)
        a2 = parse_labeled_gba(format_labeled_gba(a))
        assert a2.guards == a.guards
        assert (a2.gba.succ, a2.gba.acc, a2.gba.k) == (a.gba.succ, a.gba.acc, a.gba.k)


def test_labeled_format_details():
    a = parse_labeled_gba('gba 2 1\ninit 0\nacc 1 1\nedge 0 1 "p & !q"\nedge 1 1\nedge 1 0 p\n')
    assert a.guards[0] == [parse_guard("p & !q")]
    assert a.guards[1] == [TRUE, parse_guard("p")]
    with pytest.raises(FormatError) as info:
        parse_labeled_gba('gba 1 1\ninit 0\nedge 0 0 "p &"\n')
    assert info.value.line == 3


@pytest.mark.parametrize("text", [
    "kripke 2\ninit 0\nlabel 0 true\n",
    "kripke 2\ninit 3\n",
    "kripke 2\ninit 0\nedge 0 1\nedge 0 1\n",
    "init 0\n",
    "kripke 1\n",
])
def test_kripke_errors(text):
    with pytest.raises(FormatError):
        parse_kripke(text)
