"""Equivalence and counter verification suites.

Every suite compares an engine against BruteForceReference over exhaustive or
seeded random corpora and reports mismatch counts plus the first reproducible
counterexample. The CLI's verify command and the acceptance tests both run
through these entry points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations

from .bits import has_bit, iter_bits, mask_of
from .connectivity_oracle import BruteForceReference, connected_by_set, make_oracle
from .fully_dynamic_sensitivity import build_fully_dynamic, fd_query_probed, fd_rollback, fd_update
from .generators import gnp_graph
from .graph_core import Graph, StatePartition, connected_components, dump_graph
from .incremental_sensitivity import build_incremental, incremental_query_probed, incremental_update

SUITE_NAMES = ("fully_dynamic", "incremental", "lemma_on_paths", "counters")


@dataclass
class VerifyConfig:
    mode: str = "random"  # "exhaustive" or "random"
    n_max: int = 40
    trials: int = 1000
    edge_probs: tuple[float, ...] = (0.1, 0.3, 0.6)
    batch_max: int = 6
    seed: int = 42
    oracle: str = "rebuild"


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    mismatches: int = 0
    first_counterexample: str | None = None

    def fail(self, description: str) -> None:
        self.mismatches += 1
        if self.first_counterexample is None:
            self.first_counterexample = description

    @property
    def ok(self) -> bool:
        return self.mismatches == 0


def _new_suites() -> dict[str, SuiteResult]:
    return {name: SuiteResult(name) for name in SUITE_NAMES}


def iter_all_graphs(n: int):
    """All 2^C(n,2) labeled graphs on n vertices."""
    pairs = list(combinations(range(n), 2))
    for edge_mask in range(1 << len(pairs)):
        yield Graph.from_edges(n, [pairs[i] for i in iter_bits(edge_mask)])


def iter_all_partitions(n: int):
    for off_mask in range(1 << n):
        yield StatePartition.from_off(n, iter_bits(off_mask))


def iter_batches(p: StatePartition, d_max: int):
    """All legal (deactivate, activate) batches flipping at most d_max vertices."""
    for size in range(d_max + 1):
        for flips in combinations(range(p.n), size):
            down = [v for v in flips if p.is_on(v)]
            up = [v for v in flips if not p.is_on(v)]
            yield down, up


def _instance_text(g, p, down, up) -> str:
    return f"graph file:\n{dump_graph(g, p)}deactivate={sorted(down)} activate={sorted(up)}"


def _check_fully_dynamic(g, p, s, down, up, suites, ctx) -> None:
    a = fd_update(s, down, up)
    k = len(set(up))
    expected_deletes = 1 + k + k * (k - 1) // 2
    expected_pairs = k * (k - 1) // 2
    suites["counters"].checked += 2
    if a.delete_calls != expected_deletes:
        suites["counters"].fail(f"{ctx}: delete_calls={a.delete_calls}, expected {expected_deletes}")
    if a.pair_queries != expected_pairs:
        suites["counters"].fail(f"{ctx}: pair_queries={a.pair_queries}, expected {expected_pairs}")
    active_after = (p.on_mask & ~mask_of(down)) | mask_of(up)
    ref = BruteForceReference(g, active_after)
    call_limit = 1 + 2 * k
    for u in iter_bits(active_after):
        reach = ref.reachable(u)
        for v in iter_bits(active_after):
            if v <= u:
                continue
            got, calls = fd_query_probed(s, a, u, v)
            suites["fully_dynamic"].checked += 1
            expected = has_bit(reach, v)
            if got != expected:
                suites["fully_dynamic"].fail(
                    f"{ctx}: query ({u},{v}) expected {expected}, got {got}"
                )
            suites["counters"].checked += 1
            if calls > call_limit:
                suites["counters"].fail(
                    f"{ctx}: query ({u},{v}) used {calls} oracle calls, limit {call_limit}"
                )
    fd_rollback(s, a)


def _check_incremental(g, p, idx, up, suites, ctx) -> None:
    sg = incremental_update(idx, up)
    k = len(set(up))
    suites["counters"].checked += 1
    if sg.build_probes != k * (k - 1) // 2:
        suites["counters"].fail(
            f"{ctx}: update probes={sg.build_probes}, expected {k * (k - 1) // 2}"
        )
    active_after = p.on_mask | mask_of(up)
    ref = BruteForceReference(g, active_after)
    probe_limit = 2 * k
    for u in iter_bits(active_after):
        reach = ref.reachable(u)
        for v in iter_bits(active_after):
            if v <= u:
                continue
            got, probes = incremental_query_probed(idx, sg, u, v)
            suites["incremental"].checked += 1
            expected = has_bit(reach, v)
            if got != expected:
                suites["incremental"].fail(
                    f"{ctx}: query ({u},{v}) expected {expected}, got {got}"
                )
            suites["counters"].checked += 1
            if probes > probe_limit:
                suites["counters"].fail(
                    f"{ctx}: query ({u},{v}) used {probes} probes, limit {probe_limit}"
                )


def _check_lemma(g, p, down, up, suites, ctx) -> None:
    """The path characterization: two surviving components are joined after
    activating the batch iff they are linked by a chain through it."""
    survivors = p.on_mask & ~mask_of(down)
    labeling = connected_components(g, survivors)
    if labeling.k < 2:
        return
    ref = BruteForceReference(g, survivors | mask_of(up))
    batch = sorted(set(up))
    for cu in range(labeling.k):
        u = labeling.members[cu][0]
        reach = ref.reachable(u)
        for cv in range(cu + 1, labeling.k):
            v = labeling.members[cv][0]
            got = connected_by_set(g, labeling, batch, cu, cv)
            expected = has_bit(reach, v)
            suites["lemma_on_paths"].checked += 1
            if got != expected:
                suites["lemma_on_paths"].fail(
                    f"{ctx}: components {cu},{cv} expected {expected}, got {got}"
                )


def exhaustive_suites(
    n: int = 5, batch_max: int = 3, oracle: str = "rebuild", all_activation_sizes: bool = True
) -> dict[str, SuiteResult]:
    """Every graph on n labeled vertices, every partition, every batch of at
    most batch_max flips, every active query pair.

    With all_activation_sizes the activation-only engine is additionally run
    on every activation subset, not just those within batch_max.
    """
    suites = _new_suites()
    for g in iter_all_graphs(n):
        for p in iter_all_partitions(n):
            s = build_fully_dynamic(g, p, oracle)
            idx = build_incremental(g, p)
            for down, up in iter_batches(p, batch_max):
                ctx = _instance_text(g, p, down, up)
                _check_fully_dynamic(g, p, s, down, up, suites, ctx)
                _check_lemma(g, p, down, up, suites, ctx)
                if not down:
                    _check_incremental(g, p, idx, up, suites, ctx)
            if all_activation_sizes:
                for size in range(batch_max + 1, p.n_off + 1):
                    for up in combinations(p.off_vertices, size):
                        ctx = _instance_text(g, p, [], up)
                        _check_incremental(g, p, idx, up, suites, ctx)
                        _check_lemma(g, p, [], up, suites, ctx)
    return suites


def _random_instance(rng: random.Random, cfg: VerifyConfig):
    n = rng.randint(2, cfg.n_max)
    g = gnp_graph(n, rng.choice(cfg.edge_probs), rng)
    off_prob = rng.choice((0.2, 0.4, 0.6))
    p = StatePartition.from_off(n, [v for v in range(n) if rng.random() < off_prob])
    size = rng.randint(0, min(cfg.batch_max, n))
    flips = rng.sample(range(n), size)
    down = [v for v in flips if p.is_on(v)]
    up = [v for v in flips if not p.is_on(v)]
    return g, p, down, up


def random_suites(cfg: VerifyConfig) -> dict[str, SuiteResult]:
    """Seeded random instances; the seed fully determines the stream."""
    suites = _new_suites()
    rng = random.Random(cfg.seed)
    for trial in range(cfg.trials):
        g, p, down, up = _random_instance(rng, cfg)
        s = build_fully_dynamic(g, p, cfg.oracle)
        idx = build_incremental(g, p)
        ctx = f"trial {trial}: " + _instance_text(g, p, down, up)
        _check_fully_dynamic(g, p, s, down, up, suites, ctx)
        _check_lemma(g, p, down, up, suites, ctx)
        _check_incremental(g, p, idx, up, suites, ctx)
    return suites


def oracle_conformance_suite(
    factory: str, trials: int = 500, seed: int = 2024, n_max: int = 24, batch_max: int = 6
) -> SuiteResult:
    """Any registered oracle must match the reference before a deletion
    batch, after it, and again after reset."""
    suite = SuiteResult(f"conformance[{factory}]")
    rng = random.Random(seed)
    for trial in range(trials):
        n = rng.randint(2, n_max)
        g = gnp_graph(n, rng.choice((0.1, 0.3, 0.6)), rng)
        o = make_oracle(factory, g)
        down = rng.sample(range(n), rng.randint(0, min(batch_max, n)))
        full = (1 << n) - 1

        def compare(active_mask, phase):
            ref = BruteForceReference(g, active_mask)
            for u in iter_bits(active_mask):
                reach = ref.reachable(u)
                for v in iter_bits(active_mask):
                    if v <= u:
                        continue
                    got = o.query(u, v)
                    suite.checked += 1
                    if got != has_bit(reach, v):
                        suite.fail(
                            f"trial {trial} ({phase}): query ({u},{v}) disagrees with "
                            f"reference\n{dump_graph(g, StatePartition.from_off(g.n, ()))}"
                            f"deleted={sorted(o.deleted)}"
                        )

        compare(full, "fresh")
        o.delete_batch(down)
        compare(full & ~mask_of(down), "after delete")
        o.reset()
        compare(full, "after reset")
    return suite


def rollback_suite(
    trials: int = 200, seed: int = 7, oracle: str = "rebuild", queries: int = 50, n_max: int = 24
) -> SuiteResult:
    """Update, query, roll back, re-apply the identical update: the bridge
    graph and every answer must reproduce, and match a freshly built twin."""
    suite = SuiteResult("rollback")
    rng = random.Random(seed)
    for trial in range(trials):
        cfg = VerifyConfig(n_max=n_max, batch_max=6)
        g, p, down, up = _random_instance(rng, cfg)
        active_after = (p.on_mask & ~mask_of(down)) | mask_of(up)
        alive = list(iter_bits(active_after))
        pair_picks = [
            (rng.choice(alive), rng.choice(alive)) for _ in range(queries)
        ] if alive else []

        def run(structure):
            a = fd_update(structure, down, up)
            answers = [fd_query_probed(structure, a, x, y)[0] for x, y in pair_picks]
            edges = a.supergraph.edges
            fd_rollback(structure, a)
            return edges, answers

        s = build_fully_dynamic(g, p, oracle)
        first = run(s)
        second = run(s)
        fresh = run(build_fully_dynamic(g, p, oracle))
        suite.checked += 1
        if first != second:
            suite.fail(f"trial {trial}: rerun after rollback diverged\n" + _instance_text(g, p, down, up))
        elif first != fresh:
            suite.fail(f"trial {trial}: rolled-back structure diverged from a fresh build\n"
                       + _instance_text(g, p, down, up))
    return suite
