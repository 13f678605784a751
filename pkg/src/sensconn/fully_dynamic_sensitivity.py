"""Fully dynamic engine: batches may deactivate and activate vertices.

Preprocessing wraps a decremental oracle around the base active graph and
around every one- and two-vertex augmentation of it, all sharing the base
adjacency. An update pushes the deactivations into the oracles it will
actually consult, then builds the bridge graph over the activated vertices
from pair-oracle queries. A query needs at most 1 + 2d oracle queries.

Also provides the capacity-doubling wrapper that routes an update of size d
to the smallest structure built for at least d flips.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping

from .connectivity_oracle import DecrementalOracle, make_oracle, oracle_class
from .errors import CapacityError, ContractViolation, PhaseError, QueryEndpointError
from .graph_core import AugmentedView, Graph, StatePartition, induced_augmented
from .incremental_sensitivity import SuperGraph, build_supergraph


@dataclass
class OracleHandle:
    """One oracle plus the id translation into its graph."""

    oracle: DecrementalOracle
    to_local: Mapping[int, int]
    view: object


@dataclass
class FullyDynamicStructure:
    """Oracle family for one graph and partition.

    fd_update and fd_rollback need exclusive access; fd_query calls between
    them are read-only and safe to run concurrently.
    """

    graph: Graph
    partition: StatePartition
    factory: str
    on_handle: OracleHandle
    single: dict[int, OracleHandle]  # inactive vertex -> oracle over base + that vertex
    pairs: dict[frozenset[int], OracleHandle]  # pair of inactive vertices -> oracle
    preprocess_probes: int
    session: "ActiveUpdate | None" = None

    @property
    def oracle_count(self) -> int:
        return 1 + len(self.single) + len(self.pairs)


@dataclass
class ActiveUpdate:
    """Live state of one processed batch, held until rollback."""

    deactivated: frozenset[int]
    activated: frozenset[int]
    supergraph: SuperGraph
    touched: tuple[DecrementalOracle, ...]
    delete_calls: int
    pair_queries: int


def build_fully_dynamic(
    g: Graph, p: StatePartition, oracle: str = "rebuild", d: int | None = None
) -> FullyDynamicStructure:
    """Build oracles over the base active graph and all its augmentations.

    Creates exactly 1 + n_off + n_off*(n_off-1)/2 oracles; the augmented
    graphs share the base adjacency instead of copying it.
    """
    base, base_remap = induced_augmented(g, p, ())
    on_handle = OracleHandle(make_oracle(oracle, base, d=d), base_remap.to_local, base)
    single = {}
    for u in p.off_vertices:
        view = AugmentedView(base, base_remap, g, (u,))
        single[u] = OracleHandle(make_oracle(oracle, view, d=d), view.remap.to_local, view)
    pairs = {}
    for a, b in combinations(p.off_vertices, 2):
        view = AugmentedView(base, base_remap, g, (a, b))
        pairs[frozenset((a, b))] = OracleHandle(make_oracle(oracle, view, d=d), view.remap.to_local, view)
    probes = on_handle.oracle.costs.t_p
    probes += sum(h.oracle.costs.t_p for h in single.values())
    probes += sum(h.oracle.costs.t_p for h in pairs.values())
    return FullyDynamicStructure(
        graph=g,
        partition=p,
        factory=oracle,
        on_handle=on_handle,
        single=single,
        pairs=pairs,
        preprocess_probes=probes,
    )


def fd_update(s: FullyDynamicStructure, deactivate, activate) -> ActiveUpdate:
    """Process one batch: push deletions into the touched oracles, then build
    the bridge graph over the activated vertices from pair-oracle queries.

    Oracle-call accounting: delete calls = 1 + |I| + C(|I|, 2) and pair
    queries = C(|I|, 2) where I is the activation set.
    """
    if s.session is not None:
        raise PhaseError("an update is active; roll it back before starting another")
    p = s.partition
    down = frozenset(deactivate)
    up = frozenset(activate)
    for v in down:
        if not (0 <= v < p.n and p.is_on(v)):
            raise ContractViolation(f"cannot deactivate {v}: not an active vertex")
    for v in up:
        if not (0 <= v < p.n) or p.is_on(v):
            raise ContractViolation(f"cannot activate {v}: not an inactive vertex")

    base_local = s.on_handle.to_local
    deleted_local = tuple(sorted(base_local[x] for x in down))
    # base vertices keep the same local ids in every augmented view, so one
    # translated batch serves all oracles
    touched = [s.on_handle.oracle]
    s.on_handle.oracle.delete_batch(deleted_local)
    batch = tuple(sorted(up))
    for u in batch:
        s.single[u].oracle.delete_batch(deleted_local)
        touched.append(s.single[u].oracle)
    for a, b in combinations(batch, 2):
        h = s.pairs[frozenset((a, b))]
        h.oracle.delete_batch(deleted_local)
        touched.append(h.oracle)

    def adjacent(x, y):
        h = s.pairs[frozenset((x, y))]
        return h.oracle.query(h.to_local[x], h.to_local[y])

    sg = build_supergraph(batch, adjacent)
    session = ActiveUpdate(
        deactivated=down,
        activated=up,
        supergraph=sg,
        touched=tuple(touched),
        delete_calls=len(touched),
        pair_queries=sg.build_probes,
    )
    s.session = session
    return session


def fd_query_probed(s: FullyDynamicStructure, a: ActiveUpdate, u: int, v: int) -> tuple[bool, int]:
    """Like fd_query but also returns the number of oracle queries made."""
    if s.session is not a:
        raise ContractViolation("stale update handle")
    p = s.partition
    sg = a.supergraph
    for x in (u, v):
        if not 0 <= x < p.n:
            raise QueryEndpointError(f"vertex {x} outside [0, {p.n})")
        if x in a.deactivated:
            raise QueryEndpointError(f"vertex {x} was deactivated by this update")
        if not p.is_on(x) and x not in sg.node_index:
            raise QueryEndpointError(f"vertex {x} is inactive")
    if u == v:
        return True, 0
    u_new = not p.is_on(u)
    v_new = not p.is_on(v)
    if u_new and v_new:
        return sg.component_of(u) == sg.component_of(v), 0
    calls = 0
    if not u_new and not v_new:
        calls += 1
        if s.on_handle.oracle.query(s.on_handle.to_local[u], s.on_handle.to_local[v]):
            return True, calls
        for comp in sg.components:
            hit_u = hit_v = False
            for w in comp:
                h = s.single[w]
                wl = h.to_local[w]
                if not hit_u:
                    calls += 1
                    hit_u = h.oracle.query(wl, h.to_local[u])
                if not hit_v:
                    calls += 1
                    hit_v = h.oracle.query(wl, h.to_local[v])
                if hit_u and hit_v:
                    return True, calls
        return False, calls
    # one endpoint was just activated: its batch component must reach the
    # other endpoint through some member's augmented graph
    if v_new:
        u, v = v, u
    for w in sg.components[sg.component_of(u)]:
        h = s.single[w]
        calls += 1
        if h.oracle.query(h.to_local[w], h.to_local[v]):
            return True, calls
    return False, calls


def fd_query(s: FullyDynamicStructure, a: ActiveUpdate, u: int, v: int) -> bool:
    """True iff u and v are connected after the batch behind ``a``."""
    connected, _ = fd_query_probed(s, a, u, v)
    return connected


def fd_rollback(s: FullyDynamicStructure, a: ActiveUpdate) -> None:
    """Reset every oracle the update touched and clear the session."""
    if s.session is not a:
        raise ContractViolation("stale update handle")
    for o in a.touched:
        o.reset()
    s.session = None


@dataclass
class DoublingFamily:
    """Structures for capacities 2, 4, ..., 2^l; an update of size d runs on
    the smallest sufficient capacity."""

    capacities: tuple[int, ...]
    structures: dict[int, FullyDynamicStructure] = field(repr=False)

    def level_for(self, d: int) -> int:
        for c in self.capacities:
            if d <= c:
                return c
        raise CapacityError(f"batch of size {d} exceeds the largest capacity {self.capacities[-1]}")

    def structure_for(self, d: int) -> FullyDynamicStructure:
        return self.structures[self.level_for(d)]

    def dispatch_update(self, deactivate, activate) -> tuple[int, ActiveUpdate]:
        size = len(set(deactivate)) + len(set(activate))
        cap = self.level_for(size)
        return cap, fd_update(self.structures[cap], deactivate, activate)


def build_doubling(g: Graph, p: StatePartition, d_max: int, oracle: str = "rebuild") -> DoublingFamily:
    """Build the doubling family covering batches up to size d_max.

    Capacity-independent oracle factories (both built-ins) share one
    underlying structure across all levels; d-parameterized factories get a
    structure per level.
    """
    if d_max < 1:
        raise ContractViolation(f"d_max must be at least 1, got {d_max}")
    levels = max(1, (d_max - 1).bit_length())  # smallest l >= 1 with d_max <= 2**l
    capacities = tuple(2**i for i in range(1, levels + 1))
    if oracle_class(oracle).d_dependent:
        structures = {c: build_fully_dynamic(g, p, oracle, d=c) for c in capacities}
    else:
        shared = build_fully_dynamic(g, p, oracle)
        structures = {c: shared for c in capacities}
    return DoublingFamily(capacities=capacities, structures=structures)
