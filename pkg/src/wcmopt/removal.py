"""Labeled-object analysis and removal.

Membership of a labeled configuration in its removal family is certified by
the consistency matrices: the object is present exactly when some matrix
still has a full-support vector in its null space.  Removal searches for
the smallest set of degree-2 edge re-weightings that breaks every matrix at
once, and the full-code optimizer replays that per object while protecting
earlier removals that share edges.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field as dataclass_field, replace
from typing import Callable, Iterator, Mapping, Sequence

from .config import (
    CodeGraph,
    Configuration,
    classify_unlabeled,
)
from .gflinalg import (
    DEFAULT_SUPPORT_CAP,
    GfMatrix,
    has_full_support_vector,
    mat_vec,
    null_space,
    rank,
)
from .wcmtree import WcmSet, build_tree, depth_cap_for_mode, extract_wcms

DEFAULT_ORACLE_CAP = 10_000_000
DEFAULT_EXTRA_CHANGES = 2


class RemovalError(Exception):
    pass


class InvalidValuesError(RemovalError):
    pass


class OracleTooLargeError(RemovalError):
    pass


class NoCandidateError(RemovalError):
    """No degree-2 CN is incident to any edge-selection VN."""


@dataclass(frozen=True)
class WcmCondition:
    """Null-space verdict for one consistency matrix."""

    removed_rows: tuple[int, ...]
    deg2_group: tuple[int, ...]
    broken: bool
    p: int
    witness: tuple[int, ...] | None
    delta: int
    component_dims: tuple[int, ...]
    basis: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class WeightConditionReport:
    records: tuple[WcmCondition, ...]

    @property
    def all_broken(self) -> bool:
        return all(r.broken for r in self.records)

    def unbroken_indices(self) -> tuple[int, ...]:
        """1-based positions of matrices whose conditions still hold."""
        return tuple(i + 1 for i, r in enumerate(self.records) if not r.broken)


def _vn_components(c: Configuration, kept_rows: Sequence[int]) -> list[list[int]]:
    """Connected components over all VNs, linked through the kept CN rows."""
    parent = list(range(c.num_vns))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for r in kept_rows:
        vns = [v for v, _ in c.cn_neighbors[r]]
        for v in vns[1:]:
            ra, rb = find(vns[0]), find(v)
            if ra != rb:
                parent[rb] = ra
    groups: dict[int, list[int]] = {}
    for v in range(c.num_vns):
        groups.setdefault(find(v), []).append(v)
    return [sorted(g) for g in sorted(groups.values())]


def evaluate_weight_conditions(
    c: Configuration, w: WcmSet, support_cap: int = DEFAULT_SUPPORT_CAP
) -> WeightConditionReport:
    """Null space, full-support verdict and component split for every matrix.

    A matrix is broken when no combination of its null-space basis has full
    support.  The component split of the residual graph (all VNs plus the
    kept CNs) is computed alongside: the null-space dimension always equals
    the sum of per-component dimensions, and for an unbroken matrix every
    component contributes at least 1.
    """
    records = []
    for rec in w.wcms:
        kept = [r for r in range(c.num_cns) if r not in set(rec.removed_rows)]
        ns = null_space(rec.matrix)
        found, witness = has_full_support_vector(ns, support_cap)
        comps = _vn_components(c, kept)
        dims = []
        for comp in comps:
            comp_set = set(comp)
            rows = [r for r in kept if c.cn_neighbors[r][0][0] in comp_set]
            comp_matrix = _restrict(c, rows, comp)
            dims.append(len(comp) - rank(comp_matrix))
        if sum(dims) != ns.dimension:
            raise AssertionError(
                f"component dimensions {dims} do not sum to {ns.dimension}"
            )
        records.append(
            WcmCondition(
                removed_rows=rec.removed_rows,
                deg2_group=rec.deg2_group,
                broken=not found,
                p=ns.dimension,
                witness=witness,
                delta=len(comps),
                component_dims=tuple(dims),
                basis=ns.basis_vectors,
            )
        )
    return WeightConditionReport(tuple(records))


def _restrict(c: Configuration, rows: Sequence[int], cols: Sequence[int]) -> GfMatrix:
    colpos = {v: i for i, v in enumerate(cols)}
    data = []
    for r in rows:
        row = [0] * len(cols)
        for v, wt in c.cn_neighbors[r]:
            row[colpos[v]] = wt
        data.append(row)
    if not data:
        return GfMatrix(0, len(cols), (), c.field)
    return GfMatrix.from_rows(data, c.field)


def is_in_Z(
    c: Configuration, w: WcmSet, support_cap: int = DEFAULT_SUPPORT_CAP
) -> bool:
    """Family membership: true iff some matrix has unbroken conditions."""
    for rec in w.wcms:
        ns = null_space(rec.matrix)
        found, _ = has_full_support_vector(ns, support_cap)
        if found:
            return True
    return False


def compute_b_for_values(
    c: Configuration, values: Sequence[int]
) -> tuple[int, int, tuple[int, ...]]:
    """Unsatisfied-CN count, its degree-2 part, and the unsatisfied index set."""
    if len(values) != c.num_vns:
        raise InvalidValuesError(f"expected {c.num_vns} values, got {len(values)}")
    if any(v == 0 for v in values):
        raise InvalidValuesError("all VN values must be nonzero")
    syndromes = mat_vec(c.adjacency(), values)
    unsat = tuple(i for i, s in enumerate(syndromes) if s != 0)
    b2 = sum(1 for i in unsat if i in c.deg2_cns)
    return len(unsat), b2, unsat


@dataclass(frozen=True)
class OracleResult:
    is_member: bool
    smallest_b: int | None
    witness: tuple[int, ...] | None


def _assignments(c: Configuration, cap: int) -> Iterator[tuple[int, ...]]:
    total = (c.field.q - 1) ** c.num_vns
    if total > cap:
        raise OracleTooLargeError(
            f"(q-1)^a = {total} assignments exceeds oracle cap {cap}"
        )
    return itertools.product(range(1, c.field.q), repeat=c.num_vns)


def _majorities(c: Configuration, unsat: set[int]) -> tuple[bool, bool, bool]:
    """(strict everywhere, weak everywhere, equality somewhere) per-VN verdicts."""
    strict = True
    weak = True
    any_equal = False
    for vn in range(c.num_vns):
        u = sum(1 for cn, _ in c.vn_neighbors[vn] if cn in unsat)
        if 2 * u >= c.gamma:
            strict = False
        if 2 * u > c.gamma:
            weak = False
        if 2 * u == c.gamma:
            any_equal = True
    return strict, weak, any_equal


def oracle_is_gas(
    c: Configuration, kind: str = "gas", cap: int = DEFAULT_ORACLE_CAP
) -> OracleResult:
    """Exhaustive ground truth over all nonzero value assignments.

    Scans every (q-1)^a assignment, checks the per-VN majority condition
    (strict for 'gas', weak with at least one equality for 'os'), and
    reports the smallest unsatisfied count attained together with a witness.
    Configurations admitting several b values are identified by the
    smallest.
    """
    if kind not in ("gas", "os"):
        raise ValueError(f"unknown oracle kind {kind!r}")
    adjacency = c.adjacency()
    best_b: int | None = None
    best_witness: tuple[int, ...] | None = None
    for values in _assignments(c, cap):
        syndromes = mat_vec(adjacency, values)
        unsat = {i for i, s in enumerate(syndromes) if s != 0}
        strict, weak, any_equal = _majorities(c, unsat)
        ok = strict if kind == "gas" else (weak and any_equal)
        if ok and (best_b is None or len(unsat) < best_b):
            best_b = len(unsat)
            best_witness = values
    return OracleResult(best_b is not None, best_b, best_witness)


def oracle_in_family(
    c: Configuration, b_cap: int, kind: str = "gast", cap: int = DEFAULT_ORACLE_CAP
) -> OracleResult:
    """Structural family membership checked exhaustively.

    'gast': some assignment satisfies the strict per-VN majorities with all
    unsatisfied CNs of degree <= 2 and at most b_cap of them.  'ost': the
    same with weak majorities (the family deliberately spans both shapes, so
    equality is permitted but not required).
    """
    if kind not in ("gast", "ost"):
        raise ValueError(f"unknown family kind {kind!r}")
    adjacency = c.adjacency()
    best_b: int | None = None
    best_witness: tuple[int, ...] | None = None
    for values in _assignments(c, cap):
        syndromes = mat_vec(adjacency, values)
        unsat = {i for i, s in enumerate(syndromes) if s != 0}
        if len(unsat) > b_cap:
            continue
        if any(i in c.high_cns for i in unsat):
            continue
        strict, weak, _ = _majorities(c, unsat)
        ok = strict if kind == "gast" else weak
        if ok and (best_b is None or len(unsat) < best_b):
            best_b = len(unsat)
            best_witness = values
    return OracleResult(best_b is not None, best_b, best_witness)


def compute_e_min(
    c: Configuration,
    report: WeightConditionReport | None = None,
    kind: str = "gast",
    oracle_cap: int = DEFAULT_ORACLE_CAP,
) -> tuple[int, int, bool]:
    """Minimum edge-change count and its topological bound.

    For the strict-majority family the minimum is g - b_vn_max + 1 with
    b_vn_max taken from the per-VN unsatisfied counts of the oracle witness
    at the smallest b; when the oracle is infeasible the always-available
    bound g - d1_vn_max + 1 doubles as the minimum estimate (third return
    value is False then).  Oscillating objects always need exactly one
    change; their bound uses gamma/2 in place of g.
    """
    d1_vn_max = max(c.vn_deg1_count(v) for v in range(c.num_vns))
    if kind == "ost":
        bound = c.gamma // 2 - d1_vn_max + 1
        return 1, bound, True
    g = (c.gamma - 1) // 2
    bound = g - d1_vn_max + 1
    try:
        oracle = oracle_is_gas(c, "gas", cap=oracle_cap)
    except OracleTooLargeError:
        return bound, bound, False
    if not oracle.is_member or oracle.witness is None:
        return bound, bound, False
    _, _, unsat = compute_b_for_values(c, oracle.witness)
    unsat_set = set(unsat)
    b_vn_max = max(
        sum(1 for cn, _ in c.vn_neighbors[v] if cn in unsat_set)
        for v in range(c.num_vns)
    )
    return g - b_vn_max + 1, bound, True


def select_candidate_edges(
    c: Configuration,
    e_bound: int,
    kind: str = "gast",
    max_size: int | None = None,
    min_size: int = 1,
) -> Iterator[tuple[int, tuple[tuple[int, int], ...]]]:
    """Yield (vn, edge set) candidates in deterministic order.

    Selection follows the maximum-degree-1 rule: the VNs attaining the
    largest number of degree-1 neighbors come first (ascending index), and
    for each the subsets of its degree-2-CN edges are emitted smallest
    first, one edge per CN.  Edges on degree->2 CNs are never candidates.
    For oscillating objects the same rule lands on the topologically
    oscillating VNs automatically, since they attain the degree-1 maximum.
    """
    del kind  # same selection rule for both families
    top = max_size if max_size is not None else e_bound
    d1_counts = [c.vn_deg1_count(v) for v in range(c.num_vns)]
    d1_max = max(d1_counts)
    maximal_vns = [v for v, cnt in enumerate(d1_counts) if cnt == d1_max]
    per_vn_edges = {
        v: [
            (cn, v)
            for cn, _ in sorted(c.vn_neighbors[v])
            if cn in c.deg2_cns
        ]
        for v in maximal_vns
    }
    if all(not edges for edges in per_vn_edges.values()):
        raise NoCandidateError(
            "no degree-2 CN incident to any maximal degree-1 VN"
        )
    for v in maximal_vns:
        for size in range(max(1, min_size), top + 1):
            for combo in itertools.combinations(per_vn_edges[v], size):
                yield v, combo


@dataclass(frozen=True)
class RemovalPlan:
    object_id: str
    kind: str
    result: str  # removed | unremovable | not_in_z
    e_min: int
    e_bound: int
    selected_vn: int | None
    changes: tuple[tuple[int, int, int, int], ...]  # (cn, vn, old, new)
    candidates_tried: int = 0
    protected_checks: int = 0
    protected_rejections: int = 0


def remove_object(
    c: Configuration,
    w: WcmSet,
    protected_ok: Callable[[Mapping[tuple[int, int], int]], bool] | None = None,
    *,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    extra_changes: int = DEFAULT_EXTRA_CHANGES,
    object_id: str = "",
) -> RemovalPlan:
    """Search degree-2 edge re-weightings that break every matrix at once.

    Candidate edge sets and replacement weights are tried in a fixed order
    (ascending VN, CN, then integer weight encoding, old value skipped); the
    first assignment that breaks all matrices and keeps every protected
    object out of its family wins.  Set sizes escalate to the topological
    bound and then ``extra_changes`` beyond it before the object is declared
    unremovable.
    """
    kind = "ost" if w.kind == "ost" else "gast"
    report = evaluate_weight_conditions(c, w, support_cap)
    if report.all_broken:
        g = c.gamma // 2 if kind == "ost" else (c.gamma - 1) // 2
        bound = g - max(c.vn_deg1_count(v) for v in range(c.num_vns)) + 1
        return RemovalPlan(object_id, kind, "not_in_z", 0, bound, None, ())
    e_min, e_bound, exact = compute_e_min(c, report, kind, oracle_cap)
    tried = 0
    prot_checks = 0
    prot_rejections = 0
    start = e_min if exact else 1
    max_size = e_bound + extra_changes
    try:
        candidates = list(
            select_candidate_edges(c, e_bound, kind, max_size=max_size, min_size=start)
        )
    except NoCandidateError:
        return RemovalPlan(
            object_id, kind, "unremovable", e_min, e_bound, None, (), tried,
            prot_checks, prot_rejections,
        )
    for vn, edge_set in candidates:
        old = {edge: c.weight_of(*edge) for edge in edge_set}
        options = [
            [wt for wt in range(1, c.field.q) if wt != old[edge]]
            for edge in edge_set
        ]
        for combo in itertools.product(*options):
            tried += 1
            changes = dict(zip(edge_set, combo))
            candidate = c.with_weights(changes)
            rebuilt = w.rebuilt(candidate)
            rep = evaluate_weight_conditions(candidate, rebuilt, support_cap)
            if not rep.all_broken:
                continue
            if protected_ok is not None:
                prot_checks += 1
                if not protected_ok(changes):
                    prot_rejections += 1
                    continue
            if len(changes) > e_bound:
                warnings.warn(
                    f"removal of {object_id or 'object'} needed {len(changes)} changes, "
                    f"beyond the topological bound {e_bound}",
                    stacklevel=2,
                )
            return RemovalPlan(
                object_id,
                kind,
                "removed",
                e_min,
                e_bound,
                vn,
                tuple((cn, v, old[(cn, v)], new) for (cn, v), new in changes.items()),
                tried,
                prot_checks,
                prot_rejections,
            )
    return RemovalPlan(
        object_id, kind, "unremovable", e_min, e_bound, None, (), tried,
        prot_checks, prot_rejections,
    )


@dataclass(frozen=True)
class Target:
    """One object instance in the full graph, as a VN-id subset."""

    vn_ids: tuple[int, ...]  # 0-based column indices, sorted
    kind: str = "gast"
    expected_params: tuple[int, ...] | None = None

    @property
    def object_id(self) -> str:
        return ",".join(str(v + 1) for v in self.vn_ids)


@dataclass
class _ProtectedEntry:
    object_id: str
    kind: str
    vn_ids: tuple[int, ...]
    removal_groups: tuple[tuple[int, ...], ...]  # graph CN row ids
    edge_keys: frozenset[tuple[int, int]]


@dataclass
class OptimizationReport:
    """Bookkeeping of a full-code run.

    ``processed`` holds the plans of objects now out of their family (P);
    ``unremovable`` the ids of objects the search gave up on (X).  The two
    are disjoint; ``plan_log`` keeps every plan in processing order for
    reporting, failures included.
    """

    processed: list[RemovalPlan] = dataclass_field(default_factory=list)
    unremovable: list[str] = dataclass_field(default_factory=list)
    plan_log: list[RemovalPlan] = dataclass_field(default_factory=list)
    skipped: list[str] = dataclass_field(default_factory=list)
    changes: list[tuple[int, int, int, int]] = dataclass_field(default_factory=list)
    protected_checks: int = 0
    protected_rejections: int = 0
    reverified: list[str] = dataclass_field(default_factory=list)

    @property
    def total_changes(self) -> int:
        return len(self.changes)


def _graph_protected_ok(
    graph: CodeGraph,
    registry: list[_ProtectedEntry],
    changes_graph: Mapping[tuple[int, int], int],
    report: OptimizationReport,
    support_cap: int,
) -> bool:
    """Re-verify protected objects that share at least one changed edge."""
    touched = set(changes_graph)
    affected = [e for e in registry if e.edge_keys & touched]
    if not affected:
        return True
    tentative = graph.apply_changes(changes_graph)
    for entry in affected:
        report.protected_checks += 1
        cfg = tentative.induce(entry.vn_ids)
        assert cfg.cn_ids is not None
        row_of = {cn_id: i for i, cn_id in enumerate(cfg.cn_ids)}
        adjacency = cfg.adjacency()
        for group in entry.removal_groups:
            removed = [row_of[g] for g in group]
            matrix = adjacency.drop_rows(removed)
            found, _ = has_full_support_vector(null_space(matrix), support_cap)
            if found:
                report.protected_rejections += 1
                return False
    return True


def optimize_code(
    graph: CodeGraph,
    targets: Sequence[Target],
    phases: str = "gast",
    *,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    extra_changes: int = DEFAULT_EXTRA_CHANGES,
) -> tuple[CodeGraph, OptimizationReport]:
    """Remove target objects from the full graph, smallest first.

    Phase 1 processes the strict-majority targets; with ``phases='gast+ost'``
    and an even column weight a second phase processes oscillating targets,
    whose family check spans both shapes so no oscillating object is ever
    converted into the strict kind.  Edge changes are written back between
    objects, and every candidate change set touching an earlier removal's
    edges re-verifies that removal before being accepted.
    """
    if phases not in ("gast", "gast+ost"):
        raise ValueError(f"unknown phases {phases!r}")
    report = OptimizationReport()
    registry: list[_ProtectedEntry] = []
    phase_kinds = ["gast"]
    if phases == "gast+ost":
        if graph.gamma % 2 == 0:
            phase_kinds.append("ost")
        else:
            warnings.warn("oscillating phase skipped: column weight is odd")
    elif any(t.kind == "ost" for t in targets):
        warnings.warn("oscillating targets present but phases='gast'; they are ignored")
    current = graph
    for phase_kind in phase_kinds:
        batch = sorted(
            (t for t in targets if t.kind == phase_kind),
            key=lambda t: (len(t.vn_ids), t.vn_ids),
        )
        for target in batch:
            cfg = current.induce(target.vn_ids)
            topo = classify_unlabeled(cfg)
            ok = topo.is_unlabeled_gast if phase_kind == "gast" else topo.is_unlabeled_ost
            if not ok:
                report.skipped.append(target.object_id)
                continue
            tree = build_tree(cfg, mode=phase_kind, depth_cap=depth_cap_for_mode(cfg, phase_kind))
            wcms = extract_wcms(cfg, tree)
            assert cfg.cn_ids is not None and cfg.vn_ids is not None
            cn_ids, vn_ids = cfg.cn_ids, cfg.vn_ids

            def to_graph(changes: Mapping[tuple[int, int], int]) -> dict[tuple[int, int], int]:
                return {
                    (cn_ids[cn], vn_ids[vn]): wt for (cn, vn), wt in changes.items()
                }

            def protected_ok(changes: Mapping[tuple[int, int], int]) -> bool:
                return _graph_protected_ok(
                    current, registry, to_graph(changes), report, support_cap
                )

            plan = remove_object(
                cfg,
                wcms,
                protected_ok=protected_ok,
                support_cap=support_cap,
                oracle_cap=oracle_cap,
                extra_changes=extra_changes,
                object_id=target.object_id,
            )
            plan = replace(
                plan,
                changes=tuple(
                    (cn_ids[cn], vn_ids[vn], old_w, new_w)
                    for cn, vn, old_w, new_w in plan.changes
                ),
                selected_vn=vn_ids[plan.selected_vn] if plan.selected_vn is not None else None,
            )
            report.plan_log.append(plan)
            if plan.result == "unremovable":
                report.unremovable.append(target.object_id)
                continue
            if plan.changes:
                graph_changes = {
                    (cn, vn): new for cn, vn, _, new in plan.changes
                }
                current = current.apply_changes(graph_changes)
                report.changes.extend(plan.changes)
            report.processed.append(plan)
            edge_keys = frozenset(
                (cn_ids[cn], vn_ids[vn])
                for cn in range(cfg.num_cns)
                for vn, _ in cfg.cn_neighbors[cn]
            )
            registry.append(
                _ProtectedEntry(
                    object_id=target.object_id,
                    kind=phase_kind,
                    vn_ids=vn_ids,
                    removal_groups=tuple(
                        tuple(cn_ids[r] for r in rec.removed_rows) for rec in wcms.wcms
                    ),
                    edge_keys=edge_keys,
                )
            )
    for entry in registry:
        cfg = current.induce(entry.vn_ids)
        row_of = {cn_id: i for i, cn_id in enumerate(cfg.cn_ids or ())}
        adjacency = cfg.adjacency()
        intact = True
        for group in entry.removal_groups:
            matrix = adjacency.drop_rows([row_of[g] for g in group])
            found, _ = has_full_support_vector(null_space(matrix), support_cap)
            if found:
                intact = False
                break
        if intact:
            report.reverified.append(entry.object_id)
    return current, report
