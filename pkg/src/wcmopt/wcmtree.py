"""Unlabeled search tree over simultaneously-unsatisfiable degree-2 CNs.

Each tree node is a degree-2 CN; a root-to-node path is an ordered set of
degree-2 CNs that can be unsatisfied together while the object keeps its
class.  Leaves (plus the always-removed degree-1 rows) yield the weight
consistency matrices (WCMs); deduplicating the leaf row-sets gives the
minimum matrix family the removal step has to operate on.  The counting
functions evaluate that family's size directly from the tree profile so
formula and construction can be cross-checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Iterator

from .config import (
    Configuration,
    ConfigurationError,
    classify_unlabeled,
    cn_flippable_partners,
    compute_b_o_ut,
    compute_b_ut,
)
from .gflinalg import GfMatrix


class TreeError(Exception):
    pass


class WrongTreeShapeError(TreeError):
    pass


class USymmetryViolationError(TreeError):
    pass


@dataclass(frozen=True)
class UnlabeledTree:
    """Materialized tree: child CN lists keyed by the ordered path from the root."""

    mode: str
    loop_max: int
    children: dict[tuple[int, ...], tuple[int, ...]]
    b_et: int
    b_st: int

    def u(self, path: tuple[int, ...]) -> int:
        return len(self.children.get(path, ()))

    @property
    def u0(self) -> int:
        return self.u(())

    def paths(self) -> Iterator[tuple[int, ...]]:
        """All node paths, root first, in deterministic DFS order."""
        stack = [()]
        while stack:
            path = stack.pop()
            yield path
            for child in reversed(self.children.get(path, ())):
                stack.append(path + (child,))

    def leaves(self) -> list[tuple[int, ...]]:
        return [p for p in self.paths() if not self.children.get(p)]

    def nodes_at_level(self, level: int) -> list[tuple[int, ...]]:
        return [p for p in self.paths() if len(p) == level]

    def level_node_counts(self) -> list[int]:
        counts = [0] * (self.b_et + 1)
        for p in self.paths():
            counts[len(p)] += 1
        return counts

    def u_profile(self) -> tuple[int, ...] | None:
        """Per-level child count when it is uniform across the level, else None."""
        profile = []
        for level in range(self.b_et):
            us = {self.u(p) for p in self.nodes_at_level(level)}
            if len(us) != 1:
                return None
            profile.append(us.pop())
        return tuple(profile)


def build_tree(
    c: Configuration, mode: str = "gast", depth_cap: int | None = None
) -> UnlabeledTree:
    """Construct the unlabeled tree for a configuration.

    Children are generated in ascending CN-index order for determinism.  The
    recursion depth is capped at the degree bound for the mode (or at
    ``depth_cap`` when a subclass customization narrows the family further);
    b_et is the deepest level attained, b_st the shallowest leaf depth.
    """
    topo = classify_unlabeled(c)
    if mode == "gast":
        if not topo.is_unlabeled_gast:
            raise ConfigurationError("configuration is not an unlabeled GAST")
        loop_max = topo.b_ut
    elif mode == "ost":
        if not topo.is_unlabeled_ost:
            raise ConfigurationError("configuration is not an unlabeled OST")
        loop_max = compute_b_o_ut(c)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    capped = depth_cap is not None
    if capped:
        loop_max = min(loop_max, max(0, depth_cap))

    children: dict[tuple[int, ...], tuple[int, ...]] = {}
    b_et = 0
    leaf_depths: list[int] = []

    def grow(path: tuple[int, ...]) -> None:
        nonlocal b_et
        depth = len(path)
        b_et = max(b_et, depth)
        if depth >= loop_max:
            if not capped and cn_flippable_partners(c, path, mode=mode):
                # the degree bound guarantees no partner survives this deep
                raise TreeError(
                    f"flippable partner beyond the degree bound at path {path}"
                )
            leaf_depths.append(depth)
            return
        partners = sorted(cn_flippable_partners(c, path, mode=mode))
        if not partners:
            leaf_depths.append(depth)
            return
        children[path] = tuple(partners)
        for cn in partners:
            grow(path + (cn,))

    grow(())
    b_st = min(leaf_depths)
    return UnlabeledTree(mode=mode, loop_max=loop_max, children=children, b_et=b_et, b_st=b_st)


def depth_cap_for_mode(c: Configuration, mode: str) -> int | None:
    """Tree depth cap for the subclass customizations.

    'eas' restricts the family to b = d1 (no degree-2 CN ever unsatisfied);
    'bast' caps total unsatisfied CNs at floor(a*g/2).  Plain 'gast'/'ost'
    return None (the natural bound applies).
    """
    if mode == "eas":
        return 0
    if mode == "bast":
        g = (c.gamma - 1) // 2
        return max(0, (c.num_vns * g) // 2 - c.d1)
    return None


@dataclass(frozen=True)
class WcmRecord:
    """One consistency matrix: the rows removed from A, and what remains."""

    removed_rows: tuple[int, ...]   # sorted CN indices: degree-1 rows plus the group
    deg2_group: tuple[int, ...]     # sorted degree-2 part only
    matrix: GfMatrix


@dataclass(frozen=True)
class WcmSet:
    wcms: tuple[WcmRecord, ...]
    t: int
    t_prime: int
    kind: str
    b_st: int
    b_et: int

    def rebuilt(self, c: Configuration) -> "WcmSet":
        """Same removal groups re-extracted from a re-weighted configuration."""
        a = c.adjacency()
        new = tuple(
            WcmRecord(w.removed_rows, w.deg2_group, a.drop_rows(w.removed_rows))
            for w in self.wcms
        )
        return WcmSet(new, self.t, self.t_prime, self.kind, self.b_st, self.b_et)


def extract_wcms(c: Configuration, tree: UnlabeledTree) -> WcmSet:
    """Deduplicate leaf row-groups into the minimum consistency-matrix family.

    Every leaf removes its path's degree-2 CNs plus all degree-1 CNs from the
    adjacency matrix; two leaves whose paths permute the same CN set collapse
    to one record.  Records are ordered lexicographically by their sorted
    degree-2 group so indices are stable across runs.
    """
    a = c.adjacency()
    o_rows = tuple(sorted(c.deg1_cns))
    groups = {tuple(sorted(path)) for path in tree.leaves()}
    records = []
    for group in sorted(groups):
        removed = tuple(sorted(set(group) | set(o_rows)))
        records.append(WcmRecord(removed, group, a.drop_rows(removed)))
    t_prime, _ = count_suboptimal(tree)
    return WcmSet(
        wcms=tuple(records),
        t=len(records),
        t_prime=t_prime,
        kind=tree.mode,
        b_st=tree.b_st,
        b_et=tree.b_et,
    )


def count_wcms_general(tree: UnlabeledTree) -> int:
    """Distinct-matrix count evaluated from the tree profile.

    Leaves at depth k each appear k! times (one per ordering of the same CN
    set), so the distinct count is the leaf count per depth divided by k!,
    summed over depths.  A childless root means the single matrix that drops
    only the degree-1 rows.
    """
    if tree.b_et == 0:
        return 1
    per_depth: dict[int, int] = {}
    for leaf in tree.leaves():
        per_depth[len(leaf)] = per_depth.get(len(leaf), 0) + 1
    total = 0
    for depth, count in per_depth.items():
        if count % factorial(depth) != 0:
            raise TreeError(
                f"leaf count {count} at depth {depth} is not divisible by {depth}!"
            )
        total += count // factorial(depth)
    return total


def count_wcms_same_size(tree: UnlabeledTree) -> int:
    """Count for trees whose leaves all sit at the deepest level."""
    depths = {len(p) for p in tree.leaves()}
    if depths != {tree.b_et}:
        raise WrongTreeShapeError(
            f"leaves at depths {sorted(depths)}; same-size form needs all at {tree.b_et}"
        )
    if tree.b_et == 0:
        return 1
    full = len(tree.nodes_at_level(tree.b_et))
    return full // factorial(tree.b_et)


def count_wcms_u_symmetric(u_profile: "list[int] | tuple[int, ...]") -> int:
    """Closed form for uniform per-level child counts: prod(u)/b_et!."""
    profile = tuple(u_profile)
    if not profile or any(u <= 0 for u in profile):
        raise USymmetryViolationError("profile must be positive")
    for earlier, later in zip(profile, profile[1:]):
        if later >= earlier:
            raise USymmetryViolationError("profile must be strictly decreasing")
    num = 1
    for u in profile:
        num *= u
    denom = factorial(len(profile))
    if num % denom != 0:
        raise USymmetryViolationError(
            f"product {num} not divisible by {len(profile)}!; profile is not u-symmetric"
        )
    return num // denom


def count_suboptimal(tree: UnlabeledTree) -> tuple[int, int]:
    """Size of the full distinct-submatrix family, and the saving over WCMs.

    Every tree node (the root included) is linked to one matrix; level-j node
    counts divide by j! to deduplicate orderings, and the root contributes
    the drop-degree-1-rows-only matrix.  The reduction is that total minus
    the WCM count.
    """
    counts = tree.level_node_counts()
    t_prime = 1
    for level in range(1, tree.b_et + 1):
        n = counts[level]
        if n % factorial(level) != 0:
            raise TreeError(
                f"node count {n} at level {level} is not divisible by {level}!"
            )
        t_prime += n // factorial(level)
    t = count_wcms_general(tree)
    return t_prime, t_prime - t


def b_max(c: Configuration, tree: UnlabeledTree) -> int:
    """Largest unsatisfied-CN count over the family: d1 + b_et."""
    return c.d1 + tree.b_et


def z_family(c: Configuration, tree: UnlabeledTree) -> tuple[tuple[int, ...], ...]:
    """Parameter tuples (a, b', d1, d2, d3) for d1 <= b' <= b_max."""
    top = b_max(c, tree)
    return tuple(
        (c.num_vns, b, c.d1, c.d2, c.d3) for b in range(c.d1, top + 1)
    )
