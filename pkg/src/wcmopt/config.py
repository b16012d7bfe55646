"""Tanner subgraph data model and topological classification.

A Configuration is a labeled subgraph induced by a VN subset: check nodes
partitioned by in-configuration degree into O (degree 1), T (degree 2) and
H (degree > 2), every variable node carrying exactly gamma incident edges,
and all edge weights nonzero.  Classification of the unlabeled shape
(GAS/GAST/OS/OST) and the degree-bound formulas live here; anything that
depends on the actual weights lives in removal.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .gf import FieldContext
from .gflinalg import GfMatrix


class ConfigurationError(Exception):
    pass


class MalformedConfigurationError(ConfigurationError):
    pass


class NotApplicableError(ConfigurationError):
    """Requested an even-column-weight quantity on an odd-gamma code."""


class Configuration:
    """Immutable weighted Tanner subgraph with degree bookkeeping.

    CN and VN indices are 0-based here; the file parser and report emitters
    translate to the 1-based c1../v1.. convention.  Edge-weight changes
    produce new Configuration values so an optimizer can backtrack cheaply.
    """

    def __init__(
        self,
        gamma: int,
        field: FieldContext,
        num_vns: int,
        num_cns: int,
        edges: Iterable[tuple[int, int, int]],
        vn_ids: tuple[int, ...] | None = None,
        cn_ids: tuple[int, ...] | None = None,
    ):
        self.gamma = gamma
        self.field = field
        self.num_vns = num_vns
        self.num_cns = num_cns
        self.edges = tuple(sorted(edges))
        self.vn_ids = vn_ids
        self.cn_ids = cn_ids
        self._validate()
        self._index()

    def _validate(self) -> None:
        seen: set[tuple[int, int]] = set()
        vn_degree = [0] * self.num_vns
        cn_degree = [0] * self.num_cns
        for cn, vn, w in self.edges:
            if not (0 <= cn < self.num_cns and 0 <= vn < self.num_vns):
                raise MalformedConfigurationError(f"edge ({cn},{vn}) out of range")
            if w == 0:
                raise MalformedConfigurationError(f"edge ({cn},{vn}) has zero weight")
            self.field.validate(w)
            if (cn, vn) in seen:
                raise MalformedConfigurationError(f"duplicate edge ({cn},{vn})")
            seen.add((cn, vn))
            vn_degree[vn] += 1
            cn_degree[cn] += 1
        for vn, deg in enumerate(vn_degree):
            if deg != self.gamma:
                raise MalformedConfigurationError(
                    f"VN v{vn + 1} has degree {deg}, column weight is {self.gamma}"
                )
        for cn, deg in enumerate(cn_degree):
            if deg == 0:
                raise MalformedConfigurationError(f"CN c{cn + 1} has no edges")
        self._cn_degree = tuple(cn_degree)

    def _index(self) -> None:
        cn_nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.num_cns)]
        vn_nbrs: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vns)]
        for cn, vn, w in self.edges:
            cn_nbrs[cn].append((vn, w))
            vn_nbrs[vn].append((cn, w))
        self.cn_neighbors = tuple(tuple(x) for x in cn_nbrs)
        self.vn_neighbors = tuple(tuple(x) for x in vn_nbrs)
        self.deg1_cns = frozenset(i for i, d in enumerate(self._cn_degree) if d == 1)
        self.deg2_cns = frozenset(i for i, d in enumerate(self._cn_degree) if d == 2)
        self.high_cns = frozenset(i for i, d in enumerate(self._cn_degree) if d > 2)
        self.d1 = len(self.deg1_cns)
        self.d2 = len(self.deg2_cns)
        self.d3 = len(self.high_cns)
        self.ell = self.num_cns

    def cn_degree(self, cn: int) -> int:
        return self._cn_degree[cn]

    def weight_of(self, cn: int, vn: int) -> int:
        for v, w in self.cn_neighbors[cn]:
            if v == vn:
                return w
        raise KeyError(f"no edge ({cn},{vn})")

    def vn_deg1_count(self, vn: int) -> int:
        return sum(1 for cn, _ in self.vn_neighbors[vn] if cn in self.deg1_cns)

    def adjacency(self) -> GfMatrix:
        rows = [[0] * self.num_vns for _ in range(self.num_cns)]
        for cn, vn, w in self.edges:
            rows[cn][vn] = w
        return GfMatrix.from_rows(rows, self.field)

    def with_weights(self, changes: Mapping[tuple[int, int], int]) -> "Configuration":
        """New configuration with the given (cn, vn) -> weight replacements."""
        for (cn, vn), w in changes.items():
            if w == 0:
                raise MalformedConfigurationError("replacement weights must be nonzero")
            self.field.validate(w)
        new_edges = [
            (cn, vn, changes.get((cn, vn), w)) for cn, vn, w in self.edges
        ]
        touched = set(changes) - {(cn, vn) for cn, vn, _ in self.edges}
        if touched:
            raise KeyError(f"changes reference missing edges: {sorted(touched)}")
        return Configuration(
            self.gamma, self.field, self.num_vns, self.num_cns, new_edges,
            vn_ids=self.vn_ids, cn_ids=self.cn_ids,
        )

    def params(self, b: int | None = None) -> tuple[int, ...]:
        """(a, d1, d2, d3), or (a, b, d1, d2, d3) when b is supplied."""
        if b is None:
            return (self.num_vns, self.d1, self.d2, self.d3)
        return (self.num_vns, b, self.d1, self.d2, self.d3)

    def __repr__(self) -> str:
        return (
            f"Configuration(a={self.num_vns}, d1={self.d1}, d2={self.d2}, "
            f"d3={self.d3}, gamma={self.gamma}, GF({self.field.q}))"
        )


@dataclass(frozen=True)
class TopoClass:
    is_unlabeled_gas: bool
    is_unlabeled_gast: bool
    is_unlabeled_os: bool
    is_unlabeled_ost: bool
    b_ut: int
    b_o_ut: int | None


def compute_b_ut(c: Configuration, warn: bool = True) -> int:
    """Upper bound on simultaneously-unsatisfiable degree-2 CNs.

    floor((a*floor((gamma-1)/2) - d1)/2); a negative operand is clamped to 0
    with a diagnostic, since no valid absorbing topology produces one.
    ``warn=False`` suppresses the diagnostic for bulk classification sweeps
    over arbitrary subsets.
    """
    g = (c.gamma - 1) // 2
    operand = c.num_vns * g - c.d1
    if operand < 0:
        if warn:
            warnings.warn(
                f"degree bound operand negative (a*g={c.num_vns * g} < d1={c.d1}); clamping to 0",
                stacklevel=2,
            )
        return 0
    return operand // 2


def compute_b_o_ut(c: Configuration, warn: bool = True) -> int:
    """Oscillating-set analogue of compute_b_ut; defined for even gamma only."""
    if c.gamma % 2 != 0:
        raise NotApplicableError("oscillating VNs require an even column weight")
    operand = c.num_vns * (c.gamma // 2) - c.d1
    if operand < 0:
        if warn:
            warnings.warn(
                f"degree bound operand negative (a*gamma/2={c.num_vns * c.gamma // 2} "
                f"< d1={c.d1}); clamping to 0",
                stacklevel=2,
            )
        return 0
    return operand // 2


def classify_unlabeled(c: Configuration) -> TopoClass:
    """Classify the unlabeled shape by per-VN neighbor majorities.

    GAS: every VN has strictly more neighbors among degree->=2 CNs than
    among degree-1 CNs.  OS: weak majority everywhere with equality at one
    or more VNs.  The -T variants additionally require d2 > d3.  Results
    never depend on edge weights.
    """
    strict = True
    weak = True
    any_equal = False
    for vn in range(c.num_vns):
        n_o = c.vn_deg1_count(vn)
        n_th = c.gamma - n_o
        if n_th <= n_o:
            strict = False
        if n_th < n_o:
            weak = False
        if n_th == n_o:
            any_equal = True
    is_gas = strict
    is_os = weak and any_equal
    type_two = c.d2 > c.d3
    b_o_ut = compute_b_o_ut(c, warn=False) if c.gamma % 2 == 0 else None
    return TopoClass(
        is_unlabeled_gas=is_gas,
        is_unlabeled_gast=is_gas and type_two,
        is_unlabeled_os=is_os,
        is_unlabeled_ost=is_os and type_two,
        b_ut=compute_b_ut(c, warn=False),
        b_o_ut=b_o_ut,
    )


def cn_flippable_partners(
    c: Configuration, marked_unsat: Iterable[int], mode: str = "gast"
) -> frozenset[int]:
    """Degree-2 CNs that could additionally be marked unsatisfied.

    Degree-1 CNs are always unsatisfied and degree->2 CNs always satisfied;
    ``marked_unsat`` lists the degree-2 CNs currently marked.  A candidate is
    flippable when both its VNs would keep the required satisfied margin:
    more than ceil((gamma+1)/2) currently-satisfied neighbors in gast mode
    (strict majority survives the flip), more than gamma/2 in ost mode (weak
    majority survives).
    """
    marked = frozenset(marked_unsat)
    bad = marked - (c.deg2_cns | c.deg1_cns)
    if bad:
        raise ConfigurationError(f"marked CNs {sorted(bad)} are not degree <= 2")
    if mode == "gast":
        threshold = (c.gamma + 2) // 2  # ceil((gamma+1)/2)
    elif mode == "ost":
        if c.gamma % 2 != 0:
            raise NotApplicableError("ost marking requires even gamma")
        threshold = c.gamma // 2
    else:
        raise ValueError(f"unknown mode {mode!r}")

    def satisfied_count(vn: int) -> int:
        unsat = sum(
            1
            for cn, _ in c.vn_neighbors[vn]
            if cn in c.deg1_cns or cn in marked
        )
        return c.gamma - unsat

    out = set()
    for cn in c.deg2_cns - marked:
        vns = [v for v, _ in c.cn_neighbors[cn]]
        if len(set(vns)) != 2:
            continue
        if all(satisfied_count(v) > threshold for v in vns):
            out.add(cn)
    return frozenset(out)


class CodeGraph:
    """Full-code Tanner graph: a parity-check matrix H over GF(q).

    Rows are CNs, columns are VNs; every column carries exactly gamma
    nonzero entries.  Immutable; apply_changes returns a new graph.
    """

    def __init__(
        self,
        rows: int,
        cols: int,
        gamma: int,
        field: FieldContext,
        weights: Mapping[tuple[int, int], int],
    ):
        self.rows = rows
        self.cols = cols
        self.gamma = gamma
        self.field = field
        self.weights = dict(weights)
        col_deg = [0] * cols
        for (r, c), w in self.weights.items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise MalformedConfigurationError(f"entry ({r},{c}) out of range")
            if w == 0:
                raise MalformedConfigurationError(f"entry ({r},{c}) is zero")
            field.validate(w)
            col_deg[c] += 1
        for c, deg in enumerate(col_deg):
            if deg != gamma:
                raise MalformedConfigurationError(
                    f"column {c + 1} has {deg} entries, column weight is {gamma}"
                )

    def row_support(self, r: int) -> list[int]:
        return sorted(c for (rr, c) in self.weights if rr == r)

    def induce(self, vns: Sequence[int]) -> Configuration:
        """Configuration induced by a VN subset.

        Includes every CN adjacent to the subset, with only the edges into
        the subset; CN degrees are therefore in-configuration degrees.
        """
        vset = sorted(set(vns))
        vpos = {v: i for i, v in enumerate(vset)}
        touched: dict[int, list[tuple[int, int]]] = {}
        for (r, col), w in self.weights.items():
            if col in vpos:
                touched.setdefault(r, []).append((vpos[col], w))
        cn_ids = tuple(sorted(touched))
        cpos = {r: i for i, r in enumerate(cn_ids)}
        edges = [
            (cpos[r], v, w)
            for r, pairs in touched.items()
            for v, w in pairs
        ]
        return Configuration(
            self.gamma, self.field, len(vset), len(cn_ids), edges,
            vn_ids=tuple(vset), cn_ids=cn_ids,
        )

    def apply_changes(self, changes: Mapping[tuple[int, int], int]) -> "CodeGraph":
        for (r, c), w in changes.items():
            if (r, c) not in self.weights:
                raise KeyError(f"no entry at ({r},{c})")
            if w == 0:
                raise MalformedConfigurationError("replacement weights must be nonzero")
        new_weights = dict(self.weights)
        new_weights.update(changes)
        return CodeGraph(self.rows, self.cols, self.gamma, self.field, new_weights)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CodeGraph):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and self.gamma == other.gamma
            and self.field == other.field
            and self.weights == other.weights
        )
