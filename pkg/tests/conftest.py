"""Shared helpers: independent oracles and randomized labeling generators."""

from __future__ import annotations

import itertools
import random

from wcmopt.config import Configuration
from wcmopt.gf import FieldContext
from wcmopt.gflinalg import GfMatrix, NullSpaceBasis, mat_vec


def naive_full_support(ns: NullSpaceBasis) -> tuple[bool, tuple[int, ...] | None]:
    """Scan all q^p coefficient vectors; independent of the projective scan."""
    f = ns.field
    for coeffs in itertools.product(range(f.q), repeat=ns.dimension):
        if all(c == 0 for c in coeffs):
            continue
        acc = [0] * ns.length
        for c, vec in zip(coeffs, ns.basis_vectors):
            if c == 0:
                continue
            for i, x in enumerate(vec):
                if x:
                    acc[i] ^= f.mul(c, x)
        if all(x != 0 for x in acc):
            return True, tuple(acc)
    return False, None


def span_size_rank(m: GfMatrix) -> int:
    """Rank via the size of the row space, grown one row at a time.

    |span| = q^rank; exhaustive over row combinations without ever running
    an elimination, so it cross-checks rref independently.
    """
    f = m.field
    span = {(0,) * m.cols}
    for row in m.entries:
        additions = []
        for vec in span:
            for c in range(1, f.q):
                scaled = tuple(f.mul(c, x) if x else 0 for x in row)
                additions.append(tuple(a ^ b for a, b in zip(vec, scaled)))
        span.update(additions)
    size = len(span)
    rank = 0
    while size > 1:
        size //= f.q
        rank += 1
    return rank


def random_weights(cfg: Configuration, rng: random.Random) -> Configuration:
    """Same topology, independently random nonzero weights."""
    q = cfg.field.q
    edges = [(cn, vn, rng.randrange(1, q)) for cn, vn, _ in cfg.edges]
    return Configuration(
        cfg.gamma, cfg.field, cfg.num_vns, cfg.num_cns, edges,
        vn_ids=cfg.vn_ids, cn_ids=cfg.cn_ids,
    )


def satisfied_labeling(cfg: Configuration, rng: random.Random) -> Configuration:
    """Random labeling under which every degree->=2 check is satisfied.

    Draws a full-support value vector, then solves each check's last edge
    weight so the row annihilates it; degree-1 checks get random weights
    (they are unsatisfied regardless).  The result has exactly d1
    unsatisfied checks.
    """
    f = cfg.field
    q = f.q
    values = [rng.randrange(1, q) for _ in range(cfg.num_vns)]
    changes: dict[tuple[int, int], int] = {}
    for cn in range(cfg.num_cns):
        nbrs = cfg.cn_neighbors[cn]
        if len(nbrs) == 1:
            changes[(cn, nbrs[0][0])] = rng.randrange(1, q)
            continue
        while True:
            acc = 0
            chosen = []
            for vn, _ in nbrs[:-1]:
                w = rng.randrange(1, q)
                chosen.append((vn, w))
                acc ^= f.mul(w, values[vn])
            last_vn = nbrs[-1][0]
            if acc != 0:
                w_last = f.div(acc, values[last_vn])
                for vn, w in chosen:
                    changes[(cn, vn)] = w
                changes[(cn, last_vn)] = w_last
                break
    return cfg.with_weights(changes)


def assert_valid_witness(cfg: Configuration, removed_rows, witness) -> None:
    sub = cfg.adjacency().drop_rows(removed_rows)
    assert all(x == 0 for x in mat_vec(sub, witness))
    assert all(x != 0 for x in witness)


GF16_POLY = 0b10011


def gf16() -> FieldContext:
    return FieldContext(4, GF16_POLY)
