"""Monte Carlo fault-tolerant reachability over a prime field.

Each arc ``(u, v)`` gets a random nonzero weight ``x``; ``M = I - A_x``.
Entry ``(s, t)`` of ``M^-1`` is a nonzero rational function of the weights
iff ``t`` is reachable from ``s``, so a random evaluation is nonzero w.h.p.
Removing failed arcs is a rank-``|F|`` update of ``M``, handled with the
Woodbury identity on an ``|F| x |F|`` capacitance matrix.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import OracleError, RetryableError
from .graph import Graph, GraphView

P61 = (1 << 61) - 1


class SingularMatrixError(RetryableError):
    pass


def mat_inv_mod(a: Sequence[Sequence[int]], p: int) -> list[list[int]]:
    """Inverse of a square matrix over GF(p) by Gauss-Jordan elimination."""
    n = len(a)
    m = [[x % p for x in row] + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            raise SingularMatrixError("matrix is singular mod p")
        m[col], m[piv] = m[piv], m[col]
        inv_p = pow(m[col][col], p - 2, p)
        row = [x * inv_p % p for x in m[col]]
        m[col] = row
        for r in range(n):
            if r != col and m[r][col]:
                factor = m[r][col]
                mr = m[r]
                m[r] = [(x - factor * y) % p for x, y in zip(mr, row)]
    return [row[n:] for row in m]


@dataclass
class FieldMatrixOracle:
    """``arcs[i] = (tail, head, edge id)`` with weight ``x[i]``; ``inv = (I - A_x)^-1``."""

    n: int
    p: int
    arcs: list[tuple[int, int, int]]
    x: list[int]
    inv: list[list[int]]
    seed: int | None = None

    def __post_init__(self):
        self._by_edge: dict[int, list[int]] = {}
        for i, (_, _, e) in enumerate(self.arcs):
            self._by_edge.setdefault(e, []).append(i)

    def arcs_of(self, failed: Iterable[int]) -> list[int]:
        out: list[int] = []
        for e in sorted(set(failed)):
            out.extend(self._by_edge.get(e, ()))
        return out

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "p": self.p,
            "seed": self.seed,
            "arcs": [list(a) for a in self.arcs],
            "x": self.x,
            "inv": self.inv,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "FieldMatrixOracle":
        return cls(d["n"], d["p"], [tuple(a) for a in d["arcs"]], d["x"], d["inv"], d["seed"])


def build_field_oracle(
    g: Graph | GraphView,
    seed: int | None = 0,
    p: int = P61,
    weights: dict[tuple[int, int, int], int] | None = None,
    retries: int = 5,
    check_rows: int = 4,
) -> FieldMatrixOracle:
    """Invert ``I - A_x`` for random arc weights ``x``.

    ``weights`` pins the weight of chosen arcs (keyed by ``(tail, head,
    edge id)``), which lets a rebuild on ``G - F`` reuse the surviving
    weights exactly.
    """
    rng = random.Random(seed)
    arcs = list(g.arcs())
    n = g.n
    for _ in range(retries):
        x = [weights[a] if weights and a in weights else rng.randrange(1, p) for a in arcs]
        m = [[int(i == j) for j in range(n)] for i in range(n)]
        for (u, v, _), w in zip(arcs, x):
            m[u][v] = (m[u][v] - w) % p
        try:
            inv = mat_inv_mod(m, p)
        except SingularMatrixError:
            if weights:
                break
            continue
        for r in rng.sample(range(n), min(check_rows, n)):
            for c in range(n):
                acc = sum(m[r][j] * inv[j][c] for j in range(n)) % p
                if acc != int(r == c):
                    raise OracleError("inverse check failed")
        return FieldMatrixOracle(n, p, arcs, x, inv, seed)
    raise SingularMatrixError(f"I - A_x singular in {retries} draws; use a larger prime than {p}")


def field_value(o: FieldMatrixOracle, s: int, t: int, failed: Iterable[int] = ()) -> int:
    """Entry ``(s, t)`` of ``(I - A_x restricted to G - F)^-1`` via Woodbury.

    Raises :class:`SingularMatrixError` when the capacitance matrix is
    singular; a fresh build seed fixes that with high probability.
    """
    p = o.p
    idx = o.arcs_of(failed)
    if not idx:
        return o.inv[s][t]
    inv = o.inv
    tails = [o.arcs[i][0] for i in idx]
    heads = [o.arcs[i][1] for i in idx]
    r = len(idx)
    # K = D^-1 + V^T M^-1 U, U columns e_tail, V columns e_head
    cap = [
        [(inv[heads[i]][tails[j]] + (pow(o.x[idx[i]], p - 2, p) if i == j else 0)) % p for j in range(r)]
        for i in range(r)
    ]
    kinv = mat_inv_mod(cap, p)
    left = [inv[s][a] for a in tails]
    right = [inv[b][t] for b in heads]
    corr = 0
    for i in range(r):
        if left[i]:
            row = kinv[i]
            corr += left[i] * (sum(row[j] * right[j] for j in range(r)) % p)
    return (inv[s][t] - corr) % p


def query_reach(o: FieldMatrixOracle, s: int, t: int, failed: Iterable[int] = ()) -> bool:
    """Is ``t`` reachable from ``s`` after removing the edges ``failed``? (w.h.p.)"""
    return field_value(o, s, t, failed) != 0
