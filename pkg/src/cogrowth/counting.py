"""Exact cogrowth coefficients and return counts.

``gamma[n]`` counts freely reduced words of length ``n`` that evaluate to the
identity; ``walk[n]`` counts all words of length ``n`` over the ``2r``
letters that do.  Under the equidistributed measure with total mass
``(q+1)/sqrt(q)`` the return probability is ``walk[n] / (2 sqrt q)**n``; the
normalisation is never applied here, so everything stays in integers.

The dynamic programmes keep one dictionary per layer.  For reduced words the
state is ``(element, last letter)`` and a step may not append the inverse of
the last letter.  By default each sequence is assembled from two half-length
layers: a length-``n`` word splits as ``u v`` with ``|u| = ceil(n/2)``, and the
number of suffixes ``v`` evaluating to ``x^-1`` equals the number of prefixes
of the same length evaluating to ``x`` (invert the word).  This halves the
radius of the ball that has to be held in memory.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .freewords import count_reduced
from .marked_groups import BallBudgetExceeded, MarkedGroup

DEFAULT_BALL_BUDGET = 2_000_000
DEFAULT_ENUM_BUDGET = 10_000_000


class EnumerationBudgetExceeded(RuntimeError):
    pass


def gamma_bruteforce(G: MarkedGroup, n: int, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Count reduced kernel words of length ``n`` by enumerating every reduced word.

    Products are shared along common prefixes (depth-first), but every one of
    the ``2r(2r-1)^(n-1)`` words is visited.
    """
    if n < 0:
        raise ValueError("length must be nonnegative")
    total_words = count_reduced(G.rank, n)
    if total_words > budget:
        raise EnumerationBudgetExceeded(
            f"{total_words} reduced words of length {n} exceed the enumeration budget {budget}"
        )
    e = G.identity()
    if n == 0:
        return 1
    letters = range(2 * G.rank)
    count = 0
    # explicit stack of (element, last code, depth)
    stack = [(e, -2, 0)]
    while stack:
        x, last, depth = stack.pop()
        for c in letters:
            if c == last ^ 1:
                continue
            y = G.step(x, c)
            if depth + 1 == n:
                if y == e:
                    count += 1
            else:
                stack.append((y, c, depth + 1))
    return count


def walk_bruteforce(G: MarkedGroup, n: int, budget: int = DEFAULT_ENUM_BUDGET) -> int:
    """Count all length-``n`` words evaluating to the identity by enumeration."""
    if (2 * G.rank) ** n > budget:
        raise EnumerationBudgetExceeded(f"(2r)^n = {(2 * G.rank) ** n} exceeds budget {budget}")
    e = G.identity()
    layer = [e]
    for _ in range(n):
        layer = [G.step(x, c) for x in layer for c in range(2 * G.rank)]
    return sum(1 for x in layer if x == e)


def _reduced_layers(G: MarkedGroup, depth: int, budget: int):
    """Layers ``k = 0..depth`` of reduced-walk counts, ``{x: [count by last letter]}``.

    Layer 0 is ``{e: None}``.  Returns the layers that fit; raises
    :class:`BallBudgetExceeded` with ``partial`` set to them otherwise.
    """
    s = 2 * G.rank
    e = G.identity()
    layers: list[dict] = [{e: None}]
    first: dict = {}
    for c in range(s):
        y = G.step(e, c)
        row = first.setdefault(y, [0] * s)
        row[c] += 1
    if depth >= 1:
        layers.append(first)
    for k in range(2, depth + 1):
        prev = layers[-1]
        nxt: dict = {}
        for x, row in prev.items():
            for last, cnt in enumerate(row):
                if not cnt:
                    continue
                banned = last ^ 1
                for c in range(s):
                    if c == banned:
                        continue
                    y = G.step(x, c)
                    r = nxt.get(y)
                    if r is None:
                        r = nxt[y] = [0] * s
                    r[c] += cnt
        if len(nxt) > budget:
            raise BallBudgetExceeded(
                f"layer {k} has {len(nxt)} states, budget {budget}", radius=k, partial=layers
            )
        layers.append(nxt)
    return layers


def _walk_layers(G: MarkedGroup, depth: int, budget: int):
    s = 2 * G.rank
    layers: list[dict] = [{G.identity(): 1}]
    for k in range(1, depth + 1):
        nxt: dict = {}
        for x, cnt in layers[-1].items():
            for c in range(s):
                y = G.step(x, c)
                nxt[y] = nxt.get(y, 0) + cnt
        if len(nxt) > budget:
            raise BallBudgetExceeded(
                f"layer {k} has {len(nxt)} states, budget {budget}", radius=k, partial=layers
            )
        layers.append(nxt)
    return layers


def _gamma_from_layers(G: MarkedGroup, layers, n_max: int) -> list[int]:
    e = G.identity()
    out = []
    totals = [None] + [{x: sum(row) for x, row in layer.items()} for layer in layers[1:]]
    for n in range(n_max + 1):
        if n == 0:
            out.append(1)
            continue
        k = (n + 1) // 2
        m = n - k
        if m == 0:
            out.append(totals[k].get(e, 0))
            continue
        big, small = layers[k], layers[m]
        tb, ts = totals[k], totals[m]
        if len(small) > len(big):
            big, small, tb, ts = small, big, ts, tb
        acc = 0
        for x, row_s in small.items():
            row_b = big.get(x)
            if row_b is None:
                continue
            acc += tb[x] * ts[x] - sum(a * b for a, b in zip(row_b, row_s))
        out.append(acc)
    return out


def _walk_from_layers(layers, n_max: int) -> list[int]:
    out = []
    for n in range(n_max + 1):
        k = (n + 1) // 2
        m = n - k
        big, small = layers[k], layers[m]
        if len(small) > len(big):
            big, small = small, big
        out.append(sum(c * big.get(x, 0) for x, c in small.items()))
    return out


def gamma_dp(G: MarkedGroup, n_max: int, budget: int = DEFAULT_BALL_BUDGET,
             split: bool = True) -> list[int]:
    """``[gamma_0, ..., gamma_{n_max}]`` by non-backtracking transfer.

    With ``split=False`` the layers are run all the way to ``n_max`` and
    ``gamma_n`` is read off at the identity; otherwise half-length layers are
    combined (see the module docstring).  On budget overflow the raised
    :class:`BallBudgetExceeded` carries the longest prefix of the sequence
    that could be computed.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    depth = (n_max + 1) // 2 if split else n_max
    try:
        layers = _reduced_layers(G, depth, budget)
    except BallBudgetExceeded as exc:
        done = exc.partial
        reach = 2 * (len(done) - 1) if split else len(done) - 1
        exc.partial = _gamma_from_layers(G, done, reach) if split else _read_gamma(G, done)
        raise
    if split:
        return _gamma_from_layers(G, layers, n_max)
    return _read_gamma(G, layers)


def _read_gamma(G, layers):
    e = G.identity()
    out = [1]
    for layer in layers[1:]:
        row = layer.get(e)
        out.append(sum(row) if row else 0)
    return out


def walk_counts(G: MarkedGroup, n_max: int, budget: int = DEFAULT_BALL_BUDGET,
                split: bool = True) -> list[int]:
    """``[W_0, ..., W_{n_max}]``: all words of each length evaluating to the identity."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    depth = (n_max + 1) // 2 if split else n_max
    try:
        layers = _walk_layers(G, depth, budget)
    except BallBudgetExceeded as exc:
        done = exc.partial
        if split:
            exc.partial = _walk_from_layers(done, 2 * (len(done) - 1))
        else:
            exc.partial = [layer.get(G.identity(), 0) for layer in done]
        raise
    if split:
        return _walk_from_layers(layers, n_max)
    e = G.identity()
    return [layer.get(e, 0) for layer in layers]


@dataclass
class CountTable:
    group: str
    rank: int
    gamma: list[int]
    walk: list[int]
    truncated: bool = False
    provenance: dict[str, Any] = field(default_factory=dict)

    @property
    def q(self) -> int:
        return 2 * self.rank - 1

    @property
    def n_max(self) -> int:
        return min(len(self.gamma), len(self.walk)) - 1

    def check_invariants(self) -> list[str]:
        """Violated table invariants, as messages (empty when consistent)."""
        problems = []
        r = self.rank
        if self.gamma and self.gamma[0] != 1:
            problems.append("gamma_0 != 1")
        if self.walk and self.walk[0] != 1:
            problems.append("W_0 != 1")
        for n, g in enumerate(self.gamma):
            if n and not 0 <= g <= count_reduced(r, n):
                problems.append(f"gamma_{n} outside [0, 2r(2r-1)^(n-1)]")
        for n, w in enumerate(self.walk):
            if not 0 <= w <= (2 * r) ** n:
                problems.append(f"W_{n} outside [0, (2r)^n]")
        for n, (g, w) in enumerate(zip(self.gamma, self.walk)):
            if w < g:
                problems.append(f"W_{n} < gamma_{n}")
        return problems

    def to_dict(self) -> dict:
        return {
            "format": "cogrowth-count-table",
            "version": 1,
            "group": self.group,
            "rank": self.rank,
            "q": self.q,
            "n_max": self.n_max,
            "truncated": self.truncated,
            "gamma": [str(v) for v in self.gamma],
            "walk": [str(v) for v in self.walk],
            "provenance": self.provenance,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> "CountTable":
        if d.get("format") != "cogrowth-count-table":
            raise ValueError("not a count table")
        for key in ("gamma", "walk"):
            if any(not isinstance(v, str) for v in d[key]):
                raise ValueError(f"{key} entries must be decimal strings")
        return cls(
            group=d["group"],
            rank=int(d["rank"]),
            gamma=[int(v) for v in d["gamma"]],
            walk=[int(v) for v in d["walk"]],
            truncated=bool(d.get("truncated", False)),
            provenance=dict(d.get("provenance", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "CountTable":
        return cls.from_dict(json.loads(text))


def count_table(G: MarkedGroup, n_max: int, budget: int = DEFAULT_BALL_BUDGET) -> CountTable:
    """Both sequences to ``n_max``.  On budget overflow a truncated table is
    attached to the raised exception as ``partial``."""
    prov = {"ball_budget": budget, "cogrowth_version": __version__, "method": "transfer-dp"}
    try:
        gamma = gamma_dp(G, n_max, budget)
        walk = walk_counts(G, n_max, budget)
    except BallBudgetExceeded as exc:
        gamma_part = exc.partial if isinstance(exc.partial, list) else [1]
        try:
            walk_part = walk_counts(G, len(gamma_part) - 1, budget)
        except BallBudgetExceeded as exc2:
            walk_part = exc2.partial
        m = min(len(gamma_part), len(walk_part))
        exc.partial = CountTable(G.name, G.rank, gamma_part[:m], walk_part[:m],
                                 truncated=True, provenance=prov)
        raise
    return CountTable(G.name, G.rank, gamma, walk, provenance=prov)
