"""Marked groups: generator images in a concrete backend group.

A :class:`MarkedGroup` fixes ``r`` images in a backend where products,
inverses and equality are computable.  Evaluating a word multiplies the
images letter by letter, so the kernel of the evaluation is the normal
subgroup ``N`` of the free group whose elements we count.  Kernel membership
is always decided by evaluation, never by rewriting with relators.

Backends and their canonical element forms:

- ``finite_table``   -- an index into a full multiplication table
- ``permutation``    -- a tuple of images of ``0..degree-1``
- ``integer_matrix`` -- a row-major tuple of ints, reduced into ``[0, m)``
  when a modulus ``m`` is given
- ``free_abelian``   -- an integer vector, with addition as the product
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any, Hashable, Iterable, Sequence

from .freewords import Letter, ReducedWord, check_rank

Element = Hashable


class BallBudgetExceeded(RuntimeError):
    """Raised when a state space grows past its budget.

    ``radius`` is the first radius that did not fit; ``partial`` optionally
    carries whatever was computed before the budget ran out.
    """

    def __init__(self, message: str, radius: int | None = None, partial: Any = None):
        super().__init__(message)
        self.radius = radius
        self.partial = partial


class BackendOverflowError(ArithmeticError):
    pass


class NotFiniteError(ValueError):
    pass


class GroupSpecError(ValueError):
    pass


class Backend:
    type_name = ""
    is_finite = False

    def identity(self) -> Element:
        raise NotImplementedError

    def mul(self, x: Element, y: Element) -> Element:
        raise NotImplementedError

    def inv(self, x: Element) -> Element:
        raise NotImplementedError

    def element(self, raw) -> Element:
        """Canonicalize a raw image from a group-spec file."""
        raise NotImplementedError

    def payload(self) -> dict:
        raise NotImplementedError

    def raw(self, x: Element):
        return list(x)


class FiniteTable(Backend):
    type_name = "finite_table"
    is_finite = True

    def __init__(self, order: int, identity: int, table: Sequence[int]):
        if order < 1:
            raise GroupSpecError("finite table needs at least one element")
        if len(table) != order * order:
            raise GroupSpecError(f"table has {len(table)} entries, expected {order * order}")
        if not 0 <= identity < order:
            raise GroupSpecError("identity index out of range")
        self.order = order
        self._identity = identity
        self.table = tuple(int(v) for v in table)
        if any(not 0 <= v < order for v in self.table):
            raise GroupSpecError("table entry out of range")
        self._inv = []
        for x in range(order):
            row = self.table[x * order:(x + 1) * order]
            try:
                self._inv.append(row.index(identity))
            except ValueError:
                raise GroupSpecError(f"element {x} has no right inverse") from None

    def identity(self):
        return self._identity

    def mul(self, x, y):
        return self.table[x * self.order + y]

    def inv(self, x):
        return self._inv[x]

    def element(self, raw):
        x = int(raw)
        if not 0 <= x < self.order:
            raise GroupSpecError(f"table element {raw!r} out of range")
        return x

    def raw(self, x):
        return x

    def payload(self):
        return {"order": self.order, "identity": self._identity, "table": list(self.table)}


class Permutation(Backend):
    """Permutations of ``0..degree-1``; ``x * y`` applies ``x`` first, then ``y``."""

    type_name = "permutation"
    is_finite = True

    def __init__(self, degree: int):
        self.degree = degree

    def identity(self):
        return tuple(range(self.degree))

    def mul(self, x, y):
        return tuple(y[i] for i in x)

    def inv(self, x):
        out = [0] * self.degree
        for i, v in enumerate(x):
            out[v] = i
        return tuple(out)

    def element(self, raw):
        x = tuple(int(v) for v in raw)
        if sorted(x) != list(range(self.degree)):
            raise GroupSpecError(f"{raw!r} is not a permutation of 0..{self.degree - 1}")
        return x

    def payload(self):
        return {"degree": self.degree}


class IntegerMatrix(Backend):
    type_name = "integer_matrix"

    def __init__(self, dimension: int, modulus: int | None = None, entry_bound: int | None = None):
        self.dim = dimension
        self.modulus = modulus
        self.entry_bound = entry_bound
        self.is_finite = modulus is not None

    def _canon(self, entries):
        if self.modulus is not None:
            return tuple(v % self.modulus for v in entries)
        if self.entry_bound is not None and any(abs(v) > self.entry_bound for v in entries):
            raise BackendOverflowError(
                f"matrix entry exceeds bound {self.entry_bound}; set a modulus or raise the bound"
            )
        return tuple(entries)

    def identity(self):
        d = self.dim
        return tuple(1 if i == j else 0 for i in range(d) for j in range(d))

    def mul(self, x, y):
        d = self.dim
        if d == 2:
            a, b, c, e = x
            f, g, h, k = y
            return self._canon((a * f + b * h, a * g + b * k, c * f + e * h, c * g + e * k))
        return self._canon(tuple(
            sum(x[i * d + t] * y[t * d + j] for t in range(d))
            for i in range(d) for j in range(d)
        ))

    def inv(self, x):
        d = self.dim
        if d == 2:
            a, b, c, e = x
            det = a * e - b * c
            adj = (e, -b, -c, a)
        else:
            adj, det = _adjugate(x, d)
        if self.modulus is not None:
            try:
                dinv = pow(det, -1, self.modulus)
            except ValueError:
                raise BackendOverflowError("matrix not invertible modulo the modulus") from None
            return self._canon(tuple(v * dinv for v in adj))
        if det not in (1, -1):
            raise GroupSpecError("integer matrix is not invertible over Z (det must be +-1)")
        return self._canon(tuple(v * det for v in adj))

    def element(self, raw):
        x = tuple(int(v) for v in raw)
        if len(x) != self.dim * self.dim:
            raise GroupSpecError(f"matrix image needs {self.dim * self.dim} entries")
        return self._canon(x)

    def payload(self):
        out: dict[str, Any] = {"dimension": self.dim}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out


def _adjugate(x, d):
    # cofactor expansion; matrix dimensions here are tiny
    def minor(rows, cols):
        if not rows:
            return 1
        r0 = rows[0]
        total = 0
        for k, c in enumerate(cols):
            sub = minor(rows[1:], cols[:k] + cols[k + 1:])
            total += (-1) ** k * x[r0 * d + c] * sub
        return total

    idx = list(range(d))
    det = minor(idx, idx)
    adj = [0] * (d * d)
    for i in range(d):
        for j in range(d):
            rows = [r for r in idx if r != j]
            cols = [c for c in idx if c != i]
            adj[i * d + j] = (-1) ** (i + j) * minor(rows, cols)
    return tuple(adj), det


class FreeAbelian(Backend):
    type_name = "free_abelian"

    def __init__(self, dimension: int):
        self.dim = dimension

    def identity(self):
        return (0,) * self.dim

    def mul(self, x, y):
        return tuple(a + b for a, b in zip(x, y))

    def inv(self, x):
        return tuple(-a for a in x)

    def element(self, raw):
        x = tuple(int(v) for v in raw)
        if len(x) != self.dim:
            raise GroupSpecError(f"vector image needs {self.dim} entries")
        return x

    def payload(self):
        return {"dimension": self.dim}


@dataclass(frozen=True, eq=False)
class MarkedGroup:
    rank: int
    backend: Backend
    images: tuple
    name: str = "custom"
    even_parity: bool = False
    letter_elements: tuple = field(init=False, repr=False)

    def __post_init__(self):
        check_rank(self.rank)
        if len(self.images) != self.rank:
            raise GroupSpecError(f"need {self.rank} generator images, got {len(self.images)}")
        letters = []
        for g in self.images:
            letters.append(g)
            letters.append(self.backend.inv(g))
        object.__setattr__(self, "letter_elements", tuple(letters))

    @property
    def q(self) -> int:
        return 2 * self.rank - 1

    @property
    def is_finite(self) -> bool:
        return self.backend.is_finite

    def identity(self) -> Element:
        return self.backend.identity()

    def mul(self, x: Element, y: Element) -> Element:
        return self.backend.mul(x, y)

    def step(self, x: Element, code: int) -> Element:
        return self.backend.mul(x, self.letter_elements[code])

    def evaluate(self, word: ReducedWord | Iterable[Letter] | Iterable[int]) -> Element:
        """Image of a word (reduced or not) in the backend."""
        codes = word.codes if isinstance(word, ReducedWord) else [
            c.code if isinstance(c, Letter) else int(c) for c in word
        ]
        x = self.identity()
        for c in codes:
            if not 0 <= c < 2 * self.rank:
                raise ValueError(f"letter code {c} invalid for rank {self.rank}")
            x = self.step(x, c)
        return x

    def is_identity(self, x: Element) -> bool:
        return x == self.identity()

    def ball(self, n: int, budget: int = 1_000_000) -> set:
        """All elements represented by words of length at most ``n``."""
        if n < 0:
            raise ValueError("radius must be nonnegative")
        seen = {self.identity()}
        frontier = [self.identity()]
        for radius in range(1, n + 1):
            nxt = []
            for x in frontier:
                for c in range(2 * self.rank):
                    y = self.step(x, c)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            if len(seen) > budget:
                raise BallBudgetExceeded(
                    f"ball of radius {radius} exceeds budget {budget}", radius=radius
                )
            if not nxt:
                break
            frontier = nxt
        return seen

    def elements(self, budget: int = 1_000_000) -> list:
        """The (finite) subgroup generated by the images, in BFS order."""
        if not self.is_finite:
            raise NotFiniteError(f"{self.name}: backend {self.backend.type_name} is infinite")
        order = [self.identity()]
        seen = {order[0]}
        i = 0
        while i < len(order):
            x = order[i]
            i += 1
            for c in range(2 * self.rank):
                y = self.step(x, c)
                if y not in seen:
                    seen.add(y)
                    order.append(y)
                    if len(order) > budget:
                        raise BallBudgetExceeded(f"group exceeds budget {budget}")
        return order

    def to_spec(self) -> dict:
        out = {
            "rank": self.rank,
            "backend": {"type": self.backend.type_name, **self.backend.payload()},
            "images": [self.backend.raw(g) for g in self.images],
        }
        out["name"] = self.name
        if self.even_parity:
            out["even_parity"] = True
        return out


def from_spec(spec: dict, name: str | None = None) -> MarkedGroup:
    """Build a :class:`MarkedGroup` from the group-spec dictionary.

    ``{"rank": r, "backend": {"type": ..., payload...}, "images": [...]}``;
    the optional keys ``name`` and ``even_parity`` are metadata.
    """
    try:
        rank = int(spec["rank"])
        bspec = dict(spec["backend"])
        kind = bspec.pop("type")
        raw_images = spec["images"]
    except (KeyError, TypeError) as exc:
        raise GroupSpecError(f"malformed group spec: missing {exc}") from None

    if kind == "finite_table":
        backend: Backend = FiniteTable(int(bspec["order"]), int(bspec["identity"]), bspec["table"])
    elif kind == "permutation":
        backend = Permutation(int(bspec["degree"]))
    elif kind == "integer_matrix":
        mod = bspec.get("modulus")
        bound = bspec.get("entry_bound")
        backend = IntegerMatrix(
            int(bspec["dimension"]),
            None if mod is None else int(mod),
            None if bound is None else int(bound),
        )
    elif kind == "free_abelian":
        backend = FreeAbelian(int(bspec["dimension"]))
    else:
        raise GroupSpecError(f"unknown backend type {kind!r}")

    images = tuple(backend.element(raw) for raw in raw_images)
    return MarkedGroup(
        rank=rank,
        backend=backend,
        images=images,
        name=name or spec.get("name", "custom"),
        even_parity=bool(spec.get("even_parity", False)),
    )


def load_group(path: str | Path) -> MarkedGroup:
    with open(path) as fh:
        spec = json.load(fh)
    return from_spec(spec, name=spec.get("name", Path(path).stem))


PRESETS = ("trivial", "zsquared", "z2xz2", "s3", "sl2z", "free2")


def list_presets() -> list[str]:
    return list(PRESETS)


def preset_spec(name: str) -> dict:
    if name not in PRESETS:
        raise GroupSpecError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    text = resources.files("cogrowth").joinpath("presets", f"{name}.json").read_text()
    return json.loads(text)


def load_preset(name: str) -> MarkedGroup:
    return from_spec(preset_spec(name), name=name)
