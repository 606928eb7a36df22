"""Problem data for the 0/1 multidimensional knapsack problem.

An :class:`Instance` holds ``n`` objects with values ``v_i`` and ``m``
capacity constraints; ``weights[j, i]`` is the amount of constraint ``j``
consumed by object ``i``. A selection is a length-``n`` 0/1 vector.

Two whitespace-token file layouts are understood:

* ``weing``: ``n m``, the ``n`` values, ``m`` rows of ``n`` weights,
  the ``m`` capacities and an optional trailing known optimum.
* ``orlib``: a problem count ``K`` followed by ``K`` blocks of
  ``n m ref``, values, weights, capacities (``ref == 0`` means unknown).

>>> t1 = parse_weing("3 2  6 10 12  1 2 3  2 2 2  5 5  22", name="T1")
>>> t1.n, t1.m, t1.known_optimum
(3, 2, 22.0)
>>> objective(t1, [0, 1, 1]), is_feasible(t1, [0, 1, 1])
(22.0, True)
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

__all__ = [
    "Instance",
    "ParseError",
    "as_selection",
    "format_number",
    "is_feasible",
    "objective",
    "parse_orlib",
    "parse_weing",
    "random_instance",
    "read_instances",
    "to_weing",
    "usage",
]

_TOKEN = re.compile(r"\S+")


class ParseError(ValueError):
    """Malformed instance text. ``position`` is the 1-based token index."""

    def __init__(self, message: str, position: int | None = None,
                 line: int | None = None, column: int | None = None):
        self.position = position
        self.line = line
        self.column = column
        where = ""
        if position is not None:
            where = f"token {position}"
            if line is not None:
                where += f" (line {line}, column {column})"
            where += ": "
        super().__init__(where + message)


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Instance:
    """A validated MKP instance. Arrays are read-only float64."""

    name: str
    values: np.ndarray
    weights: np.ndarray
    capacities: np.ndarray
    known_optimum: float | None = None
    n: int = field(init=False)
    m: int = field(init=False)

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64)
        weights = np.array(self.weights, dtype=np.float64)
        capacities = np.array(self.capacities, dtype=np.float64)
        if values.ndim != 1 or values.size < 1:
            raise ValueError("values must be a non-empty 1-d sequence")
        n = values.size
        if weights.ndim != 2 or weights.shape[1] != n or weights.shape[0] < 1:
            raise ValueError(f"weights must have shape (m, {n}), got {weights.shape}")
        m = weights.shape[0]
        if capacities.shape != (m,):
            raise ValueError(f"capacities must have length {m}, got {capacities.shape}")
        for label, arr in (("value", values), ("weight", weights), ("capacity", capacities)):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"non-finite {label}")
            if np.any(arr < 0):
                raise ValueError(f"negative {label}")
        if self.known_optimum is not None and not self.known_optimum >= 0:
            raise ValueError("known_optimum must be non-negative")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "weights", _frozen(np.ascontiguousarray(weights)))
        object.__setattr__(self, "capacities", _frozen(capacities))
        if self.known_optimum is not None:
            object.__setattr__(self, "known_optimum", float(self.known_optimum))
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "m", int(m))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Instance):
            return NotImplemented
        return (self.name == other.name
                and self.known_optimum == other.known_optimum
                and np.array_equal(self.values, other.values)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.capacities, other.capacities))

    __hash__ = None  # type: ignore[assignment]

    def renamed(self, name: str) -> Instance:
        return Instance(name, self.values, self.weights, self.capacities, self.known_optimum)

    @property
    def integral(self) -> bool:
        """True when every value is a whole number (objective is then integral)."""
        return bool(np.all(self.values == np.floor(self.values)))


def as_selection(instance: Instance, sel: Sequence[int] | np.ndarray) -> np.ndarray:
    """Validate ``sel`` against ``instance`` and return it as a bool array."""
    bits = np.asarray(sel)
    if bits.ndim != 1 or bits.size != instance.n:
        raise ValueError(f"selection length {bits.size} does not match n={instance.n}")
    if bits.dtype != np.bool_:
        if not np.all((bits == 0) | (bits == 1)):
            raise ValueError("selection entries must be 0 or 1")
        bits = bits.astype(np.bool_)
    return bits


def usage(instance: Instance, sel, j: int) -> float:
    """Amount of constraint ``j`` (0-based) consumed by ``sel``."""
    bits = as_selection(instance, sel)
    if not 0 <= j < instance.m:
        raise IndexError(f"constraint index {j} out of range for m={instance.m}")
    return float(instance.weights[j, bits].sum())


def objective(instance: Instance, sel) -> float:
    bits = as_selection(instance, sel)
    return float(instance.values[bits].sum())


def is_feasible(instance: Instance, sel) -> bool:
    bits = as_selection(instance, sel)
    return bool(np.all(instance.weights[:, bits].sum(axis=1) <= instance.capacities))


# -- parsing -----------------------------------------------------------------

class _Tokens:
    """Numeric token stream that remembers where each token came from."""

    def __init__(self, text: str):
        self.text = text
        self.matches = list(_TOKEN.finditer(text))
        self.pos = 0

    def __len__(self) -> int:
        return len(self.matches)

    def _where(self, idx: int) -> dict:
        start = self.matches[idx].start()
        line = self.text.count("\n", 0, start) + 1
        column = start - (self.text.rfind("\n", 0, start) + 1) + 1
        return {"position": idx + 1, "line": line, "column": column}

    def error(self, idx: int, message: str) -> ParseError:
        if idx < len(self.matches):
            return ParseError(message, **self._where(idx))
        return ParseError(message, position=idx + 1)

    def number(self, idx: int) -> float:
        tok = self.matches[idx].group()
        try:
            x = float(tok)
        except ValueError:
            raise self.error(idx, f"{tok!r} is not a number") from None
        if not np.isfinite(x):
            raise self.error(idx, f"{tok!r} is not a finite number")
        return x

    def take(self, count: int, what: str) -> np.ndarray:
        if self.pos + count > len(self.matches):
            raise ParseError(
                f"premature end of stream while reading {what}: "
                f"needed {count} more tokens, found {len(self.matches) - self.pos}",
                position=len(self.matches) + 1)
        start = self.pos
        out = np.array([self.number(i) for i in range(start, start + count)])
        bad = np.flatnonzero(out < 0)
        if bad.size:
            raise self.error(start + int(bad[0]), f"negative {what} {out[bad[0]]:g}")
        self.pos += count
        return out

    def size(self, what: str) -> int:
        if self.pos >= len(self.matches):
            raise ParseError(f"premature end of stream while reading {what}",
                             position=self.pos + 1)
        idx = self.pos
        x = self.number(idx)
        if x != int(x) or x <= 0:
            raise self.error(idx, f"{what} must be a positive integer, got {self.matches[idx].group()!r}")
        self.pos += 1
        return int(x)


def _read_text(text) -> str:
    if hasattr(text, "read"):
        return text.read()
    return text


def parse_weing(text, name: str = "instance") -> Instance:
    """Parse one instance in weing layout.

    The token count must be exactly ``2 + n + m*n + m`` (no optimum) or one
    more (trailing known optimum); anything else is rejected.
    """
    toks = _Tokens(_read_text(text))
    n = toks.size("n")
    m = toks.size("m")
    expected = 2 + n + m * n + m
    if len(toks) not in (expected, expected + 1):
        # point at the end of a short stream, or the first surplus token
        at = len(toks) if len(toks) < expected else expected + 1
        raise toks.error(at, f"token count {len(toks)} matches neither {expected} (no optimum) "
                             f"nor {expected + 1} (with optimum) for n={n}, m={m}")
    values = toks.take(n, "value")
    weights = toks.take(m * n, "weight").reshape(m, n)
    capacities = toks.take(m, "capacity")
    optimum = None
    if len(toks) == expected + 1:
        optimum = float(toks.take(1, "known optimum")[0])
    return Instance(name, values, weights, capacities, optimum)


def parse_orlib(text, stem: str = "orlib") -> list[Instance]:
    """Parse a multi-problem orlib stream into instances ``<stem>-1..K``."""
    toks = _Tokens(_read_text(text))
    k = toks.size("problem count")
    out = []
    for p in range(1, k + 1):
        n = toks.size(f"n of problem {p}")
        m = toks.size(f"m of problem {p}")
        ref = float(toks.take(1, f"reference value of problem {p}")[0])
        values = toks.take(n, "value")
        weights = toks.take(m * n, "weight").reshape(m, n)
        capacities = toks.take(m, "capacity")
        out.append(Instance(f"{stem}-{p}", values, weights, capacities,
                            ref if ref > 0 else None))
    if toks.pos != len(toks):
        raise toks.error(toks.pos, f"{len(toks) - toks.pos} extraneous tokens after {k} problems")
    return out


def read_instances(path, fmt: str = "weing") -> list[Instance]:
    """Read a file (or ``-`` for stdin) in the given layout."""
    import sys

    if str(path) == "-":
        text, stem = sys.stdin.read(), "stdin"
    else:
        p = Path(path)
        text, stem = p.read_text(), p.stem
    if fmt == "weing":
        return [parse_weing(text, stem)]
    if fmt == "orlib":
        return parse_orlib(text, stem)
    raise ValueError(f"unknown format {fmt!r} (expected 'weing' or 'orlib')")


# -- output ------------------------------------------------------------------

def format_number(x: float) -> str:
    """Plain decimal rendering; whole numbers print without a decimal part."""
    x = float(x)
    if x == int(x) and abs(x) < 2**53:
        return str(int(x))
    return np.format_float_positional(x, trim="-")


def to_weing(instance: Instance) -> str:
    lines = [f"{instance.n} {instance.m}",
             " ".join(map(format_number, instance.values))]
    lines += [" ".join(map(format_number, row)) for row in instance.weights]
    lines.append(" ".join(map(format_number, instance.capacities)))
    if instance.known_optimum is not None:
        lines.append(format_number(instance.known_optimum))
    return "\n".join(lines) + "\n"


def random_instance(n: int, m: int, seed=None, tightness: float = 0.5,
                    name: str | None = None) -> Instance:
    """Integer instance: values U[1,100], weights U[1,50],
    capacities ``floor(tightness * row sum)``."""
    if n < 1 or m < 1:
        raise ValueError(f"n and m must be positive, got n={n}, m={m}")
    if not 0 < tightness <= 1:
        raise ValueError(f"tightness must lie in (0, 1], got {tightness}")
    rng = np.random.default_rng(seed)
    values = rng.integers(1, 101, size=n)
    weights = rng.integers(1, 51, size=(m, n))
    capacities = np.floor(tightness * weights.sum(axis=1))
    return Instance(name or f"gen-n{n}-m{m}", values, weights, capacities)

