"""Bounded-occurrence Max E3LIN2 instances.

An instance is a set of parity equations, each over exactly three distinct
boolean variables: ``x_a + x_b + x_c = rhs (mod 2)`` with ``rhs`` in {0, 1}.
In spin variables ``z_v = (-1)^{x_v}`` an equation with sign
``d = (-1)^rhs`` is satisfied exactly when ``z_a z_b z_c = d``, so the
number of satisfied equations is ``m/2 + objective_value`` where the
objective is ``(1/2) sum_clauses d * z_a z_b z_c``.

The occurrence parameter ``d_bound`` is derived: with every variable in at
most ``d_bound + 1`` clauses, each variable of a focal clause meets at most
``d_bound`` other clauses.

File format (text, UTF-8, LF newlines)::

    e3lin2 <n> <m>
    <a> <b> <c> <rhs>     (m lines, 0 <= a < b < c < n, rhs in {0, 1})
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

SIGN_MODES = ("uniform-random", "all-zero-rhs")


class InfeasibleError(ValueError):
    """Requested generator parameters cannot produce a valid instance."""


class RetryExhaustedError(RuntimeError):
    """Random generation gave up before placing all requested triples."""


class ParseError(ValueError):
    """Instance text is malformed; carries the offending line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True)
class Clause:
    """One parity equation on the variable triple (a, b, c)."""

    a: int
    b: int
    c: int
    rhs: int

    def __post_init__(self):
        if self.rhs not in (0, 1):
            raise ValueError(f"rhs must be 0 or 1, got {self.rhs}")

    @property
    def triple(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def sign(self) -> int:
        """Equation sign: +1 for rhs=0, -1 for rhs=1."""
        return 1 - 2 * self.rhs


@dataclass(frozen=True, eq=False)
class Assignment:
    """A boolean assignment with bit and spin views."""

    bits: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.bits, dtype=np.uint8)
        if arr.ndim != 1 or not np.isin(arr, (0, 1)).all():
            raise ValueError("bits must be a flat vector over {0, 1}")
        arr.setflags(write=False)
        object.__setattr__(self, "bits", arr)

    @property
    def n(self) -> int:
        return self.bits.size

    @property
    def spins(self) -> np.ndarray:
        """Spin view z_v = (-1)^bits[v], values in {+1, -1}."""
        return (1 - 2 * self.bits.astype(np.int8)).astype(np.int8)

    @classmethod
    def from_string(cls, text: str) -> "Assignment":
        return cls(np.fromiter((int(ch) for ch in text), dtype=np.uint8, count=len(text)))

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.bits)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Assignment):
            return NotImplemented
        return np.array_equal(self.bits, other.bits)

    def __hash__(self):
        return hash((self.bits.size, self.bits.tobytes()))

    def __repr__(self):
        return f"Assignment({self.to_string()!r})"


@dataclass(frozen=True)
class Instance:
    """An E3LIN2 instance: n variables and an ordered clause list."""

    n: int
    clauses: tuple[Clause, ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses", tuple(self.clauses))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @cached_property
    def occurrence(self) -> np.ndarray:
        """Per-variable clause membership counts (length n)."""
        counts = np.zeros(self.n, dtype=np.int64)
        for cl in self.clauses:
            for v in cl.triple:
                if 0 <= v < self.n:
                    counts[v] += 1
        counts.setflags(write=False)
        return counts

    @cached_property
    def d_bound(self) -> int:
        """Smallest D with every variable in at most D+1 clauses."""
        if self.m == 0 or self.n == 0:
            return 0
        return max(int(self.occurrence.max()) - 1, 0)

    def triples(self) -> tuple[tuple[int, int, int], ...]:
        return tuple(cl.triple for cl in self.clauses)


@dataclass(frozen=True)
class Violation:
    kind: str
    clause_index: int
    message: str


def validate(instance: Instance) -> list[Violation]:
    """Collect every invariant violation; an empty list means well-formed."""
    out: list[Violation] = []
    seen: dict[tuple[int, int, int], int] = {}
    for i, cl in enumerate(instance.clauses):
        if not (cl.a < cl.b < cl.c):
            out.append(Violation("unsorted-triple", i, f"clause {i}: triple {cl.triple} is not strictly increasing"))
        if min(cl.triple) < 0 or max(cl.triple) >= instance.n:
            out.append(Violation("index-out-of-range", i, f"clause {i}: triple {cl.triple} outside [0, {instance.n})"))
        key = cl.triple
        if key in seen:
            out.append(Violation("duplicate-triple", i, f"clause {i}: triple {cl.triple} repeats clause {seen[key]}"))
        else:
            seen[key] = i
    return out


def _require_valid_assignment(instance: Instance, assignment: Assignment) -> None:
    if assignment.n != instance.n:
        raise ValueError(f"assignment length {assignment.n} != instance n {instance.n}")


def satisfied_count(instance: Instance, assignment: Assignment) -> int:
    """Number of clauses with bits[a]+bits[b]+bits[c] = rhs (mod 2)."""
    _require_valid_assignment(instance, assignment)
    bits = assignment.bits
    hits = 0
    for cl in instance.clauses:
        if (int(bits[cl.a]) + int(bits[cl.b]) + int(bits[cl.c])) % 2 == cl.rhs:
            hits += 1
    return hits


def objective_value(instance: Instance, assignment: Assignment) -> float:
    """(1/2) sum over clauses of sign * z_a z_b z_c; half-integer in [-m/2, m/2]."""
    _require_valid_assignment(instance, assignment)
    spins = assignment.spins
    total = 0
    for cl in instance.clauses:
        total += cl.sign * int(spins[cl.a]) * int(spins[cl.b]) * int(spins[cl.c])
    return total / 2.0


def generate_random(
    n: int,
    m: int,
    d_bound: int,
    sign_mode: str = "uniform-random",
    seed: int = 0,
    max_attempts: int | None = None,
) -> Instance:
    """Draw a valid instance with m unique sorted triples, occurrence <= d_bound+1.

    Triples are placed by rejection sampling (a draw is rejected when it
    repeats an existing triple or would push a variable past its occurrence
    cap), so the triple distribution is uniform enough for testing but not
    canonical. Deterministic for a fixed seed.
    """
    if sign_mode not in SIGN_MODES:
        raise ValueError(f"sign_mode must be one of {SIGN_MODES}, got {sign_mode!r}")
    if n < 0 or m < 0 or d_bound < 0:
        raise InfeasibleError(f"n, m, d_bound must be non-negative, got ({n}, {m}, {d_bound})")
    if m > 0 and n < 3:
        raise InfeasibleError(f"need at least 3 variables for any clause, got n={n}")
    if 3 * m > n * (d_bound + 1):
        raise InfeasibleError(
            f"{3 * m} variable slots needed but only {n * (d_bound + 1)} available "
            f"(n={n}, m={m}, D={d_bound})"
        )
    if n >= 3 and m > math.comb(n, 3):
        raise InfeasibleError(f"m={m} exceeds the {math.comb(n, 3)} distinct triples on n={n}")

    rng = np.random.default_rng(seed)
    budget = 1000 * m if max_attempts is None else max_attempts
    cap = d_bound + 1
    counts = np.zeros(n, dtype=np.int64)
    chosen: list[tuple[int, int, int]] = []
    used: set[tuple[int, int, int]] = set()
    attempts = 0
    stall = 0
    while len(chosen) < m:
        if attempts >= budget:
            raise RetryExhaustedError(
                f"placed {len(chosen)} of {m} triples in {budget} attempts (n={n}, D={d_bound})"
            )
        if stall >= 200:
            # greedy placement wedged (tight packings can leave no legal
            # triple); restart from scratch on the shared budget
            counts[:] = 0
            chosen.clear()
            used.clear()
            stall = 0
        attempts += 1
        triple = tuple(int(v) for v in np.sort(rng.choice(n, size=3, replace=False)))
        if triple in used or any(counts[v] >= cap for v in triple):
            stall += 1
            continue
        stall = 0
        used.add(triple)
        chosen.append(triple)
        for v in triple:
            counts[v] += 1

    if sign_mode == "all-zero-rhs":
        rhs = np.zeros(m, dtype=np.int64)
    else:
        rhs = rng.integers(0, 2, size=m)
    clauses = tuple(Clause(a, b, c, int(r)) for (a, b, c), r in zip(chosen, rhs))
    return Instance(n=n, clauses=clauses)


def resample_signs(instance: Instance, seed: int | Sequence[int] = 0) -> Instance:
    """Same triples, every rhs redrawn independently and uniformly."""
    rng = np.random.default_rng(seed)
    rhs = rng.integers(0, 2, size=instance.m)
    clauses = tuple(
        Clause(cl.a, cl.b, cl.c, int(r)) for cl, r in zip(instance.clauses, rhs)
    )
    return Instance(n=instance.n, clauses=clauses)


def with_signs(instance: Instance, rhs_bits: Iterable[int]) -> Instance:
    """Same triples with an explicit rhs vector."""
    rhs = list(rhs_bits)
    if len(rhs) != instance.m:
        raise ValueError(f"need {instance.m} rhs bits, got {len(rhs)}")
    clauses = tuple(
        Clause(cl.a, cl.b, cl.c, int(r)) for cl, r in zip(instance.clauses, rhs)
    )
    return Instance(n=instance.n, clauses=clauses)


def parse(text: str) -> Instance:
    """Parse the instance file format; raises ParseError with a line number."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)

    head = lines[0].split(" ")
    if len(head) != 3 or head[0] != "e3lin2":
        raise ParseError(f"malformed header {lines[0]!r}, expected 'e3lin2 <n> <m>'", 1)
    try:
        n, m = int(head[1]), int(head[2])
    except ValueError:
        raise ParseError(f"malformed header {lines[0]!r}, counts must be integers", 1) from None
    if n < 0 or m < 0:
        raise ParseError("header counts must be non-negative", 1)
    if len(lines) - 1 < m:
        raise ParseError(f"expected {m} clause lines, found {len(lines) - 1}", len(lines) + 1)
    if len(lines) - 1 > m:
        raise ParseError(f"expected {m} clause lines, found {len(lines) - 1}", m + 2)

    clauses: list[Clause] = []
    seen: dict[tuple[int, int, int], int] = {}
    for i, raw in enumerate(lines[1:], start=2):
        tokens = raw.split(" ")
        if len(tokens) != 4 or any(t == "" for t in tokens):
            raise ParseError(f"bad clause line {raw!r}", i)
        try:
            a, b, c, rhs = (int(t) for t in tokens)
        except ValueError:
            raise ParseError(f"bad token in {raw!r}", i) from None
        if rhs not in (0, 1):
            raise ParseError(f"rhs must be 0 or 1, got {rhs}", i)
        if not (a < b < c):
            raise ParseError(f"unsorted triple ({a}, {b}, {c})", i)
        if a < 0 or c >= n:
            raise ParseError(f"variable index outside [0, {n}) in ({a}, {b}, {c})", i)
        if (a, b, c) in seen:
            raise ParseError(f"duplicate triple ({a}, {b}, {c}), first at line {seen[(a, b, c)]}", i)
        seen[(a, b, c)] = i
        clauses.append(Clause(a, b, c, rhs))
    return Instance(n=n, clauses=tuple(clauses))


def serialize(instance: Instance) -> str:
    """Emit the file format bit-exactly: header plus one line per clause."""
    parts = [f"e3lin2 {instance.n} {instance.m}\n"]
    for cl in instance.clauses:
        parts.append(f"{cl.a} {cl.b} {cl.c} {cl.rhs}\n")
    return "".join(parts)
