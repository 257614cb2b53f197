"""Register machine syntax and configurations.

The machine is the unlimited register machine: infinitely many
registers holding naturals, and four instructions.  `Zero(i)` stores 0 in
register i, `Succ(i)` increments register i, `Transfer(i, j)` copies
register i into register j, and `Jump(i, j, k)` transfers control to
instruction k when registers i and j hold the same value (k = 0 is the
halt target).

Two configuration views exist.  `Config` is the total valuation of all
registers, kept as a finite map with default 0; because zero entries are
never stored, map equality coincides with valuation equality.
`FiniteConfig` is the plain list view covering registers 1..m; it only
couples soundly with a program whose register operands all fall inside
1..m, which is what `compatible` checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Union


def _check_register(value: int, what: str = "register index") -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 1:
        raise ValueError(f"{what} must be a positive integer, got {value!r}")


def _check_natural(value: int, what: str) -> None:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise ValueError(f"{what} must be a natural number, got {value!r}")


@dataclass(frozen=True)
class Zero:
    i: int

    def __post_init__(self) -> None:
        _check_register(self.i)


@dataclass(frozen=True)
class Succ:
    i: int

    def __post_init__(self) -> None:
        _check_register(self.i)


@dataclass(frozen=True)
class Transfer:
    i: int
    j: int

    def __post_init__(self) -> None:
        _check_register(self.i)
        _check_register(self.j)


@dataclass(frozen=True)
class Jump:
    i: int
    j: int
    k: int

    def __post_init__(self) -> None:
        _check_register(self.i)
        _check_register(self.j)
        _check_natural(self.k, "jump target")


Instruction = Union[Zero, Succ, Transfer, Jump]


@dataclass(frozen=True)
class Program:
    """A finite, non-empty instruction sequence; positions are 1-based."""

    instructions: tuple[Instruction, ...]

    def __post_init__(self) -> None:
        if not self.instructions:
            raise ValueError("a program must contain at least one instruction")
        for instr in self.instructions:
            if not isinstance(instr, (Zero, Succ, Transfer, Jump)):
                raise ValueError(f"not an instruction: {instr!r}")

    def __len__(self) -> int:
        return len(self.instructions)

    def at(self, pos: int) -> Instruction:
        """Instruction at 1-based position `pos`."""
        if not 1 <= pos <= len(self.instructions):
            raise IndexError(f"position {pos} not in [1..{len(self.instructions)}]")
        return self.instructions[pos - 1]

    def __iter__(self) -> Iterator[Instruction]:
        return iter(self.instructions)


class Config:
    """Total register valuation with finite support.

    Zero entries are dropped at construction, so two configs are equal
    exactly when they assign every register the same value.
    """

    __slots__ = ("_entries",)

    def __init__(self, entries: Mapping[int, int] | None = None):
        canon: dict[int, int] = {}
        for reg, val in (entries or {}).items():
            _check_register(reg)
            _check_natural(val, f"value of register {reg}")
            if val != 0:
                canon[reg] = val
        object.__setattr__(self, "_entries", canon)

    def get(self, i: int) -> int:
        _check_register(i)
        return self._entries.get(i, 0)

    def items(self) -> Iterator[tuple[int, int]]:
        return iter(sorted(self._entries.items()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Config):
            return NotImplemented
        return self._entries == other._entries

    def __hash__(self) -> int:
        return hash(frozenset(self._entries.items()))

    def __repr__(self) -> str:
        inner = ", ".join(f"{r}: {v}" for r, v in sorted(self._entries.items()))
        return f"Config({{{inner}}})"


EMPTY_CONFIG = Config()


@dataclass(frozen=True)
class FiniteConfig:
    """Register values for positions 1..m, m >= 1."""

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("a finite configuration must be non-empty")
        for pos, val in enumerate(self.values, start=1):
            _check_natural(val, f"value at position {pos}")

    def __len__(self) -> int:
        return len(self.values)

    def at(self, pos: int) -> int:
        if not 1 <= pos <= len(self.values):
            raise IndexError(f"position {pos} not in [1..{len(self.values)}]")
        return self.values[pos - 1]


def rho(p: Program) -> int:
    """Maximal register index mentioned by any instruction of `p`.

    A jump's target indexes instructions, not registers, so it is not
    counted.
    """
    best = 1
    for instr in p:
        if isinstance(instr, (Zero, Succ)):
            best = max(best, instr.i)
        else:
            best = max(best, instr.i, instr.j)
    return best


def is_standard_form(p: Program) -> bool:
    """True iff every jump target k satisfies k <= len(p)."""
    n = len(p)
    return all(instr.k <= n for instr in p if isinstance(instr, Jump))


def compatible(sigma: FiniteConfig, p: Program) -> bool:
    """True iff `p` is in standard form and touches only registers 1..m."""
    return is_standard_form(p) and rho(p) <= len(sigma)


def zr(c: Config, i: int) -> Config:
    """Config equal to `c` except register i holds 0."""
    _check_register(i)
    entries = dict(c._entries)
    entries.pop(i, None)
    return Config(entries)


def sc(c: Config, i: int) -> Config:
    """Config equal to `c` except register i is incremented."""
    _check_register(i)
    entries = dict(c._entries)
    entries[i] = entries.get(i, 0) + 1
    return Config(entries)


def mv(c: Config, i: int, j: int) -> Config:
    """Config equal to `c` except register j holds the value of register i."""
    _check_register(i)
    _check_register(j)
    entries = dict(c._entries)
    value = entries.get(i, 0)
    if value == 0:
        entries.pop(j, None)
    else:
        entries[j] = value
    return Config(entries)


def include(sigma: FiniteConfig) -> Config:
    """Embed a finite configuration: positions beyond m read as 0."""
    return Config({pos: val for pos, val in enumerate(sigma.values, start=1)})


def restrict(c: Config, p: Program) -> FiniteConfig:
    """Cut `c` down to the registers `p` can touch, positions 1..rho(p)."""
    m = rho(p)
    return FiniteConfig(tuple(c.get(i) for i in range(1, m + 1)))
