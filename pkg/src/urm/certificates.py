"""Machine-checkable divergence and termination certificates.

Both certificate kinds describe a lasso: a prefix run from the first
instruction to a loop head, then a loop body that returns to the head.
The prefix is executed symbolically from the certified initial contents
under the parameter constraints.  The loop body is then re-executed from
a fresh symbolic state constrained only by the loop invariant, so
accepting it proves something about every state satisfying the
invariant, not just the states the prefix happens to reach.

For divergence the invariant must be re-established when the body comes
back to the head; because the body takes at least one step, an accepted
certificate denotes an infinite run.  For termination the body is
checked twice, split by a threshold on a register difference: under the
continue case the invariant must be preserved and the ranking register
difference must be nonnegative and strictly decrease, and under the
exit case the program must halt within the step bound.  The two cases
cover all values, so together they prove the loop exits.

Rejection reports carry a single reason code and, where useful, the
offending program position or invariant atom.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .constraints import (
    Atom,
    Const,
    ConstraintSet,
    SymValue,
    VarPlus,
    decide_eq,
    entails,
    parse_reg_var,
    reg_var,
    substitute,
    _parts,
)
from .errors import NotStandardForm, PcOutOfRange
from .machine import Jump, Program, Succ, Transfer, Zero, is_standard_form, rho

PREFIX_FAILED = "PrefixFailed"
UNDECIDED_BRANCH = "UndecidedBranch"
HALTED_DURING_LOOP = "HaltedDuringLoop"
LOOP_NOT_CLOSED = "LoopNotClosed"
INVARIANT_NOT_ESTABLISHED = "InvariantNotEstablished"
INVARIANT_NOT_PRESERVED = "InvariantNotPreserved"
RANKING_NOT_NONNEGATIVE = "RankingNotNonnegative"
RANKING_NOT_DECREASING = "RankingNotDecreasing"
EXIT_DOES_NOT_HALT = "ExitDoesNotHalt"


@dataclass(frozen=True)
class SymState:
    """Symbolic configuration: position plus per-register symbolic values."""

    pc: int
    regs: dict[int, SymValue]

    def value(self, i: int) -> SymValue:
        return self.regs.get(i, Const(0))


@dataclass(frozen=True)
class Next:
    state: SymState
    rule: str


@dataclass(frozen=True)
class Halt:
    state: SymState
    rule: str


@dataclass(frozen=True)
class Undecided:
    pc: int
    i: int
    j: int


SymStepResult = Union[Next, Halt, Undecided]


@dataclass(frozen=True)
class Reason:
    code: str
    pc: int | None = None
    atom: Atom | None = None


TrailEntry = tuple[int, str]


@dataclass(frozen=True)
class CertReport:
    accepted: bool
    trail: tuple[TrailEntry, ...] = ()
    reason: Reason | None = None


@dataclass(frozen=True)
class DivergenceCert:
    """Claim: from the certified initial contents the program never halts."""

    param_constraints: ConstraintSet
    init: Mapping[int, SymValue]
    loop_head: int
    invariant: tuple[Atom, ...]
    step_bound: int

    def __post_init__(self) -> None:
        _check_common(self)


@dataclass(frozen=True)
class TerminationCert:
    """Claim: from the certified initial contents the program halts.

    `split` is a register pair with a threshold (x, y, k); the continue
    case assumes r_x - r_y >= k+1 and the exit case r_x - r_y <= k.
    `ranking` names the register pair whose difference decreases.
    """

    param_constraints: ConstraintSet
    init: Mapping[int, SymValue]
    loop_head: int
    invariant: tuple[Atom, ...]
    split: tuple[int, int, int]
    ranking: tuple[int, int]
    step_bound: int

    def __post_init__(self) -> None:
        _check_common(self)
        for index in (*self.split[:2], *self.ranking):
            if index < 1:
                raise ValueError("registers are indexed from 1")
        if self.split[2] < 0:
            raise ValueError("split threshold is a natural")

    def continue_atom(self) -> Atom:
        x, y, k = self.split
        return Atom(reg_var(x), reg_var(y), ">=", k + 1)

    def exit_atom(self) -> Atom:
        x, y, k = self.split
        return Atom(reg_var(x), reg_var(y), "<=", k)


Cert = Union[DivergenceCert, TerminationCert]


def _check_common(cert: Cert) -> None:
    if cert.loop_head < 1:
        raise PcOutOfRange("loop head is indexed from 1")
    if cert.step_bound < 1:
        raise ValueError("step bound must be positive")
    for index in cert.init:
        if index < 1:
            raise ValueError("registers are indexed from 1")


def sym_step(p: Program, s: SymState, cs: ConstraintSet) -> SymStepResult:
    """One symbolic step; mirrors the concrete step relation.

    Jumps are resolved by three-valued equality of the compared values
    under `cs`; an unresolved comparison yields Undecided.  The rule
    field names the applied evaluation rule, e.g. "s·r" for a non-final
    increment or "jt·l" for a taken jump to position 0.
    """
    if not is_standard_form(p):
        raise NotStandardForm("symbolic execution requires standard form")
    n = len(p)
    if not 1 <= s.pc <= n:
        raise PcOutOfRange(f"position {s.pc} outside 1..{n}")
    instr = p.at(s.pc)
    last = s.pc == n
    if isinstance(instr, Jump):
        eq = decide_eq(s.value(instr.i), s.value(instr.j), cs)
        if eq is None:
            return Undecided(s.pc, instr.i, instr.j)
        if eq:
            if instr.k == 0:
                return Halt(s, "jt·l")
            return Next(SymState(instr.k, s.regs), "jt·r")
        if last:
            return Halt(s, "jf·l")
        return Next(SymState(s.pc + 1, s.regs), "jf·r")
    regs = dict(s.regs)
    if isinstance(instr, Zero):
        regs[instr.i] = Const(0)
        tag = "z"
    elif isinstance(instr, Succ):
        var, offset = _parts(s.value(instr.i))
        regs[instr.i] = Const(offset + 1) if var is None else VarPlus(var, offset + 1)
        tag = "s"
    elif isinstance(instr, Transfer):
        regs[instr.j] = s.value(instr.i)
        tag = "t"
    else:
        raise TypeError(f"unknown instruction {instr!r}")
    if last:
        return Halt(SymState(s.pc, regs), f"{tag}·l")
    return Next(SymState(s.pc + 1, regs), f"{tag}·r")


def _cert_registers(cert: Cert) -> set[int]:
    out = set(cert.init)
    for a in cert.invariant:
        out |= _atom_registers(a)
    if isinstance(cert, TerminationCert):
        out |= set(cert.split[:2]) | set(cert.ranking)
    return out


def _atom_registers(a: Atom) -> set[int]:
    out: set[int] = set()
    for var in (a.x, a.y):
        if var is None:
            continue
        index = parse_reg_var(var)
        if index is None:
            raise ValueError(f"not a register operand: {var!r}")
        out.add(index)
    return out


def _universe(p: Program, cert: Cert) -> list[int]:
    return sorted(set(range(1, rho(p) + 1)) | _cert_registers(cert))


def _initial_state(p: Program, cert: Cert) -> SymState:
    regs = {i: cert.init.get(i, Const(0)) for i in _universe(p, cert)}
    return SymState(1, regs)


def _fresh_state(p: Program, cert: Cert) -> SymState:
    regs: dict[int, SymValue] = {i: VarPlus(f"_{reg_var(i)}") for i in _universe(p, cert)}
    return SymState(cert.loop_head, regs)


def _reject(code: str, pc: int | None = None, atom: Atom | None = None) -> CertReport:
    return CertReport(accepted=False, reason=Reason(code, pc=pc, atom=atom))


def _run_prefix(p: Program, s: SymState, cs: ConstraintSet, head: int, bound: int):
    for _ in range(bound):
        if s.pc == head:
            return s
        res = sym_step(p, s, cs)
        if isinstance(res, Undecided):
            return _reject(UNDECIDED_BRANCH, pc=res.pc)
        if isinstance(res, Halt):
            return _reject(PREFIX_FAILED)
        s = res.state
    if s.pc == head:
        return s
    return _reject(PREFIX_FAILED)


def _run_loop(p: Program, s: SymState, cs: ConstraintSet, head: int, bound: int):
    """Run from the head until it is reached again; at least one step."""
    trail: list[TrailEntry] = []
    for _ in range(bound):
        res = sym_step(p, s, cs)
        if isinstance(res, Undecided):
            return _reject(UNDECIDED_BRANCH, pc=res.pc), trail
        if isinstance(res, Halt):
            trail.append((s.pc, res.rule))
            return _reject(HALTED_DURING_LOOP, pc=s.pc), trail
        trail.append((s.pc, res.rule))
        s = res.state
        if s.pc == head:
            return s, trail
    return _reject(LOOP_NOT_CLOSED), trail


def _run_to_halt(p: Program, s: SymState, cs: ConstraintSet, bound: int):
    trail: list[TrailEntry] = []
    for _ in range(bound):
        res = sym_step(p, s, cs)
        if isinstance(res, Undecided):
            return _reject(UNDECIDED_BRANCH, pc=res.pc), trail
        trail.append((s.pc, res.rule))
        if isinstance(res, Halt):
            return None, trail
        s = res.state
    return _reject(EXIT_DOES_NOT_HALT), trail


def _enter_loop(p: Program, cert: Cert):
    """Prefix phase: reach the head and establish the invariant there."""
    if not is_standard_form(p):
        raise NotStandardForm("certificates require a standard-form program")
    if cert.loop_head > len(p):
        raise PcOutOfRange(f"loop head {cert.loop_head} outside 1..{len(p)}")
    res = _run_prefix(p, _initial_state(p, cert), cert.param_constraints, cert.loop_head, cert.step_bound)
    if isinstance(res, CertReport):
        return res
    for a in cert.invariant:
        if not entails(cert.param_constraints, substitute(a, res.regs)):
            return _reject(INVARIANT_NOT_ESTABLISHED, atom=a)
    return res


def check_divergence(p: Program, cert: DivergenceCert) -> CertReport:
    """Accept iff the certified lasso proves the program never halts."""
    entered = _enter_loop(p, cert)
    if isinstance(entered, CertReport):
        return entered
    start = _fresh_state(p, cert)
    cs = ConstraintSet(frozenset(substitute(a, start.regs) for a in cert.invariant))
    res, trail = _run_loop(p, start, cs, cert.loop_head, cert.step_bound)
    if isinstance(res, CertReport):
        return res
    for a in cert.invariant:
        if not entails(cs, substitute(a, res.regs)):
            return _reject(INVARIANT_NOT_PRESERVED, atom=a)
    return CertReport(accepted=True, trail=tuple(trail))


def _combo_le(cs: ConstraintSet, terms: Iterable[tuple[str | None, int]], bound: int) -> bool:
    """Entailment of sum(coeff * var) <= bound, within the bound fragment."""
    coeffs: dict[str, int] = {}
    for var, coeff in terms:
        if var is None:
            continue
        coeffs[var] = coeffs.get(var, 0) + coeff
    coeffs = {v: c for v, c in coeffs.items() if c != 0}
    if not coeffs:
        return 0 <= bound
    if len(coeffs) == 1:
        ((var, coeff),) = coeffs.items()
        if coeff == 1:
            return entails(cs, Atom(var, None, "<=", bound))
        if coeff == -1:
            return entails(cs, Atom(None, var, "<=", bound))
        return False
    if len(coeffs) == 2:
        (v1, c1), (v2, c2) = coeffs.items()
        if c1 == 1 and c2 == -1:
            return entails(cs, Atom(v1, v2, "<=", bound))
        if c1 == -1 and c2 == 1:
            return entails(cs, Atom(v2, v1, "<=", bound))
    return False


def _rank_decreases(cs: ConstraintSet, before: tuple[SymValue, SymValue], after: tuple[SymValue, SymValue]) -> bool:
    """Entailment of rank(after) <= rank(before) - 1."""
    (avx, acx), (avy, acy) = _parts(after[0]), _parts(after[1])
    (bvx, bcx), (bvy, bcy) = _parts(before[0]), _parts(before[1])
    constant = acx - acy - bcx + bcy
    terms = [(avx, 1), (avy, -1), (bvx, -1), (bvy, 1)]
    return _combo_le(cs, terms, -1 - constant)


def check_termination(p: Program, cert: TerminationCert) -> CertReport:
    """Accept iff the certified lasso proves the program halts."""
    entered = _enter_loop(p, cert)
    if isinstance(entered, CertReport):
        return entered
    rank_atom = Atom(reg_var(cert.ranking[0]), reg_var(cert.ranking[1]), ">=", 0)

    start = _fresh_state(p, cert)
    inv_here = tuple(substitute(a, start.regs) for a in cert.invariant)
    cs_cont = ConstraintSet(frozenset(inv_here) | {substitute(cert.continue_atom(), start.regs)})
    res, cont_trail = _run_loop(p, start, cs_cont, cert.loop_head, cert.step_bound)
    if isinstance(res, CertReport):
        return res
    for a in cert.invariant:
        if not entails(cs_cont, substitute(a, res.regs)):
            return _reject(INVARIANT_NOT_PRESERVED, atom=a)
    if not entails(cs_cont, substitute(rank_atom, start.regs)):
        return _reject(RANKING_NOT_NONNEGATIVE)
    before = (start.value(cert.ranking[0]), start.value(cert.ranking[1]))
    after = (res.value(cert.ranking[0]), res.value(cert.ranking[1]))
    if not _rank_decreases(cs_cont, before, after):
        return _reject(RANKING_NOT_DECREASING)

    start = _fresh_state(p, cert)
    inv_here = tuple(substitute(a, start.regs) for a in cert.invariant)
    cs_exit = ConstraintSet(frozenset(inv_here) | {substitute(cert.exit_atom(), start.regs)})
    res, exit_trail = _run_to_halt(p, start, cs_exit, cert.step_bound)
    if res is not None:
        return res
    return CertReport(accepted=True, trail=tuple(cont_trail) + tuple(exit_trail))
