"""Unlimited register machine: programs, evaluation, and certificates.

The package splits into small layers: `machine` holds instruction and
configuration types, `evaluator` runs programs concretely, `constraints`
decides difference-bound entailment over symbolic register values,
`certificates` checks divergence and termination certificates by
symbolic execution, `textio` parses the on-disk formats, and `cli` is
the command-line front end.
"""

from .certificates import (
    EXIT_DOES_NOT_HALT,
    HALTED_DURING_LOOP,
    INVARIANT_NOT_ESTABLISHED,
    INVARIANT_NOT_PRESERVED,
    LOOP_NOT_CLOSED,
    PREFIX_FAILED,
    RANKING_NOT_DECREASING,
    RANKING_NOT_NONNEGATIVE,
    UNDECIDED_BRANCH,
    CertReport,
    DivergenceCert,
    Reason,
    SymState,
    TerminationCert,
    Undecided,
    check_divergence,
    check_termination,
    sym_step,
)
from .constraints import (
    Atom,
    Const,
    ConstraintSet,
    SymValue,
    VarPlus,
    decide_eq,
    entails,
    eval_atom,
    format_atom,
    reg_var,
    satisfies,
    substitute,
)
from .errors import (
    Incompatible,
    NotAbstractProgram,
    NotStandardForm,
    PcOutOfRange,
    SourceError,
    UnsupportedAtom,
    URMError,
)
from .evaluator import (
    AbstractVerdict,
    Converges,
    Diverges,
    Halt,
    Halted,
    MachineState,
    Next,
    Outcome,
    OutOfFuel,
    StepResult,
    decide_abstract,
    run,
    run_finite,
    step,
    trace,
)
from .machine import (
    Config,
    FiniteConfig,
    Instruction,
    Jump,
    Program,
    Succ,
    Transfer,
    Zero,
    compatible,
    include,
    is_standard_form,
    mv,
    restrict,
    rho,
    sc,
    zr,
)
from .textio import format_config, parse_cert, parse_config, parse_program, print_program

__all__ = [
    "Atom",
    "AbstractVerdict",
    "CertReport",
    "Config",
    "Const",
    "ConstraintSet",
    "Converges",
    "DivergenceCert",
    "Diverges",
    "EXIT_DOES_NOT_HALT",
    "FiniteConfig",
    "HALTED_DURING_LOOP",
    "Halt",
    "Halted",
    "INVARIANT_NOT_ESTABLISHED",
    "INVARIANT_NOT_PRESERVED",
    "Incompatible",
    "Instruction",
    "Jump",
    "LOOP_NOT_CLOSED",
    "MachineState",
    "Next",
    "NotAbstractProgram",
    "NotStandardForm",
    "OutOfFuel",
    "Outcome",
    "PREFIX_FAILED",
    "PcOutOfRange",
    "Program",
    "RANKING_NOT_DECREASING",
    "RANKING_NOT_NONNEGATIVE",
    "Reason",
    "SourceError",
    "StepResult",
    "Succ",
    "SymState",
    "SymValue",
    "TerminationCert",
    "Transfer",
    "UNDECIDED_BRANCH",
    "URMError",
    "Undecided",
    "UnsupportedAtom",
    "VarPlus",
    "Zero",
    "check_divergence",
    "check_termination",
    "compatible",
    "decide_abstract",
    "decide_eq",
    "entails",
    "eval_atom",
    "format_atom",
    "format_config",
    "include",
    "is_standard_form",
    "mv",
    "parse_cert",
    "parse_config",
    "parse_program",
    "print_program",
    "reg_var",
    "restrict",
    "rho",
    "run",
    "run_finite",
    "satisfies",
    "sc",
    "step",
    "substitute",
    "sym_step",
    "trace",
    "zr",
]
