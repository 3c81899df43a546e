"""Stack-machine backend: compile expression trees to flat programs.

Instruction set (operand stack before -> after; F is the current frame):

    LOAD_ARG i        []            -> [F.args[i]]
    LOAD_CONST k      []            -> [constants[k]]
    CALL_PRIM name    [a]           -> [builtin(a)]
    CALL_LEAF t, n    [a1 .. an]    -> [leaf_t(a1 .. an)]
    BINARY op         [a b]         -> [a op b]
    NEGATE            [a]           -> [-a]
    BEGIN_FRAME m     [a1 .. am]    -> []   pushes frame with args (a1 .. am)
    END_FRAME         []            -> []   pops the current frame

Compilation is a direct post-order flattening with no constant folding or
CSE, so a program performs the same IEEE operations in the same order as
the tree walker.  A composition node compiles to its argument
sub-programs followed by BEGIN_FRAME, the callee code, and END_FRAME;
frames live on their own stack, so composition depth is unbounded.
Programs are immutable and re-entrant: concurrent runs are safe.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Sequence

from .algebra import Apply, Arity, BinOp, Const, FuncExpr, Leaf, Neg, Prim, evaluate
from .errors import (
    ArityMismatchError,
    BackendMismatchError,
    FuncalgError,
    InvalidProgramError,
)
from .values import ArithOp, BUILTIN_NAMES, Value, apply_builtin, format_value, same_value, value_binop, value_neg


class Op(Enum):
    LOAD_ARG = "load_arg"
    LOAD_CONST = "load_const"
    CALL_PRIM = "call_prim"
    CALL_LEAF = "call_leaf"
    BINARY = "binary"
    NEGATE = "negate"
    BEGIN_FRAME = "begin_frame"
    END_FRAME = "end_frame"


class Instr(NamedTuple):
    op: Op
    a: object = None  # index, builtin name, or ArithOp
    b: int | None = None  # argument count for CALL_LEAF


@dataclass(frozen=True)
class Program:
    """A compiled expression: instructions, constant pool and leaf table."""

    instructions: tuple[Instr, ...]
    constants: tuple[Value, ...]
    leaves: tuple[Leaf, ...]
    arity: Arity

    def validate(self) -> None:
        """Static stack-discipline check: every instruction stays in bounds
        and execution leaves exactly one value with all frames popped."""
        depth = 0
        frames: list[Arity] = []
        entry_depths: list[int] = []

        def fail(ip: int, why: str):
            raise InvalidProgramError(f"instruction {ip}: {why}")

        for ip, ins in enumerate(self.instructions):
            current = frames[-1] if frames else self.arity
            if ins.op is Op.LOAD_ARG:
                if not isinstance(ins.a, int) or ins.a < 0:
                    fail(ip, "bad argument index")
                if current.n is None:
                    fail(ip, "argument load in a polymorphic frame")
                if ins.a >= current.n:
                    fail(ip, f"argument index {ins.a} outside frame arity {current.n}")
                depth += 1
            elif ins.op is Op.LOAD_CONST:
                if not isinstance(ins.a, int) or not 0 <= ins.a < len(self.constants):
                    fail(ip, "constant index out of range")
                depth += 1
            elif ins.op is Op.CALL_PRIM:
                if ins.a not in BUILTIN_NAMES:
                    fail(ip, f"unknown builtin {ins.a!r}")
                if depth < 1:
                    fail(ip, "stack underflow")
            elif ins.op is Op.CALL_LEAF:
                if not isinstance(ins.a, int) or not 0 <= ins.a < len(self.leaves):
                    fail(ip, "leaf index out of range")
                if ins.b != self.leaves[ins.a].arity.n:
                    fail(ip, "argument count does not match leaf arity")
                if depth < ins.b:
                    fail(ip, "stack underflow")
                depth -= ins.b - 1
            elif ins.op is Op.BINARY:
                if not isinstance(ins.a, ArithOp):
                    fail(ip, "bad operator payload")
                if depth < 2:
                    fail(ip, "stack underflow")
                depth -= 1
            elif ins.op is Op.NEGATE:
                if depth < 1:
                    fail(ip, "stack underflow")
            elif ins.op is Op.BEGIN_FRAME:
                if not isinstance(ins.a, int) or ins.a < 1:
                    fail(ip, "bad frame arity")
                if depth < ins.a:
                    fail(ip, "stack underflow")
                depth -= ins.a
                frames.append(Arity(ins.a))
                entry_depths.append(depth)
            elif ins.op is Op.END_FRAME:
                if not frames:
                    fail(ip, "no frame to pop")
                frames.pop()
                if depth != entry_depths.pop() + 1:
                    fail(ip, "frame body did not leave exactly one value")
            else:  # pragma: no cover - enum is closed
                fail(ip, f"unknown opcode {ins.op}")
        if frames:
            raise InvalidProgramError("unbalanced frames at end of program")
        if depth != 1:
            raise InvalidProgramError(
                f"program leaves {depth} values on the stack, expected 1"
            )


def compile_expr(e: FuncExpr) -> Program:
    """Flatten a tree post-order into a validated Program."""
    code: list[Instr] = []
    constants: list[Value] = []
    leaves: list[Leaf] = []

    def emit(node: FuncExpr) -> None:
        match node:
            case Const():
                code.append(Instr(Op.LOAD_CONST, len(constants)))
                constants.append(node.v)
            case Leaf():
                n = node.arity.n
                for i in range(n):
                    code.append(Instr(Op.LOAD_ARG, i))
                code.append(Instr(Op.CALL_LEAF, len(leaves), n))
                leaves.append(node)
            case Prim():
                code.append(Instr(Op.LOAD_ARG, 0))
                code.append(Instr(Op.CALL_PRIM, node.name))
            case BinOp():
                emit(node.e1)
                emit(node.e2)
                code.append(Instr(Op.BINARY, node.op))
            case Neg():
                emit(node.e)
                code.append(Instr(Op.NEGATE))
            case Apply():
                for a in node.args:
                    emit(a)
                code.append(Instr(Op.BEGIN_FRAME, len(node.args)))
                emit(node.callee)
                code.append(Instr(Op.END_FRAME))
            case _:
                raise TypeError(f"not a function expression: {node!r}")

    emit(e)
    program = Program(tuple(code), tuple(constants), tuple(leaves), e.arity)
    program.validate()
    return program


def run(p: Program, args: Sequence[Value]) -> Value:
    """Execute a program on an argument list; equals evaluate() on the
    source tree exactly.  Evaluation errors carry the instruction index."""
    argtuple = tuple(args)
    if not p.arity.accepts(len(argtuple)):
        raise ArityMismatchError(
            f"program expects {p.arity} argument(s), got {len(argtuple)}"
        )
    stack: list[Value] = []
    frames: list[tuple[Value, ...]] = [argtuple]
    for ip, ins in enumerate(p.instructions):
        try:
            op = ins.op
            if op is Op.LOAD_ARG:
                stack.append(frames[-1][ins.a])
            elif op is Op.LOAD_CONST:
                stack.append(p.constants[ins.a])
            elif op is Op.CALL_PRIM:
                stack[-1] = apply_builtin(ins.a, stack[-1])
            elif op is Op.CALL_LEAF:
                vals = stack[-ins.b :]
                del stack[-ins.b :]
                stack.append(p.leaves[ins.a].body(*vals))
            elif op is Op.BINARY:
                b = stack.pop()
                stack[-1] = value_binop(ins.a, stack[-1], b)
            elif op is Op.NEGATE:
                stack[-1] = value_neg(stack[-1])
            elif op is Op.BEGIN_FRAME:
                frame = tuple(stack[-ins.a :])
                del stack[-ins.a :]
                frames.append(frame)
            else:  # END_FRAME
                frames.pop()
        except FuncalgError as err:
            raise type(err)(f"instruction {ip}: {err}") from err
    if len(stack) != 1:  # pragma: no cover - validate() rules this out
        raise InvalidProgramError(f"program left {len(stack)} values on the stack")
    return stack[0]


# ---------------------------------------------------------------------------
# Benchmarking the two backends against each other.

@dataclass(frozen=True)
class BenchReport:
    backend: str
    iterations: int
    total_ns: int
    mean_ns: float
    result: Value

    def as_dict(self, digits: int = 7) -> dict:
        return {
            "backend": self.backend,
            "iterations": self.iterations,
            "total_ns": self.total_ns,
            "mean_ns": self.mean_ns,
            "result": format_value(self.result, digits),
        }

    def as_json(self, digits: int = 7) -> str:
        return json.dumps(self.as_dict(digits))


def bench(
    e: FuncExpr, args: Sequence[Value], iterations: int = 100_000
) -> tuple[BenchReport, BenchReport]:
    """Time tree-walking vs compiled evaluation on identical inputs.

    A warm-up run of both backends happens before timing, so evaluation
    errors propagate untimed; the backends' results must agree."""
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    argtuple = tuple(args)
    program = compile_expr(e)

    tree_result = evaluate(e, argtuple)
    vm_result = run(program, argtuple)
    if not same_value(tree_result, vm_result):
        raise BackendMismatchError(
            f"backends disagree: tree={format_value(tree_result, 17)} "
            f"vm={format_value(vm_result, 17)}"
        )

    t0 = time.perf_counter_ns()
    for _ in range(iterations):
        evaluate(e, argtuple)
    tree_ns = time.perf_counter_ns() - t0

    t0 = time.perf_counter_ns()
    for _ in range(iterations):
        run(program, argtuple)
    vm_ns = time.perf_counter_ns() - t0

    return (
        BenchReport("tree", iterations, tree_ns, tree_ns / iterations, tree_result),
        BenchReport("vm", iterations, vm_ns, vm_ns / iterations, vm_result),
    )
