"""OpenQASM 2.0 subset: one ``qreg``, qelib1 gate statements, ``barrier``.

No gate definitions, measurements, classical registers or ``if``.
"""

from __future__ import annotations

import math
import re

from .circuit import Kernel
from .statevector import GATE_ARITY, GateInstruction

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

# kind -> qasm name, for everything the emitter writes
EMIT_NAMES = {
    "X": "x",
    "H": "h",
    "RY": "ry",
    "RZ": "rz",
    "Phase": "u1",
    "CX": "cx",
    "Toffoli": "ccx",
    "SWAP": "swap",
    "CPhase": "cu1",
}

# qasm name -> kind; the parser also takes the remaining qelib1 spellings
# of the simulator's basic gates
PARSE_NAMES = {v: k for k, v in EMIT_NAMES.items()}
PARSE_NAMES.update(
    {"y": "Y", "z": "Z", "s": "S", "t": "T", "rx": "RX", "cz": "CZ", "p": "Phase", "cp": "CPhase"}
)


class UnsupportedGateError(ValueError):
    pass


class QasmError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col
        self.reason = message


def format_angle(theta: float) -> str:
    text = f"{theta:.17g}"
    if "e" not in text and "." not in text and "inf" not in text and "nan" not in text:
        text += ".0"
    return text


def emit_qasm(kernel: Kernel) -> str:
    lines = [HEADER.rstrip("\n"), f"qreg q[{kernel.num_qubits}];"]
    for inst in kernel.instructions:
        name = EMIT_NAMES.get(inst.kind)
        if name is None:
            raise UnsupportedGateError(f"gate {inst.kind} has no QASM spelling in this subset")
        args = ",".join(f"q[{q}]" for q in inst.qubits)
        if inst.theta is None:
            lines.append(f"{name} {args};")
        else:
            lines.append(f"{name}({format_angle(inst.theta)}) {args};")
    return "\n".join(lines) + "\n"


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>//[^\n]*)
  | (?P<nl>\n)
  | (?P<real>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"[^"\n]*")
  | (?P<op>->|==|[;,()\[\]{}+\-*/^])
    """,
    re.VERBOSE,
)


class _Tok:
    __slots__ = ("kind", "text", "line", "col")

    def __init__(self, kind: str, text: str, line: int, col: int):
        self.kind = kind
        self.text = text
        self.line = line
        self.col = col

    def __repr__(self) -> str:
        return f"{self.kind}:{self.text!r}@{self.line}:{self.col}"


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line, m.start() - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.reg_name: str | None = None
        self.reg_size = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def _fail(self, message: str, tok: _Tok | None = None):
        tok = tok or self.cur
        raise QasmError(message, tok.line, tok.col)

    def _advance(self) -> _Tok:
        tok = self.cur
        if tok.kind != "eof":
            self.i += 1
        return tok

    def _expect(self, text: str, what: str | None = None) -> _Tok:
        if self.cur.kind in ("string", "eof") or self.cur.text != text:
            found = "end of input" if self.cur.kind == "eof" else repr(self.cur.text)
            if text == ";" and self.i > 0:
                # report a missing terminator where the statement ended
                prev = self.toks[self.i - 1]
                if self.cur.kind == "eof" or self.cur.line != prev.line:
                    raise QasmError(
                        "expected ';' at end of statement",
                        prev.line,
                        prev.col + len(prev.text),
                    )
            self._fail(f"expected {what or repr(text)}, found {found}")
        return self._advance()

    def _expect_kind(self, kind: str, what: str) -> _Tok:
        if self.cur.kind != kind:
            found = "end of input" if self.cur.kind == "eof" else repr(self.cur.text)
            self._fail(f"expected {what}, found {found}")
        return self._advance()

    def parse(self) -> Kernel:
        self._header()
        insts: list[GateInstruction] = []
        while self.cur.kind != "eof":
            tok = self.cur
            if tok.kind != "id":
                self._fail(f"expected a statement, found {tok.text!r}")
            if tok.text == "include":
                self._fail("only one include is allowed, directly after the header")
            elif tok.text == "qreg":
                if self.reg_name is not None:
                    self._fail("only one qreg declaration is supported")
                self._qreg()
            elif tok.text == "barrier":
                self._advance()
                self._require_register(tok)
                self._operand_list(allow_whole=True)
                self._expect(";")
            elif tok.text in ("creg", "measure", "reset", "if", "gate", "opaque"):
                self._fail(f"{tok.text!r} is not supported in this QASM subset")
            else:
                insts.append(self._gate())
        if self.reg_name is None:
            self._fail("program declares no qreg")
        return Kernel("qasm", self.reg_size, tuple(insts))

    def _header(self) -> None:
        tok = self.cur
        if tok.text != "OPENQASM":
            self._fail("program must start with 'OPENQASM 2.0;'")
        self._advance()
        ver = self._expect_kind("real", "version number")
        if ver.text not in ("2.0", "2"):
            self._fail(f"unsupported OpenQASM version {ver.text}; only 2.0 is supported", ver)
        self._expect(";")
        if self.cur.text == "include":
            self._advance()
            path = self._expect_kind("string", "include path")
            if path.text != '"qelib1.inc"':
                self._fail(f"only \"qelib1.inc\" may be included, found {path.text}", path)
            self._expect(";")

    def _qreg(self) -> None:
        self._advance()
        name = self._expect_kind("id", "register name")
        self._expect("[")
        size = self._expect_kind("real", "register size")
        if not size.text.isdigit() or int(size.text) < 1:
            self._fail("register size must be a positive integer", size)
        self._expect("]")
        self._expect(";")
        self.reg_name = name.text
        self.reg_size = int(size.text)

    def _require_register(self, tok: _Tok) -> None:
        if self.reg_name is None:
            self._fail("gate used before the qreg declaration", tok)

    def _operand(self, allow_whole: bool = False) -> tuple[int, _Tok]:
        name = self._expect_kind("id", "qubit operand")
        if name.text != self.reg_name:
            self._fail(f"unknown register {name.text!r}", name)
        if self.cur.text != "[":
            if allow_whole:
                return -1, name
            self._fail("whole-register operands are not supported; index the qubit")
        self._advance()
        idx = self._expect_kind("real", "qubit index")
        if not idx.text.isdigit():
            self._fail("qubit index must be a non-negative integer", idx)
        q = int(idx.text)
        if q >= self.reg_size:
            self._fail(
                f"qubit index {q} out of range for register {self.reg_name}[{self.reg_size}]",
                idx,
            )
        self._expect("]")
        return q, name

    def _operand_list(self, allow_whole: bool = False) -> list[tuple[int, _Tok]]:
        ops = [self._operand(allow_whole)]
        while self.cur.text == ",":
            self._advance()
            ops.append(self._operand(allow_whole))
        return ops

    def _gate(self) -> GateInstruction:
        name = self._advance()
        kind = PARSE_NAMES.get(name.text)
        if kind is None:
            self._fail(f"unknown gate {name.text!r}", name)
        self._require_register(name)
        nc, nt, has_angle = GATE_ARITY[kind]
        theta = None
        if self.cur.text == "(":
            if not has_angle:
                self._fail(f"gate {name.text!r} takes no parameters")
            self._advance()
            theta = self._expr()
            self._expect(")")
        elif has_angle:
            self._fail(f"gate {name.text!r} needs an angle parameter")
        ops = self._operand_list()
        if len(ops) != nc + nt:
            self._fail(
                f"gate {name.text!r} takes {nc + nt} qubit(s), got {len(ops)}", name
            )
        qubits = [q for q, _ in ops]
        if len(set(qubits)) != len(qubits):
            self._fail(f"gate {name.text!r} has repeated qubit operands", name)
        self._expect(";")
        return GateInstruction(kind, tuple(qubits), theta)

    # expression grammar: sum := term (('+'|'-') term)* ; term := unary (('*'|'/') unary)*
    # unary := '-' unary | power ; power := atom ('^' unary)?
    def _expr(self) -> float:
        val = self._term()
        while self.cur.text in ("+", "-"):
            op = self._advance().text
            rhs = self._term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def _term(self) -> float:
        val = self._unary()
        while self.cur.text in ("*", "/"):
            op = self._advance()
            rhs = self._unary()
            if op.text == "/":
                if rhs == 0:
                    self._fail("division by zero in angle expression", op)
                val = val / rhs
            else:
                val = val * rhs
        return val

    def _unary(self) -> float:
        if self.cur.text == "-":
            self._advance()
            return -self._unary()
        if self.cur.text == "+":
            self._advance()
            return self._unary()
        base = self._atom()
        if self.cur.text == "^":
            self._advance()
            return base ** self._unary()
        return base

    _FUNCS = {
        "sin": math.sin,
        "cos": math.cos,
        "tan": math.tan,
        "exp": math.exp,
        "ln": math.log,
        "sqrt": math.sqrt,
    }

    def _atom(self) -> float:
        tok = self.cur
        if tok.kind == "real":
            self._advance()
            return float(tok.text)
        if tok.text == "pi":
            self._advance()
            return math.pi
        if tok.kind == "id" and tok.text in self._FUNCS:
            self._advance()
            self._expect("(")
            arg = self._expr()
            self._expect(")")
            try:
                return self._FUNCS[tok.text](arg)
            except ValueError:
                self._fail(f"math domain error in {tok.text}()", tok)
        if tok.text == "(":
            self._advance()
            val = self._expr()
            self._expect(")")
            return val
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        self._fail(f"expected a number or expression, found {found}")


def parse_qasm(text: str) -> Kernel:
    return _Parser(text).parse()
