"""Concrete syntax: a hand-rolled tokenizer/parser and a canonical printer.

Programs (`.lp`):   rule := head [":-" body] "." ; head := atom ("|" atom)* ;
                    body := lit ("," lit)* ; lit := atom | "not" atom.
Theories (`.fot`):  statements are sentences ended by "." with precedence
                    (tightest first)  L,  -,  &,  |,  ->  (right-assoc),
                    quantifiers "forall"/"exists" Var ("," Var)* "." and
                    equality "=" with sugar "!=".

Variables match [A-Z][A-Za-z0-9_]*, predicate/constant/function symbols
[a-z][A-Za-z0-9_]*, `%` starts a line comment.  `#const a.` adds a constant
to a program signature without using it.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional, Union

from .errors import ParseError, SemanticError
from . import syntax as S
from .syntax import (
    And, BeliefKernel, Const, Eq, Exists, Forall, Formula, Func, Implies,
    Modal, Neq, Not, Or, Pred, Program, Rule, Term, Theory, Var,
)

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>%[^\n]*)
      | (?P<arrow>->)
      | (?P<ifsym>:-)
      | (?P<neq>!=)
      | (?P<punct>[().,|&=\-\#])
      | (?P<uident>[A-Z][A-Za-z0-9_]*)
      | (?P<lident>[a-z][A-Za-z0-9_]*)
    """,
    re.VERBOSE,
)

_RESERVED_LOWER = {"not", "forall", "exists"}


@dataclass(frozen=True)
class _Tok:
    kind: str  # one of arrow ifsym neq punct uident lident eof
    text: str
    line: int
    col: int


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(line, col, f"a token (found {text[pos]!r})")
        kind = m.lastgroup or ""
        chunk = m.group(0)
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, chunk, line, col))
        nl = chunk.count("\n")
        if nl:
            line += nl
            col = len(chunk) - chunk.rfind("\n")
        else:
            col += len(chunk)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, expected: str) -> ParseError:
        t = self.peek()
        found = t.text or "end of input"
        return ParseError(t.line, t.col, f"{expected} (found {found!r})")

    def expect(self, kind: str, text: Optional[str] = None, what: Optional[str] = None) -> _Tok:
        t = self.peek()
        if t.kind != kind or (text is not None and t.text != text):
            raise self.fail(what or (text or kind))
        return self.next()

    def at(self, kind: str, text: Optional[str] = None) -> bool:
        t = self.peek()
        return t.kind == kind and (text is None or t.text == text)

    # -- terms -------------------------------------------------------------

    def parse_term(self) -> Term:
        t = self.peek()
        if t.kind == "uident":
            if t.text == "L":
                raise self.fail("a term ('L' is reserved)")
            self.next()
            return Var(t.text)
        if t.kind == "lident":
            if t.text in _RESERVED_LOWER:
                raise self.fail(f"a term ({t.text!r} is reserved)")
            self.next()
            if self.at("punct", "("):
                self.next()
                args = [self.parse_term()]
                while self.at("punct", ","):
                    self.next()
                    args.append(self.parse_term())
                self.expect("punct", ")")
                return Func(t.text, tuple(args))
            return Const(t.text)
        raise self.fail("a term")

    def parse_program_atom(self) -> Pred:
        t = self.expect("lident", what="a predicate symbol")
        if t.text in _RESERVED_LOWER:
            raise ParseError(t.line, t.col, f"a predicate symbol ({t.text!r} is reserved)")
        args: tuple[Term, ...] = ()
        if self.at("punct", "("):
            self.next()
            parts = [self.parse_term()]
            while self.at("punct", ","):
                self.next()
                parts.append(self.parse_term())
            self.expect("punct", ")")
            args = tuple(parts)
        return Pred(t.text, args)

    # -- theory formulas ----------------------------------------------------

    def parse_formula(self) -> Formula:
        return self._implication()

    def _implication(self) -> Formula:
        left = self._disjunction()
        if self.at("arrow"):
            self.next()
            return Implies(left, self._implication())
        return left

    def _disjunction(self) -> Formula:
        out = self._conjunction()
        while self.at("punct", "|"):
            self.next()
            out = Or(out, self._conjunction())
        return out

    def _conjunction(self) -> Formula:
        out = self._unary()
        while self.at("punct", "&"):
            self.next()
            out = And(out, self._unary())
        return out

    def _unary(self) -> Formula:
        if self.at("punct", "-"):
            self.next()
            return Not(self._unary())
        if self.at("uident", "L"):
            self.next()
            return Modal(self._unary())
        return self._primary()

    def _primary(self) -> Formula:
        t = self.peek()
        if t.kind == "punct" and t.text == "(":
            self.next()
            phi = self.parse_formula()
            self.expect("punct", ")")
            return self._maybe_equality(phi)
        if t.kind == "lident" and t.text in ("forall", "exists"):
            self.next()
            vars_ = [self.expect("uident", what="a variable").text]
            while self.at("punct", ","):
                self.next()
                vars_.append(self.expect("uident", what="a variable").text)
            self.expect("punct", ".", what="'.' after quantified variables")
            body = self.parse_formula()
            node = Forall if t.text == "forall" else Exists
            for v in reversed(vars_):
                body = node(v, body)
            return body
        term = self.parse_term()
        if self.at("punct", "=") or self.at("neq"):
            op = self.next()
            rhs = self.parse_term()
            return Eq(term, rhs) if op.text == "=" else Neq(term, rhs)
        if isinstance(term, Const):
            return Pred(term.name)
        if isinstance(term, Func):
            return Pred(term.name, term.args)
        raise self.fail("a predicate or an equality")

    def _maybe_equality(self, phi: Formula) -> Formula:
        # "(a) = b" is not in the grammar; parenthesised formulas stand alone.
        if self.at("punct", "=") or self.at("neq"):
            raise self.fail("'.' or a connective")
        return phi


def parse_program(text: str) -> Program:
    """Parse a rule program; the signature is derived from the symbols used
    plus any `#const` declarations."""
    p = _Parser(text)
    rules: list[Rule] = []
    extra_constants: list[str] = []
    while not p.at("eof"):
        if p.at("punct", "#"):
            p.next()
            kw = p.expect("lident", what="'const'")
            if kw.text != "const":
                raise ParseError(kw.line, kw.col, "'const'")
            c = p.expect("lident", what="a constant symbol")
            extra_constants.append(c.text)
            p.expect("punct", ".", what="'.'")
            continue
        head = [p.parse_program_atom()]
        while p.at("punct", "|"):
            p.next()
            head.append(p.parse_program_atom())
        pos: list[Pred] = []
        neg: list[Pred] = []
        if p.at("ifsym"):
            p.next()
            while True:
                if p.at("lident", "not"):
                    p.next()
                    neg.append(p.parse_program_atom())
                else:
                    pos.append(p.parse_program_atom())
                if p.at("punct", ","):
                    p.next()
                    continue
                break
        p.expect("punct", ".", what="'.' at end of rule")
        rules.append(Rule(tuple(head), tuple(pos), tuple(neg)))
    return Program.of(rules, extra_constants)


def parse_theory(text: str) -> Theory:
    """Parse a theory of sentences; free variables are a SemanticError."""
    p = _Parser(text)
    formulas: list[Formula] = []
    while not p.at("eof"):
        phi = p.parse_formula()
        p.expect("punct", ".", what="'.' at end of sentence")
        fv = S.free_vars(phi)
        if fv:
            raise SemanticError(f"free variables in sentence: {sorted(fv)}")
        formulas.append(phi)
    return Theory(tuple(formulas))


def parse_formula(text: str) -> Formula:
    """Parse a single formula (open formulas allowed), without trailing '.'."""
    p = _Parser(text)
    phi = p.parse_formula()
    if p.at("punct", "."):
        p.next()
    p.expect("eof", what="end of input")
    return phi


# ---------------------------------------------------------------------------
# Rendering

_LVL_IMPLIES = 0
_LVL_OR = 1
_LVL_AND = 2
_LVL_UNARY = 3
_LVL_PRIMARY = 4


def render_term(t: Term) -> str:
    if isinstance(t, (Var, Const)):
        return t.name
    return f"{t.name}({', '.join(render_term(a) for a in t.args)})"


def render_atom(a: Pred) -> str:
    if not a.args:
        return a.symbol
    return f"{a.symbol}({', '.join(render_term(t) for t in a.args)})"


def _render(phi: Formula, level: int) -> str:
    if isinstance(phi, Pred):
        return render_atom(phi)
    if isinstance(phi, Eq):
        return f"{render_term(phi.lhs)} = {render_term(phi.rhs)}"
    if isinstance(phi, Neq):
        return f"{render_term(phi.lhs)} != {render_term(phi.rhs)}"
    if isinstance(phi, Not):
        s = "-" + _render(phi.sub, _LVL_UNARY)
        return s if level <= _LVL_UNARY else f"({s})"
    if isinstance(phi, Modal):
        s = "L " + _render(phi.sub, _LVL_UNARY)
        return s if level <= _LVL_UNARY else f"({s})"
    if isinstance(phi, And):
        s = _render(phi.left, _LVL_AND) + " & " + _render(phi.right, _LVL_AND + 1)
        return s if level <= _LVL_AND else f"({s})"
    if isinstance(phi, Or):
        s = _render(phi.left, _LVL_OR) + " | " + _render(phi.right, _LVL_OR + 1)
        return s if level <= _LVL_OR else f"({s})"
    if isinstance(phi, Implies):
        s = _render(phi.left, _LVL_IMPLIES + 1) + " -> " + _render(phi.right, _LVL_IMPLIES)
        return s if level <= _LVL_IMPLIES else f"({s})"
    if isinstance(phi, (Forall, Exists)):
        node = type(phi)
        names = [phi.var]
        body = phi.sub
        while isinstance(body, node):
            names.append(body.var)
            body = body.sub
        kw = "forall" if node is Forall else "exists"
        s = f"{kw} {', '.join(names)}. {_render(body, _LVL_IMPLIES)}"
        return s if level <= _LVL_IMPLIES else f"({s})"
    raise TypeError(f"not a formula: {phi!r}")


def render_formula(phi: Formula) -> str:
    return _render(phi, _LVL_IMPLIES)


def render_rule(r: Rule) -> str:
    head = " | ".join(render_atom(a) for a in r.head)
    if not r.pos_body and not r.neg_body:
        return f"{head}."
    lits = [render_atom(a) for a in r.pos_body]
    lits += [f"not {render_atom(a)}" for a in r.neg_body]
    return f"{head} :- {', '.join(lits)}."


def render(x: Union[Program, Theory, Formula, BeliefKernel]) -> str:
    """Canonical text that re-parses to a structurally equal value."""
    if isinstance(x, Program):
        used = Program.of(x.rules).signature
        lines = [render_rule(r) for r in x.rules]
        for c in x.signature.constants:
            if c not in used.constants:
                lines.append(f"#const {c}.")
        return "\n".join(lines) + ("\n" if lines else "")
    if isinstance(x, Theory):
        lines = [render_formula(f) + "." for f in x.formulas]
        return "\n".join(lines) + ("\n" if lines else "")
    if isinstance(x, BeliefKernel):
        parts = []
        for a in x.sorted_atoms():
            parts.append((render_atom(a) if isinstance(a, Pred) else
                          f"{render_term(a.lhs)} = {render_term(a.rhs)}") + ".")
        return " ".join(parts)
    if isinstance(x, S._FORMULA_TYPES):
        return render_formula(x)
    raise TypeError(f"cannot render {type(x).__name__}")
