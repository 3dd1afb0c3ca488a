"""Parser for .plog knowledge-base files.

Line-oriented grammar, UTF-8, ``#`` comments:

    domain <Name> = { c1, c2, ... }
    pred <name> : <Dom1>[, <Dom2>...]
    prop <name>
    sentence <name> := <formula>
    believe <name-or-formula> = <number>     # decimal or p/q fraction

Formula operators by decreasing binding strength: ``~``, ``&``, ``|``,
``->`` (right-associative), ``<->`` (right-associative); ``forall v:Dom.``
and ``exists v:Dom.`` bind loosest; ``=`` between domain terms;
parentheses group. A bare identifier in formula position resolves to a
declared proposition first, then to a previously declared sentence name.

Because ``=`` also appears inside formulas, a believe line is split at
its last ``=``; the number after it cannot contain one.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .errors import KbSyntaxError, PlogError
from .extend import Constraint, ConstraintSet
from .logic import (
    And,
    Atom,
    Equals,
    Exists,
    Forall,
    Iff,
    Implies,
    Not,
    Or,
    Sentence,
    Vocabulary,
    check_closed,
)


@dataclass(frozen=True)
class KbProgram:
    """Result of parsing one knowledge base."""

    vocabulary: Vocabulary
    sentences: dict[str, Sentence]
    constraints: ConstraintSet


_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<arrow><->|->|:=)
      | (?P<punct>[(){},:.=&|~/])
      | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<number>\d+(?:\.\d+)?|\.\d+)
      | (?P<bad>\S)
    )""",
    re.VERBOSE,
)

_KEYWORDS = {"forall", "exists", "true", "false"}


@dataclass
class _Token:
    kind: str  # 'arrow' | 'punct' | 'name' | 'number' | 'end'
    text: str
    column: int  # 1-based


def _tokenize(text: str, line_no: int) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        if m.lastgroup == "bad":
            raise KbSyntaxError(f"unexpected character {m.group('bad')!r}", line_no, m.start("bad") + 1)
        if m.lastgroup is None:  # only whitespace remained
            break
        tokens.append(_Token(m.lastgroup, m.group(m.lastgroup), m.start(m.lastgroup) + 1))
        pos = m.end()
    tokens.append(_Token("end", "", len(text) + 1))
    return tokens


class _FormulaParser:
    """Recursive-descent parser for one formula, given the vocabulary so far."""

    def __init__(self, tokens: list[_Token], line_no: int, vocabulary: Vocabulary,
                 sentences: dict[str, Sentence]):
        self.tokens = tokens
        self.pos = 0
        self.line = line_no
        self.vocab = vocabulary
        self.sentences = sentences
        self.bound: list[str] = []

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.advance()
        if tok.text != text:
            raise self.error(f"expected {text!r}, found {tok.text!r}" if tok.text else f"expected {text!r}", tok)
        return tok

    def error(self, message: str, tok: _Token | None = None) -> KbSyntaxError:
        column = (tok or self.peek()).column
        return KbSyntaxError(message, self.line, column)

    def at_end(self) -> bool:
        return self.peek().kind == "end"

    # precedence climbing: quantifier < iff < implies < or < and < not < unit

    def parse_formula(self) -> Sentence:
        tok = self.peek()
        if tok.kind == "name" and tok.text in ("forall", "exists"):
            self.advance()
            var = self.advance()
            if var.kind != "name" or var.text in _KEYWORDS:
                raise self.error("expected a variable name after quantifier", var)
            self.expect(":")
            dom = self.advance()
            if dom.kind != "name":
                raise self.error("expected a domain name", dom)
            if dom.text not in self.vocab.domains:
                raise self.error(f"undeclared domain {dom.text!r}", dom)
            self.expect(".")
            self.bound.append(var.text)
            body = self.parse_formula()
            self.bound.pop()
            cls = Forall if tok.text == "forall" else Exists
            return cls(var.text, dom.text, body)
        return self.parse_iff()

    def parse_iff(self) -> Sentence:
        left = self.parse_implies()
        if self.peek().text == "<->":
            self.advance()
            right = self.parse_iff()
            return Iff(left, right)
        return left

    def parse_implies(self) -> Sentence:
        left = self.parse_or()
        if self.peek().text == "->":
            self.advance()
            right = self.parse_implies()
            return Implies(left, right)
        return left

    def parse_or(self) -> Sentence:
        items = [self.parse_and()]
        while self.peek().text == "|":
            self.advance()
            items.append(self.parse_and())
        if len(items) == 1:
            return items[0]
        return Or(tuple(items))

    def parse_and(self) -> Sentence:
        items = [self.parse_not()]
        while self.peek().text == "&":
            self.advance()
            items.append(self.parse_not())
        if len(items) == 1:
            return items[0]
        return And(tuple(items))

    def parse_not(self) -> Sentence:
        if self.peek().text == "~":
            self.advance()
            return Not(self.parse_not())
        return self.parse_unit()

    def parse_unit(self) -> Sentence:
        tok = self.advance()
        if tok.text == "(":
            inner = self.parse_formula()
            self.expect(")")
            return self._maybe_equality_suffix_guard(inner)
        if tok.kind != "name":
            raise self.error(f"expected a formula, found {tok.text!r}" if tok.text else "unexpected end of formula", tok)
        if tok.text == "true":
            from .logic import TRUE
            return TRUE
        if tok.text == "false":
            from .logic import FALSE
            return FALSE
        if tok.text in ("forall", "exists"):
            raise self.error("quantifiers bind loosest; parenthesise the quantified subformula", tok)
        name = tok.text
        if self.peek().text == "(":
            self.advance()
            args = [self._parse_term()]
            while self.peek().text == ",":
                self.advance()
                args.append(self._parse_term())
            self.expect(")")
            if name not in self.vocab.predicates:
                raise self.error(f"undeclared predicate {name!r}", tok)
            return Atom(name, tuple(args))
        if self.peek().text == "=":
            # equality between domain terms
            self._check_term_token(tok)
            self.advance()
            right = self._parse_term()
            return Equals(name, right)
        if name in self.vocab.propositions:
            return Atom(name)
        if name in self.sentences:
            return self.sentences[name]
        raise self.error(f"undeclared proposition or sentence name {name!r}", tok)

    def _maybe_equality_suffix_guard(self, inner: Sentence) -> Sentence:
        # "(x) = y" would be an equality on a parenthesised term; the grammar
        # does not allow that, so a stray '=' here is a syntax error.
        if self.peek().text == "=":
            raise self.error("'=' may only compare plain domain terms")
        return inner

    def _parse_term(self) -> str:
        tok = self.advance()
        if tok.kind != "name" or tok.text in _KEYWORDS:
            raise self.error(f"expected a domain term, found {tok.text!r}" if tok.text else "expected a domain term", tok)
        self._check_term_token(tok)
        return tok.text

    def _check_term_token(self, tok: _Token) -> None:
        name = tok.text
        if name in self.bound:
            return
        for constants in self.vocab.domains.values():
            if name in constants:
                return
        raise self.error(f"unbound variable or undeclared constant {name!r}", tok)


def _parse_belief_value(text: str, line_no: int, column: int) -> float:
    text = text.strip()
    m = re.fullmatch(r"(\d+)\s*/\s*(\d+)", text)
    if m:
        denominator = int(m.group(2))
        if denominator == 0:
            raise KbSyntaxError("fraction with zero denominator", line_no, column)
        value = float(Fraction(int(m.group(1)), denominator))
    else:
        try:
            value = float(text)
        except ValueError:
            raise KbSyntaxError(f"malformed belief value {text!r}", line_no, column) from None
    if not 0.0 <= value <= 1.0:
        raise KbSyntaxError(f"belief value {text} outside [0, 1]", line_no, column)
    return value


def parse_program(text: str) -> KbProgram:
    """Parse a knowledge base, resolving every name as it is declared.

    Declarations may appear in any order as long as a name is declared
    before use. Raises KbSyntaxError with a 1-based line/column on
    malformed input, undeclared names, duplicates, or out-of-range
    belief values.
    """
    domains: dict[str, tuple[str, ...]] = {}
    predicates: dict[str, tuple[str, ...]] = {}
    propositions: list[str] = []
    sentences: dict[str, Sentence] = {}
    believe_lines: list[tuple[Sentence, float, str]] = []

    def vocab() -> Vocabulary:
        return Vocabulary(dict(domains), dict(predicates), tuple(propositions))

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        tokens = _tokenize(line, line_no)
        head = tokens[0]
        if head.kind != "name":
            raise KbSyntaxError(f"expected a declaration keyword, found {head.text!r}", line_no, head.column)

        if head.text == "domain":
            name_tok = tokens[1]
            if name_tok.kind != "name":
                raise KbSyntaxError("expected a domain name", line_no, name_tok.column)
            if name_tok.text in domains:
                raise KbSyntaxError(f"duplicate domain {name_tok.text!r}", line_no, name_tok.column)
            idx = 2
            if tokens[idx].text != "=":
                raise KbSyntaxError("expected '=' after domain name", line_no, tokens[idx].column)
            idx += 1
            if tokens[idx].text != "{":
                raise KbSyntaxError("expected '{'", line_no, tokens[idx].column)
            idx += 1
            constants: list[str] = []
            while True:
                tok = tokens[idx]
                if tok.kind != "name":
                    raise KbSyntaxError("expected a constant name", line_no, tok.column)
                constants.append(tok.text)
                idx += 1
                if tokens[idx].text == ",":
                    idx += 1
                    continue
                break
            if tokens[idx].text != "}":
                raise KbSyntaxError("expected '}'", line_no, tokens[idx].column)
            idx += 1
            if tokens[idx].kind != "end":
                raise KbSyntaxError(f"trailing input {tokens[idx].text!r}", line_no, tokens[idx].column)
            try:
                Vocabulary({**domains, name_tok.text: tuple(constants)}, dict(predicates), tuple(propositions))
            except PlogError as exc:
                raise KbSyntaxError(str(exc), line_no, name_tok.column) from None
            domains[name_tok.text] = tuple(constants)

        elif head.text == "pred":
            name_tok = tokens[1]
            if name_tok.kind != "name":
                raise KbSyntaxError("expected a predicate name", line_no, name_tok.column)
            if name_tok.text in predicates or name_tok.text in propositions:
                raise KbSyntaxError(f"duplicate predicate {name_tok.text!r}", line_no, name_tok.column)
            if tokens[2].text != ":":
                raise KbSyntaxError("expected ':' after predicate name", line_no, tokens[2].column)
            idx = 3
            arg_domains: list[str] = []
            while True:
                tok = tokens[idx]
                if tok.kind != "name":
                    raise KbSyntaxError("expected a domain name", line_no, tok.column)
                if tok.text not in domains:
                    raise KbSyntaxError(f"undeclared domain {tok.text!r}", line_no, tok.column)
                arg_domains.append(tok.text)
                idx += 1
                if tokens[idx].text == ",":
                    idx += 1
                    continue
                break
            if tokens[idx].kind != "end":
                raise KbSyntaxError(f"trailing input {tokens[idx].text!r}", line_no, tokens[idx].column)
            predicates[name_tok.text] = tuple(arg_domains)

        elif head.text == "prop":
            name_tok = tokens[1]
            if name_tok.kind != "name":
                raise KbSyntaxError("expected a proposition name", line_no, name_tok.column)
            if name_tok.text in propositions or name_tok.text in predicates:
                raise KbSyntaxError(f"duplicate proposition {name_tok.text!r}", line_no, name_tok.column)
            if tokens[2].kind != "end":
                raise KbSyntaxError(f"trailing input {tokens[2].text!r}", line_no, tokens[2].column)
            propositions.append(name_tok.text)

        elif head.text == "sentence":
            name_tok = tokens[1]
            if name_tok.kind != "name":
                raise KbSyntaxError("expected a sentence name", line_no, name_tok.column)
            if name_tok.text in sentences:
                raise KbSyntaxError(f"duplicate sentence {name_tok.text!r}", line_no, name_tok.column)
            if tokens[2].text != ":=":
                raise KbSyntaxError("expected ':=' after sentence name", line_no, tokens[2].column)
            parser = _FormulaParser(tokens[3:], line_no, vocab(), sentences)
            formula = parser.parse_formula()
            if not parser.at_end():
                raise KbSyntaxError(f"trailing input {parser.peek().text!r}", line_no, parser.peek().column)
            try:
                check_closed(formula, vocab())
            except PlogError as exc:
                raise KbSyntaxError(str(exc), line_no, name_tok.column) from None
            sentences[name_tok.text] = formula

        elif head.text == "believe":
            # Split at the last '=' on the line: formulas may contain '=',
            # belief values cannot.
            eq_positions = [i for i, t in enumerate(tokens) if t.text == "="]
            if not eq_positions:
                raise KbSyntaxError("believe line needs '= <number>'", line_no, len(line))
            split = eq_positions[-1]
            value_tokens = tokens[split + 1:-1]
            if not value_tokens:
                raise KbSyntaxError("missing belief value", line_no, tokens[split].column)
            value_text = line[tokens[split].column:]
            value = _parse_belief_value(value_text, line_no, tokens[split].column + 1)

            subject_tokens = tokens[1:split] + [_Token("end", "", tokens[split].column)]
            if len(subject_tokens) == 2 and subject_tokens[0].kind == "name" \
                    and subject_tokens[0].text in sentences:
                formula = sentences[subject_tokens[0].text]
                label = subject_tokens[0].text
            else:
                parser = _FormulaParser(subject_tokens, line_no, vocab(), sentences)
                formula = parser.parse_formula()
                if not parser.at_end():
                    raise KbSyntaxError(f"trailing input {parser.peek().text!r}", line_no, parser.peek().column)
                try:
                    check_closed(formula, vocab())
                except PlogError as exc:
                    raise KbSyntaxError(str(exc), line_no, head.column) from None
                label = line[tokens[1].column - 1:tokens[split].column - 1].strip()
            believe_lines.append((formula, value, label))

        else:
            raise KbSyntaxError(f"unknown declaration {head.text!r}", line_no, head.column)

    vocabulary = vocab()
    constraints = ConstraintSet(tuple(
        Constraint(sentence, value, label) for sentence, value, label in believe_lines
    ))
    return KbProgram(vocabulary, dict(sentences), constraints)


def parse_formula_text(text: str, vocabulary: Vocabulary,
                       sentences: dict[str, Sentence] | None = None) -> Sentence:
    """Parse a single formula (e.g. a CLI query) against a vocabulary."""
    tokens = _tokenize(text, 1)
    parser = _FormulaParser(tokens, 1, vocabulary, sentences or {})
    formula = parser.parse_formula()
    if not parser.at_end():
        raise KbSyntaxError(f"trailing input {parser.peek().text!r}", 1, parser.peek().column)
    check_closed(formula, vocabulary)
    return formula
