"""S-expression reader for documentation source files.

The reader understands exactly the constructs that appear in the sources we
catalogue: lists, package-qualified symbols, strings, decimal integers, line
and block comments, and quote sugar. Unquoted symbol text is upcased. Every
form carries its source span so later stages can report precise locations.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

KEYWORD_PACKAGE = "KEYWORD"

#: "Current Interactive Session" marks content not read from a file.
SESSION_ORIGIN = "Current Interactive Session"

_SYMBOL_CHARS = set(
    "ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    "abcdefghijklmnopqrstuvwxyz"
    "0123456789"
    "<>-+*/=?!."
)
_TOKEN_CHARS = _SYMBOL_CHARS | {":"}
_INT_RE = re.compile(r"[+-]?[0-9]+\Z")


class ReadError(Exception):
    """Syntax error in source text, with file/line/column."""

    def __init__(self, message: str, file: str, line: int, column: int):
        super().__init__(f"{file}:{line}:{column}: {message}")
        self.message = message
        self.file = file
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Span:
    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class SourceSymbol:
    """A package-qualified, case-normalized symbol name."""

    package: str
    name: str

    def printed(self, current_package: str | None = None) -> str:
        """Display form: PACKAGE::NAME, or NAME within the current package."""
        if self.package == KEYWORD_PACKAGE:
            return ":" + self.name
        if current_package is not None and self.package == current_package:
            return self.name
        return f"{self.package}::{self.name}"

    def code(self, current_package: str | None = None) -> str:
        """Source-code form (lowercased), as the printer writes it."""
        if self.package == KEYWORD_PACKAGE:
            return ":" + self.name.lower()
        if current_package is not None and self.package == current_package:
            return self.name.lower()
        return f"{self.package.lower()}::{self.name.lower()}"

    def __str__(self) -> str:
        return self.printed()


@dataclass
class SymbolForm:
    sym: SourceSymbol
    span: Span = field(compare=False)


@dataclass
class StringForm:
    value: str
    span: Span = field(compare=False)


@dataclass
class IntForm:
    value: int
    span: Span = field(compare=False)


@dataclass
class ListForm:
    items: list["Form"]
    span: Span = field(compare=False)


Form = SymbolForm | StringForm | IntForm | ListForm


def parse_symbol_token(token: str, default_package: str) -> SourceSymbol:
    """Turn one printed token into a symbol; raises ValueError if malformed."""
    tok = token.upper()
    if not tok:
        raise ValueError("empty symbol token")
    bad = [c for c in tok if c not in _TOKEN_CHARS]
    if bad:
        raise ValueError(f"invalid character {bad[0]!r} in symbol {token!r}")
    if "::" in tok:
        pkg, _, name = tok.partition("::")
        if not pkg or not name:
            raise ValueError(f"empty package or name in {token!r}")
        if ":" in pkg or ":" in name:
            raise ValueError(f"malformed symbol {token!r}")
        return SourceSymbol(pkg, name)
    if tok.startswith(":"):
        name = tok[1:]
        if not name or ":" in name:
            raise ValueError(f"malformed keyword {token!r}")
        return SourceSymbol(KEYWORD_PACKAGE, name)
    if ":" in tok:
        raise ValueError(f"stray ':' in symbol {token!r}")
    return SourceSymbol(default_package, tok)


class _Reader:
    def __init__(self, text: str, default_package: str, file: str):
        self.text = text
        self.package = default_package
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str, span: Span | None = None) -> ReadError:
        if span is not None:
            return ReadError(message, span.file, span.line, span.column)
        return ReadError(message, self.file, self.line, self.col)

    def span(self) -> Span:
        return Span(self.file, self.line, self.col)

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def peek2(self) -> str:
        return self.text[self.pos : self.pos + 2]

    def advance(self) -> str:
        c = self.text[self.pos]
        self.pos += 1
        if c == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return c

    def skip_blank(self) -> None:
        while self.pos < len(self.text):
            c = self.peek()
            if c.isspace():
                self.advance()
            elif c == ";":
                while self.pos < len(self.text) and self.peek() != "\n":
                    self.advance()
            elif self.peek2() == "#|":
                start = self.span()
                self.advance()
                self.advance()
                depth = 1
                while depth:
                    if self.pos >= len(self.text):
                        raise self.error("unterminated block comment", start)
                    if self.peek2() == "|#":
                        self.advance()
                        self.advance()
                        depth -= 1
                    elif self.peek2() == "#|":
                        self.advance()
                        self.advance()
                        depth += 1
                    else:
                        self.advance()
            else:
                return

    def read_form(self) -> Form:
        start = self.span()
        c = self.peek()
        if c == "(":
            return self.read_list()
        if c == ")":
            raise self.error("unbalanced parenthesis: unexpected ')'", start)
        if c == '"':
            return self.read_string()
        if c == "'":
            self.advance()
            self.skip_blank()
            if self.pos >= len(self.text):
                raise self.error("expected form after quote", start)
            quoted = self.read_form()
            quote = SymbolForm(SourceSymbol(self.package, "QUOTE"), start)
            return ListForm([quote, quoted], start)
        if c in _TOKEN_CHARS:
            return self.read_token()
        raise self.error(f"unexpected character {c!r}", start)

    def read_list(self) -> ListForm:
        start = self.span()
        self.advance()
        items: list[Form] = []
        while True:
            self.skip_blank()
            if self.pos >= len(self.text):
                raise self.error("unbalanced parenthesis: '(' never closed", start)
            if self.peek() == ")":
                self.advance()
                return ListForm(items, start)
            items.append(self.read_form())

    def read_string(self) -> StringForm:
        start = self.span()
        self.advance()
        chars: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string", start)
            c = self.advance()
            if c == '"':
                return StringForm("".join(chars), start)
            if c == "\\":
                if self.pos >= len(self.text):
                    raise self.error("unterminated string", start)
                esc = self.advance()
                if esc not in ('"', "\\"):
                    raise self.error(f"unsupported string escape \\{esc}", start)
                chars.append(esc)
            else:
                chars.append(c)

    def read_token(self) -> Form:
        start = self.span()
        chars: list[str] = []
        while self.pos < len(self.text) and self.peek() in _TOKEN_CHARS:
            chars.append(self.advance())
        token = "".join(chars)
        if _INT_RE.match(token):
            return IntForm(int(token), start)
        try:
            sym = parse_symbol_token(token, self.package)
        except ValueError as exc:
            raise self.error(str(exc), start) from None
        return SymbolForm(sym, start)


def read_forms(text: str, default_package: str, file: str = "<string>") -> list[Form]:
    """Read all top-level forms from text, in order."""
    if not default_package:
        raise ValueError("default package must be non-empty")
    reader = _Reader(text, default_package.upper(), file)
    forms: list[Form] = []
    while True:
        reader.skip_blank()
        if reader.pos >= len(text):
            return forms
        forms.append(reader.read_form())


def print_form(form: Form, package: str) -> str:
    """Print a form on one line; reading the output yields an equal form."""
    if isinstance(form, SymbolForm):
        return form.sym.code(package)
    if isinstance(form, IntForm):
        return str(form.value)
    if isinstance(form, StringForm):
        body = form.value.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{body}"'
    return "(" + " ".join(print_form(f, package) for f in form.items) + ")"


def pprint_form(form: Form, package: str, width: int = 75) -> str:
    """Pretty-print with 2-space indent per depth; short forms stay flat."""

    def pp(f: Form, indent: int) -> str:
        flat = print_form(f, package)
        if indent + len(flat) <= width or not isinstance(f, ListForm) or len(f.items) < 2:
            return flat
        lines = ["(" + pp(f.items[0], indent + 1)]
        for item in f.items[1:]:
            lines.append(" " * (indent + 2) + pp(item, indent + 2))
        lines[-1] += ")"
        return "\n".join(lines)

    return pp(form, 0)
