"""Expansion of @(...) directives into plain markup.

Supported forms: @(see name) cross references, @('...') inline code and
@({...}) block code with automatic links to documented topics, @(def name)
definition injection from the world, and @(`expr`) evaluation of a tiny
pure expression language. Broken cross references degrade to plain text
with a warning; everything else wrong is a hard error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .keys import decode_key, encode_key  # noqa: F401  (re-exported)
from .markup import escape_text
from .reader import (
    Form,
    IntForm,
    ListForm,
    SourceSymbol,
    StringForm,
    SymbolForm,
    parse_symbol_token,
    pprint_form,
    print_form,
    read_forms,
)
from .registry import (
    W_AMBIG,
    W_BROKEN_LINK,
    W_MISSING_DEF,
    Diagnostic,
    Registry,
    resolve_name,
)
from .world import World

_TOKEN_RE = re.compile(r"[A-Za-z0-9<>\-+*/=?!.:]+")
_INT_TOKEN_RE = re.compile(r"[+-]?[0-9]+\Z")
_HEAD_RE = re.compile(r"[A-Za-z$-]+")


class PreprocessError(Exception):
    def __init__(self, message: str, offset: int):
        super().__init__(f"offset {offset}: {message}")
        self.message = message
        self.offset = offset


@dataclass
class PreprocessContext:
    world: World
    registry: Registry
    current_package: str
    topic: SourceSymbol | None = None
    diagnostics: list[Diagnostic] = field(default_factory=list)
    file: str = ""
    line: int = 0

    def warn(self, code: str, message: str) -> None:
        if self.topic is not None:
            message = f"{message} (in topic {self.topic.printed()})"
        self.diagnostics.append(Diagnostic(code, message, self.file, self.line))


def autolink_code(text: str, ctx: PreprocessContext) -> str:
    """Escape raw code, wrapping documented names in see-links.

    Tokens are cut the way the reader cuts symbols; string literals are
    never linked and links never nest.
    """
    out: list[str] = []
    pos = 0
    while pos < len(text):
        c = text[pos]
        if c == '"':
            end = pos + 1
            while end < len(text):
                if text[end] == "\\":
                    end += 2
                elif text[end] == '"':
                    end += 1
                    break
                else:
                    end += 1
            out.append(escape_text(text[pos:end]))
            pos = end
            continue
        match = _TOKEN_RE.match(text, pos)
        if match:
            token = match.group()
            pos = match.end()
            if not _INT_TOKEN_RE.match(token):
                sym, _ = resolve_name(ctx.registry, token, ctx.current_package)
                if sym is not None:
                    out.append(
                        f"<see topic='{encode_key(sym)}'>{escape_text(token)}</see>"
                    )
                    continue
            out.append(escape_text(token))
            continue
        out.append(escape_text(c))
        pos += 1
    return "".join(out)


def _expand_see(token: str, ctx: PreprocessContext) -> str:
    sym, candidates = resolve_name(ctx.registry, token, ctx.current_package)
    if sym is not None:
        return f"<see topic='{encode_key(sym)}'>{escape_text(token)}</see>"
    if candidates:
        names = ", ".join(c.printed() for c in candidates)
        ctx.warn(W_AMBIG, f"@(see {token}) is ambiguous between {names}")
    else:
        ctx.warn(W_BROKEN_LINK, f"@(see {token}) does not name a documented topic")
    return f"<tt>{escape_text(token)}</tt>"


def expand_def(token: str, ctx: PreprocessContext) -> str:
    """Inject a definition as a kind header plus an autolinked code block."""
    try:
        sym = parse_symbol_token(token, ctx.current_package)
    except ValueError:
        sym = None
    definition = ctx.world.definitions.get(sym) if sym is not None else None
    if definition is None:
        shown = sym.printed(ctx.current_package) if sym is not None else token
        ctx.warn(W_MISSING_DEF, f"@(def {token}) does not name a known definition")
        return f"<box>missing definition: {escape_text(shown)}</box>"
    kind = definition.kind.capitalize()
    shown = escape_text(sym.printed(ctx.current_package))
    printed = pprint_form(definition.form, ctx.current_package)
    return (
        f"<p><b>{kind}:</b> <tt>{shown}</tt></p>\n"
        f"<code>{autolink_code(printed, ctx)}</code>"
    )


def _eval_form(form: Form, ctx: PreprocessContext, offset: int) -> object:
    if isinstance(form, IntForm):
        return form.value
    if isinstance(form, StringForm):
        return form.value
    if isinstance(form, SymbolForm):
        definition = ctx.world.definitions.get(form.sym)
        if definition is None or definition.kind != "constant":
            raise PreprocessError(
                f"unbound constant {form.sym.printed(ctx.current_package)}", offset
            )
        if len(definition.form.items) < 3:
            raise PreprocessError(
                f"constant {form.sym.printed()} has no value", offset
            )
        return _eval_form(definition.form.items[2], ctx, offset)
    assert isinstance(form, ListForm)
    if not form.items or not isinstance(form.items[0], SymbolForm):
        raise PreprocessError("cannot evaluate expression", offset)
    op = form.items[0].sym.name
    args = form.items[1:]
    if op == "QUOTE":
        if len(args) != 1:
            raise PreprocessError("quote expects one argument", offset)
        return args[0]
    if op in ("+", "-", "*"):
        values = [_eval_form(a, ctx, offset) for a in args]
        if not all(isinstance(v, int) for v in values):
            raise PreprocessError(f"{op} expects integers", offset)
        ints = [v for v in values if isinstance(v, int)]
        if op == "+":
            return sum(ints)
        if op == "*":
            result = 1
            for v in ints:
                result *= v
            return result
        if not ints:
            raise PreprocessError("- expects at least one argument", offset)
        if len(ints) == 1:
            return -ints[0]
        result = ints[0]
        for v in ints[1:]:
            result -= v
        return result
    if op == "LEN":
        if len(args) != 1:
            raise PreprocessError("len expects one argument", offset)
        value = _eval_form(args[0], ctx, offset)
        if not isinstance(value, ListForm):
            raise PreprocessError("len expects a quoted list", offset)
        return len(value.items)
    if op == "STRING-APPEND":
        values = [_eval_form(a, ctx, offset) for a in args]
        if not all(isinstance(v, str) for v in values):
            raise PreprocessError("string-append expects strings", offset)
        return "".join(v for v in values if isinstance(v, str))
    raise PreprocessError(f"unsupported operator {op.lower()}", offset)


def eval_directive(expr_text: str, ctx: PreprocessContext, offset: int = 0) -> str:
    """Evaluate one expression and return its printed value, escaped."""
    try:
        forms = read_forms(expr_text, ctx.current_package, file="<eval>")
    except Exception as exc:
        raise PreprocessError(f"cannot read expression: {exc}", offset) from None
    if len(forms) != 1:
        raise PreprocessError("expected exactly one expression", offset)
    value = _eval_form(forms[0], ctx, offset)
    if isinstance(value, int):
        printed = str(value)
    elif isinstance(value, str):
        printed = value
    else:
        printed = print_form(value, ctx.current_package)
    return escape_text(printed)


def preprocess(raw: str, ctx: PreprocessContext) -> str:
    """Expand every directive in an author-written markup string."""
    out: list[str] = []
    pos = 0
    while pos < len(raw):
        at = raw.find("@(", pos)
        if at < 0:
            out.append(raw[pos:])
            break
        out.append(raw[pos:at])
        body = at + 2
        c = raw[body : body + 1]
        if c == "'":
            end = raw.find("')", body + 1)
            if end < 0:
                raise PreprocessError("unterminated @('...')", at)
            out.append(f"<code>{autolink_code(raw[body + 1 : end], ctx)}</code>")
            pos = end + 2
        elif c == "{":
            end = raw.find("})", body + 1)
            if end < 0:
                raise PreprocessError("unterminated @({...})", at)
            out.append(f"<code>{autolink_code(raw[body + 1 : end], ctx)}</code>")
            pos = end + 2
        elif c == "`":
            end = raw.find("`", body + 1)
            if end < 0 or raw[end + 1 : end + 2] != ")":
                raise PreprocessError("unterminated @(`...`)", at)
            out.append(eval_directive(raw[body + 1 : end], ctx, at))
            pos = end + 2
        else:
            match = _HEAD_RE.match(raw, body)
            if not match:
                raise PreprocessError("malformed directive", at)
            head = match.group().lower()
            close = raw.find(")", match.end())
            if close < 0:
                raise PreprocessError(f"unterminated @({head} ...)", at)
            arg = raw[match.end() : close].strip()
            if head == "see":
                if not arg or re.search(r"\s", arg):
                    raise PreprocessError("malformed @(see ...) argument", at)
                out.append(_expand_see(arg, ctx))
            elif head == "def":
                if not arg or re.search(r"\s", arg):
                    raise PreprocessError("malformed @(def ...) argument", at)
                out.append(expand_def(arg, ctx))
            else:
                raise PreprocessError(f"unknown directive @({head} ...)", at)
            pos = close + 1
    return "".join(out)


_CODE_SPAN_RE = re.compile(r"<code>.*?</code>|<tt>.*?</tt>", re.DOTALL)


def remaining_directives(markup_text: str) -> int:
    """Count @( sequences outside code content (used by checks and tests)."""
    stripped = _CODE_SPAN_RE.sub("", markup_text)
    return stripped.count("@(")
