"""Elaboration of documentation-aware macro forms.

Sections collect the definitions submitted inside them and append matching
@(def ...) directives to their topic. Annotated function definitions get a
generated signature block, and aggregate declarations fan out boilerplate
recognizer/constructor/accessor topics. Elaboration turns the raw event
stream into one containing only topics, default-parent directives, and raw
definitions.
"""

from __future__ import annotations

from .reader import SourceSymbol
from .world import (
    AggregateDecl,
    Definition,
    DefineDecl,
    DefineTopic,
    DocEvent,
    RawDefinition,
    SectionBegin,
    SectionEnd,
)

DEFINITIONS_HEADER = "<h3>Definitions and Theorems</h3>"


def _append_def_collection(
    long: str, names: list[SourceSymbol], package: str
) -> str:
    if not names:
        return long
    lines = "\n".join(f"@(def {name.code(package)})" for name in names)
    return f"{long}\n\n{DEFINITIONS_HEADER}\n\n{lines}"


def _collected_names(events: list[DocEvent]) -> list[SourceSymbol]:
    return [
        ev.definition.name
        for ev in events
        if isinstance(ev, RawDefinition) and not ev.local
    ]


def _name_row(name: SourceSymbol, type_tok: SourceSymbol | None, doc: str) -> str:
    label = f"<tt>{name.name.lower()}</tt>"
    if type_tok is not None:
        label += f" @('{type_tok.code(name.package)}')"
    row = f"<dt>{label}</dt>"
    if doc:
        row += f"\n<dd>{doc}</dd>"
    return row


def _signature_block(decl: DefineDecl) -> str:
    rows = "\n".join(_name_row(f.name, f.type, f.doc) for f in decl.formals)
    body = f"\n{rows}\n" if rows else ""
    block = f"<h5>Signature</h5>\n<dl>{body}</dl>"
    if decl.returns:
        ret_rows = "\n".join(_name_row(r.name, r.type, r.doc) for r in decl.returns)
        block += f"\n\n<h5>Returns</h5>\n<dl>\n{ret_rows}\n</dl>"
    return block


def elaborate_section(
    begin: SectionBegin, body: list[DocEvent]
) -> list[DocEvent]:
    """One topic whose long lists every non-local definition in the body."""
    long = _append_def_collection(begin.long, _collected_names(body), begin.name.package)
    topic = DefineTopic(begin.name, begin.parents, begin.short, long, begin.span, begin.local)
    return [topic, *body]


def elaborate_define(decl: DefineDecl) -> list[DocEvent]:
    """Topic with a signature block, plus the function and its related events."""
    own = RawDefinition(
        Definition(decl.name, "function", decl.form, decl.span.file),
        decl.span,
        decl.local,
    )
    related = _elaborate(decl.related)
    parts = [_signature_block(decl)]
    if decl.long:
        parts.append(decl.long)
    begin = SectionBegin(
        decl.name, decl.parents, decl.short, "\n\n".join(parts), decl.span, decl.local
    )
    return elaborate_section(begin, [own, *related])


_RECOGNIZER_INTRO = (
    "<p>@('{name}') is a record structure; @('{rec}') recognizes "
    "well-formed instances of it.</p>"
)
_CONSTRUCTOR_SHORT = "Constructor macro for @('{name}') records."
_ACCESSOR_SHORT = "Access the {field} field."


def elaborate_aggregate(decl: AggregateDecl) -> list[DocEvent]:
    """Fan out recognizer, constructor, and per-field accessor topics."""
    pkg = decl.name.package
    base = decl.name.name
    rec = SourceSymbol(pkg, base + "-P")
    make = SourceSymbol(pkg, "MAKE-" + base)

    intro = _RECOGNIZER_INTRO.format(name=base.lower(), rec=rec.name.lower())
    parts = [intro]
    if decl.fields:
        rows = "\n".join(_name_row(f.name, f.type, f.doc) for f in decl.fields)
        parts.append(f"<h5>Fields</h5>\n<dl>\n{rows}\n</dl>")
    if decl.long:
        parts.append(decl.long)
    events: list[DocEvent] = [
        DefineTopic(rec, decl.parents, decl.short, "\n\n".join(parts), decl.span, decl.local)
    ]

    call = f"(make-{base.lower()}"
    if decl.fields:
        indent = " " * (len(call) + 1)
        args = f"\n{indent}".join(f":{f.name.name.lower()} ..." for f in decl.fields)
        call += f" {args}"
    call += ")"
    make_long = f"<p>Syntax:</p>\n\n<code>{call}</code>"
    events.append(
        DefineTopic(
            make,
            [rec],
            _CONSTRUCTOR_SHORT.format(name=base.lower()),
            make_long,
            decl.span,
            decl.local,
        )
    )

    for fld in decl.fields:
        accessor = SourceSymbol(pkg, f"{base}->{fld.name.name}")
        short = _ACCESSOR_SHORT.format(field=fld.name.name.lower())
        if fld.doc:
            short += " " + fld.doc
        events.append(DefineTopic(accessor, [rec], short, "", decl.span, decl.local))

    events.append(
        RawDefinition(
            Definition(decl.name, "other", decl.form, decl.span.file),
            decl.span,
            decl.local,
        )
    )
    return events


def _elaborate(events: list[DocEvent]) -> list[DocEvent]:
    out, idx = _elaborate_seq(events, 0, in_section=False)
    assert idx == len(events)
    return out


def _elaborate_seq(
    events: list[DocEvent], i: int, in_section: bool
) -> tuple[list[DocEvent], int]:
    out: list[DocEvent] = []
    while i < len(events):
        ev = events[i]
        if isinstance(ev, SectionEnd):
            if in_section:
                return out, i
            raise AssertionError("unbalanced section end")
        if isinstance(ev, SectionBegin):
            body, j = _elaborate_seq(events, i + 1, in_section=True)
            out.extend(elaborate_section(ev, body))
            i = j + 1
        elif isinstance(ev, DefineDecl):
            out.extend(elaborate_define(ev))
            i += 1
        elif isinstance(ev, AggregateDecl):
            out.extend(elaborate_aggregate(ev))
            i += 1
        else:
            out.append(ev)
            i += 1
    return out, i


def elaborate_events(events: list[DocEvent]) -> list[DocEvent]:
    """Expand sections, defines, and aggregates into plain topic/definition events."""
    return _elaborate(events)
