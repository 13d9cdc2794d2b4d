"""Documentation events and the world of catalogued definitions.

scan_events recognizes the documentation-bearing forms in a file and turns
them into a flat, ordered event stream. build_world elaborates the stream
(sections, annotated definitions, aggregates) and collects every non-local
definition into a lookup table keyed by name.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .reader import (
    Form,
    IntForm,
    ListForm,
    Span,
    SourceSymbol,
    StringForm,
    SymbolForm,
    read_forms,
)

KIND_BY_HEAD = {
    "DEFUN": "function",
    "DEFINE": "function",
    "DEFMACRO": "macro",
    "DEFTHM": "theorem",
    "DEFCONG": "theorem",
    "DEFCONST": "constant",
}


class ScanError(Exception):
    """Malformed documentation form."""

    def __init__(self, message: str, span: Span):
        super().__init__(f"{span}: {message}")
        self.message = message
        self.span = span


class WorldError(Exception):
    pass


@dataclass
class Definition:
    name: SourceSymbol
    kind: str
    form: ListForm
    origin: str


@dataclass
class DefineTopic:
    name: SourceSymbol
    parents: list[SourceSymbol] | None  # None means "use the file default"
    short: str
    long: str
    span: Span
    local: bool = False


@dataclass
class SetDefaultParents:
    parents: list[SourceSymbol]
    span: Span
    local: bool = False


@dataclass
class SectionBegin:
    name: SourceSymbol
    parents: list[SourceSymbol] | None
    short: str
    long: str
    span: Span
    local: bool = False


@dataclass
class SectionEnd:
    span: Span


@dataclass
class RawDefinition:
    definition: Definition
    span: Span
    local: bool = False


@dataclass
class Formal:
    name: SourceSymbol
    type: SourceSymbol | None = None
    doc: str = ""


@dataclass
class ReturnSpec:
    name: SourceSymbol
    type: SourceSymbol | None = None
    doc: str = ""


@dataclass
class DefineDecl:
    name: SourceSymbol
    formals: list[Formal]
    returns: list[ReturnSpec]
    parents: list[SourceSymbol] | None
    short: str
    long: str
    body: list[Form]
    related: list["DocEvent"]
    form: ListForm
    span: Span
    local: bool = False


@dataclass
class AggregateField:
    name: SourceSymbol
    type: SourceSymbol | None = None
    doc: str = ""


@dataclass
class AggregateDecl:
    name: SourceSymbol
    parents: list[SourceSymbol] | None
    short: str
    long: str
    tag: str | None
    fields: list[AggregateField]
    form: ListForm
    span: Span
    local: bool = False


DocEvent = (
    DefineTopic
    | SetDefaultParents
    | SectionBegin
    | SectionEnd
    | RawDefinition
    | DefineDecl
    | AggregateDecl
)


def _head_name(form: Form) -> str | None:
    if isinstance(form, ListForm) and form.items and isinstance(form.items[0], SymbolForm):
        return form.items[0].sym.name
    return None


def _is_keyword(form: Form) -> bool:
    return isinstance(form, SymbolForm) and form.sym.package == "KEYWORD"


def _split_options(items: list[Form]) -> tuple[dict[str, Form], list[Form]]:
    """Partition arguments into keyword options and positional body forms.

    Keyword/value pairs may appear anywhere at the top level, as they do in
    real sources (a trailing :long after the body is common).
    """
    options: dict[str, Form] = {}
    body: list[Form] = []
    i = 0
    while i < len(items):
        item = items[i]
        if _is_keyword(item):
            assert isinstance(item, SymbolForm)
            if i + 1 >= len(items):
                raise ScanError(f"keyword {item.sym.printed()} is missing a value", item.span)
            options[item.sym.name] = items[i + 1]
            i += 2
        else:
            body.append(item)
            i += 1
    return options, body


def _required_name(form: ListForm, what: str) -> SourceSymbol:
    if len(form.items) < 2:
        raise ScanError(f"{what} is missing a name", form.span)
    name = form.items[1]
    if not isinstance(name, SymbolForm) or name.sym.package == "KEYWORD":
        raise ScanError(f"{what} name must be a symbol", form.span)
    return name.sym


def _parents_value(value: Form | None, span: Span) -> list[SourceSymbol] | None:
    if value is None:
        return None
    if isinstance(value, SymbolForm) and value.sym.name == "NIL":
        return []
    if not isinstance(value, ListForm):
        raise ScanError(":parents value must be a list of symbols", span)
    parents = []
    for item in value.items:
        if not isinstance(item, SymbolForm) or item.sym.package == "KEYWORD":
            raise ScanError(":parents value must be a list of symbols", item.span)
        parents.append(item.sym)
    return parents


def _string_value(value: Form | None, key: str, span: Span) -> str:
    if value is None:
        return ""
    if not isinstance(value, StringForm):
        raise ScanError(f":{key.lower()} value must be a string", span)
    return value.value


def _doc_options(
    options: dict[str, Form], span: Span
) -> tuple[list[SourceSymbol] | None, str, str]:
    parents = _parents_value(options.get("PARENTS"), span)
    short = _string_value(options.get("SHORT"), "short", span)
    long = _string_value(options.get("LONG"), "long", span)
    return parents, short, long


def _parse_defxdoc(form: ListForm, local: bool) -> DefineTopic:
    name = _required_name(form, "defxdoc")
    options, body = _split_options(form.items[2:])
    if body:
        raise ScanError("unexpected argument to defxdoc", body[0].span)
    parents, short, long = _doc_options(options, form.span)
    return DefineTopic(name, parents, short, long, form.span, local)


def _parse_set_default_parents(form: ListForm, local: bool) -> SetDefaultParents:
    args = form.items[1:]
    if len(args) == 1 and isinstance(args[0], ListForm):
        args = args[0].items
    parents = []
    for item in args:
        if not isinstance(item, SymbolForm) or item.sym.package == "KEYWORD":
            raise ScanError("set-default-parents expects symbols", item.span)
        parents.append(item.sym)
    return SetDefaultParents(parents, form.span, local)


def _parse_formal(item: Form) -> Formal:
    if isinstance(item, SymbolForm) and item.sym.package != "KEYWORD":
        return Formal(item.sym)
    if not isinstance(item, ListForm) or not item.items:
        raise ScanError("formal is missing a name", item.span)
    head = item.items[0]
    if not isinstance(head, SymbolForm) or head.sym.package == "KEYWORD":
        raise ScanError("formal is missing a name", item.span)
    type_tok: SourceSymbol | None = None
    doc = ""
    rest = item.items[1:]
    i = 0
    while i < len(rest):
        part = rest[i]
        if _is_keyword(part):
            i += 2  # non-documentation option, keep for the printed form only
            continue
        if isinstance(part, SymbolForm) and type_tok is None and not doc:
            type_tok = part.sym
        elif isinstance(part, StringForm) and not doc:
            doc = part.value
        else:
            raise ScanError("malformed formal", part.span)
        i += 1
    return Formal(head.sym, type_tok, doc)


def _parse_return_spec(item: Form) -> ReturnSpec:
    parsed = _parse_formal(item)
    return ReturnSpec(parsed.name, parsed.type, parsed.doc)


def _parse_returns(value: Form | None) -> list[ReturnSpec]:
    if value is None:
        return []
    if isinstance(value, ListForm) and value.items:
        head = value.items[0]
        if isinstance(head, SymbolForm) and head.sym.name == "MV":
            return [_parse_return_spec(item) for item in value.items[1:]]
    return [_parse_return_spec(value)]


def _parse_define(form: ListForm, local: bool) -> DefineDecl:
    name = _required_name(form, "define")
    if len(form.items) < 3 or not isinstance(form.items[2], ListForm):
        raise ScanError("define is missing a formals list", form.span)
    options, positional = _split_options(form.items[3:])
    formals = [_parse_formal(item) for item in form.items[2].items]
    seen: set[SourceSymbol] = set()
    for formal in formals:
        if formal.name in seen:
            raise ScanError(f"duplicate formal {formal.name.printed()}", form.span)
        seen.add(formal.name)
    returns = _parse_returns(options.get("RETURNS"))
    parents, short, long = _doc_options(options, form.span)

    rest = positional
    split = next(
        (i for i, f in enumerate(rest) if isinstance(f, SymbolForm) and f.sym.name == "///"),
        None,
    )
    if split is None:
        body, related_forms = rest, []
    else:
        body, related_forms = rest[:split], rest[split + 1 :]
    related: list[DocEvent] = []
    for sub in related_forms:
        _scan_form(sub, related, local=False)

    stored = _stored_define_form(form)
    return DefineDecl(
        name, formals, returns, parents, short, long, body, related, stored, form.span, local
    )


def _strip_spec_strings(item: Form) -> Form:
    if not isinstance(item, ListForm):
        return item
    return ListForm(
        [sub for sub in item.items if not isinstance(sub, StringForm)], item.span
    )


def _stored_define_form(form: ListForm) -> ListForm:
    """The catalogued definition: the define form without its documentation.

    Doc strings and :parents/:short/:long belong to the generated topic;
    related events after the section separator are catalogued individually.
    """
    formals = form.items[2]
    assert isinstance(formals, ListForm)
    stripped_formals = ListForm(
        [_strip_spec_strings(item) for item in formals.items], formals.span
    )
    items: list[Form] = [form.items[0], form.items[1], stripped_formals]
    rest = form.items[3:]
    i = 0
    while i < len(rest):
        item = rest[i]
        if _is_keyword(item):
            assert isinstance(item, SymbolForm)
            if item.sym.name in ("PARENTS", "SHORT", "LONG"):
                i += 2
                continue
            value = rest[i + 1]
            if item.sym.name == "RETURNS":
                if isinstance(value, ListForm) and value.items and (
                    isinstance(value.items[0], SymbolForm)
                    and value.items[0].sym.name == "MV"
                ):
                    value = ListForm(
                        [value.items[0]]
                        + [_strip_spec_strings(v) for v in value.items[1:]],
                        value.span,
                    )
                else:
                    value = _strip_spec_strings(value)
            items.extend([item, value])
            i += 2
            continue
        if isinstance(item, SymbolForm) and item.sym.name == "///":
            break
        items.append(item)
        i += 1
    return ListForm(items, form.span)


def _parse_aggregate(form: ListForm, local: bool) -> AggregateDecl:
    name = _required_name(form, "defaggregate")
    options, positional = _split_options(form.items[2:])
    parents, short, long = _doc_options(options, form.span)
    tag = None
    tag_value = options.get("TAG")
    if isinstance(tag_value, SymbolForm):
        tag = tag_value.sym.name
    fields: list[AggregateField] = []
    field_list = next((item for item in positional if isinstance(item, ListForm)), None)
    if field_list is not None:
        seen: set[SourceSymbol] = set()
        for item in field_list.items:
            parsed = _parse_formal(item)
            if parsed.name in seen:
                raise ScanError(f"duplicate field {parsed.name.printed()}", item.span)
            seen.add(parsed.name)
            fields.append(AggregateField(parsed.name, parsed.type, parsed.doc))
    return AggregateDecl(name, parents, short, long, tag, fields, form, form.span, local)


def _defcong_name(form: ListForm) -> SourceSymbol:
    # (defcong equiv rel (fn . args) n ...) has no name slot of its own; use
    # the conventional congruence-rule name so lookups stay unambiguous.
    items = form.items
    if (
        len(items) >= 5
        and isinstance(items[1], SymbolForm)
        and isinstance(items[2], SymbolForm)
        and isinstance(items[3], ListForm)
        and items[3].items
        and isinstance(items[3].items[0], SymbolForm)
        and isinstance(items[4], IntForm)
    ):
        equiv = items[1].sym
        rel = items[2].sym
        fn = items[3].items[0].sym
        n = items[4].value
        return SourceSymbol(fn.package, f"{equiv.name}-IMPLIES-{rel.name}-{fn.name}-{n}")
    raise ScanError("malformed defcong", form.span)


def _parse_raw_definition(form: ListForm, head: str, local: bool) -> RawDefinition:
    if head == "DEFCONG":
        name = _defcong_name(form)
    else:
        name = _required_name(form, head.lower())
    kind = KIND_BY_HEAD.get(head, "other")
    definition = Definition(name, kind, form, form.span.file)
    return RawDefinition(definition, form.span, local)


def _scan_section(form: ListForm, out: list[DocEvent], local: bool) -> None:
    name = _required_name(form, "defsection")
    options, body = _split_options(form.items[2:])
    parents, short, long = _doc_options(options, form.span)
    out.append(SectionBegin(name, parents, short, long, form.span, local))
    for sub in body:
        _scan_form(sub, out, local)
    out.append(SectionEnd(form.span))


def _scan_form(form: Form, out: list[DocEvent], local: bool) -> None:
    head = _head_name(form)
    if head is None:
        return
    assert isinstance(form, ListForm)
    if head == "LOCAL":
        for sub in form.items[1:]:
            _scan_form(sub, out, local=True)
    elif head == "DEFXDOC":
        out.append(_parse_defxdoc(form, local))
    elif head == "SET-DEFAULT-PARENTS":
        out.append(_parse_set_default_parents(form, local))
    elif head == "DEFSECTION":
        _scan_section(form, out, local)
    elif head == "DEFINE":
        out.append(_parse_define(form, local))
    elif head == "DEFAGGREGATE":
        out.append(_parse_aggregate(form, local))
    elif head in ("DEFUN", "DEFMACRO", "DEFTHM", "DEFCONST", "DEFCONG"):
        out.append(_parse_raw_definition(form, head, local))


def scan_events(forms: list[Form]) -> list[DocEvent]:
    """Extract documentation events from top-level forms, in source order."""
    out: list[DocEvent] = []
    for form in forms:
        _scan_form(form, out, local=False)
    return out


@dataclass
class World:
    definitions: dict[SourceSymbol, Definition]
    events: list[DocEvent]
    files: list[str] = field(default_factory=list)


def lookup_definition(world: World, name: SourceSymbol) -> Definition | None:
    return world.definitions.get(name)


def _load_file(path: str, default_package: str) -> list[DocEvent]:
    from . import macros

    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise WorldError(f"cannot read {path}: {exc}") from exc
    forms = read_forms(text, default_package, file=path)
    return macros.elaborate_events(scan_events(forms))


def build_world(
    files: list[str], default_package: str, parallel: bool = False
) -> World:
    """Read every file in order and assemble the definition world.

    Files may be parsed concurrently; events are concatenated in the given
    file order so the result is identical either way.
    """
    paths = [str(f) for f in files]
    if parallel and len(paths) > 1:
        with ThreadPoolExecutor(max_workers=min(8, len(paths))) as pool:
            per_file = list(pool.map(lambda p: _load_file(p, default_package), paths))
    else:
        per_file = [_load_file(p, default_package) for p in paths]

    events: list[DocEvent] = []
    for chunk in per_file:
        events.extend(chunk)

    definitions: dict[SourceSymbol, Definition] = {}
    first_span: dict[SourceSymbol, Span] = {}
    for ev in events:
        if isinstance(ev, RawDefinition) and not ev.local:
            name = ev.definition.name
            if name in definitions:
                raise WorldError(
                    f"duplicate definition {name.printed()}: "
                    f"{first_span[name]} and {ev.span}"
                )
            definitions[name] = ev.definition
            first_span[name] = ev.span
    return World(definitions, events, paths)
