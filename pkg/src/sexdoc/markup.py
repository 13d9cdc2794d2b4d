"""Strictly balanced XML-subset markup: parse, serialize, extract text.

Only whitelisted tags are accepted and every tag must be closed; unknown
tags, unknown entities, and mismatched closings are hard errors carrying
character offsets. The serializer emits a canonical form that parses back
to a structurally equal tree.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

TAGS = {
    "p", "b", "i", "u", "em", "tt", "code", "sf",
    "h1", "h2", "h3", "h4", "h5",
    "ul", "ol", "li", "dl", "dt", "dd",
    "blockquote", "br", "img", "icon", "a", "see", "srclink", "box",
    "table", "tr", "th", "td",
}

ENTITIES = {
    "lt": "<",
    "gt": ">",
    "amp": "&",
    "quot": '"',
    "apos": "'",
    "nbsp": "\xa0",
}

#: Tags whose text content is kept verbatim by extract_text.
VERBATIM_TAGS = {"code", "tt"}

#: Tags that separate words when extracting plain text.
_BLOCK_TAGS = {
    "p", "h1", "h2", "h3", "h4", "h5", "ul", "ol", "li", "dl", "dt", "dd",
    "blockquote", "box", "table", "tr", "th", "td", "br",
}

_TAG_NAME_RE = re.compile(r"[a-z][a-z0-9]*")
_ATTR_NAME_RE = re.compile(r"[a-z][a-z0-9-]*")
_ENTITY_RE = re.compile(r"[a-z]+")


class MarkupError(Exception):
    def __init__(self, message: str, offset: int, related_offset: int | None = None):
        detail = f"offset {offset}: {message}"
        if related_offset is not None:
            detail += f" (see offset {related_offset})"
        super().__init__(detail)
        self.message = message
        self.offset = offset
        self.related_offset = related_offset


@dataclass
class Text:
    value: str


@dataclass
class Element:
    tag: str
    attrs: list[tuple[str, str]] = field(default_factory=list)
    children: list["Node"] = field(default_factory=list)

    def attr(self, name: str, default: str = "") -> str:
        for key, value in self.attrs:
            if key == name:
                return value
        return default


Node = Element | Text


@dataclass
class MarkupTree:
    children: list[Node] = field(default_factory=list)


def escape_text(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace("\xa0", "&nbsp;")
    )


def _escape_attr(value: str) -> str:
    return (
        value.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace("'", "&apos;")
        .replace("\xa0", "&nbsp;")
    )


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def parse(self) -> MarkupTree:
        root = MarkupTree()
        stack: list[tuple[Element, int]] = []
        chars: list[str] = []

        def flush() -> None:
            if not chars:
                return
            target = stack[-1][0].children if stack else root.children
            if target and isinstance(target[-1], Text):
                target[-1].value += "".join(chars)
            else:
                target.append(Text("".join(chars)))
            chars.clear()

        text = self.text
        while self.pos < len(text):
            c = text[self.pos]
            if c == "<":
                flush()
                self._read_tag(root, stack)
            elif c == "&":
                chars.append(self._read_entity())
            elif c == ">":
                raise MarkupError("raw '>' in text; write &gt;", self.pos)
            else:
                chars.append(c)
                self.pos += 1
        flush()
        if stack:
            element, offset = stack[-1]
            raise MarkupError(f"unclosed tag <{element.tag}>", offset)
        return root

    def _read_entity(self) -> str:
        start = self.pos
        match = _ENTITY_RE.match(self.text, self.pos + 1)
        if not match or self.text[match.end() : match.end() + 1] != ";":
            raise MarkupError("malformed entity reference", start)
        name = match.group()
        if name not in ENTITIES:
            raise MarkupError(f"unknown entity &{name};", start)
        self.pos = match.end() + 1
        return ENTITIES[name]

    def _read_tag(self, root: MarkupTree, stack: list[tuple[Element, int]]) -> None:
        text = self.text
        start = self.pos
        self.pos += 1
        if self.pos < len(text) and text[self.pos] == "/":
            self.pos += 1
            match = _TAG_NAME_RE.match(text, self.pos)
            if not match:
                raise MarkupError("malformed closing tag", start)
            name = match.group()
            self.pos = match.end()
            if self.pos >= len(text) or text[self.pos] != ">":
                raise MarkupError("malformed closing tag", start)
            self.pos += 1
            if not stack:
                raise MarkupError(f"closing tag </{name}> with nothing open", start)
            element, open_offset = stack[-1]
            if element.tag != name:
                raise MarkupError(
                    f"mismatched tag: <{element.tag}> opened at offset "
                    f"{open_offset} closed by </{name}>",
                    start,
                    open_offset,
                )
            stack.pop()
            return

        match = _TAG_NAME_RE.match(text, self.pos)
        if not match:
            raise MarkupError("malformed tag", start)
        name = match.group()
        if name not in TAGS:
            raise MarkupError(f"unknown tag <{name}>", start)
        self.pos = match.end()
        element = Element(name)
        seen: set[str] = set()
        while True:
            while self.pos < len(text) and text[self.pos].isspace():
                self.pos += 1
            if self.pos >= len(text):
                raise MarkupError(f"unterminated tag <{name}>", start)
            if text.startswith("/>", self.pos):
                self.pos += 2
                self._attach(element, root, stack)
                return
            if text[self.pos] == ">":
                self.pos += 1
                self._attach(element, root, stack)
                stack.append((element, start))
                return
            attr_match = _ATTR_NAME_RE.match(text, self.pos)
            if not attr_match:
                raise MarkupError(f"malformed attribute in <{name}>", self.pos)
            attr_name = attr_match.group()
            if attr_name in seen:
                raise MarkupError(f"duplicate attribute {attr_name!r}", self.pos)
            seen.add(attr_name)
            self.pos = attr_match.end()
            if self.pos >= len(text) or text[self.pos] != "=":
                raise MarkupError(f"attribute {attr_name!r} is missing a value", self.pos)
            self.pos += 1
            if self.pos >= len(text) or text[self.pos] not in "'\"":
                raise MarkupError(f"attribute {attr_name!r} value must be quoted", self.pos)
            quote = text[self.pos]
            self.pos += 1
            value_chars: list[str] = []
            while True:
                if self.pos >= len(text):
                    raise MarkupError(f"unterminated attribute {attr_name!r}", start)
                c = text[self.pos]
                if c == quote:
                    self.pos += 1
                    break
                if c == "&":
                    value_chars.append(self._read_entity())
                elif c == "<":
                    raise MarkupError(f"raw '<' in attribute {attr_name!r}", self.pos)
                else:
                    value_chars.append(c)
                    self.pos += 1
            element.attrs.append((attr_name, "".join(value_chars)))

    @staticmethod
    def _attach(
        element: Element, root: MarkupTree, stack: list[tuple[Element, int]]
    ) -> None:
        target = stack[-1][0].children if stack else root.children
        target.append(element)


def parse_markup(text: str) -> MarkupTree:
    """Parse markup into a tree; raises MarkupError with offsets on bad input."""
    return _Parser(text).parse()


def _serialize_node(node: Node, out: list[str]) -> None:
    if isinstance(node, Text):
        out.append(escape_text(node.value))
        return
    if not node.children:
        out.append(f"<{node.tag}")
        for name, value in node.attrs:
            out.append(f" {name}='{_escape_attr(value)}'")
        out.append("/>")
        return
    out.append(f"<{node.tag}")
    for name, value in node.attrs:
        out.append(f" {name}='{_escape_attr(value)}'")
    out.append(">")
    for child in node.children:
        _serialize_node(child, out)
    out.append(f"</{node.tag}>")


def serialize(tree: MarkupTree) -> str:
    """Canonical serialization; parse(serialize(t)) equals t."""
    out: list[str] = []
    for node in tree.children:
        _serialize_node(node, out)
    return "".join(out)


def serialize_children(element: Element) -> str:
    out: list[str] = []
    for child in element.children:
        _serialize_node(child, out)
    return "".join(out)


def _collect_segments(
    nodes: list[Node], verbatim: bool, segments: list[tuple[str, bool]]
) -> None:
    for node in nodes:
        if isinstance(node, Text):
            segments.append((node.value, verbatim))
        else:
            _collect_segments(
                node.children, verbatim or node.tag in VERBATIM_TAGS, segments
            )
            if node.tag in _BLOCK_TAGS:
                segments.append((" ", False))


def extract_text(tree: MarkupTree) -> str:
    """Plain text of a tree: entities decoded, whitespace collapsed, trimmed.

    Contents of code and tt elements are kept verbatim.
    """
    segments: list[tuple[str, bool]] = []
    _collect_segments(tree.children, False, segments)
    parts: list[str] = []
    for value, verbatim in segments:
        if verbatim:
            parts.append(value)
            continue
        collapsed = re.sub(r"\s+", " ", value)
        if parts and parts[-1].endswith(" ") and collapsed.startswith(" "):
            collapsed = collapsed[1:]
        if collapsed:
            parts.append(collapsed)
    return "".join(parts).strip()
