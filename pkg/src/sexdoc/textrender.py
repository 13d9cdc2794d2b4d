"""Plain-text rendering of a single topic for terminal display.

Output starts with a PACKAGE::NAME -- origin header and a Parents line,
followed by the short summary and the long body. Paragraphs are wrapped
with a greedy fill; internal links render as [text], external links as
{text | url}, and block code is left unwrapped at a fixed indent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .markup import Element, MarkupTree, Node, Text
from .registry import Topic, TopicSet

_INLINE_TAGS = {"b", "i", "u", "em", "sf", "tt", "see", "a", "srclink", "img", "icon"}

_BREAK = object()


@dataclass
class TextRenderConfig:
    width: int = 75
    indent: int = 2

    def __post_init__(self) -> None:
        if self.width < 20:
            raise ValueError("width must be at least 20 columns")


def _inline_words(nodes: list[Node], words: list[object]) -> None:
    for node in nodes:
        if isinstance(node, Text):
            words.extend(node.value.split())
        elif node.tag == "br":
            words.append(_BREAK)
        elif node.tag == "see":
            inner: list[object] = []
            _inline_words(node.children, inner)
            words.append("[" + " ".join(w for w in inner if isinstance(w, str)) + "]")
        elif node.tag == "a":
            inner = []
            _inline_words(node.children, inner)
            label = " ".join(w for w in inner if isinstance(w, str))
            words.extend(f"{{{label} | {node.attr('href')}}}".split())
        elif node.tag in ("img", "icon"):
            words.append(f"[image {node.attr('src')}]")
        else:
            _inline_words(node.children, words)


def _wrap(words: list[object], width: int, indent: int, hang: int | None = None) -> list[str]:
    lines: list[str] = []
    prefix = " " * indent
    cont_prefix = " " * (hang if hang is not None else indent)
    line = prefix
    empty = True
    for word in words:
        if word is _BREAK:
            lines.append(line if not empty else "")
            line = cont_prefix
            empty = True
            continue
        assert isinstance(word, str)
        candidate = word if empty else " " + word
        if not empty and len(line) + len(candidate) > width:
            lines.append(line)
            line = cont_prefix + word
        else:
            line += candidate
        empty = False
    if not empty:
        lines.append(line)
    return lines


def _inline_text(nodes: list[Node]) -> str:
    words: list[object] = []
    _inline_words(nodes, words)
    return " ".join(w for w in words if isinstance(w, str))


def _code_lines(element: Element, indent: int) -> list[str]:
    # links inside code flatten to their bare text so the code stays code
    def collect(nodes: list[Node], out: list[str]) -> None:
        for node in nodes:
            if isinstance(node, Text):
                out.append(node.value)
            else:
                collect(node.children, out)

    chunks: list[str] = []
    collect(element.children, chunks)
    content = "".join(chunks).strip("\n")
    return [(" " * indent + line).rstrip() for line in content.split("\n")]


def _render_blocks(nodes: list[Node], cfg: TextRenderConfig, indent: int) -> list[list[str]]:
    blocks: list[list[str]] = []
    pending_inline: list[Node] = []

    def flush_inline() -> None:
        if not pending_inline:
            return
        words: list[object] = []
        _inline_words(pending_inline, words)
        if words:
            blocks.append(_wrap(words, cfg.width, indent))
        pending_inline.clear()

    for node in nodes:
        if isinstance(node, Text):
            if node.value.strip():
                pending_inline.append(node)
            continue
        if node.tag in _INLINE_TAGS:
            pending_inline.append(node)
            continue
        if node.tag == "code":
            flush_inline()
            blocks.append(_code_lines(node, indent + 2))
            continue
        flush_inline()
        if node.tag == "p":
            words: list[object] = []
            _inline_words(node.children, words)
            blocks.append(_wrap(words, cfg.width, indent))
        elif node.tag in ("h1", "h2", "h3", "h4", "h5"):
            blocks.append([_inline_text(node.children)])
        elif node.tag in ("ul", "ol"):
            item_lines: list[str] = []
            number = 1
            for child in node.children:
                if not isinstance(child, Element) or child.tag != "li":
                    continue
                bullet = f"{number}. " if node.tag == "ol" else "- "
                number += 1
                words = []
                _inline_words(child.children, words)
                wrapped = _wrap(words, cfg.width, indent + len(bullet), hang=indent + len(bullet))
                if wrapped:
                    first = wrapped[0][indent + len(bullet) :]
                    wrapped[0] = " " * indent + bullet + first
                item_lines.extend(wrapped)
            blocks.append(item_lines)
        elif node.tag == "dl":
            dl_lines: list[str] = []
            for child in node.children:
                if not isinstance(child, Element):
                    continue
                if child.tag == "dt":
                    dl_lines.append(" " * indent + _inline_text(child.children))
                elif child.tag == "dd":
                    words = []
                    _inline_words(child.children, words)
                    dl_lines.extend(_wrap(words, cfg.width, indent + 2))
            blocks.append(dl_lines)
        elif node.tag in ("blockquote", "box"):
            blocks.extend(_render_blocks(node.children, cfg, indent + 2))
        elif node.tag == "table":
            rows: list[str] = []
            for child in node.children:
                if isinstance(child, Element) and child.tag == "tr":
                    cells = [
                        _inline_text(cell.children)
                        for cell in child.children
                        if isinstance(cell, Element) and cell.tag in ("th", "td")
                    ]
                    rows.append(" " * indent + " | ".join(cells))
            blocks.append(rows)
        elif node.tag == "br":
            blocks.append([])
        else:
            blocks.extend(_render_blocks(node.children, cfg, indent))
    flush_inline()
    return [b for b in blocks if b]


def _parents_phrase(topic: Topic) -> str:
    names = [p.printed(topic.name.package) for p in topic.parents]
    if len(names) == 1:
        return names[0]
    return ", ".join(names[:-1]) + " and " + names[-1]


def render_topic_text(
    topic: Topic,
    topics: TopicSet,
    short_tree: MarkupTree,
    long_tree: MarkupTree,
    cfg: TextRenderConfig | None = None,
) -> str:
    """Render one finalized topic as wrapped plain text."""
    cfg = cfg or TextRenderConfig()
    lines: list[str] = [f"{topic.name.printed()} -- {topic.origin}"]
    if topic.parents:
        lines.append(f"Parents: {_parents_phrase(topic)}.")
    blocks = _render_blocks(short_tree.children, cfg, cfg.indent)
    blocks.extend(_render_blocks(long_tree.children, cfg, cfg.indent))
    for block in blocks:
        lines.append("")
        lines.extend(block)
    return "\n".join(lines) + "\n"
