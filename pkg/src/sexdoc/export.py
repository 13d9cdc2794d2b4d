"""Deterministic static export of a finalized manual.

save_manual writes index.html plus viewer assets, xdata.json (one record
per topic), xindex.json (ranked search entries plus the navigation tree),
and manifest.json with sizes and checksums. All JSON uses sorted keys and
a fixed compact format, so identical input produces identical bytes.
"""

from __future__ import annotations

import hashlib
import html
import json
import zipfile
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import __version__
from .keys import decode_key, encode_key
from .markup import Element, MarkupTree, extract_text, parse_markup
from .reader import SourceSymbol
from .registry import TopicSet

ASSET_FILES = ("index.html", "style.css", "viewer.js")
_TITLE_PLACEHOLDER = "__MANUAL_TITLE__"


@dataclass
class ExportedTopic:
    key: str
    name: str
    package: str
    parents: list[str]
    children: list[str]
    short_html: str
    long_html: str
    origin: str
    importance: int

    def record(self) -> dict:
        return {
            "name": self.name,
            "package": self.package,
            "parents": self.parents,
            "children": self.children,
            "short_html": self.short_html,
            "long_html": self.long_html,
            "origin": self.origin,
            "importance": self.importance,
        }


@dataclass
class ManifestFile:
    path: str
    bytes: int
    sha256: str


@dataclass
class Manifest:
    version: str
    topic_count: int
    warning_count: int
    files: list[ManifestFile] = field(default_factory=list)


def canonical_json(obj: object) -> bytes:
    return json.dumps(
        obj, sort_keys=True, ensure_ascii=True, separators=(",", ":")
    ).encode("ascii")


def _see_targets(tree: MarkupTree) -> set[str]:
    found: set[str] = set()

    def walk(nodes) -> None:
        for node in nodes:
            if isinstance(node, Element):
                if node.tag == "see":
                    found.add(node.attr("topic"))
                walk(node.children)

    walk(tree.children)
    return found


def _depths(ts: TopicSet) -> dict[SourceSymbol, int]:
    depths: dict[SourceSymbol, int] = {ts.root: 0}
    queue = [ts.root]
    while queue:
        node = queue.pop(0)
        for child in ts.children.get(node, []):
            if child not in depths:
                depths[child] = depths[node] + 1
                queue.append(child)
    return depths


def compute_importance(
    ts: TopicSet, trees: dict[SourceSymbol, tuple[MarkupTree, MarkupTree]]
) -> dict[SourceSymbol, int]:
    """Prominence score: inbound links + 2 per child + 10 near the root."""
    inbound: dict[SourceSymbol, set[SourceSymbol]] = {name: set() for name in ts.topics}
    for source, (short_tree, long_tree) in trees.items():
        for key in _see_targets(short_tree) | _see_targets(long_tree):
            try:
                target = decode_key(key)
            except ValueError:
                continue
            if target in inbound and target != source:
                inbound[target].add(source)
    depths = _depths(ts)
    scores: dict[SourceSymbol, int] = {}
    for name in ts.topics:
        score = len(inbound[name]) + 2 * len(ts.children.get(name, []))
        if depths.get(name, 99) <= 2:
            score += 10
        scores[name] = score
    return scores


def importance_score(
    topic: SourceSymbol,
    ts: TopicSet,
    trees: dict[SourceSymbol, tuple[MarkupTree, MarkupTree]],
) -> int:
    return compute_importance(ts, trees)[topic]


def build_exported(
    ts: TopicSet,
    html_by_topic: dict[SourceSymbol, tuple[str, str]],
    importance: dict[SourceSymbol, int],
) -> dict[str, ExportedTopic]:
    exported: dict[str, ExportedTopic] = {}
    for name, topic in ts.topics.items():
        short_html, long_html = html_by_topic[name]
        exported[encode_key(name)] = ExportedTopic(
            key=encode_key(name),
            name=name.name,
            package=name.package,
            parents=[encode_key(p) for p in topic.parents],
            children=[encode_key(c) for c in ts.children[name]],
            short_html=short_html,
            long_html=long_html,
            origin=topic.origin,
            importance=importance[name],
        )
    return exported


def build_search_index(
    ts: TopicSet, exported: dict[str, ExportedTopic]
) -> list[list]:
    """Entries [key, name, short_text, importance] ranked for the viewer."""
    entries = []
    for key, topic in exported.items():
        short_text = extract_text(parse_markup(topic.short_html))
        entries.append([key, topic.name, short_text, topic.importance])
    entries.sort(key=lambda e: (-e[3], e[0]))
    return entries


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load_asset(name: str) -> str:
    return (resources.files("sexdoc") / "assets" / name).read_text(encoding="utf-8")


def _deterministic_zip(files: dict[str, bytes]) -> bytes:
    import io

    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        for name in sorted(files):
            info = zipfile.ZipInfo(name, date_time=(1980, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_DEFLATED
            info.external_attr = 0o644 << 16
            archive.writestr(info, files[name])
    return buffer.getvalue()


def save_manual(
    ts: TopicSet,
    exported: dict[str, ExportedTopic],
    outdir: Path,
    *,
    title: str = "Manual",
    force: bool = False,
    archive: bool = False,
    warning_count: int = 0,
) -> Manifest:
    """Write the manual directory; two runs on equal input are byte-identical."""
    outdir = Path(outdir)
    if outdir.exists() and any(outdir.iterdir()) and not force:
        raise FileExistsError(f"output directory {outdir} is not empty (use --force)")
    outdir.mkdir(parents=True, exist_ok=True)

    files: dict[str, bytes] = {}
    files["xdata.json"] = canonical_json(
        {key: topic.record() for key, topic in exported.items()}
    )
    files["xindex.json"] = canonical_json(
        {
            "search": build_search_index(ts, exported),
            "tree": {key: topic.children for key, topic in exported.items()},
        }
    )
    for asset in ASSET_FILES:
        content = _load_asset(asset)
        if asset == "index.html":
            content = content.replace(_TITLE_PLACEHOLDER, html.escape(title))
        files[asset] = content.encode("utf-8")

    if archive:
        files["download/manual.zip"] = _deterministic_zip(files)

    manifest = Manifest(__version__, len(exported), warning_count)
    for name in sorted(files):
        data = files[name]
        target = outdir / name
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(data)
        manifest.files.append(ManifestFile(name, len(data), _sha256(data)))

    manifest_obj = {
        "version": manifest.version,
        "topic_count": manifest.topic_count,
        "warning_count": manifest.warning_count,
        "files": [
            {"path": f.path, "bytes": f.bytes, "sha256": f.sha256}
            for f in manifest.files
        ],
    }
    (outdir / "manifest.json").write_bytes(canonical_json(manifest_obj))
    return manifest
