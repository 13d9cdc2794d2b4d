"""End-to-end compilation: source files to a finalized, rendered manual.

Also owns the project configuration, which is itself an S-expression file
read with the same reader the sources use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from . import export
from .markup import MarkupError, MarkupTree, parse_markup, serialize
from .preprocess import PreprocessContext, PreprocessError, preprocess
from .reader import ListForm, SourceSymbol, StringForm, SymbolForm, read_forms
from .registry import (
    Diagnostic,
    Registry,
    TopicSet,
    apply_events,
    finalize,
)
from .world import World, build_world

DEFAULT_PACKAGE = "ACL2"
DEFAULT_ROOT_NAME = "TOP"
CONFIG_ENV_VAR = "SEXDOC_CONFIG"
CONFIG_FILE_NAME = "sexdoc.cfg"


class BuildError(Exception):
    pass


@dataclass
class ProjectConfig:
    sources: list[str]
    package: str = DEFAULT_PACKAGE
    root: SourceSymbol | None = None
    title: str = "Manual"
    out: str = "manual"
    base_dir: Path = field(default_factory=Path.cwd)
    force: bool = False
    strict_lint: bool = False
    archive: bool = False
    parallel: bool = False

    @property
    def root_symbol(self) -> SourceSymbol:
        return self.root or SourceSymbol(self.package, DEFAULT_ROOT_NAME)

    def source_files(self) -> list[Path]:
        files: list[Path] = []
        for pattern in self.sources:
            path = Path(pattern)
            if path.is_absolute():
                matches = sorted(path.parent.glob(path.name))
            else:
                matches = sorted(self.base_dir.glob(pattern))
            if not matches and not any(ch in pattern for ch in "*?["):
                raise BuildError(f"source file not found: {pattern}")
            files.extend(matches)
        if not files:
            raise BuildError("no source files matched the configured patterns")
        return files


def _config_string(value, key: str) -> str:
    if isinstance(value, StringForm):
        return value.value
    if isinstance(value, SymbolForm):
        return value.sym.name
    raise BuildError(f"config key :{key} must be a string")


def load_config(path: Path) -> ProjectConfig:
    """Read a sexdoc.cfg file: one list of :key value pairs."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise BuildError(f"cannot read config {path}: {exc}") from exc
    forms = read_forms(text, DEFAULT_PACKAGE, file=str(path))
    if len(forms) != 1 or not isinstance(forms[0], ListForm):
        raise BuildError(f"{path}: config must contain one list of :key value pairs")
    items = forms[0].items
    if len(items) % 2 != 0:
        raise BuildError(f"{path}: config has a key with no value")
    options = {}
    for i in range(0, len(items), 2):
        key = items[i]
        if not isinstance(key, SymbolForm) or key.sym.package != "KEYWORD":
            raise BuildError(f"{path}: config keys must be keywords")
        options[key.sym.name] = items[i + 1]

    sources_value = options.get("SOURCES")
    if sources_value is None:
        raise BuildError(f"{path}: config is missing :sources")
    if isinstance(sources_value, StringForm):
        sources = [sources_value.value]
    elif isinstance(sources_value, ListForm):
        sources = [_config_string(v, "sources") for v in sources_value.items]
    else:
        raise BuildError(f"{path}: :sources must be a string or list of strings")
    if not sources:
        raise BuildError(f"{path}: :sources must name at least one pattern")

    package = DEFAULT_PACKAGE
    if "PACKAGE" in options:
        package = _config_string(options["PACKAGE"], "package").upper()

    root = None
    if "ROOT" in options:
        value = options["ROOT"]
        if isinstance(value, SymbolForm):
            root = value.sym
        elif isinstance(value, StringForm):
            from .reader import parse_symbol_token

            try:
                root = parse_symbol_token(value.value, package)
            except ValueError as exc:
                raise BuildError(f"{path}: bad :root symbol: {exc}") from exc
        else:
            raise BuildError(f"{path}: :root must be a symbol")

    config = ProjectConfig(sources, package, root, base_dir=path.parent.resolve())
    if "TITLE" in options:
        config.title = _config_string(options["TITLE"], "title")
    if "OUT" in options:
        config.out = _config_string(options["OUT"], "out")
    return config


@dataclass
class ManualBuild:
    world: World
    registry: Registry
    topics: TopicSet
    trees: dict[SourceSymbol, tuple[MarkupTree, MarkupTree]]
    html: dict[SourceSymbol, tuple[str, str]]
    importance: dict[SourceSymbol, int]
    diagnostics: list[Diagnostic]


def compile_manual(config: ProjectConfig) -> ManualBuild:
    """Run read, scan, elaborate, registry, finalize, and preprocessing."""
    files = [str(f) for f in config.source_files()]
    world = build_world(files, config.package, parallel=config.parallel)
    registry = apply_events(world.events)
    topics = finalize(registry, config.root_symbol)

    trees: dict[SourceSymbol, tuple[MarkupTree, MarkupTree]] = {}
    html: dict[SourceSymbol, tuple[str, str]] = {}
    diagnostics: list[Diagnostic] = list(topics.warnings)
    for name, topic in topics.topics.items():
        ctx = PreprocessContext(
            world,
            registry,
            current_package=name.package,
            topic=name,
            file=topic.span.file if topic.span else topic.origin,
            line=topic.span.line if topic.span else 0,
        )
        rendered = []
        for label, raw in (("short", topic.short), ("long", topic.long)):
            try:
                expanded = preprocess(raw, ctx)
                tree = parse_markup(expanded)
            except (PreprocessError, MarkupError) as exc:
                raise BuildError(
                    f"{ctx.file}:{ctx.line}: in the :{label} string of "
                    f"{name.printed()}: {exc}"
                ) from exc
            rendered.append(tree)
        trees[name] = (rendered[0], rendered[1])
        html[name] = (serialize(rendered[0]), serialize(rendered[1]))
        diagnostics.extend(ctx.diagnostics)

    importance = export.compute_importance(topics, trees)
    topics.sort_children(importance)
    return ManualBuild(world, registry, topics, trees, html, importance, diagnostics)


def export_manual(build: ManualBuild, outdir: Path, config: ProjectConfig):
    exported = export.build_exported(build.topics, build.html, build.importance)
    return export.save_manual(
        build.topics,
        exported,
        outdir,
        title=config.title,
        force=config.force,
        archive=config.archive,
        warning_count=len(build.diagnostics),
    )
