"""Command-line entry point: build, doc, lint, and serve subcommands.

Exit codes: 0 success (warnings allowed), 1 content error, 2 usage error.
Diagnostics go to stderr; only requested content is written to stdout.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import pipeline, server
from .pipeline import BuildError, ManualBuild, ProjectConfig
from .registry import resolve_name
from .textrender import TextRenderConfig, render_topic_text
from .world import ScanError, WorldError

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2


def _find_config(explicit: str | None) -> Path:
    if explicit:
        return Path(explicit)
    env = os.environ.get(pipeline.CONFIG_ENV_VAR)
    if env:
        return Path(env)
    return Path.cwd() / pipeline.CONFIG_FILE_NAME


def _load_config(args: argparse.Namespace) -> ProjectConfig:
    config = pipeline.load_config(_find_config(args.config))
    if getattr(args, "out", None):
        config.out = args.out
    config.force = getattr(args, "force", False)
    config.strict_lint = getattr(args, "strict_lint", False)
    config.archive = getattr(args, "archive", False)
    config.parallel = getattr(args, "parallel", False)
    return config


def _print_warnings(build: ManualBuild) -> None:
    for diag in build.diagnostics:
        print(diag.format(), file=sys.stderr)
    count = len(build.diagnostics)
    if count:
        plural = "" if count == 1 else "s"
        print(f"{count} warning{plural}.", file=sys.stderr)


def _compile(config: ProjectConfig) -> ManualBuild:
    try:
        return pipeline.compile_manual(config)
    except (BuildError, ScanError, WorldError) as exc:
        raise BuildError(str(exc)) from exc


def cmd_build(args: argparse.Namespace) -> int:
    config = _load_config(args)
    build = _compile(config)
    _print_warnings(build)
    if config.strict_lint and build.diagnostics:
        print("error: warnings present with --strict-lint", file=sys.stderr)
        return EXIT_ERROR
    outdir = config.base_dir / config.out
    manifest = pipeline.export_manual(build, outdir, config)
    print(
        f"wrote {manifest.topic_count} topics to {outdir} "
        f"({len(manifest.files)} files)",
        file=sys.stderr,
    )
    return EXIT_OK


def _levenshtein(a: str, b: str) -> int:
    if abs(len(a) - len(b)) > 2:
        return 3
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        current = [i]
        for j, cb in enumerate(b, 1):
            current.append(
                min(previous[j] + 1, current[j - 1] + 1, previous[j - 1] + (ca != cb))
            )
        previous = current
    return previous[-1]


def cmd_doc(args: argparse.Namespace) -> int:
    if not args.topic.strip():
        print("error: doc requires a topic name", file=sys.stderr)
        return EXIT_USAGE
    config = _load_config(args)
    build = _compile(config)
    sym, candidates = resolve_name(build.registry, args.topic, config.package)
    if sym is None:
        token = args.topic.upper()
        print(f"error: unknown topic {token}", file=sys.stderr)
        if candidates:
            names = ", ".join(c.printed() for c in candidates)
            print(f"ambiguous between: {names}", file=sys.stderr)
        else:
            near = sorted(
                {
                    t.name.printed()
                    for t in build.registry.topics
                    if _levenshtein(t.name.name, token) <= 2
                }
            )
            if near:
                print(f"did you mean: {', '.join(near)}?", file=sys.stderr)
        return EXIT_ERROR
    topic = build.topics.topics[sym]
    short_tree, long_tree = build.trees[sym]
    text = render_topic_text(topic, build.topics, short_tree, long_tree, TextRenderConfig())
    sys.stdout.write(text)
    return EXIT_OK


def cmd_lint(args: argparse.Namespace) -> int:
    config = _load_config(args)
    build = _compile(config)
    for diag in build.diagnostics:
        print(diag.format(), file=sys.stderr)
    return EXIT_OK if not build.diagnostics else EXIT_ERROR


def cmd_serve(args: argparse.Namespace) -> int:
    config = _load_config(args)
    outdir = config.base_dir / config.out
    if args.build:
        build = _compile(config)
        _print_warnings(build)
        config.force = True
        pipeline.export_manual(build, outdir, config)
    try:
        store_dir = Path(outdir)
        server.TopicStore(store_dir)  # validate before binding the port
    except server.ManualDirError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    print(f"serving {outdir} on http://{args.host}:{args.port}/", file=sys.stderr)
    server.serve(store_dir, port=args.port, host=args.host)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sexdoc",
        description="Compile documentation topics from S-expression sources.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="path to sexdoc.cfg (default: ./sexdoc.cfg "
                       f"or ${pipeline.CONFIG_ENV_VAR})")

    build = sub.add_parser("build", help="build the manual directory")
    common(build)
    build.add_argument("--out", help="output directory (overrides config)")
    build.add_argument("--force", action="store_true", help="overwrite a non-empty output dir")
    build.add_argument("--strict-lint", action="store_true", help="treat warnings as errors")
    build.add_argument("--archive", action="store_true", help="include download/manual.zip")
    build.add_argument("--parallel", action="store_true", help="parse source files concurrently")
    build.set_defaults(func=cmd_build)

    doc = sub.add_parser("doc", help="print one topic as text")
    common(doc)
    doc.add_argument("topic", help="topic name, optionally PKG::NAME")
    doc.set_defaults(func=cmd_doc)

    lint = sub.add_parser("lint", help="report diagnostics without writing output")
    common(lint)
    lint.set_defaults(func=cmd_lint)

    serve_p = sub.add_parser("serve", help="serve a built manual over HTTP")
    common(serve_p)
    serve_p.add_argument("--out", help="manual directory (overrides config)")
    serve_p.add_argument("--port", type=int, default=server.DEFAULT_PORT)
    serve_p.add_argument("--host", default=server.DEFAULT_HOST)
    serve_p.add_argument("--build", action="store_true", help="build before serving")
    serve_p.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BuildError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except FileExistsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
