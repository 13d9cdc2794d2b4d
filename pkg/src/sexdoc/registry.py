"""Topic table, default-parent scoping, and hierarchy finalization.

apply_events folds a world's event stream into an ordered registry of
topics. finalize validates the parent graph: dangling parents are repaired
under a synthetic MISSING-PARENTS topic, cycles are broken deterministically,
and everything suspicious is reported as a warning rather than an error so
large builds complete with diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import keys
from .reader import SESSION_ORIGIN, SourceSymbol, Span, parse_symbol_token
from .world import DefineTopic, DocEvent, SetDefaultParents

W_REDEF = "W-REDEF"
W_ORPHAN = "W-ORPHAN"
W_CYCLE = "W-CYCLE"
W_UNREACHABLE = "W-UNREACHABLE"
W_BROKEN_LINK = "W-BROKEN-LINK"
W_AMBIG = "W-AMBIG"
W_MISSING_DEF = "W-MISSING-DEF"

MISSING_PARENTS_NAME = "MISSING-PARENTS"


@dataclass
class Diagnostic:
    code: str
    message: str
    file: str = ""
    line: int = 0

    def format(self) -> str:
        return f"{self.file}:{self.line}: {self.code}: {self.message}"


@dataclass
class Topic:
    name: SourceSymbol
    parents: list[SourceSymbol] = field(default_factory=list)
    short: str = ""
    long: str = ""
    origin: str = SESSION_ORIGIN
    order: int = 0
    span: Span | None = None


@dataclass
class Registry:
    topics: list[Topic] = field(default_factory=list)
    by_name: dict[SourceSymbol, Topic] = field(default_factory=dict)
    warnings: list[Diagnostic] = field(default_factory=list)


def _dedupe(parents: list[SourceSymbol]) -> list[SourceSymbol]:
    seen = set()
    out = []
    for p in parents:
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def apply_events(events: list[DocEvent]) -> Registry:
    """Build the ordered topic table from a world's event stream.

    set-default-parents is file scoped: it applies from its position to the
    end of its own file. Redefining a topic replaces its content, last wins,
    with a warning.
    """
    reg = Registry()
    defaults: list[SourceSymbol] | None = None
    current_file: str | None = None
    for ev in events:
        if ev.span.file != current_file:
            current_file = ev.span.file
            defaults = None
        if isinstance(ev, SetDefaultParents):
            defaults = list(ev.parents)
        elif isinstance(ev, DefineTopic):
            if ev.parents is not None:
                parents = _dedupe(ev.parents)
            else:
                parents = list(defaults or [])
            existing = reg.by_name.get(ev.name)
            if existing is not None:
                existing.parents = parents
                existing.short = ev.short
                existing.long = ev.long
                reg.warnings.append(
                    Diagnostic(
                        W_REDEF,
                        f"topic {ev.name.printed()} redefined, replacing the "
                        f"version from {existing.origin}",
                        ev.span.file,
                        ev.span.line,
                    )
                )
            else:
                topic = Topic(
                    ev.name,
                    parents,
                    ev.short,
                    ev.long,
                    origin=ev.span.file,
                    order=len(reg.topics),
                    span=ev.span,
                )
                reg.topics.append(topic)
                reg.by_name[ev.name] = topic
    return reg


@dataclass
class TopicSet:
    topics: dict[SourceSymbol, Topic]
    children: dict[SourceSymbol, list[SourceSymbol]]
    roots: list[SourceSymbol]
    warnings: list[Diagnostic]
    root: SourceSymbol

    def sort_children(self, importance: dict[SourceSymbol, int]) -> None:
        """Order every child list by importance descending, then key."""
        for name, kids in self.children.items():
            kids.sort(key=lambda c: (-importance.get(c, 0), keys.encode_key(c)))


def _warn(ts_warnings: list[Diagnostic], code: str, message: str, topic: Topic) -> None:
    file = topic.span.file if topic.span else topic.origin
    line = topic.span.line if topic.span else 0
    ts_warnings.append(Diagnostic(code, message, file, line))


def _find_cycle(
    order: list[SourceSymbol], parents: dict[SourceSymbol, list[SourceSymbol]]
) -> list[tuple[SourceSymbol, SourceSymbol]] | None:
    """Find one cycle following declared-parent edges; edges are (child, parent)."""
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {name: 0 for name in order}

    for start in order:
        if color[start] != WHITE:
            continue
        stack: list[tuple[SourceSymbol, int]] = [(start, 0)]
        path: list[SourceSymbol] = []
        color[start] = GRAY
        path.append(start)
        while stack:
            node, idx = stack[-1]
            plist = parents[node]
            if idx < len(plist):
                stack[-1] = (node, idx + 1)
                nxt = plist[idx]
                if nxt not in parents:
                    continue
                if color[nxt] == GRAY:
                    # path walks child -> declared parent, so each
                    # consecutive pair is one (child, parent) edge
                    at = path.index(nxt)
                    cycle_nodes = path[at:]
                    edges = [
                        (cycle_nodes[i], cycle_nodes[i + 1])
                        for i in range(len(cycle_nodes) - 1)
                    ]
                    edges.append((cycle_nodes[-1], nxt))
                    return edges
                if color[nxt] == WHITE:
                    color[nxt] = GRAY
                    path.append(nxt)
                    stack.append((nxt, 0))
            else:
                color[node] = BLACK
                path.pop()
                stack.pop()
    return None


def finalize(registry: Registry, root: SourceSymbol) -> TopicSet:
    """Validate and repair the hierarchy into an immutable topic set."""
    warnings = list(registry.warnings)
    topics: dict[SourceSymbol, Topic] = {}
    for t in registry.topics:
        topics[t.name] = replace(t, parents=list(t.parents))

    next_order = max((t.order for t in topics.values()), default=-1) + 1
    if root not in topics:
        topics[root] = Topic(root, [], "", "", order=next_order)
        next_order += 1

    missing_parents = SourceSymbol(root.package, MISSING_PARENTS_NAME)

    def ensure_missing_parents() -> SourceSymbol:
        nonlocal next_order
        if missing_parents not in topics:
            topics[missing_parents] = Topic(
                missing_parents,
                [root],
                "Topics whose listed parents do not exist.",
                "",
                order=next_order,
            )
            next_order += 1
        return missing_parents

    for topic in sorted(topics.values(), key=lambda t: t.order):
        had_parents = bool(topic.parents)
        repaired: list[SourceSymbol] = []
        for parent in topic.parents:
            if parent == topic.name:
                _warn(
                    warnings,
                    W_CYCLE,
                    f"topic {topic.name.printed()} lists itself as a parent",
                    topic,
                )
            elif parent not in topics:
                _warn(
                    warnings,
                    W_ORPHAN,
                    f"topic {topic.name.printed()} names missing parent "
                    f"{parent.printed()}",
                    topic,
                )
                mp = ensure_missing_parents()
                if mp not in repaired and topic.name != mp:
                    repaired.append(mp)
            elif parent not in repaired:
                repaired.append(parent)
        if had_parents and not repaired and topic.name != missing_parents:
            repaired = [ensure_missing_parents()]
        topic.parents = repaired

    # Break remaining cycles by dropping the parent edge declared by the
    # newest topic on the cycle. Recompute the graph each round: repair can
    # add the MISSING-PARENTS topic, which must take part in detection too.
    while True:
        order = [t.name for t in sorted(topics.values(), key=lambda t: t.order)]
        parent_map = {name: topics[name].parents for name in order}
        cycle = _find_cycle(order, parent_map)
        if cycle is None:
            break
        child, parent = max(cycle, key=lambda edge: topics[edge[0]].order)
        topic = topics[child]
        topic.parents = [p for p in topic.parents if p != parent]
        _warn(
            warnings,
            W_CYCLE,
            f"dropped parent {parent.printed()} of {child.printed()} to break a cycle",
            topic,
        )
        if not topic.parents and child != missing_parents:
            topic.parents = [ensure_missing_parents()]

    ordered = sorted(topics.values(), key=lambda t: t.order)
    topics = {t.name: t for t in ordered}
    children: dict[SourceSymbol, list[SourceSymbol]] = {name: [] for name in topics}
    for topic in ordered:
        for parent in topic.parents:
            children[parent].append(topic.name)
    for kids in children.values():
        kids.sort(key=keys.encode_key)

    roots = [t.name for t in ordered if not t.parents]

    reachable: set[SourceSymbol] = set()
    queue = [root]
    while queue:
        node = queue.pop()
        if node in reachable:
            continue
        reachable.add(node)
        queue.extend(children[node])
    for topic in ordered:
        if topic.name not in reachable and topic.parents:
            _warn(
                warnings,
                W_UNREACHABLE,
                f"topic {topic.name.printed()} is not reachable from "
                f"{root.printed()}",
                topic,
            )

    return TopicSet(topics, children, roots, warnings, root)


def resolve_name(
    registry: Registry, token: str, current_package: str
) -> tuple[SourceSymbol | None, list[SourceSymbol]]:
    """Resolve a printed name to a topic.

    Explicit packages are looked up exactly. A bare name resolves to the
    current package if documented there, otherwise to the unique topic with
    that name in any package. Ambiguous bare names return the candidate list.
    """
    tok = token.strip()
    try:
        explicit = tok.startswith(":") or "::" in tok
        sym = parse_symbol_token(tok, current_package)
    except ValueError:
        return None, []
    if explicit:
        return (sym if sym in registry.by_name else None), []
    if sym in registry.by_name:
        return sym, []
    candidates = sorted(
        {t.name for t in registry.topics if t.name.name == sym.name},
        key=lambda s: s.printed(),
    )
    if len(candidates) == 1:
        return candidates[0], []
    if len(candidates) > 1:
        return None, candidates
    return None, []
