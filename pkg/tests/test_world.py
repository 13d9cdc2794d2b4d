from pathlib import Path

import pytest

from sexdoc.reader import SourceSymbol, read_forms
from sexdoc.world import (
    AggregateDecl,
    DefineDecl,
    DefineTopic,
    RawDefinition,
    ScanError,
    SectionBegin,
    SectionEnd,
    SetDefaultParents,
    WorldError,
    build_world,
    lookup_definition,
    scan_events,
)

CORPUS = Path(__file__).parent / "corpus"


def scan(text, package="ACL2"):
    return scan_events(read_forms(text, package, "test.lisp"))


def test_oslib_event_sequence():
    text = (CORPUS / "oslib" / "main.lisp").read_text()
    events = scan(text, package="OSLIB")
    kinds = [type(e).__name__ for e in events]
    assert kinds == [
        "DefineTopic",      # oslib itself
        "SetDefaultParents",
        "DefineTopic",      # getpid
        "RawDefinition",
        "DefineTopic",      # ls-subdirs
        "RawDefinition",
    ]
    sdp = events[1]
    assert sdp.parents == [SourceSymbol("OSLIB", "OSLIB")]
    assert sdp.local  # wrapped in (local ...), which does not disable it
    assert events[2].name == SourceSymbol("OSLIB", "GETPID")
    assert events[3].definition.kind == "function"


def test_unrecognized_heads_are_ignored():
    assert scan("(my-custom-macro 1 2)") == []
    assert scan('(in-package "FOO") (include-book "std/top")') == []


def test_local_definition_is_flagged():
    events = scan("(defsection s (local (defthm foo (equal x x))) (defthm bar (equal y y)))")
    raw = [e for e in events if isinstance(e, RawDefinition)]
    assert [e.local for e in raw] == [True, False]
    assert isinstance(events[0], SectionBegin)
    assert isinstance(events[-1], SectionEnd)


def test_kind_table():
    events = scan(
        "(defun f (x) x) (defmacro m (x) x) (defthm t1 x) "
        "(defconst *c* 3) (defcong equal equal (f x) 1)"
    )
    kinds = [e.definition.kind for e in events]
    assert kinds == ["function", "macro", "theorem", "constant", "theorem"]


def test_defcong_synthesizes_a_name():
    (event,) = scan("(defcong int-equiv equal (rotate-left x width places) 1)")
    assert event.definition.name.name == "INT-EQUIV-IMPLIES-EQUAL-ROTATE-LEFT-1"


def test_define_decl_parses_signature_and_related():
    text = (CORPUS / "bitops.lisp").read_text()
    events = scan(text, package="BITOPS")
    decl = next(e for e in events if isinstance(e, DefineDecl))
    assert decl.name == SourceSymbol("BITOPS", "ROTATE-LEFT")
    assert [(f.name.name, f.type.name) for f in decl.formals] == [
        ("X", "INTEGERP"),
        ("WIDTH", "POSP"),
        ("PLACES", "NATP"),
    ]
    assert decl.formals[0].doc == "The bit vector to be rotated left."
    assert [(r.name.name, r.type.name) for r in decl.returns] == [("ROTATED", "NATP")]
    related = [e for e in decl.related if isinstance(e, RawDefinition)]
    assert [e.local for e in related] == [False, True, False, False]


def test_aggregate_decl_parses_fields():
    text = (CORPUS / "vl.lisp").read_text()
    events = scan(text, package="VL")
    decl = next(e for e in events if isinstance(e, AggregateDecl))
    assert decl.name == SourceSymbol("VL", "VL-ASSIGNSTMT")
    assert decl.parents == [SourceSymbol("VL", "VL-STMT-P")]
    assert decl.tag == "VL-ASSIGNSTMT"
    assert [f.name.name for f in decl.fields] == ["TYPE", "LVALUE", "EXPR", "LOC"]
    assert decl.fields[0].type.name == "VL-ASSIGN-TYPE-P"
    assert decl.fields[3].doc.startswith("Where the statement")


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("(defxdoc)", "missing a name"),
        ("(defxdoc :short \"x\")", "name must be a symbol"),
        ('(defxdoc foo :parents bar)', ":parents value must be a list"),
        ("(defxdoc foo :short 3)", ":short value must be a string"),
        ("(defxdoc foo :long (x))", ":long value must be a string"),
        ("(defxdoc foo :short)", "missing a value"),
        ("(define f :short \"x\" (f))", "missing a formals list"),
        ("(define f ((1 natp)) x)", "formal is missing a name"),
        ("(define f (x x) x)", "duplicate formal"),
        ("(defaggregate foo ((a natp) (a natp)))", "duplicate field"),
        ("(defcong equal equal 3)", "malformed defcong"),
    ],
)
def test_scan_errors(text, fragment):
    with pytest.raises(ScanError) as err:
        scan(text)
    assert fragment in str(err.value)


def test_build_world_two_files(tmp_path):
    a = tmp_path / "a.lisp"
    b = tmp_path / "b.lisp"
    a.write_text("(defthm one (equal x x))")
    b.write_text("(defthm two (equal y y))")
    world = build_world([str(a), str(b)], "ACL2")
    assert len(world.definitions) == 2
    assert world.files == [str(a), str(b)]
    names = [
        e.definition.name.name for e in world.events if isinstance(e, RawDefinition)
    ]
    assert names == ["ONE", "TWO"]


def test_build_world_duplicate_definition(tmp_path):
    a = tmp_path / "a.lisp"
    b = tmp_path / "b.lisp"
    a.write_text("(defthm same (equal x x))")
    b.write_text("(defthm same (equal y y))")
    with pytest.raises(WorldError) as err:
        build_world([str(a), str(b)], "ACL2")
    assert "a.lisp" in str(err.value) and "b.lisp" in str(err.value)


def test_build_world_unreadable_file(tmp_path):
    with pytest.raises(WorldError):
        build_world([str(tmp_path / "missing.lisp")], "ACL2")


def test_arithmetic_world_has_section_theorems():
    world = build_world([str(CORPUS / "arithmetic.lisp")], "ACL2")
    definition = lookup_definition(world, SourceSymbol("ACL2", "<-0-MINUS"))
    assert definition is not None
    assert definition.kind == "theorem"


def test_lookup_absent_and_local(tmp_path):
    src = tmp_path / "x.lisp"
    src.write_text("(local (defun hidden (x) x)) (defun shown (x) x)")
    world = build_world([str(src)], "ACL2")
    assert lookup_definition(world, SourceSymbol("ACL2", "SHOWN")) is not None
    assert lookup_definition(world, SourceSymbol("ACL2", "HIDDEN")) is None
    assert lookup_definition(world, SourceSymbol("ACL2", "NEVER")) is None


def test_definition_origins_are_listed_files(tmp_path):
    a = tmp_path / "a.lisp"
    b = tmp_path / "b.lisp"
    a.write_text("(defthm one (equal x x))")
    b.write_text("(defsection s (defthm two (equal y y)))")
    world = build_world([str(a), str(b)], "ACL2")
    for definition in world.definitions.values():
        assert definition.origin in world.files


def test_parallel_build_matches_serial(tmp_path):
    files = []
    for i in range(6):
        f = tmp_path / f"f{i}.lisp"
        f.write_text(f"(defthm thm-{i} (equal x x)) (defxdoc topic-{i} :short \"s\")")
        files.append(str(f))
    serial = build_world(files, "ACL2", parallel=False)
    threaded = build_world(files, "ACL2", parallel=True)
    assert serial.events == threaded.events
    assert serial.definitions == threaded.definitions
