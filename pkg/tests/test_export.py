import hashlib
import json
import zipfile
from pathlib import Path

import pytest

from sexdoc.export import (
    build_search_index,
    build_exported,
    canonical_json,
    compute_importance,
    importance_score,
)
from sexdoc.keys import decode_key, encode_key
from sexdoc.markup import parse_markup
from sexdoc.pipeline import compile_manual, export_manual
from sexdoc.reader import SourceSymbol
from sexdoc.registry import Registry, Topic, finalize

from conftest import CORPUS, make_config, sym


def registry_of(*topics):
    reg = Registry()
    for i, t in enumerate(topics):
        t.order = i
        reg.topics.append(t)
        reg.by_name[t.name] = t
    return reg


def no_links(ts):
    empty = parse_markup("")
    return {name: (empty, empty) for name in ts.topics}


def test_importance_chain_example():
    top, a, b = sym("ACL2", "TOP"), sym("ACL2", "A"), sym("ACL2", "B")
    reg = registry_of(Topic(top, []), Topic(a, [top]), Topic(b, [a]))
    ts = finalize(reg, top)
    trees = no_links(ts)
    # brute-force oracle over the toy graph: A has one child and sits at
    # depth 1, no inbound links, so 0 + 2*1 + 10
    assert importance_score(a, ts, trees) == 12
    assert importance_score(b, ts, trees) == 10  # depth 2 bonus only
    assert importance_score(top, ts, trees) == 12


def test_importance_isolated_deep_leaf_is_zero():
    top = sym("ACL2", "TOP")
    chain = [Topic(top, [])]
    prev = top
    for i in range(3):
        name = sym("ACL2", f"N{i}")
        chain.append(Topic(name, [prev]))
        prev = name
    reg = registry_of(*chain)
    ts = finalize(reg, top)
    assert importance_score(sym("ACL2", "N2"), ts, no_links(ts)) == 0


def test_importance_counts_distinct_inbound_links():
    top = sym("ACL2", "TOP")
    target = sym("ACL2", "TARGET")
    topics = [Topic(top, []), Topic(sym("ACL2", "M1"), [top]),
              Topic(sym("ACL2", "M2"), [sym("ACL2", "M1")]),
              Topic(target, [sym("ACL2", "M2")])]
    sources = []
    for i in range(4):
        name = sym("ACL2", f"S{i}")
        topics.append(Topic(name, [top]))
        sources.append(name)
    reg = registry_of(*topics)
    ts = finalize(reg, top)
    trees = no_links(ts)
    link = parse_markup(f"<p><see topic='{encode_key(target)}'>t</see></p>")
    for name in sources:
        trees[name] = (trees[name][0], link)
    # depth 3, no children, 4 distinct inbound links
    assert importance_score(target, ts, trees) == 4
    # repeated links from the same topic still count once
    double = parse_markup(
        f"<p><see topic='{encode_key(target)}'>a</see>"
        f"<see topic='{encode_key(target)}'>b</see></p>"
    )
    trees[sources[0]] = (parse_markup(""), double)
    assert importance_score(target, ts, trees) == 4


def test_self_links_do_not_count():
    top, a = sym("ACL2", "TOP"), sym("ACL2", "DEEP")
    mid = sym("ACL2", "MID")
    mid2 = sym("ACL2", "MID2")
    reg = registry_of(Topic(top, []), Topic(mid, [top]), Topic(mid2, [mid]), Topic(a, [mid2]))
    ts = finalize(reg, top)
    trees = no_links(ts)
    self_link = parse_markup(f"<p><see topic='{encode_key(a)}'>me</see></p>")
    trees[a] = (parse_markup(""), self_link)
    assert importance_score(a, ts, trees) == 0


def test_search_index_golden_entry(getopt_build):
    exported = build_exported(
        getopt_build.topics, getopt_build.html, getopt_build.importance
    )
    entries = build_search_index(getopt_build.topics, exported)
    getopt = next(e for e in entries if e[1] == "GETOPT")
    assert getopt[0] == "ACL2____GETOPT"
    assert getopt[2] == "A library for processing command-line options."
    assert isinstance(getopt[3], int)


def test_search_index_sorted_by_importance_then_key():
    top = sym("ACL2", "TOP")
    reg = registry_of(Topic(top, []), Topic(sym("ACL2", "B"), [top]),
                      Topic(sym("ACL2", "A"), [top]))
    ts = finalize(reg, top)
    trees = no_links(ts)
    importance = compute_importance(ts, trees)
    exported = build_exported(ts, {n: ("", "") for n in ts.topics}, importance)
    entries = build_search_index(ts, exported)
    assert [e[3] for e in entries] == sorted([e[3] for e in entries], reverse=True)
    same = [e for e in entries if e[3] == 10]
    assert [e[0] for e in same] == sorted(e[0] for e in same)


def test_search_index_empty_short(getopt_build):
    exported = build_exported(
        getopt_build.topics, getopt_build.html, getopt_build.importance
    )
    entries = build_search_index(getopt_build.topics, exported)
    top_entry = next(e for e in entries if e[1] == "TOP")
    assert top_entry[2] == ""


def _build_and_export(tmp_path, name="out", **config_kw):
    config = make_config([CORPUS / "getopt.lisp"], **config_kw)
    build = compile_manual(config)
    outdir = tmp_path / name
    manifest = export_manual(build, outdir, config)
    return build, outdir, manifest


def test_save_manual_layout(tmp_path):
    build, outdir, manifest = _build_and_export(tmp_path)
    assert (outdir / "index.html").is_file()
    assert (outdir / "xdata.json").is_file()
    assert (outdir / "xindex.json").is_file()
    assert (outdir / "manifest.json").is_file()
    assert (outdir / "viewer.js").is_file()
    assert (outdir / "style.css").is_file()
    listed = {f.path for f in manifest.files}
    assert "index.html" in listed and "xdata.json" in listed
    for f in manifest.files:
        data = (outdir / f.path).read_bytes()
        assert len(data) == f.bytes
        assert hashlib.sha256(data).hexdigest() == f.sha256


def test_xdata_schema_fields_exact(tmp_path):
    _, outdir, _ = _build_and_export(tmp_path)
    xdata = json.loads((outdir / "xdata.json").read_text())
    for key, record in xdata.items():
        decode_key(key)
        assert sorted(record) == [
            "children", "importance", "long_html", "name",
            "origin", "package", "parents", "short_html",
        ]


def test_xindex_schema(tmp_path):
    _, outdir, _ = _build_and_export(tmp_path)
    xindex = json.loads((outdir / "xindex.json").read_text())
    assert sorted(xindex) == ["search", "tree"]
    xdata = json.loads((outdir / "xdata.json").read_text())
    assert set(xindex["tree"]) == set(xdata)
    for entry in xindex["search"]:
        key, name, short_text, importance = entry
        assert key in xdata
        assert xdata[key]["name"] == name


def test_referential_closure(tmp_path):
    import re

    _, outdir, _ = _build_and_export(tmp_path)
    xdata = json.loads((outdir / "xdata.json").read_text())
    for record in xdata.values():
        for key in record["parents"] + record["children"]:
            assert key in xdata
        for key in re.findall(r"<see topic='([^']+)'>", record["long_html"]):
            assert key in xdata


def test_no_directives_in_exported_html(tmp_path):
    _, outdir, _ = _build_and_export(tmp_path)
    xdata = json.loads((outdir / "xdata.json").read_text())
    for record in xdata.values():
        assert "@(" not in record["long_html"]
        assert "@(" not in record["short_html"]


def test_exported_html_parses(tmp_path):
    _, outdir, _ = _build_and_export(tmp_path)
    xdata = json.loads((outdir / "xdata.json").read_text())
    for record in xdata.values():
        parse_markup(record["short_html"])
        parse_markup(record["long_html"])


def test_rerun_is_byte_identical(tmp_path):
    _, out1, m1 = _build_and_export(tmp_path, name="one")
    _, out2, m2 = _build_and_export(tmp_path, name="two")
    assert [(f.path, f.sha256) for f in m1.files] == [(f.path, f.sha256) for f in m2.files]
    assert (out1 / "manifest.json").read_bytes() == (out2 / "manifest.json").read_bytes()


def test_parallel_build_is_byte_identical(tmp_path):
    _, out1, m1 = _build_and_export(tmp_path, name="serial")
    _, out2, m2 = _build_and_export(tmp_path, name="parallel", parallel=True)
    assert [(f.path, f.sha256) for f in m1.files] == [(f.path, f.sha256) for f in m2.files]


def test_refuses_nonempty_outdir_without_force(tmp_path):
    outdir = tmp_path / "busy"
    outdir.mkdir()
    (outdir / "junk.txt").write_text("x")
    config = make_config([CORPUS / "getopt.lisp"])
    build = compile_manual(config)
    with pytest.raises(FileExistsError):
        export_manual(build, outdir, config)
    config.force = True
    export_manual(build, outdir, config)
    assert (outdir / "index.html").is_file()


def test_archive_flag_writes_deterministic_zip(tmp_path):
    _, out1, m1 = _build_and_export(tmp_path, name="a1", archive=True)
    _, out2, m2 = _build_and_export(tmp_path, name="a2", archive=True)
    zip1 = out1 / "download" / "manual.zip"
    assert zip1.is_file()
    assert zip1.read_bytes() == (out2 / "download" / "manual.zip").read_bytes()
    with zipfile.ZipFile(zip1) as archive:
        names = set(archive.namelist())
    assert "xdata.json" in names and "index.html" in names
    assert any(f.path == "download/manual.zip" for f in m1.files)


def test_title_injected_into_index_html(tmp_path):
    config = make_config([CORPUS / "getopt.lisp"])
    config.title = "My <Manual>"
    build = compile_manual(config)
    export_manual(build, tmp_path / "site", config)
    html = (tmp_path / "site" / "index.html").read_text()
    assert "My &lt;Manual&gt;" in html
    assert "__MANUAL_TITLE__" not in html


def test_tree_children_ordered_by_importance(tmp_path):
    _, outdir, _ = _build_and_export(tmp_path)
    xindex = json.loads((outdir / "xindex.json").read_text())
    xdata = json.loads((outdir / "xdata.json").read_text())
    for key, children in xindex["tree"].items():
        ranks = [(-xdata[c]["importance"], c) for c in children]
        assert ranks == sorted(ranks)


def test_canonical_json_is_sorted_and_compact():
    data = canonical_json({"b": 1, "a": [1, 2]})
    assert data == b'{"a":[1,2],"b":1}'
