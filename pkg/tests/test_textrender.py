import pytest

from sexdoc.markup import parse_markup
from sexdoc.reader import SourceSymbol
from sexdoc.registry import Topic, TopicSet
from sexdoc.textrender import TextRenderConfig, render_topic_text


def sym(name, package="ACL2"):
    return SourceSymbol(package, name.upper())


def empty_ts():
    return TopicSet({}, {}, [], [], sym("TOP"))


def render(short="", long="", parents=(), width=75, origin="file.lisp", name="DEMO"):
    topic = Topic(sym(name), list(parents), short, long, origin=origin)
    cfg = TextRenderConfig(width=width)
    return render_topic_text(topic, empty_ts(), parse_markup(short and f"<p>{short}</p>"), parse_markup(long), cfg)


def test_header_and_parents_line():
    out = render(short="A short.", parents=[sym("INTERFACING-TOOLS")])
    lines = out.splitlines()
    assert lines[0] == "ACL2::DEMO -- file.lisp"
    assert lines[1] == "Parents: INTERFACING-TOOLS."
    assert lines[2] == ""
    assert lines[3] == "  A short."


def test_session_origin_header():
    topic = Topic(sym("LIVE"), [], "", "")
    out = render_topic_text(topic, empty_ts(), parse_markup(""), parse_markup(""))
    assert out.splitlines()[0] == "ACL2::LIVE -- Current Interactive Session"


def test_parents_omitted_when_none():
    out = render(short="A short.")
    assert "Parents:" not in out


def test_three_parents_punctuation():
    out = render(short="s", parents=[sym("A"), sym("B"), sym("C")])
    assert "Parents: A, B and C." in out


def test_foreign_parent_package_is_qualified():
    out = render(short="s", parents=[sym("X", package="STD")])
    assert "Parents: STD::X." in out


def test_external_link_mapping():
    out = render(long="<p><a href='http://trollop.rubyforge.org/'>Trollop</a> for Ruby</p>")
    assert "{Trollop | http://trollop.rubyforge.org/}" in " ".join(out.split())


def test_see_link_mapping():
    out = render(long="<p>extend <see topic='STD____DEFAGGREGATE'>defaggregate</see> now</p>")
    assert "[defaggregate]" in out


def test_headings_flush_left_with_blank_lines():
    out = render(long="<h3>Introduction</h3><p>text here</p>")
    lines = out.splitlines()
    idx = lines.index("Introduction")
    assert lines[idx - 1] == ""
    assert lines[idx + 1] == ""
    assert lines[idx + 2] == "  text here"


def test_block_code_unwrapped_four_space_indent():
    long = "<p>Call:</p><code>(f x\n   y)</code>"
    out = render(long=long)
    lines = out.splitlines()
    assert "    (f x" in lines
    assert "       y)" in lines


def test_inline_code_flows_in_paragraph():
    out = render(long="<p>use <code>(car x)</code> here</p>")
    assert "use (car x) here" in " ".join(out.split())


def test_lists_bullets_and_numbers():
    out = render(long="<ul><li>first thing</li><li>second thing</li></ul>"
                      "<ol><li>one</li><li>two</li></ol>")
    lines = [l for l in out.splitlines() if l.strip()]
    assert any(l.startswith("  - first thing") for l in lines)
    assert any(l.startswith("  1. one") for l in lines)
    assert any(l.startswith("  2. two") for l in lines)


def test_bold_italic_render_bare():
    out = render(long="<p><b>Getopt</b> is <i>fine</i> and <em>good</em></p>")
    assert "Getopt is fine and good" in " ".join(out.split())


def test_entities_fully_decoded():
    out = render(long="<p>a &lt; b &amp; c</p>")
    assert "a < b & c" in out
    assert "&lt;" not in out and "&amp;" not in out


def test_wrapping_respects_width():
    words = " ".join(f"word{i}" for i in range(60))
    out = render(long=f"<p>{words}</p>", width=40)
    for line in out.splitlines():
        if line.startswith("  word"):
            assert len(line) <= 40


def test_long_unbreakable_token_may_exceed_width():
    url = "http://example.com/" + "x" * 60
    out = render(long=f"<p>see <a href='{url}'>link</a> now</p>", width=30)
    assert url in out


def test_rendering_is_deterministic():
    long = "<p>stable output <see topic='A____B'>b</see></p>"
    assert render(long=long) == render(long=long)


def test_width_minimum_enforced():
    with pytest.raises(ValueError):
        TextRenderConfig(width=10)


def test_dl_renders_terms_and_descriptions():
    long = "<dl><dt><tt>x</tt> natp</dt><dd>the input</dd></dl>"
    out = render(long=long)
    lines = out.splitlines()
    assert "  x natp" in lines
    assert "    the input" in lines


def test_br_breaks_line():
    out = render(long="<p>one<br/>two</p>")
    lines = [l.strip() for l in out.splitlines()]
    assert "one" in lines and "two" in lines
