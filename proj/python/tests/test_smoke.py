import os
import pathlib

import pytest

import weavetex

CORPUS = pathlib.Path(os.environ.get("WEAVETEX_CORPUS_DIR", pathlib.Path(__file__).parents[2] / "tests" / "corpus"))


def test_scan_and_census():
    ds = weavetex.scan("$2+2=\\sage{2+2}$ \\sageplot[scale=.2][png]{p}")
    assert [d.kind for d in ds] == ["InlineExpr", "Plot"]
    assert ds[0].code == "2+2"
    assert ds[1].gfx_options == "scale=.2"
    assert ds[1].format == "png"
    assert ds[1].line == 1


def test_demo_census():
    demo = (CORPUS / "demo.tex").read_text()
    assert weavetex.census(demo) == {
        "InlineExpr": 16, "CodeBlock": 11, "SilentBlock": 3,
        "Plot": 10, "Pause": 1, "Unpause": 1,
    }
    plan = weavetex.plan(demo, clock=(2009, 1, 1))
    assert len(plan.jobs) == 40
    assert plan.paused_count == 3


def test_plan_execute_splice(tmp_path):
    src = ("\\begin{sageblock}\n  a = 2\n\\end{sageblock}\n"
           "$\\sage{a + 1}$, $\\sage{\\the\\year \\percent 42}$ \\sageplot{plot(x)}")
    plan = weavetex.plan(src, clock=(2009, 1, 1))
    assert plan.jobs[0].code == "a = 2\n"
    assert plan.jobs[2].code == "2009 % 42"
    results = weavetex.execute_builtin(plan, base_dir=str(tmp_path))
    assert results.records[1].latex == "3"
    assert results.records[2].latex == "35"
    assert results.records[3].files == ["sage-plots/plot-3.pdf", "sage-plots/plot-3.eps"]
    assert (tmp_path / "sage-plots" / "plot-3.pdf").read_bytes() == b"weavetex-plot-0\n"

    again = weavetex.ResultSet.from_json(results.to_json())
    assert again.to_json() == results.to_json()

    doc = weavetex.splice(src, results)
    assert doc.unresolved_count == 0
    assert doc.text.endswith("$3$, $35$ \\includegraphics{sage-plots/plot-3}")
    assert weavetex.scan(doc.text) == []


def test_builtin_language():
    assert weavetex.builtin_eval("2+2") == "4"
    assert weavetex.builtin_eval("10/4") == "\\frac{5}{2}"
    assert weavetex.builtin_eval("b - 1", setup="b = 2^10") == "1023"
    with pytest.raises(weavetex.WeavetexError, match="DivisionByZero"):
        weavetex.builtin_eval("1/0")


def test_plot_helpers():
    assert weavetex.resolve_formats() == ["pdf", "eps"]
    assert weavetex.resolve_formats("imagemagick") == ["png"]
    assert weavetex.includegraphics_text(3, "scale=.2") == "\\includegraphics[scale=.2]{sage-plots/plot-3}"
    with pytest.raises(weavetex.WeavetexError, match="UnknownFormat"):
        weavetex.resolve_formats("gif")


def test_errors_carry_lines():
    with pytest.raises(weavetex.WeavetexError, match=r"UnmatchedUnpause.*\(line 2\)"):
        weavetex.plan("a\n\\sagetexunpause")


def test_build(tmp_path):
    src = tmp_path / "doc.tex"
    src.write_text("x = $\\sage{6*7}$\n\\sage{1/0}\n")
    code, diags = weavetex.build(str(src), clock=(2009, 1, 1))
    assert code == 1
    assert any(":2: error: DivisionByZero" in d for d in diags)
    assert (tmp_path / "doc.resolved.tex").read_text() == "x = $42$\n\\mbox{??}\n"
