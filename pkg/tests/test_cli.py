import json

import pytest

from xreval import data_path
from xreval.cli import main
from xreval.synthetic import synthetic_survey_csv

jsonschema = pytest.importorskip("jsonschema")

OPS = str(data_path("boxstack.gomsops"))
MODES = str(data_path("boxstack.gomsmodel"))
SURVEY = str(data_path("survey_demo.csv"))
MODEL_ARGS = ["--catalog", OPS, "--model", MODES]


@pytest.fixture(scope="module")
def schema():
    return json.loads(data_path("report.schema.json").read_text(encoding="utf-8"))


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_predict_markdown_shows_published_totals(capsys):
    code, out, _ = run(capsys, "predict", *MODEL_ARGS)
    assert code == 0
    assert "7809 + A (lower bound 7809)" in out
    assert "6963 + A" in out and "[^published]" in out


def test_predict_json_validates(capsys, schema):
    code, out, _ = run(capsys, "predict", *MODEL_ARGS, "--bind", "A=500", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    totals = {p["mode"]: p["total_ms"] for p in doc["predictions"]}
    assert totals == {"Eye-gaze & Pinch": 4731, "Eye-gaze & Voice": 5933, "Drag & Drop": 8309}


def test_predict_csv_repeat(capsys):
    code, out, _ = run(capsys, "predict", *MODEL_ARGS, "--repeat", "5", "--bind", "A=0",
                       "--format", "csv")
    assert code == 0
    assert "23655" in out  # 5 * 4731


def test_compare_requires_binding(capsys):
    code, _, err = run(capsys, "compare", *MODEL_ARGS)
    assert code == 1
    assert "unbound parameter A" in err


def test_compare_csv(capsys):
    code, out, _ = run(capsys, "compare", *MODEL_ARGS, "--bind", "A=0", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert [line.split(",")[1] for line in lines[1:]] == [
        "Eye-gaze & Pinch", "Eye-gaze & Voice", "Drag & Drop"]


def test_bad_binding(capsys):
    code, _, err = run(capsys, "compare", *MODEL_ARGS, "--bind", "A=-3")
    assert code == 1 and "non-negative" in err
    code, _, err = run(capsys, "compare", *MODEL_ARGS, "--bind", "A")
    assert code == 1


def test_sweep_json(capsys, schema):
    code, out, _ = run(capsys, "sweep", *MODEL_ARGS, "--param", "A", "--from", "0", "--to",
                       "3000", "--step", "100", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["sweep"]["crossovers"] == []
    assert len(doc["sweep"]["points"]) == 31


def test_missing_file_is_io_error(capsys, tmp_path):
    code, _, err = run(capsys, "predict", "--catalog", str(tmp_path / "nope.gomsops"),
                       "--model", MODES)
    assert code == 2 and "nope.gomsops" in err


def test_parse_errors_listed_with_location(capsys, tmp_path):
    bad = tmp_path / "bad.gomsmodel"
    bad.write_text('mode "a": S + QQ\nmode "b" S\n', encoding="utf-8")
    code, _, err = run(capsys, "predict", "--catalog", OPS, "--model", str(bad))
    assert code == 1
    lines = err.strip().splitlines()
    assert len(lines) == 2
    assert f"{bad}:1:15:" in lines[0] and f"{bad}:2:10:" in lines[1]


def test_out_writes_file(capsys, tmp_path):
    target = tmp_path / "r.md"
    code, out, _ = run(capsys, "report", *MODEL_ARGS, "--bind", "A=0", "--out", str(target))
    assert code == 0 and out == ""
    assert "Eye-gaze & Pinch" in target.read_text(encoding="utf-8")


def test_survey_score_and_analyze(capsys, schema):
    code, out, _ = run(capsys, "survey-score", "--input", SURVEY)
    assert code == 0
    assert out.splitlines()[0] == "participant_id,mode,sus_score,tlx_raw,tlx_weighted"
    assert len(out.splitlines()) == 1 + 72
    code, out, _ = run(capsys, "survey-analyze", "--input", SURVEY, "--format", "json",
                       "--measure", "tlx:physical")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["survey"]["measure"] == "tlx:physical"


def test_survey_score_no_valid_rows(capsys, tmp_path):
    csv_path = tmp_path / "s.csv"
    text = synthetic_survey_csv(2, seed=1)
    lines = text.splitlines()
    # push every sus_1 out of range
    broken = [lines[0]] + [",".join(c if i != 2 else "9" for i, c in enumerate(l.split(",")))
                           for l in lines[1:]]
    csv_path.write_text("\n".join(broken) + "\n", encoding="utf-8")
    code, _, err = run(capsys, "survey-score", "--input", str(csv_path))
    assert code == 1
    assert "sus_1 out of range" in err and "no rows could be scored" in err


def test_malformed_csv_is_format_error(capsys, tmp_path):
    csv_path = tmp_path / "s.csv"
    csv_path.write_text("participant_id,mode\n", encoding="utf-8")
    code, _, _ = run(capsys, "survey-score", "--input", str(csv_path))
    assert code == 2


def test_report_json_with_survey_and_unbound(capsys, schema):
    code, out, _ = run(capsys, "report", *MODEL_ARGS, "--input", SURVEY, "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert doc["ranking"] is None
    assert doc["survey"]["friedman"]["test"] == "friedman"
    assert {p["mode"]: p["published_total"] for p in doc["predictions"]}["Drag & Drop"] == \
        "6963 + A"


def test_unsupported_format(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["survey-analyze", "--input", SURVEY, "--format", "csv"])
    assert exc.value.code == 2
