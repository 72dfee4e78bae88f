from __future__ import annotations

import json
import shutil
import subprocess
import sys

import pytest

from conftest import FIXTURE_A, TESTS
from ircnet.cli import main


@pytest.fixture
def fx(tmp_path):
    for name in ("records.jsonl", "lexicon.tsv", "config.json"):
        shutil.copy(FIXTURE_A / name, tmp_path / name)
    return tmp_path


def test_synth_fixture_matches_committed(tmp_path):
    assert main(["synth", "--kind", "fixture-a", "--out", str(tmp_path)]) == 0
    for name in ("records.jsonl", "lexicon.tsv"):
        assert (tmp_path / name).read_bytes() == (FIXTURE_A / name).read_bytes()


def test_synth_random(tmp_path):
    assert main(["synth", "--kind", "random", "--records", "50", "--seed", "4", "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "records.jsonl").read_text().splitlines()) == 50


def test_ingest_filter_chain(fx, capsys):
    assert main(["ingest", "--input", str(fx / "records.jsonl"), "--out", str(fx / "a.jsonl")]) == 0
    assert main(["filter", "--input", str(fx / "a.jsonl"), "--out", str(fx / "b.jsonl")]) == 0
    ids = [json.loads(line)["id"] for line in (fx / "b.jsonl").read_text().splitlines()]
    assert ids == ["A1", "A2", "A3", "A4"]
    assert "kept=4" in capsys.readouterr().out


def test_ingest_sample_requires_seed(fx):
    assert main(["ingest", "--input", str(fx / "records.jsonl"), "--sample", "2", "--out", str(fx / "s.jsonl")]) == 1


def test_ingest_missing_input(fx):
    assert main(["ingest", "--input", str(fx / "nope.jsonl"), "--out", str(fx / "s.jsonl")]) == 2


def test_covid_split(fx, capsys):
    assert main(["covid-split", "--input", str(fx / "records.jsonl"), "--years", "2020,2021", "--out-dir", str(fx / "split")]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["2020: CovidPapers N=0, NonCovidPapers N=2", "2021: CovidPapers N=1, NonCovidPapers N=3"]
    assert (fx / "split" / "covid.jsonl").read_text().count("\n") == 1


def test_gender_reports(fx, capsys):
    assert main(["gender", "--input", str(fx / "records.jsonl"), "--lexicon", str(fx / "lexicon.tsv")]) == 0
    assert json.loads(capsys.readouterr().out)["resolved_share"] == 1.0
    assert main(["gender", "--input", str(fx / "records.jsonl"), "--lexicon", str(fx / "lexicon.tsv"), "--report", "categories"]) == 0
    table = json.loads(capsys.readouterr().out)
    assert table["2021"] == {"Total": 4, "Female": 3, "OnlyFemale": 1, "OnlyMale": 1, "Male": 3}


def test_lexicon_builder(tmp_path, capsys):
    out = tmp_path / "lex.tsv"
    args = ["lexicon", "--namdict", str(TESTS / "fixtures" / "nam_dict_excerpt.txt"), "--merge", str(FIXTURE_A / "lexicon.tsv"), "--out", str(out)]
    assert main(args) == 0
    lines = dict(line.split("\t") for line in out.read_text(encoding="utf-8").splitlines())
    assert lines["andrea"] == "unisex" and lines["laura"] == "female"
    assert main(["lexicon", "--out", str(out)]) == 1


def test_network_and_mst(fx, capsys):
    base = ["--input", str(fx / "records.jsonl"), "--top-k", "3", "--year", "2021"]
    assert main(["network", *base, "--out", str(fx / "net.csv")]) == 0
    assert (fx / "net.csv").read_text().splitlines()[1:] == ["France,Germany,1", "France,USA,2", "Germany,USA,3"]
    capsys.readouterr()
    assert main(["mst", *base, "--metrics", "--out", str(fx / "tree.dot")]) == 0
    metrics = json.loads(capsys.readouterr().out)
    assert (metrics["diameter"], metrics["leaves"], metrics["thr"]) == (2, 2, "1/2")
    golden = (FIXTURE_A / "golden" / "trees" / "2021_Total.dot").read_text()
    assert (fx / "tree.dot").read_text() == golden


def test_mst_disconnected_exit_code(fx, capsys):
    args = ["mst", "--input", str(fx / "records.jsonl"), "--top-k", "3", "--year", "2021", "--category", "OnlyFemale", "--lexicon", str(fx / "lexicon.tsv"), "--out", str(fx / "t.dot")]
    assert main(args) == 3
    err = capsys.readouterr().err
    assert "2 components" in err and "Germany, USA" in err
    assert not (fx / "t.dot").exists()


def test_gendered_category_needs_lexicon(fx):
    assert main(["network", "--input", str(fx / "records.jsonl"), "--year", "2021", "--category", "Male", "--out", str(fx / "n.csv")]) == 1


def test_report_diameters(fx, capsys):
    args = ["report", "diameters", "--input", str(fx / "records.jsonl"), "--lexicon", str(fx / "lexicon.tsv"), "--top-k", "3", "--years", "2020:2021"]
    assert main([*args, "--out", str(fx / "d.md")]) == 3
    assert (fx / "d.md").read_text() == (FIXTURE_A / "golden" / "diameters.md").read_text()
    assert main(args) == 3
    assert capsys.readouterr().out == (FIXTURE_A / "golden" / "diameters.csv").read_text()


def test_report_counts(fx, capsys):
    assert main(["report", "counts", "--input", str(fx / "records.jsonl")]) == 0
    assert capsys.readouterr().out.splitlines() == [
        "year,country,articles",
        "2021,France,2",
        "2021,Germany,3",
        "2021,USA,4",
    ]


def test_run_uses_env_config(fx, monkeypatch, capsys):
    monkeypatch.setenv("IRCNET_CONFIG", str(fx / "config.json"))
    assert main(["run"]) == 3
    assert (fx / "out" / "manifest.json").read_text() == (FIXTURE_A / "golden" / "manifest.json").read_text()
    assert "status=partial" in capsys.readouterr().out


def test_run_flag_overrides_config(fx):
    assert main(["run", "--config", str(fx / "config.json"), "--categories", "Total", "--years", "2021:2021", "--out-dir", str(fx / "o")]) == 3
    m = json.loads((fx / "o" / "manifest.json").read_text())
    assert m["config"]["categories"] == ["Total"] and m["config"]["years"] == "2021:2021"
    # the Total slice is connected; only the topic-split slices from the config file are not
    assert [s["key"] for s in m["slices"] if s["connected"]] == ["2021_Total"]
    assert all("_covid_" in k or "_non_covid_" in k for k in m["disconnected"])


def test_run_exit_codes(fx, tmp_path):
    assert main(["run", "--config", str(fx / "config.json"), "--years", "2022:2011"]) == 1
    assert main(["run", "--config", str(tmp_path / "missing.json")]) == 1
    (fx / "records.jsonl").write_bytes(b"\xff\xfe")
    assert main(["run", "--config", str(fx / "config.json")]) == 2


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ircnet", "--version"], capture_output=True, text=True, check=True)
    assert res.stdout.startswith("ircnet ")
