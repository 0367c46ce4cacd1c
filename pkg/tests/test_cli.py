import json


from arimamerge.cli import main
from conftest import DATA_DIR

READINGS = str(DATA_DIR / "example16_readings.csv")
MODELS = str(DATA_DIR / "example16_models.csv")


def test_count_pairings(capsys):
    assert main(["count", "--pairings", "8"]) == 0
    assert capsys.readouterr().out.strip() == "105"


def test_count_trees(capsys):
    assert main(["count", "--trees", "8"]) == 0
    assert capsys.readouterr().out.strip() == "315"


def test_count_odd_input_exit_code(capsys):
    assert main(["count", "--pairings", "7"]) == 1
    assert "OddInputError" in capsys.readouterr().err


def test_fit_stdout(capsys):
    assert main(["fit", READINGS, "--spec", "3,0,0"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("node_ids,p,d,q,constant")
    assert len(out.strip().splitlines()) == 17


def test_fit_writes_file(tmp_path, capsys):
    target = tmp_path / "models.csv"
    assert main(["fit", READINGS, "--spec", "3,0,0", "--out", str(target)]) == 0
    assert target.read_text().startswith("node_ids")


def test_fit_degenerate_data_exit_code(tmp_path, capsys):
    bad = tmp_path / "flat.csv"
    bad.write_text("a,b\n1,2\n1,2\n1,2\n1,2\n")
    assert main(["fit", str(bad), "--spec", "1,0,0"]) == 2
    assert "DegenerateDataError" in capsys.readouterr().err


def test_fit_missing_file_exit_code(capsys):
    assert main(["fit", "/does/not/exist.csv", "--spec", "3,0,0"]) == 1


def test_fit_bad_spec_exit_code(capsys):
    assert main(["fit", READINGS, "--spec", "3"]) == 1
    assert "--spec" in capsys.readouterr().err


def test_merge_stdout(capsys):
    assert main(["merge", MODELS]) == 0
    out = capsys.readouterr().out
    lines = out.strip().splitlines()
    assert len(lines) == 9
    assert lines[1].startswith("Node1;Node2,3,0,0,93.6986")


def test_tree_text(capsys):
    assert main(["tree", MODELS]) == 0
    out = capsys.readouterr().out
    assert "level 0:" in out and "level 4:" in out


def test_tree_json(tmp_path):
    target = tmp_path / "tree.json"
    assert main(["tree", MODELS, "--json", "--out", str(target)]) == 0
    doc = json.loads(target.read_text())
    assert [len(lvl["nodes"]) for lvl in doc["levels"]] == [16, 8, 4, 2, 1]


def test_simulate_csv_report(tmp_path):
    target = tmp_path / "report.csv"
    code = main(
        ["simulate", READINGS, "--models", MODELS, "--spec", "3,0,0",
         "--out", str(target)]
    )
    assert code == 0
    text = target.read_text()
    assert text.startswith("level 0\n")
    assert "messages_model,247" in text


def test_simulate_json_report(tmp_path):
    target = tmp_path / "report.json"
    code = main(
        ["simulate", READINGS, "--models", MODELS, "--spec", "3,0,0",
         "--beta", "0.5", "--out", str(target)]
    )
    assert code == 0
    doc = json.loads(target.read_text())
    assert doc["suppression_events"] == 101
    assert doc["messages_model"] == 348


def test_simulate_beta_inf_literal(capsys):
    assert main(["simulate", READINGS, "--models", MODELS, "--spec", "3,0,0",
                 "--beta", "inf"]) == 0
    assert "suppression_events,0" in capsys.readouterr().out


def test_simulate_negative_beta_rejected(capsys):
    assert main(["simulate", READINGS, "--models", MODELS, "--spec", "3,0,0",
                 "--beta", "-1"]) == 1


def test_simulate_without_models_fits(capsys):
    assert main(["simulate", READINGS, "--spec", "3,0,0"]) == 0
    assert "level 4" in capsys.readouterr().out
