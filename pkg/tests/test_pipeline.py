from __future__ import annotations

import io
import json

import pytest

from modsubgroups import cli, pipeline
from modsubgroups.classification import Passport, canonical_passport, classify
from modsubgroups.pipeline import RunConfig, diagram_from_dict, enumerate_subgroups, record_to_dict

from data import TABLE2
from helpers import classes


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def key_of(d: int, pred) -> str:
    (r,) = [r for r in classes(d) if pred(r)]
    return r.key.hex()


def test_record_counts_examples():
    assert len(list(enumerate_subgroups(RunConfig((9,))))) == 14
    assert len(list(enumerate_subgroups(RunConfig((10,), mode="gl2")))) == 19
    for mode in pipeline.MODES:
        assert len(list(enumerate_subgroups(RunConfig((2,), mode=mode)))) == 1


def test_records_sorted_by_index_then_key():
    recs = list(enumerate_subgroups(RunConfig((7, 5, 6))))
    assert [(r.index, r.key) for r in recs] == sorted((r.index, r.key) for r in recs)


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig((1,))
    with pytest.raises(ValueError):
        RunConfig((5,), mode="nope")
    with pytest.raises(ValueError):
        RunConfig((5,), jobs=0)
    assert RunConfig.up_to(4).indices == (2, 3, 4)


def test_default_jobs_env(monkeypatch):
    monkeypatch.delenv(pipeline.JOBS_ENV, raising=False)
    assert pipeline.default_jobs() == 1
    monkeypatch.setenv(pipeline.JOBS_ENV, "3")
    assert pipeline.default_jobs() == 3
    monkeypatch.setenv(pipeline.JOBS_ENV, "x")
    with pytest.raises(ValueError):
        pipeline.default_jobs()


def test_parallel_run_matches_serial():
    serial = [r.key for r in enumerate_subgroups(RunConfig((9,), jobs=1))]
    parallel = [r.key for r in enumerate_subgroups(RunConfig((9,), jobs=2))]
    assert serial == parallel


def test_json_round_trip():
    for r in enumerate_subgroups(RunConfig((6, 7), mode="diagrams")):
        obj = json.loads(json.dumps(record_to_dict(r)))
        D = diagram_from_dict(obj)
        assert D.ident == r.diagram_id
        again = classify(D)
        assert record_to_dict(again) == record_to_dict(r)
        assert obj["sigma_t"] == str(r.passport.sigma_T)


def test_genus_filter():
    recs = list(enumerate_subgroups(RunConfig((9,), genus=1)))
    assert recs and all(r.genus == 1 for r in recs)


def test_csv_output():
    buf = io.StringIO()
    n = pipeline.write_records(enumerate_subgroups(RunConfig((4,))), buf, "csv")
    lines = buf.getvalue().splitlines()
    assert n == 2 and len(lines) == 3
    assert lines[0].startswith("index,key,gl2_key")


def test_enumerate_output_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    assert run_cli(capsys, "enumerate", "--index", "8", "--out", str(a))[0] == 0
    assert run_cli(capsys, "enumerate", "--index", "8", "--out", str(b), "--jobs", "2")[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 7


def test_enumerate_to_stdout(capsys):
    code, out, _ = run_cli(capsys, "enumerate", "--index", "3", "--mode", "diagrams")
    assert code == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 2
    assert {row["sigma_t"] for row in rows} == {"(1,3,2)", "(1,2)"}


def test_trees_verb(capsys):
    code, out, _ = run_cli(capsys, "trees", "--internal", "6")
    assert code == 0 and len(out.splitlines()) == 4


def test_table1_verb(capsys):
    code, out, _ = run_cli(capsys, "table1", "--max", "7")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "index,diagrams,sl2,gl2"
    assert lines[-1] == "7,8,6,4"
    assert lines[5] == "6,9,8,8"


def test_describe_examples(capsys):
    code, out, _ = run_cli(capsys, "describe", "--key", key_of(5, lambda r: True))
    assert code == 0
    assert "genus       0" in out and "e2          1" in out and "e3          2" in out
    assert "cusps       ({-1/0, 0/1, 1/1}, 5)" in out
    code, out, _ = run_cli(capsys, "describe", "--key", key_of(2, lambda r: True))
    assert "congruence  Yes" in out
    code, out, _ = run_cli(capsys, "describe", "--key", key_of(6, lambda r: r.genus == 1))
    assert "generators  [[2,1],[1,1]], [[3,-1],[1,0]]" in out


def test_describe_from_db(tmp_path, capsys):
    db = tmp_path / "six.jsonl"
    run_cli(capsys, "enumerate", "--index", "6", "--out", str(db))
    key = key_of(6, lambda r: r.genus == 1)
    code, out, _ = run_cli(capsys, "describe", "--key", key, "--db", str(db))
    assert code == 0 and key in out


def test_member_examples(capsys):
    key = key_of(2, lambda r: True)
    assert run_cli(capsys, "member", "--key", key, "--matrix", "[[1,0],[0,1]]")[1] == "true\n"
    assert run_cli(capsys, "member", "--key", key, "--matrix", "[[1,1],[0,1]]")[1] == "false\n"
    assert run_cli(capsys, "member", "--key", key, "--matrix", "[[-1,-1],[1,0]]")[1] == "true\n"


def test_congruence_and_overgroups_verbs(capsys):
    cong = [r for r in classes(7) if r.congruence][0].key.hex()
    assert run_cli(capsys, "congruence", "--key", cong)[1] == "true\n"
    non = [r for r in classes(7) if not r.congruence][0].key.hex()
    assert run_cli(capsys, "congruence", "--key", non)[1] == "false\n"
    six = key_of(6, lambda r: r.genus == 1)
    code, out, _ = run_cli(capsys, "overgroups", "--key", six, "--blocks", "6")
    assert code == 0 and out == "{1} {2} {3} {4} {5} {6}\n"


@pytest.mark.parametrize(
    "argv",
    [
        ["member", "--key", "zz", "--matrix", "[[1,0],[0,1]]"],
        ["member", "--key", "0202010201", "--matrix", "[[1,2],[3,4]]"],
        ["describe", "--key", "05" + "00" * 10],
        ["enumerate", "--index", "1"],
        ["enumerate", "--index", "4", "--jobs", "0"],
        ["overgroups", "--key", "0202010201", "--blocks", "3"],
        ["table1", "--max", "1"],
        ["describe", "--key", "0202010201", "--db", "/nonexistent/db.jsonl"],
        ["bogus"],
        [],
    ],
)
def test_usage_errors_exit_one(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        raise SystemExit(cli.main(argv))
    assert exc.value.code == 1


def test_env_var_garbage_is_usage_error(capsys, monkeypatch):
    monkeypatch.setenv(pipeline.JOBS_ENV, "many")
    assert run_cli(capsys, "enumerate", "--index", "3")[0] == 1


def test_index2_key_format():
    (r,) = classes(2)
    assert r.key.hex() == "0202010201"
    assert canonical_passport(r.passport) == r.key


def test_table2_rows_reachable_by_key(capsys):
    d, _, (s, _, t), *_ = TABLE2[13]
    key = canonical_passport(Passport.parse(s, t, d)).hex()
    code, out, _ = run_cli(capsys, "describe", "--key", key)
    assert code == 0 and "genus       1" in out
