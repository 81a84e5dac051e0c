import json
import shutil

import pytest

from ctxsugg.cli import main
from ctxsugg.runfile import parse_runfile


@pytest.fixture
def toy(tmp_path, fixtures_dir):
    for item in fixtures_dir.iterdir():
        shutil.copyfile(item, tmp_path / item.name)
    return tmp_path


def lex_args(d):
    return ["--lexicon", str(d / "lexicon.tsv"), "--stopwords", str(d / "stopwords.txt"),
            "--word-classes", str(d / "word_classes.tsv"), "--tagset", str(d / "tagset.tsv")]


@pytest.fixture
def three(tmp_path):
    """The three-candidate r-rec example as input files."""
    profile = {"user_id": "u1", "attractions": [
        {"id": "a1", "description": "sand", "rating": 4, "tags": ["beach"]},
        {"id": "a2", "description": "grill", "rating": 2, "tags": ["food", "park"]},
    ]}
    request = {"request_id": "u1-c1", "user_id": "u1", "candidates": [
        {"id": "c3", "description": "", "tags": ["opera"]},
        {"id": "c2", "description": "", "tags": ["food"]},
        {"id": "c1", "description": "", "tags": ["beach"]},
    ]}
    (tmp_path / "p.jsonl").write_text(json.dumps(profile) + "\n")
    (tmp_path / "r.jsonl").write_text(json.dumps(request) + "\n")
    return tmp_path


def test_enrich_tags_meal_attraction(toy, capsys):
    out = toy / "out"
    rc = main(["enrich", "--profiles", str(toy / "profiles.jsonl"), "--requests", str(toy / "requests.jsonl"),
               "--out", str(out)] + lex_args(toy))
    assert rc == 0
    assert "newly tagged attractions\t3" in capsys.readouterr().out
    records = {r["user_id"]: r for r in map(json.loads, (out / "profiles.jsonl").read_text().splitlines())}
    terrace = {a["id"]: a for a in records["meal-user"]["attractions"]}
    assert terrace["m-terrace"]["tags"] == ["food"]
    assert terrace["m-terrace"]["tags_source"] == "enriched"
    assert terrace["m-bistro"]["tags"] == ["food"] and "tags_source" not in terrace["m-bistro"]


def test_enrich_fully_tagged_input_is_byte_identical(toy):
    first, second = toy / "e1", toy / "e2"
    assert main(["enrich", "--profiles", str(toy / "profiles.jsonl"), "--requests", str(toy / "requests.jsonl"),
                 "--out", str(first)] + lex_args(toy)) == 0
    assert main(["enrich", "--profiles", str(first / "profiles.jsonl"), "--requests", str(first / "requests.jsonl"),
                 "--out", str(second)] + lex_args(toy)) == 0
    for name in ("profiles.jsonl", "requests.jsonl"):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_enrich_bad_path(toy, capsys):
    rc = main(["enrich", "--profiles", str(toy / "missing.jsonl"), "--out", str(toy / "o")] + lex_args(toy))
    assert rc == 2
    assert "missing.jsonl" in capsys.readouterr().err


def test_enrich_missing_option(toy):
    assert main(["enrich", "--profiles", str(toy / "profiles.jsonl"), "--out", str(toy / "o")]) == 2


def test_rank_rrec_three_candidates(three):
    out = three / "run.txt"
    assert main(["rank", "--algo", "r-rec", "--profiles", str(three / "p.jsonl"),
                 "--requests", str(three / "r.jsonl"), "--out", str(out)]) == 0
    assert out.read_text().splitlines() == [
        "u1-c1 Q0 c1 1 4.001000 ctxsugg-r-rec",
        "u1-c1 Q0 c2 2 2.000500 ctxsugg-r-rec",
        "u1-c1 Q0 c3 3 -1.000000 ctxsugg-r-rec",
    ]
    again = three / "run2.txt"
    main(["rank", "--algo", "r-rec", "--profiles", str(three / "p.jsonl"),
          "--requests", str(three / "r.jsonl"), "--out", str(again)])
    assert again.read_bytes() == out.read_bytes()


def test_rank_unknown_algo(three):
    assert main(["rank", "--algo", "foo", "--profiles", str(three / "p.jsonl"),
                 "--requests", str(three / "r.jsonl")]) == 2


def test_rank_unknown_user(three, capsys):
    (three / "r.jsonl").write_text(
        json.dumps({"request_id": "x", "user_id": "ghost", "candidates": []}) + "\n"
        + json.dumps({"request_id": "y", "user_id": "u1", "candidates": []}) + "\n"
    )
    rc = main(["rank", "--algo", "drec", "--profiles", str(three / "p.jsonl"),
               "--requests", str(three / "r.jsonl"), "--out", str(three / "o")])
    assert rc == 4
    assert "ghost" in capsys.readouterr().err


def test_rank_parse_error(three):
    (three / "p.jsonl").write_text('{"user_id": "u1", "attractions": [{"id": "a", "description": "", "rating": 9, "tags": []}]}\n')
    assert main(["rank", "--algo", "drec", "--profiles", str(three / "p.jsonl"),
                 "--requests", str(three / "r.jsonl"), "--out", str(three / "o")]) == 3


def test_rank_bad_run_tag(three):
    assert main(["rank", "--algo", "drec", "--profiles", str(three / "p.jsonl"), "--run-tag", "a b",
                 "--requests", str(three / "r.jsonl"), "--out", str(three / "o")]) == 3


def test_rank_inline_enrich_matches_two_step(toy):
    inline = toy / "inline.run"
    assert main(["rank", "--algo", "cmp-rec", "--enrich", "--profiles", str(toy / "profiles.jsonl"),
                 "--requests", str(toy / "requests.jsonl"), "--out", str(inline)] + lex_args(toy)) == 0
    main(["enrich", "--profiles", str(toy / "profiles.jsonl"), "--requests", str(toy / "requests.jsonl"),
          "--out", str(toy / "e")] + lex_args(toy))
    two = toy / "two.run"
    main(["rank", "--algo", "cmp-rec", "--profiles", str(toy / "e" / "profiles.jsonl"),
          "--requests", str(toy / "e" / "requests.jsonl"), "--out", str(two)] + lex_args(toy))
    assert inline.read_bytes() == two.read_bytes()


def test_rank_jobs_same_output(toy):
    outs = []
    for jobs in ("1", "3"):
        out = toy / f"j{jobs}.run"
        assert main(["rank", "--algo", "drec", "--enrich", "--jobs", jobs, "--profiles", str(toy / "profiles.jsonl"),
                     "--requests", str(toy / "requests.jsonl"), "--out", str(out)] + lex_args(toy)) == 0
        outs.append(out.read_bytes())
    assert outs[0] == outs[1]


def test_eval_fixture(toy, capsys):
    rc = main(["eval", "--run", str(toy / "metrics_run.txt"), "--qrels", str(toy / "metrics_qrels.txt"),
               "--judged-only"])
    assert rc == 0
    assert capsys.readouterr().out == "P@5\t0.6000\nMRR\t0.3750\n"


def test_eval_per_request_and_k(toy, capsys):
    main(["eval", "--run", str(toy / "metrics_run.txt"), "--qrels", str(toy / "metrics_qrels.txt"),
          "--per-request", "--k", "2"])
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "q1\tP@2\t0.5000\tRR\t0.5000"
    assert lines[-2:] == ["P@2\t0.1667", "MRR\t0.2500"]


def test_eval_all_top_relevant(tmp_path, capsys):
    (tmp_path / "run").write_text("a Q0 x 1 1 t\nb Q0 y 1 1 t\n")
    (tmp_path / "qrels").write_text("a 0 x 4\nb 0 y 3\n")
    assert main(["eval", "--run", str(tmp_path / "run"), "--qrels", str(tmp_path / "qrels")]) == 0
    assert "MRR\t1.0000" in capsys.readouterr().out


def test_eval_errors(tmp_path):
    (tmp_path / "run").write_text("")
    (tmp_path / "qrels").write_text("a 0 x 4\n")
    assert main(["eval", "--run", str(tmp_path / "run"), "--qrels", str(tmp_path / "nope")]) == 2
    assert main(["eval", "--run", str(tmp_path / "run"), "--qrels", str(tmp_path / "qrels")]) == 3


def test_pipeline_equals_composition(toy, capsys):
    args = ["--profiles", str(toy / "profiles.jsonl"), "--requests", str(toy / "requests.jsonl")] + lex_args(toy)
    assert main(["pipeline", "--algo", "r-rec", "--qrels", str(toy / "qrels.txt"),
                 "--out", str(toy / "pipe.run")] + args) == 0
    pipe_out = capsys.readouterr().out

    main(["enrich", "--out", str(toy / "e")] + args)
    capsys.readouterr()
    main(["rank", "--algo", "r-rec", "--profiles", str(toy / "e" / "profiles.jsonl"),
          "--requests", str(toy / "e" / "requests.jsonl"), "--out", str(toy / "chain.run")] + lex_args(toy))
    main(["eval", "--run", str(toy / "chain.run"), "--qrels", str(toy / "qrels.txt")])
    chain_out = capsys.readouterr().out

    assert (toy / "pipe.run").read_bytes() == (toy / "chain.run").read_bytes()
    assert pipe_out == chain_out


def test_pipeline_without_qrels(toy, capsys):
    rc = main(["pipeline", "--algo", "drec", "--profiles", str(toy / "profiles.jsonl"),
               "--requests", str(toy / "requests.jsonl"), "--out", str(toy / "x.run")] + lex_args(toy))
    assert rc == 0
    assert capsys.readouterr().out == ""
    assert parse_runfile((toy / "x.run").read_bytes())


def test_pipeline_all_algorithms(toy, capsys):
    out = toy / "runs"
    rc = main(["pipeline", "--algo", "all", "--qrels", str(toy / "qrels.txt"), "--out", str(out),
               "--profiles", str(toy / "profiles.jsonl"), "--requests", str(toy / "requests.jsonl")] + lex_args(toy))
    assert rc == 0
    files = sorted(p.name for p in out.iterdir())
    assert files == ["ctxsugg-cmp-rec.run", "ctxsugg-cov-rec.run", "ctxsugg-drec.run", "ctxsugg-r-rec.run"]
    run_tags = {p.read_text().split()[5] for p in out.iterdir()}
    assert len(run_tags) == 4
    assert capsys.readouterr().out.count("MRR\t") == 4


def test_pipeline_stage_prefixed_errors(toy, capsys):
    rc = main(["pipeline", "--algo", "drec", "--profiles", str(toy / "profiles.jsonl"),
               "--requests", str(toy / "requests.jsonl"), "--qrels", str(toy / "gone.txt"),
               "--out", str(toy / "x.run")] + lex_args(toy))
    assert rc == 2
    assert "eval: " in capsys.readouterr().err


def test_option_precedence(toy, capsys, monkeypatch):
    config = toy / "cfg.json"
    config.write_text(json.dumps({"k": 3}))
    base = ["eval", "--run", str(toy / "metrics_run.txt"), "--qrels", str(toy / "metrics_qrels.txt"),
            "--config", str(config)]
    main(base)
    assert "P@3\t" in capsys.readouterr().out
    monkeypatch.setenv("CTXSUGG_K", "4")
    main(base)
    assert "P@4\t" in capsys.readouterr().out
    main(base + ["--k", "2"])
    assert "P@2\t" in capsys.readouterr().out
    monkeypatch.delenv("CTXSUGG_K")
    main(base[:-2])
    assert "P@5\t" in capsys.readouterr().out


def test_env_lexicon_and_tagset(toy, monkeypatch):
    monkeypatch.setenv("CTXSUGG_LEXICON", str(toy / "lexicon.tsv"))
    monkeypatch.setenv("CTXSUGG_TAGSET", str(toy / "tagset.tsv"))
    monkeypatch.setenv("CTXSUGG_JOBS", "2")
    rc = main(["rank", "--algo", "r-rec", "--enrich", "--profiles", str(toy / "profiles.jsonl"),
               "--requests", str(toy / "requests.jsonl"), "--out", str(toy / "env.run")])
    assert rc == 0
    monkeypatch.setenv("CTXSUGG_JOBS", "zero")
    assert main(["rank", "--algo", "r-rec", "--profiles", str(toy / "profiles.jsonl"),
                 "--requests", str(toy / "requests.jsonl")]) == 2


def test_fixtures_command(tmp_path):
    assert main(["fixtures", str(tmp_path / "f")]) == 0
    assert (tmp_path / "f" / "profiles.jsonl").exists()
