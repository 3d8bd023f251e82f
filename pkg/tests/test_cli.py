import json

import pytest
from click.testing import CliRunner

from retrolens.cli import main
from retrolens.corpus import synth_corpus


@pytest.fixture(scope="module")
def runner():
    return CliRunner()


@pytest.fixture(scope="module")
def cli_root(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli-corpus")
    synth_corpus(7, 10, root)
    return root


@pytest.fixture(scope="module")
def cli_session(cli_root):
    return cli_root / "synth-s7-m10"


def test_ingest_check_ok(runner, cli_session):
    result = runner.invoke(main, ["ingest-check", str(cli_session)])
    assert result.exit_code == 0
    assert "ok: synth-s7-m10" in result.output
    assert "stats rows:  10" in result.output


def test_ingest_check_data_error_exit_3(runner, cli_session, tmp_path):
    broken = tmp_path / "broken"
    broken.mkdir()
    for f in cli_session.iterdir():
        (broken / f.name).write_bytes(f.read_bytes())
    lines = (broken / "stats.csv").read_text().splitlines()
    del lines[2]
    (broken / "stats.csv").write_text("\n".join(lines) + "\n")
    result = runner.invoke(main, ["ingest-check", str(broken)])
    assert result.exit_code == 3
    assert "schema_violation" in result.output


def test_usage_error_exit_2(runner, cli_root):
    result = runner.invoke(main, ["model", "synth-s7-m10:b0", "--corpus-root", str(cli_root)])
    assert result.exit_code == 2  # --target missing


def test_extract_then_cache_hit(runner, cli_session):
    first = runner.invoke(main, ["extract", str(cli_session)])
    assert first.exit_code == 0
    assert "computed" in first.output
    second = runner.invoke(main, ["extract", str(cli_session)])
    assert second.exit_code == 0
    assert "cache hit" in second.output
    # identical outputs apart from the cache status
    strip = lambda out: out.replace("computed", "X").replace("cache hit", "X")
    assert strip(first.output) == strip(second.output)


def test_model_prints_table_with_winner(runner, cli_root):
    result = runner.invoke(
        main, ["model", "synth-s7-m10:b0", "--target", "gpm", "--seed", "7",
               "--corpus-root", str(cli_root)],
    )
    assert result.exit_code == 0
    for family in ("linear", "random_forest", "gradient_boosted", "perceptron"):
        assert family in result.output
    assert "<- winner" in result.output


def test_model_unknown_clip_exit_3(runner, cli_root):
    result = runner.invoke(
        main, ["model", "nope:b9", "--target", "gpm", "--corpus-root", str(cli_root)],
    )
    assert result.exit_code == 3


def test_report_validates_schema(runner, cli_root, tmp_path):
    out = tmp_path / "bundle.json"
    result = runner.invoke(
        main, ["report", "synth-s7-m10:b0", "--out", str(out), "--seed", "3",
               "--corpus-root", str(cli_root)],
    )
    assert result.exit_code == 0, result.output
    assert "schema ok" in result.output
    doc = json.loads(out.read_text())
    from retrolens.server.bundle import validate_bundle

    validate_bundle(doc)


def test_corpus_root_env_fallback(runner, cli_root, monkeypatch):
    monkeypatch.setenv("RETROLENS_CORPUS", str(cli_root))
    result = runner.invoke(main, ["model", "synth-s7-m10:b0", "--target", "likes"])
    assert result.exit_code == 0


def test_synth_subcommand(runner, tmp_path):
    result = runner.invoke(main, ["synth", str(tmp_path), "--seed", "3", "--minutes", "5"])
    assert result.exit_code == 0
    assert (tmp_path / "synth-s3-m5" / "manifest.json").exists()
    bad = runner.invoke(main, ["synth", str(tmp_path), "--minutes", "4"])
    assert bad.exit_code == 2


def test_config_file_round_trip(runner, cli_session, tmp_path):
    cfg = tmp_path / "retrolens.toml"
    cfg.write_text("audio.min_pause_ms = 300\ntsne.perplexity = 8\nmodel.lag_target = true\n")
    result = runner.invoke(main, ["extract", str(cli_session), "--config", str(cfg)])
    assert result.exit_code == 0
    bad_cfg = tmp_path / "bad.toml"
    bad_cfg.write_text("audio.unknown_key = 1\n")
    result = runner.invoke(main, ["extract", str(cli_session), "--config", str(bad_cfg)])
    assert result.exit_code == 3
