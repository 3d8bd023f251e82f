"""Command-line interface.

Exit codes: 0 ok, 2 usage error, 3 data error.

    retrolens ingest-check <session-dir>
    retrolens extract <session-dir> [--cache-dir PATH]
    retrolens model <clip-id> --target gpm --seed 7 [--corpus-root PATH]
    retrolens report <clip-id> --out bundle.json [--corpus-root PATH]
    retrolens serve [--corpus-root PATH] [--port N]

--corpus-root falls back to $RETROLENS_CORPUS.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .config import load_config
from .corpus.clips import segment_clips
from .corpus.io import load_session
from .errors import RetroLensError, UnknownClip
from .server.cache import FeatureCache, session_content_hash
from .server.state import AppState

DATA_ERROR = 3


def data_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except RetroLensError as exc:
            click.echo(f"error[{exc.code}]: {exc}", err=True)
            sys.exit(DATA_ERROR)
        except OSError as exc:
            click.echo(f"error[io]: {exc}", err=True)
            sys.exit(DATA_ERROR)
    return wrapper


corpus_root_option = click.option(
    "--corpus-root", envvar="RETROLENS_CORPUS", type=click.Path(path_type=Path),
    required=True, help="Directory of session directories (env: RETROLENS_CORPUS).",
)
config_option = click.option(
    "--config", "config_path", type=click.Path(exists=True, path_type=Path),
    default=None, help="key = value config file.",
)


@click.group()
def main() -> None:
    """Retrospective analytics for livestream e-commerce sessions."""


@main.command("ingest-check")
@click.argument("session_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@data_errors
def ingest_check(session_dir: Path) -> None:
    """Validate one session directory."""
    corpus = load_session(session_dir / "manifest.json")
    clips = segment_clips(corpus)
    click.echo(f"ok: {corpus.session_id}")
    click.echo(f"  stats rows:  {len(corpus.stats)}")
    click.echo(f"  sentences:   {len(corpus.transcript)}")
    click.echo(f"  frames:      {len(corpus.frames)}")
    click.echo(f"  comments:    {len(corpus.comments)}")
    click.echo(f"  audio:       {len(corpus.audio) / corpus.sample_rate:.1f} s @ {corpus.sample_rate} Hz")
    click.echo(f"  clips:       {', '.join(c.clip_id for c in clips) or '(none)'}")


@main.command()
@click.argument("session_dir", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--cache-dir", type=click.Path(path_type=Path), default=None,
              help="Feature cache location (default: <session-dir>/../.retrolens-cache).")
@config_option
@data_errors
def extract(session_dir: Path, cache_dir: Path | None, config_path: Path | None) -> None:
    """Compute and cache features for every clip of a session."""
    cfg = load_config(config_path)
    cache_dir = cache_dir or session_dir.parent / ".retrolens-cache"
    cache = FeatureCache(cache_dir, cfg)
    corpus = load_session(session_dir / "manifest.json")
    click.echo(f"content hash: {session_content_hash(session_dir)}")
    for clip in segment_clips(corpus):
        feats, hit = cache.clip_features(corpus, clip, session_dir)
        status = "cache hit" if hit else "computed"
        click.echo(
            f"{clip.clip_id}: {status} "
            f"({feats.seconds}s, {len(feats.sentences)} sentences, {len(feats.audio.pauses)} pauses)"
        )


@main.command()
@click.argument("clip_id")
@click.option("--target", required=True, help="One of the nine target options.")
@click.option("--seed", type=int, default=0)
@corpus_root_option
@config_option
@data_errors
def model(clip_id: str, target: str, seed: int, corpus_root: Path, config_path: Path | None) -> None:
    """Fit the four families on a clip and print the selection table."""
    state = AppState(corpus_root, load_config(config_path))
    if clip_id not in state.clips:
        raise UnknownClip(clip_id)
    run = state.execute_run(clip_id, target, seed)
    click.echo(f"run {run.run_id}  clip={clip_id}  target={target}  seed={seed}")
    click.echo(f"{'family':<18} {'MAE':>12} {'MAPE %':>12} {'composite':>12}")
    for report in run.reports:
        mark = " <- winner" if report["model"] == run.winner else ""
        mape = f"{report['mape']:.4f}" if report["mape"] is not None else "n/a"
        click.echo(f"{report['model']:<18} {report['mae']:>12.4f} {mape:>12} {report['composite']:>12.4f}{mark}")
    if run.metadata.get("mape_undefined"):
        click.echo("note: MAPE undefined everywhere; composite used MAE alone")


@main.command()
@click.argument("clip_id")
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--seed", type=int, default=0)
@corpus_root_option
@config_option
@data_errors
def report(clip_id: str, out_path: Path, seed: int, corpus_root: Path, config_path: Path | None) -> None:
    """Write the offline JSON bundle for a clip (schema-validated)."""
    from .server.bundle import write_report_bundle

    state = AppState(corpus_root, load_config(config_path))
    if clip_id not in state.clips:
        raise UnknownClip(clip_id)
    doc = write_report_bundle(state, clip_id, out_path, seed=seed)
    click.echo(f"wrote {out_path} ({len(json.dumps(doc))} bytes, schema ok)")


@main.command()
@click.option("--port", type=int, default=8321)
@click.option("--host", default="127.0.0.1")
@corpus_root_option
@config_option
@data_errors
def serve(port: int, host: str, corpus_root: Path, config_path: Path | None) -> None:
    """Serve the HTTP API over a corpus root."""
    import uvicorn

    from .server.app import create_app

    state = AppState(corpus_root, load_config(config_path))
    app = create_app(state)
    click.echo(f"serving {len(state.sessions)} session(s) on http://{host}:{port}")
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command("synth")
@click.argument("root", type=click.Path(path_type=Path))
@click.option("--seed", type=int, default=7)
@click.option("--minutes", type=int, default=30)
@data_errors
def synth(root: Path, seed: int, minutes: int) -> None:
    """Generate a synthetic session corpus (test fixture)."""
    from .corpus.synth import synth_corpus

    try:
        session_dir = synth_corpus(seed, minutes, root)
    except ValueError as exc:
        raise click.UsageError(str(exc))
    click.echo(f"wrote {session_dir}")


if __name__ == "__main__":
    main()
