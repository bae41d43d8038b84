"""szoom command line: a thin client over the engine service.

Commands run against an in-process service by default; pass --server to use
a running instance (see `szoom serve`).
"""

from __future__ import annotations

import json
import sys

import click

from .client import EngineClient, ServiceError


@click.group()
def main():
    """Automatic zoom into high-resolution surveillance video."""


def _client(server: str | None) -> EngineClient:
    return EngineClient(server)


def _fail(e: ServiceError):
    click.echo(f"error: {e.detail}", err=True)
    sys.exit(1)


@main.command()
@click.option("--input", "input_path", required=True, help="Frame directory or SZRAW1 stream.")
@click.option("--detections", default=None, help="Detection stream (JSON Lines).")
@click.option("--mask", default=None, help="User relevance mask image.")
@click.option("--config", "config_path", default=None, help="key = value config file.")
@click.option("--out", "out_dir", required=True, help="Directory for rendered frames.")
@click.option("--trajectory", default=None, help="Trajectory log path (JSON Lines).")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@click.option("--server", default=None, help="Engine service URL (default: in-process).")
def run(input_path, detections, mask, config_path, out_dir, trajectory, seed, server):
    """Retarget a stream: select, track and zoom into sensitive regions."""
    with _client(server) as client:
        try:
            summary = client.run(
                input=input_path,
                out=out_dir,
                trajectory=trajectory,
                detections=detections,
                mask=mask,
                config=config_path,
                seed=seed,
            )
        except ServiceError as e:
            _fail(e)
    click.echo(json.dumps(summary, indent=2))


@main.group()
def eval():
    """Evaluation utilities."""


@eval.command()
@click.option("--pred", required=True, help="Directory of predicted binary masks.")
@click.option("--truth", required=True, help="Directory of ground-truth binary masks.")
@click.option("--server", default=None, help="Engine service URL (default: in-process).")
def prf(pred, truth, server):
    """Pixel-level precision / recall / F1 between two mask directories."""
    with _client(server) as client:
        try:
            result = client.eval_prf(pred, truth)
        except ServiceError as e:
            _fail(e)
    click.echo(json.dumps(result, indent=2))


@eval.command()
@click.option("--trajectory", required=True, help="Trajectory log from a run.")
@click.option("--truth", required=True, help="Per-cycle ground-truth boxes (JSON Lines).")
@click.option("--frame-w", required=True, type=int, help="Input frame width.")
@click.option("--frame-h", required=True, type=int, help="Input frame height.")
@click.option("--server", default=None, help="Engine service URL (default: in-process).")
def accuracy(trajectory, truth, frame_w, frame_h, server):
    """Fraction of zoom cycles that still hold the true object at hold end."""
    with _client(server) as client:
        try:
            result = client.eval_accuracy(trajectory, truth, frame_w, frame_h)
        except ServiceError as e:
            _fail(e)
    click.echo(json.dumps(result, indent=2))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8787, show_default=True, type=int)
def serve(host, port):
    """Start the engine service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
