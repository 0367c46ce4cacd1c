"""Command-line client for the arimamerge service.

Every subcommand is a thin HTTP call: by default the bundled service app is
driven in-process (no server needed); pass --server to talk to a running
instance instead. Exit codes: 0 success, 1 input error, 2 numeric failure.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import math
import sys
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERIC = 2


def _parse_spec(text: str) -> dict:
    parts = text.split(",")
    if len(parts) != 3:
        raise ValueError(f"--spec expects p,d,q (got {text!r})")
    p, d, q = (int(v) for v in parts)
    return {"p": p, "d": d, "q": q}


def _request(server: str | None, method: str, path: str,
             payload: dict | None = None, params: dict | None = None):
    if server:
        with httpx.Client(base_url=server, timeout=60.0) as client:
            r = client.request(method, path, json=payload, params=params)
            return r.status_code, r.json()

    from .service import app

    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://arimamerge.local"
        ) as client:
            r = await client.request(method, path, json=payload, params=params)
            return r.status_code, r.json()

    return asyncio.run(go())


def _fail(body: dict) -> int:
    message = body.get("message") or body.get("detail") or str(body)
    error = body.get("error", "error")
    print(f"{error}: {message}", file=sys.stderr)
    return EXIT_NUMERIC if body.get("category") == "numeric" else EXIT_INPUT


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


def cmd_fit(args: argparse.Namespace) -> int:
    payload = {
        "readings_csv": Path(args.readings).read_text(),
        "spec": _parse_spec(args.spec),
    }
    status, body = _request(args.server, "POST", "/fit", payload)
    if status != 200:
        return _fail(body)
    _emit(body["models_csv"], args.out)
    return EXIT_OK


def cmd_merge(args: argparse.Namespace) -> int:
    payload = {"models_csv": Path(args.models).read_text(), "weighted": args.weighted}
    status, body = _request(args.server, "POST", "/merge", payload)
    if status != 200:
        return _fail(body)
    _emit(body["models_csv"], args.out)
    return EXIT_OK


def cmd_tree(args: argparse.Namespace) -> int:
    payload = {"models_csv": Path(args.models).read_text(), "strategy": args.strategy}
    status, body = _request(args.server, "POST", "/tree", payload)
    if status != 200:
        return _fail(body)
    if args.json:
        _emit(json.dumps({"levels": body["levels"]}, indent=2), args.out)
    else:
        _emit(body["text"], args.out)
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    beta = float(args.beta)
    if math.isnan(beta) or beta < 0:
        raise ValueError("--beta must be >= 0 (or inf)")
    payload = {
        "readings_csv": Path(args.readings).read_text(),
        "spec": _parse_spec(args.spec),
        "strategy": args.strategy,
        "beta": None if math.isinf(beta) else beta,
    }
    if args.models:
        payload["models_csv"] = Path(args.models).read_text()
    status, body = _request(args.server, "POST", "/simulate", payload)
    if status != 200:
        return _fail(body)
    if args.out and args.out.endswith(".json"):
        _emit(json.dumps(body["report"], indent=2), args.out)
    else:
        _emit(body["report_csv"], args.out)
    return EXIT_OK


def cmd_count(args: argparse.Namespace) -> int:
    if args.pairings is not None:
        path, n = "/count/pairings", args.pairings
    else:
        path, n = "/count/trees", args.trees
    status, body = _request(args.server, "GET", path, params={"n": n})
    if status != 200:
        return _fail(body)
    print(body["value"])
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("arimamerge.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arimamerge",
        description="Fit, merge and simulate hierarchical sensor-network models.",
    )
    parser.add_argument(
        "--server",
        default=None,
        help="base URL of a running service; default runs the app in-process",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one model per readings column")
    p_fit.add_argument("readings", help="readings CSV file")
    p_fit.add_argument("--spec", required=True, help="model orders p,d,q")
    p_fit.add_argument("--out", help="write the model CSV here (default stdout)")
    p_fit.set_defaults(func=cmd_fit)

    p_merge = sub.add_parser("merge", help="one round of pairwise model merging")
    p_merge.add_argument("models", help="model CSV file")
    p_merge.add_argument("--weighted", action="store_true",
                         help="weight children by the node counts they represent")
    p_merge.add_argument("--out", help="write the merged model CSV here")
    p_merge.set_defaults(func=cmd_merge)

    p_tree = sub.add_parser("tree", help="build the full merge tree")
    p_tree.add_argument("models", help="model CSV file")
    p_tree.add_argument("--strategy", choices=("adjacent", "similarity"),
                        default="adjacent")
    p_tree.add_argument("--json", action="store_true", help="structured output")
    p_tree.add_argument("--out", help="write the dump here (default stdout)")
    p_tree.set_defaults(func=cmd_tree)

    p_sim = sub.add_parser("simulate", help="full pipeline with message accounting")
    p_sim.add_argument("readings", help="readings CSV file")
    p_sim.add_argument("--models", help="leaf model CSV (skip fitting)")
    p_sim.add_argument("--spec", required=True, help="model orders p,d,q")
    p_sim.add_argument("--beta", default="inf",
                       help="suppression band half-width (default inf)")
    p_sim.add_argument("--strategy", choices=("adjacent", "similarity"),
                       default="adjacent")
    p_sim.add_argument("--out", help="report file; .json for JSON, else CSV")
    p_sim.set_defaults(func=cmd_simulate)

    p_count = sub.add_parser("count", help="pairing and tree counts")
    group = p_count.add_mutually_exclusive_group(required=True)
    group.add_argument("--pairings", type=int, metavar="2N",
                       help="ways to pair 2N nodes")
    group.add_argument("--trees", type=int, metavar="N",
                       help="full pairing-tree structures over N nodes")
    p_count.set_defaults(func=cmd_count)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        print(f"transport error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
