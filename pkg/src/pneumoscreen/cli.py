"""Command-line interface.

Verbs: prep, train, gradcheck, predict, evaluate, score, simulate, serve,
fixture. Heavy imports happen inside each verb so the pure-arithmetic
verbs (score, simulate) start fast.

Environment: PNEUMO_STORE_DIR, PNEUMO_PORT, PNEUMO_CONFIG.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from pneumoscreen import errors


def _parse_age(text: str):
    try:
        value = float(text)
        return int(value) if value.is_integer() else value
    except ValueError:
        return text


def _load_config(path: str | None):
    from pneumoscreen.indicators import ScoringConfig

    path = path or os.environ.get("PNEUMO_CONFIG")
    return ScoringConfig.load(path) if path else ScoringConfig()


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2))


def cmd_prep(args) -> int:
    from pneumoscreen import images

    img = images.load_image(args.image)
    resize = images.resize_with_padding if args.resize == "pad" else images.resize_raw
    prepared = resize(img, args.width, args.height)
    grid = images.split_grid(prepared, args.rows, args.cols)

    written = []
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        target = out / f"{img.id}_prepared.pgm"
        images.save_pgm(prepared, target)
        written.append(str(target))
        for index, tile in enumerate(grid.tiles):
            tile_path = out / f"{img.id}_tile{index}.pgm"
            images.save_pgm(tile, tile_path)
            written.append(str(tile_path))

    _emit(
        {
            "image_id": img.id,
            "input": {"width": img.width, "height": img.height},
            "resize": args.resize,
            "output": {"width": prepared.width, "height": prepared.height},
            "grid": {
                "rows": grid.rows,
                "cols": grid.cols,
                "row_bounds": list(grid.row_bounds),
                "col_bounds": list(grid.col_bounds),
            },
            "written": written,
        }
    )
    return 0


def cmd_fixture(args) -> int:
    from pneumoscreen.evaluation import generate_fixture

    manifest = generate_fixture(args.out, args.per_class, args.seed)
    _emit({"out": args.out, "images": len(manifest.entries), "counts": manifest.counts()})
    return 0


def _train_samples(manifest):
    from pneumoscreen.images import load_image

    samples = []
    for entry in manifest.split("train"):
        label = entry.label
        if label is None:
            raise errors.UnlabeledSample(f"train entry {entry.path} is unlabeled")
        samples.append((load_image(manifest.resolve(entry)), label))
    return samples


def cmd_train(args) -> int:
    from pneumoscreen.classifier import TrainConfig, save_model, train
    from pneumoscreen.evaluation import load_manifest

    manifest = load_manifest(args.manifest)
    samples = _train_samples(manifest)
    config = TrainConfig(
        epochs=args.epochs,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        seed=args.seed,
    )
    params, history = train(samples, config)
    save_model(params, args.out)
    _emit(
        {
            "model": args.out,
            "samples": len(samples),
            "epochs": [
                {"loss": round(h.loss, 6), "accuracy": round(h.accuracy, 4)}
                for h in history
            ],
        }
    )
    return 0


def cmd_gradcheck(args) -> int:
    from pneumoscreen.gradcheck import run_gradient_check

    report = run_gradient_check(
        seed=args.seed, draws=args.draws, coords=args.coords, step=args.step
    )
    _emit(report)
    return 0 if report["ok"] else 1


def cmd_predict(args) -> int:
    from pneumoscreen.classifier import load_model
    from pneumoscreen.service import ExamOptions, run_exam_pipeline

    model = load_model(args.model) if args.model else None
    predictions_text = None
    if args.predictions:
        with open(args.predictions, "r", encoding="utf-8") as fh:
            predictions_text = fh.read()
    options = ExamOptions(
        resize=args.resize,
        width=args.width,
        height=args.height,
        rows=args.rows,
        cols=args.cols,
        classifier="external" if predictions_text is not None else "internal",
    )
    with open(args.image, "rb") as fh:
        image_bytes = fh.read()
    result = run_exam_pipeline(
        image_bytes, args.image, options, predictions_text, model
    )
    _emit(result)
    return 0


def cmd_evaluate(args) -> int:
    from pneumoscreen.evaluation import evaluate_predictions

    output = evaluate_predictions(
        manifest_path=args.manifest,
        predictions_path=args.predictions,
        strategy=args.strategy,
        split=args.split,
        fmt=args.format,
    )
    print(output, end="")
    return 0


def cmd_score(args) -> int:
    from pneumoscreen.indicators import Comorbidities, ExamObservation, assess

    config = _load_config(args.config)
    latest = ExamObservation(t=1, infected=args.infected, tiles=args.tiles)
    previous = None
    if args.prev_infected is not None:
        previous = ExamObservation(t=0, infected=args.prev_infected, tiles=args.tiles)
    result = assess(
        age=_parse_age(args.age),
        comorbidities=Comorbidities(
            serious_count=args.serious, moderate_count=args.moderate
        ),
        latest=latest,
        previous=previous,
        config=config,
    )
    _emit(result.to_dict())
    return 0


def cmd_simulate(args) -> int:
    from pneumoscreen.indicators import DISCLAIMER
    from pneumoscreen.scenarios import run_demo

    doc = run_demo(_load_config(args.config))
    doc["disclaimer"] = DISCLAIMER
    _emit(doc)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from pneumoscreen.service import create_app

    store_dir = args.store_dir or os.environ.get("PNEUMO_STORE_DIR", "./pneumo-store")
    port = args.port or int(os.environ.get("PNEUMO_PORT", "8000"))
    app = create_app(
        store_dir,
        config=_load_config(args.config),
        model_path=args.model,
        frontend_dir=args.frontend,
    )
    try:
        uvicorn.run(app, host=args.host, port=port, log_level="info")
    except OSError as exc:
        if exc.errno == 98:  # EADDRINUSE
            raise errors.PortInUse(f"port {port} already in use") from None
        raise
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pneumoscreen",
        description="Chest X-ray pneumonia screening pipeline and triage service.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prep", help="resize an X-ray and cut the tile grid")
    p.add_argument("--image", required=True)
    p.add_argument("--resize", choices=["raw", "pad"], default="raw")
    p.add_argument("--width", type=int, default=310)
    p.add_argument("--height", type=int, default=310)
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.add_argument("--out", help="directory for the prepared image and tiles")
    p.set_defaults(func=cmd_prep)

    p = sub.add_parser("fixture", help="generate the synthetic labeled dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--per-class", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fixture)

    p = sub.add_parser("train", help="train the built-in softmax classifier")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", required=True, help="model JSON output path")
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("gradcheck", help="verify analytic gradients numerically")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=5)
    p.add_argument("--coords", type=int, default=20)
    p.add_argument("--step", type=float, default=1e-5)
    p.set_defaults(func=cmd_gradcheck)

    p = sub.add_parser("predict", help="classify one X-ray (tiles + whole image)")
    p.add_argument("--image", required=True)
    p.add_argument("--model", help="model JSON (omit when using --predictions)")
    p.add_argument("--predictions", help="external predictions JSON Lines")
    p.add_argument("--resize", choices=["raw", "pad"], default="raw")
    p.add_argument("--width", type=int, default=310)
    p.add_argument("--height", type=int, default=310)
    p.add_argument("--rows", type=int, default=3)
    p.add_argument("--cols", type=int, default=3)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score predictions against a manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--predictions", required=True)
    p.add_argument(
        "--strategy", choices=["majority", "default", "whole"], default="majority"
    )
    p.add_argument("--split", choices=["test", "blind"], default="test")
    p.add_argument("--format", choices=["text", "json", "csv"], default="text")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("score", help="compute the fatality indicator breakdown")
    p.add_argument("--age", required=True, help='years or bracket, e.g. 82 or "50-59"')
    p.add_argument("--serious", type=int, default=0)
    p.add_argument("--moderate", type=int, default=0)
    p.add_argument("--infected", type=int, required=True, help="virus tiles N")
    p.add_argument("--tiles", type=int, default=9, help="total tiles n")
    p.add_argument("--prev-infected", type=int, help="N from the previous exam")
    p.add_argument("--config", help="scoring config JSON")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("simulate", help="emit the bundled demonstration scenarios")
    p.add_argument("--config", help="scoring config JSON")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="run the triage HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int)
    p.add_argument("--store-dir")
    p.add_argument("--model", help="model JSON for the internal classifier")
    p.add_argument("--config", help="scoring config JSON")
    p.add_argument("--frontend", help="static dashboard directory to mount at /ui")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except errors.PneumoError as exc:
        payload = {"error": type(exc).__name__, "detail": str(exc)}
        stage = getattr(exc, "stage", None)
        if stage:
            payload["stage"] = stage
        print(json.dumps(payload), file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
