"""Triage HTTP service binding the pipeline end to end.

POST an X-ray (or externally produced tile predictions) against a patient
record, then read back the contamination matrix, per-strategy decisions,
and the fatality-indicator breakdown. Every response carries the advisory
disclaimer; nothing here is a diagnosis.
"""

from __future__ import annotations

import json
import uuid
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, File, Form, UploadFile
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from pneumoscreen import errors
from pneumoscreen.aggregation import (
    ContaminationMatrix,
    build_contamination_matrix,
    default_decision,
    majority_vote,
)
from pneumoscreen.classifier import (
    ModelParams,
    extract_features,
    forward,
    load_model,
    parse_prediction_lines,
)
from pneumoscreen.images import decode_image, resize_raw, resize_with_padding, split_grid
from pneumoscreen.indicators import (
    DISCLAIMER,
    Comorbidities,
    ExamObservation,
    ScoringConfig,
    assess,
    infection_rate,
    temporal_infection_rate,
)
from pneumoscreen.store import ExamRecord, PatientRecord, RecordStore

_STATUS_BY_ERROR = {
    errors.UnknownPatient: 404,
    errors.NoExams: 409,
    errors.NonChronological: 409,
    errors.GridMismatch: 409,
    errors.StoreCorrupt: 500,
    errors.StoreUnavailable: 503,
}


class PipelineStageError(errors.PneumoError):
    """Wraps a pipeline failure with the stage it happened in."""

    def __init__(self, stage: str, cause: Exception):
        super().__init__(str(cause))
        self.stage = stage
        self.cause = cause


@dataclass
class ExamOptions:
    resize: str = "raw"  # raw | pad
    width: int = 310
    height: int = 310
    rows: int = 3
    cols: int = 3
    classifier: str = "auto"  # internal | external | auto
    timestamp: float | int | str | None = None

    @classmethod
    def from_json(cls, text: str) -> "ExamOptions":
        try:
            doc = json.loads(text) if text.strip() else {}
        except json.JSONDecodeError as exc:
            raise errors.BadFormat(f"options must be JSON: {exc}") from None
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(doc) - known
        if unknown:
            raise errors.BadFormat(f"unknown exam options {sorted(unknown)}")
        opts = cls(**doc)
        if opts.resize not in ("raw", "pad"):
            raise errors.BadFormat(f"resize must be raw or pad, got {opts.resize!r}")
        if opts.classifier not in ("internal", "external", "auto"):
            raise errors.BadFormat(f"bad classifier choice {opts.classifier!r}")
        return opts


def _stage(name: str):
    class _Ctx:
        def __enter__(self):
            return self

        def __exit__(self, exc_type, exc, tb):
            if exc is not None and isinstance(exc, errors.PneumoError):
                raise PipelineStageError(name, exc) from exc
            return False

    return _Ctx()


def run_exam_pipeline(
    image_bytes: bytes,
    image_name: str,
    options: ExamOptions,
    predictions_text: str | None = None,
    model: ModelParams | None = None,
) -> dict:
    """imageprep -> classifier -> aggregation for one submitted exam."""
    with _stage("imageprep"):
        img = decode_image(image_bytes, image_id=Path(image_name).stem or "upload")
        resize = resize_with_padding if options.resize == "pad" else resize_raw
        prepared = resize(img, options.width, options.height)
        grid = split_grid(prepared, options.rows, options.cols)

    n = grid.tile_count
    mode = options.classifier
    if mode == "auto":
        mode = "external" if predictions_text is not None else "internal"

    with _stage("classifier"):
        if mode == "external":
            if predictions_text is None:
                raise errors.MissingInput("external classifier needs a predictions file")
            preds = parse_prediction_lines(predictions_text.splitlines())
            ids = preds.image_ids()
            if len(ids) != 1:
                raise errors.MissingInput(
                    f"predictions must cover exactly one image, found {len(ids)} ids"
                )
            tiles = preds.tiles_for(ids[0])
            missing = [i for i in range(n) if i not in tiles]
            if missing:
                raise errors.MissingInput(f"predictions missing tiles {missing}")
            tile_probs = [tiles[i] for i in range(n)]
            whole = preds.whole_for(ids[0])
        else:
            if model is None:
                raise errors.MissingInput("no internal model configured; train one or "
                                          "submit external predictions")
            tile_probs = [forward(model, tile) for tile in grid.tiles]
            whole = forward(model, prepared)

    with _stage("aggregation"):
        cm = build_contamination_matrix(tile_probs, options.rows, options.cols, img.id)
        decisions = {
            "majority": majority_vote(cm).to_dict(),
            "default": default_decision(whole, cm).to_dict(),
        }

    with _stage("indicators"):
        f = infection_rate(cm.virus_count, n)

    return {
        "contamination": cm.to_dict(),
        "decisions": decisions,
        "infected": cm.virus_count,
        "tiles": n,
        "f": f,
        "classifier_mode": mode,
    }


def submit_exam(
    store: RecordStore,
    patient_id: str,
    image_bytes: bytes,
    image_name: str,
    options: ExamOptions,
    predictions_text: str | None = None,
    model: ModelParams | None = None,
) -> ExamRecord:
    record = store.get(patient_id)
    result = run_exam_pipeline(image_bytes, image_name, options, predictions_text, model)

    timestamp = options.timestamp
    if timestamp is None:
        timestamp = _next_day_index(record)
    exam = ExamRecord(
        exam_id=uuid.uuid4().hex[:12],
        timestamp=timestamp,
        image_ref=store.save_image(image_bytes),
        preprocessing={
            "resize": options.resize,
            "width": options.width,
            "height": options.height,
            "rows": options.rows,
            "cols": options.cols,
            "classifier": result["classifier_mode"],
        },
        contamination=result["contamination"],
        decisions=result["decisions"],
        infected=result["infected"],
        tiles=result["tiles"],
        f=result["f"],
    )
    store.add_exam(patient_id, exam)
    return exam


def _next_day_index(record: PatientRecord) -> float:
    if not record.exams:
        return 0
    last = record.exams[-1].timestamp
    if isinstance(last, (int, float)):
        return last + 1
    raise errors.NonChronological(
        "previous exam has a date timestamp; supply an explicit later timestamp"
    )


def _observations(record: PatientRecord) -> tuple[ExamObservation, ExamObservation | None]:
    if not record.exams:
        raise errors.NoExams(f"patient {record.patient_id} has no exams")
    latest_exam = record.exams[-1]
    latest = ExamObservation(
        t=latest_exam.timestamp, infected=latest_exam.infected, tiles=latest_exam.tiles
    )
    previous = None
    if len(record.exams) >= 2:
        prev_exam = record.exams[-2]
        previous = ExamObservation(
            t=prev_exam.timestamp, infected=prev_exam.infected, tiles=prev_exam.tiles
        )
    return latest, previous


def assess_risk(store: RecordStore, patient_id: str, config: ScoringConfig) -> dict:
    record = store.get(patient_id)
    latest, previous = _observations(record)
    result = assess(record.age, record.comorbidities, latest, previous, config)
    return result.to_dict()


def what_if(
    store: RecordStore, patient_id: str, overrides: dict, config: ScoringConfig
) -> dict:
    """Assessment with in-memory overrides; the store is never touched."""
    record = store.get(patient_id)
    latest, previous = _observations(record)

    age = overrides.get("age", record.age)
    comorbidities = Comorbidities(
        serious_count=overrides.get("serious_count", record.comorbidities.serious_count),
        moderate_count=overrides.get("moderate_count", record.comorbidities.moderate_count),
    )
    if overrides.get("infected") is not None:
        latest = ExamObservation(
            t=latest.t, infected=int(overrides["infected"]), tiles=latest.tiles
        )
    result = assess(age, comorbidities, latest, previous, config)
    return result.to_dict()


# --- HTTP app -----------------------------------------------------------------

class ComorbidityItem(BaseModel):
    name: str
    severity: str  # serious | moderate


class PatientCreate(BaseModel):
    age: int | float | str
    comorbidities: list[ComorbidityItem] = []


class WhatIfRequest(BaseModel):
    age: Optional[int | float | str] = None
    serious_count: Optional[int] = None
    moderate_count: Optional[int] = None
    infected: Optional[int] = None


def _comorbidities_from_items(items: list[ComorbidityItem]) -> Comorbidities:
    for item in items:
        if item.severity not in ("serious", "moderate"):
            raise errors.BadCounts(
                f"severity must be serious or moderate, got {item.severity!r}"
            )
    return Comorbidities.from_names([i.model_dump() for i in items])


def _timeline(record: PatientRecord, scoring: ScoringConfig) -> list[dict]:
    """Per-exam rate points plus the scored branch to the previous exam.

    Branches are computed server-side so the dashboard never re-derives
    scoring logic; a grid change between exams yields branch null.
    """
    points: list[dict] = []
    for previous, current in zip([None, *record.exams], record.exams):
        branch = None
        if previous is not None:
            try:
                _, branch = temporal_infection_rate(
                    ExamObservation(previous.timestamp, previous.infected, previous.tiles),
                    ExamObservation(current.timestamp, current.infected, current.tiles),
                    scoring.delta,
                    scoring.bonus_pct,
                    scoring.malus_pct,
                )
            except errors.GridMismatch:
                branch = None
        points.append(
            {
                "exam_id": current.exam_id,
                "t": current.timestamp,
                "f": current.f,
                "infected": current.infected,
                "tiles": current.tiles,
                "branch_from_previous": branch,
            }
        )
    return points


def _patient_payload(record: PatientRecord, scoring: ScoringConfig) -> dict:
    doc = record.to_dict()
    doc["timeline"] = _timeline(record, scoring)
    doc["disclaimer"] = DISCLAIMER
    return doc


def create_app(
    store_dir: str | Path,
    config: ScoringConfig | None = None,
    model_path: str | Path | None = None,
    frontend_dir: str | Path | None = None,
) -> FastAPI:
    store = RecordStore(store_dir)
    scoring = config or ScoringConfig()
    model = load_model(model_path) if model_path else None

    app = FastAPI(title="pneumoscreen triage service")
    app.state.store = store

    @app.exception_handler(errors.PneumoError)
    async def pneumo_error_handler(request, exc: errors.PneumoError):
        cause = exc.cause if isinstance(exc, PipelineStageError) else exc
        status = _STATUS_BY_ERROR.get(type(cause), 400)
        return JSONResponse(
            status_code=status,
            content={
                "error": type(cause).__name__,
                "stage": getattr(exc, "stage", None),
                "detail": str(cause),
                "disclaimer": DISCLAIMER,
            },
        )

    @app.get("/healthz")
    def healthz():
        return {
            "status": "ok",
            "patients": len(store.list_patients()),
            "model_loaded": model is not None,
            "disclaimer": DISCLAIMER,
        }

    @app.post("/patients", status_code=201)
    def create_patient(body: PatientCreate):
        record = store.create_patient(body.age, _comorbidities_from_items(body.comorbidities))
        return _patient_payload(record, scoring)

    @app.get("/patients")
    def list_patients():
        summaries = [
            {
                "patient_id": r.patient_id,
                "age": r.age,
                "serious_count": r.comorbidities.serious_count,
                "moderate_count": r.comorbidities.moderate_count,
                "exam_count": len(r.exams),
                "updated": r.updated,
            }
            for r in store.list_patients()
        ]
        return {"patients": summaries, "disclaimer": DISCLAIMER}

    @app.get("/patients/{patient_id}")
    def get_patient(patient_id: str):
        return _patient_payload(store.get(patient_id), scoring)

    @app.post("/patients/{patient_id}/exams", status_code=201)
    def post_exam(
        patient_id: str,
        image: UploadFile = File(...),
        options: str = Form("{}"),
        predictions: UploadFile | None = File(None),
    ):
        opts = ExamOptions.from_json(options)
        predictions_text = None
        if predictions is not None:
            predictions_text = predictions.file.read().decode("utf-8")
        exam = submit_exam(
            store,
            patient_id,
            image.file.read(),
            image.filename or "upload",
            opts,
            predictions_text,
            model,
        )
        doc = exam.to_dict()
        doc["patient_id"] = patient_id
        doc["disclaimer"] = DISCLAIMER
        return doc

    @app.get("/patients/{patient_id}/risk")
    def get_risk(patient_id: str):
        return assess_risk(store, patient_id, scoring)

    @app.post("/patients/{patient_id}/what-if")
    def post_what_if(patient_id: str, body: WhatIfRequest):
        overrides = {k: v for k, v in body.model_dump().items() if v is not None}
        return what_if(store, patient_id, overrides, scoring)

    if frontend_dir is not None and Path(frontend_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(frontend_dir), html=True), name="ui")

    return app
