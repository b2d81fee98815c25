"""Append-only event-log persistence for patient records.

Every mutation is one JSON line in events.jsonl; the in-memory index is
rebuilt by replaying the log from the top, so a restart (or crash after a
flushed write) always reproduces the same state. Uploaded images live
under images/ keyed by content hash; records reference hashes only.
"""

from __future__ import annotations

import hashlib
import json
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from pneumoscreen import errors
from pneumoscreen.indicators import Comorbidities, _parse_bracket_text, _time_key

LOG_NAME = "events.jsonl"
IMAGES_DIR = "images"


def _now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def _validate_age(age) -> None:
    if isinstance(age, str):
        _parse_bracket_text(age)  # raises NegativeAge when unparseable
        return
    if not isinstance(age, (int, float)) or age < 0:
        raise errors.NegativeAge(f"age must be >= 0, got {age!r}")


@dataclass
class ExamRecord:
    exam_id: str
    timestamp: float | int | str
    image_ref: str  # content hash of the stored raster
    preprocessing: dict  # strategy, width, height, rows, cols, classifier
    contamination: dict  # export schema of the contamination matrix
    decisions: dict  # strategy name -> decision dict
    infected: int  # N
    tiles: int  # n
    f: float

    def __post_init__(self):
        expected = (100.0 / self.tiles) * self.infected
        if abs(self.f - expected) > 1e-9:
            raise errors.BadCounts(
                f"exam rate {self.f} inconsistent with {self.infected}/{self.tiles}"
            )

    def to_dict(self) -> dict:
        return {
            "exam_id": self.exam_id,
            "timestamp": self.timestamp,
            "image_ref": self.image_ref,
            "preprocessing": self.preprocessing,
            "contamination": self.contamination,
            "decisions": self.decisions,
            "infected": self.infected,
            "tiles": self.tiles,
            "f": self.f,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "ExamRecord":
        return cls(**doc)


@dataclass
class PatientRecord:
    patient_id: str
    age: float | int | str
    comorbidities: Comorbidities
    exams: list[ExamRecord] = field(default_factory=list)
    created: str = ""
    updated: str = ""

    def to_dict(self) -> dict:
        return {
            "patient_id": self.patient_id,
            "age": self.age,
            "comorbidities": {
                "serious_count": self.comorbidities.serious_count,
                "moderate_count": self.comorbidities.moderate_count,
                "diseases": self.comorbidities.diseases,
            },
            "exams": [e.to_dict() for e in self.exams],
            "created": self.created,
            "updated": self.updated,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "PatientRecord":
        return cls(
            patient_id=doc["patient_id"],
            age=doc["age"],
            comorbidities=Comorbidities(**doc["comorbidities"]),
            exams=[ExamRecord.from_dict(e) for e in doc.get("exams", [])],
            created=doc.get("created", ""),
            updated=doc.get("updated", ""),
        )


class RecordStore:
    """Patient index backed by an append-only JSON Lines event log.

    All mutations funnel through one lock, so the log is totally ordered;
    reads need no lock once a reference is taken (records are replaced,
    not mutated in place, on updates from other threads).
    """

    def __init__(self, store_dir: str | Path):
        self.store_dir = Path(store_dir)
        try:
            self.store_dir.mkdir(parents=True, exist_ok=True)
            (self.store_dir / IMAGES_DIR).mkdir(exist_ok=True)
        except OSError as exc:
            raise errors.StoreUnavailable(f"cannot open store at {store_dir}: {exc}") from None
        self.log_path = self.store_dir / LOG_NAME
        self._lock = threading.Lock()
        self._patients: dict[str, PatientRecord] = {}
        self._replay()

    # -- log machinery

    def _replay(self) -> None:
        if not self.log_path.exists():
            return
        with open(self.log_path, "r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    event = json.loads(line)
                    self._apply(event)
                except (json.JSONDecodeError, KeyError, TypeError) as exc:
                    raise errors.StoreCorrupt(
                        f"{self.log_path}:{lineno}: cannot replay event ({exc})"
                    ) from None

    def _apply(self, event: dict) -> None:
        kind = event["event"]
        if kind == "patient_created":
            record = PatientRecord.from_dict(event["record"])
            self._patients[record.patient_id] = record
        elif kind == "exam_added":
            record = self._patients[event["patient_id"]]
            record.exams.append(ExamRecord.from_dict(event["exam"]))
            record.updated = event["at"]
        else:
            raise KeyError(f"unknown event type {kind!r}")

    def _append(self, event: dict) -> None:
        line = json.dumps(event, sort_keys=True)
        with open(self.log_path, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
            fh.flush()

    # -- mutations (serialized)

    def create_patient(self, age, comorbidities: Comorbidities) -> PatientRecord:
        _validate_age(age)
        with self._lock:
            record = PatientRecord(
                patient_id=uuid.uuid4().hex,
                age=age,
                comorbidities=comorbidities,
                created=_now_iso(),
            )
            record.updated = record.created
            self._append({"event": "patient_created", "record": record.to_dict()})
            self._patients[record.patient_id] = record
        return record

    def add_exam(self, patient_id: str, exam: ExamRecord) -> PatientRecord:
        with self._lock:
            record = self._get_locked(patient_id)
            if record.exams:
                last = record.exams[-1]
                if _time_key(exam.timestamp) <= _time_key(last.timestamp):
                    raise errors.NonChronological(
                        f"exam at {exam.timestamp!r} not after {last.timestamp!r}"
                    )
            at = _now_iso()
            self._append({"event": "exam_added", "patient_id": patient_id,
                          "exam": exam.to_dict(), "at": at})
            record.exams.append(exam)
            record.updated = at
        return record

    def save_image(self, data: bytes) -> str:
        digest = hashlib.sha256(data).hexdigest()
        path = self.store_dir / IMAGES_DIR / digest
        if not path.exists():
            path.write_bytes(data)
        return digest

    def image_bytes(self, image_ref: str) -> bytes:
        return (self.store_dir / IMAGES_DIR / image_ref).read_bytes()

    # -- reads

    def _get_locked(self, patient_id: str) -> PatientRecord:
        record = self._patients.get(patient_id)
        if record is None:
            raise errors.UnknownPatient(f"no patient {patient_id!r}")
        return record

    def get(self, patient_id: str) -> PatientRecord:
        return self._get_locked(patient_id)

    def list_patients(self) -> list[PatientRecord]:
        return sorted(self._patients.values(), key=lambda r: r.created)

    def digest(self) -> str:
        """Hash of the full index; replay determinism is tested against it."""
        doc = {pid: record.to_dict() for pid, record in sorted(self._patients.items())}
        return hashlib.sha256(json.dumps(doc, sort_keys=True).encode()).hexdigest()
