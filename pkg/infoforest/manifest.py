"""
Run manifest tracking for CLI commands
Every command records one manifest: what ran, with which config, seed and
data, what it measured and how long it took
"""

import json
import logging
import time
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional

from slugify import slugify

from . import config

logger = logging.getLogger(__name__)

STATUS_STARTED = "STARTED"
STATUS_COMPLETED = "COMPLETED"
STATUS_FAILED = "FAILED"


@dataclass
class RunManifest:
    run_id: str
    command: str
    status: str = STATUS_STARTED
    config: Dict[str, Any] = field(default_factory=dict)
    seed: Optional[int] = None
    dataset_fingerprint: Optional[str] = None
    metrics: Dict[str, Any] = field(default_factory=dict)
    started_at: Optional[str] = None
    finished_at: Optional[str] = None
    duration_seconds: Optional[float] = None
    error_message: Optional[str] = None


def generate_run_id(command: str) -> str:
    """
    Generate a run ID
    Format: {command}-{YYYYMMDD}-{HHMMSS}
    """
    timestamp = datetime.now().strftime('%Y%m%d_%H%M%S')
    return slugify(f"{command} {timestamp}")


class ManifestTracker:
    """Tracks one CLI run and writes its manifest exactly once"""

    def __init__(self, command: str, path: Optional[Path] = None):
        self.manifest = RunManifest(run_id=generate_run_id(command), command=command)
        self.path = Path(path) if path is not None else config.MANIFEST_DIR / f"{self.manifest.run_id}.json"
        self._t0: Optional[float] = None
        self._written = False

    def start(self, run_config: Optional[Dict[str, Any]] = None, seed: Optional[int] = None,
              dataset_fingerprint: Optional[str] = None) -> RunManifest:
        """Record inputs at the start of a run"""
        self._t0 = time.perf_counter()
        self.manifest.started_at = datetime.now(timezone.utc).isoformat()
        if run_config is not None:
            self.manifest.config = dict(run_config)
        self.manifest.seed = seed
        self.manifest.dataset_fingerprint = dataset_fingerprint
        logger.info(f"[OK] Manifest started: {self.manifest.run_id}")
        return self.manifest

    def update(self, **fields: Any) -> None:
        """Fill in inputs discovered after start (e.g. the data fingerprint once loaded)"""
        for name, value in fields.items():
            setattr(self.manifest, name, value)

    def complete(self, metrics: Optional[Dict[str, Any]] = None) -> Path:
        if metrics:
            self.manifest.metrics.update(metrics)
        return self._finish(STATUS_COMPLETED)

    def fail(self, error: BaseException) -> Path:
        self.manifest.error_message = f"{type(error).__name__}: {error}"
        return self._finish(STATUS_FAILED)

    def _finish(self, status: str) -> Path:
        if self._written:
            raise RuntimeError(f"manifest {self.manifest.run_id} already written")
        self.manifest.status = status
        self.manifest.finished_at = datetime.now(timezone.utc).isoformat()
        if self._t0 is not None:
            self.manifest.duration_seconds = round(time.perf_counter() - self._t0, 6)

        try:
            self._write(self.path)
        except OSError as e:
            fallback = config.MANIFEST_DIR / f"{self.manifest.run_id}.json"
            if fallback == self.path:
                raise
            logger.error(f"[ERROR] Cannot write manifest to {self.path}: {e}")
            logger.error(f"[ERROR] Falling back to {fallback}")
            self.path = fallback
            self._write(fallback)
        self._written = True
        logger.info(f"[OK] Manifest updated: {self.manifest.run_id} - {status} → {self.path}")
        return self.path

    def _write(self, path: Path) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self.manifest), indent=2, sort_keys=True))


def load_manifest(path: Path) -> RunManifest:
    return RunManifest(**json.loads(Path(path).read_text()))
