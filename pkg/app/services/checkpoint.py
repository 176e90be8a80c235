import json
from pathlib import Path
from typing import Union
from app.models.config_models import ProblemConfig
from app.services.bounded_stream import BoundedStreamClusterer
from app.services.window_clusterer import WindowClusterer
from app.utils.logger_config import get_logger

logger = get_logger(__name__)

FORMAT_VERSION = 1

Clusterer = Union[WindowClusterer, BoundedStreamClusterer]


def save_checkpoint(clusterer: Clusterer, path: str) -> None:
    """Write the full clusterer state, generator states included, as JSON."""
    if isinstance(clusterer, BoundedStreamClusterer):
        kind, state = "bounded", clusterer.to_state()
    else:
        kind, state = "window", clusterer.to_state()
    document = {
        "format_version": FORMAT_VERSION,
        "kind": kind,
        "config": clusterer.config.model_dump(mode="json"),
        "state": state,
    }
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(document), encoding="utf-8")
    logger.info(f"Saved {kind} checkpoint to {path}")


def load_checkpoint(path: str) -> Clusterer:
    """Restore a clusterer written by save_checkpoint.

    Raises:
        ValueError: If the file has an unknown format version or kind
    """
    document = json.loads(Path(path).read_text(encoding="utf-8"))
    version = document.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"Unsupported checkpoint format version: {version}")
    config = ProblemConfig(**document["config"])
    kind = document.get("kind")
    if kind == "window":
        return WindowClusterer.from_state(config, document["state"])
    if kind == "bounded":
        return BoundedStreamClusterer.from_state(config, document["state"])
    raise ValueError(f"Unknown checkpoint kind: {kind}")
