"""
Input Loading

Resolves a source to a schema-checked document. A source is a file path or
``corpus:<tag>`` naming a bundled example. Files may be JSON or YAML; both go
through ``yaml.safe_load`` so syntax errors carry a line and column.
"""

from pathlib import Path
from typing import List, Optional, Tuple

import structlog
import yaml
from pydantic import ValidationError

from iwasawa_lab.config import get_settings
from iwasawa_lab.models.documents import InputDocument, input_document_adapter
from iwasawa_lab.services.errors import InputDocumentError

logger = structlog.get_logger(__name__)

CORPUS_PREFIX = "corpus:"


def corpus_dir(override: Optional[Path] = None) -> Path:
    return Path(override) if override else Path(get_settings().corpus_dir)


def resolve_source(source: str, directory: Optional[Path] = None) -> Path:
    if source.startswith(CORPUS_PREFIX):
        tag = source[len(CORPUS_PREFIX):]
        path = corpus_dir(directory) / f"{tag}.json"
        if not path.exists():
            raise InputDocumentError(f"unknown corpus tag {tag!r}", location=source)
        return path
    return Path(source)


def parse_document(text: str, location: str = "<input>") -> InputDocument:
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f"{location}:{mark.line + 1}:{mark.column + 1}" if mark else location
        raise InputDocumentError(f"syntax error: {getattr(e, 'problem', e)}", location=where) from e
    if not isinstance(raw, dict):
        raise InputDocumentError("a document must be a mapping with a 'kind' field", location=location)
    try:
        return input_document_adapter.validate_python(raw)
    except ValidationError as e:
        first = e.errors()[0]
        path = ".".join(str(part) for part in first["loc"])
        raise InputDocumentError(first["msg"], location=f"{location}:{path}" if path else location) from e


def load_input(source: str, directory: Optional[Path] = None) -> InputDocument:
    """Load and validate the document behind a path or corpus tag"""
    path = resolve_source(source, directory)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputDocumentError(f"cannot read input: {e.strerror or e}", location=str(path)) from e
    document = parse_document(text, location=source)
    logger.debug("document loaded", source=source, kind=document.kind)
    return document


def list_corpus(directory: Optional[Path] = None) -> List[Tuple[str, str, str]]:
    """(tag, kind, description) for every bundled document, sorted by tag"""
    out = []
    for path in sorted(corpus_dir(directory).glob("*.json")):
        document = load_input(str(path))
        out.append((path.stem, document.kind, document.description or ""))
    return out
