"""Document ingestion: directories of HTML or plain-text files become
uniform Document records with markup stripped and metadata captured.

No crawling or OCR happens here; web dumps and OCR output are expected to
already sit on disk. The only promises made about Document.text are that
it is valid Unicode, free of NUL, and free of anything tag-shaped.
"""

from __future__ import annotations

import hashlib
import json
import logging
import re
from dataclasses import dataclass, field
from html.parser import HTMLParser
from pathlib import Path

from .textprep import collapse_whitespace

log = logging.getLogger(__name__)

SOURCE_KINDS = ("web", "offline_ocr", "plain")

# Tags whose boundaries separate text blocks.
_BLOCK_TAGS = frozenset(
    {"p", "div", "br", "li", "h1", "h2", "h3", "h4", "h5", "h6", "tr"}
)
_SKIP_TAGS = frozenset({"script", "style"})

# Anything tag-shaped that must never appear in extracted text.
_TAG_START = re.compile(r"<(?=[a-zA-Z/!])")


@dataclass
class Document:
    """One ingested source document.

    ``text`` is markup-free; ``metadata`` may carry title, author, date.
    """

    id: str
    uri: str
    source_kind: str
    lang_hint: str | None
    text: str
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.source_kind not in SOURCE_KINDS:
            raise ValueError(
                f"source_kind must be one of {SOURCE_KINDS}, got {self.source_kind!r}"
            )


class _Extractor(HTMLParser):
    """Single pass over markup: tags out, entities decoded, blocks to newlines."""

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.parts: list[str] = []
        self.metadata: dict = {}
        self._skip_depth = 0
        self._in_title = False
        self._title_parts: list[str] = []

    def handle_starttag(self, tag, attrs):
        if tag in _SKIP_TAGS:
            self._skip_depth += 1
        elif tag == "title":
            self._in_title = True
        elif tag == "meta":
            self._handle_meta(dict(attrs))
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_endtag(self, tag):
        if tag in _SKIP_TAGS and self._skip_depth:
            self._skip_depth -= 1
        elif tag == "title":
            self._in_title = False
        if tag in _BLOCK_TAGS:
            self.parts.append("\n")

    def handle_startendtag(self, tag, attrs):
        self.handle_starttag(tag, attrs)

    def handle_data(self, data):
        if self._skip_depth:
            return
        if self._in_title:
            self._title_parts.append(data)
        else:
            self.parts.append(data)

    def _handle_meta(self, attrs: dict):
        content = attrs.get("content")
        if content is None:
            return
        name = (attrs.get("name") or "").lower()
        prop = (attrs.get("property") or "").lower()
        if name == "author":
            self.metadata.setdefault("author", content)
        elif name == "date" or prop == "article:published_time":
            self.metadata.setdefault("date", content)

    def result(self) -> tuple[str, dict]:
        if self._title_parts:
            title = collapse_whitespace("".join(self._title_parts)).strip()
            if title:
                self.metadata.setdefault("title", title)
        text = collapse_whitespace("".join(self.parts)).strip()
        return text, self.metadata


def _extract_once(markup: str) -> tuple[str, dict]:
    parser = _Extractor()
    parser.feed(markup)
    parser.close()
    return parser.result()


def extract_text(raw_html: str | bytes) -> tuple[str, dict]:
    """Strip markup to plain text plus {title, author, date} metadata.

    Runs the stripping pass to a fixed point so that doubly escaped markup
    (``&amp;lt;b&amp;gt;``) is fully unwound; as a consequence the function
    is idempotent. A final guard de-fangs any leftover tag-shaped ``<`` so
    the no-markup invariant holds even on pathological input.
    """
    if isinstance(raw_html, bytes):
        raw_html = raw_html.decode("utf-8", errors="replace")
    raw_html = raw_html.replace("\x00", "")
    text, metadata = _extract_once(raw_html)
    for _ in range(8):
        again, _ = _extract_once(text)
        if again == text:
            break
        text = again
    text = _TAG_START.sub("< ", text)
    return text, metadata


def _document_id(uri: str, text: str) -> str:
    h = hashlib.blake2b(digest_size=16)
    h.update(uri.encode("utf-8"))
    h.update(b"\x00")
    h.update(text.encode("utf-8"))
    return h.hexdigest()


def _plain_text(raw: bytes) -> str:
    text = raw.decode("utf-8", errors="replace").replace("\x00", "")
    return _TAG_START.sub("< ", text)


def load_corpus(
    root: str | Path,
    source_kind: str,
    lang_hint: str | None = None,
    errors: list[dict] | None = None,
) -> list[Document]:
    """Load every file under ``root`` as one Document.

    ``.html``/``.htm`` files pass through :func:`extract_text`; everything
    else is read as plain text. Files come back in lexicographic path
    order, so two loads of the same tree are identical. A file that cannot
    be read is recorded (appended to ``errors`` when given, always logged)
    and skipped; a missing root is fatal.
    """
    if source_kind not in SOURCE_KINDS:
        raise ValueError(f"source_kind must be one of {SOURCE_KINDS}, got {source_kind!r}")
    root = Path(root)
    if not root.is_dir():
        raise FileNotFoundError(f"corpus root does not exist: {root}")
    docs: list[Document] = []
    paths = sorted(p for p in root.rglob("*") if p.is_file())
    for path in paths:
        uri = path.relative_to(root).as_posix()
        try:
            raw = path.read_bytes()
            if path.suffix.lower() in (".html", ".htm"):
                text, metadata = extract_text(raw)
            else:
                text, metadata = _plain_text(raw), {}
        except OSError as exc:
            log.warning("skipping unreadable file %s: %s", path, exc)
            if errors is not None:
                errors.append({"uri": uri, "error": str(exc)})
            continue
        docs.append(
            Document(_document_id(uri, text), uri, source_kind, lang_hint, text, metadata)
        )
    return docs


# ---------------------------------------------------------------------------
# Document file format: one JSON object per line


def write_documents(path: str | Path, docs: list[Document]) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        for d in docs:
            fh.write(
                json.dumps(
                    {
                        "id": d.id,
                        "uri": d.uri,
                        "source_kind": d.source_kind,
                        "lang_hint": d.lang_hint,
                        "text": d.text,
                        "metadata": d.metadata,
                    },
                    ensure_ascii=False,
                )
            )
            fh.write("\n")
    return len(docs)


def read_documents(path: str | Path) -> list[Document]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if not line.strip():
                continue
            d = json.loads(line)
            docs.append(
                Document(
                    d["id"], d["uri"], d["source_kind"], d.get("lang_hint"),
                    d["text"], d.get("metadata") or {},
                )
            )
    return docs
