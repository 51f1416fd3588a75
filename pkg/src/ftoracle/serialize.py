"""Oracle file envelope: ``{"magic", "version", "kind", "meta", "payload"}`` as JSON."""

from __future__ import annotations

import json
from typing import Any

from .detour import DetourOracle, Preserver
from .errors import OracleError
from .fieldreach import FieldMatrixOracle
from .kpath_sampling import SampledPathOracle
from .kpath_tree import FtLookupTree
from .vc import VcKernelOracle, VcSubsetOracle, VcTreeOracle
from .vc_dso import VcDso

MAGIC = "FTORACLE"
VERSION = 1

KINDS: dict[str, type] = {
    "kpath-tree": FtLookupTree,
    "kpath-sample": SampledPathOracle,
    "vc-subset": VcSubsetOracle,
    "vc-tree": VcTreeOracle,
    "vc-kernel": VcKernelOracle,
    "vc-dso": VcDso,
    "preserver": Preserver,
    "detour": DetourOracle,
    "reach": FieldMatrixOracle,
}


class FormatError(OracleError, ValueError):
    pass


def dumps(kind: str, oracle: Any, meta: dict | None = None) -> str:
    if kind not in KINDS:
        raise FormatError(f"unknown oracle kind {kind!r}")
    if not isinstance(oracle, KINDS[kind]):
        raise FormatError(f"{type(oracle).__name__} is not a {kind} oracle")
    doc = {"magic": MAGIC, "version": VERSION, "kind": kind, "meta": meta or {}, "payload": oracle.to_dict()}
    return json.dumps(doc, separators=(",", ":"))


def loads(text: str) -> tuple[str, Any, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"oracle file is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("magic") != MAGIC:
        raise FormatError("not an oracle file (bad magic)")
    if doc.get("version") != VERSION:
        raise FormatError(f"unsupported oracle file version {doc.get('version')!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"unknown oracle kind {kind!r}")
    return kind, KINDS[kind].from_dict(doc["payload"]), doc.get("meta", {})


def roundtrip(kind: str, oracle: Any) -> Any:
    return loads(dumps(kind, oracle))[1]
