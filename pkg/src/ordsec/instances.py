"""Line-oriented instance files.

A file starts with ``ordsec v1 <kind>``. ``name: value`` lines set scalars;
a bare ``name:`` line opens a section whose rows follow, one per line,
whitespace separated. ``#`` starts a comment. Floats are written with
``repr`` (shortest round-trip form, at most 17 significant digits), so a
file read back reproduces every weight bit for bit.

Example::

    ordsec v1 general
    n: 3
    edges:
    0 1
    1 2
    weights:
    0.5
    1.25
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .indepset import LocalGraph
from .matching import BipartiteInstance, GeneralInstance
from .matroid import PartitionMatroid, UniformMatroid
from .packing import PackingInstance
from .submodular import CoverageFunction

__all__ = [
    "Document",
    "FormatError",
    "parse_document",
    "format_document",
    "load_instance",
    "dump_instance",
    "read_document",
    "write_document",
    "MatroidInstance",
    "CoverageInstance",
    "KINDS",
]

MAGIC = "ordsec"
VERSION = "v1"
KINDS = ("bipartite", "general", "packing", "indepset", "matroid", "coverage", "config", "summary")


class FormatError(ParameterError):
    """Malformed instance or config file."""


@dataclass
class Document:
    kind: str
    scalars: dict = field(default_factory=dict)
    sections: dict = field(default_factory=dict)

    def scalar(self, name, cast=str, default=None):
        if name not in self.scalars:
            if default is None:
                raise FormatError(f"missing scalar '{name}'")
            return default
        try:
            return cast(self.scalars[name])
        except ValueError as exc:
            raise FormatError(f"bad value for '{name}': {self.scalars[name]!r}") from exc

    def rows(self, name, required=True):
        if name not in self.sections:
            if required:
                raise FormatError(f"missing section '{name}'")
            return []
        return self.sections[name]


def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def parse_document(text: str) -> Document:
    doc = None
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if doc is None:
            parts = line.split()
            if len(parts) != 3 or parts[0] != MAGIC:
                raise FormatError(f"line {lineno}: expected header 'ordsec v1 <kind>'")
            if parts[1] != VERSION:
                raise FormatError(f"unsupported format version {parts[1]}")
            if parts[2] not in KINDS:
                raise FormatError(f"unknown kind '{parts[2]}'")
            doc = Document(parts[2])
            continue
        head, sep, rest = line.partition(":")
        if sep and " " not in head.strip() and head.strip():
            name = head.strip()
            rest = rest.strip()
            if rest:
                doc.scalars[name] = rest
                current = None
            else:
                if name in doc.sections:
                    raise FormatError(f"line {lineno}: duplicate section '{name}'")
                current = doc.sections.setdefault(name, [])
            continue
        if current is None:
            raise FormatError(f"line {lineno}: data outside a section")
        current.append(line.split())
    if doc is None:
        raise FormatError("empty document")
    return doc


def format_document(doc: Document, comment: str | None = None) -> str:
    out = io.StringIO()
    out.write(f"{MAGIC} {VERSION} {doc.kind}\n")
    if comment:
        for c in comment.splitlines():
            out.write(f"# {c}\n")
    for k, v in doc.scalars.items():
        out.write(f"{k}: {_fmt(v)}\n")
    for name, rows in doc.sections.items():
        out.write(f"{name}:\n")
        for row in rows:
            if np.ndim(row) == 0:
                out.write(_fmt(row) + "\n")
            else:
                out.write(" ".join(_fmt(x) for x in row) + "\n")
    return out.getvalue()


def read_document(path) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def write_document(doc: Document, path, comment=None):
    d = os.path.dirname(os.fspath(path))
    if d:
        os.makedirs(d, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_document(doc, comment))


@dataclass
class MatroidInstance:
    """Weighted partition matroid; ``order`` optionally fixes the strict
    order among equal weights (best first)."""

    matroid: PartitionMatroid
    weights: np.ndarray
    order: np.ndarray | None = None

    def without_weights(self):
        return MatroidInstance(self.matroid, np.zeros_like(self.weights), None)


@dataclass
class CoverageInstance:
    """Weighted coverage objective under a uniform matroid of rank ``k``."""

    function: CoverageFunction
    k: int

    @property
    def n(self) -> int:
        return self.function.n

    @property
    def matroid(self):
        return UniformMatroid(self.function.n, self.k)


def _floats(rows):
    return np.array([float(r[0]) for r in rows], dtype=float)


def _to_document(obj) -> Document:
    if isinstance(obj, BipartiteInstance):
        return Document("bipartite", {"n_left": obj.n_left, "n_right": obj.n_right},
                        {"edges": list(zip(obj.left, obj.right)), "weights": list(obj.weight)})
    if isinstance(obj, GeneralInstance):
        return Document("general", {"n": obj.n},
                        {"edges": list(zip(obj.u, obj.v)), "weights": list(obj.weight)})
    if isinstance(obj, PackingInstance):
        # one options row per (request, option): j k then its m consumptions
        rows = []
        for j in range(obj.n):
            for k in range(obj.K):
                rows.append([j, k] + list(obj.consumption[:, j, k]))
        return Document("packing", {"n": obj.n, "m": obj.m, "K": obj.K},
                        {"capacities": [list(obj.capacities)], "options": rows,
                         "weights": list(obj.profits.ravel())})
    if isinstance(obj, LocalGraph):
        scalars = {"n": obj.n, "alpha1": obj.alpha1}
        sections = {}
        if obj.points is not None:
            scalars["radius"] = float(obj.radius)
            sections["points"] = [list(p) for p in obj.points]
        sections["edges"] = obj.edges()
        sections["weights"] = list(obj.weights)
        return Document("indepset", scalars, sections)
    if isinstance(obj, MatroidInstance):
        m = obj.matroid
        sections = {"capacities": list(m.capacities), "blocks": list(m.block_of),
                    "weights": list(obj.weights)}
        if obj.order is not None:
            sections["order"] = list(obj.order)
        return Document("matroid", {"n": m.n}, sections)
    if isinstance(obj, CoverageInstance):
        f = obj.function
        return Document("coverage", {"n": f.n, "k": obj.k},
                        {"weights": list(f.universe_weights),
                         "options": [sorted(c) if c else ["-"] for c in f.covers]})
    raise ParameterError(f"cannot serialize {type(obj).__name__}")


def _from_document(doc: Document):
    kind = doc.kind
    if kind == "bipartite":
        e = np.array(doc.rows("edges", required=False), dtype=np.int64).reshape(-1, 2)
        return BipartiteInstance(doc.scalar("n_left", int), doc.scalar("n_right", int),
                                 e[:, 0], e[:, 1], _floats(doc.rows("weights", required=False)))
    if kind == "general":
        e = np.array(doc.rows("edges", required=False), dtype=np.int64).reshape(-1, 2)
        return GeneralInstance(doc.scalar("n", int), e[:, 0], e[:, 1],
                               _floats(doc.rows("weights", required=False)))
    if kind == "packing":
        n, m, K = doc.scalar("n", int), doc.scalar("m", int), doc.scalar("K", int)
        caps = np.array(doc.rows("capacities")[0], dtype=float)
        cons = np.zeros((m, n, K))
        for row in doc.rows("options"):
            j, k = int(row[0]), int(row[1])
            cons[:, j, k] = [float(x) for x in row[2:]]
        prof = _floats(doc.rows("weights")).reshape(n, K)
        return PackingInstance(caps, prof, cons)
    if kind == "indepset":
        n = doc.scalar("n", int)
        w = _floats(doc.rows("weights"))
        nb = [set() for _ in range(n)]
        for a, b in doc.rows("edges", required=False):
            nb[int(a)].add(int(b))
            nb[int(b)].add(int(a))
        pts = doc.rows("points", required=False)
        g = LocalGraph(w, nb, doc.scalar("alpha1", int, 1))
        if pts:
            g.points = np.array(pts, dtype=float)
            g.radius = doc.scalar("radius", float)
        return g
    if kind == "matroid":
        caps = [int(r[0]) for r in doc.rows("capacities")]
        blocks = [int(r[0]) for r in doc.rows("blocks")]
        order = doc.rows("order", required=False)
        return MatroidInstance(PartitionMatroid(blocks, caps), _floats(doc.rows("weights")),
                               np.array([int(r[0]) for r in order], dtype=np.int64) if order else None)
    if kind == "coverage":
        covers = [[int(x) for x in r if x != "-"] for r in doc.rows("options")]
        return CoverageInstance(CoverageFunction(_floats(doc.rows("weights")), covers), doc.scalar("k", int))
    raise FormatError(f"'{kind}' documents do not hold an instance")


def dump_instance(obj, path=None, comment=None) -> str:
    """Serialize an instance; writes to ``path`` when given, returns the text."""
    text = format_document(_to_document(obj), comment)
    if path is not None:
        d = os.path.dirname(os.fspath(path))
        if d:
            os.makedirs(d, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def load_instance(source):
    """Read an instance from a path or from text starting with the header."""
    if isinstance(source, str) and source.lstrip().startswith(MAGIC + " "):
        return _from_document(parse_document(source))
    return _from_document(read_document(source))
