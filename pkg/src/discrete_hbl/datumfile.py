"""Line-oriented text format for HBL data.

::

    hbl-datum 1
    source free=0 torsion=2,2
    target label=x free=0 torsion=2
    row 1 0
    target label=y free=0 torsion=2
    row 0 1
    exponents 1/2 1/2

Each ``target`` is followed by one ``row`` per target generator (free ones
first), each with one integer per source generator.  ``exponents`` is
optional.  Blank lines and ``#`` comments are ignored.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass

from .constants import ExponentVector, HblDatum, parse_exponent
from .errors import HomomorphismError, ParseError
from .groups import AbelianGroup, Homomorphism

VERSION = 1
HEADER = "hbl-datum"

_LABEL = re.compile(r"[A-Za-z0-9_.\-]+")


@dataclass(frozen=True)
class DatumFile:
    datum: HblDatum
    exponents: ExponentVector | None = None
    version: int = VERSION


def _fields(tokens: list[str], lineno: int, allowed: set[str]) -> dict[str, str]:
    out = {}
    for tok in tokens:
        key, eq, value = tok.partition("=")
        if not eq or key not in allowed:
            raise ParseError(f"unexpected field {tok!r}", lineno, key or tok)
        if key in out:
            raise ParseError(f"field {key!r} given twice", lineno, key)
        out[key] = value
    return out


def _int(text: str, lineno: int, field: str, minimum: int | None = None) -> int:
    try:
        v = int(text)
    except ValueError:
        raise ParseError(f"{text!r} is not an integer", lineno, field) from None
    if minimum is not None and v < minimum:
        raise ParseError(f"{field} must be at least {minimum}, got {v}", lineno, field)
    return v


def _group(f: dict[str, str], lineno: int) -> AbelianGroup:
    free = _int(f.get("free", "0"), lineno, "free", 0)
    tors = f.get("torsion", "")
    moduli = tuple(_int(t, lineno, "torsion", 2) for t in tors.split(",")) if tors else ()
    return AbelianGroup(free, moduli)


def parse(text: str) -> DatumFile:
    """Parse a datum file; errors carry the line number and field."""
    lines = []
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((i, line.split()))
    if not lines:
        raise ParseError("empty datum file", 1, "header")
    lineno, toks = lines[0]
    if toks[0] != HEADER or len(toks) != 2:
        raise ParseError(f"first line must be '{HEADER} {VERSION}'", lineno, "header")
    version = _int(toks[1], lineno, "version")
    if version != VERSION:
        raise ParseError(f"unsupported version {version}; this reader understands {VERSION}", lineno, "version")
    source = None
    targets: list[list] = []  # [lineno, label, group, rows]
    exponents = None
    for lineno, toks in lines[1:]:
        kind, rest = toks[0], toks[1:]
        if kind == "source":
            if source is not None:
                raise ParseError("second source line", lineno, "source")
            source = _group(_fields(rest, lineno, {"free", "torsion"}), lineno)
        elif kind == "target":
            if source is None:
                raise ParseError("target before source", lineno, "target")
            f = _fields(rest, lineno, {"label", "free", "torsion"})
            label = f.get("label")
            if label is not None and not _LABEL.fullmatch(label):
                raise ParseError(f"bad label {label!r}", lineno, "label")
            targets.append([lineno, label, _group(f, lineno), []])
        elif kind == "row":
            if not targets:
                raise ParseError("row before any target", lineno, "row")
            row = [_int(t, lineno, "row") for t in rest]
            if len(row) != source.ngens:
                raise ParseError(f"row needs {source.ngens} entries, got {len(row)}", lineno, "row")
            targets[-1][3].append(row)
        elif kind == "exponents":
            if exponents is not None:
                raise ParseError("second exponents line", lineno, "exponents")
            try:
                exponents = tuple(parse_exponent(t) for t in rest)
            except ValueError as exc:
                raise ParseError(str(exc), lineno, "exponents") from None
            if any(not 0 <= v <= 1 for v in exponents):
                raise ParseError("exponents must lie in [0, 1]", lineno, "exponents")
        else:
            raise ParseError(f"unknown directive {kind!r}", lineno, kind)
    if source is None:
        raise ParseError("missing source line", lines[-1][0], "source")
    if not targets:
        raise ParseError("at least one target is required", lines[-1][0], "target")
    maps, labels = [], []
    for lineno, label, C, rows in targets:
        if len(rows) != C.ngens:
            raise ParseError(f"target needs {C.ngens} rows, got {len(rows)}", lineno, "row")
        try:
            maps.append(Homomorphism(source, C, tuple(map(tuple, rows))))
        except HomomorphismError as exc:
            raise ParseError(str(exc), lineno, f"column {exc.generator}") from None
        labels.append(label)
    datum = HblDatum(source, tuple(maps), tuple(labels))
    if exponents is not None and len(exponents) != datum.m:
        raise ParseError(f"need {datum.m} exponents, got {len(exponents)}", lines[-1][0], "exponents")
    return DatumFile(datum, exponents, version)


def load(path) -> DatumFile:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


def _group_fields(G: AbelianGroup) -> str:
    return f"free={G.free_rank} torsion={','.join(map(str, G.moduli))}"


def serialize(datum: HblDatum, exponents=None) -> str:
    out = [f"{HEADER} {VERSION}", f"source {_group_fields(datum.domain)}"]
    for phi, label in zip(datum.maps, datum.labels):
        head = "target" + (f" label={label}" if label else "")
        out.append(f"{head} {_group_fields(phi.codomain)}")
        out.extend("row " + " ".join(map(str, r)) for r in phi.matrix)
    if exponents is not None:
        out.append("exponents " + " ".join(str(parse_exponent(v)) for v in exponents))
    return "\n".join(out) + "\n"


def digest(datum: HblDatum) -> str:
    """sha256 of the canonical serialization (without exponents)."""
    return hashlib.sha256(serialize(datum).encode()).hexdigest()
