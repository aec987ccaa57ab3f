"""Line-oriented text format for rings, modules, complexes, maps and sequences.

Example::

    ring PolyQuotient 2 [0,0,1]
    module k gens 1 relations 1x1 [[[0,1]]]
    complex P periodic
      term free 1
      diff 1x1 [[[0,1]]]
    end
    complex S bounded 0 0
      term 0 k
    end

Elements are integers over ``IntegersMod`` and coefficient lists (low degree
first, one entry per basis monomial) otherwise. Matrices are ``RxC`` followed
by a JSON list of rows. ``#`` starts a comment.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .complex import ChainMap, Complex, ComplexError, ShortSequence
from .module import FpModule, ModuleError, free_module
from .ring import IntegersMod, MonomialQuotient, PolyQuotient, Ring, RingError, make_ring


class DocumentError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


@dataclass
class Document:
    ring: Ring
    modules: dict = field(default_factory=dict)
    complexes: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    resolutions: dict = field(default_factory=dict)

    def complex(self, name: Optional[str] = None) -> Complex:
        """The named complex, or the only/first one."""
        if name is not None:
            if name not in self.complexes:
                raise DocumentError(f"no complex named {name!r}")
            return self.complexes[name]
        if not self.complexes:
            raise DocumentError("document has no complex")
        return next(iter(self.complexes.values()))

    def sequence(self, name: Optional[str] = None) -> list:
        if name is not None:
            if name not in self.sequences:
                raise DocumentError(f"no sequence named {name!r}")
            return self.sequences[name]
        if not self.sequences:
            raise DocumentError("document has no sequence")
        return next(iter(self.sequences.values()))

    def short_sequence(self, name: Optional[str] = None) -> ShortSequence:
        maps = self.sequence(name)
        if len(maps) != 2:
            raise DocumentError("expected a sequence of two maps")
        try:
            return ShortSequence(*maps)
        except ComplexError as e:
            raise DocumentError(f"sequence {name or ''}: {e}") from e


# --- parsing ----------------------------------------------------------------------


def _ring_from(args: str, ln: int) -> Ring:
    parts = args.split(None, 1)
    if not parts:
        raise DocumentError("ring needs a variant", ln)
    kind, rest = parts[0], (parts[1] if len(parts) > 1 else "")
    try:
        if kind == "IntegersMod":
            spec = IntegersMod(int(rest))
        elif kind == "PolyQuotient":
            p, f = rest.split(None, 1)
            spec = PolyQuotient(int(p), tuple(json.loads(f)))
        elif kind == "MonomialQuotient":
            p, nv, ideal = rest.split(None, 2)
            spec = MonomialQuotient(int(p), int(nv), tuple(tuple(g) for g in json.loads(ideal)))
        else:
            raise DocumentError(f"unknown ring variant {kind!r}", ln)
        return make_ring(spec)
    except (ValueError, TypeError) as e:
        if isinstance(e, DocumentError):
            raise
        raise DocumentError(f"bad ring description: {e}", ln) from e


def _matrix(ring: Ring, text: str, ln: int) -> np.ndarray:
    parts = text.split(None, 1)
    if len(parts) != 2 or "x" not in parts[0]:
        raise DocumentError("matrix must be 'RxC <json rows>'", ln)
    try:
        r, c = (int(t) for t in parts[0].split("x"))
        rows = json.loads(parts[1])
    except ValueError as e:
        raise DocumentError(f"bad matrix: {e}", ln) from e
    if not isinstance(rows, list) or len(rows) != r or any(not isinstance(row, list) or len(row) != c for row in rows):
        raise DocumentError(f"matrix literal does not have shape {r}x{c}", ln)
    try:
        return ring.matrix(rows, shape=(r, c))
    except (RingError, TypeError, ValueError) as e:
        raise DocumentError(f"bad matrix entry: {e}", ln) from e


def _module_spec(doc: Document, text: str, ln: int) -> FpModule:
    """``free k`` / ``gens g relations RxC [...]`` / a module name."""
    ring = doc.ring
    parts = text.split(None, 1)
    if not parts:
        raise DocumentError("missing module", ln)
    if parts[0] == "free":
        try:
            return free_module(ring, int(parts[1]))
        except (IndexError, ValueError, ModuleError) as e:
            raise DocumentError("free needs a non-negative rank", ln) from e
    if parts[0] == "gens":
        rest = parts[1].split(None, 2) if len(parts) > 1 else []
        if len(rest) != 3 or rest[1] != "relations":
            raise DocumentError("expected 'gens g relations RxC [...]'", ln)
        g = int(rest[0])
        R = _matrix(ring, rest[2], ln)
        if R.shape[0] != g:
            raise DocumentError(f"relations must have {g} rows", ln)
        return FpModule(ring, g, R)
    if len(parts) == 1 and parts[0] in doc.modules:
        return doc.modules[parts[0]]
    raise DocumentError(f"unknown module {text.strip()!r}", ln)


def parse(text: str) -> Document:
    lines = text.splitlines()
    doc: Optional[Document] = None
    i = 0

    def block(start: int):
        body = []
        j = start
        while j < len(lines):
            s = lines[j].split("#", 1)[0].strip()
            j += 1
            if not s:
                continue
            if s == "end":
                return body, j
            body.append((j, s))
        raise DocumentError("block is missing 'end'", start)

    while i < len(lines):
        ln = i + 1
        s = lines[i].split("#", 1)[0].strip()
        i += 1
        if not s:
            continue
        head, _, rest = s.partition(" ")
        rest = rest.strip()
        if head == "ring":
            if doc is not None:
                raise DocumentError("ring declared twice", ln)
            doc = Document(_ring_from(rest, ln))
            continue
        if doc is None:
            raise DocumentError("the first declaration must be 'ring'", ln)
        if head == "module":
            name, _, spec = rest.partition(" ")
            _fresh(doc, name, ln)
            try:
                doc.modules[name] = _module_spec(doc, spec, ln)
            except ModuleError as e:
                raise DocumentError(f"module {name}: {e}", ln) from e
        elif head == "complex":
            body, i = block(i)
            _parse_complex(doc, rest, body, ln)
        elif head == "map":
            body, i = block(i)
            _parse_map(doc, rest, body, ln)
        elif head == "sequence":
            parts = rest.split()
            if len(parts) < 3:
                raise DocumentError("sequence needs a name and at least two maps", ln)
            _fresh(doc, parts[0], ln)
            maps = []
            for m in parts[1:]:
                if m not in doc.maps:
                    raise DocumentError(f"sequence {parts[0]}: unknown map {m!r}", ln)
                maps.append(doc.maps[m])
            for a, b in zip(maps, maps[1:]):
                if a.target is not b.source:
                    raise DocumentError(f"sequence {parts[0]}: maps do not compose", ln)
                comp = b @ a
                if not comp.is_zero():
                    raise DocumentError(f"sequence {parts[0]}: consecutive maps do not compose to zero", ln)
            doc.sequences[parts[0]] = maps
        elif head == "resolution":
            body, i = block(i)
            _parse_resolution(doc, rest, body, ln)
        else:
            raise DocumentError(f"unknown declaration {head!r}", ln)
    if doc is None:
        raise DocumentError("document declares no ring")
    return doc


def _fresh(doc: Document, name: str, ln: int):
    if not name or not name.replace("_", "").replace("-", "").isalnum():
        raise DocumentError(f"bad name {name!r}", ln)
    for table in (doc.modules, doc.complexes, doc.maps, doc.sequences, doc.resolutions):
        if name in table:
            raise DocumentError(f"name {name!r} already used", ln)


def _parse_complex(doc: Document, header: str, body, ln: int):
    parts = header.split()
    if len(parts) < 2:
        raise DocumentError("complex needs a name and 'periodic' or 'bounded lo hi'", ln)
    name, kind = parts[0], parts[1]
    _fresh(doc, name, ln)
    ring = doc.ring
    try:
        if kind == "periodic":
            mod, d = None, None
            for bl, s in body:
                key, _, rest = s.partition(" ")
                if key == "term":
                    mod = _module_spec(doc, rest, bl)
                elif key == "diff":
                    d = _matrix(ring, rest, bl)
                else:
                    raise DocumentError(f"unexpected {key!r} in periodic complex", bl)
            if mod is None:
                raise DocumentError(f"complex {name}: periodic complex needs a term", ln)
            d = ring.zeros(mod.gens, mod.gens) if d is None else d
            C = Complex(ring, {0: mod}, {0: d}, True, name=name)
        elif kind == "bounded":
            if len(parts) != 4:
                raise DocumentError("expected 'complex NAME bounded lo hi'", ln)
            lo, hi = int(parts[2]), int(parts[3])
            mods, diffs = {}, {}
            for bl, s in body:
                key, _, rest = s.partition(" ")
                deg, _, rest = rest.partition(" ")
                try:
                    n = int(deg)
                except ValueError as e:
                    raise DocumentError(f"expected a degree after {key!r}", bl) from e
                if not lo <= n <= hi:
                    raise DocumentError(f"degree {n} outside [{lo}, {hi}]", bl)
                if key == "term":
                    mods[n] = _module_spec(doc, rest, bl)
                elif key == "diff":
                    diffs[n] = _matrix(ring, rest, bl)
                else:
                    raise DocumentError(f"unexpected {key!r} in bounded complex", bl)
            for n in diffs:
                if n == lo:
                    raise DocumentError(f"complex {name}: differential out of degree {lo} leaves the window", ln)
                if n not in mods or (n - 1) not in mods:
                    missing = n if n not in mods else n - 1
                    raise DocumentError(f"complex {name}: differential {n} needs term {missing}", ln)
            C = Complex(ring, mods, diffs, False, lo, hi, name=name)
        else:
            raise DocumentError(f"unknown complex kind {kind!r}", ln)
    except ComplexError as e:
        raise DocumentError(f"complex {name}: {e}".replace(f"{name}: {name}:", f"{name}:"), ln) from e
    except ModuleError as e:
        raise DocumentError(f"complex {name}: {e}", ln) from e
    doc.complexes[name] = C


def _parse_map(doc: Document, header: str, body, ln: int):
    parts = header.split()
    if len(parts) != 3:
        raise DocumentError("expected 'map NAME SOURCE TARGET'", ln)
    name, src, tgt = parts
    _fresh(doc, name, ln)
    for c in (src, tgt):
        if c not in doc.complexes:
            raise DocumentError(f"map {name}: unknown complex {c!r}", ln)
    comps = {}
    for bl, s in body:
        key, _, rest = s.partition(" ")
        if key != "comp":
            raise DocumentError(f"unexpected {key!r} in map", bl)
        deg, _, rest = rest.partition(" ")
        comps[int(deg)] = _matrix(doc.ring, rest, bl)
    try:
        f = ChainMap(doc.complexes[src], doc.complexes[tgt], comps)
    except (ComplexError, ModuleError) as e:
        raise DocumentError(f"map {name}: {e}", ln) from e
    doc.maps[name] = f


def _parse_resolution(doc: Document, header: str, body, ln: int):
    from .gp import Resolution

    name = header.strip()
    _fresh(doc, name, ln)
    fields: dict = {}
    for bl, s in body:
        key, *names = s.split()
        table = doc.maps if key in ("embed", "cover", "rightmaps", "leftmaps") else doc.complexes
        if key not in ("center", "right", "left", "embed", "cover", "rightmaps", "leftmaps"):
            raise DocumentError(f"unexpected {key!r} in resolution", bl)
        for n in names:
            if n not in table:
                raise DocumentError(f"resolution {name}: unknown object {n!r}", bl)
        fields[key] = [table[n] for n in names]
    if "center" not in fields or len(fields["center"]) != 1:
        raise DocumentError(f"resolution {name}: needs exactly one center", ln)
    one = lambda k: fields[k][0] if fields.get(k) else None  # noqa: E731
    doc.resolutions[name] = Resolution(
        fields["center"][0],
        fields.get("right", []),
        fields.get("left", []),
        one("embed"),
        one("cover"),
        fields.get("rightmaps", []),
        fields.get("leftmaps", []),
    )


# --- serialization ------------------------------------------------------------------


def _ring_line(ring: Ring) -> str:
    spec = ring.spec
    if isinstance(spec, IntegersMod):
        return f"ring IntegersMod {spec.n}"
    if isinstance(spec, PolyQuotient):
        return f"ring PolyQuotient {spec.p} {json.dumps(list(spec.f), separators=(',', ':'))}"
    return f"ring MonomialQuotient {spec.p} {spec.nvars} {json.dumps([list(g) for g in spec.ideal], separators=(',', ':'))}"


def format_matrix(ring: Ring, A) -> str:
    r, c = A.shape[:2]
    rows = [[ring.encode(A[i, j]) for j in range(c)] for i in range(r)]
    return f"{r}x{c} {json.dumps(rows, separators=(',', ':'))}"


def format_module(ring: Ring, M: FpModule) -> str:
    if not M.nrels:
        return f"free {M.gens}"
    return f"gens {M.gens} relations {format_matrix(ring, M.relations)}"


def format_complex(name: str, C: Complex) -> list[str]:
    ring = C.ring
    if C.periodic:
        out = [f"complex {name} periodic", f"  term {format_module(ring, C.module(0))}"]
        if not ring.is_zero(C.diff(0)):
            out.append(f"  diff {format_matrix(ring, C.diff(0))}")
    else:
        out = [f"complex {name} bounded {C.lo} {C.hi}"]
        for n in C.degrees():
            out.append(f"  term {n} {format_module(ring, C.module(n))}")
        for n in C.degrees()[1:]:
            if not ring.is_zero(C.diff(n)):
                out.append(f"  diff {n} {format_matrix(ring, C.diff(n))}")
    out.append("end")
    return out


def format_map(name: str, f: ChainMap, src: str, tgt: str) -> list[str]:
    out = [f"map {name} {src} {tgt}"]
    for n in f.degrees():
        A = f.comp(n)
        if A.size and not f.ring.is_zero(A):
            out.append(f"  comp {n} {format_matrix(f.ring, A)}")
    out.append("end")
    return out


def serialize(doc: Document) -> str:
    ring = doc.ring
    out = [_ring_line(ring)]
    for name, M in doc.modules.items():
        out.append(f"module {name} {format_module(ring, M)}")
    cnames = {}
    for name, C in doc.complexes.items():
        out += format_complex(name, C)
        cnames[id(C)] = name
    mnames = {}
    for name, f in doc.maps.items():
        out += format_map(name, f, cnames[id(f.source)], cnames[id(f.target)])
        mnames[id(f)] = name
    for name, maps in doc.sequences.items():
        out.append(f"sequence {name} " + " ".join(mnames[id(m)] for m in maps))
    for name, res in doc.resolutions.items():
        out.append(f"resolution {name}")
        out.append(f"  center {cnames[id(res.center)]}")
        for key, objs, table in (
            ("right", res.right, cnames),
            ("left", res.left, cnames),
            ("embed", [res.embed] if res.embed else [], mnames),
            ("cover", [res.cover] if res.cover else [], mnames),
            ("rightmaps", res.right_maps, mnames),
            ("leftmaps", res.left_maps, mnames),
        ):
            if objs:
                out.append(f"  {key} " + " ".join(table[id(o)] for o in objs))
        out.append("end")
    return "\n".join(out) + "\n"


# --- building documents from objects ---------------------------------------------------


def complex_document(C: Complex, name: str = "X") -> Document:
    return Document(C.ring, complexes={name: C})


def sequence_document(maps: list, name: str = "s") -> Document:
    """A document holding the complexes and maps of a sequence."""
    doc = Document(maps[0].source.ring)
    cs = [maps[0].source] + [m.target for m in maps]
    for k, C in enumerate(cs):
        doc.complexes[f"X{k}"] = C
    for k, m in enumerate(maps):
        doc.maps[f"f{k}"] = m
    doc.sequences[name] = list(maps)
    return doc


def resolution_document(res, name: str = "res") -> Document:
    doc = Document(res.center.ring)
    doc.complexes["G"] = res.center
    for k, P in enumerate(res.right):
        doc.complexes[f"P{k}"] = P
    for k, P in enumerate(res.left):
        doc.complexes[f"Pm{k + 1}"] = P
    if res.embed is not None:
        doc.maps["embed"] = res.embed
    if res.cover is not None:
        doc.maps["cover"] = res.cover
    for k, m in enumerate(res.right_maps):
        doc.maps[f"r{k}"] = m
    for k, m in enumerate(res.left_maps):
        doc.maps[f"l{k}"] = m
    doc.resolutions[name] = res
    return doc


def documents_equal(a: Document, b: Document) -> bool:
    if a.ring.spec != b.ring.spec:
        return False
    if a.modules.keys() != b.modules.keys() or a.complexes.keys() != b.complexes.keys():
        return False
    for k in a.modules:
        m, n = a.modules[k], b.modules[k]
        if m.gens != n.gens or not np.array_equal(m.relations, n.relations):
            return False
    if any(not a.complexes[k].equals(b.complexes[k]) for k in a.complexes):
        return False
    if a.maps.keys() != b.maps.keys():
        return False
    for k in a.maps:
        f, g = a.maps[k], b.maps[k]
        if f.degrees() != g.degrees() or any(not np.array_equal(f.comp(n), g.comp(n)) for n in f.degrees()):
            return False
    if a.sequences.keys() != b.sequences.keys() or a.resolutions.keys() != b.resolutions.keys():
        return False
    return serialize(a) == serialize(b)
