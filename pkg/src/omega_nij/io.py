"""JSON instance files.

Layout (every coefficient is a string such as ``"3/4"``, ``"-2"`` or
``"5 mod 7"``; basis indices are 0-based, Omega indices are labels)::

    {
      "field": "rational" | "prime:p",
      "semigroup": {"labels": [...], "table": [[...]], "unit": "1" | null},
      "algebra":   {"dim": d, "entries": [[a, b, i, j, l, "c"], ...]},
      "nijenhuis": {"<label>": [[row], ...], ...},
      "module":    "regular" | {"dim": m,
                                "left":  [[a, b, i, x, y, "c"], ...],
                                "right": [[a, b, x, i, y, "c"], ...],
                                "operators": {"<label>": [[row], ...]}},
      "cochains":  {"<name>": {"complex": "alg"|"nf"|"nfa", "degree": n,
                               "alg": [[[labels], [inputs], out, "c"], ...],
                               "nf":  [...]}},
      "deformation": {"order": K, "mu": [entries for t^1..t^K],
                      "nijenhuis": [{"<label>": matrix}, ...],
                      "gauge": [{"<label>": matrix}, ...]},
      "extension": {"psi": cochain entries, "chi": cochain entries,
                    "sections": {"<name>": {"<label>": matrix (m x d)}}}
    }

Matrices are lists of rows (``matrix[out][in]``).  Only ``field``,
``semigroup``, ``algebra`` and ``nijenhuis`` are required.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np

from .algebra import NFBimodule, OmegaAlgebra, OperatorFamily, Semigroup, build_semigroup
from .cochains import NFContext
from .deformation import TruncatedDeformation, make_deformation, make_gauge, GaugeFamily
from .derived import regular_nf_bimodule
from .errors import ParseError, SemanticError, ShapeMismatch
from .field import Field, field_from_descriptor

TOP_LEVEL = ("field", "semigroup", "algebra", "nijenhuis", "module", "cochains", "deformation", "extension")


@dataclass(eq=False)
class Instance:
    field: Field
    S: Semigroup
    A: OmegaAlgebra
    N: OperatorFamily
    M: NFBimodule | None = None  # None means the regular bimodule
    cochains: dict = dc_field(default_factory=dict)
    deformation: dict | None = None
    extension: dict | None = None

    @property
    def module(self) -> NFBimodule:
        return self.M if self.M is not None else regular_nf_bimodule(self.A, self.S, self.N, check=False)

    def context(self, nf_variant: str = "star", validate: bool = True) -> NFContext:
        return NFContext(self.S, self.A, self.N, self.module, validate=validate, nf_variant=nf_variant)


# --------------------------------------------------------------------------
# parsing helpers


def _coef(fld: Field, text, where: str):
    if not isinstance(text, (str, int)) or isinstance(text, bool):
        raise ParseError(f"coefficient must be a string, got {text!r}", field=where)
    try:
        return fld.parse(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(str(exc), field=where) from None


def _label(S: Semigroup, lab, where: str) -> int:
    try:
        return S.index(str(lab))
    except Exception:
        raise SemanticError(f"undeclared semigroup label {lab!r} in {where}") from None


def _index(v, bound: int, where: str) -> int:
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"basis index must be an integer, got {v!r}", field=where)
    if not 0 <= v < bound:
        raise SemanticError(f"basis index {v} out of range 0..{bound - 1} in {where}")
    return v


def _require(obj: dict, key: str, where: str):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing key {key!r}", field=where)
    return obj[key]


def _entries5(fld, S, rows, dims, where):
    """Sparse ``[a, b, i, j, l, c]`` entries into a ``(k, k) + dims`` tensor."""
    k = S.size
    out = fld.zeros((k, k) + dims)
    if not isinstance(rows, list):
        raise ParseError("entries must be a list", field=where)
    for n, row in enumerate(rows):
        w = f"{where}[{n}]"
        if not isinstance(row, list) or len(row) != 6:
            raise ParseError("entry must be [a, b, i, j, l, coefficient]", field=w)
        a, b = _label(S, row[0], w), _label(S, row[1], w)
        i, j, l = (_index(row[2 + t], dims[t], w) for t in range(3))
        out[a, b, i, j, l] = fld.coerce(out[a, b, i, j, l] + _coef(fld, row[5], w))
    return out


def _matrix(fld, rows, dout, din, where):
    if not isinstance(rows, list) or len(rows) != dout or any(not isinstance(r, list) or len(r) != din for r in rows):
        raise SemanticError(f"{where} must be a {dout}x{din} matrix")
    return fld.array([[_coef(fld, v, where) for v in r] for r in rows]).reshape(dout, din)


def _family(fld, S, block, dout, din, where, default_zero=False):
    if not isinstance(block, dict):
        raise ParseError("operator family must map labels to matrices", field=where)
    maps = fld.zeros((S.size, dout, din))
    seen = set()
    for lab, mat in block.items():
        w = _label(S, lab, where)
        maps[w] = _matrix(fld, mat, dout, din, f"{where}.{lab}")
        seen.add(w)
    missing = [S.labels[w] for w in range(S.size) if w not in seen]
    if missing and not default_zero:
        raise SemanticError(f"{where} has no matrix for labels {missing}")
    return maps


def parse_cochain_entries(fld, S, rows, n, d, m, where):
    shape = (S.size,) * n + (d,) * n + (m,)
    out = fld.zeros(shape)
    if not isinstance(rows, list):
        raise ParseError("cochain entries must be a list", field=where)
    for t, row in enumerate(rows):
        w = f"{where}[{t}]"
        if not isinstance(row, list) or len(row) != 4 or not isinstance(row[0], list) or not isinstance(row[1], list):
            raise ParseError("cochain entry must be [[labels], [inputs], output, coefficient]", field=w)
        if len(row[0]) != n or len(row[1]) != n:
            raise SemanticError(f"{w}: a degree-{n} entry needs {n} labels and {n} inputs")
        om = tuple(_label(S, x, w) for x in row[0])
        ins = tuple(_index(x, d, w) for x in row[1])
        pos = om + ins + (_index(row[2], m, w),)
        out[pos] = fld.coerce(out[pos] + _coef(fld, row[3], w))
    return out


def cochain_entries(fld, S, tensor, n):
    rows = []
    for pos in zip(*np.nonzero(np.asarray([x != 0 for x in tensor.reshape(-1)]).reshape(tensor.shape))):
        pos = tuple(int(p) for p in pos)
        rows.append([[S.labels[p] for p in pos[:n]], list(pos[n:2 * n]), pos[2 * n], fld.format(tensor[pos])])
    return rows


# --------------------------------------------------------------------------
# instances


def instance_from_dict(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    unknown = sorted(set(doc) - set(TOP_LEVEL))
    if unknown:
        raise ParseError(f"unknown top-level keys {unknown}")
    try:
        fld = field_from_descriptor(doc.get("field", "rational"))
    except (ValueError, KeyError) as exc:
        raise ParseError(str(exc), field="field") from None
    sg = _require(doc, "semigroup", "semigroup")
    labels = _require(sg, "labels", "semigroup")
    table = _require(sg, "table", "semigroup")
    if not isinstance(labels, list) or not isinstance(table, list):
        raise ParseError("labels and table must be lists", field="semigroup")
    S = build_semigroup(labels, table, sg.get("unit"))

    alg = _require(doc, "algebra", "algebra")
    d = _require(alg, "dim", "algebra")
    if not isinstance(d, int) or d < 0:
        raise ParseError("dim must be a non-negative integer", field="algebra.dim")
    A = OmegaAlgebra(fld, _entries5(fld, S, alg.get("entries", []), (d, d, d), "algebra.entries"))
    N = OperatorFamily(fld, _family(fld, S, _require(doc, "nijenhuis", "nijenhuis"), d, d, "nijenhuis"))

    M = None
    mod = doc.get("module", "regular")
    if mod != "regular":
        if not isinstance(mod, dict):
            raise ParseError("module must be \"regular\" or an object", field="module")
        m = _require(mod, "dim", "module")
        if not isinstance(m, int) or m < 0:
            raise ParseError("dim must be a non-negative integer", field="module.dim")
        left = _entries5(fld, S, mod.get("left", []), (d, m, m), "module.left")
        right = _entries5(fld, S, mod.get("right", []), (m, d, m), "module.right")
        nm = OperatorFamily(fld, _family(fld, S, _require(mod, "operators", "module"), m, m, "module.operators"))
        M = NFBimodule(fld, left, right, nm)
    m = d if M is None else M.dim

    cochains = {}
    for name, blk in (doc.get("cochains") or {}).items():
        w = f"cochains.{name}"
        kind = blk.get("complex", "alg") if isinstance(blk, dict) else None
        if kind not in ("alg", "nf", "nfa"):
            raise ParseError("complex must be alg, nf or nfa", field=w)
        n = _require(blk, "degree", w)
        if not isinstance(n, int) or n < 0:
            raise ParseError("degree must be a non-negative integer", field=f"{w}.degree")
        alg_t = parse_cochain_entries(fld, S, blk.get("alg", []), n, d, m, f"{w}.alg")
        nf_t = None
        if kind == "nfa" and n >= 1:
            nf_t = parse_cochain_entries(fld, S, blk.get("nf", []), n - 1, d, m, f"{w}.nf")
        cochains[name] = {"complex": kind, "degree": n, "alg": alg_t, "nf": nf_t}

    deformation = None
    if doc.get("deformation") is not None:
        blk = doc["deformation"]
        K = _require(blk, "order", "deformation")
        if not isinstance(K, int) or K < 0:
            raise ParseError("order must be a non-negative integer", field="deformation.order")
        mus = blk.get("mu", [[] for _ in range(K)])
        ns = blk.get("nijenhuis", [{} for _ in range(K)])
        if len(mus) != K or len(ns) != K:
            raise SemanticError(f"deformation of order {K} needs {K} higher mu and nijenhuis terms")
        mu_t = [_entries5(fld, S, e, (d, d, d), f"deformation.mu[{t}]") for t, e in enumerate(mus)]
        n_t = [_family(fld, S, e, d, d, f"deformation.nijenhuis[{t}]", default_zero=True) for t, e in enumerate(ns)]
        gauge = None
        if blk.get("gauge") is not None:
            gs = blk["gauge"]
            if len(gs) != K:
                raise SemanticError(f"gauge of order {K} needs {K} higher terms")
            gauge = [_family(fld, S, e, d, d, f"deformation.gauge[{t}]", default_zero=True) for t, e in enumerate(gs)]
        deformation = {"order": K, "mu": mu_t, "nijenhuis": n_t, "gauge": gauge}

    extension = None
    if doc.get("extension") is not None:
        blk = doc["extension"]
        psi = parse_cochain_entries(fld, S, blk.get("psi", []), 2, d, m, "extension.psi")
        chi = parse_cochain_entries(fld, S, blk.get("chi", []), 1, d, m, "extension.chi")
        sections = {}
        for name, fam in (blk.get("sections") or {}).items():
            sections[name] = _family(fld, S, fam, m, d, f"extension.sections.{name}", default_zero=True)
        extension = {"psi": psi, "chi": chi, "sections": sections}

    return Instance(fld, S, A, N, M, cochains, deformation, extension)


def parse_text(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, line=exc.lineno) from None
    return instance_from_dict(doc)


def parse_instance(path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_text(text)


# --------------------------------------------------------------------------
# serialization


def _matrix_rows(fld, mat):
    return [[fld.format(v) for v in row] for row in mat]


def _family_doc(fld, S, maps, skip_zero=False):
    return {S.labels[w]: _matrix_rows(fld, maps[w]) for w in range(S.size)
            if not (skip_zero and fld.is_zero_array(maps[w]))}


def _entries5_doc(fld, S, tensor):
    rows = []
    for pos in zip(*np.nonzero(np.asarray([x != 0 for x in tensor.reshape(-1)]).reshape(tensor.shape))):
        a, b, i, j, l = (int(p) for p in pos)
        rows.append([S.labels[a], S.labels[b], i, j, l, fld.format(tensor[a, b, i, j, l])])
    return rows


def cochain_doc(fld, S, kind: str, n: int, alg, nf=None) -> dict:
    doc = {"complex": kind, "degree": n, "alg": cochain_entries(fld, S, np.asarray(alg, dtype=object), n)}
    if kind == "nfa" and n >= 1:
        nf = fld.zeros((S.size,) * (n - 1) + alg.shape[n:]) if nf is None else nf
        doc["nf"] = cochain_entries(fld, S, np.asarray(nf, dtype=object), n - 1)
    return doc


def deformation_doc(fld, S, D: TruncatedDeformation, gauge: GaugeFamily | None = None) -> dict:
    doc = {
        "order": D.order,
        "mu": [_entries5_doc(fld, S, m) for m in D.mu_coeffs[1:]],
        "nijenhuis": [_family_doc(fld, S, x, skip_zero=True) for x in D.n_coeffs[1:]],
    }
    if gauge is not None:
        doc["gauge"] = [_family_doc(fld, S, x, skip_zero=True) for x in gauge.psi_coeffs[1:]]
    return doc


def extension_doc(fld, S, psi, chi, sections=None) -> dict:
    doc = {"psi": cochain_entries(fld, S, np.asarray(psi, dtype=object), 2),
           "chi": cochain_entries(fld, S, np.asarray(chi, dtype=object), 1)}
    if sections:
        doc["sections"] = {name: _family_doc(fld, S, maps, skip_zero=True) for name, maps in sections.items()}
    return doc


def instance_to_dict(inst: Instance) -> dict:
    fld, S = inst.field, inst.S
    doc = {
        "field": fld.descriptor(),
        "semigroup": {
            "labels": list(S.labels),
            "table": [[S.labels[S.table[a, b]] for b in range(S.size)] for a in range(S.size)],
            "unit": None if S.unit is None else S.labels[S.unit],
        },
        "algebra": {"dim": inst.A.dim, "entries": _entries5_doc(fld, S, inst.A.mu)},
        "nijenhuis": _family_doc(fld, S, inst.N.maps),
    }
    if inst.M is None:
        doc["module"] = "regular"
    else:
        doc["module"] = {
            "dim": inst.M.dim,
            "left": _entries5_doc(fld, S, inst.M.left),
            "right": _entries5_doc(fld, S, inst.M.right),
            "operators": _family_doc(fld, S, inst.M.nm.maps),
        }
    if inst.cochains:
        doc["cochains"] = {name: cochain_doc(fld, S, c["complex"], c["degree"], c["alg"], c["nf"])
                           for name, c in inst.cochains.items()}
    if inst.deformation is not None:
        dd = inst.deformation
        doc["deformation"] = {
            "order": dd["order"],
            "mu": [_entries5_doc(fld, S, m) for m in dd["mu"]],
            "nijenhuis": [_family_doc(fld, S, x, skip_zero=True) for x in dd["nijenhuis"]],
        }
        if dd.get("gauge") is not None:
            doc["deformation"]["gauge"] = [_family_doc(fld, S, x, skip_zero=True) for x in dd["gauge"]]
    if inst.extension is not None:
        ex = inst.extension
        doc["extension"] = extension_doc(fld, S, ex["psi"], ex["chi"], ex.get("sections"))
    return doc


def dumps(doc: dict) -> str:
    """Deterministic JSON text."""
    return json.dumps(doc, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def serialize(inst: Instance, path=None) -> str:
    text = dumps(instance_to_dict(inst))
    if path is not None:
        Path(path).write_text(text)
    return text


# --------------------------------------------------------------------------
# typed accessors


def instance_deformation(inst: Instance, ctx: NFContext) -> TruncatedDeformation:
    if inst.deformation is None:
        raise SemanticError("instance has no deformation block")
    return make_deformation(ctx, inst.deformation["mu"], inst.deformation["nijenhuis"])


def instance_gauge(inst: Instance, ctx: NFContext) -> GaugeFamily:
    if inst.deformation is None or inst.deformation.get("gauge") is None:
        raise SemanticError("instance has no gauge in its deformation block")
    return make_gauge(ctx, inst.deformation["gauge"])


def cochain_vector(inst: Instance, name: str, ctx: NFContext):
    """``(vector, degree, complex)`` for a named cochain."""
    if name not in inst.cochains:
        raise SemanticError(f"no cochain named {name!r}")
    c = inst.cochains[name]
    n, kind = c["degree"], c["complex"]
    if kind == "nfa":
        a, b = ctx.split(n)
        parts = [c["alg"].reshape(-1)[:a] if a else ctx.field.zeros(0)]
        if b:
            parts.append(c["nf"].reshape(-1))
        return np.concatenate(parts), n, kind
    return c["alg"].reshape(-1), n, kind


def with_algebra(inst: Instance, A: OmegaAlgebra, M: NFBimodule | None) -> Instance:
    """Copy of the instance over a different algebra/module (used by ``star``)."""
    if A.dim != inst.A.dim:
        raise ShapeMismatch("replacement algebra changes the dimension")
    return Instance(inst.field, inst.S, A, inst.N, M)


def change_field(inst: Instance, fld: Field) -> Instance:
    """Reinterpret every coefficient in another field (rationals reduce mod p)."""
    if fld == inst.field:
        return inst

    def cv(arr):
        return None if arr is None else fld.array(np.asarray(arr, dtype=object))

    def fam(F):
        return OperatorFamily(fld, cv(F.maps))

    M = None if inst.M is None else NFBimodule(fld, cv(inst.M.left), cv(inst.M.right), fam(inst.M.nm))
    cochains = {name: {**c, "alg": cv(c["alg"]), "nf": cv(c["nf"])} for name, c in inst.cochains.items()}
    deformation = None
    if inst.deformation is not None:
        dd = inst.deformation
        deformation = {"order": dd["order"], "mu": [cv(x) for x in dd["mu"]],
                       "nijenhuis": [cv(x) for x in dd["nijenhuis"]],
                       "gauge": None if dd.get("gauge") is None else [cv(x) for x in dd["gauge"]]}
    extension = None
    if inst.extension is not None:
        ex = inst.extension
        extension = {"psi": cv(ex["psi"]), "chi": cv(ex["chi"]),
                     "sections": {k: cv(v) for k, v in (ex.get("sections") or {}).items()}}
    return Instance(fld, inst.S, OmegaAlgebra(fld, cv(inst.A.mu)), fam(inst.N), M, cochains, deformation, extension)


def corpus_dir() -> Path:
    return Path(__file__).resolve().parent / "corpus"


def corpus_names() -> list:
    return sorted(p.stem for p in corpus_dir().glob("*.json"))


def load_corpus(name: str) -> Instance:
    return parse_instance(corpus_dir() / f"{name}.json")


def corpus_oracle() -> dict:
    return json.loads((corpus_dir() / "oracle" / "dims.json").read_text())
