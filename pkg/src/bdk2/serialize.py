"""JSON encodings of root data, forms, extensions, cochains and triples."""

from __future__ import annotations

import json
from pathlib import Path

from .bd import BDTriple
from .extensions import (
    CoefficientGroup,
    FieldUnits,
    IntegersAdditive,
    MonomialCochain,
    MonomialCocycleExtension,
    Mu2,
    ResidueUnits,
)
from .fields import Field, ParseError, field_from_name
from .ktheory import K2Coordinates
from .lattice import BilinearIncarnation, QuadraticForm, RootDatum
from .presets import preset


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


def parse_matrix(text: str, what: str = "matrix") -> tuple:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        raise ParseError(f"malformed {what}", text) from None
    return _int_matrix(data, what)


def _int_matrix(data, what: str = "matrix") -> tuple:
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ParseError(f"{what} must be a list of rows", json.dumps(data))
    for r in data:
        for x in r:
            if not isinstance(x, int) or isinstance(x, bool):
                raise ParseError(f"{what} entries must be integers", json.dumps(x))
    if len({len(r) for r in data}) > 1:
        raise ParseError(f"{what} rows have different lengths", json.dumps(data))
    return tuple(tuple(r) for r in data)


def _int_vector(data, what: str = "vector") -> tuple:
    if not isinstance(data, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in data):
        raise ParseError(f"{what} must be a list of integers", json.dumps(data))
    return tuple(data)


def _require(data: dict, key: str, what: str):
    if not isinstance(data, dict) or key not in data:
        raise ParseError(f"{what} is missing a field", key)
    return data[key]


def load_json(path_or_text: str):
    path = Path(path_or_text)
    text = path.read_text() if path.exists() else path_or_text
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        raise ParseError("malformed JSON", path_or_text) from None


# -- root data, forms, incarnations ---------------------------------------------

def rootdatum_to_json(rd: RootDatum) -> dict:
    return {"rank": rd.rank, "roots": [list(r) for r in rd.roots], "coroots": [list(c) for c in rd.coroots], "label": rd.label}


def rootdatum_from_json(data) -> RootDatum:
    if isinstance(data, str):
        try:
            return preset(data)
        except KeyError:
            raise ParseError("unknown preset", data) from None
    rank = _require(data, "rank", "root datum")
    roots = _int_matrix(_require(data, "roots", "root datum"), "roots")
    coroots = _int_matrix(_require(data, "coroots", "root datum"), "coroots")
    try:
        return RootDatum(rank, roots, coroots, data.get("label", ""))
    except ValueError as exc:
        raise ParseError(str(exc), json.dumps(data)) from None


def load_root_datum(ref: str) -> RootDatum:
    if ref.startswith("presets:"):
        try:
            return preset(ref)
        except KeyError:
            raise ParseError("unknown preset", ref) from None
    return rootdatum_from_json(load_json(ref))


def qform_to_json(q: QuadraticForm) -> dict:
    return {"rank": q.rank, "upper": {f"{i},{j}": c for (i, j), c in q.upper}}


def qform_from_json(data) -> QuadraticForm:
    rank = _require(data, "rank", "quadratic form")
    upper = {}
    for key, val in _require(data, "upper", "quadratic form").items():
        try:
            i, j = (int(k) for k in key.split(","))
        except ValueError:
            raise ParseError("quadratic form keys look like 'i,j'", key) from None
        if not isinstance(val, int):
            raise ParseError("quadratic form coefficients must be integers", json.dumps(val))
        upper[(i, j)] = val
    try:
        return QuadraticForm(rank, upper)
    except ValueError as exc:
        raise ParseError(str(exc), json.dumps(data)) from None


def incarnation_to_json(C: BilinearIncarnation) -> dict:
    return {"rank": C.rank, "matrix": [list(r) for r in C.matrix]}


def incarnation_from_json(data) -> BilinearIncarnation:
    mat = _int_matrix(_require(data, "matrix", "incarnation"), "incarnation matrix")
    rank = data.get("rank", len(mat))
    try:
        return BilinearIncarnation(rank, mat)
    except ValueError as exc:
        raise ParseError(str(exc), json.dumps(data)) from None


def incarnation_from_text(text: str) -> BilinearIncarnation:
    mat = parse_matrix(text, "incarnation matrix")
    if any(len(r) != len(mat) for r in mat):
        raise ParseError("incarnation matrix must be square", text)
    return BilinearIncarnation(len(mat), mat)


# -- coefficient groups, extensions, cochains -----------------------------------

def coeff_from_json(data) -> CoefficientGroup:
    kind = _require(data, "kind", "coefficient group")
    if kind == "Z":
        return IntegersAdditive()
    if kind == "mu2":
        return Mu2()
    field = field_from_name(_require(data, "field", "coefficient group"))
    if kind == "Fx":
        return FieldUnits(field)
    if kind == "resx":
        return ResidueUnits(field, field.parse_place(_require(data, "place", "coefficient group")))
    raise ParseError("unknown coefficient kind", str(kind))


def extension_to_json(E: MonomialCocycleExtension) -> dict:
    return {
        "rank": E.rank,
        "coeff": E.coeff.to_json(),
        "terms": [{"base": E.coeff.format(a), "form": [list(r) for r in b]} for a, b in E.terms],
    }


def extension_from_json(data) -> MonomialCocycleExtension:
    rank = _require(data, "rank", "extension")
    coeff = coeff_from_json(_require(data, "coeff", "extension"))
    terms = []
    for t in _require(data, "terms", "extension"):
        base = coeff.parse(str(_require(t, "base", "extension term")))
        terms.append((base, _int_matrix(_require(t, "form", "extension term"), "form")))
    try:
        return MonomialCocycleExtension(rank, coeff, tuple(terms))
    except ValueError as exc:
        raise ParseError(str(exc), json.dumps(data)) from None


def cochain_to_json(phi: MonomialCochain) -> dict:
    return {
        "rank": phi.rank,
        "coeff": phi.coeff.to_json(),
        "terms": [
            {"base": phi.coeff.format(a), "form": [list(r) for r in s], "linear": list(lin)} for a, s, lin in phi.terms
        ],
    }


def cochain_from_json(data) -> MonomialCochain:
    rank = _require(data, "rank", "cochain")
    coeff = coeff_from_json(_require(data, "coeff", "cochain"))
    terms = []
    for t in _require(data, "terms", "cochain"):
        base = coeff.parse(str(_require(t, "base", "cochain term")))
        form = _int_matrix(t.get("form", []), "form")
        lin = _int_vector(t.get("linear", []), "linear part")
        terms.append((base, form, lin))
    try:
        return MonomialCochain(rank, coeff, tuple(terms))
    except ValueError as exc:
        raise ParseError(str(exc), json.dumps(data)) from None


# -- triples ------------------------------------------------------------------

def triple_to_json(T: BDTriple) -> dict:
    fmt = T.field.format
    out = {
        "rootDatum": rootdatum_to_json(T.rd),
        "Q": qform_to_json(T.Q),
        "D": extension_to_json(T.D),
        "p": [list(r) for r in T.p.matrix],
        "phi": cochain_to_json(T.phi),
        "field": T.field.name,
    }
    if T.incarnation is not None:
        out["incarnation"] = incarnation_to_json(T.incarnation)
    if T.twists:
        out["twists"] = [{"x": list(x), "s": fmt(s)} for x, s in T.twists]
    if T.phi_twists:
        out["phiTwists"] = [{"base": fmt(b), "linear": list(lin)} for b, lin in T.phi_twists]
    return out


def triple_from_json(data) -> BDTriple:
    rd = rootdatum_from_json(_require(data, "rootDatum", "triple"))
    Q = qform_from_json(_require(data, "Q", "triple"))
    D = extension_from_json(_require(data, "D", "triple"))
    if not isinstance(D.coeff, FieldUnits):
        raise ParseError("D must have coefficients in F^x", json.dumps(data["D"]["coeff"]))
    field: Field = D.coeff.field
    p = _int_matrix(_require(data, "p", "triple"), "p")
    if p != rd.coroot_inclusion().matrix:
        raise ParseError("p must be the coroot inclusion of the root datum", json.dumps(data["p"]))
    phi = cochain_from_json(_require(data, "phi", "triple"))
    if Q.rank != rd.rank or D.rank != rd.rank or phi.rank != rd.semisimple_rank:
        raise ParseError("triple components have inconsistent ranks", json.dumps([Q.rank, D.rank, phi.rank]))
    inc = incarnation_from_json(data["incarnation"]) if "incarnation" in data else None
    twists = tuple((_int_vector(t["x"], "x"), field.parse(str(t["s"]))) for t in data.get("twists", []))
    phi_twists = tuple(
        (field.parse(str(t["base"])), _int_vector(t["linear"], "linear")) for t in data.get("phiTwists", [])
    )
    return BDTriple(rd, Q, D, phi, field, incarnation=inc, twists=twists, phi_twists=phi_twists)


# -- reports ------------------------------------------------------------------

def coords_to_json(c: K2Coordinates) -> dict:
    return c.to_json()


def ez_to_json(ez) -> dict:
    return {
        "Yprime": extension_to_json(ez.Yprime),
        "p": [list(r) for r in ez.p.matrix],
        "psi": cochain_to_json(ez.psi),
        "psiLinear": list(ez.psi_linear()) if ez.psi_linear() is not None else None,
    }


def report_to_json(r) -> dict:
    return {
        "exists": r.exists,
        "witness": cochain_to_json(r.witness) if r.witness is not None else None,
        "sectionShift": list(r.section_shift) if r.section_shift is not None else None,
        "obstruction": r.obstruction,
        "torsor_rank": r.torsor_rank,
        "torsion": list(r.torsion),
        "defect": list(r.defect),
    }


def residual_to_json(res) -> dict:
    return {
        "place": str(res.place),
        "split": res.is_split,
        "cocycle": extension_to_json(res.cocycle),
        "splitting": cochain_to_json(res.splitting) if res.splitting is not None else None,
    }
