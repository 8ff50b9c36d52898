"""Command line front end.

Usage::

    toricklt <command> [--input FILE|-] [--json|--text] [--seed N]
             [--boundary-support r1,r2,...] [--canonical-points z0,z1]

Input and output are JSON.  Rationals are written as ``"p/q"`` strings and the
point at infinity as ``"inf"``.  Exit codes: 0 computed, 1 selftest failure,
2 input error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import jsonschema

from . import diagquot, pdiv, torsing
from .errors import InvariantViolation, ToricError
from .exactlin import dot, farkas_certificate, frac, matvec, primitive
from .polycone import Cone, Polyhedron, hilbert_basis, unimodular_equivalence

COMMANDS = ("toric-analyze", "toric-discrepancy", "toric-resolve", "quotient-torus",
            "quotient-finite", "tvar-downgrade", "tvar-analyze", "selftest")

_RAT = {"oneOf": [{"type": "integer"},
                  {"type": "string", "pattern": r"^\s*-?\d+\s*(/\s*\d+\s*)?$"}]}
_INTVEC = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_RATVEC = {"type": "array", "items": _RAT, "minItems": 1}
_POINT = {"oneOf": [_RAT, {"type": "string", "enum": ["inf", "∞"]}]}

_TORIC = {
    "type": "object",
    "required": ["rays"],
    "properties": {
        "rank": {"type": "integer", "minimum": 1},
        "rays": {"type": "array", "items": _INTVEC, "minItems": 1},
        "boundary": {"type": "array", "items": _RAT},
        "vectors": {"type": "array", "items": _INTVEC},
        "seed_rays": {"type": "array", "items": _INTVEC},
    },
}
SCHEMAS = {
    "toric": _TORIC,
    "quotient": {
        "type": "object",
        "required": ["n"],
        "properties": {
            "n": {"type": "integer", "minimum": 1},
            "weights": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}},
            "finite": {"type": "array", "items": {
                "type": "object", "required": ["order", "weights"],
                "properties": {"order": {"type": "integer", "minimum": 2},
                               "weights": {"type": "array", "items": {"type": "integer"}}}}},
            "relations": {"type": "array", "items": {
                "type": "array", "minItems": 2, "maxItems": 2, "items": {"type": "string"}}},
        },
    },
    "finite": dict(_TORIC, required=["rays", "extra"], properties=dict(
        _TORIC["properties"], extra={"type": "array", "items": _RATVEC, "minItems": 1})),
    "downgrade": dict(_TORIC, required=["rays", "sublattice"], properties=dict(
        _TORIC["properties"], sublattice={"type": "array", "items": _INTVEC})),
    "pdivisor": {
        "type": "object",
        "required": ["rank", "slices"],
        "properties": {
            "rank": {"type": "integer", "minimum": 1},
            "tail_rays": {"type": "array", "items": _INTVEC},
            "slices": {"type": "array", "items": {
                "type": "object", "required": ["point"],
                "properties": {"point": _POINT,
                               "vertices": {"type": "array", "items": _RATVEC},
                               "empty": {"type": "boolean"}}}},
            "weights": {"type": "array", "items": _RATVEC},
        },
    },
}
_KIND = {"toric-analyze": "toric", "toric-discrepancy": "toric", "toric-resolve": "toric",
         "quotient-torus": "quotient", "quotient-finite": "finite",
         "tvar-downgrade": "downgrade", "tvar-analyze": "pdivisor"}


class SchemaError(ToricError):
    def __init__(self, errors: list[str]):
        super().__init__("; ".join(errors))
        self.errors = errors


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_FRAC_RE = re.compile(r"^-?\d+/\d+$")


def to_plain(x: Any) -> Any:
    """JSON-ready copy: Fractions become ``"p/q"``, infinity becomes ``"inf"``."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        if x == math.inf:
            return "inf"
        raise TypeError("floating point values are not serialized")
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    return x


def from_plain(x: Any) -> Any:
    if isinstance(x, str) and _FRAC_RE.match(x):
        return Fraction(x)
    if isinstance(x, dict):
        return {k: from_plain(v) for k, v in x.items()}
    if isinstance(x, list):
        return [from_plain(v) for v in x]
    return x


def _rat(x) -> Fraction:
    return Fraction(x.replace(" ", "")) if isinstance(x, str) else frac(x)


@dataclass
class CertificateDocument:
    command: str
    input: dict
    q_gorenstein: Optional[dict] = None
    klt_type: Optional[dict] = None
    discrepancies: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    result: dict = field(default_factory=dict)

    def __post_init__(self):
        # normalise so that a JSON round trip is the identity
        for name in ("input", "q_gorenstein", "klt_type", "discrepancies", "notes", "result"):
            setattr(self, name, from_plain(to_plain(getattr(self, name))))

    def to_dict(self) -> dict:
        return to_plain({"command": self.command, "input": self.input,
                         "q_gorenstein": self.q_gorenstein, "klt_type": self.klt_type,
                         "discrepancies": self.discrepancies, "notes": self.notes,
                         "result": self.result})

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CertificateDocument":
        d = json.loads(text)
        return cls(**d)


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

@dataclass
class JobSpec:
    command: str
    document: dict
    flags: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)


def _validate(kind: str, doc: Any) -> list[str]:
    v = jsonschema.Draft7Validator(SCHEMAS[kind])
    errs = []
    for e in sorted(v.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        errs.append(f"{path}: {e.message}")
    return errs


def _check_vectors(doc, key, notes, errs, primitivize=False, rank=None):
    vecs = doc.get(key, [])
    out = []
    for i, v in enumerate(vecs):
        if rank is not None and len(v) != rank:
            errs.append(f"{key}/{i}: length {len(v)} differs from rank {rank}")
            continue
        if not any(v):
            errs.append(f"{key}/{i}: zero vector")
            continue
        p = list(primitive(v))
        if primitivize and p != list(v):
            notes.append(f"{key}/{i}: {list(v)} replaced by primitive {p}")
        out.append(p)
    return out


def parse_input(command: str, document: Any, flags: Optional[dict] = None) -> JobSpec:
    """Validate ``document`` for ``command``; raises :class:`SchemaError`."""
    if command not in COMMANDS:
        raise SchemaError([f"<root>: unknown command {command!r}"])
    flags = dict(flags or {})
    if command == "selftest":
        return JobSpec(command, document or {}, flags)
    kind = _KIND[command]
    errs = _validate(kind, document)
    if errs:
        raise SchemaError(errs)
    doc = json.loads(json.dumps(document))
    notes: list[str] = []
    if kind in ("toric", "finite", "downgrade"):
        rank = doc.get("rank", len(doc["rays"][0]))
        doc["rank"] = rank
        doc["rays"] = _check_vectors(doc, "rays", notes, errs, True, rank)
        if "boundary" in doc and len(doc["boundary"]) != len(document["rays"]):
            errs.append("boundary: needs one coefficient per ray")
        for key in ("vectors", "seed_rays", "sublattice"):
            if key in doc:
                doc[key] = _check_vectors(doc, key, notes, errs, False, rank)
        for i, g in enumerate(doc.get("extra", [])):
            if len(g) != rank:
                errs.append(f"extra/{i}: length {len(g)} differs from rank {rank}")
    elif kind == "quotient":
        n = doc["n"]
        for i, w in enumerate(doc.get("weights", [])):
            if len(w) != n:
                errs.append(f"weights/{i}: length {len(w)} differs from n={n}")
        for i, f in enumerate(doc.get("finite", [])):
            if len(f["weights"]) != n:
                errs.append(f"finite/{i}/weights: length differs from n={n}")
    elif kind == "pdivisor":
        r = doc["rank"]
        doc["tail_rays"] = _check_vectors(doc, "tail_rays", notes, errs, True, r)
        for i, s in enumerate(doc["slices"]):
            if not s.get("empty") and not s.get("vertices"):
                errs.append(f"slices/{i}: give vertices or set empty")
            for j, v in enumerate(s.get("vertices", [])):
                if len(v) != r:
                    errs.append(f"slices/{i}/vertices/{j}: length differs from rank {r}")
    if errs:
        raise SchemaError(errs)
    for key in ("boundary_support",):
        if flags.get(key) is not None and kind == "toric":
            bad = [i for i in flags[key] if not 0 <= i < len(doc["rays"])]
            if bad:
                raise SchemaError([f"--boundary-support: ray indices {bad} out of range"])
    return JobSpec(command, doc, flags, notes)


# ---------------------------------------------------------------------------
# reference comparison for the worked example cone
# ---------------------------------------------------------------------------

REFERENCE_RAYS = ((0, 0, 1), (0, 1, 2), (1, 0, 1), (1, 1, 1))
REFERENCE_CONE = Cone.from_rays(REFERENCE_RAYS)
_REF_D1 = (0, 0, 1)
_REF_EXCEPTIONAL = (1, 1, 2)


def _reference_map(X: torsing.ToricAffine):
    if X.rank != 3 or len(X.rays) != 4:
        return None
    return unimodular_equivalence(X.sigma, REFERENCE_CONE)


def _is_reference_boundary(U, X, boundary) -> bool:
    half = Fraction(1, 2)
    want = tuple(half if tuple(matvec(U, v)) == _REF_D1 else 0 for v in X.rays)
    return tuple(boundary) == want


def reference_notes(X, boundary, cartier_index, discrepancies=()) -> list[str]:
    """Flag disagreements with the reference values stated for the example cone."""
    U = _reference_map(X)
    if U is None or not _is_reference_boundary(U, X, boundary):
        return []
    notes = []
    if cartier_index is not None and cartier_index != 1:
        notes.append(f"reference value: K+1/2*D1 is called Cartier; exact Cartier index is "
                     f"{cartier_index}")
    for v, a in discrepancies:
        if tuple(matvec(U, v)) == _REF_EXCEPTIONAL and a != 2:
            notes.append(f"reference value: log discrepancy 2 at the ray through (1,1,2); "
                         f"exact value is {a.numerator}/{a.denominator}")
    return notes


# ---------------------------------------------------------------------------
# command implementations
# ---------------------------------------------------------------------------

def _ray_index_map(doc, X):
    return [X.ray_index(tuple(v)) for v in doc["rays"]]


def _qg_section(X, boundary=None):
    verdict = torsing.q_gorenstein_witness(X, boundary)
    if verdict.feasible:
        return {"feasible": True, "witness": list(verdict.witness.m),
                "cartier_index": verdict.witness.cartier_index}, verdict
    return {"feasible": False, "certificate": list(verdict.certificate),
            "certificate_rays": [list(r) for r in X.rays]}, verdict


def _klt_section(X, support):
    cert = torsing.klt_type_certificate(X, support)
    if cert is None:
        P = torsing.klt_lp_problem(X, support)
        far = farkas_certificate(P)
        sec = {"feasible": False}
        if far is not None:
            sec["farkas"] = {"equalities": list(far.equalities), "weak": list(far.weak),
                             "strict": list(far.strict)}
        return sec, None
    return {
        "feasible": True,
        "boundary": [[list(v), b] for v, b in zip(X.rays, cert.boundary)],
        "witness": {"m": list(cert.witness.m), "cartier_index": cert.witness.cartier_index},
        "ray_log_discrepancies": [[list(v), a] for v, a in
                                  zip(X.rays, cert.ray_log_discrepancies)],
    }, cert


def _toric_from_doc(doc):
    return torsing.ToricAffine.from_rays(doc["rays"], doc["rank"])


def _support(job, X):
    sup = job.flags.get("boundary_support")
    if sup is None:
        return None
    idx = _ray_index_map(job.document, X)
    return sorted({idx[i] for i in sup})


def _boundary_from_doc(doc, X):
    if "boundary" not in doc:
        return None
    b = [Fraction(0)] * len(X.rays)
    for v, c in zip(doc["rays"], doc["boundary"]):
        b[X.ray_index(tuple(v))] = _rat(c)
    return tuple(b)


def _analyze_toric(X, support, boundary=None):
    """Shared q-Gorenstein and klt sections for a toric variety."""
    qg, _ = _qg_section(X, boundary)
    klt, cert = _klt_section(X, support)
    notes = list(cert.notes) if cert else []
    if cert is not None:
        notes += reference_notes(X, cert.boundary, cert.witness.cartier_index)
    return qg, klt, cert, notes


def cmd_toric_analyze(job):
    X = _toric_from_doc(job.document)
    qg, klt, cert, notes = _analyze_toric(X, _support(job, X))
    result = {"rays": [list(r) for r in X.rays],
              "canonical_class": list(torsing.canonical_class(X)),
              "smooth": X.sigma.is_smooth}
    return CertificateDocument(job.command, job.document, qg, klt, [], job.notes + notes, result)


def _pair_for(doc, X, support):
    """Boundary and witness from the input, or the klt certificate."""
    notes = []
    b = _boundary_from_doc(doc, X)
    if b is None:
        cert = torsing.klt_type_certificate(X, support)
        if cert is None:
            raise ToricError("no klt boundary exists on the requested support")
        notes.append("no boundary given; using the klt certificate boundary")
        return cert.boundary, cert.witness, notes
    verdict = torsing.q_gorenstein_witness(X, b)
    if not verdict.feasible:
        raise ToricError("K + B is not Q-Cartier for the given boundary")
    return b, verdict.witness, notes


def cmd_toric_discrepancy(job):
    doc = job.document
    X = _toric_from_doc(doc)
    b, w, notes = _pair_for(doc, X, _support(job, X))
    vecs = doc.get("vectors") or list(hilbert_basis(X.sigma))
    disc = [(tuple(v), torsing.log_discrepancy(X, b, w, v)) for v in vecs]
    notes += reference_notes(X, b, w.cartier_index, disc)
    qg = {"feasible": True, "witness": list(w.m), "cartier_index": w.cartier_index}
    klt = {"boundary": [[list(v), c] for v, c in zip(X.rays, b)],
           "klt": all(a > 0 for _, a in disc) and all(0 <= c < 1 for c in b)}
    return CertificateDocument(job.command, doc, qg, klt,
                               [[list(v), a] for v, a in disc], job.notes + notes,
                               {"rays": [list(r) for r in X.rays]})


def cmd_toric_resolve(job):
    doc = job.document
    X = _toric_from_doc(doc)
    res = torsing.resolve(X, doc.get("seed_rays", ()))
    b, w, notes = _pair_for(doc, X, _support(job, X))
    disc = [(e, torsing.log_discrepancy(X, b, w, e)) for e in res.exceptional]
    notes += reference_notes(X, b, w.cartier_index, disc)
    result = {"fan": [[list(r) for r in C.rays] for C in res.fan],
              "exceptional": [list(e) for e in res.exceptional],
              "boundary": [[list(v), c] for v, c in zip(X.rays, b)]}
    return CertificateDocument(job.command, doc, None, None,
                               [[list(v), a] for v, a in disc], job.notes + notes, result)


def cmd_quotient_torus(job):
    doc = job.document
    A = diagquot.WeightAction(doc["n"], tuple(tuple(w) for w in doc.get("weights", [])),
                              tuple((f["order"], tuple(f["weights"])) for f in doc.get("finite", [])))
    P = diagquot.quotient_presentation(A)
    X = P.quotient
    qg, klt, cert, notes = _analyze_toric(X, None)
    dmap = []
    for i, entry in enumerate(P.coordinate_divisor_map):
        dmap.append(None if entry is None else
                    {"coordinate": i + 1, "ray": list(X.rays[entry[0]]), "multiplicity": entry[1]})
    result = {"generators": [list(g) for g in P.invariant_generators],
              "generator_names": [P.generator_name(i) for i in range(len(P.invariant_generators))],
              "character_basis": [list(r) for r in P.character_basis],
              "quotient_rays": [list(r) for r in X.rays],
              "coordinate_divisor_map": dmap}
    if "relations" in doc:
        ok = diagquot.verify_binomial_relations(P, doc["relations"])
        result["relations"] = [[a, b, v] for (a, b), v in zip(doc["relations"], ok)]
    return CertificateDocument(job.command, doc, qg, klt, [], job.notes + notes, result)


def cmd_quotient_finite(job):
    doc = job.document
    X = _toric_from_doc(doc)
    R = diagquot.LatticeRefinement(X.sigma, tuple(tuple(_rat(x) for x in g) for g in doc["extra"]))
    b, w, notes = _pair_for(doc, X, _support(job, X))
    up = torsing.ToricPair(X, b, w)
    down, klt = diagquot.finite_quotient(R, up)
    samples = doc.get("vectors") or list(hilbert_basis(down.toric.sigma))
    checks = diagquot.riemann_hurwitz_check(R, up, samples)
    if not all(c.ok for c in checks):
        raise InvariantViolation("Riemann-Hurwitz relation failed")
    qg = None
    if down.witness is not None:
        qg = {"feasible": True, "witness": list(down.witness.m),
              "cartier_index": down.witness.cartier_index}
    result = {"index": R.index,
              "sup_basis": [list(r) for r in R.sup_basis],
              "downstairs_rays": [list(r) for r in down.toric.rays],
              "downstairs_boundary": [[list(v), c] for v, c in zip(down.toric.rays, down.boundary)],
              "ramification": [[list(v), R.ramification(v)] for v in down.toric.rays],
              "klt": klt,
              "riemann_hurwitz": [{"w": list(c.w), "r": c.r, "a_down": c.a_down,
                                   "a_up": c.a_up, "ok": c.ok} for c in checks]}
    return CertificateDocument(job.command, doc, qg, {"klt": klt}, [], job.notes + notes, result)


def pdivisor_to_doc(D: pdiv.PDivisorC1) -> dict:
    slices = []
    for z, P in D.slices:
        entry = {"point": "inf" if z == pdiv.INF else z}
        if P.is_empty:
            entry["empty"] = True
        else:
            entry["vertices"] = [list(v) for v in P.vertices]
        slices.append(entry)
    return {"rank": D.rank, "tail_rays": [list(r) for r in D.tail.rays], "slices": slices}


def pdivisor_from_doc(doc: dict) -> pdiv.PDivisorC1:
    r = doc["rank"]
    tail = Cone.from_rays(doc["tail_rays"], r) if doc.get("tail_rays") else Cone.zero(r)
    slices = {}
    for s in doc["slices"]:
        z = pdiv.parse_point(s["point"] if not isinstance(s["point"], str) or s["point"] in
                             ("inf", "∞") else _rat(s["point"]))
        if s.get("empty"):
            slices[z] = None
        else:
            slices[z] = Polyhedron.from_generators(
                [[_rat(x) for x in v] for v in s["vertices"]], tail)
    return pdiv.PDivisorC1.build(tail, slices)


def _key_plain(key):
    if key[0] == "h":
        return {"kind": "horizontal", "ray": key[1]}
    return {"kind": "vertical", "point": "inf" if key[1] == pdiv.INF else key[1],
            "vertex": list(key[2])}


def cmd_tvar_downgrade(job):
    doc = job.document
    X = _toric_from_doc(doc)
    dg = pdiv.downgrade_with_map(X, doc["sublattice"])
    result = {"pdivisor": pdivisor_to_doc(dg.pdiv), "q": list(dg.q), "splitting": list(dg.s),
              "sublattice_basis": [list(r) for r in dg.basis],
              "ray_labels": [[list(v), _key_plain(k)] for v, k in zip(X.rays, dg.labels)]}
    qg, _ = _qg_section(X)
    tv = pdiv.q_gorenstein_tvar(dg.pdiv)
    result["tvar_q_gorenstein"] = {"feasible": tv.feasible, "cartier_index":
                                   tv.witness.cartier_index if tv.witness else None}
    return CertificateDocument(job.command, doc, qg, None, [], job.notes, result)


def cmd_tvar_analyze(job):
    doc = job.document
    D = pdivisor_from_doc(doc)
    kp = job.flags.get("canonical_points") or (0, pdiv.INF)
    proper, why = pdiv.is_proper(D)
    result: dict = {"proper": proper, "reason": why, "locus": "A1" if D.locus_is_affine else "P1"}
    notes = list(job.notes)
    qg = None
    if proper:
        vr = pdiv.ver_ray_sets(D)
        result["vertical"] = [{"point": "inf" if z == pdiv.INF else z, "vertex": list(v), "mu": mu}
                              for z, v, mu in vr.vertical]
        result["horizontal"] = [list(D.tail.rays[i]) for i in vr.horizontal]
        result["canonical"] = [[_key_plain(k), c] for k, c in pdiv.canonical_rep(D, kp).coeffs]
        verdict = pdiv.q_gorenstein_tvar(D, None, kp)
        if verdict.feasible:
            w = verdict.witness
            qg = {"feasible": True, "witness": list(w.m), "cartier_index": w.cartier_index,
                  "f_divisor": [["inf" if z == pdiv.INF else z, c] for z, c in w.f_divisor]}
            if not D.locus_is_affine:
                cert = pdiv.quotient_klt_certificate(D, None, w, kp)
                result["quotient_klt"] = {
                    "m_check": cert.m_check, "degree": cert.degree,
                    "degree_check": cert.degree_check,
                    "coefficient_check": cert.coefficient_check, "passed": cert.passed,
                    "B_Y": [["inf" if z == pdiv.INF else z, c] for z, c in cert.B_Y]}
                notes += list(cert.notes)
        else:
            qg = {"feasible": False, "certificate": list(verdict.certificate)}
    evals = []
    for m in doc.get("weights", []):
        m = [_rat(x) for x in m]
        ev = pdiv.evaluate(D, m)
        entry = {"m": m, "degree": ev.degree,
                 "coefficients": [["inf" if z == pdiv.INF else z, c] for z, c in ev.coefficients]}
        if not D.locus_is_affine and all(x.denominator == 1 for x in m):
            entry["graded_dimension"] = pdiv.graded_dimension(D, m)
        evals.append(entry)
    result["evaluations"] = evals
    return CertificateDocument(job.command, doc, qg, None, [], notes, result)


def cmd_selftest(job):
    from . import acceptance
    rows = acceptance.run_all(seed=job.flags.get("seed", 0))
    result = {"criteria": [{"name": n, "passed": ok, "detail": d} for n, ok, d in rows],
              "all_passed": all(ok for _, ok, _ in rows)}
    return CertificateDocument(job.command, {}, None, None, [], [], result)


_DISPATCH = {
    "toric-analyze": cmd_toric_analyze, "toric-discrepancy": cmd_toric_discrepancy,
    "toric-resolve": cmd_toric_resolve, "quotient-torus": cmd_quotient_torus,
    "quotient-finite": cmd_quotient_finite, "tvar-downgrade": cmd_tvar_downgrade,
    "tvar-analyze": cmd_tvar_analyze, "selftest": cmd_selftest,
}


def run(job: JobSpec) -> CertificateDocument:
    try:
        return _DISPATCH[job.command](job)
    except (InvariantViolation, ToricError):
        raise
    except AssertionError as e:
        raise InvariantViolation(str(e)) from e


# ---------------------------------------------------------------------------
# entry point
# ---------------------------------------------------------------------------

def _text(x: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(x, dict):
        lines = []
        for k in sorted(x):
            v = x[k]
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_inline(v)}")
        return "\n".join(lines)
    if isinstance(x, list):
        return "\n".join(f"{pad}- {_inline(v)}" if _flat(v) else f"{pad}-\n{_text(v, indent + 1)}"
                         for v in x)
    return pad + _inline(x)


def _flat(v) -> bool:
    if isinstance(v, dict):
        return False
    if isinstance(v, list):
        return all(_flat(u) for u in v) and not any(isinstance(u, list) and
                                                    any(isinstance(w, list) for w in u) for u in v)
    return True


def _inline(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_inline(u) for u in v) + "]"
    return str(v)


def _parse_ints(s: str) -> list[int]:
    return [int(x) for x in s.split(",") if x.strip()]


def _parse_points(s: str):
    parts = [p.strip() for p in s.split(",")]
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("expected two points z0,z1")
    return tuple(pdiv.parse_point(p if p in ("inf", "∞") else Fraction(p)) for p in parts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toricklt", description="Exact klt certificates for "
                                "toric and complexity-one quotients.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--input", default="-", help="JSON input file, or - for stdin")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default="json")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--boundary-support", type=_parse_ints, default=None,
                   help="0-based indices of input rays allowed in the boundary")
    p.add_argument("--canonical-points", type=_parse_points, default=None,
                   help="points z0,z1 with K_P1 = -[z0]-[z1]")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    flags = {"seed": args.seed, "boundary_support": args.boundary_support,
             "canonical_points": args.canonical_points}
    try:
        if args.command == "selftest":
            document = {}
        else:
            text = sys.stdin.read() if args.input == "-" else open(args.input).read()
            document = json.loads(text)
        job = parse_input(args.command, document, flags)
        doc = run(job)
    except SchemaError as e:
        print(json.dumps({"errors": e.errors}, indent=2), file=sys.stderr)
        return 2
    except InvariantViolation as e:
        print(json.dumps({"invariant_violation": str(e)}), file=sys.stderr)
        return 3
    except (ToricError, json.JSONDecodeError, OSError) as e:
        print(json.dumps({"errors": [str(e)]}, indent=2), file=sys.stderr)
        return 2
    if args.fmt == "text":
        print(_text(doc.to_dict()))
    else:
        sys.stdout.write(doc.to_json())
    if args.command == "selftest" and not doc.result["all_passed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
