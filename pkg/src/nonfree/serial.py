"""JSON-ready payloads for rings, matrices, modules and certificates, and their inverses.

Polynomials are stored as text in the polynomial syntax; every payload is plain
lists/dicts/strings/ints so that a report can be re-verified from its text alone.
"""

from __future__ import annotations

import hashlib
import json

from .algebra import GF, QQ, PolyMatrix, PolyRing
from .groebner import Ideal
from .modules import ModulePresentation, QuotientRing
from .polytext import parse_polynomial


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def digest(obj) -> str:
    text = obj if isinstance(obj, str) else canonical_json(obj)
    return "sha256:" + hashlib.sha256(text.encode("utf-8")).hexdigest()


def ring_payload(R: QuotientRing) -> dict:
    P = R.poly_ring
    return {"char": P.field.characteristic, "vars": list(P.names), "order": P.order.name,
            "ideal": R.ideal.to_strings()}


def ring_from_payload(d: dict) -> QuotientRing:
    field = QQ if d["char"] == 0 else GF(d["char"])
    P = PolyRing(field, d["vars"], d.get("order", "degrevlex"))
    return QuotientRing(P, [parse_polynomial(g, P) for g in d["ideal"]])


def poly_from(R, text: str):
    P = R.poly_ring
    return R.reduce(parse_polynomial(text, P))


def polys_from(R, texts):
    return [poly_from(R, t) for t in texts]


def ideal_from(R: QuotientRing, texts) -> Ideal:
    return R.ideal_of(polys_from(R, texts))


def matrix_payload(d: PolyMatrix) -> list[list[str]]:
    return [[str(a) for a in r] for r in d.rows]


def matrix_from(R: QuotientRing, rows, ncols: int | None = None) -> PolyMatrix:
    return PolyMatrix(R, [polys_from(R, r) for r in rows], ncols)


def module_payload(M: ModulePresentation) -> dict:
    return {"ngens": M.ngens, "nrels": M.nrels, "matrix": matrix_payload(M.matrix)}


def module_from(R: QuotientRing, d: dict) -> ModulePresentation:
    return ModulePresentation(R, matrix_from(R, d["matrix"], d["nrels"]))


def cols_payload(cols) -> list[list[str]]:
    return [[str(a) for a in c] for c in cols]


def certificate_payload(cert) -> dict:
    """Blocks and exactness evidence of a PeriodicResolutionCertificate.

    The ring is stored alongside so that the record is self-contained."""
    return {
        "kind": "periodic_certificate",
        "ring": ring_payload(cert.ring),
        "period": cert.period,
        "blocks": [{"shape": [b.nrows, b.ncols], "rows": matrix_payload(b)} for b in cert.blocks],
        "spots": [{"side": s.side, "spot": s.spot, "kernel": cols_payload(s.kernel),
                   "lifts": cols_payload(s.lifts)} for s in cert.spots],
    }


def certificate_from(d: dict):
    from .totref import ExactnessSpot, PeriodicResolutionCertificate

    R = ring_from_payload(d["ring"])
    blocks = [matrix_from(R, b["rows"], b["shape"][1]) for b in d["blocks"]]
    spots = [ExactnessSpot(s["side"], s["spot"], [tuple(polys_from(R, k)) for k in s["kernel"]],
                           [tuple(polys_from(R, l)) for l in s["lifts"]]) for s in d["spots"]]
    return PeriodicResolutionCertificate(R, d["period"], blocks, spots)


def trace_payload(trace) -> dict:
    R = trace.target.ring
    return {
        "target": trace.target.to_strings(),
        "reflexivity": trace.reflexivity,
        "iterations": len(trace.steps),
        "converged": trace.converged,
        "steps": [{
            "module": module_payload(s.module),
            "locus": s.locus.generators(),
            "q": s.q.to_strings(),
            "x": str(s.x),
            "next_locus": s.next_locus.generators(),
            "strict_descent": s.strict_descent,
            "contains_target": s.contains_target,
        } for s in trace.steps],
        "final_module": module_payload(trace.final_module) if trace.final_module else None,
        "final_locus": trace.final_locus.generators() if trace.final_locus else None,
    }
