"""Report format and payload re-verification.

A report is UTF-8 text::

    report-format: 1
    command: <normalized command line>
    input-digest: sha256:<hex>
    items: <count>

    [item <name>]
    verdict: PASS | FAIL | UNSUPPORTED
    evidence: <canonical JSON object on one line, always with a "kind" key>

    ...
    summary: PASS=<n> FAIL=<n> UNSUPPORTED=<n>
    # timings
    <name>: <seconds>

Items appear sorted by name.  Everything before the ``# timings`` line is the report
body, which is deterministic for fixed input; the timings section is not.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .constructions import (
    ConstructionError,
    Item,
    certify_indecomposable,
    omega_mod_x,
    pf_block,
    pf_ideal,
)
from .groebner import Ideal, is_groebner
from .loci import (
    grade_positive,
    is_prime_restricted,
    membership,
    nonfree_locus,
    w0_witness_ideal,
)
from .modules import (
    ModulePresentation,
    annihilator,
    canonical_module,
    ext,
    module_dim_depth,
    tor,
)
from .serial import (
    canonical_json,
    certificate_from,
    digest,
    ideal_from,
    matrix_from,
    module_from,
    module_payload,
    poly_from,
    ring_from_payload,
)
from .totref import (
    TotalReflexivityCertificate,
    certify_total_reflexivity_periodic,
    check_semidualizing,
    check_totally_c_reflexive_bounded,
    verify_periodic_certificate,
)

FORMAT_VERSION = "1"
VERDICTS = ("PASS", "FAIL", "UNSUPPORTED")


class ReportFormatError(ValueError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Report:
    command: str
    input_digest: str
    items: list = field(default_factory=list)

    def sorted_items(self) -> list:
        return sorted(self.items, key=lambda it: it.name)

    def counts(self) -> dict:
        out = {v: 0 for v in VERDICTS}
        for it in self.items:
            out[it.verdict] += 1
        return out

    @property
    def all_pass(self) -> bool:
        return bool(self.items) and all(it.verdict == "PASS" for it in self.items)

    def body(self) -> str:
        lines = [f"report-format: {FORMAT_VERSION}", f"command: {self.command}",
                 f"input-digest: {self.input_digest}", f"items: {len(self.items)}", ""]
        for it in self.sorted_items():
            lines.append(f"[item {it.name}]")
            lines.append(f"verdict: {it.verdict}")
            lines.append(f"evidence: {canonical_json(it.evidence)}")
            lines.append("")
        c = self.counts()
        lines.append("summary: " + " ".join(f"{v}={c[v]}" for v in VERDICTS))
        return "\n".join(lines) + "\n"

    def render(self, timings: bool = True) -> str:
        text = self.body()
        if timings:
            text += "# timings\n" + "".join(f"{it.name}: {it.seconds:.4f}\n" for it in self.sorted_items())
        return text


def report_body(text: str) -> str:
    """The deterministic part of a rendered report."""
    head, sep, _ = text.partition("# timings\n")
    return head


def parse_report(text: str) -> Report:
    lines = report_body(text).splitlines()
    header = {}
    items = []
    cur = None
    for no, line in enumerate(lines, 1):
        if not line.strip():
            continue
        if line.startswith("[item ") and line.endswith("]"):
            cur = {"name": line[6:-1], "line": no}
            items.append(cur)
            continue
        key, sep, value = line.partition(": ")
        if not sep:
            raise ReportFormatError(f"expected 'key: value', got {line!r}", no)
        if cur is None or key == "summary":
            header[key] = value
            continue
        if key == "verdict":
            if value not in VERDICTS:
                raise ReportFormatError(f"unknown verdict {value!r}", no)
            cur["verdict"] = value
        elif key == "evidence":
            try:
                cur["evidence"] = json.loads(value)
            except json.JSONDecodeError as exc:
                raise ReportFormatError(f"bad evidence JSON: {exc.msg}", no) from None
        else:
            raise ReportFormatError(f"unknown item field {key!r}", no)
    for key in ("report-format", "command", "input-digest"):
        if key not in header:
            raise ReportFormatError(f"missing header field {key!r}", 1)
    if header["report-format"] != FORMAT_VERSION:
        raise ReportFormatError(f"unsupported report format {header['report-format']!r}", 1)
    out = Report(header["command"], header["input-digest"])
    for d in items:
        if "verdict" not in d or "evidence" not in d:
            raise ReportFormatError(f"item {d['name']!r} lacks verdict or evidence", d["line"])
        out.items.append(Item(d["name"], d["verdict"] == "PASS", d["evidence"], d["verdict"]))
    if "items" in header and int(header["items"]) != len(out.items):
        raise ReportFormatError("item count does not match the header", 1)
    return out


# ---------------------------------------------------------------------------
# rechecking
#
# Each checker rebuilds the objects named by a payload, recomputes (or independently
# verifies) the recorded claims, and returns (passed, notes).  ``passed`` is true
# exactly when the claims are reproduced and the item's pass condition holds.

_CHECKERS = {}


def _checker(kind):
    def wrap(fn):
        _CHECKERS[kind] = fn
        return fn

    return wrap


def _gbs(J: Ideal) -> list[str]:
    return J.to_strings()


def _same(claims: dict, got: dict) -> list[str]:
    return [k for k in claims if claims[k] != got.get(k)]


def _verdict(mismatch: list[str], condition: bool, notes: dict | None = None):
    notes = dict(notes or {})
    if mismatch:
        notes["mismatch"] = mismatch
    return not mismatch and bool(condition), notes


@_checker("intersection")
def _check_intersection(ev):
    R = ring_from_payload(ev["ring"])
    P = R.poly_ring
    a = Ideal(P, [poly_from(P, g) for g in ev["a"]])
    b = Ideal(P, [poly_from(P, g) for g in ev["b"]])
    inter = a.intersect(b)
    target = Ideal(P, [poly_from(P, g) for g in ev["target"]])
    return _verdict(_same({"intersection": ev["intersection"]}, {"intersection": _gbs(inter)}),
                    inter == target)


@_checker("dim_depth")
def _check_dim_depth(ev):
    R = ring_from_payload(ev["ring"])
    d, depth = module_dim_depth(module_from(R, ev["module"]))
    return _verdict(_same({"dim": ev["dim"], "depth": ev["depth"]}, {"dim": d, "depth": depth}),
                    [d, depth] == ev["expected"])


@_checker("minimal_primes")
def _check_minimal_primes(ev):
    """Independent of the splitter: the claimed ideals are prime, pairwise incomparable,
    and their intersection has the same radical as the ideal."""
    if "primes" not in ev:
        return False, {"note": "no primes recorded"}
    R = ring_from_payload(ev["ring"])
    P = R.poly_ring
    I = Ideal(P, [poly_from(P, g) for g in ev["ideal"]])
    primes = [Ideal(P, [poly_from(P, g) for g in q]) for q in ev["primes"]]
    bad = [i for i, q in enumerate(primes) if is_prime_restricted(q) != "prime"]
    comparable = [(i, j) for i, q in enumerate(primes) for j, r in enumerate(primes) if i != j and q.issubset(r)]
    inter = primes[0] if primes else Ideal(P, [1])
    for q in primes[1:]:
        inter = inter.intersect(q)
    mismatch = []
    if bad:
        mismatch.append("not prime: " + ", ".join(map(str, bad)))
    if comparable:
        mismatch.append("comparable primes")
    if not inter.locus_equal(I):
        mismatch.append("intersection radical differs")
    expected = sorted(tuple(sorted(Ideal(P, [poly_from(P, g) for g in q]).to_strings())) for q in ev["expected"])
    got = sorted(tuple(sorted(q.to_strings())) for q in primes)
    return _verdict(mismatch, got == expected)


@_checker("periodic_certificate")
def _check_periodic(ev):
    if "blocks" not in ev:
        return False, {"note": ev.get("not_found", "no certificate recorded")}
    cert = certificate_from(ev)
    ok, msg = verify_periodic_certificate(cert)
    mismatch = [] if ok else [msg]
    if "module" in ev:
        # the certificate must be the one the module actually produces
        M = module_from(cert.ring, ev["module"])
        fresh = certify_total_reflexivity_periodic(M, ev.get("max_period", max(cert.period, 1)))
        if not isinstance(fresh, TotalReflexivityCertificate) or fresh.periodic.period != cert.period \
                or [b.rows for b in fresh.periodic.blocks] != [b.rows for b in cert.blocks]:
            mismatch.append("blocks differ from the module's periodic resolution")
    expected = ev.get("expected_period")
    return _verdict(mismatch, expected is None or cert.period == expected)


@_checker("nonfree_membership")
def _check_nonfree_membership(ev):
    R = ring_from_payload(ev["ring"])
    L = nonfree_locus(module_from(R, ev["module"]))
    p = ideal_from(R, ev["prime"])
    return _verdict(_same({"nonfree_ideal": ev["nonfree_ideal"]}, {"nonfree_ideal": L.generators()}),
                    membership(p, L))


@_checker("dimension")
def _check_dimension(ev):
    R = ring_from_payload(ev["ring"])
    d = ideal_from(R, ev["ideal"]).dimension()
    return _verdict(_same({"dim": ev["dim"]}, {"dim": d}), d == ev["expected"])


@_checker("grade_positive")
def _check_grade(ev):
    R = ring_from_payload(ev["ring"])
    v = grade_positive(R, ideal_from(R, ev["ideal"]))
    return _verdict(_same({"value": ev["value"]}, {"value": v}), v == ev["expected"])


@_checker("shrink_trace")
def _check_shrink(ev):
    """Replays every step: the recorded locus, the choice of x, the next module and the
    strict descent are all recomputed."""
    if "error" in ev:
        return False, {"note": ev["error"]}
    R = ring_from_payload(ev["ring"])
    p = ideal_from(R, ev["target"])
    mismatch = []
    M = module_from(R, ev["module"])
    for k, step in enumerate(ev["steps"]):
        if module_payload(M) != step["module"]:
            mismatch.append(f"step {k}: module differs")
            break
        L = nonfree_locus(M)
        if L.generators() != step["locus"]:
            mismatch.append(f"step {k}: locus differs")
        q = ideal_from(R, step["q"])
        x = poly_from(R, step["x"])
        if not (p.contains(x) and not q.contains(x) and R.is_regular(x) and membership(q, L)):
            mismatch.append(f"step {k}: x or q is not admissible")
        try:
            M = omega_mod_x(M, x)
        except ConstructionError as exc:
            mismatch.append(f"step {k}: {exc}")
            break
        L2 = nonfree_locus(M)
        if L2.generators() != step["next_locus"]:
            mismatch.append(f"step {k}: next locus differs")
        if not (L.strictly_contains(L2) and membership(p, L2)):
            mismatch.append(f"step {k}: no strict descent onto V(p)")
    if not mismatch and ev.get("final_module") is not None and module_payload(M) != ev["final_module"]:
        mismatch.append("final module differs")
    final = nonfree_locus(M)
    return _verdict(mismatch, ev.get("converged") and final.ideal.locus_equal(p))


@_checker("pf_member")
def _check_pf_member(ev):
    R = ring_from_payload(ev["ring"])
    P = R.poly_ring
    f = poly_from(P, ev["f"])
    I = pf_ideal(R, f)
    A = pf_block(R, f)
    mismatch = _same({"gb": ev["gb"]}, {"gb": _gbs(I)})
    if matrix_from(R, ev["block"], 2) != A:
        mismatch.append("block differs from [[x, y - z*f], [0, -x]]")
    if not (A @ A).is_zero():
        mismatch.append("A*A != 0")
    if "certificate" not in ev:
        mismatch.append("no certificate")
    else:
        if digest(ev["certificate"]) != ev.get("certificate_sha256"):
            mismatch.append("certificate hash differs")
        cert = certificate_from(ev["certificate"])
        ok, msg = verify_periodic_certificate(cert)
        if not ok:
            mismatch.append(msg)
        if cert.period != 1 or cert.blocks[0] != A:
            mismatch.append("certificate is not the period-1 block")
    if is_prime_restricted(I) != "prime":
        mismatch.append("p^f not certified prime")
    M = ModulePresentation(R, A)
    L = nonfree_locus(M)
    if L.generators() != ev["nonfree_ideal"]:
        mismatch.append("nonfree ideal differs")
    if not L.ideal.locus_equal(I):
        mismatch.append("NF(p^f) != V(p^f)")
    if "indecomposable" in ev:
        ind = ev["indecomposable"]
        res = certify_indecomposable(M, ind["truncation"])
        if (res.verdict, res.algebra_dim) != (ind["verdict"], ind["algebra_dim"]):
            mismatch.append("indecomposability verdict differs")
        elif res.verdict != "indecomposable":
            mismatch.append("not certified indecomposable")
    return _verdict(mismatch, all(ev["checks"].values()))


@_checker("pf_pair")
def _check_pf_pair(ev):
    R = ring_from_payload(ev["ring"])
    P = R.poly_ring
    f, g = poly_from(P, ev["f"]), poly_from(P, ev["g"])
    If, Ig = pf_ideal(R, f), pf_ideal(R, g)
    Lf = nonfree_locus(ModulePresentation(R, pf_block(R, f)))
    Lg = nonfree_locus(ModulePresentation(R, pf_block(R, g)))
    got = {"gb_f": _gbs(If), "gb_g": _gbs(Ig), "gb_distinct": If.gb != Ig.gb,
           "nf_distinct": not Lf.equals(Lg)}
    keys = ("gb_f", "gb_g", "gb_distinct", "nf_distinct")
    return _verdict(_same({k: ev[k] for k in keys}, got), got["gb_distinct"])


@_checker("groebner_basis")
def _check_gb(ev):
    """Independent of the engine's bookkeeping: the recorded basis satisfies the
    Buchberger criterion and generates the same ideal as the generators."""
    R = ring_from_payload(ev["ring"])
    P = R.poly_ring
    gens = [poly_from(P, g) for g in ev["generators"]]
    basis = [poly_from(P, g) for g in ev["gb"]]
    from .groebner import col_to_vec

    crit = is_groebner([col_to_vec((b,)) for b in basis if b], P)
    G = Ideal(P, basis)
    J = Ideal(P, gens)
    mismatch = [] if crit else ["Buchberger criterion fails"]
    if not (all(G.contains(g) for g in gens) and all(J.contains(b) for b in basis)):
        mismatch.append("basis and generators span different ideals")
    return _verdict(mismatch, True)


def _module_ideal_check(ev, fn, key="ideal"):
    R = ring_from_payload(ev["ring"])
    J = fn(module_from(R, ev["module"]))
    return R, J, _same({key: ev[key]}, {key: J.to_strings()})


@_checker("nonfree_locus")
def _check_nf_locus(ev):
    R, J, mismatch = _module_ideal_check(ev, w0_witness_ideal)
    return _verdict(mismatch, True)


@_checker("annihilator")
def _check_ann(ev):
    R, J, mismatch = _module_ideal_check(ev, annihilator)
    M = module_from(R, ev["module"])
    P = R.poly_ring
    for a in J.gb:
        for i in range(M.ngens):
            col = tuple(a if k == i else P.zero for k in range(M.ngens))
            if not M.is_zero_element(col):
                mismatch.append(f"{a} does not annihilate generator {i}")
    return _verdict(mismatch, True)


@_checker("ext")
@_checker("tor")
def _check_ext_tor(ev):
    R = ring_from_payload(ev["ring"])
    M, N = module_from(R, ev["module"]), module_from(R, ev["other"])
    fn = ext if ev["kind"] == "ext" else tor
    res = fn(M, N, ev["index"])
    got = {"result": module_payload(res), "is_zero": res.is_zero(), "annihilator": annihilator(res).to_strings()}
    return _verdict(_same({k: ev[k] for k in got}, got), True)


@_checker("totref_bounded")
def _check_totref_bounded(ev):
    R = ring_from_payload(ev["ring"])
    res = check_totally_c_reflexive_bounded(module_from(R, ev["module"]), module_from(R, ev["dualizing"]),
                                            ev["bound"])
    got = {"verdict": res.verdict, "reason": res.reason}
    return _verdict(_same({k: ev[k] for k in got}, got), res.ok)


@_checker("semidualizing")
def _check_semidualizing(ev):
    R = ring_from_payload(ev["ring"])
    res = check_semidualizing(module_from(R, ev["module"]), ev["bound"])
    got = {"verdict": res.verdict, "reason": res.reason}
    return _verdict(_same({k: ev[k] for k in got}, got), res.ok)


@_checker("indecomposable")
def _check_indecomposable(ev):
    R = ring_from_payload(ev["ring"])
    res = certify_indecomposable(module_from(R, ev["module"]), ev["truncation"])
    got = {"verdict": res.verdict, "algebra_dim": res.algebra_dim}
    return _verdict(_same({k: ev[k] for k in got}, got), res.verdict == "indecomposable")


@_checker("canonical_module")
def _check_canonical(ev):
    R = ring_from_payload(ev["ring"])
    K = canonical_module(R)
    res = check_semidualizing(K, ev["bound"])
    got = {"result": module_payload(K), "semidualizing": res.verdict}
    return _verdict(_same({k: ev[k] for k in got}, got), res.ok)


@_checker("error")
def _check_error(ev):
    return False, {"note": "the original run raised: " + ev.get("error", "")}


def recheck_item(item: Item) -> Item:
    """Re-verify one item from its payload; the result's verdict is PASS exactly when
    the payload's claims are reproduced and its pass condition holds."""
    import time

    t0 = time.perf_counter()
    ev = item.evidence
    kind = ev.get("kind")
    fn = _CHECKERS.get(kind)
    if fn is None:
        out = Item(item.name, False, {"kind": "recheck", "of": kind, "note": "no checker for this kind"},
                   "UNSUPPORTED")
    else:
        try:
            ok, notes = fn(ev)
        except Exception as exc:
            ok, notes = False, {"error": f"{type(exc).__name__}: {exc}"}
        agrees = (ok and item.verdict == "PASS") or (not ok and item.verdict != "PASS")
        notes = {"kind": "recheck", "of": kind, "recorded_verdict": item.verdict,
                 "agrees_with_recorded": agrees, **notes}
        out = Item(item.name, ok, notes)
    out.seconds = time.perf_counter() - t0
    return out


def recheck_report(text: str) -> Report:
    rep = parse_report(text)
    out = Report(f"recheck ({rep.command})", digest(report_body(text)))
    out.items = [recheck_item(it) for it in rep.sorted_items()]
    return out
