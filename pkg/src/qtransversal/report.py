"""Full structural analysis of one code as a deterministic JSON document."""

import json
from dataclasses import dataclass, field

from . import __version__, structure, sweeps
from .errors import ResourceError, ValidationError
from .stabilizer import centralizer

SCHEMA_VERSION = 1


@dataclass
class AnalysisReport:
    """Sections in output order plus per-section resource errors."""

    sections: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    @property
    def status(self):
        if self.violations:
            return "violation"
        if self.errors:
            return "resource-error"
        return "pass"

    @property
    def exit_code(self):
        return {"pass": 0, "violation": 1, "resource-error": 3}[self.status]

    def as_dict(self):
        out = {"schema_version": SCHEMA_VERSION,
               "tool": {"name": "qtransversal", "version": __version__}}
        out.update(self.sections)
        out["errors"] = dict(self.errors)
        out["violations"] = list(self.violations)
        out["status"] = self.status
        return out

    def to_json(self):
        return json.dumps(self.as_dict(), indent=2, ensure_ascii=False) + "\n"


def _identity(spec):
    S = spec.stabilizer
    out = {
        "name": spec.name, "d": S.d, "n": S.n,
        "declared": {"n": S.n, "k": spec.k, "delta": spec.distance},
        "gauge_qudits": spec.gauge_count,
        "generators": [g.label() for g in S.generators],
        "css": spec.css is not None,
    }
    if S.enumerable:
        out["group_order"] = S.order
    return out


def _centralizer(spec):
    S = spec.stabilizer
    C = centralizer(S)
    ok = C.check_size(S)
    out = {"size": C.size, "method": C.method, "size_identity_holds": bool(ok)}
    # |C| / |S| = d^(2(k + k'))
    ratio, e = C.size // S.order, 0
    while S.d ** (2 * e) < ratio:
        e += 1
    out["logical_plus_gauge_qudits"] = e if S.d ** (2 * e) == ratio else None
    return out


def run_analysis(spec):
    """Every structure-analysis output for ``spec`` plus lemma verdicts.

    A section that hits a resource bound is replaced by ``null`` and its
    error recorded under ``errors``; the other sections are still filled.
    """
    rep = AnalysisReport()
    S = spec.stabilizer
    rep.sections["code"] = _identity(spec)

    def section(name, fn):
        try:
            rep.sections[name] = fn()
        except ResourceError as exc:
            rep.sections[name] = None
            rep.errors[name] = str(exc)

    def need_enumerable():
        if not S.enumerable:
            raise ResourceError(
                f"element set exceeds the enumeration bound of {S.max_elements}"
            )

    state = {}

    def minimal():
        need_enumerable()
        state["minimal"] = structure.minimal_supports(S)
        return [structure.classify_minimal_subcode(S, w).as_dict() for w in state["minimal"]]

    def degenerate():
        need_enumerable()
        state["degenerate"] = structure.detect_degenerate_factors(S)
        return state["degenerate"].as_dict()

    def coordinates():
        need_enumerable()
        out = []
        for j in range(1, S.n + 1):
            try:
                c = structure.classify_coordinate(
                    S, j, state.get("minimal"), state.get("degenerate")
                )
                out.append(c.as_dict())
            except ValidationError as exc:
                rep.violations.append({"section": "coordinates", "j": j, "message": str(exc)})
                out.append({"j": j, "class": None, "error": str(exc)})
        return out

    def single():
        need_enumerable()
        return [
            {k: v for k, v in structure.single_qudit_subgroup(S, i).as_dict().items()
             if k in ("i", "order", "index")}
            for i in range(1, S.n + 1)
        ]

    def pi():
        need_enumerable()
        return structure.pi_subgroup(S).as_dict()

    def lemmas():
        need_enumerable()
        out = {}
        for name, (ok, detail) in sweeps.check_group(S).items():
            entry = {"holds": bool(ok)}
            if detail is not None:
                entry["detail"] = sweeps._jsonable(detail)
            out[name] = entry
            if not ok and name not in sweeps.INFORMATIONAL:
                rep.violations.append({"section": "lemmas", "lemma": name})
        return out

    section("minimal_subcodes", minimal)
    section("degenerate", degenerate)
    section("coordinates", coordinates)
    section("single_qudit_subgroups", single)
    section("pi", pi)
    section("centralizer", lambda: _centralizer(spec))
    section("lemmas", lemmas)
    return rep
