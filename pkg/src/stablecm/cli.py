"""Batch command line: ``stablecm <command> [job.json] [flags]``.

A job document is JSON::

    {"schema": "stablecm/1",
     "ring": "p=5; vars x,y,z", "relations": ["x^2 + y^2 + z^2"],
     "modules": {"M": {"matrix": [["x", "y + 2*z"], ["y - 2*z", "-x"]]}},
     "ideals": {"I": ["x", "y"]},
     "params": {"module": "M"}}

``ring`` may also be ``"catalog:quadric2"``.  Modules are given by a
``matrix`` (with optional ``shifts``), ``catalog`` id, ``mf`` (an ``ade:``
entry, truncation backend), ``cyclic`` generators, ``free`` shifts,
``residue``, or ``power`` (``A/m^n``).  Without a job file the ``--ring`` and
``--module`` flags name catalog entries directly.

Exit codes: 0 success, 2 a checked identity or inequality failed, 1 input or
engine error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Dict, List, Optional

from . import catalog
from .errors import CheckFailed, StableCMError
from .etriangle import (SESWitness, check_e1_superadditive, check_pretriangle,
                        check_triangle, e_triangle, e_triangle_from_cover,
                        e_triangle_oracle_data, make_xi, seeded_witnesses, syzygy_ses)
from .gmodule import (ModuleMap, ModulePresentation, QuotientRing, cyclic_module, dual,
                      free_module, is_mcm, minimalize, power_quotient, residue_field,
                      resolve, syzygy_module, transpose)
from .groebner import vec_from_polys
from .hilbert import hilbert_coefficients, hilbert_series
from .mcm_linkage import (check_approx_triangle, dim1_linkage_window, filtration_ses,
                          fingerprint_experiment, growth_experiment, ideal_module_consistency,
                          link_ideal, mcm_approximation, theta_report)
from .mf import (TruncatedMF, ade_catalog, catalog_entry, trunc_e_triangle,
                 trunc_e_triangle_from_cover, trunc_e_triangle_oracle)
from .polyalg import parse_poly, parse_ring

SCHEMA = "stablecm/1"
COMMANDS = ("hilbert", "etriangle", "syzygy", "dual", "transpose", "approx", "theta", "link",
            "verify-axioms", "verify-ses", "growth", "fingerprint", "dim1-window", "catalog")


class JobError(StableCMError):
    pass


# ---------------------------------------------------------------------------
# job documents


class Job:
    def __init__(self, doc: Dict[str, Any]):
        schema = doc.get("schema", SCHEMA)
        if schema != SCHEMA:
            raise JobError(f"unsupported schema {schema!r}")
        self.doc = doc
        self.params: Dict[str, Any] = dict(doc.get("params", {}))
        self._ring: Optional[QuotientRing] = None
        self._modules: Dict[str, Any] = {}

    @property
    def ring(self) -> QuotientRing:
        if self._ring is None:
            entry = self.doc.get("ring")
            if entry is None:
                raise JobError("job declares no ring")
            if entry.startswith("catalog:"):
                self._ring = catalog.ring(entry[len("catalog:"):])
            else:
                S = parse_ring(entry)
                self._ring = QuotientRing(S, list(self.doc.get("relations", ())),
                                          bool(self.doc.get("assert_gorenstein", False)))
        return self._ring

    def module(self, name: str):
        """A ModulePresentation, or a TruncatedMF for ``mf`` entries."""
        if name in self._modules:
            return self._modules[name]
        mods = self.doc.get("modules", {})
        if name not in mods:
            if name in ("A", "ring"):
                return free_module(self.ring, 1)
            raise JobError(f"unresolved module name {name!r}")
        entry = mods[name]
        M = self._build(entry)
        self._modules[name] = M
        return M

    def _build(self, entry: Dict[str, Any]):
        if "catalog" in entry:
            M = catalog.module(entry["catalog"])
            if "ring" in self.doc and M.ring != self.ring:
                raise JobError("catalog module lives over a different ring")
            return M
        if "mf" in entry:
            return TruncatedMF(catalog_entry(entry["mf"]), entry.get("trunc"))
        A = self.ring
        if "matrix" in entry:
            return ModulePresentation.from_matrix(A, entry["matrix"], entry.get("shifts"))
        if "cyclic" in entry:
            return cyclic_module(A, entry["cyclic"], entry.get("shift", 0))
        if "free" in entry:
            return free_module(A, entry["free"])
        if "residue" in entry:
            return residue_field(A)
        if "power" in entry:
            return power_quotient(A, int(entry["power"]))
        raise JobError(f"cannot build module from {sorted(entry)}")

    def ideal(self, name_or_gens) -> List:
        if isinstance(name_or_gens, list):
            gens = name_or_gens
        else:
            ideals = self.doc.get("ideals", {})
            if name_or_gens not in ideals:
                raise JobError(f"unresolved ideal name {name_or_gens!r}")
            gens = ideals[name_or_gens]
        return [parse_poly(g, self.ring.S) for g in gens]

    def map(self, source: ModulePresentation, target: ModulePresentation, entry) -> ModuleMap:
        """A map given as a matrix whose columns are the images of the source generators."""
        S = self.ring.S
        mat = [[parse_poly(x, S) for x in row] for row in entry]
        cols = [vec_from_polys([mat[i][j] for i in range(len(mat))]) for j in range(len(mat[0]))] if mat else []
        return ModuleMap(source, target, cols)


def _describe(M: ModulePresentation) -> dict:
    Mm = minimalize(M)
    return {"generators": Mm.rank, **Mm.describe()}


# ---------------------------------------------------------------------------
# commands


class Outcome:
    def __init__(self, report: dict, failures: Optional[List[str]] = None):
        self.report = report
        self.failures = failures or []


def _require(flag: bool, reference: str, message: str, failures: List[str]):
    if not flag:
        failures.append(f"{reference}: {message}")


def cmd_hilbert(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "A"))
    hd = hilbert_coefficients(M)
    hs = hilbert_series(minimalize(M))
    lo, hi = hd.window
    return Outcome({
        "series": str(hs),
        "dim": hd.dim,
        "e": list(hd.coefficients),
        "samples": {str(k): v for k, v in sorted(hd.samples.items())},
        "window": [lo, hi],
    })


def cmd_etriangle(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    failures: List[str] = []
    if isinstance(M, TruncatedMF):
        vals = {"formula": trunc_e_triangle(M), "oracle": trunc_e_triangle_oracle(M),
                "cover": trunc_e_triangle_from_cover(M)}
        rep = {"backend": "truncation", "label": M.mf.label, **vals}
    else:
        data = e_triangle_oracle_data(M)
        vals = {"formula": e_triangle(M), "oracle": data.value,
                "cover": e_triangle_from_cover(syzygy_ses(M))}
        rep = {"backend": "graded", **vals, "oracle_samples": {str(k): v for k, v in sorted(data.samples.items())}}
    _require(len(set(vals.values())) == 1, "e^T three routes", f"values disagree: {vals}", failures)
    return Outcome(rep, failures)


def cmd_syzygy(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    times = int(job.params.get("times", 1))
    res = resolve(M, int(job.params.get("length", 4)))
    return Outcome({"syzygy": _describe(syzygy_module(M, times)), "betti": res.betti(),
                    "terminated": res.terminated, "periodic_from": res.periodic_from})


def cmd_dual(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    return Outcome({"dual": _describe(dual(M))})


def cmd_transpose(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    return Outcome({"transpose": _describe(transpose(M))})


def cmd_approx(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    W = mcm_approximation(M, args.budget, args.seed)
    failures: List[str] = []
    _require(W.certified, "MCM approximation", "certificate incomplete", failures)
    return Outcome(W.as_dict(), failures)


def cmd_theta(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "M"))
    rep = theta_report(M, args.budget, args.seed)
    failures: List[str] = []
    _require(rep["well_defined"] != "no", "approximation uniqueness",
             "two resolutions gave non-isomorphic approximations", failures)
    if "oracle" in rep:
        _require(rep["oracle"] == rep["theta"], "e^T oracle", "oracle disagrees with formula", failures)
        _require(rep["theta"] >= rep["e0_syzygy"] > 0, "e^T lower bound", "theta < e0(ΩX)", failures)
    return Outcome(rep, failures)


def cmd_link(job: Job, args) -> Outcome:
    A = job.ring
    I = job.ideal(job.params.get("ideal", "I"))
    q = job.ideal(job.params.get("q", "q"))
    J, W = link_ideal(A, I, q)
    rep = W.as_dict()
    failures: List[str] = []
    if job.params.get("modules", True) and W.proper:
        cons = ideal_module_consistency(A, I, q, args.budget, args.seed)
        rep["partner_vs_colon"] = cons["partner_vs_colon"]
        _require(rep["partner_vs_colon"] != "no", "ideal/module linkage", "partner differs from A/J", failures)
    return Outcome(rep, failures)


def cmd_verify_axioms(job: Job, args) -> Outcome:
    names = job.params.get("modules")
    if names:
        mods = [job.module(n) for n in names]
    else:
        mods = [M for M in (job.module(n) for n in job.doc.get("modules", {})) if isinstance(M, ModulePresentation)]
    mods = [M for M in mods if is_mcm(M)]
    if not mods:
        raise JobError("no maximal Cohen-Macaulay modules to build witnesses from")
    xi = make_xi(job.params.get("xi", "ET"))
    pool = seeded_witnesses(mods, args.seed, int(job.params.get("cones", 8)))
    reports = []
    failures: List[str] = []
    for kind, w in pool:
        rep = check_pretriangle(xi, w, args.budget, args.seed) if kind == "ses" \
            else check_triangle(xi, w, args.budget, args.seed)
        reports.append(rep.as_dict())
        if not rep.passed:
            bad = [k for k, v in rep.checks.items() if not v]
            failures.append(f"triangle axioms ({rep.name}): {', '.join(bad)}")
    return Outcome({"xi": str(xi), "witnesses": len(reports), "reports": reports,
                    "passed": not failures}, failures)


def cmd_verify_ses(job: Job, args) -> Outcome:
    p = job.params
    failures: List[str] = []
    if "filtration" in p:
        M = job.module(p["filtration"].get("module", "A"))
        ses = filtration_ses(M, int(p["filtration"]["n"]))
    else:
        M1, M2, M3 = (job.module(p[k]) for k in ("M1", "M2", "M3"))
        ses = SESWitness(M1, M2, M3, job.map(M1, M2, p["alpha"]), job.map(M2, M3, p["beta"]), "job")
    cert = ses.certify()
    rep: Dict[str, Any] = {"certificate": dict(cert)}
    _require(all(cert.values()), "exact sequence", "sequence is not exact", failures)
    if all(cert.values()):
        mcm = all(is_mcm(X) for X in (ses.M1, ses.M2, ses.M3))
        rep["all_mcm"] = mcm
        if mcm:
            e1r = check_e1_superadditive(ses)
            pre = check_pretriangle(make_xi("ET"), ses, args.budget, args.seed)
            rep["e1"] = e1r.as_dict()
            rep["pretriangle"] = pre.as_dict()
            _require(e1r.passed, "e1 super-additivity", str(e1r.checks), failures)
            _require(pre.passed, "e^T sub-additivity", str(pre.checks), failures)
        else:
            tri = check_approx_triangle(ses, args.budget, args.seed)
            rep["approximation_triangle"] = tri.as_dict()
            _require(tri.passed, "approximation triangle", str(tri.checks), failures)
    return Outcome(rep, failures)


def cmd_growth(job: Job, args) -> Outcome:
    M = job.module(job.params.get("module", "A"))
    rep = growth_experiment(M, int(job.params.get("n_max", 3)), budget=args.budget, seed=args.seed,
                            approximations=bool(job.params.get("approximations", True)))
    failures: List[str] = []
    for k, v in rep["checks"].items():
        _require(v, "growth of the lower bound" if k == "bound_increasing" else "regular ring", k, failures)
    return Outcome(rep, failures)


def cmd_fingerprint(job: Job, args) -> Outcome:
    A = job.ring
    ideals = [job.ideal(x) for x in job.params.get("ideals", [])]
    rep = fingerprint_experiment(A, ideals, int(job.params.get("m", 1)), args.budget, args.seed)
    failures: List[str] = []
    for ent in rep["entries"]:
        if "within_bound" in ent:
            _require(ent["within_bound"], "theta bound", f"ideal {ent['index']} exceeds m*theta_B(k)", failures)
    return Outcome(rep, failures)


def cmd_dim1_window(job: Job, args) -> Outcome:
    p = job.params
    S = parse_ring(job.doc.get("ring", "p=5; vars x,y"))
    f = parse_poly(p["f"], S)
    a = parse_poly(p["a"], S)
    window = tuple(int(x) for x in (args.window.split(",") if args.window else p.get("window", (2, 8))))
    rep = dim1_linkage_window(f, a, p.get("s"), window, args.trunc or p.get("trunc"))
    failures: List[str] = []
    _require(rep.holds, "colon identity", "identity fails in the window", failures)
    return Outcome(rep.as_dict(), failures)


def cmd_catalog(job: Optional[Job], args) -> Outcome:
    p = job.params if job else {}
    entry = p.get("entry") or args.module
    if entry and entry.startswith("ade:"):
        M = TruncatedMF(catalog_entry(entry), args.trunc)
        vals = {"formula": trunc_e_triangle(M), "oracle": trunc_e_triangle_oracle(M),
                "cover": trunc_e_triangle_from_cover(M)}
        failures: List[str] = []
        _require(len(set(vals.values())) == 1, "e^T three routes", f"values disagree: {vals}", failures)
        return Outcome({"entry": entry, "mf": M.mf.as_dict(), "mu": M.mu(), **vals}, failures)
    if entry:
        M = catalog.module(entry)
        rep = {"entry": entry, **_describe(M), "mcm": is_mcm(M)}
        if rep["mcm"]:
            rep["e_T"] = e_triangle(M)
        return Outcome(rep)
    rings = {n: catalog.ring_description(n) for n in catalog.ring_names()}
    ade = {}
    for kind, n in (("A", 1), ("A", 2), ("A", 3), ("D", 4), ("E6", 0), ("E7", 0), ("E8", 0), ("Q3", 0), ("Q4", 0)):
        ade[f"{kind}{n or ''}"] = ["ade:" + e.label for e in ade_catalog(kind, n)]
    return Outcome({"rings": rings, "modules": catalog.module_names(), "ade": ade})


HANDLERS = {
    "hilbert": cmd_hilbert, "etriangle": cmd_etriangle, "syzygy": cmd_syzygy, "dual": cmd_dual,
    "transpose": cmd_transpose, "approx": cmd_approx, "theta": cmd_theta, "link": cmd_link,
    "verify-axioms": cmd_verify_axioms, "verify-ses": cmd_verify_ses, "growth": cmd_growth,
    "fingerprint": cmd_fingerprint, "dim1-window": cmd_dim1_window, "catalog": cmd_catalog,
}


# ---------------------------------------------------------------------------
# output


def _table(obj, prefix: str = "") -> List[str]:
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            lines.extend(_table(obj[k], f"{prefix}{k}."))
    elif isinstance(obj, list) and obj and all(isinstance(x, (dict, list)) for x in obj):
        for i, x in enumerate(obj):
            lines.extend(_table(x, f"{prefix}{i}."))
    else:
        lines.append(f"{prefix.rstrip('.'):<48} {json.dumps(obj, sort_keys=True, ensure_ascii=False)}")
    return lines


def render(report: dict, table: bool) -> str:
    if table:
        return "\n".join(_table(report)) + "\n"
    return json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="stablecm", description="Triangle functions, MCM approximations and "
                                "linkage over graded Gorenstein rings.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("job", nargs="?", help="JSON job document ('-' for standard input)")
    p.add_argument("--ring", help="catalog ring name, used when no job file is given")
    p.add_argument("--module", help="catalog module (or ade: entry) used when no job file is given")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trunc", type=int, default=None, help="truncation order for the truncation backend")
    p.add_argument("--window", default=None, help="n0,N sample window")
    p.add_argument("--budget", type=int, default=200, help="isomorphism search budget")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="table", action="store_false", default=False)
    fmt.add_argument("--table", dest="table", action="store_true")
    return p


def _load_job(args) -> Optional[Job]:
    if args.job:
        text = sys.stdin.read() if args.job == "-" else open(args.job, encoding="utf-8").read()
        return Job(json.loads(text))
    doc: Dict[str, Any] = {"schema": SCHEMA}
    if args.module and args.module.startswith("ade:"):
        doc["modules"] = {"M": {"mf": args.module, "trunc": args.trunc}}
        doc["params"] = {"module": "M"}
        return Job(doc)
    if args.ring:
        doc["ring"] = f"catalog:{args.ring}"
    if args.module:
        doc["modules"] = {"M": {"catalog": args.module}}
        doc["params"] = {"module": "M"}
        if not args.ring:
            doc["ring"] = f"catalog:{args.module.split('/')[0]}"
    if len(doc) == 1:
        return None
    return Job(doc)


def run(argv: Optional[List[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    report: Dict[str, Any] = {"schema": SCHEMA, "command": args.command, "seed": args.seed}
    try:
        job = _load_job(args)
        if job is None and args.command != "catalog":
            raise JobError("a job document or --ring/--module is required")
        if job is not None:
            report["inputs"] = job.doc
        outcome = HANDLERS[args.command](job, args)
    except CheckFailed as exc:
        report.update({"status": "check-failed", "failures": [str(exc)], "reference": exc.reference})
        out.write(render(report, args.table))
        return 2
    except (StableCMError, ValueError, KeyError, OSError) as exc:
        report.update({"status": "error", "error": type(exc).__name__, "module": type(exc).__module__,
                       "message": str(exc)})
        out.write(render(report, args.table))
        return 1
    report["result"] = outcome.report
    if outcome.failures:
        report.update({"status": "check-failed", "failures": outcome.failures})
        out.write(render(report, args.table))
        return 2
    report["status"] = "ok"
    out.write(render(report, args.table))
    return 0


def main() -> None:
    sys.exit(run())
