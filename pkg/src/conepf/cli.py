"""Command-line front end: load a map, run analyses, write one report each.

Exit status: 0 when everything passes, 2 when a hypothesis or property
check fails (unless the failure is listed as expected), 1 on any error.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from . import _rational as Q
from ._jsonable import jsonable
from .cone import ConeError, cone_from_dict, interior_contains, sample_points
from .maps import (
    MapError, _structurally_superadditive, as_piecewise, check_order_preserving,
    check_superadditive, classify_positivity, map_from_dict,
)
from .schema import SchemaError, validate_document

ANALYSES = ("spectral", "hypotheses", "superadditive", "counterexample", "case_analysis")
# failures the counterexample is constructed to exhibit
BUILTIN_EXPECTED = {"mahadevan_counterexample": ("B2", "SSI", "order_preserving(strong)")}


@dataclass
class RunConfig:
    input_path: str | None = None
    builtin: str | None = None
    analyses: tuple = ("spectral", "hypotheses")
    seed: int = 0
    budget: int = 1000
    n_max: int = 64
    tol: float = 1e-9
    threads: int = 1
    output: str = "reports"
    format: str = "json"
    expected_failures: tuple = ()

    def validate(self):
        if (self.input_path is None) == (self.builtin is None):
            raise ValueError("exactly one of --input and --builtin is required")
        if self.budget < 1 or self.n_max < 1 or self.threads < 1:
            raise ValueError("budget, n-max and threads must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.seed < 0:
            raise ValueError("seed must be nonnegative")
        if self.format not in ("json", "text"):
            raise ValueError("format must be json or text")
        bad = [a for a in self.analyses if a not in ANALYSES]
        if bad:
            raise ValueError(f"unknown analyses: {', '.join(bad)}")


@dataclass
class Loaded:
    label: str
    doc: dict
    T: object
    expected: set = field(default_factory=set)


class RunError(Exception):
    pass


def load(config: RunConfig) -> Loaded:
    from .counterexample import BUILTINS

    if config.builtin is not None:
        if config.builtin not in BUILTINS:
            raise RunError(f"unknown builtin {config.builtin!r}")
        T = BUILTINS[config.builtin]()
        return Loaded(config.builtin, {"map": T.to_dict()}, T, set(BUILTIN_EXPECTED.get(config.builtin, ())))
    try:
        doc = json.loads(Path(config.input_path).read_text())
    except json.JSONDecodeError as exc:
        raise RunError(f"{config.input_path}: invalid JSON: {exc}") from exc
    validate_document(doc)
    if "map" not in doc:
        doc = {"map": doc}
    cone = cone_from_dict(doc["cone"]) if "cone" in doc else None
    try:
        T = map_from_dict(doc["map"], cone)
    except (MapError, ConeError, ValueError) as exc:
        raise RunError(f"/map: {exc}") from exc
    expected = set(doc.get("expected_failures", ()))
    if doc["map"].get("type") == "builtin":
        expected |= set(BUILTIN_EXPECTED.get(doc["map"]["name"], ()))
    return Loaded(doc.get("name", Path(config.input_path).stem), doc, T, expected)


# analyses --------------------------------------------------------------------

def _spectral(T, cfg: RunConfig, loaded: Loaded):
    from .spectral import spectral_report

    rep = spectral_report(T, n_max=cfg.n_max, budget=min(cfg.budget, 512), seed=cfg.seed)
    failures = [] if rep.chain["holds"] else ["spectral_chain"]
    for p in rep.eigenpairs:
        if p.residual > 1e-8 * max(1.0, abs(p.lam)):
            failures.append("eigenpair_residual")
            break
    return rep.to_dict(), failures


def _map_all(fns, threads: int):
    if threads <= 1:
        return [f() for f in fns]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(f) for f in fns]
        return [f.result() for f in futures]


def _theorem_properties(T, b1, b2) -> tuple[dict, list]:
    """Eigen-structure consequences of the boundary conditions."""
    from .spectral import enumerate_eigenpairs_pwl

    out, failures = {}, []
    if T.dim > 3:
        return {"skipped": "eigen oracle restricted to dimension <= 3"}, failures
    try:
        as_piecewise(T)
    except MapError:
        return {"skipped": "no piecewise-linear form"}, failures
    oracle = enumerate_eigenpairs_pwl(T)
    lams = [p.lam for p in oracle.pairs]
    out["cone_eigenvalues"] = sorted(set(round(v, 12) for v in lams))
    if b1 is not None and b1.passed and lams:
        single = max(lams) - min(lams) <= 1e-12
        interior = all(p.location == "interior" for p in oracle.pairs)
        rng = np.random.default_rng(0)
        X = sample_points(T.cone, rng, 256)
        keeps = all(interior_contains(T.cone, y) for y in T.apply_many(X))
        out["B1_consequences"] = {"single_eigenvalue": single, "eigenvectors_interior": interior,
                                  "interior_maps_to_interior": keeps}
        if not (single and interior and keeps):
            failures.append("theorem_property:B1_consequences")
    if lams:
        top = max(lams)
        dim = oracle.eigencone_dimension(top)
        out["eigencone_dimension"] = dim
        if b2.passed and not oracle.is_single_ray(top):
            failures.append("theorem_property:B2_simple_eigencone")
        if dim > 1 and b2.passed:
            failures.append("theorem_property:contrapositive")
    return out, failures


def _hypotheses(T, cfg: RunConfig, loaded: Loaded):
    from .hypotheses import check_A1, check_A2_orbit, implication_audit
    from .spectral import orbit_growth_check

    b, s = cfg.budget, cfg.seed
    jobs = [
        lambda: classify_positivity(T, b, s),
        lambda: check_order_preserving(T, "weak", b, s),
        lambda: check_order_preserving(T, "strict", b, s),
        lambda: check_order_preserving(T, "strong", b, s) if T.cone.is_solid else None,
        lambda: implication_audit(T, b, s),
    ]
    pos, weak, strict, strong, audit = _map_all(jobs, cfg.threads)
    verdicts = {v.hypothesis: v for v in (weak, strict, strong) if v is not None}
    verdicts.update(audit.verdicts)
    if T.on_space:
        verdicts["superadditive"] = check_superadditive(T, "on_space", b, s)
    growth = loaded.doc.get("growth")
    if growth:
        a1 = check_A1(T, growth["u"], growth["v"], growth["w"], growth["M"], growth["p"])
        verdicts["A1"] = a1
        if a1.passed and "eps" in growth:
            verdicts["orbit_growth"] = orbit_growth_check(
                T, growth["u"], growth["v"], growth["w"], growth["M"], growth["p"],
                growth["eps"], growth.get("k_max", 20),
            )
        verdicts["A2"] = check_A2_orbit(T, [float(Q.to_exact(c)) for c in growth["v"]], k_max=cfg.n_max, tol=cfg.tol)
    props, prop_failures = _theorem_properties(T, verdicts.get("B1"), verdicts["B2"])
    failures = [name for name, v in verdicts.items() if v.failed]
    failures += [f"implication:{x}" for x in audit.violations]
    failures += prop_failures
    result = {
        "positivity": pos.to_dict(),
        "verdicts": {k: verdicts[k].to_dict() for k in sorted(verdicts)},
        "implications": {"consistent": audit.consistent, "violations": audit.violations, "notes": audit.notes},
        "theorem_properties": props,
    }
    return result, failures


def _superadditive(T, cfg: RunConfig, loaded: Loaded):
    from .superadditive import analyze_superadditive

    if not (T.on_space and _structurally_superadditive(T)):
        raise RunError("superadditive analysis needs a certified superadditive map on R^n")
    a = analyze_superadditive(T, budget=max(50, min(cfg.budget, 1000)), seed=cfg.seed)
    failures = []
    if not a.ordering_ok:
        failures.append("lambda_minus >= lambda_plus")
    if not all(a.bound_checks):
        failures.append("off-cone eigenvalue bound")
    if a.b1.passed and not a.uniqueness.get("agree", False):
        failures.append("uniqueness")
    if a.b1.passed and not a.b1_conjugate.passed:
        failures.append("B1 transfer to conjugate")
    return a.to_dict(), failures


def _counterexample(T, cfg: RunConfig, loaded: Loaded):
    from .counterexample import CertificateError, refutation_report

    try:
        rep = refutation_report(boundary_samples=max(1000, cfg.budget), seed=cfg.seed)
    except CertificateError as exc:
        return {"failed_certificate": exc.claim, "data": jsonable(exc.data)}, [exc.claim]
    return rep, []


def _case_analysis(T, cfg: RunConfig, loaded: Loaded):
    from .counterexample import verify_case_analysis

    rep = verify_case_analysis(cfg.budget, cfg.seed)
    return rep.to_dict(), ([] if rep.ok else ["case_analysis"])


RUNNERS = {
    "spectral": _spectral,
    "hypotheses": _hypotheses,
    "superadditive": _superadditive,
    "counterexample": _counterexample,
    "case_analysis": _case_analysis,
}


# rendering -------------------------------------------------------------------

def _render_text(obj, indent: int = 0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines += _render_text(v, indent + 1)
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, float):
        return f"{v:.12g}"
    return str(v)


def _write(cfg: RunConfig, name: str, report: dict, text_override: str | None) -> Path:
    out = Path(cfg.output)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.format == "json":
        path = out / f"{name}.json"
        path.write_text(json.dumps(report, sort_keys=True, indent=2) + "\n")
    else:
        path = out / f"{name}.txt"
        body = text_override if text_override is not None else "\n".join(_render_text(report["result"])) + "\n"
        head = "\n".join(_render_text({k: report[k] for k in ("header", "failures")}))
        path.write_text(head + "\n\n" + body)
    return path


def run(cfg: RunConfig) -> int:
    cfg.validate()
    loaded = load(cfg)
    expected = loaded.expected | set(cfg.expected_failures)
    status = 0
    for name in cfg.analyses:
        result, failures = RUNNERS[name](loaded.T, cfg, loaded)
        text = None
        if hasattr(result, "to_text"):
            text = result.to_text()
            result = result.to_dict()
        marked = [{"name": f, "expected": f in expected} for f in failures]
        report = {
            "header": {
                "tool": "conepf", "version": __version__, "analysis": name, "input": loaded.label,
                "seed": cfg.seed, "budget": cfg.budget, "n_max": cfg.n_max, "tol": cfg.tol,
            },
            "failures": marked,
            "result": jsonable(result),
        }
        path = _write(cfg, name, report, text)
        unexpected = [m["name"] for m in marked if not m["expected"]]
        if unexpected:
            status = 2
        state = "ok" if not marked else f"{len(unexpected)} unexpected, {len(marked) - len(unexpected)} expected failures"
        print(f"{name}: {state} -> {path}")
    return status


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conepf", description=__doc__.splitlines()[0])
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="map description or run document (JSON)")
    src.add_argument("--builtin", metavar="NAME", help="builtin map, e.g. mahadevan_counterexample")
    p.add_argument("--analyses", default="spectral,hypotheses",
                   help=f"comma-separated subset of {','.join(ANALYSES)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=1000, help="samples per sampled check")
    p.add_argument("--n-max", type=int, default=64, help="iteration horizon for spectral estimates")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output", default="reports", help="directory for the report files")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--expected-failures", default="", help="comma-separated failure names to tolerate")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input_path=args.input, builtin=args.builtin,
        analyses=tuple(a.strip() for a in args.analyses.split(",") if a.strip()),
        seed=args.seed, budget=args.budget, n_max=args.n_max, tol=args.tol, threads=args.threads,
        output=args.output, format=args.format,
        expected_failures=tuple(x.strip() for x in args.expected_failures.split(",") if x.strip()),
    )
    try:
        return run(cfg)
    except SchemaError as exc:
        print(f"error: schema violation at {exc.pointer}: {exc.message}", file=sys.stderr)
        return 1
    except (RunError, MapError, ConeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
