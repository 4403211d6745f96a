"""The CLI runs shared by the CLI tests and the acceptance gate."""

from pathlib import Path

from conepf.cli import main

DEMOS = Path(__file__).resolve().parents[1] / "demos"
BUILTIN = "mahadevan_counterexample"

# every analysis that applies to each input
SUITE = [
    ["--builtin", BUILTIN, "--analyses", "spectral,hypotheses,counterexample,case_analysis"],
    ["--input", str(DEMOS / "min_linear_demo.json"), "--analyses", "spectral,hypotheses,superadditive"],
    ["--input", str(DEMOS / "counterexample.json"), "--analyses", "spectral,hypotheses"],
]


def run_suite(out: Path, seed: int = 0, fmt: str = "json", budget: int = 200) -> dict:
    """Run every suite entry into ``out``; returns ``{relative path: bytes}``."""
    files = {}
    for k, args in enumerate(SUITE):
        d = out / str(k)
        code = main(args + ["--seed", str(seed), "--budget", str(budget), "--output", str(d), "--format", fmt])
        if code != 0:
            raise AssertionError(f"suite entry {k} exited with {code}")
        for p in sorted(d.iterdir()):
            files[f"{k}/{p.name}"] = p.read_bytes()
    return files
