"""Command-line front end: constants, single verifications and manifest sweeps.

Exit codes: 0 ok, 1 violated, 2 usage or parse error, 3 inadmissible
parameters, 4 divergent.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .fields import TestFamily
from .inequalities import TIERS, verify
from .params import AdmissibilityError
from .report import THEOREM_IDS, InequalityReport
from .specfun import CONSTANT_NAMES, constant

log = logging.getLogger("fracbed")

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_INADMISSIBLE, EXIT_DIVERGENT = 0, 1, 2, 3, 4

TEXT_NAMES = {"Dbeta": "D_beta", "bbm": "C_bbm", "thm2": "C_thm2", "thm6": "C_thm6",
              "thm7": "C_thm7", "thm8": "C_thm8", "thm9": "C_thm9", "hy": "C_hy",
              "pitt": "B_alpha"}

SUMMARY_HEADER = ["theorem", "n", "p", "alpha", "beta", "lambda", "family", "lhs", "rhs",
                  "constant", "ratio", "verdict", "runtime_ms"]

FAMILY_NAMES = ("gaussian", "hls", "bump", "modulated")


def make_family(name: str, n: int, alpha: float = 0.0, beta: float = 0.0) -> TestFamily:
    """Battery member by CLI name; ``hls`` takes s = alpha + beta and a taper of 3."""
    if name == "gaussian":
        return TestFamily.gaussian()
    if name == "hls":
        s = alpha + beta if 0 < alpha + beta < n / 2 else n / 4
        return TestFamily.hls_optimizer(s, taper=3.0)
    if name == "bump":
        return TestFamily.bump()
    if name == "modulated":
        return TestFamily.modulated_gaussian()
    raise ValueError(f"unknown family {name!r}; choose from {', '.join(FAMILY_NAMES)}")


def default_tier() -> str:
    t = os.environ.get("FRACBED_TIER", "standard")
    return t if t in TIERS else "standard"


def exit_code(verdict: str) -> int:
    if verdict == "violated":
        return EXIT_VIOLATED
    if verdict == "divergent":
        return EXIT_DIVERGENT
    return EXIT_OK


# ---------------------------------------------------------------------------
# constants

def cmd_constants(args) -> int:
    names = CONSTANT_NAMES if args.which == "all" else (args.which,)
    try:
        if not 0 < args.beta < 1:
            raise AdmissibilityError("beta in (0,1)", f"beta={args.beta}")
        values = {}
        for name in names:
            try:
                values[name] = constant(name, args.n, args.beta, args.alpha, args.p)
            except AdmissibilityError:
                if args.which != "all":
                    raise
    except AdmissibilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    if args.format == "json":
        body = {k: v.as_dict() for k, v in values.items()}
        if args.which != "all":
            body = body[args.which]
        print(json.dumps(body, indent=2, sort_keys=True))
    elif args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["name", "formulaId", "n", "p", "alpha", "beta", "value", "logValue"])
        for k, v in values.items():
            prm = v.params
            w.writerow([k, v.formula_id, prm.n, prm.p, prm.alpha, prm.beta,
                        repr(v.value), repr(v.log_value)])
        print(buf.getvalue(), end="")
    else:
        for k, v in values.items():
            print(f"{TEXT_NAMES[k]} = {v.value!r}  [{v.formula_id}, log {v.log_value!r}]")
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _point_params(n, p, alpha, beta, lam, gamma) -> dict:
    d = {"n": n, "p": p, "alpha": alpha, "beta": beta}
    if lam is not None:
        d["lambda"] = lam
    if gamma is not None:
        d["gamma"] = gamma
    return d


def run_point(theorem: str, params: dict, family: str, tier: str, seed: int
              ) -> InequalityReport:
    fam = make_family(family, params["n"], params.get("alpha", 0.0), params.get("beta", 0.0))
    rep = verify(theorem, params, [fam] if theorem not in ("T8", "T9") else None, tier)
    rep.extra.setdefault("seed", seed)
    rep.extra.setdefault("tier", tier)
    return rep


def cmd_verify(args) -> int:
    tier = args.tier or default_tier()
    params = _point_params(args.n, args.p, args.alpha, args.beta, args.lam, args.gamma)
    try:
        rep = run_point(args.theorem, params, args.family, tier, args.seed)
    except AdmissibilityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    body = rep.to_json(timestamps=False)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(body + "\n")
    else:
        print(body)
    print(rep.summary(), file=sys.stderr)
    return exit_code(rep.verdict)


# ---------------------------------------------------------------------------
# sweep

class ManifestError(ValueError):
    def __init__(self, line: int, msg: str):
        self.line = line
        super().__init__(f"manifest line {line}: {msg}")


LIST_KEYS = {"theorems": str, "n": int, "p": float, "alpha": float, "beta": float,
             "lambda": float, "gamma": float, "families": str}
SCALAR_KEYS = {"tier": str, "seed": int, "out": str}


@dataclass
class SweepManifest:
    """Plain key=value manifest; list values are comma separated or lo:hi:count."""
    theorems: list[str]
    n: list[int] = field(default_factory=lambda: [1])
    p: list[float] = field(default_factory=lambda: [2.0])
    alpha: list[float] = field(default_factory=lambda: [0.0])
    beta: list[float] = field(default_factory=lambda: [0.25])
    lam: list = field(default_factory=lambda: [None])
    gamma: list = field(default_factory=lambda: [None])
    families: list[str] = field(default_factory=lambda: ["gaussian"])
    tier: str | None = None
    seed: int = 0
    out: str | None = None

    def points(self) -> list[tuple]:
        return list(itertools.product(self.theorems, self.n, self.p, self.alpha, self.beta,
                                      self.lam, self.gamma, self.families))


def _parse_values(text: str, kind, line: int) -> list:
    text = text.strip()
    if kind is not str and text.count(":") == 2:
        lo, hi, k = text.split(":")
        try:
            lo, hi, k = float(lo), float(hi), int(k)
        except ValueError:
            raise ManifestError(line, f"bad range {text!r}") from None
        if k < 1:
            raise ManifestError(line, "range count must be >= 1")
        vals = [lo + (hi - lo) * i / (k - 1) for i in range(k)] if k > 1 else [lo]
        return [kind(v) for v in vals]
    out = []
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        try:
            out.append(kind(tok))
        except ValueError:
            raise ManifestError(line, f"cannot read {tok!r} as {kind.__name__}") from None
    return out


def parse_manifest(text: str) -> SweepManifest:
    found: dict = {}
    for i, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ManifestError(i, f"expected key=value, got {line!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in found:
            raise ManifestError(i, f"duplicate key {key!r}")
        if key in LIST_KEYS:
            vals = _parse_values(value, LIST_KEYS[key], i)
            if not vals:
                raise ManifestError(i, f"empty list for {key!r}")
            if key == "theorems":
                bad = [t for t in vals if t not in THEOREM_IDS]
                if bad:
                    raise ManifestError(i, f"unknown theorem ids {bad}")
            if key == "families":
                bad = [f for f in vals if f not in FAMILY_NAMES]
                if bad:
                    raise ManifestError(i, f"unknown families {bad}")
            found[key] = vals
        elif key in SCALAR_KEYS:
            try:
                found[key] = SCALAR_KEYS[key](value)
            except ValueError:
                raise ManifestError(i, f"cannot read {key}={value!r}") from None
            if key == "tier" and value not in TIERS:
                raise ManifestError(i, f"unknown tier {value!r}")
        else:
            raise ManifestError(i, f"unknown key {key!r}")
    if not found.get("theorems"):
        raise ManifestError(0, "theorem list is empty")
    if "lambda" in found:
        found["lam"] = found.pop("lambda")
    return SweepManifest(**found)


def _sweep_task(index: int, point: tuple, tier: str, seed: int) -> tuple:
    theorem, n, p, alpha, beta, lam, gamma, family = point
    params = _point_params(n, p, alpha, beta, lam, gamma)
    try:
        rep = run_point(theorem, params, family, tier, seed)
    except (AdmissibilityError, ValueError) as e:
        return index, None, f"{type(e).__name__}: {e}"
    return index, rep, None


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "nan" if math.isnan(x) else repr(x)
    return str(x)


def _row(point: tuple, rep: InequalityReport | None, reason: str | None) -> list[str]:
    theorem, n, p, alpha, beta, lam, gamma, family = point
    if rep is None:
        vals = ["", "", "", "", "skipped", ""]
    else:
        vals = [_fmt(rep.lhs), _fmt(rep.rhs), _fmt(rep.constant), _fmt(rep.ratio),
                rep.verdict, f"{rep.runtime_ms:.1f}"]
        lam = rep.params.lam if rep.params.lam is not None else lam
    return [theorem, str(n), _fmt(p), _fmt(alpha), _fmt(beta), _fmt(lam), family] + vals


def cmd_sweep(args) -> int:
    try:
        manifest = parse_manifest(Path(args.manifest).read_text())
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ManifestError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    tier = args.tier or manifest.tier or default_tier()
    out = Path(args.out or manifest.out or "sweep-out")
    reports = out / "reports"
    reports.mkdir(parents=True, exist_ok=True)
    points = manifest.points()
    tasks = [(i, pt, tier, manifest.seed) for i, pt in enumerate(points)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_sweep_task, *zip(*tasks)))
    else:
        results = [_sweep_task(*t) for t in tasks]
    results.sort(key=lambda r: r[0])

    violated = False
    skips = []
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_HEADER)
        for (i, rep, reason), pt in zip(results, points):
            w.writerow(_row(pt, rep, reason))
            if rep is None:
                skips.append(f"{i}\t{pt[0]}\t{reason}")
                log.info("skipped point %d (%s): %s", i, pt[0], reason)
                continue
            (reports / f"{i:04d}_{rep.theorem_id}.json").write_text(
                rep.to_json(timestamps=False) + "\n")
            violated |= rep.verdict == "violated"
    (out / "skipped.log").write_text("".join(s + "\n" for s in skips))
    print(f"{len(points)} points: {len(points) - len(skips)} reports, {len(skips)} skipped; "
          f"summary at {out / 'summary.csv'}", file=sys.stderr)
    return EXIT_VIOLATED if violated else EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracbed", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", help="evaluate closed-form constants")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--beta", type=float, required=True)
    c.add_argument("--alpha", type=float, default=0.0)
    c.add_argument("--p", type=float, default=2.0)
    c.add_argument("--which", choices=CONSTANT_NAMES + ("all",), default="all")
    c.add_argument("--format", choices=("json", "csv", "text"), default="text")
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("verify", help="evaluate one inequality and write its report")
    v.add_argument("--theorem", choices=THEOREM_IDS, required=True)
    v.add_argument("--n", type=int, required=True)
    v.add_argument("--p", type=float, default=2.0)
    v.add_argument("--beta", type=float, default=0.0)
    v.add_argument("--alpha", type=float, default=0.0)
    v.add_argument("--lambda", dest="lam", type=float, default=None)
    v.add_argument("--gamma", type=float, default=None)
    v.add_argument("--family", choices=FAMILY_NAMES, default="gaussian")
    v.add_argument("--tier", choices=tuple(TIERS), default=None)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", default=None, help="report path (stdout if omitted)")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="run every point of a key=value manifest")
    s.add_argument("manifest")
    s.add_argument("--out", default=None)
    s.add_argument("--tier", choices=tuple(TIERS), default=None)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
