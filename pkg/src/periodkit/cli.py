"""Command-line front end: ingestion, verification suites, reporting.

Exit codes: 0 all checks satisfied, 1 at least one inequality violated,
2 input or usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import time
import warnings
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from . import bounds as bnd
from . import interpolation as itp
from . import isogeny as iso
from . import modular, serre, theta
from .bounds import BoundReport
from .heights import (
    CurveRecord,
    convert_height,
    faltings_height_silverman,
    height_inequality_suite,
    hetj_report,
    weil_height_rational_j,
)
from .lattice import (
    EllipticLattice,
    PolarizedTorus,
    SiegelTau,
    Subspace,
    UnimodularMap,
    avoidance_minimum,
    rho_inverse_squared,
    shortest_vector,
    siegel_reduce,
    smith_index,
)

TOOL_VERSION = "0.1.0"
SUITES = ("all", "lattice", "modular", "theta", "heights", "bounds", "interpolation", "isogeny", "serre")


# ---------------------------------------------------------------------------
# Manifest and reporting
# ---------------------------------------------------------------------------

@dataclass
class RunManifest:
    suites: list
    reports: list  # list of BoundReport.as_dict() dictionaries
    tolerances: dict
    wall_time: Optional[float]
    tool_version: str = TOOL_VERSION
    input_digests: dict = field(default_factory=dict)

    @property
    def all_satisfied(self) -> bool:
        return all(r["satisfied"] for r in self.reports)

    def to_dict(self) -> dict:
        return {
            "suites": list(self.suites),
            "reports": [dict(r) for r in self.reports],
            "tolerances": dict(self.tolerances),
            # nulled for byte-identical reports across runs; kept on the object
            "wall_time": None,
            "tool_version": self.tool_version,
            "input_digests": dict(self.input_digests),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "RunManifest":
        return cls(
            suites=list(d["suites"]),
            reports=[dict(r) for r in d["reports"]],
            tolerances=dict(d["tolerances"]),
            wall_time=d.get("wall_time"),
            tool_version=d.get("tool_version", TOOL_VERSION),
            input_digests=dict(d.get("input_digests", {})),
        )


def _render_json(obj, indent: int = 0) -> str:
    """Canonical JSON: sorted keys, floats at 17 significant digits."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError("non-finite float in report")
        return format(obj, ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = ",\n".join(inner + _render_json(v, indent + 1) for v in obj)
        return "[\n" + items + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{inner}{json.dumps(str(k))}: {_render_json(v, indent + 1)}"
            for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))
        )
        return "{\n" + items + "\n" + pad + "}"
    if isinstance(obj, (np.floating,)):
        return _render_json(float(obj), indent)
    if isinstance(obj, (np.integer,)):
        return str(int(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def emit_report(manifest: RunManifest, format: str = "text", path: Optional[str] = None) -> None:
    """Write the manifest as a human table or canonical JSON."""
    if format == "json":
        text = _render_json(manifest.to_dict()) + "\n"
    elif format == "text":
        lines = [f"suites: {', '.join(manifest.suites)}  (tool {manifest.tool_version})"]
        name_w = max((len(r["name"]) for r in manifest.reports), default=4)
        lines.append(f"{'check':<{name_w}}  {'lhs':>13} {'rhs':>13} {'margin':>13}  verdict")
        for r in manifest.reports:
            verdict = "PASS" if r["satisfied"] else "FAIL"
            lines.append(
                f"{r['name']:<{name_w}}  {r['lhs']:>13.6g} {r['rhs']:>13.6g} {r['margin']:>13.3g}  {verdict}"
            )
        n_bad = sum(not r["satisfied"] for r in manifest.reports)
        wt = f"{manifest.wall_time:.2f}s" if manifest.wall_time is not None else "n/a"
        lines.append(f"{len(manifest.reports)} checks, {n_bad} failed, wall time {wt}")
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {format!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# Ingestion
# ---------------------------------------------------------------------------

def default_fixture_path() -> str:
    override = os.environ.get("PTK_FIXTURES")
    if override:
        return os.path.join(override, "curves.jsonl")
    return str(resources.files("periodkit").joinpath("fixtures/curves.jsonl"))


def _record_from_obj(obj: dict) -> CurveRecord:
    embeddings = []
    for emb in obj["embeddings"]:
        re, im = float(emb["tau_re"]), float(emb["tau_im"])
        try:
            embeddings.append(SiegelTau(re, im))
        except ValueError:
            reduced, _ = siegel_reduce(EllipticLattice(1.0, complex(re, im)))
            warnings.warn(
                f"record {obj.get('label', '?')!r}: embedding ({re}, {im}) reduced to "
                f"({reduced.re}, {reduced.im})",
                stacklevel=3,
            )
            embeddings.append(reduced)
    j = None
    if "j_num" in obj or "j_den" in obj:
        j = (int(obj["j_num"]), int(obj.get("j_den", "1")))
    return CurveRecord(
        label=str(obj["label"]),
        degree=int(obj["degree"]),
        embeddings=tuple(embeddings),
        log_norm_minimal_discriminant=float(obj["log_norm_minimal_discriminant"]),
        j_rational=j,
    )


def ingest_curves(path: str) -> list[CurveRecord]:
    """Parse newline-delimited JSON records; skip invalid lines with a warning."""
    records: list[CurveRecord] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                records.append(_record_from_obj(json.loads(line)))
            except (KeyError, TypeError, ValueError) as exc:
                warnings.warn(f"{path}:{lineno}: skipped invalid record: {exc}", stacklevel=2)
    return records


def _digest(path: str) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        h.update(fh.read())
    return h.hexdigest()


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _product_torus(tau: complex) -> PolarizedTorus:
    periods = [[1.0, tau, 0.0, 0.0], [0.0, 0.0, 1.0, tau]]
    H = np.diag([1.0 / tau.imag, 1.0 / tau.imag])
    return PolarizedTorus(2, periods, H)


def _random_reduced_tau(rng: np.random.Generator) -> SiegelTau:
    while True:
        re = rng.uniform(-0.5, 0.5)
        im = rng.uniform(math.sqrt(3.0) / 2.0, 2.5)
        if re * re + im * im >= 1.0 + 1e-6:
            return SiegelTau(re, im)


def _equality_report(name: str, value: float, expected: float, tol: float, **inputs) -> BoundReport:
    return BoundReport(name, abs(value - expected), tol, inputs={"value": value, "expected": expected, **inputs})


def _suite_lattice(records, tol: float, seed: int) -> list[BoundReport]:
    rng = np.random.default_rng(seed)
    reports: list[BoundReport] = []
    worst = 0.0
    for _ in range(200):
        t = _random_reduced_tau(rng)
        a, b, c = int(rng.integers(-10, 11)), int(rng.integers(-10, 11)), int(rng.integers(-10, 11))
        # complete (a b / c d) to determinant 1 by solving a d - b c = 1
        found = None
        for d in range(-60, 61):
            if a * d - b * c == 1:
                found = d
                break
        if found is None:
            continue
        scr = UnimodularMap(a, b, c, found).apply(t.value)
        back, _ = siegel_reduce(EllipticLattice(1.0, scr))
        worst = max(worst, abs(back.value - t.value))
    reports.append(BoundReport("siegel_round_trip_200", worst, 1e-10, inputs={"seed": seed}))
    worst = 0.0
    for _ in range(10):
        t = _random_reduced_tau(rng)
        torus = _product_torus(t.value)
        delta = avoidance_minimum(torus, Subspace(2, [[1.0, 1.0]]))
        rho = math.sqrt(1.0 / rho_inverse_squared(t))
        worst = max(worst, abs(delta - rho / math.sqrt(2.0)))
    reports.append(BoundReport("diagonal_avoidance_identity_10", worst, 1e-10, inputs={"seed": seed}))
    t = SiegelTau(0.0, 2.0)
    torus1 = PolarizedTorus(1, [[1.0, 2j]], [[0.5]])
    _, norm = shortest_vector(torus1)
    reports.append(_equality_report("shortest_vector_tau_2i", norm * norm, 0.5, 1e-12))
    idx, cyc = smith_index([[2, 0], [0, 2]])
    reports.append(_equality_report("smith_diag22_index", float(idx), 4.0, 0.0, cyclic=cyc))
    return reports


def _suite_modular(records, tol: float, seed: int) -> list[BoundReport]:
    reports: list[BoundReport] = []
    ji = modular.j_invariant(SiegelTau(0.0, 1.0))
    reports.append(_equality_report("j_at_i", ji.value.real, 1728.0, 1e-9, imag=abs(ji.value.imag)))
    jc = modular.j_invariant(SiegelTau(0.5, math.sqrt(3.0) / 2.0))
    reports.append(_equality_report("j_at_corner", abs(jc.value), 0.0, 1e-9))
    for rec in records:
        for k, t in enumerate(rec.embeddings):
            r1, r2 = modular.check_classical_bounds(t)
            reports.append(
                BoundReport(f"j_lower[{rec.label}:{k}]", r1.lhs, r1.rhs, inputs=r1.inputs, tol=r1.tol)
            )
            reports.append(
                BoundReport(f"delta_lower[{rec.label}:{k}]", r2.lhs, r2.rhs, inputs=r2.inputs, tol=r2.tol)
            )
    reports.append(modular.silverman_f_extrema())
    return reports


def _suite_theta(records, tol: float, seed: int, quad: int) -> list[BoundReport]:
    reports: list[BoundReport] = []
    for label, mat in (
        ("i", [[1j]]),
        ("2i", [[2j]]),
        ("half_plus_sqrt3", [[0.5 + 1j * math.sqrt(3.0)]]),
    ):
        val = theta.torus_l2_norm(theta.RiemannTau(1, mat), quad)
        reports.append(_equality_report(f"l2_norm_g1[{label}]", val, 1.0, 1e-6))
    val = theta.torus_l2_norm(theta.RiemannTau(2, [[1j, 0.0], [0.0, 2j]]), max(16, quad // 4))
    reports.append(_equality_report("l2_norm_g2_diag", val, 1.0, 1e-5))
    for rec in records:
        reports.append(theta.bost_inequality_check(rec, quad))
    return reports


def _suite_heights(records, tol: float, seed: int) -> list[BoundReport]:
    reports: list[BoundReport] = []
    floor = -0.5 * math.log(2.0 * math.pi)
    for rec in records:
        h = convert_height(faltings_height_silverman(rec), "paper_h", g=1).value
        reports.append(
            BoundReport(f"height_floor[{rec.label}]", floor, h, inputs={"label": rec.label}, tol=1e-9)
        )
        if rec.j_rational is not None:
            reports.append(hetj_report(rec))
    reports += height_inequality_suite(
        isogeny=[(1.0, 1.0), (0.5, 4.0, 1.0)],
        subvariety=[(0.0, 1, 1.0)],
        products=[(0.25, -0.5, -0.25)],
        split_degrees=[(2.0, 3.0, 2.0)],
    )
    return reports


def _suite_bounds(records, tol: float, seed: int) -> list[BoundReport]:
    reports = bnd.structural_constants(500)
    _, _, checks = bnd.prop_ell_solver(1.0)
    reports += checks
    if records:
        taus = [t for rec in records for t in rec.embeddings]
        rhos = [1.0 / math.sqrt(t.im) for t in taus]
        for rec in records:
            hF = faltings_height_silverman(rec).value
            h = hF + 0.5 * math.log(math.pi)
            rec_rhos = [1.0 / math.sqrt(t.im) for t in rec.embeddings]
            reports.append(bnd.autissier_report(rec_rhos, h, 1))
            T = sum(t.im for t in rec.embeddings) / rec.degree
            reports.append(bnd.matrix_lemma_report(T, h, 1.0, 1, "eleven"))
            reports.append(bnd.matrix_lemma_report(T, hF, 1.0, 1, "fourteen"))
            t_gen, t_large, _ = bnd.prop_ell_solver(h)
            reports.append(
                BoundReport(f"ell_general[{rec.label}]", T, t_gen, inputs={"h": h})
            )
            reports.append(
                BoundReport(f"ell_large[{rec.label}]", T, t_large, inputs={"h": h})
            )
    return reports


def _suite_interpolation(records, tol: float, seed: int) -> list[BoundReport]:
    reports = itp.lemma52_checks(8, seed=seed)
    reports += itp.u_sequence(1000)
    for d in (0, 3, 10):
        for S in (2, 3, 4):
            for T in (1, 2, 3):
                sharp, simple = itp.schwarz_lemma_check(
                    itp.AnalyticTestFunction.monomial(d), itp.InterpolationParams(S, T)
                )
                reports += [sharp, simple]
    f = itp.AnalyticTestFunction.polynomial([1.0, 2.0, 0.0, 1.0])
    reports.append(itp.hermite_identity_check(f, itp.InterpolationParams(3, 2), 0.37 + 0.21j))
    return reports


def _suite_isogeny(records, tol: float, seed: int) -> list[BoundReport]:
    reports = [cp.report for cp in iso.chain_checkpoints()]
    reports += iso.surface_bound_constants()
    general = iso.explicit_bound(iso.IsogenyBoundInput(1, 900.0, "general"))
    reports.append(_equality_report("general_closed_form", general.bound, 9.70225e12, 1e-3))
    real = iso.explicit_bound(iso.IsogenyBoundInput(1, 1.0, "real_place_non_cm"))
    reports.append(_equality_report("real_closed_form", real.bound, 3583.0, 1e-9))
    for D in (1, 2, 5):
        for hF in (0.0, 10.0, 985.0):
            H = max(hF + 0.5 * math.log(math.pi), 1000.0)
            delta = iso.implicit_delta_solver(2.0 * D, H)
            cap = iso.explicit_bound(iso.IsogenyBoundInput(D, hF, "general")).bound
            reports.append(
                BoundReport(
                    f"implicit_vs_explicit[D={D},hF={hF:g}]",
                    delta,
                    cap,
                    inputs={"D": D, "h_F": hF, "H": H},
                )
            )
    for rec in records:
        for t in rec.embeddings:
            n = max(1, math.floor(t.re**2 + t.im**2))
            reports.append(iso.period_norm_identity(n, t))
    return reports


def _suite_serre(records, tol: float, seed: int) -> list[BoundReport]:
    th = serre.find_threshold()
    return [
        _equality_report("threshold_integer", float(th.p_star), 3094027.0, 0.0),
        BoundReport("f_above_one_at_threshold", 1.0, th.f_at_p_star, inputs={"p": th.p_star}),
        BoundReport("f_below_one_after", th.f_at_p_star_plus_1, 1.0, inputs={"p": th.p_star + 1}),
    ]


def run_suite(
    suite: str,
    records: Sequence[CurveRecord],
    tolerances: Optional[dict] = None,
    seed: int = 0,
    quad_points: int = 64,
    input_digests: Optional[dict] = None,
) -> RunManifest:
    """Execute one named suite (or all) and collect a manifest."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}")
    tols = {"tol": 1e-9, "quad_points": quad_points, "seed": seed}
    if tolerances:
        tols.update(tolerances)
    t0 = time.perf_counter()
    dispatch = {
        "lattice": lambda: _suite_lattice(records, tols["tol"], seed),
        "modular": lambda: _suite_modular(records, tols["tol"], seed),
        "theta": lambda: _suite_theta(records, tols["tol"], seed, quad_points),
        "heights": lambda: _suite_heights(records, tols["tol"], seed),
        "bounds": lambda: _suite_bounds(records, tols["tol"], seed),
        "interpolation": lambda: _suite_interpolation(records, tols["tol"], seed),
        "isogeny": lambda: _suite_isogeny(records, tols["tol"], seed),
        "serre": lambda: _suite_serre(records, tols["tol"], seed),
    }
    names = list(dispatch) if suite == "all" else [suite]
    reports: list[dict] = []
    for name in names:
        for rep in dispatch[name]():
            d = rep.as_dict()
            d["suite"] = name
            reports.append(d)
    return RunManifest(
        suites=names,
        reports=reports,
        tolerances=tols,
        wall_time=time.perf_counter() - t0,
        input_digests=dict(input_digests or {}),
    )


# ---------------------------------------------------------------------------
# Argument parsing and entry point
# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ptk", description="period and isogeny bound toolkit")
    p.add_argument("--tol", type=float, default=1e-9, help="floating tolerance (default 1e-9)")
    p.add_argument("--quad-points", type=int, default=64, help="quadrature points per axis")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    sub = p.add_subparsers(dest="command", required=True)

    pr = sub.add_parser("reduce", help="reduce a period ratio to the fundamental domain")
    pr.add_argument("re", type=float)
    pr.add_argument("im", type=float)

    pr = sub.add_parser("rho", help="inverse squared lattice minimum of a reduced ratio")
    pr.add_argument("re", type=float)
    pr.add_argument("im", type=float)

    pr = sub.add_parser("delta", help="diagonal avoidance minimum for the squared curve")
    pr.add_argument("re", type=float)
    pr.add_argument("im", type=float)

    pt = sub.add_parser("theta", help="theta-related checks")
    tsub = pt.add_subparsers(dest="theta_command", required=True)
    tc = tsub.add_parser("check", help="torus integrals for one tau")
    tc.add_argument("--tau-re", type=float, default=0.0)
    tc.add_argument("--tau-im", type=float, default=1.0)

    ph = sub.add_parser("height", help="stable heights of ingested curves")
    ph.add_argument("--curves", default=None, help="JSONL file (default: bundled fixtures)")

    pb = sub.add_parser("bound", help="bound calculators")
    bsub = pb.add_subparsers(dest="bound_command", required=True)
    bm = bsub.add_parser("matrix-lemma", help="mean inverse-square minima vs height")
    bm.add_argument("--curves", default=None)
    bi = bsub.add_parser("isogeny", help="explicit isogeny degree bounds")
    bi.add_argument("--case", choices=("general", "cm", "real"), default="general")
    bi.add_argument("--degree", type=int, default=1)
    bi.add_argument("--h-f", type=float, default=1.0, dest="h_f")

    ps = sub.add_parser("serre", help="prime threshold computation")
    ssub = ps.add_subparsers(dest="serre_command", required=True)
    ssub.add_parser("threshold", help="locate the exact integer threshold")

    pv = sub.add_parser("verify", help="run a verification suite")
    pv.add_argument("--suite", choices=SUITES, default="all")
    pv.add_argument("--json", default=None, help="also write canonical JSON report here")
    pv.add_argument("--curves", default=None)
    return p


def _load_records(path: Optional[str]) -> tuple[list[CurveRecord], dict]:
    actual = path or default_fixture_path()
    records = ingest_curves(actual)
    return records, {actual: _digest(actual)}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "reduce":
            t, m = siegel_reduce(EllipticLattice(1.0, complex(args.re, args.im)))
            print(f"tau = {t.re:.17g} + {t.im:.17g}i")
            print(f"map = ({m.a}, {m.b}; {m.c}, {m.d})")
            return 0
        if args.command == "rho":
            t, _ = siegel_reduce(EllipticLattice(1.0, complex(args.re, args.im)))
            print(f"rho^-2 = {rho_inverse_squared(t):.17g}")
            return 0
        if args.command == "delta":
            t, _ = siegel_reduce(EllipticLattice(1.0, complex(args.re, args.im)))
            torus = _product_torus(t.value)
            d = avoidance_minimum(torus, Subspace(2, [[1.0, 1.0]]))
            rho = math.sqrt(1.0 / rho_inverse_squared(t))
            print(f"delta = {d:.17g}")
            print(f"rho/sqrt(2) = {rho / math.sqrt(2.0):.17g}")
            return 0
        if args.command == "theta":
            rt = theta.RiemannTau(1, [[complex(args.tau_re, args.tau_im)]])
            l2 = theta.torus_l2_norm(rt, args.quad_points)
            li = theta.torus_log_integral(rt, args.quad_points)
            print(f"l2 integral  = {l2:.12g} (expect 1)")
            print(f"log integral = {li:.12g} (expect <= 0)")
            return 0 if abs(l2 - 1.0) < 1e-5 and li <= 1e-9 else 1
        if args.command == "height":
            records, _ = _load_records(args.curves)
            for rec in records:
                hF = faltings_height_silverman(rec)
                h = convert_height(hF, "paper_h", g=1)
                hj = weil_height_rational_j(rec.j_rational) if rec.j_rational else float("nan")
                print(f"{rec.label}: h_F = {hF.value:.12g}, h = {h.value:.12g}, h(j) = {hj:.12g}")
            return 0
        if args.command == "bound" and args.bound_command == "matrix-lemma":
            records, digests = _load_records(args.curves)
            manifest = run_suite("bounds", records, {"tol": args.tol}, args.seed, args.quad_points, digests)
            emit_report(manifest, "text")
            return 0 if manifest.all_satisfied else 1
        if args.command == "bound" and args.bound_command == "isogeny":
            case = {"general": "general", "cm": "cm", "real": "real_place_non_cm"}[args.case]
            out = iso.explicit_bound(iso.IsogenyBoundInput(args.degree, args.h_f, case))
            print(f"bound = {out.bound:.17g}")
            if out.simplified is not None:
                print(f"simplified = {out.simplified:.17g}")
            return 0
        if args.command == "serre":
            th = serre.find_threshold()
            print(f"p_star = {th.p_star}")
            print(f"f(p_star)     = {th.f_at_p_star:.17g}")
            print(f"f(p_star + 1) = {th.f_at_p_star_plus_1:.17g}")
            return 0
        if args.command == "verify":
            records, digests = _load_records(args.curves)
            manifest = run_suite(
                args.suite, records, {"tol": args.tol}, args.seed, args.quad_points, digests
            )
            emit_report(manifest, "text")
            if args.json:
                emit_report(manifest, "json", args.json)
            return 0 if manifest.all_satisfied else 1
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
