"""Command-line harness: verification suites across q, CSV/JSON reports.

Commands: census, verify, sweep, maxop, examples.  Identical config and
seed produce byte-identical CSV output; exit status is 0 when every
checked bound holds, 1 when at least one fails, 2 on bad configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import DomainError, Field
from . import heisenberg as hz
from . import maximal as mx
from . import fourier as fr
from . import constructions as cn

DEFAULT_QS = (3, 5, 7, 9, 11, 13)
BIG_QS = (16, 25, 27)
SWEEP_QS = (5, 7, 9, 11, 13, 25)
N2_SWEEP_QS = (3, 5, 7, 9)

CSV_HEADER = ("suite", "bound", "q", "n", "u", "v", "lhs", "rhs", "ratio",
              "holds", "seed", "trial")

ALL_SUITES = ("census", "planar-l2", "ttstar", "diag", "offdiag", "rd-l2",
              "fourier", "exponents", "lowerbounds", "examples",
              "kakeya-bounds", "moments")


@dataclass
class SuiteConfig:
    qs: tuple = DEFAULT_QS
    n: int = None
    suites: tuple = ALL_SUITES
    seed: int = 0
    trials: int = None      # None: per-suite default
    tol: float = 1e-9
    out: str = None
    dump_fourier: str = None
    big: bool = False
    modulus: tuple = None
    qs_explicit: bool = False

    def field_for(self, q):
        if self.modulus is not None and len(self.qs) == 1:
            return Field(q, modulus=self.modulus)
        return Field(q)

    def ntrials(self, default):
        return default if self.trials is None else self.trials

    def all_qs(self):
        qs = list(self.qs)
        if self.big:
            qs += [q for q in BIG_QS if q not in qs]
        return qs


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


def make_row(suite, bound, q, n, u, v, lhs, rhs, holds, seed="", trial="",
             sense="le"):
    if rhs:
        ratio = lhs / rhs
    else:
        ratio = math.inf if lhs else 1.0
    return {
        "suite": suite, "bound": bound, "q": q, "n": n,
        "u": str(u) if u != "" else "", "v": str(v) if v != "" else "",
        "lhs": lhs, "rhs": rhs, "ratio": ratio, "holds": holds,
        "seed": seed, "trial": trial,
    }


def report_row(suite, rep, seed="", trial=""):
    return make_row(suite, rep.name, rep.q, rep.n, rep.u, rep.v,
                    rep.lhs, rep.rhs, rep.holds, seed, trial)


def rows_to_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in rows:
        writer.writerow([_fmt(r[k]) for k in CSV_HEADER])
    return buf.getvalue()


def _suite_seed(cfg, suite, q, trial):
    idx = ALL_SUITES.index(suite) if suite in ALL_SUITES else 99
    return ((cfg.seed * 1000003 + idx) * 1009 + q) * 10007 + trial


def _rng(cfg, suite, q, trial):
    idx = ALL_SUITES.index(suite) if suite in ALL_SUITES else 99
    return mx.seeded_rng(cfg.seed, idx, q, trial)


# ---------------------------------------------------------------------------
# suites


def suite_census(cfg):
    rows = []
    ns = (1, 2) if cfg.n is None else (cfg.n,)
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        for n in ns:
            if n >= 2 and q > 7:
                continue  # enumeration of all lines gets large
            try:
                rec = hz.census(fld, n)
                pairs = [
                    ("points", rec.points), ("proj-dirs", rec.proj_directions),
                    ("refined-dirs", rec.refined_directions),
                    ("lines", rec.lines),
                    ("lines-per-dir", rec.lines_per_direction),
                    ("lines-per-refined-dir", rec.lines_per_refined_direction),
                    ("lines-per-point", rec.lines_per_point),
                ]
                for name, val in pairs:
                    rows.append(make_row("census", f"census-{name}", q, n,
                                         "", "", val, val, True))
            except AssertionError as exc:
                rows.append(make_row("census", f"census-mismatch:{exc}", q, n,
                                     "", "", 0.0, 0.0, False))
    return rows


def suite_planar_l2(cfg):
    """Every planar linearization has operator norm exactly sqrt(2q)."""
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        target = math.sqrt(2 * q)
        fams = [("default", mx.linearize("planar", fld))]
        for trial in range(cfg.ntrials(20)):
            seed = _suite_seed(cfg, "planar-l2", q, trial)
            fams.append((trial, mx.linearize("planar", fld, seed=seed)))
        g = mx.random_complex_grid(mx.Domain.affine(fld, 2),
                                   _rng(cfg, "planar-l2", q, 0))
        fams.append(("maximizing", mx.linearize("planar", fld, for_function=g)))
        for tag, fam in fams:
            sigma = mx.l2_operator_norm(fam)
            holds = abs(sigma - target) <= 1e-8 * target
            rows.append(make_row("planar-l2", "planar-opnorm-sqrt2q", q, 1,
                                 2, 2, sigma, target, holds, trial=tag))
    return rows


def suite_ttstar(cfg):
    """TT* eigenvalues are {2q} + {q-1} x q for every planar family."""
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        expected = np.array([2 * q] + [q - 1] * q, dtype=np.float64)
        for trial in range(cfg.ntrials(20)):
            seed = _suite_seed(cfg, "ttstar", q, trial)
            fam = mx.linearize("planar", fld, seed=seed)
            eigs = mx.ttstar_spectrum(fam)
            dev = float(np.abs(eigs - expected).max())
            rows.append(make_row("ttstar", "ttstar-two-eigenvalues", q, 1,
                                 2, 2, dev, 1e-8, dev <= 1e-8, seed, trial))
    return rows


def _structured_h1(fld):
    out = [("delta", cn.extremal_function("point-mass", fld)),
           ("line", cn.extremal_function("single-line", fld)),
           ("bush", cn.extremal_function("bush", fld)),
           ("constant", cn.extremal_function("constant", fld))]
    if fld.q % 2:
        out.append(("paraboloid", cn.extremal_function("paraboloid", fld)))
    return out


def _bound_rows(cfg, suite, q, specs, trials):
    fld = cfg.field_for(q)
    dom_h = mx.Domain.heisenberg(fld, 1)
    dom_a = mx.Domain.affine(fld, 2)
    inputs = {"heis": [], "refined": [], "affine": []}
    for tag, F in _structured_h1(fld):
        inputs["heis"].append((tag, F))
        inputs["refined"].append((tag, F))
    inputs["affine"].append(("plane-ones", mx.GridFunction.constant(dom_a)))
    inputs["affine"].append(("plane-delta", mx.GridFunction.delta(dom_a)))
    for trial in range(trials):
        rng = _rng(cfg, suite, q, trial)
        inputs["heis"].append((trial, mx.random_complex_grid(dom_h, rng)))
        inputs["refined"].append((trial, mx.random_complex_grid(dom_h, rng)))
        inputs["affine"].append((trial, mx.random_complex_grid(dom_a, rng)))
    rows = []
    for spec in specs:
        for tag, F in inputs[spec.operator]:
            rep = mx.verify_bound(spec, F, tol=cfg.tol)
            rows.append(report_row(suite, rep, trial=tag))
    return rows


def suite_diag(cfg):
    rows = []
    for q in cfg.all_qs():
        specs = [s for s in mx.bound_catalog(q) if "diag" in s.name
                 or s.name.startswith("planar-l") or s.name.startswith("rd-1")
                 or s.name.startswith("rd-inf")]
        rows.extend(_bound_rows(cfg, "diag", q, specs, cfg.ntrials(25)))
    return rows


def suite_offdiag(cfg):
    rows = []
    for q in cfg.all_qs():
        rows.extend(_bound_rows(cfg, "offdiag", q, mx.offdiag_catalog(),
                                cfg.ntrials(10)))
    return rows


def suite_rd_l2(cfg):
    """Theorem-grade l2 bound: 5 sqrt(q), plus the delta sharpness witness."""
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        dom = mx.Domain.heisenberg(fld, 1)
        spec = mx.BoundSpec("rd-l2-sharp", "refined", mx.ExtendedExponent(2),
                            mx.ExtendedExponent(2), 5.0, Fraction(1, 2))
        worst = 0.0
        for trial in range(cfg.ntrials(200)):
            F = mx.random_complex_grid(dom, _rng(cfg, "rd-l2", q, trial))
            rep = mx.verify_bound(spec, F, tol=cfg.tol)
            worst = max(worst, rep.lhs / (math.sqrt(q) * F.norm(2)))
            rows.append(report_row("rd-l2", rep, trial=trial))
        rows.append(make_row("rd-l2", "rd-l2-max-observed-ratio", q, 1, 2, 2,
                             worst, 5.0, worst <= 5.0))
        delta_ratio = mx.lp_norm(mx.refined_max_op(
            mx.GridFunction.delta(dom)), 2)
        rows.append(make_row("rd-l2", "rd-l2-delta-sharpness", q, 1, 2, 2,
                             delta_ratio, math.sqrt(q),
                             delta_ratio >= math.sqrt(q), sense="ge"))
    return rows


def suite_fourier(cfg):
    """Per random input: defect sizes, worst-over-xi counting ratios, splits."""
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        dom = mx.Domain.heisenberg(fld, 1)
        for trial in range(cfg.ntrials(100)):
            f = mx.random_complex_grid(dom, _rng(cfg, "fourier", q, trial))
            tab = fr.central_fourier(f)
            fam = mx.linearize("refined", fld, for_function=f)
            pl = tab.plancherel_defect(f)
            rows.append(make_row("fourier", "plancherel-defect", q, 1, 2, 2,
                                 pl, cfg.tol, pl <= cfg.tol, trial=trial))
            dc = fr.decomposition_defect(f, fam)
            rows.append(make_row("fourier", "decomposition-defect", q, 1,
                                 "", "", dc, cfg.tol, dc <= cfg.tol,
                                 trial=trial))
            key_nv = key_v = 0.0
            for xi in range(1, q):
                r1, r2 = fr.key_counting_check(tab, xi, tol=cfg.tol)
                key_nv = max(key_nv, r1.lhs / r1.rhs)
                key_v = max(key_v, r2.lhs / r2.rhs)
            for name, val in (("key-nonvertical", key_nv),
                              ("key-vertical", key_v)):
                rows.append(make_row("fourier", f"fourier-{name}", q, 1, 2, 2,
                                     val, 1.0, val <= 1.0 + cfg.tol,
                                     trial=trial))
            for rep in fr.split_bound_check(f, fam, tol=cfg.tol):
                rows.append(report_row("fourier", rep, trial=trial))
            if trial == 0 and cfg.dump_fourier:
                _dump_fourier(cfg.dump_fourier, fld, tab)
        fiber_max = 0
        for xi in range(1, q):
            for rho in range(q):
                fiber_max = max(fiber_max,
                                max(fr.quadratic_fiber_count(fld, xi, rho)))
        rows.append(make_row("fourier", "quadratic-fiber-count", q, 1, "", "",
                             fiber_max, 2, fiber_max <= 2))
    return rows


def _dump_fourier(path, fld, tab):
    doc = {
        "q": fld.q,
        "central": [[[z.real, z.imag] for z in row]
                    for plane in tab.table for row in plane],
    }
    uts = {}
    for xi in range(1, fld.q):
        ut = fr.u_tables(tab, xi)
        uts[str(xi)] = {
            "u": [[[z.real, z.imag] for z in row] for row in ut.u],
            "u_inf": [[z.real, z.imag] for z in ut.u_inf],
        }
    doc["u_tables"] = uts
    with open(path, "w") as fh:
        json.dump(doc, fh)


LOWER_BOUND_PLAN = (
    # operator, n, kind, (u, v) pairs
    ("heis", 1, "point-mass", ((1, 1), (2, 2), (2, 1))),
    ("heis", 1, "single-line", ((2, 2), ("inf", 1), (4, 4))),
    ("heis", 1, "bush", (("inf", 1), (4, 2), ("inf", "inf"), (2, 2))),
    ("heis", 2, "point-mass", ((1, 1), (2, 2), (4, 4))),
    ("heis", 2, "single-line", ((2, 2), ("inf", 1), (4, 4))),
    ("heis", 2, "bush", (("inf", 1), (4, 4), ("inf", "inf"))),
    ("refined", 1, "point-mass", ((1, 1), (2, 2), (3, 1))),
    ("refined", 1, "single-line", ((2, 2), ("inf", "inf"), (4, 4))),
    ("refined", 1, "two-lines-blocking", ((2, 2), (1, 1), (2, 4))),
    ("refined", 1, "constant", ((3, 3), ("inf", 1), (2, 2))),
)


def suite_lowerbounds(cfg):
    """Exact integer certificates for every exponent-formula term."""
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        for operator, n, kind, pairs in LOWER_BOUND_PLAN:
            if n == 2 and q > 7:
                continue
            for u, v in pairs:
                rep = cn.lower_bound_ratio(kind, fld, u, v, n=n,
                                           operator=operator)
                rhs = rep.certified_constant * mx.q_pow(q, rep.term)
                holds = rep.cert_holds and rep.ratio >= rhs / (1 + cfg.tol)
                rows.append(make_row(
                    "lowerbounds", f"{operator}-{kind}-term", q, n,
                    rep.u, rep.v, rep.ratio, rhs, holds))
    return rows


SLOPE_PLAN = (
    # label, operator, n, kind, u, v, q list override (None: config qs)
    ("heis1-point-mass", "heis", 1, "point-mass", 2, 1, None),
    ("heis1-single-line", "heis", 1, "single-line", 4, 4, None),
    ("heis1-bush", "heis", 1, "bush", 2, 2, None),
    ("heis1-bush-l1", "heis", 1, "bush", "inf", 1, None),
    ("heis2-point-mass", "heis", 2, "point-mass", 4, 4, N2_SWEEP_QS),
    ("heis2-single-line", "heis", 2, "single-line", 4, 4, N2_SWEEP_QS),
    ("heis2-bush", "heis", 2, "bush", 4, 4, N2_SWEEP_QS),
    ("rd-point-mass", "refined", 1, "point-mass", 2, 2, None),
    ("rd-single-line", "refined", 1, "single-line", 2, 2, None),
    ("rd-blocking", "refined", 1, "two-lines-blocking", 2, 2, None),
    ("rd-constant", "refined", 1, "constant", 3, 3, None),
)


def _fit_slope(qs, ratios):
    lq = np.log(np.array(qs, dtype=np.float64))
    lr = np.log(np.array(ratios, dtype=np.float64))
    lq -= lq.mean()
    return float((lq * (lr - lr.mean())).sum() / (lq * lq).sum())


def sweep_rows(cfg, suite_name="exponents"):
    """Ratio-by-q rows plus a log-log slope row per test-function family."""
    rows = []
    for label, operator, n, kind, u, v, qs in SLOPE_PLAN:
        qs = list(cfg.qs) if qs is None else list(qs)
        if len(qs) < 3:
            raise DomainError("slope fitting needs at least 3 q values")
        ratios = []
        term = None
        for q in qs:
            fld = cfg.field_for(q)
            rep = cn.lower_bound_ratio(kind, fld, u, v, n=n, operator=operator)
            term = rep.term
            ratios.append(rep.ratio)
            rows.append(make_row(suite_name, f"{label}-ratio", q, n,
                                 rep.u, rep.v, rep.ratio,
                                 mx.q_pow(q, term), rep.cert_holds))
        slope = _fit_slope(qs, ratios)
        rows.append(make_row(suite_name, f"{label}-slope", "", n, u, v,
                             slope, float(term),
                             abs(slope - float(term)) <= 0.1))
    return rows


def suite_exponents(cfg):
    # slope fits need q large enough that lower-order terms decay; the
    # default window runs 5..25 regardless of the verify q-list
    qs = cfg.qs if cfg.qs_explicit and len(cfg.qs) >= 3 else SWEEP_QS
    sub = SuiteConfig(qs=tuple(qs), seed=cfg.seed, modulus=cfg.modulus)
    return sweep_rows(sub, "exponents")


def suite_examples(cfg):
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        dirs = hz.enumerate_refined_directions(fld, 1)
        om0 = dirs[len(dirs) // 2]
        e1 = cn.example_affine_not_refined(om0)
        aff1, _ = cn.is_affine_kakeya(cn.as_affine_set(e1))
        ref1, wit1 = cn.is_full_refined_kakeya(e1)
        om0_missing = not any(e1.contains_line(L)
                              for L in hz.lines_with_refined_direction(om0))
        rows.append(make_row("examples", "ex-affine-not-refined", q, 1, "", "",
                             float(aff1 and not ref1 and om0_missing), 1.0,
                             aff1 and not ref1 and om0_missing,
                             trial=str(om0)))
        rows.append(make_row("examples", "ex-affine-not-refined-size", q, 1,
                             "", "", len(e1), q**3 - q, len(e1) == q**3 - q))

        rep = cn.lower_bound_ratio("constant", fld, 3, 3, operator="refined")
        rows.append(make_row("examples", "ex-l3-sharpness", q, 1, 3, 3,
                             rep.ratio, mx.q_pow(q, Fraction(2, 3)),
                             rep.cert_holds))

        if q % 2 and q > 3:
            e2 = cn.example_refined_not_affine(fld)
            aff2, wit2 = cn.is_affine_kakeya(cn.as_affine_set(e2))
            ref2, _ = cn.is_full_refined_kakeya(e2)
            vertical = hz.ProjectiveDirection(fld, (0, 0, 1))
            rows.append(make_row("examples", "ex-refined-not-affine", q, 1,
                                 "", "",
                                 float(ref2 and not aff2 and wit2 == vertical),
                                 1.0, ref2 and not aff2 and wit2 == vertical,
                                 trial=str(wit2)))
            fiber = int(cn.vertical_fiber_sizes(e2).max())
            rows.append(make_row("examples", "ex-refined-fiber-bound", q, 1,
                                 "", "", fiber, (q + 3) // 2,
                                 fiber <= (q + 3) // 2))

        if q % 2:
            para = cn.extremal_function("paraboloid", fld)
            g = mx.project_aggregate(para, 1)
            m2g = mx.affine_max_op(g)
            mh = mx.heis_max_op(para)
            rows.append(make_row("examples", "paraboloid-projected-max", q, 1,
                                 1, "", float(m2g.min()), float(q),
                                 bool(m2g.min() == q and m2g.max() == q)))
            rows.append(make_row("examples", "paraboloid-heis-max", q, 1,
                                 "", "", float(mh.max()), 2.0,
                                 bool(mh.max() <= 2)))
    return rows


def suite_kakeya_bounds(cfg):
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        dom = mx.Domain.heisenberg(fld, 1)
        dirs = hz.enumerate_refined_directions(fld, 1)
        cases = [("full-space", cn.PointSet.full(dom), dirs, q)]
        if q % 2 and q > 3:
            e2 = cn.example_refined_not_affine(fld)
            cases.append(("refined-kakeya-set", e2, dirs, q))
        for trial in range(cfg.ntrials(5)):
            rng = _rng(cfg, "kakeya-bounds", q, trial)
            k = q + 1
            chosen = [dirs[int(i)] for i in
                      rng.choice(len(dirs), size=k, replace=False)]
            m_target = q // 2 + 1
            idx = set()
            for om in chosen:
                line = hz.lines_with_refined_direction(om)[
                    int(rng.integers(q))]
                pts = list(line.point_indices)
                take = rng.choice(q, size=m_target, replace=False)
                idx.update(pts[int(i)] for i in take)
            ps = cn.PointSet(dom, idx)
            mvals = mx.refined_max_op(ps.indicator())
            pos = {om: i for i, om in enumerate(dirs)}
            m = int(min(mvals[pos[om]] for om in chosen))
            cases.append((f"planted-{trial}", ps, chosen, m))
        for tag, ps, omega, m in cases:
            for u, v in ((2, 2), (2, 4), (3, 3)):
                rep = cn.kakeya_bound_report(ps, omega, m, u, v, tol=cfg.tol)
                r = report_row("kakeya-bounds", rep, trial=tag)
                r["bound"] = f"kakeya-size-({u},{v})"
                rows.append(r)
    return rows


def suite_moments(cfg):
    rows = []
    for q in cfg.all_qs():
        fld = cfg.field_for(q)
        dom = mx.Domain.heisenberg(fld, 1)
        sets = [("line", cn.extremal_set("single-line", fld)),
                ("bush", cn.extremal_set("bush", fld)),
                ("full", cn.PointSet.full(dom)),
                ("blocking", cn.extremal_set("two-lines-blocking", fld))]
        if q % 2 and q > 3:
            sets.append(("refined-kakeya", cn.example_refined_not_affine(fld)))
        for tag, ps in sets:
            for s in (2, 3):
                rep = cn.moment_report(ps, s, tol=cfg.tol)
                rows.append(report_row("moments", rep, trial=tag))
    return rows


SUITES = {
    "census": suite_census,
    "planar-l2": suite_planar_l2,
    "ttstar": suite_ttstar,
    "diag": suite_diag,
    "offdiag": suite_offdiag,
    "rd-l2": suite_rd_l2,
    "fourier": suite_fourier,
    "exponents": suite_exponents,
    "lowerbounds": suite_lowerbounds,
    "examples": suite_examples,
    "kakeya-bounds": suite_kakeya_bounds,
    "moments": suite_moments,
}


def run_suite(cfg):
    """Run the configured suites; returns (rows, exit_status)."""
    rows = []
    for name in cfg.suites:
        if name not in SUITES:
            print(f"unknown suite: {name}", file=sys.stderr)
            return rows, 2
    try:
        for name in cfg.suites:
            rows.extend(SUITES[name](cfg))
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return rows, 2
    status = 0
    for r in rows:
        if r["seed"] == "":
            r["seed"] = cfg.seed
        if not r["holds"]:
            print("VIOLATED: " + ",".join(_fmt(r[k]) for k in CSV_HEADER),
                  file=sys.stderr)
            status = 1
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(rows_to_csv(rows))
    return rows, status


# ---------------------------------------------------------------------------
# grid/point-set files


def load_grid(path):
    with open(path) as fh:
        doc = json.load(fh)
    return mx.grid_from_json(doc)


def save_grid(path, F):
    with open(path, "w") as fh:
        json.dump(mx.grid_to_json(F), fh)


def load_pointset(path):
    with open(path) as fh:
        doc = json.load(fh)
    return cn.pointset_from_json(doc)


def save_pointset(path, ps):
    with open(path, "w") as fh:
        json.dump(cn.pointset_to_json(ps), fh)


# ---------------------------------------------------------------------------
# commands


def _parse_qs(text):
    try:
        qs = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise DomainError(f"bad q list {text!r}") from exc
    if not qs:
        raise DomainError("empty q list")
    return qs


def _add_common(parser):
    parser.add_argument("--q", default=None, help="comma-separated field sizes")
    parser.add_argument("--n", type=int, default=None, help="group rank")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--trials", type=int, default=None)
    parser.add_argument("--tol", type=float, default=1e-9)
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--modulus", default=None,
                        help="comma-separated modulus coefficients c0,c1,...")
    parser.add_argument("--dump-fourier", default=None,
                        help="JSON dump path for the Fourier tables")
    parser.add_argument("--big", action="store_true",
                        help="extend the q list with 16, 25, 27")


def _config_from(args, default_qs=DEFAULT_QS, suites=ALL_SUITES):
    qs = _parse_qs(args.q) if args.q else tuple(default_qs)
    if args.trials is not None and args.trials < 1:
        raise DomainError("--trials must be at least 1")
    modulus = None
    if args.modulus:
        modulus = tuple(int(c) for c in args.modulus.split(","))
        if len(qs) != 1:
            raise DomainError("--modulus needs a single q")
    return SuiteConfig(qs=qs, n=args.n, suites=suites, seed=args.seed,
                       trials=args.trials, tol=args.tol, out=args.out,
                       dump_fourier=args.dump_fourier, big=args.big,
                       modulus=modulus, qs_explicit=args.q is not None)


def cmd_census(args):
    cfg = _config_from(args, suites=("census",))
    rows, status = run_suite(cfg)
    print(rows_to_csv(rows), end="")
    return status


def cmd_verify(args):
    suites = tuple(args.suite.split(",")) if args.suite else ALL_SUITES
    cfg = _config_from(args, suites=suites)
    rows, status = run_suite(cfg)
    ok = sum(1 for r in rows if r["holds"])
    print(f"{ok}/{len(rows)} checks hold across q={list(cfg.all_qs())}")
    if not cfg.out:
        print(rows_to_csv(rows), end="")
    return status


def cmd_sweep(args):
    cfg = _config_from(args, default_qs=SWEEP_QS, suites=())
    if len(cfg.qs) < 3:
        print("sweep needs at least 3 q values", file=sys.stderr)
        return 2
    try:
        rows = sweep_rows(cfg, "sweep")
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    csv_text = rows_to_csv(rows)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(csv_text)
    print(csv_text, end="")
    return 0 if all(r["holds"] for r in rows) else 1


def cmd_maxop(args):
    try:
        F = load_grid(args.infile)
        if args.op == "affine":
            vals = mx.affine_max_op(F)
            dirs = hz.enumerate_directions(F.field, F.domain.n)
        elif args.op == "heis":
            vals = mx.heis_max_op(F)
            dirs = hz.enumerate_projective_directions(F.field, F.domain.n)
        elif args.op == "refined":
            vals = mx.refined_max_op(F)
            dirs = hz.enumerate_refined_directions(F.field, F.domain.n)
        else:
            print(f"unknown operator {args.op!r}", file=sys.stderr)
            return 2
    except (DomainError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = {"operator": args.op, "q": F.field.q,
           "directions": [list(d.rep) for d in dirs],
           "values": [float(x) for x in vals]}
    text = json.dumps(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        print(text)
    return 0


def cmd_examples(args):
    cfg = _config_from(args, default_qs=(5, 7, 9, 11, 13),
                       suites=("examples",))
    rows, status = run_suite(cfg)
    print(rows_to_csv(rows), end="")
    return status


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="kakeya",
        description="Brute-force verification of horizontal Kakeya maximal "
                    "operator bounds over finite Heisenberg groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="enumeration vs closed-form counts")
    _add_common(p)
    p.set_defaults(fn=cmd_census)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", default=None,
                   help=f"comma-separated subset of {','.join(ALL_SUITES)}")
    _add_common(p)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("sweep", help="empirical exponent slopes across q")
    _add_common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("maxop", help="apply a maximal operator to a grid file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--op", choices=("affine", "heis", "refined"),
                   default="refined")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_maxop)

    p = sub.add_parser("examples", help="run the separating-example checks")
    _add_common(p)
    p.set_defaults(fn=cmd_examples)

    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except DomainError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
