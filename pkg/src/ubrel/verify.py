"""Seeded verification suites behind ``ubrel verify``.

Each suite returns a list of ``Check`` rows; a run passes iff every residual
is at or below its threshold.  Random streams come from
``numpy.random.default_rng([seed, k])`` with ``k`` fixed per check, so a given
seed reproduces the same report regardless of which suites run.
"""
from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import lie_algebras as la
from .automorphism import (
    AutHElement,
    auth_act,
    auth_act_closed,
    auth_inverse,
    auth_mul,
    auth_realize,
    conjugation_pattern_residual,
    random_auth,
    random_symplectic,
)
from .errors import UsageError
from .heisenberg import HeisenbergElement, SymplecticMetric, h_inverse, h_mul, h_realize, random_heisenberg
from .kinematics import (
    KinematicParams,
    PhaseDifferential,
    compose_closed,
    compose_matrix,
    mass_rate,
    mass_sq_rate,
    transform_differential,
    ub_from_params,
)
from .matrix_core import Tolerance
from .relativity_groups import (
    DegenerateMetric,
    UbElement,
    block_matrix,
    group_condition_holds,
    heisenberg_metric,
    is_heisenberg_automorphism,
    preserves_degenerate_metric,
    random_block_candidate,
    random_ub,
    ub_inverse,
    ub_mul,
)

SUITES = ("group-axioms", "automorphism", "metric", "algebra", "contraction", "kinematics")


@dataclass
class Check:
    name: str
    max_residual: float
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_residual <= self.threshold)


@dataclass
class RunReport:
    command: str
    checks: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    elapsed_ms: int = 0

    @property
    def status(self) -> str:
        return "pass" if all(c.passed for c in self.checks) else "fail"

    def failing(self) -> list:
        return [c for c in self.checks if not c.passed]

    def to_json(self, with_time: bool = True) -> dict:
        out = {
            "command": self.command,
            "status": self.status,
            "checks": [asdict(c) for c in self.checks],
            "details": self.details,
        }
        if with_time:
            out["elapsed_ms"] = self.elapsed_ms
        return out


@dataclass(frozen=True)
class VerifyConfig:
    trials: int = 1000
    seed: int = 0
    tol: float | None = None
    table: la.BracketTable | None = None

    def rng(self, key: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, key])

    def threshold(self, default: float) -> float:
        return default if self.tol is None else self.tol


def _maxdiff(*pairs) -> float:
    return max(float(np.max(np.abs(np.asarray(a, dtype=float) - np.asarray(b, dtype=float)))) for a, b in pairs)


# ----------------------------------------------------------- group axioms


def _h_params(e: HeisenbergElement):
    return np.r_[e.z, e.iota]


def _aut_params(w: AutHElement):
    return np.r_[w.epsilon, w.delta, w.Sigma.ravel(), w.z, w.iota]


def _ub_params(g: UbElement):
    return np.r_[g.Lambda.ravel(), g.Xi.ravel()]


def _axiom_rows(name, sample, mul, inv, ident, params, realize, trials, thr, prod_thr=1e-10):
    assoc = ident_res = inv_res = prod = 0.0
    e = params(ident)
    for _ in range(trials):
        a, b, c = sample(), sample(), sample()
        assoc = max(assoc, _maxdiff((params(mul(mul(a, b), c)), params(mul(a, mul(b, c))))))
        ident_res = max(ident_res, _maxdiff((params(mul(a, ident)), params(a)), (params(mul(ident, a)), params(a))))
        inv_res = max(inv_res, _maxdiff((params(mul(a, inv(a))), e), (params(mul(inv(a), a)), e)))
        prod = max(prod, _maxdiff((realize(mul(a, b)), realize(a) @ realize(b))))
    return [
        Check(f"{name} associativity", assoc, thr),
        Check(f"{name} identity", ident_res, thr),
        Check(f"{name} inverse", inv_res, thr),
        Check(f"{name} closed form vs matrix product", prod, prod_thr),
    ]


def suite_group_axioms(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-9)
    checks = []
    for m in (1, 2, 4):
        met = SymplecticMetric.minkowski(m)
        rng = cfg.rng(100 + m)
        checks += _axiom_rows(
            f"H({m})",
            lambda: random_heisenberg(rng, m),
            lambda a, b: h_mul(a, b, met),
            h_inverse,
            HeisenbergElement.identity(m),
            _h_params,
            lambda x: h_realize(x, met),
            cfg.trials,
            thr,
        )
    for m in (1, 2):
        met = SymplecticMetric.minkowski(m)
        rng = cfg.rng(110 + m)
        checks += _axiom_rows(
            f"Aut_H({m})",
            lambda: random_auth(rng, met),
            lambda a, b: auth_mul(a, b, met),
            lambda a: auth_inverse(a, met),
            AutHElement.identity(m),
            _aut_params,
            lambda x: auth_realize(x, met),
            cfg.trials,
            thr,
        )
    for n in (1, 2, 3):
        rng = cfg.rng(120 + n)
        checks += _axiom_rows(
            f"Ub(1,{n})",
            lambda: random_ub(rng, n),
            ub_mul,
            ub_inverse,
            UbElement.identity(n),
            _ub_params,
            lambda g: g.matrix(),
            cfg.trials,
            thr,
        )
    return checks, {}


# ------------------------------------------------------------ automorphism


def suite_automorphism(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-9)
    checks = []
    for m in (1, 2):
        met = SymplecticMetric.minkowski(m)
        rng = cfg.rng(200 + m)
        dil = gen = pattern = 0.0
        for _ in range(cfg.trials):
            e = random_heisenberg(rng, m)
            # dilation-symplectic case, eps = +1 and no inner part
            w = AutHElement(1, float(rng.choice((-1, 1)) * rng.uniform(0.5, 2.0)), random_symplectic(rng, met), np.zeros(2 * m))
            got = auth_act(w, e, met)
            want = np.r_[w.delta * w.Sigma @ e.z, w.delta**2 * e.iota]
            dil = max(dil, _maxdiff((_h_params(got), want)))
            w = random_auth(rng, met)
            gen = max(gen, _maxdiff((_h_params(auth_act(w, e, met)), _h_params(auth_act_closed(w, e, met)))))
            pattern = max(pattern, conjugation_pattern_residual(auth_realize(w, met), e, met))
        checks += [
            Check(f"Aut_H({m}) dilation-symplectic action z->delta Sigma z, iota->delta^2 iota", dil, thr),
            Check(f"Aut_H({m}) generic action vs closed form", gen, thr),
            Check(f"Aut_H({m}) conjugate keeps Heisenberg pattern", pattern, thr),
        ]
    return checks, {}


# ------------------------------------------------------------------ metric


def suite_metric(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-10)
    checks = []
    details = {}
    pred_tol = Tolerance(1e-9, 1e-9)
    for n in (1, 2, 3):
        dm = DegenerateMetric(n)
        rng = cfg.rng(300 + n)
        inv = tau = 0.0
        for _ in range(cfg.trials):
            g = random_ub(rng, n)
            G = g.matrix()
            inv = max(inv, _maxdiff((G.T @ dm.eta_tilde @ G, dm.eta_tilde)))
            p = KinematicParams.from_velocity(
                _random_velocity(rng, n, 1.0), 1.0, f=rng.uniform(-2, 2, n), r=rng.uniform(-2, 2)
            )
            d = PhaseDifferential(n, 1.0, rng.normal(), rng.normal(size=n), rng.normal(size=n), rng.normal())
            out = transform_differential(ub_from_params(p), d)
            tau = max(tau, abs(out.proper_time_sq() - d.proper_time_sq()))
        checks += [
            Check(f"Ub(1,{n}) preserves degenerate metric", inv, thr),
            Check(f"Ub(1,{n}) proper time under transform_differential", tau, thr),
        ]
        rng = cfg.rng(310 + n)
        hm = heisenberg_metric(n)
        mismatches = 0
        kinds: dict = {}
        for _ in range(cfg.trials):
            L, X, A, kind = random_block_candidate(rng, n)
            G = block_matrix(L, X, A)
            lhs = preserves_degenerate_metric(G, dm, pred_tol) and is_heisenberg_automorphism(G, hm, pred_tol)
            rhs = group_condition_holds(L, X, A, pred_tol)
            kinds[kind] = kinds.get(kind, 0) + 1
            mismatches += int(lhs != rhs)
        checks.append(Check(f"Ub(1,{n}) intersection theorem counterexamples", float(mismatches), 0.0))
        details[f"intersection_n{n}_kinds"] = dict(sorted(kinds.items()))
    return checks, details


def _random_velocity(rng, n, c, max_frac=0.9):
    u = rng.normal(size=n)
    return u / np.linalg.norm(u) * rng.uniform(0, max_frac) * c


# ----------------------------------------------------------------- algebra


def suite_algebra(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-12)
    checks = []
    details = {}
    for n in (1, 2, 3):
        for name, kw in (("ub_covariant", {}), ("ub_three", {"c": 3.0})):
            basis = la.build_basis(name, n, **kw)
            table = None
            if cfg.table is not None and cfg.table.algebra == name and cfg.table.n == n:
                table = cfg.table
            rep = la.verify_structure_constants(basis, Tolerance(thr, 0.0), table=table)
            label = f"{name} n={n} structure constants"
            if rep.mismatched:
                a, b, r = max(rep.mismatched, key=lambda t: t[2])
                label += f" (mismatch at [{a}, {b}])"
                details[f"{name}_n{n}_mismatched"] = [f"[{x}, {y}]" for x, y, _ in rep.mismatched]
            checks.append(Check(label, rep.max_residual if not rep.mismatched else max(r for *_, r in rep.mismatched), thr))
        for name, kw in (("ub_covariant", {}), ("ub_three", {"c": 3.0}), ("ubc_three", {}), ("u1n_covariant", {"b": 3.0})):
            t = la.build_basis(name, n, **kw).table
            checks.append(Check(f"{name} n={n} Jacobi", la.jacobi_check(t), thr))
            checks.append(Check(f"{name} n={n} antisymmetry", la.antisymmetry_residual(t), thr))
    details["sign_discrepancy"] = la.sign_discrepancy_report(3, c=3.0)
    return checks, details


# ------------------------------------------------------------- contraction


def suite_contraction(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-4)
    checks = []
    details = {}
    values = [10.0, 20.0, 40.0, 80.0]
    for family, param in (("ub_three", "c"), ("u1n_covariant", "b")):
        for n in (1, 2, 3):
            rep = la.contract(family, n, values)
            worst = max(abs(r - 0.25) for r in rep.ratios)
            checks.append(Check(f"{family} n={n} deviation ratio per doubling of {param} vs 1/4", worst, thr))
            details[f"{family}_n{n}"] = [
                {param: v, "deviation": d, "ratio": (rep.ratios[i - 1] if i else None)}
                for i, (v, d) in enumerate(zip(rep.values, rep.deviations))
            ]
        limit = la.contract(family, 2, [math.inf])
        checks.append(Check(f"{family} at {param}=inf equals its limit", limit.deviations[0], 0.0))
    return checks, details


# -------------------------------------------------------------- kinematics


def suite_kinematics(cfg: VerifyConfig) -> tuple[list, dict]:
    thr = cfg.threshold(1e-9)
    rng = cfg.rng(600)
    comp = 0.0
    for _ in range(cfg.trials):
        c = float(rng.uniform(0.5, 3.0))
        a, b = (
            KinematicParams.from_velocity(
                _random_velocity(rng, 1, c), c, f=rng.uniform(-2, 2, 1), r=rng.uniform(-2, 2), m_stress=[[rng.uniform(-2, 2)]]
            )
            for _ in range(2)
        )
        x, y = compose_closed(a, b), compose_matrix(a, b)
        comp = max(comp, _maxdiff((x.v, y.v), (x.f, y.f), (x.r, y.r), (x.m_stress, y.m_stress)))
    rng = cfg.rng(601)
    mr = 0.0
    for _ in range(cfg.trials):
        g = random_ub(rng, 3, xi_scale=2.0)
        V, F = rng.normal(size=4), rng.normal(size=4)
        direct = mass_sq_rate(g, V, F) - float(F @ g.eta @ F) / g.c**2
        mr = max(mr, abs(mass_rate(g, V, F) - direct) / max(1.0, abs(direct)))
    return [
        Check("n=1 composition closed form vs matrix route", comp, thr),
        Check("mass rate closed form vs transformed momentum rate", mr, thr),
    ], {}


RUNNERS = {
    "group-axioms": suite_group_axioms,
    "automorphism": suite_automorphism,
    "metric": suite_metric,
    "algebra": suite_algebra,
    "contraction": suite_contraction,
    "kinematics": suite_kinematics,
}


def run_verify(suite: str, cfg: VerifyConfig) -> RunReport:
    if suite == "all":
        names = list(SUITES)
    elif suite in RUNNERS:
        names = [suite]
    else:
        raise UsageError(f"unknown suite {suite!r}; expected one of {', '.join(SUITES + ('all',))}")
    if cfg.trials < 1:
        raise UsageError("trials must be positive")
    t0 = time.perf_counter()
    report = RunReport(f"verify {suite}")
    for name in names:
        checks, details = RUNNERS[name](cfg)
        report.checks += checks
        for k, v in details.items():
            report.details[f"{name}:{k}"] = v
    report.details["trials"] = cfg.trials
    report.details["seed"] = cfg.seed
    report.elapsed_ms = int(round(1000 * (time.perf_counter() - t0)))
    return report
