"""Batch experiment runner and verification suites.

``run_sieve_grid`` evaluates the sieve sum over a (family, Q, N, coefficient)
grid and emits one record per cell with the family's benchmark bound and
ratio.  Grid semantics follow the bound parametrizations: for the
all-Gaussian family the norm cap at grid value Q is Q itself; for the
natural-integer and square-norm families it is Q^2 (so natural moduli run
over q <= Q).  ``windowed`` mode evaluates the single dyadic window
(cap/2, cap]; ``cumulative`` evaluates (0, cap], which equals the sum of all
dyadic windows below the cap.

Determinism contract: with a fixed config and seed the emitted bytes are
identical across runs and thread counts.  Cell seeds derive from the cell key
(not execution order), records are sorted before writing, and wall-clock
timings are kept out of the files unless explicitly requested.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

from .characters import character_table, gauss_sum
from .core import GaussianInt, ONE, div_rem, gcd, residue_system
from .double_sieve import BilinearInstance, check_dls
from .fourier import EXP_LINEAR, EXP_SQRT, poisson_2d_pair, theta_identity_check
from .rng import Lcg64, mix64
from .sieve import (
    ALL,
    CUSTOM,
    NATURAL,
    SQUARE_NORM,
    CoefficientSequence,
    ModuliFamily,
    bound_t1,
    bound_t2,
    bound_t3,
    sieve_lhs,
    sieve_lhs_fast,
)
from .spacing import SpacingInstance, kl_pair, verify_spacing_lemma
from .squarenorm import coverage_diff, enumerate_pyth_param, enumerate_square_norm

__all__ = [
    "ConfigError",
    "ExperimentConfig",
    "SieveRecord",
    "CSV_HEADER",
    "run_sieve_grid",
    "records_to_csv_text",
    "records_to_json_text",
    "write_records",
    "slope_report",
    "run_verify_suite",
    "VERIFY_SUITES",
]

CSV_HEADER = (
    "family,Q,N,coeff,mode,epsilon,lhs,Z,boundT1,boundT2,boundT3,boundT4,"
    "ratioT1,ratioT2,ratioT3,ratioT4,elapsed_ms"
)

GRID_FAMILIES = (ALL, NATURAL, SQUARE_NORM)
COEFF_SPECS = ("delta", "all-ones", "random", "adversary")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    families: tuple[str, ...] = GRID_FAMILIES
    q_values: tuple[int, ...] = (2, 4, 8, 16)
    n_values: tuple[int, ...] = (4, 16, 64, 256, 1024)
    coeff_specs: tuple[str, ...] = ("random",)
    epsilon: float = 0.1
    seed: int = 42
    mode: str = "windowed"
    threads: int = 1
    fmt: str = "csv"
    out: str = ""
    timing: str = "none"
    engine: str = "fast"

    def validate(self):
        if not self.q_values or not self.n_values:
            raise ConfigError("Q and N grids must be nonempty")
        if any(q < 1 for q in self.q_values) or any(n < 1 for n in self.n_values):
            raise ConfigError("Q and N values must be >= 1")
        if self.mode not in ("windowed", "cumulative"):
            raise ConfigError(f"unknown mode {self.mode!r}")
        if self.fmt not in ("csv", "json"):
            raise ConfigError(f"unknown format {self.fmt!r}")
        if self.timing not in ("none", "wall"):
            raise ConfigError(f"unknown timing {self.timing!r}")
        if self.engine not in ("fast", "naive"):
            raise ConfigError(f"unknown engine {self.engine!r}")
        if self.epsilon < 0:
            raise ConfigError("epsilon must be >= 0")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        for fam in self.families:
            if fam not in GRID_FAMILIES:
                raise ConfigError(f"unknown family {fam!r}")
        for spec in self.coeff_specs:
            if spec not in COEFF_SPECS:
                raise ConfigError(f"unknown coefficient spec {spec!r}")

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {
            "families": lambda v: tuple(v),
            "Q": lambda v: tuple(int(x) for x in v),
            "N": lambda v: tuple(int(x) for x in v),
            "coeff": lambda v: tuple(v),
            "epsilon": float,
            "seed": int,
            "mode": str,
            "threads": int,
            "format": str,
            "out": str,
            "timing": str,
            "engine": str,
        }
        rename = {
            "Q": "q_values",
            "N": "n_values",
            "coeff": "coeff_specs",
            "format": "fmt",
        }
        kwargs = {}
        for key, value in d.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            kwargs[rename.get(key, key)] = known[key](value)
        cfg = cls(**kwargs)
        cfg.validate()
        return cfg


@dataclass(frozen=True)
class SieveRecord:
    family: str
    Q: int
    N: int
    coeff: str
    mode: str
    epsilon: float
    lhs: float
    Z: float
    bounds: dict = field(default_factory=dict)  # keys T1..T4, values float|None
    ratios: dict = field(default_factory=dict)
    elapsed_ms: float = 0.0


def family_norm_cap(kind: str, Q: int) -> int:
    """Norm cap matching the bound parametrization: Q for all-Gaussian, Q^2 else."""
    return Q if kind == ALL else Q * Q


def grid_family(kind: str, Q: int, mode: str) -> ModuliFamily:
    cap = family_norm_cap(kind, Q)
    low = cap / 2 if mode == "windowed" else 0
    return ModuliFamily(kind, (low, cap))


def _cell_coeffs(config: ExperimentConfig, family: str, Q: int, N: int, spec: str):
    seed = mix64(config.seed, family, Q, N, spec)
    return CoefficientSequence.from_spec(spec, N, seed=seed)


def _run_cell(config: ExperimentConfig, family: str, Q: int, N: int, spec: str) -> SieveRecord:
    fam = grid_family(family, Q, config.mode)
    coeffs = _cell_coeffs(config, family, Q, N, spec)
    evaluator = sieve_lhs_fast if config.engine == "fast" else sieve_lhs
    t0 = time.perf_counter()
    lhs = evaluator(fam, coeffs)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    z = coeffs.energy
    bounds: dict = {"T1": None, "T2": None, "T3": None, "T4": None}
    if family == ALL:
        bounds["T1"] = bound_t1(Q, N, z)
    elif family == NATURAL:
        bounds["T2"] = bound_t2(Q, N, z)
    elif family == SQUARE_NORM:
        bounds["T3"] = bound_t3(Q, N, z, config.epsilon)
    ratios = {
        key: (lhs / val if val else None) for key, val in bounds.items()
    }
    return SieveRecord(
        family, Q, N, spec, config.mode, config.epsilon, lhs, z, bounds, ratios, elapsed_ms
    )


def run_sieve_grid(config: ExperimentConfig) -> list[SieveRecord]:
    """One record per (family, Q, N, coeff) cell, sorted, thread-count invariant."""
    config.validate()
    cells = sorted(
        (family, Q, N, spec)
        for family in config.families
        for Q in config.q_values
        for N in config.n_values
        for spec in config.coeff_specs
    )
    if config.threads == 1:
        records = [_run_cell(config, *cell) for cell in cells]
    else:
        with ThreadPoolExecutor(max_workers=config.threads) as pool:
            records = list(pool.map(lambda c: _run_cell(config, *c), cells))
    return sorted(records, key=lambda r: (r.family, r.Q, r.N, r.coeff))


# -- serialization ---------------------------------------------------------------


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def _record_fields(rec: SieveRecord, timing: str) -> list[str]:
    return [
        rec.family,
        _fmt(rec.Q),
        _fmt(rec.N),
        rec.coeff,
        rec.mode,
        _fmt(rec.epsilon),
        _fmt(rec.lhs),
        _fmt(rec.Z),
        _fmt(rec.bounds.get("T1")),
        _fmt(rec.bounds.get("T2")),
        _fmt(rec.bounds.get("T3")),
        _fmt(rec.bounds.get("T4")),
        _fmt(rec.ratios.get("T1")),
        _fmt(rec.ratios.get("T2")),
        _fmt(rec.ratios.get("T3")),
        _fmt(rec.ratios.get("T4")),
        _fmt(rec.elapsed_ms) if timing == "wall" else "",
    ]


def records_to_csv_text(records, timing: str = "none") -> str:
    lines = [CSV_HEADER]
    for rec in records:
        lines.append(",".join(_record_fields(rec, timing)))
    return "\n".join(lines) + "\n"


def records_to_json_text(records, timing: str = "none") -> str:
    header = CSV_HEADER.split(",")
    rows = [dict(zip(header, _record_fields(rec, timing))) for rec in records]
    return json.dumps({"records": rows}, sort_keys=True, indent=2) + "\n"


def write_records(records, path: str, fmt: str = "csv", timing: str = "none"):
    text = records_to_csv_text(records, timing) if fmt == "csv" else records_to_json_text(
        records, timing
    )
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- ratio slope monitoring -------------------------------------------------------

PRIMARY_RATIO = {ALL: "T1", NATURAL: "T2", SQUARE_NORM: "T3"}


def _ls_slope(xs, ys) -> float:
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    var = sum((x - mx) ** 2 for x in xs)
    if var == 0:
        raise ConfigError("degenerate grid")
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return cov / var


def slope_report(records) -> dict:
    """Fitted log-log growth of each family's ratio, against Q and against N.

    For the slope against Q the worst (maximum) ratio over N at each Q is
    fitted, and symmetrically for N: the growth of the recorded maxima is the
    empirical stand-in for the growth of the implied constant.  Requires at
    least two distinct Q and two distinct N per (family, coeff) group.
    """
    groups: dict[tuple[str, str], list[SieveRecord]] = {}
    for rec in records:
        groups.setdefault((rec.family, rec.coeff), []).append(rec)
    out = {}
    for (family, coeff), recs in sorted(groups.items()):
        key = PRIMARY_RATIO.get(family)
        ratios = {}
        for r in recs:
            val = r.ratios.get(key)
            if val is None or val <= 0:
                raise ConfigError("degenerate grid: missing or zero ratio")
            ratios[(r.Q, r.N)] = val
        qs = sorted({q for q, _ in ratios})
        ns = sorted({n for _, n in ratios})
        if len(qs) < 2 or len(ns) < 2:
            raise ConfigError("degenerate grid: need two distinct Q and N")
        max_over_n = {q: max(v for (qq, _), v in ratios.items() if qq == q) for q in qs}
        max_over_q = {n: max(v for (_, nn), v in ratios.items() if nn == n) for n in ns}
        slope_q = _ls_slope(
            [math.log(q) for q in qs], [math.log(max_over_n[q]) for q in qs]
        )
        slope_n = _ls_slope(
            [math.log(n) for n in ns], [math.log(max_over_q[n]) for n in ns]
        )
        out[f"{family}|{coeff}"] = {
            "ratio": key,
            "slope_vs_Q": float(slope_q),
            "slope_vs_N": float(slope_n),
            "max_ratio": float(max(ratios.values())),
        }
    return out


# -- verification suites -----------------------------------------------------------


def _check(name, instance, expected, got, passed) -> dict:
    return {
        "name": name,
        "instance": str(instance),
        "expected": str(expected),
        "got": str(got),
        "passed": bool(passed),
    }


def _canonical_moduli(lo: int, hi: int) -> list[GaussianInt]:
    return ModuliFamily(ALL, (lo - 1, hi)).moduli() if hi >= 1 else []


def verify_spacing(max_norm: int = 40, coordinate_bound: int = 5) -> dict:
    """Spacing dichotomy plus the (k, l) identities, exhaustively."""
    checks = []
    for q2 in _canonical_moduli(2, max_norm):
        worst = []
        ident_ok = True
        n_r = 0
        for r2 in residue_system(q2).reduced:
            k, l = kl_pair(q2, r2)
            if GaussianInt(k, -l) != r2 * q2.conj():
                ident_ok = False
            if k * k + l * l != r2.norm * q2.norm:
                ident_ok = False
            worst.extend(verify_spacing_lemma(q2, r2, coordinate_bound))
            n_r += 1
        checks.append(
            _check(
                "spacing-dichotomy-and-kl-identities",
                f"q2={q2} ({n_r} residues, bound {coordinate_bound})",
                "0 violations, identities exact",
                f"{len(worst)} violations, identities {'exact' if ident_ok else 'BROKEN'}",
                not worst and ident_ok,
            )
        )
    return _suite("spacing", checks)


def verify_gauss(max_norm: int = 60) -> dict:
    """|gauss_sum|^2 = norm(q) for every proper character, norms <= cap."""
    checks = []
    for q in _canonical_moduli(1, max_norm):
        worst = 0.0
        n_proper = 0
        for chi in character_table(q):
            if not chi.proper:
                continue
            n_proper += 1
            worst = max(worst, abs(abs(gauss_sum(q, chi)) ** 2 - q.norm))
        checks.append(
            _check(
                "gauss-sum-modulus",
                f"q={q} ({n_proper} proper characters)",
                "| |tau|^2 - norm | <= 1e-6",
                f"max deviation {worst:.3e}",
                worst <= 1e-6,
            )
        )
    return _suite("gauss", checks)


def _random_dls_instance(rng: Lcg64) -> BilinearInstance:
    npts_x = rng.next_int(1, 50)
    npts_y = rng.next_int(1, 50)
    rand_pt = lambda: (4 * rng.next_unit() - 2, 4 * rng.next_unit() - 2)
    rand_coef = lambda: complex(
        math.cos(2 * math.pi * (u := rng.next_unit())) , math.sin(2 * math.pi * u)
    )
    xs = tuple((rand_pt(), rand_coef()) for _ in range(npts_x))
    ys = tuple((rand_pt(), rand_coef()) for _ in range(npts_y))
    box = lambda: (0.25 + 3 * rng.next_unit(), 0.25 + 3 * rng.next_unit())
    return BilinearInstance(2, xs, ys, box(), box())


def structured_dls_instance(radius_sq: int = 18, q_cap: int = 20, seed: int = 7) -> BilinearInstance:
    """The sieve's own bilinear data: coefficient support against phase points."""
    coeffs = CoefficientSequence.random_phases(radius_sq, seed)
    xs = tuple(
        ((float(n.re), float(n.im)), a) for n, a in coeffs.entries.items()
    )
    ys = []
    for q in ModuliFamily(ALL, (q_cap / 2, q_cap)).moduli():
        for r in residue_system(q).reduced:
            inst = SpacingInstance.make(q, r)
            from .spacing import f_point

            p = f_point(inst, 1, 0)
            ys.append(((float(p[0]), float(p[1])), 1.0 + 0j))
    root = math.sqrt(radius_sq)
    return BilinearInstance(2, xs, tuple(ys), (root, root), (0.5, 0.5))


def verify_dls(seed: int = 20240601, n_instances: int = 100) -> dict:
    checks = []
    trivial = BilinearInstance(
        2, (((0.0, 0.0), 1.0 + 0j),), (((0.0, 0.0), 1.0 + 0j),), (1.0, 1.0), (1.0, 1.0)
    )
    lhs, rhs, ok = check_dls(trivial)
    checks.append(_check("dls-trivial", "single point pair", f"lhs^2 <= rhs", f"{lhs:.3e} vs {rhs:.3e}", ok))
    failures = 0
    for i in range(n_instances):
        inst = _random_dls_instance(Lcg64(mix64(seed, "dls", i)))
        _, _, ok = check_dls(inst)
        if not ok:
            failures += 1
    checks.append(
        _check("dls-random", f"{n_instances} seeded K=2 instances", "0 failures", f"{failures} failures", failures == 0)
    )
    lhs, rhs, ok = check_dls(structured_dls_instance())
    checks.append(
        _check("dls-structured", "coefficient support x phase points", "holds", f"{lhs:.3e} vs {rhs:.3e}", ok)
    )
    return _suite("dls", checks)


def verify_coverage(max_norm: int = 10**4) -> dict:
    missing, extraneous = coverage_diff(max_norm)
    checks = [
        _check(
            "coverage-extraneous-empty",
            f"max_norm={max_norm}",
            "no parametrized modulus outside the true family",
            f"{len(extraneous)} extraneous: {[str(g) for g in extraneous[:5]]}",
            not extraneous,
        )
    ]
    bad_missing = [g for g in missing if math.gcd(g.re, g.im) == 1]
    checks.append(
        _check(
            "coverage-missing-imprimitive",
            f"{len(missing)} missing moduli",
            "every missing modulus has gcd(re, im) > 1",
            f"{len(bad_missing)} primitive missing: {[str(g) for g in bad_missing[:5]]}",
            not bad_missing,
        )
    )
    param = set(enumerate_pyth_param(max_norm))
    uncovered = [
        g
        for g in enumerate_square_norm(max_norm)
        if math.gcd(g.re, g.im) == 1 and g not in param
    ]
    checks.append(
        _check(
            "coverage-primitive",
            f"max_norm={max_norm}",
            "all primitive square-norm moduli parametrized",
            f"{len(uncovered)} uncovered",
            not uncovered,
        )
    )
    return _suite("coverage", checks)


def _poisson_instances(seed: int, count: int):
    """Deterministic small Poisson-check instances.

    Parameters stay in a range where the smoothed count is not dominated by
    cancellation (values well above summand roundoff), so the relative
    pre/post comparison is numerically meaningful.
    """
    from .fourier import gaussian_shift_sum

    rng = Lcg64(mix64(seed, "poisson"))
    q2_pool = [g for g in _canonical_moduli(2, 10)]
    kinds = (ALL, NATURAL, SQUARE_NORM)
    out = []
    while len(out) < count:
        q2 = q2_pool[rng.next_int(0, len(q2_pool) - 1)]
        reduced = residue_system(q2).reduced
        r2 = reduced[rng.next_int(0, len(reduced) - 1)]
        kind = kinds[rng.next_int(0, 2)]
        weight = EXP_LINEAR if rng.next_int(0, 3) else EXP_SQRT
        q_scale = 4.0 + 6.0 * rng.next_unit()
        radius = 0.25 + 0.2 * rng.next_unit()
        inst = SpacingInstance.make(q2, r2)
        family = ModuliFamily(kind, (0, 1))
        if gaussian_shift_sum(inst, family, weight, q_scale, radius) < 1e-4:
            continue
        out.append((inst, family, weight, q_scale, radius))
    return out


def verify_poisson(seed: int = 20240601, n_instances: int = 20) -> dict:
    checks = []
    worst = 0.0
    rng = Lcg64(mix64(seed, "theta"))
    thetas = [0.0, 0.25, -0.25, 0.5, -0.5] + [rng.next_unit() - 0.5 for _ in range(20)]
    for qp in (1.0, 2.0, 5.0, 10.0):
        for theta in thetas:
            _, _, resid = theta_identity_check(qp, theta, cutoff=max(40, int(10 * qp)))
            worst = max(worst, resid)
    checks.append(
        _check("theta-identity", "Q in {1,2,5,10}, fixed + 20 random thetas", "residual <= 1e-9", f"max residual {worst:.3e}", worst <= 1e-9)
    )
    worst_rel = 0.0
    for inst, family, weight, q_scale, radius in _poisson_instances(seed, n_instances):
        lhs, rhs = poisson_2d_pair(inst, family, weight, q_scale, radius)
        rel = abs(lhs - rhs) / abs(lhs)
        worst_rel = max(worst_rel, rel)
    checks.append(
        _check("poisson-2d", f"{n_instances} seeded instances", "relative gap <= 1e-6", f"max relative gap {worst_rel:.3e}", worst_rel <= 1e-6)
    )
    return _suite("poisson", checks)


def fastpath_instances(seed: int, count: int):
    rng = Lcg64(mix64(seed, "fastpath"))
    kinds = (ALL, NATURAL, SQUARE_NORM)
    out = []
    for i in range(count):
        kind = kinds[rng.next_int(0, 2)]
        high = rng.next_int(10, 100)
        low = high / 2 if rng.next_int(0, 1) else 0
        radius_sq = rng.next_int(10, 400)
        coeffs = CoefficientSequence.random_phases(radius_sq, mix64(seed, "coeff", i))
        out.append((ModuliFamily(kind, (low, high)), coeffs))
    return out


def verify_fastpath(seed: int = 20240601, n_instances: int = 50) -> dict:
    worst = 0.0
    for family, coeffs in fastpath_instances(seed, n_instances):
        slow = sieve_lhs(family, coeffs)
        fast = sieve_lhs_fast(family, coeffs)
        if slow == 0 and fast == 0:
            continue
        worst = max(worst, abs(slow - fast) / max(abs(slow), 1e-300))
    checks = [
        _check(
            "fastpath-equivalence",
            f"{n_instances} seeded instances, norms <= 100, N <= 400",
            "relative gap <= 1e-6",
            f"max relative gap {worst:.3e}",
            worst <= 1e-6,
        )
    ]
    return _suite("fastpath", checks)


def _suite(name: str, checks: list[dict]) -> dict:
    return {"suite": name, "passed": all(c["passed"] for c in checks), "checks": checks}


VERIFY_SUITES = {
    "spacing": verify_spacing,
    "gauss": verify_gauss,
    "dls": verify_dls,
    "coverage": verify_coverage,
    "poisson": verify_poisson,
    "fastpath": verify_fastpath,
}


def run_verify_suite(which: str, max_norm: int | None = None) -> dict:
    if which not in VERIFY_SUITES:
        raise ConfigError(f"unknown verify suite {which!r}")
    fn = VERIFY_SUITES[which]
    if max_norm is not None and which in ("spacing", "gauss", "coverage"):
        return fn(max_norm)
    return fn()
