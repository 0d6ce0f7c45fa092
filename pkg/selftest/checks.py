"""Oracle checks for selftest suites. Each returns (ok, detail)."""

from __future__ import annotations

import math
from collections import Counter
from typing import Any, Callable, Dict

import numpy as np

from ipdsaw import free_energy as fe
from ipdsaw import ipsaw, partition, sampler, wulff
from ipdsaw.constants import LOG_MU_PD
from ipdsaw.geometry import exponent_fit
from ipdsaw.model import enumerate_configs, hamiltonian
from ipdsaw.walk import make_params

Result = tuple[bool, str]


def _beta(value: Any) -> float:
    return fe.critical_beta() if value == "beta_c" else float(value)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def check_golden(**kw: Any) -> Result:
    beta = float(kw.get("beta", 1.0))
    expected = {2: 3.0, 3: 7.0, 4: 15.0 + 2.0 * math.exp(beta)}
    worst = max(_rel(partition.dp_Z(n, beta), z) for n, z in expected.items())
    return worst <= 1e-12, f"max rel error {worst:.3g} at beta={beta}"


def check_engines(**kw: Any) -> Result:
    betas = [_beta(b) for b in kw.get("betas", [0.0, 0.5, "beta_c", 2.0])]
    worst = 0.0
    for beta in betas:
        for n in range(1, int(kw.get("brute_max", 12)) + 1):
            worst = max(worst, _rel(partition.brute_force_Z(n, beta), partition.dp_Z(n, beta)))
    if worst > 1e-10:
        return False, f"brute force vs DP rel error {worst:.3g}"
    walk_worst = 0.0
    for beta in [float(b) for b in kw.get("walk_betas", [0.5, 1.0, 2.0])]:
        params = make_params(beta)
        log_walk = partition.walk_repr_log_Z_sequence(int(kw.get("walk_max", 64)), params)
        log_dp = partition.dp_log_Z_sequence(int(kw.get("walk_max", 64)), beta)
        for n in range(1, log_dp.size + 1):
            lhs = log_dp[n - 1]
            rhs = math.log(params.c_beta) + beta * n + log_walk[n - 1]
            walk_worst = max(walk_worst, abs(math.expm1(rhs - lhs)))
    return walk_worst <= 1e-8, f"brute/DP {worst:.3g}, DP/walk {walk_worst:.3g}"


def check_connective(**kw: Any) -> Result:
    n = int(kw.get("L", 512))
    seq = partition.dp_log_Z_sequence(n, 0.0)
    ratio = float(seq[-1] - seq[-2])
    return abs(ratio - LOG_MU_PD) <= 1e-3, f"log ratio {ratio:.6f} vs {LOG_MU_PD:.6f}"


def check_free_energy_dp(**kw: Any) -> Result:
    beta = float(kw.get("beta", 0.8))
    n = int(kw.get("L", 512))
    seq = partition.dp_log_Z_sequence(n, beta)
    ratio = float(seq[-1] - seq[-2])
    f = fe.free_energy(beta)
    return abs(f - ratio) <= float(kw.get("tol", 5e-3)), f"f={f:.6f} DP ratio={ratio:.6f}"


def check_critical(**kw: Any) -> Result:
    const = fe.critical_amplitude()
    alg = fe.critical_beta_algebraic()
    ok = const.gamma_residual <= 1e-12 and abs(const.beta_c - alg) <= 1e-10
    return ok, f"beta_c={const.beta_c:.12f} residual={const.gamma_residual:.2e} algebraic={alg:.12f}"


def check_airy(**kw: Any) -> Result:
    a = fe.airy_prime_first_zero()
    b = fe.airy_prime_first_zero_ode()
    return abs(a - b) <= 1e-8 and abs(a - 1.0187929716) <= 1e-8, f"series {a:.12f} ode {b:.12f}"


def check_critical_decay(**kw: Any) -> Result:
    lengths = [int(n) for n in kw.get("lengths", [64, 128, 256, 512])]
    params = make_params(fe.critical_beta())
    seq = partition.walk_repr_log_Z_sequence(max(lengths), params)
    report = exponent_fit("Z_excess", lengths, [math.exp(seq[n - 1]) for n in lengths])
    return abs(report.slope + 2.0 / 3.0) <= 0.07, f"slope {report.slope:.4f}"


def check_pattern_mass(**kw: Any) -> Result:
    law = partition.pattern_law(make_params(float(kw.get("beta", 0.5))))
    return abs(law.total - 1.0) <= 1e-4, f"sum K = {law.total:.8f} over n <= {law.weights.size}"


def check_sampler_tv(**kw: Any) -> Result:
    n = int(kw.get("L", 6))
    beta = float(kw.get("beta", 1.0))
    count = int(kw.get("samples", 100_000))
    chunk = int(kw.get("chunk", count))
    kind = kw.get("kind", "exact")
    seed = int(kw.get("seed", 1))
    counts: Counter[tuple[int, ...]] = Counter()
    for k, start in enumerate(range(0, count, chunk)):
        ens = sampler.sample_ensemble(
            n, beta, min(chunk, count - start), seed + k, kind,
            int(kw.get("burn_in", 0)), int(kw.get("thin", 1)), int(kw.get("workers", 1)),
        )
        counts.update(c.stretches for c in ens.configs)
    law = {s: c / count for s, c in counts.items()}
    tv = sampler.total_variation(law, sampler.gibbs_law(n, beta))
    return tv <= float(kw.get("tol", 0.01)), f"{kind} TV {tv:.4f} (L={n}, beta={beta}, n={count})"


def check_extension_law(**kw: Any) -> Result:
    n = int(kw.get("L", 6))
    beta = float(kw.get("beta", 1.0))
    law = sampler.extension_law(n, make_params(beta))
    weights = np.zeros(n)
    for cfg in enumerate_configs(n):
        weights[cfg.extension - 1] += math.exp(beta * hamiltonian(cfg))
    worst = float(np.max(np.abs(law - weights / weights.sum())))
    return worst <= 1e-12, f"max deviation {worst:.3g}"


def check_wulff_inversion(**kw: Any) -> Result:
    params = make_params(float(kw.get("beta", 2.0)))
    worst = 0.0
    for h0, h1 in kw.get("points", [(0.5, -0.25), (0.3, 0.1), (-0.8, 0.2)]):
        target = wulff.grad_L_Lambda(params, h0, h1)
        back = wulff.invert_grad(params, target)
        worst = max(worst, abs(back[0] - h0), abs(back[1] - h1))
    return worst <= 1e-8, f"max |H - invert(grad(H))| = {worst:.3g}"


def check_wulff_curve(**kw: Any) -> Result:
    data = wulff.wulff_curve(make_params(float(kw.get("beta", 2.0))), int(kw.get("grid", 200)))
    ends = max(abs(data.curve[0]), abs(data.curve[-1]))
    sym = float(np.max(np.abs(data.curve - data.curve[::-1])))
    ok = ends <= 1e-10 and sym <= 1e-10 and abs(data.area - 1.0) <= 1e-4
    return ok, f"a_beta={data.a_beta:.6f} ends={ends:.2e} symmetry={sym:.2e} area={data.area:.6f}"


def check_g_rate(**kw: Any) -> Result:
    params = make_params(float(kw.get("beta", 2.0)))
    u = float(kw.get("u", 0.1))
    exact = wulff.g_rate(params, u)
    finite = wulff.g_rate_dp(params, u, int(kw.get("n", 100)))
    return abs(exact - finite) <= float(kw.get("tol", 0.02)), f"g={exact:.5f} DP={finite:.5f}"


def check_ipsaw_chain(**kw: Any) -> Result:
    n = int(kw.get("L", 12))
    tables = {f: ipsaw.enumerate_family(f, n) for f in ipsaw.FAMILIES}
    for length in range(1, n + 1):
        counts = [tables[f].count(length) for f in ipsaw.FAMILIES]
        if counts != sorted(counts):
            return False, f"inclusion chain broken at L={length}: {counts}"
        for beta in kw.get("betas", [0.5, 1.0]):
            if tables[ipsaw.NE].partition(beta, length) < tables[ipsaw.PD].partition(beta, length):
                return False, f"Z_NE < Z_PD at L={length}, beta={beta}"
    saw = tables[ipsaw.SAW].counts
    return saw[1] == 4 and saw[2] == 12, f"counts at L={n}: " + ", ".join(f"{f}={tables[f].count(n)}" for f in ipsaw.FAMILIES)


def check_midpoint_equivalence(**kw: Any) -> Result:
    n = int(kw.get("L", 12))
    for length in range(1, n + 1):
        for cfg in enumerate_configs(length):
            if ipsaw.self_touchings(ipsaw.path_from_stretches(cfg)) != hamiltonian(cfg):
                return False, f"mismatch at {cfg}"
    return True, f"all partially directed paths up to L={n}"


CHECKS: Dict[str, Callable[..., Result]] = {
    "golden": check_golden,
    "engines": check_engines,
    "connective": check_connective,
    "free_energy_dp": check_free_energy_dp,
    "critical": check_critical,
    "airy": check_airy,
    "critical_decay": check_critical_decay,
    "pattern_mass": check_pattern_mass,
    "sampler_tv": check_sampler_tv,
    "extension_law": check_extension_law,
    "wulff_inversion": check_wulff_inversion,
    "wulff_curve": check_wulff_curve,
    "g_rate": check_g_rate,
    "ipsaw_chain": check_ipsaw_chain,
    "midpoint_equivalence": check_midpoint_equivalence,
}


def check_from_spec(spec: Dict[str, Any]) -> tuple[str, Dict[str, Any]]:
    """Split {"check": name, **params} into (name, params)."""
    spec = dict(spec)
    name = spec.pop("check", None)
    if not name:
        raise ValueError("check spec needs a 'check' key")
    return name, spec


def run_check(name: str, **kwargs: Any) -> Result:
    fn = CHECKS.get(name)
    if fn is None:
        return False, f"unknown check {name!r}"
    return fn(**kwargs)
