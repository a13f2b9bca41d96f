"""Verification suites behind ``lierf <suite>``.

Every suite is deterministic given its :class:`RunConfig`; random fixtures
come from ``random.Random(seed)`` (symbolic indices) and
``numpy.random.default_rng(seed)`` (grid data), so any failing case can be
replayed from the seed in the report.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from ..algebra import XiIndex, check_jacobi, ip, xi
from ..fock import (TABLE1_LABELS, Ket, annihilator_closed_form, inner_bruteforce,
                    inner_recursive, ket_n, partition_check, table1)
from ..kernels import checks as kchecks
from ..kernels import library as lib
from ..kernels.cotangent import (_broadcast_components, cotangent_ip, cotangent_profile,
                                 cotangent_test_function, default_u_weight,
                                 make_cotangent_kernel, multinomials, p_axis, p_range_study)
from ..kernels.em import HBAR, bivector, em_integrand
from ..kernels.fields import (IPBinding, KernelSpec, eval_ip, eval_ip_nested, eval_xi,
                              gimel_transform, pairing)
from ..kernels.gram import psd_check
from ..kernels.grid import GridMismatchError, MomentumGrid
from ..kernels.io import load_kernel, load_shipped
from ..kernels.moments import (connected_coefficient, fourth_moment_closed_form, moment,
                               reduction_residual)
from .config import RunConfig, thread_count
from .parser import evaluate_text
from .report import check, make_report

SUITES = ("jacobi", "table1", "multiplicity", "recursion", "kernel", "moments", "gram", "cotangent")


class UnknownSuiteError(ValueError):
    pass


def parallel_map(fn, items):
    """Ordered map over ``items`` with at most ``LIERF_THREADS`` workers."""
    items = list(items)
    n = min(thread_count(), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- fixtures

GENERATORS = ("X", "Y", "Z", "W")


def random_index(rng: random.Random, pool=GENERATORS, dressed_prob: float = 0.5) -> XiIndex:
    """A generator, or with probability ``dressed_prob`` a small flattened ``xi`` index.

    Dressed indices always keep a non-empty linear slot: that class is closed
    under the commutator, so every inner product that arises is defined.
    """
    if rng.random() >= dressed_prob:
        return XiIndex((), (rng.choice(pool),))
    n_anti = rng.randint(0, 2)
    n_lin = rng.randint(2 if n_anti == 0 else 1, 2)
    return xi([rng.choice(pool) for _ in range(n_anti)], [rng.choice(pool) for _ in range(n_lin)])


# ---------------------------------------------------------------- symbolic suites


def suite_jacobi(cfg: RunConfig, count: int = 50) -> dict:
    rng = random.Random(cfg.seed)
    triples = []
    for i in range(count):
        # every fourth triple is fully dressed so the xi terms are exercised
        p = 1.0 if i % 4 == 0 else 0.5
        triples.append(tuple(random_index(rng, dressed_prob=p) for _ in range(3)))
    results = parallel_map(lambda t: check_jacobi(*t), triples)
    checks = [check("jacobi", len(r), 0, r.is_zero(), triple=[str(x) for x in t])
              for t, r in zip(triples, results)]
    return make_report("jacobi", cfg.seed, {"triples": count}, checks)


TABLE1_EXPECTED = [
    ["ip(Y;X)", "ip(Y;X1,X2)", "ip(Y;X1,X2)", "0"],
    ["ip(Y1,Y2;X)", "ip(Y1;X1) ip(Y2;X2) + ip(Y1;X2) ip(Y2;X1) + 3 ip(Y1,Y2;X1,X2)",
     "ip(Y1,Y2;X1,X2)", "ip(Y1;X1) ip(Y2;X2) + ip(Y1;X2) ip(Y2;X1) + 2 ip(Y1,Y2;X1,X2)"],
    ["ip(Y1,Y2;X)", "ip(Y1,Y2;X1,X2)", "ip(Y1,Y2;X1,X2)", "0"],
    ["0", "ip(Y1;X1) ip(Y2;X2) + ip(Y1;X2) ip(Y2;X1) + 2 ip(Y1,Y2;X1,X2)",
     "0", "ip(Y1;X1) ip(Y2;X2) + ip(Y1;X2) ip(Y2;X1) + 2 ip(Y1,Y2;X1,X2)"],
]


def suite_table1(cfg: RunConfig) -> dict:
    got = table1()
    checks, rows = [], []
    for r, label in enumerate(TABLE1_LABELS):
        rows.append([label] + [str(c) for c in got[r]])
        for c in range(4):
            want = evaluate_text(TABLE1_EXPECTED[r][c])
            diff = got[r][c] - want
            checks.append(check("table1", len(diff), 0, diff.is_zero(),
                                bra=label, ket=TABLE1_LABELS[c]))
    return make_report("table1", cfg.seed, {}, checks, ["bra \\ ket"] + list(TABLE1_LABELS), rows)


def suite_multiplicity(cfg: RunConfig, max_n: int = 4) -> dict:
    checks, rows = [], []
    for n in range(1, max_n + 1):
        expected_top = math.factorial(n) * math.factorial(n - 1)
        ys = ["Y%d" % (i + 1) for i in range(n)]
        xs = ["X%d" % (i + 1) for i in range(n)]
        top = inner_recursive(ys, xs).coeff(ip(ys, xs))
        checks.append(check("top_multiplicity", 0 if top == expected_top else 1, 0, top == expected_top,
                            n=n, expected=expected_top, value=str(top)))
        for row in partition_check(n):
            ok = row["coefficient"] == row["expected"]
            rows.append([n, row["monomial"], "+".join(map(str, row["partition"])),
                         str(row["coefficient"]), row["expected"]])
            checks.append(check("partition_multiplicity", 0 if ok else 1, 0, ok,
                                n=n, partition=row["partition"], monomial=row["monomial"]))
    return make_report("multiplicity", cfg.seed, {"max_n": max_n}, checks,
                       ["n", "monomial", "partition", "coefficient", "expected"], rows)


def suite_recursion(cfg: RunConfig, sets: int = 20, max_n: int = 4) -> dict:
    rng = random.Random(cfg.seed)
    cases = []
    for i in range(sets):
        n = 1 + i % max_n
        ys = tuple(random_index(rng, dressed_prob=0.3) for _ in range(n))
        xs = tuple(random_index(rng, dressed_prob=0.3) for _ in range(n))
        cases.append((ys, xs))

    def compare(case):
        ys, xs = case
        return inner_recursive(ys, xs) - inner_bruteforce(ket_n(*ys), ket_n(*xs))

    checks = []
    for (ys, xs), diff in zip(cases, parallel_map(compare, cases)):
        checks.append(check("recursion_vs_bruteforce", len(diff), 0, diff.is_zero(),
                            n=len(ys), bra=[str(y) for y in ys], ket=[str(x) for x in xs]))
    pairs = [(m, n) for m in range(max_n + 1) for n in range(max_n + 1) if m != n]

    def cross(mn):
        m, n = mn
        ys = ["Y%d" % (i + 1) for i in range(m)]
        xs = ["X%d" % (i + 1) for i in range(n)]
        return inner_bruteforce(ket_n(*ys), ket_n(*xs))

    for (m, n), val in zip(pairs, parallel_map(cross, pairs)):
        checks.append(check("cross_level_orthogonality", len(val), 0, val.is_zero(), m=m, n=n))
    for n in range(max_n + 1):
        for dressed in (False, True):
            if dressed:
                xs = [random_index(rng, dressed_prob=1.0) for _ in range(n)]
                y = random_index(rng, dressed_prob=1.0)
            else:
                xs = ["X%d" % (i + 1) for i in range(n)]
                y = XiIndex((), ("Y",))
            diff = annihilator_closed_form(y, xs) - Ket.monomial(*xs).annihilate(y)
            checks.append(check("annihilator_closed_form", len(diff), 0, diff.is_zero(),
                                n=n, y=str(y), x=[str(a) for a in xs]))
    return make_report("recursion", cfg.seed, {"sets": sets, "max_n": max_n}, checks)


# ---------------------------------------------------------------- numeric helpers


def config_grid(cfg: RunConfig) -> MomentumGrid:
    return MomentumGrid(cfg.dimension, cfg.n, cfg.spacing)


def _c_from_phase(theta: float) -> complex:
    return complex(math.cos(theta), math.sin(theta))


def selected_kernels(cfg: RunConfig) -> list[KernelSpec]:
    """Kernels under test: shipped fixtures, the broken fixture, or a kernel file.

    Fixtures are used as stored on the default grid; on any other grid the
    same analytic kernels are tabulated afresh.  ``c_phase`` replaces the
    shipped phase set by a single shell kernel with that phase.  A kernel
    file must live on the configured grid; the configured coupling applies to
    every kernel.
    """
    grid = config_grid(cfg)
    default = grid == lib.DEFAULT_GRID
    if cfg.kernel == "shipped":
        if cfg.c_phase is not None:
            return [lib.shell_kernel(grid, _c_from_phase(cfg.c_phase), cfg.lam,
                                     label="shell_phase")]
        if default:
            return [load_shipped(n).with_lambda(cfg.lam) for n in ("shell_c1", "shell_ci", "shell_cpi4")]
        return [lib.shell_kernel(grid, c, cfg.lam, label="shell_" + k) for k, c in lib.PHASES.items()]
    if cfg.kernel == "broken":
        k = load_shipped("broken") if default else lib.broken_kernel(grid)
        return [k.with_lambda(cfg.lam)]
    k = load_kernel(cfg.kernel)
    if k.grid != grid:
        raise GridMismatchError("kernel file grid %s differs from the configured grid %s"
                                % (k.grid.to_json(), grid.to_json()))
    return [k.with_lambda(cfg.lam)]


def _kernel_label(k: KernelSpec) -> str:
    return k.label or "kernel"


def _kernel_checks(k: KernelSpec, cfg: RunConfig, rng: np.random.Generator) -> list[dict]:
    tol = cfg.tolerances.identity
    label = _kernel_label(k)
    out = []
    sym = kchecks.kernel_symmetry_check(k, tol)
    out.append(check("kernel_symmetry", sym.residual, tol, sym.passed, kernel=label,
                     c=[sym.c.real, sym.c.imag]))
    if k.c is not None:
        dc = abs(sym.c - k.c)
        out.append(check("declared_phase", dc, tol, dc <= tol, kernel=label))
    com = kchecks.commutator_details(k, seed=cfg.seed)
    out.append(check("commutator_residual", com.residual, tol, com.residual <= tol, kernel=label,
                     integral=com.integral, symmetry_defect=com.symmetry_defect))
    cls = kchecks.spectrum_support_classify(k, tol)
    out.append(check("classification", 0 if cls is kchecks.Classification.RANDOM_FIELD else 1, 0,
                     cls is kchecks.Classification.RANDOM_FIELD, kernel=label, value=cls.value))
    fields = [gimel_transform(lib.random_test_function(k.grid, rng), k) for _ in range(4)]
    worst_nest = worst_conj = 0.0
    for m in range(1, 4):
        for n in range(1, 5 - m):
            anti, lin = fields[:m], (fields[m:] + fields)[:n]
            a = eval_ip(anti, lin, k.lam)
            b = eval_ip_nested(anti, lin, k.lam)
            scale = max(abs(a), abs(b))
            worst_nest = max(worst_nest, abs(a - b) / scale if scale else 0.0)
            c = eval_ip(lin, anti, k.lam)
            worst_conj = max(worst_conj, abs(a - c.conjugate()) / scale if scale else 0.0)
    out.append(check("nesting_oracle", worst_nest, tol, worst_nest <= tol, kernel=label))
    out.append(check("conjugate_symmetry", worst_conj, tol, worst_conj <= tol, kernel=label))
    f = lib.random_test_function(k.grid, rng)
    g = lib.random_test_function(k.grid, rng)
    hf, hg = gimel_transform(f, k), gimel_transform(g, k)
    hfs = gimel_transform(lib.conjugate_test_function(f), k)
    hgs = gimel_transform(lib.conjugate_test_function(g), k)
    v1, v2 = pairing(hfs, hg), pairing(hgs, hf)
    x1, x2 = eval_xi(hfs, hg, k.lam).values, eval_xi(hgs, hf, k.lam).values
    scale = max(abs(v1), float(np.max(np.abs(x1))), 1e-300)
    comm = max(abs(v1 - v2), float(np.max(np.abs(x1 - x2)))) / scale
    out.append(check("observable_commutativity", comm, tol, comm <= tol, kernel=label))
    return out


def suite_kernel(cfg: RunConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    kernels = selected_kernels(cfg)
    checks = []
    for k in kernels:
        checks.extend(_kernel_checks(k, cfg, rng))
    tol = cfg.tolerances.identity
    neg = cfg.tolerances.negative_control
    grid = config_grid(cfg)
    # negative controls: each passes when the defect is detected
    broken = load_shipped("broken") if grid == lib.DEFAULT_GRID else lib.broken_kernel(grid)
    r = kchecks.commutator_residual(broken, seed=cfg.seed)
    checks.append(check("negative_control_broken", r, neg, r > neg, kernel="broken"))
    noise = lib.noise_kernel(grid, rng)
    sym = kchecks.kernel_symmetry_check(noise, tol)
    checks.append(check("negative_control_noise", sym.residual, tol, not sym.passed, kernel="noise"))
    cone = lib.forward_cone_kernel(grid)
    cls = kchecks.spectrum_support_classify(cone, tol)
    checks.append(check("forward_cone_classification", 0 if cls.value == "spectrum-condition" else 1, 0,
                        cls is kchecks.Classification.SPECTRUM_CONDITION, value=cls.value))
    shell = lib.mass_shell_indicator(grid)
    off = np.where(shell.values == 0, lib.random_test_function(grid, rng), 0)
    proj = float(np.max(np.abs(gimel_transform(off, shell).values)))
    checks.append(check("mass_shell_projection", proj, 0, proj == 0.0))
    # electromagnetic integrand on a null momentum along z
    u0 = 1.5
    u = (u0, 0.0, 0.0, u0)
    f = bivector(e=(1, 0, 0), b=(0, 1, 0))
    v = em_integrand(f, f, u)
    checks.append(check("em_transverse", abs(v - 4 * u0 * u0), 0, v == 4 * u0 * u0, u0=u0))
    e3 = bivector(e=(0, 0, 1))
    v3 = em_integrand(e3, e3, u)
    checks.append(check("em_longitudinal", abs(v3), 0, v3 == 0, u0=u0))
    z = np.zeros((4, 4))
    checks.append(check("em_zero", abs(em_integrand(z, z, u)), 0, em_integrand(z, z, u) == 0))
    params = {"kernel": cfg.kernel, "lambda": cfg.lam, "grid": grid.to_json()}
    return make_report("kernel", cfg.seed, params, checks, metadata={"hbar": HBAR})


def suite_moments(cfg: RunConfig, steps: int = 8) -> dict:
    grid = config_grid(cfg)
    rng = np.random.default_rng(cfg.seed)
    f = 0.3 * lib.random_test_function(grid, rng, real=True)
    phases = [math.pi * j / steps for j in range(steps + 1)]
    if cfg.c_phase is not None and cfg.c_phase not in phases:
        phases.append(cfg.c_phase)
    tol = cfg.tolerances.moment
    rows, checks = [], []
    m2s, m4s, conns = [], [], []
    for theta in phases:
        c = _c_from_phase(theta)
        k = lib.shell_kernel(grid, c, cfg.lam)
        m2 = moment(f, 2, k)
        m4 = moment(f, 4, k)
        closed = fourth_moment_closed_form(f, k).real
        rel = abs(m4 - closed) / max(abs(closed), 1e-300)
        red = reduction_residual(f, k)
        h = gimel_transform(f, k)
        conn = connected_coefficient(c)
        conn_val = (conn * eval_ip([h, h], [h, h], k.lam)).real
        rows.append([theta, c.real, c.imag, m2, m4, conn, closed, rel])
        checks.append(check("fourth_moment_closed_form", rel, tol, rel <= tol, phase=theta))
        checks.append(check("fourth_moment_reduction", red, tol, red <= tol, phase=theta))
        checks.append(check("connected_part_nonnegative", max(0.0, -conn_val), 0, conn_val >= 0,
                            phase=theta))
        m2s.append(m2)
        m4s.append(m4)
        conns.append(conn)
    spread2 = (max(m2s) - min(m2s)) / max(abs(m2s[0]), 1e-300)
    spread4 = (max(m4s) - min(m4s)) / max(abs(m4s[0]), 1e-300)
    checks.append(check("m2_phase_independent", spread2, tol, spread2 <= tol))
    checks.append(check("m4_phase_dependent", spread4, tol, spread4 > tol))
    lo, hi = min(conns), max(conns)
    span_err = max(abs(lo - 2), abs(hi - 6))
    checks.append(check("connected_coefficient_range", span_err, 1e-12, span_err <= 1e-12,
                        low=lo, high=hi))
    k0 = lib.shell_kernel(grid, 1.0, 0.0)
    two = moment(f, 2, k0)
    for kk in (1, 2, 3):
        val = moment(f, 2 * kk, k0)
        want = math.prod(range(1, 2 * kk, 2)) * two ** kk
        rel = abs(val - want) / abs(want)
        checks.append(check("free_field_moment", rel, tol, rel <= tol, order=2 * kk))
    params = {"lambda": cfg.lam, "grid": grid.to_json(), "phases": len(phases)}
    cols = ["phase", "c_re", "c_im", "m2", "m4", "connected_coefficient", "closed_form", "rel_error"]
    return make_report("moments", cfg.seed, params, checks, cols, rows)


@lru_cache(maxsize=None)
def _symbolic_gram_entry(bra: Ket, ket: Ket):
    return inner_bruteforce(bra, ket)


def random_ket_family(rng: random.Random, names, size: int, max_level: int = 3) -> list[Ket]:
    kets = []
    for _ in range(size):
        level = rng.randint(0, max_level)
        args = [rng.choice(names) for _ in range(level)]
        kets.append(ket_n(*args))
    return kets


def suite_gram(cfg: RunConfig, count: int = 30) -> dict:
    grid = config_grid(cfg)
    kernels = [lib.shell_kernel(grid, c, cfg.lam) for c in lib.PHASES.values()]
    names = ("f1", "f2", "f3")
    cases = []
    for i in range(count):
        srng = random.Random(cfg.seed * 1000 + i)
        nrng = np.random.default_rng([cfg.seed, i])
        size = srng.randint(4, 12)
        kets = random_ket_family(srng, names, size)
        funcs = {n: 0.4 * lib.random_test_function(grid, nrng) for n in names}
        cases.append((i, kernels[i % len(kernels)], kets, funcs))

    def run(case):
        i, k, kets, funcs = case
        binding = IPBinding.from_test_functions(funcs, k)
        n = len(kets)
        m = np.zeros((n, n), dtype=complex)
        for a in range(n):
            for b in range(n):
                m[a, b] = binding.evaluate(_symbolic_gram_entry(kets[a], kets[b]))
        herm = float(np.max(np.abs(m - m.conj().T))) / max(float(np.max(np.abs(m))), 1e-300)
        return herm, psd_check(m, cfg.tolerances.psd), n

    checks = []
    for (i, k, _, _), (herm, res, n) in zip(cases, parallel_map(run, cases)):
        checks.append(check("gram_hermitian", herm, cfg.tolerances.identity,
                            herm <= cfg.tolerances.identity, matrix=i, size=n))
        scale = max(abs(res.max_eigenvalue), abs(res.min_eigenvalue))
        slack = max(0.0, -res.min_eigenvalue) / scale if scale else 0.0
        checks.append(check("gram_psd", slack, res.tolerance, res.passed, matrix=i, size=n,
                            min_eigenvalue=res.min_eigenvalue, max_eigenvalue=res.max_eigenvalue,
                            kernel_c=[k.c.real, k.c.imag]))
    return make_report("gram", cfg.seed, {"matrices": count, "lambda": cfg.lam}, checks)


def suite_cotangent(cfg: RunConfig) -> dict:
    tol = cfg.tolerances.identity
    conv = cfg.tolerances.convergence
    u_grid = MomentumGrid(2, 16, 0.5)
    checks, rows = [], []
    gk = make_cotangent_kernel("gaussian", 1.0, u_grid=u_grid, seed=cfg.seed)
    pk = make_cotangent_kernel("power_law", 1.0, 5.0, u_grid=u_grid, seed=cfg.seed)
    for ck in (gk, pk):
        checks.append(check("cotangent_symmetry", ck.symmetry_defect, tol, ck.symmetry_defect <= tol,
                            kind=ck.kind))
    # exact zeros outside the step-function support
    u, pm = _broadcast_components(u_grid, p_axis(16, 0.5))
    g = cotangent_profile("gaussian", u, pm, 1.0)
    outside_p = (pm[0] < 0) | (pm[0] ** 2 - pm[1] ** 2 < 0)
    outside_u = (u[0] ** 2 - u[1] ** 2 < 1.0)
    vp = float(np.max(np.abs(g[np.broadcast_to(outside_p, g.shape)])))
    vu = float(np.max(np.abs(g[np.broadcast_to(outside_u, g.shape)])))
    checks.append(check("gaussian_zero_outside_p_cone", vp, 0, vp == 0.0))
    checks.append(check("gaussian_zero_below_mass", vu, 0, vu == 0.0))
    rng = np.random.default_rng(cfg.seed)
    f_u = default_u_weight(u_grid) * np.exp(1j * rng.uniform(0, 2 * np.pi, u_grid.shape))
    t = cotangent_test_function(gk, f_u, (1, 0))
    val = cotangent_ip(t, t, gk)
    checks.append(check("cotangent_diagonal_nonnegative", abs(val.imag), tol,
                        abs(val.imag) <= tol * abs(val) and val.real >= 0))
    for kind, r in (("gaussian", None), ("power_law", 5.0)):
        for deg in range(5):
            for e in multinomials(2, deg):
                st = p_range_study(kind, e, 1.0, r, u_grid, conv_tol=conv)
                rows.append([kind, "" if r is None else r, deg, "p0^%d p1^%d" % e,
                             st.sums[-1], st.last_relative_increment, st.verdict])
                if kind == "gaussian":
                    checks.append(check("gaussian_finite", st.last_relative_increment, conv,
                                        st.verdict == "finite", exponents=list(e)))
                elif deg <= 2:
                    checks.append(check("power_law_finite", st.last_relative_increment, conv,
                                        st.verdict == "finite", exponents=list(e), r=r))
                elif deg == 4:
                    checks.append(check("power_law_divergent", st.last_relative_increment, conv,
                                        st.verdict == "divergent", exponents=list(e), r=r))
    cols = ["kind", "r", "degree", "monomial", "largest_range_value", "last_relative_increment", "verdict"]
    params = {"u_grid": u_grid.to_json(), "p_spacing": 0.5, "p_points": [16, 32, 64, 128], "m": 1.0}
    return make_report("cotangent", cfg.seed, params, checks, cols, rows)


_RUNNERS = {
    "jacobi": suite_jacobi,
    "table1": suite_table1,
    "multiplicity": suite_multiplicity,
    "recursion": suite_recursion,
    "kernel": suite_kernel,
    "moments": suite_moments,
    "gram": suite_gram,
    "cotangent": suite_cotangent,
}


def run_suite(name: str, cfg: RunConfig) -> dict:
    """Run one named suite; the report's ``pass`` is the conjunction of its checks."""
    try:
        runner = _RUNNERS[name]
    except KeyError:
        raise UnknownSuiteError("unknown suite %r (choose from %s)" % (name, ", ".join(SUITES))) from None
    rep = runner(cfg)
    rep["parameters"] = dict(rep["parameters"], config=cfg.parameters())
    return rep
