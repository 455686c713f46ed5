"""Exit criteria, one test per criterion; each records a PASS/FAIL line."""
import math
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES
from pulsedqubit import harness, oracle
from pulsedqubit.measures import ExchangeMode, Measure
from pulsedqubit.propagators import DriveConfig, nonrwa_matrix, rotation_matrix, rwa_matrix, trajectory_array
from pulsedqubit.states import StateAngles, bloch_from_angles

LN2 = math.log(2)


def record(n, title, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def rwa_sample():
    rng = np.random.default_rng(2024)
    n = 1000
    om = rng.uniform(0.1, 10, n)
    de = rng.uniform(-5, 5, n)
    th = rng.uniform(0, math.pi, n)
    ph = rng.uniform(0, 2 * math.pi, n)
    t = rng.uniform(0, 1, n) * 10 / om
    u0 = np.array([bloch_from_angles(StateAngles(a, b)).as_array() for a, b in zip(th, ph)])
    mats = np.array([rwa_matrix(DriveConfig(omega=o, delta=d, pulse_duration=10 / o), tt) for o, d, tt in zip(om, de, t)])
    return om, de, t, u0, mats


def test_1_rwa_exactness(rwa_sample):
    om, de, t, u0, mats = rwa_sample
    start = time.perf_counter()
    closed = np.einsum("nij,nj->ni", mats, u0)
    num = oracle.rk4_final(u0, t, 1e-3 / om, om, de, 1.0, full=False)
    elapsed = time.perf_counter() - start
    err = np.abs(num - closed).max(axis=1)
    n_bad = int((err > 1e-7).sum())
    worst = int(np.argmax(err))
    record(
        1, "RWA closed form vs RK4 (dt=1e-3/Omega)", n_bad == 0 and elapsed < 30,
        f"max err {err.max():.2e} (tol 1e-7), {n_bad}/1000 over tol, worst at Omega1/Omega="
        f"{math.hypot(om[worst], de[worst]) / om[worst]:.1f}, {elapsed:.1f}s (< 30s)",
    )


def test_2_rotation_structure(rwa_sample):
    om, de, t, _, mats = rwa_sample
    orth = max(np.abs(m.T @ m - np.eye(3)).max() for m in mats)
    det = max(abs(np.linalg.det(m) - 1) for m in mats)
    rod = max(np.abs(m - rotation_matrix((o, 0, d), math.hypot(o, d) * tt)).max() for m, o, d, tt in zip(mats, om, de, t))
    record(2, "RWA matrix is a rotation", max(orth, det, rod) <= 1e-12,
           f"|MtM-I|={orth:.1e}, |det-1|={det:.1e}, |M-axis-angle|={rod:.1e} (tol 1e-12)")


def test_3_reduction_law():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(100):
        om, wl = rng.uniform(0.1, 10, 2)
        t = rng.uniform(0, 10 / om)
        cfg = DriveConfig(omega=om, omega_l=wl, lam=0.0, pulse_duration=10 / om)
        worst = max(worst, np.abs(nonrwa_matrix(cfg, t) - rwa_matrix(cfg, t)).max())
    record(3, "lambda=0 reduces to RWA at Delta=0", worst <= 1e-15, f"max diff {worst:.1e} (tol 1e-15)")


def test_4_lambda_scaling():
    lams = [0.01, 0.02, 0.04, 0.08]
    u0 = bloch_from_angles(StateAngles(math.pi / 2, math.pi / 2))
    grid = np.linspace(0, 15, 1001)
    devs = []
    for lam in lams:
        # the oracle sees lambda only through omega_l = Omega / lambda
        cfg = DriveConfig(omega=1.0, omega_l=1.0 / lam, lam=lam, pulse_duration=15)
        num = oracle.sample(cfg, u0, grid, oracle.Mode.FULL)
        devs.append(np.abs(trajectory_array(cfg, u0, grid, "NonRWA") - num).max())
    monotone = all(a < b for a, b in zip(devs, devs[1:]))
    c_fit = max(d / l for d, l in zip(devs, lams))
    order = np.polyfit(np.log(lams), np.log(devs), 1)[0]
    record(4, "NonRWA vs Full oracle scales with lambda", monotone and c_fit <= 10,
           "devs " + ", ".join(f"{d:.3e}" for d in devs) + f"; C={c_fit:.2f} (<= 10); order {order:.2f}")


def test_5_fidelity_landmark():
    res = harness.compute(harness.preset_spec("fig1a"))
    taus = res.taus
    f = res.series["fidelity"][0][1]
    assert res.series["fidelity"][0][0] == {"phi": math.pi / 2}
    err = np.abs(f - (1 + np.cos(taus)) / 2).max()
    step = taus[1] - taus[0]
    first = taus[np.argmax(f < 1e-5)]
    record(5, "F(tau) = (1+cos tau)/2, first zero at pi", err <= 1e-10 and abs(first - math.pi) <= step,
           f"max err {err:.1e} (tol 1e-10), first zero {first:.4f} (expected pi within one grid step)")


def test_6_exchange_modes():
    worst_vn, max_fb, worst_edge, anti = 0.0, 0.0, 0.0, True
    for name in ("fig1a", "fig2a", "fig3a"):
        spec = harness.preset_spec(name)
        spec = harness.RunSpec(**{k: getattr(spec, k) for k in spec.__dataclass_fields__ if k != "measures"},
                               measures=(Measure("fidelity"), Measure("exchange", ExchangeMode.VON_NEUMANN),
                                         Measure("exchange", ExchangeMode.FIDELITY_BINARY)))
        res = harness.compute(spec)
        for k in range(len(spec.variants)):
            f = res.series["fidelity"][k][1]
            vn = res.series["exchange_VonNeumann"][k][1]
            fb = res.series["exchange_FidelityBinary"][k][1]
            worst_vn = max(worst_vn, np.abs(vn).max())
            max_fb = max(max_fb, fb.max())
            edge = (f < 1e-6) | (f > 1 - 1e-6)
            if edge.any():
                worst_edge = max(worst_edge, fb[edge].max())
            # while F falls from 1 towards 1/2 the exchange must rise
            upper = f >= 0.5
            df, de = np.diff(f), np.diff(fb)
            mask = upper[:-1] & upper[1:] & (np.abs(df) > 1e-9)
            anti &= bool(np.all(df[mask] * de[mask] < 0))
    ok = worst_vn <= 1e-10 and max_fb <= LN2 + 1e-12 and worst_edge <= 1e-4 and anti
    record(6, "exchange modes under RWA", ok,
           f"max|VonNeumann| {worst_vn:.1e} (tol 1e-10), max FidelityBinary {max_fb:.4f} (<= ln2), "
           f"at F in {{0,1}} {worst_edge:.1e}, rises as F falls: {anti}")


def test_7_orthogonality_landmark():
    res = harness.compute(harness.preset_spec("fig6a"))
    taus, sp = res.taus, res.series["abs_sp11"][0][1]
    step = taus[1] - taus[0]
    misses = []
    k = 0
    while (z := math.pi * (2 * k + 1)) <= taus[-1]:
        near = np.abs(taus - z) <= step * (1 + 1e-9)
        if sp[near].min() > step:
            misses.append(round(z, 3))
        k += 1
    res_d = harness.compute(harness.preset_spec("fig6d"))
    window = (res_d.taus >= 20) & (res_d.taus <= 35)
    min_d = res_d.series["abs_sp11"][0][1][window].min()
    record(7, "|Sp11| zeros at odd pi (fig6a), floor off resonance (fig6d)", not misses and min_d > 0.05,
           f"fig6a: {len(misses)} of {k} odd-pi zeros missing, |Sp11| in [{sp.min():.4f}, {sp.max():.4f}]; "
           f"fig6d: min |Sp11| on [20,35] = {min_d:.4f} (> 0.05)")


def test_8_rk4_order():
    u0 = np.array([0.0, 1.0, 0.0])
    finals = [oracle.rk4_bloch(u0, 10.0, h, 1.0, 0.0, 1.0, True)[1][-1] for h in (0.01, 0.005, 0.00125)]
    ratio = np.linalg.norm(finals[0] - finals[2]) / np.linalg.norm(finals[1] - finals[2])
    record(8, "RK4 order on the Full system", 14 <= ratio <= 18, f"error ratio {ratio:.3f} (in [14, 18])")


def test_9_determinism_and_suite(tmp_path):
    from pulsedqubit import cli

    assert cli.main(["figure", "fig1a", "--out", str(tmp_path / "a")]) == 0
    assert cli.main(["figure", "fig1a", "--out", str(tmp_path / "b")]) == 0
    same = (tmp_path / "a" / "fig1a_fidelity.csv").read_bytes() == (tmp_path / "b" / "fig1a_fidelity.csv").read_bytes()
    start = time.perf_counter()
    assert cli.main(["figure", "all", "--out", str(tmp_path / "all")]) == 0
    elapsed = time.perf_counter() - start
    n = len(list((tmp_path / "all").glob("*.csv")))
    record(9, "deterministic CSV, full preset suite < 60 s", same and elapsed < 60 and n == 18,
           f"byte-identical: {same}; {n} CSVs in {elapsed:.1f}s")
