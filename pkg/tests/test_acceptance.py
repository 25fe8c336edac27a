"""Acceptance criteria, one test per criterion.

Each test records a single ``PASS``/``FAIL`` line (printed, and repeated in
the pytest terminal summary) together with its runtime budget.
"""
import math
import time

import numpy as np
import pytest

from qdiscord import (
    TABLE_I,
    BlochVector,
    ChartPoint,
    HamiltonianSpec,
    JointCategory,
    Model,
    NoiseMode,
    NoiseSpec,
    TABLE_II,
    brute_force_geometric_discord,
    build_quasi_hamiltonian,
    chart_forward,
    chart_inverse,
    concurrence,
    dqc1_trajectory,
    geometric_discord_batch,
    geometric_discord_left,
    is_physical,
    quantum_discord_left,
    random_physical,
    rtn_evolve,
    rtn_ising_bell_oracle,
    rtn_ising_dqc1_oracle,
    sample_chart_points,
    section2_table,
    sqrt_det_g,
    tangent_frame,
    tangent_frame_fd,
    two_fluctuator_evolve,
    unitary_trajectory,
    werner_xy_oracles,
    bell_beta_oracles,
    bell_beta_trajectory,
    bell_diagonal,
    xy_quasi_hamiltonian_spectrum,
)
from qdiscord.classifier import Trajectory, classify_joint, detect_frozen
from qdiscord.config import parse_config, run_trajectory


def _verdict(report, n, title, ok, detail, elapsed, budget):
    ok_time = elapsed < budget
    status = "PASS" if ok and ok_time else "FAIL"
    report(f"[{status}] criterion {n:>2}: {title} -- {detail} ({elapsed:.1f}s, budget {budget:g}s)")
    assert ok, detail
    assert ok_time, f"runtime {elapsed:.1f}s exceeds {budget}s"


def _random_states(seed, n):
    rng = np.random.default_rng(seed)
    return np.array([random_physical(rng).flat() for _ in range(n)])


# --------------------------------------------------------------------------- 1


def test_c01_geometric_discord_oracle(report):
    t0 = time.perf_counter()
    S = _random_states(101, 500)
    closed = geometric_discord_batch(S)
    coarse = brute_force_geometric_discord(S, n_samples=100_000, seed=7)
    fine = brute_force_geometric_discord(S, n_samples=1_000_000, seed=7)
    refined = brute_force_geometric_discord(S, n_samples=1_000_000, refine_rounds=20, seed=7)
    elapsed = time.perf_counter() - t0

    lower = bool(np.all(fine >= closed - 1e-12) and np.all(refined >= closed - 1e-12))
    ratio_coarse = float(np.median(coarse / closed))
    ratio_fine = float(np.median(fine / closed))
    worst = float(np.max(refined / closed))
    converging = ratio_fine <= ratio_coarse and worst <= 1.05
    _verdict(report, 1, "geometric discord closed form vs brute force", lower and converging,
             f"closed form <= sampled min on all 500: {lower}; median ratio 1e5->1e6 samples "
             f"{ratio_coarse:.3f}->{ratio_fine:.3f}; after local refinement max ratio {worst:.4f}",
             elapsed, 120)


# --------------------------------------------------------------------------- 2


def test_c02_chart_integrity(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(202)
    th, ph, p, n0, n1 = sample_chart_points(10_000, rng)
    worst_rt = worst_dg = 0.0
    all_physical = True
    for k in range(10_000):
        x = ChartPoint.from_angles(p[k], th[k], ph[k], n0[k], n1[k])
        N = chart_forward(x)
        back = chart_forward(chart_inverse(N))
        worst_rt = max(worst_rt, float(np.max(np.abs(back.flat() - N.flat()))))
        worst_dg = max(worst_dg, geometric_discord_left(N, check=False))
        all_physical &= is_physical(N)
    elapsed = time.perf_counter() - t0
    ok = worst_rt < 1e-10 and worst_dg < 1e-10 and all_physical
    _verdict(report, 2, "chart round trips", ok,
             f"max round-trip error {worst_rt:.1e}, max D_G {worst_dg:.1e}, all physical {all_physical}",
             elapsed, 10)


# --------------------------------------------------------------------------- 3


def test_c03_metric_consistency(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(303)
    th, ph, p, n0, n1 = sample_chart_points(1000, rng)
    th = np.clip(th, 0.05, math.pi - 0.05)  # keep clear of the coordinate poles
    worst_rel = worst_fd = 0.0
    for k in range(1000):
        x = ChartPoint.from_angles(p[k], th[k], ph[k], n0[k], n1[k])
        geo = tangent_frame(x)
        gram = math.sqrt(abs(np.linalg.det(geo.g)))
        closed = sqrt_det_g(x)
        worst_rel = max(worst_rel, abs(gram - closed) / closed)
        worst_fd = max(worst_fd, float(np.max(np.abs(geo.tangents - tangent_frame_fd(x)))))
    elapsed = time.perf_counter() - t0
    ok = worst_rel < 1e-8 and worst_fd < 1e-6
    _verdict(report, 3, "metric determinant and tangent frame", ok,
             f"max relative sqrt|g| error {worst_rel:.1e}, max finite-difference gap {worst_fd:.1e}",
             elapsed, 30)


# --------------------------------------------------------------------------- 4


def test_c04_table_reproduction(report):
    t0 = time.perf_counter()
    rows = section2_table(201)
    elapsed = time.perf_counter() - t0
    got = "".join(rows)
    ref = "".join(TABLE_I)
    mismatches = sum(a != b for a, b in zip(got, ref)) + abs(len(got) - len(ref))
    _verdict(report, 4, "2-section table", len(ref) == 105 and mismatches == 0,
             f"{len(ref) - mismatches}/105 entries match", elapsed, 300)


# --------------------------------------------------------------------------- 5


def test_c05_dqc1_peak(report):
    t0 = time.perf_counter()
    ts = np.linspace(0.0, math.pi / 2, 721)
    D = np.empty_like(ts)
    C = np.empty_like(ts)
    for k, t in enumerate(ts):
        N = dqc1_trajectory(1.0, t)
        D[k] = quantum_discord_left(N)[0]
        C[k] = concurrence(N)
    # refine the peak on a fine local grid
    k = int(np.argmax(D))
    fine = np.linspace(ts[max(k - 1, 0)], ts[min(k + 1, len(ts) - 1)], 41)
    peak = max(quantum_discord_left(dqc1_trajectory(1.0, t))[0] for t in fine)
    elapsed = time.perf_counter() - t0
    ok = abs(peak - 0.2016) <= 0.002 and float(np.max(C)) < 1e-10
    _verdict(report, 5, "DQC1 discord peak", ok,
             f"peak D = {peak:.5f} (target 0.2016 +- 0.002), max C = {np.max(C):.1e}",
             elapsed, 60)


# --------------------------------------------------------------------------- 6


def test_c06_closed_form_trajectory_oracles(report):
    t0 = time.perf_counter()
    H = HamiltonianSpec.xy_antisym(1.0)
    ts = np.linspace(0.0, math.pi, 241)  # two periods of the state
    worst_c = worst_d = 0.0
    for N0, oracle in ((BlochVector.from_components(N11=-1, N22=-1, N33=-1),
                        lambda t: werner_xy_oracles(1.0, 1.0, t)),
                       (bell_beta_trajectory(0.5, 1.0, 0.0),
                        lambda t: bell_beta_oracles(0.5, 1.0, t))):
        flat = unitary_trajectory(H, N0, ts)
        for t, v in zip(ts, flat):
            N = BlochVector.from_flat(v)
            C_ref, D_ref = oracle(t)
            worst_c = max(worst_c, abs(concurrence(N) - C_ref))
            worst_d = max(worst_d, abs(quantum_discord_left(N)[0] - D_ref))
    # the alpha = 1 concurrence is |cos 4 J_yx t|
    flat = unitary_trajectory(H, BlochVector.from_components(N11=-1, N22=-1, N33=-1), ts)
    worst_cos = max(abs(concurrence(BlochVector.from_flat(v)) - abs(math.cos(4 * t)))
                    for t, v in zip(ts, flat))
    elapsed = time.perf_counter() - t0
    ok = worst_c < 1e-10 and worst_cos < 1e-10 and worst_d < 1e-4
    _verdict(report, 6, "closed-form trajectory oracles", ok,
             f"max |C - oracle| {max(worst_c, worst_cos):.1e}, max |D - oracle| {worst_d:.1e}",
             elapsed, 120)


# --------------------------------------------------------------------------- 7


def _draw_envelope_case(rng, markovian):
    gamma = rng.uniform(0.2, 2.0)
    g = gamma / 2 * (rng.uniform(0.2, 0.9) if markovian else rng.uniform(1.1, 4.0))
    return g, gamma, rng.uniform(0.0, 6.0), rng.uniform(0.2, 2.0)


def _match_spectra(a, b):
    a = list(np.asarray(a, dtype=complex))
    worst = 0.0
    for z in np.asarray(b, dtype=complex):
        k = int(np.argmin([abs(z - w) for w in a]))
        worst = max(worst, abs(z - a.pop(k)))
    return worst


def test_c07_quasi_hamiltonian_envelopes(report):
    t0 = time.perf_counter()
    rng = np.random.default_rng(707)
    worst = 0.0
    regimes = {True: 0, False: 0}
    for i in range(500):
        markovian = i % 2 == 0
        g, gamma, t, J = _draw_envelope_case(rng, markovian)
        kind = i % 4
        if kind == 0:  # F envelope: DQC1 input, noise on A
            Hq = build_quasi_hamiltonian(HamiltonianSpec(Model.Ising, J=J), NoiseSpec(g, gamma))
            ref = rtn_ising_dqc1_oracle(J, g, gamma, t)
            N0 = BlochVector.from_components(N20=1.0)
        elif kind == 1:  # F envelope with the field on B, Bell-diagonal input
            B = rng.uniform(0.0, 1.0)
            c = bell_diagonal(*rng.uniform(-1, 1, 3) / 3)
            Hq = build_quasi_hamiltonian(HamiltonianSpec(Model.Ising, J=J, B_z=B), NoiseSpec(g, gamma))
            ref = rtn_ising_bell_oracle(c["N11"], c["N22"], c["N33"], g, gamma, B, t)
            N0 = c
        else:  # G (xi = 1) and H (xi != 1) envelopes: two independent fluctuators
            xi = 1.0 if kind == 2 else rng.uniform(0.3, 3.0)
            N0 = random_physical(rng)
            Hq = build_quasi_hamiltonian(HamiltonianSpec(Model.Ising, J=J),
                                         NoiseSpec(g, gamma, xi, NoiseMode.TwoUncorrelated))
            ref = two_fluctuator_evolve(N0, J, g, gamma, xi, t)
        got = rtn_evolve(Hq, N0, t)
        worst = max(worst, float(np.max(np.abs(got.flat() - ref.flat()))))
        regimes[markovian] += 1

    spec_worst = 0.0
    quoted_worst = 0.0
    for _ in range(40):
        J, g, gamma = rng.uniform(0.2, 2.0, 3)
        Hq = build_quasi_hamiltonian(HamiltonianSpec.xy_antisym(J), NoiseSpec(g, gamma))
        ev = np.asarray(Hq.eigenvalues())
        listed = xy_quasi_hamiltonian_spectrum(J, g, gamma)
        covered = np.abs(ev[:, None] - listed[None]).min(1).max()  # every eigenvalue is listed
        spec_worst = max(spec_worst, _match_spectra(ev, listed), covered)
        quoted = xy_quasi_hamiltonian_spectrum(J, g, gamma, quoted=True)
        quoted_worst = max(quoted_worst, np.abs(ev[:, None] - quoted[None]).min(0).max())
    elapsed = time.perf_counter() - t0
    ok = worst < 1e-9 and spec_worst < 1e-9 and regimes[True] and regimes[False]
    _verdict(report, 7, "quasi-Hamiltonian vs envelopes and spectrum", ok,
             f"max oracle gap {worst:.1e} over 500 cases ({regimes[True]} Markovian, "
             f"{regimes[False]} non-Markovian); spectrum gap {spec_worst:.1e} "
             f"(quoted eigenvalue list is off by up to {quoted_worst:.2g})",
             elapsed, 180)


# --------------------------------------------------------------------------- 8


def _scenario(model, alpha, gamma, horizon):
    H = {"kind": "ising", "J": 1} if model == "ising" else {"kind": "xy_antisym", "J_yx": 1}
    H["B_z"] = "1/3"
    cfg = parse_config({"schema": 1, "name": f"{model}-{alpha}", "state": {"kind": "werner", "alpha": alpha},
                        "hamiltonian": H, "noise": {"g_z": "1/3", "gamma": gamma},
                        "time": {"horizon": horizon, "samples": 2401}})
    traj = Trajectory.from_states(cfg.times, run_trajectory(cfg))
    return classify_joint(traj, strict=False)


def test_c08_category_reproduction(report):
    t0 = time.perf_counter()
    got = {}
    for model in ("ising", "xy"):
        for alpha in ("1/4", "1/2", 1):
            got[("markov", model, str(alpha))] = _scenario(model, alpha, 1.0, 12.0)
    for model, alpha in (("ising", "1/4"), ("ising", 1), ("xy", "1/2")):
        got[("nonmarkov", model, str(alpha))] = _scenario(model, alpha, 0.27, 30.0)
    elapsed = time.perf_counter() - t0

    def joint(key):
        v = got[key].joint
        return v.value if v else f"invalid ({got[key].error})"

    ising = {joint(("markov", "ising", a)) for a in ("1/4", "1/2", "1")}
    xy = {joint(("markov", "xy", a)) for a in ("1/4", "1/2", "1")}
    nonm = [joint(k) for k in got if k[0] == "nonmarkov"]
    members = all(v.joint is not None and (v.joint in TABLE_II or v.joint in
                  (JointCategory.ZeroA, JointCategory.ZeroB)) for v in got.values())
    ok = (ising == {"0A", "EA", "AA"} and xy == {"0B", "BB", "OB"}
          and nonm == ["0B", "BB", "EB"] and members)
    detail = ("; ".join(f"{k[0]} {k[1]} a={k[2]}: {joint(k)}" + (" (flagged)" if got[k].flagged else "")
                        for k in got))
    report(f"    criterion  8 details: {detail}")
    _verdict(report, 8, "category reproduction",
             ok, f"Markovian Ising {sorted(ising)}, XY {sorted(xy)}; non-Markovian {nonm}; "
                 f"all allowed: {members}", elapsed, 300)


# --------------------------------------------------------------------------- 9


def test_c09_inequalities(report):
    t0 = time.perf_counter()
    S = _random_states(909, 10_000)
    DG = geometric_discord_batch(S)
    D = np.array([quantum_discord_left(BlochVector.from_flat(v))[0] for v in S])
    upper = bool(np.all(2 * DG <= 1 + 1e-12))
    lower = bool(np.all(2 * DG >= D**2 - 1e-6))
    # non-monotone pair on the N11 = -0.7, N22 = -0.3 segment
    n33 = np.linspace(-0.6, 0.0, 241)
    seg = [bell_diagonal(-0.7, -0.3, z) for z in n33]
    dg = np.array([geometric_discord_left(N) for N in seg])
    dd = np.array([quantum_discord_left(N)[0] for N in seg])
    order = np.argsort(dg)
    witness = bool(np.any(np.diff(dd[order]) < -1e-6))
    elapsed = time.perf_counter() - t0
    ok = upper and lower and witness
    _verdict(report, 9, "inequality suite", ok,
             f"1 >= 2D_G on all: {upper}; 2D_G >= D^2 - 1e-6 on all: {lower}; "
             f"min slack {np.min(2 * DG - D**2):.2e}; non-monotone witness found: {witness}",
             elapsed, 120)


# -------------------------------------------------------------------------- 10


def test_c10_frozen_discord(report):
    t0 = time.perf_counter()
    N0 = BlochVector.from_components(N03=0.1, N30=0.2, N11=-0.4, N12=0.1, N21=-0.1,
                                     N22=-0.3, N33=-0.2)
    assert is_physical(N0)
    ts = np.linspace(0.0, 10.0, 401)
    flat = unitary_trajectory(HamiltonianSpec(Model.Ising, J=1.0), N0, ts)
    D = np.array([quantum_discord_left(BlochVector.from_flat(v))[0] for v in flat])
    frozen = detect_frozen(D, ts, window=ts[-1], flat_tol=1e-6)
    elapsed = time.perf_counter() - t0
    ok = (len(frozen) == 1 and frozen[0].t0 == ts[0] and frozen[0].t1 == ts[-1]
          and frozen[0].flatness < 1e-6 and frozen[0].level > 0)
    detail = (f"interval [{frozen[0].t0:g}, {frozen[0].t1:g}] at D = {frozen[0].level:.6f}, "
              f"flatness {frozen[0].flatness:.1e}") if frozen else "no frozen interval"
    _verdict(report, 10, "frozen discord", ok, detail, elapsed, 30)
