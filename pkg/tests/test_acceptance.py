"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the per-criterion
lines.  Criterion 10 is expected to fail at its stated parameters (broken
bulk spectrum at Delta = 0.5 amplifies any seed exponentially; see
notes in the test and the real-spectrum companion below it); it is marked
strict-xfail so the honest failure is recorded without breaking the suite.
"""

import time

import numpy as np
import pytest

import nhssh.bloch
from nhssh.bloch import SshModel, spectrum_reality
from nhssh.dynamics import (
    FluxProtocol,
    WavepacketSpec,
    evolve,
    fidelity,
    make_band_gwp,
    predict_trajectory,
    ramp_phase_ledger,
    ring_ramp,
)
from nhssh.lattice import NetworkSpec, SshRingSpec, build_ssh_ring, virtual_couplings
from nhssh.scatter import (
    ScatterScenario,
    arm_states,
    confinement_prediction,
    run_scenario,
    virtual_arm_weights,
)
from nhssh.zak import adiabatic_phase, zak_closed_form, zak_wilson_loop

import oracles

DELTA, DISS = 0.15, 0.1  # reference dimerization and gain/loss (configs/fig2*.json)


def report(num, ok, detail):
    print(f"\nACCEPTANCE {num:>2}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {num}: {detail}"


def lexsorted(vals):
    order = np.lexsort((np.round(vals.imag, 9), np.round(vals.real, 9)))
    return vals[order]


# ---------------------------------------------------------------- criterion 1
def test_criterion_01_zak_closed_form_vs_wilson():
    t0 = time.perf_counter()
    closed = zak_closed_form(DELTA, DISS).value
    wilson = zak_wilson_loop(SshModel(DELTA, DISS), +1, 400).value
    elapsed = time.perf_counter() - t0
    im_oracle = oracles.FROZEN["im_z_plus_0.15_0.1"]
    re_err = abs(wilson.real - closed.real)
    im_rel = abs(wilson.imag - im_oracle) / abs(im_oracle)
    ok = (
        abs(closed.real - np.pi / 2) < 1e-12
        and re_err < 1e-6
        and im_rel < 1e-6
        and elapsed < 1.0
    )
    report(1, ok, f"Re Z+ = pi/2, wilson(400) dRe={re_err:.1e}, "
                  f"dIm/|Im|={im_rel:.1e}, {elapsed:.2f}s")


# ---------------------------------------------------------------- criterion 2
def test_criterion_02_gauge_difference_invariance(monkeypatch):
    plus = zak_wilson_loop(SshModel(+DELTA, DISS), +1, 400).value.real
    minus = zak_wilson_loop(SshModel(-DELTA, DISS), +1, 400).value.real
    diff_err = abs((plus - minus) - np.pi)

    original = nhssh.bloch.eigenvector_arrays

    def rotated(model, ks, band):
        rho, chi_bra = original(model, ks, band)
        phase = np.exp(1.234j)  # k-independent gauge rotation
        return rho * phase, chi_bra * np.conj(phase)

    monkeypatch.setattr(nhssh.bloch, "eigenvector_arrays", rotated)
    plus_rot = zak_wilson_loop(SshModel(+DELTA, DISS), +1, 400).value.real
    minus_rot = zak_wilson_loop(SshModel(-DELTA, DISS), +1, 400).value.real
    stability = max(abs(plus_rot - plus), abs(minus_rot - minus))
    ok = diff_err < 1e-6 and stability < 1e-9
    report(2, ok, f"Re Z+(+d) - Re Z+(-d) = pi (err {diff_err:.1e}), "
                  f"gauge-rotation shift {stability:.1e}")


# ---------------------------------------------------------------- criterion 3
def test_criterion_03_flux_independence():
    w0 = zak_wilson_loop(SshModel(DELTA, DISS, flux=0.0), +1, 400).value
    w3 = zak_wilson_loop(SshModel(DELTA, DISS, flux=0.3), +1, 400).value
    ok = abs(w0 - w3) < 1e-9
    report(3, ok, f"wilson(flux=0) - wilson(flux=0.3) = {abs(w0 - w3):.1e}")


# ---------------------------------------------------------------- criterion 4
def test_criterion_04_gamma_zak_identity():
    gamma = adiabatic_phase(SshModel(DELTA, DISS), +1, np.pi).gamma
    z = zak_closed_form(DELTA, DISS).value
    err = abs(gamma.imag - z.imag)
    ok = err < 1e-8
    report(4, ok, f"|Im gamma+ - Im Z+| = {err:.1e}")


# ---------------------------------------------------------------- criterion 5
def test_criterion_05_spectral_correspondence():
    t0 = time.perf_counter()
    spec = SshRingSpec(200, DELTA, DISS)
    ring_eigs = lexsorted(np.linalg.eigvals(build_ssh_ring(spec)))
    bloch_eigs = lexsorted(oracles.bloch_multiset(200, DELTA, DISS, 0.0))
    mismatch = float(np.max(np.abs(ring_eigs - bloch_eigs)))
    elapsed = time.perf_counter() - t0
    ok = mismatch < 1e-10 and elapsed < 5.0
    report(5, ok, f"400-site ring vs Bloch multiset: max |diff| = {mismatch:.1e}, {elapsed:.2f}s")


# ---------------------------------------------------------------- criterion 6
def test_criterion_06_ep_detection_sweep():
    sweep = np.round(np.linspace(0.10, 0.20, 101), 10)
    classes = [spectrum_reality(SshModel(DELTA, d), 400).classification for d in sweep]
    below = all(c == "real" for d, c in zip(sweep, classes) if d < 0.15)
    at = classes[list(sweep).index(0.15)] == "ep_on_grid"
    above = all(c == "broken" for d, c in zip(sweep, classes) if d > 0.15)
    ok = below and at and above
    report(6, ok, "classification real -> ep_on_grid -> broken flips exactly at Delta = 0.15")


# ------------------------------------------------------- criteria 7 + 8 setup
RING_500 = SshRingSpec(250, DELTA, DISS)  # 500-site ring


def half_bo_run(beta):
    psi0 = make_band_gwp(WavepacketSpec(250, 0.05, np.pi / 4), RING_500, band=+1)
    ledger = ramp_phase_ledger(RING_500, +1, beta, np.pi / 4)
    protocol = FluxProtocol(kind="linear", rate=beta)
    result = evolve(
        ring_ramp(RING_500, protocol), psi0, np.pi / beta, 0.02,
        record_dt=2.0, ring=True, phase_ledger=ledger,
    )
    return psi0, result


@pytest.fixture(scope="module")
def fig2c_run():
    return half_bo_run(0.0015)


# ---------------------------------------------------------------- criterion 7
def test_criterion_07_half_bo_orthogonality(fig2c_run):
    psi0, result = fig2c_run
    f = abs(fidelity(psi0, result.final_state))
    dc = abs(result.center_traj[-1] - result.center_traj[0])
    gain = result.dirac_norm[-1] / np.exp(2 * result.phase_ledger.xi)
    ok = f < 0.05 and dc < 2.0 and abs(gain - 1.0) < 0.02
    report(7, ok, f"|F(pi/beta)| = {f:.1e}, center shift = {dc:.2f} sites, "
                  f"norm / e^(2 xi) = {gain:.4f}")


# ---------------------------------------------------------------- criterion 8
def test_criterion_08_bo_amplitude_scaling(fig2c_run):
    betas = (0.01, 0.005, 0.0015)
    fluxes = np.linspace(0.0, np.pi, 4001)
    measured, predicted = [], []
    for beta in betas:
        _, result = fig2c_run if beta == 0.0015 else half_bo_run(beta)
        x0 = result.center_traj[0]
        measured.append(np.max(np.abs(result.center_traj - x0)))
        path = predict_trajectory(RING_500, np.pi / 4, beta, x0, fluxes, band=+1)
        predicted.append(np.max(np.abs(path - x0)))
    rel = [abs(m - p) / p for m, p in zip(measured, predicted)]
    # amplitude * beta should be constant (1/beta scaling)
    products = [m * b for m, b in zip(measured, betas)]
    scaling = max(products) / min(products) - 1.0
    ok = all(r < 0.05 for r in rel) and scaling < 0.10
    report(8, ok, f"amplitude errors {['%.3f' % r for r in rel]}, "
                  f"1/beta scaling spread {scaling:.3f}")


# ---------------------------------------------------------------- criterion 9
def test_criterion_09_network_decomposition_oracle():
    from nhssh.lattice import assemble_virtual, build_network, virtual_decompose

    worst = 0.0
    for flux in (0.0, 0.4, np.pi):
        spec = NetworkSpec(2, 2, 2, DELTA, DISS, flux)
        net = lexsorted(np.linalg.eigvals(build_network(spec)))
        vir = lexsorted(np.linalg.eigvals(assemble_virtual(*virtual_decompose(spec))))
        worst = max(worst, float(np.max(np.abs(net - vir))))
    t_bd_0 = virtual_couplings(NetworkSpec(2, 2, 2, DELTA, DISS, 0.0))[1]
    t_bd_pi = virtual_couplings(NetworkSpec(2, 2, 2, DELTA, DISS, np.pi))[1]
    ok = worst < 1e-10 and t_bd_0 == 0.0 and abs(t_bd_pi) < 1e-15
    report(9, ok, f"spectra match to {worst:.1e}; t_bd(0) = {abs(t_bd_0):.1e}, "
                  f"t_bd(pi) = {abs(t_bd_pi):.1e}")


# --------------------------------------------------------------- criterion 10
def transmission_scenario(delta, Delta):
    spec = NetworkSpec(100, 100, 100, delta, Delta)
    wp = WavepacketSpec(center=130, width_param=0.04, central_momentum=np.pi / 4)
    return ScatterScenario(
        network=spec,
        wavepacket=wp,
        protocol=FluxProtocol(kind="linear", rate=0.1),
        impulse_timing="before_arrival",
        total_time=560.0,
        band_projected=(abs(Delta) < abs(delta)),
    )


@pytest.mark.xfail(
    strict=True,
    reason="Delta = 0.5 > delta puts the bulk spectrum in the broken regime "
    "(max |Im eps| ~ 0.48); momentum tails and roundoff seed the growing "
    "modes, which destroy the packet long before it reaches lead D. "
    "Verified unreachable by direct integration; see the decisions ledger "
    "and the real-spectrum companion test below.",
)
def test_criterion_10_perfect_transmission_as_stated():
    s = transmission_scenario(DELTA, 0.5)
    with np.errstate(over="ignore", invalid="ignore"):
        rep = run_scenario(s, dt=0.02, max_imag_energy_bound=np.inf)
    reflection = rep.prob_A[-1]
    ok = rep.transmission >= 0.99 and reflection < 0.01
    report(10, ok, f"Delta=0.5 as stated: transmission = {rep.transmission:.4f}, "
                   f"reflection = {reflection:.4f}, max|Im eps| = {rep.max_imag_energy:.3f}")


def test_criterion_10_companion_real_spectrum_transmission():
    """The same before-arrival experiment with a fully real network spectrum
    (strong-bond termination, Delta < |delta|): the ring is invisible."""
    s = transmission_scenario(-DELTA, DISS)
    rep = run_scenario(s, dt=0.02)
    reflection = rep.prob_A[-1]
    late = rep.times > 200.0
    max_reflection = float(np.max(rep.prob_A[late]))
    ok = rep.transmission >= 0.99 and reflection < 0.01 and max_reflection < 0.01
    report("10c", ok, f"real-spectrum companion: transmission = {rep.transmission:.4f}, "
                      f"reflection = {max_reflection:.4f}")


# --------------------------------------------------------------- criterion 11
def confinement_scenario(delta, Delta):
    spec = NetworkSpec(100, 100, 400, delta, Delta)
    wp = WavepacketSpec(center=150, width_param=0.04, central_momentum=np.pi / 4)
    return ScatterScenario(
        network=spec,
        wavepacket=wp,
        protocol=FluxProtocol(kind="linear", rate=0.012),
        impulse_timing="during_transit",
        total_time=900.0,
        impulse_settle=75.0,
    )


def test_criterion_11_partial_confinement():
    # |delta| = 0.15, Delta = 0.1; the strong-bond-terminated realization
    # (delta < 0) is the one with the criterion's premised real arm spectrum
    s = confinement_scenario(-DELTA, DISS)
    rep = run_scenario(s, dt=0.02, snapshot_times=(900.0,))
    _, c_pred = confinement_prediction(-DELTA, DISS)
    rel = abs(rep.confinement - c_pred) / c_pred
    final = rep.snapshots[max(rep.snapshots)]
    up, lo = arm_states(final, s.network)
    phase_ok = np.vdot(up, lo).real < 0

    hermitian = confinement_scenario(-DELTA, 0.0)
    # Delta = 0: the Hamiltonian is Hermitian, spectrum manifestly real
    rep_h = run_scenario(hermitian, dt=0.02, spectrum_check=False)

    ok = rel < 0.10 and phase_ok and rep_h.confinement > 0.99
    report(11, ok, f"confinement = {rep.confinement:.4f} vs predicted {c_pred:.4f} "
                   f"(rel {rel:.3f}); Re<up|lo> = {np.vdot(up, lo).real:.2e}; "
                   f"Hermitian control = {rep_h.confinement:.4f}")


# --------------------------------------------------------------- criterion 12
def test_criterion_12_integrator_order():
    from nhssh.bloch import dispersion, eigenvector_arrays
    from nhssh.dynamics import dirac_norm

    spec = SshRingSpec(10, DELTA, DISS)
    ks = 2 * np.pi * np.arange(10) / 10
    rho, _ = eigenvector_arrays(spec.model, ks, +1)
    j = np.arange(1, 11)
    psi0 = np.zeros(20, dtype=complex)
    psi0[0::2] = rho[0, 3] * np.exp(1j * ks[3] * (j - 0.5))
    psi0[1::2] = rho[1, 3] * np.exp(1j * ks[3] * j)
    psi0 /= np.sqrt(dirac_norm(psi0))
    eps = dispersion(spec.model, ks[[3]], +1)[0]
    T = 50.0
    exact = np.exp(-1j * eps * T) * psi0
    h = build_ssh_ring(spec)
    errs = [
        np.linalg.norm(evolve(h, psi0, T, dt).final_state - exact)
        for dt in (0.04, 0.02, 0.01)
    ]
    r1, r2 = errs[0] / errs[1], errs[1] / errs[2]
    ok = 12 < r1 < 20 and 12 < r2 < 20
    report(12, ok, f"step-halving error ratios {r1:.1f}, {r2:.1f} (4th order ~ 16)")
