"""Non-unitary single-particle dynamics under time-dependent flux.

The Schrodinger equation i dpsi/dt = H(t) psi is integrated with a classical
fixed-step 4th-order Runge-Kutta scheme.  The Dirac norm <psi|psi> is never
renormalized: its growth or decay is a first-class observable of the
non-Hermitian evolution.

Wavepacket builders come in two flavors:

* ``make_gwp``       - the real-space Gaussian  exp[-alpha^2 (l-Nc)^2] e^{i k0 l}
  (k0 is a site momentum; the packet concentrates at cell momentum 2 k0 on
  one band, > 99% weight at the reference parameters).
* ``make_band_gwp``  - the band-resolved Bloch sum  sum_k g_k |rho_band^k>
  with g_k Gaussian around a cell momentum k0 (band-pure by construction);
  this is the half-Bloch-oscillation initial state.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.special import erf

from . import bloch, zak
from .bloch import SshModel
from .errors import (
    SpectrumNotRealError,
    StepTooLargeError,
    TailsTruncatedWarning,
    ZeroNormError,
)
from .lattice import FluxedHamiltonian, SshRingSpec, ring_hamiltonian

#: complex amplitudes over lattice sites
StateVector = np.ndarray


@dataclass(frozen=True)
class WavepacketSpec:
    """Gaussian wavepacket parameters.

    center is a 1-based site index; width_param is the Gaussian half-width
    alpha; central_momentum is k0 (site momentum for make_gwp, cell momentum
    for make_band_gwp).
    """

    center: float
    width_param: float
    central_momentum: float

    def __post_init__(self):
        if self.width_param <= 0:
            raise ValueError("width_param must be positive")


@dataclass(frozen=True)
class FluxProtocol:
    """Monotone flux schedule phi(t) from flux_start to flux_end.

    kind="linear": phi = flux_start + rate * t, clipped at flux_end.
    kind="erf":    phi = flux_start + span * (1 + erf(scale (t - center)))/2,
    the error-function schedule rescaled so it actually reaches flux_end.
    """

    kind: str = "linear"
    rate: float = 0.0
    erf_scale: float = 0.0
    erf_center: float = 0.0
    flux_start: float = 0.0
    flux_end: float = np.pi

    def __post_init__(self):
        if self.kind not in ("linear", "erf"):
            raise ValueError(f"unknown protocol kind {self.kind!r}")
        if self.kind == "linear" and self.rate <= 0 and self.flux_end != self.flux_start:
            raise ValueError("linear protocol needs a positive rate")
        if self.kind == "erf":
            if self.erf_scale <= 0:
                raise ValueError("erf protocol needs a positive erf_scale")
            # phi(0) must sit at flux_start: keep the ramp center well inside t > 0
            if self.erf_scale * self.erf_center < 3.0:
                raise ValueError("erf protocol must start at flux_start: "
                                 "need erf_scale * erf_center >= 3")

    def flux(self, t):
        span = self.flux_end - self.flux_start
        if self.kind == "linear":
            if span == 0.0:
                return self.flux_start
            return self.flux_start + np.clip(self.rate * np.asarray(t), 0.0, span)
        return self.flux_start + span * 0.5 * (1.0 + erf(self.erf_scale * (np.asarray(t) - self.erf_center)))

    def complete_time(self) -> float:
        """Time at which the protocol has (numerically) reached flux_end."""
        if self.kind == "linear":
            if self.flux_end == self.flux_start:
                return 0.0
            return (self.flux_end - self.flux_start) / self.rate
        return self.erf_center + 4.5 / self.erf_scale  # erfc(4.5) ~ 2e-10


@dataclass(frozen=True)
class PhaseLedger:
    """Dynamic phase alpha, adiabatic phase gamma, and the derived
    amplification exponent xi = -Im gamma for one flux ramp."""

    alpha: float
    gamma: complex
    xi: float
    omega: float  # alpha + Re gamma


@dataclass
class EvolutionResult:
    times: np.ndarray
    states: np.ndarray  # (n_frames, dimension)
    dirac_norm: np.ndarray  # <psi|psi> per frame
    center_traj: np.ndarray
    phase_ledger: PhaseLedger | None = None
    step_halving_residual: float | None = None

    @property
    def final_state(self) -> StateVector:
        return self.states[-1]


def dirac_norm(psi: StateVector) -> float:
    """<psi|psi> (squared amplitudes; the non-conserved Dirac norm)."""
    return float(np.vdot(psi, psi).real)


def make_gwp(spec: WavepacketSpec, segment_length: int) -> StateVector:
    """Real-space Gaussian wavepacket on sites 1..segment_length, normalized.

    Warns TailsTruncatedWarning when the boundary amplitude exceeds 1e-8 of
    the peak (the packet no longer fits the segment).
    """
    if not 1 <= spec.center <= segment_length:
        raise ValueError("wavepacket center outside the segment")
    l = np.arange(1, segment_length + 1)
    f = np.exp(-spec.width_param**2 * (l - spec.center) ** 2) * np.exp(
        1j * spec.central_momentum * l
    )
    edge = max(abs(f[0]), abs(f[-1])) / np.max(np.abs(f))
    if edge >= 1e-8:
        warnings.warn(
            f"boundary amplitude {edge:.2e} >= 1e-8; Gaussian tails truncated",
            TailsTruncatedWarning,
        )
    return f / np.sqrt(dirac_norm(f))


def _bloch_phases(n_cells: int, ks: np.ndarray):
    """Sublattice Fourier phases: A sites at half-integer cell positions."""
    j = np.arange(1, n_cells + 1)
    ph_a = np.exp(1j * np.outer(ks, j - 0.5)) / np.sqrt(n_cells)
    ph_b = np.exp(1j * np.outer(ks, j)) / np.sqrt(n_cells)
    return ph_a, ph_b


def make_band_gwp(spec: WavepacketSpec, ring: SshRingSpec, band: int = +1) -> StateVector:
    """Band-pure Gaussian wavepacket sum_k g_k |rho_band^k> on a ring.

    g_k = exp[-(k-k0)^2 / 4 alpha^2] e^{-i k j_c} with k0 the cell momentum
    (spec.central_momentum), alpha = spec.width_param and j_c = center/2 the
    cell-index center.  Dirac-normalized.
    """
    n = ring.n_cells
    ks = 2.0 * np.pi * np.arange(n) / n
    rho, _ = bloch.eigenvector_arrays(ring.model, ks, band)
    dk = (ks - spec.central_momentum + np.pi) % (2.0 * np.pi) - np.pi
    g = np.exp(-(dk**2) / (4.0 * spec.width_param**2)) * np.exp(-1j * ks * spec.center / 2.0)
    ph_a, ph_b = _bloch_phases(n, ks)
    psi = np.zeros(2 * n, dtype=complex)
    psi[0::2] = (g * rho[0]) @ ph_a
    psi[1::2] = (g * rho[1]) @ ph_b
    return psi / np.sqrt(dirac_norm(psi))


def band_weights(psi: StateVector, model: SshModel):
    """Fractional biorthogonal band weights (w_plus, w_minus) of a state.

    The state is expanded as psi = sum_{k,band} c |rho_band^k> with
    c = <chi_band^k|psi_k>; weights are |c|^2 sums normalized to 1.
    """
    L = len(psi)
    if L % 2:
        raise ValueError("state length must be even (two-site cells)")
    n = L // 2
    ks = 2.0 * np.pi * np.arange(n) / n
    ph_a, ph_b = _bloch_phases(n, ks)
    g_a = ph_a.conj() @ psi[0::2]
    g_b = ph_b.conj() @ psi[1::2]
    out = []
    for band in (+1, -1):
        _, chi_bra = bloch.eigenvector_arrays(model, ks, band)
        out.append(float(np.sum(np.abs(chi_bra[0] * g_a + chi_bra[1] * g_b) ** 2)))
    total = out[0] + out[1]
    return out[0] / total, out[1] / total


def band_project(psi: StateVector, model: SshModel, band: int | None = None) -> StateVector:
    """Biorthogonal projection of a state onto one band (normalized).

    With band=None the dominant band is kept.  Uses the periodic Bloch basis
    of the segment, which is exact on rings and accurate to the boundary-tail
    level on open segments.
    """
    L = len(psi)
    n = L // 2
    ks = 2.0 * np.pi * np.arange(n) / n
    ph_a, ph_b = _bloch_phases(n, ks)
    g_a = ph_a.conj() @ psi[0::2]
    g_b = ph_b.conj() @ psi[1::2]
    if band is None:
        wp, wm = band_weights(psi, model)
        band = +1 if wp >= wm else -1
    rho, chi_bra = bloch.eigenvector_arrays(model, ks, band)
    c = chi_bra[0] * g_a + chi_bra[1] * g_b
    out = np.zeros(L, dtype=complex)
    out[0::2] = (c * rho[0]) @ ph_a
    out[1::2] = (c * rho[1]) @ ph_b
    nrm = dirac_norm(out)
    if nrm == 0.0:
        raise ZeroNormError("state has no weight on the requested band")
    return out / np.sqrt(nrm)


def _as_apply(hamiltonian):
    """Normalize the accepted Hamiltonian forms to an apply(t, psi) callable."""
    if isinstance(hamiltonian, FluxedHamiltonian):
        return hamiltonian.apply
    if isinstance(hamiltonian, np.ndarray):
        return lambda t, psi: hamiltonian @ psi
    if callable(hamiltonian):
        return lambda t, psi: hamiltonian(t) @ psi
    raise TypeError("hamiltonian must be a FluxedHamiltonian, ndarray, or callable t -> ndarray")


def _rk4(apply_h, psi, t, dt, n_steps, on_frame=None, frame_stride=1):
    for n in range(n_steps):
        if on_frame is not None and n % frame_stride == 0:
            on_frame(t, psi)
        k1 = -1j * apply_h(t, psi)
        k2 = -1j * apply_h(t + 0.5 * dt, psi + 0.5 * dt * k1)
        k3 = -1j * apply_h(t + 0.5 * dt, psi + 0.5 * dt * k2)
        k4 = -1j * apply_h(t + dt, psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += dt
    return t, psi


def evolve(
    hamiltonian,
    psi0: StateVector,
    T: float,
    dt: float,
    record_dt: float | None = None,
    ring: bool = False,
    convergence_check: bool = False,
    convergence_tol: float = 1e-6,
    phase_ledger: PhaseLedger | None = None,
    t0: float = 0.0,
) -> EvolutionResult:
    """Integrate i dpsi/dt = H(t) psi from t0 to t0 + T with fixed-step RK4.

    ``hamiltonian`` may be a FluxedHamiltonian (matrix-free), a constant dense
    matrix, or a callable t -> matrix.  Frames (state, Dirac norm, center)
    are recorded every ``record_dt`` (default: 50 steps).  The Dirac norm is
    not renormalized.

    With ``convergence_check`` the run is repeated at dt/2 and
    StepTooLargeError is raised when the final states differ by more than
    ``convergence_tol`` in relative 2-norm; the measured residual is stored
    on the result either way.
    """
    if dt <= 0 or T < 0:
        raise ValueError("need dt > 0 and T >= 0")
    apply_h = _as_apply(hamiltonian)
    psi0 = np.asarray(psi0, dtype=complex)
    n_steps = int(round(T / dt))
    frame_stride = max(1, int(round((record_dt or 50 * dt) / dt)))

    times, states, norms, centers = [], [], [], []

    def on_frame(t, psi):
        times.append(t)
        states.append(psi.copy())
        norms.append(dirac_norm(psi))
        prev = centers[-1] if centers else None
        centers.append(center_of_mass(psi, ring=ring, prev=prev))

    t_end, psi = _rk4(apply_h, psi0, t0, dt, n_steps, on_frame, frame_stride)
    on_frame(t_end, psi)

    residual = None
    if convergence_check:
        _, psi_half = _rk4(apply_h, psi0, t0, dt / 2.0, 2 * n_steps)
        scale = np.linalg.norm(psi_half)
        residual = float(np.linalg.norm(psi - psi_half) / scale) if scale else 0.0
        if residual > convergence_tol:
            raise StepTooLargeError(
                f"dt/2 check failed: relative change {residual:.3e} > {convergence_tol:g}"
            )

    return EvolutionResult(
        times=np.asarray(times),
        states=np.asarray(states),
        dirac_norm=np.asarray(norms),
        center_traj=np.asarray(centers),
        phase_ledger=phase_ledger,
        step_halving_residual=residual,
    )


def fidelity(a: StateVector, b: StateVector) -> complex:
    """Dirac inner product normalized by the Dirac norms, <a|b>/sqrt(<a|a><b|b>)."""
    if len(a) != len(b):
        raise ValueError("states must have the same dimension")
    na, nb = dirac_norm(a), dirac_norm(b)
    if na == 0.0 or nb == 0.0:
        raise ZeroNormError("fidelity of a zero-norm state")
    return complex(np.vdot(a, b) / np.sqrt(na * nb))


def center_of_mass(psi: StateVector, ring: bool = False, prev: float | None = None) -> float:
    """Probability-weighted mean site index (1-based).

    On rings the center is the circular mean (angle of sum |psi_j|^2
    e^{2 pi i j / L}), unwrapped against ``prev`` so trajectories that wind
    around the ring stay continuous.
    """
    w = np.abs(psi) ** 2
    total = w.sum()
    if total == 0.0:
        raise ZeroNormError("center of mass of a zero-norm state")
    L = len(psi)
    sites = np.arange(1, L + 1)
    if not ring:
        return float((w @ sites) / total)
    ang = np.angle(np.sum(w * np.exp(2j * np.pi * sites / L)))
    c = (L * ang / (2.0 * np.pi)) % L
    if prev is not None:
        while c - prev > L / 2:
            c -= L
        while c - prev < -L / 2:
            c += L
    return float(c)


def predict_trajectory(
    spec: SshRingSpec, k_c: float, beta: float, x0: float, fluxes: np.ndarray, band: int = +1
) -> np.ndarray:
    """Bloch-oscillation center path x(phi) = x0 + [eps(phi) - eps(0)] / beta.

    eps is the band dispersion at the packet's cell momentum k_c evaluated at
    per-bond flux phi; x is in site units (the 1/beta scaling makes the BO
    amplitude inversely proportional to the ramp rate).
    """
    if abs(spec.Delta) >= abs(spec.delta):
        raise SpectrumNotRealError("trajectory prediction needs a fully real spectrum")
    u = 0.5 * k_c + spec.flux_per_bond + np.asarray(fluxes, dtype=float)
    r = np.sqrt(np.cos(u) ** 2 + spec.delta**2 * np.sin(u) ** 2 - spec.Delta**2)
    eps = band * r
    return x0 + (eps - eps[0]) / beta


def ramp_phase_ledger(
    spec: SshRingSpec, band: int, beta: float, k_cell: float, n_quad: int = zak.DEFAULT_N_QUAD
) -> PhaseLedger:
    """Analytic phase bookkeeping for a linear 0 -> pi flux ramp.

    alpha = -(1/beta) Int_0^pi eps_band dphi (k-independent over a full half
    period), gamma from the flux Berry connection, xi = -Im gamma, and
    omega = alpha + Re gamma.
    """
    phis = np.linspace(0.0, np.pi, n_quad + 1)
    u = 0.5 * k_cell + spec.flux_per_bond + phis
    r = np.sqrt(np.cos(u) ** 2 + spec.delta**2 * np.sin(u) ** 2 - spec.Delta**2)
    alpha = -band * float(np.trapezoid(r, phis)) / beta
    gamma = zak.adiabatic_phase(spec.model, band, np.pi, n_quad=n_quad).gamma
    return PhaseLedger(alpha=alpha, gamma=gamma, xi=-gamma.imag, omega=alpha + gamma.real)


def ring_ramp(spec: SshRingSpec, protocol: FluxProtocol) -> FluxedHamiltonian:
    """Ring Hamiltonian whose per-bond flux follows the protocol."""
    return ring_hamiltonian(spec, flux_of_t=lambda t: float(protocol.flux(t)))


def write_summary_csv(path, result: EvolutionResult) -> None:
    """Per-frame summary: t, dirac_norm, center."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "dirac_norm", "center"])
        for t, n, c in zip(result.times, result.dirac_norm, result.center_traj):
            w.writerow([f"{t:.17g}", f"{n:.17g}", f"{c:.17g}"])


def write_snapshot_csv(path, result: EvolutionResult, max_frames: int = 40) -> None:
    """Site-resolved probability snapshots: t, site, |psi|^2 (subsampled frames)."""
    stride = max(1, len(result.times) // max_frames)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "site", "prob"])
        for i in range(0, len(result.times), stride):
            t = result.times[i]
            for site, amp in enumerate(result.states[i], start=1):
                w.writerow([f"{t:.17g}", site, f"{abs(amp) ** 2:.17g}"])
