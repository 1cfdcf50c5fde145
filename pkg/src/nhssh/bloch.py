"""Two-band momentum-space machinery for the non-Hermitian SSH ring.

The Bloch Hamiltonian is h_k = B(k).sigma with the complex field

    Bx(k) = -cos(k/2 + flux),  By(k) = -delta sin(k/2 + flux),  Bz = -i Delta,

so the quasiparticle energies are +-r_k with
r_k = sqrt(cos^2(k/2+flux) + delta^2 sin^2(k/2+flux) - Delta^2).

All eigenvector formulas use the half-angle parameterization of the complex
polar decomposition B = r (sin th cos ph, sin th sin ph, cos th); right and
left eigenvectors form a biorthogonal pair normalized to <chi|rho> = 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ExceptionalPointError, SpectrumNotRealError

# |r| at or below this value (units J) counts as an exceptional point:
# far above double-precision noise, far below physical gaps at desk parameters.
EPS_EP = 1e-10


@dataclass(frozen=True)
class SshModel:
    """Parameters of the two-band SSH Bloch problem.

    delta : dimerization of the hopping, (1 +- delta)/2.
    Delta : strength of the staggered imaginary on-site potential.
    flux  : Peierls phase per bond (enters only as k/2 + flux).
    """

    delta: float
    Delta: float
    flux: float = 0.0

    def __post_init__(self):
        for name in ("delta", "Delta", "flux"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"SshModel.{name} must be finite")


@dataclass(frozen=True)
class BlochField:
    """The complex 3-vector B(k) at one quasimomentum."""

    k: float
    Bx: complex
    By: complex
    Bz: complex


@dataclass(frozen=True)
class PolarDecomposition:
    """Complex polar coordinates of a Bloch field.

    r is the principal complex square root of Bx^2+By^2+Bz^2 (Re r >= 0,
    ties broken toward Im r >= 0), cos_theta = Bz/r, and phi_polar is the
    real azimuthal angle atan2(By, Bx).
    """

    r: complex
    cos_theta: complex
    phi_polar: float


@dataclass(frozen=True)
class BiorthEigenpair:
    """Right/left eigenvectors and energies of h_k at one quasimomentum.

    h_k rho_pm = (+-r) rho_pm,  h_k^dag chi_pm = (+-r)^* chi_pm, and the
    pair is biorthonormal: <chi_a|rho_b> = delta_ab.
    """

    energy_plus: complex
    energy_minus: complex
    rho_plus: np.ndarray
    rho_minus: np.ndarray
    chi_plus: np.ndarray
    chi_minus: np.ndarray


@dataclass(frozen=True)
class RealityReport:
    """Spectrum-reality classification over a k-grid.

    min_margin is min_k Re(Bx^2+By^2) - Im(Bz)^2; the spectrum is fully real
    iff it is positive at every k.
    """

    min_margin: float
    classification: str  # "real" | "broken" | "ep_on_grid"
    k_at_min: float


def build_field(model: SshModel, k: float) -> BlochField:
    """Bloch field of the flux-threaded non-Hermitian SSH ring at one k."""
    u = 0.5 * k + model.flux
    return BlochField(
        k=k,
        Bx=complex(-np.cos(u)),
        By=complex(-model.delta * np.sin(u)),
        Bz=-1j * model.Delta,
    )


def field_arrays(model: SshModel, ks: np.ndarray):
    """Vectorized (Bx, By, Bz) over a k-grid."""
    u = 0.5 * np.asarray(ks, dtype=float) + model.flux
    Bx = -np.cos(u)
    By = -model.delta * np.sin(u)
    Bz = np.full_like(u, -1j * model.Delta, dtype=complex)
    return Bx, By, Bz


def _principal_r(r2):
    """Principal square root with Re >= 0, ties broken toward Im >= 0."""
    r = np.sqrt(np.asarray(r2, dtype=complex))
    flip = (r.real < 0) | ((r.real == 0) & (r.imag < 0))
    return np.where(flip, -r, r)


def polar_decompose(field: BlochField) -> PolarDecomposition:
    """Complex polar coordinates (r, cos th, ph) of one Bloch field.

    Raises ExceptionalPointError when |r| <= EPS_EP (coalescing eigenvectors).
    The in-scope models have real Bx, By, so phi_polar = atan2(By, Bx) is real.
    """
    r = complex(_principal_r(field.Bx**2 + field.By**2 + field.Bz**2))
    if abs(r) <= EPS_EP:
        raise ExceptionalPointError(
            f"|r| = {abs(r):.3e} <= {EPS_EP:g} at k = {field.k:.6f}"
        )
    phi = float(np.arctan2(field.By.real, field.Bx.real))
    return PolarDecomposition(r=r, cos_theta=field.Bz / r, phi_polar=phi)


def polar_arrays(model: SshModel, ks: np.ndarray):
    """(r, cos_theta, phi_polar) over a k-grid, with phi unwrapped continuously.

    The unwrap picks, per grid point, the atan2 branch nearest the previous
    point, so integrating dphi along the grid accumulates the true winding.
    """
    Bx, By, Bz = field_arrays(model, ks)
    r = _principal_r(Bx**2 + By**2 + Bz**2)
    if np.any(np.abs(r) <= EPS_EP):
        bad = np.asarray(ks)[np.abs(r) <= EPS_EP]
        raise ExceptionalPointError(f"exceptional point on the k-grid near k = {bad[0]:.6f}")
    phi = np.unwrap(np.arctan2(By, Bx))
    return r, Bz / r, phi


def _half_angles(cos_theta, sin_theta):
    """cos(th/2), sin(th/2) from cos th, with the product branch fixed so that
    2 c2 s2 = sin th exactly (keeps h rho = +-r rho exact in the broken regime;
    in the real-spectrum regime this coincides with the principal branches)."""
    cos_theta = np.asarray(cos_theta, dtype=complex)
    sin_theta = np.asarray(sin_theta, dtype=complex)
    c2 = np.sqrt((1.0 + cos_theta) / 2.0)
    s2_principal = np.sqrt((1.0 - cos_theta) / 2.0)
    # away from th = pi use s2 = sin/(2 c2); at th -> pi switch roles
    small = np.abs(c2) < 1e-8
    with np.errstate(divide="ignore", invalid="ignore"):
        s2 = np.where(small, s2_principal, sin_theta / (2.0 * np.where(small, 1.0, c2)))
        c2 = np.where(small, sin_theta / (2.0 * np.where(small, s2_principal, 1.0)), c2)
    return c2, s2


def eigenvectors_from_polar(r, cos_theta, phi, sin_theta=None):
    """Biorthogonal eigenvector components from polar data (vectorized).

    Returns (rho_plus, rho_minus, chi_plus, chi_minus), each of shape (2,) + r.shape.
    chi arrays hold the *ket* |chi>; the bra <chi| is its elementwise conjugate.
    """
    if sin_theta is None:
        sin_theta = _principal_r(1.0 - np.asarray(cos_theta, dtype=complex) ** 2)
    c2, s2 = _half_angles(cos_theta, sin_theta)
    eip = np.exp(1j * np.asarray(phi))
    eim = np.conj(eip)
    rho_p = np.stack([c2 * eim, s2 + 0j])
    rho_m = np.stack([s2 + 0j, -c2 * eip])
    chi_p = np.stack([np.conj(c2 * eip), np.conj(s2)])
    chi_m = np.stack([np.conj(s2), np.conj(-c2 * eim)])
    return rho_p, rho_m, chi_p, chi_m


def eigenpair(field: BlochField) -> BiorthEigenpair:
    """Biorthogonal eigenpair of h_k = B(k).sigma at one quasimomentum."""
    pol = polar_decompose(field)
    s = np.sqrt(complex(field.Bx**2 + field.By**2))
    # r has Re >= 0, so s/r keeps the branch with 2 c2 s2 = sin th
    sin_theta = s / pol.r
    rho_p, rho_m, chi_p, chi_m = eigenvectors_from_polar(
        pol.r, pol.cos_theta, pol.phi_polar, sin_theta=sin_theta
    )
    return BiorthEigenpair(
        energy_plus=pol.r,
        energy_minus=-pol.r,
        rho_plus=np.asarray(rho_p, dtype=complex).reshape(2),
        rho_minus=np.asarray(rho_m, dtype=complex).reshape(2),
        chi_plus=np.asarray(chi_p, dtype=complex).reshape(2),
        chi_minus=np.asarray(chi_m, dtype=complex).reshape(2),
    )


def eigenvector_arrays(model: SshModel, ks: np.ndarray, band: int):
    """(rho, chi_bra) arrays of shape (2, nk) for one band over a k-grid.

    Uses the continuously unwrapped polar angle, so the half-angle gauge of
    the eigenvectors is continued smoothly in k (including past k = 2 pi).
    chi_bra holds the conjugated row vector <chi_band|.
    """
    if band not in (+1, -1):
        raise ValueError("band must be +1 or -1")
    r, cos_t, phi = polar_arrays(model, ks)
    Bx, By, _ = field_arrays(model, ks)
    sin_theta = _principal_r(Bx**2 + By**2) / r
    rho_p, rho_m, chi_p, chi_m = eigenvectors_from_polar(r, cos_t, phi, sin_theta=sin_theta)
    if band > 0:
        return rho_p, np.conj(chi_p)
    return rho_m, np.conj(chi_m)


def dispersion(model: SshModel, ks: np.ndarray, band: int = +1):
    """Band energies (+-r_k) over a k-grid (complex in the broken regime)."""
    Bx, By, Bz = field_arrays(model, ks)
    return band * _principal_r(Bx**2 + By**2 + Bz**2)


def group_velocity(model: SshModel, k: float, band: int = +1) -> float:
    """d eps / dk of one band at one k (real-spectrum regime).

    The real-space packet speed in site units is 2 |group_velocity|.
    """
    u = 0.5 * k + model.flux
    r = dispersion(model, np.asarray([k]), band=+1)[0]
    if abs(r.imag) > 1e-12:
        raise SpectrumNotRealError(f"complex dispersion at k = {k:.6f} for {model}")
    d_r2_du = -(1.0 - model.delta**2) * np.sin(2.0 * u)
    return band * float(d_r2_du / (4.0 * r.real))


def spectrum_reality(model: SshModel, n_k: int) -> RealityReport:
    """Classify the spectrum over an n_k-point grid k = 2 pi n / n_k.

    min_margin = min_k Re(Bx^2+By^2) - Im(Bz)^2; positive margin means the
    full spectrum is real (for SSH: Delta < |delta|, flux-independent).
    """
    if n_k < 2:
        raise ValueError("n_k must be >= 2")
    ks = 2.0 * np.pi * np.arange(n_k) / n_k
    Bx, By, Bz = field_arrays(model, ks)
    margin = (Bx**2 + By**2).real - Bz.imag**2
    i = int(np.argmin(margin))
    m = float(margin[i])
    if m > EPS_EP**2:
        cls = "real"
    elif m < -(EPS_EP**2):
        cls = "broken"
    else:
        cls = "ep_on_grid"
    return RealityReport(min_margin=m, classification=cls, k_at_min=float(ks[i]))
