"""Real-space Hamiltonians: flux-threaded SSH rings, open segments, and the
phi-shaped interferometer network, plus the exact virtual-chain decomposition.

Site conventions (1-based j, matching the Bloch module):

* hopping on bond (j, j+1):  -(1/2) [1 + (-1)^j delta] e^{i phase},
* on-site term:              i Delta (-1)^j   (odd sites carry -i Delta).

Matrix layout for the network is the block order [A | B1 | B2 | D] with each
segment indexed 1..2N internally.  The two ring arms carry opposite Peierls
orientations (B1 forward hops e^{+i phi}, B2 forward hops e^{-i phi}), which
is the reading of the model under which the total flux threading the ring is
4 (N_B + 1/2) phi and the virtual a/b chains decouple exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sparse

from .bloch import SshModel


@dataclass(frozen=True)
class SshRingSpec:
    """Flux-threaded non-Hermitian SSH ring with 2 n_cells sites."""

    n_cells: int
    delta: float
    Delta: float
    flux_per_bond: float = 0.0

    def __post_init__(self):
        if self.n_cells < 2:
            raise ValueError("n_cells must be >= 2")
        for name in ("delta", "Delta", "flux_per_bond"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"SshRingSpec.{name} must be finite")

    @property
    def n_sites(self) -> int:
        return 2 * self.n_cells

    @property
    def model(self) -> SshModel:
        return SshModel(self.delta, self.Delta, self.flux_per_bond)


@dataclass(frozen=True)
class NetworkSpec:
    """phi-shaped interferometer: lead A, ring arms B1/B2, lead D.

    Segment lengths are 2 n_a, 2 n_b (each arm), 2 n_d sites.  The total
    magnetic flux threading the ring is 4 (n_b + 1/2) * flux_per_bond.
    Splitter bonds carry amplitude -(1 + delta) / (2 sqrt 2).
    """

    n_a: int
    n_b: int
    n_d: int
    delta: float
    Delta: float
    flux_per_bond: float = 0.0

    def __post_init__(self):
        for name in ("n_a", "n_b", "n_d"):
            if getattr(self, name) < 1:
                raise ValueError(f"NetworkSpec.{name} must be >= 1")
        for name in ("delta", "Delta", "flux_per_bond"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"NetworkSpec.{name} must be finite")

    @property
    def n_sites(self) -> int:
        return 2 * (self.n_a + 2 * self.n_b + self.n_d)

    @property
    def offsets(self):
        """(A, B1, B2, D) block offsets into the site index."""
        nA, nB = 2 * self.n_a, 2 * self.n_b
        return 0, nA, nA + nB, nA + 2 * nB

    @property
    def total_flux(self) -> float:
        return 4.0 * (self.n_b + 0.5) * self.flux_per_bond

    @property
    def model(self) -> SshModel:
        return SshModel(self.delta, self.Delta, self.flux_per_bond)


def _bond(j: int, delta: float) -> float:
    """Hopping amplitude of bond (j, j+1), 1-based j."""
    return -0.5 * (1.0 + (-1) ** j * delta)


def _onsite(j: int, Delta: float) -> complex:
    return 1j * Delta * (-1) ** j


def _segment_forward(n_sites: int, delta: float) -> np.ndarray:
    """Upper-triangular forward-hop matrix of an open SSH segment."""
    up = np.zeros((n_sites, n_sites), dtype=complex)
    for s in range(n_sites - 1):
        up[s, s + 1] = _bond(s + 1, delta)
    return up


def _segment_diagonal(n_sites: int, Delta: float) -> np.ndarray:
    return np.array([_onsite(s + 1, Delta) for s in range(n_sites)], dtype=complex)


def open_ssh_segment(n_sites: int, delta: float, Delta: float, phase: float = 0.0) -> np.ndarray:
    """Open SSH segment with forward hops carrying e^{i phase}."""
    up = _segment_forward(n_sites, delta)
    h = np.exp(1j * phase) * up + np.exp(-1j * phase) * up.conj().T
    np.fill_diagonal(h, _segment_diagonal(n_sites, Delta))
    return h


def ring_parts(spec: SshRingSpec):
    """(diagonal, forward, backward) split of the ring Hamiltonian,
    H(phi) = diag + e^{i phi} forward + e^{-i phi} backward."""
    L = spec.n_sites
    up = np.zeros((L, L), dtype=complex)
    for s in range(L):
        up[s, (s + 1) % L] = _bond(s + 1, spec.delta)
    diag = _segment_diagonal(L, spec.Delta)
    return diag, sparse.csr_matrix(up), sparse.csr_matrix(up.conj().T)


def build_ssh_ring(spec: SshRingSpec) -> np.ndarray:
    """Dense Hamiltonian of the flux-threaded non-Hermitian SSH ring."""
    diag, up, dn = ring_parts(spec)
    h = (
        np.exp(1j * spec.flux_per_bond) * up.toarray()
        + np.exp(-1j * spec.flux_per_bond) * dn.toarray()
    )
    np.fill_diagonal(h, diag)
    return h


def network_parts(spec: NetworkSpec):
    """(static, plus, minus) split of the network Hamiltonian,
    H(phi) = static + e^{i phi} plus + e^{-i phi} minus.

    ``plus`` collects every bond whose matrix element carries e^{+i phi}:
    B1 forward hops, the A->B1 and B1->D splitter elements, and the reversed
    B2 elements; ``minus`` is its conjugate transpose.
    """
    L = spec.n_sites
    oA, oB1, oB2, oD = spec.offsets
    nA, nB, nD = 2 * spec.n_a, 2 * spec.n_b, 2 * spec.n_d
    static = np.zeros((L, L), dtype=complex)
    plus = np.zeros((L, L), dtype=complex)

    upA = _segment_forward(nA, spec.delta)
    upD = _segment_forward(nD, spec.delta)
    static[oA : oA + nA, oA : oA + nA] = upA + upA.conj().T
    static[oD : oD + nD, oD : oD + nD] = upD + upD.conj().T
    np.fill_diagonal(static, np.concatenate([
        _segment_diagonal(nA, spec.Delta),
        _segment_diagonal(nB, spec.Delta),
        _segment_diagonal(nB, spec.Delta),
        _segment_diagonal(nD, spec.Delta),
    ]))

    upB = _segment_forward(nB, spec.delta)
    plus[oB1 : oB1 + nB, oB1 : oB1 + nB] = upB           # B1 forward: e^{+i phi}
    plus[oB2 : oB2 + nB, oB2 : oB2 + nB] = upB.conj().T  # B2 backward: e^{+i phi}

    kappa = -(1.0 + spec.delta) / (2.0 * np.sqrt(2.0))
    plus[oA + nA - 1, oB1] = kappa        # <A_2Na| H |B1_1> = kappa e^{+i phi}
    plus[oB2, oA + nA - 1] = kappa        # <B2_1| H |A_2Na> = kappa e^{+i phi}
    plus[oB1 + nB - 1, oD] = kappa        # <B1_2Nb| H |D_1>  = kappa e^{+i phi}
    plus[oD, oB2 + nB - 1] = kappa        # <D_1| H |B2_2Nb>  = kappa e^{+i phi}

    return (
        sparse.csr_matrix(static),
        sparse.csr_matrix(plus),
        sparse.csr_matrix(plus.conj().T),
    )


def build_network(spec: NetworkSpec) -> np.ndarray:
    """Dense Hamiltonian of the interferometer at the spec's static flux."""
    static, plus, minus = network_parts(spec)
    ph = np.exp(1j * spec.flux_per_bond)
    return (static + ph * plus + np.conj(ph) * minus).toarray()


def virtual_couplings(spec: NetworkSpec):
    """The flux-dependent virtual-chain couplings (t_ad, t_bd)."""
    arg = (2 * spec.n_b + 1) * spec.flux_per_bond
    t_ad = (1.0 + spec.delta) * np.cos(arg) / 2.0
    t_bd = 1j * (1.0 + spec.delta) * np.sin(arg) / 2.0
    return complex(t_ad), complex(t_bd)


def virtual_decompose(spec: NetworkSpec):
    """Virtual chains (a, b, d) and their couplings (t_ad, t_bd).

    Chain a has 2 (n_a + n_b) sites, chain b 2 n_b, chain d 2 n_d; all are
    phase-free open SSH segments.  The joint is -t_ad a_last^dag d_1
    - t_bd b_last^dag d_1 + h.c.; t_bd vanishes at flux 0 and pi, where b
    decouples completely.
    """
    chain_a = open_ssh_segment(2 * (spec.n_a + spec.n_b), spec.delta, spec.Delta)
    chain_b = open_ssh_segment(2 * spec.n_b, spec.delta, spec.Delta)
    chain_d = open_ssh_segment(2 * spec.n_d, spec.delta, spec.Delta)
    t_ad, t_bd = virtual_couplings(spec)
    return chain_a, chain_b, chain_d, t_ad, t_bd


def assemble_virtual(chain_a, chain_b, chain_d, t_ad, t_bd) -> np.ndarray:
    """Assemble the decoupled chains plus joint couplings into one matrix
    (block order [a | b | d])."""
    na, nb, nd = len(chain_a), len(chain_b), len(chain_d)
    h = np.zeros((na + nb + nd, na + nb + nd), dtype=complex)
    h[:na, :na] = chain_a
    h[na : na + nb, na : na + nb] = chain_b
    h[na + nb :, na + nb :] = chain_d
    h[na - 1, na + nb] = -t_ad
    h[na + nb, na - 1] = -np.conj(t_ad)
    h[na + nb - 1, na + nb] = -t_bd
    h[na + nb, na + nb - 1] = -np.conj(t_bd)
    return h


def virtual_basis_map(spec: NetworkSpec) -> np.ndarray:
    """Unitary U (rows: virtual modes a, b, d; columns: physical sites) with
    U H_net U^dag equal to the assembled virtual system.

    Arm rows mix B1/B2 with the site-dependent gauge phases e^{+-i phi j}/sqrt2.
    """
    L = spec.n_sites
    oA, oB1, oB2, oD = spec.offsets
    nA, nB, nD = 2 * spec.n_a, 2 * spec.n_b, 2 * spec.n_d
    phi = spec.flux_per_bond
    U = np.zeros((L, L), dtype=complex)
    row = 0
    for l in range(nA):
        U[row, oA + l] = 1.0
        row += 1
    for j in range(1, nB + 1):
        U[row, oB1 + j - 1] = np.exp(1j * phi * j) / np.sqrt(2.0)
        U[row, oB2 + j - 1] = np.exp(-1j * phi * j) / np.sqrt(2.0)
        row += 1
    for j in range(1, nB + 1):
        U[row, oB1 + j - 1] = np.exp(1j * phi * j) / np.sqrt(2.0)
        U[row, oB2 + j - 1] = -np.exp(-1j * phi * j) / np.sqrt(2.0)
        row += 1
    for m in range(nD):
        U[row, oD + m] = 1.0
        row += 1
    return U


class FluxedHamiltonian:
    """Time-dependent Hamiltonian H(t) = static + e^{i phi(t)} plus + h.c.-partner.

    ``flux_of_t`` maps time to the per-bond Peierls phase.  ``apply`` is the
    matrix-free matvec used by the integrator; ``matrix`` materializes H(t).
    """

    def __init__(self, static, plus, minus, flux_of_t):
        self.static = static
        self.plus = plus
        self.minus = minus
        self.flux_of_t = flux_of_t
        self.dimension = static.shape[0]

    def apply(self, t: float, psi: np.ndarray) -> np.ndarray:
        ph = np.exp(1j * self.flux_of_t(t))
        return self.static @ psi + ph * (self.plus @ psi) + np.conj(ph) * (self.minus @ psi)

    def matrix(self, t: float = 0.0) -> np.ndarray:
        ph = np.exp(1j * self.flux_of_t(t))
        return (self.static + ph * self.plus + np.conj(ph) * self.minus).toarray()


def ring_hamiltonian(spec: SshRingSpec, flux_of_t=None) -> FluxedHamiltonian:
    """Matrix-free ring Hamiltonian; defaults to the spec's static flux."""
    diag, up, dn = ring_parts(spec)
    static = sparse.diags(diag).tocsr()
    if flux_of_t is None:
        flux_of_t = lambda t: spec.flux_per_bond
    return FluxedHamiltonian(static, up, dn, flux_of_t)


def network_hamiltonian(spec: NetworkSpec, flux_of_t=None) -> FluxedHamiltonian:
    """Matrix-free network Hamiltonian; defaults to the spec's static flux."""
    static, plus, minus = network_parts(spec)
    if flux_of_t is None:
        flux_of_t = lambda t: spec.flux_per_bond
    return FluxedHamiltonian(static, plus, minus, flux_of_t)


def export_triplets(h: np.ndarray, path) -> None:
    """Write nonzero entries as plain-text triplets: row col re im (0-based)."""
    h = np.asarray(h)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("# row col re im\n")
        rows, cols = np.nonzero(h)
        for i, j in zip(rows, cols):
            v = complex(h[i, j])
            fh.write(f"{i} {j} {v.real:.17g} {v.imag:.17g}\n")


def max_imaginary_energy(h: np.ndarray) -> float:
    """max |Im eigenvalue| of a dense Hamiltonian (spectrum-reality diagnostic)."""
    return float(np.max(np.abs(np.linalg.eigvals(h).imag)))
