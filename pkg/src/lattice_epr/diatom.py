"""Two-atom tight-binding model on the pair of tubes.

Basis |j, l> = site j of tube 1, site l of tube 2, periodic in both indices.
Hop terms connect j -> j+-1 and l -> l+-1 with amplitude v_hop; the diagonal
carries the dipole-dipole energy V_dd(j - l).

Translation invariance under the simultaneous shift (j, l) -> (j+1, l+1)
block-diagonalizes the N^2 problem into N relative-coordinate problems of
size N, labelled by the center-of-mass Bloch phase theta = K a:

    c_jl = exp(i theta j) g(l - j) / sqrt(N)
    (H_theta g)(d) = V(d) g(d) + v_hop [(1 + e^{i theta}) g(d-1)
                                        + (1 + e^{-i theta}) g(d+1)]

The brute-force N^2 x N^2 diagonalization is kept as the small-N oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .dipole import InteractionProfile
from .errors import DomainError, RegimeError, SingularityError, SizeError

__all__ = [
    "TwoAtomHamiltonian",
    "TwoAtomState",
    "DiatomBand",
    "build_hamiltonian",
    "ground_state",
    "diatom_band_exact",
    "dense_spectrum",
    "hopping_two_atom",
    "effective_mass_two_atom",
    "effective_mass_ratio_two_atom",
    "envelope_state",
    "thermal_diatom_state",
]

KIN = 1.0 / math.pi**2  # p^2/(2m) = KIN p~^2, in E_rec


@dataclass(frozen=True)
class TwoAtomHamiltonian:
    """Translation-invariant two-atom Hamiltonian.

    ``vdd_diag[d]`` is the interaction energy at wrapped site separation d
    (d = 0 .. N-1, symmetric under d -> N - d).
    """

    n_sites: int
    v_hop: float
    vdd_diag: np.ndarray

    def block(self, theta: float) -> np.ndarray:
        """Relative-coordinate Hamiltonian at center-of-mass phase theta."""
        n = self.n_sites
        h = np.diag(self.vdd_diag).astype(complex)
        lower = self.v_hop * (1.0 + np.exp(1j * theta))
        upper = self.v_hop * (1.0 + np.exp(-1j * theta))
        idx = np.arange(n)
        h[idx, (idx - 1) % n] += lower
        h[idx, (idx + 1) % n] += upper
        return h

    def dense(self) -> np.ndarray:
        """Full N^2 x N^2 matrix in the |j, l> basis (oracle path)."""
        n = self.n_sites
        dim = n * n
        h = np.zeros((dim, dim))
        j, l = np.divmod(np.arange(dim), n)
        h[np.arange(dim), np.arange(dim)] = self.vdd_diag[(j - l) % n]
        for shift in (1, -1):
            h[np.arange(dim), ((j + shift) % n) * n + l] += self.v_hop
            h[np.arange(dim), j * n + (l + shift) % n] += self.v_hop
        return h


def build_hamiltonian(
    n_sites: int,
    v_hop: float,
    profile: InteractionProfile,
    include_offsite: bool = True,
) -> TwoAtomHamiltonian:
    """Assemble the two-atom Hamiltonian from a site-offset interaction profile."""
    if n_sites < 8:
        raise DomainError("need at least 8 sites per tube")
    vdd = np.zeros(n_sites)
    for d in range(n_sites):
        dw = min(d, n_sites - d)
        if dw == 0:
            vdd[d] = profile.value(0)
        elif include_offsite:
            vdd[d] = profile.value(dw)
    return TwoAtomHamiltonian(n_sites=n_sites, v_hop=v_hop, vdd_diag=vdd)


def _com_phases(n):
    return 2.0 * np.pi * np.arange(-n // 2, n // 2) / n


def _solve_blocks(h: TwoAtomHamiltonian):
    """Diagonalize every center-of-mass block.

    Returns (thetas, all eigenvalues (N, N), bound-branch eigenvectors (N, N)).
    """
    n = h.n_sites
    thetas = _com_phases(n)
    energies = np.empty((n, n))
    ground = np.empty((n, n), dtype=complex)
    for i, th in enumerate(thetas):
        w, v = np.linalg.eigh(h.block(th))
        energies[i] = w
        g = v[:, 0]
        # deterministic gauge: largest-magnitude component real positive
        k = int(np.argmax(np.abs(g)))
        g = g * (abs(g[k]) / g[k])
        ground[i] = g
    return thetas, energies, ground


def dense_spectrum(h: TwoAtomHamiltonian) -> np.ndarray:
    """Sorted eigenvalues of the brute-force N^2 x N^2 matrix (N <= 24)."""
    if h.n_sites > 24:
        raise SizeError("dense oracle limited to N <= 24")
    return np.linalg.eigvalsh(h.dense())


@dataclass
class TwoAtomState:
    """Pure state or Boltzmann ensemble of two-atom amplitude matrices.

    ``members`` is a list of (weight, c) with c the N x N amplitude matrix
    over site pairs; weights sum to 1 and each member is normalized.
    """

    n_sites: int
    members: list
    temperature: float | None = None
    sigma_e: float | None = None
    bound_occupancy: float | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        total = sum(w for w, _ in self.members)
        if abs(total - 1.0) > 1e-10:
            raise DomainError(f"ensemble weights sum to {total}, expected 1")
        for _, c in self.members:
            nrm = np.sum(np.abs(c) ** 2)
            if abs(nrm - 1.0) > 1e-10:
                raise DomainError(f"member norm {nrm} differs from 1")

    @property
    def is_pure(self):
        return len(self.members) == 1

    @property
    def amplitude(self):
        if not self.is_pure:
            raise DomainError("amplitude matrix only defined for pure states")
        return self.members[0][1]

    def diagonal_weight(self) -> float:
        """Ensemble-averaged weight on the same-site diagonal j = l."""
        out = 0.0
        for w, c in self.members:
            out += w * float(np.sum(np.abs(np.diag(c)) ** 2))
        return out

    def sum_momentum_distribution(self):
        """Distribution of the folded sum momentum p1 + p2.

        Site-level momenta live on p = 2 pi m / N (units hbar/a); the sum is
        folded into (-pi, pi].  Returns (p_plus, probabilities).
        """
        n = self.n_sites
        probs = np.zeros(n)
        for w, c in self.members:
            f = np.fft.fft2(c)
            p2 = np.abs(f) ** 2
            p2 /= p2.sum()
            m1, m2 = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
            np.add.at(probs, ((m1 + m2) % n).ravel(), w * p2.ravel())
        m = np.arange(n)
        m_wrapped = np.where(m >= (n + 1) // 2, m - n, m)
        p_plus = 2.0 * np.pi * m_wrapped / n
        order = np.argsort(p_plus)
        return p_plus[order], probs[order]


def ground_state(h: TwoAtomHamiltonian) -> TwoAtomState:
    """Lowest eigenstate (center-of-mass phase 0) of the two-atom model."""
    n = h.n_sites
    w, v = np.linalg.eigh(h.block(0.0))
    g = v[:, 0]
    k = int(np.argmax(np.abs(g)))
    g = g * (abs(g[k]) / g[k])
    d = np.arange(n)
    d_wrapped = np.minimum(d, n - d)
    width = math.sqrt(float(np.sum(np.abs(g) ** 2 * d_wrapped.astype(float) ** 2)))
    if width > n / 4.0:
        raise SizeError(
            f"bound-state width {width:.1f} sites exceeds N/4; increase N"
        )
    c = _bloch_matrix_from_relative(n, 0.0, g)
    vdd0 = h.vdd_diag[0]
    ratio = abs(h.v_hop / vdd0) if vdd0 != 0 else math.inf
    return TwoAtomState(
        n_sites=n,
        members=[(1.0, c)],
        temperature=0.0,
        meta={"energy": float(w[0]), "hop_to_vdd_ratio": ratio},
    )


def _bloch_matrix_from_relative(n, theta, g):
    """c_jl = exp(i theta j) g(l - j) / sqrt(N)."""
    j = np.arange(n)
    rel = (j[None, :] - j[:, None]) % n
    c = np.exp(1j * theta * j)[:, None] * g[rel] / math.sqrt(n)
    return c


@dataclass
class DiatomBand:
    """Bound branch of the two-atom spectrum versus center-of-mass momentum."""

    thetas: np.ndarray           # K a
    energies: np.ndarray         # bound-branch E(K), E_rec
    v_hop_fit: float             # nearest-neighbor Fourier coefficient
    bandwidth: float
    fit_residual_rms: float
    gap_min: float               # min over K of E1 - E0
    m_eff_ratio_fit: float       # m_eff^(2at)/m from the fitted cosine
    m_eff_ratio_curvature: float  # from finite-difference curvature at K=0

    @property
    def v_bandwidth(self):
        return self.bandwidth


def diatom_band_exact(h: TwoAtomHamiltonian) -> DiatomBand:
    """Extract and fit the bound-diatom band from the block spectra."""
    thetas, energies, _ = _solve_blocks(h)
    e0 = energies[:, 0]
    e1 = energies[:, 1]
    gap_min = float(np.min(e1 - e0))
    bandwidth = float(e0.max() - e0.min())
    if e0.max() >= e1.min():
        raise RegimeError(
            "bound branch overlaps the continuum (|V_dd| <~ 4 |V_hop|)"
        )
    n = h.n_sites
    v_fit = float(np.real(e0 @ np.exp(1j * thetas)) / n)
    model = e0.mean() + 2.0 * v_fit * np.cos(thetas)
    rms = float(np.sqrt(np.mean((e0 - model) ** 2)))
    i0 = int(np.argmin(np.abs(thetas)))
    dth = float(thetas[1] - thetas[0])
    curv = (e0[i0 + 1] - 2.0 * e0[i0] + e0[i0 - 1]) / dth**2
    if curv <= 0:
        raise RegimeError("non-positive bound-band curvature at K = 0")
    return DiatomBand(
        thetas=thetas,
        energies=e0,
        v_hop_fit=v_fit,
        bandwidth=bandwidth,
        fit_residual_rms=rms,
        gap_min=gap_min,
        m_eff_ratio_fit=2.0 / (math.pi**2 * 2.0 * abs(v_fit)),
        m_eff_ratio_curvature=2.0 / (math.pi**2 * curv),
    )


def hopping_two_atom(v_hop, v_dd):
    """Second-order diatom hopping 2 v_hop^2 / v_dd (negative for attraction)."""
    if v_dd == 0:
        raise SingularityError("diatom hopping undefined at zero interaction")
    return 2.0 * v_hop**2 / v_dd


def effective_mass_two_atom(v_hop, v_dd):
    """Closed-form m_eff^(2at) / m = |v_dd| / (4 v_hop^2) * 2 / pi^2."""
    if v_hop == 0 or v_dd == 0:
        raise SingularityError("effective mass undefined at zero hopping/interaction")
    return abs(v_dd) / (4.0 * v_hop**2) * 2.0 / math.pi**2


def effective_mass_ratio_two_atom(v_hop, v_dd):
    """m_eff^(2at) / m_eff = |v_dd| / (2 |v_hop|)."""
    if v_hop == 0 or v_dd == 0:
        raise SingularityError("mass ratio undefined at zero hopping/interaction")
    return abs(v_dd) / (2.0 * abs(v_hop))


def _envelope(n, sigma_e, j0, coord):
    """Gaussian amplitude envelope exp(-u^2 / (2 sigma_E^2)) with minimal-image
    offset u = coord - j0 (coord in units of a)."""
    u = (coord - j0 + n / 2.0) % n - n / 2.0
    return np.exp(-(u**2) / (2.0 * sigma_e**2))


def envelope_state(n_sites: int, sigma_e: float, j0: int | None = None) -> TwoAtomState:
    """Diagonal diatom state with a Gaussian center-of-mass envelope.

    Amplitudes c_jj ~ exp(-(j - j0)^2 / (2 sigma_E^2)), sigma_E in units of a.
    ``sigma_e = inf`` gives the uniform ideal lattice-EPR superposition.
    """
    if sigma_e <= 0:
        raise DomainError("envelope width must be positive")
    if j0 is None:
        j0 = n_sites // 2
    if math.isinf(sigma_e):
        amp = np.full(n_sites, 1.0 / math.sqrt(n_sites))
        c = np.diag(amp).astype(complex)
        return TwoAtomState(n_sites=n_sites, members=[(1.0, c)], sigma_e=sigma_e)
    if 3.0 * sigma_e >= n_sites / 2.0:
        raise SizeError("envelope clipped by the periodic boundary (3 sigma_E >= N a / 2)")
    amp = _envelope(n_sites, sigma_e, j0, np.arange(n_sites, dtype=float))
    amp /= math.sqrt(float(np.sum(amp**2)))
    c = np.diag(amp).astype(complex)
    return TwoAtomState(n_sites=n_sites, members=[(1.0, c)], sigma_e=sigma_e)


def thermal_diatom_state(
    h: TwoAtomHamiltonian,
    temperature: float,
    sigma_e: float | None = None,
    j0: int | None = None,
) -> TwoAtomState:
    """Boltzmann mixture of bound-branch Bloch states.

    ``temperature`` is k_B T in E_rec.  With ``sigma_e`` set, every member is
    modulated by the center-of-mass Gaussian envelope (amplitude width
    sigma_E in a), which adds the hbar/(sqrt 2 sigma_E) momentum floor of the
    preparation protocol.  T = 0 returns the single K = 0 member.
    """
    if temperature < 0:
        raise DomainError("temperature must be non-negative")
    n = h.n_sites
    if j0 is None:
        j0 = n // 2
    if sigma_e is not None and 3.0 * sigma_e >= n / 2.0:
        raise SizeError("envelope clipped by the periodic boundary")
    thetas, energies, ground = _solve_blocks(h)
    e0 = energies[:, 0]
    if temperature == 0.0:
        sel = [int(np.argmin(np.abs(thetas)))]
        weights = np.array([1.0])
        occupancy = 1.0
    else:
        beta = 1.0 / temperature
        shifted = energies - e0.min()
        z_all = float(np.sum(np.exp(-beta * shifted)))
        z_bound = float(np.sum(np.exp(-beta * shifted[:, 0])))
        occupancy = z_bound / z_all
        weights = np.exp(-beta * (e0 - e0.min()))
        weights /= weights.sum()
        sel = list(range(n))
    j = np.arange(n, dtype=float)
    com = (j[:, None] + j[None, :]) / 2.0
    env = _envelope(n, sigma_e, j0, com) if sigma_e is not None else None
    members = []
    for i, idx in enumerate(sel):
        c = _bloch_matrix_from_relative(n, thetas[idx], ground[idx])
        if env is not None:
            c = c * env
            c = c / math.sqrt(float(np.sum(np.abs(c) ** 2)))
        members.append((float(weights[i]), c))
    state = TwoAtomState(
        n_sites=n,
        members=members,
        temperature=temperature,
        sigma_e=sigma_e,
        bound_occupancy=occupancy,
        meta={"thetas": thetas[sel], "weights": weights.copy()},
    )
    if occupancy < 0.9:
        state.meta["regime_warning"] = (
            f"bound-branch occupancy {occupancy:.3f} < 0.9: temperature too "
            "high for a pure diatom ensemble"
        )
    return state
