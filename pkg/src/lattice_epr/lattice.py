"""Single-particle physics of the 1D optical lattice.

Bloch bands by plane-wave diagonalization, Wannier functions, hopping
amplitudes, bandwidths, effective masses, and the Gaussian width of the
lowest-band Wannier orbital.

All quantities are in internal units: energies in E_rec, lengths in a,
quasimomenta in 1/a.  The lattice potential is (U0/2) cos(2 pi x / a), whose
wells sit at half-integer positions; Wannier home centers are therefore at
x_j = j + 1/2 (in units of a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError, DegenerateBandError, DomainError, SingularityError

__all__ = [
    "LatticeConfig",
    "BlochSpectrum",
    "WannierState",
    "HoppingResult",
    "HoppingEstimate",
    "WannierWidth",
    "band_structure",
    "hopping_exact",
    "hopping_approx",
    "wannier",
    "wannier_gaussian_width",
    "effective_mass_single",
    "effective_mass_from_band",
    "lattice_matrix_element",
]

# Kinetic prefactor: p^2/(2m) = KIN * p~^2 in E_rec for p~ in hbar/a.
KIN = 1.0 / math.pi**2


@dataclass(frozen=True)
class LatticeConfig:
    """Periodic 1D lattice: depth u0 (E_rec), n_sites sites, plane-wave
    cutoff (reciprocal vectors -cutoff..+cutoff)."""

    u0: float
    n_sites: int = 64
    cutoff: int = 16
    samples_per_site: int = 32

    def __post_init__(self):
        if self.u0 < 0:
            raise DomainError("lattice depth must be non-negative")
        if self.n_sites < 8:
            raise DomainError("need at least 8 lattice sites")
        if self.cutoff < 8:
            raise DomainError("plane-wave cutoff must be at least 8")
        if self.samples_per_site < 4:
            raise DomainError("need at least 4 samples per site")


@dataclass
class BlochSpectrum:
    """Band energies and lowest-band plane-wave coefficients on the
    quasimomentum grid q_n = 2 pi n / N, n = -N/2 .. N/2 - 1."""

    config: LatticeConfig
    q: np.ndarray                # (N,) quasimomenta in 1/a
    energies: np.ndarray         # (N, nbands) in E_rec
    coefficients: np.ndarray     # (N, 2M+1, nbands), real

    @property
    def n_sites(self):
        return self.config.n_sites

    @property
    def lowest_band(self):
        return self.energies[:, 0]


def _bloch_matrix(q, u0, cutoff):
    s = np.arange(-cutoff, cutoff + 1)
    h = np.diag(KIN * (q + 2.0 * np.pi * s) ** 2)
    off = np.full(2 * cutoff, u0 / 4.0)
    h += np.diag(off, 1) + np.diag(off, -1)
    return h


def band_structure(cfg: LatticeConfig, nbands: int = 3, check_convergence: bool = True) -> BlochSpectrum:
    """Diagonalize the plane-wave lattice Hamiltonian on the full q grid.

    Raises ConvergenceError if doubling the cutoff moves the lowest band by
    more than 1e-8 E_rec at the zone center or edge.
    """
    n = cfg.n_sites
    m = cfg.cutoff
    q = 2.0 * np.pi * np.arange(-n // 2, n // 2) / n
    energies = np.empty((n, nbands))
    coeffs = np.empty((n, 2 * m + 1, nbands))
    for i, qi in enumerate(q):
        w, v = np.linalg.eigh(_bloch_matrix(qi, cfg.u0, m))
        energies[i] = w[:nbands]
        coeffs[i] = v[:, :nbands]
    if check_convergence:
        for qi in (0.0, -np.pi):
            e_m = np.linalg.eigvalsh(_bloch_matrix(qi, cfg.u0, m))[0]
            e_2m = np.linalg.eigvalsh(_bloch_matrix(qi, cfg.u0, 2 * m))[0]
            if abs(e_m - e_2m) > 1e-8:
                raise ConvergenceError(
                    f"plane-wave cutoff {m} not converged at q={qi:.3f}: "
                    f"|dE0| = {abs(e_m - e_2m):.3e} E_rec > 1e-8"
                )
    return BlochSpectrum(config=cfg, q=q, energies=energies, coefficients=coeffs)


@dataclass(frozen=True)
class HoppingResult:
    """Nearest-neighbor hopping from the exact lowest band."""

    v_hop: float            # E_rec, negative for u0 > 0
    bandwidth: float        # E_rec
    bandwidth_ratio: float  # bandwidth / (4 |v_hop|)
    tight_binding_rms: float  # rms residual of E0 vs const + 2 v_hop cos(qa)
    degenerate_limit: bool  # True for u0 == 0 (no tight-binding meaning)


def hopping_exact(spectrum: BlochSpectrum) -> HoppingResult:
    """Nearest-neighbor Fourier coefficient of the lowest band,
    V_hop = (1/N) sum_q E0(q) exp(i q a)."""
    e0 = spectrum.lowest_band
    n = len(e0)
    v_hop = float(np.real(e0 @ np.exp(1j * spectrum.q)) / n)
    bandwidth = float(e0.max() - e0.min())
    mean = float(e0.mean())
    model = mean + 2.0 * v_hop * np.cos(spectrum.q)
    rms = float(np.sqrt(np.mean((e0 - model) ** 2)))
    ratio = bandwidth / (4.0 * abs(v_hop)) if v_hop != 0 else math.inf
    return HoppingResult(
        v_hop=v_hop,
        bandwidth=bandwidth,
        bandwidth_ratio=ratio,
        tight_binding_rms=rms,
        degenerate_limit=spectrum.config.u0 == 0.0,
    )


@dataclass(frozen=True)
class HoppingEstimate:
    value: float
    within_validity: bool


def hopping_approx(u0) -> HoppingEstimate:
    """Shallow-lattice estimate E_rec exp(-0.26 U0/E_rec).

    Note: at the lithium operating point this numerically reproduces the
    lowest bandwidth 4|V_hop|, not V_hop itself; treat it as a
    bandwidth-scale estimate.  Valid for u0 <~ 15 E_rec (flagged, not
    raised, outside that range).
    """
    if u0 < 0:
        raise DomainError("lattice depth must be non-negative")
    return HoppingEstimate(value=math.exp(-0.26 * u0), within_validity=u0 <= 15.0)


@dataclass
class WannierState:
    """Lowest-band Wannier orbital on the periodic real-space grid.

    ``x`` covers [0, N) in units of a; ``amplitude`` is real (Kohn gauge)
    and the orbital is centered at ``center`` = site + 1/2.
    """

    x: np.ndarray
    amplitude: np.ndarray
    site: int
    center: float
    residual_imag: float = field(default=0.0)

    @property
    def dx(self):
        return float(self.x[1] - self.x[0])

    def norm(self):
        return float(np.sum(self.amplitude**2) * self.dx)

    def displacement_profile(self):
        """(dx_grid, amplitude) with the orbital rolled so its center maps
        to displacement 0 and the grid spans [-N/2, N/2)."""
        n_grid = len(self.x)
        shift = int(round(self.center / self.dx)) - n_grid // 2
        amp = np.roll(self.amplitude, -shift)
        dxg = (np.arange(n_grid) - n_grid // 2) * self.dx
        return dxg, amp


def wannier(spectrum: BlochSpectrum, site: int = 0) -> WannierState:
    """Construct the lowest-band Wannier function localized at ``site``.

    Bloch phases are fixed so that each Bloch function is real and positive
    at the well center of site 0, which makes the Wannier orbital real and
    symmetric about its center.
    """
    cfg = spectrum.config
    gap = float(np.min(spectrum.energies[:, 1] - spectrum.energies[:, 0]))
    if gap < 1e-10:
        raise DegenerateBandError(
            "lowest band degenerate with first excited band; Wannier gauge "
            "is undefined in the free-lattice limit"
        )
    n = cfg.n_sites
    ppa = cfg.samples_per_site
    m = cfg.cutoff
    x = np.arange(n * ppa) / ppa
    s = np.arange(-m, m + 1)
    center0 = 0.5
    w = np.zeros(n * ppa, dtype=complex)
    for i, qi in enumerate(spectrum.q):
        c = spectrum.coefficients[i, :, 0]
        # Bloch function on the grid and its value at the site-0 well center
        phases = np.exp(1j * np.outer(x, qi + 2.0 * np.pi * s))
        phi = phases @ c
        at_center = np.exp(1j * center0 * (qi + 2.0 * np.pi * s)) @ c
        if abs(at_center) < 1e-12:
            raise DegenerateBandError("Bloch function vanishes at the well center")
        phi *= abs(at_center) / at_center
        w += np.exp(-1j * qi * site) * phi
    resid = float(np.max(np.abs(w.imag)) / np.max(np.abs(w)))
    amp = w.real
    amp /= math.sqrt(np.sum(amp**2) / ppa)
    # global sign: positive at the center
    ic = int(round((site + center0) * ppa)) % (n * ppa)
    if amp[ic] < 0:
        amp = -amp
    return WannierState(
        x=x, amplitude=amp, site=site, center=site + center0, residual_imag=resid
    )


def lattice_matrix_element(cfg: LatticeConfig, w1: WannierState, w2: WannierState) -> float:
    """<w1| H_lat |w2> by spectral application of H on the periodic grid."""
    ppa = cfg.samples_per_site
    dx = 1.0 / ppa
    k = 2.0 * np.pi * np.fft.fftfreq(len(w2.x), d=dx)
    kinetic = np.fft.ifft(KIN * k**2 * np.fft.fft(w2.amplitude)).real
    potential = (cfg.u0 / 2.0) * np.cos(2.0 * np.pi * w2.x) * w2.amplitude
    return float(np.sum(w1.amplitude * (kinetic + potential)) * dx)


@dataclass(frozen=True)
class WannierWidth:
    """Gaussian width of the lowest-band orbital, in units of a.

    ``sigma`` is the harmonic-well ground-state width (canonical: it
    reproduces the quoted 0.136 a for the lithium scheme); ``sigma_literal``
    follows the alternative printed closed form, which is larger by 2^(1/4)
    and inconsistent with the quoted number.
    """

    sigma: float
    sigma_literal: float


def wannier_gaussian_width(u0) -> WannierWidth:
    """Harmonic-approximation width of the lowest-band Wannier orbital.

    Expanding (U0/2) cos(2 pi x / a) about a well gives
    omega = (pi/a) sqrt(2 U0 / m) and sigma^2 = hbar/(2 m omega), i.e.
    sigma^2 = 1 / (2 pi^2 sqrt(U0)) in units of a^2 with U0 in E_rec.
    """
    if u0 <= 0:
        raise SingularityError("harmonic width undefined for zero lattice depth")
    sigma_sq = 1.0 / (2.0 * math.pi**2 * math.sqrt(u0))
    return WannierWidth(
        sigma=math.sqrt(sigma_sq),
        sigma_literal=math.sqrt(sigma_sq * math.sqrt(2.0)),
    )


def effective_mass_single(v_hop) -> float:
    """m_eff / m = hbar^2 / (2 |v_hop| a^2 m) for the cosine band."""
    if v_hop == 0:
        raise SingularityError("effective mass diverges at zero hopping")
    return 1.0 / (math.pi**2 * abs(v_hop))


def effective_mass_from_band(spectrum: BlochSpectrum) -> float:
    """m_eff / m from the finite-difference curvature of E0 at q = 0."""
    e0 = spectrum.lowest_band
    i0 = int(np.argmin(np.abs(spectrum.q)))
    dq = float(spectrum.q[1] - spectrum.q[0])
    curv = (e0[i0 + 1] - 2.0 * e0[i0] + e0[i0 - 1]) / dq**2
    if curv <= 0:
        raise SingularityError("non-positive band curvature at q = 0")
    return 2.0 / (math.pi**2 * curv)
