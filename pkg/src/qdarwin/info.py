"""Entropies and information functionals for the qubit-field branching state.

The global state is |Psi> = (|0>|psi_0> + |1>|psi_1>)/sqrt(2) with field
branches that differ only inside the observed window.  Every quantity here is
a closed form in the fragment overlap numbers (p_F(s), a_F) of
:mod:`.fragments`:

* coherent probes decohere mode by mode, so mutual information needs only the
  magnitudes |D_F|, |D_tot| (kept in log space);
* Fock probes distribute n photons binomially over fragment and complement,
  giving photon-number-resolved conditional states whose 2x2 spectra are
  elementary;
* the Holevo bound for a qubit measurement along (theta, phi) follows from the
  same sector structure, as does the exact decomposition of the mutual
  information into number-measurement Holevo information plus a conditional
  remainder.

Branch masses are renormalized by the window's energy capture throughout the
Fock formulas, so the truncated lattice behaves as a closed system and the
purity identity I(S,E) = 2 S(S) is exact.  Also here: the ideal time-window
and frequency-band overlap closed forms used by the resolved-limit checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import _kernels
from .fragments import FragmentOverlap, PolarLog, coherent_decoherence
from .signal import ScatteringModel, Wavepacket, _scaled_erf, autocorrelation

_GAP_SLACK = 1e-9
_LOG4 = math.log(4.0)


@dataclass(frozen=True)
class CoherentProbe:
    """Multimode coherent probe with mean photon number nbar = q^2."""

    nbar: float

    def __post_init__(self):
        if self.nbar < 0.0:
            raise ValueError(f"nbar must be nonnegative, got {self.nbar}")


@dataclass(frozen=True)
class FockProbe:
    """n-photon Fock state of the probe wavepacket mode."""

    n: int

    def __post_init__(self):
        if self.n < 1 or self.n != int(self.n):
            raise ValueError(f"n must be a positive integer, got {self.n}")


Probe = CoherentProbe | FockProbe


def binary_entropy(x: float) -> float:
    """h2(x) in bits for an eigenvalue gap x, i.e. the entropy of (1+-x)/2.

    The argument is the Bloch-vector length, not a probability; inputs must
    lie in [0, 1] up to 1e-9 of floating slack and are clamped.
    """
    if not -_GAP_SLACK <= x <= 1.0 + _GAP_SLACK:
        raise ValueError(f"eigenvalue gap {x} outside [0, 1]")
    return float(_kernels._h2_scalar(min(max(x, 0.0), 1.0)))


def _h2v(x: np.ndarray) -> np.ndarray:
    return _kernels._h2_vec(x)


def _dist_entropy(p: np.ndarray) -> float:
    p = np.asarray(p, dtype=float)
    pos = p > 0.0
    return float(-np.sum(p[pos] * np.log2(p[pos])))


def _log_dtot_coherent(ov: FragmentOverlap, nbar: float) -> float:
    at = ov.a_tot
    return nbar * (at.real - 0.5 * (ov.e0 + ov.e1))


def system_entropy(ov: FragmentOverlap, probe: Probe) -> float:
    """S(S) in bits: the qubit entropy set by the total decoherence factor."""
    if isinstance(probe, CoherentProbe):
        return binary_entropy(math.exp(min(_log_dtot_coherent(ov, probe.nbar), 0.0)))
    at = ov.a_tot / math.sqrt(ov.e0 * ov.e1)
    return binary_entropy(min(abs(at), 1.0) ** probe.n)


def coherent_mutual_info(log_df: float, log_dtot: float) -> float:
    """I(S,F) for a coherent probe from log|D_F| and log|D_tot|.

    h2(|D_tot|) + h2(|D_F|) - h2(|D_tot|/|D_F|); the ratio is formed in log
    space and clamped into [0, 1].
    """
    return float(_kernels._coherent_mi_scalar(min(log_df, 0.0), min(log_dtot, 0.0)))


def mutual_info(ov: FragmentOverlap, probe: Probe) -> float:
    """I(S,F) in bits for either probe, from fragment overlap statistics."""
    if isinstance(probe, CoherentProbe):
        return coherent_mutual_info(
            coherent_decoherence(ov, probe.nbar).log_abs,
            _log_dtot_coherent(ov, probe.nbar),
        )
    an = ov.a_norm
    at = ov.a_tot / math.sqrt(ov.e0 * ov.e1)
    return float(
        _kernels._fock_mi_scalar(
            ov.p0_norm, ov.p1_norm, an.real, an.imag, probe.n, at.real, at.imag
        )
    )


# ---------------------------------------------------------------------------
# Fock photon statistics and mutual information, spelled out array-wise.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FockPhotonStats:
    """Photon-number-resolved fragment statistics for an n-photon probe.

    pk[k] is the probability of finding k of the n photons in the fragment
    (equal mixture of the two branch binomials); psk[s, k] the Bayesian branch
    probability given k; dk[k] the conditional decoherence factor D_F(k); and
    dkc[k] the complementary factor D_Fbar(n-k), aligned so the Eq.-(4)-style
    summand reads h2(dtot) + h2(dk[k]) - h2(dkc[k]).
    """

    n: int
    pk: np.ndarray
    psk: np.ndarray
    dk: np.ndarray
    dkc: np.ndarray


def _binomial_tables(p0: float, q0: float, p1: float, q1: float, n: int):
    """Log branch binomials l_s[k] = log C(n,k) p_s^k q_s^{n-k}, safely."""
    k = np.arange(n + 1, dtype=float)
    j = n - k
    lb = special.gammaln(n + 1.0) - special.gammaln(k + 1.0) - special.gammaln(j + 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        lp = np.log(np.clip([p0, p1], 0.0, None))
        lq = np.log(np.clip([q0, q1], 0.0, None))
        l0 = lb + np.where(k == 0.0, 0.0, k * lp[0]) + np.where(j == 0.0, 0.0, j * lq[0])
        l1 = lb + np.where(k == 0.0, 0.0, k * lp[1]) + np.where(j == 0.0, 0.0, j * lq[1])
    return k, j, lb, l0, l1


def _log_g2(ov: FragmentOverlap) -> tuple[float, float]:
    """log |g_F|^2 and log |g_Fbar|^2, clamped to the Cauchy-Schwarz bound."""

    def one(num: complex, den: float) -> float:
        if den <= 0.0:
            return -math.inf
        r = abs(num) ** 2 / den
        return math.log(r) if 0.0 < r < 1.0 else (0.0 if r >= 1.0 else -math.inf)

    return one(ov.a, ov.p0 * ov.p1), one(ov.ac, ov.p0c * ov.p1c)


def fock_photon_stats(ov: FragmentOverlap, n: int) -> FockPhotonStats:
    """Distribution of the n photons over fragment vs complement, plus the
    conditional decoherence factors, all from capture-renormalized masses."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    k, j, _, l0, l1 = _binomial_tables(
        ov.p0_norm, ov.p0c_norm, ov.p1_norm, ov.p1c_norm, n
    )
    w0 = np.exp(l0)
    w1 = np.exp(l1)
    tot = w0 + w1
    pk = 0.5 * tot
    safe = np.where(tot > 0.0, tot, 1.0)
    ps0 = np.where(tot > 0.0, w0 / safe, 0.5)
    var4 = 4.0 * ps0 * (1.0 - ps0)

    lg2, lgc2 = _log_g2(ov)
    with np.errstate(invalid="ignore"):
        omg_f = np.where(k == 0.0, 0.0, -np.expm1(k * lg2))
        omg_c = np.where(j == 0.0, 0.0, -np.expm1(j * lgc2))
    dk = np.sqrt(np.clip(1.0 - var4 * omg_f, 0.0, 1.0))
    dkc = np.sqrt(np.clip(1.0 - var4 * omg_c, 0.0, 1.0))
    return FockPhotonStats(n=n, pk=pk, psk=np.stack([ps0, 1.0 - ps0]), dk=dk, dkc=dkc)


def fock_mutual_info(stats: FockPhotonStats, d_tot: float) -> float:
    """E_{p_F(k)}[ h2(|D_tot|) + h2(D_F(k)) - h2(D_Fbar(n-k)) ] in bits."""
    h_tot = binary_entropy(d_tot)
    return float(np.sum(stats.pk * (h_tot + _h2v(stats.dk) - _h2v(stats.dkc))))


# ---------------------------------------------------------------------------
# Holevo information.
# ---------------------------------------------------------------------------


class _CoherentChi:
    """chi(theta, phi) for one fragment and coherent probe, tables cached."""

    def __init__(self, ov: FragmentOverlap, nbar: float):
        df = coherent_decoherence(ov, nbar)
        dc = coherent_decoherence(ov.complement(), nbar)
        self.df_abs = math.exp(min(df.log_abs, 0.0))
        self.dc_abs = math.exp(min(dc.log_abs, 0.0))
        self.base = binary_entropy(self.df_abs)
        self.dtot = complex(PolarLog(df.log_abs + dc.log_abs, df.phase + dc.phase).value)
        self.spread = (1.0 - self.df_abs**2) * (1.0 - self.dc_abs**2)

    def chi(self, theta: float, phi: float) -> float:
        s = math.sin(theta)
        if s == 0.0:
            return self.base
        re = self.dtot.real * math.cos(phi) + self.dtot.imag * math.sin(phi)
        cost = 0.0
        for eps in (1.0, -1.0):
            two_p = 1.0 + eps * s * re
            if two_p <= 0.0:
                continue
            det4 = min(1.0, (s / two_p) ** 2 * self.spread)
            cost += 0.5 * two_p * binary_entropy(math.sqrt(1.0 - det4))
        chi = self.base - cost
        return 0.0 if -_GAP_SLACK < chi < 0.0 else chi


def holevo_coherent(ov: FragmentOverlap, nbar: float, theta: float, phi: float) -> float:
    """chi for a coherent probe and a qubit measurement along (theta, phi).

    chi = h2(|D_F|) - sum_eps p(eps) h2(gap_eps) with
    gap_eps = sqrt(1 - [sin(theta)/(2 p(eps))]^2 (1-|D_F|^2)(1-|D_Fbar|^2)) and
    2 p(eps) = 1 + eps sin(theta) Re(e^{-i phi} D_tot).  At sin(theta) = 0 the
    conditional states are pure and chi = h2(|D_F|) exactly.
    """
    return _CoherentChi(ov, nbar).chi(theta, phi)


class _FockChi:
    """chi(theta, phi) for one fragment and n-photon probe, tables cached.

    Everything angle-independent is precomputed: branch binomials, the
    magnitude and phase of the cross term C(n,k) B_F^k B_Fbar^{n-k} with
    B_F = <phi^(0)|phi^(1)>_F renormalized (= conj(a_F_norm)), S(rho_F), and
    the log-determinant numerator of the sector states.
    """

    def __init__(self, ov: FragmentOverlap, n: int):
        k, j, lb, l0, l1 = _binomial_tables(
            ov.p0_norm, ov.p0c_norm, ov.p1_norm, ov.p1c_norm, n
        )
        self.w0 = np.exp(l0)
        self.w1 = np.exp(l1)
        bf = np.conj(ov.a_norm)
        bc = np.conj(ov.ac_norm)
        with np.errstate(divide="ignore", invalid="ignore"):
            lcross = (
                lb
                + np.where(k == 0.0, 0.0, k * np.log(abs(bf)))
                + np.where(j == 0.0, 0.0, j * np.log(abs(bc)))
            )
        self.cross_mag = np.exp(lcross)
        self.cross_arg = k * np.angle(bf) + j * np.angle(bc)

        tot = self.w0 + self.w1
        pk = 0.5 * tot
        safe = np.where(tot > 0.0, tot, 1.0)
        ps0 = np.where(tot > 0.0, self.w0 / safe, 0.5)
        var4 = 4.0 * ps0 * (1.0 - ps0)
        lg2, lgc2 = _log_g2(ov)
        with np.errstate(invalid="ignore"):
            omg_f = np.where(k == 0.0, 0.0, -np.expm1(k * lg2))
            omg_c = np.where(j == 0.0, 0.0, -np.expm1(j * lgc2))
        self.s_frag = _dist_entropy(pk) + float(
            np.sum(pk * _h2v(np.sqrt(np.clip(1.0 - var4 * omg_f, 0.0, 1.0))))
        )
        with np.errstate(divide="ignore"):
            # angle part of log(4 det) except the sin^2/J^2 factors
            self.lnum = l0 + l1 + np.log(omg_f) + np.log(omg_c)

    def chi(self, theta: float, phi: float) -> float:
        c2 = math.cos(0.5 * theta) ** 2
        s2 = math.sin(0.5 * theta) ** 2
        s = math.sin(theta)
        cross_re = self.cross_mag * np.cos(self.cross_arg - phi)
        j_plus = np.clip(0.5 * (c2 * self.w0 + s2 * self.w1 + s * cross_re), 0.0, None)
        j_minus = np.clip(0.5 * (s2 * self.w0 + c2 * self.w1 - s * cross_re), 0.0, None)

        p_eps = np.array([j_plus.sum(), j_minus.sum()])
        h_k_given_eps = _dist_entropy(np.concatenate([j_plus, j_minus])) - _dist_entropy(
            p_eps
        )

        s_cond = 0.0
        if s != 0.0:
            # log(s^2/4) formed from log|s| so a subnormal sin cannot
            # underflow the square to zero
            lnum = 2.0 * math.log(abs(s)) - _LOG4 + self.lnum
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                for jj in (j_plus, j_minus):
                    valid = jj > 0.0
                    l4 = np.where(
                        valid, lnum - 2.0 * np.log(np.where(valid, jj, 1.0)), -np.inf
                    )
                    det4 = np.clip(np.exp(np.minimum(l4, 0.0)), 0.0, 1.0)
                    s_cond += float(np.sum(jj * _h2v(np.sqrt(1.0 - det4))))

        chi = self.s_frag - h_k_given_eps - s_cond
        return 0.0 if -_GAP_SLACK < chi < 0.0 else float(chi)


def holevo_fock(ov: FragmentOverlap, n: int, theta: float, phi: float) -> float:
    """chi for an n-photon probe and a qubit measurement along (theta, phi).

    The fragment state is block diagonal in its photon number k, so
    S(rho_F) = H(p_F(k)) + sum_k p_F(k) h2(D_F(k)) and the measurement-
    conditioned entropy splits the same way; the sector states are rank two
    with determinant sin^2(theta) B_0(k) B_1(k) (1-|g_F|^{2k})
    (1-|g_Fbar|^{2(n-k)}) / (4 J[eps,k])^2 evaluated in log space.  The -n
    outcome is the theta -> theta + pi substitution of the +n one.
    """
    return _FockChi(ov, n).chi(theta, phi)


def _golden_max(f, lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Golden-section maximizer on [lo, hi] to absolute x-tolerance tol."""
    inv = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv * (b - a)
    d = a + inv * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv * (b - a)
            fd = f(d)
    return (c, fc) if fc >= fd else (d, fd)


@dataclass(frozen=True)
class InfoBreakdown:
    """Mutual information split against the best qubit measurement.

    holevo is the angle-optimized chi, discord = mi - holevo the genuinely
    quantum remainder; cond_mi is I(S,F|N_F) from the photon-number
    decomposition (None for coherent probes, where N_F plays no special role).
    """

    mi: float
    holevo: float
    cond_mi: float | None
    discord: float
    optimal_angles: tuple[float, float]


def optimize_holevo(ov: FragmentOverlap, probe: Probe, tol: float = 1e-4) -> InfoBreakdown:
    """Best chi over qubit measurement directions.

    33 x 65 (theta, phi) grid scan followed by one golden-section pass per
    axis at tolerance tol; ties resolve to the smallest grid indices.
    """
    if isinstance(probe, CoherentProbe):
        chi_at = _CoherentChi(ov, probe.nbar).chi
    else:
        chi_at = _FockChi(ov, probe.n).chi

    thetas = np.linspace(0.0, math.pi, 33)
    phis = np.linspace(0.0, 2.0 * math.pi, 65, endpoint=False)
    best = (-1.0, 0.0, 0.0)
    for th in thetas:
        for ph in phis:
            val = chi_at(th, ph)
            if val > best[0]:
                best = (val, th, ph)
    chi, th, ph = best
    dth = thetas[1] - thetas[0]
    dph = phis[1] - phis[0]
    for _ in range(2):
        th, chi = _golden_max(lambda t: chi_at(t, ph), th - dth, th + dth, tol)
        ph, chi = _golden_max(lambda p: chi_at(th, p), ph - dph, ph + dph, tol)

    mi = mutual_info(ov, probe)
    if chi < 0.0:
        chi = 0.0
    cond = None
    if isinstance(probe, FockProbe):
        cond = discord_decomposition(ov, probe.n)[1]
    return InfoBreakdown(
        mi=mi,
        holevo=float(chi),
        cond_mi=cond,
        discord=mi - float(chi),
        optimal_angles=(float(th), float(ph) % (2.0 * math.pi)),
    )


def discord_decomposition(ov: FragmentOverlap, n: int) -> tuple[float, float]:
    """Split I(S,F) = chi(S, N_F) + I(S,F|N_F) for an n-photon probe.

    Counting photons in F is nondemolition on the branch structure: it cuts
    the joint state into orthogonal sectors of fixed k, inside which all three
    reduced states are rank two.  The sector qubit state has coherence
    |g_F|^k |g_Fbar|^{n-k} relative to the Bayes weights, and purity of the
    global state makes S(rho_SF | k) = h2(D_Fbar(n-k)) exactly, so the two
    terms reassemble the mutual information identically.
    """
    k, j, _, l0, l1 = _binomial_tables(
        ov.p0_norm, ov.p0c_norm, ov.p1_norm, ov.p1c_norm, n
    )
    w0 = np.exp(l0)
    w1 = np.exp(l1)
    tot = w0 + w1
    pk = 0.5 * tot
    safe = np.where(tot > 0.0, tot, 1.0)
    ps0 = np.where(tot > 0.0, w0 / safe, 0.5)
    var4 = 4.0 * ps0 * (1.0 - ps0)

    lg2, lgc2 = _log_g2(ov)
    with np.errstate(invalid="ignore"):
        omg_f = np.where(k == 0.0, 0.0, -np.expm1(k * lg2))
        omg_c = np.where(j == 0.0, 0.0, -np.expm1(j * lgc2))
        both = np.where(k == 0.0, 0.0, k * lg2) + np.where(j == 0.0, 0.0, j * lgc2)
        omg_sk = -np.expm1(both)
    s_sys_k = _h2v(np.sqrt(np.clip(1.0 - var4 * omg_sk, 0.0, 1.0)))
    h_df = _h2v(np.sqrt(np.clip(1.0 - var4 * omg_f, 0.0, 1.0)))
    h_dc = _h2v(np.sqrt(np.clip(1.0 - var4 * omg_c, 0.0, 1.0)))

    at = ov.a_tot / math.sqrt(ov.e0 * ov.e1)
    holevo_nf = binary_entropy(min(abs(at), 1.0) ** n) - float(np.sum(pk * s_sys_k))
    cond_mi = float(np.sum(pk * (s_sys_k + h_df - h_dc)))
    return holevo_nf, cond_mi


# ---------------------------------------------------------------------------
# Ideal resolved-limit windows (continuum closed forms).
# ---------------------------------------------------------------------------


def time_window_overlap(
    wp: Wavepacket, scat: ScatteringModel, t_lo: float, t_hi: float
) -> FragmentOverlap:
    """Overlap statistics of the ideal time window [t_lo, t_hi].

    Uses the Gaussian time-domain profile |phi(t)|^2 = sigma/sqrt(pi)
    e^{-sigma^2 t^2}, exact up to the spectral-cutoff floor e^{-(omega0/
    sigma)^2} that the omega0 >= 5 sigma guard makes negligible.
    """
    if t_hi <= t_lo:
        raise ValueError("need t_hi > t_lo")
    sig = wp.sigma

    def mass(center: float) -> float:
        return 0.5 * float(
            special.erf(sig * (t_hi - center)) - special.erf(sig * (t_lo - center))
        )

    m0 = mass(scat.tau0)
    m1 = mass(scat.tau1)
    dtau = scat.dtau
    g_ideal = np.exp(-1j * wp.omega0 * dtau - (sig * dtau) ** 2 / 4.0)
    a = complex(g_ideal * mass(scat.tau_bar))
    a_tot = complex(g_ideal)
    return FragmentOverlap(
        p0=m0, p1=m1, a=a, p0c=1.0 - m0, p1c=1.0 - m1, ac=a_tot - a, e0=1.0, e1=1.0
    )


def frequency_band_overlap(
    wp: Wavepacket, scat: ScatteringModel, w_lo: float, w_hi: float
) -> FragmentOverlap:
    """Overlap statistics of the ideal frequency band [w_lo, w_hi] >= 0.

    Both branches share |phi|^2, so the two masses coincide; the interference
    amplitude is the band-restricted autocorrelation at -dtau, reduced to
    scaled complex error functions (exact for the truncated Gaussian).
    """
    if not 0.0 <= w_lo < w_hi:
        raise ValueError("need 0 <= w_lo < w_hi")
    sig = wp.sigma
    z_lo = (w_lo - wp.omega0) / sig
    z_hi = (w_hi - wp.omega0) / sig
    m = float(sig * math.sqrt(math.pi) / 2.0 * (special.erf(z_hi) - special.erf(z_lo)) / wp.norm)

    dtau = scat.dtau
    y = sig * dtau / 2.0
    core = sig * math.sqrt(math.pi) / 2.0 * (_scaled_erf(z_hi, y) - _scaled_erf(z_lo, y))
    a = complex(np.exp(-1j * wp.omega0 * dtau) * core / wp.norm)
    a_tot = complex(np.conj(autocorrelation(wp, dtau)))
    return FragmentOverlap(
        p0=m, p1=m, a=a, p0c=1.0 - m, p1c=1.0 - m, ac=a_tot - a, e0=1.0, e1=1.0
    )
