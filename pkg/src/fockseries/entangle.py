"""Beam-splitter entanglement: joint output amplitudes, purity, linear entropy.

The state meets vacuum at a two-mode beam splitter with amplitude
transmittance t = cos(theta) and reflectance r = sin(theta).  An m-photon
component splits as

    |m, 0>  ->  sum_j sqrt(C(m, j)) t^j r^(m-j) |j, m-j>,

so with real nonnegative input amplitudes c_m (phases factor out of the
reduced density matrix, a tested invariant) the joint amplitudes are
A(j, l) = c_{j+l} sqrt(C(j+l, j)) t^j r^l.  The entanglement measure is the
linear entropy S = 1 - Tr(rho_a^2) of the transmitted mode's reduced state.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import InvalidParameter, InvalidTheta, UnnormalizedInput
from .series import TruncatedSeries, normalization_log, _check_series_spec
from .states import StateSpec

# absolute slack on the unit-norm check, covering accumulated rounding when
# the source series is exact (tail bound 0)
_NORM_FLOOR = 1e-12


@dataclass(frozen=True)
class BeamSplitterSetting:
    """Transmittance angle theta in (0, pi/2]; theta = pi/4 is the 50:50 splitter."""

    theta: float = math.pi / 4.0

    def __post_init__(self) -> None:
        th = float(self.theta)
        if not math.isfinite(th) or not (0.0 < th <= math.pi / 2.0):
            raise InvalidTheta(f"theta must lie in (0, pi/2], got {self.theta}")
        object.__setattr__(self, "theta", th)

    @property
    def transmittance(self) -> float:
        return math.cos(self.theta)

    @property
    def reflectance(self) -> float:
        return math.sin(self.theta)


@dataclass(frozen=True, eq=False)
class JointAmplitudes:
    """Joint Fock amplitudes A(j, l) of the two output modes.

    ``matrix[j, l]`` holds the amplitude for j transmitted and l reflected
    photons; rows/columns run over 0..D-1 with D = k + n_max + 1, and every
    entry with j + l < k is exactly zero (the input carries at least k
    photons).  The splitter is unitary, so the squared entries sum to 1 up to
    the source series' tail bound.
    """

    matrix: np.ndarray
    theta: float
    source_tail_bound: float
    converged: bool


@dataclass(frozen=True)
class EntanglementResult:
    purity: float
    linear_entropy: float
    theta: float
    converged: bool


def split(series: TruncatedSeries,
          spec: StateSpec | None = None,
          setting: BeamSplitterSetting = BeamSplitterSetting(),
          *,
          allow_unconverged: bool = False,
          _reflected_arm_phase: bool = False) -> JointAmplitudes:
    """Expand (state tensor vacuum) over the joint Fock basis of the outputs.

    Amplitudes are assembled in log-space (ln c_m + half log-binomial +
    j ln t + l ln r) and exponentiated, one total-photon-number
    anti-diagonal at a time.  ``_reflected_arm_phase`` is a test-only switch
    that attaches the alternate-convention phase i^l to the reflected arm;
    observables must not change under it.
    """
    spec = _check_series_spec(series, spec)
    if not isinstance(setting, BeamSplitterSetting):
        raise InvalidTheta("setting must be a BeamSplitterSetting")
    if not series.converged and not allow_unconverged:
        raise InvalidParameter(
            "series is not converged; pass allow_unconverged=True to propagate it anyway")

    ln_norm = normalization_log(series)
    ln_c = ln_norm + 0.5 * series.log_weights  # ln c_m, m = n + k
    k = spec.k
    dim = series.n_max + k + 1
    t = setting.transmittance
    r = setting.reflectance
    ln_t = math.log(t) if t > 0.0 else -math.inf
    ln_r = math.log(r) if r > 0.0 else -math.inf

    matrix = np.zeros((dim, dim), dtype=complex if _reflected_arm_phase else float)
    lg = gammaln(np.arange(dim + 1, dtype=np.float64) + 1.0)
    for m in range(k, dim):
        j = np.arange(m + 1)
        ln_binom_half = 0.5 * (lg[m] - lg[j] - lg[m - j])
        # 0 * log(0) is 0 by convention (t may vanish at the interval edge)
        pow_t = np.where(j == 0, 0.0, -np.inf) if math.isinf(ln_t) else j * ln_t
        pow_r = np.where(j == m, 0.0, -np.inf) if math.isinf(ln_r) else (m - j) * ln_r
        amps = np.exp(ln_c[m - k] + ln_binom_half + pow_t + pow_r)
        if _reflected_arm_phase:
            amps = amps * (1j ** ((m - j) % 4))
        matrix[j, m - j] = amps
    return JointAmplitudes(matrix=matrix, theta=setting.theta,
                           source_tail_bound=series.tail_bound_rel,
                           converged=series.converged)


def reduced_purity(amps: JointAmplitudes) -> float:
    """Tr(rho_a^2) for rho_a(j, j') = sum_l A(j, l) conj(A(j', l)).

    The Gram matrix is accumulated row by row over j' >= j (rho_a is
    Hermitian, halving the work) without materializing the full density
    matrix; memory stays O(D) per row.
    """
    a = amps.matrix
    norm = float(np.sum(np.abs(a) ** 2))
    tol = 10.0 * amps.source_tail_bound + _NORM_FLOOR
    if not math.isfinite(norm) or abs(norm - 1.0) > tol:
        raise UnnormalizedInput(
            f"joint amplitudes have squared norm {norm!r}, beyond 1 +/- {tol:g}")
    purity = 0.0
    for j in range(a.shape[0]):
        g = a[j:] @ np.conj(a[j])
        gsq = np.abs(g) ** 2
        purity += gsq[0] + 2.0 * gsq[1:].sum()
    return float(purity)


def linear_entropy(series: TruncatedSeries,
                   spec: StateSpec | None = None,
                   setting: BeamSplitterSetting = BeamSplitterSetting(),
                   *,
                   allow_unconverged: bool = False) -> EntanglementResult:
    """S = 1 - Tr(rho_a^2) of the transmitted mode after splitting with vacuum."""
    amps = split(series, spec, setting, allow_unconverged=allow_unconverged)
    purity = reduced_purity(amps)
    return EntanglementResult(purity=purity,
                              linear_entropy=1.0 - purity,
                              theta=setting.theta,
                              converged=amps.converged)
