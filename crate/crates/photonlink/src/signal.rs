//! Spectral and temporal single-photon modes and the encoding operations
//! that act on them.
//!
//! The rectangular family of Eq.-(9) type spectra is the workhorse: a flat
//! band of total width `W` centered on resonance, whose temporal shape is a
//! sinc. Spectral phase encoding multiplies the spectrum by `exp(-i*theta)`
//! where `theta` is piecewise constant over `N0` chips of width `W/N0`.
//!
//! Normalization conventions: the paper-style amplitude `sqrt(P0)/W` is not
//! unit-normalized; dynamics consume unit-norm modes. A temporal mode whose
//! `normalized` flag is set represents a *continuum* unit-norm mode; the
//! part of that unit mass falling outside the sampled window is recorded in
//! `truncated_mass` (zero when normalization was performed against the
//! window itself via [`normalize`]). Choosing `P0 = W/(2*pi)` makes the
//! analytic constructors emit unit-norm modes directly.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::grid::{FrequencyGrid, TimeGrid};

/// `sin(x)/x` with the removable singularity filled in.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        // series keeps full double precision through the crossover
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

/// Peak power that makes the rectangular-family temporal modes unit-norm:
/// `integral of P0*sinc^2(W t/2) dt = P0*2*pi/W = 1`.
pub fn unit_peak_power(w: f64) -> f64 {
    w / TAU
}

/// Complex spectral mode sampled on a uniform frequency grid
/// (rotating frame, resonance at 0).
#[derive(Debug, Clone)]
pub struct SpectralAmplitude {
    grid: FrequencyGrid,
    values: Vec<C64>,
    /// Peak power bookkeeping; intensity metadata only, never used by dynamics.
    peak_power: f64,
    /// Total occupied bandwidth.
    bandwidth: f64,
    /// Width of the finest spectral feature present (chip width once a code
    /// has been applied); transforms check their resolution against this.
    finest_feature: f64,
}

impl SpectralAmplitude {
    pub fn from_values(grid: FrequencyGrid, values: Vec<C64>, peak_power: f64, bandwidth: f64) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::GridMismatch {
                context: "value count differs from frequency grid size",
            });
        }
        Ok(Self {
            grid,
            values,
            peak_power,
            bandwidth,
            finest_feature: bandwidth,
        })
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn peak_power(&self) -> f64 {
        self.peak_power
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn finest_feature(&self) -> f64 {
        self.finest_feature
    }

    /// Squared L2 norm by cell-midpoint quadrature. Exact for spectra that
    /// are piecewise constant on cells (the rectangular coded family).
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }

    /// Rescaled copy with unit L2 norm.
    pub fn into_unit_norm(mut self) -> Result<Self> {
        let n2 = self.norm_sq();
        if !(n2 > 0.0) || !n2.is_finite() {
            return Err(Error::ZeroNorm);
        }
        let s = 1.0 / n2.sqrt();
        for v in &mut self.values {
            *v *= s;
        }
        Ok(self)
    }
}

/// Complex temporal mode sampled on a uniform time grid.
#[derive(Debug, Clone)]
pub struct TemporalMode {
    grid: TimeGrid,
    values: Vec<C64>,
    /// Set when the samples represent a unit-L2-norm continuum mode.
    normalized: bool,
    /// Unit mass lying outside the sampled window (0 for grid-normalized
    /// modes). Reported so truncation is never silent.
    truncated_mass: f64,
}

impl TemporalMode {
    pub fn from_values(grid: TimeGrid, values: Vec<C64>) -> Result<Self> {
        if values.len() != grid.count() {
            return Err(Error::GridMismatch {
                context: "value count differs from time grid size",
            });
        }
        Ok(Self {
            grid,
            values,
            normalized: false,
            truncated_mass: 0.0,
        })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn truncated_mass(&self) -> f64 {
        self.truncated_mass
    }

    /// Squared L2 norm over the window by trapezoid quadrature.
    pub fn norm_sq(&self) -> f64 {
        trapezoid_abs2(&self.values, self.grid.dt())
    }

    pub(crate) fn flag_normalized(mut self, truncated_mass: f64) -> Self {
        self.normalized = true;
        self.truncated_mass = truncated_mass.max(0.0);
        self
    }
}

/// Trapezoid rule for `sum |v|^2 dt` on a uniform grid.
fn trapezoid_abs2(values: &[C64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner: f64 = values[1..values.len() - 1]
        .iter()
        .map(|v| v.norm_sqr())
        .sum();
    (inner + 0.5 * (values[0].norm_sqr() + values[values.len() - 1].norm_sqr())) * dt
}

/// Trapezoid rule for `sum conj(a) b dt` on a uniform grid.
pub(crate) fn trapezoid_inner(a: &[C64], b: &[C64], dt: f64) -> C64 {
    debug_assert_eq!(a.len(), b.len());
    let n = a.len();
    if n < 2 {
        return C64::new(0.0, 0.0);
    }
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..n - 1 {
        acc += a[k].conj() * b[k];
    }
    acc += 0.5 * (a[0].conj() * b[0] + a[n - 1].conj() * b[n - 1]);
    acc * dt
}

/// Sequence of chip phases `phi_n` with chip width `Omega = W/N0`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCode {
    phases: Vec<f64>,
    chip_width: f64,
}

impl PhaseCode {
    pub fn from_phases(phases: Vec<f64>, chip_width: f64) -> Result<Self> {
        if phases.is_empty() {
            return Err(Error::InvalidParameter("code length must be >= 1".into()));
        }
        if !(chip_width > 0.0) || !chip_width.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "chip width must be positive and finite, got {chip_width}"
            )));
        }
        if phases.iter().any(|p| !p.is_finite()) {
            return Err(Error::InvalidParameter("chip phases must be finite".into()));
        }
        Ok(Self { phases, chip_width })
    }

    /// Identity code (all phases zero).
    pub fn all_zero(n0: usize, chip_width: f64) -> Result<Self> {
        Self::from_phases(vec![0.0; n0], chip_width)
    }

    /// Random binary {0, pi} code drawn from `rng`.
    pub fn random_binary<R: Rng + ?Sized>(n0: usize, chip_width: f64, rng: &mut R) -> Result<Self> {
        let phases = (0..n0)
            .map(|_| if rng.gen::<bool>() { std::f64::consts::PI } else { 0.0 })
            .collect();
        Self::from_phases(phases, chip_width)
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn chip_width(&self) -> f64 {
        self.chip_width
    }

    /// Total bandwidth occupied by the code: `Omega * N0`.
    pub fn bandwidth(&self) -> f64 {
        self.chip_width * self.phases.len() as f64
    }

    /// Every phase in {0, pi} (up to roundoff).
    pub fn is_binary(&self) -> bool {
        self.phases
            .iter()
            .all(|&p| p.abs() < 1e-12 || (p - std::f64::consts::PI).abs() < 1e-12)
    }

    /// Center frequency of chip `j`, for either parity of `N0`: chips sit at
    /// `(j - (N0-1)/2) * Omega`, so odd lengths center a chip on resonance
    /// and even lengths put resonance on the boundary between the two
    /// central chips.
    pub fn chip_center(&self, j: usize) -> f64 {
        (j as f64 - (self.phases.len() as f64 - 1.0) / 2.0) * self.chip_width
    }
}

/// Rectangular spectrum: `sqrt(P0)/W` inside `[-W/2, +W/2]`, zero elsewhere.
pub fn rect_spectrum(w: f64, p0: f64, grid: &FrequencyGrid) -> Result<SpectralAmplitude> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive and finite, got {w}"
        )));
    }
    if !(p0 > 0.0) || !p0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "peak power must be positive and finite, got {p0}"
        )));
    }
    grid.require_band(w)?;
    let amp = p0.sqrt() / w;
    let half = w / 2.0;
    let values = grid
        .samples()
        .map(|omega| {
            if omega.abs() <= half {
                C64::new(amp, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        })
        .collect();
    SpectralAmplitude::from_values(grid.clone(), values, p0, w)
}

/// Temporal shape of the rectangular spectrum: `sqrt(P0) * sinc(W t / 2)`.
pub fn sinc_temporal(w: f64, p0: f64, tgrid: &TimeGrid) -> Result<TemporalMode> {
    if !(w > 0.0) || !w.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "bandwidth must be positive and finite, got {w}"
        )));
    }
    if !(p0 > 0.0) || !p0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "peak power must be positive and finite, got {p0}"
        )));
    }
    let amp = p0.sqrt();
    let values = tgrid
        .times()
        .map(|t| C64::new(amp * sinc(0.5 * w * t), 0.0))
        .collect();
    TemporalMode::from_values(tgrid.clone(), values)
}

/// Unit-norm uncoded temporal mode (continuum normalization, window
/// truncation reported on the result).
pub fn sinc_temporal_unit(w: f64, tgrid: &TimeGrid) -> Result<TemporalMode> {
    let mode = sinc_temporal(w, unit_peak_power(w), tgrid)?;
    let mass = mode.norm_sq();
    Ok(mode.flag_normalized(1.0 - mass))
}

/// Piecewise-constant phase mask `theta(omega)` realizing a chip code on a
/// frequency grid: `theta = phi_j` on chip `j`, 0 outside the coded band.
pub fn chip_phase_mask(code: &PhaseCode, grid: &FrequencyGrid) -> Vec<f64> {
    let n0 = code.len();
    let omega_chip = code.chip_width();
    let half_band = code.bandwidth() / 2.0;
    grid.samples()
        .map(|omega| {
            if omega < -half_band || omega >= half_band {
                0.0
            } else {
                let j = ((omega + half_band) / omega_chip).floor() as isize;
                let j = j.clamp(0, n0 as isize - 1) as usize;
                code.phases()[j]
            }
        })
        .collect()
}

/// Encoded spectrum `xi(omega) * exp(-i * theta(omega))`. Norm-preserving.
pub fn apply_spectral_phase(xi: &SpectralAmplitude, theta: &[f64]) -> Result<SpectralAmplitude> {
    if theta.len() != xi.values().len() {
        return Err(Error::GridMismatch {
            context: "phase mask length differs from spectrum grid size",
        });
    }
    let values = xi
        .values()
        .iter()
        .zip(theta)
        .map(|(v, &th)| v * C64::from_polar(1.0, -th))
        .collect();
    let mut out = SpectralAmplitude::from_values(
        xi.grid().clone(),
        values,
        xi.peak_power(),
        xi.bandwidth(),
    )?;
    out.finest_feature = xi.finest_feature;
    Ok(out)
}

/// Apply a chip code to a spectrum: builds the mask, applies it, and records
/// the chip width as the finest spectral feature for resolution checks.
pub fn encode_spectrum(xi: &SpectralAmplitude, code: &PhaseCode) -> Result<SpectralAmplitude> {
    let w_code = code.bandwidth();
    if (w_code - xi.bandwidth()).abs() > 1e-9 * xi.bandwidth() {
        return Err(Error::InvalidParameter(format!(
            "code occupies bandwidth {w_code:.6e} but the mode has {:.6e}; \
             Omega * N0 must equal W",
            xi.bandwidth()
        )));
    }
    let theta = chip_phase_mask(code, xi.grid());
    let mut out = apply_spectral_phase(xi, &theta)?;
    out.finest_feature = code.chip_width();
    Ok(out)
}

/// Fourier synthesis `xi(t) = (1/sqrt(2 pi)) * integral xi(omega) e^{-i omega t} d omega`.
///
/// The integral is taken exactly over the piecewise-linear interpolant of
/// the samples (Filon-type rule), so the oscillatory kernel contributes no
/// discretization error of its own; what remains is the interpolation error,
/// which vanishes for cell-aligned piecewise-constant spectra away from chip
/// boundaries. The grid must resolve the finest phase feature present
/// (spacing at most an eighth of the chip width once a code is applied).
pub fn to_time(xi: &SpectralAmplitude, tgrid: &TimeGrid) -> Result<TemporalMode> {
    let required = xi.finest_feature() / 8.0;
    if xi.grid().spacing() > required * (1.0 + 1e-12) {
        return Err(Error::UnderResolved {
            required_spacing: required,
            actual_spacing: xi.grid().spacing(),
        });
    }
    let n = xi.values().len();
    if n < 2 {
        return Err(Error::InvalidParameter(
            "spectrum needs at least two samples to transform".into(),
        ));
    }
    let h = xi.grid().spacing();
    let omega0 = xi.grid().sample(0);
    let vals = xi.values();
    let scale = 1.0 / TAU.sqrt();

    let out: Vec<C64> = tgrid
        .times()
        .map(|t| {
            let (i0, i1) = segment_moments(h, t);
            let c_lo = i0 - i1 / h; // weight of the left sample of a segment
            let c_hi = i1 / h; // weight of the right sample
            let step = C64::from_polar(1.0, -h * t);
            let mut phase = C64::from_polar(1.0, -omega0 * t);
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..n - 1 {
                acc += (vals[k] * c_lo + vals[k + 1] * c_hi) * phase;
                phase *= step;
            }
            acc * scale
        })
        .collect();

    let mode = TemporalMode::from_values(tgrid.clone(), out)?;
    // A unit-norm spectrum transforms to a unit-norm continuum mode; record
    // how much of that mass the window actually holds.
    let nsq = xi.norm_sq();
    if (nsq - 1.0).abs() <= 1e-9 {
        let mass = mode.norm_sq();
        Ok(mode.flag_normalized(1.0 - mass))
    } else {
        Ok(mode)
    }
}

/// Exact moments of one grid segment against the Fourier kernel:
/// `I0 = integral_0^h e^{-i s t} ds`, `I1 = integral_0^h s e^{-i s t} ds`.
fn segment_moments(h: f64, t: f64) -> (C64, C64) {
    let x = h * t;
    if x.abs() < 0.05 {
        // series in z = -i h t, full precision at the crossover
        let z = C64::new(0.0, -x);
        let mut term = C64::new(1.0, 0.0);
        let mut i0 = C64::new(0.0, 0.0);
        let mut i1 = C64::new(0.0, 0.0);
        let mut kfac = 1.0;
        for k in 0..12u32 {
            if k > 0 {
                term *= z;
                kfac *= k as f64;
            }
            i0 += term / (kfac * (k as f64 + 1.0));
            i1 += term / (kfac * (k as f64 + 2.0));
        }
        (i0 * h, i1 * h * h)
    } else {
        let e = C64::from_polar(1.0, -x);
        let it = C64::new(0.0, t);
        let i0 = (C64::new(1.0, 0.0) - e) / it;
        let i1 = e * C64::new(0.0, h / t) + (e - C64::new(1.0, 0.0)) / (t * t);
        (i0, i1)
    }
}

/// Closed-form encoded temporal mode for odd code lengths:
/// `(sqrt(P0)/N0) * sinc(Omega t / 2) * sum_n exp(-i (n Omega t + phi_n))`
/// with `n = -N..N`, `N0 = 2N + 1`.
pub fn encoded_temporal_closed_form(
    code: &PhaseCode,
    w: f64,
    p0: f64,
    tgrid: &TimeGrid,
) -> Result<TemporalMode> {
    let n0 = code.len();
    if n0 % 2 == 0 {
        return Err(Error::EvenCodeLength { n0 });
    }
    if (code.bandwidth() - w).abs() > 1e-9 * w {
        return Err(Error::InvalidParameter(format!(
            "closed form called with W = {w:.6e} but the code spans {:.6e}",
            code.bandwidth()
        )));
    }
    if !(p0 > 0.0) || !p0.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "peak power must be positive and finite, got {p0}"
        )));
    }
    let omega_chip = code.chip_width();
    let half_n = (n0 / 2) as f64;
    let amp = p0.sqrt() / n0 as f64;
    // chip phase factors e^{-i phi_n}, ordered n = -N..N
    let chip_factors: Vec<C64> = code
        .phases()
        .iter()
        .map(|&p| C64::from_polar(1.0, -p))
        .collect();

    let values: Vec<C64> = tgrid
        .times()
        .map(|t| {
            let envelope = amp * sinc(0.5 * omega_chip * t);
            // comb: e^{-i n Omega t} by recurrence from n = -N
            let step = C64::from_polar(1.0, -omega_chip * t);
            let mut rot = C64::from_polar(1.0, half_n * omega_chip * t);
            let mut comb = C64::new(0.0, 0.0);
            for f in &chip_factors {
                comb += f * rot;
                rot *= step;
            }
            comb * envelope
        })
        .collect();

    let mode = TemporalMode::from_values(tgrid.clone(), values)?;
    if (p0 - unit_peak_power(w)).abs() <= 1e-12 * unit_peak_power(w) {
        let mass = mode.norm_sq();
        Ok(mode.flag_normalized(1.0 - mass))
    } else {
        Ok(mode)
    }
}

/// Unit-norm encoded mode via the closed form (odd `N0` only).
pub fn encoded_temporal_unit(code: &PhaseCode, tgrid: &TimeGrid) -> Result<TemporalMode> {
    let w = code.bandwidth();
    encoded_temporal_closed_form(code, w, unit_peak_power(w), tgrid)
}

/// Rescale a temporal mode to unit L2 norm over its window.
pub fn normalize(mode: &TemporalMode) -> Result<TemporalMode> {
    let n2 = mode.norm_sq();
    if !(n2 > 0.0) || !n2.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let s = 1.0 / n2.sqrt();
    let values = mode.values().iter().map(|v| v * s).collect();
    Ok(TemporalMode::from_values(mode.grid().clone(), values)?.flag_normalized(0.0))
}

/// `|xi(t)|^2` per sample.
pub fn intensity_trace(mode: &TemporalMode) -> Vec<f64> {
    mode.values().iter().map(|v| v.norm_sqr()).collect()
}
