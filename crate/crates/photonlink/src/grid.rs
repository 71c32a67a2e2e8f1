//! Uniform sampling grids for spectral and temporal modes.
//!
//! All frequencies are offsets from the atomic transition (rotating frame),
//! so resonance sits at 0 and detunings shift the mode or the susceptibility,
//! never the atom. Frequency grids used for the rectangular mode family are
//! built *band-aligned*: samples sit at cell centers and every chip boundary
//! of a phase code falls on a cell edge, which keeps piecewise-constant
//! spectra exactly representable by the quadrature rules in this crate.

use crate::error::{Error, Result};

/// Extra cells kept on each side of the occupied band.
const BAND_PAD_CELLS: usize = 8;

/// Uniformly spaced angular-frequency samples.
///
/// Samples are `center + (k - (count-1)/2) * spacing`; for even counts this
/// places samples at half-integer multiples of the spacing around the center,
/// i.e. at the centers of cells whose edges are integer multiples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    center: f64,
    spacing: f64,
    count: usize,
}

impl FrequencyGrid {
    pub fn new(center: f64, spacing: f64, count: usize) -> Result<Self> {
        if !(spacing > 0.0) || !spacing.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "frequency spacing must be positive and finite, got {spacing}"
            )));
        }
        if count == 0 {
            return Err(Error::InvalidParameter(
                "frequency grid needs at least one sample".into(),
            ));
        }
        Ok(Self {
            center,
            spacing,
            count,
        })
    }

    /// Band-aligned grid for a rectangular spectrum of total width `w`
    /// centered on resonance. `cells_in_band` must be even so that the band
    /// edges (and any chip boundaries commensurate with the cell size) fall
    /// on cell edges rather than on samples.
    pub fn band_aligned(w: f64, cells_in_band: usize) -> Result<Self> {
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "bandwidth must be positive and finite, got {w}"
            )));
        }
        if cells_in_band == 0 || cells_in_band % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "cells_in_band must be a positive even number, got {cells_in_band}"
            )));
        }
        let spacing = w / cells_in_band as f64;
        let count = cells_in_band + 2 * BAND_PAD_CELLS;
        Self::new(0.0, spacing, count)
    }

    /// Default grid for an uncoded rectangular spectrum: 256 cells across
    /// the band plus padding.
    pub fn for_uncoded(w: f64) -> Result<Self> {
        Self::band_aligned(w, 256)
    }

    /// Default grid for a chip-coded rectangular spectrum.
    ///
    /// Uses the smaller of `chip/16` and roughly `w/256` as the cell size,
    /// rounded so that an even number of cells tiles every chip. This keeps
    /// chip boundaries on cell edges for any code length.
    pub fn for_coded(w: f64, n0: usize) -> Result<Self> {
        if n0 == 0 {
            return Err(Error::InvalidParameter("code length must be >= 1".into()));
        }
        // Cells per chip: at least 16, and fine enough that the whole band
        // holds ~256 cells; forced even so chip *half*-boundaries of the
        // odd-N0 indexing also land on edges.
        let per_chip = (256usize.div_ceil(n0)).max(16);
        let per_chip = per_chip + per_chip % 2;
        Self::band_aligned(w, per_chip * n0)
    }

    /// Grid for sampling the Lorentzian susceptibility: spans 40 linewidths
    /// on each side of the response center so the tail truncation of
    /// integral norms stays below one percent.
    pub fn for_susceptibility(gamma: f64, detuning: f64) -> Result<Self> {
        if !(gamma > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "decay rate must be positive, got {gamma}"
            )));
        }
        let half_span = 40.0 * gamma;
        let spacing = gamma / 64.0;
        // odd count: the response center and its half-width points are
        // sampled exactly
        let cells = (2.0 * half_span / spacing).round() as usize;
        Self::new(detuning, spacing, cells + 1)
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn count(&self) -> usize {
        self.count
    }

    /// Sample position for index `k`.
    pub fn sample(&self, k: usize) -> f64 {
        debug_assert!(k < self.count);
        self.center + (k as f64 - (self.count as f64 - 1.0) / 2.0) * self.spacing
    }

    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.sample(k))
    }

    /// Lower edge of the cell around sample `k`.
    pub fn cell_lo(&self, k: usize) -> f64 {
        self.sample(k) - 0.5 * self.spacing
    }

    /// Upper edge of the cell around sample `k`.
    pub fn cell_hi(&self, k: usize) -> f64 {
        self.sample(k) + 0.5 * self.spacing
    }

    /// Half-width of the cell-covered span around the grid center.
    pub fn half_span(&self) -> f64 {
        self.count as f64 * self.spacing / 2.0
    }

    /// Check that the grid covers `[-w/2, +w/2]` around its center.
    pub fn require_band(&self, w: f64) -> Result<()> {
        let required = w / 2.0;
        let actual = self.half_span();
        // Tolerate roundoff at exact alignment.
        if actual + 1e-12 * w < required {
            return Err(Error::GridTooNarrow {
                required_half_span: required,
                actual_half_span: actual,
            });
        }
        Ok(())
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.count == other.count
            && (self.spacing - other.spacing).abs() <= 1e-12 * self.spacing
            && (self.center - other.center).abs() <= 1e-9 * self.spacing
    }
}

/// Uniformly spaced time samples `t_start + k * dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    dt: f64,
    count: usize,
}

impl TimeGrid {
    pub fn new(t_start: f64, dt: f64, count: usize) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "time step must be positive and finite, got {dt}"
            )));
        }
        if count < 2 {
            return Err(Error::InvalidParameter(
                "time grid needs at least two samples".into(),
            ));
        }
        Ok(Self { t_start, dt, count })
    }

    /// Default window for excitation dynamics: `[-60/gamma, +30/gamma]`
    /// with `dt = min(2*pi/(8*w), 0.01/gamma)`, adjusted so that t = 0 is a
    /// sample. The long lead-in lets the rising collection kernel build up;
    /// the tail covers the free decay after the pulse.
    pub fn default_for(gamma: f64, w: f64) -> Result<Self> {
        if !(gamma > 0.0) || !(w > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gamma and bandwidth must be positive, got gamma={gamma}, w={w}"
            )));
        }
        let before = 60.0 / gamma;
        let after = 30.0 / gamma;
        let dt_raw = (std::f64::consts::TAU / (8.0 * w)).min(0.01 / gamma);
        let n_before = (before / dt_raw).ceil() as usize;
        let dt = before / n_before as f64;
        let n_after = (after / dt).ceil() as usize;
        Self::new(-before, dt, n_before + n_after + 1)
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn t_end(&self) -> f64 {
        self.sample(self.count - 1)
    }

    pub fn sample(&self, k: usize) -> f64 {
        debug_assert!(k < self.count);
        self.t_start + k as f64 * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|k| self.sample(k))
    }

    pub fn same_as(&self, other: &Self) -> bool {
        self.count == other.count
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
            && (self.t_start - other.t_start).abs() <= 1e-9 * self.dt
    }
}
