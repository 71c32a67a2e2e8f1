//! Frequency-domain overlap between photon spectra and the atomic response.
//!
//! The atom acts as a Lorentzian filter `chi(omega) = sqrt(gamma) /
//! (gamma/2 - i (omega - Delta))`; the normalized inner product of the
//! (decoded) photon spectrum with that filter measures how well the photon
//! matches the absorption mode. Band integrals against `chi` are computed
//! from its complex-log antiderivative, cell by cell, so piecewise-constant
//! spectra incur no quadrature error at all.

use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::grid::FrequencyGrid;
use crate::rng::{trial_rng, Stream};
use crate::signal::{sinc, PhaseCode, SpectralAmplitude};

/// `integral |chi|^2 domega` over the full line; used as the analytic norm
/// in the overlap functional.
const CHI_NORM_SQ: f64 = TAU;

/// Lorentzian susceptibility sampled on a frequency grid.
#[derive(Debug, Clone)]
pub struct Susceptibility {
    gamma: f64,
    detuning: f64,
    grid: FrequencyGrid,
    values: Vec<C64>,
}

impl Susceptibility {
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn detuning(&self) -> f64 {
        self.detuning
    }

    pub fn grid(&self) -> &FrequencyGrid {
        &self.grid
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// `sum |chi|^2 domega` over the grid; approaches 2*pi as the span grows
    /// (the default +-40 gamma span truncates about 0.8 percent of it).
    pub fn norm_sq(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() * self.grid.spacing()
    }
}

/// Pointwise susceptibility value.
fn chi(omega: f64, gamma: f64, delta: f64) -> C64 {
    gamma.sqrt() / C64::new(0.5 * gamma, -(omega - delta))
}

/// Antiderivative of `chi(omega - delta)`: `i sqrt(gamma) Ln(gamma/2 - i (omega - delta))`.
/// The argument stays in the right half-plane, so the principal branch is
/// continuous in `omega`.
fn chi_antideriv(omega: f64, gamma: f64, delta: f64) -> C64 {
    C64::new(0.0, gamma.sqrt()) * C64::new(0.5 * gamma, -(omega - delta)).ln()
}

/// Exact `integral_a^b chi(omega - delta) domega`.
fn chi_band_integral(a: f64, b: f64, gamma: f64, delta: f64) -> C64 {
    chi_antideriv(b, gamma, delta) - chi_antideriv(a, gamma, delta)
}

/// Sample the Lorentzian susceptibility on a grid that spans at least
/// twenty linewidths on each side of the response center.
pub fn lorentzian_chi(gamma: f64, delta: f64, grid: &FrequencyGrid) -> Result<Susceptibility> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "gamma must be positive and finite, got {gamma}"
        )));
    }
    let required = 20.0 * gamma;
    let lo_reach = delta - (grid.center() - grid.half_span());
    let hi_reach = (grid.center() + grid.half_span()) - delta;
    let actual = lo_reach.min(hi_reach);
    if actual < required {
        return Err(Error::GridTooNarrow {
            required_half_span: required,
            actual_half_span: actual,
        });
    }
    let values = grid.samples().map(|om| chi(om, gamma, delta)).collect();
    Ok(Susceptibility {
        gamma,
        detuning: delta,
        grid: grid.clone(),
        values,
    })
}

/// Normalized spectral-overlap functional.
#[derive(Debug, Clone, Copy)]
pub struct OverlapResult {
    /// `M = integral xi e^{i phi} chi(omega - Delta) / (|xi| * |chi|)`.
    pub m: C64,
    /// `|M|^2`, at most 1 up to quadrature tolerance.
    pub m_abs2: f64,
}

/// Overlap of a spectrum (with residual phase error `phi`) against the
/// atomic response detuned by `delta`.
///
/// The numerator integrates the sampled `xi e^{i phi}` cell by cell against
/// the exact Lorentzian antiderivative; the susceptibility norm is the
/// analytic `sqrt(2 pi)`.
pub fn spectral_overlap(
    xi: &SpectralAmplitude,
    phi: &[f64],
    delta: f64,
    gamma: f64,
) -> Result<OverlapResult> {
    if phi.len() != xi.values().len() {
        return Err(Error::GridMismatch {
            context: "residual phase length differs from spectrum grid size",
        });
    }
    let norm_sq = xi.norm_sq();
    if !(norm_sq > 0.0) {
        return Err(Error::ZeroNorm);
    }
    let grid = xi.grid();
    let mut acc = C64::new(0.0, 0.0);
    for (k, (v, &ph)) in xi.values().iter().zip(phi).enumerate() {
        if v.norm_sqr() == 0.0 && ph == 0.0 {
            continue;
        }
        let cell = chi_band_integral(grid.cell_lo(k), grid.cell_hi(k), gamma, delta);
        acc += v * C64::from_polar(1.0, ph) * cell;
    }
    let m = acc / (norm_sq.sqrt() * CHI_NORM_SQ.sqrt());
    Ok(OverlapResult {
        m,
        m_abs2: m.norm_sqr(),
    })
}

/// Perfectly decoded overlap of a rectangular spectrum, in closed form:
/// `|M(W, Delta)|^2 = gamma |I|^2 / (2 pi W)` with
/// `I = integral_{-W/2}^{W/2} domega / (gamma/2 - i(omega - Delta))`.
/// On resonance this reduces to `(2 gamma / (pi W)) atan^2(W / gamma)`.
pub fn bandwidth_match(w: f64, gamma: f64, delta: f64) -> f64 {
    assert!(
        w > 0.0 && gamma > 0.0,
        "bandwidth_match requires positive W and gamma"
    );
    let i = chi_band_integral(-0.5 * w, 0.5 * w, gamma, delta) / gamma.sqrt();
    gamma * i.norm_sqr() / (TAU * w)
}

/// Stationarity residual of the bandwidth optimum at `x = W/gamma`:
/// `atan(x) - 2x / (1 + x^2)`. The optimum is its nonzero root.
pub fn optimal_bandwidth_residual(x: f64) -> f64 {
    x.atan() - 2.0 * x / (1.0 + x * x)
}

/// Bandwidth maximizing the perfectly decoded overlap, found by bisection
/// of the stationarity equation on `[0.1, 10]` (the trivial root at zero is
/// outside the bracket). Roughly `1.39 * gamma`.
pub fn optimal_bandwidth(gamma: f64) -> f64 {
    assert!(gamma > 0.0, "optimal_bandwidth requires positive gamma");
    let mut lo = 0.1f64;
    let mut hi = 10.0f64;
    // residual is negative at the left bracket end, positive at the right
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        x = 0.5 * (lo + hi);
        let f = optimal_bandwidth_residual(x);
        if f.abs() < 1e-10 {
            break;
        }
        if f < 0.0 {
            lo = x;
        } else {
            hi = x;
        }
    }
    x * gamma
}

/// Per-chip decoded amplitudes of a unit-norm rectangular spectrum against
/// the atomic response: `a_j = (1/sqrt(W)) integral_{chip j} chi(omega - delta)`.
/// Chips follow the unified indexing (centers at `(j - (N0-1)/2) * W/N0`),
/// valid for either parity of `n0`.
pub fn lorentzian_chip_amplitudes(n0: usize, w: f64, gamma: f64, delta: f64) -> Vec<C64> {
    assert!(n0 >= 1 && w > 0.0 && gamma > 0.0);
    let chip = w / n0 as f64;
    let amp = 1.0 / w.sqrt();
    (0..n0)
        .map(|j| {
            let lo = -0.5 * w + j as f64 * chip;
            chi_band_integral(lo, lo + chip, gamma, delta) * amp
        })
        .collect()
}

/// Overlap of an encoded photon with the rising-exponential collection mode,
/// given per-chip amplitudes (the frequency-domain form of the transform
/// path): `<xi_e | xi_opt> = conj(sum_j e^{-i phi_j} a_j) / sqrt(2 pi)`.
pub(crate) fn overlap_from_chip_amplitudes(amps: &[C64], phases: &[f64]) -> C64 {
    debug_assert_eq!(amps.len(), phases.len());
    let mut acc = C64::new(0.0, 0.0);
    for (a, &p) in amps.iter().zip(phases) {
        acc += a * C64::from_polar(1.0, -p);
    }
    acc.conj() / CHI_NORM_SQ.sqrt()
}

/// Term-wise weights of the coded overlap for odd `n0`: entry `m` holds
/// `sqrt(gamma W / (2 pi)) / N0 * integral_0^inf e^{-(gamma/2 + i n Omega) u}
/// sinc(Omega u / 2) du` for `n = m - N`. A code's overlap with the optimal
/// mode is then `sum_m e^{+i phi_m} J_m`.
pub(crate) fn coded_overlap_weights(n0: usize, omega_chip: f64, gamma: f64) -> Result<Vec<C64>> {
    if n0 % 2 == 0 {
        return Err(Error::EvenCodeLength { n0 });
    }
    if !(omega_chip > 0.0) || !(gamma > 0.0) {
        return Err(Error::InvalidParameter(
            "chip width and gamma must be positive".into(),
        ));
    }
    let w = omega_chip * n0 as f64;
    // Truncation at u_max: the tail is bounded by
    // (2/(Omega u_max)) * (2/gamma) * e^{-gamma u_max / 2} < 1e-15/gamma
    // for u_max = 80/gamma over this parameter range.
    let u_max = 80.0 / gamma;
    let tol = 1e-12 / gamma;
    let half_n = (n0 / 2) as i64;
    let prefactor = (gamma * w / TAU).sqrt() / n0 as f64;
    let mut out = Vec::with_capacity(n0);
    for m in 0..n0 {
        let n = m as i64 - half_n;
        let osc = n as f64 * omega_chip;
        let f = |u: f64| {
            C64::from_polar((-0.5 * gamma * u).exp(), -osc * u) * sinc(0.5 * omega_chip * u)
        };
        let j = adaptive_simpson(&f, 0.0, u_max, tol);
        out.push(j * prefactor);
    }
    Ok(out)
}

/// Overlap `<xi_e | xi_opt>` of a closed-form encoded mode (odd `N0`) with
/// the time-reversed emission mode, evaluated term by term. Normalized so
/// that the all-zero code reproduces the uncoded overlap
/// `sqrt(2 gamma / (pi W)) atan(W / gamma)`.
pub fn coded_overlap(code: &PhaseCode, omega_chip: f64, gamma: f64) -> Result<C64> {
    if (code.chip_width() - omega_chip).abs() > 1e-9 * omega_chip {
        return Err(Error::InvalidParameter(format!(
            "chip width argument {omega_chip:.6e} disagrees with the code's {:.6e}",
            code.chip_width()
        )));
    }
    let weights = coded_overlap_weights(code.len(), omega_chip, gamma)?;
    let mut acc = C64::new(0.0, 0.0);
    for (wgt, &p) in weights.iter().zip(code.phases()) {
        acc += wgt * C64::from_polar(1.0, p);
    }
    Ok(acc)
}

/// Fractions of random binary codes whose overlap with the optimal mode is
/// nearly destroyed (power below one percent of the uncoded value), for an
/// odd code length and the next even one sharing the same chip width. The
/// odd side uses the term-wise closed form, the even side the transform
/// path in its frequency-domain form.
pub fn parity_comparison(
    n0_odd: usize,
    n0_even: usize,
    omega_chip: f64,
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n0_odd % 2 == 0 || n0_even != n0_odd + 1 {
        return Err(Error::InvalidParameter(format!(
            "parity comparison needs odd N0 and its successor, got ({n0_odd}, {n0_even})"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }

    // Odd parity: term-wise weights, one dot product per code.
    let odd_weights = coded_overlap_weights(n0_odd, omega_chip, gamma)?;
    let odd_reference: C64 = odd_weights.iter().sum();
    let odd_threshold = 0.01 * odd_reference.norm_sqr();

    // Even parity: per-chip response amplitudes (resonance on the boundary
    // between the two central chips).
    let w_even = omega_chip * n0_even as f64;
    let even_amps = lorentzian_chip_amplitudes(n0_even, w_even, gamma, 0.0);
    let zeros = vec![0.0; n0_even];
    let even_reference = overlap_from_chip_amplitudes(&even_amps, &zeros);
    let even_threshold = 0.01 * even_reference.norm_sqr();

    let mut odd_hits = 0usize;
    let mut even_hits = 0usize;
    for trial in 0..trials as u64 {
        let mut rng = trial_rng(seed, Stream::Parity, trial);
        let odd_code = PhaseCode::random_binary(n0_odd, omega_chip, &mut rng)?;
        let mut o = C64::new(0.0, 0.0);
        for (wgt, &p) in odd_weights.iter().zip(odd_code.phases()) {
            o += wgt * C64::from_polar(1.0, p);
        }
        if o.norm_sqr() < odd_threshold {
            odd_hits += 1;
        }

        let even_code = PhaseCode::random_binary(n0_even, omega_chip, &mut rng)?;
        let e = overlap_from_chip_amplitudes(&even_amps, even_code.phases());
        if e.norm_sqr() < even_threshold {
            even_hits += 1;
        }
    }
    Ok((
        odd_hits as f64 / trials as f64,
        even_hits as f64 / trials as f64,
    ))
}

/// Adaptive Simpson quadrature for complex integrands.
fn adaptive_simpson<F: Fn(f64) -> C64>(f: &F, a: f64, b: f64, tol: f64) -> C64 {
    // Seed with enough panels that every oscillation is seen before
    // adaptivity takes over.
    let panels = 64;
    let h = (b - a) / panels as f64;
    let mut acc = C64::new(0.0, 0.0);
    for k in 0..panels {
        let lo = a + k as f64 * h;
        let hi = lo + h;
        let fl = f(lo);
        let fm = f(0.5 * (lo + hi));
        let fh = f(hi);
        let whole = simpson(fl, fm, fh, h);
        acc += adapt(f, lo, hi, fl, fm, fh, whole, tol / panels as f64, 40);
    }
    acc
}

fn simpson(fl: C64, fm: C64, fh: C64, h: f64) -> C64 {
    (fl + 4.0 * fm + fh) * (h / 6.0)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> C64>(
    f: &F,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: u32,
) -> C64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let h = 0.5 * (b - a);
    let left = simpson(fa, flm, fm, h);
    let right = simpson(fm, frm, fb, h);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::TimeGrid;
    use crate::signal::{rect_spectrum, sinc_temporal_unit};
    use rand::Rng;
    use std::f64::consts::PI;

    const GAMMA: f64 = 1.0;

    #[test]
    fn chi_examples() {
        let grid = FrequencyGrid::for_susceptibility(GAMMA, 0.0).unwrap();
        let s = lorentzian_chi(GAMMA, 0.0, &grid).unwrap();
        // odd-count grid samples the center exactly
        let k0 = grid.count() / 2;
        assert!((grid.sample(k0)).abs() < 1e-12);
        assert!((s.values()[k0] - C64::new(2.0 / GAMMA.sqrt(), 0.0)).norm() < 1e-12);

        // half-width at half-maximum
        let k_half = k0 + 32; // gamma/2 at spacing gamma/64
        assert!((grid.sample(k_half) - 0.5 * GAMMA).abs() < 1e-12);
        let ratio = s.values()[k_half].norm_sqr() / s.values()[k0].norm_sqr();
        assert!((ratio - 0.5).abs() < 1e-12);

        // norm close to 2 pi, short by the documented ~0.8 percent tail
        let n = s.norm_sq();
        assert!((n - TAU).abs() < 0.01 * TAU, "norm {n}");

        // insufficient span rejected
        let narrow = FrequencyGrid::new(0.0, 0.1, 100).unwrap();
        assert!(matches!(
            lorentzian_chi(GAMMA, 0.0, &narrow),
            Err(Error::GridTooNarrow { .. })
        ));
    }

    #[test]
    fn overlap_saturates_for_conjugate_matched_spectrum() {
        // xi proportional to chi*: Cauchy-Schwarz equality
        let grid = FrequencyGrid::for_susceptibility(GAMMA, 0.0).unwrap();
        let values: Vec<C64> = grid.samples().map(|om| chi(om, GAMMA, 0.0).conj()).collect();
        let xi = SpectralAmplitude::from_values(grid.clone(), values, 1.0, 80.0 * GAMMA).unwrap();
        let phi = vec![0.0; grid.count()];
        let m = spectral_overlap(&xi, &phi, 0.0, GAMMA).unwrap();
        // the ~0.8 percent of |chi|^2 outside the grid is missing from the
        // numerator but only half as much from the normalization
        assert!((m.m.norm() - 1.0).abs() < 1e-2, "|M| = {}", m.m.norm());
        assert!(m.m_abs2 <= 1.0 + 1e-6);
    }

    #[test]
    fn overlap_invariant_under_constant_phase() {
        let w = 1.39 * GAMMA;
        let grid = FrequencyGrid::for_uncoded(w).unwrap();
        let xi = rect_spectrum(w, 1.0, &grid).unwrap();
        let zero = vec![0.0; grid.count()];
        let flat = vec![0.7; grid.count()];
        let m0 = spectral_overlap(&xi, &zero, 0.0, GAMMA).unwrap();
        let m1 = spectral_overlap(&xi, &flat, 0.0, GAMMA).unwrap();
        assert!((m0.m.norm() - m1.m.norm()).abs() < 1e-12);

        // mismatched mask is rejected
        assert!(spectral_overlap(&xi, &zero[..3], 0.0, GAMMA).is_err());
    }

    #[test]
    fn rect_overlap_matches_closed_form_at_optimum() {
        let w = 1.39 * GAMMA;
        let grid = FrequencyGrid::for_uncoded(w).unwrap();
        let xi = rect_spectrum(w, 1.0, &grid).unwrap();
        let phi = vec![0.0; grid.count()];
        let m = spectral_overlap(&xi, &phi, 0.0, GAMMA).unwrap();
        let analytic = 2.0 * GAMMA / (PI * w) * (w / GAMMA).atan().powi(2);
        assert!((m.m_abs2 - analytic).abs() < 1e-10 * analytic);
        assert!((m.m_abs2 - 0.411).abs() < 5e-3);
    }

    #[test]
    fn bandwidth_match_limits_and_consistency() {
        // small-W limit is linear in W
        let a = bandwidth_match(1e-4, GAMMA, 0.0) / 1e-4;
        let b = bandwidth_match(2e-4, GAMMA, 0.0) / 2e-4;
        assert!((a - b).abs() < 1e-2 * a);

        // large-W limit falls off as 1/W
        let c = bandwidth_match(100.0, GAMMA, 0.0) * 100.0;
        let d = bandwidth_match(200.0, GAMMA, 0.0) * 200.0;
        assert!((c - d).abs() < 2e-2 * c);

        // agreement with the sampled overlap across the sweep range
        for wg in [0.2, 0.5, 1.0, 1.39, 2.0, 4.0, 8.0] {
            let w = wg * GAMMA;
            let grid = FrequencyGrid::for_uncoded(w).unwrap();
            let xi = rect_spectrum(w, 1.0, &grid).unwrap();
            let phi = vec![0.0; grid.count()];
            let m = spectral_overlap(&xi, &phi, 0.0, GAMMA).unwrap();
            let analytic = bandwidth_match(w, GAMMA, 0.0);
            assert!(
                (m.m_abs2 - analytic).abs() < 5e-3 * analytic,
                "W/gamma = {wg}: sampled {} vs analytic {analytic}",
                m.m_abs2
            );
        }

        // detuning symmetry
        for d in [0.3, 1.0, 2.5] {
            let p = bandwidth_match(1.5, GAMMA, d);
            let m = bandwidth_match(1.5, GAMMA, -d);
            assert!((p - m).abs() < 1e-9 * p);
        }
    }

    #[test]
    fn optimal_bandwidth_examples() {
        let w_star = optimal_bandwidth(GAMMA);
        assert!((w_star / GAMMA - 1.39).abs() < 0.01, "W* = {w_star}");
        assert!(optimal_bandwidth_residual(w_star / GAMMA).abs() < 1e-10);
        // interior maximum
        let peak = bandwidth_match(w_star, GAMMA, 0.0);
        assert!(bandwidth_match(0.9 * w_star, GAMMA, 0.0) < peak);
        assert!(bandwidth_match(1.1 * w_star, GAMMA, 0.0) < peak);
        // scaling in gamma
        assert!((optimal_bandwidth(2.5) / 2.5 - w_star).abs() < 1e-9);
    }

    #[test]
    fn monotone_rise_and_fall_around_optimum() {
        let w_star = optimal_bandwidth(GAMMA);
        let mut prev = 0.0;
        let mut w = 0.2;
        while w < w_star {
            let v = bandwidth_match(w, GAMMA, 0.0);
            assert!(v > prev, "not increasing at W = {w}");
            prev = v;
            w += 0.05;
        }
        let mut w = w_star + 0.05;
        prev = bandwidth_match(w_star, GAMMA, 0.0);
        while w < 8.0 {
            let v = bandwidth_match(w, GAMMA, 0.0);
            assert!(v < prev, "not decreasing at W = {w}");
            prev = v;
            w += 0.2;
        }
    }

    #[test]
    fn coded_overlap_anchors() {
        let w = 1.5 * GAMMA;
        let n0 = 7usize;
        let chip = w / n0 as f64;

        // all-zero code reproduces the uncoded temporal overlap
        let zero = PhaseCode::all_zero(n0, chip).unwrap();
        let o = coded_overlap(&zero, chip, GAMMA).unwrap();
        let analytic = (2.0 * GAMMA / (PI * w)).sqrt() * (w / GAMMA).atan();
        assert!((o.re - analytic).abs() < 1e-6, "got {o}, want {analytic}");
        assert!(o.im.abs() < 1e-9);

        // and matches the sampled temporal overlap on a fine oracle grid
        // (coarser grids pick up half a spurious trapezoid sample at the
        // optimal mode's cliff)
        let tg = TimeGrid::new(-60.0, 1e-4, 610_001).unwrap();
        let sinc_mode = sinc_temporal_unit(w, &tg).unwrap();
        let opt = crate::atom::optimal_mode(GAMMA, &tg).unwrap();
        let sampled = crate::atom::temporal_overlap(&sinc_mode, &opt).unwrap();
        assert!((o - sampled).norm() < 1e-4);

        // flipping every phase by pi negates the overlap
        let flipped = PhaseCode::from_phases(vec![PI; n0], chip).unwrap();
        let of = coded_overlap(&flipped, chip, GAMMA).unwrap();
        assert!((of + o).norm() < 1e-9);
        assert!((of.norm() - o.norm()).abs() < 1e-9);

        // even length rejected
        let even = PhaseCode::all_zero(4, chip).unwrap();
        assert!(matches!(
            coded_overlap(&even, chip, GAMMA),
            Err(Error::EvenCodeLength { n0: 4 })
        ));
    }

    #[test]
    fn time_and_frequency_routes_agree_for_random_codes() {
        // term-wise time integrals vs the frequency-domain chip form
        let w = 1.5 * GAMMA;
        for n0 in [3usize, 7, 31] {
            let chip = w / n0 as f64;
            let weights = coded_overlap_weights(n0, chip, GAMMA).unwrap();
            let amps = lorentzian_chip_amplitudes(n0, w, GAMMA, 0.0);
            for trial in 0..5u64 {
                let mut rng = trial_rng(31, Stream::CodePair, trial);
                let code = PhaseCode::random_binary(n0, chip, &mut rng).unwrap();
                let via_time: C64 = weights
                    .iter()
                    .zip(code.phases())
                    .map(|(w, &p)| w * C64::from_polar(1.0, p))
                    .sum();
                let via_freq = overlap_from_chip_amplitudes(&amps, code.phases());
                assert!(
                    (via_time - via_freq).norm() < 1e-6,
                    "n0={n0} trial={trial}: {via_time} vs {via_freq}"
                );
            }
        }
    }

    #[test]
    fn ensemble_mean_coded_overlap_decreases_with_code_length() {
        let w = 1.5 * GAMMA;
        let trials = 200u64;
        let mut means = Vec::new();
        for &n0 in &[3usize, 7, 31] {
            let chip = w / n0 as f64;
            let weights = coded_overlap_weights(n0, chip, GAMMA).unwrap();
            let mut acc = 0.0;
            for trial in 0..trials {
                let mut rng = trial_rng(500 + n0 as u64, Stream::CodePair, trial);
                let code = PhaseCode::random_binary(n0, chip, &mut rng).unwrap();
                let o: C64 = weights
                    .iter()
                    .zip(code.phases())
                    .map(|(w, &p)| w * C64::from_polar(1.0, p))
                    .sum();
                acc += o.norm_sqr();
            }
            means.push(acc / trials as f64);
        }
        assert!(
            means[0] > means[1] && means[1] > means[2],
            "mean |overlap|^2 not decreasing: {means:?}"
        );
    }

    #[test]
    fn parity_comparison_basics() {
        let chip = 1.5 / 31.0;
        assert!(parity_comparison(31, 32, chip, GAMMA, 0, 1).is_err());
        assert!(parity_comparison(32, 33, chip, GAMMA, 10, 1).is_err());
        assert!(parity_comparison(31, 34, chip, GAMMA, 10, 1).is_err());

        let (o, e) = parity_comparison(31, 32, chip, GAMMA, 200, 11).unwrap();
        assert!((0.0..=1.0).contains(&o));
        assert!((0.0..=1.0).contains(&e));

        // single-trial ensembles degenerate to 0 or 1
        let (o1, e1) = parity_comparison(31, 32, chip, GAMMA, 1, 2).unwrap();
        assert!(o1 == 0.0 || o1 == 1.0);
        assert!(e1 == 0.0 || e1 == 1.0);

        // seeded determinism
        let again = parity_comparison(31, 32, chip, GAMMA, 200, 11).unwrap();
        assert_eq!((o.to_bits(), e.to_bits()), (again.0.to_bits(), again.1.to_bits()));
    }

    #[test]
    fn adaptive_simpson_handles_oscillatory_decay() {
        // integral_0^inf e^{-u/2} cos(5u) du = (1/2) / (1/4 + 25)
        let f = |u: f64| C64::new((-0.5 * u).exp() * (5.0 * u).cos(), 0.0);
        let got = adaptive_simpson(&f, 0.0, 80.0, 1e-12);
        let want = 0.5 / (0.25 + 25.0);
        assert!((got.re - want).abs() < 1e-10);
        assert!(got.im.abs() < 1e-12);
    }

    #[test]
    fn overlap_bounded_for_random_phase_masks() {
        let w = 1.5 * GAMMA;
        let grid = FrequencyGrid::for_coded(w, 31).unwrap();
        let xi = rect_spectrum(w, 1.0, &grid).unwrap();
        for trial in 0..20u64 {
            let mut rng = trial_rng(77, Stream::ChipPhase, trial);
            let phi: Vec<f64> = (0..grid.count()).map(|_| rng.gen_range(-PI..PI)).collect();
            let m = spectral_overlap(&xi, &phi, 0.0, GAMMA).unwrap();
            assert!(m.m_abs2 <= 1.0 + 1e-6);
        }
    }
}
