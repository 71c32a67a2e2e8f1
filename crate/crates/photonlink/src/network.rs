//! Link-level figures of merit for spectrally encoded photon channels:
//! phase-noise budgets, chip-flip degradation, multiuser cross-talk
//! statistics, signal-to-interference ratio, and aggregated design rules.

use num_complex::Complex64 as C64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::overlap::{bandwidth_match, lorentzian_chip_amplitudes, optimal_bandwidth};
use crate::rng::{trial_rng, Stream};

/// Residual spectral-phase noise model: zero-mean rms phase error over the
/// occupied band plus an independent per-chip sign-flip probability.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    pub sigma_phi: f64,
    pub flip_probability: f64,
}

impl NoiseModel {
    pub fn new(sigma_phi: f64, flip_probability: f64) -> Result<Self> {
        if !(sigma_phi >= 0.0) || !sigma_phi.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "sigma_phi must be >= 0, got {sigma_phi}"
            )));
        }
        if !(0.0..=1.0).contains(&flip_probability) {
            return Err(Error::InvalidParameter(format!(
                "flip probability must lie in [0, 1], got {flip_probability}"
            )));
        }
        Ok(Self {
            sigma_phi,
            flip_probability,
        })
    }
}

/// Complex per-chip decoded amplitudes of the desired user.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipAmplitudes {
    values: Vec<C64>,
}

impl ChipAmplitudes {
    pub fn new(values: Vec<C64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidParameter(
                "chip amplitudes need at least one chip".into(),
            ));
        }
        if values.iter().all(|v| v.norm_sqr() == 0.0) {
            return Err(Error::ZeroNorm);
        }
        Ok(Self { values })
    }

    /// Flat unit chips, the coherent-sum reference case.
    pub fn flat(n0: usize) -> Result<Self> {
        Self::new(vec![C64::new(1.0, 0.0); n0])
    }

    /// Chips weighted by the atomic response to a unit-norm rectangular
    /// spectrum of width `w`.
    pub fn lorentzian(n0: usize, w: f64, gamma: f64, delta: f64) -> Result<Self> {
        if n0 == 0 {
            return Err(Error::InvalidParameter("n0 must be >= 1".into()));
        }
        Self::new(lorentzian_chip_amplitudes(n0, w, gamma, delta))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Coherent sum `A0 = sum a_n`.
    pub fn coherent_sum(&self) -> C64 {
        self.values.iter().sum()
    }

    /// Incoherent power `sum |a_n|^2`.
    pub fn incoherent_power(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum()
    }
}

/// Monte-Carlo summary of a cross-talk or interference ensemble.
#[derive(Debug, Clone, Copy)]
pub struct CrosstalkStats {
    /// Sample mean of the complex statistic (vanishes as trials grow).
    pub mean_c: C64,
    /// Second moment about the analytic zero mean.
    pub var_c: f64,
    /// Sample mean of the power `|.|^2`.
    pub mean_power: f64,
    /// Standard error of `mean_power`.
    pub stderr: f64,
    pub trials: usize,
}

/// Mean-overlap suppression from zero-mean Gaussian residual phase of rms
/// `sigma` over the band: second-order cumulant factor `e^{-sigma^2}` on
/// the excitation probability.
pub fn phase_noise_factor(sigma_phi: f64) -> f64 {
    assert!(
        sigma_phi >= 0.0,
        "rms phase error must be nonnegative, got {sigma_phi}"
    );
    (-sigma_phi * sigma_phi).exp()
}

/// Exact mean interference power of random chip sign flips of probability
/// `p`: `<|A|^2> = (1-2p)^2 |sum a_n|^2 + 4p(1-p) sum |a_n|^2`.
pub fn chip_flip_power(a: &ChipAmplitudes, p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "flip probability out of range: {p}");
    let coherent = a.coherent_sum().norm_sqr();
    let incoherent = a.incoherent_power();
    let m = 1.0 - 2.0 * p;
    m * m * coherent + 4.0 * p * (1.0 - p) * incoherent
}

/// Large-N0 coherent approximation of the chip-flip degradation:
/// `P_e ~ P_e0 * (1 - 2p)^2`.
pub fn chip_flip_factor(p: f64) -> f64 {
    assert!((0.0..=1.0).contains(&p), "flip probability out of range: {p}");
    let m = 1.0 - 2.0 * p;
    m * m
}

/// Empirical statistics of the normalized discrete code correlation
/// `C = (1/N0) sum_n X_n` over i.i.d. random binary code pairs.
///
/// `var_c` is the second moment about the analytic zero mean, the quantity
/// that equals `1/N0` exactly for the Rademacher ensemble.
pub fn code_correlation_stats(n0: usize, trials: usize, seed: u64) -> Result<CrosstalkStats> {
    if n0 == 0 {
        return Err(Error::InvalidParameter("n0 must be >= 1".into()));
    }
    if trials < 100 {
        return Err(Error::InvalidParameter(format!(
            "need at least 100 trials for correlation statistics, got {trials}"
        )));
    }
    let samples: Vec<f64> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, Stream::CodePair, trial);
            let mut sum = 0i64;
            for _ in 0..n0 {
                // X_n = e^{i(theta_j - theta_k)} for independent binary codes
                let x = if rng.gen::<bool>() == rng.gen::<bool>() {
                    1i64
                } else {
                    -1i64
                };
                sum += x;
            }
            sum as f64 / n0 as f64
        })
        .collect();
    let n = trials as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let second_moment = samples.iter().map(|c| c * c).sum::<f64>() / n;
    let sample_var = samples.iter().map(|c| (c - mean) * (c - mean)).sum::<f64>() / (n - 1.0);
    Ok(CrosstalkStats {
        mean_c: C64::new(mean, 0.0),
        var_c: second_moment,
        mean_power: second_moment,
        stderr: (sample_var / n).sqrt(),
        trials,
    })
}

/// Monte-Carlo interference power at a node decoding user `j` while `k - 1`
/// other users transmit with independent random binary codes. Converges to
/// `(K - 1) * sum |a_n|^2`.
pub fn interference_power(
    a: &ChipAmplitudes,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<CrosstalkStats> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "interference needs at least two users, got K = {k}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    let n0 = a.len();
    let totals: Vec<C64> = (0..trials as u64)
        .into_par_iter()
        .map(|trial| {
            let mut rng = trial_rng(seed, Stream::Interference, trial);
            // desired user's binary signs
            let own: Vec<f64> = (0..n0)
                .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                .collect();
            let mut total = C64::new(0.0, 0.0);
            for _ in 1..k {
                for (n, amp) in a.values().iter().enumerate() {
                    let other = if rng.gen::<bool>() { 1.0 } else { -1.0 };
                    total += amp * (own[n] * other);
                }
            }
            total
        })
        .collect();
    let n = trials as f64;
    let mean_c = totals.iter().sum::<C64>() / n;
    let powers: Vec<f64> = totals.iter().map(|t| t.norm_sqr()).collect();
    let mean_power = powers.iter().sum::<f64>() / n;
    let var_power = powers
        .iter()
        .map(|p| (p - mean_power) * (p - mean_power))
        .sum::<f64>()
        / (n - 1.0).max(1.0);
    let second_moment = totals.iter().map(|t| t.norm_sqr()).sum::<f64>() / n;
    Ok(CrosstalkStats {
        mean_c,
        var_c: second_moment,
        mean_power,
        stderr: (var_power / n).sqrt(),
        trials,
    })
}

/// Signal-to-interference ratio at a decoding node:
/// `|sum a_n|^2 / ((K - 1) sum |a_n|^2)`; equals `N0 / (K - 1)` for flat
/// chips.
pub fn sir(a: &ChipAmplitudes, k: usize) -> Result<f64> {
    if k < 2 {
        return Err(Error::InvalidParameter(format!(
            "SIR needs at least one interferer, got K = {k}"
        )));
    }
    Ok(a.coherent_sum().norm_sqr() / ((k as f64 - 1.0) * a.incoherent_power()))
}

/// One code length of a cross-talk scaling study.
#[derive(Debug, Clone, Copy)]
pub struct ScalingPoint {
    pub n0: usize,
    /// Mean interfering power, normalized by the matched-code power.
    pub mean_power: f64,
    pub stderr: f64,
}

/// Cross-talk power versus code length, with the fitted log-log slope.
#[derive(Debug, Clone)]
pub struct ScalingResult {
    pub points: Vec<ScalingPoint>,
    /// Least-squares slope of `ln(mean_power)` against `ln(N0)`; the
    /// random-code ensemble average scales as `1/N0`, slope -1.
    pub slope: f64,
}

/// Bandwidth used for the cross-talk scaling study, in units of gamma: the
/// chips partition the same total band the excitation studies use.
const CROSSTALK_W_OVER_GAMMA: f64 = 1.5;

/// Monte-Carlo cross-talk power between two random binary codes sharing a
/// band of `1.5 * gamma`, for each listed (odd) code length, normalized by
/// the matched-code value.
pub fn crosstalk_scaling(
    n0_list: &[usize],
    gamma: f64,
    trials: usize,
    seed: u64,
) -> Result<ScalingResult> {
    if n0_list.len() < 3 {
        return Err(Error::InvalidParameter(format!(
            "crosstalk scaling needs at least three code lengths, got {}",
            n0_list.len()
        )));
    }
    for &n0 in n0_list {
        if n0 % 2 == 0 {
            return Err(Error::EvenCodeLength { n0 });
        }
    }
    if trials < 2 {
        return Err(Error::InvalidParameter("trials must be >= 2".into()));
    }
    let w = CROSSTALK_W_OVER_GAMMA * gamma;
    let points: Vec<ScalingPoint> = n0_list
        .iter()
        .map(|&n0| {
            let amps = lorentzian_chip_amplitudes(n0, w, gamma, 0.0);
            let matched: C64 = amps.iter().sum();
            let matched_power = matched.norm_sqr();
            let powers: Vec<f64> = (0..trials as u64)
                .into_par_iter()
                .map(|trial| {
                    let mut rng =
                        trial_rng(seed, Stream::Crosstalk, ((n0 as u64) << 40) | trial);
                    let mut acc = C64::new(0.0, 0.0);
                    for amp in &amps {
                        // chipwise code-difference sign of two random codes
                        let x = if rng.gen::<bool>() == rng.gen::<bool>() {
                            1.0
                        } else {
                            -1.0
                        };
                        acc += amp * x;
                    }
                    acc.norm_sqr() / matched_power
                })
                .collect();
            let n = trials as f64;
            let mean = powers.iter().sum::<f64>() / n;
            let var = powers.iter().map(|p| (p - mean) * (p - mean)).sum::<f64>() / (n - 1.0);
            ScalingPoint {
                n0,
                mean_power: mean,
                stderr: (var / n).sqrt(),
            }
        })
        .collect();

    let slope = log_log_slope(
        points.iter().map(|p| (p.n0 as f64, p.mean_power)),
    );
    Ok(ScalingResult { points, slope })
}

/// Least-squares slope of `ln y` against `ln x`.
fn log_log_slope(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Pass thresholds for the design rules. Defaults follow the guideline
/// ranges: SIR of at least 3, rms phase error at most 0.3 rad (10 percent
/// excitation loss), flip probability at most 5 percent, and user load at
/// most 0.3 of the code length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DesignRules {
    pub min_sir: f64,
    pub max_sigma_phi: f64,
    pub max_flip_probability: f64,
    pub max_load_fraction: f64,
}

impl Default for DesignRules {
    fn default() -> Self {
        Self {
            min_sir: 3.0,
            max_sigma_phi: 0.3,
            max_flip_probability: 0.05,
            max_load_fraction: 0.3,
        }
    }
}

/// Inputs to a link-budget evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BudgetInput {
    pub users: usize,
    pub n0: usize,
    pub noise: NoiseModel,
    pub w_over_gamma: f64,
    pub beta: f64,
}

/// Aggregated link budget: multiplicative excitation factor relative to an
/// ideal matched link, predicted SIR, and per-rule pass flags.
#[derive(Debug, Clone, Copy)]
pub struct LinkBudget {
    pub input: BudgetInput,
    /// `beta * M2(W)/M2(W*) * e^{-sigma^2} * (1 - 2p)^2`.
    pub predicted_pe_factor: f64,
    /// `N0 / (K - 1)`; infinite for a single user.
    pub predicted_sir: f64,
    pub pass_sir: bool,
    pub pass_phase_noise: bool,
    pub pass_chip_flip: bool,
    pub pass_addressability: bool,
}

impl LinkBudget {
    pub fn all_pass(&self) -> bool {
        self.pass_sir && self.pass_phase_noise && self.pass_chip_flip && self.pass_addressability
    }
}

/// Evaluate the design rules with the default thresholds.
pub fn design_report(input: &BudgetInput) -> Result<LinkBudget> {
    design_report_with_rules(input, &DesignRules::default())
}

/// Evaluate the design rules with custom thresholds.
pub fn design_report_with_rules(input: &BudgetInput, rules: &DesignRules) -> Result<LinkBudget> {
    if input.users < 1 {
        return Err(Error::InvalidParameter("need at least one user".into()));
    }
    if input.n0 < 1 {
        return Err(Error::InvalidParameter("code length must be >= 1".into()));
    }
    if !(input.beta > 0.0 && input.beta <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "beta must lie in (0, 1], got {}",
            input.beta
        )));
    }
    if !(input.w_over_gamma > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "W/gamma must be positive, got {}",
            input.w_over_gamma
        )));
    }
    NoiseModel::new(input.noise.sigma_phi, input.noise.flip_probability)?;

    let w_star = optimal_bandwidth(1.0);
    let bandwidth_factor = bandwidth_match(input.w_over_gamma, 1.0, 0.0)
        / bandwidth_match(w_star, 1.0, 0.0);
    let predicted_pe_factor = input.beta
        * bandwidth_factor
        * phase_noise_factor(input.noise.sigma_phi)
        * chip_flip_factor(input.noise.flip_probability);
    let predicted_sir = if input.users == 1 {
        f64::INFINITY
    } else {
        input.n0 as f64 / (input.users as f64 - 1.0)
    };

    Ok(LinkBudget {
        input: *input,
        predicted_pe_factor,
        predicted_sir,
        pass_sir: predicted_sir >= rules.min_sir,
        pass_phase_noise: input.noise.sigma_phi <= rules.max_sigma_phi,
        pass_chip_flip: input.noise.flip_probability <= rules.max_flip_probability,
        pass_addressability: input.users as f64 <= rules.max_load_fraction * input.n0 as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn phase_noise_factor_examples() {
        assert_eq!(phase_noise_factor(0.0), 1.0);
        // 0.32 rad rms costs about ten percent
        let f = phase_noise_factor(0.32);
        assert!((f - 0.90).abs() < 5e-3, "factor {f}");
        // strictly decreasing
        let mut prev = 1.0;
        let mut s = 0.05;
        while s < 2.0 {
            let v = phase_noise_factor(s);
            assert!(v < prev);
            prev = v;
            s += 0.05;
        }
    }

    #[test]
    fn chip_flip_power_examples() {
        let flat = ChipAmplitudes::flat(31).unwrap();
        // p = 0: fully coherent
        assert!((chip_flip_power(&flat, 0.0) - 961.0).abs() < 1e-12);
        // p = 1/2: coherent term vanishes
        assert!((chip_flip_power(&flat, 0.5) - 31.0).abs() < 1e-12);
        // flat ratio at p = 0.05
        let ratio = chip_flip_power(&flat, 0.05) / chip_flip_power(&flat, 0.0);
        let expected = 0.81 + 4.0 * 0.05 * 0.95 / 31.0;
        assert!((ratio - expected).abs() < 1e-12);
        assert!((ratio - 0.8161).abs() < 1e-4);
    }

    #[test]
    fn chip_flip_factor_examples_and_gap() {
        assert_eq!(chip_flip_factor(0.0), 1.0);
        assert!((chip_flip_factor(0.05) - 0.81).abs() < 1e-12);
        // exact-vs-approximate gap shrinks as 1/N0
        let p = 0.05;
        let gaps: Vec<f64> = [16usize, 32, 64]
            .iter()
            .map(|&n0| {
                let flat = ChipAmplitudes::flat(n0).unwrap();
                let exact = chip_flip_power(&flat, p) / chip_flip_power(&flat, 0.0);
                (exact - chip_flip_factor(p)).abs() / chip_flip_factor(p)
            })
            .collect();
        for pair in gaps.windows(2) {
            let halving = pair[0] / pair[1];
            assert!((halving - 2.0).abs() < 0.2, "gaps {gaps:?}");
        }
        // monotone decreasing on [0, 1/2]
        let mut prev = 1.0;
        let mut p = 0.01;
        while p <= 0.5 {
            let v = chip_flip_factor(p);
            assert!(v < prev);
            prev = v;
            p += 0.01;
        }
    }

    #[test]
    fn chip_flip_monte_carlo_matches_exact_power() {
        // MC over random flips agrees with the closed form within 3 SE
        let n0 = 31usize;
        let flat = ChipAmplitudes::flat(n0).unwrap();
        for (i, &p) in [0.0f64, 0.05, 0.1, 0.25, 0.5].iter().enumerate() {
            let trials = 10_000u64;
            let mut acc = 0.0;
            let mut acc2 = 0.0;
            for trial in 0..trials {
                let mut rng = trial_rng(40 + i as u64, Stream::ChipFlip, trial);
                let a: f64 = (0..n0)
                    .map(|_| if rng.gen::<f64>() < p { -1.0 } else { 1.0 })
                    .sum();
                let power = a * a;
                acc += power;
                acc2 += power * power;
            }
            let mean = acc / trials as f64;
            let var = acc2 / trials as f64 - mean * mean;
            let se = (var / trials as f64).sqrt();
            let exact = chip_flip_power(&flat, p);
            assert!(
                (mean - exact).abs() <= 3.0 * se.max(1e-9),
                "p={p}: MC {mean} vs exact {exact} (SE {se})"
            );
        }
    }

    #[test]
    fn correlation_stats_examples() {
        // single-chip codes: C in {-1, +1}, second moment exactly 1
        let s = code_correlation_stats(1, 400, 5).unwrap();
        assert_eq!(s.var_c, 1.0);
        assert!(s.mean_c.re.abs() < 3.0 / (400f64).sqrt());

        // variance law at N0 = 31
        let s = code_correlation_stats(31, 10_000, 6).unwrap();
        assert!((s.var_c - 1.0 / 31.0).abs() < 0.1 / 31.0, "var {}", s.var_c);
        // standard-error bound on the mean
        assert!(s.mean_c.norm() <= 3.0 / (10_000f64 * 31.0).sqrt());

        // too few trials rejected
        assert!(code_correlation_stats(31, 50, 1).is_err());
    }

    #[test]
    fn interference_power_examples() {
        let flat = ChipAmplitudes::flat(31).unwrap();
        let s = interference_power(&flat, 2, 10_000, 7).unwrap();
        assert!(
            (s.mean_power - 31.0).abs() <= 3.0 * s.stderr,
            "power {} (SE {})",
            s.mean_power,
            s.stderr
        );
        // zero-mean interference
        let amp_se = (s.mean_power / s.trials as f64).sqrt();
        assert!(s.mean_c.norm() <= 4.0 * amp_se);

        // doubling K-1 doubles the expected power
        let s4 = interference_power(&flat, 3, 10_000, 8).unwrap();
        assert!(
            (s4.mean_power - 2.0 * s.mean_power).abs() <= 3.0 * (s4.stderr + 2.0 * s.stderr),
            "K=3 power {}",
            s4.mean_power
        );

        assert!(interference_power(&flat, 1, 100, 1).is_err());
    }

    #[test]
    fn sir_examples() {
        let flat31 = ChipAmplitudes::flat(31).unwrap();
        assert_eq!(sir(&flat31, 2).unwrap(), 31.0);
        let flat63 = ChipAmplitudes::flat(63).unwrap();
        assert_eq!(sir(&flat63, 4).unwrap(), 21.0);

        // single occupied chip: coherent and incoherent sums coincide
        let mut vals = vec![C64::new(0.0, 0.0); 8];
        vals[0] = C64::new(1.0, 0.0);
        let single = ChipAmplitudes::new(vals).unwrap();
        assert!((sir(&single, 5).unwrap() - 0.25).abs() < 1e-15);

        assert!(sir(&flat31, 1).is_err());
    }

    #[test]
    fn crosstalk_scaling_slope_and_anchors() {
        let res = crosstalk_scaling(&[7, 15, 31, 63], 1.0, 400, 12).unwrap();
        assert!((res.slope + 1.0).abs() < 0.15, "slope {}", res.slope);
        for p in &res.points {
            assert!(p.mean_power > 0.0 && p.mean_power < 1.0);
        }
        // rejected inputs
        assert!(crosstalk_scaling(&[7, 15], 1.0, 400, 1).is_err());
        assert!(crosstalk_scaling(&[7, 16, 31], 1.0, 400, 1).is_err());
        // stderr shrinks roughly as 1/sqrt(trials)
        let coarse = crosstalk_scaling(&[7, 15, 31], 1.0, 500, 3).unwrap();
        let fine = crosstalk_scaling(&[7, 15, 31], 1.0, 2000, 3).unwrap();
        let ratio = coarse.points[0].stderr / fine.points[0].stderr;
        assert!((ratio - 2.0).abs() < 0.6, "stderr ratio {ratio}");
    }

    #[test]
    fn matched_code_normalization_is_unity() {
        // theta_j = theta_k means every X_n = +1: power equals the matched
        // reference by construction
        let amps = ChipAmplitudes::lorentzian(31, 1.5, 1.0, 0.0).unwrap();
        let matched = amps.coherent_sum().norm_sqr();
        let same: C64 = amps.values().iter().sum();
        assert!((same.norm_sqr() / matched - 1.0).abs() < 1e-12);
    }

    #[test]
    fn design_report_examples() {
        // ideal link: every factor is one, all rules pass
        let w_star = optimal_bandwidth(1.0);
        let ideal = BudgetInput {
            users: 2,
            n0: 31,
            noise: NoiseModel::new(0.0, 0.0).unwrap(),
            w_over_gamma: w_star,
            beta: 1.0,
        };
        let r = design_report(&ideal).unwrap();
        assert!((r.predicted_pe_factor - 1.0).abs() < 1e-12);
        assert_eq!(r.predicted_sir, 31.0);
        assert!(r.all_pass());

        // phase noise alone: ten percent loss, phase rule fails at 0.32 rad
        let noisy = BudgetInput {
            noise: NoiseModel::new(0.32, 0.0).unwrap(),
            ..ideal
        };
        let r = design_report(&noisy).unwrap();
        assert!((r.predicted_pe_factor - 0.90).abs() < 5e-3);
        assert!(!r.pass_phase_noise);

        // chip flips at the 5 percent tolerance: factor includes 0.81
        let flips = BudgetInput {
            noise: NoiseModel::new(0.0, 0.05).unwrap(),
            ..ideal
        };
        let r = design_report(&flips).unwrap();
        assert!((r.predicted_pe_factor - 0.81).abs() < 1e-9);
        assert!(r.pass_chip_flip);

        // overloaded node: SIR still passes but addressability fails
        let loaded = BudgetInput { users: 10, ..ideal };
        let r = design_report(&loaded).unwrap();
        assert!((r.predicted_sir - 31.0 / 9.0).abs() < 1e-12);
        assert!(r.pass_sir);
        assert!(!r.pass_addressability);
        assert!(!r.all_pass());

        // single user: no interferers
        let solo = BudgetInput { users: 1, ..ideal };
        let r = design_report(&solo).unwrap();
        assert!(r.predicted_sir.is_infinite());
        assert!(r.pass_sir);
    }

    #[test]
    fn phase_noise_monte_carlo_matches_cumulant_factor() {
        // Gaussian per-chip phases on Lorentzian-weighted chips, N0 = 63
        use rand_distr::{Distribution, StandardNormal};
        let amps = ChipAmplitudes::lorentzian(63, 1.5, 1.0, 0.0).unwrap();
        let reference = amps.coherent_sum().norm_sqr();
        let sigma = 0.3f64;
        let trials = 10_000u64;
        let mut acc = 0.0;
        for trial in 0..trials {
            let mut rng = trial_rng(90, Stream::ChipPhase, trial);
            let mut s = C64::new(0.0, 0.0);
            for a in amps.values() {
                let g: f64 = StandardNormal.sample(&mut rng);
                s += a * C64::from_polar(1.0, sigma * g);
            }
            acc += s.norm_sqr() / reference;
        }
        let mc = acc / trials as f64;
        let predicted = phase_noise_factor(sigma);
        assert!(
            (mc - predicted).abs() < 0.02 * predicted,
            "MC {mc} vs e^-sigma^2 {predicted}"
        );
    }

    #[test]
    fn invalid_chip_amplitudes_rejected() {
        assert!(ChipAmplitudes::new(vec![]).is_err());
        assert!(ChipAmplitudes::new(vec![C64::new(0.0, 0.0); 4]).is_err());
        assert!(NoiseModel::new(-0.1, 0.0).is_err());
        assert!(NoiseModel::new(0.1, 1.5).is_err());
    }
}
