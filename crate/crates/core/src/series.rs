//! Expansion coefficients and normalization of generalized coherent states.
//!
//! A state family is described either by a nonlinearity function `f(n)`
//! (the deformed annihilator is `A = a f(n)`) or by a discrete spectrum
//! `e_n` of `H = A†A = n f(n)²`. In both cases the state is
//!
//! ```text
//! |z⟩ = N(|z|²)^{-1/2} Σ d_n zⁿ |n⟩,   d_n = [√n! ∏ f(i)]⁻¹ = [e_n!]^{-1/2}
//! ```
//!
//! Coefficients are stored as `ln|d_n|` plus a sign so that families with
//! factorially growing or shrinking coefficients stay representable.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance under which a spectrum's ground level counts as zero.
pub const GROUND_TOLERANCE: f64 = 1e-14;

/// Number of consecutive negligible terms required before truncating.
pub const TAIL_RUN: usize = 8;

/// A map from a nonnegative integer to a real value, possibly failing.
pub type Evaluator = Arc<dyn Fn(u64) -> Result<f64> + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpecKind {
    /// Family given by `f(n)`, defined for `n >= 1`.
    Nonlinearity,
    /// Family given by `e_n`, defined for `n >= 0` with `e_0 = 0`.
    Spectrum,
}

/// A generalized coherent-state family.
#[derive(Clone)]
pub struct StateSpec {
    kind: SpecKind,
    evaluator: Evaluator,
    radius: f64,
    label: String,
}

impl fmt::Debug for StateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StateSpec")
            .field("kind", &self.kind)
            .field("radius", &self.radius)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl StateSpec {
    pub fn new(kind: SpecKind, label: impl Into<String>, radius: f64, evaluator: Evaluator) -> Self {
        assert!(radius > 0.0, "radius of convergence must be positive");
        StateSpec {
            kind,
            evaluator,
            radius,
            label: label.into(),
        }
    }

    /// Family from an infallible nonlinearity function.
    pub fn nonlinearity<F>(label: impl Into<String>, radius: f64, f: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self::new(SpecKind::Nonlinearity, label, radius, Arc::new(move |n| Ok(f(n))))
    }

    /// Family from an infallible spectrum.
    pub fn spectrum<F>(label: impl Into<String>, radius: f64, e: F) -> Self
    where
        F: Fn(u64) -> f64 + Send + Sync + 'static,
    {
        Self::new(SpecKind::Spectrum, label, radius, Arc::new(move |n| Ok(e(n))))
    }

    pub fn kind(&self) -> SpecKind {
        self.kind
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn with_radius(mut self, radius: f64) -> Self {
        assert!(radius > 0.0, "radius of convergence must be positive");
        self.radius = radius;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Raw evaluator value: `f(n)` or `e_n` depending on the kind.
    pub fn value(&self, n: u64) -> Result<f64> {
        let v = (self.evaluator)(n)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { n })
        }
    }

    /// The nonlinearity function at `n >= 1`, whatever the kind.
    pub fn f_value(&self, n: u64) -> Result<f64> {
        match self.kind {
            SpecKind::Nonlinearity => self.value(n),
            SpecKind::Spectrum => f_from_spectrum(self.evaluator.clone())(n),
        }
    }

    /// Same family re-expressed through `f(n) = √(e_n/n)`.
    pub fn to_nonlinearity(&self) -> StateSpec {
        match self.kind {
            SpecKind::Nonlinearity => self.clone(),
            SpecKind::Spectrum => StateSpec {
                kind: SpecKind::Nonlinearity,
                evaluator: f_from_spectrum(self.evaluator.clone()),
                radius: self.radius,
                label: self.label.clone(),
            },
        }
    }

    /// Same family re-expressed through `e_n = n f(n)²`.
    pub fn to_spectrum(&self) -> StateSpec {
        match self.kind {
            SpecKind::Spectrum => self.clone(),
            SpecKind::Nonlinearity => StateSpec {
                kind: SpecKind::Spectrum,
                evaluator: spectrum_from_f(self.evaluator.clone()),
                radius: self.radius,
                label: self.label.clone(),
            },
        }
    }

    pub fn check_domain(&self, z_mag: f64) -> Result<()> {
        if !(z_mag >= 0.0) || !z_mag.is_finite() {
            return Err(Error::InvalidArgument(format!("|z| = {z_mag} is not a finite nonnegative number")));
        }
        if z_mag >= self.radius {
            return Err(Error::DomainExceeded {
                z_mag,
                radius: self.radius,
            });
        }
        Ok(())
    }
}

/// `n ↦ √(e_n / n)` for `n >= 1`.
pub fn f_from_spectrum(e: Evaluator) -> Evaluator {
    Arc::new(move |n| {
        if n == 0 {
            return Err(Error::InvalidArgument("f(n) is defined for n >= 1 only".into()));
        }
        let value = e(n)?;
        if value < 0.0 {
            return Err(Error::NegativeSpectrum { n, value });
        }
        Ok((value / n as f64).sqrt())
    })
}

/// `n ↦ n f(n)²`, with `e_0 = 0` by construction.
pub fn spectrum_from_f(f: Evaluator) -> Evaluator {
    Arc::new(move |n| {
        if n == 0 {
            return Ok(0.0);
        }
        let fv = f(n)?;
        Ok(n as f64 * fv * fv)
    })
}

/// Bounds the number of series terms kept.
///
/// The tail test runs on the normalization terms `|c_n|²`, while phase
/// quantities are linear in the amplitudes, so their truncation error is
/// of order `√tail_tol`. The default keeps that near `1e-12`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    pub tail_tol: f64,
    pub n_cap: usize,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            tail_tol: 1e-24,
            n_cap: 1024,
        }
    }
}

impl TruncationPolicy {
    pub fn new(tail_tol: f64, n_cap: usize) -> Result<Self> {
        if !(tail_tol > 0.0 && tail_tol < 1.0) {
            return Err(Error::InvalidArgument(format!("tail_tol = {tail_tol} must lie in (0, 1)")));
        }
        if n_cap < 2 {
            return Err(Error::InvalidArgument(format!("n_cap = {n_cap} must be at least 2")));
        }
        Ok(TruncationPolicy { tail_tol, n_cap })
    }
}

/// `ln|d_n|` and `sign(d_n)` for `n = 0 ..= n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    log_mag: Vec<f64>,
    sign: Vec<i8>,
}

impl CoefficientTable {
    pub fn n_max(&self) -> usize {
        self.log_mag.len() - 1
    }

    pub fn log_mag(&self) -> &[f64] {
        &self.log_mag
    }

    pub fn sign(&self) -> &[i8] {
        &self.sign
    }

    /// `d_n` as a plain float; may underflow to zero or overflow to infinity.
    pub fn coefficient(&self, n: usize) -> f64 {
        f64::from(self.sign[n]) * self.log_mag[n].exp()
    }

    fn truncated(mut self, n_terms: usize) -> Self {
        self.log_mag.truncate(n_terms);
        self.sign.truncate(n_terms);
        self
    }
}

/// Compensated running sum.
#[derive(Debug, Default, Clone, Copy)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Extends a coefficient table one index at a time.
struct CoefficientBuilder<'a> {
    spec: &'a StateSpec,
    log_sum: NeumaierSum,
    running_sign: i8,
    table: CoefficientTable,
}

impl<'a> CoefficientBuilder<'a> {
    fn new(spec: &'a StateSpec) -> Result<Self> {
        if spec.kind == SpecKind::Spectrum {
            let ground = spec.value(0)?;
            if ground.abs() > GROUND_TOLERANCE {
                return Err(Error::SpectrumGroundNotZero { value: ground });
            }
        }
        Ok(CoefficientBuilder {
            spec,
            log_sum: NeumaierSum::default(),
            running_sign: 1,
            table: CoefficientTable {
                log_mag: vec![0.0],
                sign: vec![1],
            },
        })
    }

    fn len(&self) -> usize {
        self.table.log_mag.len()
    }

    fn push_next(&mut self) -> Result<()> {
        let n = self.len() as u64;
        let value = self.spec.value(n)?;
        let step = match self.spec.kind {
            SpecKind::Nonlinearity => {
                if value == 0.0 {
                    return Err(Error::ZeroNonlinearity { n });
                }
                if value < 0.0 {
                    self.running_sign = -self.running_sign;
                }
                -(0.5 * (n as f64).ln() + value.abs().ln())
            }
            SpecKind::Spectrum => {
                if value <= 0.0 {
                    return Err(Error::NonpositiveSpectrum { n, value });
                }
                -0.5 * value.ln()
            }
        };
        self.log_sum.add(step);
        self.table.log_mag.push(self.log_sum.value());
        self.table.sign.push(self.running_sign);
        Ok(())
    }

    fn extend_to(&mut self, len: usize) -> Result<()> {
        while self.len() < len {
            self.push_next()?;
        }
        Ok(())
    }
}

/// Coefficients `d_0 ..= d_{n_max}` of the family.
pub fn build_coefficients(spec: &StateSpec, n_max: usize) -> Result<CoefficientTable> {
    let mut builder = CoefficientBuilder::new(spec)?;
    builder.extend_to(n_max + 1)?;
    Ok(builder.table)
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// `ln` of the `n`-th normalization term, `2 ln|d_n| + n ln|z|²`.
fn log_term(table: &CoefficientTable, n: usize, ln_z_mag2: f64) -> f64 {
    if n == 0 {
        2.0 * table.log_mag[0]
    } else {
        2.0 * table.log_mag[n] + n as f64 * ln_z_mag2
    }
}

/// `ln Σ_{n < n_terms} d_n² |z|^{2n}`, accumulated with log-sum-exp.
pub fn log_normalization(table: &CoefficientTable, z_mag2: f64, n_terms: usize) -> Result<f64> {
    if n_terms == 0 || n_terms > table.n_max() + 1 {
        return Err(Error::InvalidArgument(format!(
            "n_terms = {n_terms} must lie in 1..={}",
            table.n_max() + 1
        )));
    }
    if !(z_mag2 >= 0.0) {
        return Err(Error::InvalidArgument(format!("|z|² = {z_mag2} is negative")));
    }
    let ln_z_mag2 = z_mag2.ln();
    let logs: Vec<f64> = (0..n_terms).map(|n| log_term(table, n, ln_z_mag2)).collect();
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !max.is_finite() {
        let n = logs.iter().position(|l| !l.is_finite()).unwrap_or(0);
        return Err(Error::Overflow { n: n as u64 });
    }
    let scaled: f64 = logs.iter().map(|l| (l - max).exp()).sum();
    Ok(max + scaled.ln())
}

/// `N(|z|²) = Σ_{n < n_terms} d_n² |z|^{2n}`.
pub fn normalization(table: &CoefficientTable, z_mag2: f64, n_terms: usize) -> Result<f64> {
    let log_norm = log_normalization(table, z_mag2, n_terms)?;
    let value = log_norm.exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow { n: n_terms as u64 })
    }
}

/// Coefficient table holding exactly the terms needed at `|z| = z_mag`.
pub fn truncated_coefficients(
    spec: &StateSpec,
    z_mag: f64,
    policy: &TruncationPolicy,
) -> Result<CoefficientTable> {
    spec.check_domain(z_mag)?;
    let mut builder = CoefficientBuilder::new(spec)?;
    if z_mag == 0.0 {
        return Ok(builder.table);
    }
    let ln_z_mag2 = 2.0 * z_mag.ln();
    let ln_tol = policy.tail_tol.ln();
    let mut log_partial = f64::NEG_INFINITY;
    for n_terms in 1.. {
        if n_terms + TAIL_RUN > policy.n_cap {
            return Err(Error::NotConverged {
                z_mag,
                n_cap: policy.n_cap,
            });
        }
        builder.extend_to(n_terms + TAIL_RUN)?;
        let table = &builder.table;
        log_partial = log_add_exp(log_partial, log_term(table, n_terms - 1, ln_z_mag2));
        let bound = ln_tol + log_partial;
        if (n_terms..n_terms + TAIL_RUN).all(|k| log_term(table, k, ln_z_mag2) < bound) {
            return Ok(builder.table.truncated(n_terms));
        }
    }
    unreachable!()
}

/// Smallest number of terms whose next [`TAIL_RUN`] terms are all below
/// `tail_tol` times the partial sum.
pub fn choose_truncation(spec: &StateSpec, z_mag: f64, policy: &TruncationPolicy) -> Result<usize> {
    truncated_coefficients(spec, z_mag, policy).map(|t| t.n_max() + 1)
}

/// Signed amplitudes `N^{-1/2} d_n |z|ⁿ` of the state rotated to real positive `z`.
pub fn real_amplitudes(spec: &StateSpec, z_mag: f64, policy: &TruncationPolicy) -> Result<Vec<f64>> {
    let table = truncated_coefficients(spec, z_mag, policy)?;
    let n_terms = table.n_max() + 1;
    let log_norm = log_normalization(&table, z_mag * z_mag, n_terms)?;
    let ln_z = z_mag.ln();
    Ok((0..n_terms)
        .map(|n| {
            let log_amp = if n == 0 {
                table.log_mag[0] - 0.5 * log_norm
            } else {
                table.log_mag[n] + n as f64 * ln_z - 0.5 * log_norm
            };
            f64::from(table.sign[n]) * log_amp.exp()
        })
        .collect())
}

/// Number-state amplitudes `c_n = N^{-1/2} d_n zⁿ`.
pub fn state_amplitudes(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<Vec<Complex64>> {
    let phase = z.arg();
    Ok(real_amplitudes(spec, z.norm(), policy)?
        .into_iter()
        .enumerate()
        .map(|(n, a)| a * Complex64::from_polar(1.0, n as f64 * phase))
        .collect())
}

/// Largest component of `A c - z c` over the retained terms.
pub fn eigen_residual(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let c = state_amplitudes(spec, z, policy)?;
    let mut worst = 0.0_f64;
    for n in 0..c.len().saturating_sub(1) {
        let k = (n + 1) as u64;
        let lowered = c[n + 1] * ((k as f64).sqrt() * spec.f_value(k)?);
        worst = worst.max((lowered - z * c[n]).norm());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn harmonic() -> StateSpec {
        StateSpec::nonlinearity("harmonic", f64::INFINITY, |_| 1.0)
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn harmonic_coefficients_are_inverse_root_factorials() {
        let t = build_coefficients(&harmonic(), 2).unwrap();
        assert_eq!(t.n_max(), 2);
        assert_eq!(t.log_mag()[0], 0.0);
        assert_eq!(t.sign(), &[1, 1, 1]);
        assert!(close(t.log_mag()[2], -0.5 * 2f64.ln(), 1e-15));
        assert!(close(t.coefficient(2), 0.70711, 1e-5));
    }

    #[test]
    fn isotonic_third_coefficient() {
        let spec = StateSpec::spectrum("iso", f64::INFINITY, |n| 4.0 * n as f64);
        let t = build_coefficients(&spec, 3).unwrap();
        assert!(close(t.coefficient(3), 1.0 / 384f64.sqrt(), 1e-15));
        assert!(close(t.coefficient(3), 0.051031, 1e-6));
    }

    #[test]
    fn penson_solomon_matches_direct_coefficient() {
        let q: f64 = 0.5;
        let spec = StateSpec::nonlinearity("ps", f64::INFINITY, move |n| q.powi(1 - n as i32));
        let t = build_coefficients(&spec, 10).unwrap();
        let mut fact = 1.0;
        for n in 0..=10u32 {
            if n > 0 {
                fact *= n as f64;
            }
            let direct = q.powi((n * (n.max(1) - 1) / 2) as i32) / fact.sqrt();
            assert!(close(t.coefficient(n as usize), direct, 1e-14 * direct.max(1e-300)));
        }
        assert!(close(t.coefficient(3), 0.051031, 1e-6));
    }

    #[test]
    fn coefficient_errors() {
        let zero_f = StateSpec::nonlinearity("z", f64::INFINITY, |n| if n == 3 { 0.0 } else { 1.0 });
        assert_eq!(build_coefficients(&zero_f, 5), Err(Error::ZeroNonlinearity { n: 3 }));

        let bad_e = StateSpec::spectrum("e", f64::INFINITY, |n| n as f64 - 2.0 + if n == 0 { 2.0 } else { 0.0 });
        assert!(matches!(
            build_coefficients(&bad_e, 5),
            Err(Error::NonpositiveSpectrum { n: 1, .. })
        ));

        let lifted = StateSpec::spectrum("e", f64::INFINITY, |n| n as f64 + 1.0);
        assert!(matches!(
            build_coefficients(&lifted, 5),
            Err(Error::SpectrumGroundNotZero { .. })
        ));

        let tiny_ground = StateSpec::spectrum("e", f64::INFINITY, |n| if n == 0 { 1e-15 } else { n as f64 });
        assert!(build_coefficients(&tiny_ground, 5).is_ok());
    }

    #[test]
    fn negative_f_flips_signs() {
        let spec = StateSpec::nonlinearity("alt", f64::INFINITY, |n| if n % 2 == 0 { -1.0 } else { 1.0 });
        let t = build_coefficients(&spec, 4).unwrap();
        assert_eq!(t.sign(), &[1, 1, -1, -1, 1]);
    }

    #[test]
    fn normalization_basics() {
        let t = build_coefficients(&harmonic(), 40).unwrap();
        assert_eq!(normalization(&t, 0.0, 41).unwrap(), 1.0);
        assert!(close(normalization(&t, 1.0, 41).unwrap(), std::f64::consts::E, 1e-14));
        assert!(normalization(&t, 1.0, 42).is_err());
    }

    #[test]
    fn normalization_overflow_is_reported() {
        let spec = StateSpec::nonlinearity("tiny", f64::INFINITY, |_| 1e-300);
        let t = build_coefficients(&spec, 5).unwrap();
        assert!(matches!(normalization(&t, 1.0, 6), Err(Error::Overflow { .. })));
    }

    #[test]
    fn gilmore_perelomov_normalization_closed_form() {
        let kappa = 3.0;
        let spec = StateSpec::nonlinearity("gp", 1.0, move |n| 1.0 / (n as f64 + 2.0 * kappa - 1.0).sqrt());
        let t = build_coefficients(&spec, 199).unwrap();
        let got = normalization(&t, 0.25, 200).unwrap();
        // d_n² = Γ(n+2κ) / (n! Γ(2κ)), so N = (1-|z|²)^{-2κ}.
        let expected = 0.75f64.powf(-2.0 * kappa);
        assert!(close(got, expected, 1e-12 * expected));
    }

    #[test]
    fn truncation_rules() {
        let policy = TruncationPolicy::default();
        assert_eq!(choose_truncation(&harmonic(), 0.0, &policy).unwrap(), 1);

        let policy = TruncationPolicy::new(1e-12, 512).unwrap();
        let n = choose_truncation(&harmonic(), 2.0, &policy).unwrap();
        assert!(n <= 60, "N = {n}");
        let t = build_coefficients(&harmonic(), n - 1).unwrap();
        let norm = normalization(&t, 4.0, n).unwrap();
        assert!(close(norm, 4f64.exp(), 1e-12 * 4f64.exp()));

        let hydrogen = StateSpec::spectrum("h", 1.0, |n| 1.0 - 1.0 / ((n + 1) as f64).powi(2));
        let policy = TruncationPolicy::new(1e-12, 512).unwrap();
        match choose_truncation(&hydrogen, 0.999, &policy) {
            Err(Error::NotConverged { n_cap: 512, .. }) => {}
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn policy_validation() {
        assert!(TruncationPolicy::new(1.0, 10).is_err());
        assert!(TruncationPolicy::new(0.0, 10).is_err());
        assert!(TruncationPolicy::new(1e-10, 1).is_err());
        assert!(TruncationPolicy::new(1e-10, 2).is_ok());
    }

    #[test]
    fn conversions_between_f_and_spectrum() {
        let iso: Evaluator = Arc::new(|n| Ok(4.0 * n as f64));
        let f = f_from_spectrum(iso);
        for n in 1..10 {
            assert_eq!(f(n).unwrap(), 2.0);
        }
        let pt: Evaluator = Arc::new(|n| Ok(n as f64 * (n as f64 + 5.0)));
        assert_eq!(f_from_spectrum(pt)(4).unwrap(), 3.0);
        let h: Evaluator = Arc::new(|n| Ok(1.0 - 1.0 / ((n + 1) as f64).powi(2)));
        assert!(close(f_from_spectrum(h)(1).unwrap(), 0.75f64.sqrt(), 1e-15));
        let neg: Evaluator = Arc::new(|_| Ok(-1.0));
        assert!(matches!(f_from_spectrum(neg)(2), Err(Error::NegativeSpectrum { n: 2, .. })));

        let one: Evaluator = Arc::new(|_| Ok(1.0));
        let e = spectrum_from_f(one);
        assert_eq!(e(0).unwrap(), 0.0);
        assert_eq!(e(7).unwrap(), 7.0);
        let bg: Evaluator = Arc::new(|n| Ok((n as f64 + 5.0).sqrt()));
        assert!(close(spectrum_from_f(bg)(2).unwrap(), 14.0, 1e-13));
    }

    #[test]
    fn amplitudes_and_domain() {
        let policy = TruncationPolicy::default();
        let vac = state_amplitudes(&harmonic(), Complex64::new(0.0, 0.0), &policy).unwrap();
        assert_eq!(vac, vec![Complex64::new(1.0, 0.0)]);

        let c = state_amplitudes(&harmonic(), Complex64::new(1.0, 0.0), &policy).unwrap();
        let mut fact = 1.0;
        for (n, cn) in c.iter().enumerate() {
            if n > 0 {
                fact *= n as f64;
            }
            assert!(close(cn.norm_sqr(), (-1f64).exp() / fact, 1e-14));
        }

        let gp = StateSpec::nonlinearity("gp", 1.0, |n| 1.0 / (n as f64 + 5.0).sqrt());
        assert!(matches!(
            state_amplitudes(&gp, Complex64::new(1.5, 0.0), &policy),
            Err(Error::DomainExceeded { .. })
        ));
    }

    #[test]
    fn eigen_residuals() {
        let policy = TruncationPolicy::default();
        assert_eq!(eigen_residual(&harmonic(), Complex64::new(0.0, 0.0), &policy).unwrap(), 0.0);
        assert!(eigen_residual(&harmonic(), Complex64::new(1.0, 0.5), &policy).unwrap() < 1e-10);
        let pt = StateSpec::spectrum("pt", f64::INFINITY, |n| n as f64 * (n as f64 + 5.0));
        assert!(eigen_residual(&pt, Complex64::new(2.0, 0.0), &policy).unwrap() < 1e-10);
    }

    #[test]
    fn pt_coefficient_ratios_recover_f() {
        // d_{n-1}/d_n/√n = f(n), checked against the explicit product of e_i.
        let pt = StateSpec::spectrum("pt", f64::INFINITY, |n| n as f64 * (n as f64 + 5.0));
        let t = build_coefficients(&pt, 12).unwrap();
        let mut factorial = 1.0;
        for n in 1..=12usize {
            factorial *= (n * (n + 5)) as f64;
            assert!(close(t.coefficient(n), factorial.sqrt().recip(), 1e-14 * t.coefficient(n)));
            let ratio = t.coefficient(n - 1) / t.coefficient(n) / (n as f64).sqrt();
            let f = ((n + 5) as f64).sqrt();
            assert!(close(ratio, f, 1e-12 * f));
        }
    }
}
