//! Pegg–Barnett phase distribution, number and phase variances, and the
//! number/phase squeezing parameters of a generalized coherent state.
//!
//! Everything is evaluated from the closed forms of the `s → ∞` limit. With
//! normalized amplitudes `a_n` of the state rotated to real `z` and the
//! lag sums `r_m = Σ_k a_{k+m} a_k`,
//!
//! ```text
//! P(θ)       = (1/2π) (1 + 2 Σ_m r_m cos m(θ - arg z))
//! ⟨(Δφ)²⟩    = π²/3 + 4 Σ_m r_m (-1)^m / m²
//! ⟨[n, φ]⟩/i = 1 - 2π P(θ₀)
//! S          = 2 ⟨(Δ·)²⟩ / |⟨[n, φ]⟩| - 1
//! ```
//!
//! Moments are taken in the frame centred on the mean phase `arg z`: the
//! variance window is `[arg z - π, arg z + π)` and the commutator uses the
//! window start `θ₀` measured from `arg z`. For real `z ≥ 0` this is the
//! plain window `[θ₀, θ₀ + 2π)`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{real_amplitudes, StateSpec, TruncationPolicy};

/// Commutator magnitudes below this leave the squeezing parameters undefined.
pub const COMMUTATOR_FLOOR: f64 = 1e-12;

/// Width in `z` to which crossover roots are bisected.
pub const CROSSOVER_TOL: f64 = 1e-4;

/// A 2π-long phase window `[theta0, theta0 + 2π)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseWindow {
    pub theta0: f64,
}

impl Default for PhaseWindow {
    fn default() -> Self {
        PhaseWindow { theta0: -PI }
    }
}

impl PhaseWindow {
    pub fn new(theta0: f64) -> Self {
        PhaseWindow { theta0 }
    }

    pub fn end(&self) -> f64 {
        self.theta0 + 2.0 * PI
    }

    /// `grid_size` equally spaced points from the window start to its end, both included.
    pub fn grid(&self, grid_size: usize) -> Vec<f64> {
        let last = (grid_size - 1) as f64;
        (0..grid_size)
            .map(|i| self.theta0 + 2.0 * PI * (i as f64 / last))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseDistribution {
    pub window: PhaseWindow,
    pub thetas: Vec<f64>,
    pub values: Vec<f64>,
    pub z: Complex64,
    pub spec_label: String,
}

impl PhaseDistribution {
    /// Trapezoid-rule integral of the samples over the window.
    pub fn trapezoid_integral(&self) -> f64 {
        trapezoid(&self.thetas, &self.values)
    }
}

pub(crate) fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (x[1] - x[0]) * (y[0] + y[1]))
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingReport {
    pub z: Complex64,
    pub var_n: f64,
    pub var_phi: f64,
    /// `|⟨[n, φ_θ]⟩|`.
    pub commutator_mag: f64,
    /// `None` when the commutator vanishes.
    pub s_n: Option<f64>,
    pub s_phi: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Squeezing {
    /// Number squeezing parameter `S_n`.
    Number,
    /// Phase squeezing parameter `S_φ`.
    Phase,
}

impl SqueezingReport {
    pub fn parameter(&self, which: Squeezing) -> Option<f64> {
        match which {
            Squeezing::Number => self.s_n,
            Squeezing::Phase => self.s_phi,
        }
    }
}

/// Truncated state with its lag sums, shared by all the moment formulas.
#[derive(Debug, Clone)]
struct PhaseState {
    /// Signed amplitudes of the state rotated to real `z`.
    amplitudes: Vec<f64>,
    /// `lags[m - 1] = Σ_k a_{k+m} a_k` for `m >= 1`.
    lags: Vec<f64>,
    phase: f64,
}

impl PhaseState {
    fn new(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<Self> {
        let amplitudes = real_amplitudes(spec, z.norm(), policy)?;
        let len = amplitudes.len();
        let lags = (1..len)
            .map(|m| (0..len - m).map(|k| amplitudes[k + m] * amplitudes[k]).sum())
            .collect();
        Ok(PhaseState {
            amplitudes,
            lags,
            phase: z.arg(),
        })
    }

    fn lag_terms(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.lags.iter().enumerate().map(|(i, &r)| ((i + 1) as f64, r))
    }

    /// `P(θ)` of the unrotated state.
    fn density(&self, theta: f64) -> f64 {
        let cross: f64 = self.lag_terms().map(|(m, r)| r * (m * (theta - self.phase)).cos()).sum();
        (1.0 + 2.0 * cross) / (2.0 * PI)
    }

    /// `1 - 2π P(θ₀)` with `θ₀` measured from the mean phase.
    fn commutator(&self, theta0: f64) -> f64 {
        let cross: f64 = self.lag_terms().map(|(m, r)| r * (m * theta0).cos()).sum();
        0.0 - 2.0 * cross
    }

    fn phase_variance(&self) -> f64 {
        let cross: f64 = self
            .lag_terms()
            .map(|(m, r)| {
                let alternating = if (m as u64).is_multiple_of(2) { r } else { -r };
                alternating / (m * m)
            })
            .sum();
        PI * PI / 3.0 + 4.0 * cross
    }

    /// First moment over `[-π, π)` of the rotated state shifted by `offset`.
    fn first_moment(&self, offset: f64) -> f64 {
        let cross: f64 = self
            .lag_terms()
            .map(|(m, r)| {
                let alternating = if (m as u64).is_multiple_of(2) { r } else { -r };
                alternating * (m * offset).sin() / m
            })
            .sum();
        0.0 - 2.0 * cross
    }

    fn number_variance(&self) -> f64 {
        let probs = self.amplitudes.iter().map(|a| a * a);
        let mean: f64 = probs.clone().enumerate().map(|(n, p)| n as f64 * p).sum();
        probs
            .enumerate()
            .map(|(n, p)| {
                let d = n as f64 - mean;
                d * d * p
            })
            .sum()
    }
}

/// Samples `P(θ)` on `grid_size` points spanning the window.
pub fn phase_distribution(
    spec: &StateSpec,
    z: Complex64,
    grid_size: usize,
    window: PhaseWindow,
    policy: &TruncationPolicy,
) -> Result<PhaseDistribution> {
    if grid_size < 2 {
        return Err(Error::InvalidArgument(format!("grid_size = {grid_size} must be at least 2")));
    }
    let state = PhaseState::new(spec, z, policy)?;
    let thetas = window.grid(grid_size);
    let values = thetas.iter().map(|&t| state.density(t)).collect();
    Ok(PhaseDistribution {
        window,
        thetas,
        values,
        z,
        spec_label: spec.label().to_string(),
    })
}

/// `P(θ)` at a single angle.
pub fn phase_density(spec: &StateSpec, z: Complex64, theta: f64, policy: &TruncationPolicy) -> Result<f64> {
    Ok(PhaseState::new(spec, z, policy)?.density(theta))
}

/// Phase variance about the mean phase.
pub fn phase_variance(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    Ok(PhaseState::new(spec, z, policy)?.phase_variance())
}

/// `⟨n²⟩ - ⟨n⟩²`.
pub fn number_variance(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    Ok(PhaseState::new(spec, z, policy)?.number_variance())
}

/// `⟨[n, φ_θ]⟩ / i = 1 - 2π P(θ₀)`.
pub fn commutator_expectation(
    spec: &StateSpec,
    z: Complex64,
    window: PhaseWindow,
    policy: &TruncationPolicy,
) -> Result<f64> {
    Ok(PhaseState::new(spec, z, policy)?.commutator(window.theta0))
}

/// Mean phase: `arg z` plus the first moment of the rotated state.
pub fn mean_phase(spec: &StateSpec, z: Complex64, policy: &TruncationPolicy) -> Result<f64> {
    let state = PhaseState::new(spec, z, policy)?;
    Ok(state.phase + state.first_moment(0.0))
}

pub fn squeezing_report(
    spec: &StateSpec,
    z: Complex64,
    window: PhaseWindow,
    policy: &TruncationPolicy,
) -> Result<SqueezingReport> {
    let state = PhaseState::new(spec, z, policy)?;
    let var_n = state.number_variance();
    let var_phi = state.phase_variance();
    let commutator_mag = state.commutator(window.theta0).abs();
    let squeeze = |var: f64| (commutator_mag >= COMMUTATOR_FLOOR).then(|| 2.0 * var / commutator_mag - 1.0);
    Ok(SqueezingReport {
        z,
        var_n,
        var_phi,
        commutator_mag,
        s_n: squeeze(var_n),
        s_phi: squeeze(var_phi),
    })
}

/// Points `z_lo, z_lo + step, …` strictly below `z_hi`, then `z_hi`.
pub fn scan_grid(z_lo: f64, z_hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut i = 0u64;
    loop {
        let z = z_lo + i as f64 * step;
        if z >= z_hi - 1e-12 * step {
            break;
        }
        out.push(z);
        i += 1;
    }
    out.push(z_hi);
    out
}

/// Sign changes of `S_n` or `S_φ` along real `z ∈ [z_lo, z_hi]`, each
/// bisected to within [`CROSSOVER_TOL`].
#[allow(clippy::too_many_arguments)]
pub fn crossover_scan(
    spec: &StateSpec,
    which: Squeezing,
    z_lo: f64,
    z_hi: f64,
    step: f64,
    window: PhaseWindow,
    policy: &TruncationPolicy,
) -> Result<Vec<f64>> {
    if !(step > 0.0 && z_lo > 0.0 && z_lo < z_hi && z_hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "scan needs 0 < z_lo < z_hi and step > 0 (got z_lo = {z_lo}, z_hi = {z_hi}, step = {step})"
        )));
    }
    spec.check_domain(z_hi)?;
    let param = |z: f64| -> Result<Option<f64>> {
        Ok(squeezing_report(spec, Complex64::new(z, 0.0), window, policy)?.parameter(which))
    };

    let grid = scan_grid(z_lo, z_hi, step);
    let values = grid.iter().map(|&z| param(z)).collect::<Result<Vec<_>>>()?;
    let mut roots = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for (&z, value) in grid.iter().zip(values) {
        let Some(v) = value else { continue };
        if v == 0.0 {
            roots.push(z);
            prev = None;
            continue;
        }
        if let Some((pz, pv)) = prev {
            if pv.signum() != v.signum() {
                roots.push(bisect(&param, pz, pv, z)?);
            }
        }
        prev = Some((z, v));
    }
    Ok(roots)
}

fn bisect(param: &impl Fn(f64) -> Result<Option<f64>>, mut lo: f64, lo_value: f64, mut hi: f64) -> Result<f64> {
    let lo_sign = lo_value.signum();
    while hi - lo >= CROSSOVER_TOL {
        let mid = 0.5 * (lo + hi);
        match param(mid)? {
            Some(0.0) => return Ok(mid),
            Some(v) if v.signum() == lo_sign => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }
    Ok(0.5 * (lo + hi))
}
