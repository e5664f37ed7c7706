//! Ramsey detection of the cat state.
//!
//! The first zone prepares |θ,φ⟩, the cavity applies e^{−iτ S⁺S⁻}, and the
//! second zone with field parameters (α, β) followed by an all-ground
//! measurement projects onto the coherent state ⟨α,β|. The detection signal
//! is therefore |⟨α,β|ψ⟩|², swept over β at fixed α.
//!
//! Three channels are compared:
//! - coherent: the propagated state itself;
//! - mixture: the incoherent 50/50 mixture of the two cat branches (at
//!   τ ≡ π/2), or the Dicke-basis dephased state for any other τ;
//! - no cavity: the first-zone state with τ = 0.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::dicke::{
    check_finite, coherent_dicke, coherent_overlap_closed_form, overlap, AtomCount,
    CoherentParams, DickeState,
};
use crate::dynamics::{cat_branches, propagate, ScaledTime};
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::tolerance;

/// Second-zone field parameters (α, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RamseyParams {
    alpha: f64,
    beta: f64,
}

impl RamseyParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        check_finite("alpha", alpha)?;
        check_finite("beta", beta)?;
        Ok(RamseyParams { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn as_coherent(&self) -> CoherentParams {
        CoherentParams::new(self.alpha, self.beta).expect("finite by construction")
    }
}

/// Uniform β grid `min + i·(max − min)/steps`, i = 0..steps (max excluded).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaGrid {
    min: f64,
    max: f64,
    steps: usize,
}

impl BetaGrid {
    pub const DEFAULT_STEPS: usize = 256;

    pub fn new(min: f64, max: f64, steps: usize) -> Result<Self> {
        check_finite("beta_min", min)?;
        check_finite("beta_max", max)?;
        if steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        if max <= min {
            return Err(Error::InvalidGrid(format!(
                "beta_max ({max}) must exceed beta_min ({min})"
            )));
        }
        Ok(BetaGrid { min, max, steps })
    }

    /// 256 points over [−π, π).
    pub fn full_period() -> Self {
        BetaGrid {
            min: -PI,
            max: PI,
            steps: Self::DEFAULT_STEPS,
        }
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn points(&self) -> Vec<f64> {
        let step = (self.max - self.min) / self.steps as f64;
        (0..self.steps).map(|i| self.min + i as f64 * step).collect()
    }
}

/// |⟨α,β|s⟩|²: probability of finding every atom in |g⟩ after the second zone.
pub fn detection_probability(s: &DickeState, r: RamseyParams) -> f64 {
    let probe = coherent_dicke(s.n(), r.as_coherent());
    overlap(&probe, s)
        .expect("probe built with the state's atom count")
        .norm_sqr()
}

/// Detection probability for an unpropagated coherent input, in closed form.
pub fn coherent_detection_probability(n: AtomCount, source: CoherentParams, r: RamseyParams) -> f64 {
    coherent_overlap_closed_form(n, r.as_coherent(), source).norm_sqr()
}

/// A single-channel fringe: detection probability against β at fixed α.
#[derive(Debug, Clone, PartialEq)]
pub struct Fringe {
    pub alpha: f64,
    pub betas: Vec<f64>,
    pub probabilities: Vec<f64>,
}

pub fn fringe_sweep(s: &DickeState, alpha: f64, grid: BetaGrid) -> Result<Fringe> {
    fringe_sweep_with(Execution::default(), s, alpha, grid)
}

pub fn fringe_sweep_with(
    exec: Execution,
    s: &DickeState,
    alpha: f64,
    grid: BetaGrid,
) -> Result<Fringe> {
    check_finite("alpha", alpha)?;
    let betas = grid.points();
    let probabilities = exec.map_slice(&betas, |&beta| {
        detection_probability(s, RamseyParams { alpha, beta })
    });
    Ok(Fringe {
        alpha,
        betas,
        probabilities,
    })
}

/// Classical mixture of pure symmetric states.
#[derive(Debug, Clone, PartialEq)]
pub struct MixtureSpec {
    branches: Vec<(f64, DickeState)>,
}

impl MixtureSpec {
    /// Weights must be nonnegative and sum to one within 1e-12; all states
    /// must share the same atom count.
    pub fn new(branches: Vec<(f64, DickeState)>) -> Result<Self> {
        let Some((_, first)) = branches.first() else {
            return Err(Error::InvalidMixture("no branches".into()));
        };
        let n = first.n();
        if let Some((_, s)) = branches.iter().find(|(_, s)| s.n() != n) {
            return Err(Error::SizeMismatch {
                left: n.get(),
                right: s.n().get(),
            });
        }
        if let Some((w, _)) = branches.iter().find(|(w, _)| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidMixture(format!("bad weight {w}")));
        }
        let total: f64 = branches.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > tolerance::IDENTITY {
            return Err(Error::InvalidMixture(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(MixtureSpec { branches })
    }

    pub fn branches(&self) -> &[(f64, DickeState)] {
        &self.branches
    }

    pub fn n(&self) -> AtomCount {
        self.branches[0].1.n()
    }
}

/// Σ_i w_i |⟨α,β|ψ_i⟩|².
pub fn mixture_probability(m: &MixtureSpec, r: RamseyParams) -> f64 {
    m.branches
        .iter()
        .map(|(w, s)| w * detection_probability(s, r))
        .sum()
}

/// The mixture channel's state for a source |θ,φ⟩ and interaction time τ.
///
/// At τ ≡ π/2 this is the equal mixture of the two cat branches. Otherwise
/// the propagated state is dephased in the Dicke basis: weights |c_k|² on
/// the basis states |k⟩.
pub fn mixture_channel(n: AtomCount, source: CoherentParams, tau: ScaledTime) -> Result<MixtureSpec> {
    if tau.is_cat_time() {
        let [a, b] = cat_branches(n, source)?;
        return MixtureSpec::new(vec![
            (0.5, coherent_dicke(n, a)),
            (0.5, coherent_dicke(n, b)),
        ]);
    }
    let populations = propagate(&coherent_dicke(n, source), tau).populations();
    let total: f64 = populations.iter().sum();
    let branches = populations
        .iter()
        .enumerate()
        .filter(|(_, p)| **p > 0.0)
        .map(|(k, p)| Ok((p / total, DickeState::basis(n, k)?)))
        .collect::<Result<Vec<_>>>()?;
    MixtureSpec::new(branches)
}

/// Source parameters of a fringe comparison.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceParams {
    pub theta: f64,
    pub phi: f64,
    pub tau: f64,
}

/// Coherent, mixture and no-cavity fringes on one β grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FringeSeries {
    pub n: AtomCount,
    pub alpha: f64,
    pub source: SourceParams,
    pub betas: Vec<f64>,
    pub p_coherent: Vec<f64>,
    pub p_mixture: Vec<f64>,
    pub p_no_cavity: Vec<f64>,
}

/// Harmonic magnitudes 0..=N of each channel.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelHarmonics {
    pub coherent: Vec<f64>,
    pub mixture: Vec<f64>,
    pub no_cavity: Vec<f64>,
}

fn max_abs_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

impl FringeSeries {
    pub fn max_gap_coherent_mixture(&self) -> f64 {
        max_abs_gap(&self.p_coherent, &self.p_mixture)
    }

    pub fn max_gap_coherent_no_cavity(&self) -> f64 {
        max_abs_gap(&self.p_coherent, &self.p_no_cavity)
    }

    pub fn max_gap_mixture_no_cavity(&self) -> f64 {
        max_abs_gap(&self.p_mixture, &self.p_no_cavity)
    }

    /// Requires the grid to span exactly one 2π period.
    pub fn harmonics(&self) -> Result<ChannelHarmonics> {
        let h = self.n.get();
        Ok(ChannelHarmonics {
            coherent: harmonic_magnitudes(&self.betas, &self.p_coherent, h)?,
            mixture: harmonic_magnitudes(&self.betas, &self.p_mixture, h)?,
            no_cavity: harmonic_magnitudes(&self.betas, &self.p_no_cavity, h)?,
        })
    }
}

pub fn compare_channels(
    n: AtomCount,
    source: CoherentParams,
    tau: ScaledTime,
    alpha: f64,
    grid: BetaGrid,
) -> Result<FringeSeries> {
    compare_channels_with(Execution::default(), n, source, tau, alpha, grid)
}

pub fn compare_channels_with(
    exec: Execution,
    n: AtomCount,
    source: CoherentParams,
    tau: ScaledTime,
    alpha: f64,
    grid: BetaGrid,
) -> Result<FringeSeries> {
    check_finite("alpha", alpha)?;
    let prepared = coherent_dicke(n, source);
    let propagated = propagate(&prepared, tau);
    let norm = propagated.norm();
    if (norm - 1.0).abs() > tolerance::IDENTITY {
        return Err(Error::Internal(format!(
            "propagated state has norm {norm}"
        )));
    }
    let mixture = mixture_channel(n, source, tau)?;

    let betas = grid.points();
    let rows = exec.map_slice(&betas, |&beta| {
        let r = RamseyParams { alpha, beta };
        (
            detection_probability(&propagated, r),
            mixture_probability(&mixture, r),
            detection_probability(&prepared, r),
        )
    });
    let mut series = FringeSeries {
        n,
        alpha,
        source: SourceParams {
            theta: source.theta(),
            phi: source.phi(),
            tau: tau.value(),
        },
        betas,
        p_coherent: Vec::with_capacity(rows.len()),
        p_mixture: Vec::with_capacity(rows.len()),
        p_no_cavity: Vec::with_capacity(rows.len()),
    };
    for (coherent, mixed, bare) in rows {
        series.p_coherent.push(coherent);
        series.p_mixture.push(mixed);
        series.p_no_cavity.push(bare);
    }
    Ok(series)
}

/// |Σ_i p_i e^{−ihβ_i}| / len for h = 0..=max_harmonic.
///
/// The β grid must be uniform, cover one 2π period with the endpoint
/// excluded, and hold at least 2·max_harmonic + 2 points.
pub fn harmonic_magnitudes(betas: &[f64], series: &[f64], max_harmonic: usize) -> Result<Vec<f64>> {
    let len = series.len();
    if betas.len() != len {
        return Err(Error::InvalidGrid(format!(
            "{} grid points for {len} samples",
            betas.len()
        )));
    }
    if len < 2 * max_harmonic + 2 {
        return Err(Error::InvalidGrid(format!(
            "{len} samples cannot resolve harmonic {max_harmonic}"
        )));
    }
    let step = 2.0 * PI / len as f64;
    let uniform = betas
        .windows(2)
        .all(|w| ((w[1] - w[0]) - step).abs() <= 1e-9 * step.max(1.0));
    if !uniform {
        return Err(Error::InvalidGrid(
            "grid is not uniform over a single 2π period".into(),
        ));
    }
    Ok((0..=max_harmonic)
        .map(|h| {
            let sum: Complex64 = betas
                .iter()
                .zip(series)
                .map(|(&beta, &p)| Complex64::from_polar(p, -(h as f64) * beta))
                .sum();
            sum.norm() / len as f64
        })
        .collect())
}
