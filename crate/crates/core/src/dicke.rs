//! States of N two-level atoms restricted to the fully symmetric sector.
//!
//! A [`DickeState`] holds N+1 amplitudes `c_k`, where `k` counts atoms in
//! the excited level |e⟩ (collective index m = k − N/2). Atomic coherent
//! states are built in closed form from their product expansion
//!
//! ```text
//! |θ,φ⟩ = e^{iNφ} ∏_j ( cos(θ/2)|g_j⟩ + e^{−iφ} sin(θ/2)|e_j⟩ )
//! ```
//!
//! including the global phase e^{iNφ}, which the cat/GHZ phase identities
//! depend on. Angles are not range-restricted; (θ, φ) and (−θ, φ+π) etc.
//! describe the same ray, and the canonical range [0,π]×[−π,π) is only a
//! convention.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance;

/// Carrier for inner products and amplitudes.
pub type ComplexAmplitude = Complex64;

/// Largest N for which binomials are computed exactly in 64-bit integers.
pub const EXACT_BINOMIAL_MAX: usize = 60;

/// Number of two-level atoms, always at least one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomCount(usize);

impl AtomCount {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroAtoms);
        }
        Ok(AtomCount(n))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }

    /// Fails with a capacity error when N exceeds `max`.
    pub fn ensure_at_most(self, max: usize, what: &'static str) -> Result<Self> {
        if self.0 > max {
            return Err(Error::Capacity {
                what,
                n: self.0,
                max,
            });
        }
        Ok(self)
    }
}

impl fmt::Display for AtomCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Polar angles (θ, φ) of an atomic coherent state, in radians.
///
/// Also used for the second Ramsey zone, where the same pair is called (α, β).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentParams {
    theta: f64,
    phi: f64,
}

impl CoherentParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        check_finite("theta", theta)?;
        check_finite("phi", phi)?;
        Ok(CoherentParams { theta, phi })
    }

    #[inline]
    pub fn theta(&self) -> f64 {
        self.theta
    }

    #[inline]
    pub fn phi(&self) -> f64 {
        self.phi
    }
}

pub(crate) fn check_finite(name: &'static str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite { name, value })
    }
}

/// Pure state in the symmetric (j = N/2) sector, indexed by excitation count.
#[derive(Debug, Clone, PartialEq)]
pub struct DickeState {
    n: AtomCount,
    amps: Vec<Complex64>,
}

impl DickeState {
    /// Wraps externally supplied amplitudes `c_0..c_N`.
    ///
    /// The vector must have at least two entries and unit norm within the
    /// cross-representation tolerance.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::AmplitudeLength {
                got: amps.len(),
                expected: 2,
            });
        }
        let n = AtomCount::new(amps.len() - 1)?;
        let state = DickeState { n, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > tolerance::CROSS_REPRESENTATION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    /// The Dicke basis state with exactly `k` excitations.
    pub fn basis(n: AtomCount, k: usize) -> Result<Self> {
        if k > n.get() {
            return Err(Error::AmplitudeLength {
                got: k + 1,
                expected: n.get() + 1,
            });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); n.get() + 1];
        amps[k] = Complex64::new(1.0, 0.0);
        Ok(DickeState { n, amps })
    }

    /// Caller guarantees `amps.len() == n + 1`. Normalization is not checked.
    pub(crate) fn from_raw(n: AtomCount, amps: Vec<Complex64>) -> Self {
        debug_assert_eq!(amps.len(), n.get() + 1);
        DickeState { n, amps }
    }

    #[inline]
    pub fn n(&self) -> AtomCount {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn norm(&self) -> f64 {
        norm(self)
    }

    /// Excitation-number distribution |c_k|².
    pub fn populations(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Multiplies every amplitude by e^{iφ}.
    pub fn with_global_phase(mut self, phase: f64) -> Self {
        let factor = Complex64::from_polar(1.0, phase);
        self.amps.iter_mut().for_each(|c| *c *= factor);
        self
    }
}

/// Exact binomial coefficient C(n, k) for n ≤ 60.
pub fn binomial(n: usize, k: usize) -> u64 {
    assert!(
        n <= EXACT_BINOMIAL_MAX,
        "exact binomial limited to n <= {EXACT_BINOMIAL_MAX}"
    );
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as u64
}

/// sqrt(C(n,k)) · a^{n−k} · b^k for k = 0..=n, with a, b ≥ 0.
///
/// Exact integer binomials up to n = 60, log-space evaluation above.
fn product_magnitudes(n: usize, a: f64, b: f64) -> Vec<f64> {
    debug_assert!(a >= 0.0 && b >= 0.0);
    if n <= EXACT_BINOMIAL_MAX {
        return (0..=n)
            .map(|k| (binomial(n, k) as f64).sqrt() * a.powi((n - k) as i32) * b.powi(k as i32))
            .collect();
    }
    let mut ln_fact = vec![0.0f64; n + 1];
    for i in 1..=n {
        ln_fact[i] = ln_fact[i - 1] + (i as f64).ln();
    }
    let (ln_a, ln_b) = (a.ln(), b.ln());
    (0..=n)
        .map(|k| {
            let (ng, ne) = (n - k, k);
            if (ng > 0 && a == 0.0) || (ne > 0 && b == 0.0) {
                return 0.0;
            }
            let mut ln_mag = 0.5 * (ln_fact[n] - ln_fact[k] - ln_fact[n - k]);
            if ng > 0 {
                ln_mag += ng as f64 * ln_a;
            }
            if ne > 0 {
                ln_mag += ne as f64 * ln_b;
            }
            ln_mag.exp()
        })
        .collect()
}

/// Dicke expansion of ∏_j (g|g_j⟩ + e|e_j⟩): c_k = sqrt(C(N,k)) g^{N−k} e^k.
///
/// Normalized only when |g|² + |e|² = 1.
pub fn symmetric_product(n: AtomCount, g: Complex64, e: Complex64) -> DickeState {
    let n_atoms = n.get();
    let (arg_g, arg_e) = (g.arg(), e.arg());
    let amps = product_magnitudes(n_atoms, g.norm(), e.norm())
        .into_iter()
        .enumerate()
        .map(|(k, mag)| {
            Complex64::from_polar(mag, (n_atoms - k) as f64 * arg_g + k as f64 * arg_e)
        })
        .collect();
    DickeState::from_raw(n, amps)
}

/// Atomic coherent state |θ,φ⟩ in the Dicke basis, global phase e^{iNφ} included.
///
/// c_k = e^{iNφ} sqrt(C(N,k)) cos^{N−k}(θ/2) sin^k(θ/2) e^{−ikφ}
pub fn coherent_dicke(n: AtomCount, p: CoherentParams) -> DickeState {
    let n_atoms = n.get();
    let (s, c) = (0.5 * p.theta()).sin_cos();
    // Negative cos/sin contribute a phase π per power.
    let (c_flip, s_flip) = (c < 0.0, s < 0.0);
    let phi = p.phi();
    let mut amps: Vec<Complex64> = product_magnitudes(n_atoms, c.abs(), s.abs())
        .into_iter()
        .enumerate()
        .map(|(k, mag)| {
            let mut phase = (n_atoms - k) as f64 * phi;
            if c_flip && (n_atoms - k) % 2 == 1 {
                phase += PI;
            }
            if s_flip && k % 2 == 1 {
                phase += PI;
            }
            Complex64::from_polar(mag, phase)
        })
        .collect();
    if n_atoms > EXACT_BINOMIAL_MAX {
        // log-space magnitudes drift at the 1e-13 level for large N
        let scale = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt().recip();
        amps.iter_mut().for_each(|c| *c *= scale);
    }
    DickeState::from_raw(n, amps)
}

/// ⟨a|b⟩ = Σ_k conj(a_k) b_k.
pub fn overlap(a: &DickeState, b: &DickeState) -> Result<ComplexAmplitude> {
    if a.n != b.n {
        return Err(Error::SizeMismatch {
            left: a.n.get(),
            right: b.n.get(),
        });
    }
    Ok(a.amps
        .iter()
        .zip(&b.amps)
        .map(|(x, y)| x.conj() * y)
        .sum())
}

/// Analytic ⟨a|b⟩ between two coherent states of the same N.
///
/// e^{−iNβ_a} e^{iNφ_b} [cos(θ_a/2)cos(θ_b/2) + e^{i(β_a−φ_b)} sin(θ_a/2)sin(θ_b/2)]^N
pub fn coherent_overlap_closed_form(
    n: AtomCount,
    a: CoherentParams,
    b: CoherentParams,
) -> ComplexAmplitude {
    let n_atoms = n.get() as f64;
    let (sa, ca) = (0.5 * a.theta()).sin_cos();
    let (sb, cb) = (0.5 * b.theta()).sin_cos();
    let bracket =
        Complex64::new(ca * cb, 0.0) + Complex64::from_polar(sa * sb, a.phi() - b.phi());
    let prefactor = Complex64::from_polar(1.0, n_atoms * (b.phi() - a.phi()));
    prefactor * bracket.powu(n.get() as u32)
}

/// sqrt(Σ|c_k|²).
pub fn norm(s: &DickeState) -> f64 {
    s.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn atoms(n: usize) -> AtomCount {
        AtomCount::new(n).unwrap()
    }

    fn params(theta: f64, phi: f64) -> CoherentParams {
        CoherentParams::new(theta, phi).unwrap()
    }

    fn assert_amps(got: &[Complex64], want: &[Complex64], tol: f64) {
        assert_eq!(got.len(), want.len());
        for (k, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).norm() < tol, "k={k}: got {g}, want {w}");
        }
    }

    #[test]
    fn atom_count_rejects_zero() {
        assert_eq!(AtomCount::new(0), Err(Error::ZeroAtoms));
        assert!(matches!(
            atoms(25).ensure_at_most(20, "oracle"),
            Err(Error::Capacity { n: 25, max: 20, .. })
        ));
    }

    #[test]
    fn params_reject_non_finite() {
        assert!(CoherentParams::new(f64::NAN, 0.0).is_err());
        assert!(CoherentParams::new(0.0, f64::INFINITY).is_err());
        // out-of-canonical-range angles are fine
        assert!(CoherentParams::new(7.0, -12.0).is_ok());
    }

    #[test]
    fn binomials_are_exact() {
        assert_eq!(binomial(4, 2), 6);
        assert_eq!(binomial(60, 30), 118_264_581_564_861_424);
        assert_eq!(binomial(5, 6), 0);
        let row: u64 = (0..=20).map(|k| binomial(20, k)).sum();
        assert_eq!(row, 1 << 20);
    }

    #[test]
    fn coherent_all_ground() {
        let s = coherent_dicke(atoms(1), params(0.0, 0.0));
        assert_amps(s.amplitudes(), &[c(1.0, 0.0), c(0.0, 0.0)], 1e-15);
    }

    #[test]
    fn coherent_all_excited() {
        let s = coherent_dicke(atoms(2), params(PI, 0.0));
        assert_amps(
            s.amplitudes(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
            1e-15,
        );
    }

    #[test]
    fn coherent_equatorial_four_atoms() {
        // Frozen from the product-space expansion of (|g⟩ + i|e⟩)^{⊗4}/4.
        let s = coherent_dicke(atoms(4), params(FRAC_PI_2, -FRAC_PI_2));
        let r6 = 6f64.sqrt() / 4.0;
        assert_amps(
            s.amplitudes(),
            &[c(0.25, 0.0), c(0.0, 0.5), c(-r6, 0.0), c(0.0, -0.5), c(0.25, 0.0)],
            1e-12,
        );
    }

    #[test]
    fn negative_half_angle_cosine_flips_signs() {
        // θ = 3π: cos(θ/2) = 0, sin(θ/2) = −1
        let s = coherent_dicke(atoms(3), params(3.0 * PI, 0.0));
        assert!((s.amplitudes()[3] - c(-1.0, 0.0)).norm() < 1e-12);
        // θ and θ + 2π differ by the sign (−1)^N
        let a = coherent_dicke(atoms(3), params(0.8, 0.3));
        let b = coherent_dicke(atoms(3), params(0.8 + 2.0 * PI, 0.3));
        assert_amps(
            b.amplitudes(),
            &a.amplitudes().iter().map(|x| -x).collect::<Vec<_>>(),
            1e-12,
        );
    }

    #[test]
    fn large_n_coherent_state_is_normalized() {
        for n in [61, 200, 1000] {
            let s = coherent_dicke(atoms(n), params(1.3, -0.4));
            assert!((s.norm() - 1.0).abs() < 1e-12, "n={n}");
        }
        // the log path agrees with the exact path at the crossover
        let exact = coherent_dicke(atoms(60), params(0.9, 0.2));
        let logged = product_magnitudes(60, (0.45f64).cos(), (0.45f64).sin());
        for (k, m) in logged.iter().enumerate() {
            assert!((exact.amplitudes()[k].norm() - m).abs() < 1e-14);
        }
    }

    #[test]
    fn overlap_self_is_one() {
        let s = coherent_dicke(atoms(5), params(1.1, 0.3));
        let v = overlap(&s, &s).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn overlap_equatorial_antipodes_vanish() {
        for n in 1..=12 {
            let a = coherent_dicke(atoms(n), params(FRAC_PI_2, 0.0));
            let b = coherent_dicke(atoms(n), params(FRAC_PI_2, PI));
            assert!(overlap(&a, &b).unwrap().norm() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn overlap_size_mismatch() {
        let a = coherent_dicke(atoms(2), params(0.1, 0.2));
        let b = coherent_dicke(atoms(3), params(0.1, 0.2));
        assert_eq!(
            overlap(&a, &b),
            Err(Error::SizeMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        let cases = [
            (3, params(FRAC_PI_2, -FRAC_PI_2), params(FRAC_PI_2, 0.0)),
            (5, params(1.1, 0.3), params(0.7, -2.0)),
        ];
        for (n, a, b) in cases {
            let direct = overlap(&coherent_dicke(atoms(n), a), &coherent_dicke(atoms(n), b)).unwrap();
            let closed = coherent_overlap_closed_form(atoms(n), a, b);
            assert!((direct - closed).norm() < 1e-12, "n={n}: {direct} vs {closed}");
        }
    }

    #[test]
    fn closed_form_trivial_cases() {
        let a = params(0.4, 1.7);
        assert!((coherent_overlap_closed_form(atoms(7), a, a) - c(1.0, 0.0)).norm() < 1e-12);
        let beta = 0.37;
        let v = coherent_overlap_closed_form(
            atoms(6),
            params(FRAC_PI_2, beta),
            params(FRAC_PI_2, beta + PI),
        );
        assert!(v.norm() < 1e-12);
    }

    #[test]
    fn norm_cases() {
        let zero = DickeState::from_raw(atoms(2), vec![c(0.0, 0.0); 3]);
        assert_eq!(zero.norm(), 0.0);
        let s = DickeState::from_amplitudes(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn from_amplitudes_validates() {
        assert!(matches!(
            DickeState::from_amplitudes(vec![c(1.0, 0.0)]),
            Err(Error::AmplitudeLength { .. })
        ));
        assert!(matches!(
            DickeState::from_amplitudes(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized { .. })
        ));
        assert!(DickeState::basis(atoms(2), 3).is_err());
    }
}
