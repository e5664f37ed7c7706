//! Evolution under the dispersive collective Hamiltonian H = η S⁺S⁻.
//!
//! H is diagonal in the symmetric Dicke basis with S⁺S⁻|k⟩ = k(N−k+1)|k⟩,
//! so the propagator U(τ) = e^{−iτ S⁺S⁻} (τ = ηt) is a per-amplitude phase.
//! The spectrum is integral, which makes U 2π-periodic in τ. At τ = π/2 an
//! equatorial coherent state becomes a two-component cat state, which for
//! θ = π/2, φ = −π/2 is the N-atom GHZ state.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::dicke::{
    check_finite, coherent_dicke, overlap, symmetric_product, AtomCount, CoherentParams,
    DickeState,
};
use crate::error::{Error, Result};
use crate::oracle::{self, FullState, MAX_FULL_ATOMS};
use crate::par::Execution;
use crate::tolerance;

/// Dimensionless interaction time τ = ηt.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct ScaledTime(f64);

impl ScaledTime {
    pub const ZERO: ScaledTime = ScaledTime(0.0);
    /// τ = π/2, where the cat state forms.
    pub const HALF_PI: ScaledTime = ScaledTime(FRAC_PI_2);
    /// τ = 2π, one full recurrence.
    pub const FULL_PERIOD: ScaledTime = ScaledTime(2.0 * PI);

    pub fn new(tau: f64) -> Result<Self> {
        check_finite("tau", tau)?;
        Ok(ScaledTime(tau))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// True when τ ≡ π/2 (mod 2π) to within 1e-12.
    pub fn is_cat_time(self) -> bool {
        wrap_phase(self.0 - FRAC_PI_2).abs() < tolerance::IDENTITY
    }
}

/// Maps an angle into (−π, π].
pub fn wrap_phase(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// Eigenvalue of S⁺S⁻ on the Dicke state with `k` excitations.
#[inline]
pub fn collective_eigenvalue(n: AtomCount, k: usize) -> f64 {
    (k * (n.get() - k + 1)) as f64
}

/// Applies e^{−iτ S⁺S⁻}: c_k → e^{−iτ k(N−k+1)} c_k.
pub fn propagate(s: &DickeState, tau: ScaledTime) -> DickeState {
    let n = s.n();
    let amps = s
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::from_polar(1.0, -tau.value() * collective_eigenvalue(n, k)))
        .collect();
    DickeState::from_raw(n, amps)
}

/// ∏_j (|g_j⟩ + i|e_j⟩)/√2, built from its product form.
pub fn zheng_initial(n: AtomCount) -> DickeState {
    symmetric_product(
        n,
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(0.0, FRAC_1_SQRT_2),
    )
}

/// The two coherent-state branches of the cat state grown from |θ,φ⟩:
/// |θ, φ − π(N−1)/2⟩ and |θ, φ − π(N−3)/2⟩.
pub fn cat_branches(n: AtomCount, p: CoherentParams) -> Result<[CoherentParams; 2]> {
    let atoms = n.get() as f64;
    Ok([
        CoherentParams::new(p.theta(), p.phi() - PI * (atoms - 1.0) / 2.0)?,
        CoherentParams::new(p.theta(), p.phi() - PI * (atoms - 3.0) / 2.0)?,
    ])
}

/// (e^{−iNπ/2}/√2)[e^{iπ/4}|θ,φ−π(N−1)/2⟩ + e^{−iπ/4}|θ,φ−π(N−3)/2⟩].
///
/// Returned without renormalization. Fails if the norm deviates from one by
/// more than 1e-9, which would mean the branches interfere. The branches
/// differ in φ by π, so their overlap (−cosθ)^N is real and the ±π/4 phases
/// cancel the cross term; in practice the check holds for every (θ, φ).
pub fn cat_state(n: AtomCount, p: CoherentParams) -> Result<DickeState> {
    let [first, second] = cat_branches(n, p)?;
    let (a, b) = (coherent_dicke(n, first), coherent_dicke(n, second));
    let global = -(n.get() as f64) * FRAC_PI_2;
    let wa = Complex64::from_polar(FRAC_1_SQRT_2, global + FRAC_PI_4);
    let wb = Complex64::from_polar(FRAC_1_SQRT_2, global - FRAC_PI_4);
    let amps = a
        .amplitudes()
        .iter()
        .zip(b.amplitudes())
        .map(|(x, y)| wa * x + wb * y)
        .collect();
    let cat = DickeState::from_raw(n, amps);
    let norm = cat.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(Error::CatNotNormalized { norm });
    }
    Ok(cat)
}

/// The GHZ state in the product space:
/// (e^{iπ/4}/√2){∏_j (|g_j⟩ + (−i)^N|e_j⟩)/√2 − i ∏_j (|g_j⟩ − (−i)^N|e_j⟩)/√2}.
pub fn ghz_state(n: AtomCount) -> Result<FullState> {
    n.ensure_at_most(MAX_FULL_ATOMS, "GHZ product-space state")?;
    let sign = minus_i_pow(n.get());
    let g = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let plus = oracle::product_state(n, &vec![(g, sign * FRAC_1_SQRT_2); n.get()])?;
    let minus = oracle::product_state(n, &vec![(g, -sign * FRAC_1_SQRT_2); n.get()])?;
    let front = Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4);
    let minus_i = Complex64::new(0.0, -1.0);
    let amps = plus
        .amplitudes()
        .iter()
        .zip(minus.amplitudes())
        .map(|(p, m)| front * (p + minus_i * m))
        .collect();
    FullState::from_amplitudes(n, amps)
}

/// (−i)^N, exact.
fn minus_i_pow(n: usize) -> Complex64 {
    match n % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, -1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, 1.0),
    }
}

/// The GHZ state projected into the symmetric sector.
pub fn ghz_dicke(n: AtomCount) -> Result<DickeState> {
    Ok(oracle::project(&ghz_state(n)?)?.0)
}

/// Numerical check of the cat/GHZ identity for one N.
///
/// Three states are compared: the Zheng state propagated to τ = π/2, the
/// cat construction at θ = π/2, φ = −π/2, and the projected GHZ state.
/// Phases are in (−π, π].
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceReport {
    pub n: AtomCount,
    pub fidelity_prop_vs_cat: f64,
    pub fidelity_prop_vs_ghz: f64,
    pub fidelity_cat_vs_ghz: f64,
    /// arg⟨ghz|cat⟩, expected to be −Nπ/2.
    pub phase_cat_over_ghz: f64,
    /// arg⟨ghz|propagated⟩. Recorded, not asserted.
    pub phase_prop_over_ghz: f64,
    /// arg⟨cat|propagated⟩. Recorded, not asserted.
    pub phase_prop_over_cat: f64,
    /// −Nπ/2 wrapped into (−π, π].
    pub expected_phase: f64,
    /// max over pairs of ‖x − e^{iφ_rel} y‖_∞ after aligning global phases.
    pub max_residual: f64,
}

impl EquivalenceReport {
    /// |measured − expected| for the cat-over-GHZ phase, modulo 2π.
    pub fn phase_error(&self) -> f64 {
        wrap_phase(self.phase_cat_over_ghz - self.expected_phase).abs()
    }

    /// Smallest of the three fidelities.
    pub fn min_fidelity(&self) -> f64 {
        self.fidelity_prop_vs_cat
            .min(self.fidelity_prop_vs_ghz)
            .min(self.fidelity_cat_vs_ghz)
    }

    /// Residual below `tolerance` and the phase within `max(tolerance, 1e-9)`.
    pub fn passes(&self, tolerance: f64) -> bool {
        self.max_residual < tolerance && self.phase_error() < tolerance.max(tolerance::PHASE)
    }
}

fn aligned_residual(x: &DickeState, y: &DickeState, yx: Complex64) -> f64 {
    let rot = Complex64::from_polar(1.0, yx.arg());
    x.amplitudes()
        .iter()
        .zip(y.amplitudes())
        .map(|(a, b)| (a - rot * b).norm())
        .fold(0.0, f64::max)
}

pub fn equivalence_report(n: AtomCount) -> Result<EquivalenceReport> {
    n.ensure_at_most(MAX_FULL_ATOMS, "equivalence check")?;
    let propagated = propagate(&zheng_initial(n), ScaledTime::HALF_PI);
    let norm = propagated.norm();
    if (norm - 1.0).abs() > tolerance::IDENTITY {
        return Err(Error::Internal(format!(
            "propagated state has norm {norm} for n = {n}"
        )));
    }
    let cat = cat_state(n, CoherentParams::new(FRAC_PI_2, -FRAC_PI_2)?)?;
    let ghz = ghz_dicke(n)?;

    let cat_prop = overlap(&cat, &propagated)?;
    let ghz_prop = overlap(&ghz, &propagated)?;
    let ghz_cat = overlap(&ghz, &cat)?;

    let max_residual = aligned_residual(&propagated, &cat, cat_prop)
        .max(aligned_residual(&propagated, &ghz, ghz_prop))
        .max(aligned_residual(&cat, &ghz, ghz_cat));

    Ok(EquivalenceReport {
        n,
        fidelity_prop_vs_cat: cat_prop.norm_sqr(),
        fidelity_prop_vs_ghz: ghz_prop.norm_sqr(),
        fidelity_cat_vs_ghz: ghz_cat.norm_sqr(),
        phase_cat_over_ghz: wrap_phase(ghz_cat.arg()),
        phase_prop_over_ghz: wrap_phase(ghz_prop.arg()),
        phase_prop_over_cat: wrap_phase(cat_prop.arg()),
        expected_phase: wrap_phase(-(n.get() as f64) * FRAC_PI_2),
        max_residual,
    })
}

/// Reports for N = 1..=max_n, in order.
pub fn equivalence_sweep(max_n: AtomCount) -> Result<Vec<EquivalenceReport>> {
    equivalence_sweep_with(Execution::default(), max_n)
}

pub fn equivalence_sweep_with(exec: Execution, max_n: AtomCount) -> Result<Vec<EquivalenceReport>> {
    max_n.ensure_at_most(MAX_FULL_ATOMS, "equivalence check")?;
    exec.map_indexed(max_n.get(), |i| equivalence_report(AtomCount::new(i + 1)?))
        .into_iter()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dicke::norm;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn atoms(n: usize) -> AtomCount {
        AtomCount::new(n).unwrap()
    }

    fn params(theta: f64, phi: f64) -> CoherentParams {
        CoherentParams::new(theta, phi).unwrap()
    }

    fn max_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }

    #[test]
    fn wrap_phase_range() {
        assert_eq!(wrap_phase(PI), PI);
        assert!((wrap_phase(-PI) - PI).abs() < 1e-15);
        assert!((wrap_phase(-3.0 * FRAC_PI_2) - FRAC_PI_2).abs() < 1e-15);
        assert!((wrap_phase(7.0 * PI) - PI).abs() < 1e-12);
        assert_eq!(wrap_phase(0.0), 0.0);
    }

    #[test]
    fn scaled_time_validation() {
        assert!(ScaledTime::new(f64::NAN).is_err());
        assert!(ScaledTime::HALF_PI.is_cat_time());
        assert!(ScaledTime::new(FRAC_PI_2 + 4.0 * PI).unwrap().is_cat_time());
        assert!(!ScaledTime::new(1.0).unwrap().is_cat_time());
    }

    #[test]
    fn propagate_zero_and_full_period() {
        let s = coherent_dicke(atoms(7), params(1.2, 0.4));
        assert_eq!(propagate(&s, ScaledTime::ZERO), s);
        let back = propagate(&s, ScaledTime::FULL_PERIOD);
        assert!(max_diff(back.amplitudes(), s.amplitudes()) < 1e-12);
    }

    #[test]
    fn zheng_initial_small() {
        let z1 = zheng_initial(atoms(1));
        assert!(max_diff(z1.amplitudes(), &[c(FRAC_1_SQRT_2, 0.0), c(0.0, FRAC_1_SQRT_2)]) < 1e-15);
        // (|g⟩ + i|e⟩)^{⊗2}/2 projected: [1/2, i/√2, −1/2]
        let z2 = zheng_initial(atoms(2));
        assert!(max_diff(z2.amplitudes(), &[c(0.5, 0.0), c(0.0, FRAC_1_SQRT_2), c(-0.5, 0.0)]) < 1e-15);
    }

    #[test]
    fn zheng_is_phase_shifted_coherent_state() {
        for n in 1..=12 {
            let z = zheng_initial(atoms(n));
            let cs = coherent_dicke(atoms(n), params(FRAC_PI_2, -FRAC_PI_2));
            // |θ,φ⟩ = e^{−iNπ/2}|zheng⟩
            let ov = overlap(&z, &cs).unwrap();
            let want = Complex64::from_polar(1.0, -(n as f64) * FRAC_PI_2);
            assert!((ov - want).norm() < 1e-12, "n={n}: {ov}");
            let rev = overlap(&cs, &z).unwrap();
            assert!((rev - want.conj()).norm() < 1e-12, "n={n}: {rev}");
        }
    }

    #[test]
    fn three_atom_ghz_from_propagation() {
        let n = atoms(3);
        let propagated = propagate(&zheng_initial(n), ScaledTime::HALF_PI);
        let ghz = ghz_dicke(n).unwrap();
        assert!(max_diff(propagated.amplitudes(), ghz.amplitudes()) < 1e-10);
    }

    #[test]
    fn ghz_branch_signs() {
        assert_eq!(minus_i_pow(3), c(0.0, 1.0));
        assert_eq!(minus_i_pow(4), c(1.0, 0.0));
        // N = 4: branches (|g⟩ ± |e⟩)/√2, so the amplitude pattern is real
        // up to the common e^{iπ/4}(1 ∓ i) prefactors.
        let g = ghz_state(atoms(4)).unwrap();
        assert!((g.norm() - 1.0).abs() < 1e-12);
        let front = Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4) * 0.25;
        let all_ground = front * c(1.0, -1.0);
        let all_excited = front * c(1.0, -1.0);
        let one_excited = front * c(1.0, 1.0);
        assert!((g.amplitudes()[0] - all_ground).norm() < 1e-15);
        assert!((g.amplitudes()[15] - all_excited).norm() < 1e-15);
        assert!((g.amplitudes()[1] - one_excited).norm() < 1e-15);
    }

    #[test]
    fn ghz_single_atom_two_routes() {
        // direct evaluation of the defining expression for N = 1:
        // (e^{iπ/4}/√2)[(|g⟩ − i|e⟩)/√2 − i(|g⟩ + i|e⟩)/√2]
        let front = Complex64::from_polar(FRAC_1_SQRT_2, FRAC_PI_4);
        let i = c(0.0, 1.0);
        let r = FRAC_1_SQRT_2;
        let want_g = front * (c(r, 0.0) - i * c(r, 0.0));
        let want_e = front * (-i * r - i * (i * r));
        let g = ghz_state(atoms(1)).unwrap();
        assert!((g.amplitudes()[0] - want_g).norm() < 1e-15);
        assert!((g.amplitudes()[1] - want_e).norm() < 1e-15);
        assert!((g.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz_capacity() {
        assert!(matches!(ghz_state(atoms(21)), Err(Error::Capacity { .. })));
    }

    #[test]
    fn cat_matches_ghz_with_phase() {
        for n in [3usize, 4] {
            let cat = cat_state(atoms(n), params(FRAC_PI_2, -FRAC_PI_2)).unwrap();
            let ghz = ghz_dicke(atoms(n)).unwrap().with_global_phase(-(n as f64) * FRAC_PI_2);
            assert!(max_diff(cat.amplitudes(), ghz.amplitudes()) < 1e-10, "n={n}");
            assert!((overlap(&cat, &ghz).unwrap().norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn cat_at_pole_is_normalized_all_ground() {
        // Both branches are |g…g⟩ up to phase and their weights add to
        // modulus one, so no normalization error is raised.
        for n in 1..=6 {
            let cat = cat_state(atoms(n), params(0.0, 0.0)).unwrap();
            assert!((cat.norm() - 1.0).abs() < 1e-12);
            assert!((cat.amplitudes()[0].norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cat_equals_propagated_coherent_state_off_equator() {
        for n in 1..=8 {
            for (theta, phi) in [(0.3, 0.4), (1.0, -2.2), (2.0, 1.1), (PI, 0.0)] {
                let p = params(theta, phi);
                let cat = cat_state(atoms(n), p).unwrap();
                let prop = propagate(&coherent_dicke(atoms(n), p), ScaledTime::HALF_PI);
                assert!((norm(&cat) - 1.0).abs() < 1e-12);
                assert!(max_diff(cat.amplitudes(), prop.amplitudes()) < 1e-12, "n={n} θ={theta}");
            }
        }
    }

    #[test]
    fn report_three_and_four() {
        let r3 = equivalence_report(atoms(3)).unwrap();
        assert!((r3.fidelity_prop_vs_ghz - 1.0).abs() < 1e-10);
        assert!((r3.phase_cat_over_ghz - FRAC_PI_2).abs() < 1e-10);
        assert!(r3.passes(1e-10));

        let r4 = equivalence_report(atoms(4)).unwrap();
        assert!((r4.fidelity_prop_vs_cat - 1.0).abs() < 1e-10);
        assert!(r4.phase_error() < 1e-9);
    }

    #[test]
    fn sweep_schedules_agree() {
        let seq = equivalence_sweep_with(Execution::Sequential, atoms(8)).unwrap();
        let par = equivalence_sweep_with(Execution::Parallel, atoms(8)).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq.iter().map(|r| r.n.get()).collect::<Vec<_>>(), (1..=8).collect::<Vec<_>>());
    }
}
