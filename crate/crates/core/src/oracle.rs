//! Brute-force 2^N product-space representation.
//!
//! Basis index convention: bit j of the index is atom j, 1 = |e⟩, 0 = |g⟩,
//! atom 0 is the least significant bit. Serialized states depend on this.
//!
//! Nothing here uses the symmetric-sector eigenvalue formula; the collective
//! operators are rebuilt from single-atom ladder operators and exponentiated
//! through a dense eigendecomposition, so this module is an independent
//! check on [`crate::dynamics`].

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dicke::{binomial, AtomCount, DickeState};
use crate::dynamics::ScaledTime;
use crate::error::{Error, Result};
use crate::par::Execution;
use crate::tolerance;

/// Largest N with an explicit 2^N state vector.
pub const MAX_FULL_ATOMS: usize = 20;
/// Largest N for dense 2^N × 2^N operators and eigendecomposition.
pub const MAX_DENSE_ATOMS: usize = 12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Debug, Clone, PartialEq)]
pub struct FullState {
    n: AtomCount,
    amps: Vec<Complex64>,
}

impl FullState {
    pub fn from_amplitudes(n: AtomCount, amps: Vec<Complex64>) -> Result<Self> {
        n.ensure_at_most(MAX_FULL_ATOMS, "product-space state")?;
        let expected = 1usize << n.get();
        if amps.len() != expected {
            return Err(Error::AmplitudeLength {
                got: amps.len(),
                expected,
            });
        }
        let state = FullState { n, amps };
        let norm = state.norm();
        if (norm - 1.0).abs() > tolerance::CROSS_REPRESENTATION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(state)
    }

    #[inline]
    pub fn n(&self) -> AtomCount {
        self.n
    }

    #[inline]
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &FullState) -> Result<Complex64> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n.get(),
                right: other.n.get(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Relabels atoms `i` and `j`.
    pub fn swap_atoms(&self, i: usize, j: usize) -> FullState {
        let n = self.n.get();
        assert!(i < n && j < n, "atom index out of range");
        let amps = (0..self.amps.len())
            .map(|b| {
                let (bi, bj) = ((b >> i) & 1, (b >> j) & 1);
                let src = if bi == bj {
                    b
                } else {
                    b ^ ((1 << i) | (1 << j))
                };
                self.amps[src]
            })
            .collect();
        FullState { n: self.n, amps }
    }
}

/// Dense operator on the 2^N product space.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    n: AtomCount,
    entries: DMatrix<Complex64>,
}

impl OperatorMatrix {
    #[inline]
    pub fn n(&self) -> AtomCount {
        self.n
    }

    #[inline]
    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn adjoint(&self) -> OperatorMatrix {
        OperatorMatrix {
            n: self.n,
            entries: self.entries.adjoint(),
        }
    }

    /// Matrix product `self · rhs`.
    pub fn compose(&self, rhs: &OperatorMatrix) -> Result<OperatorMatrix> {
        if self.n != rhs.n {
            return Err(Error::SizeMismatch {
                left: self.n.get(),
                right: rhs.n.get(),
            });
        }
        Ok(OperatorMatrix {
            n: self.n,
            entries: &self.entries * &rhs.entries,
        })
    }

    /// Largest entry of |A − A†|.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = &self.entries;
        let dim = m.nrows();
        let mut worst = 0.0f64;
        for r in 0..dim {
            for c in r..dim {
                worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
            }
        }
        worst
    }

    /// Matrix-vector product. The result is not renormalized.
    pub fn apply(&self, s: &FullState) -> Result<Vec<Complex64>> {
        if self.n != s.n {
            return Err(Error::SizeMismatch {
                left: self.n.get(),
                right: s.n.get(),
            });
        }
        let v = DVector::from_column_slice(&s.amps);
        Ok((&self.entries * v).as_slice().to_vec())
    }
}

/// Builds ∏_j (g_j|g⟩ + e_j|e⟩) from one (g, e) amplitude pair per atom.
pub fn product_state(n: AtomCount, factors: &[(Complex64, Complex64)]) -> Result<FullState> {
    n.ensure_at_most(MAX_FULL_ATOMS, "product-space state")?;
    if factors.len() != n.get() {
        return Err(Error::FactorCount {
            got: factors.len(),
            expected: n.get(),
        });
    }
    for (index, (g, e)) in factors.iter().enumerate() {
        let norm_sqr = g.norm_sqr() + e.norm_sqr();
        if (norm_sqr - 1.0).abs() > tolerance::IDENTITY {
            return Err(Error::UnnormalizedFactor { index, norm_sqr });
        }
    }
    let amps = Execution::default().map_indexed(1 << n.get(), |b| {
        factors
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (j, (g, e))| {
                acc * if (b >> j) & 1 == 1 { e } else { g }
            })
    });
    Ok(FullState { n, amps })
}

/// S⁻ = Σ_j |g⟩⟨e|_j as a dense matrix.
pub fn collective_lowering(n: AtomCount) -> Result<OperatorMatrix> {
    n.ensure_at_most(MAX_DENSE_ATOMS, "dense collective operator")?;
    let dim = 1usize << n.get();
    let mut entries = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        for j in 0..n.get() {
            if (col >> j) & 1 == 1 {
                entries[(col ^ (1 << j), col)] += Complex64::new(1.0, 0.0);
            }
        }
    }
    Ok(OperatorMatrix { n, entries })
}

/// S⁺ = (S⁻)†.
pub fn collective_raising(n: AtomCount) -> Result<OperatorMatrix> {
    Ok(collective_lowering(n)?.adjoint())
}

/// S⁺S⁻ = Σ_{i,j} σ⁺_i σ⁻_j, assembled term by term from single-atom operators.
pub fn dispersive_hamiltonian(n: AtomCount) -> Result<OperatorMatrix> {
    n.ensure_at_most(MAX_DENSE_ATOMS, "dense collective operator")?;
    let atoms = n.get();
    let dim = 1usize << atoms;
    let mut entries = DMatrix::from_element(dim, dim, ZERO);
    for col in 0..dim {
        for j in (0..atoms).filter(|&j| (col >> j) & 1 == 1) {
            let lowered = col ^ (1 << j);
            for i in (0..atoms).filter(|&i| (lowered >> i) & 1 == 0) {
                entries[(lowered | (1 << i), col)] += Complex64::new(1.0, 0.0);
            }
        }
    }
    Ok(OperatorMatrix { n, entries })
}

/// Spectral propagator e^{−iτ S⁺S⁻} for a fixed N.
///
/// The eigendecomposition is computed once; [`FullPropagator::propagate`]
/// can then be applied for many τ.
#[derive(Debug, Clone)]
pub struct FullPropagator {
    n: AtomCount,
    eigenvalues: Vec<f64>,
    eigenvectors: DMatrix<f64>,
}

impl FullPropagator {
    pub fn new(n: AtomCount) -> Result<Self> {
        let h = dispersive_hamiltonian(n)?;
        let defect = h.hermiticity_defect();
        if defect > 1e-14 {
            return Err(Error::Numerical(format!(
                "S+S- is not Hermitian (defect {defect:e})"
            )));
        }
        // Entries are sums of ones in the product basis; the real symmetric
        // solver is exact for this matrix and ~4x cheaper than the complex one.
        if h.entries.iter().any(|c| c.im != 0.0) {
            return Err(Error::Numerical(
                "S+S- has imaginary entries in the product basis".into(),
            ));
        }
        let real = h.entries.map(|c| c.re);
        let eig = real.symmetric_eigen();
        let eigenvalues: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        if let Some(bad) = eigenvalues
            .iter()
            .find(|ev| (*ev - ev.round()).abs() > 1e-9 || !ev.is_finite())
        {
            return Err(Error::Numerical(format!(
                "non-integer eigenvalue {bad} of S+S-"
            )));
        }
        Ok(FullPropagator {
            n,
            eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    #[inline]
    pub fn n(&self) -> AtomCount {
        self.n
    }

    /// Eigenvalues of S⁺S⁻ on the whole product space, unsorted.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn propagate(&self, s: &FullState, tau: ScaledTime) -> Result<FullState> {
        if s.n != self.n {
            return Err(Error::SizeMismatch {
                left: self.n.get(),
                right: s.n.get(),
            });
        }
        let v = &self.eigenvectors;
        let re = DVector::from_iterator(s.amps.len(), s.amps.iter().map(|c| c.re));
        let im = DVector::from_iterator(s.amps.len(), s.amps.iter().map(|c| c.im));
        let (coef_re, coef_im) = (v.tr_mul(&re), v.tr_mul(&im));
        // rotate each eigen-coefficient by e^{−iτλ}
        let mut rot_re = DVector::zeros(coef_re.len());
        let mut rot_im = DVector::zeros(coef_re.len());
        for (idx, &lambda) in self.eigenvalues.iter().enumerate() {
            let (sin, cos) = (-tau.value() * lambda).sin_cos();
            let (a, b) = (coef_re[idx], coef_im[idx]);
            rot_re[idx] = a * cos - b * sin;
            rot_im[idx] = a * sin + b * cos;
        }
        let (out_re, out_im) = (v * rot_re, v * rot_im);
        let amps: Vec<Complex64> = out_re
            .iter()
            .zip(out_im.iter())
            .map(|(&r, &i)| Complex64::new(r, i))
            .collect();
        let out = FullState { n: self.n, amps };
        let drift = (out.norm() - s.norm()).abs();
        if drift > tolerance::CROSS_REPRESENTATION {
            return Err(Error::Numerical(format!(
                "spectral propagation changed the norm by {drift:e}"
            )));
        }
        Ok(out)
    }
}

/// e^{−iτ S⁺S⁻}|s⟩ by dense spectral exponentiation. N ≤ 12.
pub fn propagate_full(s: &FullState, tau: ScaledTime) -> Result<FullState> {
    FullPropagator::new(s.n)?.propagate(s, tau)
}

/// Symmetric-subspace isometry: amps[b] = c_{|b|} / sqrt(C(N, |b|)).
pub fn embed(d: &DickeState) -> Result<FullState> {
    embed_with(Execution::default(), d)
}

pub fn embed_with(exec: Execution, d: &DickeState) -> Result<FullState> {
    let n = d.n().ensure_at_most(MAX_FULL_ATOMS, "product-space state")?;
    let scaled: Vec<Complex64> = d
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(k, c)| c / (binomial(n.get(), k) as f64).sqrt())
        .collect();
    let amps = exec.map_indexed(1 << n.get(), |b| scaled[b.count_ones() as usize]);
    Ok(FullState { n, amps })
}

/// Neumaier summation, componentwise.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

impl CompensatedSum {
    fn add(&mut self, x: Complex64) {
        fn step(sum: &mut f64, carry: &mut f64, x: f64) {
            let t = *sum + x;
            *carry += if sum.abs() >= x.abs() {
                (*sum - t) + x
            } else {
                (x - t) + *sum
            };
            *sum = t;
        }
        step(&mut self.sum.re, &mut self.carry.re, x.re);
        step(&mut self.sum.im, &mut self.carry.im, x.im);
    }

    fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

/// Adjoint of [`embed`], with the residual ‖f − embed(c)‖₂.
///
/// Fails with [`Error::OutOfSubspace`] when the residual reaches 1e-10;
/// otherwise the projected state is renormalized.
pub fn project(f: &FullState) -> Result<(DickeState, f64)> {
    let n = f.n;
    let atoms = n.get();
    // up to C(20,10) terms per bucket; compensated sums keep the oracle at ~1e-15
    let mut sums = vec![CompensatedSum::default(); atoms + 1];
    for (b, c) in f.amps.iter().enumerate() {
        sums[b.count_ones() as usize].add(*c);
    }
    let sums: Vec<Complex64> = sums.iter().map(CompensatedSum::value).collect();
    let amps: Vec<Complex64> = sums
        .iter()
        .enumerate()
        .map(|(k, s)| s / (binomial(atoms, k) as f64).sqrt())
        .collect();
    let raw = DickeState::from_raw(n, amps);
    let back = embed(&raw)?;
    let residual = f
        .amps
        .iter()
        .zip(&back.amps)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt();
    if residual >= tolerance::CROSS_REPRESENTATION {
        return Err(Error::OutOfSubspace { residual });
    }
    let norm = raw.norm();
    if norm == 0.0 {
        return Err(Error::NotNormalized { norm });
    }
    let amps = raw.into_amplitudes().into_iter().map(|c| c / norm).collect();
    Ok((DickeState::from_raw(n, amps), residual))
}
