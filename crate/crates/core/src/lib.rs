//! Atomic cat and GHZ states from a dispersive collective interaction.
//!
//! N two-level atoms evolving under H = η S⁺S⁻ stay in the symmetric Dicke
//! sector, where H is diagonal and propagation costs O(N). This crate
//! provides that fast path ([`dicke`], [`dynamics`]), a brute-force 2^N
//! product-space oracle that rebuilds the collective operators from single
//! atoms and exponentiates them densely ([`oracle`]), and the Ramsey fringe
//! signals used to tell the resulting cat state apart from an incoherent
//! mixture ([`ramsey`]).
//!
//! Sweeps run on rayon when the `parallel` feature is enabled (default);
//! see [`par::Execution`].

pub mod dicke;
pub mod dynamics;
pub mod error;
pub mod oracle;
pub mod par;
pub mod ramsey;

pub use dicke::{
    coherent_dicke, coherent_overlap_closed_form, norm, overlap, AtomCount, CoherentParams,
    ComplexAmplitude, DickeState,
};
pub use dynamics::{
    cat_state, equivalence_report, equivalence_sweep, ghz_state, propagate, zheng_initial,
    EquivalenceReport, ScaledTime,
};
pub use error::{Error, Result};
pub use oracle::{embed, product_state, project, propagate_full, FullState, OperatorMatrix};
pub use par::Execution;
pub use ramsey::{
    compare_channels, detection_probability, fringe_sweep, harmonic_magnitudes,
    mixture_probability, BetaGrid, FringeSeries, MixtureSpec, RamseyParams,
};

/// Numerical tolerances shared by the checks in this crate.
pub mod tolerance {
    /// Algebraic identities within one representation.
    pub const IDENTITY: f64 = 1e-12;
    /// Dicke-basis vs product-space comparisons.
    pub const CROSS_REPRESENTATION: f64 = 1e-10;
    /// Global-phase comparisons, radians, modulo 2π.
    pub const PHASE: f64 = 1e-9;
}
