//! Young-function calculus, embedding gates and optimal moduli of continuity
//! for fractional Orlicz–Sobolev spaces.

pub mod conditions;
pub mod error;
pub mod modulus;
pub mod norms;
pub mod quad;
pub mod seminorm;
pub mod table;
pub mod young;

pub use conditions::{
    build_e, build_f, build_hat_a, build_i, classify_gate, Band, BuiltFunction, ConvergenceReport, Gate, Method,
    SmoothnessParams, Verdict,
};
pub use error::{OrliczError, Result};
pub use table::{TabulatedMonotone, TailModel};
pub use young::{dominates, equivalent, IndexValue, Range, Tail, YoungFunction, YoungSpec};
pub use modulus::{classify_regime, rho, sigma, theta, verify_equivalence, Asymptote, End, EquivalenceConfig, EquivalenceReport, ModulusOfContinuity, Regime};
pub use norms::{
    decreasing_rearrangement, holder_check, kernel_norms, luxemburg_norm, luxemburg_norm_fn, orlicz_lorentz_norm, HolderReport,
    KernelNorms, LorentzNorm, MeasureSpec, NormResult, PowerTail, SampledFunction,
};
pub use seminorm::{
    check_modular_bound, flatten_tail, gagliardo_modular, holder_quotient, make_trial, seminorm, seminorm_from, Estimator, Field,
    GagliardoSamples, ModularBound, ModularBoundReport, ModularEstimate, PairSampler, Subject, TrialFunction, TrialKind,
};
