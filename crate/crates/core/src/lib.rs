//! Higher-order isometry defects for complex square matrices.
//!
//! For `T` acting on `C^d` the defect operators are
//!
//! ```text
//! beta_m(T)     = sum_{k=0..m} (-1)^{m-k} C(m,k) T^{*k} T^k
//! beta_{m,n}(T) = T^{*n} beta_m(T) T^n
//! ```
//!
//! `T` is *n-quasi-m-isometric* when `beta_{m,n}(T) = 0`. The crate computes
//! these defects under an explicit floating-point policy
//! ([`ToleranceProfile`]), classifies matrices by their minimal `(m, n)`
//! profile, splits them along `cl R(T^n) (+) N(T^{*n})`, and checks the
//! structural theorems about powers, products, tensor products and nilpotent
//! perturbations on concrete and randomly generated instances.

pub mod classifier;
pub mod combinatorics;
pub mod constructions;
pub mod decomposition;
pub mod defect;
pub mod error;
pub mod linalg;
pub mod random;
pub mod sequence;
pub mod theorems;
pub mod tolerance;

pub use classifier::{
    beta_independence, is_nqmi, is_strict, kernel_condition, minimal_profile, power_bounded,
    Independence, QuasiProfile,
};
pub use decomposition::{
    block_decompose, similarity_split, spectral_report, verify_block_form, BlockDecomposition,
    BlockFormCheck, SimilaritySplit, SpectralReport,
};
pub use defect::{beta, beta_qn, beta_qn_on, delta, DefectReport, Window};
pub use error::{Error, Result};
pub use linalg::{Matrix, C64};
pub use theorems::{Outcome, TheoremId, TheoremVerdict};
pub use tolerance::{Decision, ToleranceProfile};
