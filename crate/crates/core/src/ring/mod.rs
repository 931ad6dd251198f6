//! Exact arithmetic: F_p, F_p[x], the localized ring A, and the multivariate
//! Laurent ring with its localization.

pub mod expr;
pub mod field;
pub mod laurent;
pub mod local;
pub mod multilocal;
pub mod poly;
pub mod validate;

pub use field::{Fp, PrimeField};
pub use laurent::MultiLaurent;
pub use local::{FractionJson, LocalRing, SFraction};
pub use multilocal::{MultiLocalRing, MultiSFraction};
pub use poly::{Degree, DensePoly};
pub use validate::{validate_config, ValidationReport, Violation};
