//! Exact weight distributions of binary Reed–Muller codes and their cosets.
//!
//! W[R(r,m)] is built as a class-weighted sum of squared coset enumerators
//! of R(r-1,m-1), each coset enumerator in turn assembled block by block from
//! orbits of a stabilizer acting on cosets of R(r-3,m-2). Brute-force
//! oracles and identity checks verify the results at every size they reach.
//!
//! ```
//! use rmwd::oracle::brute_force_distribution;
//! let w = brute_force_distribution(1, 3).unwrap();
//! assert_eq!(w.to_string(), "1 + 14z^4 + z^8");
//! ```

pub mod boolfn;
pub mod classify;
pub mod cosetenum;
pub mod dataio;
pub mod error;
pub mod gf2group;
pub mod oracle;
pub mod pipeline;
pub mod wenum;

pub use boolfn::{Anf, HomogeneousIndex, Monomial, TruthTable};
pub use classify::{ClassRecord, Classification, Partition};
pub use error::{Error, Result};
pub use gf2group::{AffineMap, Gf2Matrix};
pub use pipeline::{PipelineConfig, PipelineOutput, Strategy};
pub use wenum::WeightEnumerator;
