//! Exact construction, detection and counting of multistate nested canalyzing
//! functions over prime fields.

pub mod count;
pub mod error;
pub mod field;
pub mod functions;
pub mod ncf;
pub mod oracle;
pub mod param;
pub mod poly;
mod text;

pub use error::{NcfError, Result};
pub use field::{IntervalSet, PrimeField};
pub use functions::TruthTable;
pub use ncf::{detect, Detection, NcfDescriptor};
pub use poly::{PolyR, UniPoly};
