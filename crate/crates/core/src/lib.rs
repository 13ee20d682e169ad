//! Exact character tables, block partitions and perfect isometry checks for
//! symmetric and alternating groups, their double covers, and wreath products.

pub mod barpartitions;
pub mod blocks;
pub mod chars_spin;
pub mod chars_sym_alt;
pub mod chars_wreath;
pub mod error;
pub mod exactnum;
pub mod isometry;
pub mod partitions;
pub mod table;

pub use barpartitions::BarPartition;
pub use error::{Error, Result};
pub use exactnum::ExactScalar;
pub use isometry::{
    build_isometry, i_hat, verify, Isometry, Kind, MapEntry, Mode, Params, VerificationReport,
};
pub use partitions::{Partition, QuotientTuple};
pub use table::{CharLabel, CharTable, ClassLabel, Shape, Split};
