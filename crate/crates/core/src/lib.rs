//! Sectional homogeneity of colorings of `d^N`.
//!
//! The crate decides, searches and certifies whether a block layout
//! `n_0 ... n_{r-1}` is sectionally homogeneous for a coloring, transports
//! witnesses between layouts, connects the property to Hales-Jewett numbers and
//! runs a certificate-producing prover for layouts starting with a block of two.

pub mod adversary;
pub mod catalog;
pub mod cert;
pub mod checker;
pub mod coloring;
pub mod error;
pub mod hj;
pub mod prover;
pub mod search;
pub mod solver;
pub mod transform;
pub mod word;

pub use checker::{find_sh_certificate, monochromatic_color, verify_sh_certificate, ShCertificate};
pub use coloring::{Coloring, TableColoring};
pub use error::{EnshError, Result};
pub use word::{Point, SectionLayout, Symbol, VariableWord};
