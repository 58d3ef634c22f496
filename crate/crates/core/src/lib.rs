//! Exact and Monte-Carlo machinery for iterated upper shadows on the
//! middle layer of the n-cube: shadow enumeration, lex-segment
//! (Kruskal–Katona) machinery, Johnson-graph spectral checks, random
//! subcube restrictions with an explicit-bound calculator, and seeded,
//! reproducible experiment drivers.

pub mod binom;
pub mod bound;
pub mod error;
pub mod experiments;
pub mod family;
pub mod generate;
pub mod kk;
pub mod lfam;
pub mod mask;
pub mod mc;
pub mod spectra;
pub mod subcube;
pub mod verify;

pub use error::{Error, Result};
pub use family::{LayerFamily, PairCensus, Predicate};
pub use generate::FamilySpec;
