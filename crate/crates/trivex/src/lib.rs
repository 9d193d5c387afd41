//! A laboratory for the family of trivalent expander graphs `T_k` obtained
//! by delta-wye transformation of the 6-valent Cayley graphs `X_k` of the
//! 2-group tower `G_k`, together with the hyperbolic surfaces these graphs
//! tessellate.
//!
//! The crate builds the groups (`group`), the graphs and their
//! transformations (`graph`), the oriented maps, genus data and hyperbolic
//! bounds (`surface`), adjacency spectra (`spectral`), the Platonic graphs
//! and the PSL(2,Z_8) cross-check (`platonic`), and the truncated periodic
//! Toeplitz matrix algebra over F2 behind the matrix model of the tower
//! (`toeplitz`).

pub mod f2;
pub mod graph;
pub mod group;
pub mod platonic;
pub mod spectral;
pub mod surface;
pub mod toeplitz;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
