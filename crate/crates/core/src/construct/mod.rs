//! Gram–Schmidt, the minima rescaling, lifts, lattice averaging and the
//! randomized searches built on it.

pub mod average;
pub mod body;
pub mod gram_schmidt;
pub mod lift;
pub mod quadrature;
pub mod report;
pub mod rescale;
pub mod search;
pub mod testfn;

pub use average::{average_prediction, default_alpha, lattice_sum};
pub use gram_schmidt::{gram_schmidt_exact, gram_schmidt_h, hermitian};
pub use lift::{lift, HlawkaFamily, LiftedLattice};
pub use rescale::{rescale, rescale_by_minima, Rescaled};
pub use testfn::{mobius_smooth, rho, rho_integral, TestFunction};
pub use body::{convex_body_search, ConvexBody};
pub use search::{hlawka_search, minima_product_search, SearchConfig};
pub use report::SearchReport;
