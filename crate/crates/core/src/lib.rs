//! Areal Weil heights, Mahler measures and Arakelov–Zhang pairings over ℚ.
//!
//! Every height is assembled from per-place absolute-value profiles of the
//! conjugates of an algebraic number ([`places`]). The archimedean data come
//! from a double-precision root solver and the p-adic data from exact Newton
//! polygons ([`polyalg`]).
//!
//! ```
//! use areal_heights::{areal_height, AlgebraicNumber, RadiusProfile};
//!
//! let golden = AlgebraicNumber::from_minimal_polynomial(&"-1,-1,1".parse().unwrap()).unwrap();
//! let r: RadiusProfile = "inf:1".parse().unwrap();
//! let h = areal_height(&golden, &r, 1e-13).unwrap();
//! assert!((h.total - 0.211097).abs() < 1e-6);
//! ```

pub mod equidist;
pub mod error;
pub mod heights;
pub mod measures;
pub mod pairings;
pub mod places;
pub mod polyalg;
pub mod quadrature;

pub use error::{Error, Result};
pub use heights::{
    areal_height, areal_mahler_measure, comparison_bounds, essential_minimum, gamma,
    kronecker_classify, lambda_height, mahler_measure, weil_height, HeightReport, KroneckerVerdict,
};
pub use measures::{f_r, MeasureSpec, RadiusProfile};
pub use pairings::{
    az_chebyshev, az_chebyshev_derivative, az_closed_form, dirichlet_l2_chi3,
    mutual_energy_quadrature, optimize_radius, PairingResult,
};
pub use places::{local_profiles, AlgebraicNumber, LocalValueProfile, Place};
pub use polyalg::{IntPolynomial, DEFAULT_ROOT_TOL};
