//! Exact and numerical tools for the `M_eps` family of compact real
//! algebraic hypersurfaces in `C^2`: Segre varieties, reflection maps,
//! degree bounds for rational maps restricted to Segre varieties,
//! coefficient bounds, a monodromy tracker and the explicit hyperquadric
//! embedding.

pub mod bounds;
pub mod embed;
pub mod error;
pub mod field;
pub mod hypersurface;
pub mod linalg;
pub mod mapdeg;
pub mod monodromy;
pub mod poly;
pub mod roots;
pub mod rng;
pub mod segre;
pub mod unipoly;

pub use error::{Error, Result};
pub use field::{ComplexRational, Field, Surd};
pub use poly::{HermPoly, HoloPoly, Monomial, Poly, Var};
pub use unipoly::UniPoly;
