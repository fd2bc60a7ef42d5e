//! Sandpile groups of square cycles, wheels and subdivided banana graphs, and
//! discrete logarithms in them.
//!
//! Everything is exact: Laplacian pseudoinverses are rational matrices,
//! pairing values are rationals reduced mod 1, and group elements are
//! recurrent chip configurations.
//!
//! ```
//! use sandpile_core::{graphs::wheel, Sandpile, DlpInstance, dlp::shokrieh_solve};
//!
//! let sp = Sandpile::with_default_sink(wheel(7).unwrap());
//! let c1 = sp.configuration(vec![2, 2, 2, 0, 2, 2, 0]).unwrap();
//! let c2 = sp.configuration(vec![2, 2, 2, 1, 2, 2, 1]).unwrap();
//! let sol = shokrieh_solve(&DlpInstance::new(sp, c1, c2)).unwrap();
//! assert!(sol.verified);
//! assert_eq!(sol.residue_class.residue(), &15.into());
//! ```

pub mod dlp;
pub mod error;
pub mod exactmath;
pub mod graphs;
pub mod io;
pub mod matrix;
pub mod rational;
pub mod sandpile;

pub use dlp::{DlpInstance, DlpSolution, Method, PairingValue};
pub use error::{Error, Result};
pub use exactmath::ResidueClass;
pub use graphs::{Family, Graph};
pub use matrix::{IntegerMatrix, RationalMatrix};
pub use sandpile::{Configuration, Divisor, GroupDescription, Sandpile};
