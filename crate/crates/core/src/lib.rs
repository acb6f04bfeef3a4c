//! Exact computations with semi-flat generalized complex structures: block
//! operators and their constraint equations, B- and beta-field transforms,
//! Courant bracket integrability, pure spinors, the mirror transform, the
//! Fourier-Mukai transform on forms, generalized Kaehler pairs and branes.

pub mod courant;
pub mod exterior;
pub mod format;
pub mod fourier;
pub mod gcs;
pub mod kahler;
pub mod matrix;
pub mod report;
pub mod scalar;
pub mod semiflat;

pub use matrix::{ConstMatrix, Matrix, PolyMatrix, RatMatrix, Ring};
pub use scalar::{parse_poly, Context, Ctx, GaussRational, Monomial, Poly, RatFunc, ScalarError};
pub use exterior::{Blade, GeneratorSet, Gens, GradedElement, Kind};
pub use gcs::{GCStructure, GcsError, IsotropicSubbundle};
pub use report::{Report, Violation};
pub use courant::{courant_bracket, integrability_by_nijenhuis, spinor_integrability, BracketVerdict, GeneralizedSection, Witness};
pub use format::{FormatError, Structure, StructureFile};
pub use fourier::{ft_torus, spinor_mirror_check, FourierError, FourierFrame};
pub use kahler::{buscher_transform, GBlocks, GKPair, KahlerError, MetricData, SemiflatPair};
pub use semiflat::{brane_mirror, AdaptedBlocks, BraneDatum, BraneReport, DiracStructure, SemiflatError};
