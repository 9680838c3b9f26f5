//! Certified computations around continued fractions, diagonal flows on
//! unimodular lattices, the modular surface and fractal measures.
//!
//! Lattice and modular-surface code is generic over [`scalar::Scalar`]:
//! `f64`/`f32` for speed, [`Ball`] for certified enclosures and
//! [`BigRational`](num_rational::BigRational) for exact identities. The
//! aliases below fix the common choices.
//!
//! ```
//! use diolab::lattice::{flow_basis, shortest_vector, FlowPoint, NormKind};
//! use diolab::BasisBall;
//! use num_rational::BigRational;
//!
//! # fn main() -> Result<(), diolab::lattice::LatticeError> {
//! let v = vec![BigRational::new(1.into(), 3.into())];
//! let b: BasisBall = flow_basis(&FlowPoint::new(v, 2.0)?, 128)?;
//! let s = shortest_vector(&b, NormKind::Sup)?;
//! // n = 3, m = 1 kills the first coordinate: length 3 e^-2
//! assert_eq!(s.coeffs, vec![1, 3]);
//! # Ok(())
//! # }
//! ```

pub mod cf;
pub mod interval;
pub mod lattice;
pub mod modular;
pub mod rational;
pub mod rng;
pub mod sampler;
pub mod scalar;
pub mod serde_util;
pub mod surd;

pub use cf::{ContinuedFraction, Convergent};
pub use interval::RationalInterval;
pub use lattice::{FlowPoint, LatticeBasis, NormKind};
pub use modular::{GeodesicState, Psl2Element, SectionClass};
pub use rng::SplitMix64;
pub use sampler::{Sampler, SamplerSpec};
pub use scalar::{Ball, RealScalar, Scalar};
pub use surd::QuadraticSurd;

pub type BasisF64 = LatticeBasis<f64>;
pub type BasisBall = LatticeBasis<Ball>;
pub type BasisExact = LatticeBasis<num_rational::BigRational>;
pub type Psl2F64 = Psl2Element<f64>;
pub type Psl2Ball = Psl2Element<Ball>;
pub type Psl2Exact = Psl2Element<num_rational::BigRational>;
pub type GeodesicBall = GeodesicState<Ball>;
