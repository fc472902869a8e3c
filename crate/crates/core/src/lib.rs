//! Circuit simulation over real, complex and quaternionic amplitudes, and a
//! compiler that embeds complex circuits into real ones and quaternionic
//! circuits into complex or real ones.

pub mod circuit;
pub mod corpus;
pub mod demos;
pub mod embed;
pub mod error;
pub mod io;
pub mod linalg;
pub mod scalar;
pub mod sim;
pub mod verify;

pub use num_complex::Complex64;

pub use circuit::{Circuit, Gate, GateId, OrderedCircuit, SortMode};
pub use embed::{
    compile, embed_matrix, embed_vector, CompileOptions, CompiledCircuit, ComplexToReal, Embedding,
    EmbeddingKind, QuaternionToComplex, QuaternionToReal, TopInit,
};
pub use error::{Error, Result};
pub use linalg::{DensityOperator, Matrix, StateVector};
pub use scalar::{ComplexPair, Domain, Quaternion, Scalar};
pub use sim::{marginal, measure_all, run, Marginal, MeasurementDistribution};
pub use verify::{run_suite, SuiteConfig, SuiteReport};
