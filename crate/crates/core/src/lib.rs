pub mod cli;
pub mod dense_oracle;
pub mod encodings;
pub mod error;
pub mod error_analysis;
pub mod gf2;
pub mod lattice;
pub mod majorana;
pub mod noise_channel;
pub mod pauli;
pub mod verify;

pub use error::{Error, Result};
pub use majorana::{MajoranaKind, MajoranaMonomial, Parity};
pub use pauli::{Letter, PauliOp, QubitIndex};
