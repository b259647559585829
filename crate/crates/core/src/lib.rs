pub mod circuit;
pub mod codes;
pub mod cyclo;
pub mod diagram;
pub mod error;
pub mod gf;
pub mod matrix;
pub mod pauli;
pub mod phasepoly;
pub mod protocols;
pub mod report;
pub mod sim;
pub mod synth;

pub use cyclo::{CycloNum, Ring};
pub use error::{Error, Result};
pub use matrix::ExactMatrix;
pub use pauli::PauliOp;
