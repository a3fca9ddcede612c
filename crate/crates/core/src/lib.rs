pub mod attack;
pub mod decoder;
pub mod ffield;
pub mod fqmlinalg;
pub mod gpt;
pub mod qpoly;
pub mod rankcodes;
pub mod rng;
pub mod selftest;
pub mod serial;

pub use decoder::{DecodeResult, DecodeStatus, Decoder};
pub use ffield::{ArithOp, FieldCtx, FieldError, Fqm};
pub use fqmlinalg::{LinalgError, MatFq, MatFqm};
pub use gpt::{Ciphertext, GptParams, GptPublicKey, GptSecretKey, Instantiation};
pub use qpoly::LinPoly;
pub use rankcodes::{Code, CodeClass, TwistParams};
