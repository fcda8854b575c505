//! GRAND decoding toolkit: GF(2) linear algebra, code constructions,
//! ORBGRAND and segmented ORBGRAND decoders, and an AWGN simulator.
//!
//! Coordinates of codewords and reliability ranks are 1-based throughout the
//! public API.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod codes;
pub mod decode;
pub mod error;
pub mod gf2;
pub mod patterngen;
pub mod scalar;
pub mod segmentation;
pub mod sim;

pub use error::{Error, Result};
pub use gf2::{BitMatrix, BitVec};
pub use scalar::Real;

pub use codes::LinearCode;
pub use decode::{DecodeResult, DecoderOptions, Orbgrand, SegmentedOrbgrand, TuningParams};
pub use segmentation::Segmentation;

pub type DecodeResultF32 = DecodeResult<f32>;
pub type DecodeResultF64 = DecodeResult<f64>;
pub type SegmentedOrbgrandF32 = SegmentedOrbgrand<f32>;
pub type SegmentedOrbgrandF64 = SegmentedOrbgrand<f64>;
pub type TuningParamsF32 = TuningParams<f32>;
pub type TuningParamsF64 = TuningParams<f64>;
pub type SimDecoderF32 = sim::SimDecoder<f32>;
pub type SimDecoderF64 = sim::SimDecoder<f64>;
