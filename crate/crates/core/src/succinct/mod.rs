//! Bit-level building blocks: rank/select bit sequences, Elias δ streams,
//! Elias-Fano sequences and k²-trees.

pub mod bits;
pub mod delta;
pub mod elias_fano;
pub mod k2tree;

pub use bits::{BitReader, BitSequence, BitVec};
pub use delta::{delta_len, write_delta, BitCursor, BitSource, DeltaStream};
pub use elias_fano::EliasFano;
pub use k2tree::{K2Tree, DEFAULT_ARITY};
