//! A desk-scale algorithmic-information laboratory.
//!
//! The crate pins down one tiny reference machine exactly — opcode by opcode,
//! bit by bit — and then measures it: exhaustive conditional-complexity
//! tables in both plain and prefix-free modes, the symmetry-of-information
//! constructions (cell grids, fat rows, the two-part index code), and the
//! finite randomness-deficiency analogs, all as executable verifications
//! whose constants are measured and pinned rather than hidden in O(·).
//!
//! Everything is exact and enumerable at small sizes; nothing here samples
//! or estimates. `None` is the honest answer for "above the table bound".

pub mod bits;
pub mod codes;
pub mod complexity;
pub mod lambalgen;
pub mod machine;
pub mod report;
pub mod soi;
pub mod verify;

pub use bits::Bits;
pub use complexity::Lab;
pub use machine::{Mode, MachineConfig};
