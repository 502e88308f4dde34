//! Exact computations in Higman-Thompson groups and full groups of
//! shifts of finite type.

pub mod characters;
pub mod exactnum;
pub mod fixtures;
pub mod plgroup;
pub mod sft;
pub mod suite;
pub mod witness;
