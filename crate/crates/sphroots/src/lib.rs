pub mod cli;
pub mod degen;
pub mod engine;
pub mod lattice;
pub mod levi;
pub mod rootsystem;
pub mod sphdata;
pub mod subgroup;

mod expr;
