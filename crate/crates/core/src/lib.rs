pub mod arith;
pub mod basechange;
pub mod characters;
pub mod config;
pub mod cyclo;
pub mod eigensystem;
pub mod error;
pub mod ideals;
pub mod numeric;
pub mod padic;
pub mod quadfield;
pub mod recovery;
pub mod residues;
