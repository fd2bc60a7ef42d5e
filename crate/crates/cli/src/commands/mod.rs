pub mod bench;
pub mod solve;
pub mod structure;
