pub mod arith;
pub mod cli;
pub mod density;
pub mod exactnum;
pub mod localfield;
pub mod modular;
pub mod ratio;
pub mod weights;
