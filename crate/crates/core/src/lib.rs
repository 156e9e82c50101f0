pub mod dsl;
pub mod lingware;
pub mod generator;
pub mod parser;
pub mod session;
pub mod tfs;
pub mod transfer;
