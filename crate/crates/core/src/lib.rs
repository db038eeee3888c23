pub mod basis;
pub mod driver;
pub mod hammer;
pub mod kernel;
pub mod reconstruct;
pub mod script;
pub mod session;
pub mod tptp;
