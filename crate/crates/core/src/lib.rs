pub mod abelian;
pub mod diagram;
pub mod gen;
pub mod moves;
pub mod parity;
pub mod universal;
