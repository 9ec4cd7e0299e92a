pub mod mask;
pub mod rational;
