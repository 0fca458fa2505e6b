pub mod grammar;
pub mod iu_types;
pub mod metatheory;
pub mod reduction;
pub mod simple_types;
pub mod syntax;
pub mod typelang;
