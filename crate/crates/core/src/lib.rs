//! Polynomially balanced right-ideal morphisms over binary words.
pub mod fixtures;
pub mod inversion;
pub mod lab;
pub mod machine;
pub mod morphism;
pub mod padding;
pub mod suites;
pub mod word;
