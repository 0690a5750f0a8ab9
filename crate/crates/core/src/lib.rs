pub mod codec;
pub mod combinatorics;
pub mod dynamics;
pub mod error;
pub mod grid;
pub mod identities;
pub mod inverses;
pub mod operators;
pub mod poly;
pub mod real;
pub mod report;
pub mod roots;
pub mod sample;
pub mod scalar;
pub mod series;
pub mod text;
