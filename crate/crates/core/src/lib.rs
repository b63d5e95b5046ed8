//! Exact-arithmetic toolkit for antipodal labellings of triangulated
//! polytopes: Tucker/Sperner-type lemmas, a parity framework, and the
//! shell reduction between them.

pub mod complex;
pub mod geometry;
pub mod lp;
pub mod rational;
pub mod report;
pub mod generate;
pub mod labels;
pub mod theorems;
pub mod parity;
pub mod reduction;
pub mod batch;
