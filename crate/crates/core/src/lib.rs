//! Heegaard Floer correction terms of double branched covers of alternating
//! 3-braid closures, computed from the black-graph quadratic form, together
//! with the nonorientable genus, Z2-norm and complexity bounds they imply.

pub mod blackgraph;
pub mod bounds;
pub mod braidlang;
pub mod cli;
pub mod dinv;
pub mod goeritz;
pub mod linalg;
pub mod openbook;
pub mod ratio_str;
pub mod spinc;
pub mod word;
