pub mod algebra;
pub mod cli;
pub mod complex;
pub mod engine;
pub mod gapio;
pub mod garside;
pub mod homology;
pub mod matrix;
pub mod perm;
pub mod reference;
pub mod salvetti;
pub mod smith;
pub mod specialize;
