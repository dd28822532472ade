//! Exact symbolic calculus for algebras of partial isometries over sequence ideals.

pub mod cli;
pub mod cohn;
pub mod crossed;
pub mod decomp;
pub mod gami;
pub mod pinj;
pub mod random;
pub mod scalars;
pub mod seqspace;
pub mod suites;
pub mod sumring;
