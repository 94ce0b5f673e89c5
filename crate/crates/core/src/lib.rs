pub mod numerics;
pub mod stablegraphs;
pub mod pixton;
pub mod strata;
pub mod trr;
pub mod cli;
