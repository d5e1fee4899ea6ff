pub mod cli;
pub mod cuts;
pub mod graph;
pub mod heuristics;
pub mod instances;
pub mod lp;
pub mod oracle;
pub mod separation;
pub mod solver;
