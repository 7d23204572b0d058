pub mod algred;
pub mod cli;
pub mod diffpoly;
pub mod essanalysis;
pub mod multipoly;
pub mod parse;
pub mod pipeline;
pub mod report;
pub mod resultant;
pub mod seed;
