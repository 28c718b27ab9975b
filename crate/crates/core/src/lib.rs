pub mod cli;
pub mod corpus;
pub mod omitting;
pub mod parser;
pub mod rational;
pub mod semantics;
pub mod signature;
pub mod structure;
pub mod syntax;
pub mod ultraproduct;
