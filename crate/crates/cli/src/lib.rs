//! Front end for the tiltbase engine: documents, the built-in corpus,
//! reports and the command implementations behind the binary.

pub mod document;
pub mod commands;
pub mod corpus;
pub mod report;
