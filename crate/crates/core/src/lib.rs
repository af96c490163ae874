//! Construction of pseudo-labeled, instruction-templated training data from
//! plain-text corpora, mixing with labeled data under capped scenarios, and
//! zero-shot evaluation by rank classification and Rouge-L.
//!
//! The pipeline runs in stages that map onto the modules below:
//!
//! 1. [`corpus`] streams and normalizes documents with provenance.
//! 2. [`textkit`] provides the rule- and lexicon-based analysis primitives.
//! 3. [`constructors`] turns documents into cluster samples.
//! 4. [`templating`] renders samples into text-to-text examples.
//! 5. [`mixer`] caps, balances and mixes examples into train/valid files.
//! 6. [`evalkit`] scores rendered tasks against a pluggable backend.

pub mod constructors;
pub mod corpus;
pub mod evalkit;
pub mod mixer;
pub mod seed;
pub mod templating;
pub mod textkit;

pub use constructors::{Cluster, ClusterSample, PseudoSample};
pub use corpus::{Document, Domain};
pub use templating::{InstructionTemplate, Origin, TextToTextExample};
