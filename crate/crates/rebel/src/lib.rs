//! File formats, synthetic experiments and the command-line front end for
//! [`rebel_core`].
//!
//! Class labels in files are arbitrary tokens. They map to class indices in
//! lexicographic token order, and models carry the token list so predictions
//! are written back in the original vocabulary.

pub mod error;
pub mod io;
pub mod oracle;
pub mod synth;

pub use error::{Error, Result};
