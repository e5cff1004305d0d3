//! Test support for the bandscan workspace.
//!
//! [`oracle`] is the independent brute-force scanner used to cross-check the
//! production scan: it works on raw slices and shares no code with the
//! library. [`synth`] builds synthetic spectra, datasets, and on-disk
//! fixtures.

pub mod oracle;
pub mod synth;
