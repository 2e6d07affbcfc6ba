//! Bi-modal community detection over social-network data.
//!
//! The pipeline predicts reciprocal ties from node profile features, builds
//! structural similarity matrices for spectral and NMF clustering, measures
//! textual similarity between nodes through LDA topic distributions, and
//! joins the two modalities to detect small cohesive communities
//! (microcosms). Baseline detectors (Girvan-Newman, label propagation),
//! synthetic benchmark generators (LFR, planted partition) and partition
//! quality metrics (modularity, NMI, Rand/Jaccard) round out the toolkit.
//!
//! Everything is deterministic for a fixed seed. Inputs and outputs are plain
//! files; see the `ingest` module for the formats.

pub mod baselines;
pub mod error;
pub mod ingest;
pub mod mct;
pub mod metrics;
pub mod model;
pub mod nmf;
pub mod reciprocity;
pub mod spectral;
pub mod textual;

pub use error::{Error, Result};
