//! Peeky/Stretchy synthetic vision toolkit.
//!
//! This crate procedurally generates a two-class dataset of abstract block
//! animals whose generative attributes (legs' position, color, shape,
//! background, posture) can be biased individually, renders it with a
//! deterministic CPU ray marcher, trains desk-scale models on it (a small
//! convnet, an attribute probe, and an invertible flow with a linear head),
//! quantifies ground-truth feature importance via single-attribute
//! interventions, composes the three explanation grids used for bias
//! discovery (baseline, counterfactual, concepts), and analyzes study
//! response files with a pre-registered nonparametric test battery.
//!
//! Entry points:
//! - [`scene`]: attribute space and biased samplers.
//! - [`render`]: signed-distance-field renderer producing images and masks.
//! - [`dataset`]: split generation, manifests, and intervention pairs.
//! - [`nnet`]: minimal tensor/layer core with manual backpropagation.
//! - [`flow`]: invertible feature map with exact counterfactual control.
//! - [`importance`]: prediction-flip / logit-change / R² metrics.
//! - [`explain`]: baseline, counterfactual, and concept grids.
//! - [`stats`]: exact McNemar, Kruskal-Wallis, rank-sum, Shapiro-Wilk, etc.
//! - [`cli`]: the `two4two` command-line pipelines.
//!
//! The `examples/` directory contains one runnable example per capability;
//! `src/main.rs` is a thin wrapper around [`cli::run`].

pub mod cli;
pub mod dataset;
pub mod error;
pub mod explain;
pub mod flow;
pub mod importance;
pub mod nnet;
pub mod render;
pub mod rng;
pub mod scene;
pub mod stats;

pub use error::{Error, Result};
