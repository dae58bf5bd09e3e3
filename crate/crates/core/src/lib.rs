//! Isometry groups and point homogeneity degrees of finite metric spaces.

pub mod autgroup;
pub mod catalog;
pub mod cli;
pub mod distmat;
pub mod geometry;
pub mod homogeneity;
pub mod oracle;
pub mod permgroup;
pub mod scalar;
