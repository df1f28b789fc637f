pub mod chen;
pub mod cluster;
pub mod featurize;
pub mod landscape;
pub mod pca;
pub mod permtest;
pub mod synth;
