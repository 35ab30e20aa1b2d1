//! Tree-side encodings: labeled trees and forests, contour sequences,
//! Motzkin walk counts and discrete snakes.

mod forest;
mod motzkin;
mod tree;

pub use forest::{forest_of_snake, sample_forest, snake_of_forest, DiscreteSnake, LabeledForest};
pub use motzkin::{motzkin_count, motzkin_count_positive, MotzkinTable, MotzkinWalk};
pub use tree::{
    all_dyck_paths, all_labeled_trees, contour_of_tree, sample_dyck_path, sample_labeled_tree,
    tree_of_contour, ContourEncoding, LabeledTree,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EncodingError {
    #[error("malformed tree: {0}")]
    MalformedTree(&'static str),
    #[error("malformed contour: {0}")]
    MalformedContour(&'static str),
    #[error("malformed walk: {0}")]
    MalformedWalk(&'static str),
    #[error("malformed forest: {0}")]
    MalformedForest(&'static str),
    #[error("malformed snake: {0}")]
    MalformedSnake(&'static str),
}
