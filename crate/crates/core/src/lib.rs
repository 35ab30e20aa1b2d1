//! Uniform random plane quadrangulations and their bijective encodings.
//!
//! The crate is organised bottom-up:
//!
//! * [`planar_map`]: rooted maps as dart permutations, canonical codes and
//!   brute-force enumeration;
//! * [`encodings`]: labeled trees and forests, contour sequences, Motzkin
//!   walk counts and discrete snakes;
//! * [`cvs`]: the tree to pointed quadrangulation construction and the
//!   uniform sampler built on it;
//! * [`multipoint`]: delayed multi-pointed quadrangulations, the reverse
//!   construction from labeled maps, liquid partitions and geodesic stars;
//! * [`schemes`]: schemes, their enumeration, the decomposition of labeled
//!   maps and exact counting;
//! * [`metric`]: BFS-based metric queries, star events and covers;
//! * [`experiments`]: the seeded Monte Carlo harness behind the CLI.

pub mod planar_map;
pub mod encodings;
pub mod metric;
pub mod multipoint;
pub mod cvs;
pub mod schemes;
pub mod experiments;
