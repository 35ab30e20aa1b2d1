//! Graph-metric queries on maps and tree encodings: BFS, alignment, the star
//! events, star points along geodesics, covers and the discrete `D°`, `D*`.

mod cover;
mod events;
mod graph;
mod pseudo;

pub use cover::{
    cover_bounds, covering_number, exact_cover, packing_number, separated_points,
    separated_points_guarantee, CoverBounds, EXACT_COVER_BOUND,
};
pub use events::{
    event_a1, event_a1_report, event_a2, event_a2_report, geodesic_within, scale,
    star_points_on_geodesic, star_points_on_path, EventReport, StarReport,
};
pub use graph::{aligned, bfs, DistanceCache, DistanceField, Graph, UNREACHED};
pub use pseudo::{
    discrete_pseudo_metrics, DiscretePseudoMetrics, PseudoMetricError, PSEUDO_METRIC_BOUND,
};
