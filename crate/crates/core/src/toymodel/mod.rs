//! The toy model: configurations of point pairs on the integer grid, the
//! tori `Z_{p,q}`, their maximal-norm roses and descending spheres.

mod config;
mod torus;

pub use config::{config_to_graph, GridPoint, ToyConfiguration};
pub use torus::{
    block_rose, loop_intersection, max_norm_rose, morse_census, sphere_intersection, square_window, toy_certificate,
    toy_homology_rank, z_pq_cells, MorseCensus, SpherePoint, SphereReport, SquarePos, TorusCell, TorusCells,
    TorusClass, ToyCertificate,
};
