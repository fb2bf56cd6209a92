//! Search engines for monochromatic configurations in finite grid colorings,
//! a backtracking solver for extremal avoidance colorings, and an exact
//! ℚ(√3) model of plane colorings with certified witness constructions.
//!
//! The grid side ([`grid`], [`rect`], [`homothety`], [`threshold`]) works on
//! finite k-colored windows. The solver side ([`solver`], [`check`]) builds
//! avoidance colorings or certifies that none exist. The plane side
//! ([`qr3`], [`point`], [`coloring`], [`coset`], [`shear`], [`witness`])
//! samples deterministic plane colorings over coset grids and turns grid
//! theorems into exactly verified plane witnesses; no floating point is
//! involved anywhere outside rendering helpers.

pub mod check;
pub mod coloring;
pub mod config;
pub mod coset;
pub mod grid;
pub mod homothety;
mod par;
pub mod point;
pub mod qr3;
pub mod rect;
pub mod shear;
pub mod solver;
pub mod threshold;
pub mod witness;

pub use check::{count_avoiding, count_avoiding_with_cap, verify_avoidance, CheckError};
pub use coloring::{
    certify_strip_triangle_avoidance, Domain, PlaneColoring, PlaneError, PlaneOracle,
    UnitSquareRestriction,
};
pub use config::{Configuration, Homothety};
pub use coset::{coset_grid_coloring, CosetGrid};
pub use grid::{GridColoring, GridError, MAX_COLORS};
pub use homothety::{enumerate_witnesses, find_homothetic_copy};
pub use point::PointE2;
pub use qr3::QR3;
pub use rect::{find_mono_rectangle, find_mono_square, RectangleWitness};
pub use shear::ShearMap;
pub use solver::{
    solve_avoidance, AvoidanceInstance, CellOrder, SolveError, SolveOptions, SolveOutcome,
    SolveStats,
};
pub use threshold::{forced_threshold, ThresholdBudget, ThresholdReport, Verdict};
pub use witness::{
    aspect_ratio_witness, homothetic_witness, homothetic_witness_scaled, parametric_witnesses,
    rectangle_witness, triangle_witness, unit_square_aspect_witness,
    unit_square_triangle_r_bound, unit_square_triangle_witness, verify_plane_witness,
    ParametricConstruction, ParametricOutcome, PlaneWitness, SourceSquare, WitnessKind,
};
