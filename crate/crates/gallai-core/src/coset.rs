//! Bounded windows of coset grids and the colorings they induce.

use crate::coloring::{PlaneColoring, PlaneError};
use crate::grid::GridColoring;
use crate::point::PointE2;
use crate::qr3::QR3;
use std::cmp::Ordering;

/// A finite sample window of the coset `base + step_x·ℤ × step_y·ℤ`.
#[derive(Clone, Debug)]
pub struct CosetGrid {
    base: PointE2,
    step_x: QR3,
    step_y: QR3,
    extent_x: u32,
    extent_y: u32,
}

impl CosetGrid {
    pub fn new(
        base: PointE2,
        step_x: QR3,
        step_y: QR3,
        extent_x: u32,
        extent_y: u32,
    ) -> Result<Self, PlaneError> {
        if step_x.sign() != Ordering::Greater {
            return Err(PlaneError::NonPositiveParameter(step_x.to_string()));
        }
        if step_y.sign() != Ordering::Greater {
            return Err(PlaneError::NonPositiveParameter(step_y.to_string()));
        }
        if extent_x == 0 || extent_y == 0 {
            return Err(crate::grid::GridError::EmptyDimensions {
                width: extent_x,
                height: extent_y,
            }
            .into());
        }
        Ok(CosetGrid { base, step_x, step_y, extent_x, extent_y })
    }

    /// The exact plane point of sample `(i, j)`.
    pub fn sample_point(&self, i: u32, j: u32) -> PointE2 {
        debug_assert!(i < self.extent_x && j < self.extent_y);
        let dx = self.step_x.scale(&num_rational::BigRational::from_integer(i.into()));
        let dy = self.step_y.scale(&num_rational::BigRational::from_integer(j.into()));
        PointE2::new(&self.base.x + &dx, &self.base.y + &dy)
    }

    pub fn base(&self) -> &PointE2 {
        &self.base
    }

    pub fn step_x(&self) -> &QR3 {
        &self.step_x
    }

    pub fn step_y(&self) -> &QR3 {
        &self.step_y
    }

    pub fn extent_x(&self) -> u32 {
        self.extent_x
    }

    pub fn extent_y(&self) -> u32 {
        self.extent_y
    }
}

/// Colors every sample of the coset window by the plane coloring. Cell
/// `(i, j)` of the result is the color of the exact sample point; the grid
/// inherits the plane's color count.
pub fn coset_grid_coloring(
    plane: &PlaneColoring,
    window: &CosetGrid,
) -> Result<GridColoring, PlaneError> {
    let mut cells = Vec::with_capacity((window.extent_x * window.extent_y) as usize);
    for j in 0..window.extent_y {
        for i in 0..window.extent_x {
            cells.push(plane.sample(&window.sample_point(i, j))?);
        }
    }
    Ok(GridColoring::new(window.extent_x, window.extent_y, plane.color_count(), cells)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn constant_plane_induces_constant_grid() {
        let plane = PlaneColoring::constant(3, 2).unwrap();
        let window =
            CosetGrid::new(PointE2::origin(), QR3::ratio(1, 7), QR3::one(), 4, 3).unwrap();
        let grid = coset_grid_coloring(&plane, &window).unwrap();
        assert_eq!(grid.colors(), 3);
        assert!(grid.cells().iter().all(|&c| c == 2));
    }

    #[test]
    fn strip_plane_with_step_one_strip_alternates_columns() {
        let plane = PlaneColoring::strip(q(1, 1), QR3::zero()).unwrap();
        let window = CosetGrid::new(
            PointE2::origin(),
            QR3::sqrt3_times(q(1, 2)),
            QR3::one(),
            4,
            2,
        )
        .unwrap();
        let grid = coset_grid_coloring(&plane, &window).unwrap();
        for j in 0..2 {
            assert_eq!(
                (0..4).map(|i| grid.cell(i, j)).collect::<Vec<_>>(),
                vec![0, 1, 0, 1],
                "row {j}"
            );
        }
    }

    #[test]
    fn periodic_plane_sampled_at_its_period_round_trips() {
        let stored = GridColoring::from_fn(5, 5, 4, |x, y| ((x * 3 + y * 7) % 4) as u8).unwrap();
        let plane = PlaneColoring::periodic(stored.clone(), q(1, 1), q(1, 1)).unwrap();
        let window = CosetGrid::new(PointE2::origin(), QR3::one(), QR3::one(), 5, 5).unwrap();
        let grid = coset_grid_coloring(&plane, &window).unwrap();
        assert_eq!(grid, stored);
    }

    #[test]
    fn domain_violations_name_the_offending_sample() {
        use crate::coloring::UnitSquareRestriction;
        use std::sync::Arc;
        let inner = PlaneColoring::constant(2, 0).unwrap();
        let plane = PlaneColoring::custom(Arc::new(UnitSquareRestriction { inner })).unwrap();
        let window = CosetGrid::new(PointE2::origin(), QR3::one(), QR3::one(), 3, 1).unwrap();
        let err = coset_grid_coloring(&plane, &window).unwrap_err();
        match err {
            PlaneError::DomainViolation { point, .. } => assert!(point.contains("2/1")),
            other => panic!("expected domain violation, got {other:?}"),
        }
    }
}
