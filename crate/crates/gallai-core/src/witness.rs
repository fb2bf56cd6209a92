//! Certified monochromatic plane figures.
//!
//! Every constructor samples a coset window of a plane coloring, runs a
//! grid search on the induced finite coloring, and maps the grid witness
//! back to exact plane points. A witness records everything needed to
//! re-verify it: the exact vertices, the color, the coset parameter `r`,
//! the grid multiple, the source grid coordinates, and the coloring's
//! registry string. `None` from the bounded constructors means
//! not-found-within-window, never nonexistence.

use crate::coloring::{PlaneColoring, PlaneError};
use crate::config::Configuration;
use crate::coset::{coset_grid_coloring, CosetGrid};
use crate::grid::GridColoring;
use crate::par;
use crate::point::PointE2;
use crate::qr3::{frac_string, parse_frac, QR3};
use crate::rect::{find_mono_rectangle, find_mono_square};
use crate::shear::ShearMap;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};
use std::cmp::Ordering;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Rectangle,
    Triangle,
    HomotheticCopy,
}

/// Grid coordinates the witness was lifted from: lower-left corner plus
/// side multiples (for homothetic copies, `d1 = d2 = dilation`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSquare {
    pub x: i64,
    pub y: i64,
    pub d1: u32,
    pub d2: u32,
}

mod frac {
    use super::*;
    use serde::de::Error as _;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&frac_string(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let text = String::deserialize(d)?;
        parse_frac(&text).map_err(D::Error::custom)
    }
}

/// A certified monochromatic figure with exact vertices.
///
/// For rectangles the vertex order is lower-left, lower-right, upper-left,
/// upper-right; `multiple` is the width multiple `d1` (the full pair lives
/// in `source`). For triangles the order is the two base vertices then the
/// apex-side vertex, and the side is exactly `r · multiple`. For homothetic
/// copies the vertices follow the configuration's canonical point order and
/// `multiple` is the lattice dilation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneWitness {
    pub kind: WitnessKind,
    pub color: u8,
    pub vertices: Vec<PointE2>,
    #[serde(with = "frac")]
    pub r: BigRational,
    pub multiple: u32,
    pub source: SourceSquare,
    pub coloring: String,
}

impl PlaneWitness {
    /// `r · multiple`, the exact figure scale (triangle side, square width).
    pub fn side_length(&self) -> BigRational {
        &self.r * BigRational::from_integer(BigInt::from(self.multiple))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("witnesses serialize")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, PlaneError> {
        let text = std::fs::read_to_string(path).map_err(crate::grid::GridError::from)?;
        Self::from_json(&text)
            .map_err(|e| PlaneError::Registry("witness json".into(), e.to_string()))
    }
}

fn require_positive(r: &BigRational) -> Result<(), PlaneError> {
    if r.is_positive() {
        Ok(())
    } else {
        Err(PlaneError::NonPositiveParameter(frac_string(r)))
    }
}

fn require_two_colors(plane: &PlaneColoring) -> Result<(), PlaneError> {
    match plane.color_count() {
        2 => Ok(()),
        k => Err(PlaneError::NotTwoColors(k)),
    }
}

/// Reduces a point into the fundamental cell `[0, mx) × [0, my)`.
fn reduce_base(base: &PointE2, mx: &QR3, my: &QR3) -> PointE2 {
    PointE2::new(base.x.rem_floor(mx), base.y.rem_floor(my))
}

/// Monochromatic rectangle with sides integer multiples of `r`, searched in
/// the coset `base + rℤ × rℤ` over a `window × window` sample.
pub fn rectangle_witness(
    plane: &PlaneColoring,
    r: &BigRational,
    base: &PointE2,
    window: u32,
) -> Result<Option<PlaneWitness>, PlaneError> {
    require_positive(r)?;
    let step = QR3::rational(r.clone());
    let base = reduce_base(base, &step, &step);
    let coset = CosetGrid::new(base, step.clone(), step, window, window)?;
    let grid = coset_grid_coloring(plane, &coset)?;
    Ok(find_mono_rectangle(&grid).map(|w| {
        let vertex = |dx: u32, dy: u32| coset.sample_point(w.x + dx, w.y + dy);
        PlaneWitness {
            kind: WitnessKind::Rectangle,
            color: w.color,
            vertices: vec![
                vertex(0, 0),
                vertex(w.d1, 0),
                vertex(0, w.d2),
                vertex(w.d1, w.d2),
            ],
            r: r.clone(),
            multiple: w.d1,
            source: SourceSquare { x: w.x.into(), y: w.y.into(), d1: w.d1, d2: w.d2 },
            coloring: plane.registry(),
        }
    }))
}

/// Monochromatic rectangle of aspect ratio exactly `r`, lifted from a
/// monochromatic square of the coset `base + rℤ × ℤ`.
pub fn aspect_ratio_witness(
    plane: &PlaneColoring,
    r: &BigRational,
    base: &PointE2,
    window: u32,
) -> Result<Option<PlaneWitness>, PlaneError> {
    require_positive(r)?;
    let step_x = QR3::rational(r.clone());
    let step_y = QR3::one();
    let base = reduce_base(base, &step_x, &step_y);
    let coset = CosetGrid::new(base, step_x, step_y, window, window)?;
    let grid = coset_grid_coloring(plane, &coset)?;
    Ok(find_mono_square(&grid).map(|w| square_to_rectangle(plane, &coset, r, w)))
}

fn square_to_rectangle(
    plane: &PlaneColoring,
    coset: &CosetGrid,
    r: &BigRational,
    w: crate::rect::RectangleWitness,
) -> PlaneWitness {
    debug_assert!(w.is_square());
    let d = w.d1;
    let vertex = |dx: u32, dy: u32| coset.sample_point(w.x + dx, w.y + dy);
    PlaneWitness {
        kind: WitnessKind::Rectangle,
        color: w.color,
        vertices: vec![vertex(0, 0), vertex(d, 0), vertex(0, d), vertex(d, d)],
        r: r.clone(),
        multiple: d,
        source: SourceSquare { x: w.x.into(), y: w.y.into(), d1: d, d2: d },
        coloring: plane.registry(),
    }
}

/// Monochromatic rectangle of aspect ratio `r ∈ (0,1)` inside the unit
/// square, from the 15-sample coset `base + (r·A) × A`, `A = {0, 1/15, …,
/// 14/15}`. Any 2-coloring of a 15×15 grid contains a monochromatic square,
/// so a missing witness is a hard inconsistency, not a search miss.
pub fn unit_square_aspect_witness(
    plane: &PlaneColoring,
    r: &BigRational,
    base: &PointE2,
) -> Result<PlaneWitness, PlaneError> {
    require_two_colors(plane)?;
    require_positive(r)?;
    if r >= &BigRational::one() {
        return Err(PlaneError::AspectOutOfRange(frac_string(r)));
    }
    let fifteenth = BigRational::new(BigInt::from(1), BigInt::from(15));
    let step_x = QR3::rational(r * &fifteenth);
    let step_y = QR3::rational(fifteenth);
    let base = reduce_base(base, &step_x, &step_y);
    let coset = CosetGrid::new(base, step_x, step_y, 15, 15)?;
    let grid = coset_grid_coloring(plane, &coset)?;
    match find_mono_square(&grid) {
        Some(w) => Ok(square_to_rectangle(plane, &coset, r, w)),
        None => Err(PlaneError::Inconsistency),
    }
}

/// Samples the sheared lattice coloring `(n, m) ↦ plane(φ(n + bx, m + by))`.
fn sheared_window(
    plane: &PlaneColoring,
    phi: &ShearMap,
    offset: &PointE2,
    extent: u32,
) -> Result<GridColoring, PlaneError> {
    let mut cells = Vec::with_capacity((extent as usize) * (extent as usize));
    for m in 0..extent {
        let v = &QR3::integer(m.into()) + &offset.y;
        for n in 0..extent {
            let u = &QR3::integer(n.into()) + &offset.x;
            cells.push(plane.sample(&phi.apply(&u, &v))?);
        }
    }
    Ok(GridColoring::new(extent, extent, plane.color_count(), cells)?)
}

fn square_to_triangle(
    plane: &PlaneColoring,
    phi: &ShearMap,
    offset: &PointE2,
    w: crate::rect::RectangleWitness,
) -> PlaneWitness {
    debug_assert!(w.is_square());
    let d = w.d1;
    let vertex = |dx: u32, dy: u32| {
        let u = &QR3::integer((w.x + dx).into()) + &offset.x;
        let v = &QR3::integer((w.y + dy).into()) + &offset.y;
        phi.apply(&u, &v)
    };
    // Lower-left, lower-right, and upper-left corners of the rhombus: the
    // 60°-angle half, a homothetic copy of the unit equilateral triangle.
    PlaneWitness {
        kind: WitnessKind::Triangle,
        color: w.color,
        vertices: vec![vertex(0, 0), vertex(d, 0), vertex(0, d)],
        r: phi.r().clone(),
        multiple: d,
        source: SourceSquare { x: w.x.into(), y: w.y.into(), d1: d, d2: d },
        coloring: plane.registry(),
    }
}

/// Monochromatic equilateral triangle homothetic to the unit triangle, with
/// side an exact integer multiple of `r`, found through the shear map.
pub fn triangle_witness(
    plane: &PlaneColoring,
    r: &BigRational,
    base_offset: &PointE2,
    window: u32,
) -> Result<Option<PlaneWitness>, PlaneError> {
    let phi = ShearMap::new(r.clone())?;
    let one = QR3::one();
    let offset = reduce_base(base_offset, &one, &one);
    let grid = sheared_window(plane, &phi, &offset, window)?;
    Ok(find_mono_square(&grid).map(|w| square_to_triangle(plane, &phi, &offset, w)))
}

/// The largest `r` for which the sheared 15×15 window fits in the unit square.
pub fn unit_square_triangle_r_bound() -> BigRational {
    BigRational::new(BigInt::from(2), BigInt::from(45))
}

/// Monochromatic equilateral triangle inside the unit square for
/// `0 < r ≤ 2/45`, via the sheared 15×15 window. Like the aspect version,
/// a missing square is an inconsistency in the oracle, not a search miss.
pub fn unit_square_triangle_witness(
    plane: &PlaneColoring,
    r: &BigRational,
    base_offset: &PointE2,
) -> Result<PlaneWitness, PlaneError> {
    require_two_colors(plane)?;
    if !r.is_positive() || r > &unit_square_triangle_r_bound() {
        return Err(PlaneError::ROutOfRange(frac_string(r)));
    }
    let phi = ShearMap::new(r.clone())?;
    let one = QR3::one();
    let offset = reduce_base(base_offset, &one, &one);
    let grid = sheared_window(plane, &phi, &offset, 15)?;
    match find_mono_square(&grid) {
        Some(w) => Ok(square_to_triangle(plane, &phi, &offset, w)),
        None => Err(PlaneError::Inconsistency),
    }
}

/// Monochromatic homothetic copy of `config` in the coset
/// `base + (r·ℤ) × (r·ℤ)`, searched over a `window × window` sample.
pub fn homothetic_witness_scaled(
    plane: &PlaneColoring,
    config: &Configuration,
    r: &BigRational,
    base: &PointE2,
    window: u32,
) -> Result<Option<PlaneWitness>, PlaneError> {
    require_positive(r)?;
    let step = QR3::rational(r.clone());
    let base = reduce_base(base, &step, &step);
    let coset = CosetGrid::new(base, step.clone(), step, window, window)?;
    let grid = coset_grid_coloring(plane, &coset)?;
    Ok(crate::homothety::find_homothetic_copy(&grid, config).map(|(hom, color)| {
        let vertices = config
            .points()
            .iter()
            .map(|&p| {
                let (x, y) = hom.apply(p);
                coset.sample_point(x as u32, y as u32)
            })
            .collect();
        PlaneWitness {
            kind: WitnessKind::HomotheticCopy,
            color,
            vertices,
            r: r.clone(),
            multiple: hom.dilation as u32,
            source: SourceSquare {
                x: hom.translate_x,
                y: hom.translate_y,
                d1: hom.dilation as u32,
                d2: hom.dilation as u32,
            },
            coloring: plane.registry(),
        }
    }))
}

/// Monochromatic homothetic copy of `config` in the unit coset
/// `base + ℤ × ℤ`.
pub fn homothetic_witness(
    plane: &PlaneColoring,
    config: &Configuration,
    base: &PointE2,
    window: u32,
) -> Result<Option<PlaneWitness>, PlaneError> {
    homothetic_witness_scaled(plane, config, &BigRational::one(), base, window)
}

/// Which construction a parametric batch runs, with its fixed arguments.
#[derive(Clone, Debug)]
pub enum ParametricConstruction<'a> {
    Rectangle { base: PointE2, window: u32 },
    AspectRatio { base: PointE2, window: u32 },
    UnitSquareAspect { base: PointE2 },
    Triangle { base: PointE2, window: u32 },
    UnitSquareTriangle { base: PointE2 },
    Homothetic { config: &'a Configuration, base: PointE2, window: u32 },
}

/// One parameter's result; errors stay isolated per parameter.
#[derive(Debug)]
pub struct ParametricOutcome {
    pub r: BigRational,
    pub outcome: Result<Option<PlaneWitness>, PlaneError>,
}

impl ParametricOutcome {
    /// Exact side length of a found witness.
    pub fn side_length(&self) -> Option<BigRational> {
        match &self.outcome {
            Ok(Some(w)) => Some(w.side_length()),
            _ => None,
        }
    }
}

/// Runs one construction per parameter. One parameter's failure never
/// aborts the batch; the outcomes preserve parameter order.
pub fn parametric_witnesses(
    plane: &PlaneColoring,
    construction: &ParametricConstruction<'_>,
    params: &[BigRational],
) -> Vec<ParametricOutcome> {
    let runs: Vec<BigRational> = params.to_vec();
    par::map_indexed(runs, |r| {
        let outcome = match construction {
            ParametricConstruction::Rectangle { base, window } => {
                rectangle_witness(plane, &r, base, *window)
            }
            ParametricConstruction::AspectRatio { base, window } => {
                aspect_ratio_witness(plane, &r, base, *window)
            }
            ParametricConstruction::UnitSquareAspect { base } => {
                unit_square_aspect_witness(plane, &r, base).map(Some)
            }
            ParametricConstruction::Triangle { base, window } => {
                triangle_witness(plane, &r, base, *window)
            }
            ParametricConstruction::UnitSquareTriangle { base } => {
                unit_square_triangle_witness(plane, &r, base).map(Some)
            }
            ParametricConstruction::Homothetic { config, base, window } => {
                homothetic_witness_scaled(plane, config, &r, base, *window)
            }
        };
        ParametricOutcome { r, outcome }
    })
}

/// Re-verifies a witness: every vertex re-colors to the recorded color and
/// the exact kind-specific geometry holds. For homothetic copies the source
/// configuration pins the expected shape when provided; otherwise the
/// vertices are checked to be a single dilation of some lattice pattern.
pub fn verify_plane_witness(
    witness: &PlaneWitness,
    plane: &PlaneColoring,
    config: Option<&Configuration>,
) -> Result<(), PlaneError> {
    for v in &witness.vertices {
        let got = plane.sample(v)?;
        if got != witness.color {
            return Err(PlaneError::WitnessColor {
                vertex: v.to_string(),
                expected: witness.color,
                got,
            });
        }
    }
    if witness.multiple == 0 {
        return Err(PlaneError::WitnessGeometry("multiple must be positive".into()));
    }
    if !witness.r.is_positive() {
        return Err(PlaneError::WitnessGeometry("r must be positive".into()));
    }
    let geo = |msg: &str| Err(PlaneError::WitnessGeometry(msg.into()));
    match witness.kind {
        WitnessKind::Rectangle => {
            let [ll, lr, ul, ur] = match witness.vertices.as_slice() {
                [a, b, c, d] => [a, b, c, d],
                _ => return geo("rectangles have four vertices"),
            };
            let width = &lr.x - &ll.x;
            let height = &ul.y - &ll.y;
            if width.sign() != Ordering::Greater || height.sign() != Ordering::Greater {
                return geo("rectangle sides must be positive");
            }
            if lr.y != ll.y || ul.x != ll.x {
                return geo("rectangle sides must be axis-parallel");
            }
            if ur.x != lr.x || ur.y != ul.y {
                return geo("fourth corner must close the rectangle");
            }
        }
        WitnessKind::Triangle => {
            let [a, b, c] = match witness.vertices.as_slice() {
                [a, b, c] => [a, b, c],
                _ => return geo("triangles have three vertices"),
            };
            let side = QR3::rational(witness.side_length());
            let half = BigRational::new(BigInt::from(1), BigInt::from(2));
            // Exact homothetic copy of {(0,0), (1,0), (1/2, √3/2)}.
            let expect_b = PointE2::new(&a.x + &side, a.y.clone());
            let expect_c = PointE2::new(
                &a.x + &side.scale(&half),
                &a.y + &QR3::sqrt3_times(side.rational_part() * &half),
            );
            if *b != expect_b || *c != expect_c {
                return geo("vertices are not a translated dilation of the unit triangle");
            }
            let s2 = &side * &side;
            if a.squared_distance(b) != s2
                || a.squared_distance(c) != s2
                || b.squared_distance(c) != s2
            {
                return geo("pairwise squared distances must all equal (r·multiple)²");
            }
        }
        WitnessKind::HomotheticCopy => {
            let scale = QR3::rational(witness.side_length());
            let first = match witness.vertices.first() {
                Some(f) => f,
                None => return geo("homothetic copies have at least one vertex"),
            };
            match config {
                Some(config) => {
                    if config.len() != witness.vertices.len() {
                        return geo("vertex count differs from the configuration");
                    }
                    let p0 = config.points()[0];
                    for (&(px, py), v) in config.points().iter().zip(&witness.vertices) {
                        let ex = &first.x + &scale.scale(&BigRational::from_integer((px - p0.0).into()));
                        let ey = &first.y + &scale.scale(&BigRational::from_integer((py - p0.1).into()));
                        if v.x != ex || v.y != ey {
                            return geo("vertices are not the dilated translated configuration");
                        }
                    }
                }
                None => {
                    for v in &witness.vertices {
                        for (delta, axis) in [(&v.x - &first.x, "x"), (&v.y - &first.y, "y")] {
                            let q = delta.scale(&witness.side_length().recip());
                            if !q.is_rational() || !q.rational_part().is_integer() {
                                return geo(&format!(
                                    "{axis} offsets must be integer multiples of r·multiple"
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn constant2() -> PlaneColoring {
        PlaneColoring::constant(2, 0).unwrap()
    }

    #[test]
    fn constant_plane_rectangle_is_the_unit_cell() {
        let w = rectangle_witness(&constant2(), &q(1, 1), &PointE2::origin(), 2)
            .unwrap()
            .unwrap();
        assert_eq!(w.vertices[0], PointE2::origin());
        assert_eq!(w.vertices[3], PointE2::rational(q(1, 1), q(1, 1)));
        assert_eq!(w.source, SourceSquare { x: 0, y: 0, d1: 1, d2: 1 });
        verify_plane_witness(&w, &constant2(), None).unwrap();
    }

    #[test]
    fn base_points_reduce_into_the_fundamental_cell() {
        let base = PointE2::rational(q(7, 3), q(-1, 4)); // reduces mod 1 to (1/3, 3/4)
        let w = rectangle_witness(&constant2(), &q(1, 1), &base, 2).unwrap().unwrap();
        assert_eq!(w.vertices[0], PointE2::rational(q(1, 3), q(3, 4)));
    }

    #[test]
    fn aspect_ratio_is_exact() {
        let w = aspect_ratio_witness(&constant2(), &q(1, 2), &PointE2::origin(), 2)
            .unwrap()
            .unwrap();
        let width = &w.vertices[1].x - &w.vertices[0].x;
        let height = &w.vertices[2].y - &w.vertices[0].y;
        assert_eq!(width, QR3::ratio(1, 2));
        assert_eq!(height, QR3::one());
        verify_plane_witness(&w, &constant2(), None).unwrap();
    }

    #[test]
    fn unit_square_aspect_witness_on_constant_plane() {
        let w = unit_square_aspect_witness(&constant2(), &q(1, 2), &PointE2::origin()).unwrap();
        assert_eq!(
            w.vertices,
            vec![
                PointE2::origin(),
                PointE2::rational(q(1, 30), q(0, 1)),
                PointE2::rational(q(0, 1), q(1, 15)),
                PointE2::rational(q(1, 30), q(1, 15)),
            ]
        );
        // width / height = r exactly.
        let width = q(1, 30);
        let height = q(1, 15);
        assert_eq!(width / height, q(1, 2));
    }

    #[test]
    fn triangle_witness_on_constant_plane_is_the_unit_triangle() {
        let w = triangle_witness(&constant2(), &q(1, 1), &PointE2::origin(), 2)
            .unwrap()
            .unwrap();
        assert_eq!(w.multiple, 1);
        assert_eq!(w.vertices[0], PointE2::origin());
        assert_eq!(w.vertices[1], PointE2::rational(q(1, 1), q(0, 1)));
        assert_eq!(
            w.vertices[2],
            PointE2::new(QR3::ratio(1, 2), QR3::sqrt3_times(q(1, 2)))
        );
        verify_plane_witness(&w, &constant2(), None).unwrap();
    }

    #[test]
    fn unit_square_triangle_rejects_r_above_the_bound() {
        let err =
            unit_square_triangle_witness(&constant2(), &q(1, 20), &PointE2::origin()).unwrap_err();
        assert!(matches!(err, PlaneError::ROutOfRange(_)));
        assert!(err.to_string().contains("2/45"));
    }

    #[test]
    fn unit_square_triangle_at_the_bound_stays_inside() {
        let r = unit_square_triangle_r_bound();
        let w = unit_square_triangle_witness(&constant2(), &r, &PointE2::origin()).unwrap();
        assert_eq!(w.side_length(), r);
        assert!(w.vertices.iter().all(|v| v.in_closed_unit_square()));
        verify_plane_witness(&w, &constant2(), None).unwrap();
    }

    #[test]
    fn homothetic_witness_single_point_is_the_base() {
        let config = Configuration::new([(0, 0)]).unwrap();
        let base = PointE2::rational(q(1, 3), q(2, 3));
        let w = homothetic_witness(&constant2(), &config, &base, 1).unwrap().unwrap();
        assert_eq!(w.vertices, vec![base]);
        assert_eq!(w.multiple, 1);
    }

    #[test]
    fn homothetic_witness_matches_configuration_shape() {
        let config = Configuration::new([(0, 0), (1, 0), (2, 1)]).unwrap();
        let w = homothetic_witness(&constant2(), &config, &PointE2::origin(), 3)
            .unwrap()
            .unwrap();
        assert_eq!(w.multiple, 1);
        assert_eq!(w.vertices.len(), 3);
        verify_plane_witness(&w, &constant2(), Some(&config)).unwrap();
    }

    #[test]
    fn parametric_batch_isolates_failures_and_preserves_order() {
        let plane = constant2();
        let construction =
            ParametricConstruction::Rectangle { base: PointE2::origin(), window: 2 };
        let params = vec![q(1, 1), q(-1, 1), q(3, 1)];
        let out = parametric_witnesses(&plane, &construction, &params);
        assert_eq!(out.len(), 3);
        assert!(out[0].outcome.as_ref().unwrap().is_some());
        assert!(out[1].outcome.is_err());
        let w = out[2].outcome.as_ref().unwrap().as_ref().unwrap();
        assert_eq!(w.side_length(), q(3, 1));
        assert!(parametric_witnesses(&plane, &construction, &[]).is_empty());
    }

    #[test]
    fn rectangle_sides_scale_with_the_parameter() {
        let plane = constant2();
        let construction =
            ParametricConstruction::Rectangle { base: PointE2::origin(), window: 2 };
        let out = parametric_witnesses(&plane, &construction, &[q(1, 1), q(2, 1), q(3, 1)]);
        let sides: Vec<_> = out.iter().map(|o| o.side_length().unwrap()).collect();
        assert_eq!(sides, vec![q(1, 1), q(2, 1), q(3, 1)]);
    }

    #[test]
    fn witness_json_round_trips_exactly() {
        let w = triangle_witness(&constant2(), &q(2, 45), &PointE2::origin(), 15)
            .unwrap()
            .unwrap();
        let json = w.to_json();
        let back = PlaneWitness::from_json(&json).unwrap();
        assert_eq!(back, w);
        assert!(json.contains("\"kind\": \"triangle\""));
        assert!(json.contains("\"coloring\": \"constant:k=2,c=0\""));
    }

    #[test]
    fn verification_rejects_recolored_vertices() {
        let w = rectangle_witness(&constant2(), &q(1, 1), &PointE2::origin(), 2)
            .unwrap()
            .unwrap();
        let other = PlaneColoring::constant(2, 1).unwrap();
        assert!(matches!(
            verify_plane_witness(&w, &other, None),
            Err(PlaneError::WitnessColor { .. })
        ));
    }

    #[test]
    fn verification_rejects_bent_geometry() {
        let mut w = rectangle_witness(&constant2(), &q(1, 1), &PointE2::origin(), 2)
            .unwrap()
            .unwrap();
        w.vertices[3] = PointE2::rational(q(2, 1), q(1, 1));
        assert!(matches!(
            verify_plane_witness(&w, &constant2(), None),
            Err(PlaneError::WitnessGeometry(_))
        ));
    }
}
