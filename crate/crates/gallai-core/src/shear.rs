//! The shear map carrying the integer lattice onto a triangular lattice.
//!
//! For a positive rational `r`, the map sends `(1, 0) ↦ (r, 0)` and
//! `(0, 1) ↦ (r/2, r·√3/2)`. It carries every lattice square of side `d`
//! to a rhombus with all four sides of length `r·d` and a 60° acute angle,
//! whose lower triangle is a homothetic copy of the unit equilateral
//! triangle `{(0,0), (1,0), (1/2, √3/2)}`.

use crate::coloring::PlaneError;
use crate::point::PointE2;
use crate::qr3::{frac_string, QR3};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

#[derive(Clone, Debug)]
pub struct ShearMap {
    r: BigRational,
}

impl ShearMap {
    pub fn new(r: BigRational) -> Result<Self, PlaneError> {
        if !r.is_positive() {
            return Err(PlaneError::NonPositiveParameter(frac_string(&r)));
        }
        Ok(ShearMap { r })
    }

    pub fn r(&self) -> &BigRational {
        &self.r
    }

    /// Image of a lattice point `(n, m)`: `(r·(n + m/2), r·m·√3/2)`.
    pub fn apply_lattice(&self, n: i64, m: i64) -> PointE2 {
        self.apply(&QR3::integer(n), &QR3::integer(m))
    }

    /// Linear extension to arbitrary exact coordinates.
    pub fn apply(&self, u: &QR3, v: &QR3) -> PointE2 {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        let x = (u + &v.scale(&half)).scale(&self.r);
        // v·√3: (a + b√3)·√3 = 3b + a√3.
        let v_sqrt3 = QR3::new(
            v.sqrt3_coefficient() * BigRational::from_integer(BigInt::from(3)),
            v.rational_part().clone(),
        );
        let y = v_sqrt3.scale(&(&self.r * half));
        PointE2::new(x, y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn basis_vectors_map_as_declared() {
        let phi = ShearMap::new(q(2, 5)).unwrap();
        let e1 = phi.apply_lattice(1, 0);
        assert_eq!(e1, PointE2::new(QR3::ratio(2, 5), QR3::zero()));
        let e2 = phi.apply_lattice(0, 1);
        assert_eq!(e2, PointE2::new(QR3::ratio(1, 5), QR3::sqrt3_times(q(1, 5))));
    }

    #[test]
    fn unit_square_maps_to_rhombus_with_equal_sides_and_sixty_degrees() {
        let phi = ShearMap::new(q(1, 1)).unwrap();
        let ll = phi.apply_lattice(0, 0);
        let lr = phi.apply_lattice(1, 0);
        let ul = phi.apply_lattice(0, 1);
        let ur = phi.apply_lattice(1, 1);
        let s = QR3::one(); // (r·d)² with r = d = 1
        assert_eq!(lr.squared_distance(&ll), s);
        assert_eq!(ul.squared_distance(&ll), s);
        assert_eq!(ur.squared_distance(&lr), s);
        assert_eq!(ur.squared_distance(&ul), s);
        // cos 60° = 1/2: adjacent sides dot to (r·d)²/2.
        assert_eq!(lr.dot_from(&ll, &ul), QR3::ratio(1, 2));
    }

    #[test]
    fn extension_to_field_coordinates_is_linear() {
        let phi = ShearMap::new(q(3, 7)).unwrap();
        let a = phi.apply(&QR3::ratio(1, 2), &QR3::sqrt3());
        let b = phi.apply_lattice(0, 0);
        // φ(u+v) = φ(u) + φ(v) with φ(0) = 0.
        assert_eq!(b, PointE2::origin());
        let sum = phi.apply(
            &(&QR3::ratio(1, 2) + &QR3::ratio(1, 2)),
            &(&QR3::sqrt3() + &QR3::sqrt3()),
        );
        assert_eq!(sum, PointE2::new(&a.x + &a.x, &a.y + &a.y));
    }
}
