//! Exact points of the plane.

use crate::qr3::QR3;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A plane point with coordinates in ℚ(√3).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PointE2 {
    pub x: QR3,
    pub y: QR3,
}

impl PointE2 {
    pub fn new(x: QR3, y: QR3) -> Self {
        PointE2 { x, y }
    }

    pub fn origin() -> Self {
        PointE2 { x: QR3::zero(), y: QR3::zero() }
    }

    pub fn rational(x: BigRational, y: BigRational) -> Self {
        PointE2 { x: QR3::rational(x), y: QR3::rational(y) }
    }

    pub fn add(&self, other: &PointE2) -> PointE2 {
        PointE2 { x: &self.x + &other.x, y: &self.y + &other.y }
    }

    pub fn sub(&self, other: &PointE2) -> PointE2 {
        PointE2 { x: &self.x - &other.x, y: &self.y - &other.y }
    }

    /// Exact squared Euclidean distance, an element of ℚ(√3).
    pub fn squared_distance(&self, other: &PointE2) -> QR3 {
        let dx = &self.x - &other.x;
        let dy = &self.y - &other.y;
        &(&dx * &dx) + &(&dy * &dy)
    }

    /// Exact dot product of `self − base` and `other − base`.
    pub fn dot_from(&self, base: &PointE2, other: &PointE2) -> QR3 {
        let ux = &self.x - &base.x;
        let uy = &self.y - &base.y;
        let vx = &other.x - &base.x;
        let vy = &other.y - &base.y;
        &(&ux * &vx) + &(&uy * &vy)
    }

    /// True when both coordinates lie in `[0, 1]`.
    pub fn in_closed_unit_square(&self) -> bool {
        use std::cmp::Ordering::Less;
        let one = QR3::one();
        self.x.sign() != Less
            && self.y.sign() != Less
            && (&self.x - &one).sign() != std::cmp::Ordering::Greater
            && (&self.y - &one).sign() != std::cmp::Ordering::Greater
    }
}

impl fmt::Display for PointE2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl fmt::Debug for PointE2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PointE2{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squared_distance_is_exact() {
        // |(1, √3) − (0, 0)|² = 1 + 3 = 4.
        let p = PointE2::new(QR3::one(), QR3::sqrt3());
        assert_eq!(p.squared_distance(&PointE2::origin()), QR3::integer(4));
    }

    #[test]
    fn unit_square_membership_is_closed() {
        assert!(PointE2::new(QR3::one(), QR3::zero()).in_closed_unit_square());
        assert!(!PointE2::new(QR3::ratio(-1, 100), QR3::zero()).in_closed_unit_square());
        assert!(!PointE2::new(QR3::zero(), QR3::sqrt3()).in_closed_unit_square());
    }
}
