//! Deterministic total colorings of the plane.
//!
//! Built-in families: constant, alternating vertical strips, and
//! lattice-periodic tilings of a stored grid. A plugin slot accepts any
//! deterministic oracle; plugins are probed for determinism on a fixed
//! random point set when registered.
//!
//! Registry strings name a coloring and its parameters so witnesses can
//! record their provenance:
//! `constant:k=K,c=C`, `strip:d=P/Q,phase=P/Q`,
//! `periodic:file=GRID,px=P/Q,py=P/Q`.

use crate::grid::{GridColoring, GridError};
use crate::point::PointE2;
use crate::qr3::{frac_string, parse_frac, QR3};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::path::Path;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PlaneError {
    #[error("sample point {point} lies outside the coloring's domain ({domain})")]
    DomainViolation { point: String, domain: &'static str },
    #[error("r must be positive, got {0}")]
    NonPositiveParameter(String),
    #[error("r must satisfy 0 < r <= 2/45 for the unit-square triangle construction, got {0}")]
    ROutOfRange(String),
    #[error("r must lie in (0,1) for the unit-square aspect construction, got {0}")]
    AspectOutOfRange(String),
    #[error("this construction requires a 2-coloring, got {0} colors")]
    NotTwoColors(u32),
    #[error(
        "inconsistent plane oracle: a sampled 15x15 2-coloring produced no monochromatic square, \
         which indicates a non-deterministic or ill-defined oracle"
    )]
    Inconsistency,
    #[error("oracle returned color {color} at {point} but declares {colors} colors")]
    OracleRange { color: u8, colors: u32, point: String },
    #[error("oracle determinism probe failed: {point} received two different colors")]
    NonDeterministic { point: String },
    #[error("cannot parse coloring registry string `{0}`: {1}")]
    Registry(String, String),
    #[error("witness vertex {vertex} re-colors to {got}, expected {expected}")]
    WitnessColor { vertex: String, expected: u8, got: u8 },
    #[error("witness geometry check failed: {0}")]
    WitnessGeometry(String),
    #[error("search window exhausted without a witness")]
    NotFound,
    #[error(transparent)]
    Grid(#[from] GridError),
}

/// Where a coloring promises totality.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    FullPlane,
    ClosedUnitSquare,
}

impl Domain {
    fn name(self) -> &'static str {
        match self {
            Domain::FullPlane => "the full plane",
            Domain::ClosedUnitSquare => "the closed unit square",
        }
    }
}

/// A user-supplied deterministic total color oracle.
pub trait PlaneOracle: Send + Sync {
    fn color_count(&self) -> u32;
    fn domain(&self) -> Domain {
        Domain::FullPlane
    }
    /// Must be pure: equal points always receive equal colors.
    fn color_at(&self, point: &PointE2) -> u8;
    /// Registry label recorded in witnesses, conventionally `custom:<name>`.
    fn registry(&self) -> String;
}

#[derive(Clone)]
enum Family {
    Constant {
        k: u32,
        c: u8,
    },
    /// Vertical strips of width `d·√3/2`, alternating between two colors.
    /// Strip `n` covers `[phase + n·w, phase + (n+1)·w)`; color is `n mod 2`.
    Strip {
        d: BigRational,
        phase: QR3,
        /// Cached `1/(d·√3/2) = 2√3/(3d)`.
        inv_width: QR3,
    },
    /// A stored grid tiled with exact cell periods `px × py`.
    Periodic {
        grid: Arc<GridColoring>,
        px: BigRational,
        py: BigRational,
        label: String,
    },
    Custom(Arc<dyn PlaneOracle>),
}

/// A named, deterministic, total map from exact plane points to colors.
#[derive(Clone)]
pub struct PlaneColoring {
    family: Family,
}

impl PlaneColoring {
    pub fn constant(k: u32, c: u8) -> Result<Self, PlaneError> {
        if k == 0 || u32::from(c) >= k {
            return Err(PlaneError::OracleRange { color: c, colors: k, point: "-".into() });
        }
        Ok(PlaneColoring { family: Family::Constant { k, c } })
    }

    /// Alternating vertical strips of width `d·√3/2`; `y` is ignored.
    /// Strips are half-open on the left.
    pub fn strip(d: BigRational, phase: QR3) -> Result<Self, PlaneError> {
        if !d.is_positive() {
            return Err(PlaneError::NonPositiveParameter(frac_string(&d)));
        }
        // 1/(d·√3/2) = 2/(d·√3) = (2/(3d))·√3.
        let inv_width = QR3::sqrt3_times(BigRational::new(BigInt::from(2), BigInt::from(3)) / &d);
        Ok(PlaneColoring { family: Family::Strip { d, phase, inv_width } })
    }

    /// Tiles the plane by `grid`, cell `(i, j)` covering
    /// `[i·px, (i+1)·px) × [j·py, (j+1)·py)` modulo the grid extents.
    pub fn periodic(grid: GridColoring, px: BigRational, py: BigRational) -> Result<Self, PlaneError> {
        Self::periodic_labeled(grid, px, py, "-".to_string())
    }

    pub fn periodic_labeled(
        grid: GridColoring,
        px: BigRational,
        py: BigRational,
        file_label: String,
    ) -> Result<Self, PlaneError> {
        if !px.is_positive() {
            return Err(PlaneError::NonPositiveParameter(frac_string(&px)));
        }
        if !py.is_positive() {
            return Err(PlaneError::NonPositiveParameter(frac_string(&py)));
        }
        Ok(PlaneColoring {
            family: Family::Periodic { grid: Arc::new(grid), px, py, label: file_label },
        })
    }

    /// Registers a plugin oracle after probing it for determinism on a
    /// fixed pseudo-random point set.
    pub fn custom(oracle: Arc<dyn PlaneOracle>) -> Result<Self, PlaneError> {
        let k = oracle.color_count();
        let mut rng = ChaCha8Rng::seed_from_u64(0x9d0b_57a1);
        for _ in 0..64 {
            let num = |rng: &mut ChaCha8Rng| BigRational::new(
                BigInt::from(rng.gen_range(-1000..=1000i64)),
                BigInt::from(rng.gen_range(1..=1000i64)),
            );
            let mut p = PointE2::rational(num(&mut rng), num(&mut rng));
            if oracle.domain() == Domain::ClosedUnitSquare {
                p.x = p.x.rem_floor(&QR3::one());
                p.y = p.y.rem_floor(&QR3::one());
            }
            let first = oracle.color_at(&p);
            if u32::from(first) >= k {
                return Err(PlaneError::OracleRange {
                    color: first,
                    colors: k,
                    point: p.to_string(),
                });
            }
            if oracle.color_at(&p) != first {
                return Err(PlaneError::NonDeterministic { point: p.to_string() });
            }
        }
        Ok(PlaneColoring { family: Family::Custom(oracle) })
    }

    pub fn color_count(&self) -> u32 {
        match &self.family {
            Family::Constant { k, .. } => *k,
            Family::Strip { .. } => 2,
            Family::Periodic { grid, .. } => grid.colors(),
            Family::Custom(o) => o.color_count(),
        }
    }

    pub fn domain(&self) -> Domain {
        match &self.family {
            Family::Custom(o) => o.domain(),
            _ => Domain::FullPlane,
        }
    }

    /// Color of a point assumed to be inside the domain.
    pub fn color_at(&self, point: &PointE2) -> u8 {
        match &self.family {
            Family::Constant { c, .. } => *c,
            Family::Strip { phase, inv_width, .. } => {
                let t = &(&point.x - phase) * inv_width;
                let idx = t.floor();
                let parity = idx.mod_floor(&BigInt::from(2));
                u8::from(!parity.is_zero())
            }
            Family::Periodic { grid, px, py, .. } => {
                let i = point
                    .x
                    .scale(&px.recip())
                    .floor()
                    .mod_floor(&BigInt::from(grid.width()));
                let j = point
                    .y
                    .scale(&py.recip())
                    .floor()
                    .mod_floor(&BigInt::from(grid.height()));
                let i = u32::try_from(i).expect("nonnegative residue");
                let j = u32::try_from(j).expect("nonnegative residue");
                grid.cell(i, j)
            }
            Family::Custom(o) => o.color_at(point),
        }
    }

    /// Color of a point with the domain checked; violations name the sample.
    pub fn sample(&self, point: &PointE2) -> Result<u8, PlaneError> {
        if self.domain() == Domain::ClosedUnitSquare && !point.in_closed_unit_square() {
            return Err(PlaneError::DomainViolation {
                point: point.to_string(),
                domain: self.domain().name(),
            });
        }
        Ok(self.color_at(point))
    }

    /// Canonical registry string recording the family and parameters.
    pub fn registry(&self) -> String {
        match &self.family {
            Family::Constant { k, c } => format!("constant:k={k},c={c}"),
            Family::Strip { d, phase, .. } => {
                format!("strip:d={},phase={phase}", frac_string(d))
            }
            Family::Periodic { px, py, label, .. } => {
                format!("periodic:file={label},px={},py={}", frac_string(px), frac_string(py))
            }
            Family::Custom(o) => o.registry(),
        }
    }

    /// Parses a registry string; `base_dir` anchors periodic grid files.
    pub fn from_registry(text: &str, base_dir: &Path) -> Result<Self, PlaneError> {
        let bad = |msg: &str| PlaneError::Registry(text.to_string(), msg.to_string());
        let (family, args) = text.split_once(':').ok_or_else(|| bad("missing `family:`"))?;
        let mut fields = std::collections::BTreeMap::new();
        for part in args.split(',') {
            let (key, value) = part.split_once('=').ok_or_else(|| bad("expected key=value"))?;
            fields.insert(key.trim().to_string(), value.trim().to_string());
        }
        let take = |fields: &mut std::collections::BTreeMap<String, String>,
                    key: &str|
         -> Result<String, PlaneError> {
            fields.remove(key).ok_or_else(|| bad(&format!("missing `{key}`")))
        };
        let result = match family {
            "constant" => {
                let k = take(&mut fields, "k")?.parse::<u32>().map_err(|e| bad(&e.to_string()))?;
                let c = take(&mut fields, "c")?.parse::<u8>().map_err(|e| bad(&e.to_string()))?;
                PlaneColoring::constant(k, c)?
            }
            "strip" => {
                let d = parse_frac(&take(&mut fields, "d")?).map_err(|e| bad(&e))?;
                let phase: QR3 = take(&mut fields, "phase")?.parse().map_err(|e: String| bad(&e))?;
                PlaneColoring::strip(d, phase)?
            }
            "periodic" => {
                let file = take(&mut fields, "file")?;
                let px = parse_frac(&take(&mut fields, "px")?).map_err(|e| bad(&e))?;
                let py = parse_frac(&take(&mut fields, "py")?).map_err(|e| bad(&e))?;
                let grid = GridColoring::load(base_dir.join(&file))?;
                PlaneColoring::periodic_labeled(grid, px, py, file)?
            }
            other => return Err(bad(&format!("unknown family `{other}`"))),
        };
        if !fields.is_empty() {
            return Err(bad("unrecognized trailing fields"));
        }
        Ok(result)
    }
}

impl std::fmt::Debug for PlaneColoring {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlaneColoring({})", self.registry())
    }
}

/// Certifies by complete breakpoint enumeration that the strip coloring of
/// parameter `d` contains no monochromatic homothetic copy of the unit
/// equilateral triangle with side exactly `d`.
///
/// A side-`d` copy has vertex x-coordinates `x`, `x + d/2`, `x + d` (the
/// strips ignore y, and side `d` pins the dilation). The triple of strip
/// indices is piecewise constant in `x` and the strip pattern has period
/// `2w` with `w = d·√3/2`, so splitting `[0, 2w)` at every point where one
/// of the three indices jumps and checking one point per piece covers every
/// real translate. The phase only translates the pattern and cannot create
/// a monochromatic copy, so phase 0 decides all phases.
pub fn certify_strip_triangle_avoidance(d: &BigRational) -> Result<bool, PlaneError> {
    let strip = PlaneColoring::strip(d.clone(), QR3::zero())?;
    let half_d = QR3::rational(d / BigRational::from_integer(BigInt::from(2)));
    let full_d = QR3::rational(d.clone());
    let width = QR3::sqrt3_times(d / BigRational::from_integer(BigInt::from(2)));
    let period = &width + &width;

    // Jump points of x ↦ strip_index(x + δ) inside [0, period): x = k·w − δ.
    let mut breakpoints: Vec<QR3> = Vec::new();
    for delta in [QR3::zero(), half_d.clone(), full_d.clone()] {
        for k in 0..=3i64 {
            let x = &width.scale(&BigRational::from_integer(BigInt::from(k))) - &delta;
            if x.sign() != std::cmp::Ordering::Less && (&x - &period).sign() == std::cmp::Ordering::Less
            {
                breakpoints.push(x);
            }
        }
    }
    breakpoints.sort();
    breakpoints.dedup();
    debug_assert_eq!(breakpoints.first(), Some(&QR3::zero()));

    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    let mono_at = |x: &QR3| -> bool {
        let at = |dx: &QR3| {
            strip.color_at(&PointE2::new(x + dx, QR3::zero()))
        };
        let c0 = at(&QR3::zero());
        c0 == at(&half_d) && c0 == at(&full_d)
    };
    for (i, left) in breakpoints.iter().enumerate() {
        let right = breakpoints.get(i + 1).unwrap_or(&period);
        let mid = (left + right).scale(&half);
        if mono_at(left) || mono_at(&mid) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Wraps a full-plane coloring, restricting its declared domain to the
/// closed unit square. Useful for exercising domain checks.
pub struct UnitSquareRestriction {
    pub inner: PlaneColoring,
}

impl PlaneOracle for UnitSquareRestriction {
    fn color_count(&self) -> u32 {
        self.inner.color_count()
    }

    fn domain(&self) -> Domain {
        Domain::ClosedUnitSquare
    }

    fn color_at(&self, point: &PointE2) -> u8 {
        self.inner.color_at(point)
    }

    fn registry(&self) -> String {
        format!("custom:unit-square({})", self.inner.registry())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn strip_boundaries_are_half_open_on_the_left() {
        let strip = PlaneColoring::strip(q(1, 1), QR3::zero()).unwrap();
        // (0, 0) sits at the left edge of strip 0.
        assert_eq!(strip.color_at(&PointE2::origin()), 0);
        // (√3/2, 17) sits at the left edge of strip 1; y is ignored.
        let p = PointE2::new(QR3::sqrt3_times(q(1, 2)), QR3::integer(17));
        assert_eq!(strip.color_at(&p), 1);
        // Just left of √3/2 is still strip 0.
        let p = PointE2::new(QR3::new(q(-1, 100), q(1, 2)), QR3::zero());
        assert_eq!(strip.color_at(&p), 0);
    }

    #[test]
    fn strip_pattern_alternates_with_period_two_strips() {
        let strip = PlaneColoring::strip(q(1, 1), QR3::zero()).unwrap();
        let w = QR3::sqrt3_times(q(1, 2));
        let mut x = QR3::zero();
        let mut expect = 0u8;
        for _ in 0..6 {
            assert_eq!(strip.color_at(&PointE2::new(x.clone(), QR3::zero())), expect);
            x += &w;
            expect ^= 1;
        }
    }

    #[test]
    fn periodic_lookup_reproduces_the_stored_grid() {
        let grid: GridColoring = "3 2 3\n012\n120\n".parse().unwrap();
        let plane = PlaneColoring::periodic(grid.clone(), q(1, 1), q(1, 1)).unwrap();
        for y in 0..2u32 {
            for x in 0..3u32 {
                let p = PointE2::rational(q(x as i64, 1), q(y as i64, 1));
                assert_eq!(plane.color_at(&p), grid.cell(x, y));
                // Shift by a full period in both directions.
                let p = PointE2::rational(q(x as i64 + 3, 1), q(y as i64 - 2, 1));
                assert_eq!(plane.color_at(&p), grid.cell(x, y));
            }
        }
    }

    #[test]
    fn registry_round_trip_for_builtins() {
        let tmp = std::env::temp_dir();
        for text in ["constant:k=3,c=1", "strip:d=2/3,phase=1/4"] {
            let plane = PlaneColoring::from_registry(text, &tmp).unwrap();
            assert_eq!(plane.registry(), text);
        }
    }

    #[test]
    fn sqrt3_phase_survives_the_registry_round_trip() {
        let plane =
            PlaneColoring::strip(q(1, 1), QR3::new(q(1, 2), q(-3, 4))).unwrap();
        let text = plane.registry();
        let tmp = std::env::temp_dir();
        let again = PlaneColoring::from_registry(&text, &tmp).unwrap();
        assert_eq!(again.registry(), text);
    }

    #[test]
    fn unit_square_restriction_flags_outside_samples() {
        let inner = PlaneColoring::constant(2, 0).unwrap();
        let plane = PlaneColoring::custom(Arc::new(UnitSquareRestriction { inner })).unwrap();
        let outside = PointE2::rational(q(3, 2), q(0, 1));
        match plane.sample(&outside) {
            Err(PlaneError::DomainViolation { point, .. }) => {
                assert!(point.contains("3/2"));
            }
            other => panic!("expected a domain violation, got {other:?}"),
        }
        assert_eq!(plane.sample(&PointE2::origin()).unwrap(), 0);
    }

    #[test]
    fn nondeterministic_plugins_are_rejected() {
        use std::sync::atomic::{AtomicU8, Ordering as AtomicOrdering};
        struct Flaky(AtomicU8);
        impl PlaneOracle for Flaky {
            fn color_count(&self) -> u32 {
                2
            }
            fn color_at(&self, _: &PointE2) -> u8 {
                self.0.fetch_xor(1, AtomicOrdering::Relaxed)
            }
            fn registry(&self) -> String {
                "custom:flaky".into()
            }
        }
        let err = PlaneColoring::custom(Arc::new(Flaky(AtomicU8::new(0)))).unwrap_err();
        assert!(matches!(err, PlaneError::NonDeterministic { .. }));
    }

    #[test]
    fn strip_color_is_constant_within_one_strip() {
        let strip = PlaneColoring::strip(q(2, 1), QR3::ratio(1, 3)).unwrap();
        // Width is √3; sample many rationals inside the first strip.
        let lo = QR3::ratio(1, 3);
        for i in 0..50i64 {
            let dx = QR3::ratio(3 * i, 100); // up to 1.47 < √3
            let p = PointE2::new(&lo + &dx, QR3::integer(i));
            assert_eq!(strip.color_at(&p), 0, "offset {i}");
        }
    }
}
