//! Lattice point configurations and lattice homotheties.

use crate::grid::GridError;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

/// A finite set of lattice points, stored normalized: the minimum x and the
/// minimum y over the set are both 0, points are deduplicated and sorted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    points: Vec<(i64, i64)>,
}

impl Configuration {
    pub fn new(points: impl IntoIterator<Item = (i64, i64)>) -> Result<Self, GridError> {
        let mut points: Vec<(i64, i64)> = points.into_iter().collect();
        if points.is_empty() {
            return Err(GridError::EmptyConfiguration);
        }
        let min_x = points.iter().map(|p| p.0).min().unwrap();
        let min_y = points.iter().map(|p| p.1).min().unwrap();
        for p in &mut points {
            p.0 -= min_x;
            p.1 -= min_y;
        }
        points.sort_unstable();
        points.dedup();
        Ok(Configuration { points })
    }

    /// The four corners of the unit square.
    pub fn square() -> Self {
        Configuration::new([(0, 0), (1, 0), (0, 1), (1, 1)]).unwrap()
    }

    /// Two horizontally adjacent points.
    pub fn domino() -> Self {
        Configuration::new([(0, 0), (1, 0)]).unwrap()
    }

    /// The lattice preimage of the unit equilateral triangle under the shear map.
    pub fn triangle_preimage() -> Self {
        Configuration::new([(0, 0), (1, 0), (0, 1)]).unwrap()
    }

    pub fn points(&self) -> &[(i64, i64)] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // construction guarantees at least one point
    }

    /// Bounding-box extent `(max_x, max_y)`; minima are 0 by normalization.
    pub fn span(&self) -> (i64, i64) {
        let mx = self.points.iter().map(|p| p.0).max().unwrap();
        let my = self.points.iter().map(|p| p.1).max().unwrap();
        (mx, my)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GridError> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({:?})", self.points)
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (x, y) in &self.points {
            writeln!(f, "{x} {y}")?;
        }
        Ok(())
    }
}

impl FromStr for Configuration {
    type Err = GridError;

    /// One `x y` pair per line; blank lines are ignored, normalization applies.
    fn from_str(text: &str) -> Result<Self, GridError> {
        let mut points = Vec::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let parse = |tok: Option<&str>| -> Result<i64, GridError> {
                tok.ok_or_else(|| GridError::Malformed(format!("line {}: expected `x y`", idx + 1)))?
                    .parse::<i64>()
                    .map_err(|e| GridError::Malformed(format!("line {}: {e}", idx + 1)))
            };
            let x = parse(it.next())?;
            let y = parse(it.next())?;
            if it.next().is_some() {
                return Err(GridError::Malformed(format!("line {}: trailing fields", idx + 1)));
            }
            points.push((x, y));
        }
        Configuration::new(points)
    }
}

/// A lattice homothety: translation plus positive integer dilation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Homothety {
    pub dilation: i64,
    pub translate_y: i64,
    pub translate_x: i64,
}

impl Homothety {
    pub fn new(translate_x: i64, translate_y: i64, dilation: i64) -> Self {
        assert!(dilation >= 1, "dilation must be a positive integer");
        Homothety { dilation, translate_y, translate_x }
    }

    #[inline]
    pub fn apply(&self, point: (i64, i64)) -> (i64, i64) {
        (self.translate_x + self.dilation * point.0, self.translate_y + self.dilation * point.1)
    }

    /// True when every image point of `config` lies inside a `width × height` grid.
    pub fn fits(&self, config: &Configuration, width: u32, height: u32) -> bool {
        config.points().iter().all(|&p| {
            let (x, y) = self.apply(p);
            x >= 0 && y >= 0 && x < i64::from(width) && y < i64::from(height)
        })
    }
}
