//! Finite k-colored rectangular lattice windows and their text format.
//!
//! Cells are addressed as `(x, y)` with `y` increasing upward; the text
//! format stores the top row first, so line `j` of the body holds row
//! `height − 1 − j`. Colors 0–9 are the digits, colors 10–35 the lowercase
//! letters `a`–`z`.

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use thiserror::Error;

/// Most colors the text format can name (digits plus `a`–`z`).
pub const MAX_COLORS: u32 = 36;

#[derive(Debug, Error)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {width}x{height}")]
    EmptyDimensions { width: u32, height: u32 },
    #[error("color count must be in 1..={MAX_COLORS}, got {0}")]
    ColorCount(u32),
    #[error("cell ({x},{y}) holds color {color}, but the grid declares {colors} colors")]
    CellOutOfRange { x: u32, y: u32, color: u8, colors: u32 },
    #[error("cell buffer holds {got} entries, expected {expected}")]
    CellCount { got: usize, expected: usize },
    #[error("malformed grid text: {0}")]
    Malformed(String),
    #[error("configuration needs at least one point")]
    EmptyConfiguration,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An immutable, finitely colored `width × height` grid window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GridColoring {
    width: u32,
    height: u32,
    colors: u32,
    /// Row-major with `y` up: index `y * width + x`.
    cells: Vec<u8>,
}

impl GridColoring {
    pub fn new(width: u32, height: u32, colors: u32, cells: Vec<u8>) -> Result<Self, GridError> {
        if width == 0 || height == 0 {
            return Err(GridError::EmptyDimensions { width, height });
        }
        if colors == 0 || colors > MAX_COLORS {
            return Err(GridError::ColorCount(colors));
        }
        let expected = (width as usize) * (height as usize);
        if cells.len() != expected {
            return Err(GridError::CellCount { got: cells.len(), expected });
        }
        if let Some(pos) = cells.iter().position(|&c| u32::from(c) >= colors) {
            let x = (pos % width as usize) as u32;
            let y = (pos / width as usize) as u32;
            return Err(GridError::CellOutOfRange { x, y, color: cells[pos], colors });
        }
        Ok(GridColoring { width, height, colors, cells })
    }

    pub fn constant(width: u32, height: u32, colors: u32, color: u8) -> Result<Self, GridError> {
        let cells = vec![color; (width as usize) * (height as usize)];
        Self::new(width, height, colors, cells)
    }

    /// Builds cell `(x, y)` from a function; the function must stay below `colors`.
    pub fn from_fn(
        width: u32,
        height: u32,
        colors: u32,
        mut f: impl FnMut(u32, u32) -> u8,
    ) -> Result<Self, GridError> {
        let mut cells = Vec::with_capacity((width as usize) * (height as usize));
        for y in 0..height {
            for x in 0..width {
                cells.push(f(x, y));
            }
        }
        Self::new(width, height, colors, cells)
    }

    #[inline]
    pub fn width(&self) -> u32 {
        self.width
    }

    #[inline]
    pub fn height(&self) -> u32 {
        self.height
    }

    #[inline]
    pub fn colors(&self) -> u32 {
        self.colors
    }

    #[inline]
    pub fn cell(&self, x: u32, y: u32) -> u8 {
        debug_assert!(x < self.width && y < self.height);
        self.cells[(y as usize) * (self.width as usize) + (x as usize)]
    }

    pub fn cells(&self) -> &[u8] {
        &self.cells
    }

    /// Row `y` (y up), left to right.
    pub fn row(&self, y: u32) -> &[u8] {
        let w = self.width as usize;
        &self.cells[(y as usize) * w..(y as usize + 1) * w]
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, GridError> {
        let text = std::fs::read_to_string(path)?;
        text.parse()
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), GridError> {
        std::fs::write(path, self.to_string())?;
        Ok(())
    }
}

fn color_to_char(c: u8) -> char {
    match c {
        0..=9 => (b'0' + c) as char,
        10..=35 => (b'a' + c - 10) as char,
        _ => unreachable!("colors are capped at {MAX_COLORS}"),
    }
}

fn char_to_color(ch: char) -> Option<u8> {
    match ch {
        '0'..='9' => Some(ch as u8 - b'0'),
        'a'..='z' => Some(ch as u8 - b'a' + 10),
        _ => None,
    }
}

impl fmt::Display for GridColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} {} {}", self.width, self.height, self.colors)?;
        for line in (0..self.height).rev() {
            for x in 0..self.width {
                write!(f, "{}", color_to_char(self.cell(x, line)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl fmt::Debug for GridColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GridColoring({}x{}, {} colors)", self.width, self.height, self.colors)
    }
}

impl FromStr for GridColoring {
    type Err = GridError;

    fn from_str(text: &str) -> Result<Self, GridError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or_else(|| GridError::Malformed("empty input".into()))?;
        let mut parts = header.split(' ');
        let mut next_dim = |name: &str| -> Result<u32, GridError> {
            parts
                .next()
                .ok_or_else(|| GridError::Malformed(format!("header is missing {name}")))?
                .parse::<u32>()
                .map_err(|e| GridError::Malformed(format!("bad {name} in header: {e}")))
        };
        let width = next_dim("width")?;
        let height = next_dim("height")?;
        let colors = next_dim("colors")?;
        if parts.next().is_some() {
            return Err(GridError::Malformed("header has trailing fields".into()));
        }

        let mut cells = vec![0u8; (width as usize).saturating_mul(height as usize)];
        for j in 0..height {
            let line = lines
                .next()
                .ok_or_else(|| GridError::Malformed(format!("expected {height} rows, got {j}")))?;
            if line.chars().count() != width as usize {
                return Err(GridError::Malformed(format!(
                    "row {j} has {} characters, expected {width}",
                    line.chars().count()
                )));
            }
            let y = height - 1 - j;
            for (x, ch) in line.chars().enumerate() {
                let color = char_to_color(ch).ok_or_else(|| {
                    GridError::Malformed(format!("invalid cell character `{ch}` in row {j}"))
                })?;
                cells[(y as usize) * (width as usize) + x] = color;
            }
        }
        if lines.any(|l| !l.is_empty()) {
            return Err(GridError::Malformed("trailing content after grid rows".into()));
        }
        GridColoring::new(width, height, colors, cells)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_zero_is_the_bottom_line() {
        let text = "2 2 2\n01\n10\n";
        let g: GridColoring = text.parse().unwrap();
        // Bottom line of the file is row y = 0.
        assert_eq!(g.cell(0, 0), 1);
        assert_eq!(g.cell(1, 0), 0);
        assert_eq!(g.cell(0, 1), 0);
        assert_eq!(g.cell(1, 1), 1);
    }

    #[test]
    fn display_round_trips_bytes() {
        let text = "3 2 3\n012\n210\n";
        let g: GridColoring = text.parse().unwrap();
        assert_eq!(g.to_string(), text);
    }

    #[test]
    fn trailing_newline_is_optional() {
        let a: GridColoring = "2 1 2\n01\n".parse().unwrap();
        let b: GridColoring = "2 1 2\n01".parse().unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn letter_colors_cover_10_to_35() {
        let g: GridColoring = "3 1 36\n0az\n".parse().unwrap();
        assert_eq!(g.row(0), &[0, 10, 35]);
    }

    #[test]
    fn rejects_out_of_range_cells_and_bad_shapes() {
        assert!(matches!(
            "1 1 2\n5\n".parse::<GridColoring>(),
            Err(GridError::CellOutOfRange { .. })
        ));
        assert!(matches!("2 2 2\n01\n0\n".parse::<GridColoring>(), Err(GridError::Malformed(_))));
        assert!(matches!(GridColoring::new(0, 1, 2, vec![]), Err(GridError::EmptyDimensions { .. })));
        assert!(matches!(GridColoring::new(1, 1, 37, vec![0]), Err(GridError::ColorCount(37))));
    }
}
