//! Monochromatic axis-parallel rectangle and square search.
//!
//! Per color and per row we build a column-membership bitmask; two rows
//! contain a monochromatic rectangle in some color exactly when their masks
//! for that color intersect in at least two columns. The scan order makes
//! the returned witness canonical: rectangles are ranked by `(d2, d1, y, x)`,
//! squares by `(d, y, x)`.

use crate::grid::GridColoring;
use serde::{Deserialize, Serialize};

/// Four corner cells `(x, y), (x+d1, y), (x, y+d2), (x+d1, y+d2)` of one color.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RectangleWitness {
    pub x: u32,
    pub y: u32,
    pub d1: u32,
    pub d2: u32,
    pub color: u8,
}

impl RectangleWitness {
    pub fn is_square(&self) -> bool {
        self.d1 == self.d2
    }

    pub fn corners(&self) -> [(u32, u32); 4] {
        [
            (self.x, self.y),
            (self.x + self.d1, self.y),
            (self.x, self.y + self.d2),
            (self.x + self.d1, self.y + self.d2),
        ]
    }

    /// Re-checks the witness against a grid without any search machinery.
    pub fn holds_in(&self, grid: &GridColoring) -> bool {
        self.d1 > 0
            && self.d2 > 0
            && self.x + self.d1 < grid.width()
            && self.y + self.d2 < grid.height()
            && self.corners().iter().all(|&(x, y)| grid.cell(x, y) == self.color)
    }
}

/// Column-membership masks, one bit row per (color, row) pair.
struct ColorMasks {
    words: usize,
    masks: Vec<u64>,
}

impl ColorMasks {
    fn build(grid: &GridColoring) -> Self {
        let w = grid.width() as usize;
        let h = grid.height() as usize;
        let colors = grid.colors() as usize;
        let words = w.div_ceil(64);
        let mut masks = vec![0u64; colors * h * words];
        for y in 0..h {
            let row = grid.row(y as u32);
            for (x, &c) in row.iter().enumerate() {
                masks[(c as usize * h + y) * words + x / 64] |= 1u64 << (x % 64);
            }
        }
        ColorMasks { words, masks }
    }

    #[inline]
    fn row(&self, color: usize, y: usize, height: usize) -> &[u64] {
        let start = (color * height + y) * self.words;
        &self.masks[start..start + self.words]
    }
}

/// Streams ascending set-bit positions of the AND of two mask rows.
fn common_columns<'a>(a: &'a [u64], b: &'a [u64]) -> impl Iterator<Item = u32> + 'a {
    a.iter().zip(b).enumerate().flat_map(|(wi, (&wa, &wb))| {
        let mut word = wa & wb;
        std::iter::from_fn(move || {
            if word == 0 {
                None
            } else {
                let bit = word.trailing_zeros();
                word &= word - 1;
                Some(wi as u32 * 64 + bit)
            }
        })
    })
}

/// Finds the canonical-first monochromatic axis-parallel rectangle, ranked
/// by `(d2, d1, y, x)`. Deterministic; `None` when the grid has none.
pub fn find_mono_rectangle(grid: &GridColoring) -> Option<RectangleWitness> {
    let w = grid.width();
    let h = grid.height();
    if w < 2 || h < 2 {
        return None;
    }
    let masks = ColorMasks::build(grid);
    let colors = grid.colors() as usize;
    let height = h as usize;

    for d2 in 1..h {
        // Rank by d1 before y, so the whole row-pair sweep for this d2 runs first.
        let mut best: Option<(u32, u32, u32, u8)> = None; // (d1, y, x, color)
        for y in 0..h - d2 {
            for c in 0..colors {
                let ra = masks.row(c, y as usize, height);
                let rb = masks.row(c, (y + d2) as usize, height);
                let mut prev: Option<u32> = None;
                let mut local: Option<(u32, u32)> = None; // (d1, x)
                for col in common_columns(ra, rb) {
                    if let Some(p) = prev {
                        let gap = col - p;
                        if local.map_or(true, |(d1, _)| gap < d1) {
                            local = Some((gap, p));
                        }
                    }
                    prev = Some(col);
                }
                if let Some((d1, x)) = local {
                    let cand = (d1, y, x, c as u8);
                    if best.map_or(true, |b| (cand.0, cand.1, cand.2) < (b.0, b.1, b.2)) {
                        best = Some(cand);
                    }
                }
            }
            // Nothing can beat d1 = 1 at an earlier y.
            if matches!(best, Some((1, by, _, _)) if by <= y) {
                break;
            }
        }
        if let Some((d1, y, x, color)) = best {
            return Some(RectangleWitness { x, y, d1, d2, color });
        }
    }
    None
}

/// Finds the canonical-first monochromatic axis-parallel square, ranked by
/// `(d, y, x)`.
pub fn find_mono_square(grid: &GridColoring) -> Option<RectangleWitness> {
    let w = grid.width();
    let h = grid.height();
    if w < 2 || h < 2 {
        return None;
    }
    let masks = ColorMasks::build(grid);
    let colors = grid.colors() as usize;
    let height = h as usize;

    for d in 1..h.min(w) {
        for y in 0..h - d {
            let mut best_x: Option<(u32, u8)> = None;
            for c in 0..colors {
                let ra = masks.row(c, y as usize, height);
                let rb = masks.row(c, (y + d) as usize, height);
                // Leftmost column x with columns x and x+d present in both rows.
                for col in common_columns(ra, rb) {
                    let other = col + d;
                    if other < w {
                        let has = ra[other as usize / 64] & rb[other as usize / 64]
                            & (1u64 << (other % 64));
                        if has != 0 && best_x.map_or(true, |(bx, _)| col < bx) {
                            best_x = Some((col, c as u8));
                            break;
                        }
                    }
                }
            }
            if let Some((x, color)) = best_x {
                return Some(RectangleWitness { x, y, d1: d, d2: d, color });
            }
        }
    }
    None
}
