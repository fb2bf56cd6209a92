//! Independent avoidance checking and exhaustive counting.
//!
//! This module is the audit side of the solver: it enumerates homotheties
//! with plain nested loops and shares no machinery with the backtracking
//! search or with the grid search iterators.

use crate::config::Configuration;
use crate::grid::GridColoring;
use crate::par;
use thiserror::Error;

/// Default bound on `colors^(width·height)` for exhaustive enumeration.
pub const DEFAULT_EXHAUSTION_CAP: u64 = 1 << 24;

#[derive(Debug, Error)]
pub enum CheckError {
    #[error("{states} colorings exceed the exhaustion cap of {cap}; use solve_avoidance instead")]
    CapExceeded { states: u128, cap: u64 },
}

/// True iff `coloring` contains no monochromatic homothetic copy of `target`.
pub fn verify_avoidance(coloring: &GridColoring, target: &Configuration) -> bool {
    let w = i64::from(coloring.width());
    let h = i64::from(coloring.height());
    let (mx, my) = target.span();
    let max_d = if mx == 0 && my == 0 {
        1
    } else {
        let dx = if mx > 0 { (w - 1) / mx } else { i64::MAX };
        let dy = if my > 0 { (h - 1) / my } else { i64::MAX };
        dx.min(dy)
    };
    for d in 1..=max_d {
        for ty in 0..=(h - 1 - d * my) {
            'tx: for tx in 0..=(w - 1 - d * mx) {
                let mut shared: Option<u8> = None;
                for &(px, py) in target.points() {
                    let c = coloring.cell((tx + d * px) as u32, (ty + d * py) as u32);
                    match shared {
                        None => shared = Some(c),
                        Some(s) if s != c => continue 'tx,
                        Some(_) => {}
                    }
                }
                return false;
            }
        }
    }
    true
}

/// Cell index sets of every in-bounds homothetic image of `target`.
fn placement_cell_sets(width: u32, height: u32, target: &Configuration) -> Vec<Vec<usize>> {
    let w = i64::from(width);
    let h = i64::from(height);
    let (mx, my) = target.span();
    let max_d = if mx == 0 && my == 0 {
        1
    } else {
        let dx = if mx > 0 { (w - 1) / mx } else { i64::MAX };
        let dy = if my > 0 { (h - 1) / my } else { i64::MAX };
        dx.min(dy)
    };
    let mut placements = Vec::new();
    for d in 1..=max_d {
        for ty in 0..=(h - 1 - d * my) {
            for tx in 0..=(w - 1 - d * mx) {
                let cells = target
                    .points()
                    .iter()
                    .map(|&(px, py)| ((ty + d * py) * w + tx + d * px) as usize)
                    .collect();
                placements.push(cells);
            }
        }
    }
    placements
}

fn pow_checked(base: u32, exp: u32) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(u128::from(base));
    }
    acc
}

/// Exact number of `colors`-colorings of `width × height` with no
/// monochromatic homothetic copy of `target`. Refuses instances above `cap`.
pub fn count_avoiding_with_cap(
    width: u32,
    height: u32,
    colors: u32,
    target: &Configuration,
    cap: u64,
) -> Result<u64, CheckError> {
    let n = width * height;
    let states = pow_checked(colors, n);
    if states > u128::from(cap) {
        return Err(CheckError::CapExceeded { states, cap });
    }
    let states = states as u64;
    let placements = placement_cell_sets(width, height, target);
    if placements.is_empty() {
        return Ok(states);
    }

    if colors == 2 {
        // Colorings are bit codes; a placement is monochromatic when the
        // masked bits are all zeros or all ones.
        let masks: Vec<u64> =
            placements.iter().map(|p| p.iter().fold(0u64, |m, &i| m | (1u64 << i))).collect();
        let count = par::sum_over_range(0, states, move |code| {
            u64::from(masks.iter().all(|&m| {
                let bits = code & m;
                bits != 0 && bits != m
            }))
        });
        Ok(count)
    } else {
        let n = n as usize;
        let colors = colors as u8;
        let count = par::sum_over_range(0, states, move |code| {
            let mut digits = [0u8; 64];
            let mut rem = code;
            for d in digits.iter_mut().take(n) {
                *d = (rem % u64::from(colors)) as u8;
                rem /= u64::from(colors);
            }
            u64::from(placements.iter().all(|p| {
                let first = digits[p[0]];
                !p[1..].iter().all(|&i| digits[i] == first)
            }))
        });
        Ok(count)
    }
}

/// [`count_avoiding_with_cap`] at the default cap.
pub fn count_avoiding(
    width: u32,
    height: u32,
    colors: u32,
    target: &Configuration,
) -> Result<u64, CheckError> {
    count_avoiding_with_cap(width, height, colors, target, DEFAULT_EXHAUSTION_CAP)
}

/// Lowest-code avoiding coloring under the same enumeration as
/// [`count_avoiding_with_cap`], as a grid. `None` when every coloring
/// contains a monochromatic copy.
pub fn first_avoiding_coloring(
    width: u32,
    height: u32,
    colors: u32,
    target: &Configuration,
    cap: u64,
) -> Result<Option<GridColoring>, CheckError> {
    let n = width * height;
    let states = pow_checked(colors, n);
    if states > u128::from(cap) {
        return Err(CheckError::CapExceeded { states, cap });
    }
    let states = states as u64;
    let placements = placement_cell_sets(width, height, target);
    let n = n as usize;
    let decode = |code: u64| -> Vec<u8> {
        let mut digits = vec![0u8; n];
        let mut rem = code;
        for d in digits.iter_mut() {
            *d = (rem % u64::from(colors)) as u8;
            rem /= u64::from(colors);
        }
        digits
    };
    let hit = par::first_match_in_range(0, states, move |code| {
        let digits = decode(code);
        let avoiding = placements.iter().all(|p| {
            let first = digits[p[0]];
            !p[1..].iter().all(|&i| digits[i] == first)
        });
        avoiding.then_some(code)
    });
    match hit {
        None => Ok(None),
        Some(code) => {
            let mut digits = vec![0u8; n];
            let mut rem = code;
            for d in digits.iter_mut() {
                *d = (rem % u64::from(colors)) as u8;
                rem /= u64::from(colors);
            }
            Ok(Some(GridColoring::new(width, height, colors, digits).expect("valid cells")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_same_2x2_contains_a_square() {
        let g = GridColoring::constant(2, 2, 2, 0).unwrap();
        assert!(!verify_avoidance(&g, &Configuration::square()));
    }

    #[test]
    fn checkerboard_4x4_contains_an_even_dilation_square() {
        let g = GridColoring::from_fn(4, 4, 2, |x, y| ((x + y) % 2) as u8).unwrap();
        // Corners (0,0),(2,0),(0,2),(2,2) all share (x+y) even.
        assert!(!verify_avoidance(&g, &Configuration::square()));
    }

    #[test]
    fn checkerboard_avoids_dominoes_of_odd_dilation_only() {
        let stripes = GridColoring::from_fn(2, 1, 2, |x, _| (x % 2) as u8).unwrap();
        assert!(verify_avoidance(&stripes, &Configuration::domino()));
        let wide = GridColoring::from_fn(3, 1, 2, |x, _| (x % 2) as u8).unwrap();
        // Dilation 2 joins two cells of equal parity.
        assert!(!verify_avoidance(&wide, &Configuration::domino()));
    }

    #[test]
    fn count_examples_square_target() {
        let sq = Configuration::square();
        // No square fits in one cell.
        assert_eq!(count_avoiding(1, 1, 2, &sq).unwrap(), 2);
        // Only the two constant colorings of 2x2 contain a square.
        assert_eq!(count_avoiding(2, 2, 2, &sq).unwrap(), 14);
    }

    #[test]
    fn count_matches_direct_verify_enumeration() {
        let sq = Configuration::square();
        for (w, h) in [(3, 3), (2, 4), (4, 2)] {
            let n = w * h;
            let mut direct = 0u64;
            for code in 0u64..(1 << n) {
                let g = GridColoring::from_fn(w, h, 2, |x, y| ((code >> (y * w + x)) & 1) as u8)
                    .unwrap();
                if verify_avoidance(&g, &sq) {
                    direct += 1;
                }
            }
            assert_eq!(count_avoiding(w, h, 2, &sq).unwrap(), direct, "{w}x{h}");
        }
    }

    #[test]
    fn three_color_counting_uses_base_k_codes() {
        let dom = Configuration::domino();
        // 1x2 vertical grid: no horizontal domino fits, so all colorings avoid.
        assert_eq!(count_avoiding(1, 2, 3, &dom).unwrap(), 9);
        // 2x1: the two cells must differ: 3·2 = 6.
        assert_eq!(count_avoiding(2, 1, 3, &dom).unwrap(), 6);
    }

    #[test]
    fn cap_refusal_is_explicit() {
        let sq = Configuration::square();
        let err = count_avoiding_with_cap(6, 6, 2, &sq, 1 << 20).unwrap_err();
        assert!(matches!(err, CheckError::CapExceeded { .. }));
    }

    #[test]
    fn first_avoiding_is_lowest_code() {
        let dom = Configuration::domino();
        let g = first_avoiding_coloring(2, 1, 2, &dom, 1 << 24).unwrap().unwrap();
        // Codes scan 00, 10, 01, 11 by bit index; 00 and 11 are monochromatic,
        // code 1 colors cell (0,0) with 1 and (1,0) with 0.
        assert_eq!(g.cells(), &[1, 0]);
        assert!(verify_avoidance(&g, &dom));
    }
}
