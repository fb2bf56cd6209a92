//! Search for monochromatic homothetic copies of a lattice configuration.

use crate::config::{Configuration, Homothety};
use crate::grid::GridColoring;

/// All homotheties whose image of `config` stays inside `width × height`,
/// in canonical order: dilation, then translate_y, then translate_x.
///
/// A configuration spanning a single point admits only dilation 1, since
/// every dilation acts identically on it.
struct HomothetyRange {
    max_dilation: i64,
    span: (i64, i64),
}

impl HomothetyRange {
    fn new(config: &Configuration, width: u32, height: u32) -> Self {
        let (mx, my) = config.span();
        let w = i64::from(width);
        let h = i64::from(height);
        let max_dilation = if mx == 0 && my == 0 {
            1
        } else {
            let dx = if mx > 0 { (w - 1) / mx } else { i64::MAX };
            let dy = if my > 0 { (h - 1) / my } else { i64::MAX };
            dx.min(dy)
        };
        HomothetyRange { max_dilation, span: (mx, my) }
    }
}

/// Emits every monochromatic homothety of `config` in `grid`, in canonical
/// order, exactly once.
pub fn enumerate_witnesses<'a>(
    grid: &'a GridColoring,
    config: &'a Configuration,
) -> impl Iterator<Item = (Homothety, u8)> + 'a {
    let range = HomothetyRange::new(config, grid.width(), grid.height());
    let (mx, my) = range.span;
    let w = i64::from(grid.width());
    let h = i64::from(grid.height());
    (1..=range.max_dilation).flat_map(move |d| {
        let ty_max = h - 1 - d * my;
        let tx_max = w - 1 - d * mx;
        (0..=ty_max).flat_map(move |ty| {
            (0..=tx_max).filter_map(move |tx| {
                let hom = Homothety { dilation: d, translate_y: ty, translate_x: tx };
                mono_color(grid, config, &hom).map(|c| (hom, c))
            })
        })
    })
}

/// Color shared by every image cell, when the image is monochromatic.
fn mono_color(grid: &GridColoring, config: &Configuration, hom: &Homothety) -> Option<u8> {
    let mut points = config.points().iter();
    let (x0, y0) = hom.apply(*points.next().expect("configurations are non-empty"));
    let color = grid.cell(x0 as u32, y0 as u32);
    for &p in points {
        let (x, y) = hom.apply(p);
        if grid.cell(x as u32, y as u32) != color {
            return None;
        }
    }
    Some(color)
}

/// Canonical-first monochromatic lattice homothety of `config` in `grid`.
pub fn find_homothetic_copy(
    grid: &GridColoring,
    config: &Configuration,
) -> Option<(Homothety, u8)> {
    enumerate_witnesses(grid, config).next()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_matches_every_cell_with_dilation_one() {
        let g: GridColoring = "1 1 3\n2\n".parse().unwrap();
        let c = Configuration::new([(0, 0)]).unwrap();
        assert_eq!(
            find_homothetic_copy(&g, &c),
            Some((Homothety { dilation: 1, translate_y: 0, translate_x: 0 }, 2))
        );
        let g = GridColoring::constant(3, 3, 2, 1).unwrap();
        assert_eq!(enumerate_witnesses(&g, &c).count(), 9);
    }

    #[test]
    fn unit_square_on_all_same_grid() {
        let g = GridColoring::constant(2, 2, 2, 1).unwrap();
        let c = Configuration::square();
        assert_eq!(
            find_homothetic_copy(&g, &c),
            Some((Homothety { dilation: 1, translate_y: 0, translate_x: 0 }, 1))
        );
    }

    #[test]
    fn domino_witnesses_on_all_same_2x2() {
        let g = GridColoring::constant(2, 2, 2, 0).unwrap();
        let c = Configuration::domino();
        let all: Vec<_> = enumerate_witnesses(&g, &c).collect();
        assert_eq!(
            all,
            vec![
                (Homothety { dilation: 1, translate_y: 0, translate_x: 0 }, 0),
                (Homothety { dilation: 1, translate_y: 1, translate_x: 0 }, 0),
            ]
        );
    }

    #[test]
    fn canonical_order_is_dilation_then_ty_then_tx() {
        let g = GridColoring::constant(3, 3, 2, 0).unwrap();
        let c = Configuration::domino();
        let homs: Vec<_> = enumerate_witnesses(&g, &c).map(|(h, _)| h).collect();
        let mut sorted = homs.clone();
        sorted.sort();
        assert_eq!(homs, sorted);
        // Dilations 1 and 2 both fit in a width-3 grid.
        assert_eq!(homs.iter().filter(|h| h.dilation == 2).count(), 3);
    }

    #[test]
    fn no_copy_when_dilated_image_never_fits() {
        let g = GridColoring::constant(2, 2, 2, 0).unwrap();
        let c = Configuration::new([(0, 0), (3, 0)]).unwrap();
        assert_eq!(find_homothetic_copy(&g, &c), None);
    }
}
