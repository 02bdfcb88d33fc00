//! Sublevel-set filtration of a 2-D image as a cubical complex.
//!
//! Cells live on the doubled grid of size (2H+1) x (2W+1): a cell at (r, c)
//! has dimension `(r odd) + (c odd)`, so pixels sit at odd/odd positions.
//! Pixels carry their intensity and every lower cell takes the minimum over
//! the pixels it bounds.

use crate::types::{GrayImage, PersistenceDiagram};

use super::reduction::{BoundaryMatrix, ReductionState};

pub fn cubical_boundary_matrix(img: &GrayImage) -> BoundaryMatrix {
    let (h, w) = (img.rows(), img.cols());
    let (gr, gc) = (2 * h + 1, 2 * w + 1);
    let n = gr * gc;
    let dim_of = |r: usize, c: usize| (r % 2) + (c % 2);

    let mut values = vec![f64::INFINITY; n];
    for i in 0..h {
        for j in 0..w {
            let v = img.get(i, j);
            let (pr, pc) = (2 * i + 1, 2 * j + 1);
            for r in pr - 1..=pr + 1 {
                for c in pc - 1..=pc + 1 {
                    let cell = &mut values[r * gc + c];
                    *cell = cell.min(v);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        values[a].total_cmp(&values[b]).then(dim_of(a / gc, a % gc).cmp(&dim_of(b / gc, b % gc))).then(a.cmp(&b))
    });
    let mut position = vec![0usize; n];
    for (p, &cell) in order.iter().enumerate() {
        position[cell] = p;
    }

    let mut matrix = BoundaryMatrix::with_capacity(n);
    for &cell in &order {
        let (r, c) = (cell / gc, cell % gc);
        let mut faces = Vec::with_capacity(4);
        if r % 2 == 1 {
            faces.push(position[(r - 1) * gc + c]);
            faces.push(position[(r + 1) * gc + c]);
        }
        if c % 2 == 1 {
            faces.push(position[r * gc + c - 1]);
            faces.push(position[r * gc + c + 1]);
        }
        faces.sort_unstable();
        matrix.push(dim_of(r, c), values[cell], faces);
    }
    matrix
}

/// Sublevel-set persistence of `img` in dimensions `<= max_dim`.
pub fn cubical_persistence(img: &GrayImage, max_dim: usize) -> PersistenceDiagram {
    ReductionState::reduce(cubical_boundary_matrix(img)).diagram().truncated(max_dim)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::types::PersistencePair;

    fn image(rows: Vec<Vec<f64>>) -> GrayImage {
        GrayImage::from_rows(rows).unwrap()
    }

    #[test]
    fn single_pixel() {
        let dgm = cubical_persistence(&image(vec![vec![0.0]]), 1);
        assert_eq!(dgm.pairs(), &[PersistencePair::essential(0, 0.0)]);
    }

    #[test]
    fn ring_with_bright_center() {
        let img = image(vec![vec![0.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 0.0]]);
        let dgm = cubical_persistence(&img, 1).sorted();
        assert_eq!(dgm.pairs(), &[PersistencePair::essential(0, 0.0), PersistencePair::new(1, 0.0, 1.0)]);
    }

    #[test]
    fn constant_image() {
        let dgm = cubical_persistence(&image(vec![vec![2.5; 4]; 3]), 1);
        assert_eq!(dgm.pairs(), &[PersistencePair::essential(0, 2.5)]);
    }

    #[test]
    fn two_basins_merge_at_ridge() {
        let dgm = cubical_persistence(&image(vec![vec![0.0, 3.0, 1.0]]), 1).sorted();
        assert_eq!(dgm.pairs(), &[PersistencePair::essential(0, 0.0), PersistencePair::new(0, 1.0, 3.0)]);
    }

    #[test]
    fn cell_counts() {
        let m = cubical_boundary_matrix(&image(vec![vec![0.0; 3]; 2]));
        let mut counts = [0usize; 3];
        for &d in m.dims() {
            counts[d] += 1;
        }
        // 4x3 vertices, 3*3 + 2*4 edges, 6 pixels
        assert_eq!(counts, [12, 17, 6]);
    }
}
