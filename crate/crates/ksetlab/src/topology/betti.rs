//! Reduced mod-2 Betti numbers by Gaussian elimination.
//!
//! This is a necessary-condition proxy: a complex that is q-connected
//! has vanishing reduced homology up to q, so a nonzero low Betti
//! number certifies a connectivity failure. The converse is not
//! claimed anywhere in this crate.

use std::collections::HashMap;

use crate::error::{usage, Result};

use super::{Complex, Simplex};

/// Column-packed GF(2) rank.
fn rank_mod2(mut cols: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let mut pivot_rows: Vec<usize> = Vec::new();
    for c in 0..cols.len() {
        // Reduce column c by previously found pivots.
        'outer: loop {
            let Some(row) = cols[c]
                .iter()
                .enumerate()
                .find_map(|(w, &word)| {
                    (word != 0).then(|| w * 64 + word.trailing_zeros() as usize)
                })
            else {
                break 'outer;
            };
            if let Some(p) = pivot_rows.iter().position(|&r| r == row) {
                // Pivot columns sit at 0..rank, so p indexes one directly.
                let src = cols[p].clone();
                for (w, word) in src.iter().enumerate() {
                    cols[c][w] ^= word;
                }
            } else {
                pivot_rows.push(row);
                rank += 1;
                // Move the pivot column into position `rank-1`.
                cols.swap(rank - 1, c);
                break 'outer;
            }
        }
    }
    rank
}

/// Reduced Betti numbers b̃_0 .. b̃_{up_to} over GF(2), computed from
/// the augmented chain complex (so one contractible component reports
/// all zeros and m components report b̃_0 = m − 1).
pub fn betti_mod2(k: &Complex, up_to: isize) -> Result<Vec<usize>> {
    let Some(dim) = k.dim() else {
        return Err(usage("homology of a complex with no facets".to_string()));
    };
    if up_to < 0 || up_to > dim {
        return Err(usage(format!("betti range 0..={up_to} outside complex dimension {dim}")));
    }
    // faces[i] holds the (i−1)-dimensional faces; faces[0] = {∅}.
    let mut faces: Vec<Vec<Simplex>> = vec![vec![Simplex::empty()]];
    for d in 0..=(up_to + 1).min(dim) {
        faces.push(k.faces_of_dim(d));
    }
    let index: Vec<HashMap<&Simplex, usize>> = faces
        .iter()
        .map(|level| level.iter().enumerate().map(|(i, s)| (s, i)).collect())
        .collect();

    // boundary_rank[i] = rank of the map from i-chains into (i−1)-chains,
    // with i counted in the shifted `faces` indexing (i ≥ 1).
    let mut boundary_rank = vec![0usize; faces.len() + 1];
    for level in 1..faces.len() {
        let rows = faces[level - 1].len();
        let words = rows.div_ceil(64);
        let cols: Vec<Vec<u64>> = faces[level]
            .iter()
            .map(|s| {
                let mut col = vec![0u64; words];
                if s.len() == 1 {
                    col[0] |= 1; // every vertex bounds the empty face
                } else {
                    for drop in 0..s.len() {
                        let verts = s
                            .vertices()
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| *i != drop)
                            .map(|(_, v)| v.clone())
                            .collect::<Vec<_>>();
                        let sub = Simplex::new(verts).expect("subface of a simplex");
                        let r = index[level - 1][&sub];
                        col[r / 64] |= 1 << (r % 64);
                    }
                }
                col
            })
            .collect();
        boundary_rank[level] = rank_mod2(cols);
    }

    let mut betti = Vec::new();
    for i in 0..=up_to {
        let level = (i + 1) as usize;
        let chains = faces[level].len();
        let kernel = chains - boundary_rank[level];
        let image = if level + 1 < faces.len() { boundary_rank[level + 1] } else { 0 };
        betti.push(kernel - image);
    }
    Ok(betti)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ProcessId;
    use crate::label::Label;
    use crate::topology::Vertex;

    fn v(p: usize, x: i64) -> Vertex {
        Vertex::new(ProcessId(p), Label::int(x))
    }

    fn s(verts: Vec<Vertex>) -> Simplex {
        Simplex::new(verts).unwrap()
    }

    #[test]
    fn solid_simplex_is_contractible() {
        let solid = Complex::from_facets(vec![s(vec![v(1, 0), v(2, 0), v(3, 0)])]);
        assert_eq!(betti_mod2(&solid, 2).unwrap(), vec![0, 0, 0]);
    }

    #[test]
    fn hollow_triangle_is_a_circle() {
        let hollow = Complex::from_facets(vec![
            s(vec![v(1, 0), v(2, 0)]),
            s(vec![v(2, 0), v(3, 0)]),
            s(vec![v(1, 0), v(3, 0)]),
        ]);
        assert_eq!(betti_mod2(&hollow, 1).unwrap(), vec![0, 1]);
    }

    #[test]
    fn disjoint_vertices_count_components() {
        let two = Complex::from_facets(vec![s(vec![v(1, 0)]), s(vec![v(2, 0)])]);
        assert_eq!(betti_mod2(&two, 0).unwrap(), vec![1]);
    }

    #[test]
    fn hollow_tetrahedron_is_a_sphere() {
        let f = s(vec![v(1, 0), v(2, 0), v(3, 0), v(4, 0)]);
        let hollow = Complex::from_facets(f.faces_of_dim(2));
        assert_eq!(betti_mod2(&hollow, 2).unwrap(), vec![0, 0, 1]);
    }
}
