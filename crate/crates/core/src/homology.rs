//! Reduced integral homology through Smith normal form of the augmented
//! boundary matrices.
//!
//! Unit pivots are eliminated sparsely first; whatever is left over is
//! diagonalised densely with arbitrary-precision integers.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{resource_limit, Result};
use crate::simplicial::SimplicialComplex;

/// Cap on the dense remainder of a boundary matrix.
pub const DEFAULT_DENSE_ENTRY_CAP: usize = 25_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyGroup {
    pub betti: usize,
    /// Invariant factors greater than one, in divisibility order.
    #[serde(serialize_with = "as_strings")]
    pub torsion: Vec<BigInt>,
}

fn as_strings<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|x| x.to_string()))
}

/// Reduced homology groups in degrees `0..=dim`. The empty complex has no
/// entries here (its only group sits in degree −1).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducedHomology {
    pub groups: Vec<HomologyGroup>,
}

impl ReducedHomology {
    pub fn betti_numbers(&self) -> Vec<usize> {
        self.groups.iter().map(|g| g.betti).collect()
    }

    pub fn betti(&self, degree: usize) -> usize {
        self.groups.get(degree).map_or(0, |g| g.betti)
    }

    pub fn is_torsion_free(&self) -> bool {
        self.groups.iter().all(|g| g.torsion.is_empty())
    }
}

/// Sparse integer matrix as `(row, col) -> value`.
#[derive(Clone, Debug, Default)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeMap<(usize, usize), i64>,
}

impl SparseMatrix {
    /// Product `self · other`, used to check ∂∘∂ = 0.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        let mut by_row: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
        for (&(r, c), &v) in &other.entries {
            by_row.entry(r).or_default().push((c, v));
        }
        let mut out = SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            entries: BTreeMap::new(),
        };
        for (&(r, k), &v) in &self.entries {
            for &(c, w) in by_row.get(&k).map(Vec::as_slice).unwrap_or(&[]) {
                *out.entries.entry((r, c)).or_default() += v * w;
            }
        }
        out.entries.retain(|_, v| *v != 0);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Boundary map from `d`-faces to `(d−1)`-faces; for `d = 0` the
/// augmentation to a single row.
pub fn boundary_matrix<L>(k: &SimplicialComplex<L>, d: usize) -> SparseMatrix {
    let cols = k.faces_of_dim(d);
    if d == 0 {
        return SparseMatrix {
            rows: 1,
            cols: cols.len(),
            entries: (0..cols.len()).map(|j| ((0, j), 1)).collect(),
        };
    }
    let mut m = SparseMatrix {
        rows: k.faces_of_dim(d - 1).len(),
        cols: cols.len(),
        entries: BTreeMap::new(),
    };
    for (j, f) in cols.iter().enumerate() {
        for i in 0..f.len() {
            let mut sub = f.clone();
            sub.remove(i);
            let r = k.face_index(&sub).expect("complex is downward closed");
            m.entries.insert((r, j), if i % 2 == 0 { 1 } else { -1 });
        }
    }
    m
}

pub fn reduced_homology<L>(k: &SimplicialComplex<L>) -> Result<ReducedHomology> {
    reduced_homology_capped(k, DEFAULT_DENSE_ENTRY_CAP)
}

pub fn reduced_homology_capped<L>(k: &SimplicialComplex<L>, dense_cap: usize) -> Result<ReducedHomology> {
    if k.num_vertices() == 0 {
        return Ok(ReducedHomology { groups: Vec::new() });
    }
    let top = k.dimension() as usize;
    let factors: Vec<Vec<BigInt>> = (0..=top + 1)
        .map(|d| invariant_factors(&boundary_matrix(k, d), dense_cap))
        .collect::<Result<_>>()?;
    let groups = (0..=top)
        .map(|d| {
            let chains = k.faces_of_dim(d).len();
            HomologyGroup {
                betti: chains - factors[d].len() - factors[d + 1].len(),
                torsion: factors[d + 1].iter().filter(|x| !x.is_one()).cloned().collect(),
            }
        })
        .collect();
    Ok(ReducedHomology { groups })
}

/// Nonzero invariant factors of `m` (absolute values, divisibility order).
pub fn invariant_factors(m: &SparseMatrix, dense_cap: usize) -> Result<Vec<BigInt>> {
    let mut rows: Vec<BTreeMap<usize, BigInt>> = vec![BTreeMap::new(); m.rows];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); m.cols];
    for (&(r, c), &v) in &m.entries {
        if v != 0 {
            rows[r].insert(c, BigInt::from(v));
            col_rows[c].insert(r);
        }
    }
    let mut units = 0usize;
    loop {
        // unit pivot of least fill
        let mut best: Option<(usize, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for (&c, v) in row {
                if v.abs().is_one() {
                    let cost = (row.len() - 1) * (col_rows[c].len() - 1);
                    if best.is_none_or(|b| cost < b.2) {
                        best = Some((r, c, cost));
                    }
                }
            }
        }
        let Some((pr, pc, _)) = best else { break };
        let pivot_row = std::mem::take(&mut rows[pr]);
        let unit = pivot_row[&pc].clone();
        for &c in pivot_row.keys() {
            col_rows[c].remove(&pr);
        }
        let targets: Vec<usize> = col_rows[pc].iter().copied().collect();
        for r in targets {
            let factor = &rows[r][&pc] * &unit;
            for (&c, v) in &pivot_row {
                let entry = rows[r].entry(c).or_insert_with(BigInt::zero);
                *entry -= &factor * v;
                if entry.is_zero() {
                    rows[r].remove(&c);
                    col_rows[c].remove(&r);
                } else {
                    col_rows[c].insert(r);
                }
            }
        }
        debug_assert!(col_rows[pc].is_empty());
        units += 1;
    }
    let live_rows: Vec<usize> = (0..rows.len()).filter(|&r| !rows[r].is_empty()).collect();
    let live_cols: Vec<usize> = (0..col_rows.len()).filter(|&c| !col_rows[c].is_empty()).collect();
    let mut out = vec![BigInt::one(); units];
    if live_rows.is_empty() {
        return Ok(out);
    }
    let cells = live_rows.len().saturating_mul(live_cols.len());
    if cells > dense_cap {
        return Err(resource_limit("dense Smith normal form entries", cells, dense_cap));
    }
    let col_pos: BTreeMap<usize, usize> = live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let dense: Vec<Vec<BigInt>> = live_rows
        .iter()
        .map(|&r| {
            let mut row = vec![BigInt::zero(); live_cols.len()];
            for (c, v) in &rows[r] {
                row[col_pos[c]] = v.clone();
            }
            row
        })
        .collect();
    out.extend(dense_smith_diagonal(dense));
    Ok(out)
}

/// Diagonal of the Smith normal form of a dense matrix (nonzero entries only).
pub fn dense_smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_abs_entry(&a, t) else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    a.swap(t, i);
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                    clean = false;
                }
            }
            if clean {
                // enforce divisibility of the remaining block by the pivot
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
                match bad {
                    Some(i) => {
                        for j in t..n {
                            let v = a[i][j].clone();
                            a[t][j] += v;
                        }
                    }
                    None => break,
                }
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_abs_entry(a: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, v) in row.iter().enumerate().skip(t) {
            if !v.is_zero() && best.as_ref().is_none_or(|b| v.abs() < b.2) {
                best = Some((i, j, v.abs()));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn smith_diagonal_small_cases() {
        let a = vec![big(&[2, 4, 4]), big(&[-6, 6, 12]), big(&[10, -4, -16])];
        assert_eq!(dense_smith_diagonal(a), big(&[2, 6, 12]));
        let b = vec![big(&[2, 0]), big(&[0, 3])];
        assert_eq!(dense_smith_diagonal(b), big(&[1, 6]));
        assert!(dense_smith_diagonal(vec![big(&[0, 0])]).is_empty());
    }

    #[test]
    fn two_sphere() {
        let k = SimplicialComplex::from_facets(
            vec![0, 1, 2, 3],
            vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]],
        )
        .unwrap();
        let h = reduced_homology(&k).unwrap();
        assert_eq!(h.betti_numbers(), vec![0, 0, 1]);
        assert!(h.is_torsion_free());
    }

    #[test]
    fn ten_points() {
        let k = SimplicialComplex::from_facets((0..10).collect(), vec![]).unwrap();
        assert_eq!(reduced_homology(&k).unwrap().betti_numbers(), vec![9]);
    }

    #[test]
    fn projective_plane_has_two_torsion() {
        // six-vertex triangulation of RP^2
        let facets = vec![
            vec![0, 1, 3], vec![0, 1, 5], vec![0, 2, 4], vec![0, 2, 5], vec![0, 3, 4],
            vec![1, 2, 3], vec![1, 2, 4], vec![1, 4, 5], vec![2, 3, 5], vec![3, 4, 5],
        ];
        let k = SimplicialComplex::from_facets((0..6).collect(), facets).unwrap();
        let h = reduced_homology(&k).unwrap();
        assert_eq!(h.betti_numbers(), vec![0, 0, 0]);
        assert_eq!(h.groups[1].torsion, big(&[2]));
    }

    #[test]
    fn boundary_squares_to_zero() {
        let k = SimplicialComplex::from_facets((0..5).collect(), vec![(0..5).collect()]).unwrap();
        for d in 1..5 {
            assert!(boundary_matrix(&k, d - 1).mul(&boundary_matrix(&k, d)).is_zero());
        }
    }

    #[test]
    fn dense_cap_is_enforced() {
        let k = SimplicialComplex::from_facets(vec![0, 1], vec![]).unwrap();
        let m = SparseMatrix {
            rows: 2,
            cols: 2,
            entries: [((0, 0), 2), ((1, 1), 2)].into_iter().collect(),
        };
        assert!(invariant_factors(&m, 3).is_err());
        assert!(reduced_homology_capped(&k, 0).is_ok());
    }
}
