//! Exact linear algebra over ℚ.
//!
//! Two flavours live here. The dense routines ([`rref`], [`Subspace`],
//! [`solve`], [`nullspace`]) work on small systems such as the center of a
//! 9-dimensional algebra. [`SparseEchelon`] is a fraction-free incremental
//! eliminator for the large, very sparse constraint systems produced by the
//! Leibniz-bracket solver (hundreds of thousands of rows with a handful of
//! entries each).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<Rational>>) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of `{ v : M v = 0 }` for the matrix with the given rows.
///
/// One vector per free column, with a 1 in that column.
pub fn nullspace(rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let (rows, pivots) = rref(rows);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..ncols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (row, &p) in rows.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            v
        })
        .collect()
}

/// Solves `Σ t_m columns[m] = rhs`, returning the solution with all free
/// variables set to zero, or `None` if the system is inconsistent.
pub fn solve(columns: &[Vec<Rational>], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let m = columns.len();
    let rows: Vec<Vec<Rational>> = (0..rhs.len())
        .map(|i| columns.iter().map(|col| col[i].clone()).chain(std::iter::once(rhs[i].clone())).collect())
        .collect();
    let (rows, pivots) = rref(rows);
    if pivots.last() == Some(&m) {
        return None;
    }
    let mut t = vec![Rational::zero(); m];
    for (row, &p) in rows.iter().zip(&pivots) {
        t[p] = row[m].clone();
    }
    Some(t)
}

/// A linear subspace of ℚⁿ kept in reduced row echelon form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![Rational::zero(); ambient];
                v[i] = Rational::one();
                v
            }),
        )
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        let rows: Vec<_> = vectors.into_iter().collect();
        assert!(rows.iter().all(|v| v.len() == ambient), "vector length must match ambient dimension");
        let (rows, pivots) = rref(rows);
        Self { ambient, rows, pivots }
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// What is left of `v` after eliminating all pivot columns.
    pub fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient);
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v` to the span. Returns `true` if the dimension grew.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let rest = self.reduce(v);
        let Some(p) = rest.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = rest[p].recip();
        let rest: Vec<Rational> = rest.into_iter().map(|x| x * &inv).collect();
        for row in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&rest) {
                if !r.is_zero() {
                    *x -= &f * r;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, rest);
        self.pivots.insert(at, p);
        true
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.rows.iter().all(|v| other.contains(v))
    }
}

/// A sparse row with integer entries, sorted by column, no zeros, primitive
/// (content 1) and with a positive leading entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparseRow(Vec<(usize, BigInt)>);

impl SparseRow {
    /// Clears denominators of a rational row and normalizes it.
    /// Returns `None` for the zero row.
    pub fn from_rationals(entries: impl IntoIterator<Item = (usize, Rational)>) -> Option<Self> {
        let mut entries: Vec<(usize, Rational)> = entries.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        if entries.is_empty() {
            return None;
        }
        entries.sort_by_key(|(c, _)| *c);
        let lcm = entries.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        let ints = entries.into_iter().map(|(c, v)| (c, v.numer() * (&lcm / v.denom()))).collect();
        Self::normalized(ints)
    }

    fn normalized(mut entries: Vec<(usize, BigInt)>) -> Option<Self> {
        entries.retain(|(_, v)| !v.is_zero());
        let first = entries.first()?;
        let mut g = entries.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if first.1.is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, v) in &mut entries {
                *v /= &g;
            }
        }
        Some(Self(entries))
    }

    pub fn lead(&self) -> usize {
        self.0[0].0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.0
    }

    fn coeff(&self, col: usize) -> Option<&BigInt> {
        self.0.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &self.0[i].1)
    }

    /// `a·self − b·other` where the multipliers cancel column `col`.
    fn eliminate(&self, other: &SparseRow, col: usize) -> Option<SparseRow> {
        let x = self.coeff(col).expect("column present in row");
        let y = other.coeff(col).expect("column present in pivot");
        let g = x.gcd(y);
        let a = y / &g;
        let b = x / &g;
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            let ci = self.0.get(i).map(|e| e.0);
            let cj = other.0.get(j).map(|e| e.0);
            match (ci, cj) {
                (Some(p), Some(q)) if p == q => {
                    out.push((p, &a * &self.0[i].1 - &b * &other.0[j].1));
                    i += 1;
                    j += 1;
                }
                (Some(p), Some(q)) if p < q => {
                    out.push((p, &a * &self.0[i].1));
                    i += 1;
                }
                (Some(p), None) => {
                    out.push((p, &a * &self.0[i].1));
                    i += 1;
                }
                (_, Some(q)) => {
                    out.push((q, -(&b * &other.0[j].1)));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Self::normalized(out)
    }
}

/// Incremental fraction-free sparse Gaussian elimination.
///
/// Rows are reduced against the current pivots as they arrive. When a new
/// row and an existing pivot share a leading column, the sparser of the two
/// is kept as the pivot, which keeps fill-in low on the near-permutation
/// systems produced by structure constants.
#[derive(Debug, Clone)]
pub struct SparseEchelon {
    ncols: usize,
    pivots: HashMap<usize, SparseRow>,
}

impl SparseEchelon {
    pub fn new(ncols: usize) -> Self {
        Self { ncols, pivots: HashMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Adds a row to the system. Returns `true` if the rank grew.
    pub fn push(&mut self, row: SparseRow) -> bool {
        let mut current = row;
        loop {
            let lead = current.lead();
            assert!(lead < self.ncols, "column {lead} out of range");
            match self.pivots.get_mut(&lead) {
                None => {
                    self.pivots.insert(lead, current);
                    return true;
                }
                Some(pivot) => {
                    if current.len() < pivot.len() {
                        std::mem::swap(pivot, &mut current);
                    }
                    match current.eliminate(pivot, lead) {
                        Some(next) => current = next,
                        None => return false,
                    }
                }
            }
        }
    }

    /// Basis of the nullspace, one vector per free column with a 1 there.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut leads: Vec<usize> = self.pivots.keys().copied().collect();
        leads.sort_unstable();
        // Back-substitute from the right so each row keeps only its own
        // pivot and free columns.
        let mut reduced: HashMap<usize, SparseRow> = HashMap::with_capacity(leads.len());
        for &lead in leads.iter().rev() {
            let mut row = self.pivots[&lead].clone();
            while let Some(col) = row.0[1..].iter().map(|e| e.0).find(|c| reduced.contains_key(c)) {
                row = row.eliminate(&reduced[&col], col).expect("pivot row cannot vanish");
            }
            reduced.insert(lead, row);
        }
        (0..self.ncols)
            .filter(|c| !reduced.contains_key(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); self.ncols];
                v[free] = Rational::one();
                for (&lead, row) in &reduced {
                    if let Some(c) = row.coeff(free) {
                        let l = &row.0[0].1;
                        v[lead] = -Rational::new(c.clone(), l.clone());
                    }
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn row(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn rref_rank_and_pivots() {
        let (rows, pivots) = rref(vec![row(&[1, 2, 3]), row(&[2, 4, 6]), row(&[0, 1, 1])]);
        assert_eq!(pivots, vec![0, 1]);
        assert_eq!(rows[0], row(&[1, 0, 1]));
        assert_eq!(rows[1], row(&[0, 1, 1]));
    }

    #[test]
    fn nullspace_vectors_are_annihilated() {
        let m = vec![row(&[1, 1, 0, 0]), row(&[0, 0, 1, -1])];
        let ns = nullspace(m.clone(), 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &m {
                let dot: Rational = r.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let cols = vec![row(&[1, 0]), row(&[1, 1])];
        let t = solve(&cols, &row(&[3, 1])).unwrap();
        assert_eq!(t, vec![int(2), int(1)]);
        let cols = vec![row(&[1, 1])];
        assert!(solve(&cols, &row(&[1, 0])).is_none());
    }

    #[test]
    fn subspace_insert_matches_span() {
        let vs = vec![row(&[1, 2, 0]), row(&[0, 1, 1]), row(&[1, 3, 1])];
        let mut s = Subspace::zero(3);
        let grew: Vec<bool> = vs.iter().map(|v| s.insert(v)).collect();
        assert_eq!(grew, vec![true, true, false]);
        assert_eq!(s, Subspace::span(3, vs));
        assert!(s.contains(&row(&[2, 5, 1])));
        assert!(!s.contains(&row(&[0, 0, 1])));
    }

    #[test]
    fn sparse_row_normalization() {
        let r = SparseRow::from_rationals(vec![(3, rat(-1, 2)), (1, rat(-3, 4)), (2, int(0))]).unwrap();
        assert_eq!(r.entries(), &[(1, BigInt::from(3)), (3, BigInt::from(2))]);
        assert!(SparseRow::from_rationals(vec![(0, int(0))]).is_none());
    }

    #[test]
    fn sparse_nullspace_agrees_with_dense() {
        let dense =
            vec![row(&[1, -1, 0, 0, 2]), row(&[0, 2, -2, 0, 0]), row(&[1, 1, -2, 0, 2]), row(&[0, 0, 0, 3, -3])];
        let mut e = SparseEchelon::new(5);
        for r in &dense {
            e.push(SparseRow::from_rationals(r.iter().cloned().enumerate()).unwrap());
        }
        assert_eq!(e.rank(), 3);
        let sparse_ns = Subspace::span(5, e.nullspace());
        let dense_ns = Subspace::span(5, nullspace(dense, 5));
        assert_eq!(sparse_ns, dense_ns);
    }
}
