//! Exact sparse Gaussian elimination over Q(i).

use crate::coeffring::Scalar;

/// Sparse row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, Scalar)>;

fn axpy(row: &SparseRow, k: &Scalar, pivot: &SparseRow) -> SparseRow {
    // row - k * pivot
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_piv = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_piv {
            out.push((pivot[j].0, -&(k * &pivot[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(k * &pivot[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&Scalar> {
    row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|k| &row[k].1)
}

/// Incremental echelon form of `[A | B]` for `A x = B` with `unknowns`
/// columns in `A`; columns `>= unknowns` hold right-hand sides.
#[derive(Clone, Debug)]
pub struct Echelon {
    unknowns: usize,
    rows: Vec<SparseRow>,
    pivots: Vec<usize>,
    inconsistent: Vec<SparseRow>,
}

impl Echelon {
    pub fn new(unknowns: usize) -> Self {
        Echelon { unknowns, rows: Vec::new(), pivots: Vec::new(), inconsistent: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_consistent(&self) -> bool {
        self.inconsistent.is_empty()
    }

    /// Rows that reduced to `0 = b` with `b != 0`.
    pub fn inconsistent_rows(&self) -> &[SparseRow] {
        &self.inconsistent
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, mut row: SparseRow) -> SparseRow {
        for (p, prow) in self.pivots.iter().zip(&self.rows) {
            if let Some(k) = entry(&row, *p) {
                let k = k.clone();
                row = axpy(&row, &k, prow);
            }
        }
        row
    }

    /// Adds an equation; returns `true` if it raised the rank.
    pub fn push(&mut self, row: SparseRow) -> bool {
        let row = self.reduce(row);
        match row.first() {
            None => false,
            Some((c, _)) if *c >= self.unknowns => {
                self.inconsistent.push(row);
                false
            }
            Some((c, lead)) => {
                let inv = lead.inv().expect("nonzero pivot");
                let c = *c;
                let row: SparseRow = row.into_iter().map(|(j, v)| (j, &v * &inv)).collect();
                self.pivots.push(c);
                self.rows.push(row);
                true
            }
        }
    }

    /// Whether `row` (over unknown columns only) is in the row space.
    pub fn in_row_space(&self, row: SparseRow) -> bool {
        self.reduce(row).iter().all(|(c, _)| *c >= self.unknowns)
    }

    /// Per right-hand side column, whether its equations are consistent.
    pub fn consistent_columns(&self, rhs_count: usize) -> Vec<bool> {
        (0..rhs_count)
            .map(|s| self.inconsistent.iter().all(|row| entry(row, self.unknowns + s).is_none()))
            .collect()
    }

    /// A particular solution per right-hand side column (free unknowns set
    /// to zero), or `None` if inconsistent.
    pub fn solve(&self, rhs_count: usize) -> Option<Vec<Vec<Scalar>>> {
        if !self.is_consistent() {
            return None;
        }
        Some(self.back_substitute(rhs_count))
    }

    /// Back substitution through the pivot rows, ignoring inconsistent rows.
    /// Columns flagged by [`Echelon::consistent_columns`] get exact solutions.
    pub fn back_substitute(&self, rhs_count: usize) -> Vec<Vec<Scalar>> {
        let mut sol = vec![vec![Scalar::zero(); self.unknowns]; rhs_count];
        // back substitution in reverse pivot order
        for (p, row) in self.pivots.iter().zip(&self.rows).rev() {
            for (s, x) in sol.iter_mut().enumerate() {
                let mut v = entry(row, self.unknowns + s).cloned().unwrap_or_else(Scalar::zero);
                for (c, a) in row {
                    if *c > *p && *c < self.unknowns && !x[*c].is_zero() {
                        v = &v - &(a * &x[*c]);
                    }
                }
                x[*p] = v;
            }
        }
        sol
    }
}

/// Null space basis of a dense matrix.
pub fn kernel(m: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let ncols = m.first().map_or(0, Vec::len);
    let mut ech = Echelon::new(ncols);
    for r in m {
        ech.push(r.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(j, v)| (j, v.clone())).collect());
    }
    // fully reduce so each pivot row expresses its pivot through free columns
    let mut rows = ech.rows.clone();
    let pivots = ech.pivots.clone();
    for k in (0..rows.len()).rev() {
        for i in 0..k {
            if let Some(a) = entry(&rows[i], pivots[k]) {
                let a = a.clone();
                rows[i] = axpy(&rows[i], &a, &rows[k]);
            }
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Scalar::zero(); ncols];
            v[f] = Scalar::one();
            for (p, row) in pivots.iter().zip(&rows) {
                if let Some(a) = entry(row, f) {
                    v[*p] = -a;
                }
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::int(n)
    }

    fn dense(row: &[i64]) -> SparseRow {
        row.iter().enumerate().filter(|(_, v)| **v != 0).map(|(j, v)| (j, s(*v))).collect()
    }

    #[test]
    fn solves_square_system() {
        // x + 2y = 5, 3x - y = 1  ->  x = 1, y = 2
        let mut e = Echelon::new(2);
        e.push(dense(&[1, 2, 5]));
        e.push(dense(&[3, -1, 1]));
        let x = e.solve(1).unwrap();
        assert_eq!(x[0], vec![s(1), s(2)]);
    }

    #[test]
    fn detects_inconsistency() {
        let mut e = Echelon::new(2);
        e.push(dense(&[1, 1, 1]));
        e.push(dense(&[2, 2, 3]));
        assert!(!e.is_consistent());
        assert!(e.solve(1).is_none());
    }

    #[test]
    fn overdetermined_consistent() {
        let mut e = Echelon::new(2);
        e.push(dense(&[1, 0, 4]));
        e.push(dense(&[0, 1, -1]));
        assert!(!e.push(dense(&[1, 1, 3])));
        assert_eq!(e.solve(1).unwrap()[0], vec![s(4), s(-1)]);
    }

    #[test]
    fn kernel_of_rank_one() {
        let m = vec![vec![s(1), s(2), s(3)], vec![s(2), s(4), s(6)]];
        let k = kernel(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            let dot = (0..3).fold(Scalar::zero(), |acc, j| &acc + &(&m[0][j] * &v[j]));
            assert!(dot.is_zero());
        }
    }
}
