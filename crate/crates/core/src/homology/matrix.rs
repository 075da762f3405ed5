use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Dense row-major matrix of arbitrary-precision integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    /// Panics if the rows are ragged.
    pub fn from_rows<T: Into<BigInt> + Copy>(rows: &[Vec<T>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&x| x.into()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: &BigInt) {
        self.entries[i * self.cols + j] += value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Positions and values of the nonzero entries, row-major.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(n, v)| (n / self.cols, n % self.cols, v))
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in matrix product");
        let mut out = IntegerMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.add_to(i, j, &(a * b));
                    }
                }
            }
        }
        out
    }

    /// Restriction to the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> IntegerMatrix {
        let mut out = IntegerMatrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.entries.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[target] -= factor * row[source]
    fn row_axpy(&mut self, target: usize, source: usize, factor: &BigInt, from_col: usize) {
        for j in from_col..self.cols {
            let delta = factor * self.get(source, j);
            if !delta.is_zero() {
                self.entries[target * self.cols + j] -= delta;
            }
        }
    }

    /// col[target] -= factor * col[source]
    fn col_axpy(&mut self, target: usize, source: usize, factor: &BigInt, from_row: usize) {
        for i in from_row..self.rows {
            let delta = factor * self.get(i, source);
            if !delta.is_zero() {
                self.entries[i * self.cols + target] -= delta;
            }
        }
    }
}

impl fmt::Display for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Rank and invariant factors of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub rank: usize,
    /// Positive, with each dividing the next.
    pub elementary_divisors: Vec<BigInt>,
}

impl SmithForm {
    /// The divisors greater than one, i.e. the torsion they produce in a cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.elementary_divisors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

/// Diagonalize by unimodular row and column operations, pivoting on the
/// entry of smallest absolute value.
pub fn smith_normal_form(m: &IntegerMatrix) -> SmithForm {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = min_abs_position(&a, t..rows, t..cols) else {
            break;
        };
        a.swap_rows(t, pi);
        a.swap_cols(t, pj);
        loop {
            let pivot = a.get(t, t).clone();
            for i in t + 1..rows {
                if !a.get(i, t).is_zero() {
                    let q = a.get(i, t) / &pivot;
                    a.row_axpy(i, t, &q, t);
                }
            }
            for j in t + 1..cols {
                if !a.get(t, j).is_zero() {
                    let q = a.get(t, j) / &pivot;
                    a.col_axpy(j, t, &q, t);
                }
            }
            // Remainders left in the pivot row or column are smaller than
            // the pivot; bring the smallest one up and repeat.
            let leftover_col = min_abs_position(&a, t + 1..rows, t..t + 1);
            let leftover_row = min_abs_position(&a, t..t + 1, t + 1..cols);
            match (leftover_col, leftover_row) {
                (Some((i, _)), _) => {
                    a.swap_rows(t, i);
                    continue;
                }
                (None, Some((_, j))) => {
                    a.swap_cols(t, j);
                    continue;
                }
                (None, None) => {}
            }
            // The pivot must divide the remaining block for the divisor chain.
            let pivot = a.get(t, t).clone();
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !(a.get(i, j) % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let one = -BigInt::one();
                    a.row_axpy(t, i, &one, t);
                }
                None => break,
            }
        }
        t += 1;
    }
    let elementary_divisors: Vec<BigInt> = (0..t).map(|i| a.get(i, i).abs()).collect();
    SmithForm {
        rank: elementary_divisors.len(),
        elementary_divisors,
    }
}

fn min_abs_position(
    a: &IntegerMatrix,
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in rows {
        for j in cols.clone() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            let mag = v.abs();
            if best.as_ref().is_none_or(|(_, _, b)| mag < *b) {
                best = Some((i, j, mag));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[Vec<i64>]) -> (usize, Vec<i64>) {
        let s = smith_normal_form(&IntegerMatrix::from_rows(rows));
        let d = s
            .elementary_divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        (s.rank, d)
    }

    #[test]
    fn examples() {
        assert_eq!(snf(&[vec![2]]), (1, vec![2]));
        assert_eq!(snf(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]), (3, vec![1, 1, 1]));
        // gcd of entries is 2; the only 2x2 minor is 16 - 24 = -8, so d2 = 8 / 2.
        assert_eq!(snf(&[vec![2, 4], vec![6, 8]]), (2, vec![2, 4]));
    }

    #[test]
    fn divisor_chain_is_enforced() {
        // diag(2, 3) is not in normal form; the chain is (1, 6).
        assert_eq!(snf(&[vec![2, 0], vec![0, 3]]), (2, vec![1, 6]));
    }

    #[test]
    fn degenerate_shapes() {
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(0, 4)).rank, 0);
        assert_eq!(smith_normal_form(&IntegerMatrix::zeros(3, 0)).rank, 0);
        assert_eq!(snf(&[vec![0, 0], vec![0, 0]]), (0, vec![]));
        assert_eq!(snf(&[vec![1, 1, 1]]), (1, vec![1]));
    }

    #[test]
    fn product() {
        let a = IntegerMatrix::from_rows(&[vec![1, 2], vec![3, 4]]);
        let b = IntegerMatrix::from_rows(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(a.mul(&b), IntegerMatrix::from_rows(&[vec![2, 1], vec![4, 3]]));
        assert_eq!(a.mul(&IntegerMatrix::identity(2)), a);
    }
}
