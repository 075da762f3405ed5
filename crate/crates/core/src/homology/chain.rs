use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::matrix::{smith_normal_form, IntegerMatrix, SmithForm};
use crate::intpoly::IntPolynomial;

/// A bounded chain complex of free abelian groups, `C_0 <- C_1 <- ... <- C_top`.
///
/// `boundaries[k]` is the matrix of `d_k: C_k -> C_{k-1}` with shape
/// `ranks[k-1] x ranks[k]`; `boundaries[0]` has zero rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    ranks: Vec<usize>,
    boundaries: Vec<IntegerMatrix>,
}

/// A nonzero entry of some composite `d_{k-1} d_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredDefect {
    /// Degree `k` of the source generator.
    pub degree: usize,
    /// Index of the generator in `C_k`.
    pub source: usize,
    /// Index of the generator in `C_{k-2}`.
    pub target: usize,
    #[serde(serialize_with = "crate::intpoly::serialize_bigint")]
    pub value: BigInt,
}

impl ChainComplex {
    /// `boundaries[k]` for `k >= 1` must be `ranks[k-1] x ranks[k]`.
    pub fn new(ranks: Vec<usize>, higher: Vec<IntegerMatrix>) -> Self {
        assert_eq!(higher.len() + 1, ranks.len().max(1), "one boundary per positive degree");
        let mut boundaries = Vec::with_capacity(ranks.len());
        boundaries.push(IntegerMatrix::zeros(0, ranks.first().copied().unwrap_or(0)));
        for (k, d) in higher.into_iter().enumerate() {
            assert_eq!(
                (d.rows(), d.cols()),
                (ranks[k], ranks[k + 1]),
                "boundary shape in degree {}",
                k + 1
            );
            boundaries.push(d);
        }
        Self { ranks, boundaries }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, k: usize) -> usize {
        self.ranks.get(k).copied().unwrap_or(0)
    }

    pub fn top_degree(&self) -> Option<usize> {
        self.ranks.len().checked_sub(1)
    }

    /// `d_k`; a zero map past the top degree.
    pub fn boundary(&self, k: usize) -> IntegerMatrix {
        match self.boundaries.get(k) {
            Some(d) => d.clone(),
            None => IntegerMatrix::zeros(self.rank(k.wrapping_sub(1)), self.rank(k)),
        }
    }

    pub fn boundary_ref(&self, k: usize) -> Option<&IntegerMatrix> {
        self.boundaries.get(k)
    }

    /// All nonzero entries of `d_{k-1} d_k`, ordered by degree, then source
    /// generator, then target generator.
    pub fn d_squared_defects(&self) -> Vec<DSquaredDefect> {
        let mut out = Vec::new();
        for k in 2..self.boundaries.len() {
            let product = self.boundaries[k - 1].mul(&self.boundaries[k]);
            let mut found: Vec<DSquaredDefect> = product
                .nonzero_entries()
                .map(|(row, col, v)| DSquaredDefect {
                    degree: k,
                    source: col,
                    target: row,
                    value: v.clone(),
                })
                .collect();
            found.sort_by_key(|d| (d.source, d.target));
            out.extend(found);
        }
        out
    }

    fn smith_forms(&self) -> Vec<SmithForm> {
        self.boundaries.iter().map(smith_normal_form).collect()
    }

    /// `rank Ker d_k` per degree, as `#generators - rank d_k`.
    pub fn kernel_ranks(&self) -> Vec<usize> {
        self.smith_forms()
            .iter()
            .zip(&self.ranks)
            .map(|(s, &n)| n - s.rank)
            .collect()
    }

    /// `rank d_k` per degree (zero in degree 0).
    pub fn boundary_ranks(&self) -> Vec<usize> {
        self.smith_forms().iter().map(|s| s.rank).collect()
    }

    pub fn homology(&self) -> HomologyProfile {
        let forms = self.smith_forms();
        let degrees = (0..self.ranks.len())
            .map(|k| {
                let out_rank = forms[k].rank;
                let (in_rank, torsion) = forms.get(k + 1).map_or((0, Vec::new()), |s| (s.rank, s.torsion()));
                DegreeHomology {
                    free_rank: self.ranks[k] - out_rank - in_rank,
                    torsion,
                }
            })
            .collect();
        HomologyProfile { degrees }
    }

    /// `sum_k rank C_k t^k`.
    pub fn counting_polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_counts(&self.ranks.iter().map(|&n| n as u64).collect::<Vec<_>>())
    }

    /// `sum_{k >= 1} (rank C_k - rank Ker d_k) t^(k-1)`, the quotient for
    /// which `counting - poincare = (1 + t) * quotient` holds in any complex.
    pub fn rank_quotient(&self) -> IntPolynomial {
        let ranks = self.boundary_ranks();
        IntPolynomial::from_counts(&ranks.iter().skip(1).map(|&r| r as u64).collect::<Vec<_>>())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.ranks
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub free_rank: usize,
    /// Elementary divisors greater than one.
    #[serde(serialize_with = "crate::intpoly::serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomologyProfile {
    pub degrees: Vec<DegreeHomology>,
}

impl HomologyProfile {
    pub fn poincare_polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_counts(&self.degrees.iter().map(|d| d.free_rank as u64).collect::<Vec<_>>())
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.degrees
            .iter()
            .enumerate()
            .map(|(k, d)| {
                if k % 2 == 0 {
                    d.free_rank as i64
                } else {
                    -(d.free_rank as i64)
                }
            })
            .sum()
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }
}

/// `1+2t+t^2, torsion: none` or `0, torsion: [2] in degree 0`.
impl fmt::Display for HomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}, torsion: ", self.poincare_polynomial())?;
        let parts: Vec<String> = self
            .degrees
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.torsion.is_empty())
            .map(|(k, d)| {
                let t: Vec<String> = d.torsion.iter().map(BigInt::to_string).collect();
                format!("[{}] in degree {k}", t.join(", "))
            })
            .collect();
        if parts.is_empty() {
            f.write_str("none")
        } else {
            f.write_str(&parts.join("; "))
        }
    }
}

/// Apply a signed sum over index pairs into a fresh matrix.
pub(crate) fn accumulate(
    rows: usize,
    cols: usize,
    entries: impl IntoIterator<Item = (usize, usize, i64)>,
) -> IntegerMatrix {
    let mut m = IntegerMatrix::zeros(rows, cols);
    for (i, j, v) in entries {
        if v != 0 {
            m.add_to(i, j, &BigInt::from(v));
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_complex() {
        // two points, two lines with opposite signs
        let c = ChainComplex::new(vec![1, 1], vec![IntegerMatrix::from_rows(&[vec![0]])]);
        let h = c.homology();
        assert_eq!(h.poincare_polynomial(), IntPolynomial::from_i64s(&[1, 1]));
        assert_eq!(h.to_string(), "1+t, torsion: none");
        assert!(c.d_squared_defects().is_empty());
    }

    #[test]
    fn torsion_reported_in_cokernel_degree() {
        let c = ChainComplex::new(vec![1, 1], vec![IntegerMatrix::from_rows(&[vec![2]])]);
        let h = c.homology();
        assert_eq!(h.to_string(), "0, torsion: [2] in degree 0");
        assert_eq!(c.kernel_ranks(), vec![1, 0]);
    }

    #[test]
    fn defects_are_located() {
        let closed = ChainComplex::new(
            vec![1, 1, 2],
            vec![
                IntegerMatrix::from_rows(&[vec![0]]),
                IntegerMatrix::from_rows(&[vec![1, 0]]),
            ],
        );
        assert!(closed.d_squared_defects().is_empty());
        let c = ChainComplex::new(
            vec![1, 1, 2],
            vec![
                IntegerMatrix::from_rows(&[vec![1]]),
                IntegerMatrix::from_rows(&[vec![0, 3]]),
            ],
        );
        assert_eq!(
            c.d_squared_defects(),
            vec![DSquaredDefect {
                degree: 2,
                source: 1,
                target: 0,
                value: BigInt::from(3)
            }]
        );
    }

    #[test]
    fn rank_quotient_reconstructs_counting_polynomial() {
        let c = ChainComplex::new(
            vec![1, 2, 1],
            vec![
                IntegerMatrix::from_rows(&[vec![1, 0]]),
                IntegerMatrix::from_rows(&[vec![0], vec![2]]),
            ],
        );
        let lhs = &(&IntPolynomial::one_plus_t() * &c.rank_quotient()) + &c.homology().poincare_polynomial();
        assert_eq!(lhs, c.counting_polynomial());
    }
}
