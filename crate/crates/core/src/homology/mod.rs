//! Integral homology of finite simplicial complexes with coefficients in a
//! rank-one local system of `±1` monodromy.
//!
//! The twisted boundary puts the fiber of each simplex `[v0 < ... < vk]` at its
//! minimal vertex `v0`. Removing `v0` moves the fiber to `v1`, so the `i = 0`
//! face picks up the transport sign `s(v0, v1)` on top of the usual `(-1)^i`;
//! every other face keeps its base point. `d∘d = 0` then follows from the
//! cocycle condition on 2-simplices alone.

mod chain;
mod matrix;
mod model;

pub use chain::{ChainComplex, DSquaredDefect, DegreeHomology, HomologyProfile};
pub use matrix::{smith_normal_form, IntegerMatrix, SmithForm};
pub use model::{CellModel, SignCocycle};

pub(crate) use chain::accumulate;

use crate::error::Result;
use crate::intpoly::IntPolynomial;

/// Simplicial chain complex of `model` twisted by `twist` (`None` is the
/// constant system `Z`).
pub fn boundary_matrices(model: &CellModel, twist: Option<&SignCocycle>) -> Result<ChainComplex> {
    if let Some(t) = twist {
        t.check(model)?;
    }
    let ranks = model.cell_counts();
    let mut higher = Vec::new();
    for k in 1..ranks.len() {
        let entries = model.cells(k).iter().enumerate().flat_map(|(col, simplex)| {
            (0..simplex.len()).map(move |i| {
                let mut face = simplex.clone();
                face.remove(i);
                let row = model.index_of(&face).expect("model is closed under faces");
                let mut sign: i64 = if i % 2 == 0 { 1 } else { -1 };
                if i == 0 {
                    if let Some(t) = twist {
                        sign *= i64::from(t.sign(simplex[0], simplex[1]));
                    }
                }
                (row, col, sign)
            })
        });
        higher.push(accumulate(ranks[k - 1], ranks[k], entries));
    }
    Ok(ChainComplex::new(ranks, higher))
}

pub fn homology_profile(model: &CellModel, twist: Option<&SignCocycle>) -> Result<HomologyProfile> {
    Ok(boundary_matrices(model, twist)?.homology())
}

/// `P_t(X; L) = sum_k rank H_k(X; L) t^k`. Torsion never contributes.
pub fn poincare_polynomial(model: &CellModel, twist: Option<&SignCocycle>) -> Result<IntPolynomial> {
    Ok(homology_profile(model, twist)?.poincare_polynomial())
}

/// Free ranks of `H_*(model, sub; Z)`, computed on the quotient complex of
/// simplices not in `sub`. `sub` must be a subcomplex of `model`.
pub fn relative_homology_profile(model: &CellModel, sub: &CellModel) -> Result<HomologyProfile> {
    let keep: Vec<Vec<usize>> = (0..=model.dim().unwrap_or(0))
        .map(|k| {
            (0..model.cells(k).len())
                .filter(|&i| !sub.contains(&model.cells(k)[i]))
                .collect()
        })
        .collect();
    let full = boundary_matrices(model, None)?;
    let ranks: Vec<usize> = keep.iter().map(Vec::len).collect();
    let higher = (1..ranks.len())
        .map(|k| full.boundary(k).submatrix(&keep[k - 1], &keep[k]))
        .collect();
    Ok(ChainComplex::new(ranks, higher).homology())
}

/// `P_t(M, ∂M; Z)` with `∂M` the pseudo-manifold boundary of `model`.
pub fn relative_poincare_polynomial(model: &CellModel) -> Result<IntPolynomial> {
    Ok(relative_homology_profile(model, &model.boundary())?.poincare_polynomial())
}

/// Whether the untwisted Poincaré polynomial is palindromic about `dim`, as
/// it must be for a closed oriented `dim`-manifold.
pub fn poincare_duality_check(model: &CellModel, dim: usize) -> Result<bool> {
    let p = poincare_polynomial(model, None)?;
    Ok(p.reverse(dim).is_ok_and(|r| r == p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn circle() -> CellModel {
        CellModel::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    fn torus7() -> CellModel {
        CellModel::from_facets(
            (0..7u32).flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]]),
        )
        .unwrap()
    }

    #[test]
    fn circle_untwisted() {
        let c = boundary_matrices(&circle(), None).unwrap();
        assert_eq!(smith_normal_form(&c.boundary(1)).rank, 2);
        assert_eq!(poincare_polynomial(&circle(), None).unwrap(), p(&[1, 1]));
    }

    #[test]
    fn circle_with_monodromy_minus_one() {
        let twist = SignCocycle::new([(0, 1, -1)]).unwrap();
        let c = boundary_matrices(&circle(), Some(&twist)).unwrap();
        // Hand-built: d[01] = -[1] - [0], d[02] = [2] - [0], d[12] = [2] - [1].
        let expected = IntegerMatrix::from_rows(&[vec![-1, -1, 0], vec![-1, 0, -1], vec![0, 1, 1]]);
        assert_eq!(c.boundary(1), expected);
        let snf = smith_normal_form(&expected);
        // det = -2, so the divisor chain is (1, 1, 2).
        let divisors: Vec<i64> = snf
            .elementary_divisors
            .iter()
            .map(|d| i64::try_from(d).unwrap())
            .collect();
        assert_eq!(divisors, vec![1, 1, 2]);
        let h = homology_profile(&circle(), Some(&twist)).unwrap();
        assert!(h.poincare_polynomial().is_zero());
        assert_eq!(h.to_string(), "0, torsion: [2] in degree 0");
    }

    #[test]
    fn point_and_disk() {
        let point = CellModel::new([7], Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(poincare_polynomial(&point, None).unwrap(), p(&[1]));
        let disk = CellModel::from_facets([vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]]).unwrap();
        assert_eq!(poincare_polynomial(&disk, None).unwrap(), p(&[1]));
        assert_eq!(relative_poincare_polynomial(&disk).unwrap(), p(&[0, 0, 1]));
    }

    #[test]
    fn duality_checks() {
        assert!(poincare_duality_check(&circle(), 1).unwrap());
        assert_eq!(poincare_polynomial(&torus7(), None).unwrap(), p(&[1, 2, 1]));
        assert!(poincare_duality_check(&torus7(), 2).unwrap());
        let point = CellModel::new([0], Vec::<Vec<u32>>::new()).unwrap();
        assert!(poincare_duality_check(&point, 0).unwrap());
        let disk = CellModel::from_facets([vec![0, 1, 2]]).unwrap();
        assert!(!poincare_duality_check(&disk, 2).unwrap());
    }

    #[test]
    fn cocycle_violation_is_an_error() {
        let disk = CellModel::from_facets([vec![0, 1, 2]]).unwrap();
        let bad = SignCocycle::new([(1, 2, -1)]).unwrap();
        assert!(matches!(
            boundary_matrices(&disk, Some(&bad)),
            Err(Error::CocycleViolation { .. })
        ));
    }
}
