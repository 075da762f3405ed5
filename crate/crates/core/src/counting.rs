//! Morse–Bott counting polynomials and the two factorization certificates.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::descriptor::{MorseBottDescriptor, SubmanifoldKind};
use crate::error::{Error, Result};
use crate::homology::poincare_duality_check;
use crate::intpoly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Theorem {
    Main,
    Corollary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub descriptor: String,
    pub theorem: Theorem,
    pub lhs: IntPolynomial,
    /// `R(t)`; zero when the division is inexact.
    pub quotient: IntPolynomial,
    pub exact_division: bool,
    pub nonnegative: bool,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
}

impl VerificationReport {
    /// Divide `lhs` by `1 + t` and grade the quotient.
    pub fn certify(descriptor: &str, theorem: Theorem, lhs: IntPolynomial) -> Self {
        let (quotient, exact) = lhs.divide_by_one_plus_t();
        let (quotient, nonnegative, failure_detail) = if !exact {
            let at = lhs.eval(&BigInt::from(-1));
            (
                IntPolynomial::zero(),
                false,
                Some(format!("division inexact: lhs(-1) = {at}")),
            )
        } else if let Some(k) = quotient.first_negative() {
            let detail = format!("R(t) has a negative coefficient: {} at t^{k}", quotient.coeff(k));
            (quotient, false, Some(detail))
        } else {
            (quotient, true, None)
        };
        let verdict = if exact && nonnegative {
            Verdict::Pass
        } else {
            Verdict::Fail
        };
        Self {
            descriptor: descriptor.to_owned(),
            theorem,
            lhs,
            quotient,
            exact_division: exact,
            nonnegative,
            verdict,
            failure_detail,
        }
    }
}

fn require_valid(d: &MorseBottDescriptor) -> Result<()> {
    let v = d.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidDescriptor(v))
    }
}

fn shifted_sum(d: &MorseBottDescriptor, include: impl Fn(SubmanifoldKind) -> Option<usize>) -> Result<IntPolynomial> {
    let mut total = IntPolynomial::zero();
    for (kind, sub) in d.submanifolds() {
        if let Some(extra) = include(kind) {
            total = total + sub.twisted_poincare()?.shift(sub.index + extra);
        }
    }
    Ok(total)
}

/// `MB^N_t(f)`: interior and type-N terms shifted by their index.
pub fn mb_polynomial_n(d: &MorseBottDescriptor) -> Result<IntPolynomial> {
    shifted_sum(d, |k| match k {
        SubmanifoldKind::Interior | SubmanifoldKind::BoundaryN => Some(0),
        SubmanifoldKind::BoundaryD => None,
    })
}

/// `MB^D_t(f)`: interior terms shifted by `λ`, type-D terms by `μ + 1`.
pub fn mb_polynomial_d(d: &MorseBottDescriptor) -> Result<IntPolynomial> {
    shifted_sum(d, |k| match k {
        SubmanifoldKind::Interior => Some(0),
        SubmanifoldKind::BoundaryD => Some(1),
        SubmanifoldKind::BoundaryN => None,
    })
}

/// `MB^N_t(f) - P_t(M) = (1 + t) R(t)` with `R >= 0`.
pub fn verify_main(d: &MorseBottDescriptor) -> Result<VerificationReport> {
    require_valid(d)?;
    let lhs = mb_polynomial_n(d)? - d.manifold_poincare()?;
    Ok(VerificationReport::certify(&d.name, Theorem::Main, lhs))
}

/// `P_t(M, ∂M)` by reversal of `P_t(M)` about `m`; valid for oriented `M`.
pub fn lefschetz_relative_polynomial(d: &MorseBottDescriptor) -> Result<IntPolynomial> {
    if !d.manifold_oriented {
        return Err(Error::NotOriented(format!(
            "manifold of `{}` is not oriented, so relative homology cannot be dualized",
            d.name
        )));
    }
    d.manifold_poincare()?.reverse(d.ambient_dim)
}

/// The supplied relative polynomial, else the dual of `P_t(M)`.
pub fn relative_polynomial(d: &MorseBottDescriptor) -> Result<IntPolynomial> {
    match &d.relative_homology {
        Some(src) => src.relative_poincare(),
        None if d.manifold_oriented => lefschetz_relative_polynomial(d),
        None => Err(Error::MissingRelativeHomology(format!(
            "`{}` supplies no relative_homology and its manifold is not oriented",
            d.name
        ))),
    }
}

fn require_duality(d: &MorseBottDescriptor) -> Result<()> {
    if !d.manifold_oriented {
        return Err(Error::NotOriented(format!("manifold of `{}` is not oriented", d.name)));
    }
    for (_, sub) in d.submanifolds() {
        if !sub.oriented_bundle {
            return Err(Error::NotOriented(format!(
                "negative normal bundle of `{}` is not oriented",
                sub.name
            )));
        }
        let palindromic = match sub.topology.cell_model() {
            Some(model) => poincare_duality_check(model, sub.dim)?,
            None => sub.twisted_poincare()?.is_palindromic(sub.dim),
        };
        if !palindromic {
            return Err(Error::NotPalindromic {
                name: sub.name.clone(),
                poly: sub.twisted_poincare()?.to_string(),
            });
        }
    }
    Ok(())
}

/// `MB^D_t(f) - P_t(M, ∂M) = (1 + t) R(t)` with `R >= 0`, for oriented data.
pub fn verify_corollary(d: &MorseBottDescriptor) -> Result<VerificationReport> {
    require_valid(d)?;
    require_duality(d)?;
    let lhs = mb_polynomial_d(d)? - relative_polynomial(d)?;
    Ok(VerificationReport::certify(&d.name, Theorem::Corollary, lhs))
}

/// Whether `MB^N_t(-f) = t^m MB^D_{1/t}(f)`.
pub fn cross_check_negation(d: &MorseBottDescriptor) -> Result<bool> {
    require_duality(d)?;
    let negated = d.negate()?;
    let lhs = mb_polynomial_n(&negated)?;
    let rhs = mb_polynomial_d(d)?.reverse(d.ambient_dim)?;
    Ok(lhs == rhs)
}
