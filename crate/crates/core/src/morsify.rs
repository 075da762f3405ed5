//! Morsification: trade each critical submanifold for the critical points of
//! a Morse function on it, and track the resulting counts by degree.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::{verify_main, Theorem, Verdict, VerificationReport};
use crate::descriptor::{CriticalSubmanifold, MorseBottDescriptor, SubmanifoldKind};
use crate::error::{Error, Result};
use crate::intpoly::IntPolynomial;

/// `#Cr_k` of a Morse function on one critical submanifold, by `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorseVector(pub Vec<u64>);

impl MorseVector {
    pub fn counts(&self) -> &[u64] {
        &self.0
    }

    pub fn polynomial(&self) -> IntPolynomial {
        IntPolynomial::from_counts(&self.0)
    }

    /// Check the Morse inequalities against `poincare` and return `R_j`.
    pub fn admissibility(&self, name: &str, dim: usize, poincare: &IntPolynomial) -> Result<IntPolynomial> {
        let fail = |detail: String| Error::Inadmissible {
            name: name.to_owned(),
            detail,
        };
        if self.0.len() > dim + 1 {
            return Err(fail(format!("{} entries exceed dim + 1 = {}", self.0.len(), dim + 1)));
        }
        if self.0.iter().all(|&c| c == 0) {
            return Err(fail("no critical points".into()));
        }
        let lhs = self.polynomial() - poincare.clone();
        let (q, exact) = lhs.divide_by_one_plus_t();
        if !exact {
            return Err(fail(format!(
                "counts minus P_t is {lhs}, not divisible by 1+t (value {} at t = -1)",
                lhs.eval(&BigInt::from(-1))
            )));
        }
        if let Some(k) = q.first_negative() {
            return Err(fail(format!("quotient coefficient of t^{k} is {} < 0", q.coeff(k))));
        }
        Ok(q)
    }
}

/// Chosen Morse vectors keyed by submanifold name.
pub type Choices = BTreeMap<String, MorseVector>;

/// One submanifold after its Morse vector has been fixed and checked.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResolvedChoice {
    pub name: String,
    pub kind: SubmanifoldKind,
    pub shift: usize,
    pub vector: MorseVector,
    /// `R_j` from the submanifold's own Morse inequalities.
    pub quotient: IntPolynomial,
}

fn default_vector(sub: &CriticalSubmanifold) -> Result<MorseVector> {
    let model = sub
        .topology
        .cell_model()
        .ok_or_else(|| Error::MissingChoice(sub.name.clone()))?;
    Ok(MorseVector(model.cell_counts().into_iter().map(|n| n as u64).collect()))
}

/// Attach a Morse vector to every submanifold, defaulting to cell counts.
pub fn resolve_choices(d: &MorseBottDescriptor, choices: &Choices) -> Result<Vec<ResolvedChoice>> {
    let violations = d.validate();
    if !violations.is_empty() {
        return Err(Error::InvalidDescriptor(violations));
    }
    if let Some(name) = choices.keys().find(|n| d.find(n).is_none()) {
        return Err(Error::UnknownChoice(name.clone()));
    }
    d.submanifolds()
        .map(|(kind, sub)| {
            let vector = match choices.get(&sub.name) {
                Some(v) => v.clone(),
                None => default_vector(sub)?,
            };
            let quotient = vector.admissibility(&sub.name, sub.dim, &sub.twisted_poincare()?)?;
            Ok(ResolvedChoice {
                name: sub.name.clone(),
                kind,
                shift: sub.index,
                vector,
                quotient,
            })
        })
        .collect()
}

/// Critical point counts of the morsified function, by degree `0..=m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseDescriptor {
    pub interior: Vec<u64>,
    #[serde(rename = "boundary_N")]
    pub boundary_n: Vec<u64>,
    #[serde(rename = "boundary_D")]
    pub boundary_d: Vec<u64>,
}

impl MorseDescriptor {
    pub fn empty(m: usize) -> Self {
        Self {
            interior: vec![0; m + 1],
            boundary_n: vec![0; m + 1],
            boundary_d: vec![0; m + 1],
        }
    }

    pub fn slot_mut(&mut self, kind: SubmanifoldKind) -> &mut Vec<u64> {
        match kind {
            SubmanifoldKind::Interior => &mut self.interior,
            SubmanifoldKind::BoundaryN => &mut self.boundary_n,
            SubmanifoldKind::BoundaryD => &mut self.boundary_d,
        }
    }

    /// Markdown table with one row per degree.
    pub fn to_table(&self) -> String {
        let mut out = String::from("| n | I_n | N_n | D_n |\n|---|---|---|---|\n");
        for n in 0..self.interior.len() {
            out.push_str(&format!(
                "| {n} | {} | {} | {} |\n",
                self.interior[n], self.boundary_n[n], self.boundary_d[n]
            ));
        }
        out
    }
}

fn assemble(m: usize, resolved: &[ResolvedChoice]) -> MorseDescriptor {
    let mut md = MorseDescriptor::empty(m);
    for rc in resolved {
        let slot = md.slot_mut(rc.kind);
        for (k, &c) in rc.vector.counts().iter().enumerate() {
            let n = rc.shift + k;
            if slot.len() <= n {
                slot.resize(n + 1, 0);
            }
            slot[n] += c;
        }
    }
    md
}

/// `I_n`, `N_n`, `D_n` of the morsified function.
pub fn morsify(d: &MorseBottDescriptor, choices: &Choices) -> Result<MorseDescriptor> {
    Ok(assemble(d.ambient_dim, &resolve_choices(d, choices)?))
}

/// `M^N_t(h) = sum_n (I_n + N_n) t^n`.
pub fn morse_counting_n(md: &MorseDescriptor) -> IntPolynomial {
    let len = md.interior.len().max(md.boundary_n.len());
    let at = |v: &[u64], n: usize| v.get(n).copied().unwrap_or(0);
    let counts: Vec<u64> = (0..len).map(|n| at(&md.interior, n) + at(&md.boundary_n, n)).collect();
    IntPolynomial::from_counts(&counts)
}

fn shifted_choice_sum(resolved: &[ResolvedChoice]) -> IntPolynomial {
    resolved
        .iter()
        .filter(|rc| rc.kind != SubmanifoldKind::BoundaryD)
        .map(|rc| rc.vector.polynomial().shift(rc.shift))
        .sum()
}

/// Whether the degree-wise tally agrees with `sum M_t(f_j) t^shift` built
/// directly from the choices.
pub fn check_counting_identity(d: &MorseBottDescriptor, choices: &Choices) -> Result<bool> {
    let resolved = resolve_choices(d, choices)?;
    Ok(morse_counting_n(&assemble(d.ambient_dim, &resolved)) == shifted_choice_sum(&resolved))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockQuotient {
    pub name: String,
    pub kind: SubmanifoldKind,
    pub shift: usize,
    pub quotient: IntPolynomial,
}

/// The main inequality proved through the morsified function.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MorsificationReport {
    pub descriptor: String,
    pub morse_descriptor: MorseDescriptor,
    /// Division of `M^N_t(h) - P_t(M)`; its quotient is `R_h`.
    pub h_report: VerificationReport,
    /// `R_j` for every interior and type-N block.
    pub blocks: Vec<BlockQuotient>,
    /// `R_h - sum R_j t^shift`.
    pub difference: IntPolynomial,
    /// `R(t)` from the direct Morse–Bott division.
    pub direct_quotient: IntPolynomial,
    pub agrees_with_direct: bool,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
}

pub fn verify_main_via_morsification(d: &MorseBottDescriptor, choices: &Choices) -> Result<MorsificationReport> {
    let resolved = resolve_choices(d, choices)?;
    let md = assemble(d.ambient_dim, &resolved);
    let lhs = morse_counting_n(&md) - d.manifold_poincare()?;
    let h_report = VerificationReport::certify(&d.name, Theorem::Main, lhs);

    let blocks: Vec<BlockQuotient> = resolved
        .iter()
        .filter(|rc| rc.kind != SubmanifoldKind::BoundaryD)
        .map(|rc| BlockQuotient {
            name: rc.name.clone(),
            kind: rc.kind,
            shift: rc.shift,
            quotient: rc.quotient.clone(),
        })
        .collect();
    let correction: IntPolynomial = blocks.iter().map(|b| b.quotient.shift(b.shift)).sum();
    let difference = &h_report.quotient - &correction;

    let direct = verify_main(d)?;
    let agrees_with_direct = h_report.exact_division && direct.exact_division && difference == direct.quotient;

    let failure_detail = if let Some(detail) = &h_report.failure_detail {
        Some(format!("h-level: {detail}"))
    } else {
        difference
            .first_negative()
            .map(|k| format!("R_h - sum R_j t^shift has coefficient {} at t^{k}", difference.coeff(k)))
    };
    let verdict = if failure_detail.is_none() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(MorsificationReport {
        descriptor: d.name.clone(),
        morse_descriptor: md,
        h_report,
        blocks,
        difference,
        direct_quotient: direct.quotient,
        agrees_with_direct,
        verdict,
        failure_detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptor::{HomologySource, OrientationSystem};
    use crate::homology::CellModel;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64s(c)
    }

    fn circle_sub(name: &str, index: usize) -> CriticalSubmanifold {
        CriticalSubmanifold {
            name: name.into(),
            dim: 1,
            index,
            topology: HomologySource::CellModel(CellModel::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()),
            orientation_system: OrientationSystem::Oriented,
            oriented_bundle: true,
        }
    }

    fn disk_max() -> MorseBottDescriptor {
        MorseBottDescriptor {
            name: "disk_max".into(),
            ambient_dim: 2,
            manifold_oriented: true,
            manifold_homology: HomologySource::Polynomial(IntPolynomial::one()),
            relative_homology: None,
            interior: vec![CriticalSubmanifold {
                name: "center".into(),
                dim: 0,
                index: 2,
                topology: HomologySource::Polynomial(IntPolynomial::one()),
                orientation_system: OrientationSystem::Oriented,
                oriented_bundle: true,
            }],
            boundary_n: vec![circle_sub("rim", 0)],
            boundary_d: vec![],
        }
    }

    fn flat_torus() -> MorseBottDescriptor {
        MorseBottDescriptor {
            name: "flat_torus".into(),
            ambient_dim: 2,
            manifold_oriented: true,
            manifold_homology: HomologySource::Polynomial(p(&[1, 2, 1])),
            relative_homology: None,
            interior: vec![circle_sub("low", 0), circle_sub("high", 1)],
            boundary_n: vec![],
            boundary_d: vec![],
        }
    }

    fn choose(pairs: &[(&str, &[u64])]) -> Choices {
        pairs
            .iter()
            .map(|(n, v)| (n.to_string(), MorseVector(v.to_vec())))
            .collect()
    }

    #[test]
    fn disk_max_minimal() {
        let c = choose(&[("center", &[1]), ("rim", &[1, 1])]);
        let md = morsify(&disk_max(), &c).unwrap();
        assert_eq!(md.interior, vec![0, 0, 1]);
        assert_eq!(md.boundary_n, vec![1, 1, 0]);
        assert_eq!(md.boundary_d, vec![0, 0, 0]);
        assert_eq!(morse_counting_n(&md), p(&[1, 1, 1]));
        assert!(check_counting_identity(&disk_max(), &c).unwrap());
        let r = verify_main_via_morsification(&disk_max(), &c).unwrap();
        assert_eq!(r.h_report.quotient, p(&[0, 1]));
        assert_eq!(r.difference, p(&[0, 1]));
        assert!(r.agrees_with_direct && r.verdict.is_pass());
    }

    #[test]
    fn disk_max_inflated_boundary() {
        // M^N(h) - P = 2 + 2t + t^2 - 1 = (1 + t)^2, so R_h = 1 + t and R_rim = 1.
        let c = choose(&[("center", &[1]), ("rim", &[2, 2])]);
        let r = verify_main_via_morsification(&disk_max(), &c).unwrap();
        assert_eq!(r.h_report.lhs, p(&[1, 2, 1]));
        assert_eq!(r.h_report.quotient, p(&[1, 1]));
        assert_eq!(r.blocks[1].quotient, p(&[1]));
        assert_eq!(r.difference, p(&[0, 1]));
        assert!(r.verdict.is_pass());
    }

    #[test]
    fn flat_torus_counts() {
        let c = choose(&[("low", &[1, 1]), ("high", &[1, 1])]);
        let md = morsify(&flat_torus(), &c).unwrap();
        assert_eq!(md.interior, vec![1, 2, 1]);
        let r = verify_main_via_morsification(&flat_torus(), &c).unwrap();
        assert!(r.h_report.quotient.is_zero() && r.difference.is_zero());
    }

    #[test]
    fn defaults_are_cell_counts() {
        let c = choose(&[("center", &[1])]);
        let md = morsify(&disk_max(), &c).unwrap();
        assert_eq!(md.boundary_n, vec![3, 3, 0]);
        let r = verify_main_via_morsification(&disk_max(), &c).unwrap();
        assert_eq!(r.blocks[1].quotient, p(&[2]));
        assert!(r.agrees_with_direct);
    }

    #[test]
    fn inadmissible_vectors() {
        let circle = p(&[1, 1]);
        let err = MorseVector(vec![0, 2]).admissibility("c", 1, &circle).unwrap_err();
        assert!(err.to_string().contains("not divisible"), "{err}");
        assert!(MorseVector(vec![1, 1, 1]).admissibility("c", 1, &circle).is_err());
        assert!(MorseVector(vec![0, 0]).admissibility("c", 1, &circle).is_err());
        // Twisted circle: P = 0, so a single point is inexact but [1, 1] is fine.
        assert!(MorseVector(vec![1])
            .admissibility("c", 1, &IntPolynomial::zero())
            .is_err());
        assert_eq!(
            MorseVector(vec![1, 1])
                .admissibility("c", 1, &IntPolynomial::zero())
                .unwrap(),
            p(&[1])
        );
    }

    #[test]
    fn missing_and_unknown_choices() {
        assert!(matches!(morsify(&disk_max(), &Choices::new()), Err(Error::MissingChoice(n)) if n == "center"));
        let c = choose(&[("center", &[1]), ("nosuch", &[1])]);
        assert!(matches!(morsify(&disk_max(), &c), Err(Error::UnknownChoice(n)) if n == "nosuch"));
    }
}
