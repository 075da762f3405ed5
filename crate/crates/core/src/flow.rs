//! Morse complexes with `±1` local coefficients built from supplied flow data.
//!
//! Flow lines are input. The module assembles `∂` from signs and transports,
//! then audits what a genuine gradient flow would guarantee: `∂² = 0`, the
//! expected homology, compatibility with per-block restricted data, and the
//! kernel-rank inequality across height-ordered blocks.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::counting::Verdict;
use crate::error::{Error, Result};
use crate::homology::{accumulate, ChainComplex, HomologyProfile, IntegerMatrix};
use crate::intpoly::IntPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointKind {
    #[serde(rename = "interior")]
    Interior,
    #[serde(rename = "boundary_N")]
    BoundaryN,
    #[serde(rename = "boundary_D")]
    BoundaryD,
}

fn plus_one() -> i64 {
    1
}

fn is_plus_one(v: &i64) -> bool {
    *v == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalPoint {
    pub name: String,
    pub index: usize,
    pub kind: PointKind,
    pub block: String,
    /// Orientation of the chosen fiber basis `1_p`; always `+1`.
    #[serde(default = "plus_one", skip_serializing_if = "is_plus_one")]
    pub fiber_sign_base: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowLine {
    pub from: String,
    pub to: String,
    /// `n(γ)`.
    pub sign: i64,
    /// Transport of `1_from` to `±1_to` along the line.
    pub transport: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowDataset {
    pub critical_points: Vec<CriticalPoint>,
    #[serde(default)]
    pub flow_lines: Vec<FlowLine>,
    /// Blocks in ascending height.
    pub height_order: Vec<String>,
}

impl FlowDataset {
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            context: format!("flow dataset at `{}`", e.path()),
            message: e.inner().to_string(),
        })
    }

    pub fn point(&self, name: &str) -> Option<&CriticalPoint> {
        self.critical_points.iter().find(|p| p.name == name)
    }

    /// Position of `block` in `height_order`.
    pub fn height_rank(&self, block: &str) -> Option<usize> {
        self.height_order.iter().position(|b| b == block)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidFlowDataset(m));
        let mut points: HashMap<&str, &CriticalPoint> = HashMap::new();
        for p in &self.critical_points {
            if points.insert(&p.name, p).is_some() {
                return bad(format!("duplicate point name `{}`", p.name));
            }
            if p.fiber_sign_base != 1 {
                return bad(format!(
                    "point `{}` has fiber_sign_base {}, expected 1",
                    p.name, p.fiber_sign_base
                ));
            }
        }

        let mut ranks: HashMap<&str, usize> = HashMap::new();
        for (r, b) in self.height_order.iter().enumerate() {
            if ranks.insert(b, r).is_some() {
                return bad(format!("block `{b}` appears twice in height_order"));
            }
        }
        let mut block_kind: HashMap<&str, PointKind> = HashMap::new();
        for p in &self.critical_points {
            if !ranks.contains_key(p.block.as_str()) {
                return bad(format!(
                    "block `{}` of point `{}` is missing from height_order",
                    p.block, p.name
                ));
            }
            if let Some(&k) = block_kind.get(p.block.as_str()) {
                if k != p.kind {
                    return bad(format!("block `{}` mixes point kinds", p.block));
                }
            }
            block_kind.insert(&p.block, p.kind);
        }
        if let Some(b) = self.height_order.iter().find(|b| !block_kind.contains_key(b.as_str())) {
            return bad(format!("height_order lists `{b}`, which has no critical points"));
        }

        for line in &self.flow_lines {
            for v in [line.sign, line.transport] {
                if v != 1 && v != -1 {
                    return bad(format!(
                        "flow line {} -> {} carries {v}, expected +1 or -1",
                        line.from, line.to
                    ));
                }
            }
            let from = points
                .get(line.from.as_str())
                .ok_or_else(|| Error::DanglingPoint(line.from.clone()))?;
            let to = points
                .get(line.to.as_str())
                .ok_or_else(|| Error::DanglingPoint(line.to.clone()))?;
            if from.index != to.index + 1 {
                return Err(Error::RelativeIndex {
                    from: from.name.clone(),
                    to: to.name.clone(),
                    from_index: from.index,
                    to_index: to.index,
                });
            }
            if ranks[from.block.as_str()] < ranks[to.block.as_str()] {
                return bad(format!(
                    "flow line {} -> {} climbs from block `{}` to the higher block `{}`",
                    from.name, to.name, from.block, to.block
                ));
            }
        }
        Ok(())
    }

    fn excluded(&self, name: &str) -> bool {
        self.point(name).is_none_or(|p| p.kind == PointKind::BoundaryD)
    }
}

/// The type-N Morse complex of a flow dataset, with generator names.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplexBundle {
    /// Generator names per degree, in declaration order.
    pub generators: Vec<Vec<String>>,
    /// Block of each generator, parallel to `generators`.
    pub blocks: Vec<Vec<String>>,
    pub height_order: Vec<String>,
    pub complex: ChainComplex,
}

/// Assemble `∂` with entry `(q, p)` equal to the sum of `sign * transport`
/// over lines `p -> q`. Type-D points and every line touching one are left out.
pub fn build_complex(fd: &FlowDataset) -> Result<ChainComplexBundle> {
    fd.validate()?;
    let kept: Vec<&CriticalPoint> = fd
        .critical_points
        .iter()
        .filter(|p| p.kind != PointKind::BoundaryD)
        .collect();
    let top = kept.iter().map(|p| p.index + 1).max().unwrap_or(0);
    let mut generators = vec![Vec::new(); top];
    let mut blocks = vec![Vec::new(); top];
    let mut position: HashMap<&str, usize> = HashMap::new();
    for p in &kept {
        position.insert(&p.name, generators[p.index].len());
        generators[p.index].push(p.name.clone());
        blocks[p.index].push(p.block.clone());
    }
    let ranks: Vec<usize> = generators.iter().map(Vec::len).collect();

    let mut per_degree: Vec<Vec<(usize, usize, i64)>> = vec![Vec::new(); top];
    for line in &fd.flow_lines {
        if fd.excluded(&line.from) || fd.excluded(&line.to) {
            continue;
        }
        let degree = fd.point(&line.from).map(|p| p.index).unwrap_or_default();
        per_degree[degree].push((
            position[line.to.as_str()],
            position[line.from.as_str()],
            line.sign * line.transport,
        ));
    }
    let higher = (1..top)
        .map(|k| accumulate(ranks[k - 1], ranks[k], per_degree[k].iter().copied()))
        .collect();
    Ok(ChainComplexBundle {
        generators,
        blocks,
        height_order: fd.height_order.clone(),
        complex: ChainComplex::new(ranks, higher),
    })
}

/// A nonzero entry of `∂∂`, named by its generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedDefect {
    pub degree: usize,
    pub source: String,
    pub target: String,
    #[serde(serialize_with = "crate::intpoly::serialize_bigint")]
    pub value: BigInt,
}

impl std::fmt::Display for NamedDefect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "∂²≠0 at ({},{})", self.source, self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DSquaredAudit {
    pub holds: bool,
    pub defects: Vec<NamedDefect>,
}

pub fn audit_d_squared(cc: &ChainComplexBundle) -> DSquaredAudit {
    let defects: Vec<NamedDefect> = cc
        .complex
        .d_squared_defects()
        .into_iter()
        .map(|d| NamedDefect {
            degree: d.degree,
            source: cc.generators[d.degree][d.source].clone(),
            target: cc.generators[d.degree - 2][d.target].clone(),
            value: d.value,
        })
        .collect();
    DSquaredAudit {
        holds: defects.is_empty(),
        defects,
    }
}

fn require_closed(cc: &ChainComplexBundle) -> Result<()> {
    match audit_d_squared(cc).defects.first() {
        None => Ok(()),
        Some(d) => Err(Error::ComplexNotClosed(d.to_string())),
    }
}

/// Whether the free ranks of the Morse homology equal `expected`.
pub fn homology_vs_reference(cc: &ChainComplexBundle, expected: &IntPolynomial) -> Result<bool> {
    require_closed(cc)?;
    Ok(cc.complex.homology().poincare_polynomial() == *expected)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SignTransportAudit {
    pub holds: bool,
    pub checked: usize,
    pub mismatches: Vec<String>,
}

/// Compare every within-block line of `fd` with its counterpart in
/// `restricted`: the sign seen by the full function must equal the restricted
/// sign times the restricted transport. Lines pair up by endpoints and then by
/// order of appearance.
pub fn audit_sign_transport(fd: &FlowDataset, restricted: &FlowDataset) -> Result<SignTransportAudit> {
    fd.validate()?;
    restricted.validate()?;
    let block_of = |name: &str| fd.point(name).map(|p| p.block.as_str());

    let mut expected: BTreeMap<(&str, &str), Vec<&FlowLine>> = BTreeMap::new();
    for line in &fd.flow_lines {
        if fd.excluded(&line.from) || fd.excluded(&line.to) {
            continue;
        }
        if block_of(&line.from) == block_of(&line.to) {
            expected.entry((&line.from, &line.to)).or_default().push(line);
        }
    }
    let mut supplied: BTreeMap<(&str, &str), Vec<&FlowLine>> = BTreeMap::new();
    for line in &restricted.flow_lines {
        if fd.excluded(&line.from) || fd.excluded(&line.to) {
            if fd.point(&line.from).is_none() || fd.point(&line.to).is_none() {
                return Err(Error::CoverageMismatch(format!(
                    "restricted line {} -> {} names a point absent from the full dataset",
                    line.from, line.to
                )));
            }
            continue;
        }
        supplied.entry((&line.from, &line.to)).or_default().push(line);
    }

    let keys: BTreeSet<_> = expected.keys().chain(supplied.keys()).copied().collect();
    let mut checked = 0;
    let mut mismatches = Vec::new();
    for key in keys {
        let full = expected.get(&key).map_or(&[][..], Vec::as_slice);
        let part = supplied.get(&key).map_or(&[][..], Vec::as_slice);
        if full.len() != part.len() {
            return Err(Error::CoverageMismatch(format!(
                "{} -> {}: {} within-block line(s) in the full dataset, {} in the restricted one",
                key.0,
                key.1,
                full.len(),
                part.len()
            )));
        }
        for (i, (h, r)) in full.iter().zip(part).enumerate() {
            checked += 1;
            if h.sign != r.sign * r.transport {
                mismatches.push(format!(
                    "{} -> {} #{i}: sign {} but restricted sign {} times transport {}",
                    key.0, key.1, h.sign, r.sign, r.transport
                ));
            }
        }
    }
    Ok(SignTransportAudit {
        holds: mismatches.is_empty(),
        checked,
        mismatches,
    })
}

/// The highest block carrying a nonzero coefficient of a degree-`degree`
/// chain.
pub fn top_chain(cc: &ChainComplexBundle, degree: usize, coeffs: &[i64]) -> Result<String> {
    let blocks = cc.blocks.get(degree).map_or(&[][..], Vec::as_slice);
    if coeffs.len() != blocks.len() {
        return Err(Error::InvalidFlowDataset(format!(
            "chain has {} coefficients but degree {degree} has {} generators",
            coeffs.len(),
            blocks.len()
        )));
    }
    let rank = |b: &String| cc.height_order.iter().position(|x| x == b).unwrap_or(0);
    coeffs
        .iter()
        .zip(blocks)
        .filter(|(c, _)| **c != 0)
        .map(|(_, b)| b)
        .max_by_key(|b| rank(b))
        .cloned()
        .ok_or(Error::ZeroChain)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KernelRankReport {
    /// `sum_j rank Ker ∂` over blocks, by degree of the full complex.
    pub lhs: Vec<usize>,
    /// `rank Ker ∂^h`, by degree.
    pub rhs: Vec<usize>,
    pub holds: bool,
    /// `sum_n (lhs_n - rhs_n) t^(n-1)`, present when the inequality holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient: Option<IntPolynomial>,
}

/// Restriction of the complex to the generators of one block.
pub fn block_complex(cc: &ChainComplexBundle, block: &str) -> ChainComplex {
    let keep: Vec<Vec<usize>> = cc
        .blocks
        .iter()
        .map(|bs| (0..bs.len()).filter(|&i| bs[i] == block).collect())
        .collect();
    let ranks = keep.iter().map(Vec::len).collect();
    let higher = (1..keep.len())
        .map(|k| cc.complex.boundary(k).submatrix(&keep[k - 1], &keep[k]))
        .collect();
    ChainComplex::new(ranks, higher)
}

pub fn kernel_rank_inequality(fd: &FlowDataset) -> Result<KernelRankReport> {
    let cc = build_complex(fd)?;
    require_closed(&cc)?;
    let rhs = cc.complex.kernel_ranks();
    let mut lhs = vec![0; rhs.len()];
    let present: BTreeSet<&String> = cc.blocks.iter().flatten().collect();
    for block in present {
        let bc = block_complex(&cc, block);
        if let Some(d) = bc.d_squared_defects().first() {
            return Err(Error::ComplexNotClosed(format!(
                "block `{block}` restriction has ∂²≠0 in degree {}",
                d.degree
            )));
        }
        for (n, z) in bc.kernel_ranks().into_iter().enumerate() {
            lhs[n] += z;
        }
    }
    let holds = lhs.iter().zip(&rhs).all(|(l, r)| l >= r);
    let quotient = holds.then(|| {
        let diffs: Vec<u64> = lhs.iter().zip(&rhs).skip(1).map(|(l, r)| (l - r) as u64).collect();
        IntPolynomial::from_counts(&diffs)
    });
    Ok(KernelRankReport {
        lhs,
        rhs,
        holds,
        quotient,
    })
}

/// `(1 + t) sum_n rank ∂_n t^(n-1) + P_t = M_t`, checked on the assembled
/// complex.
pub fn reconstruction_holds(cc: &ChainComplexBundle) -> bool {
    let c = &cc.complex;
    &(&IntPolynomial::one_plus_t() * &c.rank_quotient()) + &c.homology().poincare_polynomial()
        == c.counting_polynomial()
}

/// Every audit on one dataset, as the CLI reports it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlowAudit {
    pub d_squared: DSquaredAudit,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub homology: Option<HomologyProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_expected: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_transport: Option<SignTransportAudit>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kernel_rank: Option<KernelRankReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<bool>,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure_detail: Option<String>,
}

pub fn audit_all(
    fd: &FlowDataset,
    expected: Option<&IntPolynomial>,
    restricted: Option<&FlowDataset>,
) -> Result<FlowAudit> {
    let cc = build_complex(fd)?;
    let d_squared = audit_d_squared(&cc);
    let sign_transport = restricted.map(|r| audit_sign_transport(fd, r)).transpose()?;
    if let Some(first) = d_squared.defects.first() {
        return Ok(FlowAudit {
            failure_detail: Some(first.to_string()),
            d_squared,
            homology: None,
            matches_expected: None,
            sign_transport,
            kernel_rank: None,
            reconstruction: None,
            verdict: Verdict::Fail,
        });
    }
    let homology = cc.complex.homology();
    let matches_expected = expected.map(|e| homology.poincare_polynomial() == *e);
    let kernel_rank = kernel_rank_inequality(fd)?;
    let reconstruction = reconstruction_holds(&cc);

    let mut failures = Vec::new();
    if matches_expected == Some(false) {
        failures.push(format!(
            "homology {} differs from expected {}",
            homology.poincare_polynomial(),
            expected.map(ToString::to_string).unwrap_or_default()
        ));
    }
    if let Some(st) = sign_transport.as_ref().filter(|s| !s.holds) {
        failures.push(format!("sign/transport mismatch: {}", st.mismatches.join("; ")));
    }
    if !kernel_rank.holds {
        failures.push("kernel-rank inequality fails".into());
    }
    if !reconstruction {
        failures.push("rank reconstruction fails".into());
    }
    Ok(FlowAudit {
        d_squared,
        homology: Some(homology),
        matches_expected,
        sign_transport,
        kernel_rank: Some(kernel_rank),
        reconstruction: Some(reconstruction),
        verdict: if failures.is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        failure_detail: (!failures.is_empty()).then(|| failures.join("; ")),
    })
}

/// Boundary matrices of a bundle as nested integer arrays, for reports.
pub fn boundary_entries(cc: &ChainComplexBundle) -> Vec<Vec<Vec<BigInt>>> {
    (1..cc.generators.len())
        .map(|k| matrix_rows(&cc.complex.boundary(k)))
        .collect()
}

fn matrix_rows(m: &IntegerMatrix) -> Vec<Vec<BigInt>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect())
        .collect()
}
