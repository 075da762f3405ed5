//! Builtin descriptors and flow datasets with independently computed
//! expectations. Every expected polynomial records the oracle that produced it.

use std::path::Path;

use serde::Serialize;

use crate::counting::{verify_corollary, verify_main, VerificationReport};
use crate::descriptor::{CriticalSubmanifold, HomologySource, MorseBottDescriptor, OrientationSystem};
use crate::error::{Error, Result};
use crate::flow::{CriticalPoint, FlowDataset, FlowLine, PointKind};
use crate::homology::{CellModel, SignCocycle};
use crate::intpoly::IntPolynomial;
use crate::morsify::{Choices, MorseVector};

/// Minimal triangulations used by the entries.
pub mod models {
    use super::CellModel;

    fn build(facets: Vec<Vec<u32>>) -> CellModel {
        CellModel::from_facets(facets).expect("builtin triangulation is valid")
    }

    pub fn point() -> CellModel {
        CellModel::new([0], Vec::<Vec<u32>>::new()).expect("single vertex")
    }

    /// Boundary of a triangle.
    pub fn circle() -> CellModel {
        build(vec![vec![0, 1], vec![1, 2], vec![0, 2]])
    }

    /// Cone over a triangle with apex 3; its boundary is the circle 0-1-2.
    pub fn disk() -> CellModel {
        build(vec![vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]])
    }

    /// Boundary of a tetrahedron.
    pub fn sphere() -> CellModel {
        build(vec![vec![0, 1, 2], vec![0, 1, 3], vec![0, 2, 3], vec![1, 2, 3]])
    }

    /// The 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
    pub fn torus() -> CellModel {
        build(
            (0..7u32)
                .flat_map(|i| [vec![i, (i + 1) % 7, (i + 3) % 7], vec![i, (i + 2) % 7, (i + 3) % 7]])
                .collect(),
        )
    }

    /// Five triangles `{i, i+1, i+2}` mod 5.
    pub fn mobius() -> CellModel {
        build((0..5u32).map(|i| vec![i, (i + 1) % 5, (i + 2) % 5]).collect())
    }

    /// A 3x3 grid on the square, sides glued straight in one direction and
    /// with a flip in the other.
    pub fn klein_bottle() -> CellModel {
        let v = |i: i32, j: i32| (3 * i.rem_euclid(3) + j.rem_euclid(3)) as u32;
        let kv = |i: i32, j: i32| if j == 3 { v(-i, 0) } else { v(i, j) };
        let mut facets = Vec::new();
        for i in 0..3 {
            for j in 0..3 {
                let (a, b, c, d) = (kv(i, j), kv(i + 1, j), kv(i, j + 1), kv(i + 1, j + 1));
                facets.push(vec![a, b, d]);
                facets.push(vec![a, c, d]);
            }
        }
        build(facets)
    }

    /// Triangle times an interval: vertices `3 * level + x`.
    pub fn cylinder() -> CellModel {
        let cv = |x: u32, level: u32| 3 * level + x;
        let mut facets = Vec::new();
        for (x, y) in [(0, 1), (1, 2), (0, 2)] {
            facets.push(vec![cv(x, 0), cv(y, 0), cv(y, 1)]);
            facets.push(vec![cv(x, 0), cv(x, 1), cv(y, 1)]);
        }
        build(facets)
    }

    /// Triangle times a 3-cycle, each prism split into three tetrahedra.
    pub fn solid_torus() -> CellModel {
        let sv = |x: u32, level: u32| 3 * (level % 3) + x;
        let chains: [[(u32, u32); 4]; 3] = [
            [(0, 0), (0, 1), (1, 1), (2, 1)],
            [(0, 0), (1, 0), (1, 1), (2, 1)],
            [(0, 0), (1, 0), (2, 0), (2, 1)],
        ];
        let mut facets = Vec::new();
        for level in 0..3 {
            for chain in &chains {
                facets.push(chain.iter().map(|&(x, i)| sv(x, level + i)).collect());
            }
        }
        build(facets)
    }
}

/// An expected polynomial and how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Expected {
    pub value: IntPolynomial,
    pub oracle: String,
}

fn expected(value: &[i64], oracle: &str) -> Expected {
    Expected {
        value: IntPolynomial::from_i64s(value),
        oracle: oracle.to_owned(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlowFixture {
    pub name: String,
    pub dataset: FlowDataset,
    /// Within-block lines as seen by the Morse functions on each block.
    pub restricted: Option<FlowDataset>,
    pub expected_homology: IntPolynomial,
    /// False for deliberately corrupted data.
    pub should_pass: bool,
    /// Expected `(source, target)` of the first `∂²` defect.
    pub expected_defect: Option<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub descriptor: MorseBottDescriptor,
    /// Morse vectors used for morsification; minimal for each block.
    pub choices: Choices,
    pub expected_r_main: Expected,
    pub expected_r_corollary: Option<Expected>,
    pub flow_datasets: Vec<FlowFixture>,
}

fn sub(name: &str, dim: usize, index: usize, model: CellModel) -> CriticalSubmanifold {
    CriticalSubmanifold {
        name: name.into(),
        dim,
        index,
        topology: HomologySource::CellModel(model),
        orientation_system: OrientationSystem::Oriented,
        oriented_bundle: true,
    }
}

fn twisted_circle(name: &str, index: usize) -> CriticalSubmanifold {
    CriticalSubmanifold {
        orientation_system: OrientationSystem::Twisted(SignCocycle::new([(0, 1, -1)]).expect("single edge sign")),
        oriented_bundle: false,
        ..sub(name, 1, index, models::circle())
    }
}

fn descriptor(name: &str, m: usize, oriented: bool, manifold: CellModel) -> MorseBottDescriptor {
    MorseBottDescriptor {
        name: name.into(),
        ambient_dim: m,
        manifold_oriented: oriented,
        manifold_homology: HomologySource::CellModel(manifold),
        relative_homology: None,
        interior: vec![],
        boundary_n: vec![],
        boundary_d: vec![],
    }
}

fn choices(pairs: &[(&str, &[u64])]) -> Choices {
    pairs
        .iter()
        .map(|(n, v)| ((*n).to_owned(), MorseVector(v.to_vec())))
        .collect()
}

fn pt(name: &str, index: usize, kind: PointKind, block: &str) -> CriticalPoint {
    CriticalPoint {
        name: name.into(),
        index,
        kind,
        block: block.into(),
        fiber_sign_base: 1,
    }
}

fn ipt(name: &str, index: usize, block: &str) -> CriticalPoint {
    pt(name, index, PointKind::Interior, block)
}

fn ln(from: &str, to: &str, sign: i64, transport: i64) -> FlowLine {
    FlowLine {
        from: from.into(),
        to: to.into(),
        sign,
        transport,
    }
}

fn dataset(points: Vec<CriticalPoint>, lines: Vec<FlowLine>, order: &[&str]) -> FlowDataset {
    FlowDataset {
        critical_points: points,
        flow_lines: lines,
        height_order: order.iter().map(|s| (*s).to_owned()).collect(),
    }
}

fn fixture(name: &str, ds: FlowDataset, restricted: Option<FlowDataset>, homology: &[i64]) -> FlowFixture {
    FlowFixture {
        name: name.into(),
        dataset: ds,
        restricted,
        expected_homology: IntPolynomial::from_i64s(homology),
        should_pass: true,
        expected_defect: None,
    }
}

fn disk_max() -> CatalogEntry {
    let mut d = descriptor("disk_max", 2, true, models::disk());
    d.interior.push(sub("center", 0, 2, models::point()));
    d.boundary_n.push(sub("rim", 1, 0, models::circle()));

    // h: rim minimum e0, rim maximum e1, interior maximum p.
    let full = dataset(
        vec![
            pt("e0", 0, PointKind::BoundaryN, "rim"),
            pt("e1", 1, PointKind::BoundaryN, "rim"),
            ipt("p", 2, "center"),
        ],
        vec![ln("e1", "e0", 1, 1), ln("e1", "e0", -1, 1), ln("p", "e1", 1, 1)],
        &["rim", "center"],
    );
    let restricted = dataset(
        vec![
            pt("e0", 0, PointKind::BoundaryN, "rim"),
            pt("e1", 1, PointKind::BoundaryN, "rim"),
            ipt("p", 0, "center"),
        ],
        vec![ln("e1", "e0", 1, 1), ln("e1", "e0", -1, 1)],
        &["rim", "center"],
    );
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("center", &[1]), ("rim", &[1, 1])]),
        expected_r_main: expected(&[0, 1], "SNF on the cone disk and 3-vertex circle; t^2+1+t-1 = (1+t)t"),
        expected_r_corollary: Some(expected(
            &[],
            "MB^D = t^2 and P(D,∂D) = t^2 by relative SNF; difference 0",
        )),
        flow_datasets: vec![fixture("disk_max_morsified", full, Some(restricted), &[1])],
    }
}

fn disk_min() -> CatalogEntry {
    let mut d = descriptor("disk_min", 2, true, models::disk());
    d.interior.push(sub("center", 0, 0, models::point()));
    d.boundary_d.push(sub("rim", 1, 0, models::circle()));
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("center", &[1]), ("rim", &[1, 1])]),
        expected_r_main: expected(&[], "MB^N = 1 = P(D); type D is excluded"),
        expected_r_corollary: Some(expected(&[1], "MB^D = 1+t+t^2, P(D,∂D) = t^2; 1+t = (1+t)1")),
        flow_datasets: vec![],
    }
}

fn cylinder_height() -> CatalogEntry {
    let mut d = descriptor("cylinder_height", 2, true, models::cylinder());
    d.boundary_n.push(sub("bottom", 1, 0, models::circle()));
    d.boundary_d.push(sub("top", 1, 0, models::circle()));
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("bottom", &[1, 1]), ("top", &[1, 1])]),
        expected_r_main: expected(&[], "SNF on the 6-vertex cylinder gives 1+t; (1+t)-(1+t) = 0"),
        expected_r_corollary: Some(expected(&[], "MB^D = t+t^2 and relative SNF gives t+t^2")),
        flow_datasets: vec![],
    }
}

fn mobius_core() -> CatalogEntry {
    let mut d = descriptor("mobius_core", 2, false, models::mobius());
    d.interior.push(twisted_circle("core", 1));
    d.boundary_n.push(sub("rim", 1, 0, models::circle()));

    // h: rim e0, e1; core c1 (index 1), c2 (index 2). The core's local system
    // has monodromy -1, so its two lines add up to 2.
    let full = dataset(
        vec![
            pt("e0", 0, PointKind::BoundaryN, "rim"),
            pt("e1", 1, PointKind::BoundaryN, "rim"),
            ipt("c1", 1, "core"),
            ipt("c2", 2, "core"),
        ],
        vec![
            ln("e1", "e0", 1, 1),
            ln("e1", "e0", -1, 1),
            ln("c1", "e0", 1, 1),
            ln("c1", "e0", -1, 1),
            ln("c2", "c1", 1, 1),
            ln("c2", "c1", 1, 1),
        ],
        &["rim", "core"],
    );
    let restricted = dataset(
        vec![
            pt("e0", 0, PointKind::BoundaryN, "rim"),
            pt("e1", 1, PointKind::BoundaryN, "rim"),
            ipt("c1", 0, "core"),
            ipt("c2", 1, "core"),
        ],
        vec![
            ln("e1", "e0", 1, 1),
            ln("e1", "e0", -1, 1),
            ln("c2", "c1", 1, 1),
            ln("c2", "c1", -1, -1),
        ],
        &["rim", "core"],
    );
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("core", &[1, 1]), ("rim", &[1, 1])]),
        expected_r_main: expected(
            &[],
            "twisted SNF on the circle gives 0; SNF on the 5-vertex band gives 1+t; (1+t)-(1+t) = 0",
        ),
        expected_r_corollary: None,
        flow_datasets: vec![fixture("mobius_core_morsified", full, Some(restricted), &[1, 1])],
    }
}

fn solid_torus_core_max() -> CatalogEntry {
    let mut d = descriptor("solid_torus_core_max", 3, true, models::solid_torus());
    d.interior.push(sub("core", 1, 2, models::circle()));
    d.boundary_n.push(sub("shell", 2, 0, models::torus()));
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("core", &[1, 1]), ("shell", &[1, 2, 1])]),
        expected_r_main: expected(
            &[0, 1, 1],
            "SNF on the 7-vertex torus and 9-vertex solid torus; t^3+2t^2+t = (1+t)(t+t^2)",
        ),
        expected_r_corollary: Some(expected(&[], "MB^D = t^2+t^3 and relative SNF gives t^2+t^3")),
        flow_datasets: vec![],
    }
}

fn flat_torus() -> CatalogEntry {
    let mut d = descriptor("flat_torus", 2, true, models::torus());
    d.interior.push(sub("low", 1, 0, models::circle()));
    d.interior.push(sub("high", 1, 1, models::circle()));

    // h: a0, a1 on the low circle; b1, b2 on the high circle. All lines cancel.
    let full = dataset(
        vec![
            ipt("a0", 0, "low"),
            ipt("a1", 1, "low"),
            ipt("b1", 1, "high"),
            ipt("b2", 2, "high"),
        ],
        vec![
            ln("a1", "a0", 1, 1),
            ln("a1", "a0", -1, 1),
            ln("b2", "b1", 1, 1),
            ln("b2", "b1", -1, 1),
            ln("b1", "a0", 1, 1),
            ln("b1", "a0", -1, 1),
            ln("b2", "a1", 1, 1),
            ln("b2", "a1", -1, 1),
        ],
        &["low", "high"],
    );
    let restricted = dataset(
        vec![
            ipt("a0", 0, "low"),
            ipt("a1", 1, "low"),
            ipt("b1", 0, "high"),
            ipt("b2", 1, "high"),
        ],
        vec![
            ln("a1", "a0", 1, 1),
            ln("a1", "a0", -1, 1),
            ln("b2", "b1", 1, 1),
            ln("b2", "b1", -1, 1),
        ],
        &["low", "high"],
    );
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("low", &[1, 1]), ("high", &[1, 1])]),
        expected_r_main: expected(&[], "(1+t)+(1+t)t-(1+2t+t^2) = 0 with SNF on the 7-vertex torus"),
        expected_r_corollary: Some(expected(&[], "closed: relative SNF equals absolute 1+2t+t^2")),
        flow_datasets: vec![fixture("flat_torus_blocks", full, Some(restricted), &[1, 2, 1])],
    }
}

fn klein_flat() -> CatalogEntry {
    let mut d = descriptor("klein_flat", 2, false, models::klein_bottle());
    d.interior.push(sub("low", 1, 0, models::circle()));
    d.interior.push(twisted_circle("high", 1));
    CatalogEntry {
        descriptor: d,
        choices: choices(&[("low", &[1, 1]), ("high", &[1, 1])]),
        expected_r_main: expected(&[], "SNF on the 9-vertex Klein bottle gives 1+t; (1+t)+0-(1+t) = 0"),
        expected_r_corollary: None,
        flow_datasets: vec![],
    }
}

/// Flow datasets not tied to a catalog descriptor.
pub fn standalone_flows() -> Vec<FlowFixture> {
    let sphere_height = dataset(vec![ipt("south", 0, "S"), ipt("north", 2, "N")], vec![], &["S", "N"]);
    let four_point = |flip: bool| {
        dataset(
            vec![ipt("q", 0, "B"), ipt("s", 1, "B"), ipt("a", 2, "B"), ipt("b", 2, "B")],
            vec![
                ln("a", "s", 1, 1),
                ln("b", "s", -1, 1),
                ln("s", "q", 1, 1),
                ln("s", "q", if flip { 1 } else { -1 }, 1),
            ],
            &["B"],
        )
    };
    // Same complex read two ways: trivial transports with product signs, and
    // the monodromy -1 system seen by the circle itself.
    let circle_h = dataset(
        vec![ipt("q", 0, "C"), ipt("p", 1, "C")],
        vec![ln("p", "q", 1, 1), ln("p", "q", 1, 1)],
        &["C"],
    );
    let circle_twisted = dataset(
        vec![ipt("q", 0, "C"), ipt("p", 1, "C")],
        vec![ln("p", "q", 1, 1), ln("p", "q", -1, -1)],
        &["C"],
    );
    let two_block = dataset(
        vec![
            ipt("q", 0, "LOW"),
            ipt("s", 1, "LOW"),
            ipt("a", 2, "HIGH"),
            ipt("b", 2, "HIGH"),
        ],
        vec![
            ln("a", "s", 1, 1),
            ln("b", "s", -1, 1),
            ln("s", "q", 1, 1),
            ln("s", "q", -1, 1),
        ],
        &["LOW", "HIGH"],
    );
    let two_block_restricted = dataset(
        vec![
            ipt("q", 0, "LOW"),
            ipt("s", 1, "LOW"),
            ipt("a", 0, "HIGH"),
            ipt("b", 0, "HIGH"),
        ],
        vec![ln("s", "q", 1, 1), ln("s", "q", -1, 1)],
        &["LOW", "HIGH"],
    );
    vec![
        fixture("sphere_height", sphere_height.clone(), Some(sphere_height), &[1, 0, 1]),
        fixture(
            "sphere_four_point",
            four_point(false),
            Some(four_point(false)),
            &[1, 0, 1],
        ),
        FlowFixture {
            should_pass: false,
            expected_defect: Some(("a".into(), "q".into())),
            ..fixture("sphere_four_point_corrupted", four_point(true), None, &[1, 0, 1])
        },
        fixture("circle_twisted", circle_h, Some(circle_twisted), &[]),
        fixture("sphere_two_block", two_block, Some(two_block_restricted), &[1, 0, 1]),
    ]
}

pub fn entries() -> Vec<CatalogEntry> {
    vec![
        disk_max(),
        disk_min(),
        cylinder_height(),
        mobius_core(),
        solid_torus_core_max(),
        flat_torus(),
        klein_flat(),
    ]
}

pub fn list_entries() -> Vec<String> {
    entries().into_iter().map(|e| e.descriptor.name).collect()
}

pub fn get(name: &str) -> Result<CatalogEntry> {
    entries()
        .into_iter()
        .find(|e| e.descriptor.name == name)
        .ok_or_else(|| Error::UnknownEntry(name.to_owned()))
}

/// Every flow fixture, attached and standalone.
pub fn all_flows() -> Vec<FlowFixture> {
    entries()
        .into_iter()
        .flat_map(|e| e.flow_datasets)
        .chain(standalone_flows())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryRun {
    pub entry: String,
    pub main: VerificationReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corollary: Option<VerificationReport>,
    pub matches_expected: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub mismatches: Vec<String>,
}

impl EntryRun {
    pub fn passed(&self) -> bool {
        self.matches_expected
            && self.main.verdict.is_pass()
            && self.corollary.as_ref().is_none_or(|c| c.verdict.is_pass())
    }
}

fn compare(label: &str, got: &IntPolynomial, want: &Expected, out: &mut Vec<String>) {
    if *got != want.value {
        out.push(format!(
            "{label}: got {got}, expected {} (difference {})",
            want.value,
            got - &want.value
        ));
    }
}

pub fn run_entry(entry: &CatalogEntry) -> Result<EntryRun> {
    let main = verify_main(&entry.descriptor)?;
    let mut mismatches = Vec::new();
    compare("R_main", &main.quotient, &entry.expected_r_main, &mut mismatches);
    let corollary = match &entry.expected_r_corollary {
        Some(want) => {
            let report = verify_corollary(&entry.descriptor)?;
            compare("R_corollary", &report.quotient, want, &mut mismatches);
            Some(report)
        }
        None => None,
    };
    Ok(EntryRun {
        entry: entry.descriptor.name.clone(),
        main,
        corollary,
        matches_expected: mismatches.is_empty(),
        mismatches,
    })
}

pub fn run_all() -> Result<Vec<EntryRun>> {
    entries().iter().map(run_entry).collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("catalog data serializes");
    s.push('\n');
    s
}

/// Write `<entry>.json`, `<entry>.choices.json`, and every flow fixture as
/// `<fixture>.flow.json` (plus `<fixture>.restricted.json`) into `dir`.
pub fn export(dir: &Path) -> Result<Vec<String>> {
    let io = |path: &Path| {
        let p = path.display().to_string();
        move |source| Error::Io { path: p, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    let mut files = Vec::new();
    let mut write = |name: String, body: String| -> Result<()> {
        let path = dir.join(&name);
        std::fs::write(&path, body).map_err(io(&path))?;
        files.push(name);
        Ok(())
    };
    for e in entries() {
        write(format!("{}.json", e.descriptor.name), pretty(&e.descriptor))?;
        write(format!("{}.choices.json", e.descriptor.name), pretty(&e.choices))?;
    }
    for f in all_flows() {
        write(format!("{}.flow.json", f.name), pretty(&f.dataset))?;
        if let Some(r) = &f.restricted {
            write(format!("{}.restricted.json", f.name), pretty(r))?;
        }
    }
    Ok(files)
}
