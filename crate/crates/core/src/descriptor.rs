//! Critical data of a Morse–Bott function on a compact manifold with boundary.
//!
//! A descriptor asserts the smooth facts (non-degeneracy, the N/D type of each
//! boundary component) and carries enough topology to compute every twisted
//! Poincaré polynomial the counting polynomials need. Validation checks the
//! dimension and index bounds those facts imply.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::homology::{poincare_polynomial, relative_poincare_polynomial, CellModel, SignCocycle};
use crate::intpoly::IntPolynomial;

/// Homology supplied either directly as a Poincaré polynomial or through a
/// triangulation from which it is computed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HomologySource {
    Polynomial(IntPolynomial),
    CellModel(CellModel),
}

impl HomologySource {
    /// Untwisted `P_t(X; Z)`.
    pub fn poincare(&self) -> Result<IntPolynomial> {
        match self {
            HomologySource::Polynomial(p) => Ok(p.clone()),
            HomologySource::CellModel(m) => poincare_polynomial(m, None),
        }
    }

    /// Read as relative data: a polynomial is taken verbatim, a cell model is
    /// paired with its pseudo-manifold boundary.
    pub fn relative_poincare(&self) -> Result<IntPolynomial> {
        match self {
            HomologySource::Polynomial(p) => Ok(p.clone()),
            HomologySource::CellModel(m) => relative_poincare_polynomial(m),
        }
    }

    pub fn cell_model(&self) -> Option<&CellModel> {
        match self {
            HomologySource::CellModel(m) => Some(m),
            HomologySource::Polynomial(_) => None,
        }
    }
}

/// The local system `o(ν⁻C)` of a critical submanifold.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub enum OrientationSystem {
    /// The constant system `Z`.
    #[default]
    Oriented,
    Twisted(SignCocycle),
}

impl OrientationSystem {
    pub fn twist(&self) -> Option<&SignCocycle> {
        match self {
            OrientationSystem::Oriented => None,
            OrientationSystem::Twisted(c) => Some(c),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.twist().is_none_or(SignCocycle::is_trivial)
    }
}

#[derive(Serialize, Deserialize)]
enum OrientedFlag {
    #[serde(rename = "oriented")]
    Oriented,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum OrientationRepr {
    Flag(OrientedFlag),
    Cocycle(SignCocycle),
}

impl Serialize for OrientationSystem {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            OrientationSystem::Oriented => OrientationRepr::Flag(OrientedFlag::Oriented),
            OrientationSystem::Twisted(c) => OrientationRepr::Cocycle(c.clone()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for OrientationSystem {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Ok(match OrientationRepr::deserialize(deserializer)? {
            OrientationRepr::Flag(_) => OrientationSystem::Oriented,
            OrientationRepr::Cocycle(c) => OrientationSystem::Twisted(c),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalSubmanifold {
    pub name: String,
    pub dim: usize,
    pub index: usize,
    pub topology: HomologySource,
    #[serde(default)]
    pub orientation_system: OrientationSystem,
    pub oriented_bundle: bool,
}

impl CriticalSubmanifold {
    /// `P_t(C; o(ν⁻C))`. A polynomial topology is already the twisted one.
    pub fn twisted_poincare(&self) -> Result<IntPolynomial> {
        match &self.topology {
            HomologySource::Polynomial(p) => Ok(p.clone()),
            HomologySource::CellModel(m) => poincare_polynomial(m, self.orientation_system.twist()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubmanifoldKind {
    #[serde(rename = "interior")]
    Interior,
    #[serde(rename = "boundary_N")]
    BoundaryN,
    #[serde(rename = "boundary_D")]
    BoundaryD,
}

impl fmt::Display for SubmanifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SubmanifoldKind::Interior => "interior",
            SubmanifoldKind::BoundaryN => "boundary_N",
            SubmanifoldKind::BoundaryD => "boundary_D",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorseBottDescriptor {
    pub name: String,
    pub ambient_dim: usize,
    pub manifold_oriented: bool,
    pub manifold_homology: HomologySource,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub relative_homology: Option<HomologySource>,
    #[serde(default)]
    pub interior: Vec<CriticalSubmanifold>,
    #[serde(rename = "boundary_N", default)]
    pub boundary_n: Vec<CriticalSubmanifold>,
    #[serde(rename = "boundary_D", default)]
    pub boundary_d: Vec<CriticalSubmanifold>,
}

/// One breached invariant, naming the field and the bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
}

impl Violation {
    fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

impl MorseBottDescriptor {
    pub fn submanifolds(&self) -> impl Iterator<Item = (SubmanifoldKind, &CriticalSubmanifold)> {
        self.interior
            .iter()
            .map(|s| (SubmanifoldKind::Interior, s))
            .chain(self.boundary_n.iter().map(|s| (SubmanifoldKind::BoundaryN, s)))
            .chain(self.boundary_d.iter().map(|s| (SubmanifoldKind::BoundaryD, s)))
    }

    pub fn find(&self, name: &str) -> Option<(SubmanifoldKind, &CriticalSubmanifold)> {
        self.submanifolds().find(|(_, s)| s.name == name)
    }

    pub fn is_fully_oriented(&self) -> bool {
        self.manifold_oriented && self.submanifolds().all(|(_, s)| s.oriented_bundle)
    }

    /// `P_t(M; Z)`.
    pub fn manifold_poincare(&self) -> Result<IntPolynomial> {
        self.manifold_homology.poincare()
    }

    /// Every structural invariant; an empty list means the descriptor is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let m = self.ambient_dim;
        let mut out = Vec::new();

        check_homology_source(&mut out, "manifold_homology", &self.manifold_homology, m, true);
        if let Some(rel) = &self.relative_homology {
            check_homology_source(&mut out, "relative_homology", rel, m, false);
        }

        if self.interior.is_empty() && self.boundary_n.is_empty() && self.boundary_d.is_empty() {
            out.push(Violation::new(
                "interior/boundary_N/boundary_D",
                "no critical data: a function on a compact manifold has critical points",
            ));
        }

        let mut seen: BTreeMap<&str, SubmanifoldKind> = BTreeMap::new();
        let mut counters: BTreeMap<SubmanifoldKind, usize> = BTreeMap::new();
        for (kind, sub) in self.submanifolds() {
            let slot = counters.entry(kind).or_default();
            let field = format!("{kind}[{}] `{}`", *slot, sub.name);
            *slot += 1;

            if let Some(first) = seen.insert(&sub.name, kind) {
                out.push(Violation::new(
                    format!("{field}.name"),
                    format!("name collision: `{}` also appears in {first}", sub.name),
                ));
            }

            match kind {
                SubmanifoldKind::Interior => {
                    if sub.dim >= m {
                        out.push(Violation::new(
                            format!("{field}.dim"),
                            format!("dim exceeds m − 1 ({} > {m} − 1)", sub.dim),
                        ));
                    } else if sub.index > m - sub.dim {
                        out.push(Violation::new(
                            format!("{field}.index"),
                            format!("index exceeds m − dim ({} > {m} − {})", sub.index, sub.dim),
                        ));
                    }
                }
                SubmanifoldKind::BoundaryN | SubmanifoldKind::BoundaryD => {
                    if m == 0 || sub.dim > m - 1 {
                        out.push(Violation::new(
                            format!("{field}.dim"),
                            format!("dim exceeds m − 1 ({} > {m} − 1)", sub.dim),
                        ));
                    } else if sub.index > m - 1 - sub.dim {
                        out.push(Violation::new(
                            format!("{field}.index"),
                            format!("index exceeds (m − 1) − dim ({} > ({m} − 1) − {})", sub.index, sub.dim),
                        ));
                    }
                }
            }

            check_submanifold_topology(&mut out, &field, sub);
        }
        out
    }

    /// Critical data of `-f`.
    ///
    /// Interior indices become `m - dim - index`; boundary components swap
    /// type N and type D with index `(m - 1) - dim - index`. Requires the
    /// manifold and every negative normal bundle to be oriented, since the
    /// positive normal bundle's orientation system is not part of the data.
    pub fn negate(&self) -> Result<MorseBottDescriptor> {
        if !self.manifold_oriented {
            return Err(Error::NotOriented(format!(
                "manifold of `{}` is not oriented",
                self.name
            )));
        }
        if let Some((_, s)) = self.submanifolds().find(|(_, s)| !s.oriented_bundle) {
            return Err(Error::NotOriented(format!(
                "negative normal bundle of `{}` is not oriented",
                s.name
            )));
        }
        let violations = self.validate();
        if !violations.is_empty() {
            return Err(Error::InvalidDescriptor(violations));
        }
        let m = self.ambient_dim;
        let flip = |list: &[CriticalSubmanifold], codim: usize| -> Vec<CriticalSubmanifold> {
            list.iter()
                .map(|s| CriticalSubmanifold {
                    index: codim - s.dim - s.index,
                    ..s.clone()
                })
                .collect()
        };
        Ok(MorseBottDescriptor {
            interior: flip(&self.interior, m),
            boundary_n: flip(&self.boundary_d, m - 1),
            boundary_d: flip(&self.boundary_n, m - 1),
            ..self.clone()
        })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| Error::Parse {
            context: format!("descriptor at `{}`", e.path()),
            message: e.inner().to_string(),
        })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialization is infallible")
    }
}

fn check_homology_source(out: &mut Vec<Violation>, field: &str, src: &HomologySource, m: usize, absolute: bool) {
    match src {
        HomologySource::Polynomial(p) => {
            if p.degree().is_some_and(|d| d > m) {
                out.push(Violation::new(
                    field,
                    format!("polynomial degree exceeds ambient dimension {m}"),
                ));
            }
            if !p.is_nonnegative() {
                out.push(Violation::new(field, "negative Betti number"));
            }
        }
        HomologySource::CellModel(model) => {
            if model.is_empty() {
                out.push(Violation::new(field, "empty cell model"));
                return;
            }
            if model.dim() != Some(m) {
                out.push(Violation::new(
                    field,
                    format!("cell model has dimension {}, expected {m}", model.dim().unwrap_or(0)),
                ));
            }
            if absolute && model.component_count() != 1 {
                out.push(Violation::new(
                    field,
                    format!("manifold is not connected (H_0 rank {})", model.component_count()),
                ));
            }
        }
    }
}

fn check_submanifold_topology(out: &mut Vec<Violation>, field: &str, sub: &CriticalSubmanifold) {
    match &sub.topology {
        HomologySource::Polynomial(p) => {
            if p.degree().is_some_and(|d| d > sub.dim) {
                out.push(Violation::new(
                    format!("{field}.topology"),
                    format!("polynomial degree exceeds dim {}", sub.dim),
                ));
            }
            if !p.is_nonnegative() {
                out.push(Violation::new(format!("{field}.topology"), "negative Betti number"));
            }
            if sub.orientation_system.twist().is_some() {
                out.push(Violation::new(
                    format!("{field}.orientation_system"),
                    "a sign cocycle requires a cell_model topology",
                ));
            }
        }
        HomologySource::CellModel(model) => {
            if model.is_empty() {
                out.push(Violation::new(format!("{field}.topology"), "empty cell model"));
                return;
            }
            if model.dim() != Some(sub.dim) {
                out.push(Violation::new(
                    format!("{field}.topology"),
                    format!(
                        "cell model has dimension {}, expected {}",
                        model.dim().unwrap_or(0),
                        sub.dim
                    ),
                ));
            }
            if model.component_count() != 1 {
                out.push(Violation::new(
                    format!("{field}.topology"),
                    "critical submanifold is not connected",
                ));
            }
            if let Some(c) = sub.orientation_system.twist() {
                if let Err(e) = c.check(model) {
                    out.push(Violation::new(format!("{field}.orientation_system"), e.to_string()));
                }
            }
        }
    }
    if sub.oriented_bundle && !sub.orientation_system.is_trivial() {
        out.push(Violation::new(
            format!("{field}.oriented_bundle"),
            "bundle asserted oriented but its orientation system is twisted",
        ));
    }
}
