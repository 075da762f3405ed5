use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A finite abstract simplicial complex.
///
/// Simplices are stored with their vertices in ascending order, which fixes
/// the orientation convention used by the boundary operator. The complex is
/// always closed under taking faces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellModel {
    vertices: Vec<u32>,
    cells: Vec<Vec<Vec<u32>>>,
}

impl CellModel {
    /// Build from declared vertices and a list of simplices; faces are
    /// completed. Every vertex of every simplex must be declared.
    pub fn new(vertices: impl IntoIterator<Item = u32>, simplices: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let declared: BTreeSet<u32> = vertices.into_iter().collect();
        let mut by_dim: Vec<BTreeSet<Vec<u32>>> = vec![declared.iter().map(|&v| vec![v]).collect()];
        for simplex in simplices {
            let mut s = simplex.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() != simplex.len() {
                return Err(Error::InvalidCellModel(format!("simplex {simplex:?} repeats a vertex")));
            }
            if s.is_empty() {
                return Err(Error::InvalidCellModel("empty simplex".into()));
            }
            if let Some(v) = s.iter().find(|v| !declared.contains(v)) {
                return Err(Error::InvalidCellModel(format!(
                    "simplex {simplex:?} uses undeclared vertex {v}"
                )));
            }
            add_with_faces(&mut by_dim, &s);
        }
        while by_dim.last().is_some_and(BTreeSet::is_empty) {
            by_dim.pop();
        }
        Ok(Self {
            vertices: declared.into_iter().collect(),
            cells: by_dim.into_iter().map(|s| s.into_iter().collect()).collect(),
        })
    }

    /// Build from facets alone, declaring exactly the vertices they use.
    pub fn from_facets(facets: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        let facets: Vec<Vec<u32>> = facets.into_iter().collect();
        let vertices: BTreeSet<u32> = facets.iter().flatten().copied().collect();
        Self::new(vertices, facets)
    }

    pub fn empty() -> Self {
        Self {
            vertices: Vec::new(),
            cells: Vec::new(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[u32] {
        &self.vertices
    }

    /// Top simplex dimension; `None` for the empty complex.
    pub fn dim(&self) -> Option<usize> {
        self.cells.len().checked_sub(1)
    }

    /// The `k`-simplices in lexicographic order.
    pub fn cells(&self, k: usize) -> &[Vec<u32>] {
        self.cells.get(k).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn cell_counts(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    pub fn index_of(&self, simplex: &[u32]) -> Option<usize> {
        let k = simplex.len().checked_sub(1)?;
        self.cells.get(k)?.binary_search_by(|s| s.as_slice().cmp(simplex)).ok()
    }

    pub fn contains(&self, simplex: &[u32]) -> bool {
        self.index_of(simplex).is_some()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, c)| if k % 2 == 0 { c.len() as i64 } else { -(c.len() as i64) })
            .sum()
    }

    /// Simplices of dimension >= 1 that are not a face of any other simplex.
    pub fn facets(&self) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        for k in 1..self.cells.len() {
            for s in &self.cells[k] {
                let is_face = self
                    .cells
                    .get(k + 1)
                    .is_some_and(|up| up.iter().any(|t| s.iter().all(|v| t.binary_search(v).is_ok())));
                if !is_face {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    /// Pseudo-manifold boundary: the codimension-one faces lying in exactly
    /// one top simplex, with their faces. Empty for closed pseudo-manifolds.
    pub fn boundary(&self) -> CellModel {
        let Some(top) = self.dim() else {
            return CellModel::empty();
        };
        if top == 0 {
            return CellModel::empty();
        }
        let mut incidence: HashMap<Vec<u32>, usize> = HashMap::new();
        for s in &self.cells[top] {
            for i in 0..s.len() {
                let mut face = s.clone();
                face.remove(i);
                *incidence.entry(face).or_default() += 1;
            }
        }
        let faces: Vec<Vec<u32>> = incidence
            .into_iter()
            .filter_map(|(f, n)| (n == 1).then_some(f))
            .collect();
        CellModel::from_facets(faces).expect("faces of a valid model are valid")
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let index: HashMap<u32, usize> = self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.cells(1) {
            let (a, b) = (find(&mut parent, index[&e[0]]), find(&mut parent, index[&e[1]]));
            parent[a] = b;
        }
        (0..parent.len()).filter(|&i| find(&mut parent, i) == i).count()
    }
}

fn add_with_faces(by_dim: &mut Vec<BTreeSet<Vec<u32>>>, simplex: &[u32]) {
    let k = simplex.len() - 1;
    if by_dim.len() <= k {
        by_dim.resize_with(k + 1, BTreeSet::new);
    }
    if !by_dim[k].insert(simplex.to_vec()) || k == 0 {
        return;
    }
    for i in 0..simplex.len() {
        let mut face = simplex.to_vec();
        face.remove(i);
        add_with_faces(by_dim, &face);
    }
}

#[derive(Serialize, Deserialize)]
struct CellModelRepr {
    vertices: Vec<u32>,
    simplices: Vec<Vec<u32>>,
}

impl Serialize for CellModel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut simplices = self.facets();
        simplices.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        CellModelRepr {
            vertices: self.vertices.clone(),
            simplices,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CellModel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = CellModelRepr::deserialize(deserializer)?;
        CellModel::new(repr.vertices, repr.simplices).map_err(serde::de::Error::custom)
    }
}

/// A `±1`-valued 1-cocycle: a rank-one local system of integer coefficients
/// with unit monodromy. Unlisted edges carry `+1`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignCocycle {
    edge_signs: BTreeMap<(u32, u32), i8>,
}

impl SignCocycle {
    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn new(entries: impl IntoIterator<Item = (u32, u32, i64)>) -> Result<Self> {
        let mut edge_signs = BTreeMap::new();
        for (u, v, s) in entries {
            if s != 1 && s != -1 {
                return Err(Error::InvalidSign(s));
            }
            if u == v {
                return Err(Error::InvalidCellModel(format!(
                    "edge sign on degenerate edge ({u}, {v})"
                )));
            }
            let key = (u.min(v), u.max(v));
            if let Some(prev) = edge_signs.insert(key, s as i8) {
                if i64::from(prev) != s {
                    return Err(Error::InvalidCellModel(format!(
                        "conflicting signs listed for edge ({}, {})",
                        key.0, key.1
                    )));
                }
            }
        }
        Ok(Self { edge_signs })
    }

    /// Transport sign along the edge `{u, v}`.
    pub fn sign(&self, u: u32, v: u32) -> i8 {
        *self.edge_signs.get(&(u.min(v), u.max(v))).unwrap_or(&1)
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_signs.values().all(|&s| s == 1)
    }

    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, i8)> + '_ {
        self.edge_signs.iter().map(|(&(u, v), &s)| (u, v, s))
    }

    /// Every listed edge exists in `model`, and every 2-simplex `{a<b<c}`
    /// satisfies `s(a,b) s(b,c) s(a,c) = +1`.
    pub fn check(&self, model: &CellModel) -> Result<()> {
        if let Some(&(u, v)) = self.edge_signs.keys().find(|(u, v)| !model.contains(&[*u, *v])) {
            return Err(Error::UnknownEdge(u, v));
        }
        for t in model.cells(2) {
            let product = self.sign(t[0], t[1]) * self.sign(t[1], t[2]) * self.sign(t[0], t[2]);
            if product != 1 {
                return Err(Error::CocycleViolation { simplex: t.clone() });
            }
        }
        Ok(())
    }

    /// The gauge-equivalent cocycle obtained by flipping the fiber basis at
    /// `vertex`: every edge of `model` at `vertex` changes sign.
    pub fn gauge_flip(&self, model: &CellModel, vertex: u32) -> SignCocycle {
        let mut edge_signs = self.edge_signs.clone();
        for e in model.cells(1).iter().filter(|e| e.contains(&vertex)) {
            let s = self.sign(e[0], e[1]);
            edge_signs.insert((e[0], e[1]), -s);
        }
        SignCocycle { edge_signs }
    }
}

#[derive(Serialize, Deserialize)]
struct SignCocycleRepr {
    edge_signs: Vec<(u32, u32, i64)>,
}

impl Serialize for SignCocycle {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        SignCocycleRepr {
            edge_signs: self.entries().map(|(u, v, s)| (u, v, i64::from(s))).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SignCocycle {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let repr = SignCocycleRepr::deserialize(deserializer)?;
        SignCocycle::new(repr.edge_signs).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn circle() -> CellModel {
        CellModel::from_facets([vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap()
    }

    #[test]
    fn faces_are_completed() {
        let disk = CellModel::from_facets([vec![3, 1, 0]]).unwrap();
        assert_eq!(disk.cell_counts(), vec![3, 3, 1]);
        assert_eq!(disk.cells(2), &[vec![0, 1, 3]]);
        assert!(disk.contains(&[1, 3]));
        assert_eq!(disk.euler_characteristic(), 1);
    }

    #[test]
    fn undeclared_vertex_rejected() {
        assert!(CellModel::new([0, 1], [vec![0, 2]]).is_err());
        assert!(CellModel::new([0, 1], [vec![0, 0]]).is_err());
    }

    #[test]
    fn boundary_of_cone_is_circle() {
        let disk = CellModel::from_facets([vec![0, 1, 3], vec![1, 2, 3], vec![0, 2, 3]]).unwrap();
        assert_eq!(disk.boundary(), circle());
        assert!(circle().boundary().is_empty());
    }

    #[test]
    fn json_round_trip_uses_facets() {
        let json = serde_json::to_string(&circle()).unwrap();
        assert_eq!(json, r#"{"vertices":[0,1,2],"simplices":[[0,1],[0,2],[1,2]]}"#);
        let back: CellModel = serde_json::from_str(&json).unwrap();
        assert_eq!(back, circle());
    }

    #[test]
    fn cocycle_check_names_the_triangle() {
        let disk = CellModel::from_facets([vec![0, 1, 2]]).unwrap();
        let bad = SignCocycle::new([(0, 1, -1)]).unwrap();
        match bad.check(&disk) {
            Err(Error::CocycleViolation { simplex }) => assert_eq!(simplex, vec![0, 1, 2]),
            other => panic!("unexpected {other:?}"),
        }
        let good = SignCocycle::new([(0, 1, -1), (0, 2, -1)]).unwrap();
        assert!(good.check(&disk).is_ok());
        assert!(matches!(
            SignCocycle::new([(0, 5, -1)]).unwrap().check(&disk),
            Err(Error::UnknownEdge(0, 5))
        ));
    }

    #[test]
    fn cocycle_json() {
        let c: SignCocycle = serde_json::from_str(r#"{"edge_signs":[[2,0,-1]]}"#).unwrap();
        assert_eq!(c.sign(0, 2), -1);
        assert_eq!(c.sign(0, 1), 1);
        assert_eq!(serde_json::to_string(&c).unwrap(), r#"{"edge_signs":[[0,2,-1]]}"#);
        assert!(serde_json::from_str::<SignCocycle>(r#"{"edge_signs":[[0,1,2]]}"#).is_err());
    }

    #[test]
    fn components() {
        assert_eq!(circle().component_count(), 1);
        let two = CellModel::new([0, 1, 5], [vec![0, 1]]).unwrap();
        assert_eq!(two.component_count(), 2);
    }
}
