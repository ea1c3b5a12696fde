//! Quivers, dimension vectors and Euler forms.
//!
//! Vertices are kept sorted by identifier, and a [`DimVector`] is indexed by
//! that sorted position. Edges are sorted by identifier.

mod decomp;
mod morphism;

pub use decomp::{all_decompositions, decompositions, graded_cmp, sub_vectors};
pub use morphism::{binarize_quiver, frame_quiver, QuiverMorphism, FRAMING_VERTEX};

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap};
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub id: String,
    pub tail: usize,
    pub head: usize,
}

#[derive(Clone, Debug)]
pub struct Quiver {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    index: HashMap<String, usize>,
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.edges == other.edges
    }
}

impl Eq for Quiver {}

#[derive(Serialize, Deserialize)]
struct EdgeJson {
    id: String,
    from: String,
    to: String,
}

#[derive(Serialize, Deserialize)]
struct QuiverJson {
    vertices: Vec<String>,
    edges: Vec<EdgeJson>,
}

impl Quiver {
    /// Builds a quiver from vertex ids and `(edge id, from, to)` triples.
    pub fn new<S: AsRef<str>, T: AsRef<str>>(vertices: &[S], edges: &[(T, T, T)]) -> Result<Self> {
        let mut vs: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        vs.sort();
        if vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::input("duplicate vertex id"));
        }
        let index: HashMap<String, usize> =
            vs.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        let mut es = Vec::with_capacity(edges.len());
        for (id, from, to) in edges {
            let tail = *index
                .get(from.as_ref())
                .ok_or_else(|| Error::input(format!("edge {} has unknown tail", id.as_ref())))?;
            let head = *index
                .get(to.as_ref())
                .ok_or_else(|| Error::input(format!("edge {} has unknown head", id.as_ref())))?;
            es.push(Edge { id: id.as_ref().to_string(), tail, head });
        }
        es.sort_by(|a, b| a.id.cmp(&b.id));
        if es.windows(2).any(|w| w[0].id == w[1].id) {
            return Err(Error::input("duplicate edge id"));
        }
        Ok(Quiver { vertices: vs, edges: es, index })
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QuiverJson =
            serde_json::from_str(text).map_err(|e| Error::input(format!("quiver json: {e}")))?;
        Self::from_raw(raw)
    }

    pub fn from_value(value: &serde_json::Value) -> Result<Self> {
        let raw: QuiverJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::input(format!("quiver json: {e}")))?;
        Self::from_raw(raw)
    }

    fn from_raw(raw: QuiverJson) -> Result<Self> {
        let edges: Vec<(String, String, String)> =
            raw.edges.into_iter().map(|e| (e.id, e.from, e.to)).collect();
        Self::new(&raw.vertices, &edges)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let raw = QuiverJson {
            vertices: self.vertices.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeJson {
                    id: e.id.clone(),
                    from: self.vertices[e.tail].clone(),
                    to: self.vertices[e.head].clone(),
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("quiver serializes")
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_index(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn edge_index(&self, id: &str) -> Option<usize> {
        self.edges.binary_search_by(|e| e.id.as_str().cmp(id)).ok()
    }

    pub fn vertex_id(&self, i: usize) -> &str {
        &self.vertices[i]
    }

    pub fn unit(&self, v: usize) -> DimVector {
        DimVector::unit(self.num_vertices(), v)
    }

    pub fn zero_vector(&self) -> DimVector {
        DimVector::zeros(self.num_vertices())
    }

    /// Parses `{"v":1,"w":2}`; absent keys are zero.
    pub fn dimvec_from_json(&self, text: &str) -> Result<DimVector> {
        let map: BTreeMap<String, i64> =
            serde_json::from_str(text).map_err(|e| Error::input(format!("dimvec json: {e}")))?;
        let mut d = self.zero_vector();
        for (k, v) in map {
            let i = self
                .vertex_index(&k)
                .ok_or_else(|| Error::input(format!("unknown vertex {k}")))?;
            d.0[i] = v;
        }
        Ok(d)
    }

    pub fn dimvec_to_value(&self, d: &DimVector) -> serde_json::Value {
        let map: BTreeMap<&str, i64> = self
            .vertices
            .iter()
            .zip(&d.0)
            .filter(|(_, &x)| x != 0)
            .map(|(v, &x)| (v.as_str(), x))
            .collect();
        serde_json::to_value(map).expect("dimvec serializes")
    }

    /// Stable content hash used as a cache key.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let text = serde_json::to_string(&self.to_value()).expect("quiver serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// True iff a directed cycle exists; loops count.
    pub fn has_oriented_cycles(&self) -> bool {
        self.topological_order().is_none()
    }

    /// Kahn's algorithm with ties broken by vertex order; `None` if cyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.num_vertices();
        let mut indeg = vec![0usize; n];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); n];
        for e in &self.edges {
            indeg[e.head] += 1;
            out[e.tail].push(e.head);
        }
        let mut heap: BinaryHeap<std::cmp::Reverse<usize>> =
            (0..n).filter(|&v| indeg[v] == 0).map(std::cmp::Reverse).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(v)) = heap.pop() {
            order.push(v);
            for &w in &out[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    heap.push(std::cmp::Reverse(w));
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn require_acyclic(&self) -> Result<()> {
        if self.has_oriented_cycles() {
            Err(Error::Cyclic)
        } else {
            Ok(())
        }
    }

    /// `chi_Q(d, e) = sum_v d(v) e(v) - sum_a d(t(a)) e(h(a))`.
    pub fn euler_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        let diag: i64 = d.0.iter().zip(&e.0).map(|(a, b)| a * b).sum();
        let off: i64 = self.edges.iter().map(|a| d.0[a.tail] * e.0[a.head]).sum();
        diag - off
    }

    pub fn sym_euler_form(&self, d: &DimVector, e: &DimVector) -> i64 {
        self.euler_form(d, e) + self.euler_form(e, d)
    }

    /// `(-1)^{chi_Q(d, e)}`.
    pub fn sign_epsilon(&self, d: &DimVector, e: &DimVector) -> i64 {
        if self.euler_form(d, e).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }

    /// Vertices carrying a nonzero entry of `d`.
    pub fn support(&self, d: &DimVector) -> BTreeSet<usize> {
        d.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DimVector(pub Vec<i64>);

impl DimVector {
    pub fn zeros(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut d = Self::zeros(n);
        d.0[v] = 1;
        d
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `|d| = sum_v d(v)`.
    pub fn norm(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Nonnegative and nonzero.
    pub fn is_class(&self) -> bool {
        self.is_nonneg() && !self.is_zero()
    }

    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn is_binary(&self) -> bool {
        self.0.iter().all(|&x| x == 0 || x == 1)
    }

    /// `Some(v)` if this is the unit vector at `v`.
    pub fn as_unit(&self) -> Option<usize> {
        if self.norm() == 1 && self.is_nonneg() {
            self.0.iter().position(|&x| x == 1)
        } else {
            None
        }
    }

    pub fn scale(&self, k: i64) -> DimVector {
        DimVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn graded_cmp(&self, other: &DimVector) -> Ordering {
        graded_cmp(self, other)
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &DimVector {
    type Output = DimVector;
    fn sub(self, rhs: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

pub fn sum_all<'a, I: IntoIterator<Item = &'a DimVector>>(n: usize, it: I) -> DimVector {
    let mut acc = DimVector::zeros(n);
    for d in it {
        for (a, b) in acc.0.iter_mut().zip(&d.0) {
            *a += b;
        }
    }
    acc
}

/// Small quivers used throughout tests, benches and the CLI self-test.
pub mod examples {
    use super::Quiver;

    /// `v -> w`.
    pub fn a2() -> Quiver {
        Quiver::new(&["v", "w"], &[("e1", "v", "w")]).unwrap()
    }

    /// `m` parallel edges `v -> w`.
    pub fn kronecker(m: usize) -> Quiver {
        let ids: Vec<String> = (1..=m).map(|i| format!("e{i}")).collect();
        let edges: Vec<(&str, &str, &str)> = ids.iter().map(|s| (s.as_str(), "v", "w")).collect();
        Quiver::new(&["v", "w"], &edges).unwrap()
    }

    /// `n` isolated vertices.
    pub fn discrete(n: usize) -> Quiver {
        let vs: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
        Quiver::new(&vs, &[] as &[(&str, &str, &str)]).unwrap()
    }

    /// Tree `a -> b <- c`, `b -> d`.
    pub fn tree4() -> Quiver {
        Quiver::new(
            &["a", "b", "c", "d"],
            &[("e1", "a", "b"), ("e2", "c", "b"), ("e3", "b", "d")],
        )
        .unwrap()
    }

    pub fn single_loop() -> Quiver {
        Quiver::new(&["v"], &[("l", "v", "v")]).unwrap()
    }
}
