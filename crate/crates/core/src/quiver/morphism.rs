use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{DimVector, Quiver};
use crate::error::{Error, Result};

/// Identifier of the extra vertex added by [`frame_quiver`].
pub const FRAMING_VERTEX: &str = "∞";

/// A morphism `λ = (λ₀, λ₁)` between quivers. `edge_pairs` holds
/// `(source edge index, target edge index)`, sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuiverMorphism {
    pub source: Quiver,
    pub target: Quiver,
    pub vertex_map: Vec<usize>,
    pub edge_pairs: Vec<(usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct MorphismJson {
    vertex_map: BTreeMap<String, String>,
    edge_pairs: Vec<(String, String)>,
}

impl QuiverMorphism {
    /// Builds and validates a morphism.
    pub fn new(
        source: Quiver,
        target: Quiver,
        vertex_map: Vec<usize>,
        mut edge_pairs: Vec<(usize, usize)>,
    ) -> Result<Self> {
        edge_pairs.sort_unstable();
        edge_pairs.dedup();
        let m = QuiverMorphism { source, target, vertex_map, edge_pairs };
        m.validate()?;
        Ok(m)
    }

    pub fn identity(q: &Quiver) -> Self {
        let edge_pairs = (0..q.edges().len()).map(|i| (i, i)).collect();
        QuiverMorphism {
            source: q.clone(),
            target: q.clone(),
            vertex_map: (0..q.num_vertices()).collect(),
            edge_pairs,
        }
    }

    /// Morphism from `q` to `q` with the named edges removed; the remaining
    /// edges map to themselves.
    pub fn edge_deletion(q: &Quiver, deleted: &[&str]) -> Result<Self> {
        for id in deleted {
            if q.edge_index(id).is_none() {
                return Err(Error::input(format!("unknown edge {id}")));
            }
        }
        let kept: Vec<(String, String, String)> = q
            .edges()
            .iter()
            .filter(|e| !deleted.contains(&e.id.as_str()))
            .map(|e| (e.id.clone(), q.vertex_id(e.tail).into(), q.vertex_id(e.head).into()))
            .collect();
        let target = Quiver::new(q.vertices(), &kept)?;
        let pairs = kept
            .iter()
            .map(|(id, _, _)| (q.edge_index(id).unwrap(), target.edge_index(id).unwrap()))
            .collect();
        Self::new(q.clone(), target, (0..q.num_vertices()).collect(), pairs)
    }

    /// Parses the morphism JSON against known source and target quivers.
    pub fn from_json(source: &Quiver, target: &Quiver, text: &str) -> Result<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| Error::input(format!("morphism json: {e}")))?;
        Self::from_value(source, target, &value)
    }

    pub fn from_value(source: &Quiver, target: &Quiver, value: &serde_json::Value) -> Result<Self> {
        let raw: MorphismJson = serde_json::from_value(value.clone())
            .map_err(|e| Error::input(format!("morphism json: {e}")))?;
        let mut vertex_map = vec![usize::MAX; source.num_vertices()];
        for (v, w) in &raw.vertex_map {
            let i = source
                .vertex_index(v)
                .ok_or_else(|| Error::input(format!("unknown source vertex {v}")))?;
            vertex_map[i] = target
                .vertex_index(w)
                .ok_or_else(|| Error::input(format!("unknown target vertex {w}")))?;
        }
        if vertex_map.contains(&usize::MAX) {
            return Err(Error::input("vertex map is not total"));
        }
        let mut pairs = Vec::new();
        for (e, f) in &raw.edge_pairs {
            let i = source
                .edge_index(e)
                .ok_or_else(|| Error::input(format!("unknown source edge {e}")))?;
            let j = target
                .edge_index(f)
                .ok_or_else(|| Error::input(format!("unknown target edge {f}")))?;
            pairs.push((i, j));
        }
        Self::new(source.clone(), target.clone(), vertex_map, pairs)
    }

    pub fn to_value(&self) -> serde_json::Value {
        let raw = MorphismJson {
            vertex_map: self
                .vertex_map
                .iter()
                .enumerate()
                .map(|(v, &w)| (self.source.vertex_id(v).into(), self.target.vertex_id(w).into()))
                .collect(),
            edge_pairs: self
                .edge_pairs
                .iter()
                .map(|&(e, f)| {
                    (self.source.edges()[e].id.clone(), self.target.edges()[f].id.clone())
                })
                .collect(),
        };
        serde_json::to_value(raw).expect("morphism serializes")
    }

    /// Checks the three morphism conditions.
    pub fn validate(&self) -> Result<()> {
        let (s, t) = (&self.source, &self.target);
        if self.vertex_map.len() != s.num_vertices()
            || self.vertex_map.iter().any(|&w| w >= t.num_vertices())
        {
            return Err(Error::input("vertex map is not a map between vertex sets"));
        }
        let mut seen = BTreeSet::new();
        for &(e, f) in &self.edge_pairs {
            if e >= s.edges().len() || f >= t.edges().len() {
                return Err(Error::input("edge pair out of range"));
            }
            let (se, te) = (&s.edges()[e], &t.edges()[f]);
            if self.vertex_map[se.head] != te.head || self.vertex_map[se.tail] != te.tail {
                return Err(Error::input(format!(
                    "edge pair ({}, {}) does not respect endpoints",
                    se.id, te.id
                )));
            }
            if !seen.insert(e) {
                return Err(Error::input(format!("source edge {} appears twice", se.id)));
            }
        }
        for (f, te) in t.edges().iter().enumerate() {
            for v in 0..s.num_vertices() {
                if self.vertex_map[v] != te.head {
                    continue;
                }
                for w in 0..s.num_vertices() {
                    if self.vertex_map[w] != te.tail {
                        continue;
                    }
                    let n = self
                        .edge_pairs
                        .iter()
                        .filter(|&&(e, g)| {
                            g == f && s.edges()[e].head == v && s.edges()[e].tail == w
                        })
                        .count();
                    if n != 1 {
                        return Err(Error::input(format!(
                            "target edge {} has {} lifts from {} to {}",
                            te.id,
                            n,
                            s.vertex_id(w),
                            s.vertex_id(v)
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// `self ∘ inner`, requiring `inner.target == self.source`.
    pub fn compose(&self, inner: &QuiverMorphism) -> Result<QuiverMorphism> {
        if inner.target != self.source {
            return Err(Error::mismatch("composition of non-adjacent morphisms"));
        }
        let vertex_map = inner.vertex_map.iter().map(|&v| self.vertex_map[v]).collect();
        let mut pairs = Vec::new();
        for &(e, f) in &inner.edge_pairs {
            for &(g, h) in &self.edge_pairs {
                if f == g {
                    pairs.push((e, h));
                }
            }
        }
        Self::new(inner.source.clone(), self.target.clone(), vertex_map, pairs)
    }

    /// `λ_*(d)(v') = Σ_{λ₀(v) = v'} d(v)`.
    pub fn pushforward(&self, d: &DimVector) -> DimVector {
        let mut out = self.target.zero_vector();
        for (v, &x) in d.0.iter().enumerate() {
            out.0[self.vertex_map[v]] += x;
        }
        out
    }

    /// Source edges that are not the first entry of any pair.
    pub fn deleted_edges(&self) -> Vec<usize> {
        let kept: BTreeSet<usize> = self.edge_pairs.iter().map(|p| p.0).collect();
        (0..self.source.edges().len()).filter(|e| !kept.contains(e)).collect()
    }

    /// Ordered pairs `v != w` of source vertices with the same image.
    pub fn collapsed_pairs(&self) -> Vec<(usize, usize)> {
        let n = self.source.num_vertices();
        let mut out = Vec::new();
        for v in 0..n {
            for w in 0..n {
                if v != w && self.vertex_map[v] == self.vertex_map[w] {
                    out.push((v, w));
                }
            }
        }
        out
    }

    /// `ξ(d, e)`.
    pub fn xi(&self, d: &DimVector, e: &DimVector) -> i64 {
        let a: i64 = self.collapsed_pairs().iter().map(|&(v, w)| d.0[v] * d.0[w]).sum();
        let b: i64 = self
            .deleted_edges()
            .iter()
            .map(|&i| {
                let ed = &self.source.edges()[i];
                d.0[ed.tail] * e.0[ed.head]
            })
            .sum();
        a + b
    }

    pub fn vertex_map_injective(&self) -> bool {
        let set: BTreeSet<usize> = self.vertex_map.iter().copied().collect();
        set.len() == self.vertex_map.len()
    }
}

/// Adds the vertex `∞` with `framing[v]` edges `∞ -> v`; returns the framed
/// quiver and the inclusion morphism.
pub fn frame_quiver(q: &Quiver, framing: &[i64]) -> Result<(Quiver, QuiverMorphism)> {
    q.require_acyclic()?;
    if framing.len() != q.num_vertices() || framing.iter().any(|&n| n < 0) {
        return Err(Error::input("framing must be a nonnegative value per vertex"));
    }
    if q.vertex_index(FRAMING_VERTEX).is_some() {
        return Err(Error::input("quiver already has a framing vertex"));
    }
    let mut vertices: Vec<String> = q.vertices().to_vec();
    vertices.push(FRAMING_VERTEX.to_string());
    let mut edges: Vec<(String, String, String)> = q
        .edges()
        .iter()
        .map(|e| (e.id.clone(), q.vertex_id(e.tail).into(), q.vertex_id(e.head).into()))
        .collect();
    for (v, &n) in framing.iter().enumerate() {
        for k in 1..=n {
            let id = format!("{FRAMING_VERTEX}:{}:{k}", q.vertex_id(v));
            edges.push((id, FRAMING_VERTEX.into(), q.vertex_id(v).into()));
        }
    }
    let framed = Quiver::new(&vertices, &edges)?;
    let vertex_map = q
        .vertices()
        .iter()
        .map(|v| framed.vertex_index(v).unwrap())
        .collect();
    let pairs = q
        .edges()
        .iter()
        .map(|e| (q.edge_index(&e.id).unwrap(), framed.edge_index(&e.id).unwrap()))
        .collect();
    let incl = QuiverMorphism::new(q.clone(), framed.clone(), vertex_map, pairs)?;
    Ok((framed, incl))
}

/// Replaces each vertex `v` by `d(v)` vertices `v#i` and each edge `e` by the
/// edges `e#i#j` from `t(e)#j` to `h(e)#i`. Returns the new quiver, the
/// projection morphism onto `q`, and the all-ones vector.
pub fn binarize_quiver(q: &Quiver, d: &DimVector) -> Result<(Quiver, QuiverMorphism, DimVector)> {
    if !d.is_class() {
        return Err(Error::input("binarization needs a nonzero nonnegative vector"));
    }
    let name = |v: usize, i: i64| format!("{}#{i}", q.vertex_id(v));
    let mut vertices = Vec::new();
    for v in 0..q.num_vertices() {
        for i in 1..=d.0[v] {
            vertices.push(name(v, i));
        }
    }
    let mut edges = Vec::new();
    for e in q.edges() {
        for i in 1..=d.0[e.head] {
            for j in 1..=d.0[e.tail] {
                edges.push((format!("{}#{i}#{j}", e.id), name(e.tail, j), name(e.head, i)));
            }
        }
    }
    let bq = Quiver::new(&vertices, &edges)?;
    if bq.num_vertices() != d.norm() as usize || bq.edges().len() != edges.len() {
        return Err(Error::input("binarized identifiers collide"));
    }
    let mut vertex_map = vec![0; bq.num_vertices()];
    for v in 0..q.num_vertices() {
        for i in 1..=d.0[v] {
            vertex_map[bq.vertex_index(&name(v, i)).unwrap()] = v;
        }
    }
    let mut pairs = Vec::new();
    for (ei, e) in q.edges().iter().enumerate() {
        for i in 1..=d.0[e.head] {
            for j in 1..=d.0[e.tail] {
                pairs.push((bq.edge_index(&format!("{}#{i}#{j}", e.id)).unwrap(), ei));
            }
        }
    }
    let ones = DimVector(vec![1; bq.num_vertices()]);
    let lam = QuiverMorphism::new(bq.clone(), q.clone(), vertex_map, pairs)?;
    Ok((bq, lam, ones))
}
