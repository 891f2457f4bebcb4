//! Construction of a relatively perfect gradient field.
//!
//! Each lower link gets a perfect gradient field (spanning forests in
//! dimension <= 1, free-face collapses for 2-dimensional subcomplexes of the
//! 2-sphere), which is lifted to the lower star by coning with the vertex.
//! Lower stars partition the complex, so the union of the lifted fields is a
//! gradient field on the whole complex.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{
    cone, is_combinatorial_manifold, lower_link, lower_star, Simplex, SimplicialComplex, Vertex, VertexScalarField,
};
use crate::error::{Error, Result};
use crate::gvf::{counts_by_dim, GradientField};

/// The smallest `(edge, triangle)` such that the edge lies in exactly one triangle.
pub fn find_free_face(k: &SimplicialComplex) -> Option<(Simplex, Simplex)> {
    Collapser::new(k).next_free()
}

/// Record of successive elementary collapses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CollapseTrace {
    /// Removed `(free edge, triangle)` pairs in removal order.
    pub removed: Vec<(Simplex, Simplex)>,
    /// What is left once no triangle has a free edge.
    #[serde(skip)]
    pub residual: SimplicialComplex,
}

// triangles, edges and their coface counts, kept in sync while collapsing
struct Collapser {
    vertices: Vec<Simplex>,
    edges: BTreeMap<Simplex, BTreeSet<Simplex>>,
    triangles: BTreeSet<Simplex>,
    free: BTreeSet<Simplex>,
}

impl Collapser {
    fn new(k: &SimplicialComplex) -> Self {
        let mut edges: BTreeMap<Simplex, BTreeSet<Simplex>> =
            k.simplices(1).iter().map(|e| (e.clone(), BTreeSet::new())).collect();
        let triangles: BTreeSet<Simplex> = k.simplices(2).iter().cloned().collect();
        for t in &triangles {
            for (_, e) in t.facets() {
                // edges missing from a non-closed input are treated as absent
                if let Some(ts) = edges.get_mut(&e) {
                    ts.insert(t.clone());
                }
            }
        }
        let free = edges.iter().filter(|(_, ts)| ts.len() == 1).map(|(e, _)| e.clone()).collect();
        Collapser { vertices: k.simplices(0).to_vec(), edges, triangles, free }
    }

    fn is_closed_surface(&self) -> bool {
        !self.triangles.is_empty() && self.edges.values().all(|ts| ts.len() == 2)
    }

    fn next_free(&self) -> Option<(Simplex, Simplex)> {
        let e = self.free.iter().next()?;
        let t = self.edges[e].iter().next().expect("free edge has a triangle");
        Some((e.clone(), t.clone()))
    }

    fn remove_triangle(&mut self, t: &Simplex) {
        self.triangles.remove(t);
        for (_, e) in t.facets() {
            if let Some(ts) = self.edges.get_mut(&e) {
                ts.remove(t);
                match ts.len() {
                    1 => {
                        self.free.insert(e);
                    }
                    _ => {
                        self.free.remove(&e);
                    }
                }
            }
        }
    }

    fn collapse(&mut self, e: &Simplex, t: &Simplex) {
        self.remove_triangle(t);
        self.edges.remove(e);
        self.free.remove(e);
    }

    fn run(&mut self, trace: &mut Vec<(Simplex, Simplex)>) {
        while let Some((e, t)) = self.next_free() {
            self.collapse(&e, &t);
            trace.push((e, t));
        }
    }

    fn residual(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(
            self.vertices.iter().cloned().chain(self.edges.keys().cloned()).chain(self.triangles.iter().cloned()),
        )
    }
}

/// Removes free `(edge, triangle)` pairs, smallest first, until none is left.
pub fn collapse_free_faces(k: &SimplicialComplex) -> CollapseTrace {
    let mut c = Collapser::new(k);
    let mut removed = Vec::new();
    c.run(&mut removed);
    CollapseTrace { removed, residual: c.residual() }
}

/// Perfect field on a graph: a breadth-first spanning tree per component,
/// rooted at the smallest vertex, with every other vertex paired to the tree
/// edge leading towards the root.
pub fn spanning_forest_gradient(k: &SimplicialComplex) -> Result<GradientField> {
    if k.dimension() > 1 {
        return Err(Error::Dimension(format!("spanning forest needs dimension <= 1, got {}", k.dimension())));
    }
    let mut adjacency: BTreeMap<Vertex, Vec<Vertex>> = k.vertices().into_iter().map(|v| (v, Vec::new())).collect();
    for e in k.simplices(1) {
        let (a, b) = (e.vertices()[0], e.vertices()[1]);
        adjacency.get_mut(&a).expect("vertex").push(b);
        adjacency.get_mut(&b).expect("vertex").push(a);
    }
    for list in adjacency.values_mut() {
        list.sort_unstable();
    }
    let mut seen: BTreeSet<Vertex> = BTreeSet::new();
    let mut pairs = Vec::new();
    for &root in adjacency.keys() {
        if !seen.insert(root) {
            continue;
        }
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[&u] {
                if seen.insert(w) {
                    pairs.push((Simplex::vertex(w), Simplex::from_sorted(if u < w { vec![u, w] } else { vec![w, u] })));
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(GradientField::new(pairs))
}

/// Perfect field on a complex embedded in the 2-sphere, one component at a time.
///
/// Components of dimension <= 1 get a spanning forest. A closed 2-sphere
/// keeps its smallest triangle critical and the rest is collapsed. Any other
/// 2-dimensional component is collapsed through free faces down to a graph,
/// which then gets a spanning forest.
pub fn perfect_gradient_s2_subcomplex(k: &SimplicialComplex) -> Result<GradientField> {
    if k.dimension() > 2 {
        return Err(Error::NotSphereSubcomplex(format!("dimension {} exceeds 2", k.dimension())));
    }
    if k.dimension() <= 1 {
        return spanning_forest_gradient(k);
    }
    let mut fields = Vec::new();
    for group in k.components() {
        let comp = k.induced(&group.into_iter().collect());
        if comp.dimension() <= 1 {
            fields.push(spanning_forest_gradient(&comp)?);
            continue;
        }
        let mut c = Collapser::new(&comp);
        if c.is_closed_surface() {
            let chi = comp.euler_characteristic();
            if chi != 2 {
                return Err(Error::NotSphereSubcomplex(format!(
                    "closed surface component with Euler characteristic {chi}"
                )));
            }
            let first = comp.simplices(2)[0].clone();
            c.remove_triangle(&first);
        }
        let mut pairs = Vec::new();
        c.run(&mut pairs);
        if let Some(t) = c.triangles.iter().next() {
            return Err(Error::NotSphereSubcomplex(format!("collapse got stuck at triangle {t}")));
        }
        fields.push(GradientField::new(pairs));
        fields.push(spanning_forest_gradient(&c.residual())?);
    }
    Ok(GradientField::union(fields))
}

/// Lifts a field on the lower link of `v` to the lower star by coning.
///
/// Pairs `(a, b)` become `(va, vb)`; critical simplices of positive dimension
/// become critical cones; `v` is paired with the edge to the critical vertex of
/// smallest value and the remaining cones over critical vertices stay critical.
pub fn cone_gradient(
    v: Vertex,
    w: &GradientField,
    link: &SimplicialComplex,
    f: &VertexScalarField,
) -> Result<GradientField> {
    if link.is_empty() {
        return Err(Error::EmptyLowerLink(v));
    }
    let mut pairs = Vec::with_capacity(w.len() + 1);
    for (a, b) in w.pairs() {
        pairs.push((cone(v, a)?, cone(v, b)?));
    }
    let mut lowest: Option<(crate::complex::Level, Vertex)> = None;
    for g in w.critical_among(link.simplices(0)) {
        let u = g.vertices()[0];
        let key = f.key(u)?;
        if lowest.is_none_or(|(b, _)| key < b) {
            lowest = Some((key, u));
        }
    }
    let (_, first) = lowest.ok_or_else(|| Error::InvalidField(format!("lower link of {v} has no critical vertex")))?;
    pairs.push((Simplex::vertex(v), cone(v, &Simplex::vertex(first))?));
    Ok(GradientField::new(pairs))
}

/// Morse counts of the link and star fields at one vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexStep {
    pub vertex: Vertex,
    /// Critical counts of the link field, by dimension `0..d`.
    pub link_counts: Vec<usize>,
    /// Critical counts of the lifted field on the lower star, by dimension `0..=d`.
    pub star_counts: Vec<usize>,
}

impl VertexStep {
    /// `m_0 = 0`, `m_1 = link m_0 - 1`, and `m_i = link m_(i-1)` above, or a
    /// lone critical vertex when the lower link is empty.
    pub fn counts_consistent(&self) -> bool {
        let link = |i: usize| self.link_counts.get(i).copied().unwrap_or(0);
        if self.link_counts.iter().all(|&c| c == 0) {
            return self.star_counts.iter().enumerate().all(|(i, &c)| c == usize::from(i == 0));
        }
        self.star_counts[0] == 0
            && self.star_counts.get(1).is_some_and(|&m| m + 1 == link(0))
            && (2..self.star_counts.len()).all(|i| self.star_counts[i] == link(i - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RpBuild {
    pub field: GradientField,
    pub steps: Vec<VertexStep>,
}

#[derive(Clone, Copy, Debug)]
pub struct BuildOptions {
    /// Reject complexes that fail the combinatorial manifold test. When false
    /// the construction runs on any complex of dimension <= 3 whose lower
    /// links embed in the 2-sphere, and fails if some collapse gets stuck.
    pub require_manifold: bool,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { require_manifold: true }
    }
}

/// Builds a gradient field that is relatively perfect with respect to `f`.
pub fn build_rp_gradient(k: &SimplicialComplex, f: &VertexScalarField) -> Result<GradientField> {
    Ok(build_rp_gradient_traced(k, f, BuildOptions::default())?.field)
}

pub fn build_rp_gradient_traced(k: &SimplicialComplex, f: &VertexScalarField, opts: BuildOptions) -> Result<RpBuild> {
    let d = k.dimension();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    f.check_domain(k)?;
    if opts.require_manifold {
        let check = is_combinatorial_manifold(k, d as usize)?;
        if let (false, Some(vertex)) = (check.is_manifold, check.failing_vertex) {
            return Err(Error::NotManifold { vertex, reason: check.diagnostic.unwrap_or_default() });
        }
    }
    let per_vertex = f.ordered_vertices().par_iter().map(|&v| lift_at(k, f, v, d)).collect::<Result<Vec<_>>>()?;
    let mut steps = Vec::with_capacity(per_vertex.len());
    let mut fields = Vec::with_capacity(per_vertex.len());
    for (field, step) in per_vertex {
        fields.push(field);
        steps.push(step);
    }
    Ok(RpBuild { field: GradientField::union(fields), steps })
}

fn lift_at(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex, d: isize) -> Result<(GradientField, VertexStep)> {
    let link = lower_link(k, f, v)?;
    let star = lower_star(k, f, v)?;
    let (field, link_counts) = if link.is_empty() {
        (GradientField::empty(), vec![0; d as usize])
    } else {
        let w = perfect_gradient_s2_subcomplex(&link)?;
        let counts = counts_by_dim(w.critical(&link), d - 1);
        (cone_gradient(v, &w, &link, f)?, counts)
    };
    let star_counts = counts_by_dim(field.critical_among(star.iter()), d);
    Ok((field, VertexStep { vertex: v, link_counts, star_counts }))
}
