//! PL critical point classification at vertices.
//!
//! Four classifiers are provided. Two work on surfaces only and look purely at
//! the combinatorics of the vertex star: the index count of triangles in which
//! the vertex is the middle value, and the wedge count of the lower star. The
//! other two work for any dimension up to 3 and use homology: the relative
//! homology of the closed lower star modulo the lower link, and the reduced
//! homology of the lower link. The surface classifiers share no code with the
//! homological ones, so comparing them is a meaningful check.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{
    is_combinatorial_manifold, lower_link, lower_star, vertex_link_is_sphere, Simplex, SimplicialComplex, Vertex,
    VertexScalarField,
};
use crate::error::{Error, Result};
use crate::homology::{reduced_betti, relative_betti, FieldChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CriticalKind {
    Regular,
    Minimum,
    Maximum,
    Saddle,
}

/// Which definition produced a classification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Definition {
    /// Middle-triangle index count (surfaces).
    #[serde(rename = "I")]
    Index,
    /// Wedges of the lower star (surfaces).
    #[serde(rename = "W")]
    Wedge,
    /// Relative homology of the closed lower star modulo the lower link.
    #[serde(rename = "H")]
    Homology,
    /// Reduced homology of the lower link.
    #[serde(rename = "L")]
    Link,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlClassification {
    pub vertex: Vertex,
    pub kind: CriticalKind,
    /// `multiplicities[i]` is the multiplicity at index `i`, for `i` in `0..=d`.
    pub multiplicities: Vec<usize>,
    pub source: Definition,
    /// False when more than one index has non-zero multiplicity.
    pub simple: bool,
}

impl PlClassification {
    fn from_multiplicities(vertex: Vertex, multiplicities: Vec<usize>, source: Definition) -> Self {
        let d = multiplicities.len() - 1;
        let total: usize = multiplicities.iter().sum();
        let kind = if total == 0 {
            CriticalKind::Regular
        } else if total == 1 && multiplicities[0] == 1 {
            CriticalKind::Minimum
        } else if total == 1 && multiplicities[d] == 1 {
            CriticalKind::Maximum
        } else {
            CriticalKind::Saddle
        };
        let simple = multiplicities.iter().filter(|&&k| k > 0).count() <= 1;
        PlClassification { vertex, kind, multiplicities, source, simple }
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiplicities.iter().sum()
    }

    pub fn is_critical(&self) -> bool {
        self.kind != CriticalKind::Regular
    }

    /// The index, when exactly one index has non-zero multiplicity.
    pub fn index(&self) -> Option<usize> {
        let mut nz = self.multiplicities.iter().enumerate().filter(|(_, &k)| k > 0);
        match (nz.next(), nz.next()) {
            (Some((i, _)), None) => Some(i),
            _ => None,
        }
    }

    /// Same verdict regardless of which definition produced it.
    pub fn agrees_with(&self, other: &PlClassification) -> bool {
        self.vertex == other.vertex && self.kind == other.kind && self.multiplicities == other.multiplicities
    }
}

fn surface_vertex(k: &SimplicialComplex, v: Vertex) -> Result<()> {
    if k.dimension() != 2 {
        return Err(Error::UnsupportedDimension(k.dimension()));
    }
    vertex_link_is_sphere(k, v, 2).map_err(|reason| Error::NotManifold { vertex: v, reason })
}

fn manifold_vertex(k: &SimplicialComplex, v: Vertex) -> Result<usize> {
    let d = k.dimension();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    vertex_link_is_sphere(k, v, d as usize).map_err(|reason| Error::NotManifold { vertex: v, reason })?;
    Ok(d as usize)
}

/// Number of triangles `[u, v, w]` around `v` with `f(u) < f(v) < f(w)`.
pub fn middle_triangle_count(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<usize> {
    surface_vertex(k, v)?;
    let here = f.key(v)?;
    let mut count = 0;
    for t in k.incident(v).filter(|s| s.dim() == 2) {
        let mut below = 0;
        for &u in t.vertices().iter().filter(|&&u| u != v) {
            if f.key(u)? < here {
                below += 1;
            }
        }
        if below == 1 {
            count += 1;
        }
    }
    debug_assert!(count % 2 == 0, "middle count around a surface vertex is even");
    Ok(count)
}

/// `1 - count / 2`.
pub fn banchoff_index(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<i64> {
    Ok(1 - middle_triangle_count(k, f, v)? as i64 / 2)
}

// min if nothing around v is below it, max if everything is
fn extremum_kind(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<Option<CriticalKind>> {
    let here = f.key(v)?;
    let mut below = 0;
    let mut total = 0;
    for s in k.incident(v) {
        total += 1;
        if f.fmax(s)? == here {
            below += 1;
        }
    }
    Ok(if below == 1 {
        Some(CriticalKind::Minimum)
    } else if below == total {
        Some(CriticalKind::Maximum)
    } else {
        None
    })
}

pub fn i_classify(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<PlClassification> {
    let iota = banchoff_index(k, f, v)?;
    let mut mult = vec![0; 3];
    match iota {
        1 => match extremum_kind(k, f, v)? {
            Some(CriticalKind::Minimum) => mult[0] = 1,
            Some(_) => mult[2] = 1,
            None => return Err(Error::NotManifold { vertex: v, reason: "index 1 at a non-extremal vertex".into() }),
        },
        0 => {}
        negative => mult[1] = (-negative) as usize,
    }
    Ok(PlClassification::from_multiplicities(v, mult, Definition::Index))
}

/// Number of wedges of the lower star of a surface vertex.
///
/// Zero when the lower link is empty or the full link cycle, otherwise the
/// number of connected components of the lower link.
pub fn wedge_count(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<usize> {
    surface_vertex(k, v)?;
    let here = f.key(v)?;
    let mut low: BTreeSet<Vertex> = BTreeSet::new();
    let mut neighbours = 0;
    let mut low_edges = Vec::new();
    for s in k.incident(v) {
        match s.dim() {
            1 => {
                neighbours += 1;
                let u = s.without(v).expect("edge through v").last();
                if f.key(u)? < here {
                    low.insert(u);
                }
            }
            2 => {
                let opposite = s.without(v).expect("triangle through v");
                let (a, b) = (opposite.vertices()[0], opposite.vertices()[1]);
                if f.key(a)? < here && f.key(b)? < here {
                    low_edges.push((a, b));
                }
            }
            _ => {}
        }
    }
    if low.is_empty() || low.len() == neighbours {
        return Ok(0);
    }
    // union-find over the low neighbours
    let mut parent: HashMap<Vertex, Vertex> = low.iter().map(|&u| (u, u)).collect();
    fn root(p: &mut HashMap<Vertex, Vertex>, mut x: Vertex) -> Vertex {
        while p[&x] != x {
            let up = p[&p[&x]];
            p.insert(x, up);
            x = up;
        }
        x
    }
    let mut components = low.len();
    for (a, b) in low_edges {
        let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
        if ra != rb {
            parent.insert(ra.max(rb), ra.min(rb));
            components -= 1;
        }
    }
    Ok(components)
}

pub fn w_classify(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<PlClassification> {
    let w = wedge_count(k, f, v)?;
    let mut mult = vec![0; 3];
    match w {
        0 => match extremum_kind(k, f, v)? {
            Some(CriticalKind::Minimum) => mult[0] = 1,
            Some(_) => mult[2] = 1,
            None => return Err(Error::NotManifold { vertex: v, reason: "no wedge at a non-extremal vertex".into() }),
        },
        1 => {}
        w => mult[1] = w - 1,
    }
    Ok(PlClassification::from_multiplicities(v, mult, Definition::Wedge))
}

/// Multiplicities from `H_i(closure(lower star), lower link)`.
pub fn h_classify(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: Vertex,
    field: FieldChoice,
) -> Result<PlClassification> {
    let d = manifold_vertex(k, v)?;
    let star = lower_star(k, f, v)?.closure();
    let link = lower_link(k, f, v)?;
    let b = relative_betti(&star, &link, field)?;
    let mult = (0..=d).map(|i| b.get(i as isize)).collect();
    Ok(PlClassification::from_multiplicities(v, mult, Definition::Homology))
}

/// Multiplicities from the reduced homology of the lower link: index `i`
/// gets the rank in degree `i - 1`.
pub fn l_classify(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: Vertex,
    field: FieldChoice,
) -> Result<PlClassification> {
    let d = manifold_vertex(k, v)?;
    let b = reduced_betti(&lower_link(k, f, v)?, field);
    let mult = (0..=d).map(|i| b.get(i as isize - 1)).collect();
    Ok(PlClassification::from_multiplicities(v, mult, Definition::Link))
}

/// Every applicable verdict for one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VertexVerdicts {
    pub vertex: Vertex,
    pub value: f64,
    pub homology: PlClassification,
    pub link: PlClassification,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub index: Option<PlClassification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wedge: Option<PlClassification>,
}

impl VertexVerdicts {
    pub fn all(&self) -> impl Iterator<Item = &PlClassification> {
        [Some(&self.homology), Some(&self.link), self.index.as_ref(), self.wedge.as_ref()].into_iter().flatten()
    }

    pub fn agree(&self) -> bool {
        self.all().all(|c| c.agrees_with(&self.homology))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub vertex: Vertex,
    pub verdicts: Vec<PlClassification>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SkippedVertex {
    pub vertex: Vertex,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub dimension: isize,
    pub vertices: Vec<VertexVerdicts>,
    /// Vertices whose link is not a sphere; only populated when the complex
    /// is allowed to have such vertices.
    pub skipped: Vec<SkippedVertex>,
    pub disagreements: Vec<Disagreement>,
}

impl ClassificationReport {
    pub fn agreement(&self) -> bool {
        self.disagreements.is_empty()
    }

    pub fn critical(&self) -> impl Iterator<Item = &PlClassification> {
        self.vertices.iter().map(|v| &v.homology).filter(|c| c.is_critical())
    }

    /// Every critical vertex has total multiplicity 1.
    pub fn is_pl_morse(&self) -> bool {
        self.critical().all(|c| c.total_multiplicity() == 1)
    }

    pub fn verdict(&self, v: Vertex) -> Option<&VertexVerdicts> {
        self.vertices.iter().find(|x| x.vertex == v)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct ClassifyOptions {
    pub field: FieldChoice,
    /// Classify only vertices with sphere links instead of rejecting the
    /// complex when some vertex (e.g. on a boundary) fails the test.
    pub allow_boundary: bool,
}

/// Classifies every vertex with every applicable definition and reports
/// vertices where the definitions disagree.
pub fn classify_all(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    opts: ClassifyOptions,
) -> Result<ClassificationReport> {
    let d = k.dimension();
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d));
    }
    f.check_domain(k)?;
    if !opts.allow_boundary {
        let check = is_combinatorial_manifold(k, d as usize)?;
        if let (false, Some(vertex)) = (check.is_manifold, check.failing_vertex) {
            return Err(Error::NotManifold { vertex, reason: check.diagnostic.unwrap_or_default() });
        }
    }
    let order = f.ordered_vertices();
    let results: Vec<std::result::Result<VertexVerdicts, SkippedVertex>> =
        order.par_iter().map(|&v| classify_vertex(k, f, v, opts.field)).collect::<Result<Vec<_>>>()?;
    let mut report =
        ClassificationReport { dimension: d, vertices: Vec::new(), skipped: Vec::new(), disagreements: Vec::new() };
    for r in results {
        match r {
            Ok(verdicts) => {
                if !verdicts.agree() {
                    report
                        .disagreements
                        .push(Disagreement { vertex: verdicts.vertex, verdicts: verdicts.all().cloned().collect() });
                }
                report.vertices.push(verdicts);
            }
            Err(skip) => report.skipped.push(skip),
        }
    }
    Ok(report)
}

fn classify_vertex(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: Vertex,
    field: FieldChoice,
) -> Result<std::result::Result<VertexVerdicts, SkippedVertex>> {
    let d = k.dimension() as usize;
    if let Err(reason) = vertex_link_is_sphere(k, v, d) {
        return Ok(Err(SkippedVertex { vertex: v, reason }));
    }
    let surface = d == 2;
    Ok(Ok(VertexVerdicts {
        vertex: v,
        value: f.value(v)?,
        homology: h_classify(k, f, v, field)?,
        link: l_classify(k, f, v, field)?,
        index: if surface { Some(i_classify(k, f, v)?) } else { None },
        wedge: if surface { Some(w_classify(k, f, v)?) } else { None },
    }))
}

/// True when every PL critical vertex has total multiplicity 1.
pub fn is_pl_morse(k: &SimplicialComplex, f: &VertexScalarField) -> Result<bool> {
    Ok(classify_all(k, f, ClassifyOptions::default())?.is_pl_morse())
}

/// Simplices through `v` used by the surface classifiers, exposed for diagnostics.
pub fn middle_triangles(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<Vec<Simplex>> {
    surface_vertex(k, v)?;
    let here = f.key(v)?;
    let mut out = Vec::new();
    for t in k.incident(v).filter(|s| s.dim() == 2) {
        let others: Vec<Vertex> = t.vertices().iter().copied().filter(|&u| u != v).collect();
        let (a, b) = (f.key(others[0])?, f.key(others[1])?);
        if (a < here) != (b < here) {
            out.push(t.clone());
        }
    }
    Ok(out)
}
