//! Simplicial complexes, vertex scalar fields and the neighbourhood operators
//! (star, link, lower star, lower link, sublevel sets) built on top of them.
//!
//! Simplices are sorted vertex tuples. Complexes are immutable once built and
//! keep, per dimension, a lexicographically sorted simplex list plus a hash
//! index, so every query result comes back in a deterministic order.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// A simplex, stored as a strictly increasing list of vertex ids.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vertex>", into = "Vec<Vertex>")]
pub struct Simplex(Vec<Vertex>);

impl Simplex {
    /// Sorts the given vertices. Fails on an empty list or a repeated vertex.
    pub fn new(vertices: impl IntoIterator<Item = Vertex>) -> Result<Self> {
        let mut vs: Vec<Vertex> = vertices.into_iter().collect();
        let raw = vs.clone();
        vs.sort_unstable();
        if vs.is_empty() || vs.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::MalformedSimplex(raw));
        }
        Ok(Simplex(vs))
    }

    pub fn vertex(v: Vertex) -> Self {
        Simplex(vec![v])
    }

    pub(crate) fn from_sorted(vs: Vec<Vertex>) -> Self {
        debug_assert!(!vs.is_empty() && vs.windows(2).all(|w| w[0] < w[1]));
        Simplex(vs)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len() - 1
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    /// The largest vertex id; for 0-simplices, the vertex itself.
    pub fn last(&self) -> Vertex {
        *self.0.last().expect("simplices are never empty")
    }

    /// Codimension-1 faces, paired with the position of the dropped vertex.
    /// The position fixes the orientation sign `(-1)^pos` of the boundary.
    pub fn facets(&self) -> impl Iterator<Item = (usize, Simplex)> + '_ {
        let n = if self.0.len() > 1 { self.0.len() } else { 0 };
        (0..n).map(move |skip| {
            let vs = self.0.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
            (skip, Simplex(vs))
        })
    }

    /// Every non-empty face, the simplex itself included.
    pub fn faces(&self) -> Vec<Simplex> {
        let n = self.0.len();
        assert!(n < 32, "simplex of dimension {} is too large to enumerate", n - 1);
        (1u32..(1u32 << n))
            .map(|mask| Simplex((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    pub fn is_face_of(&self, other: &Simplex) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    pub fn is_facet_of(&self, other: &Simplex) -> bool {
        self.0.len() + 1 == other.0.len() && self.is_face_of(other)
    }

    pub fn shares_vertex_with(&self, other: &Simplex) -> bool {
        self.0.iter().any(|&v| other.contains(v))
    }

    /// Drops `v`; `None` if `v` is absent or the simplex is the bare vertex `v`.
    pub fn without(&self, v: Vertex) -> Option<Simplex> {
        if !self.contains(v) || self.0.len() == 1 {
            return None;
        }
        Some(Simplex(self.0.iter().copied().filter(|&u| u != v).collect()))
    }
}

impl TryFrom<Vec<Vertex>> for Simplex {
    type Error = Error;

    fn try_from(vs: Vec<Vertex>) -> Result<Self> {
        Simplex::new(vs)
    }
}

impl From<Simplex> for Vec<Vertex> {
    fn from(s: Simplex) -> Self {
        s.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// The simplex spanned by `v` and the vertices of `simplex`.
pub fn cone(v: Vertex, simplex: &Simplex) -> Result<Simplex> {
    match simplex.0.binary_search(&v) {
        Ok(_) => Err(Error::DegenerateCone { vertex: v, simplex: simplex.clone() }),
        Err(pos) => {
            let mut vs = simplex.0.clone();
            vs.insert(pos, v);
            Ok(Simplex(vs))
        }
    }
}

/// An arbitrary collection of simplices, e.g. a star. Not necessarily face-closed.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SimplexSet(BTreeSet<Simplex>);

impl SimplexSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, s: Simplex) -> bool {
        self.0.insert(s)
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.0.contains(s)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.0.iter()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.0.iter().filter(|s| s.dim() == dim).count()
    }

    /// Smallest complex containing every member.
    pub fn closure(&self) -> SimplicialComplex {
        SimplicialComplex::from_simplices(self.0.iter().cloned())
    }
}

impl FromIterator<Simplex> for SimplexSet {
    fn from_iter<I: IntoIterator<Item = Simplex>>(iter: I) -> Self {
        SimplexSet(iter.into_iter().collect())
    }
}

impl IntoIterator for SimplexSet {
    type Item = Simplex;
    type IntoIter = std::collections::btree_set::IntoIter<Simplex>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.into_iter()
    }
}

/// A finite, face-closed simplicial complex.
#[derive(Clone, Debug, Default)]
pub struct SimplicialComplex {
    by_dim: Vec<Vec<Simplex>>,
    index: HashMap<Simplex, usize>,
    // every simplex containing a given vertex, as (dim, position) pairs
    incidence: HashMap<Vertex, Vec<(usize, usize)>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.by_dim == other.by_dim
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Face closure of the given vertex tuples.
    pub fn from_maximal<I, T>(tuples: I) -> Result<Self>
    where
        I: IntoIterator<Item = T>,
        T: IntoIterator<Item = Vertex>,
    {
        let mut all = HashSet::new();
        for t in tuples {
            let s = Simplex::new(t)?;
            all.extend(s.faces());
        }
        Ok(Self::from_closed(all))
    }

    /// Face closure of an arbitrary collection of simplices.
    pub fn from_simplices(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut all = HashSet::new();
        for s in simplices {
            if all.contains(&s) {
                continue;
            }
            all.extend(s.faces());
        }
        Self::from_closed(all)
    }

    /// Builds from a set the caller guarantees to be face-closed.
    pub(crate) fn from_closed(simplices: impl IntoIterator<Item = Simplex>) -> Self {
        let mut by_dim: Vec<Vec<Simplex>> = Vec::new();
        for s in simplices {
            let d = s.dim();
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].push(s);
        }
        for layer in &mut by_dim {
            layer.sort_unstable();
            layer.dedup();
        }
        let mut index = HashMap::new();
        let mut incidence: HashMap<Vertex, Vec<(usize, usize)>> = HashMap::new();
        for (d, layer) in by_dim.iter().enumerate() {
            for (i, s) in layer.iter().enumerate() {
                index.insert(s.clone(), i);
                for &v in s.vertices() {
                    incidence.entry(v).or_default().push((d, i));
                }
            }
        }
        debug_assert!(by_dim.iter().flatten().all(|s| s.facets().all(|(_, f)| index.contains_key(&f))));
        SimplicialComplex { by_dim, index, incidence }
    }

    /// Dimension of the largest simplex, or -1 for the empty complex.
    pub fn dimension(&self) -> isize {
        self.by_dim.len() as isize - 1
    }

    pub fn is_empty(&self) -> bool {
        self.by_dim.is_empty()
    }

    pub fn len(&self) -> usize {
        self.by_dim.iter().map(Vec::len).sum()
    }

    pub fn count(&self, dim: usize) -> usize {
        self.by_dim.get(dim).map_or(0, Vec::len)
    }

    /// Simplex counts per dimension, `0..=dimension`.
    pub fn f_vector(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn simplices(&self, dim: usize) -> &[Simplex] {
        self.by_dim.get(dim).map_or(&[], Vec::as_slice)
    }

    /// All simplices, by increasing dimension and lexicographically within one.
    pub fn iter(&self) -> impl Iterator<Item = &Simplex> {
        self.by_dim.iter().flatten()
    }

    pub fn vertices(&self) -> Vec<Vertex> {
        self.simplices(0).iter().map(Simplex::last).collect()
    }

    pub fn contains(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        self.incidence.contains_key(&v)
    }

    /// Position of `s` inside `simplices(s.dim())`.
    pub fn position(&self, s: &Simplex) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Every simplex having `v` as a vertex.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = &Simplex> {
        self.incidence.get(&v).into_iter().flatten().map(move |&(d, i)| &self.by_dim[d][i])
    }

    /// Cofaces of `s`, `s` included.
    pub fn star(&self, s: &Simplex) -> Result<SimplexSet> {
        if !self.contains(s) {
            return Err(Error::MissingSimplex(s.clone()));
        }
        Ok(self.incident(s.vertices()[0]).filter(|t| s.is_face_of(t)).cloned().collect())
    }

    /// Faces of cofaces of `s` that are disjoint from `s`.
    pub fn link(&self, s: &Simplex) -> Result<SimplicialComplex> {
        let star = self.star(s)?;
        let mut out = HashSet::new();
        for t in star.iter() {
            let rest: Vec<Vertex> = t.vertices().iter().copied().filter(|v| !s.contains(*v)).collect();
            if !rest.is_empty() {
                // rest spans a face of t, so all its faces are in the link too
                out.extend(Simplex::from_sorted(rest).faces());
            }
        }
        Ok(Self::from_closed(out))
    }

    /// Maximal simplices (those with no proper coface).
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered = HashSet::new();
        for s in self.iter() {
            for (_, f) in s.facets() {
                covered.insert(f);
            }
        }
        self.iter().filter(|s| !covered.contains(*s)).cloned().collect()
    }

    pub fn is_pure(&self) -> bool {
        let d = self.dimension();
        d < 0 || self.facets().iter().all(|s| s.dim() as isize == d)
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.by_dim.iter().enumerate().map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// `Err` carries the first simplex of `self` missing from `other`.
    pub fn check_subcomplex_of(&self, other: &SimplicialComplex) -> Result<()> {
        match self.iter().find(|s| !other.contains(s)) {
            Some(s) => Err(Error::NotSubcomplex(s.clone())),
            None => Ok(()),
        }
    }

    /// Sub-collection selected by `keep`; the predicate must be inherited by faces.
    pub(crate) fn filter(&self, mut keep: impl FnMut(&Simplex) -> bool) -> SimplicialComplex {
        Self::from_closed(self.iter().filter(|s| keep(s)).cloned())
    }

    /// Subcomplex of simplices all of whose vertices lie in `vertices`.
    pub fn induced(&self, vertices: &BTreeSet<Vertex>) -> SimplicialComplex {
        self.filter(|s| s.vertices().iter().all(|v| vertices.contains(v)))
    }

    /// Vertex sets of the connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<Vertex>> {
        let verts = self.vertices();
        let pos: HashMap<Vertex, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..verts.len()).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for e in self.simplices(1) {
            let a = find(&mut parent, pos[&e.vertices()[0]]);
            let b = find(&mut parent, pos[&e.vertices()[1]]);
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, Vec<Vertex>> = BTreeMap::new();
        for (i, &v) in verts.iter().enumerate() {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(v);
        }
        let mut out: Vec<Vec<Vertex>> = groups.into_values().collect();
        out.sort();
        out
    }
}

/// Value of a vertex together with the vertex id, ordered by value then id.
///
/// This is the total order used everywhere a function value is compared, so
/// repeated raw values are still strictly ordered.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Level {
    pub value: f64,
    pub vertex: Vertex,
}

impl PartialEq for Level {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Level {}

impl PartialOrd for Level {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Level {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.total_cmp(&other.value).then(self.vertex.cmp(&other.vertex))
    }
}

/// Real values on the vertices of a complex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct VertexScalarField {
    values: BTreeMap<Vertex, f64>,
}

impl VertexScalarField {
    pub fn new(values: impl IntoIterator<Item = (Vertex, f64)>) -> Result<Self> {
        let values: BTreeMap<Vertex, f64> = values.into_iter().collect();
        if let Some((&vertex, &value)) = values.iter().find(|(_, x)| !x.is_finite()) {
            return Err(Error::NonFiniteValue { vertex, value });
        }
        Ok(VertexScalarField { values })
    }

    /// Values assigned to `0..values.len()`.
    pub fn from_slice(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().enumerate().map(|(i, &x)| (i as Vertex, x)))
    }

    /// `f(v) = v`, handy for fixtures.
    pub fn identity(k: &SimplicialComplex) -> Self {
        VertexScalarField { values: k.vertices().into_iter().map(|v| (v, v as f64)).collect() }
    }

    pub fn value(&self, v: Vertex) -> Result<f64> {
        self.values.get(&v).copied().ok_or(Error::MissingValue(v))
    }

    pub fn key(&self, v: Vertex) -> Result<Level> {
        Ok(Level { value: self.value(v)?, vertex: v })
    }

    pub fn iter(&self) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.values.iter().map(|(&v, &x)| (v, x))
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Largest vertex of `s` under the tiebreak order.
    pub fn fmax(&self, s: &Simplex) -> Result<Level> {
        let mut best: Option<Level> = None;
        for &v in s.vertices() {
            let k = self.key(v)?;
            if best.is_none_or(|b| k > b) {
                best = Some(k);
            }
        }
        Ok(best.expect("simplices are never empty"))
    }

    /// Distinct raw values, increasing.
    pub fn image(&self) -> Vec<f64> {
        let mut img: Vec<f64> = self.values.values().copied().collect();
        img.sort_by(f64::total_cmp);
        img.dedup();
        img
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.values.len()
    }

    /// Vertices sorted by the tiebreak order.
    pub fn ordered_vertices(&self) -> Vec<Vertex> {
        let mut keys: Vec<Level> = self.values.iter().map(|(&v, &x)| Level { value: x, vertex: v }).collect();
        keys.sort();
        keys.into_iter().map(|k| k.vertex).collect()
    }

    /// Ensures every vertex of `k` has a value and no value is dangling.
    pub fn check_domain(&self, k: &SimplicialComplex) -> Result<()> {
        for v in k.vertices() {
            self.value(v)?;
        }
        if let Some(&v) = self.values.keys().find(|&&v| !k.contains_vertex(v)) {
            return Err(Error::MissingVertex(v));
        }
        Ok(())
    }
}

/// Maximum of `f` over the vertices of `s`, with the maximizing vertex.
pub fn f_max(k: &SimplicialComplex, f: &VertexScalarField, s: &Simplex) -> Result<Level> {
    if !k.contains(s) {
        return Err(Error::MissingSimplex(s.clone()));
    }
    f.fmax(s)
}

/// Simplices of `star(v)` whose maximum vertex is `v`.
pub fn lower_star(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<SimplexSet> {
    let vs = Simplex::vertex(v);
    if !k.contains(&vs) {
        return Err(Error::MissingVertex(v));
    }
    let key = f.key(v)?;
    let mut out = SimplexSet::new();
    for s in k.incident(v) {
        if f.fmax(s)? == key {
            out.insert(s.clone());
        }
    }
    Ok(out)
}

/// Simplices of `link(v)` whose vertices all come before `v`.
pub fn lower_link(k: &SimplicialComplex, f: &VertexScalarField, v: Vertex) -> Result<SimplicialComplex> {
    let key = f.key(v)?;
    let link = k.link(&Simplex::vertex(v)).map_err(|_| Error::MissingVertex(v))?;
    let mut keep = Vec::new();
    for s in link.iter() {
        if f.fmax(s)? < key {
            keep.push(s.clone());
        }
    }
    Ok(SimplicialComplex::from_closed(keep))
}

/// `{ s : f_max(s) <= level }` comparing raw values.
pub fn sublevel_complex(k: &SimplicialComplex, f: &VertexScalarField, level: f64) -> Result<SimplicialComplex> {
    f.check_domain(k)?;
    Ok(k.filter(|s| f.fmax(s).map(|m| m.value <= level).unwrap_or(false)))
}

/// `{ s : f_max(s) <= key }` in the tiebreak order.
pub fn sublevel_through(k: &SimplicialComplex, f: &VertexScalarField, key: Level) -> Result<SimplicialComplex> {
    f.check_domain(k)?;
    Ok(k.filter(|s| f.fmax(s).map(|m| m <= key).unwrap_or(false)))
}

/// Largest image value strictly below `level`, or `level - 1` when there is none.
pub fn predecessor_level(f: &VertexScalarField, level: f64) -> Result<f64> {
    let img = f.image();
    let pos = img.iter().position(|&x| x.total_cmp(&level) == Ordering::Equal).ok_or(Error::InvalidLevel(level))?;
    Ok(if pos == 0 { level - 1.0 } else { img[pos - 1] })
}

/// Outcome of [`is_combinatorial_manifold`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ManifoldCheck {
    pub is_manifold: bool,
    pub failing_vertex: Option<Vertex>,
    pub diagnostic: Option<String>,
}

/// Checks that every vertex link is a combinatorial `(d-1)`-sphere, `1 <= d <= 3`.
pub fn is_combinatorial_manifold(k: &SimplicialComplex, d: usize) -> Result<ManifoldCheck> {
    if !(1..=3).contains(&d) {
        return Err(Error::UnsupportedDimension(d as isize));
    }
    if k.dimension() != d as isize {
        return Err(Error::Dimension(format!("complex has dimension {}, expected {d}", k.dimension())));
    }
    if !k.is_pure() {
        return Err(Error::Dimension(format!("complex is not pure of dimension {d}")));
    }
    for v in k.vertices() {
        if let Err(reason) = vertex_link_is_sphere(k, v, d) {
            return Ok(ManifoldCheck { is_manifold: false, failing_vertex: Some(v), diagnostic: Some(reason) });
        }
    }
    Ok(ManifoldCheck { is_manifold: true, failing_vertex: None, diagnostic: None })
}

/// Local manifold condition at one vertex: its link is a `(d-1)`-sphere.
pub fn vertex_link_is_sphere(k: &SimplicialComplex, v: Vertex, d: usize) -> std::result::Result<(), String> {
    let link = k.link(&Simplex::vertex(v)).map_err(|e| e.to_string())?;
    is_sphere(&link, d - 1).map_err(|e| format!("link of vertex {v} {e}"))
}

/// Combinatorial sphere recognition for dimensions 0, 1 and 2.
pub(crate) fn is_sphere(k: &SimplicialComplex, dim: usize) -> std::result::Result<(), String> {
    match dim {
        0 => {
            if k.count(0) == 2 && k.dimension() == 0 {
                Ok(())
            } else {
                Err(format!("is not a pair of points ({} simplices)", k.len()))
            }
        }
        1 => is_cycle(k),
        2 => {
            if k.dimension() != 2 || !k.is_pure() {
                return Err("is not a pure 2-complex".into());
            }
            let mut edge_degree: HashMap<&Simplex, usize> = HashMap::new();
            for t in k.simplices(2) {
                for (_, e) in t.facets() {
                    if let Some((key, _)) = k.index.get_key_value(&e) {
                        *edge_degree.entry(key).or_default() += 1;
                    }
                }
            }
            if let Some(e) = k.simplices(1).iter().find(|e| edge_degree.get(e).copied().unwrap_or(0) != 2) {
                return Err(format!("is not closed: edge {e} is not in exactly two triangles"));
            }
            for u in k.vertices() {
                let l = k.link(&Simplex::vertex(u)).map_err(|e| e.to_string())?;
                is_cycle(&l).map_err(|e| format!("is not a surface at {u}: its link {e}"))?;
            }
            if k.components().len() != 1 {
                return Err("is not connected".into());
            }
            let chi = k.euler_characteristic();
            if chi != 2 {
                return Err(format!("has Euler characteristic {chi}, not 2"));
            }
            Ok(())
        }
        _ => Err(format!("sphere recognition in dimension {dim} is not supported")),
    }
}

fn is_cycle(k: &SimplicialComplex) -> std::result::Result<(), String> {
    if k.dimension() != 1 {
        return Err(format!("is not a cycle (dimension {})", k.dimension()));
    }
    let mut degree: HashMap<Vertex, usize> = HashMap::new();
    for e in k.simplices(1) {
        for &v in e.vertices() {
            *degree.entry(v).or_default() += 1;
        }
    }
    if let Some(v) = k.vertices().into_iter().find(|v| degree.get(v).copied().unwrap_or(0) != 2) {
        return Err(format!("is not a cycle: vertex {v} does not have degree 2"));
    }
    if k.components().len() != 1 {
        return Err("is not a single cycle".into());
    }
    Ok(())
}
