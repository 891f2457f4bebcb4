//! Matching PL critical vertices with the critical simplices of a gradient field.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::complex::{lower_link, lower_star, Simplex, SimplicialComplex, Vertex, VertexScalarField};
use crate::error::Result;
use crate::gvf::{check_relative_perfectness, GradientField};
use crate::homology::{relative_betti, FieldChoice};

/// Critical simplices of one index sitting at the level of one vertex.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceEntry {
    pub vertex: Vertex,
    pub value: f64,
    pub index: usize,
    /// `k_i` of the vertex: the rank of the relative homology of
    /// (closed lower star, lower link) in degree `index`.
    pub multiplicity: usize,
    /// Critical `index`-simplices whose maximum vertex is `vertex`.
    pub simplices: Vec<Simplex>,
}

impl CorrespondenceEntry {
    pub fn balanced(&self) -> bool {
        self.multiplicity == self.simplices.len()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrespondenceMap {
    pub field: FieldChoice,
    /// One entry per (vertex, index) where either side is non-zero, ordered by
    /// vertex value then index.
    pub entries: Vec<CorrespondenceEntry>,
    /// Critical simplices at the level of a vertex with `k_i = 0` in their degree.
    pub unmatched: Vec<Simplex>,
    pub relatively_perfect: bool,
    pub bijective: bool,
}

impl CorrespondenceMap {
    /// Entries of PL critical vertices.
    pub fn critical_entries(&self) -> impl Iterator<Item = &CorrespondenceEntry> {
        self.entries.iter().filter(|e| e.multiplicity > 0)
    }

    /// Entries where the simplex count differs from the multiplicity.
    pub fn imbalances(&self) -> impl Iterator<Item = &CorrespondenceEntry> {
        self.entries.iter().filter(|e| !e.balanced())
    }
}

/// Groups the critical simplices of `v` by the vertex whose level they sit at
/// and sets them against the multiplicities of that vertex.
pub fn correspondence(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: &GradientField,
    field: FieldChoice,
) -> Result<CorrespondenceMap> {
    f.check_domain(k)?;
    let top = k.dimension().max(0) as usize;
    let mut by_level: BTreeMap<Vertex, Vec<Simplex>> = BTreeMap::new();
    for s in v.critical(k) {
        by_level.entry(f.fmax(s)?.vertex).or_default().push(s.clone());
    }
    let rows = f
        .ordered_vertices()
        .par_iter()
        .map(|&u| -> Result<Vec<CorrespondenceEntry>> {
            let star = lower_star(k, f, u)?.closure();
            let link = lower_link(k, f, u)?;
            let mult = relative_betti(&star, &link, field)?;
            let here = by_level.get(&u).map(Vec::as_slice).unwrap_or(&[]);
            let value = f.value(u)?;
            Ok((0..=top)
                .filter_map(|i| {
                    let simplices: Vec<Simplex> = here.iter().filter(|s| s.dim() == i).cloned().collect();
                    let multiplicity = mult.get(i as isize);
                    (multiplicity > 0 || !simplices.is_empty()).then_some(CorrespondenceEntry {
                        vertex: u,
                        value,
                        index: i,
                        multiplicity,
                        simplices,
                    })
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?;
    let entries: Vec<CorrespondenceEntry> = rows.into_iter().flatten().collect();
    let unmatched = entries.iter().filter(|e| e.multiplicity == 0).flat_map(|e| e.simplices.iter().cloned()).collect();
    let relatively_perfect = check_relative_perfectness(k, f, v, field)?.is_rp();
    let bijective = entries.iter().all(|e| e.multiplicity == 1 && e.simplices.len() == 1);
    Ok(CorrespondenceMap { field, entries, unmatched, relatively_perfect, bijective })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorrespondenceViolation {
    /// The vertex is not a vertex of the simplex.
    NotLocal { vertex: Vertex, simplex: Simplex },
    /// The simplex does not sit at the level of the vertex.
    WrongLevel { vertex: Vertex, simplex: Simplex },
    /// Number of critical simplices differs from the multiplicity.
    Count { vertex: Vertex, index: usize, multiplicity: usize, found: usize },
    /// The function is PL Morse but the map is not one-to-one.
    NotBijective,
}

impl fmt::Display for CorrespondenceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NotLocal { vertex, simplex } => write!(f, "{simplex} does not contain vertex {vertex}"),
            Self::WrongLevel { vertex, simplex } => write!(f, "{simplex} is not at the level of vertex {vertex}"),
            Self::Count { vertex, index, multiplicity, found } => {
                write!(f, "vertex {vertex}, index {index}: multiplicity {multiplicity} but {found} critical simplices")
            }
            Self::NotBijective => write!(f, "PL Morse function but the correspondence is not bijective"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrespondenceCertificate {
    pub violations: Vec<CorrespondenceViolation>,
}

impl CorrespondenceCertificate {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks locality, level and counts of every entry, and bijectivity when
/// `pl_morse` holds. Levels are checked against `f` when it is given.
pub fn verify_correspondence(
    map: &CorrespondenceMap,
    f: Option<&VertexScalarField>,
    pl_morse: bool,
) -> CorrespondenceCertificate {
    let mut violations = Vec::new();
    for e in &map.entries {
        for s in &e.simplices {
            if !s.contains(e.vertex) {
                violations.push(CorrespondenceViolation::NotLocal { vertex: e.vertex, simplex: s.clone() });
            }
            if let Some(f) = f {
                if f.fmax(s).map(|l| l.vertex != e.vertex).unwrap_or(true) {
                    violations.push(CorrespondenceViolation::WrongLevel { vertex: e.vertex, simplex: s.clone() });
                }
            }
        }
        if !e.balanced() {
            violations.push(CorrespondenceViolation::Count {
                vertex: e.vertex,
                index: e.index,
                multiplicity: e.multiplicity,
                found: e.simplices.len(),
            });
        }
    }
    if pl_morse && !map.bijective {
        violations.push(CorrespondenceViolation::NotBijective);
    }
    CorrespondenceCertificate { violations }
}
