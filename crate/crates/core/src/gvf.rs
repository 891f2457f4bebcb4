//! Discrete gradient vector fields: validity, acyclicity, Morse numbers and
//! the relative perfectness certificate.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::complex::{lower_link, lower_star, Level, Simplex, SimplicialComplex, Vertex, VertexScalarField};
use crate::error::Result;
use crate::homology::{betti, betti_of_cells, relative_betti, FieldChoice};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Tail,
    Head,
}

/// A set of pairs `(tail, head)` with `tail` meant to be a facet of `head`.
///
/// Construction never fails; use [`validate_matching`] and [`is_acyclic`] to
/// check that the pairs form a gradient field on a given complex.
#[derive(Clone, Default, Serialize, Deserialize)]
#[serde(from = "Vec<(Simplex, Simplex)>", into = "Vec<(Simplex, Simplex)>")]
pub struct GradientField {
    pairs: Vec<(Simplex, Simplex)>,
    index: HashMap<Simplex, (usize, Role)>,
}

impl GradientField {
    /// Pairs are sorted and exact duplicates dropped.
    pub fn new(pairs: impl IntoIterator<Item = (Simplex, Simplex)>) -> Self {
        let mut pairs: Vec<(Simplex, Simplex)> = pairs.into_iter().collect();
        pairs.sort();
        pairs.dedup();
        let mut index = HashMap::with_capacity(2 * pairs.len());
        for (i, (t, h)) in pairs.iter().enumerate() {
            index.entry(t.clone()).or_insert((i, Role::Tail));
            index.entry(h.clone()).or_insert((i, Role::Head));
        }
        GradientField { pairs, index }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn pairs(&self) -> &[(Simplex, Simplex)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// The other member of the pair containing `s`, and the role `s` plays.
    pub fn partner(&self, s: &Simplex) -> Option<(&Simplex, Role)> {
        self.index.get(s).map(|&(i, role)| {
            let (t, h) = &self.pairs[i];
            match role {
                Role::Tail => (h, role),
                Role::Head => (t, role),
            }
        })
    }

    pub fn is_paired(&self, s: &Simplex) -> bool {
        self.index.contains_key(s)
    }

    /// Head paired with `tail`, if `tail` is a tail.
    pub fn head_of(&self, tail: &Simplex) -> Option<&Simplex> {
        match self.partner(tail) {
            Some((h, Role::Tail)) => Some(h),
            _ => None,
        }
    }

    /// Unpaired simplices of `k`, in the complex's order.
    pub fn critical<'a>(&'a self, k: &'a SimplicialComplex) -> impl Iterator<Item = &'a Simplex> + 'a {
        k.iter().filter(move |s| !self.is_paired(s))
    }

    /// Unpaired members of an arbitrary collection of cells.
    pub fn critical_among<'a, I>(&'a self, cells: I) -> impl Iterator<Item = &'a Simplex> + 'a
    where
        I: IntoIterator<Item = &'a Simplex>,
        I::IntoIter: 'a,
    {
        cells.into_iter().filter(move |s| !self.is_paired(s))
    }

    /// `m_i` for `i = 0..=dim(k)`.
    pub fn morse_counts(&self, k: &SimplicialComplex) -> Vec<usize> {
        counts_by_dim(self.critical(k), k.dimension())
    }

    /// Union of fields on disjoint cell sets.
    pub fn union(fields: impl IntoIterator<Item = GradientField>) -> Self {
        GradientField::new(fields.into_iter().flat_map(|g| g.pairs))
    }
}

pub(crate) fn counts_by_dim<'a>(cells: impl Iterator<Item = &'a Simplex>, top: isize) -> Vec<usize> {
    let mut counts = vec![0; (top + 1).max(0) as usize];
    for s in cells {
        if s.dim() >= counts.len() {
            counts.resize(s.dim() + 1, 0);
        }
        counts[s.dim()] += 1;
    }
    counts
}

impl From<Vec<(Simplex, Simplex)>> for GradientField {
    fn from(pairs: Vec<(Simplex, Simplex)>) -> Self {
        GradientField::new(pairs)
    }
}

impl From<GradientField> for Vec<(Simplex, Simplex)> {
    fn from(g: GradientField) -> Self {
        g.pairs
    }
}

impl PartialEq for GradientField {
    fn eq(&self, other: &Self) -> bool {
        self.pairs == other.pairs
    }
}

impl Eq for GradientField {}

impl fmt::Debug for GradientField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.pairs.iter().map(|(t, h)| format!("{t}->{h}"))).finish()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// A pair member is not a simplex of the complex.
    NotInComplex { simplex: Simplex },
    /// The tail is not a facet of the head.
    NotFacet { tail: Simplex, head: Simplex },
    /// The simplex belongs to more than one pair.
    Repeated { simplex: Simplex, pairs: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInComplex { simplex } => write!(f, "{simplex} is not in the complex"),
            Violation::NotFacet { tail, head } => write!(f, "{tail} is not a facet of {head}"),
            Violation::Repeated { simplex, pairs } => write!(f, "{simplex} occurs in {pairs} pairs"),
        }
    }
}

/// Checks that every pair is a facet pair of `k` and no simplex is used twice.
pub fn validate_matching(k: &SimplicialComplex, v: &GradientField) -> std::result::Result<(), Vec<Violation>> {
    let mut out = Vec::new();
    let mut uses: BTreeMap<&Simplex, usize> = BTreeMap::new();
    for (t, h) in v.pairs() {
        for s in [t, h] {
            if !k.contains(s) {
                out.push(Violation::NotInComplex { simplex: s.clone() });
            }
            *uses.entry(s).or_default() += 1;
        }
        if !t.is_facet_of(h) {
            out.push(Violation::NotFacet { tail: t.clone(), head: h.clone() });
        }
    }
    out.extend(
        uses.into_iter().filter(|&(_, n)| n > 1).map(|(s, n)| Violation::Repeated { simplex: s.clone(), pairs: n }),
    );
    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}

/// True when `v` has no closed V-path.
pub fn is_acyclic(v: &GradientField) -> bool {
    closed_path(v).is_none()
}

/// One closed V-path `(s1, t1), ..., (sr, tr)` if any exists.
///
/// A path continues from `(s, t)` to any pair whose tail is a facet of `t`
/// other than `s`, so cycles live on the tails of one dimension. The search is
/// an iterative three-colour depth-first search over those tails.
pub fn closed_path(v: &GradientField) -> Option<Vec<(Simplex, Simplex)>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Colour {
        White,
        Grey,
        Black,
    }
    let pairs = v.pairs();
    let tail_index: HashMap<&Simplex, usize> = pairs.iter().enumerate().map(|(i, (t, _))| (t, i)).collect();
    let successors = |i: usize| -> Vec<usize> {
        let (t, h) = &pairs[i];
        h.facets()
            .filter(|(_, s)| s != t)
            .filter_map(|(_, s)| tail_index.get(&s).copied())
            .filter(|&j| pairs[j].0.dim() == t.dim())
            .collect()
    };
    let mut colour = vec![Colour::White; pairs.len()];
    for root in 0..pairs.len() {
        if colour[root] != Colour::White {
            continue;
        }
        // stack of (node, remaining successors)
        let mut stack: Vec<(usize, Vec<usize>)> = vec![(root, successors(root))];
        colour[root] = Colour::Grey;
        while let Some((node, next)) = stack.last_mut() {
            match next.pop() {
                Some(j) => match colour[j] {
                    Colour::White => {
                        colour[j] = Colour::Grey;
                        let succ = successors(j);
                        stack.push((j, succ));
                    }
                    Colour::Grey => {
                        let start = stack.iter().position(|(n, _)| *n == j).expect("grey node is on the stack");
                        return Some(stack[start..].iter().map(|(n, _)| pairs[*n].clone()).collect());
                    }
                    Colour::Black => {}
                },
                None => {
                    colour[*node] = Colour::Black;
                    stack.pop();
                }
            }
        }
    }
    None
}

/// Critical simplex counts at one filtration step.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelCounts {
    pub vertex: Vertex,
    pub value: f64,
    pub counts: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MorseProfile {
    /// `m_i` for `i = 0..=d`.
    pub counts: Vec<usize>,
    /// One entry per vertex in increasing order of `f`.
    pub levels: Vec<LevelCounts>,
}

impl MorseProfile {
    pub fn at(&self, vertex: Vertex) -> Option<&LevelCounts> {
        self.levels.iter().find(|l| l.vertex == vertex)
    }
}

/// Groups the simplices of `k` by the vertex realizing `f_max`.
pub(crate) fn level_buckets<'a>(
    k: &'a SimplicialComplex,
    f: &VertexScalarField,
) -> Result<BTreeMap<Level, Vec<&'a Simplex>>> {
    f.check_domain(k)?;
    let mut buckets: BTreeMap<Level, Vec<&Simplex>> = BTreeMap::new();
    for v in k.vertices() {
        buckets.insert(f.key(v)?, Vec::new());
    }
    for s in k.iter() {
        buckets.get_mut(&f.fmax(s)?).expect("every f_max is a vertex key").push(s);
    }
    Ok(buckets)
}

pub fn morse_profile(k: &SimplicialComplex, f: &VertexScalarField, v: &GradientField) -> Result<MorseProfile> {
    let buckets = level_buckets(k, f)?;
    let levels = buckets
        .iter()
        .map(|(key, cells)| LevelCounts {
            vertex: key.vertex,
            value: key.value,
            counts: counts_by_dim(v.critical_among(cells.iter().copied()), k.dimension()),
        })
        .collect();
    Ok(MorseProfile { counts: v.morse_counts(k), levels })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakMorseRow {
    pub dim: usize,
    pub critical: usize,
    pub betti: usize,
    pub slack: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakMorseReport {
    pub field: FieldChoice,
    pub rows: Vec<WeakMorseRow>,
    /// `m_i >= b_i` for every `i`.
    pub holds: bool,
    /// `m_i == b_i` for every `i`.
    pub perfect: bool,
}

pub fn check_weak_morse(k: &SimplicialComplex, v: &GradientField, field: FieldChoice) -> WeakMorseReport {
    let m = v.morse_counts(k);
    let b = betti(k, field);
    let rows: Vec<WeakMorseRow> = m
        .iter()
        .enumerate()
        .map(|(i, &critical)| {
            let betti = b.get(i as isize);
            WeakMorseRow { dim: i, critical, betti, slack: critical as i64 - betti as i64 }
        })
        .collect();
    let holds = rows.iter().all(|r| r.slack >= 0);
    let perfect = rows.iter().all(|r| r.slack == 0);
    WeakMorseReport { field, rows, holds, perfect }
}

/// `m_i^l != b_i(S^l, S^l')` at one level and dimension.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RpMismatch {
    pub vertex: Vertex,
    pub level: f64,
    pub predecessor: f64,
    pub dim: usize,
    pub critical: usize,
    pub betti: usize,
}

impl fmt::Display for RpMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "level {} (vertex {}): m_{} = {} but beta_{}(S^{}, S^{}) = {}",
            self.level, self.vertex, self.dim, self.critical, self.dim, self.level, self.predecessor, self.betti
        )
    }
}

/// The two ways of computing the relative Betti numbers of a level disagree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteDisagreement {
    pub vertex: Vertex,
    pub filtration: Vec<usize>,
    pub lower_star: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RpLevel {
    pub vertex: Vertex,
    pub value: f64,
    pub predecessor: f64,
    pub critical: Vec<usize>,
    pub betti: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RpCertificate {
    pub field: FieldChoice,
    pub relatively_perfect: bool,
    pub levels: Vec<RpLevel>,
    pub mismatches: Vec<RpMismatch>,
    pub route_disagreements: Vec<RouteDisagreement>,
}

impl RpCertificate {
    pub fn is_rp(&self) -> bool {
        self.mismatches.is_empty() && self.route_disagreements.is_empty()
    }

    pub fn level(&self, vertex: Vertex) -> Option<&RpLevel> {
        self.levels.iter().find(|l| l.vertex == vertex)
    }
}

/// Compares `m_i^l` with `b_i(S^l, S^l')` at every level `l` in the image of `f`.
///
/// The relative Betti numbers are computed twice: from the cells added at the
/// step (`S^l \ S^l'`) and from the pair (closed lower star, lower link) of
/// the vertex at that level. Any disagreement is reported separately.
pub fn check_relative_perfectness(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: &GradientField,
    field: FieldChoice,
) -> Result<RpCertificate> {
    let buckets: Vec<(Level, Vec<&Simplex>)> = level_buckets(k, f)?.into_iter().collect();
    let top = k.dimension().max(0) as usize;
    let rows = buckets
        .par_iter()
        .map(|(key, cells)| -> Result<(RpLevel, Option<RouteDisagreement>)> {
            let direct = pad(betti_of_cells(cells.iter().copied(), top, field).ranks, top);
            let star = lower_star(k, f, key.vertex)?.closure();
            let link = lower_link(k, f, key.vertex)?;
            let via_star = pad(relative_betti(&star, &link, field)?.ranks, top);
            let critical = pad(counts_by_dim(v.critical_among(cells.iter().copied()), top as isize), top);
            let disagreement = (direct != via_star).then(|| RouteDisagreement {
                vertex: key.vertex,
                filtration: direct.clone(),
                lower_star: via_star,
            });
            Ok((
                RpLevel { vertex: key.vertex, value: key.value, predecessor: f64::NAN, critical, betti: direct },
                disagreement,
            ))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut cert = RpCertificate {
        field,
        relatively_perfect: false,
        levels: Vec::with_capacity(rows.len()),
        mismatches: Vec::new(),
        route_disagreements: Vec::new(),
    };
    let mut previous: Option<f64> = None;
    for (mut row, disagreement) in rows {
        // with repeated raw values the previous step has the same value
        row.predecessor = previous.unwrap_or(row.value - 1.0);
        previous = Some(row.value);
        for (i, (&m, &b)) in row.critical.iter().zip(&row.betti).enumerate() {
            if m != b {
                cert.mismatches.push(RpMismatch {
                    vertex: row.vertex,
                    level: row.value,
                    predecessor: row.predecessor,
                    dim: i,
                    critical: m,
                    betti: b,
                });
            }
        }
        cert.route_disagreements.extend(disagreement);
        cert.levels.push(row);
    }
    cert.relatively_perfect = cert.is_rp();
    Ok(cert)
}

fn pad(mut v: Vec<usize>, top: usize) -> Vec<usize> {
    v.resize(top + 1, 0);
    v
}
