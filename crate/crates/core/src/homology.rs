//! Betti numbers over GF(2) or the rationals, absolute, reduced and relative,
//! from ranks of boundary matrices.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::Result;

/// Coefficient field for homology.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldChoice {
    #[default]
    Gf2,
    Rational,
}

impl fmt::Display for FieldChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldChoice::Gf2 => "gf2",
            FieldChoice::Rational => "rational",
        })
    }
}

impl FromStr for FieldChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "gf2" | "z2" => Ok(FieldChoice::Gf2),
            "rational" | "q" => Ok(FieldChoice::Rational),
            other => Err(format!("unknown field `{other}` (expected gf2 or rational)")),
        }
    }
}

/// Betti numbers `b_0..b_d`; reduced vectors also carry the degree -1 entry.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiVector {
    pub reduced: bool,
    /// Degree -1 entry; only non-zero for the reduced homology of the empty complex.
    pub minus_one: usize,
    pub ranks: Vec<usize>,
}

impl BettiVector {
    /// Entry in degree `i`; zero outside the stored range.
    pub fn get(&self, i: isize) -> usize {
        match i {
            -1 => self.minus_one,
            i if i < 0 => 0,
            i => self.ranks.get(i as usize).copied().unwrap_or(0),
        }
    }

    pub fn total(&self) -> usize {
        self.minus_one + self.ranks.iter().sum::<usize>()
    }

    pub fn is_zero(&self) -> bool {
        self.total() == 0
    }

    /// Alternating sum, degree -1 excluded.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().enumerate().map(|(i, &b)| if i % 2 == 0 { b as i64 } else { -(b as i64) }).sum()
    }
}

pub fn betti(k: &SimplicialComplex, field: FieldChoice) -> BettiVector {
    let cells: Vec<Vec<Simplex>> = (0..=k.dimension()).map(|d| k.simplices(d as usize).to_vec()).collect();
    BettiVector { reduced: false, minus_one: 0, ranks: chain_betti(&cells, field) }
}

pub fn reduced_betti(k: &SimplicialComplex, field: FieldChoice) -> BettiVector {
    if k.is_empty() {
        return BettiVector { reduced: true, minus_one: 1, ranks: Vec::new() };
    }
    let mut b = betti(k, field);
    b.ranks[0] -= 1;
    b.reduced = true;
    b
}

/// Homology of the pair `(k, l)`, from the chain complex spanned by `k \ l`.
pub fn relative_betti(k: &SimplicialComplex, l: &SimplicialComplex, field: FieldChoice) -> Result<BettiVector> {
    l.check_subcomplex_of(k)?;
    let cells: Vec<Vec<Simplex>> = (0..=k.dimension())
        .map(|d| k.simplices(d as usize).iter().filter(|s| !l.contains(s)).cloned().collect())
        .collect();
    Ok(BettiVector { reduced: false, minus_one: 0, ranks: chain_betti(&cells, field) })
}

/// Relative Betti numbers of a pair given directly by its relative cells
/// (`k \ l`). Faces of a cell outside the collection are treated as lying in `l`.
pub(crate) fn betti_of_cells<'a>(
    cells: impl IntoIterator<Item = &'a Simplex>,
    top_dim: usize,
    field: FieldChoice,
) -> BettiVector {
    let mut by_dim: Vec<Vec<Simplex>> = vec![Vec::new(); top_dim + 1];
    for s in cells {
        by_dim[s.dim()].push(s.clone());
    }
    for layer in &mut by_dim {
        layer.sort_unstable();
    }
    BettiVector { reduced: false, minus_one: 0, ranks: chain_betti(&by_dim, field) }
}

fn chain_betti(cells: &[Vec<Simplex>], field: FieldChoice) -> Vec<usize> {
    match field {
        FieldChoice::Gf2 => chain_betti_in::<Gf2>(cells),
        FieldChoice::Rational => chain_betti_in::<BigRational>(cells),
    }
}

fn chain_betti_in<C: Coefficient>(cells: &[Vec<Simplex>]) -> Vec<usize> {
    let top = cells.len();
    // ranks[d] = rank of the boundary map out of degree d
    let mut ranks = vec![0usize; top + 1];
    for d in 1..top {
        let rows: HashMap<&Simplex, usize> = cells[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        let columns: Vec<Column<C>> = cells[d]
            .iter()
            .map(|s| {
                let mut col: Column<C> =
                    s.facets().filter_map(|(pos, f)| rows.get(&f).map(|&r| (r, C::unit(pos % 2 == 1)))).collect();
                col.sort_by_key(|e| e.0);
                col
            })
            .collect();
        ranks[d] = rank(columns, rows.len());
    }
    (0..top).map(|d| cells[d].len() - ranks[d] - ranks[d + 1]).collect()
}

/// Field arithmetic needed by elimination.
pub(crate) trait Coefficient: Clone + fmt::Debug {
    fn zero() -> Self;
    /// `1`, or `-1` when `negative`.
    fn unit(negative: bool) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div(&self, other: &Self) -> Self;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Gf2(bool);

impl Coefficient for Gf2 {
    fn zero() -> Self {
        Gf2(false)
    }
    fn unit(_negative: bool) -> Self {
        Gf2(true)
    }
    fn is_zero(&self) -> bool {
        !self.0
    }
    fn add(&self, other: &Self) -> Self {
        Gf2(self.0 ^ other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Gf2(self.0 && other.0)
    }
    fn neg(&self) -> Self {
        *self
    }
    fn div(&self, other: &Self) -> Self {
        assert!(other.0, "division by zero in GF(2)");
        *self
    }
}

impl Coefficient for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn unit(negative: bool) -> Self {
        if negative {
            -BigRational::one()
        } else {
            BigRational::one()
        }
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div(&self, other: &Self) -> Self {
        debug_assert!(!Zero::is_zero(other));
        self / other
    }
}

type Column<C> = Vec<(usize, C)>;

const DENSE_LIMIT: usize = 4096;

fn rank<C: Coefficient>(columns: Vec<Column<C>>, nrows: usize) -> usize {
    if columns.is_empty() || nrows == 0 {
        return 0;
    }
    if columns.len() * nrows <= DENSE_LIMIT {
        dense_rank(&columns, nrows)
    } else {
        sparse_rank(columns)
    }
}

fn dense_rank<C: Coefficient>(columns: &[Column<C>], nrows: usize) -> usize {
    let ncols = columns.len();
    let mut m = vec![vec![C::zero(); ncols]; nrows];
    for (j, col) in columns.iter().enumerate() {
        for (i, x) in col {
            m[*i][j] = x.clone();
        }
    }
    let mut rank = 0;
    for j in 0..ncols {
        let Some(p) = (rank..nrows).find(|&i| !m[i][j].is_zero()) else { continue };
        m.swap(rank, p);
        let pivot = m[rank][j].clone();
        let (upper, lower) = m.split_at_mut(rank + 1);
        let pivot_row = &upper[rank];
        for row in lower.iter_mut() {
            if row[j].is_zero() {
                continue;
            }
            let factor = row[j].div(&pivot);
            for (x, y) in row[j..].iter_mut().zip(&pivot_row[j..]) {
                *x = x.add(&factor.mul(y).neg());
            }
        }
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    rank
}

/// Column reduction on the lowest non-zero entry. Each reduced column ends up
/// with a distinct pivot row, and the rank is the number of pivots.
fn sparse_rank<C: Coefficient>(columns: Vec<Column<C>>) -> usize {
    let mut pivots: HashMap<usize, Column<C>> = HashMap::new();
    for mut col in columns {
        while let Some((low, x)) = col.last().cloned() {
            match pivots.get(&low) {
                Some(p) => {
                    let factor = x.div(&p.last().expect("pivot columns are non-empty").1).neg();
                    col = axpy(&col, &factor, p);
                }
                None => {
                    pivots.insert(low, col);
                    break;
                }
            }
        }
    }
    pivots.len()
}

// a + factor * b, for row-sorted sparse columns
fn axpy<C: Coefficient>(a: &Column<C>, factor: &C, b: &Column<C>) -> Column<C> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j >= b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i >= a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, factor.mul(&b[j].1)));
            j += 1;
        } else {
            let x = a[i].1.add(&factor.mul(&b[j].1));
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn sphere_betti() {
        let k = fixtures::boundary_of_simplex(3);
        assert_eq!(betti(&k, FieldChoice::Gf2).ranks, vec![1, 0, 1]);
        assert_eq!(betti(&k, FieldChoice::Rational).ranks, vec![1, 0, 1]);
    }

    #[test]
    fn projective_plane_depends_on_field() {
        let (k, _) = fixtures::rp2_six_vertex();
        assert_eq!(betti(&k, FieldChoice::Gf2).ranks, vec![1, 1, 1]);
        assert_eq!(betti(&k, FieldChoice::Rational).ranks, vec![1, 0, 0]);
    }

    #[test]
    fn reduced_conventions() {
        let e = reduced_betti(&SimplicialComplex::empty(), FieldChoice::Gf2);
        assert_eq!((e.get(-1), e.total()), (1, 1));
        let two = SimplicialComplex::from_maximal([[0], [1]]).unwrap();
        let r = reduced_betti(&two, FieldChoice::Gf2);
        assert_eq!((r.get(-1), r.get(0), r.get(1)), (0, 1, 0));
        let path_plus_point = SimplicialComplex::from_maximal([vec![1, 2], vec![3]]).unwrap();
        let r = reduced_betti(&path_plus_point, FieldChoice::Rational);
        assert_eq!(r.ranks, vec![1, 0]);
        assert_eq!(r.minus_one, 0);
    }

    #[test]
    fn relative_trivial_pairs() {
        let k = fixtures::boundary_of_simplex(3);
        assert!(relative_betti(&k, &k, FieldChoice::Gf2).unwrap().is_zero());
        assert_eq!(
            relative_betti(&k, &SimplicialComplex::empty(), FieldChoice::Gf2).unwrap(),
            betti(&k, FieldChoice::Gf2)
        );
        let other = SimplicialComplex::from_maximal([[7, 8]]).unwrap();
        assert!(relative_betti(&k, &other, FieldChoice::Gf2).is_err());
    }

    #[test]
    fn relative_lower_star_of_fan_saddle() {
        let (k, f) = fixtures::hex_fan();
        let v = 5;
        let star = crate::complex::lower_star(&k, &f, v).unwrap().closure();
        let link = crate::complex::lower_link(&k, &f, v).unwrap();
        let b = relative_betti(&star, &link, FieldChoice::Gf2).unwrap();
        assert_eq!(b.ranks, vec![0, 1, 0]);
    }

    #[test]
    fn sparse_and_dense_agree() {
        // boundary of the 3-torus 2-skeleton is big enough to take the sparse path
        let k = fixtures::torus_3d(3);
        let cells: Vec<Vec<Simplex>> = (0..=3).map(|d| k.simplices(d).to_vec()).collect();
        for d in 1..=3 {
            let rows: HashMap<&Simplex, usize> = cells[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
            let cols: Vec<Column<BigRational>> = cells[d]
                .iter()
                .map(|s| {
                    let mut c: Column<BigRational> =
                        s.facets().map(|(p, f)| (rows[&f], BigRational::unit(p % 2 == 1))).collect();
                    c.sort_by_key(|e| e.0);
                    c
                })
                .collect();
            assert_eq!(dense_rank(&cols, rows.len()), sparse_rank(cols.clone()));
        }
        assert_eq!(betti(&k, FieldChoice::Rational).ranks, vec![1, 3, 3, 1]);
        assert_eq!(betti(&k, FieldChoice::Gf2).ranks, vec![1, 3, 3, 1]);
    }
}
