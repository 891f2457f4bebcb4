//! Small named complexes and functions used by tests, benchmarks and the CLI.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::complex::{Simplex, SimplicialComplex, Vertex, VertexScalarField};
use crate::gvf::GradientField;

/// Boundary of the `n`-simplex on vertices `0..=n`, a combinatorial `(n-1)`-sphere.
pub fn boundary_of_simplex(n: u32) -> SimplicialComplex {
    SimplicialComplex::from_maximal((0..=n).map(|skip| (0..=n).filter(move |&v| v != skip))).expect("valid simplices")
}

/// Octahedron: the 6-vertex 2-sphere, antipodal pairs (0,1), (2,3), (4,5).
pub fn octahedron() -> SimplicialComplex {
    let mut tris = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                tris.push([a, b, c]);
            }
        }
    }
    SimplicialComplex::from_maximal(tris).expect("valid simplices")
}

/// The 6-vertex real projective plane with `f(v) = v + 1`.
///
/// A hexagon with antipodal boundary points identified; vertex `v` carries
/// the label `v + 1`.
pub fn rp2_six_vertex() -> (SimplicialComplex, VertexScalarField) {
    const LABELLED: [[u32; 3]; 10] =
        [[2, 5, 6], [6, 4, 3], [4, 5, 2], [4, 2, 3], [3, 2, 1], [5, 3, 1], [5, 6, 3], [2, 6, 1], [4, 6, 1], [4, 5, 1]];
    let k =
        SimplicialComplex::from_maximal(LABELLED.iter().map(|t| t.iter().map(|&l| l - 1))).expect("valid simplices");
    let f = VertexScalarField::from_slice(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).expect("finite");
    (k, f)
}

pub(crate) fn grid_id(i: u32, j: u32, cols: u32) -> Vertex {
    i * cols + j
}

/// `rows x cols` periodic grid, each square split along its main diagonal.
/// Needs `rows, cols >= 3` to be a simplicial torus.
pub fn torus_grid(rows: u32, cols: u32) -> SimplicialComplex {
    let mut tris = Vec::new();
    for i in 0..rows {
        for j in 0..cols {
            let a = grid_id(i, j, cols);
            let b = grid_id((i + 1) % rows, j, cols);
            let c = grid_id(i, (j + 1) % cols, cols);
            let d = grid_id((i + 1) % rows, (j + 1) % cols, cols);
            tris.push([a, b, d]);
            tris.push([a, c, d]);
        }
    }
    SimplicialComplex::from_maximal(tris).expect("valid simplices")
}

/// Freudenthal triangulation of the `n x n x n` periodic cube, a 3-torus.
pub fn torus_3d(n: u32) -> SimplicialComplex {
    const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    let id = |p: [u32; 3]| (p[0] % n) * n * n + (p[1] % n) * n + (p[2] % n);
    let mut tets = Vec::new();
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                for perm in PERMS {
                    let mut p = [x, y, z];
                    let mut tet = vec![id(p)];
                    for axis in perm {
                        p[axis] += 1;
                        tet.push(id(p));
                    }
                    tets.push(tet);
                }
            }
        }
    }
    SimplicialComplex::from_maximal(tets).expect("valid simplices")
}

/// A saddle star: a hexagonal fan around
/// vertex 5, rim `2, 1, 7, 3, 8, 6` in cyclic order. Vertex ids equal their values.
pub fn hex_fan() -> (SimplicialComplex, VertexScalarField) {
    let rim = [2, 1, 7, 3, 8, 6];
    let k = SimplicialComplex::from_maximal((0..6).map(|i| [5, rim[i], rim[(i + 1) % 6]])).expect("valid simplices");
    let f = VertexScalarField::identity(&k);
    (k, f)
}

/// Hexagonal bipyramid (a 2-sphere): centre 0, rim `1..=6` in cyclic order, apex 7.
fn hex_bipyramid() -> SimplicialComplex {
    let mut tris = Vec::new();
    for i in 0..6u32 {
        let a = 1 + i;
        let b = 1 + (i + 1) % 6;
        tris.push([0, a, b]);
        tris.push([7, a, b]);
    }
    SimplicialComplex::from_maximal(tris).expect("valid simplices")
}

/// A 2-sphere whose vertex 0 is a monkey saddle: its rim alternates low and
/// high values, so the lower link is three isolated vertices.
pub fn monkey_saddle() -> (SimplicialComplex, VertexScalarField) {
    let k = hex_bipyramid();
    let f = VertexScalarField::from_slice(&[10.0, 1.0, 20.0, 2.0, 21.0, 3.0, 22.0, 30.0]).expect("finite");
    (k, f)
}

/// Same sphere with a regular centre: the rim increases monotonically, so the
/// lower link of vertex 0 is one arc.
pub fn slope_fan() -> (SimplicialComplex, VertexScalarField) {
    let k = hex_bipyramid();
    let f = VertexScalarField::from_slice(&[3.5, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]).expect("finite");
    (k, f)
}

/// `n x n` planar grid (a disk) with the tilted-plane height `f = i + 0.01 j`
/// perturbed by vertex id so it is injective.
pub fn ramp_grid(n: u32) -> (SimplicialComplex, VertexScalarField) {
    let mut tris = Vec::new();
    for i in 0..n - 1 {
        for j in 0..n - 1 {
            let a = grid_id(i, j, n);
            let b = grid_id(i + 1, j, n);
            let c = grid_id(i, j + 1, n);
            let d = grid_id(i + 1, j + 1, n);
            tris.push([a, b, d]);
            tris.push([a, c, d]);
        }
    }
    let k = SimplicialComplex::from_maximal(tris).expect("valid simplices");
    let f = VertexScalarField::new(
        (0..n).flat_map(|i| (0..n).map(move |j| (grid_id(i, j, n), f64::from(i) + 0.1 * f64::from(j)))),
    )
    .expect("finite");
    (k, f)
}

/// Interior vertices of [`ramp_grid`].
pub fn ramp_grid_interior(n: u32) -> Vec<Vertex> {
    (1..n - 1).flat_map(|i| (1..n - 1).map(move |j| grid_id(i, j, n))).collect()
}

/// The values `1..=n` assigned to the vertices of `k` in a seeded random order.
pub fn random_injective_field(k: &SimplicialComplex, seed: u64) -> VertexScalarField {
    let verts = k.vertices();
    let mut values: Vec<f64> = (1..=verts.len()).map(|x| x as f64).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    values.shuffle(&mut rng);
    VertexScalarField::new(verts.into_iter().zip(values)).expect("finite")
}

fn pair(tail: &[Vertex], head: &[Vertex]) -> (Simplex, Simplex) {
    (
        Simplex::new(tail.iter().copied()).expect("valid simplex"),
        Simplex::new(head.iter().copied()).expect("valid simplex"),
    )
}

/// A relatively perfect gradient field on the closed fan.
pub fn hex_fan_rp_field() -> GradientField {
    GradientField::new([
        pair(&[2], &[1, 2]),
        pair(&[2, 5], &[1, 2, 5]),
        pair(&[5], &[1, 5]),
        pair(&[5, 7], &[1, 5, 7]),
        pair(&[3, 7], &[3, 5, 7]),
        pair(&[3, 8], &[3, 5, 8]),
        pair(&[5, 8], &[5, 6, 8]),
        pair(&[8], &[6, 8]),
        pair(&[6], &[2, 6]),
        pair(&[5, 6], &[2, 5, 6]),
        pair(&[1], &[1, 7]),
    ])
}

/// A field on the fan that is not relatively perfect: four pairs inside the
/// sublevel set of 5, completed on the lower stars of 6, 7 and 8 by coning.
pub fn hex_fan_non_rp_field() -> GradientField {
    GradientField::new([
        pair(&[2, 5], &[1, 2, 5]),
        pair(&[2], &[1, 2]),
        pair(&[3], &[3, 5]),
        pair(&[1], &[1, 5]),
        // lower star of 6
        pair(&[6], &[2, 6]),
        pair(&[5, 6], &[2, 5, 6]),
        // lower star of 7
        pair(&[7], &[1, 7]),
        pair(&[5, 7], &[1, 5, 7]),
        pair(&[3, 7], &[3, 5, 7]),
        // lower star of 8
        pair(&[8], &[3, 8]),
        pair(&[5, 8], &[3, 5, 8]),
        pair(&[6, 8], &[5, 6, 8]),
    ])
}
