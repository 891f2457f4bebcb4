//! Acceptance checks, one line per criterion. Runs without the libtest
//! harness and exits non-zero if any criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use plmorse::cli::{run, EXIT_CERTIFICATE, EXIT_OK};
use plmorse::complex::{lower_link, lower_star, sublevel_through};
use plmorse::fixtures;
use plmorse::gvf::{check_relative_perfectness, check_weak_morse, is_acyclic, morse_profile, validate_matching};
use plmorse::homology::{betti, reduced_betti, relative_betti};
use plmorse::io::{read_document, read_field};
use plmorse::plcrit::{
    banchoff_index, classify_all, h_classify, i_classify, l_classify, middle_triangle_count, w_classify, wedge_count,
    ClassifyOptions, CriticalKind,
};
use plmorse::rpbuild::{build_rp_gradient_traced, BuildOptions};
use plmorse::{FieldChoice, GradientField, Simplex, SimplicialComplex, Vertex, VertexScalarField};

type Check = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

const FIELDS: [FieldChoice; 2] = [FieldChoice::Gf2, FieldChoice::Rational];

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fixture_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn load(name: &str) -> (SimplicialComplex, VertexScalarField) {
    read_document(&fixture_path(name), None, None).unwrap().build().unwrap()
}

const FIXTURE_FILES: [&str; 7] = [
    "rp2_6.json",
    "fig2_fan.json",
    "tetra_boundary.json",
    "tetra_boundary.off",
    "boundary_4simplex.json",
    "torus_7x7.json",
    "monkey_saddle.json",
];

/// Every fixture with its own function, files first, then generated ones.
fn corpus() -> Vec<(String, SimplicialComplex, VertexScalarField)> {
    let mut out: Vec<(String, SimplicialComplex, VertexScalarField)> = FIXTURE_FILES
        .iter()
        .map(|n| {
            let (k, f) = load(n);
            (n.to_string(), k, f)
        })
        .collect();
    let with_identity = |name: &str, k: SimplicialComplex| {
        let f = VertexScalarField::identity(&k);
        (name.to_string(), k, f)
    };
    out.push(with_identity("octahedron", fixtures::octahedron()));
    out.push(with_identity("boundary of 3-simplex", fixtures::boundary_of_simplex(3)));
    out.push(with_identity("boundary of 4-simplex", fixtures::boundary_of_simplex(4)));
    out.push(with_identity("torus 3x3", fixtures::torus_grid(3, 3)));
    out.push(with_identity("torus 4x4", fixtures::torus_grid(4, 4)));
    out.push(with_identity("3-torus n=3", fixtures::torus_3d(3)));
    for (name, (k, f)) in [
        ("rp2 (generated)", fixtures::rp2_six_vertex()),
        ("hex fan", fixtures::hex_fan()),
        ("monkey saddle", fixtures::monkey_saddle()),
        ("slope fan", fixtures::slope_fan()),
        ("ramp grid 5", fixtures::ramp_grid(5)),
    ] {
        out.push((name.to_string(), k, f));
    }
    out
}

fn plmorse_cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("plmorse").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn vertex_with_value(f: &VertexScalarField, value: f64) -> Vertex {
    f.iter().find(|&(_, x)| x == value).map(|(v, _)| v).expect("value in image")
}

// ---------------------------------------------------------------------------
// Dense elimination oracle for (relative) simplicial homology.

fn gf2_rank(mut rows: Vec<Vec<bool>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][c]) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[c] {
                for (x, &y) in row.iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn rational_rank(mut rows: Vec<Vec<BigRational>>) -> usize {
    let mut rank = 0;
    let cols = rows.first().map_or(0, Vec::len);
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && !row[c].is_zero() {
                let factor = &row[c] / &pivot[c];
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x -= &factor * y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers of `(k, l)` by ranking every boundary matrix of the quotient
/// chain complex. `l` may be empty.
fn oracle_betti(k: &SimplicialComplex, l: &SimplicialComplex, field: FieldChoice) -> Vec<usize> {
    let top = k.dimension().max(0) as usize;
    let cells: Vec<Vec<Vec<Vertex>>> = (0..=top + 1)
        .map(|d| k.iter().filter(|s| s.dim() == d && !l.contains(s)).map(|s| s.vertices().to_vec()).collect())
        .collect();
    // rank of the boundary from dimension d to d - 1
    let rank = |d: usize| -> usize {
        if d == 0 || cells[d].is_empty() || cells[d - 1].is_empty() {
            return 0;
        }
        let index: BTreeMap<&Vec<Vertex>, usize> = cells[d - 1].iter().enumerate().map(|(i, s)| (s, i)).collect();
        match field {
            FieldChoice::Gf2 => {
                let rows = cells[d]
                    .iter()
                    .map(|s| {
                        let mut row = vec![false; cells[d - 1].len()];
                        for skip in 0..s.len() {
                            let face: Vec<Vertex> =
                                s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                            if let Some(&j) = index.get(&face) {
                                row[j] ^= true;
                            }
                        }
                        row
                    })
                    .collect();
                gf2_rank(rows)
            }
            FieldChoice::Rational => {
                let rows = cells[d]
                    .iter()
                    .map(|s| {
                        let mut row = vec![BigRational::zero(); cells[d - 1].len()];
                        for skip in 0..s.len() {
                            let face: Vec<Vertex> =
                                s.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                            if let Some(&j) = index.get(&face) {
                                let sign = if skip % 2 == 0 { BigRational::one() } else { -BigRational::one() };
                                row[j] += sign;
                            }
                        }
                        row
                    })
                    .collect();
                rational_rank(rows)
            }
        }
    };
    (0..=top).map(|d| cells[d].len() - rank(d) - rank(d + 1)).collect()
}

fn padded(b: &plmorse::homology::BettiVector, len: usize) -> Vec<usize> {
    (0..len as isize).map(|i| b.get(i)).collect()
}

// ---------------------------------------------------------------------------

fn criterion_1() -> Check {
    let (k, f) = load("fig2_fan.json");
    let v = vertex_with_value(&f, 5.0);
    let middle = middle_triangle_count(&k, &f, v).map_err(|e| e.to_string())?;
    ensure!(middle == 4, "middle-triangle count {middle}, expected 4");
    let iota = banchoff_index(&k, &f, v).map_err(|e| e.to_string())?;
    ensure!(iota == -1, "index {iota}, expected -1");
    let wedges = wedge_count(&k, &f, v).map_err(|e| e.to_string())?;
    ensure!(wedges == 2, "wedge count {wedges}, expected 2");
    let star = lower_star(&k, &f, v).unwrap().closure();
    let link = lower_link(&k, &f, v).unwrap();
    for field in FIELDS {
        let rel = relative_betti(&star, &link, field).unwrap();
        ensure!(padded(&rel, 3) == vec![0, 1, 0], "relative Betti {:?} over {field:?}", padded(&rel, 3));
        let red = reduced_betti(&link, field);
        ensure!(padded(&red, 2) == vec![1, 0], "reduced link Betti {:?} over {field:?}", padded(&red, 2));
    }
    let verdicts = [
        ("I", i_classify(&k, &f, v)),
        ("W", w_classify(&k, &f, v)),
        ("H", h_classify(&k, &f, v, FieldChoice::Gf2)),
        ("L", l_classify(&k, &f, v, FieldChoice::Gf2)),
        ("H/Q", h_classify(&k, &f, v, FieldChoice::Rational)),
        ("L/Q", l_classify(&k, &f, v, FieldChoice::Rational)),
    ];
    for (name, c) in verdicts {
        let c = c.map_err(|e| format!("{name}: {e}"))?;
        ensure!(
            c.kind == CriticalKind::Saddle && c.index() == Some(1) && c.total_multiplicity() == 1,
            "{name} gives {:?} index {:?} multiplicity {}",
            c.kind,
            c.index(),
            c.total_multiplicity()
        );
    }
    Ok(format!("vertex {v}: middle=4, iota=-1, W=2, rel b1=1, link rb0=1; I, W, H, L all saddle of index 1"))
}

fn criterion_2() -> Check {
    let surfaces = [
        ("boundary of 3-simplex", fixtures::boundary_of_simplex(3)),
        ("torus 7x7", fixtures::torus_grid(7, 7)),
        ("rp2", fixtures::rp2_six_vertex().0),
    ];
    let mut functions = 0;
    let mut vertices = 0;
    for (name, k) in &surfaces {
        for seed in 0..200u64 {
            let f = fixtures::random_injective_field(k, seed);
            for field in FIELDS {
                let report =
                    classify_all(k, &f, ClassifyOptions { field, allow_boundary: false }).map_err(|e| e.to_string())?;
                ensure!(report.skipped.is_empty(), "{name} seed {seed}: skipped vertices");
                for verdict in &report.vertices {
                    let all: Vec<_> = verdict.all().collect();
                    ensure!(
                        all.len() == 4,
                        "{name} seed {seed}: {} definitions at vertex {}",
                        all.len(),
                        verdict.vertex
                    );
                    ensure!(
                        verdict.agree()
                            && all
                                .windows(2)
                                .all(|w| w[0].multiplicities == w[1].multiplicities && w[0].kind == w[1].kind),
                        "{name} seed {seed}: disagreement at vertex {}",
                        verdict.vertex
                    );
                    vertices += 1;
                }
                ensure!(
                    report.disagreements.is_empty(),
                    "{name} seed {seed}: {} disagreements",
                    report.disagreements.len()
                );
            }
            functions += 1;
        }
    }
    let solids = [("boundary of 4-simplex", fixtures::boundary_of_simplex(4)), ("3-torus n=3", fixtures::torus_3d(3))];
    for (name, k) in &solids {
        for seed in 0..25u64 {
            let f = fixtures::random_injective_field(k, seed);
            for field in FIELDS {
                for v in k.vertices() {
                    let h = h_classify(k, &f, v, field).map_err(|e| format!("{name}: {e}"))?;
                    let l = l_classify(k, &f, v, field).map_err(|e| format!("{name}: {e}"))?;
                    ensure!(
                        h.multiplicities == l.multiplicities && h.kind == l.kind,
                        "{name} seed {seed} vertex {v}: H {:?} vs L {:?}",
                        h.multiplicities,
                        l.multiplicities
                    );
                    vertices += 1;
                }
            }
            functions += 1;
        }
    }
    Ok(format!("{functions} functions, {vertices} vertex verdicts, 0 disagreements"))
}

fn criterion_3() -> Check {
    let input = fixture_path("rp2_6.json");
    let dir = tempfile::tempdir().unwrap();
    let field_path = dir.path().join("rp2.field.json");
    let (code, _, err) = plmorse_cli(&["-q", "-o", field_path.to_str().unwrap(), "build", input.to_str().unwrap()]);
    ensure!(code == EXIT_OK, "build exited {code}: {err}");
    let (k, f) = load("rp2_6.json");
    let v = read_field(&field_path).map_err(|e| e.to_string())?;
    let mut critical: Vec<(usize, f64, Simplex)> =
        v.critical(&k).map(|s| (s.dim(), f.fmax(s).unwrap().value, s.clone())).collect();
    critical.sort_by_key(|a| a.0);
    let shape: Vec<(usize, f64)> = critical.iter().map(|(d, x, _)| (*d, *x)).collect();
    ensure!(shape == vec![(0, 1.0), (1, 4.0), (2, 6.0)], "critical simplices (dim, level) = {shape:?}");

    let (code, out, err) =
        plmorse_cli(&["-q", "--field", "gf2", "verify", input.to_str().unwrap(), field_path.to_str().unwrap()]);
    ensure!(code == EXIT_OK, "verify exited {code}: {err}");
    let verified: Value = serde_json::from_str(&out).unwrap();
    ensure!(verified["rp"]["relatively_perfect"] == true, "verify did not certify RP");

    let (code, out, err) = plmorse_cli(&["-q", "correspond", input.to_str().unwrap(), field_path.to_str().unwrap()]);
    ensure!(code == EXIT_OK, "correspond exited {code}: {err}");
    let map: Value = serde_json::from_str(&out).unwrap();
    ensure!(map["correspondence"]["bijective"] == true, "correspondence is not bijective");
    let pl_critical: BTreeSet<Vertex> = classify_all(&k, &f, ClassifyOptions::default())
        .map_err(|e| e.to_string())?
        .critical()
        .map(|c| c.vertex)
        .collect();
    ensure!(pl_critical.len() == 3, "{} PL critical vertices", pl_critical.len());
    let entries = map["correspondence"]["entries"].as_array().unwrap();
    let mut matched = BTreeSet::new();
    for e in entries {
        let vertex = e["vertex"].as_u64().unwrap() as Vertex;
        let simplices = e["simplices"].as_array().unwrap();
        ensure!(simplices.len() == 1 && e["multiplicity"] == 1, "entry at vertex {vertex} is not one-to-one");
        let s: Vec<Vertex> = serde_json::from_value(simplices[0].clone()).unwrap();
        ensure!(s.contains(&vertex), "critical simplex {s:?} does not contain vertex {vertex}");
        matched.insert(vertex);
    }
    ensure!(matched == pl_critical, "matched vertices {matched:?} vs PL critical {pl_critical:?}");
    let listed: Vec<String> = critical.iter().map(|(_, _, s)| s.to_string()).collect();
    Ok(format!("critical {}; RP over GF2; bijection with vertices {matched:?}", listed.join(" ")))
}

fn criterion_4() -> Check {
    let input = fixture_path("fig2_fan.json");
    let field = fixture_path("fig3c_field.json");
    let (code, out, err) = plmorse_cli(&["verify", input.to_str().unwrap(), field.to_str().unwrap()]);
    ensure!(code == EXIT_CERTIFICATE, "verify exited {code}, expected {EXIT_CERTIFICATE}");
    let report: Value = serde_json::from_str(&out).unwrap();
    let mismatches = report["rp"]["mismatches"].as_array().ok_or("no mismatch list")?;
    let hit = mismatches.iter().any(|m| {
        m["level"] == 5.0 && m["predecessor"] == 3.0 && m["dim"] == 0 && m["critical"] == 1 && m["betti"] == 0
    });
    ensure!(hit, "no m_0 = 1 vs beta_0 = 0 mismatch at level 5 against 3: {mismatches:?}");
    let line = "m_0 = 1 but beta_0(S^5, S^3) = 0";
    ensure!(err.contains(line), "stderr lacks the mismatch line");
    Ok(format!("exit 1, \"{line}\""))
}

fn criterion_5() -> Check {
    let spaces = [
        ("S2 octahedron", fixtures::octahedron()),
        ("T2 torus 7x7", fixtures::torus_grid(7, 7)),
        ("RP2", fixtures::rp2_six_vertex().0),
        ("boundary of 4-simplex", fixtures::boundary_of_simplex(4)),
    ];
    let mut builds = 0;
    for (name, k) in &spaces {
        for seed in 0..100u64 {
            let f = fixtures::random_injective_field(k, seed);
            let built = build_rp_gradient_traced(k, &f, BuildOptions::default())
                .map_err(|e| format!("{name} seed {seed}: {e}"))?;
            let v = &built.field;
            ensure!(validate_matching(k, v).is_ok(), "{name} seed {seed}: invalid matching");
            ensure!(is_acyclic(v), "{name} seed {seed}: closed V-path");
            for field in FIELDS {
                let cert = check_relative_perfectness(k, &f, v, field).map_err(|e| e.to_string())?;
                ensure!(
                    cert.mismatches.is_empty() && cert.is_rp(),
                    "{name} seed {seed}: {} mismatches",
                    cert.mismatches.len()
                );
            }
            let profile = morse_profile(k, &f, v).map_err(|e| e.to_string())?;
            let d = k.dimension() as usize;
            for step in &built.steps {
                let vtx = step.vertex;
                let link = lower_link(k, &f, vtx).unwrap();
                let star_counts = &profile.at(vtx).unwrap().counts;
                let m = |i: usize| star_counts.get(i).copied().unwrap_or(0);
                let w = padded(&betti(&link, FieldChoice::Gf2), d);
                ensure!(
                    step.link_counts == w,
                    "{name} seed {seed} vertex {vtx}: link field {:?} not perfect ({w:?})",
                    step.link_counts
                );
                if link.is_empty() {
                    ensure!(
                        m(0) == 1 && (1..=d).all(|i| m(i) == 0),
                        "{name} seed {seed} vertex {vtx}: minimum counts {star_counts:?}"
                    );
                } else {
                    ensure!(m(0) == 0, "{name} seed {seed} vertex {vtx}: critical vertex above a non-empty link");
                    ensure!(m(1) + 1 == w[0], "{name} seed {seed} vertex {vtx}: m1 = {} but link m0 = {}", m(1), w[0]);
                    for i in 2..=d {
                        ensure!(
                            m(i) == w[i - 1],
                            "{name} seed {seed} vertex {vtx}: m{i} = {} but link m{} = {}",
                            m(i),
                            i - 1,
                            w[i - 1]
                        );
                    }
                }
                ensure!(
                    step.star_counts == *star_counts && step.counts_consistent(),
                    "{name} seed {seed}: trace disagrees"
                );
            }
            builds += 1;
        }
    }
    Ok(format!("{builds} builds valid, acyclic, RP over GF2 and Q, per-vertex counts shifted from the link"))
}

fn criterion_6() -> Check {
    let mut pairs: Vec<(String, SimplicialComplex, SimplicialComplex)> = Vec::new();
    for (name, k, f) in corpus() {
        if k.len() > 200 {
            continue;
        }
        pairs.push((name.clone(), k.clone(), SimplicialComplex::empty()));
        let order = f.ordered_vertices();
        for (i, &v) in order.iter().enumerate() {
            let star = lower_star(&k, &f, v).unwrap().closure();
            let link = lower_link(&k, &f, v).unwrap();
            pairs.push((format!("{name} lower star of {v}"), star, link.clone()));
            pairs.push((format!("{name} lower link of {v}"), link, SimplicialComplex::empty()));
            let upper = sublevel_through(&k, &f, f.key(v).unwrap()).unwrap();
            let lower = match i {
                0 => SimplicialComplex::empty(),
                _ => sublevel_through(&k, &f, f.key(order[i - 1]).unwrap()).unwrap(),
            };
            pairs.push((format!("{name} sublevel step at {v}"), upper, lower));
        }
    }
    let mut checked = 0;
    for (name, k, l) in &pairs {
        let len = k.dimension().max(0) as usize + 1;
        for field in FIELDS {
            let expected = oracle_betti(k, l, field);
            let got =
                if l.is_empty() { betti(k, field) } else { relative_betti(k, l, field).map_err(|e| e.to_string())? };
            ensure!(
                padded(&got, len) == expected,
                "{name} over {field:?}: {:?} vs oracle {expected:?}",
                padded(&got, len)
            );
            if !l.is_empty() {
                let via_relative = relative_betti(k, &SimplicialComplex::empty(), field).map_err(|e| e.to_string())?;
                ensure!(
                    padded(&via_relative, len) == oracle_betti(k, &SimplicialComplex::empty(), field),
                    "{name}: relative to empty"
                );
            }
            checked += 1;
        }
    }
    let (rp2, _) = load("rp2_6.json");
    let gf2 = oracle_betti(&rp2, &SimplicialComplex::empty(), FieldChoice::Gf2);
    let q = oracle_betti(&rp2, &SimplicialComplex::empty(), FieldChoice::Rational);
    ensure!(gf2 == vec![1, 1, 1] && q == vec![1, 0, 0], "RP2 oracle {gf2:?} / {q:?}");
    ensure!(padded(&betti(&rp2, FieldChoice::Gf2), 3) == gf2, "RP2 over GF2");
    ensure!(padded(&betti(&rp2, FieldChoice::Rational), 3) == q, "RP2 over Q");
    Ok(format!("{checked} (pair, field) computations match; RP2 gives {gf2:?} over GF2 and {q:?} over Q"))
}

fn criterion_7() -> Check {
    let mut vertices = 0;
    for (name, k, f) in corpus() {
        let top = k.dimension().max(0) + 1;
        for v in k.vertices() {
            let star = lower_star(&k, &f, v).unwrap().closure();
            let link = lower_link(&k, &f, v).unwrap();
            for field in FIELDS {
                let rel = relative_betti(&star, &link, field).map_err(|e| e.to_string())?;
                let red = reduced_betti(&link, field);
                for i in 0..=top {
                    ensure!(
                        rel.get(i) == red.get(i - 1),
                        "{name} vertex {v} degree {i} over {field:?}: {} vs {}",
                        rel.get(i),
                        red.get(i - 1)
                    );
                }
            }
            vertices += 1;
        }
    }
    Ok(format!("{vertices} vertices across all fixtures, both fields"))
}

fn criterion_8() -> Check {
    let surfaces = [
        ("S2 boundary of 3-simplex", fixtures::boundary_of_simplex(3), 2),
        ("S2 octahedron", fixtures::octahedron(), 2),
        ("T2 torus 7x7", fixtures::torus_grid(7, 7), 0),
        ("RP2", fixtures::rp2_six_vertex().0, 1),
    ];
    let mut functions = 0;
    for (name, k, chi) in &surfaces {
        ensure!(k.euler_characteristic() == *chi, "{name}: chi = {}", k.euler_characteristic());
        let mut fields: Vec<VertexScalarField> = (0..100u64).map(|s| fixtures::random_injective_field(k, s)).collect();
        fields.push(VertexScalarField::identity(k));
        for f in &fields {
            let total: i64 = k.vertices().iter().map(|&v| banchoff_index(k, f, v).unwrap()).sum();
            ensure!(total == *chi, "{name}: index sum {total}, expected {chi}");
            functions += 1;
        }
    }
    let (torus_file, f) = load("torus_7x7.json");
    let total: i64 = torus_file.vertices().iter().map(|&v| banchoff_index(&torus_file, &f, v).unwrap()).sum();
    ensure!(total == 0, "torus fixture file: index sum {total}");
    Ok(format!("{} functions, sums equal 2, 2, 0, 1", functions + 1))
}

fn criterion_9() -> Check {
    let mut cases: Vec<(String, SimplicialComplex, VertexScalarField)> =
        corpus().into_iter().filter(|(_, k, _)| (1..=3).contains(&k.dimension())).collect();
    for (name, k) in [
        ("octahedron", fixtures::octahedron()),
        ("torus 7x7", fixtures::torus_grid(7, 7)),
        ("rp2", fixtures::rp2_six_vertex().0),
        ("boundary of 4-simplex", fixtures::boundary_of_simplex(4)),
    ] {
        for seed in 0..25u64 {
            cases.push((format!("{name} seed {seed}"), k.clone(), fixtures::random_injective_field(&k, seed)));
        }
    }
    let mut fields_checked = 0;
    for (name, k, f) in &cases {
        let built = build_rp_gradient_traced(k, f, BuildOptions { require_manifold: false })
            .map_err(|e| format!("{name}: {e}"))?;
        let v: &GradientField = &built.field;
        let profile = morse_profile(k, f, v).map_err(|e| e.to_string())?;
        let order = f.ordered_vertices();
        let len = k.dimension() as usize + 1;
        for field in FIELDS {
            let weak = check_weak_morse(k, v, field);
            ensure!(weak.holds, "{name} over {field:?}: weak Morse fails");
            let total = padded(&betti(k, field), len);
            for (i, row) in weak.rows.iter().enumerate() {
                ensure!(row.critical >= total[i], "{name}: m_{i} = {} < b_{i} = {}", row.critical, total[i]);
            }
            for (i, &u) in order.iter().enumerate() {
                let upper = sublevel_through(k, f, f.key(u).unwrap()).unwrap();
                let lower = match i {
                    0 => SimplicialComplex::empty(),
                    _ => sublevel_through(k, f, f.key(order[i - 1]).unwrap()).unwrap(),
                };
                let mut b = oracle_betti(&upper, &lower, field);
                b.resize(len, 0);
                let m = &profile.at(u).unwrap().counts;
                let m: Vec<usize> = (0..len).map(|j| m.get(j).copied().unwrap_or(0)).collect();
                ensure!(m == b, "{name} over {field:?} level of vertex {u}: m = {m:?} but relative b = {b:?}");
            }
        }
        fields_checked += 1;
    }
    Ok(format!("{fields_checked} built fields; m_i >= b_i and level-wise equality over GF2 and Q"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("saddle on the hexagonal fan", criterion_1),
        ("equivalence of the four definitions", criterion_2),
        ("projective plane end to end", criterion_3),
        ("non-perfect field negative control", criterion_4),
        ("relatively perfect construction", criterion_5),
        ("homology against a dense oracle", criterion_6),
        ("lower star versus lower link", criterion_7),
        ("index sum equals Euler characteristic", criterion_8),
        ("weak Morse inequalities", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("criterion {} PASS  {name}: {detail} ({ms} ms)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} FAIL  {name}: {detail} ({ms} ms)", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
