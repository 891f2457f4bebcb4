//! Full analysis reports and colored mesh export.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use crate::complex::{Simplex, SimplicialComplex, Vertex, VertexScalarField};
use crate::correspond::{correspondence, verify_correspondence, CorrespondenceCertificate, CorrespondenceMap};
use crate::error::Result;
use crate::gvf::{
    check_relative_perfectness, check_weak_morse, closed_path, morse_profile, validate_matching, GradientField,
    MorseProfile, RpCertificate, Violation, WeakMorseReport,
};
use crate::homology::FieldChoice;
use crate::plcrit::{classify_all, ClassificationReport, ClassifyOptions, CriticalKind};
use crate::rpbuild::{build_rp_gradient_traced, BuildOptions};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalSimplex {
    pub simplex: Simplex,
    pub dim: usize,
    /// Vertex whose level the simplex sits at.
    pub vertex: Vertex,
    pub level: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GradientSummary {
    pub pairs: usize,
    pub valid: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub violations: Vec<Violation>,
    pub acyclic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_path: Option<Vec<(Simplex, Simplex)>>,
    pub critical: Vec<CriticalSimplex>,
    pub profile: MorseProfile,
    pub weak_morse: WeakMorseReport,
}

impl GradientSummary {
    pub fn is_gradient(&self) -> bool {
        self.valid && self.acyclic
    }
}

pub fn gradient_summary(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    v: &GradientField,
    field: FieldChoice,
) -> Result<GradientSummary> {
    let violations = validate_matching(k, v).err().unwrap_or_default();
    let cycle = closed_path(v);
    let mut critical = Vec::new();
    for s in v.critical(k) {
        let key = f.fmax(s)?;
        critical.push(CriticalSimplex { simplex: s.clone(), dim: s.dim(), vertex: key.vertex, level: key.value });
    }
    critical.sort_by(|a, b| {
        (a.level.total_cmp(&b.level))
            .then(a.vertex.cmp(&b.vertex))
            .then(a.dim.cmp(&b.dim))
            .then(a.simplex.cmp(&b.simplex))
    });
    Ok(GradientSummary {
        pairs: v.len(),
        valid: violations.is_empty(),
        violations,
        acyclic: cycle.is_none(),
        closed_path: cycle,
        critical,
        profile: morse_profile(k, f, v)?,
        weak_morse: check_weak_morse(k, v, field),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub dimension: isize,
    pub f_vector: Vec<usize>,
    pub euler_characteristic: i64,
    pub field: FieldChoice,
    pub classification: ClassificationReport,
    /// True when the field was built here rather than supplied.
    pub built: bool,
    pub gradient: GradientSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rp: Option<RpCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correspondence: Option<CorrespondenceMap>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub correspondence_check: Option<CorrespondenceCertificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

impl AnalysisReport {
    /// Agreement of the classifiers, a valid acyclic field, RP, and a clean
    /// correspondence.
    pub fn passes(&self) -> bool {
        self.classification.agreement()
            && self.gradient.is_gradient()
            && self.rp.as_ref().is_some_and(RpCertificate::is_rp)
            && self.correspondence_check.as_ref().is_some_and(CorrespondenceCertificate::is_clean)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct AnalysisOptions {
    pub field: FieldChoice,
    /// Reject complexes that are not combinatorial manifolds.
    pub check_manifold: bool,
    pub timings: bool,
}

/// Classifies, builds a field when none is given, and certifies it.
pub fn analyze(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    supplied: Option<&GradientField>,
    name: Option<String>,
    opts: AnalysisOptions,
) -> Result<AnalysisReport> {
    let mut timings = BTreeMap::new();
    let mut clock = Instant::now();
    let mut lap = |label: &str, timings: &mut BTreeMap<String, f64>| {
        timings.insert(label.to_string(), clock.elapsed().as_secs_f64() * 1e3);
        clock = Instant::now();
    };
    f.check_domain(k)?;
    let classification = if k.is_empty() {
        ClassificationReport { dimension: -1, vertices: Vec::new(), skipped: Vec::new(), disagreements: Vec::new() }
    } else {
        classify_all(k, f, ClassifyOptions { field: opts.field, allow_boundary: !opts.check_manifold })?
    };
    lap("classify", &mut timings);
    let (v, built) = match supplied {
        Some(v) => (v.clone(), false),
        None if k.is_empty() => (GradientField::empty(), true),
        None => {
            let b = build_rp_gradient_traced(k, f, BuildOptions { require_manifold: opts.check_manifold })?;
            (b.field, true)
        }
    };
    lap("build", &mut timings);
    let gradient = gradient_summary(k, f, &v, opts.field)?;
    let (rp, corr, check) = if gradient.is_gradient() {
        let rp = check_relative_perfectness(k, f, &v, opts.field)?;
        let map = correspondence(k, f, &v, opts.field)?;
        let pl_morse = classification.skipped.is_empty() && classification.is_pl_morse();
        let check = verify_correspondence(&map, Some(f), pl_morse && rp.is_rp());
        (Some(rp), Some(map), Some(check))
    } else {
        (None, None, None)
    };
    lap("certify", &mut timings);
    Ok(AnalysisReport {
        name,
        dimension: k.dimension(),
        f_vector: k.f_vector(),
        euler_characteristic: k.euler_characteristic(),
        field: opts.field,
        classification,
        built,
        gradient,
        rp,
        correspondence: corr,
        correspondence_check: check,
        timings_ms: opts.timings.then_some(timings),
    })
}

/// Pretty JSON with a trailing newline; field order is fixed by the types.
pub fn emit_report<T: Serialize>(report: &T) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports always serialize");
    s.push('\n');
    s
}

type Rgba = [u8; 4];

const BLUE: Rgba = [0, 0, 255, 255];
const GREEN: Rgba = [0, 160, 0, 255];
const RED: Rgba = [255, 0, 0, 255];
const GRAY: Rgba = [160, 160, 160, 255];
const LIGHT: Rgba = [220, 220, 220, 255];

pub fn kind_color(kind: Option<CriticalKind>) -> Rgba {
    match kind {
        Some(CriticalKind::Minimum) => BLUE,
        Some(CriticalKind::Saddle) => GREEN,
        Some(CriticalKind::Maximum) => RED,
        Some(CriticalKind::Regular) | None => GRAY,
    }
}

#[derive(Serialize)]
struct AdjacencyVertex {
    id: Vertex,
    value: f64,
    kind: Option<CriticalKind>,
    color: Rgba,
}

#[derive(Serialize)]
struct Adjacency {
    vertices: Vec<AdjacencyVertex>,
    edges: Vec<Simplex>,
    maximal_simplices: Vec<Simplex>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_simplices: Option<Vec<Simplex>>,
}

/// Colors vertices by PL kind (minima blue, saddles green, maxima red,
/// everything else gray).
///
/// Surfaces with coordinates become COFF text with per-vertex colors, plus
/// per-face colors marking critical triangles red when a field is given. Other
/// inputs become a JSON adjacency listing.
pub fn export_colored_mesh(
    k: &SimplicialComplex,
    f: &VertexScalarField,
    coordinates: Option<&[[f64; 3]]>,
    classes: &ClassificationReport,
    field: Option<&GradientField>,
) -> Result<String> {
    let kind = |v: Vertex| classes.verdict(v).map(|x| x.homology.kind);
    let verts = k.vertices();
    match coordinates {
        Some(xyz)
            if k.dimension() == 2
                && xyz.len() == verts.len()
                && verts.iter().enumerate().all(|(i, &v)| v as usize == i) =>
        {
            let tris = k.simplices(2);
            let mut out = String::from("COFF\n");
            let _ = writeln!(out, "{} {} {}", verts.len(), tris.len(), k.count(1));
            for (&v, p) in verts.iter().zip(xyz) {
                let c = kind_color(kind(v));
                let _ = writeln!(out, "{} {} {} {} {} {} {}", p[0], p[1], p[2], c[0], c[1], c[2], c[3]);
            }
            for t in tris {
                let [a, b, c] = [t.vertices()[0], t.vertices()[1], t.vertices()[2]];
                match field {
                    Some(g) => {
                        let col = if g.is_paired(t) { LIGHT } else { RED };
                        let _ = writeln!(out, "3 {a} {b} {c} {} {} {} {}", col[0], col[1], col[2], col[3]);
                    }
                    None => {
                        let _ = writeln!(out, "3 {a} {b} {c}");
                    }
                }
            }
            Ok(out)
        }
        _ => {
            let mut vertices = Vec::with_capacity(verts.len());
            for v in verts {
                vertices.push(AdjacencyVertex { id: v, value: f.value(v)?, kind: kind(v), color: kind_color(kind(v)) });
            }
            let adj = Adjacency {
                vertices,
                edges: k.simplices(1).to_vec(),
                maximal_simplices: k.facets(),
                critical_simplices: field.map(|g| g.critical(k).cloned().collect()),
            };
            Ok(emit_report(&adj))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn projective_plane_report() {
        let (k, f) = fixtures::rp2_six_vertex();
        let r = analyze(&k, &f, None, Some("rp2".into()), AnalysisOptions::default()).unwrap();
        assert!(r.passes());
        assert_eq!(r.classification.critical().count(), 3);
        assert_eq!(r.gradient.critical.len(), 3);
        assert!(r.correspondence.as_ref().unwrap().bijective);
        assert!(r.timings_ms.is_none());
        assert_eq!(
            emit_report(&r),
            emit_report(&analyze(&k, &f, None, Some("rp2".into()), AnalysisOptions::default()).unwrap())
        );
    }

    #[test]
    fn empty_complex_report() {
        let k = SimplicialComplex::empty();
        let f = VertexScalarField::default();
        let r = analyze(&k, &f, None, None, AnalysisOptions::default()).unwrap();
        assert!(r.classification.vertices.is_empty());
        assert!(r.gradient.critical.is_empty());
        assert!(emit_report(&r).contains("\"vertices\": []"));
    }

    #[test]
    fn critical_simplices_are_ordered_by_level() {
        let (k, f) = fixtures::rp2_six_vertex();
        let r = analyze(&k, &f, None, None, AnalysisOptions::default()).unwrap();
        let levels: Vec<f64> = r.gradient.critical.iter().map(|c| c.level).collect();
        assert_eq!(levels, vec![1.0, 4.0, 6.0]);
    }

    #[test]
    fn fan_exports_a_green_saddle() {
        let (k, f) = fixtures::hex_fan();
        let classes = classify_all(&k, &f, ClassifyOptions { allow_boundary: true, ..Default::default() }).unwrap();
        let text = export_colored_mesh(&k, &f, None, &classes, None).unwrap();
        let json: serde_json::Value = serde_json::from_str(&text).unwrap();
        let five = json["vertices"].as_array().unwrap().iter().find(|v| v["id"] == 5).unwrap();
        assert_eq!(five["kind"], "saddle");
        assert_eq!(five["color"], serde_json::json!([0, 160, 0, 255]));
    }

    #[test]
    fn surface_with_coordinates_exports_coff() {
        let k = fixtures::boundary_of_simplex(3);
        let f = VertexScalarField::identity(&k);
        let xyz = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
        let classes = classify_all(&k, &f, ClassifyOptions::default()).unwrap();
        let v = crate::rpbuild::build_rp_gradient(&k, &f).unwrap();
        let text = export_colored_mesh(&k, &f, Some(&xyz), &classes, Some(&v)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "COFF");
        assert_eq!(lines[1], "4 4 6");
        assert_eq!(lines[2], "0 0 0 0 0 255 255");
        assert_eq!(lines[5], "0 0 1 255 0 0 255");
        assert_eq!(lines.iter().filter(|l| l.ends_with("255 0 0 255") && l.starts_with("3 ")).count(), 1);
    }
}
