//! Input documents (JSON, OFF with a values sidecar) and gradient field files.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::complex::{Simplex, SimplicialComplex, Vertex, VertexScalarField};
use crate::error::{Error, Result};
use crate::gvf::GradientField;

/// A complex with vertex values, as read from disk.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ComplexDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    /// Expected dimension, checked when the complex is built.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<usize>,
    pub maximal_simplices: Vec<Vec<Vertex>>,
    /// Either one value per referenced vertex, in increasing id order, or a
    /// list indexed by vertex id.
    #[serde(default)]
    pub values: Vec<f64>,
    /// Optional embedding, aligned with `values`. Only used for mesh export.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<[f64; 3]>>,
}

impl ComplexDocument {
    /// Sorted distinct vertex ids referenced by the maximal simplices.
    pub fn referenced_vertices(&self) -> Vec<Vertex> {
        let mut ids: Vec<Vertex> = self.maximal_simplices.iter().flatten().copied().collect();
        ids.sort_unstable();
        ids.dedup();
        ids
    }

    /// Renumbers vertices to `0..n` in increasing id order and aligns the
    /// values (and coordinates) with the new ids.
    pub fn normalized(&self) -> Result<ComplexDocument> {
        let ids = self.referenced_vertices();
        let n = ids.len();
        let rank: BTreeMap<Vertex, Vertex> = ids.iter().enumerate().map(|(i, &v)| (v, i as Vertex)).collect();
        let pick = |len: usize, what: &str| -> Result<Vec<usize>> {
            if len == n {
                Ok((0..n).collect())
            } else if ids.last().is_some_and(|&m| (m as usize) < len) {
                Ok(ids.iter().map(|&v| v as usize).collect())
            } else {
                Err(Error::parse(0, format!("{len} {what} for {n} vertices")))
            }
        };
        let slots = pick(self.values.len(), "values")?;
        let values = slots.iter().map(|&i| self.values[i]).collect();
        let coordinates = match &self.coordinates {
            Some(c) => {
                let slots = pick(c.len(), "coordinates")?;
                Some(slots.iter().map(|&i| c[i]).collect())
            }
            None => None,
        };
        let maximal_simplices = self.maximal_simplices.iter().map(|s| s.iter().map(|v| rank[v]).collect()).collect();
        Ok(ComplexDocument {
            name: self.name.clone(),
            dimension: self.dimension,
            maximal_simplices,
            values,
            coordinates,
        })
    }

    /// The complex and function described by the (normalized) document.
    pub fn build(&self) -> Result<(SimplicialComplex, VertexScalarField)> {
        let doc = self.normalized()?;
        let k = SimplicialComplex::from_maximal(doc.maximal_simplices.iter().map(|s| s.iter().copied()))?;
        if let Some(d) = doc.dimension {
            if k.dimension() != d as isize {
                return Err(Error::Dimension(format!(
                    "document declares dimension {d}, complex has {}",
                    k.dimension()
                )));
            }
        }
        let f = VertexScalarField::from_slice(&doc.values)?;
        Ok((k, f))
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("documents always serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Off,
}

impl Format {
    /// `.off` means OFF, anything else JSON.
    pub fn detect(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("off") => Format::Off,
            _ => Format::Json,
        }
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(Format::Json),
            "off" => Ok(Format::Off),
            other => Err(format!("unknown format `{other}` (expected json or off)")),
        }
    }
}

fn json_error(e: serde_json::Error) -> Error {
    Error::parse(e.line(), e.to_string())
}

pub fn parse_json(text: &str) -> Result<ComplexDocument> {
    serde_json::from_str(text).map_err(json_error)
}

// non-empty lines with comments stripped, numbered from 1
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn number<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse().map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// ASCII OFF triangle mesh plus a values file with one number per line.
pub fn parse_off(off: &str, values: &str) -> Result<ComplexDocument> {
    let mut lines = content_lines(off);
    let (line, header) = lines.next().ok_or_else(|| Error::parse(1, "empty OFF file"))?;
    let mut tokens = header.split_whitespace();
    let magic = tokens.next().unwrap_or("");
    if !magic.ends_with("OFF") {
        return Err(Error::parse(line, format!("expected OFF header, found `{magic}`")));
    }
    let mut rest: Vec<&str> = tokens.collect();
    let mut counts_line = line;
    if rest.is_empty() {
        let (l, c) = lines.next().ok_or_else(|| Error::parse(line + 1, "missing vertex and face counts"))?;
        counts_line = l;
        rest = c.split_whitespace().collect();
    }
    if rest.len() < 2 {
        return Err(Error::parse(counts_line, "expected vertex and face counts"));
    }
    let nv: usize = number(rest[0], counts_line, "vertex count")?;
    let nf: usize = number(rest[1], counts_line, "face count")?;

    let mut last = counts_line;
    let mut coordinates = Vec::with_capacity(nv);
    for i in 0..nv {
        let (l, text) =
            lines.next().ok_or_else(|| Error::parse(last + 1, format!("expected {nv} vertices, found {i}")))?;
        last = l;
        let xs: Vec<&str> = text.split_whitespace().collect();
        if xs.len() < 3 {
            return Err(Error::parse(l, "vertex line needs three coordinates"));
        }
        coordinates.push([
            number(xs[0], l, "coordinate")?,
            number(xs[1], l, "coordinate")?,
            number(xs[2], l, "coordinate")?,
        ]);
    }
    let mut faces = Vec::with_capacity(nf);
    for i in 0..nf {
        let (l, text) =
            lines.next().ok_or_else(|| Error::parse(last + 1, format!("expected {nf} faces, found {i}")))?;
        last = l;
        let xs: Vec<&str> = text.split_whitespace().collect();
        let arity: usize = number(xs[0], l, "face size")?;
        if arity != 3 {
            return Err(Error::parse(l, format!("only triangle faces are supported, found a {arity}-gon")));
        }
        if xs.len() < 4 {
            return Err(Error::parse(l, "face line needs three vertex indices"));
        }
        let mut face = Vec::with_capacity(3);
        for tok in &xs[1..4] {
            let v: usize = number(tok, l, "vertex index")?;
            if v >= nv {
                return Err(Error::parse(l, format!("vertex index {v} out of range (0..{nv})")));
            }
            face.push(v as Vertex);
        }
        faces.push(face);
    }
    if let Some((l, _)) = lines.next() {
        return Err(Error::parse(l, "unexpected data after the last face"));
    }

    let mut vals = Vec::with_capacity(nv);
    let mut last_value_line = 0;
    for (l, text) in content_lines(values) {
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 1 {
            return Err(Error::parse(l, "values file: expected one number per line"));
        }
        vals.push(number::<f64>(toks[0], l, "value").map_err(|e| match e {
            Error::Parse { line, message } => Error::Parse { line, message: format!("values file: {message}") },
            other => other,
        })?);
        last_value_line = l;
    }
    if vals.len() != nv {
        return Err(Error::parse(last_value_line, format!("values file: expected {nv} values, found {}", vals.len())));
    }
    Ok(ComplexDocument {
        name: None,
        dimension: None,
        maximal_simplices: faces,
        values: vals,
        coordinates: Some(coordinates),
    })
}

/// Default sidecar for an OFF file: same stem with extension `.vals`.
pub fn default_values_path(off: &Path) -> PathBuf {
    off.with_extension("vals")
}

/// Reads a document from disk, picking the format from the extension unless given.
pub fn read_document(path: &Path, format: Option<Format>, values: Option<&Path>) -> Result<ComplexDocument> {
    let text = std::fs::read_to_string(path)?;
    match format.unwrap_or_else(|| Format::detect(path)) {
        Format::Json => parse_json(&text),
        Format::Off => {
            let vpath = values.map(Path::to_path_buf).unwrap_or_else(|| default_values_path(path));
            let vtext = std::fs::read_to_string(&vpath)?;
            parse_off(&text, &vtext)
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum FieldFile {
    Pairs(Vec<(Simplex, Simplex)>),
    Wrapped { pairs: Vec<(Simplex, Simplex)> },
}

/// A JSON list of `[tail, head]` pairs, or an object with a `pairs` key.
pub fn parse_field(text: &str) -> Result<GradientField> {
    match serde_json::from_str::<FieldFile>(text) {
        Ok(FieldFile::Pairs(p)) | Ok(FieldFile::Wrapped { pairs: p }) => Ok(GradientField::new(p)),
        Err(_) => {
            // re-run strictly to get a located error message
            serde_json::from_str::<Vec<(Simplex, Simplex)>>(text).map_err(json_error)?;
            unreachable!("strict parse succeeded after untagged parse failed")
        }
    }
}

pub fn read_field(path: &Path) -> Result<GradientField> {
    parse_field(&std::fs::read_to_string(path)?)
}

/// One pair per line.
pub fn field_to_json(v: &GradientField) -> String {
    let list = |s: &Simplex| s.vertices().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
    let mut out = String::from("[\n");
    for (i, (t, h)) in v.pairs().iter().enumerate() {
        let sep = if i + 1 == v.len() { "" } else { "," };
        let _ = writeln!(out, "  [[{}], [{}]]{sep}", list(t), list(h));
    }
    out.push_str("]\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_lone_triangle() {
        let doc = parse_json(r#"{"maximal_simplices": [[0,1,2]], "values": [0.0, 1.0, 2.0]}"#).unwrap();
        let (k, f) = doc.build().unwrap();
        assert_eq!(k.len(), 7);
        assert_eq!(f.value(2).unwrap(), 2.0);
    }

    #[test]
    fn sparse_ids_are_renumbered() {
        let doc = parse_json(r#"{"maximal_simplices": [[10,30],[30,20]], "values": [1, 2, 3]}"#).unwrap();
        let norm = doc.normalized().unwrap();
        assert_eq!(norm.maximal_simplices, vec![vec![0, 2], vec![2, 1]]);
        assert_eq!(norm.values, vec![1.0, 2.0, 3.0]);
        // values indexed by raw id
        let doc = parse_json(r#"{"maximal_simplices": [[1,3]], "values": [9, 1, 9, 3]}"#).unwrap();
        assert_eq!(doc.normalized().unwrap().values, vec![1.0, 3.0]);
        let bad = parse_json(r#"{"maximal_simplices": [[0,1]], "values": [1]}"#).unwrap();
        assert!(matches!(bad.build(), Err(Error::Parse { .. })));
    }

    #[test]
    fn json_errors_carry_lines() {
        let err = parse_json("{\n\"maximal_simplices\": [[0,1]],\n\"values\": [1, }").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let dup = parse_json(r#"{"maximal_simplices": [[0,0]], "values": [1]}"#).unwrap();
        assert!(matches!(dup.build(), Err(Error::MalformedSimplex(_))));
    }

    #[test]
    fn roundtrip() {
        let doc = parse_json(r#"{"name": "t", "maximal_simplices": [[0,1,2]], "values": [0.5, 1, 2]}"#).unwrap();
        assert_eq!(parse_json(&doc.to_json()).unwrap(), doc);
    }

    const TETRA: &str =
        "OFF\n# boundary of the tetrahedron\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 1 2\n3 0 1 3\n3 0 2 3\n3 1 2 3\n";

    #[test]
    fn off_tetrahedron() {
        let doc = parse_off(TETRA, "1\n2\n3\n4\n").unwrap();
        let (k, f) = doc.build().unwrap();
        assert_eq!(k.f_vector(), vec![4, 6, 4]);
        assert_eq!(f.value(3).unwrap(), 4.0);
        assert_eq!(doc.coordinates.as_ref().unwrap()[3], [0.0, 0.0, 1.0]);
    }

    #[test]
    fn off_errors_carry_lines() {
        let e = parse_off("PLY\n", "").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_off("OFF\n4 4 6\n0 0 0\n", "").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 4, .. }), "{e}");
        let e = parse_off("OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2 2\n", "").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 6, .. }), "{e}");
        let e = parse_off(TETRA, "1\n2\n3\n").unwrap_err();
        assert!(e.to_string().contains("expected 4 values, found 3"), "{e}");
        let e = parse_off(TETRA, "1\n2\nx\n4\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }), "{e}");
    }

    #[test]
    fn field_files() {
        let v = parse_field("[[[0],[0,1]], [[1,2],[0,1,2]]]").unwrap();
        assert_eq!(v.len(), 2);
        assert_eq!(parse_field(&field_to_json(&v)).unwrap(), v);
        assert_eq!(parse_field(r#"{"pairs": [[[0],[0,1]]]}"#).unwrap().len(), 1);
        assert!(matches!(parse_field("[[[0],[0,0]]]"), Err(Error::Parse { .. })));
        assert_eq!(field_to_json(&GradientField::empty()), "[\n]\n");
    }
}
