//! Plain-text model files.
//!
//! ```text
//! # comment
//! algebra dolbeault          (optional; several algebras per file)
//! kind associative           (or lie)
//! degrees
//!   0 : 1
//!   1 : dzb1 dzb2
//! structure
//!   dzb1 dzb2 dzb1^dzb2 1
//! map del_bar 1
//!   dzb1 dzb1^dzb2 -1/2+1*i
//! sl2 e f h
//! J J
//! ```
//!
//! Section headers start in column 1; their entries are indented.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{AlgebraKind, GradedMap, GradedSpace, Sl2Names, StructuredAlgebra};
use crate::linalg::Scalar;
use crate::qdolbeault::ConnectionModel;

pub const DEFAULT_NAME: &str = "main";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelFile {
    pub algebras: Vec<(String, StructuredAlgebra)>,
}

struct Token<'a> {
    column: usize,
    text: &'a str,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<(usize, usize)> = None;
    for (col, (i, c)) in line.char_indices().enumerate() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token { column: s.1 + 1, text: &line[s.0..i] });
                start = None;
            }
            (false, None) => start = Some((i, col)),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token { column: s.1 + 1, text: &line[s.0..] });
    }
    out
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Section {
    None,
    Degrees,
    Structure,
    Map,
}

/// Line, name, shift and `(line, from, to, scalar)` entries.
type PendingMap = (usize, String, i32, Vec<(usize, String, String, Scalar)>);

#[derive(Default)]
struct Pending {
    name: String,
    header_line: usize,
    kind: Option<AlgebraKind>,
    degrees: BTreeMap<i32, Vec<String>>,
    degree_lines: BTreeMap<i32, usize>,
    structure: Vec<(usize, [String; 3], Scalar)>,
    maps: Vec<PendingMap>,
    sl2: Option<(usize, Sl2Names)>,
    j: Option<(usize, String)>,
}

fn err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::ModelFile {
        line,
        column,
        message: message.into(),
    }
}

impl Pending {
    fn build(self) -> Result<(String, StructuredAlgebra)> {
        let kind = self
            .kind
            .ok_or_else(|| err(self.header_line, 1, format!("algebra {:?} lacks a kind line", self.name)))?;
        let space = GradedSpace::new(self.degrees.clone()).map_err(|e| {
            let line = match &e {
                Error::DuplicateLabel(l) => self
                    .degrees
                    .iter()
                    .filter(|(_, ls)| ls.contains(l))
                    .map(|(k, _)| self.degree_lines[k])
                    .max()
                    .unwrap_or(self.header_line),
                _ => self.header_line,
            };
            err(line, 1, e.to_string())
        })?;
        let mut a = StructuredAlgebra::new(space.clone(), kind);
        let locate = |line: usize, l: &str| -> Result<(i32, usize)> {
            space
                .locate(l)
                .ok_or_else(|| err(line, 1, format!("unknown basis label {l:?}")))
        };
        for (line, [i, j, k], c) in &self.structure {
            for l in [i, j, k] {
                locate(*line, l)?;
            }
            a.add_structure_labels(i, j, k, c.clone()).map_err(|e| match e {
                Error::GradingViolation { .. } => err(
                    *line,
                    1,
                    format!("structure triple ({i}, {j}) -> {k} violates the grading"),
                ),
                other => err(*line, 1, other.to_string()),
            })?;
        }
        for (line, name, shift, entries) in &self.maps {
            let mut m = GradedMap::zero(&space, &space, *shift);
            for (eline, from, to, c) in entries {
                let (df, f) = locate(*eline, from)?;
                let (dt, t) = locate(*eline, to)?;
                if dt != df + shift {
                    return Err(err(
                        *eline,
                        1,
                        format!("entry {from} -> {to} of map {name} does not have shift {shift}"),
                    ));
                }
                if !c.is_zero() {
                    m.add_entry(df, f, t, c);
                }
            }
            a.insert_map(name.clone(), m).map_err(|e| err(*line, 1, e.to_string()))?;
        }
        if let Some((line, names)) = self.sl2 {
            for n in [&names.e, &names.f, &names.h] {
                let m = a.map(n).map_err(|_| err(line, 1, format!("sl2 operator {n:?} is not a declared map")))?;
                if m.shift() != 0 {
                    return Err(err(line, 1, format!("sl2 operator {n:?} must have shift 0")));
                }
            }
            a.set_sl2_names(Some(names));
        }
        if let Some((line, j)) = self.j {
            let m = a.map(&j).map_err(|_| err(line, 1, format!("J operator {j:?} is not a declared map")))?;
            if m.shift() != 0 {
                return Err(err(line, 1, format!("J operator {j:?} must have shift 0")));
            }
            a.set_j_name(Some(j));
        }
        Ok((self.name, a))
    }
}

fn pending(cur: &mut Option<Pending>, line: usize) -> &mut Pending {
    cur.get_or_insert_with(|| Pending {
        name: DEFAULT_NAME.to_string(),
        header_line: line,
        ..Pending::default()
    })
}

impl ModelFile {
    pub fn single(a: StructuredAlgebra) -> Self {
        ModelFile {
            algebras: vec![(DEFAULT_NAME.to_string(), a)],
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut done: Vec<(String, StructuredAlgebra)> = Vec::new();
        let mut cur: Option<Pending> = None;
        let mut section = Section::None;
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let content = raw.split('#').next().unwrap_or("");
            let toks = tokens(content);
            if toks.is_empty() {
                continue;
            }
            let indented = content.starts_with(char::is_whitespace);
            if indented {
                let p = cur
                    .as_mut()
                    .ok_or_else(|| err(line_no, toks[0].column, "indented entry outside a section"))?;
                match section {
                    Section::None => return Err(err(line_no, toks[0].column, "indented entry outside a section")),
                    Section::Degrees => {
                        let k: i32 = toks[0]
                            .text
                            .parse()
                            .map_err(|_| err(line_no, toks[0].column, format!("malformed degree {:?}", toks[0].text)))?;
                        match toks.get(1) {
                            Some(t) if t.text == ":" => {}
                            Some(t) => return Err(err(line_no, t.column, "expected ':' after the degree")),
                            None => return Err(err(line_no, toks[0].column + toks[0].text.len(), "expected ':' after the degree")),
                        }
                        if p.degrees.contains_key(&k) {
                            return Err(err(line_no, toks[0].column, format!("degree {k} listed twice")));
                        }
                        p.degrees.insert(k, toks[2..].iter().map(|t| t.text.to_string()).collect());
                        p.degree_lines.insert(k, line_no);
                    }
                    Section::Structure => {
                        if toks.len() != 4 {
                            return Err(err(line_no, toks[0].column, "structure entries are 'i j k scalar'"));
                        }
                        let c: Scalar = toks[3].text.parse().map_err(|e: crate::error::ParseScalarError| {
                            err(line_no, toks[3].column, e.to_string())
                        })?;
                        p.structure.push((
                            line_no,
                            [toks[0].text.into(), toks[1].text.into(), toks[2].text.into()],
                            c,
                        ));
                    }
                    Section::Map => {
                        if toks.len() != 3 {
                            return Err(err(line_no, toks[0].column, "map entries are 'from to scalar'"));
                        }
                        let c: Scalar = toks[2].text.parse().map_err(|e: crate::error::ParseScalarError| {
                            err(line_no, toks[2].column, e.to_string())
                        })?;
                        let m = p.maps.last_mut().expect("map section has a header");
                        m.3.push((line_no, toks[0].text.into(), toks[1].text.into(), c));
                    }
                }
                continue;
            }
            let head = &toks[0];
            let arity = |n: usize| -> Result<()> {
                if toks.len() != n + 1 {
                    return Err(err(line_no, head.column, format!("{} takes {n} argument(s)", head.text)));
                }
                Ok(())
            };
            match head.text {
                "algebra" => {
                    arity(1)?;
                    if let Some(p) = cur.take() {
                        done.push(p.build()?);
                    }
                    let name = toks[1].text.to_string();
                    if done.iter().any(|(n, _)| *n == name) {
                        return Err(err(line_no, toks[1].column, format!("algebra {name:?} declared twice")));
                    }
                    cur = Some(Pending {
                        name,
                        header_line: line_no,
                        ..Pending::default()
                    });
                    section = Section::None;
                }
                "kind" => {
                    arity(1)?;
                    let k: AlgebraKind = toks[1]
                        .text
                        .parse()
                        .map_err(|e: Error| err(line_no, toks[1].column, e.to_string()))?;
                    pending(&mut cur, line_no).kind = Some(k);
                    section = Section::None;
                }
                "degrees" => {
                    arity(0)?;
                    pending(&mut cur, line_no);
                    section = Section::Degrees;
                }
                "structure" => {
                    arity(0)?;
                    pending(&mut cur, line_no);
                    section = Section::Structure;
                }
                "map" => {
                    arity(2)?;
                    let shift: i32 = toks[2]
                        .text
                        .parse()
                        .map_err(|_| err(line_no, toks[2].column, format!("malformed shift {:?}", toks[2].text)))?;
                    let p = pending(&mut cur, line_no);
                    let name = toks[1].text.to_string();
                    if p.maps.iter().any(|m| m.1 == name) {
                        return Err(err(line_no, toks[1].column, format!("map {name:?} declared twice")));
                    }
                    p.maps.push((line_no, name, shift, Vec::new()));
                    section = Section::Map;
                }
                "sl2" => {
                    arity(3)?;
                    pending(&mut cur, line_no).sl2 = Some((
                        line_no,
                        Sl2Names {
                            e: toks[1].text.into(),
                            f: toks[2].text.into(),
                            h: toks[3].text.into(),
                        },
                    ));
                    section = Section::None;
                }
                "J" => {
                    arity(1)?;
                    pending(&mut cur, line_no).j = Some((line_no, toks[1].text.into()));
                    section = Section::None;
                }
                other => return Err(err(line_no, head.column, format!("unknown section {other:?}"))),
            }
        }
        if let Some(p) = cur.take() {
            done.push(p.build()?);
        }
        if done.is_empty() {
            return Err(err(1, 1, "file declares no algebra"));
        }
        Ok(ModelFile { algebras: done })
    }

    /// Canonical serialization; `parse(emit())` reproduces the same algebras.
    pub fn emit(&self) -> String {
        let mut out = String::new();
        let named = self.algebras.len() > 1 || self.algebras.iter().any(|(n, _)| n != DEFAULT_NAME);
        for (idx, (name, a)) in self.algebras.iter().enumerate() {
            if idx > 0 {
                out.push('\n');
            }
            if named {
                out.push_str(&format!("algebra {name}\n"));
            }
            out.push_str(&emit_algebra(a));
        }
        out
    }

    pub fn get(&self, name: &str) -> Option<&StructuredAlgebra> {
        self.algebras.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    /// The first algebra, or the one named `dolbeault`.
    pub fn primary(&self) -> &StructuredAlgebra {
        self.get("dolbeault").unwrap_or(&self.algebras[0].1)
    }

    /// `dolbeault` (or the first algebra) with the optional `full` algebra.
    pub fn connection_model(&self) -> Result<ConnectionModel> {
        ConnectionModel::new(self.primary().clone(), self.get("full").cloned())
    }

    pub fn from_connection_model(m: &ConnectionModel) -> Self {
        let mut algebras = vec![("dolbeault".to_string(), m.dolbeault().clone())];
        if let Some(f) = m.full() {
            algebras.push(("full".to_string(), f.clone()));
        }
        ModelFile { algebras }
    }
}

pub fn emit_algebra(a: &StructuredAlgebra) -> String {
    let s = a.space();
    let mut out = format!("kind {}\ndegrees\n", a.kind());
    for k in s.degrees() {
        let labels = s.labels(k);
        if labels.is_empty() {
            out.push_str(&format!("  {k} :\n"));
        } else {
            out.push_str(&format!("  {k} : {}\n", labels.join(" ")));
        }
    }
    let triples = a.structure_triples();
    if !triples.is_empty() {
        out.push_str("structure\n");
        for (i, j, k, c) in triples {
            out.push_str(&format!(
                "  {} {} {} {c}\n",
                s.global_label(i),
                s.global_label(j),
                s.global_label(k)
            ));
        }
    }
    for (name, m) in a.maps() {
        out.push_str(&format!("map {name} {}\n", m.shift()));
        for k in s.degrees() {
            let b = m.block(k);
            for col in 0..b.cols() {
                for row in 0..b.rows() {
                    let c = b.get(row, col);
                    if !c.is_zero() {
                        out.push_str(&format!("  {} {} {c}\n", s.label(k, col), s.label(k + m.shift(), row)));
                    }
                }
            }
        }
    }
    if let Some(n) = a.sl2_names() {
        out.push_str(&format!("sl2 {} {} {}\n", n.e, n.f, n.h));
    }
    if let Some(j) = a.j_name() {
        out.push_str(&format!("J {j}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cone_model, dots_squares_model, torus_model};
    use crate::qdolbeault::autoduality_check;

    #[test]
    fn torus_round_trip() {
        let m = torus_model(1).unwrap();
        let f = ModelFile::from_connection_model(&m);
        let text = f.emit();
        let back = ModelFile::parse(&text).unwrap();
        assert_eq!(back, f);
        assert_eq!(back.emit(), text);
        assert!(autoduality_check(&back.connection_model().unwrap()).unwrap().autodual);
    }

    #[test]
    fn single_algebra_round_trip() {
        let dots = BTreeMap::from([(0, 1), (1, 2)]);
        let b = dots_squares_model(&dots, &[0], 4).unwrap();
        let f = ModelFile::single(b.algebra().clone());
        assert!(!f.emit().contains("algebra "));
        assert_eq!(ModelFile::parse(&f.emit()).unwrap(), f);
        let f = ModelFile::single(cone_model().unwrap());
        assert_eq!(ModelFile::parse(&f.emit()).unwrap(), f);
    }

    #[test]
    fn grading_violation_names_triple() {
        let text = "kind lie\ndegrees\n  1 : u\n  2 : w\nstructure\n  u w w 1\n";
        match ModelFile::parse(text).unwrap_err() {
            Error::ModelFile { line, message, .. } => {
                assert_eq!(line, 6);
                assert!(message.contains("(u, w) -> w"), "{message}");
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn zero_denominator_is_a_parse_error() {
        let text = "kind lie\ndegrees\n  1 : u\n  2 : w\nstructure\n  u u w 1/0\n";
        match ModelFile::parse(text).unwrap_err() {
            Error::ModelFile { line, column, message } => {
                assert_eq!((line, column), (6, 9));
                assert!(message.contains("zero denominator"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn malformed_inputs() {
        for (text, line) in [
            ("kind lie\ndegrees\n  1 u\n", 3),
            ("kind lie\ndegrees\n  1 : u\nmap d 1\n  u v 1\n", 5),
            ("kind lie\nbogus\n", 2),
            ("  1 : u\n", 1),
            ("degrees\n  0 : a\n", 1),
            ("kind lie\ndegrees\n  0 : a\n  1 : a\n", 4),
            ("kind lie\ndegrees\n  0 : a\n  1 : b\nmap d 1\n  b a 1\n", 6),
        ] {
            match ModelFile::parse(text) {
                Err(Error::ModelFile { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
