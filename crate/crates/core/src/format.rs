//! Structure files: sectioned key-value text (TOML syntax) holding one
//! structure, optional metadata, an optional brane and sample points.
//!
//! ```text
//! [meta]
//! n = 1
//! base = ["x1"]
//! fiber = ["xi1"]
//! periodic = false
//!
//! [semiflat]
//! J12 = [["1"]]
//! J13 = [["-1"]]
//! J22 = [["0"]]
//! J31 = [["0"]]
//! ```

use crate::gcs::{GCStructure, GcsError};
use crate::kahler::{KahlerError, SemiflatPair};
use crate::matrix::PolyMatrix;
use crate::scalar::{parse_poly, Context, Ctx, GaussRational, ScalarError};
use crate::semiflat::{AdaptedBlocks, BraneDatum};
use serde::Deserialize;
use std::fmt::Write as _;
use std::ops::Range;
use thiserror::Error;
use toml::Spanned;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FormatError {
    #[error("{line}:{col}: {message}")]
    At { line: usize, col: usize, message: String },
    #[error("{0}")]
    Whole(String),
}

impl FormatError {
    pub fn position(&self) -> Option<(usize, usize)> {
        match self {
            FormatError::At { line, col, .. } => Some((*line, *col)),
            FormatError::Whole(_) => None,
        }
    }
}

/// The primary structure held by a file.
#[derive(Clone, Debug, PartialEq)]
pub enum Structure {
    Semiflat(AdaptedBlocks),
    Gcs(GCStructure),
    Kahler(SemiflatPair),
}

impl Structure {
    pub fn section(&self) -> &'static str {
        match self {
            Structure::Semiflat(_) => "semiflat",
            Structure::Gcs(_) => "gcs",
            Structure::Kahler(_) => "kahler",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StructureFile {
    pub n: usize,
    pub chart: Ctx,
    pub structure: Structure,
    pub brane: Option<BraneDatum>,
    /// Base points, one value per leading coordinate.
    pub samples: Vec<Vec<GaussRational>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Entry {
    Int(i64),
    Text(String),
}

type Grid = Spanned<Vec<Spanned<Vec<Spanned<Entry>>>>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeta {
    n: Spanned<usize>,
    base: Option<Spanned<Vec<String>>>,
    fiber: Option<Spanned<Vec<String>>>,
    periodic: Option<bool>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawBlocks {
    J12: Grid,
    J13: Grid,
    J22: Grid,
    J31: Grid,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawGcs {
    rank: Spanned<usize>,
    J1: Grid,
    J2: Grid,
    J3: Grid,
    J4: Grid,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawKahler {
    J12: Grid,
    J13: Grid,
    J22: Grid,
    J31: Grid,
    Jp12: Grid,
    Jp13: Grid,
    Jp22: Grid,
    Jp31: Grid,
    samples: Option<Grid>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawBrane {
    S: Vec<Spanned<usize>>,
    W: Vec<Spanned<usize>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFile {
    meta: Spanned<RawMeta>,
    semiflat: Option<Spanned<RawBlocks>>,
    gcs: Option<Spanned<RawGcs>>,
    kahler: Option<Spanned<RawKahler>>,
    brane: Option<Spanned<RawBrane>>,
}

struct Source<'a> {
    text: &'a str,
}

impl Source<'_> {
    fn line_col(&self, offset: usize) -> (usize, usize) {
        let offset = offset.min(self.text.len());
        let before = &self.text[..offset];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn err(&self, span: Range<usize>, message: impl Into<String>) -> FormatError {
        let (line, col) = self.line_col(span.start);
        FormatError::At { line, col, message: message.into() }
    }

    /// Parses one entry; polynomial errors point inside the string.
    fn entry(&self, ctx: &Ctx, e: &Spanned<Entry>) -> Result<crate::Poly, FormatError> {
        match e.get_ref() {
            Entry::Int(k) => Ok(crate::Poly::int(ctx, *k)),
            Entry::Text(s) => parse_poly(ctx, s).map_err(|err| match err {
                ScalarError::Parse { column, message } => {
                    let (line, col) = self.line_col(e.span().start);
                    FormatError::At { line, col: col + column, message }
                }
                other => self.err(e.span(), other.to_string()),
            }),
        }
    }

    fn matrix(&self, ctx: &Ctx, g: &Grid, rows: usize, cols: usize, name: &str) -> Result<PolyMatrix, FormatError> {
        if g.get_ref().len() != rows {
            return Err(self.err(g.span(), format!("{name} needs {rows} rows, found {}", g.get_ref().len())));
        }
        let mut out = Vec::with_capacity(rows);
        for r in g.get_ref() {
            if r.get_ref().len() != cols {
                return Err(self.err(r.span(), format!("{name} needs {cols} columns, found {}", r.get_ref().len())));
            }
            out.push(r.get_ref().iter().map(|e| self.entry(ctx, e)).collect::<Result<Vec<_>, _>>()?);
        }
        Ok(PolyMatrix::from_rows(ctx, cols, out))
    }

    fn blocks(&self, chart: &Ctx, n: usize, grids: [(&Grid, &str); 4], span: Range<usize>) -> Result<AdaptedBlocks, FormatError> {
        let ms = grids.map(|(g, name)| self.matrix(chart, g, n, n, name));
        let [a, b, c, d] = ms;
        let (a, b, c, d) = (a?, b?, c?, d?);
        AdaptedBlocks::new(chart, &a, &b, &c, &d).map_err(|e| self.err(span, e.to_string()))
    }

    fn samples(&self, chart: &Ctx, g: &Grid) -> Result<Vec<Vec<GaussRational>>, FormatError> {
        let mut out = Vec::new();
        for row in g.get_ref() {
            if row.get_ref().len() > chart.n_vars() {
                return Err(self.err(row.span(), format!("sample has more than {} values", chart.n_vars())));
            }
            let mut pt = Vec::new();
            for e in row.get_ref() {
                let p = self.entry(chart, e)?;
                pt.push(p.as_constant().ok_or_else(|| self.err(e.span(), "sample values must be constants"))?);
            }
            out.push(pt);
        }
        Ok(out)
    }

    fn indices(&self, list: &[Spanned<usize>], n: usize) -> Result<Vec<usize>, FormatError> {
        let mut out = Vec::new();
        for k in list {
            let v = *k.get_ref();
            if v == 0 || v > n {
                return Err(self.err(k.span(), format!("index {v} is outside 1..={n}")));
            }
            if out.contains(&(v - 1)) {
                return Err(self.err(k.span(), format!("index {v} repeated")));
            }
            out.push(v - 1);
        }
        out.sort_unstable();
        Ok(out)
    }
}

fn names(given: Option<&Spanned<Vec<String>>>, prefix: &str, n: usize) -> Vec<String> {
    match given {
        Some(v) => v.get_ref().clone(),
        None => (1..=n).map(|k| format!("{prefix}{k}")).collect(),
    }
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let src = Source { text };
        let raw: RawFile = toml::from_str(text).map_err(|e| match e.span() {
            Some(span) => src.err(span, e.message().trim().to_string()),
            None => FormatError::Whole(e.message().trim().to_string()),
        })?;
        let meta = raw.meta.get_ref();
        let n = *meta.n.get_ref();
        if n == 0 {
            return Err(src.err(meta.n.span(), "n must be positive"));
        }
        let present: Vec<&str> = [
            raw.semiflat.as_ref().map(|_| "semiflat"),
            raw.gcs.as_ref().map(|_| "gcs"),
            raw.kahler.as_ref().map(|_| "kahler"),
        ]
        .into_iter()
        .flatten()
        .collect();
        if present.len() != 1 {
            return Err(FormatError::Whole(format!(
                "exactly one of [semiflat], [gcs], [kahler] is required, found {}",
                if present.is_empty() { "none".to_string() } else { present.join(", ") }
            )));
        }
        let is_gcs = raw.gcs.is_some();
        let base = names(meta.base.as_ref(), "x", n);
        let fiber = if is_gcs { meta.fiber.as_ref().map(|v| v.get_ref().clone()).unwrap_or_default() } else { names(meta.fiber.as_ref(), "xi", n) };
        let periodic = meta.periodic.unwrap_or(false);
        if !is_gcs {
            for (list, label) in [(&meta.base, "base"), (&meta.fiber, "fiber")] {
                if let Some(l) = list {
                    if l.get_ref().len() != n {
                        return Err(src.err(l.span(), format!("{label} needs {n} names")));
                    }
                }
            }
        }
        let chart = Context::new(base, fiber, periodic).map_err(|e| src.err(raw.meta.span(), e.to_string()))?;

        let mut samples = Vec::new();
        let structure = if let Some(s) = &raw.semiflat {
            let b = s.get_ref();
            Structure::Semiflat(src.blocks(&chart, n, [(&b.J12, "J12"), (&b.J13, "J13"), (&b.J22, "J22"), (&b.J31, "J31")], s.span())?)
        } else if let Some(s) = &raw.gcs {
            let g = s.get_ref();
            let m = *g.rank.get_ref();
            if m != chart.n_vars() {
                return Err(src.err(g.rank.span(), format!("rank {m} differs from the {} coordinates", chart.n_vars())));
            }
            let j1 = src.matrix(&chart, &g.J1, m, m, "J1")?;
            let j2 = src.matrix(&chart, &g.J2, m, m, "J2")?;
            let j3 = src.matrix(&chart, &g.J3, m, m, "J3")?;
            let j4 = src.matrix(&chart, &g.J4, m, m, "J4")?;
            Structure::Gcs(GCStructure::new(j1, j2, j3, j4).map_err(|e: GcsError| src.err(s.span(), e.to_string()))?)
        } else {
            let s = raw.kahler.as_ref().expect("one section present");
            let k = s.get_ref();
            let j = src.blocks(&chart, n, [(&k.J12, "J12"), (&k.J13, "J13"), (&k.J22, "J22"), (&k.J31, "J31")], s.span())?;
            let jp = src.blocks(&chart, n, [(&k.Jp12, "Jp12"), (&k.Jp13, "Jp13"), (&k.Jp22, "Jp22"), (&k.Jp31, "Jp31")], s.span())?;
            if let Some(g) = &k.samples {
                samples = src.samples(&chart, g)?;
            }
            Structure::Kahler(SemiflatPair::new(j, jp).map_err(|e: KahlerError| src.err(s.span(), e.to_string()))?)
        };

        let brane = match &raw.brane {
            None => None,
            Some(b) => {
                if is_gcs {
                    return Err(src.err(b.span(), "[brane] needs a [semiflat] or [kahler] structure"));
                }
                let r = b.get_ref();
                Some(BraneDatum { s: src.indices(&r.S, n)?, w: src.indices(&r.W, n)? })
            }
        };
        Ok(StructureFile { n, chart, structure, brane, samples })
    }

    /// Canonical text; [`StructureFile::parse`] reads it back to an equal value.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let quoted = |v: &[String]| v.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ");
        out.push_str("[meta]\n");
        let _ = writeln!(out, "n = {}", self.n);
        let _ = writeln!(out, "base = [{}]", quoted(self.chart.base_names()));
        let _ = writeln!(out, "fiber = [{}]", quoted(self.chart.fiber_names()));
        let _ = writeln!(out, "periodic = {}", self.chart.periodic());
        match &self.structure {
            Structure::Semiflat(b) => {
                out.push_str("\n[semiflat]\n");
                write_blocks(&mut out, b, "J");
            }
            Structure::Gcs(g) => {
                out.push_str("\n[gcs]\n");
                let _ = writeln!(out, "rank = {}", g.rank());
                for (k, m) in g.blocks().iter().enumerate() {
                    write_matrix(&mut out, &format!("J{}", k + 1), m);
                }
            }
            Structure::Kahler(p) => {
                out.push_str("\n[kahler]\n");
                write_blocks(&mut out, &p.j, "J");
                write_blocks(&mut out, &p.jp, "Jp");
                if !self.samples.is_empty() {
                    let rows: Vec<String> = self
                        .samples
                        .iter()
                        .map(|pt| format!("[{}]", pt.iter().map(|c| format!("{:?}", c.to_string())).collect::<Vec<_>>().join(", ")))
                        .collect();
                    let _ = writeln!(out, "samples = [{}]", rows.join(", "));
                }
            }
        }
        if let Some(d) = &self.brane {
            let one_based = |v: &[usize]| v.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(", ");
            out.push_str("\n[brane]\n");
            let _ = writeln!(out, "S = [{}]", one_based(&d.s));
            let _ = writeln!(out, "W = [{}]", one_based(&d.w));
        }
        out
    }

    /// The same file with the structure and brane replaced by their mirrors.
    pub fn mirror(&self) -> Self {
        let structure = match &self.structure {
            Structure::Semiflat(b) => Structure::Semiflat(b.mirror()),
            Structure::Gcs(g) => Structure::Gcs(g.tau_dual()),
            Structure::Kahler(p) => Structure::Kahler(p.mirror()),
        };
        let brane = self.brane.as_ref().map(|d| crate::semiflat::brane_mirror(d, self.n));
        StructureFile { structure, brane, ..self.clone() }
    }
}

fn write_matrix(out: &mut String, name: &str, m: &PolyMatrix) {
    let rows: Vec<String> = m
        .to_strings()
        .into_iter()
        .map(|r| format!("[{}]", r.iter().map(|s| format!("{s:?}")).collect::<Vec<_>>().join(", ")))
        .collect();
    let _ = writeln!(out, "{name} = [{}]", rows.join(", "));
}

fn write_blocks(out: &mut String, b: &AdaptedBlocks, prefix: &str) {
    let [a, c, d, e] = b.blocks();
    write_matrix(out, &format!("{prefix}12"), a);
    write_matrix(out, &format!("{prefix}13"), c);
    write_matrix(out, &format!("{prefix}22"), d);
    write_matrix(out, &format!("{prefix}31"), e);
}

#[cfg(test)]
mod tests {
    use super::*;

    const COMPLEX: &str = "[meta]\nn = 1\n\n[semiflat]\nJ12 = [[\"1\"]]\nJ13 = [[\"-1\"]]\nJ22 = [[0]]\nJ31 = [[0]]\n";

    #[test]
    fn complex_file_parses_and_round_trips() {
        let f = StructureFile::parse(COMPLEX).unwrap();
        assert_eq!(f.chart.base_names(), ["x1"]);
        assert_eq!(f.chart.fiber_names(), ["xi1"]);
        let Structure::Semiflat(b) = &f.structure else { panic!() };
        assert!(b.validate().is_valid());
        let text = f.to_text();
        assert_eq!(StructureFile::parse(&text).unwrap(), f);
        assert_eq!(StructureFile::parse(&text).unwrap().to_text(), text);
    }

    #[test]
    fn polynomial_errors_point_into_the_string() {
        let bad = COMPLEX.replace("[[\"-1\"]]", "[[\"-1 + y\"]]");
        let e = StructureFile::parse(&bad).unwrap_err();
        // line 6 is `J13 = [["-1 + y"]]`; `y` sits at column 15
        assert_eq!(e.position(), Some((6, 15)), "{e}");
    }

    #[test]
    fn dimension_and_section_errors() {
        let e = StructureFile::parse(&COMPLEX.replace("J22 = [[0]]", "J22 = [[0, 0]]")).unwrap_err();
        assert_eq!(e.position(), Some((7, 8)), "{e}");
        let e = StructureFile::parse("[meta]\nn = 1\n").unwrap_err();
        assert!(e.to_string().contains("found none"));
        let e = StructureFile::parse("[meta]\nn = 1\n[semiflat\n").unwrap_err();
        assert_eq!(e.position().map(|p| p.0), Some(3));
        let e = StructureFile::parse(&format!("{COMPLEX}\n[brane]\nS = [2]\nW = []\n")).unwrap_err();
        assert_eq!(e.position(), Some((11, 6)), "{e}");
    }

    #[test]
    fn gcs_and_kahler_sections() {
        let g = "[meta]\nn = 2\n[gcs]\nrank = 2\nJ1 = [[0, -1], [1, 0]]\nJ2 = [[0, 0], [0, 0]]\nJ3 = [[0, 0], [0, 0]]\nJ4 = [[0, -1], [1, 0]]\n";
        let f = StructureFile::parse(g).unwrap();
        let Structure::Gcs(j) = &f.structure else { panic!() };
        assert!(j.validate().is_valid());
        assert_eq!(f.chart.n_vars(), 2);
        let m = f.mirror();
        assert_eq!(m.mirror(), f);
        assert_eq!(StructureFile::parse(&m.to_text()).unwrap(), m);

        let k = "[meta]\nn = 1\n[kahler]\nJ12 = [[1]]\nJ13 = [[-1]]\nJ22 = [[0]]\nJ31 = [[0]]\n\
                 Jp12 = [[0]]\nJp13 = [[0]]\nJp22 = [[1]]\nJp31 = [[1]]\nsamples = [[\"1/2\"], [\"-3\"]]\n\
                 [brane]\nS = [1]\nW = []\n";
        let f = StructureFile::parse(k).unwrap();
        assert_eq!(f.samples, vec![vec![GaussRational::from_frac(1, 2)], vec![GaussRational::from_int(-3)]]);
        let Structure::Kahler(p) = &f.structure else { panic!() };
        assert!(p.validate(&f.samples).unwrap().is_valid());
        assert_eq!(f.brane, Some(BraneDatum { s: vec![0], w: vec![] }));
        let m = f.mirror();
        assert_eq!(m.brane, Some(BraneDatum { s: vec![0], w: vec![0] }));
        assert_eq!(StructureFile::parse(&m.to_text()).unwrap(), m);
    }
}
