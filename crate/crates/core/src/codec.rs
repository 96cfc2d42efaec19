//! Plain-text IFS code files.
//!
//! ```text
//! # comment                        ignored, as are blank lines
//! @name flower                     optional, rest of line
//! @basis x1 y1 x2 y2 x3 y3         optional control triangle
//! @render points burn_in seed      optional render defaults
//! a11 a12 a21 a22 b1 b2 [weight]   one map per line, in map order
//! ```
//!
//! Weights are all-or-none and must sum to 1 within 1e-6. Numbers are
//! decimal floats; `inf`/`nan` spellings are rejected as non-finite.
//! [`serialize_ifs`] writes the canonical form: directives in the order
//! above, then maps, every float in shortest round-trip notation.

use std::fmt::Write as _;

use thiserror::Error;

use crate::barycentric::AffineBasis;
use crate::error::Error as EngineError;
use crate::ifs::{AffineMap2, ChaosParams, IfsSystem};

const WEIGHT_SUM_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {reason}")]
    MalformedLine {
        line: usize,
        column: usize,
        reason: String,
    },
    #[error("line {line}, column {column}: number is not finite")]
    NonFiniteNumber { line: usize, column: usize },
    #[error("empty system: the file defines no maps")]
    EmptySystem,
    #[error("map weights sum to {sum}, expected 1")]
    BadWeightSum { sum: f64 },
}

/// Defaults for rendering a document.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderDefaults {
    pub n_points: usize,
    pub burn_in: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MapEntry {
    pub map: AffineMap2,
    pub weight: Option<f64>,
}

/// Parsed contents of an IFS code file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IfsDocument {
    /// Empty when the file has no `@name`.
    pub name: String,
    pub maps: Vec<MapEntry>,
    pub basis: Option<AffineBasis>,
    pub render: Option<RenderDefaults>,
}

impl IfsDocument {
    /// The system described by the document. Weights are renormalised to an
    /// exact unit sum, which the file format only guarantees to 1e-6.
    pub fn system(&self) -> Result<IfsSystem, EngineError> {
        let maps: Vec<AffineMap2> = self.maps.iter().map(|e| e.map).collect();
        let weights: Option<Vec<f64>> = self.maps.iter().map(|e| e.weight).collect();
        match weights {
            Some(w) if !w.is_empty() => {
                let total: f64 = w.iter().sum();
                IfsSystem::with_weights(maps, w.into_iter().map(|x| x / total).collect())
            }
            _ => IfsSystem::new(maps),
        }
    }

    /// Render defaults from the file, falling back to `n_points = 100000`,
    /// `burn_in = 14`, `seed = 0`.
    pub fn chaos_params(&self) -> ChaosParams {
        let d = self.render.unwrap_or(RenderDefaults {
            n_points: 100_000,
            burn_in: crate::ifs::DEFAULT_BURN_IN,
            seed: 0,
        });
        ChaosParams::new(d.n_points).burn_in(d.burn_in).seed(d.seed)
    }

    pub fn from_system(name: impl Into<String>, ifs: &IfsSystem) -> Self {
        let maps = ifs
            .maps()
            .iter()
            .enumerate()
            .map(|(i, m)| MapEntry {
                map: *m,
                weight: ifs.weights().map(|w| w[i]),
            })
            .collect();
        Self {
            name: name.into(),
            maps,
            basis: None,
            render: None,
        }
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (idx, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(idx),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..idx],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &line[s..],
            column: line[..s].chars().count() + 1,
        });
    }
    out
}

fn malformed(line: usize, column: usize, reason: impl Into<String>) -> ParseError {
    ParseError::MalformedLine {
        line,
        column,
        reason: reason.into(),
    }
}

fn parse_float(tok: &Token<'_>, line: usize) -> Result<f64, ParseError> {
    let v: f64 = tok.text.parse().map_err(|_| {
        malformed(
            line,
            tok.column,
            format!("expected a number, found {:?}", tok.text),
        )
    })?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(ParseError::NonFiniteNumber {
            line,
            column: tok.column,
        })
    }
}

fn parse_uint<T: std::str::FromStr>(tok: &Token<'_>, line: usize) -> Result<T, ParseError> {
    tok.text.parse().map_err(|_| {
        malformed(
            line,
            tok.column,
            format!("expected a nonnegative integer, found {:?}", tok.text),
        )
    })
}

fn expect_arity(tokens: &[Token<'_>], want: usize, line: usize, what: &str) -> Result<(), ParseError> {
    if tokens.len() == want {
        return Ok(());
    }
    let column = tokens.get(want).or(tokens.last()).map_or(1, |t| t.column);
    Err(malformed(
        line,
        column,
        format!("{what} takes {want} fields, found {}", tokens.len()),
    ))
}

pub fn parse_ifs(text: &str) -> Result<IfsDocument, ParseError> {
    let mut doc = IfsDocument::default();
    let mut weighted: Option<bool> = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content);
        let Some(head) = tokens.first() else { continue };

        if let Some(directive) = head.text.strip_prefix('@') {
            let args = &tokens[1..];
            match directive {
                "name" => {
                    let start = args.first().map_or(content.len(), |t| {
                        content
                            .char_indices()
                            .nth(t.column - 1)
                            .map_or(content.len(), |(i, _)| i)
                    });
                    doc.name = content[start..].trim().to_string();
                }
                "basis" => {
                    expect_arity(args, 6, line_no, "@basis")?;
                    let mut v = [0.0; 6];
                    for (slot, tok) in v.iter_mut().zip(args) {
                        *slot = parse_float(tok, line_no)?;
                    }
                    doc.basis = Some(AffineBasis::from_flat(v));
                }
                "render" => {
                    expect_arity(args, 3, line_no, "@render")?;
                    let n_points: usize = parse_uint(&args[0], line_no)?;
                    if n_points == 0 {
                        return Err(malformed(line_no, args[0].column, "point count must be positive"));
                    }
                    doc.render = Some(RenderDefaults {
                        n_points,
                        burn_in: parse_uint(&args[1], line_no)?,
                        seed: parse_uint(&args[2], line_no)?,
                    });
                }
                other => {
                    return Err(malformed(
                        line_no,
                        head.column,
                        format!("unknown directive @{other}"),
                    ));
                }
            }
            continue;
        }

        if tokens.len() != 6 && tokens.len() != 7 {
            let column = tokens.get(7).unwrap_or(&tokens[tokens.len() - 1]).column;
            return Err(malformed(
                line_no,
                column,
                format!(
                    "map line needs 6 coefficients and an optional weight, found {} fields",
                    tokens.len()
                ),
            ));
        }
        let mut c = [0.0; 6];
        for (slot, tok) in c.iter_mut().zip(&tokens) {
            *slot = parse_float(tok, line_no)?;
        }
        let weight = match tokens.get(6) {
            Some(tok) => {
                let w = parse_float(tok, line_no)?;
                if w <= 0.0 {
                    return Err(malformed(line_no, tok.column, "weight must be positive"));
                }
                Some(w)
            }
            None => None,
        };
        match weighted {
            None => weighted = Some(weight.is_some()),
            Some(expected) if expected != weight.is_some() => {
                let column = tokens.last().map_or(1, |t| t.column);
                return Err(malformed(
                    line_no,
                    column,
                    "either every map carries a weight or none does",
                ));
            }
            _ => {}
        }
        let map = AffineMap2::from_coefficients(c).expect("coefficients checked finite");
        doc.maps.push(MapEntry { map, weight });
    }

    if doc.maps.is_empty() {
        return Err(ParseError::EmptySystem);
    }
    if weighted == Some(true) {
        let sum: f64 = doc.maps.iter().filter_map(|e| e.weight).sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(ParseError::BadWeightSum { sum });
        }
    }
    Ok(doc)
}

fn push_float(out: &mut String, v: f64) {
    // `{:?}` is the shortest string that parses back to the same f64.
    let _ = write!(out, "{v:?}");
}

/// Canonical text form; `parse_ifs(&serialize_ifs(d)) == Ok(d)`.
pub fn serialize_ifs(doc: &IfsDocument) -> String {
    let mut out = String::new();
    if !doc.name.is_empty() {
        let _ = writeln!(out, "@name {}", doc.name);
    }
    if let Some(b) = doc.basis {
        out.push_str("@basis");
        for v in b.to_flat() {
            out.push(' ');
            push_float(&mut out, v);
        }
        out.push('\n');
    }
    if let Some(r) = doc.render {
        let _ = writeln!(out, "@render {} {} {}", r.n_points, r.burn_in, r.seed);
    }
    for entry in &doc.maps {
        let coeffs = entry.map.coefficients();
        for (i, v) in coeffs.iter().chain(entry.weight.iter()).enumerate() {
            if i > 0 {
                out.push(' ');
            }
            push_float(&mut out, *v);
        }
        out.push('\n');
    }
    out
}
