//! Text and JSON encodings of [`MultiPoly`].
//!
//! Text: one term per line, `a_1 a_2 … a_d  re im`; `#` starts a comment and
//! blank lines are skipped. The dimension is taken from the first term.
//! JSON: `{"dim": d, "terms": [{"alpha": [...], "re": x, "im": y}]}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{MultiIndex, MultiPoly};
use crate::error::{Result, VniError};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyJson {
    pub dim: usize,
    pub terms: Vec<TermJson>,
}

impl MultiPoly {
    pub fn parse_text(src: &str) -> Result<MultiPoly> {
        let mut dim: Option<usize> = None;
        let mut terms = Vec::new();
        for (lineno, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() < 3 {
                return Err(VniError::Parse(format!(
                    "line {}: expected `a_1 .. a_d re im`, got {:?}",
                    lineno + 1,
                    raw
                )));
            }
            let d = toks.len() - 2;
            match dim {
                None => dim = Some(d),
                Some(d0) if d0 != d => {
                    return Err(VniError::Parse(format!(
                        "line {}: term has {d} exponents, earlier terms have {d0}",
                        lineno + 1
                    )))
                }
                _ => {}
            }
            let alpha = toks[..d]
                .iter()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| VniError::Parse(format!("line {}: exponent: {e}", lineno + 1)))?;
            let re: f64 =
                toks[d].parse().map_err(|e| VniError::Parse(format!("line {}: real part: {e}", lineno + 1)))?;
            let im: f64 = toks[d + 1]
                .parse()
                .map_err(|e| VniError::Parse(format!("line {}: imaginary part: {e}", lineno + 1)))?;
            terms.push((alpha, Complex64::new(re, im)));
        }
        let dim = dim.ok_or_else(|| VniError::Parse("polynomial file has no terms".into()))?;
        MultiPoly::from_terms(dim, terms)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (alpha, c) in self.terms() {
            let exps: Vec<String> = alpha.entries().iter().map(|a| a.to_string()).collect();
            out.push_str(&format!("{}  {:?} {:?}\n", exps.join(" "), c.re, c.im));
        }
        out
    }

    pub fn to_json_value(&self) -> PolyJson {
        PolyJson {
            dim: self.dim(),
            terms: self.terms().map(|(a, c)| TermJson { alpha: a.entries().to_vec(), re: c.re, im: c.im }).collect(),
        }
    }

    pub fn from_json_value(v: &PolyJson) -> Result<MultiPoly> {
        let mut p = MultiPoly::zero(v.dim)?;
        for t in &v.terms {
            p.add_term(MultiIndex::new(t.alpha.clone())?, Complex64::new(t.re, t.im))?;
        }
        Ok(p)
    }

    pub fn parse_json(src: &str) -> Result<MultiPoly> {
        let v: PolyJson = serde_json::from_str(src)?;
        Self::from_json_value(&v)
    }

    /// Accepts either encoding; JSON is recognised by a leading `{`.
    pub fn parse_any(src: &str) -> Result<MultiPoly> {
        if src.trim_start().starts_with('{') {
            Self::parse_json(src)
        } else {
            Self::parse_text(src)
        }
    }
}
