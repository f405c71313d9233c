//! Cochain files: one line `v0 v1 ... : value` per cell with a nonzero value.
//!
//! Plain values are residue tuples such as `(1,0)` (a bare residue is fine for
//! one factor); `P(A)` values are `{atom:value, ...}` with 1-based atoms.
//! Vertices must be listed in increasing order; unlisted cells are zero.

use crate::abelian::AElement;
use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};

use super::{check_cochain, Cochain, Coefficients};

fn split_top_level(s: &str) -> Vec<&str> {
    let mut parts = Vec::new();
    let (mut depth, mut start) = (0i32, 0usize);
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                parts.push(&s[start..k]);
                start = k + 1;
            }
            _ => {}
        }
    }
    parts.push(&s[start..]);
    parts.into_iter().map(str::trim).filter(|p| !p.is_empty()).collect()
}

fn parse_value(coeffs: &Coefficients, s: &str, line: usize) -> Result<Vec<(usize, AElement)>> {
    let s = s.trim();
    let err = |e: Error| Error::parse(line, e.to_string());
    if let Some(inner) = s.strip_prefix('{') {
        let inner = inner.strip_suffix('}').ok_or_else(|| Error::parse(line, "unterminated `{`"))?;
        split_top_level(inner)
            .into_iter()
            .map(|part| {
                let (atom, val) = part
                    .split_once(':')
                    .ok_or_else(|| Error::parse(line, format!("expected atom:value, got `{part}`")))?;
                let atom: usize = atom.trim().parse().map_err(|_| Error::parse(line, format!("bad atom `{atom}`")))?;
                if atom == 0 || atom > coeffs.atoms() {
                    return Err(Error::parse(line, format!("atom {atom} outside 1..{}", coeffs.atoms())));
                }
                Ok((atom - 1, coeffs.group().parse_element(val).map_err(err)?))
            })
            .collect()
    } else {
        if coeffs.atoms() != 1 {
            return Err(Error::parse(line, "P(A) coefficients need `{atom:value, ...}` values"));
        }
        Ok(vec![(0, coeffs.group().parse_element(s).map_err(err)?)])
    }
}

pub fn parse_cochain(
    text: &str,
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    degree: Option<usize>,
) -> Result<Cochain> {
    let mut entries = Vec::new();
    let mut degree = degree;
    for (ln, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ln = ln + 1;
        let (cell, value) = line.split_once(':').ok_or_else(|| Error::parse(ln, "expected `vertices : value`"))?;
        let verts = cell
            .split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad vertex `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        if verts.is_empty() {
            return Err(Error::parse(ln, "empty simplex"));
        }
        if verts.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::parse(ln, format!("vertices {verts:?} are not in increasing order")));
        }
        let d = verts.len() - 1;
        match degree {
            None => degree = Some(d),
            Some(k) if k != d => {
                return Err(Error::parse(ln, format!("a degree-{k} cochain cannot take a value on {verts:?}")))
            }
            _ => {}
        }
        let idx =
            x.index_of(&verts).ok_or_else(|| Error::parse(ln, format!("{verts:?} is not a simplex of the complex")))?;
        entries.push((ln, idx, parse_value(coeffs, value, ln)?));
    }
    let degree = degree.ok_or_else(|| Error::input("empty cochain file: the degree cannot be inferred"))?;
    if degree > x.dim() {
        return Err(Error::input(format!("degree {degree} exceeds the dimension {}", x.dim())));
    }
    let mut c = Cochain::zero(x, coeffs, degree);
    let mut seen = vec![false; c.cells()];
    for (ln, idx, vals) in entries {
        if std::mem::replace(&mut seen[idx], true) {
            return Err(Error::parse(ln, "simplex listed twice"));
        }
        for (atom, a) in vals {
            c.set(idx, atom, &a);
        }
    }
    Ok(c)
}

pub fn format_cochain(x: &SimplicialComplex, coeffs: &Coefficients, c: &Cochain) -> Result<String> {
    check_cochain(x, coeffs, c)?;
    let mut out = String::new();
    for (idx, s) in x.simplices(c.degree()).iter().enumerate() {
        let value = if coeffs.atoms() == 1 {
            let a = c.get(idx, 0);
            if a.is_zero() {
                continue;
            }
            a.to_string()
        } else {
            let pa = c.pa_value(idx);
            if pa.is_zero() {
                continue;
            }
            pa.to_string()
        };
        let verts: Vec<String> = s.iter().map(|v| v.to_string()).collect();
        out.push_str(&format!("{} : {}\n", verts.join(" "), value));
    }
    Ok(out)
}
