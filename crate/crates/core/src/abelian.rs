//! Finite abelian groups given as explicit products of cyclic factors.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `Z/m_1 x ... x Z/m_t`. The empty factor list is the trivial group.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAbelianGroup {
    factors: Vec<u32>,
}

/// An element of a [`FiniteAbelianGroup`], stored as least non-negative residues.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AElement(pub Vec<u32>);

impl FiniteAbelianGroup {
    pub fn new(factors: Vec<u32>) -> Result<Self> {
        if let Some(m) = factors.iter().find(|&&m| m < 2) {
            return Err(Error::input(format!("cyclic factor of order {m}; every factor must be at least 2")));
        }
        let g = FiniteAbelianGroup { factors };
        if g.order_u128() > u64::MAX as u128 {
            return Err(Error::input("group order does not fit in 64 bits"));
        }
        Ok(g)
    }

    pub fn cyclic(m: u32) -> Self {
        Self::new(vec![m]).expect("cyclic group of order < 2")
    }

    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn factors(&self) -> &[u32] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    fn order_u128(&self) -> u128 {
        self.factors.iter().map(|&m| m as u128).product()
    }

    pub fn order(&self) -> u64 {
        self.order_u128() as u64
    }

    pub fn zero(&self) -> AElement {
        AElement(vec![0; self.factors.len()])
    }

    /// Builds an element, reducing every coordinate modulo its factor.
    pub fn element(&self, coords: &[i64]) -> Result<AElement> {
        if coords.len() != self.factors.len() {
            return Err(Error::Shape(format!(
                "element has {} coordinates, group has {} factors",
                coords.len(),
                self.factors.len()
            )));
        }
        Ok(AElement(coords.iter().zip(&self.factors).map(|(&c, &m)| c.rem_euclid(m as i64) as u32).collect()))
    }

    pub fn contains(&self, x: &AElement) -> bool {
        x.0.len() == self.factors.len() && x.0.iter().zip(&self.factors).all(|(c, m)| c < m)
    }

    fn check(&self, x: &AElement) -> Result<()> {
        if self.contains(x) {
            Ok(())
        } else {
            Err(Error::Shape(format!("{x} is not an element of {self}")))
        }
    }

    pub fn add(&self, x: &AElement, y: &AElement) -> Result<AElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(AElement(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.factors)
                .map(|((&a, &b), &m)| ((a as u64 + b as u64) % m as u64) as u32)
                .collect(),
        ))
    }

    /// `n · x` for any integer `n`; `scale(-1, x)` is the inverse.
    pub fn scale(&self, n: i64, x: &AElement) -> AElement {
        AElement(
            x.0.iter()
                .zip(&self.factors)
                .map(|(&c, &m)| {
                    let m = m as i128;
                    ((n as i128 % m) * c as i128).rem_euclid(m) as u32
                })
                .collect(),
        )
    }

    pub fn neg(&self, x: &AElement) -> AElement {
        self.scale(-1, x)
    }

    pub fn sub(&self, x: &AElement, y: &AElement) -> Result<AElement> {
        self.add(x, &self.neg(y))
    }

    /// All elements in lexicographic order of coordinates, zero first.
    pub fn enumerate(&self, bound: u64) -> Result<Vec<AElement>> {
        let order = self.order();
        if order > bound {
            return Err(Error::capacity(format!("enumerating {self}"), order, bound));
        }
        let mut out = Vec::with_capacity(order as usize);
        let mut cur = vec![0u32; self.factors.len()];
        loop {
            out.push(AElement(cur.clone()));
            // odometer, last coordinate fastest
            let mut k = self.factors.len();
            loop {
                if k == 0 {
                    return Ok(out);
                }
                k -= 1;
                cur[k] += 1;
                if cur[k] < self.factors[k] {
                    break;
                }
                cur[k] = 0;
            }
        }
    }

    /// Parses an element in the `(c1,c2,...)` syntax; a bare residue is accepted
    /// for groups with a single factor.
    pub fn parse_element(&self, s: &str) -> Result<AElement> {
        let s = s.trim();
        let inner = s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s);
        let coords: Vec<i64> = if inner.trim().is_empty() {
            Vec::new()
        } else {
            inner
                .split(',')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::input(format!("bad residue `{c}` in `{s}`"))))
                .collect::<Result<_>>()?
        };
        self.element(&coords)
    }
}

impl AElement {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn coords(&self) -> &[u32] {
        &self.0
    }
}

impl fmt::Display for AElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        for (k, m) in self.factors.iter().enumerate() {
            if k > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{m}")?;
        }
        Ok(())
    }
}

impl FromStr for FiniteAbelianGroup {
    type Err = Error;

    /// `Z/2 x Z/3`, whitespace-insensitive; `0`, `1` or `trivial` for the trivial group.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if matches!(compact.as_str(), "0" | "1" | "trivial") {
            return Ok(Self::trivial());
        }
        let factors = compact
            .split('x')
            .map(|part| {
                part.strip_prefix("Z/")
                    .and_then(|m| m.parse::<u32>().ok())
                    .ok_or_else(|| Error::input(format!("bad cyclic factor `{part}` in group `{s}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(factors)
    }
}
