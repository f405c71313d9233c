//! Finite atomic measured Boolean algebras and the metric group `P(A)`.
//!
//! An element of `P(A)` over a finite atomic algebra is a function from atoms
//! to `A`; the disjoint-support normal form `Σ X_a ⊗ a` is recovered by
//! grouping atoms by value. Measures are exact rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::abelian::{AElement, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::perm::{eval_word, parse_word, Perm};
use crate::rational::{fmt_rational, parse_rational, Rational};

/// A probability vector on atoms `0..N`, optionally with generator permutations
/// acting on the atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MeasuredBoolean {
    weights: Vec<Rational>,
    action: Vec<(char, Perm)>,
}

impl MeasuredBoolean {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::input("a measured algebra needs at least one atom"));
        }
        if weights.iter().any(|w| *w < Rational::zero()) {
            return Err(Error::input("atom weights must be non-negative"));
        }
        let total: Rational = weights.iter().sum();
        if !total.is_one() {
            return Err(Error::input(format!("atom weights sum to {} instead of 1", fmt_rational(&total))));
        }
        Ok(MeasuredBoolean { weights, action: Vec::new() })
    }

    /// Normalized counting measure on `n` atoms.
    pub fn uniform(n: usize) -> Self {
        Self::new(vec![Rational::new(1, n as i128); n]).expect("n > 0")
    }

    /// The one-atom algebra; `P(A) = A` over it.
    pub fn point() -> Self {
        Self::uniform(1)
    }

    /// Attaches a generator acting by a weight-preserving permutation of atoms.
    pub fn with_generator(mut self, name: char, perm: Perm) -> Result<Self> {
        if perm.degree() != self.atoms() {
            return Err(Error::Shape(format!(
                "generator {name} permutes {} points but the algebra has {} atoms",
                perm.degree(),
                self.atoms()
            )));
        }
        if let Some(p) = (0..self.atoms()).find(|&p| self.weights[perm.apply(p)] != self.weights[p]) {
            return Err(Error::input(format!("generator {name} moves atom {} to an atom of different weight", p + 1)));
        }
        if self.action.iter().any(|(g, _)| *g == name) {
            return Err(Error::input(format!("generator {name} declared twice")));
        }
        self.action.push((name, perm));
        Ok(self)
    }

    pub fn atoms(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn weight(&self, atom: usize) -> &Rational {
        &self.weights[atom]
    }

    pub fn generators(&self) -> &[(char, Perm)] {
        &self.action
    }

    /// Faithful iff every atom has positive weight.
    pub fn is_faithful(&self) -> bool {
        self.weights.iter().all(|w| *w > Rational::zero())
    }

    /// Permutation of atoms realized by a word in the generators (right action).
    pub fn word_perm(&self, word: &str) -> Result<Perm> {
        let names: Vec<char> = self.action.iter().map(|(g, _)| *g).collect();
        let w = parse_word(word, &names)?;
        let perms: Vec<Perm> = self.action.iter().map(|(_, p)| p.clone()).collect();
        eval_word(&perms, &w, self.atoms())
    }

    /// Text format: `atoms N`, `weights w1 .. wN`, then `act <gen> <one-line permutation>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let mut atoms: Option<usize> = None;
        let mut weights: Option<Vec<Rational>> = None;
        let mut acts: Vec<(usize, char, Perm)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match key {
                "atoms" => {
                    atoms = Some(rest.trim().parse().map_err(|_| Error::parse(ln, "expected an atom count"))?);
                }
                "weights" => {
                    weights = Some(
                        rest.split_whitespace()
                            .map(parse_rational)
                            .collect::<Result<Vec<_>>>()
                            .map_err(|e| Error::parse(ln, e.to_string()))?,
                    );
                }
                "act" => {
                    let (g, perm) = rest
                        .trim()
                        .split_once(char::is_whitespace)
                        .ok_or_else(|| Error::parse(ln, "expected `act <gen> <permutation>`"))?;
                    let mut chars = g.chars();
                    let name = match (chars.next(), chars.next()) {
                        (Some(c), None) if c.is_ascii_lowercase() => c,
                        _ => {
                            return Err(Error::parse(
                                ln,
                                format!("generator names are single lowercase letters, got `{g}`"),
                            ))
                        }
                    };
                    let perm = Perm::parse_one_line(perm).map_err(|e| Error::parse(ln, e.to_string()))?;
                    acts.push((ln, name, perm));
                }
                other => return Err(Error::parse(ln, format!("unknown directive `{other}`"))),
            }
        }
        let n = atoms.ok_or_else(|| Error::parse(0, "missing `atoms` line"))?;
        let weights = weights.unwrap_or_else(|| vec![Rational::new(1, n.max(1) as i128); n]);
        if weights.len() != n {
            return Err(Error::parse(0, format!("{} weights for {n} atoms", weights.len())));
        }
        let mut p = MeasuredBoolean::new(weights)?;
        for (ln, name, perm) in acts {
            p = p.with_generator(name, perm).map_err(|e| Error::parse(ln, e.to_string()))?;
        }
        Ok(p)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("atoms {}\nweights", self.atoms());
        for w in &self.weights {
            out.push(' ');
            out.push_str(&fmt_rational(w));
        }
        out.push('\n');
        for (g, p) in &self.action {
            out.push_str(&format!("act {g} {p}\n"));
        }
        out
    }
}

/// An element of `P(A)` in normal form: only atoms with nonzero values are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PAElement {
    support: BTreeMap<usize, AElement>,
}

impl PAElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Builds an element from `(atom, value)` pairs, dropping zero values.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, AElement)>) -> Self {
        PAElement { support: pairs.into_iter().filter(|(_, a)| !a.is_zero()).collect() }
    }

    pub fn support(&self) -> &BTreeMap<usize, AElement> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    pub fn value(&self, atom: usize, group: &FiniteAbelianGroup) -> AElement {
        self.support.get(&atom).cloned().unwrap_or_else(|| group.zero())
    }

    /// The disjoint-support decomposition: each nonzero value with the set of atoms carrying it.
    pub fn level_sets(&self) -> BTreeMap<AElement, Vec<usize>> {
        let mut out: BTreeMap<AElement, Vec<usize>> = BTreeMap::new();
        for (atom, a) in &self.support {
            out.entry(a.clone()).or_default().push(*atom);
        }
        out
    }
}

impl fmt::Display for PAElement {
    /// `{atom:value, ...}` with 1-based atoms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, (atom, a)) in self.support.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}:{}", atom + 1, a)?;
        }
        write!(f, "}}")
    }
}

/// The metric abelian group `P(A)` for a fixed algebra and coefficient group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PGroup {
    pub algebra: MeasuredBoolean,
    pub group: FiniteAbelianGroup,
}

impl PGroup {
    pub fn new(algebra: MeasuredBoolean, group: FiniteAbelianGroup) -> Self {
        PGroup { algebra, group }
    }

    fn check(&self, x: &PAElement) -> Result<()> {
        for (atom, a) in &x.support {
            if *atom >= self.algebra.atoms() {
                return Err(Error::Shape(format!(
                    "atom {} outside a ground set of {} atoms",
                    atom + 1,
                    self.algebra.atoms()
                )));
            }
            if !self.group.contains(a) {
                return Err(Error::Shape(format!("{a} is not an element of {}", self.group)));
            }
        }
        Ok(())
    }

    pub fn add(&self, x: &PAElement, y: &PAElement) -> Result<PAElement> {
        self.check(x)?;
        self.check(y)?;
        let mut support = x.support.clone();
        for (atom, b) in &y.support {
            let sum = match support.get(atom) {
                Some(a) => self.group.add(a, b)?,
                None => b.clone(),
            };
            if sum.is_zero() {
                support.remove(atom);
            } else {
                support.insert(*atom, sum);
            }
        }
        Ok(PAElement { support })
    }

    pub fn neg(&self, x: &PAElement) -> PAElement {
        PAElement { support: x.support.iter().map(|(p, a)| (*p, self.group.neg(a))).collect() }
    }

    /// `μ(x) = Σ_{a≠0} μ(X_a)`: the weight of the support.
    pub fn measure(&self, x: &PAElement) -> Rational {
        x.support.keys().map(|&p| self.algebra.weights[p]).sum()
    }

    /// `d(x, y) = μ(x - y)`.
    pub fn dist(&self, x: &PAElement, y: &PAElement) -> Result<Rational> {
        Ok(self.measure(&self.add(x, &self.neg(y))?))
    }

    /// The constant function `1 ⊗ a`.
    pub fn theta(&self, a: &AElement) -> PAElement {
        PAElement::from_pairs((0..self.algebra.atoms()).map(|p| (p, a.clone())))
    }

    /// Acts by a word: `(w·x)(p) = x(w⁻¹(p))`.
    pub fn act(&self, word: &str, x: &PAElement) -> Result<PAElement> {
        self.check(x)?;
        let perm = self.algebra.word_perm(word)?;
        Ok(PAElement { support: x.support.iter().map(|(p, a)| (perm.apply(*p), a.clone())).collect() })
    }
}

/// A measure-preserving map between finite atomic algebras, presented on atoms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AtomMap {
    /// Each target atom refines the listed source atom: the Boolean morphism
    /// `X ↦ π⁻¹(X)`. Values are transported to every refining atom.
    Refine(Vec<usize>),
    /// Each target atom is a block of source atoms; only elements constant on
    /// every block are representable.
    Coarsen(Vec<Vec<usize>>),
}

impl AtomMap {
    pub fn identity(n: usize) -> Self {
        AtomMap::Refine((0..n).collect())
    }

    pub fn target_atoms(&self) -> usize {
        match self {
            AtomMap::Refine(v) => v.len(),
            AtomMap::Coarsen(b) => b.len(),
        }
    }

    /// Checks that the map is measure preserving between `source` and `target`.
    pub fn validate(&self, source: &MeasuredBoolean, target: &MeasuredBoolean) -> Result<()> {
        if self.target_atoms() != target.atoms() {
            return Err(Error::Morphism(format!(
                "map has {} target atoms, target algebra has {}",
                self.target_atoms(),
                target.atoms()
            )));
        }
        match self {
            AtomMap::Refine(parent) => {
                let mut mass = vec![Rational::zero(); source.atoms()];
                for (q, &p) in parent.iter().enumerate() {
                    if p >= source.atoms() {
                        return Err(Error::Morphism(format!(
                            "target atom {} refines missing source atom {}",
                            q + 1,
                            p + 1
                        )));
                    }
                    mass[p] += target.weights[q];
                }
                if let Some(p) = (0..source.atoms()).find(|&p| mass[p] != source.weights[p]) {
                    return Err(Error::Morphism(format!(
                        "source atom {} has weight {} but its refinement carries {}",
                        p + 1,
                        fmt_rational(&source.weights[p]),
                        fmt_rational(&mass[p])
                    )));
                }
            }
            AtomMap::Coarsen(blocks) => {
                let mut owner = vec![None; source.atoms()];
                for (q, block) in blocks.iter().enumerate() {
                    let mut mass = Rational::zero();
                    for &p in block {
                        if p >= source.atoms() || owner[p].is_some() {
                            return Err(Error::Morphism(format!("block {} is not disjoint from the others", q + 1)));
                        }
                        owner[p] = Some(q);
                        mass += source.weights[p];
                    }
                    if mass != target.weights[q] {
                        return Err(Error::Morphism(format!(
                            "block {} has mass {} but target atom weight {}",
                            q + 1,
                            fmt_rational(&mass),
                            fmt_rational(&target.weights[q])
                        )));
                    }
                }
                if let Some(p) = owner.iter().position(|o| o.is_none()) {
                    if source.weights[p] > Rational::zero() {
                        return Err(Error::Morphism(format!("source atom {} lies in no block", p + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Transports an element of `P(A)` along the map.
    pub fn apply(&self, group: &FiniteAbelianGroup, x: &PAElement) -> Result<PAElement> {
        match self {
            AtomMap::Refine(parent) => Ok(PAElement::from_pairs(
                parent.iter().enumerate().filter_map(|(q, p)| x.support.get(p).map(|a| (q, a.clone()))),
            )),
            AtomMap::Coarsen(blocks) => {
                let mut pairs = Vec::new();
                for (q, block) in blocks.iter().enumerate() {
                    let mut vals = block.iter().map(|&p| x.value(p, group));
                    if let Some(first) = vals.next() {
                        if vals.any(|v| v != first) {
                            return Err(Error::Morphism(format!("element is not constant on block {}", q + 1)));
                        }
                        pairs.push((q, first));
                    }
                }
                Ok(PAElement::from_pairs(pairs))
            }
        }
    }
}
