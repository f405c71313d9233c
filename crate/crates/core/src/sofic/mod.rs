//! Permutation almost-representations of finitely presented groups.
//!
//! Actions are on the right: the word `s1 s2` sends `p` to `s2(s1(p))`.
//! Words are written with one character per generator, uppercase for inverses.

mod library;
mod quotient;
mod stability;

pub use library::{extension_library, LibraryEntry};
pub use quotient::{
    afree_vanishing_check, compare_delta_beta, defect_cocycle, induce_quotient, DefectCocycle, InducedQuotient,
    RelatorAgreement, VanishingCheck,
};
pub use stability::{stability_match, Candidate, CandidateResult, StabilityMatch};

use std::collections::BTreeMap;

use crate::abelian::{AElement, FiniteAbelianGroup};
use crate::error::{Error, Result};
use crate::perm::{eval_word, format_word, free_reduce, hamming_length, parse_word, Letter, Perm, Word};
use crate::rational::Rational;

fn strip_comment(raw: &str) -> &str {
    raw.split('#').next().unwrap_or("").trim()
}

/// `⟨S | R⟩` with single-character generator names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Presentation {
    pub gens: Vec<char>,
    pub rels: Vec<Word>,
}

impl Presentation {
    pub fn new(gens: Vec<char>, rels: Vec<Word>) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::input("a presentation needs at least one generator"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for &g in &gens {
            if !g.is_ascii_lowercase() || !seen.insert(g) {
                return Err(Error::input(format!("generator names must be distinct lowercase letters, got `{g}`")));
            }
        }
        let rels = rels
            .into_iter()
            .map(|r| {
                if r.iter().any(|l| l.gen >= gens.len()) {
                    return Err(Error::input("relator uses an unknown generator"));
                }
                let red = free_reduce(&r);
                if red.is_empty() {
                    return Err(Error::input(format!(
                        "relator `{}` reduces to the empty word",
                        format_word(&r, &gens)
                    )));
                }
                Ok(red)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Presentation { gens, rels })
    }

    pub fn parse_str(gens: &str, rels: &str) -> Result<Self> {
        let g: Vec<char> = gens.split_whitespace().flat_map(|t| t.chars()).collect();
        let r = rels.split_whitespace().map(|w| parse_word(w, &g)).collect::<Result<Vec<_>>>()?;
        Self::new(g, r)
    }

    pub fn word(&self, s: &str) -> Result<Word> {
        parse_word(s, &self.gens)
    }

    pub fn format(&self, w: &[Letter]) -> String {
        format_word(w, &self.gens)
    }

    /// `gens:` and `rels:` lines; other lines are ignored so that extension
    /// specs can reuse the parser.
    pub fn parse(text: &str) -> Result<Self> {
        let (mut gens, mut rels) = (None, None);
        for (ln, raw) in text.lines().enumerate() {
            let line = strip_comment(raw);
            if let Some(rest) = line.strip_prefix("gens:") {
                if gens.replace((ln + 1, rest.to_string())).is_some() {
                    return Err(Error::parse(ln + 1, "second `gens:` line"));
                }
            } else if let Some(rest) = line.strip_prefix("rels:") {
                rels.get_or_insert_with(|| (ln + 1, String::new())).1.push_str(&format!(" {rest}"));
            }
        }
        let (gl, g) = gens.ok_or_else(|| Error::parse(1, "missing `gens:` line"))?;
        let (rl, r) = rels.unwrap_or((gl, String::new()));
        let names: Vec<char> = g.split_whitespace().flat_map(|t| t.chars()).collect();
        let words = r
            .split_whitespace()
            .map(|w| parse_word(w, &names).map_err(|e| Error::parse(rl, e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        Self::new(names, words).map_err(|e| Error::parse(gl, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let g: Vec<String> = self.gens.iter().map(|c| c.to_string()).collect();
        let r: Vec<String> = self.rels.iter().map(|w| self.format(w)).collect();
        format!("gens: {}\nrels: {}\n", g.join(" "), r.join(" "))
    }
}

/// One finite stage: a permutation of `{0..n-1}` per generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostHom {
    pub n: usize,
    pub names: Vec<char>,
    pub images: Vec<Perm>,
}

impl AlmostHom {
    pub fn new(n: usize, names: Vec<char>, images: Vec<Perm>) -> Result<Self> {
        if names.len() != images.len() {
            return Err(Error::Shape("one image per generator name".into()));
        }
        if let Some(p) = images.iter().find(|p| p.degree() != n) {
            return Err(Error::Shape(format!("image {p} does not act on {n} points")));
        }
        Ok(AlmostHom { n, names, images })
    }

    /// Images reordered to follow the presentation's generators.
    pub fn aligned(&self, p: &Presentation) -> Result<Vec<Perm>> {
        p.gens
            .iter()
            .map(|g| {
                self.names
                    .iter()
                    .position(|n| n == g)
                    .map(|k| self.images[k].clone())
                    .ok_or_else(|| Error::input(format!("no image for generator `{g}`")))
            })
            .collect()
    }

    pub fn eval(&self, p: &Presentation, w: &[Letter]) -> Result<Perm> {
        eval_word(&self.aligned(p)?, w, self.n)
    }

    /// Evaluates a word written in this almost-hom's own generator names.
    pub fn word_eval(&self, w: &str) -> Result<Perm> {
        let word = parse_word(w, &self.names)?;
        eval_word(&self.images, &word, self.n)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for (g, p) in self.names.iter().zip(&self.images) {
            out.push_str(&format!("gen {g}: {}\n", p.one_line()));
        }
        out
    }
}

/// A central extension `1 → A → Γ̃ → Γ → 1` recorded by `α′: R → A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionSpec {
    pub presentation: Presentation,
    pub group: FiniteAbelianGroup,
    /// Indexed like the relators.
    pub alpha: Vec<AElement>,
}

impl ExtensionSpec {
    pub fn new(presentation: Presentation, group: FiniteAbelianGroup, alpha: Vec<AElement>) -> Result<Self> {
        if alpha.len() != presentation.rels.len() || alpha.iter().any(|a| !group.contains(a)) {
            return Err(Error::input("alpha must give one element of A per relator"));
        }
        Ok(ExtensionSpec { presentation, group, alpha })
    }

    /// A presentation file plus `A: <group>` and `alpha: <relator> = <element>` lines.
    pub fn parse(text: &str) -> Result<Self> {
        let presentation = Presentation::parse(text)?;
        let mut group = None;
        let mut given: BTreeMap<usize, (usize, String)> = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = strip_comment(raw);
            if let Some(rest) = line.strip_prefix("A:") {
                group = Some(rest.parse::<FiniteAbelianGroup>().map_err(|e| Error::parse(ln, e.to_string()))?);
            } else if let Some(rest) = line.strip_prefix("alpha:") {
                let (w, v) =
                    rest.split_once('=').ok_or_else(|| Error::parse(ln, "expected `alpha: <relator> = <element>`"))?;
                let word = presentation.word(w.trim()).map_err(|e| Error::parse(ln, e.to_string()))?;
                let k = presentation
                    .rels
                    .iter()
                    .position(|r| *r == free_reduce(&word))
                    .ok_or_else(|| Error::parse(ln, format!("`{}` is not one of the relators", w.trim())))?;
                if given.insert(k, (ln, v.trim().to_string())).is_some() {
                    return Err(Error::parse(ln, "relator given twice"));
                }
            }
        }
        let group = group.ok_or_else(|| Error::input("missing `A:` line"))?;
        let alpha = (0..presentation.rels.len())
            .map(|k| match given.get(&k) {
                Some((ln, v)) => group.parse_element(v).map_err(|e| Error::parse(*ln, e.to_string())),
                None => Err(Error::input(format!(
                    "no alpha value for relator `{}`",
                    presentation.format(&presentation.rels[k])
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(presentation, group, alpha)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.presentation.to_text();
        out.push_str(&format!("A: {}\n", self.group));
        for (r, a) in self.presentation.rels.iter().zip(&self.alpha) {
            out.push_str(&format!("alpha: {} = {}\n", self.presentation.format(r), a));
        }
        out
    }
}

/// An almost-hom of `Γ̃` on a set with an exact free `A`-action: one
/// permutation per cyclic factor of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionApproximation {
    pub hom: AlmostHom,
    pub group: FiniteAbelianGroup,
    pub central: Vec<Perm>,
}

impl ExtensionApproximation {
    /// Checks that the `A`-generators commute, have the right orders, and
    /// that `A` acts freely.
    pub fn new(hom: AlmostHom, group: FiniteAbelianGroup, central: Vec<Perm>) -> Result<Self> {
        if central.len() != group.rank() {
            return Err(Error::Structure(format!(
                "{} central permutations for a group of rank {}",
                central.len(),
                group.rank()
            )));
        }
        for (j, z) in central.iter().enumerate() {
            if z.degree() != hom.n {
                return Err(Error::Structure(format!("central permutation {} has the wrong degree", j + 1)));
            }
            if !z.pow(group.factors()[j] as i64).is_identity() {
                return Err(Error::Structure(format!(
                    "central permutation {} does not have order dividing {}",
                    j + 1,
                    group.factors()[j]
                )));
            }
            if central[j + 1..].iter().any(|w| !z.commutes_with(w)) {
                return Err(Error::Structure("central permutations do not commute".into()));
            }
        }
        let e = ExtensionApproximation { hom, group, central };
        let order = e.group.order() as usize;
        for p in 0..e.hom.n {
            let mut orbit = std::collections::BTreeSet::new();
            for a in e.group.enumerate(u64::MAX)? {
                orbit.insert(e.act(p, &a));
            }
            if orbit.len() != order {
                return Err(Error::Structure(format!("A does not act freely: point {} has a stabilizer", p + 1)));
            }
        }
        Ok(e)
    }

    /// `p·a` for the central action.
    pub fn act(&self, p: usize, a: &AElement) -> usize {
        let mut q = p;
        for (z, &k) in self.central.iter().zip(&a.0) {
            for _ in 0..k {
                q = z.apply(q);
            }
        }
        q
    }

    /// The permutation by which `a ∈ A` acts.
    pub fn central_perm(&self, a: &AElement) -> Perm {
        Perm::from_images((0..self.hom.n).map(|p| self.act(p, a) as u32).collect()).expect("A acts by permutations")
    }

    /// Swaps the images of two points under one generator.
    pub fn corrupted(&self, gen: usize, p: usize, q: usize) -> Self {
        let mut out = self.clone();
        out.hom.images[gen].swap_images(p, q);
        out
    }

    /// Disjoint union, the second copy shifted past the first.
    pub fn disjoint_union(&self, other: &Self) -> Result<Self> {
        if self.group != other.group || self.hom.names != other.hom.names {
            return Err(Error::Shape("disjoint union needs matching generators and A".into()));
        }
        let n = self.hom.n;
        let join = |a: &Perm, b: &Perm| {
            Perm::from_images(a.images().iter().copied().chain(b.images().iter().map(|&v| v + n as u32)).collect())
                .expect("block permutation")
        };
        let images = self.hom.images.iter().zip(&other.hom.images).map(|(a, b)| join(a, b)).collect();
        let central = self.central.iter().zip(&other.central).map(|(a, b)| join(a, b)).collect();
        Self::new(AlmostHom::new(n + other.hom.n, self.hom.names.clone(), images)?, self.group.clone(), central)
    }

    /// Action file: point count, `gen <name>: <perm>` lines, `A: <group>` and
    /// `central <k>: <perm>` lines for the cyclic factors.
    pub fn parse(text: &str) -> Result<Self> {
        let (hom, extra) = parse_action(text)?;
        let (group, central) = extra.ok_or_else(|| Error::input("missing `A:` line"))?;
        Self::new(hom, group, central)
    }

    pub fn to_text(&self) -> String {
        let mut out = self.hom.to_text();
        out.push_str(&format!("A: {}\n", self.group));
        for (j, z) in self.central.iter().enumerate() {
            out.push_str(&format!("central {}: {}\n", j + 1, z.one_line()));
        }
        out
    }
}

type CentralData = (FiniteAbelianGroup, Vec<Perm>);

/// Parses an action file; central data is returned when an `A:` line is present.
pub fn parse_action(text: &str) -> Result<(AlmostHom, Option<CentralData>)> {
    let mut n = None;
    let mut names = Vec::new();
    let mut images = Vec::new();
    let mut group = None;
    let mut central: BTreeMap<usize, Perm> = BTreeMap::new();
    for (ln, raw) in text.lines().enumerate() {
        let ln = ln + 1;
        let line = strip_comment(raw);
        if line.is_empty() {
            continue;
        }
        if n.is_none() {
            n = Some(line.parse::<usize>().map_err(|_| Error::parse(ln, "the first line must be the point count"))?);
            continue;
        }
        let perm = |s: &str| {
            let p = Perm::parse_one_line(s).map_err(|e| Error::parse(ln, e.to_string()))?;
            if Some(p.degree()) != n {
                return Err(Error::parse(
                    ln,
                    format!("permutation acts on {} points, expected {}", p.degree(), n.unwrap_or(0)),
                ));
            }
            Ok(p)
        };
        if let Some(rest) = line.strip_prefix("gen ") {
            let (name, p) =
                rest.split_once(':').ok_or_else(|| Error::parse(ln, "expected `gen <name>: <permutation>`"))?;
            let name = name.trim();
            let c = name.chars().next().filter(|c| name.len() == 1 && c.is_ascii_lowercase());
            let c = c.ok_or_else(|| Error::parse(ln, format!("bad generator name `{name}`")))?;
            if names.contains(&c) {
                return Err(Error::parse(ln, format!("generator `{c}` given twice")));
            }
            names.push(c);
            images.push(perm(p)?);
        } else if let Some(rest) = line.strip_prefix("A:") {
            group = Some(rest.parse::<FiniteAbelianGroup>().map_err(|e| Error::parse(ln, e.to_string()))?);
        } else if let Some(rest) = line.strip_prefix("central ") {
            let (k, p) =
                rest.split_once(':').ok_or_else(|| Error::parse(ln, "expected `central <k>: <permutation>`"))?;
            let k: usize = k.trim().parse().map_err(|_| Error::parse(ln, "bad factor index"))?;
            if k == 0 || central.insert(k - 1, perm(p)?).is_some() {
                return Err(Error::parse(ln, "bad or repeated factor index"));
            }
        } else {
            return Err(Error::parse(ln, format!("unrecognized line `{line}`")));
        }
    }
    let n = n.ok_or_else(|| Error::input("empty action file"))?;
    let hom = AlmostHom::new(n, names, images)?;
    let extra = match group {
        None if central.is_empty() => None,
        None => return Err(Error::input("`central` lines need an `A:` line")),
        Some(g) => {
            if central.len() != g.rank() || central.keys().enumerate().any(|(k, &j)| k != j) {
                return Err(Error::input(format!("need `central 1..{}` lines for {g}", g.rank())));
            }
            Some((g, central.into_values().collect()))
        }
    };
    Ok((hom, extra))
}

/// Relator defects and freeness scores of one almost-hom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectReport {
    /// `ℓ_n(φ(r))` per relator.
    pub relator_defects: Vec<Rational>,
    pub max_defect: Rational,
    /// Number of nonempty reduced words of length at most `L`.
    pub words: u64,
    /// Least `ℓ_n(φ(w))` over those words and the first word attaining it.
    /// Words are not tested for triviality in the group.
    pub min_freeness: Option<(Rational, Word)>,
}

pub fn defect_report(phi: &AlmostHom, p: &Presentation, max_len: usize, budget: u64) -> Result<DefectReport> {
    let images = phi.aligned(p)?;
    let relator_defects: Vec<Rational> =
        p.rels.iter().map(|r| eval_word(&images, r, phi.n).map(|q| hamming_length(&q))).collect::<Result<_>>()?;
    let max_defect = relator_defects.iter().copied().max().unwrap_or_default();
    let k = 2 * p.gens.len() as u128;
    let words: u128 = (1..=max_len as u32).map(|l| k * (k - 1).pow(l - 1)).sum();
    if words > budget as u128 {
        return Err(Error::capacity(format!("enumerating reduced words up to length {max_len}"), words, budget));
    }
    let letters: Vec<Letter> =
        (0..p.gens.len()).flat_map(|g| [Letter { gen: g, inverse: false }, Letter { gen: g, inverse: true }]).collect();
    let mut min_freeness: Option<(Rational, Word)> = None;
    // depth-first over reduced words carrying the partial permutation
    let mut stack: Vec<(Word, Perm)> = vec![(Vec::new(), Perm::identity(phi.n))];
    let inverses: Vec<Perm> = images.iter().map(|q| q.inverse()).collect();
    while let Some((w, perm)) = stack.pop() {
        if !w.is_empty() {
            let score = hamming_length(&perm);
            if min_freeness.as_ref().is_none_or(|(s, bw)| (score, w.len(), &w) < (*s, bw.len(), bw)) {
                min_freeness = Some((score, w.clone()));
            }
        }
        if w.len() == max_len {
            continue;
        }
        for &l in letters.iter().rev() {
            if w.last() == Some(&l.inv()) {
                continue;
            }
            let step = if l.inverse { &inverses[l.gen] } else { &images[l.gen] };
            let mut nw = w.clone();
            nw.push(l);
            stack.push((nw, perm.then(step)));
        }
    }
    Ok(DefectReport { relator_defects, max_defect, words: words as u64, min_freeness })
}
