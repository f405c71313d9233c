//! Permutations of `{0, .., n-1}` and words over a generator alphabet.
//!
//! Words act on the right: the permutation of `l1 l2 .. lk` sends `p` to
//! `lk(..l2(l1(p))..)`. Text forms are one-line notation with 1-based points.

use std::fmt;

use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n as u32).collect())
    }

    /// Builds a permutation from 0-based images, checking bijectivity.
    pub fn from_images(images: Vec<u32>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            let i = i as usize;
            if i >= n || seen[i] {
                return Err(Error::input(format!("not a permutation of {n} points: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    /// A single cycle on 0-based points, as a permutation of `n` points.
    pub fn cycle(n: usize, points: &[u32]) -> Result<Self> {
        let mut img: Vec<u32> = (0..n as u32).collect();
        for (k, &p) in points.iter().enumerate() {
            let q = points[(k + 1) % points.len()];
            if p as usize >= n {
                return Err(Error::input(format!("cycle point {p} out of range")));
            }
            img[p as usize] = q;
        }
        Perm::from_images(img)
    }

    /// Parses one-line notation with 1-based points, e.g. `2 3 1`.
    pub fn parse_one_line(s: &str) -> Result<Self> {
        let images = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<u32>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::input(format!("bad point `{t}` in permutation `{s}`"))),
            })
            .collect::<Result<Vec<_>>>()?;
        Perm::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, p: usize) -> usize {
        self.0[p] as usize
    }

    /// `self` first, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm(self.0.iter().map(|&p| other.0[p as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.0.len()];
        for (p, &q) in self.0.iter().enumerate() {
            inv[q as usize] = p as u32;
        }
        Perm(inv)
    }

    pub fn pow(&self, k: i64) -> Perm {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = Perm::identity(self.degree());
        for _ in 0..k.unsigned_abs() {
            out = out.then(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(p, &q)| p as u32 == q)
    }

    pub fn moved_points(&self) -> usize {
        self.0.iter().enumerate().filter(|&(p, &q)| p as u32 != q).count()
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.then(other) == other.then(self)
    }

    /// Exchanges the images of points `a` and `b`.
    pub fn swap_images(&mut self, a: usize, b: usize) {
        self.0.swap(a, b);
    }

    pub fn one_line(&self) -> String {
        self.0.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.one_line())
    }
}

/// Normalized support size `|{i : σ(i) ≠ i}| / n`.
pub fn hamming_length(p: &Perm) -> Rational {
    if p.degree() == 0 {
        return Rational::from_integer(0);
    }
    Rational::new(p.moved_points() as i128, p.degree() as i128)
}

/// Normalized Hamming distance `ℓ(σ τ⁻¹)`.
pub fn hamming_distance(a: &Perm, b: &Perm) -> Rational {
    hamming_length(&b.inverse().then(a))
}

/// A generator index with an inversion flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }
}

pub type Word = Vec<Letter>;

pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inv()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Evaluates a word under an assignment of permutations to generators.
pub fn eval_word(images: &[Perm], word: &[Letter], degree: usize) -> Result<Perm> {
    let mut cur: Vec<u32> = (0..degree as u32).collect();
    let inverses: Vec<Option<Perm>> = {
        let mut v = vec![None; images.len()];
        for l in word.iter().filter(|l| l.inverse) {
            if l.gen < images.len() && v[l.gen].is_none() {
                v[l.gen] = Some(images[l.gen].inverse());
            }
        }
        v
    };
    for l in word {
        let p = if l.inverse { inverses.get(l.gen).and_then(|x| x.as_ref()) } else { images.get(l.gen) }
            .ok_or_else(|| Error::input(format!("unknown generator index {}", l.gen)))?;
        for c in cur.iter_mut() {
            *c = p.0[*c as usize];
        }
    }
    Ok(Perm(cur))
}

/// Parses a word in which each character is a generator name; uppercase
/// denotes the inverse of the corresponding lowercase generator.
pub fn parse_word(s: &str, gens: &[char]) -> Result<Word> {
    s.chars()
        .filter(|c| !c.is_whitespace())
        .map(|c| {
            let lower = c.to_ascii_lowercase();
            let gen = gens
                .iter()
                .position(|&g| g == lower)
                .ok_or_else(|| Error::input(format!("unknown generator `{c}` in word `{s}`")))?;
            Ok(Letter { gen, inverse: c.is_ascii_uppercase() })
        })
        .collect()
}

pub fn format_word(word: &[Letter], gens: &[char]) -> String {
    word.iter().map(|l| if l.inverse { gens[l.gen].to_ascii_uppercase() } else { gens[l.gen] }).collect()
}
