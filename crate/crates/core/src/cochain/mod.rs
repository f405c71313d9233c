//! Cochains with coefficients in `A` or `P(A)` on a pure simplicial complex.
//!
//! A cochain of degree `i` stores one `A`-value per coordinate `(σ, atom)`,
//! `σ ∈ X(i)`, laid out cell-major. Plain `A`-coefficients are the one-atom
//! case. Coefficients may be twisted by edge permutations of the atoms, which
//! is how a finite cover's co-induced module `map(F, A)` is represented on
//! the base.

mod cohomology;
mod io;
mod search;

pub use cohomology::{cohomology, is_coboundary, CoboundaryTest, Cohomology, CohomologyGenerator};
pub use io::{format_cochain, parse_cochain};
pub use search::{cosystole, cosystolic_norm, distance_to_subgroup, CosetMin, Cosystole, SearchConfig, SearchMode};
pub(crate) use search::{unflatten, Coset};

use num_traits::Zero;

use crate::abelian::{AElement, FiniteAbelianGroup};
use crate::boolean::{MeasuredBoolean, PAElement};
use crate::complex::{SimplicialComplex, WeightScheme};
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::rational::Rational;

/// The coefficient module: a group `A`, atom weights, and an optional twist.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coefficients {
    group: FiniteAbelianGroup,
    atom_weights: Vec<Rational>,
    twist: Option<Vec<Perm>>,
}

impl Coefficients {
    /// Plain `A`-coefficients.
    pub fn plain(group: FiniteAbelianGroup) -> Self {
        Coefficients { group, atom_weights: vec![Rational::from_integer(1)], twist: None }
    }

    /// `P(A)` over a finite measured algebra, with trivial action on cochains.
    pub fn measured(group: FiniteAbelianGroup, algebra: &MeasuredBoolean) -> Self {
        Coefficients { group, atom_weights: algebra.weights().to_vec(), twist: None }
    }

    /// `map(F, A)` with uniform weights, twisted by one permutation of `F`
    /// per edge of `X(1)` (in the complex's edge order).
    pub fn twisted(group: FiniteAbelianGroup, edge_perms: Vec<Perm>) -> Result<Self> {
        let n = edge_perms.first().map_or(1, |p| p.degree());
        if n == 0 || edge_perms.iter().any(|p| p.degree() != n) {
            return Err(Error::Shape("edge permutations must act on one common nonempty fiber".into()));
        }
        Ok(Coefficients { group, atom_weights: vec![Rational::new(1, n as i128); n], twist: Some(edge_perms) })
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn atoms(&self) -> usize {
        self.atom_weights.len()
    }

    pub fn atom_weights(&self) -> &[Rational] {
        &self.atom_weights
    }

    pub fn twist(&self) -> Option<&[Perm]> {
        self.twist.as_deref()
    }

    pub fn is_plain(&self) -> bool {
        self.atoms() == 1 && self.twist.is_none()
    }

    /// Short description for reports.
    pub fn describe(&self) -> String {
        match (&self.twist, self.atoms()) {
            (None, 1) => self.group.to_string(),
            (None, n) => format!("P({}) over {n} atoms", self.group),
            (Some(_), n) => format!("map(F, {}) twisted, |F| = {n}", self.group),
        }
    }

    fn check_complex(&self, x: &SimplicialComplex) -> Result<()> {
        if let Some(t) = &self.twist {
            if x.dim() >= 1 && t.len() != x.count(1) {
                return Err(Error::Shape(format!(
                    "twist has {} edge labels but the complex has {} edges",
                    t.len(),
                    x.count(1)
                )));
            }
        }
        Ok(())
    }
}

/// A cochain of some degree; values are stored per coordinate and per cyclic factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cochain {
    degree: usize,
    cells: usize,
    atoms: usize,
    rank: usize,
    values: Vec<u32>,
}

impl Cochain {
    pub fn zero(x: &SimplicialComplex, coeffs: &Coefficients, degree: usize) -> Self {
        let cells = x.count(degree);
        let (atoms, rank) = (coeffs.atoms(), coeffs.group.rank());
        Cochain { degree, cells, atoms, rank, values: vec![0; cells * atoms * rank] }
    }

    /// Builds a cochain from one vector per cyclic factor, indexed by coordinate.
    pub fn from_factor_vectors(
        x: &SimplicialComplex,
        coeffs: &Coefficients,
        degree: usize,
        vectors: &[Vec<u64>],
    ) -> Result<Self> {
        let mut c = Self::zero(x, coeffs, degree);
        if vectors.len() != c.rank || vectors.iter().any(|v| v.len() != c.coordinates()) {
            return Err(Error::Shape("factor vectors do not match the cochain space".into()));
        }
        for (j, v) in vectors.iter().enumerate() {
            let m = coeffs.group.factors()[j] as u64;
            for (k, &a) in v.iter().enumerate() {
                c.values[k * c.rank + j] = (a % m) as u32;
            }
        }
        Ok(c)
    }

    /// The zero cochain of the same degree and group over a different atom count.
    pub fn zero_with_atoms(&self, atoms: usize) -> Cochain {
        Cochain {
            degree: self.degree,
            cells: self.cells,
            atoms,
            rank: self.rank,
            values: vec![0; self.cells * atoms * self.rank],
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn atoms(&self) -> usize {
        self.atoms
    }

    /// Number of coordinates `(σ, atom)`.
    pub fn coordinates(&self) -> usize {
        self.cells * self.atoms
    }

    pub fn raw(&self) -> &[u32] {
        &self.values
    }

    pub fn get(&self, cell: usize, atom: usize) -> AElement {
        let k = (cell * self.atoms + atom) * self.rank;
        AElement(self.values[k..k + self.rank].to_vec())
    }

    pub fn set(&mut self, cell: usize, atom: usize, a: &AElement) {
        let k = (cell * self.atoms + atom) * self.rank;
        self.values[k..k + self.rank].copy_from_slice(&a.0);
    }

    /// The value on a cell as an element of `P(A)`.
    pub fn pa_value(&self, cell: usize) -> PAElement {
        PAElement::from_pairs((0..self.atoms).map(|p| (p, self.get(cell, p))))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0)
    }

    fn coordinate_nonzero(&self, coord: usize) -> bool {
        self.values[coord * self.rank..(coord + 1) * self.rank].iter().any(|&v| v != 0)
    }

    /// The coordinates of cyclic factor `j`.
    pub fn factor_vector(&self, j: usize) -> Vec<u64> {
        self.values.iter().skip(j).step_by(self.rank.max(1)).map(|&v| v as u64).collect()
    }

    pub fn add(&self, other: &Cochain, group: &FiniteAbelianGroup) -> Result<Cochain> {
        if (self.degree, self.cells, self.atoms, self.rank) != (other.degree, other.cells, other.atoms, other.rank) {
            return Err(Error::Shape("cochains live in different spaces".into()));
        }
        let mut out = self.clone();
        for (k, v) in out.values.iter_mut().enumerate() {
            let m = group.factors()[k % self.rank];
            *v = (*v + other.values[k]) % m;
        }
        Ok(out)
    }

    pub fn neg(&self, group: &FiniteAbelianGroup) -> Cochain {
        let mut out = self.clone();
        for (k, v) in out.values.iter_mut().enumerate() {
            let m = group.factors()[k % self.rank];
            *v = (m - *v) % m;
        }
        out
    }

    /// The constant-in-atoms cochain `θ(c)` of an `A`-cochain.
    pub fn theta(&self, atoms: usize) -> Cochain {
        assert_eq!(self.atoms, 1, "theta applies to plain cochains");
        let mut values = Vec::with_capacity(self.values.len() * atoms);
        for cell in self.values.chunks(self.rank.max(1)) {
            for _ in 0..atoms {
                values.extend_from_slice(cell);
            }
        }
        if self.rank == 0 {
            values.clear();
        }
        Cochain { degree: self.degree, cells: self.cells, atoms, rank: self.rank, values }
    }
}

/// Howell bases of `B^i` per factor, with the sparse generators `δ(e_k)`.
#[derive(Debug, Clone)]
pub(crate) struct Coboundaries {
    pub bases: Vec<crate::linalg::HowellBasis>,
    pub moves: Vec<(usize, Vec<(usize, u64)>)>,
}

/// The sparse integer matrix of `δ_i` on coordinates: for every coordinate of
/// `C^i`, the `(coordinate of C^{i+1}, sign)` pairs it contributes to.
pub fn coboundary_matrix(x: &SimplicialComplex, coeffs: &Coefficients, i: usize) -> Result<Vec<Vec<(usize, i64)>>> {
    if i >= x.dim() {
        return Err(Error::input(format!(
            "coboundary from degree {i} needs a complex of dimension > {i}, got {}",
            x.dim()
        )));
    }
    coeffs.check_complex(x)?;
    let atoms = coeffs.atoms();
    let mut out = vec![Vec::new(); x.count(i) * atoms];
    for (t, facets) in x.facets(i + 1).iter().enumerate() {
        let first_edge = coeffs.twist.as_ref().map(|perms| {
            let tau = &x.simplices(i + 1)[t];
            let e = x.index_of(&tau[..2]).expect("edges of a simplex are simplices");
            &perms[e]
        });
        for (j, &f) in facets.iter().enumerate() {
            let sign = if j % 2 == 0 { 1 } else { -1 };
            for p in 0..atoms {
                // δc(τ, p) reads the face τ∖v_0 at the fiber point p·g_{v0 v1}.
                let q = match (j, first_edge) {
                    (0, Some(g)) => g.apply(p),
                    _ => p,
                };
                out[f * atoms + q].push((t * atoms + p, sign));
            }
        }
    }
    Ok(out)
}

pub fn coboundary(x: &SimplicialComplex, coeffs: &Coefficients, c: &Cochain) -> Result<Cochain> {
    let i = c.degree;
    check_cochain(x, coeffs, c)?;
    let matrix = coboundary_matrix(x, coeffs, i)?;
    let mut out = Cochain::zero(x, coeffs, i + 1);
    let rank = c.rank;
    for (k, targets) in matrix.iter().enumerate() {
        if !c.coordinate_nonzero(k) {
            continue;
        }
        for &(t, s) in targets {
            for j in 0..rank {
                let m = coeffs.group.factors()[j] as i64;
                let slot = &mut out.values[t * rank + j];
                *slot = (*slot as i64 + s * c.values[k * rank + j] as i64).rem_euclid(m) as u32;
            }
        }
    }
    Ok(out)
}

pub(crate) fn check_cochain(x: &SimplicialComplex, coeffs: &Coefficients, c: &Cochain) -> Result<()> {
    if c.degree > x.dim() || c.cells != x.count(c.degree) || c.atoms != coeffs.atoms() || c.rank != coeffs.group.rank()
    {
        return Err(Error::Shape("cochain does not belong to this complex and coefficient module".into()));
    }
    Ok(())
}

/// Per-coordinate weights `ν_i(σ)·w(atom)` with `ν_i` normalized to mass one.
pub fn coordinate_weights(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    i: usize,
) -> Result<Vec<Rational>> {
    if scheme.dims() != x.dim() + 1 || scheme.raw(i.min(x.dim())).len() != x.count(i) {
        return Err(Error::Shape(format!("weight scheme does not cover degree {i} of the complex")));
    }
    let nu = scheme.normalized(i)?;
    Ok(nu.iter().flat_map(|w| coeffs.atom_weights.iter().map(move |a| w * a)).collect())
}

/// `‖c‖ = Σ_x ν_i(x)·μ(c(x))`.
pub fn norm(x: &SimplicialComplex, coeffs: &Coefficients, scheme: &WeightScheme, c: &Cochain) -> Result<Rational> {
    check_cochain(x, coeffs, c)?;
    let w = coordinate_weights(x, coeffs, scheme, c.degree)?;
    Ok((0..c.coordinates()).filter(|&k| c.coordinate_nonzero(k)).map(|k| w[k]).sum())
}

/// The operator bound `max_σ Σ_{τ ⊃ σ} ν_{i+1}(τ) / ν_i(σ)` for `δ_i`.
pub fn lipschitz_constant(x: &SimplicialComplex, scheme: &WeightScheme, i: usize) -> Result<Rational> {
    if i >= x.dim() {
        return Err(Error::input(format!("no coboundary out of degree {i}")));
    }
    let lo = scheme.normalized(i)?;
    let hi = scheme.normalized(i + 1)?;
    Ok(x.cofaces(i)
        .iter()
        .enumerate()
        .map(|(s, cof)| cof.iter().map(|&t| hi[t]).sum::<Rational>() / lo[s])
        .fold(Rational::zero(), |a, b| if b > a { b } else { a }))
}
