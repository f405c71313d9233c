//! Cocycles, coboundaries and `H^i = Z^i / B^i`, one cyclic factor at a time.

use crate::complex::SimplicialComplex;
use crate::error::{Error, Result};
use crate::linalg::{HowellBasis, LinearMap};

use super::{check_cochain, coboundary_matrix, Coboundaries, Cochain, Coefficients};

/// A cocycle generating part of `H^i` inside one cyclic factor of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyGenerator {
    pub factor: usize,
    pub cocycle: Cochain,
    /// Order modulo the coboundaries and the earlier generators of the same
    /// factor; these orders multiply to `|H^i|`.
    pub relative_order: u64,
    /// Order of the class in `H^i`.
    pub order: u64,
}

#[derive(Debug, Clone)]
pub struct Cohomology {
    pub degree: usize,
    pub generators: Vec<CohomologyGenerator>,
    /// Per factor: Howell bases of `Z^i` and `B^i` on coordinates.
    pub cocycles: Vec<HowellBasis>,
    pub coboundaries: Vec<HowellBasis>,
}

impl Cohomology {
    pub fn is_trivial(&self) -> bool {
        self.generators.is_empty()
    }

    /// `|H^i|`, saturating.
    pub fn order(&self) -> u128 {
        self.generators.iter().fold(1u128, |a, g| a.saturating_mul(g.relative_order as u128))
    }

    /// The invariant-style summary `Z/k1 x Z/k2 ...` of the generator orders.
    pub fn describe(&self) -> String {
        if self.generators.is_empty() {
            return "0".into();
        }
        self.generators.iter().map(|g| format!("Z/{}", g.relative_order)).collect::<Vec<_>>().join(" x ")
    }

    /// The cocycle `Σ k_g · z_g` for coefficients `0 ≤ k_g < relative_order`.
    pub fn combination(&self, coeffs: &Coefficients, ks: &[u64]) -> Cochain {
        assert_eq!(ks.len(), self.generators.len());
        let mut out = None::<Cochain>;
        for (g, &k) in self.generators.iter().zip(ks) {
            let mut term = g.cocycle.clone();
            let m = coeffs.group().factors()[g.factor];
            for (idx, v) in term.values.iter_mut().enumerate() {
                if idx % term.rank == g.factor {
                    *v = ((*v as u64 * k) % m as u64) as u32;
                }
            }
            out = Some(match out {
                None => term,
                Some(acc) => acc.add(&term, coeffs.group()).expect("same space"),
            });
        }
        out.expect("combination of an empty generator list has no shape")
    }

    /// Every coefficient tuple of a nonzero class, in lexicographic order.
    pub fn nonzero_classes(&self, bound: u64) -> Result<Vec<Vec<u64>>> {
        let total = self.order();
        if total.saturating_sub(1) > bound as u128 {
            return Err(Error::capacity("enumerating cohomology classes", total - 1, bound));
        }
        let orders: Vec<u64> = self.generators.iter().map(|g| g.relative_order).collect();
        let mut out = Vec::new();
        let mut ks = vec![0u64; orders.len()];
        loop {
            // increment, last coordinate fastest
            let mut pos = orders.len();
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                ks[pos] += 1;
                if ks[pos] < orders[pos] {
                    break;
                }
                ks[pos] = 0;
            }
            out.push(ks.clone());
        }
    }

    /// True when `c` (a cocycle) is a coboundary.
    pub fn is_trivial_class(&self, c: &Cochain) -> bool {
        self.coboundaries.iter().enumerate().all(|(j, b)| b.contains(&c.factor_vector(j)))
    }
}

fn check_linalg(cols: usize, budget: u64) -> Result<()> {
    let cells = (cols as u128) * (cols as u128);
    if cells > budget as u128 {
        return Err(Error::capacity("normal-form linear algebra (columns squared)", cells, budget));
    }
    Ok(())
}

/// Howell bases of `B^i` per factor together with the generating moves `δ(e_k·1)`.
pub(crate) fn coboundaries(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    i: usize,
    linalg_budget: u64,
) -> Result<Coboundaries> {
    let ncoords = x.count(i) * coeffs.atoms();
    check_linalg(ncoords, linalg_budget)?;
    let factors: Vec<u64> = coeffs.group().factors().iter().map(|&m| m as u64).collect();
    if i == 0 {
        return Ok(Coboundaries {
            bases: factors.iter().map(|&m| HowellBasis::new(m, ncoords)).collect(),
            moves: Vec::new(),
        });
    }
    let matrix = coboundary_matrix(x, coeffs, i - 1)?;
    let mut bases = Vec::new();
    let mut moves = Vec::new();
    for (j, &m) in factors.iter().enumerate() {
        let rows = matrix.iter().map(|img| dense(img, ncoords, m));
        bases.push(HowellBasis::from_rows(m, ncoords, rows));
        for img in &matrix {
            let v = dense(img, ncoords, m);
            let sparse: Vec<(usize, u64)> =
                v.iter().enumerate().filter(|(_, &a)| a != 0).map(|(k, &a)| (k, a)).collect();
            if !sparse.is_empty() {
                moves.push((j, sparse));
            }
        }
    }
    Ok(Coboundaries { bases, moves })
}

fn dense(img: &[(usize, i64)], n: usize, m: u64) -> Vec<u64> {
    let mut v = vec![0u64; n];
    for &(t, s) in img {
        v[t] = (v[t] as i64 + s).rem_euclid(m as i64) as u64;
    }
    v
}

/// Howell bases of `Z^i` per factor.
pub(crate) fn cocycles(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    i: usize,
    linalg_budget: u64,
) -> Result<Vec<HowellBasis>> {
    let ncoords = x.count(i) * coeffs.atoms();
    let factors: Vec<u64> = coeffs.group().factors().iter().map(|&m| m as u64).collect();
    if i == x.dim() {
        check_linalg(ncoords, linalg_budget)?;
        return Ok(factors
            .iter()
            .map(|&m| {
                HowellBasis::from_rows(
                    m,
                    ncoords,
                    (0..ncoords).map(|k| {
                        let mut e = vec![0; ncoords];
                        e[k] = 1;
                        e
                    }),
                )
            })
            .collect());
    }
    let ntgt = x.count(i + 1) * coeffs.atoms();
    check_linalg(ncoords + ntgt, linalg_budget)?;
    let matrix = coboundary_matrix(x, coeffs, i)?;
    Ok(factors.iter().map(|&m| LinearMap::new(m, ncoords, ntgt, &matrix).kernel()).collect())
}

/// Generators of `H^i(X; coefficients)` with their orders.
pub fn cohomology(x: &SimplicialComplex, coeffs: &Coefficients, i: usize, linalg_budget: u64) -> Result<Cohomology> {
    if i > x.dim() {
        return Err(Error::input(format!("degree {i} exceeds the dimension {}", x.dim())));
    }
    let z = cocycles(x, coeffs, i, linalg_budget)?;
    let b = coboundaries(x, coeffs, i, linalg_budget)?.bases;
    let mut generators = Vec::new();
    for (j, (zj, bj)) in z.iter().zip(&b).enumerate() {
        let mut span = bj.clone();
        for (_, row) in zj.rows() {
            if span.contains(row) {
                continue;
            }
            let relative_order = span.relative_order(row);
            let order = bj.relative_order(row);
            span.insert(row.clone());
            span.canonicalize();
            let mut vectors: Vec<Vec<u64>> = (0..coeffs.group().rank()).map(|_| vec![0; row.len()]).collect();
            vectors[j] = row.clone();
            let cocycle = Cochain::from_factor_vectors(x, coeffs, i, &vectors)?;
            generators.push(CohomologyGenerator { factor: j, cocycle, relative_order, order });
        }
    }
    Ok(Cohomology { degree: i, generators, cocycles: z, coboundaries: b })
}

/// Either a primitive `b` with `δb = c`, or the factor and coordinate at which
/// the normal-form reduction certifies that none exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoboundaryTest {
    Primitive(Cochain),
    Obstructed { factor: usize, coordinate: usize },
}

pub fn is_coboundary(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    c: &Cochain,
    linalg_budget: u64,
) -> Result<CoboundaryTest> {
    check_cochain(x, coeffs, c)?;
    let i = c.degree();
    if i == 0 {
        return Err(Error::input("degree-0 cochains have no primitives"));
    }
    let nsrc = x.count(i - 1) * coeffs.atoms();
    let ntgt = c.coordinates();
    check_linalg(nsrc + ntgt, linalg_budget)?;
    let matrix = coboundary_matrix(x, coeffs, i - 1)?;
    let mut vectors = Vec::new();
    for (j, &m) in coeffs.group().factors().iter().enumerate() {
        let f = LinearMap::new(m as u64, nsrc, ntgt, &matrix);
        match f.solve(&c.factor_vector(j)) {
            Ok(b) => vectors.push(b),
            Err(coordinate) => return Ok(CoboundaryTest::Obstructed { factor: j, coordinate }),
        }
    }
    Ok(CoboundaryTest::Primitive(Cochain::from_factor_vectors(x, coeffs, i - 1, &vectors)?))
}

#[cfg(test)]
mod tests {
    use super::super::coboundary;
    use super::*;
    use crate::abelian::{AElement, FiniteAbelianGroup};
    use crate::generators::{complete_complex, cycle_graph, octahedron, torus_7};

    const BUDGET: u64 = 1 << 24;

    fn plain(g: &str) -> Coefficients {
        Coefficients::plain(g.parse().unwrap())
    }

    #[test]
    fn examples() {
        let (c3, _) = cycle_graph(3).unwrap();
        let h = cohomology(&c3, &plain("Z/2"), 1, BUDGET).unwrap();
        assert_eq!(h.generators.len(), 1);
        assert_eq!(h.generators[0].order, 2);
        let tri = complete_complex(3, 2).unwrap();
        assert!(cohomology(&tri, &plain("Z/2"), 1, BUDGET).unwrap().is_trivial());
        let (t, _) = torus_7();
        assert_eq!(cohomology(&t, &plain("Z/2"), 1, BUDGET).unwrap().order(), 4);
        assert_eq!(cohomology(&t, &plain("Z/2"), 2, BUDGET).unwrap().order(), 2);
        assert_eq!(cohomology(&t, &plain("Z/4"), 1, BUDGET).unwrap().describe(), "Z/4 x Z/4");
        assert_eq!(cohomology(&t, &plain("Z/2 x Z/3"), 0, BUDGET).unwrap().order(), 6);
        let o = octahedron();
        assert!(cohomology(&o, &plain("Z/2"), 1, BUDGET).unwrap().is_trivial());
        assert_eq!(cohomology(&o, &plain("Z/3"), 2, BUDGET).unwrap().order(), 3);
    }

    #[test]
    fn cycle_edge_is_not_a_coboundary() {
        let (c3, _) = cycle_graph(3).unwrap();
        let co = plain("Z/2");
        let mut c = Cochain::zero(&c3, &co, 1);
        c.set(0, 0, &AElement(vec![1]));
        assert!(matches!(is_coboundary(&c3, &co, &c, BUDGET).unwrap(), CoboundaryTest::Obstructed { .. }));
        // exhaustive cross-check over all 8 vertex cochains
        for bits in 0..8u32 {
            let mut b = Cochain::zero(&c3, &co, 0);
            for v in 0..3 {
                b.set(v, 0, &AElement(vec![(bits >> v) & 1]));
            }
            assert_ne!(coboundary(&c3, &co, &b).unwrap(), c);
        }
        let zero = Cochain::zero(&c3, &co, 1);
        assert_eq!(
            is_coboundary(&c3, &co, &zero, BUDGET).unwrap(),
            CoboundaryTest::Primitive(Cochain::zero(&c3, &co, 0))
        );
    }

    #[test]
    fn solves_random_coboundaries() {
        let (t, _) = torus_7();
        let co = Coefficients::plain(FiniteAbelianGroup::new(vec![2, 4]).unwrap());
        let mut b = Cochain::zero(&t, &co, 1);
        for e in 0..t.count(1) {
            b.set(e, 0, &AElement(vec![(e % 2) as u32, (e * 7 % 4) as u32]));
        }
        let c = coboundary(&t, &co, &b).unwrap();
        match is_coboundary(&t, &co, &c, BUDGET).unwrap() {
            CoboundaryTest::Primitive(p) => assert_eq!(coboundary(&t, &co, &p).unwrap(), c),
            other => panic!("expected a primitive, got {other:?}"),
        }
    }
}
