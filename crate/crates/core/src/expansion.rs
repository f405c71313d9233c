//! Expansion constants, expander verdicts, weighted spectra and the
//! link-by-link hypothesis checklist.

use std::cmp::Ordering;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::cochain::{
    coboundary_matrix, cohomology, cosystole, norm, unflatten, Cochain, Coefficients, Coset, Cosystole, SearchConfig,
    SearchMode,
};
use crate::complex::{Simplex, SimplicialComplex, WeightScheme};
use crate::error::{Error, Result};
use crate::linalg::{HowellBasis, LinearMap};
use crate::rational::{common_denominator, Rational};

/// `ε_i = min ‖δc‖ / dist(c, Z^i)` over `c ∉ Z^i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionConstant {
    pub degree: usize,
    /// `None` when every cochain is a cocycle (the condition is vacuous).
    pub value: Option<Rational>,
    /// A minimizing cochain, chosen closest to `Z^i` within its class.
    pub witness: Option<Cochain>,
    pub coboundary_norm: Option<Rational>,
    pub distance: Option<Rational>,
    pub certified: bool,
    /// `|C^i|`, the number of cochains an exhaustive search covers.
    pub search_space: u128,
}

struct ImageRow {
    factor: usize,
    order: u64,
    y: Vec<(usize, u64)>,
    pre: Vec<(usize, u64)>,
}

fn sparse(v: &[u64]) -> Vec<(usize, u64)> {
    v.iter().enumerate().filter(|(_, &a)| a != 0).map(|(k, &a)| (k, a)).collect()
}

fn axpy(vals: &mut [u64], rank: usize, factor: usize, m: u64, entries: &[(usize, u64)], times: u64) {
    for &(k, v) in entries {
        let slot = &mut vals[k * rank + factor];
        *slot = (*slot + times % m * v) % m;
    }
}

fn weight_of(vals: &[u64], rank: usize, costs: &[u64]) -> u64 {
    costs
        .iter()
        .enumerate()
        .filter(|(k, _)| vals[k * rank..(k + 1) * rank].iter().any(|&v| v != 0))
        .map(|(_, c)| c)
        .sum()
}

pub fn expansion_constant(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    i: usize,
    cfg: &SearchConfig,
) -> Result<ExpansionConstant> {
    let vacuous = |space| ExpansionConstant {
        degree: i,
        value: None,
        witness: None,
        coboundary_norm: None,
        distance: None,
        certified: true,
        search_space: space,
    };
    if i > x.dim() {
        return Err(Error::input(format!("degree {i} exceeds the dimension {}", x.dim())));
    }
    if i == x.dim() {
        return Ok(vacuous(0));
    }
    let rank = coeffs.group().rank();
    let moduli: Vec<u64> = coeffs.group().factors().iter().map(|&m| m as u64).collect();
    let nsrc = x.count(i) * coeffs.atoms();
    let ntgt = x.count(i + 1) * coeffs.atoms();
    let cols = (nsrc + ntgt) as u128;
    if cols * cols > cfg.linalg_budget as u128 {
        return Err(Error::capacity("normal-form linear algebra (columns squared)", cols * cols, cfg.linalg_budget));
    }
    let matrix = coboundary_matrix(x, coeffs, i)?;
    let maps: Vec<LinearMap> = moduli.iter().map(|&m| LinearMap::new(m, nsrc, ntgt, &matrix)).collect();
    let kernels: Vec<HowellBasis> = maps.iter().map(|f| f.kernel()).collect();
    let mut rows = Vec::new();
    for (j, f) in maps.iter().enumerate() {
        for (c, y, pre) in f.image_with_preimages() {
            let order = moduli[j] / y[c];
            rows.push(ImageRow { factor: j, order, y: sparse(&y), pre: sparse(&pre) });
        }
    }
    let kernel_size = kernels.iter().fold(1u128, |a, k| a.saturating_mul(k.span_size()));
    let image_size = rows.iter().fold(1u128, |a, r| a.saturating_mul(r.order as u128));
    let space = image_size.saturating_mul(kernel_size);
    if rows.is_empty() {
        return Ok(vacuous(space));
    }
    let exact = match cfg.mode {
        SearchMode::Exact if space > cfg.budget as u128 => {
            return Err(Error::capacity("exact expansion constant (rerun in heuristic mode)", space, cfg.budget));
        }
        SearchMode::Exact => true,
        SearchMode::Auto => space <= cfg.budget as u128,
        SearchMode::Heuristic => false,
    };
    let lo = coordinate_costs(x, coeffs, scheme, i)?;
    let hi = coordinate_costs(x, coeffs, scheme, i + 1)?;
    let kernel_moves: Vec<(usize, Vec<(usize, u64)>)> =
        kernels.iter().enumerate().flat_map(|(j, k)| k.rows().map(move |(_, r)| (j, sparse(r)))).collect();
    let template = Cochain::zero(x, coeffs, i);

    // Distance of the class with preimage `c0` to the cocycles.
    let distance = |c0: &[u64], inner_exact: bool| -> (u64, Vec<u64>) {
        let coset = Coset {
            moduli: moduli.clone(),
            rep: c0.to_vec(),
            subgroup: &kernels,
            moves: &kernel_moves,
            costs: lo.0.clone(),
        };
        if inner_exact {
            coset.exact(None, None)
        } else {
            coset.anneal(cfg.seed, cfg.heuristic_steps / 10 + 100)
        }
    };
    // Candidate as (ratio numerator·den, ...) compared exactly as rationals.
    type Cand = (Rational, Vec<u64>, u64, u64);
    let better = |a: &Cand, b: &Cand| -> bool { (a.0, &a.1) < (b.0, &b.1) };
    let ratio = |ycost: u64, dcost: u64| -> Rational {
        Rational::new(ycost as i128 * lo.1 as i128, hi.1 as i128 * dcost as i128)
    };

    let best: Option<Cand> = if exact {
        // Enumerate the image by mixed-radix counting over its Howell rows,
        // split into contiguous chunks.
        let chunks = 256u128.min(image_size);
        let per = image_size.div_ceil(chunks);
        let pool = cfg.pool()?;
        let found: Vec<Option<Cand>> = pool.install(|| {
            (0..chunks)
                .into_par_iter()
                .map(|chunk| {
                    let start = chunk * per;
                    let end = ((chunk + 1) * per).min(image_size);
                    let mut digits = vec![0u64; rows.len()];
                    let mut rest = start;
                    for (d, r) in rows.iter().enumerate().rev() {
                        digits[d] = (rest % r.order as u128) as u64;
                        rest /= r.order as u128;
                    }
                    let mut y = vec![0u64; ntgt * rank];
                    let mut c = vec![0u64; nsrc * rank];
                    for (d, r) in rows.iter().enumerate() {
                        axpy(&mut y, rank, r.factor, moduli[r.factor], &r.y, digits[d]);
                        axpy(&mut c, rank, r.factor, moduli[r.factor], &r.pre, digits[d]);
                    }
                    let mut local: Option<Cand> = None;
                    for idx in start..end {
                        if idx > start {
                            // increment, last digit fastest
                            for d in (0..rows.len()).rev() {
                                let r = &rows[d];
                                let m = moduli[r.factor];
                                digits[d] += 1;
                                if digits[d] < r.order {
                                    axpy(&mut y, rank, r.factor, m, &r.y, 1);
                                    axpy(&mut c, rank, r.factor, m, &r.pre, 1);
                                    break;
                                }
                                digits[d] = 0;
                                let back = m - (r.order - 1) % m;
                                axpy(&mut y, rank, r.factor, m, &r.y, back);
                                axpy(&mut c, rank, r.factor, m, &r.pre, back);
                            }
                        }
                        if idx == 0 {
                            continue;
                        }
                        let ycost = weight_of(&y, rank, &hi.0);
                        // dist ≤ 1, so the ratio is at least ‖y‖.
                        if let Some(b) = &local {
                            if Rational::new(ycost as i128, hi.1 as i128) > b.0 {
                                continue;
                            }
                        }
                        let (dcost, w) = distance(&c, true);
                        let cand = (ratio(ycost, dcost), w, ycost, dcost);
                        if local.as_ref().is_none_or(|b| better(&cand, b)) {
                            local = Some(cand);
                        }
                    }
                    local
                })
                .collect()
        });
        found.into_iter().flatten().reduce(|a, b| if better(&b, &a) { b } else { a })
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let samples = cfg.heuristic_steps.max(1);
        let inner_exact = kernel_size <= cfg.budget as u128;
        let mut best: Option<Cand> = None;
        for _ in 0..samples {
            let mut y = vec![0u64; ntgt * rank];
            let mut c = vec![0u64; nsrc * rank];
            for r in &rows {
                let k = rng.gen_range(0..r.order);
                axpy(&mut y, rank, r.factor, moduli[r.factor], &r.y, k);
                axpy(&mut c, rank, r.factor, moduli[r.factor], &r.pre, k);
            }
            if y.iter().all(|&v| v == 0) {
                continue;
            }
            let ycost = weight_of(&y, rank, &hi.0);
            let (dcost, w) = distance(&c, inner_exact);
            let cand = (ratio(ycost, dcost), w, ycost, dcost);
            if best.as_ref().is_none_or(|b| better(&cand, b)) {
                best = Some(cand);
            }
        }
        best
    };
    let Some((value, w, ycost, dcost)) = best else {
        return Err(Error::Structure("no nonzero coboundary was sampled".into()));
    };
    Ok(ExpansionConstant {
        degree: i,
        value: Some(value),
        witness: Some(unflatten(&template, &w)),
        coboundary_norm: Some(Rational::new(ycost as i128, hi.1 as i128)),
        distance: Some(Rational::new(dcost as i128, lo.1 as i128)),
        certified: exact,
        search_space: space,
    })
}

fn coordinate_costs(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    i: usize,
) -> Result<(Vec<u64>, u64)> {
    common_denominator(&crate::cochain::coordinate_weights(x, coeffs, scheme, i)?)
}

/// One degree of an expander verdict.
#[derive(Debug, Clone)]
pub struct DegreeRecord {
    pub degree: usize,
    /// Order of `H^i`, reduced by the constants in degree 0.
    pub reduced_cohomology_order: u128,
    pub cosystole: Cosystole,
    pub expansion: ExpansionConstant,
    pub cosystole_ok: bool,
    pub expansion_ok: bool,
}

#[derive(Debug, Clone)]
pub struct ExpansionReport {
    pub target: Rational,
    pub degrees: Vec<DegreeRecord>,
    /// Set when cohomology vanishing is part of the verdict.
    pub requires_vanishing: bool,
}

impl ExpansionReport {
    pub fn certified(&self) -> bool {
        self.degrees.iter().all(|d| d.cosystole.certified && d.expansion.certified)
    }

    pub fn degree_ok(&self, d: &DegreeRecord) -> bool {
        d.cosystole_ok && d.expansion_ok && (!self.requires_vanishing || d.reduced_cohomology_order == 1)
    }

    pub fn holds(&self) -> bool {
        self.degrees.iter().all(|d| self.degree_ok(d))
    }
}

/// Degree-0 cosystole of the reduced complex: the least norm of a cocycle
/// that is not constant.
fn reduced_cosystole_0(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    cfg: &SearchConfig,
) -> Result<(u128, Cosystole)> {
    let h = cohomology(x, coeffs, 0, cfg.linalg_budget)?;
    let constants = coeffs.group().order() as u128;
    let reduced = h.order() / constants.max(1);
    if reduced <= 1 {
        return Ok((1, Cosystole { value: None, witness: None, certified: true, classes: 0 }));
    }
    let mut best: Option<(Rational, Cochain)> = None;
    for ks in h.nonzero_classes(cfg.budget)? {
        let z = h.combination(coeffs, &ks);
        let constant = (0..z.coordinates()).all(|k| {
            z.raw()[k * coeffs.group().rank()..(k + 1) * coeffs.group().rank()] == z.raw()[..coeffs.group().rank()]
        });
        if constant {
            continue;
        }
        let v = norm(x, coeffs, scheme, &z)?;
        if best.as_ref().is_none_or(|(b, w)| (v, &z) < (*b, w)) {
            best = Some((v, z));
        }
    }
    let (v, w) = best.expect("a nonconstant cocycle exists");
    Ok((reduced, Cosystole { value: Some(v), witness: Some(w), certified: true, classes: reduced - 1 }))
}

fn expander_report(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    dims: std::ops::RangeInclusive<usize>,
    target: Rational,
    requires_vanishing: bool,
    cfg: &SearchConfig,
) -> Result<ExpansionReport> {
    let mut degrees = Vec::new();
    for i in dims {
        if i > x.dim() {
            return Err(Error::input(format!("degree {i} exceeds the dimension {}", x.dim())));
        }
        let (order, cs) = if i == 0 {
            reduced_cosystole_0(x, coeffs, scheme, cfg)?
        } else {
            let h = cohomology(x, coeffs, i, cfg.linalg_budget)?;
            (h.order(), cosystole(x, coeffs, scheme, i, cfg)?)
        };
        let ex = expansion_constant(x, coeffs, scheme, i, cfg)?;
        let cosystole_ok = cs.value.is_none_or(|v| v >= target);
        let expansion_ok = ex.value.is_none_or(|v| v >= target);
        degrees.push(DegreeRecord {
            degree: i,
            reduced_cohomology_order: order,
            cosystole: cs,
            expansion: ex,
            cosystole_ok,
            expansion_ok,
        });
    }
    Ok(ExpansionReport { target, degrees, requires_vanishing })
}

/// Cosystolic inequality and expansion in each requested degree.
pub fn cosystolic_expander_check(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    dims: std::ops::RangeInclusive<usize>,
    target: Rational,
    cfg: &SearchConfig,
) -> Result<ExpansionReport> {
    expander_report(x, coeffs, scheme, dims, target, false, cfg)
}

/// As [`cosystolic_expander_check`], additionally requiring vanishing
/// (reduced) cohomology in each degree.
pub fn coboundary_expander_check(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    scheme: &WeightScheme,
    dims: std::ops::RangeInclusive<usize>,
    target: Rational,
    cfg: &SearchConfig,
) -> Result<ExpansionReport> {
    expander_report(x, coeffs, scheme, dims, target, true, cfg)
}

pub const SPECTRAL_TOL: f64 = 1e-9;

/// Largest `|X(k)|` handed to the dense eigensolver.
pub const SPECTRAL_LIMIT: usize = 2000;

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Eigenvalues (ascending) of `δ*δ` on `C^k(X; R)` for the inner product
/// `⟨f, g⟩ = Σ m(σ)/k! f(σ) g(σ)`.
pub fn upper_laplacian_spectrum(x: &SimplicialComplex, k: usize) -> Result<Vec<f64>> {
    if k >= x.dim() {
        return Err(Error::input(format!("degree {k} has no coboundary in a complex of dimension {}", x.dim())));
    }
    let n = x.count(k);
    if n > SPECTRAL_LIMIT {
        return Err(Error::capacity("dense eigensolver", n, SPECTRAL_LIMIT as u64));
    }
    let m = WeightScheme::m(x);
    let wk: Vec<f64> = m.raw(k).iter().map(|w| crate::rational::to_f64(w) / factorial(k)).collect();
    let wk1: Vec<f64> = m.raw(k + 1).iter().map(|w| crate::rational::to_f64(w) / factorial(k + 1)).collect();
    // L = W_k^{-1/2} δᵀ W_{k+1} δ W_k^{-1/2}
    let mut l = DMatrix::<f64>::zeros(n, n);
    let plain = Coefficients::plain(crate::abelian::FiniteAbelianGroup::cyclic(2));
    let delta = coboundary_matrix(x, &plain, k)?;
    let mut columns: Vec<Vec<(usize, f64)>> = vec![Vec::new(); x.count(k + 1)];
    for (s, targets) in delta.iter().enumerate() {
        for &(t, sign) in targets {
            columns[t].push((s, sign as f64));
        }
    }
    for (t, entries) in columns.iter().enumerate() {
        for &(a, sa) in entries {
            for &(b, sb) in entries {
                l[(a, b)] += sa * sb * wk1[t] / (wk[a] * wk[b]).sqrt();
            }
        }
    }
    let mut ev: Vec<f64> =
        SymmetricEigen::new(l).eigenvalues.iter().map(|&v| if v.abs() < 1e-12 { 0.0 } else { v }).collect();
    ev.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    Ok(ev)
}

/// Spectrum of the `m`-weighted random walk on the 1-skeleton of one link.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkSpectrum {
    /// The face whose link this is; empty for the complex itself.
    pub face: Simplex,
    pub vertices: usize,
    /// Second largest absolute eigenvalue; `None` for links without edges.
    pub lambda_abs: Option<f64>,
    /// Second largest eigenvalue.
    pub lambda_two: Option<f64>,
}

/// Random-walk spectrum of a complex's own 1-skeleton with its `m`-weights.
pub fn walk_spectrum(x: &SimplicialComplex) -> Result<(Option<f64>, Option<f64>)> {
    if x.dim() < 1 {
        return Ok((None, None));
    }
    let n = x.count(0);
    if n > SPECTRAL_LIMIT {
        return Err(Error::capacity("dense eigensolver", n, SPECTRAL_LIMIT as u64));
    }
    let m = WeightScheme::m(x);
    let mut w = DMatrix::<f64>::zeros(n, n);
    let mut deg = vec![0.0f64; n];
    for (e, fs) in x.facets(1).iter().enumerate() {
        let we = crate::rational::to_f64(&m.raw(1)[e]);
        w[(fs[0], fs[1])] += we;
        w[(fs[1], fs[0])] += we;
        deg[fs[0]] += we;
        deg[fs[1]] += we;
    }
    for a in 0..n {
        for b in 0..n {
            if w[(a, b)] != 0.0 {
                w[(a, b)] /= (deg[a] * deg[b]).sqrt();
            }
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(w).eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let two = ev.get(1).copied();
    let mut abs: Vec<f64> = ev.iter().map(|v| v.abs()).collect();
    abs.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    Ok((abs.get(1).copied(), two))
}

/// Walk spectra of `X` itself and of the links of all faces of dimension at
/// most `d - 2` (links with at least one edge).
pub fn skeleton_expansion(x: &SimplicialComplex) -> Result<Vec<WalkSpectrum>> {
    let (a, t) = walk_spectrum(x)?;
    let mut out = vec![WalkSpectrum { face: Vec::new(), vertices: x.count(0), lambda_abs: a, lambda_two: t }];
    for i in 0..x.dim().saturating_sub(1) {
        for s in x.simplices(i) {
            let link = x.link(s)?.expect("non-maximal face");
            let (a, t) = walk_spectrum(&link.complex)?;
            out.push(WalkSpectrum { face: s.clone(), vertices: link.complex.count(0), lambda_abs: a, lambda_two: t });
        }
    }
    Ok(out)
}

/// One link in the hypothesis checklist.
#[derive(Debug, Clone)]
pub struct LinkEntry {
    pub face: Simplex,
    pub link_dim: usize,
    pub coboundary: std::result::Result<ExpansionReport, Error>,
    pub spectrum: std::result::Result<WalkSpectrum, Error>,
}

impl LinkEntry {
    pub fn coboundary_ok(&self) -> Option<bool> {
        self.coboundary.as_ref().ok().map(|r| r.holds())
    }

    /// Eigenvalues carry round-off, so `λ` within `SPECTRAL_TOL` of `μ` passes.
    pub fn skeleton_ok(&self, mu: f64) -> Option<bool> {
        self.spectrum.as_ref().ok().map(|s| s.lambda_two.is_none_or(|l| l <= mu + SPECTRAL_TOL))
    }
}

#[derive(Debug, Clone)]
pub struct KmReport {
    pub beta: Rational,
    pub mu: f64,
    pub links: Vec<LinkEntry>,
    /// Largest number of maximal simplices at a vertex.
    pub degree_bound: u64,
}

impl KmReport {
    /// `Some(true)` when every link passes both checks, `Some(false)` on a
    /// failure, `None` when some link could not be decided.
    pub fn verdict(&self) -> Option<bool> {
        let mut undecided = false;
        for l in &self.links {
            match (l.coboundary_ok(), l.skeleton_ok(self.mu)) {
                (Some(false), _) | (_, Some(false)) => return Some(false),
                (None, _) | (_, None) => undecided = true,
                _ => {}
            }
        }
        if undecided {
            None
        } else {
            Some(true)
        }
    }

    /// The pair `(min{Q⁻², μ}, μ)` quoted from the theorem.
    pub fn implied_pair(&self) -> (f64, f64) {
        let q = self.degree_bound.max(1) as f64;
        ((1.0 / (q * q)).min(self.mu), self.mu)
    }

    pub fn certified(&self) -> bool {
        self.links.iter().all(|l| l.coboundary.as_ref().map_or(true, |r| r.certified()))
    }
}

/// For every nonempty face of dimension at most `d - 2`: coboundary expansion
/// of its link in degrees `0..dim(link)-1` with threshold `beta`, and its walk
/// spectrum against `mu`. The complex itself contributes only its spectrum.
pub fn km_hypotheses_report(
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    beta: Rational,
    mu: f64,
    cfg: &SearchConfig,
) -> Result<KmReport> {
    if coeffs.twist().is_some() {
        return Err(Error::input("link checks use untwisted coefficients"));
    }
    let mut faces: Vec<Simplex> = Vec::new();
    for i in 0..x.dim().saturating_sub(1) {
        faces.extend(x.simplices(i).iter().cloned());
    }
    let links = faces
        .into_iter()
        .map(|s| {
            let link = x.link(&s)?.expect("non-maximal face");
            let lx = link.complex;
            let coboundary =
                coboundary_expander_check(&lx, coeffs, &WeightScheme::mu(&lx), 0..=lx.dim() - 1, beta, cfg);
            let spectrum = walk_spectrum(&lx).map(|(a, t)| WalkSpectrum {
                face: s.clone(),
                vertices: lx.count(0),
                lambda_abs: a,
                lambda_two: t,
            });
            Ok(LinkEntry { face: s, link_dim: lx.dim(), coboundary, spectrum })
        })
        .collect::<Result<Vec<_>>>()?;
    let degree_bound = (0..x.count(0)).map(|v| x.top_coface_count(0, v)).max().unwrap_or(0);
    Ok(KmReport { beta, mu, links, degree_bound })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::FiniteAbelianGroup;
    use crate::generators::{complete_complex, cycle_graph, torus_7};
    use crate::rational::rat;

    fn z2() -> Coefficients {
        Coefficients::plain(FiniteAbelianGroup::cyclic(2))
    }

    #[test]
    fn triangle_and_k4() {
        let tri = complete_complex(3, 2).unwrap();
        let e = expansion_constant(&tri, &z2(), &WeightScheme::mu(&tri), 0, &SearchConfig::default()).unwrap();
        assert_eq!(e.value, Some(rat(2, 1)));
        assert_eq!(e.distance, Some(rat(1, 3)));
        assert_eq!(
            expansion_constant(&tri, &z2(), &WeightScheme::mu(&tri), 2, &SearchConfig::default()).unwrap().value,
            None
        );
        let k4 = complete_complex(4, 1).unwrap();
        let e = expansion_constant(&k4, &z2(), &WeightScheme::mu(&k4), 0, &SearchConfig::default()).unwrap();
        assert_eq!(e.value, Some(rat(4, 3)));
    }

    #[test]
    fn expander_checks() {
        let (c3, _) = cycle_graph(3).unwrap();
        let s = WeightScheme::mu(&c3);
        let cfg = SearchConfig::default();
        assert!(cosystolic_expander_check(&c3, &z2(), &s, 0..=1, rat(1, 3), &cfg).unwrap().holds());
        let r = cosystolic_expander_check(&c3, &z2(), &s, 0..=1, rat(1, 2), &cfg).unwrap();
        assert!(!r.holds());
        assert!(!r.degrees[1].cosystole_ok);
        assert!(!coboundary_expander_check(&c3, &z2(), &s, 0..=1, rat(1, 3), &cfg).unwrap().holds());
        let tri = complete_complex(3, 2).unwrap();
        let r = coboundary_expander_check(&tri, &z2(), &WeightScheme::mu(&tri), 0..=0, rat(2, 1), &cfg).unwrap();
        assert!(r.holds());
    }

    #[test]
    fn spectra() {
        for n in 3..=8usize {
            let k = complete_complex(n, 1).unwrap();
            let ev = upper_laplacian_spectrum(&k, 0).unwrap();
            assert!(ev[0].abs() < 1e-9);
            for v in &ev[1..] {
                assert!((v - n as f64 / (n as f64 - 1.0)).abs() < 1e-9 * v);
            }
            let (a, t) = walk_spectrum(&k).unwrap();
            assert!((a.unwrap() - 1.0 / (n as f64 - 1.0)).abs() < 1e-9);
            assert!((t.unwrap() + 1.0 / (n as f64 - 1.0)).abs() < 1e-9);
        }
        let two = SimplicialComplex::build(&[vec![0, 1], vec![1, 2], vec![3, 4]]).unwrap();
        let ev = upper_laplacian_spectrum(&two, 0).unwrap();
        assert_eq!(ev.iter().filter(|v| v.abs() < 1e-9).count(), 2);
        assert!((walk_spectrum(&two).unwrap().0.unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn torus_links() {
        let (t, _) = torus_7();
        let r = km_hypotheses_report(&t, &z2(), rat(1, 10), 0.6, &SearchConfig::default()).unwrap();
        assert_eq!(r.links.len(), 7);
        for l in &r.links {
            let cb = l.coboundary.as_ref().unwrap();
            // C6 in degree 0: cutting an arc of k vertices costs 2/6 at distance k/6
            assert_eq!(cb.degrees[0].expansion.value, Some(rat(2, 3)));
            assert!((l.spectrum.as_ref().unwrap().lambda_two.unwrap() - 0.5).abs() < 1e-9);
        }
        assert_eq!(r.degree_bound, 6);
        assert_eq!(r.verdict(), Some(true));
    }
}
