//! Quotients by the central `A`-action and the defect cocycle they carry.

use crate::abelian::AElement;
use crate::error::{Error, Result};
use crate::linalg::LinearMap;
use crate::perm::{Letter, Perm};
use crate::rational::Rational;

use super::{AlmostHom, ExtensionApproximation, ExtensionSpec};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedQuotient {
    /// The induced action on orbits, orbits numbered by their least point.
    pub hom: AlmostHom,
    pub orbit_of: Vec<usize>,
    pub orbits: Vec<Vec<usize>>,
    /// Per generator, points whose image left the orbit chosen by the vote.
    pub disagreements: Vec<usize>,
    /// Disagreeing points over all generators, divided by `n · |S|`.
    pub ambiguity_rate: Rational,
    /// Whether a vote produced a non-bijective orbit map that had to be
    /// repaired greedily. Repaired quotients are heuristic.
    pub repaired: bool,
}

/// The action of the `Γ̃`-generators on `A`-orbits. Each orbit goes to the
/// orbit most of its points land in, ties broken towards the smaller index.
pub fn induce_quotient(phi: &ExtensionApproximation) -> Result<InducedQuotient> {
    let n = phi.hom.n;
    let mut orbit_of = vec![usize::MAX; n];
    let mut orbits = Vec::new();
    let elements = phi.group.enumerate(u64::MAX)?;
    for p in 0..n {
        if orbit_of[p] != usize::MAX {
            continue;
        }
        let mut members: Vec<usize> = elements.iter().map(|a| phi.act(p, a)).collect();
        members.sort_unstable();
        members.dedup();
        for &q in &members {
            orbit_of[q] = orbits.len();
        }
        orbits.push(members);
    }
    let m = orbits.len();
    let mut images = Vec::new();
    let mut disagreements = Vec::new();
    let mut repaired = false;
    for s in &phi.hom.images {
        let mut votes = vec![vec![0usize; m]; m];
        for p in 0..n {
            votes[orbit_of[p]][orbit_of[s.apply(p)]] += 1;
        }
        let winner = |row: &[usize]| (0..m).max_by_key(|&t| (row[t], std::cmp::Reverse(t))).expect("nonempty");
        let mut target: Vec<usize> = votes.iter().map(|row| winner(row)).collect();
        let mut seen = vec![false; m];
        if !target.iter().all(|&t| !std::mem::replace(&mut seen[t], true)) {
            repaired = true;
            let mut taken = vec![false; m];
            let mut pending = Vec::new();
            for (o, row) in votes.iter().enumerate() {
                match (0..m).filter(|&t| !taken[t] && row[t] > 0).max_by_key(|&t| (row[t], std::cmp::Reverse(t))) {
                    Some(t) => {
                        taken[t] = true;
                        target[o] = t;
                    }
                    None => pending.push(o),
                }
            }
            let mut free = (0..m).filter(|&t| !taken[t]);
            for o in pending {
                target[o] = free.next().expect("as many free targets as pending orbits");
            }
        }
        disagreements.push((0..n).filter(|&p| orbit_of[s.apply(p)] != target[orbit_of[p]]).count());
        images.push(Perm::from_images(target.iter().map(|&t| t as u32).collect())?);
    }
    let total = (n * phi.hom.images.len()).max(1);
    let ambiguity_rate = Rational::new(disagreements.iter().sum::<usize>() as i128, total as i128);
    Ok(InducedQuotient {
        hom: AlmostHom::new(m, phi.hom.names.clone(), images)?,
        orbit_of,
        orbits,
        disagreements,
        ambiguity_rate,
        repaired,
    })
}

/// `β(s)(o)`: the `A`-coordinate of `Φ(s)(t(o))` relative to the section
/// point of its orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectCocycle {
    pub section: Vec<usize>,
    /// Indexed by generator (in the approximation's order), then orbit.
    pub beta: Vec<Vec<AElement>>,
    /// `(generator, orbit)` pairs where `Φ(s)(t(o))` lies outside the orbit
    /// the quotient assigned; `β` there is read in the orbit actually reached.
    pub mismatches: Vec<(usize, usize)>,
}

impl DefectCocycle {
    pub fn is_zero(&self) -> bool {
        self.beta.iter().flatten().all(|a| a.is_zero())
    }
}

/// Uses the least point of every orbit when `section` is `None`.
pub fn defect_cocycle(
    phi: &ExtensionApproximation,
    q: &InducedQuotient,
    section: Option<&[usize]>,
) -> Result<DefectCocycle> {
    let section: Vec<usize> = match section {
        None => q.orbits.iter().map(|o| o[0]).collect(),
        Some(t) => {
            if t.len() != q.orbits.len() {
                return Err(Error::input(format!("a transversal needs {} points, got {}", q.orbits.len(), t.len())));
            }
            for (o, &p) in t.iter().enumerate() {
                if p >= phi.hom.n || q.orbit_of[p] != o {
                    return Err(Error::input(format!("point {} is not in orbit {}", p + 1, o + 1)));
                }
            }
            t.to_vec()
        }
    };
    let coords = coordinates(phi, &section)?;
    let mut beta = Vec::new();
    let mut mismatches = Vec::new();
    for (s, img) in phi.hom.images.iter().zip(&q.hom.images).enumerate() {
        let (full, induced) = img;
        let row = (0..q.orbits.len())
            .map(|o| {
                let p = full.apply(section[o]);
                if q.orbit_of[p] != induced.apply(o) {
                    mismatches.push((s, o));
                }
                coords[p].clone()
            })
            .collect();
        beta.push(row);
    }
    Ok(DefectCocycle { section, beta, mismatches })
}

/// The unique `a` with `t(orbit(p))·a = p`, for every point.
fn coordinates(phi: &ExtensionApproximation, section: &[usize]) -> Result<Vec<AElement>> {
    let mut coords = vec![None; phi.hom.n];
    for a in phi.group.enumerate(u64::MAX)? {
        for &t in section {
            coords[phi.act(t, &a)] = Some(a.clone());
        }
    }
    Ok(coords.into_iter().map(|c| c.expect("free action covers every orbit")).collect())
}

/// Generator positions of the presentation inside the approximation.
fn generator_map(phi: &ExtensionApproximation, spec: &ExtensionSpec) -> Result<Vec<usize>> {
    if spec.group != phi.group {
        return Err(Error::input(format!("extension spec has A = {}, approximation has {}", spec.group, phi.group)));
    }
    if spec.presentation.gens.len() != phi.hom.names.len() {
        return Err(Error::input("the presentation and the approximation have different generators"));
    }
    spec.presentation
        .gens
        .iter()
        .map(|g| {
            phi.hom
                .names
                .iter()
                .position(|n| n == g)
                .ok_or_else(|| Error::input(format!("no image for generator `{g}`")))
        })
        .collect()
}

/// Walks `r` from orbit `o` through the induced action, summing `β`.
/// Returns the orbit reached and the accumulated element.
fn walk(
    q: &InducedQuotient,
    inverses: &[Perm],
    gmap: &[usize],
    spec: &ExtensionSpec,
    values: &dyn Fn(usize, usize) -> AElement,
    r: &[Letter],
    start: usize,
) -> (usize, AElement) {
    let g = &spec.group;
    let mut o = start;
    let mut total = g.zero();
    for l in r {
        let s = gmap[l.gen];
        if l.inverse {
            o = inverses[s].apply(o);
            total = g.sub(&total, &values(s, o)).expect("same group");
        } else {
            total = g.add(&total, &values(s, o)).expect("same group");
            o = q.hom.images[s].apply(o);
        }
    }
    (o, total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelatorAgreement {
    pub relator: String,
    pub alpha: AElement,
    /// Orbits whose walk along the relator closes up with total `α′(r)`.
    pub agreement: Rational,
    /// Orbits whose walk does not close up.
    pub unclosed: usize,
    /// Points `p` with `Φ(r)(p) = p·α′(r)`.
    pub point_agreement: Rational,
}

/// Compares `δβ` with `α′` relator by relator.
pub fn compare_delta_beta(
    phi: &ExtensionApproximation,
    q: &InducedQuotient,
    beta: &DefectCocycle,
    spec: &ExtensionSpec,
) -> Result<Vec<RelatorAgreement>> {
    let gmap = generator_map(phi, spec)?;
    let inverses: Vec<Perm> = q.hom.images.iter().map(|p| p.inverse()).collect();
    let full = phi.hom.aligned(&spec.presentation)?;
    let m = q.orbits.len();
    let n = phi.hom.n;
    let values = |s: usize, o: usize| beta.beta[s][o].clone();
    let mut out = Vec::new();
    for (r, alpha) in spec.presentation.rels.iter().zip(&spec.alpha) {
        let mut good = 0usize;
        let mut unclosed = 0usize;
        for o in 0..m {
            let (end, total) = walk(q, &inverses, &gmap, spec, &values, r, o);
            if end != o {
                unclosed += 1;
            } else if total == *alpha {
                good += 1;
            }
        }
        let phir = crate::perm::eval_word(&full, r, n)?;
        let points = (0..n).filter(|&p| phir.apply(p) == phi.act(p, alpha)).count();
        out.push(RelatorAgreement {
            relator: spec.presentation.format(r),
            alpha: alpha.clone(),
            agreement: Rational::new(good as i128, m.max(1) as i128),
            unclosed,
            point_agreement: Rational::new(points as i128, n.max(1) as i128),
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingCheck {
    /// `b(s)(o)` with walk sums `θ(α′(r))` on every orbit, recomputed after solving.
    pub primitive: Option<Vec<Vec<AElement>>>,
    /// When no primitive exists: the relator, orbit and factor of `A` at
    /// which the system is inconsistent.
    pub certificate: Option<(String, usize, usize)>,
    pub unknowns: usize,
    pub equations: usize,
}

impl VanishingCheck {
    pub fn consistent(&self) -> bool {
        self.primitive.is_some()
    }
}

/// Solves for `b: S → P(A)`, `P` the algebra of `A`-invariant sets, with
/// `δb = θ(α′)`: along every relator and from every orbit the signed sum of
/// `b` equals `α′(r)`.
pub fn afree_vanishing_check(phi: &ExtensionApproximation, spec: &ExtensionSpec) -> Result<VanishingCheck> {
    let gmap = generator_map(phi, spec)?;
    for (j, z) in phi.central.iter().enumerate() {
        if let Some(k) = phi.hom.images.iter().position(|s| !s.commutes_with(z)) {
            return Err(Error::Precondition(format!(
                "generator `{}` does not commute with central generator {}",
                phi.hom.names[k],
                j + 1
            )));
        }
    }
    let full = phi.hom.aligned(&spec.presentation)?;
    for (r, alpha) in spec.presentation.rels.iter().zip(&spec.alpha) {
        if crate::perm::eval_word(&full, r, phi.hom.n)? != phi.central_perm(alpha) {
            return Err(Error::Precondition(format!(
                "relator `{}` does not act as alpha = {alpha}: the action is not exact",
                spec.presentation.format(r)
            )));
        }
    }
    let q = induce_quotient(phi)?;
    let m = q.orbits.len();
    let ngen = phi.hom.images.len();
    let inverses: Vec<Perm> = q.hom.images.iter().map(|p| p.inverse()).collect();
    let rels = &spec.presentation.rels;
    let unknowns = ngen * m;
    let equations = rels.len() * m;
    // column (s, o) lists its signed occurrences in the equations (r, o')
    let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); unknowns];
    for (ri, r) in rels.iter().enumerate() {
        for start in 0..m {
            let mut o = start;
            for l in r {
                let s = gmap[l.gen];
                if l.inverse {
                    o = inverses[s].apply(o);
                    columns[s * m + o].push((ri * m + start, -1));
                } else {
                    columns[s * m + o].push((ri * m + start, 1));
                    o = q.hom.images[s].apply(o);
                }
            }
            if o != start {
                return Err(Error::Precondition(format!(
                    "relator `{}` does not close up on the quotient",
                    spec.presentation.format(r)
                )));
            }
        }
    }
    let g = &spec.group;
    let mut solution = vec![vec![g.zero(); m]; ngen];
    for (j, &mj) in g.factors().iter().enumerate() {
        let map = LinearMap::new(mj as u64, unknowns, equations, &columns);
        let rhs: Vec<u64> = (0..equations).map(|e| spec.alpha[e / m].0[j] as u64).collect();
        match map.solve(&rhs) {
            Ok(x) => {
                for (idx, v) in x.into_iter().enumerate() {
                    solution[idx / m][idx % m].0[j] = v as u32;
                }
            }
            Err(e) => {
                return Ok(VanishingCheck {
                    primitive: None,
                    certificate: Some((spec.presentation.format(&rels[e / m]), e % m, j)),
                    unknowns,
                    equations,
                });
            }
        }
    }
    let values = |s: usize, o: usize| solution[s][o].clone();
    for (r, alpha) in rels.iter().zip(&spec.alpha) {
        for o in 0..m {
            let (end, total) = walk(&q, &inverses, &gmap, spec, &values, r, o);
            if end != o || total != *alpha {
                return Err(Error::Structure(format!(
                    "solved primitive fails relator `{}` at orbit {}",
                    spec.presentation.format(r),
                    o + 1
                )));
            }
        }
    }
    Ok(VanishingCheck { primitive: Some(solution), certificate: None, unknowns, equations })
}
