//! Matching the block statistics of an almost-action against honest actions.

use num_traits::Signed;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::perm::{eval_word, Perm, Word};
use crate::rational::Rational;

use super::AlmostHom;

#[derive(Debug, Clone)]
pub struct Candidate {
    pub name: String,
    pub hom: AlmostHom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateResult {
    pub name: String,
    pub discrepancy: Rational,
    /// Block of every point of the candidate's set.
    pub labeling: Vec<usize>,
    pub exhaustive: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilityMatch {
    pub results: Vec<CandidateResult>,
    /// Index into `results`; ties go to the earlier candidate.
    pub best: usize,
    pub within_eps: bool,
}

impl StabilityMatch {
    pub fn best(&self) -> &CandidateResult {
        &self.results[self.best]
    }

    /// True when the best discrepancy was found by exhaustive search.
    pub fn certified(&self) -> bool {
        self.best().exhaustive
    }
}

/// `counts[g][i][j] = |B_i ∩ ψ(g)B_j|`.
fn counts(perms: &[Perm], labels: &[usize], d: usize) -> Vec<Vec<Vec<u64>>> {
    perms
        .iter()
        .map(|p| {
            let mut c = vec![vec![0u64; d]; d];
            for (x, &j) in labels.iter().enumerate() {
                c[labels[p.apply(x)]][j] += 1;
            }
            c
        })
        .collect()
}

struct Target {
    stats: Vec<Vec<Vec<Rational>>>,
    d: usize,
}

impl Target {
    fn discrepancy(&self, perms: &[Perm], labels: &[usize]) -> Rational {
        let size = Rational::from_integer(labels.len() as i128);
        let c = counts(perms, labels, self.d);
        let mut worst = Rational::from_integer(0);
        for (g, mat) in c.iter().enumerate() {
            for i in 0..self.d {
                for j in 0..self.d {
                    let diff = (self.stats[g][i][j] - Rational::from_integer(mat[i][j] as i128) / size).abs();
                    if diff > worst {
                        worst = diff;
                    }
                }
            }
        }
        worst
    }
}

fn decode(mut code: u64, d: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = (code % d as u64) as usize;
        code /= d as u64;
    }
    out
}

/// For each candidate, minimizes over labelings `B` of its set the largest
/// `| |A_i ∩ φ(g)A_j|/n − |B_i ∩ ψ(g)B_j|/|X| |` over blocks and the words
/// in `words`. `partition[p]` is the block of point `p`.
///
/// Labelings are enumerated exhaustively when there are at most `budget` of
/// them and the set has at most 12 points; otherwise seeded local search
/// with restarts is used and the result is flagged as not exhaustive.
pub fn stability_match(
    phi: &AlmostHom,
    partition: &[usize],
    candidates: &[Candidate],
    words: &[Word],
    eps: Rational,
    budget: u64,
    seed: u64,
) -> Result<StabilityMatch> {
    if candidates.is_empty() {
        return Err(Error::input("stability matching needs at least one candidate action"));
    }
    if partition.len() != phi.n {
        return Err(Error::input(format!("partition covers {} points, the action has {}", partition.len(), phi.n)));
    }
    let d = partition.iter().max().map_or(1, |m| m + 1);
    if d > 8 {
        return Err(Error::input(format!("at most 8 blocks are supported, got {d}")));
    }
    let own: Vec<Perm> = words.iter().map(|w| eval_word(&phi.images, w, phi.n)).collect::<Result<_>>()?;
    let n = Rational::from_integer(phi.n.max(1) as i128);
    let stats = counts(&own, partition, d)
        .into_iter()
        .map(|m| {
            m.into_iter().map(|row| row.into_iter().map(|c| Rational::from_integer(c as i128) / n).collect()).collect()
        })
        .collect();
    let target = Target { stats, d };
    let mut results = Vec::new();
    for (ci, cand) in candidates.iter().enumerate() {
        if cand.hom.names != phi.names {
            return Err(Error::input(format!("candidate `{}` uses different generator names", cand.name)));
        }
        let size = cand.hom.n;
        let perms: Vec<Perm> = words.iter().map(|w| eval_word(&cand.hom.images, w, size)).collect::<Result<_>>()?;
        let total = (d as u128).checked_pow(size as u32).unwrap_or(u128::MAX);
        let (discrepancy, labeling, exhaustive) = if size <= 12 && total <= budget as u128 {
            let best = (0..total as u64)
                .into_par_iter()
                .map(|code| {
                    let labels = decode(code, d, size);
                    (target.discrepancy(&perms, &labels), code)
                })
                .min()
                .expect("at least one labeling");
            (best.0, decode(best.1, d, size), true)
        } else {
            let (v, l) = local_search(&target, &perms, size, seed.wrapping_add(ci as u64));
            (v, l, false)
        };
        results.push(CandidateResult { name: cand.name.clone(), discrepancy, labeling, exhaustive });
    }
    let best = (0..results.len()).min_by_key(|&k| (results[k].discrepancy, k)).expect("nonempty");
    let within_eps = results[best].discrepancy < eps;
    Ok(StabilityMatch { results, best, within_eps })
}

fn local_search(target: &Target, perms: &[Perm], size: usize, seed: u64) -> (Rational, Vec<usize>) {
    let d = target.d;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(Rational, Vec<usize>)> = None;
    for _ in 0..8 {
        let mut labels: Vec<usize> = (0..size).map(|_| rng.gen_range(0..d)).collect();
        let mut cur = target.discrepancy(perms, &labels);
        loop {
            let mut improved = false;
            for x in 0..size {
                let keep = labels[x];
                for b in 0..d {
                    if b == keep {
                        continue;
                    }
                    labels[x] = b;
                    let v = target.discrepancy(perms, &labels);
                    if v < cur {
                        cur = v;
                        improved = true;
                        break;
                    }
                    labels[x] = keep;
                }
            }
            if !improved {
                break;
            }
        }
        if best.as_ref().is_none_or(|(v, l)| (cur, &labels) < (*v, l)) {
            best = Some((cur, labels));
        }
    }
    best.expect("at least one restart")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::parse_word;
    use crate::rational::rat;

    fn cyc(n: usize) -> AlmostHom {
        AlmostHom::new(n, vec!['a'], vec![Perm::cycle(n, &(0..n as u32).collect::<Vec<_>>()).unwrap()]).unwrap()
    }

    fn cand(n: usize) -> Candidate {
        Candidate { name: format!("Z/{n}"), hom: cyc(n) }
    }

    /// Discrepancy computed with bitmask set images.
    fn oracle(phi: &AlmostHom, a: &[usize], psi: &AlmostHom, b: &[usize], d: usize) -> Rational {
        let image =
            |p: &Perm, set: u32| (0..32).filter(|x| set >> x & 1 == 1).fold(0u32, |acc, x| acc | 1 << p.apply(x));
        let blocks = |l: &[usize]| {
            (0..d).map(|i| (0..l.len()).filter(|&x| l[x] == i).fold(0u32, |acc, x| acc | 1 << x)).collect::<Vec<_>>()
        };
        let (ba, bb) = (blocks(a), blocks(b));
        let mut worst = rat(0, 1);
        for i in 0..d {
            for j in 0..d {
                let u = rat((ba[i] & image(&phi.images[0], ba[j])).count_ones() as i128, phi.n as i128);
                let v = rat((bb[i] & image(&psi.images[0], bb[j])).count_ones() as i128, psi.n as i128);
                worst = worst.max((u - v).abs());
            }
        }
        worst
    }

    #[test]
    fn self_match_and_evens_odds() {
        let w = vec![parse_word("a", &['a']).unwrap()];
        let phi = cyc(6);
        let part = vec![0, 1, 0, 1, 0, 1];
        let r = stability_match(&phi, &part, &[cand(6)], &w, rat(1, 100), 1 << 20, 0).unwrap();
        assert_eq!(r.best().discrepancy, rat(0, 1));
        assert!(r.within_eps && r.certified());
    }

    #[test]
    fn five_cycle_against_z5_and_z6() {
        let w = vec![parse_word("a", &['a']).unwrap()];
        let phi = cyc(5);
        let part = vec![0, 0, 1, 1, 1];
        let r = stability_match(&phi, &part, &[cand(5), cand(6)], &w, rat(1, 10), 1 << 20, 0).unwrap();
        for (res, n) in r.results.iter().zip([5usize, 6]) {
            let best = (0..1u32 << n)
                .map(|code| {
                    let b: Vec<usize> = (0..n).map(|x| (code >> (n - 1 - x) & 1) as usize).collect();
                    oracle(&phi, &part, &cyc(n), &b, 2)
                })
                .min()
                .unwrap();
            assert_eq!(res.discrepancy, best);
            assert_eq!(oracle(&phi, &part, &cyc(n), &res.labeling, 2), best);
        }
        assert_eq!(r.results[0].discrepancy, rat(0, 1));
        assert!(r.results[1].discrepancy > rat(0, 1));
        assert_eq!(r.best, 0);
    }

    #[test]
    fn local_search_is_flagged_and_seeded() {
        let w = vec![parse_word("a", &['a']).unwrap()];
        let phi = cyc(6);
        let part = vec![0, 1, 0, 1, 0, 1];
        let a = stability_match(&phi, &part, &[cand(6)], &w, rat(1, 10), 10, 7).unwrap();
        let b = stability_match(&phi, &part, &[cand(6)], &w, rat(1, 10), 10, 7).unwrap();
        assert_eq!(a, b);
        assert!(!a.certified());
        assert!(stability_match(&phi, &part, &[], &w, rat(1, 10), 10, 7).is_err());
    }
}
