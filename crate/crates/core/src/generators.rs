//! Deterministic constructors for the test corpus.

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{Simplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A spanning tree of the 1-skeleton together with, for every edge `u < v`,
/// the element of an abelian fundamental group `Z^r` traversed by going along
/// the tree to `u`, across the edge, and back along the tree from `v`.
/// Tree edges have zero holonomy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalGroupData {
    pub tree: Vec<[usize; 2]>,
    /// Indexed like `X(1)`.
    pub holonomy: Vec<Vec<i64>>,
}

/// All `(d+1)`-subsets of `{0..n-1}`.
pub fn complete_complex(n: usize, d: usize) -> Result<SimplicialComplex> {
    if d + 1 > n {
        return Err(Error::input(format!("a {d}-simplex needs {} vertices, only {n} given", d + 1)));
    }
    let tops: Vec<Simplex> = (0..n).combinations(d + 1).collect();
    SimplicialComplex::build(&tops)
}

/// The cycle graph on `n ≥ 3` vertices with its generator of `π₁ = Z`.
pub fn cycle_graph(n: usize) -> Result<(SimplicialComplex, FundamentalGroupData)> {
    if n < 3 {
        return Err(Error::input("a simplicial cycle needs at least 3 vertices"));
    }
    let edges: Vec<Simplex> = (0..n)
        .map(|i| {
            let mut e = vec![i, (i + 1) % n];
            e.sort();
            e
        })
        .collect();
    let x = SimplicialComplex::build(&edges)?;
    let tree = (0..n - 1).map(|i| [i, i + 1]).collect();
    let holonomy = x.simplices(1).iter().map(|e| vec![if *e == [0, n - 1] { -1 } else { 0 }]).collect();
    Ok((x, FundamentalGroupData { tree, holonomy }))
}

/// Boundary of the octahedron: vertices `0..5`, antipodal pairs `{0,1}, {2,3}, {4,5}`.
pub fn octahedron() -> SimplicialComplex {
    let mut tops = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                tops.push(vec![a, b, c]);
            }
        }
    }
    SimplicialComplex::build(&tops).expect("octahedron")
}

fn normalized_vectors(q: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    for v in (0..3).map(|_| 0..q).multi_cartesian_product() {
        let first = v.iter().find(|&&c| c != 0);
        if first == Some(&1) {
            out.push([v[0], v[1], v[2]]);
        }
    }
    out
}

/// Flag complex of proper nonzero subspaces of `F_q^3` (the spherical building
/// of type `A₂`): vertices `0..P` are points, `P..2P` are lines, and edges are
/// incident point-line pairs.
pub fn flag_complex_subspaces(q: u32, n: u32) -> Result<SimplicialComplex> {
    if !matches!(q, 2 | 3) || n != 3 {
        return Err(Error::input(format!(
            "flag complexes are generated for q in {{2,3}} and n = 3 only, got q={q} n={n}"
        )));
    }
    // Lines are encoded by normal vectors: point p lies on line l iff p·l = 0.
    let pts = normalized_vectors(q);
    let np = pts.len();
    let mut edges = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        for (j, l) in pts.iter().enumerate() {
            if (p[0] * l[0] + p[1] * l[1] + p[2] * l[2]) % q == 0 {
                edges.push(vec![i, np + j]);
            }
        }
    }
    SimplicialComplex::build(&edges)
}

/// The 7-vertex triangulation of the torus with triangles `{i, i+1, i+3}` and
/// `{i, i+2, i+3}` mod 7, and its `π₁ = Z²` data.
///
/// The triangulation is the quotient of the triangular lattice by
/// `(x, y) ↦ x + 3y mod 7`; holonomies are expressed in the basis
/// `(1, 2), (-3, 1)` of the kernel lattice.
pub fn torus_7() -> (SimplicialComplex, FundamentalGroupData) {
    let mut tops = Vec::new();
    for i in 0..7usize {
        for t in [[0, 1, 3], [0, 2, 3]] {
            let mut s: Vec<usize> = t.iter().map(|o| (i + o) % 7).collect();
            s.sort();
            tops.push(s);
        }
    }
    let x = SimplicialComplex::build(&tops).expect("torus");
    let step = |d: usize| -> [i64; 2] {
        match d {
            1 => [1, 0],
            3 => [0, 1],
            2 => [-1, 1],
            6 => [-1, 0],
            4 => [0, -1],
            5 => [1, -1],
            _ => unreachable!(),
        }
    };
    let (tree, pos) = bfs_tree(&x, |u, v| step((v + 7 - u) % 7));
    let holonomy = x
        .simplices(1)
        .iter()
        .map(|e| {
            let (u, v) = (e[0], e[1]);
            let s = step(v - u);
            let h = [pos[u][0] + s[0] - pos[v][0], pos[u][1] + s[1] - pos[v][1]];
            debug_assert_eq!((h[0] + 3 * h[1]).rem_euclid(7), 0);
            // h = a·(1,2) + b·(-3,1)
            let a = (h[0] + 3 * h[1]) / 7;
            let b = (-2 * h[0] + h[1]) / 7;
            vec![a, b]
        })
        .collect();
    (x, FundamentalGroupData { tree, holonomy })
}

/// Breadth-first spanning tree from vertex label 0 with developing positions.
fn bfs_tree(x: &SimplicialComplex, step: impl Fn(usize, usize) -> [i64; 2]) -> (Vec<[usize; 2]>, Vec<[i64; 2]>) {
    let n = x.count(0);
    let mut pos = vec![None; n];
    pos[0] = Some([0i64, 0]);
    let mut tree = Vec::new();
    let mut queue = std::collections::VecDeque::from([0usize]);
    while let Some(u) = queue.pop_front() {
        for e in x.simplices(1) {
            let (a, b) = (e[0], e[1]);
            let other = if a == u {
                b
            } else if b == u {
                a
            } else {
                continue;
            };
            if pos[other].is_none() {
                let s = step(u, other);
                let p = pos[u].unwrap();
                pos[other] = Some([p[0] + s[0], p[1] + s[1]]);
                tree.push([a, b]);
                queue.push_back(other);
            }
        }
    }
    (tree, pos.into_iter().map(|p| p.expect("connected")).collect())
}

/// Output of [`random_complex`].
#[derive(Debug, Clone)]
pub struct RandomComplex {
    pub complex: SimplicialComplex,
    /// Redraws needed before a pure complex was found.
    pub retries: u32,
    /// Set when no pure draw was found and the complex was purified.
    pub warning: Option<String>,
}

pub const RANDOM_COMPLEX_RETRIES: u32 = 16;

/// Full `(d-1)`-skeleton of the simplex on `n` vertices plus each `d`-face with
/// probability `p`, drawn from ChaCha8 seeded with `seed`. Non-pure draws are
/// retried; after [`RANDOM_COMPLEX_RETRIES`] failures the top-dimensional part
/// is returned with a warning.
pub fn random_complex(n: usize, d: usize, p: f64, seed: u64) -> Result<RandomComplex> {
    if d == 0 || d + 1 > n {
        return Err(Error::input(format!("random complexes need 1 <= d < n, got n={n} d={d}")));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::input(format!("inclusion probability {p} outside [0,1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates: Vec<Simplex> = (0..n).combinations(d + 1).collect();
    let ridges: Vec<Simplex> = (0..n).combinations(d).collect();
    let mut last = Vec::new();
    for attempt in 0..=RANDOM_COMPLEX_RETRIES {
        let chosen: Vec<Simplex> = candidates.iter().filter(|_| rng.gen_bool(p)).cloned().collect();
        let mut covered = std::collections::HashSet::new();
        for t in &chosen {
            for r in t.iter().copied().combinations(d) {
                covered.insert(r);
            }
        }
        if !chosen.is_empty() && covered.len() == ridges.len() {
            return Ok(RandomComplex { complex: SimplicialComplex::build(&chosen)?, retries: attempt, warning: None });
        }
        last = chosen;
    }
    let warning = Some(format!(
        "no pure draw in {} attempts; returned the pure {} part",
        RANDOM_COMPLEX_RETRIES + 1,
        if last.is_empty() { "(d-1)-skeleton" } else { "top-dimensional" }
    ));
    let complex = if last.is_empty() { complete_complex(n, d - 1)? } else { SimplicialComplex::build(&last)? };
    Ok(RandomComplex { complex, retries: RANDOM_COMPLEX_RETRIES, warning })
}
