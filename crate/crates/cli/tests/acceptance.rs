//! End-to-end acceptance checks. Runs without the libtest harness so that
//! every `criterion N` line reaches stdout; any failure makes the run fail.

use std::cell::Cell;
use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;

use metcoh_core::cochain::{
    coboundary, cohomology, cosystolic_norm, format_cochain, Cochain, Coefficients, SearchConfig,
};
use metcoh_core::complex::Simplex;
use metcoh_core::covers::{contractivity_check, shapiro_check, EdgeLabeling};
use metcoh_core::expansion::{expansion_constant, upper_laplacian_spectrum};
use metcoh_core::generators::{
    complete_complex, cycle_graph, flag_complex_subspaces, random_complex, torus_7, FundamentalGroupData,
};
use metcoh_core::perm::{Perm, Word};
use metcoh_core::rational::{fmt_rational, rat};
use metcoh_core::sofic::{
    afree_vanishing_check, compare_delta_beta, defect_cocycle, extension_library, induce_quotient,
    ExtensionApproximation, ExtensionSpec, InducedQuotient,
};
use metcoh_core::{AElement, AtomMap, FiniteAbelianGroup, Rational, SimplicialComplex, WeightScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LA: u64 = 1 << 24;

thread_local! {
    static REPORTED: Cell<bool> = const { Cell::new(false) };
}

fn verdict(n: u32, name: &str, ok: bool, detail: &str) {
    REPORTED.with(|r| r.set(true));
    println!("criterion {n} [{name}]: {} ({detail})", if ok { "PASS" } else { "FAIL" });
}

/// At least 50 pure complexes with n ≤ 12 and d ≤ 3.
fn corpus() -> Vec<SimplicialComplex> {
    let mut out = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..56u64 {
        let d = 1 + (k % 3) as usize;
        let n = rng.gen_range(d + 2..=if d == 3 { 9 } else { 12 });
        let p = rng.gen_range(0.3..0.8);
        out.push(random_complex(n, d, p, k).unwrap().complex);
    }
    out.push(cycle_graph(5).unwrap().0);
    out.push(torus_7().0);
    out.push(complete_complex(5, 3).unwrap());
    out.push(flag_complex_subspaces(2, 3).unwrap());
    out
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, j| acc * (n - j) / (j + 1))
}

fn contains(big: &[usize], small: &[usize]) -> bool {
    small.iter().all(|v| big.contains(v))
}

/// `μ` straight from its definition.
fn mu_oracle(x: &SimplicialComplex, i: usize) -> Vec<Rational> {
    let d = x.dim();
    let top = x.simplices(d);
    let denom = (binomial(d as u64 + 1, i as u64 + 1) * top.len() as u64) as i128;
    x.simplices(i).iter().map(|s| rat(top.iter().filter(|t| contains(t, s)).count() as i128, denom)).collect()
}

fn criterion_1_weight_identities() {
    let start = std::time::Instant::now();
    let corpus = corpus();
    let mut bad = 0;
    for x in &corpus {
        let mu = WeightScheme::mu(x);
        let m = WeightScheme::m(x);
        for i in 0..=x.dim() {
            if mu.raw(i).iter().sum::<Rational>() != rat(1, 1) || mu.raw(i) != &mu_oracle(x, i)[..] {
                bad += 1;
            }
            if i < x.dim() {
                for (k, s) in x.simplices(i).iter().enumerate() {
                    let up: Rational = x
                        .simplices(i + 1)
                        .iter()
                        .enumerate()
                        .filter(|(_, t)| contains(t, s))
                        .map(|(j, _)| m.raw(i + 1)[j])
                        .sum();
                    if up != m.raw(i)[k] {
                        bad += 1;
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = corpus.len() >= 50 && bad == 0 && secs < 10.0;
    verdict(1, "weight identities", ok, &format!("{} complexes, {bad} violations, {secs:.1}s", corpus.len()));
    assert!(ok);
}

fn random_cochain(x: &SimplicialComplex, coeffs: &Coefficients, i: usize, rng: &mut ChaCha8Rng) -> Cochain {
    let g = coeffs.group();
    let mut c = Cochain::zero(x, coeffs, i);
    for cell in 0..x.count(i) {
        let a = AElement(g.factors().iter().map(|&m| rng.gen_range(0..m)).collect());
        c.set(cell, 0, &a);
    }
    c
}

fn criterion_2_coboundary_squares_to_zero() {
    let start = std::time::Instant::now();
    let groups = ["Z/2", "Z/3", "Z/4", "Z/2 x Z/2"];
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut checked, mut bad) = (0u64, 0u64);
    for x in corpus().iter().filter(|x| x.dim() >= 2) {
        for g in groups {
            let coeffs = Coefficients::plain(g.parse::<FiniteAbelianGroup>().unwrap());
            for k in 0..1000 {
                let i = k % (x.dim() - 1);
                let c = random_cochain(x, &coeffs, i, &mut rng);
                let dd = coboundary(x, &coeffs, &coboundary(x, &coeffs, &c).unwrap()).unwrap();
                checked += 1;
                if !dd.is_zero() {
                    bad += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = bad == 0 && secs < 30.0;
    verdict(2, "coboundary squares to zero", ok, &format!("{checked} cochains, {bad} failures, {secs:.1}s"));
    assert!(ok);
}

/// Plain-coefficient cochain algebra computed from the simplex lists alone.
struct Oracle<'a> {
    x: &'a SimplicialComplex,
    factors: Vec<u32>,
}

impl Oracle<'_> {
    fn index(&self, s: &[usize]) -> usize {
        self.x.simplices(s.len() - 1).iter().position(|t| t.as_slice() == s).unwrap()
    }

    fn all(&self, i: usize) -> Vec<Vec<Vec<u32>>> {
        let cells = self.x.count(i);
        let mut out = vec![Vec::new()];
        for _ in 0..cells {
            let mut next = Vec::new();
            for c in &out {
                for a in self.elements() {
                    let mut c2: Vec<Vec<u32>> = c.clone();
                    c2.push(a.clone());
                    next.push(c2);
                }
            }
            out = next;
        }
        out
    }

    fn elements(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new()];
        for &m in &self.factors {
            out = out.iter().flat_map(|e| (0..m).map(move |v| [e.clone(), vec![v]].concat())).collect();
        }
        out
    }

    fn delta(&self, i: usize, c: &[Vec<u32>]) -> Vec<Vec<u32>> {
        self.x
            .simplices(i + 1)
            .iter()
            .map(|t: &Simplex| {
                let mut acc = vec![0i64; self.factors.len()];
                for k in 0..t.len() {
                    let face: Vec<usize> = t.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &v)| v).collect();
                    let sign = if k % 2 == 0 { 1 } else { -1 };
                    for (j, a) in c[self.index(&face)].iter().enumerate() {
                        acc[j] += sign * *a as i64;
                    }
                }
                acc.iter().zip(&self.factors).map(|(v, &m)| v.rem_euclid(m as i64) as u32).collect()
            })
            .collect()
    }

    fn sub(&self, a: &[Vec<u32>], b: &[Vec<u32>]) -> Vec<Vec<u32>> {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.iter().zip(y).zip(&self.factors).map(|((p, q), m)| (p + m - q) % m).collect())
            .collect()
    }

    fn norm(&self, i: usize, c: &[Vec<u32>]) -> Rational {
        let mu = mu_oracle(self.x, i);
        c.iter().zip(&mu).filter(|(v, _)| v.iter().any(|&a| a != 0)).map(|(_, w)| *w).sum()
    }

    fn class_norm(&self, i: usize, c: &[Vec<u32>]) -> Rational {
        if i == 0 {
            return self.norm(0, c);
        }
        self.all(i - 1).iter().map(|b| self.norm(i, &self.sub(c, &self.delta(i - 1, b)))).min().unwrap()
    }

    fn expansion(&self, i: usize) -> Option<Rational> {
        let all = self.all(i);
        let zero = vec![vec![0u32; self.factors.len()]; self.x.count(i + 1)];
        let cocycles: Vec<&Vec<Vec<u32>>> = all.iter().filter(|c| self.delta(i, c) == zero).collect();
        all.iter()
            .filter_map(|c| {
                let dist = cocycles.iter().map(|z| self.norm(i, &self.sub(c, z))).min().unwrap();
                (dist > rat(0, 1)).then(|| self.norm(i + 1, &self.delta(i, c)) / dist)
            })
            .min()
    }
}

fn as_rows(c: &Cochain) -> Vec<Vec<u32>> {
    (0..c.cells()).map(|k| c.get(k, 0).0).collect()
}

fn criterion_3_oracle_equivalence() {
    let start = std::time::Instant::now();
    let cfg = SearchConfig::default();
    let mut cases: Vec<(String, SimplicialComplex)> = vec![
        ("C3".into(), cycle_graph(3).unwrap().0),
        ("K4".into(), complete_complex(4, 1).unwrap()),
        ("triangle".into(), complete_complex(3, 2).unwrap()),
        ("tetrahedron boundary".into(), complete_complex(4, 2).unwrap()),
        ("torus".into(), torus_7().0),
    ];
    let (t, _) = torus_7();
    for v in 0..7 {
        let link = t.link(&[v]).unwrap().unwrap();
        cases.push((format!("torus link {v}"), link.complex));
    }
    let (mut checked, mut bad) = (0, Vec::new());
    for (name, x) in &cases {
        for g in ["Z/2", "Z/3", "Z/2 x Z/2"] {
            let group: FiniteAbelianGroup = g.parse().unwrap();
            let coeffs = Coefficients::plain(group.clone());
            let oracle = Oracle { x, factors: group.factors().to_vec() };
            let size = |i: usize| (group.order() as f64).powi(x.count(i) as i32);
            let scheme = WeightScheme::mu(x);
            for i in 0..x.dim() {
                // expansion: the oracle scans C^i against every cocycle
                if size(i) * size(i) <= (1u64 << 20) as f64 {
                    let e = expansion_constant(x, &coeffs, &scheme, i, &cfg).unwrap();
                    checked += 1;
                    if !e.certified || e.value != oracle.expansion(i) {
                        bad.push(format!("{name} {g} expansion {i}"));
                    }
                }
            }
            for i in 1..=x.dim() {
                if size(i - 1) > (1u64 << 20) as f64 {
                    continue;
                }
                let h = cohomology(x, &coeffs, i, LA).unwrap();
                for ks in h.nonzero_classes(64).unwrap() {
                    let c = h.combination(&coeffs, &ks);
                    let min = cosystolic_norm(x, &coeffs, &scheme, &c, &cfg).unwrap();
                    checked += 1;
                    if !min.certified || min.value != oracle.class_norm(i, &as_rows(&c)) {
                        bad.push(format!("{name} {g} class norm {i} {ks:?}"));
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = bad.is_empty() && secs < 300.0;
    verdict(3, "oracle equivalence", ok, &format!("{checked} instances, mismatches {bad:?}, {secs:.1}s"));
    assert!(ok);
}

fn shift(n: usize, s: usize) -> Perm {
    Perm::from_images((0..n).map(|f| ((f + s) % n) as u32).collect()).unwrap()
}

fn cyclic_cover(x: &SimplicialComplex, data: &FundamentalGroupData, n: usize, shifts: &[usize]) -> EdgeLabeling {
    let gens: Vec<Perm> = shifts.iter().map(|&s| shift(n, s)).collect();
    EdgeLabeling::from_holonomy(x, data, &gens).unwrap()
}

fn criterion_4_shapiro_isometry() {
    let start = std::time::Instant::now();
    let cfg = SearchConfig { workers: 4, ..SearchConfig::default() };
    let z2: FiniteAbelianGroup = "Z/2".parse().unwrap();
    let co = Coefficients::plain(z2.clone());
    let mut instances = Vec::new();
    let (c3, d3) = cycle_graph(3).unwrap();
    let h = cohomology(&c3, &co, 1, LA).unwrap();
    for n in [2, 3, 4] {
        instances.push((format!("C3 {n}-fold"), &c3, cyclic_cover(&c3, &d3, n, &[1]), h.combination(&co, &[1])));
    }
    let (t, dt) = torus_7();
    let ht = cohomology(&t, &co, 1, LA).unwrap();
    let covers = [("double (1,0)", 2, [1, 0]), ("double (0,1)", 2, [0, 1]), ("4-fold (1,0)", 4, [1, 0])];
    for (name, n, s) in covers {
        for ks in ht.nonzero_classes(8).unwrap() {
            instances.push((
                format!("torus {name} class {ks:?}"),
                &t,
                cyclic_cover(&t, &dt, n, &s),
                ht.combination(&co, &ks),
            ));
        }
    }
    let mut bad = Vec::new();
    for (name, x, l, c) in &instances {
        let r = shapiro_check(x, l, &z2, &WeightScheme::mu(x), c, &cfg).unwrap();
        if !(r.equal() && r.certified()) {
            bad.push(name.clone());
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = instances.len() >= 6 && bad.is_empty() && secs < 600.0;
    verdict(4, "shapiro isometry", ok, &format!("{} instances, unequal {bad:?}, {secs:.1}s", instances.len()));
    assert!(ok);
}

fn criterion_5_contractivity() {
    let cfg = SearchConfig::default();
    let z2: FiniteAbelianGroup = "Z/2".parse().unwrap();
    let co = Coefficients::plain(z2.clone());
    let mut checked = 0;
    let mut violations = Vec::new();
    let mut run = |name: &str, x: &SimplicialComplex, data: &FundamentalGroupData, chain: &[(usize, Vec<usize>)]| {
        let h = cohomology(x, &co, 1, LA).unwrap();
        for ks in h.nonzero_classes(8).unwrap() {
            let c = h.combination(&co, &ks);
            for pair in chain.windows(2) {
                let (nc, sc) = (&pair[0].0, &pair[0].1);
                let (nf, sf) = (&pair[1].0, &pair[1].1);
                let coarse = cyclic_cover(x, data, *nc, sc);
                let fine = cyclic_cover(x, data, *nf, sf);
                let map = AtomMap::Refine((0..*nf).map(|f| f % nc).collect());
                let r = contractivity_check(x, &coarse, &fine, &map, &z2, &WeightScheme::mu(x), &c, &cfg).unwrap();
                checked += 1;
                if !r.holds() || !r.coarse.certified || !r.fine.certified {
                    violations.push(format!("{name} {nc}->{nf} {ks:?}"));
                }
            }
        }
    };
    let (c3, d3) = cycle_graph(3).unwrap();
    run("C3", &c3, &d3, &[(1, vec![1]), (2, vec![1]), (4, vec![1]), (8, vec![1])]);
    run("C3", &c3, &d3, &[(1, vec![1]), (3, vec![1]), (6, vec![1])]);
    let (c5, d5) = cycle_graph(5).unwrap();
    run("C5", &c5, &d5, &[(1, vec![1]), (2, vec![1]), (6, vec![1])]);
    let (t, dt) = torus_7();
    run("torus", &t, &dt, &[(1, vec![0, 0]), (2, vec![1, 0]), (4, vec![1, 0])]);
    run("torus", &t, &dt, &[(1, vec![0, 0]), (2, vec![1, 1]), (4, vec![1, 3])]);
    let ok = violations.is_empty();
    verdict(5, "contractivity", ok, &format!("{checked} refinements, violations {violations:?}"));
    assert!(ok);
}

/// `b` solves `δb = θ(α′)` when every relator walk from every orbit sums to `α′(r)`.
fn primitive_holds(e: &ExtensionApproximation, spec: &ExtensionSpec, q: &InducedQuotient, b: &[Vec<AElement>]) -> bool {
    let g = &spec.group;
    let gen_at = |c: char| e.hom.names.iter().position(|&n| n == c).unwrap();
    spec.presentation.rels.iter().zip(&spec.alpha).all(|(r, alpha)| {
        (0..q.orbits.len()).all(|start| {
            let (mut o, mut total) = (start, g.zero());
            for l in r {
                let s = gen_at(spec.presentation.gens[l.gen]);
                let perm = &q.hom.images[s];
                if l.inverse {
                    o = (0..perm.degree()).find(|&p| perm.apply(p) == o).unwrap();
                    total = g.sub(&total, &b[s][o]).unwrap();
                } else {
                    total = g.add(&total, &b[s][o]).unwrap();
                    o = perm.apply(o);
                }
            }
            o == start && total == *alpha
        })
    })
}

fn criterion_6_vanishing_consistency() {
    let start = std::time::Instant::now();
    let lib = extension_library().unwrap();
    let mut bad = Vec::new();
    let mut names = BTreeSet::new();
    for e in &lib {
        assert!(e.action.hom.n <= 16);
        names.insert(e.name.clone());
        let v = afree_vanishing_check(&e.action, &e.spec).unwrap();
        let q = induce_quotient(&e.action).unwrap();
        match &v.primitive {
            Some(b) if primitive_holds(&e.action, &e.spec, &q, b) => {}
            _ => bad.push(e.name.clone()),
        }
    }
    let covered =
        ["Q8", "D4", "Heisenberg mod 2"].iter().all(|n| names.contains(*n)) && names.iter().any(|n| n.contains(" x "));
    let secs = start.elapsed().as_secs_f64();
    let ok = bad.is_empty() && covered && secs < 60.0;
    verdict(6, "vanishing consistency", ok, &format!("{} extensions, certificates {bad:?}, {secs:.1}s", lib.len()));
    assert!(ok);
}

/// Agreement per relator from the skew product `(o, a)·s = (s·o, a + β(s)(o))`.
fn skew_agreement(
    e: &ExtensionApproximation,
    spec: &ExtensionSpec,
    q: &InducedQuotient,
    beta: &[Vec<AElement>],
) -> Vec<Rational> {
    let g = &e.group;
    let elems = g.enumerate(64).unwrap();
    let k = elems.len();
    let idx = |a: &AElement| elems.iter().position(|x| x == a).unwrap();
    let m = q.orbits.len();
    let skew = |s: usize| {
        Perm::from_images(
            (0..m * k)
                .map(|x| {
                    (q.hom.images[s].apply(x / k) * k + idx(&g.add(&elems[x % k], &beta[s][x / k]).unwrap())) as u32
                })
                .collect(),
        )
        .unwrap()
    };
    let aligned: Vec<Perm> =
        spec.presentation.gens.iter().map(|c| skew(e.hom.names.iter().position(|n| n == c).unwrap())).collect();
    spec.presentation
        .rels
        .iter()
        .zip(&spec.alpha)
        .map(|(r, alpha): (&Word, &AElement)| {
            let p = metcoh_core::perm::eval_word(&aligned, r, m * k).unwrap();
            rat((0..m).filter(|&o| p.apply(o * k) == o * k + idx(alpha)).count() as i128, m as i128)
        })
        .collect()
}

fn criterion_7_defect_cocycle() {
    let start = std::time::Instant::now();
    let mut failures = Vec::new();
    let mut corruptions = 0;
    let mut worst_c = rat(0, 1);
    for e in extension_library().unwrap() {
        let q = induce_quotient(&e.action).unwrap();
        let b = defect_cocycle(&e.action, &q, None).unwrap();
        if compare_delta_beta(&e.action, &q, &b, &e.spec).unwrap().iter().any(|r| r.agreement != rat(1, 1)) {
            failures.push(format!("{} exact", e.name));
        }
        let n = e.action.hom.n;
        for gen in 0..e.action.hom.images.len() {
            for p in 0..n {
                for p2 in p + 1..n {
                    let bad = e.action.corrupted(gen, p, p2);
                    let q = induce_quotient(&bad).unwrap();
                    let b = defect_cocycle(&bad, &q, None).unwrap();
                    let rows = compare_delta_beta(&bad, &q, &b, &e.spec).unwrap();
                    let oracle = skew_agreement(&bad, &e.spec, &q, &b.beta);
                    corruptions += 1;
                    let name = e.action.hom.names[gen];
                    for ((row, want), r) in rows.iter().zip(&oracle).zip(&e.spec.presentation.rels) {
                        let letters = r.iter().filter(|l| e.spec.presentation.gens[l.gen] == name).count() as i128;
                        let drop = rat(1, 1) - row.agreement;
                        if letters > 0 {
                            let c = drop * rat(n as i128, letters);
                            if c > worst_c {
                                worst_c = c;
                            }
                        }
                        // bound c/n per occurrence with c = 4|A|
                        let bound = rat(4 * e.action.group.order() as i128 * letters, n as i128);
                        if row.agreement != *want || drop > bound {
                            failures.push(format!("{} gen {name} swap {p} {p2} relator {}", e.name, row.relator));
                        }
                    }
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let ok = failures.is_empty() && secs < 60.0;
    verdict(
        7,
        "defect cocycle",
        ok,
        &format!(
            "{corruptions} corruptions, worst observed c = {}, failures {:?}, {secs:.1}s",
            fmt_rational(&worst_c),
            &failures[..failures.len().min(5)]
        ),
    );
    assert!(ok);
}

fn components_oracle(n: usize, edges: &[[usize; 2]]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        if p[x] != x {
            let r = find(p, p[x]);
            p[x] = r;
        }
        p[x]
    }
    for e in edges {
        let (a, b) = (find(&mut parent, e[0]), find(&mut parent, e[1]));
        parent[a] = b;
    }
    (0..n).filter(|&x| find(&mut parent, x) == x).count()
}

fn criterion_8_spectral_sanity() {
    let mut bad = Vec::new();
    for n in 3..=8usize {
        let x = complete_complex(n, 1).unwrap();
        let eig = upper_laplacian_spectrum(&x, 0).unwrap();
        let expect: Vec<f64> =
            std::iter::once(0.0).chain(std::iter::repeat_n(n as f64 / (n as f64 - 1.0), n - 1)).collect();
        let close = eig.len() == n && eig.iter().zip(&expect).all(|(a, b)| (a - b).abs() <= 1e-9 * b.abs().max(1.0));
        if !close {
            bad.push(format!("K{n}: {eig:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for g in 0..20 {
        let parts = rng.gen_range(2..=4);
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut offset = 0;
        for _ in 0..parts {
            let size = rng.gen_range(2..=5);
            for v in 1..size {
                edges.push([offset + rng.gen_range(0..v), offset + v]);
            }
            for a in 0..size {
                for b in a + 1..size {
                    if rng.gen_bool(0.3) {
                        edges.push([offset + a, offset + b]);
                    }
                }
            }
            offset += size;
        }
        // scramble vertex names
        let mut names: Vec<usize> = (0..offset).collect();
        for k in (1..offset).rev() {
            names.swap(k, rng.gen_range(0..=k));
        }
        let mut simplices: Vec<Vec<usize>> = edges
            .iter()
            .map(|e| {
                let mut s = vec![names[e[0]], names[e[1]]];
                s.sort();
                s
            })
            .collect();
        simplices.sort();
        simplices.dedup();
        let x = SimplicialComplex::build(&simplices).unwrap();
        let eig = upper_laplacian_spectrum(&x, 0).unwrap();
        let zeros = eig.iter().filter(|v| v.abs() < 1e-9).count();
        let expect = components_oracle(offset, &edges);
        if zeros != expect || expect != parts {
            bad.push(format!("graph {g}: {zeros} zero eigenvalues, {expect} components"));
        }
    }
    let ok = bad.is_empty();
    verdict(8, "spectral sanity", ok, &format!("K3..K8 and 20 disconnected graphs, failures {bad:?}"));
    assert!(ok);
}

fn criterion_9_building_expansion() {
    let start = std::time::Instant::now();
    let x = flag_complex_subspaces(2, 3).unwrap();
    let z2: FiniteAbelianGroup = "Z/2".parse().unwrap();
    let co = Coefficients::plain(z2.clone());
    let e = expansion_constant(&x, &co, &WeightScheme::mu(&x), 0, &SearchConfig::default()).unwrap();
    let oracle = Oracle { x: &x, factors: vec![2] }.expansion(0);
    let h1 = cohomology(&x, &co, 1, LA).unwrap();
    let value = e.value.unwrap_or_default();
    let secs = start.elapsed().as_secs_f64();
    let ok = e.certified && value > rat(0, 1) && e.value == oracle && secs < 600.0;
    verdict(
        9,
        "building coboundary expansion",
        ok,
        &format!(
            "{} vertices, {} edges, certified eps0 = {}, oracle eps0 = {}, H^1(Z/2) = {}, {secs:.1}s",
            x.count(0),
            x.count(1),
            fmt_rational(&value),
            oracle.map_or("none".into(), |v| fmt_rational(&v)),
            h1.describe()
        ),
    );
    assert!(ok);
}

fn metcoh(dir: &Path, args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_metcoh")).current_dir(dir).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_10_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let write = |name: &str, text: &str| std::fs::write(d.join(name), text).unwrap();
    let gen = |args: &[&str], out: &str| {
        let (code, bytes) = metcoh(d, args);
        assert_eq!(code, 0, "{args:?}");
        std::fs::write(d.join(out), bytes).unwrap();
    };
    gen(&["generate", "--kind", "cycle", "--n", "3", "--cover-fiber", "3", "--labeling-out", "c3.lab"], "c3.cx");
    gen(
        &["generate", "--kind", "torus7", "--cover-fiber", "2", "--shifts", "1 0", "--labeling-out", "t2.lab"],
        "torus.cx",
    );
    let _ = metcoh(
        d,
        &["generate", "--kind", "torus7", "--cover-fiber", "4", "--shifts", "1 1", "--labeling-out", "t4.lab"],
    );
    gen(&["generate", "--kind", "complete", "--n", "4", "--d", "2"], "k4.cx");
    gen(&["generate", "--kind", "flag", "--q", "2"], "flag.cx");
    gen(&["generate", "--kind", "random", "--n", "8", "--d", "2", "--p", "0.5", "--seed", "3"], "rand.cx");
    write("c3.coch", "0 1 : 1\n");
    let (t, _) = torus_7();
    let co = Coefficients::plain("Z/2".parse().unwrap());
    write("t1.coch", &format_cochain(&t, &co, &cohomology(&t, &co, 1, LA).unwrap().combination(&co, &[1, 1])).unwrap());
    write("t2.coch", &format_cochain(&t, &co, &cohomology(&t, &co, 2, LA).unwrap().combination(&co, &[1])).unwrap());
    let lib = extension_library().unwrap();
    let q8 = lib.iter().find(|e| e.name == "Q8").unwrap();
    write("q8.act", &q8.action.to_text());
    write("q8.ext", &q8.spec.to_text());
    write("z6.pres", "gens: a\nrels: aaaaaa\n");
    write("c5.act", "5\ngen a: 2 3 4 5 1\n");
    write("c6.act", "6\ngen a: 2 3 4 5 6 1\n");
    let runs: Vec<Vec<&str>> = vec![
        vec!["analyze-complex", "--complex", "k4.cx", "--coeff", "Z/3"],
        vec!["cosystole", "--complex", "torus.cx", "--degree", "1"],
        vec!["cosystole", "--complex", "c3.cx", "--degree", "1", "--labeling", "c3.lab"],
        vec!["expansion", "--complex", "flag.cx", "--degree", "0"],
        vec!["expansion", "--complex", "k4.cx", "--degree", "1", "--check", "coboundary", "--target", "1/2"],
        vec![
            "expansion",
            "--complex",
            "rand.cx",
            "--degree",
            "1",
            "--coeff",
            "Z/3",
            "--mode",
            "heuristic",
            "--heuristic-steps",
            "2000",
        ],
        vec!["spectrum", "--complex", "torus.cx", "--links", "--km-beta", "1/2", "--km-mu", "0.6"],
        vec!["build-cover", "--complex", "torus.cx", "--labeling", "t2.lab"],
        vec!["shapiro-check", "--complex", "torus.cx", "--labeling", "t4.lab", "--cochain", "t1.coch"],
        vec!["pushforward", "--complex", "c3.cx", "--labeling", "c3.lab", "--cochain", "c3.coch"],
        vec!["vanishing-test", "--complex", "torus.cx", "--labeling", "t4.lab", "--cochain", "t2.coch"],
        vec![
            "lower-bound",
            "--complex",
            "torus.cx",
            "--cochain",
            "t1.coch",
            "--labeling",
            "t2.lab",
            "--labeling",
            "t4.lab",
        ],
        vec!["sofic-report", "--presentation", "z6.pres", "--action", "c5.act", "--length", "6"],
        vec!["induce", "--action", "q8.act"],
        vec!["defect-cocycle", "--action", "q8.act"],
        vec!["compare-alpha", "--action", "q8.act", "--spec", "q8.ext"],
        vec!["afree-check", "--action", "q8.act", "--spec", "q8.ext"],
        vec![
            "stability-check",
            "--action",
            "c5.act",
            "--partition",
            "1 1 2 2 2",
            "--candidate",
            "c5.act",
            "--candidate",
            "c6.act",
            "--words",
            "a aa",
        ],
    ];
    let mut differing = Vec::new();
    for args in &runs {
        let one = metcoh(d, &[&args[..], &["--workers", "1"]].concat());
        let eight = metcoh(d, &[&args[..], &["--workers", "8"]].concat());
        if one.0 != 0 || one != eight {
            differing.push(format!("{} (exit {} / {})", args[0], one.0, eight.0));
        }
    }
    let ok = differing.is_empty();
    verdict(10, "determinism", ok, &format!("{} reports, differing {differing:?}", runs.len()));
    assert!(ok);
}

fn main() {
    let criteria: [(u32, fn()); 10] = [
        (1, criterion_1_weight_identities),
        (2, criterion_2_coboundary_squares_to_zero),
        (3, criterion_3_oracle_equivalence),
        (4, criterion_4_shapiro_isometry),
        (5, criterion_5_contractivity),
        (6, criterion_6_vanishing_consistency),
        (7, criterion_7_defect_cocycle),
        (8, criterion_8_spectral_sanity),
        (9, criterion_9_building_expansion),
        (10, criterion_10_determinism),
    ];
    let mut failed = 0;
    for (n, run) in criteria {
        REPORTED.with(|r| r.set(false));
        let outcome = std::panic::catch_unwind(run);
        if outcome.is_err() {
            failed += 1;
            if !REPORTED.with(|r| r.get()) {
                println!("criterion {n}: FAIL (panicked before reporting)");
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
