use metcoh_core::cochain::{
    coboundary, cohomology, cosystole, format_cochain, is_coboundary, norm, parse_cochain, CoboundaryTest, Cochain,
    Coefficients, SearchConfig,
};
use metcoh_core::generators::{cycle_graph, random_complex, torus_7};
use metcoh_core::rational::rat;
use metcoh_core::{FiniteAbelianGroup, Rational, SimplicialComplex, WeightScheme};
use num_traits::Zero;
use proptest::prelude::*;

fn z(m: u32) -> Coefficients {
    Coefficients::plain(FiniteAbelianGroup::cyclic(m))
}

fn from_values(x: &SimplicialComplex, c: &Coefficients, i: usize, vals: &[i64]) -> Cochain {
    let mut out = Cochain::zero(x, c, i);
    for (cell, &v) in vals.iter().enumerate() {
        out.set(cell, 0, &c.group().element(&[v]).unwrap());
    }
    out
}

/// δ computed straight from the alternating-sum definition.
fn delta(x: &SimplicialComplex, m: i64, i: usize, vals: &[i64]) -> Vec<i64> {
    x.simplices(i + 1)
        .iter()
        .map(|t| {
            let mut acc = 0;
            for k in 0..t.len() {
                let mut face = t.clone();
                face.remove(k);
                let idx = x.simplices(i).iter().position(|s| *s == face).unwrap();
                acc += if k % 2 == 0 { vals[idx] } else { -vals[idx] };
            }
            acc.rem_euclid(m)
        })
        .collect()
}

fn mu_norm(x: &SimplicialComplex, i: usize, vals: &[i64]) -> Rational {
    let total: Rational = x.simplices(i).iter().map(|s| x.weight_mu(s).unwrap()).sum();
    x.simplices(i).iter().zip(vals).filter(|(_, v)| **v != 0).map(|(s, _)| x.weight_mu(s).unwrap()).sum::<Rational>()
        / total
}

fn all_vectors(len: usize, m: i64) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out.into_iter().flat_map(|v| (0..m).map(move |a| [v.clone(), vec![a]].concat())).collect();
    }
    out
}

/// Unpruned oracle: the least norm over cocycles that are not coboundaries.
fn brute_cosystole(x: &SimplicialComplex, m: i64, i: usize) -> Option<Rational> {
    let lower: Vec<Vec<i64>> =
        if i == 0 { vec![] } else { all_vectors(x.count(i - 1), m).iter().map(|b| delta(x, m, i - 1, b)).collect() };
    all_vectors(x.count(i), m)
        .into_iter()
        .filter(|c| i == x.dim() || delta(x, m, i, c).iter().all(|&v| v == 0))
        .filter(|c| c.iter().any(|&v| v != 0) && !lower.contains(c))
        .map(|c| mu_norm(x, i, &c))
        .min()
}

#[test]
fn cycle_cosystole_is_one_third() {
    let (c3, _) = cycle_graph(3).unwrap();
    let r = cosystole(&c3, &z(2), &WeightScheme::mu(&c3), 1, &SearchConfig::default()).unwrap();
    assert_eq!(r.value, Some(rat(1, 3)));
    assert!(r.certified);
}

#[test]
fn edge_indicator_on_cycle_is_not_a_coboundary() {
    let (c3, _) = cycle_graph(3).unwrap();
    let c = from_values(&c3, &z(2), 1, &[1, 0, 0]);
    assert!(matches!(is_coboundary(&c3, &z(2), &c, 1 << 20).unwrap(), CoboundaryTest::Obstructed { .. }));
}

#[test]
fn torus_first_cohomology_mod_two() {
    let (t, _) = torus_7();
    let h = cohomology(&t, &z(2), 1, 1 << 24).unwrap();
    assert_eq!(h.order(), 4);
    let h2 = cohomology(&t, &z(2), 2, 1 << 24).unwrap();
    assert_eq!(h2.order(), 2);
}

#[test]
fn cochain_files_roundtrip() {
    let (t, _) = torus_7();
    let c = z(3);
    let vals: Vec<i64> = (0..t.count(1) as i64).map(|k| k % 3).collect();
    let a = from_values(&t, &c, 1, &vals);
    let text = format_cochain(&t, &c, &a).unwrap();
    assert_eq!(parse_cochain(&text, &t, &c, Some(1)).unwrap(), a);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coboundary_matches_definition(seed in any::<u64>(), m in 2u32..5) {
        let x = random_complex(5, 2, 0.6, seed).unwrap().complex;
        let c = z(m);
        for i in 0..x.dim() {
            let vals: Vec<i64> = (0..x.count(i)).map(|k| ((seed >> (k % 60)) as i64 + k as i64) % m as i64).collect();
            let a = from_values(&x, &c, i, &vals);
            let d = coboundary(&x, &c, &a).unwrap();
            prop_assert_eq!(&d, &from_values(&x, &c, i + 1, &delta(&x, m as i64, i, &vals)));
            prop_assert_eq!(norm(&x, &c, &WeightScheme::mu(&x), &a).unwrap(), mu_norm(&x, i, &vals));
            if i + 1 < x.dim() {
                prop_assert!(coboundary(&x, &c, &d).unwrap().is_zero());
            }
            match is_coboundary(&x, &c, &d, 1 << 24).unwrap() {
                CoboundaryTest::Primitive(b) => prop_assert_eq!(coboundary(&x, &c, &b).unwrap(), d),
                CoboundaryTest::Obstructed { .. } => prop_assert!(false, "δa must be a coboundary"),
            }
        }
    }

    #[test]
    fn cosystole_matches_brute_force(seed in any::<u64>(), n in 4usize..6, m in 2u32..4) {
        let x = random_complex(n, 1, 0.6, seed).unwrap().complex;
        prop_assume!(x.count(1) <= 7);
        let got = cosystole(&x, &z(m), &WeightScheme::mu(&x), 1, &SearchConfig::default()).unwrap();
        prop_assert_eq!(got.value, brute_cosystole(&x, m as i64, 1));
        if let Some(v) = got.value {
            prop_assert!(!v.is_zero());
        }
    }
}
