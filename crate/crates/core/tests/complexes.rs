use metcoh_core::generators::{complete_complex, flag_complex_subspaces, octahedron, random_complex, torus_7};
use metcoh_core::rational::rat;
use metcoh_core::{Rational, SimplicialComplex};
use num_traits::Zero;
use proptest::prelude::*;

#[test]
fn text_roundtrip_keeps_every_face() {
    for x in [complete_complex(5, 2).unwrap(), octahedron(), torus_7().0, flag_complex_subspaces(2, 3).unwrap()] {
        let y = SimplicialComplex::parse(&x.to_text()).unwrap();
        for i in 0..=x.dim() {
            assert_eq!(x.simplices(i), y.simplices(i));
        }
    }
}

#[test]
fn torus_counts_and_weights() {
    let (t, _) = torus_7();
    assert_eq!((t.count(0), t.count(1), t.count(2)), (7, 21, 14));
    assert_eq!(t.euler_characteristic(), 0);
    for e in t.simplices(1) {
        assert_eq!(t.weight_mu(e).unwrap(), rat(1, 21));
    }
    for v in t.simplices(0) {
        assert_eq!(t.weight_m(v).unwrap(), rat(12, 1));
    }
}

#[test]
fn fano_flag_complex_is_bipartite() {
    let x = flag_complex_subspaces(2, 3).unwrap();
    assert_eq!((x.count(0), x.count(1)), (14, 21));
    let y = flag_complex_subspaces(3, 3).unwrap();
    assert_eq!((y.count(0), y.count(1)), (26, 52));
    // a 2-coloring by parity of BFS depth must be proper
    let n = x.count(0);
    let mut color = vec![None; n];
    color[0] = Some(0);
    let mut queue = vec![0usize];
    while let Some(v) = queue.pop() {
        for e in x.simplices(1) {
            let (a, b) = (e[0], e[1]);
            let w = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            match color[w] {
                None => {
                    color[w] = Some(1 - color[v].unwrap());
                    queue.push(w);
                }
                Some(c) => assert_ne!(Some(c), color[v]),
            }
        }
    }
}

#[test]
fn octahedron_vertex_link_is_four_cycle() {
    let x = octahedron();
    let link = x.link(&[0]).unwrap().unwrap();
    assert_eq!((link.complex.count(0), link.complex.count(1)), (4, 4));
    assert!(link
        .complex
        .simplices(0)
        .iter()
        .all(|v| { link.complex.simplices(1).iter().filter(|e| e.contains(&v[0])).count() == 2 }));
}

#[test]
fn impure_input_is_rejected() {
    assert!(SimplicialComplex::parse("0 1 2\n3 4\n").is_err());
}

#[test]
fn random_complex_extremes() {
    let full = random_complex(5, 2, 1.0, 3).unwrap();
    let k = complete_complex(5, 2).unwrap();
    assert_eq!(full.complex.to_text(), k.to_text());
    let empty = random_complex(5, 1, 0.0, 3).unwrap();
    assert!(empty.warning.is_some());
}

proptest! {
    #[test]
    fn weights_behave(n in 4usize..8, d in 1usize..3, p in 0.3f64..1.0, seed in any::<u64>()) {
        let a = random_complex(n, d, p, seed).unwrap();
        let b = random_complex(n, d, p, seed).unwrap();
        prop_assert_eq!(a.complex.to_text(), b.complex.to_text());
        let x = a.complex;
        for i in 0..=x.dim() {
            let total: Rational = x.simplices(i).iter().map(|s| x.weight_mu(s).unwrap()).sum();
            prop_assert_eq!(total, Rational::from_integer(1));
        }
        // m(σ) is the sum of m over the codimension-one cofaces
        for i in 0..x.dim() {
            for s in x.simplices(i) {
                let up: Rational = x
                    .simplices(i + 1)
                    .iter()
                    .filter(|t| s.iter().all(|v| t.contains(v)))
                    .map(|t| x.weight_m(t).unwrap())
                    .sum();
                prop_assert!(!up.is_zero());
                prop_assert_eq!(x.weight_m(s).unwrap(), up);
            }
        }
        prop_assert_eq!(x.skeleton(x.dim()).unwrap().to_text(), x.to_text());
    }
}
