use metcoh_core::perm::Perm;
use metcoh_core::rational::rat;
use metcoh_core::sofic::{
    afree_vanishing_check, compare_delta_beta, defect_cocycle, defect_report, extension_library, induce_quotient,
    stability_match, AlmostHom, Candidate, ExtensionApproximation, Presentation,
};
use num_traits::{One, Zero};

#[test]
fn library_actions_survive_text_roundtrip() {
    for entry in extension_library().unwrap() {
        let back = ExtensionApproximation::parse(&entry.action.to_text()).unwrap();
        assert_eq!(back.to_text(), entry.action.to_text(), "{}", entry.name);
    }
}

#[test]
fn exact_extensions_have_consistent_cocycles() {
    for entry in extension_library().unwrap() {
        let phi = &entry.action;
        let q = induce_quotient(phi).unwrap();
        assert!(q.disagreements.iter().all(|&d| d == 0), "{}", entry.name);
        let beta = defect_cocycle(phi, &q, None).unwrap();
        assert!(beta.mismatches.is_empty());
        for r in compare_delta_beta(phi, &q, &beta, &entry.spec).unwrap() {
            assert!(r.agreement.is_one(), "{} {}", entry.name, r.relator);
            assert_eq!(r.unclosed, 0);
        }
        assert!(afree_vanishing_check(phi, &entry.spec).unwrap().consistent());
    }
}

#[test]
fn corruption_lowers_agreement_only_locally() {
    let entry = extension_library().unwrap().into_iter().find(|e| e.name.starts_with("Q8")).unwrap();
    let bad = entry.action.corrupted(0, 0, 1);
    let q = induce_quotient(&bad).unwrap();
    let beta = defect_cocycle(&bad, &q, None).unwrap();
    let rows = compare_delta_beta(&bad, &q, &beta, &entry.spec).unwrap();
    let m = q.orbits.len() as i128;
    for r in &rows {
        let occ = r.relator.chars().filter(|c| c.eq_ignore_ascii_case(&'a')).count() as i128;
        assert!(rat(1, 1) - r.agreement <= rat(4 * occ, m), "{}", r.relator);
        if occ == 0 {
            assert!(r.agreement.is_one());
        }
    }
}

#[test]
fn defect_of_an_honest_action_is_zero() {
    let p = Presentation::parse_str("ab", "abAB").unwrap();
    let a = Perm::cycle(4, &[0, 1, 2, 3]).unwrap();
    let phi = AlmostHom::new(4, vec!['a', 'b'], vec![a.clone(), a.pow(2)]).unwrap();
    let r = defect_report(&phi, &p, 3, 1 << 20).unwrap();
    assert!(r.max_defect.is_zero());
}

#[test]
fn a_cycle_matches_its_own_rotation_class() {
    let five = Perm::cycle(5, &[0, 1, 2, 3, 4]).unwrap();
    let phi = AlmostHom::new(5, vec!['a'], vec![five.clone()]).unwrap();
    let p = Presentation::parse_str("a", "aaaaa").unwrap();
    let cand = Candidate { name: "Z5".into(), hom: AlmostHom::new(5, vec!['a'], vec![five.pow(2)]).unwrap() };
    let words = vec![p.word("a").unwrap(), p.word("aa").unwrap()];
    let all: Vec<usize> = (0..5).collect();
    let m = stability_match(&phi, &all, &[cand], &words, rat(1, 10), 1 << 20, 7).unwrap();
    assert!(m.best().discrepancy.is_zero());
    assert!(m.certified());
}
