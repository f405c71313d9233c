//! Small central extensions acting regularly on themselves.

use std::collections::BTreeMap;

use crate::abelian::FiniteAbelianGroup;
use crate::error::{Error, Result};
use crate::perm::{eval_word, Perm};

use super::{AlmostHom, ExtensionApproximation, ExtensionSpec, Presentation};

#[derive(Debug, Clone)]
pub struct LibraryEntry {
    pub name: String,
    pub spec: ExtensionSpec,
    pub action: ExtensionApproximation,
}

/// The right regular action of the group generated by `lifts` and
/// `central`, with `α′` read off by evaluating each relator on the lifts.
fn regular<T: Ord + Clone>(
    name: &str,
    presentation: &str,
    group: FiniteAbelianGroup,
    identity: T,
    lifts: Vec<T>,
    central: Vec<T>,
    mul: impl Fn(&T, &T) -> T,
) -> Result<LibraryEntry> {
    let (gens, rels) = presentation.split_once('|').expect("library presentations have a bar");
    let presentation = Presentation::parse_str(gens, rels)?;
    let all: Vec<&T> = lifts.iter().chain(&central).collect();
    let mut index: BTreeMap<T, usize> = BTreeMap::from([(identity.clone(), 0)]);
    let mut elements = vec![identity];
    let mut k = 0;
    while k < elements.len() {
        for g in &all {
            let h = mul(&elements[k], g);
            if !index.contains_key(&h) {
                index.insert(h.clone(), elements.len());
                elements.push(h);
            }
        }
        k += 1;
    }
    let perm = |g: &T| Perm::from_images(elements.iter().map(|x| index[&mul(x, g)] as u32).collect());
    let images = lifts.iter().map(perm).collect::<Result<Vec<_>>>()?;
    let central = central.iter().map(perm).collect::<Result<Vec<_>>>()?;
    let n = elements.len();
    let hom = AlmostHom::new(n, presentation.gens.clone(), images)?;
    let action = ExtensionApproximation::new(hom, group.clone(), central)?;
    let mut alpha = Vec::new();
    for r in &presentation.rels {
        let value = eval_word(&action.hom.images, r, n)?;
        let a =
            group.enumerate(u64::MAX)?.into_iter().find(|a| action.central_perm(a) == value).ok_or_else(|| {
                Error::Structure(format!("{name}: relator `{}` is not central", presentation.format(r)))
            })?;
        alpha.push(a);
    }
    Ok(LibraryEntry { name: name.to_string(), spec: ExtensionSpec::new(presentation, group, alpha)?, action })
}

type M2 = [[u32; 2]; 2];

fn mat2(p: u32) -> impl Fn(&M2, &M2) -> M2 {
    move |a, b| {
        let mut c = [[0; 2]; 2];
        for (i, row) in c.iter_mut().enumerate() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = (a[i][0] * b[0][j] + a[i][1] * b[1][j]) % p;
            }
        }
        c
    }
}

fn perm_mul(a: &Perm, b: &Perm) -> Perm {
    a.then(b)
}

fn cyclic_mul(moduli: Vec<u32>) -> impl Fn(&Vec<u32>, &Vec<u32>) -> Vec<u32> {
    move |a, b| a.iter().zip(b).zip(&moduli).map(|((x, y), m)| (x + y) % m).collect()
}

fn z(m: u32) -> FiniteAbelianGroup {
    FiniteAbelianGroup::cyclic(m)
}

/// Extensions of order at most 16 with their regular actions.
pub fn extension_library() -> Result<Vec<LibraryEntry>> {
    let mut out = Vec::new();
    let minus: M2 = [[2, 0], [0, 2]];
    out.push(regular(
        "Q8",
        "a b | aa bb abAB",
        z(2),
        [[1, 0], [0, 1]],
        vec![[[0, 1], [2, 0]], [[1, 1], [1, 2]]],
        vec![minus],
        mat2(3),
    )?);

    let r = Perm::cycle(4, &[0, 1, 2, 3])?;
    let s = Perm::from_images(vec![0, 3, 2, 1])?;
    out.push(regular("D4", "a b | aa bb abAB", z(2), Perm::identity(4), vec![r.clone(), s], vec![r.pow(2)], perm_mul)?);

    // upper unitriangular 3x3 over F_2 as (x, y, z) with (x,y,z)(x',y',z') = (x+x', y+y', z+z'+xy')
    let heis = |a: &[u32; 3], b: &[u32; 3]| [(a[0] + b[0]) % 2, (a[1] + b[1]) % 2, (a[2] + b[2] + a[0] * b[1]) % 2];
    out.push(regular(
        "Heisenberg mod 2",
        "a b | aa bb abAB",
        z(2),
        [0, 0, 0],
        vec![[1, 0, 0], [0, 1, 0]],
        vec![[0, 0, 1]],
        heis,
    )?);

    let q16_minus: M2 = [[16, 0], [0, 16]];
    out.push(regular(
        "Q16",
        "a b | aaaa bb abab",
        z(2),
        [[1, 0], [0, 1]],
        vec![[[2, 0], [0, 9]], [[0, 1], [16, 0]]],
        vec![q16_minus],
        mat2(17),
    )?);

    let r8 = Perm::cycle(8, &[0, 1, 2, 3, 4, 5, 6, 7])?;
    let s8 = Perm::from_images((0..8u32).map(|i| (8 - i) % 8).collect())?;
    out.push(regular(
        "D8",
        "a b | aaaa bb abab",
        z(2),
        Perm::identity(8),
        vec![r8.clone(), s8],
        vec![r8.pow(4)],
        perm_mul,
    )?);

    out.push(regular("Z/4 over Z/2", "a | aa", z(2), vec![0], vec![vec![1]], vec![vec![2]], cyclic_mul(vec![4]))?);

    // split products Γ × A, the A factor in the last coordinates
    let s3a = Perm::cycle(3, &[0, 1])?;
    let s3b = Perm::cycle(3, &[1, 2])?;
    let pair = |a: &(Perm, u32), b: &(Perm, u32)| (a.0.then(&b.0), (a.1 + b.1) % 2);
    out.push(regular(
        "S3 x Z/2",
        "a b | aa bb ababab",
        z(2),
        (Perm::identity(3), 0),
        vec![(s3a, 0), (s3b, 0)],
        vec![(Perm::identity(3), 1)],
        pair,
    )?);
    out.push(regular(
        "(Z/2)^2 x Z/2",
        "a b | aa bb abAB",
        z(2),
        vec![0, 0, 0],
        vec![vec![1, 0, 0], vec![0, 1, 0]],
        vec![vec![0, 0, 1]],
        cyclic_mul(vec![2, 2, 2]),
    )?);
    out.push(regular(
        "Z/3 x Z/3",
        "a | aaa",
        z(3),
        vec![0, 0],
        vec![vec![1, 0]],
        vec![vec![0, 1]],
        cyclic_mul(vec![3, 3]),
    )?);
    out.push(regular(
        "Z/4 x Z/4",
        "a | aaaa",
        z(4),
        vec![0, 0],
        vec![vec![1, 0]],
        vec![vec![0, 1]],
        cyclic_mul(vec![4, 4]),
    )?);

    // Q8 × Z/2 over its centre Z/2 × Z/2
    let q8z = |a: &(M2, u32), b: &(M2, u32)| (mat2(3)(&a.0, &b.0), (a.1 + b.1) % 2);
    let id: M2 = [[1, 0], [0, 1]];
    out.push(regular(
        "Q8 x Z/2",
        "a b | aa bb abAB",
        FiniteAbelianGroup::new(vec![2, 2])?,
        (id, 0),
        vec![([[0, 1], [2, 0]], 0), ([[1, 1], [1, 2]], 0)],
        vec![(minus, 0), (id, 1)],
        q8z,
    )?);
    Ok(out)
}
