//! Pure finite simplicial complexes, their face lattices, links, skeleta and
//! the two standard weight schemes on simplices.
//!
//! Simplices are sorted vertex lists; the increasing order is the orientation.
//! Faces of each dimension are stored in lexicographic order and addressed by
//! their position in that order.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub type Simplex = Vec<usize>;

#[derive(Debug)]
pub struct SimplicialComplex {
    dim: usize,
    faces: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
    /// Number of top-dimensional simplices containing each face.
    top_cofaces: Vec<Vec<u64>>,
    facets: Vec<OnceLock<Vec<Vec<usize>>>>,
    cofaces: Vec<OnceLock<Vec<Vec<usize>>>>,
}

impl Clone for SimplicialComplex {
    fn clone(&self) -> Self {
        Self::from_validated_faces(self.faces.clone())
    }
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

fn factorial(n: u64) -> u64 {
    (1..=n).product::<u64>().max(1)
}

fn for_each_subset(s: &[usize], mut f: impl FnMut(Simplex)) {
    let n = s.len();
    for mask in 1u64..(1u64 << n) {
        f((0..n).filter(|k| mask >> k & 1 == 1).map(|k| s[k]).collect());
    }
}

impl SimplicialComplex {
    /// Builds the downward closure of the given simplices and checks purity.
    pub fn build(simplices: &[Simplex]) -> Result<Self> {
        if simplices.is_empty() {
            return Err(Error::input("a complex needs at least one simplex"));
        }
        let mut listed: BTreeSet<Simplex> = BTreeSet::new();
        for s in simplices {
            let mut sorted = s.clone();
            sorted.sort_unstable();
            if sorted.is_empty() {
                return Err(Error::input("empty simplex in input"));
            }
            if sorted.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::input(format!("simplex {s:?} repeats a vertex")));
            }
            if sorted.len() > 20 {
                return Err(Error::input(format!("simplex {s:?} has more than 20 vertices")));
            }
            if !listed.insert(sorted) {
                return Err(Error::input(format!("simplex {s:?} is listed twice")));
            }
        }
        let dim = listed.iter().map(|s| s.len() - 1).max().unwrap_or(0);
        let top: Vec<&Simplex> = listed.iter().filter(|s| s.len() == dim + 1).collect();
        let mut covered: BTreeSet<Simplex> = BTreeSet::new();
        for t in &top {
            for_each_subset(t, |f| {
                covered.insert(f);
            });
        }
        if let Some(w) = listed.iter().find(|s| !covered.contains(*s)) {
            return Err(Error::Purity { witness: w.clone() });
        }
        let mut faces: Vec<Vec<Simplex>> = vec![Vec::new(); dim + 1];
        for f in covered {
            faces[f.len() - 1].push(f);
        }
        for layer in faces.iter_mut() {
            layer.sort();
        }
        Ok(Self::from_validated_faces(faces))
    }

    fn from_validated_faces(faces: Vec<Vec<Simplex>>) -> Self {
        let dim = faces.len() - 1;
        let index: Vec<HashMap<Simplex, usize>> =
            faces.iter().map(|layer| layer.iter().enumerate().map(|(k, s)| (s.clone(), k)).collect()).collect();
        let mut top_cofaces: Vec<Vec<u64>> = faces.iter().map(|l| vec![0; l.len()]).collect();
        for t in &faces[dim] {
            for_each_subset(t, |f| {
                let i = f.len() - 1;
                top_cofaces[i][index[i][&f]] += 1;
            });
        }
        SimplicialComplex {
            dim,
            faces,
            index,
            top_cofaces,
            facets: (0..=dim).map(|_| OnceLock::new()).collect(),
            cofaces: (0..=dim).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `X(i)` in lexicographic order; empty for `i > dim`.
    pub fn simplices(&self, i: usize) -> &[Simplex] {
        self.faces.get(i).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn count(&self, i: usize) -> usize {
        self.simplices(i).len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        self.faces[0].iter().map(|v| v[0]).collect()
    }

    pub fn maximal_simplices(&self) -> &[Simplex] {
        &self.faces[self.dim]
    }

    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() || s.len() > self.dim + 1 {
            return None;
        }
        self.index[s.len() - 1].get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    fn require(&self, s: &[usize]) -> Result<usize> {
        self.index_of(s).ok_or_else(|| Error::input(format!("{s:?} is not a simplex of the complex")))
    }

    /// Number of top-dimensional simplices containing the `k`-th `i`-simplex.
    pub fn top_coface_count(&self, i: usize, k: usize) -> u64 {
        self.top_cofaces[i][k]
    }

    /// For every `i`-simplex, the indices of its `(i-1)`-faces in the order
    /// `τ∖v_0, τ∖v_1, ...`.
    pub fn facets(&self, i: usize) -> &[Vec<usize>] {
        assert!(i >= 1 && i <= self.dim, "facets of dimension {i} requested");
        self.facets[i].get_or_init(|| {
            self.faces[i]
                .iter()
                .map(|t| {
                    (0..t.len())
                        .map(|j| {
                            let mut f = t.clone();
                            f.remove(j);
                            self.index[i - 1][&f]
                        })
                        .collect()
                })
                .collect()
        })
    }

    /// For every `i`-simplex, the indices of the `(i+1)`-simplices containing it.
    pub fn cofaces(&self, i: usize) -> &[Vec<usize>] {
        assert!(i < self.dim, "cofaces of dimension {i} requested");
        self.cofaces[i].get_or_init(|| {
            let mut out = vec![Vec::new(); self.count(i)];
            for (t, fs) in self.facets(i + 1).iter().enumerate() {
                for &f in fs {
                    out[f].push(t);
                }
            }
            out
        })
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.faces.iter().enumerate().map(|(i, l)| if i % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) }).sum()
    }

    /// Component label per vertex index, labels numbered by first appearance.
    pub fn components(&self) -> Vec<usize> {
        let n = self.count(0);
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut c = x;
            while p[c] != r {
                let nx = p[c];
                p[c] = r;
                c = nx;
            }
            r
        }
        if self.dim >= 1 {
            for fs in self.facets(1) {
                let (a, b) = (find(&mut parent, fs[0]), find(&mut parent, fs[1]));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
        let mut label = HashMap::new();
        (0..n)
            .map(|v| {
                let r = find(&mut parent, v);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect()
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    /// `μ(σ) = |{τ ∈ X(d) : σ ⊂ τ}| / (C(d+1, i+1) · |X(d)|)`.
    pub fn weight_mu(&self, s: &[usize]) -> Result<Rational> {
        let k = self.require(s)?;
        Ok(self.mu_at(s.len() - 1, k))
    }

    fn mu_at(&self, i: usize, k: usize) -> Rational {
        let d = self.dim as u64;
        let denom = binomial(d + 1, i as u64 + 1) * self.count(self.dim) as u64;
        Rational::new(self.top_cofaces[i][k] as i128, denom as i128)
    }

    /// `m(σ) = (d - i)! · |{τ ∈ X(d) : σ ⊆ τ}|`.
    pub fn weight_m(&self, s: &[usize]) -> Result<Rational> {
        let k = self.require(s)?;
        Ok(self.m_at(s.len() - 1, k))
    }

    fn m_at(&self, i: usize, k: usize) -> Rational {
        let f = factorial((self.dim - i) as u64);
        Rational::from_integer((f * self.top_cofaces[i][k]) as i128)
    }

    /// The link `{τ : τ ∩ σ = ∅, τ ∪ σ ∈ X}`, re-indexed onto `0..k`.
    /// Returns `None` when `σ` is maximal (the link is the empty complex).
    pub fn link(&self, s: &[usize]) -> Result<Option<Link>> {
        let mut sigma = s.to_vec();
        sigma.sort_unstable();
        self.require(&sigma)?;
        let mut pieces: Vec<Simplex> = Vec::new();
        for t in &self.faces[self.dim] {
            if sigma.iter().all(|v| t.binary_search(v).is_ok()) {
                let rest: Simplex = t.iter().copied().filter(|v| sigma.binary_search(v).is_err()).collect();
                if !rest.is_empty() {
                    pieces.push(rest);
                }
            }
        }
        if pieces.is_empty() {
            return Ok(None);
        }
        let vertex_map: Vec<usize> = pieces.iter().flatten().copied().collect::<BTreeSet<_>>().into_iter().collect();
        let relabel: HashMap<usize, usize> = vertex_map.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let pieces: Vec<Simplex> = pieces.iter().map(|p| p.iter().map(|v| relabel[v]).collect()).collect();
        Ok(Some(Link { sigma, complex: SimplicialComplex::build(&pieces)?, vertex_map }))
    }

    /// All simplices of dimension at most `k`.
    pub fn skeleton(&self, k: usize) -> Result<SimplicialComplex> {
        if k > self.dim {
            return Err(Error::input(format!("skeleton dimension {k} exceeds complex dimension {}", self.dim)));
        }
        Ok(Self::from_validated_faces(self.faces[..=k].to_vec()))
    }

    /// Complex file format: one maximal simplex per line, `#` comments.
    pub fn parse(text: &str) -> Result<Self> {
        let mut simplices = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let s = line
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| Error::parse(ln + 1, format!("bad vertex `{t}`"))))
                .collect::<Result<Simplex>>()?;
            simplices.push(s);
        }
        Self::build(&simplices)
    }

    /// Writes the maximal simplices in the complex file format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for s in self.maximal_simplices() {
            out.push_str(&s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "));
            out.push('\n');
        }
        out
    }
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let counts: Vec<String> = self.faces.iter().map(|l| l.len().to_string()).collect();
        write!(f, "dim {} f-vector ({})", self.dim, counts.join(","))
    }
}

/// A link together with the original label of each re-indexed vertex.
#[derive(Debug, Clone)]
pub struct Link {
    pub sigma: Simplex,
    pub complex: SimplicialComplex,
    pub vertex_map: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Mu,
    M,
    Custom,
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SchemeKind::Mu => "mu",
            SchemeKind::M => "m",
            SchemeKind::Custom => "custom",
        })
    }
}

/// Positive weights on the simplices of every dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightScheme {
    kind: SchemeKind,
    values: Vec<Vec<Rational>>,
}

impl WeightScheme {
    pub fn mu(x: &SimplicialComplex) -> Self {
        let values = (0..=x.dim).map(|i| (0..x.count(i)).map(|k| x.mu_at(i, k)).collect()).collect();
        WeightScheme { kind: SchemeKind::Mu, values }
    }

    pub fn m(x: &SimplicialComplex) -> Self {
        let values = (0..=x.dim).map(|i| (0..x.count(i)).map(|k| x.m_at(i, k)).collect()).collect();
        WeightScheme { kind: SchemeKind::M, values }
    }

    pub fn of_kind(kind: SchemeKind, x: &SimplicialComplex) -> Result<Self> {
        match kind {
            SchemeKind::Mu => Ok(Self::mu(x)),
            SchemeKind::M => Ok(Self::m(x)),
            SchemeKind::Custom => Err(Error::input("custom schemes are built with WeightScheme::custom")),
        }
    }

    pub fn custom(x: &SimplicialComplex, values: Vec<Vec<Rational>>) -> Result<Self> {
        if values.len() != x.dim + 1 || values.iter().enumerate().any(|(i, v)| v.len() != x.count(i)) {
            return Err(Error::Shape("custom weights do not match the face counts".into()));
        }
        if values.iter().flatten().any(|w| *w <= Rational::zero()) {
            return Err(Error::input("custom weights must be positive"));
        }
        Ok(WeightScheme { kind: SchemeKind::Custom, values })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn dims(&self) -> usize {
        self.values.len()
    }

    pub fn raw(&self, i: usize) -> &[Rational] {
        &self.values[i]
    }

    /// Degree-`i` weights rescaled to total mass one.
    pub fn normalized(&self, i: usize) -> Result<Vec<Rational>> {
        let layer = self.values.get(i).ok_or_else(|| Error::Shape(format!("weight scheme has no degree {i}")))?;
        let total: Rational = layer.iter().sum();
        if total.is_zero() {
            return Err(Error::Shape(format!("weight scheme has zero mass in degree {i}")));
        }
        Ok(layer.iter().map(|w| w / total).collect())
    }

    /// Multiplies the degree-`i` weights by `factor`.
    pub fn rescaled(&self, i: usize, factor: Rational) -> Self {
        let mut out = self.clone();
        for w in out.values[i].iter_mut() {
            *w *= factor;
        }
        out.kind = SchemeKind::Custom;
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_complex, octahedron, torus_7};
    use crate::rational::rat;

    fn cx(s: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::build(&s.iter().map(|v| v.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn build_examples() {
        let tri = cx(&[&[0, 1, 2]]);
        assert_eq!((tri.count(0), tri.count(1), tri.count(2)), (3, 3, 1));
        let c3 = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        assert_eq!(c3.dim(), 1);
        assert_eq!(c3.count(1), 3);
        let err = SimplicialComplex::build(&[vec![0, 1, 2], vec![3, 4]]).unwrap_err();
        assert_eq!(err, Error::Purity { witness: vec![3, 4] });
        assert!(matches!(SimplicialComplex::build(&[vec![0, 1], vec![1, 0]]), Err(Error::Input(_))));
        assert!(matches!(SimplicialComplex::build(&[vec![0, 0]]), Err(Error::Input(_))));
        assert!(SimplicialComplex::build(&[]).is_err());
        // A listed face of another listed simplex is absorbed.
        assert_eq!(cx(&[&[0, 1, 2], &[0, 1]]), tri);
    }

    #[test]
    fn mu_examples() {
        let k4 = complete_complex(4, 1).unwrap();
        assert_eq!(k4.weight_mu(&[2]).unwrap(), rat(1, 4));
        let tri = cx(&[&[0, 1, 2]]);
        assert_eq!(tri.weight_mu(&[0, 2]).unwrap(), rat(1, 3));
        let (t, _) = torus_7();
        for e in t.simplices(1) {
            assert_eq!(t.weight_mu(e).unwrap(), rat(1, 21));
        }
        assert!(tri.weight_mu(&[0, 5]).is_err());
    }

    #[test]
    fn m_examples() {
        let k4 = complete_complex(4, 1).unwrap();
        assert_eq!(k4.weight_m(&[0]).unwrap(), rat(3, 1));
        assert_eq!(k4.weight_m(&[0, 3]).unwrap(), rat(1, 1));
        let tri = cx(&[&[0, 1, 2]]);
        assert_eq!(tri.weight_m(&[1]).unwrap(), rat(2, 1));
        assert_eq!(tri.weight_m(&[1, 2]).unwrap(), rat(1, 1));
        assert_eq!(tri.weight_m(&[0, 1, 2]).unwrap(), rat(1, 1));
        let (t, _) = torus_7();
        for v in 0..7 {
            assert_eq!(t.weight_m(&[v]).unwrap(), rat(12, 1));
        }
    }

    #[test]
    fn scheme_identities_on_small_corpus() {
        let mut corpus =
            vec![complete_complex(5, 2).unwrap(), torus_7().0, octahedron(), cx(&[&[0, 1, 2], &[1, 2, 3], &[3, 4, 5]])];
        corpus.push(complete_complex(6, 3).unwrap());
        for x in &corpus {
            let mu = WeightScheme::mu(x);
            let m = WeightScheme::m(x);
            for i in 0..=x.dim() {
                assert_eq!(mu.raw(i).iter().sum::<Rational>(), rat(1, 1));
            }
            for i in 0..x.dim() {
                for (k, cof) in x.cofaces(i).iter().enumerate() {
                    let s: Rational = cof.iter().map(|&t| m.raw(i + 1)[t]).sum();
                    assert_eq!(m.raw(i)[k], s);
                }
            }
        }
    }

    #[test]
    fn link_examples() {
        let tri = cx(&[&[0, 1, 2]]);
        let l = tri.link(&[0]).unwrap().unwrap();
        assert_eq!(l.complex.dim(), 1);
        assert_eq!(l.complex.count(1), 1);
        assert_eq!(l.vertex_map, vec![1, 2]);
        assert!(tri.link(&[0, 1, 2]).unwrap().is_none());

        let c3 = cx(&[&[0, 1], &[1, 2], &[0, 2]]);
        let l = c3.link(&[1]).unwrap().unwrap();
        assert_eq!(l.complex.dim(), 0);
        assert_eq!(l.complex.count(0), 2);

        let oct = octahedron();
        let l = oct.link(&[0]).unwrap().unwrap();
        assert_eq!((l.complex.count(0), l.complex.count(1)), (4, 4));
        assert_eq!(l.complex.dim(), 1);
        assert!(l.complex.simplices(0).iter().all(|v| l.complex.cofaces(0)[l.complex.index_of(v).unwrap()].len() == 2));

        assert!(tri.link(&[7]).is_err());
    }

    #[test]
    fn links_are_pure_of_expected_dimension() {
        let x = complete_complex(6, 3).unwrap();
        for i in 0..3 {
            for s in x.simplices(i) {
                let l = x.link(s).unwrap().unwrap();
                assert_eq!(l.complex.dim(), 3 - s.len());
            }
        }
    }

    #[test]
    fn skeleton_examples() {
        let tri = cx(&[&[0, 1, 2]]);
        assert_eq!(tri.skeleton(1).unwrap(), cx(&[&[0, 1], &[1, 2], &[0, 2]]));
        assert_eq!(complete_complex(4, 3).unwrap().skeleton(1).unwrap(), complete_complex(4, 1).unwrap());
        assert_eq!(tri.skeleton(2).unwrap(), tri);
        assert!(tri.skeleton(3).is_err());
    }

    #[test]
    fn file_format() {
        let x = SimplicialComplex::parse("# triangle\n0 1 2\n\n2 3 # edge\n").unwrap_err();
        assert_eq!(x, Error::Purity { witness: vec![2, 3] });
        let y = SimplicialComplex::parse("0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(SimplicialComplex::parse(&y.to_text()).unwrap(), y);
        assert!(matches!(SimplicialComplex::parse("0 1\n1 x\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn components_and_euler() {
        let two = cx(&[&[0, 1], &[2, 3], &[3, 4]]);
        assert_eq!(two.component_count(), 2);
        assert_eq!(torus_7().0.euler_characteristic(), 0);
        assert_eq!(octahedron().euler_characteristic(), 2);
    }
}
