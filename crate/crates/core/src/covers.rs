//! Finite covers from flat edge labelings, and the comparison between a class
//! pulled back to a cover and its `θ`-pushforward into co-induced coefficients
//! on the base.
//!
//! A labeling assigns to every edge `u < v` a permutation `g_uv` of the fiber
//! `F`, acting on the right. The lift of `[v0, .., vk]` at `f` is
//! `{(v_j, f·g_{v0 vj})}`, which is well defined exactly when the labeling is
//! flat: `g_uv g_vw = g_uw` on every triangle `u < v < w`.

use std::collections::BTreeMap;

use crate::abelian::FiniteAbelianGroup;
use crate::boolean::AtomMap;
use crate::cochain::{
    coboundary, cosystolic_norm, is_coboundary, CoboundaryTest, Cochain, Coefficients, CosetMin, SearchConfig,
};
use crate::complex::{SimplicialComplex, WeightScheme};
use crate::error::{Error, Result};
use crate::generators::FundamentalGroupData;
use crate::perm::Perm;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeLabeling {
    fiber: usize,
    tree: Vec<[usize; 2]>,
    /// Indexed like `X(1)`.
    labels: Vec<Perm>,
}

fn spanning_tree_check(x: &SimplicialComplex, tree: &[[usize; 2]]) -> Result<()> {
    let n = x.count(0);
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut v: usize) -> usize {
        while p[v] != v {
            p[v] = p[p[v]];
            v = p[v];
        }
        v
    }
    for e in tree {
        let k = x
            .index_of(&[e[0].min(e[1]), e[0].max(e[1])])
            .ok_or_else(|| Error::input(format!("tree edge {e:?} is not an edge")))?;
        let f = &x.facets(1)[k];
        let (a, b) = (root(&mut parent, f[0]), root(&mut parent, f[1]));
        if a == b {
            return Err(Error::input(format!("tree edge {e:?} closes a cycle")));
        }
        parent[a] = b;
    }
    if tree.len() + x.component_count() != n {
        return Err(Error::input("tree edges do not span every component"));
    }
    Ok(())
}

impl EdgeLabeling {
    /// Checks sizes, the tree, identity labels on the tree, and flatness.
    pub fn new(x: &SimplicialComplex, fiber: usize, tree: Vec<[usize; 2]>, labels: Vec<Perm>) -> Result<Self> {
        if x.dim() < 1 {
            return Err(Error::input("labelings need a complex with edges"));
        }
        if fiber == 0 {
            return Err(Error::input("the fiber must be nonempty"));
        }
        if labels.len() != x.count(1) || labels.iter().any(|p| p.degree() != fiber) {
            return Err(Error::Shape(format!("need {} labels on a fiber of size {fiber}", x.count(1))));
        }
        spanning_tree_check(x, &tree)?;
        for e in &tree {
            let k = x.index_of(&[e[0].min(e[1]), e[0].max(e[1])]).expect("checked");
            if !labels[k].is_identity() {
                return Err(Error::input(format!("tree edge {e:?} carries a non-identity label")));
            }
        }
        let l = EdgeLabeling { fiber, tree, labels };
        l.check_flat(x)?;
        Ok(l)
    }

    /// Identity labels on a fiber of the given size.
    pub fn trivial(x: &SimplicialComplex, fiber: usize, tree: Vec<[usize; 2]>) -> Result<Self> {
        Self::new(x, fiber, tree, vec![Perm::identity(fiber); x.count(1)])
    }

    /// Labels `g_e = Π_a gens[a]^{h_a(e)}` from abelian holonomy data; the
    /// generators must commute.
    pub fn from_holonomy(x: &SimplicialComplex, data: &FundamentalGroupData, gens: &[Perm]) -> Result<Self> {
        let fiber = gens.first().map(|g| g.degree()).ok_or_else(|| Error::input("no generator images"))?;
        for (a, g) in gens.iter().enumerate() {
            if g.degree() != fiber {
                return Err(Error::Shape("generator images act on different fibers".into()));
            }
            if let Some(h) = gens[a + 1..].iter().find(|h| !g.commutes_with(h)) {
                return Err(Error::input(format!("generator images {g} and {h} do not commute")));
            }
        }
        let labels = data
            .holonomy
            .iter()
            .map(|h| {
                if h.len() != gens.len() {
                    return Err(Error::Shape(format!(
                        "holonomy has rank {} but {} images were given",
                        h.len(),
                        gens.len()
                    )));
                }
                Ok(h.iter().zip(gens).fold(Perm::identity(fiber), |acc, (&k, g)| acc.then(&g.pow(k))))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(x, fiber, data.tree.clone(), labels)
    }

    pub fn fiber(&self) -> usize {
        self.fiber
    }

    pub fn tree(&self) -> &[[usize; 2]] {
        &self.tree
    }

    pub fn labels(&self) -> &[Perm] {
        &self.labels
    }

    /// The label of the oriented edge `u → v`.
    pub fn label(&self, x: &SimplicialComplex, u: usize, v: usize) -> Option<Perm> {
        let k = x.index_of(&[u.min(v), u.max(v)])?;
        Some(if u < v { self.labels[k].clone() } else { self.labels[k].inverse() })
    }

    pub fn check_flat(&self, x: &SimplicialComplex) -> Result<()> {
        if x.dim() < 2 {
            return Ok(());
        }
        for (t, fs) in x.facets(2).iter().enumerate() {
            // facets: [v1 v2], [v0 v2], [v0 v1]
            let (uv, vw, uw) = (&self.labels[fs[2]], &self.labels[fs[0]], &self.labels[fs[1]]);
            if uv.then(vw) != *uw {
                return Err(Error::Labeling { witness: x.simplices(2)[t].clone() });
            }
        }
        Ok(())
    }

    /// True when the labels generate a transitive group on the fiber.
    pub fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.fiber];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(p) = stack.pop() {
            for g in &self.labels {
                for q in [g.apply(p), g.inverse().apply(p)] {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Co-induced coefficients `map(F, A)` twisted by the labels.
    pub fn coefficients(&self, group: FiniteAbelianGroup) -> Coefficients {
        Coefficients::twisted(group, self.labels.clone()).expect("labels share the fiber")
    }

    /// Labeling file: optional `fiber N`, `tree u v` lines, and
    /// `label u v : p1 p2 ...` lines in 1-based one-line notation. Unlisted
    /// edges carry the identity.
    pub fn parse(text: &str, x: &SimplicialComplex) -> Result<Self> {
        let mut fiber = None;
        let mut tree = Vec::new();
        let mut given: BTreeMap<usize, Perm> = BTreeMap::new();
        for (ln, raw) in text.lines().enumerate() {
            let ln = ln + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let vertex = |t: &str| t.parse::<usize>().map_err(|_| Error::parse(ln, format!("bad vertex `{t}`")));
            let (head, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            match head {
                "fiber" => {
                    let n: usize = rest.trim().parse().map_err(|_| Error::parse(ln, "bad fiber size"))?;
                    fiber = Some(n);
                }
                "tree" => {
                    for pair in rest.split(',') {
                        let vs: Vec<usize> = pair.split_whitespace().map(vertex).collect::<Result<_>>()?;
                        if vs.len() != 2 {
                            return Err(Error::parse(ln, "tree edges are pairs `u v`"));
                        }
                        tree.push([vs[0], vs[1]]);
                    }
                }
                "label" => {
                    let (edge, perm) =
                        rest.split_once(':').ok_or_else(|| Error::parse(ln, "expected `label u v : permutation`"))?;
                    let vs: Vec<usize> = edge.split_whitespace().map(vertex).collect::<Result<_>>()?;
                    if vs.len() != 2 {
                        return Err(Error::parse(ln, "labels sit on edges `u v`"));
                    }
                    let p = Perm::parse_one_line(perm).map_err(|e| Error::parse(ln, e.to_string()))?;
                    let k = x
                        .index_of(&[vs[0].min(vs[1]), vs[0].max(vs[1])])
                        .ok_or_else(|| Error::parse(ln, format!("{vs:?} is not an edge")))?;
                    let p = if vs[0] < vs[1] { p } else { p.inverse() };
                    if given.insert(k, p).is_some() {
                        return Err(Error::parse(ln, "edge labeled twice"));
                    }
                }
                other => return Err(Error::parse(ln, format!("unknown directive `{other}`"))),
            }
        }
        let fiber = match (fiber, given.values().next()) {
            (Some(n), Some(p)) if p.degree() != n => {
                return Err(Error::input("label degree differs from the declared fiber"))
            }
            (Some(n), _) => n,
            (None, Some(p)) => p.degree(),
            (None, None) => 1,
        };
        let labels = (0..x.count(1)).map(|k| given.remove(&k).unwrap_or_else(|| Perm::identity(fiber))).collect();
        Self::new(x, fiber, tree, labels)
    }

    pub fn to_text(&self, x: &SimplicialComplex) -> String {
        let mut out = format!("fiber {}\n", self.fiber);
        for e in &self.tree {
            out.push_str(&format!("tree {} {}\n", e[0], e[1]));
        }
        for (k, p) in self.labels.iter().enumerate() {
            if !p.is_identity() {
                let e = &x.simplices(1)[k];
                out.push_str(&format!("label {} {} : {}\n", e[0], e[1], p.one_line()));
            }
        }
        out
    }
}

/// A finite cover `Y → X` with lift tables in every dimension.
#[derive(Debug, Clone)]
pub struct CoveringComplex {
    pub total: SimplicialComplex,
    pub fiber: usize,
    /// `projection[i][y]`: index in `X(i)` of the image of `Y(i)[y]`.
    pub projection: Vec<Vec<usize>>,
    /// `lift[i][s * fiber + f]`: index in `Y(i)` of the lift of `X(i)[s]` at `f`.
    pub lift: Vec<Vec<usize>>,
}

fn lift_simplex(
    x: &SimplicialComplex,
    labeling: &EdgeLabeling,
    vertex_pos: &BTreeMap<usize, usize>,
    s: &[usize],
    f: usize,
) -> Vec<usize> {
    let n = labeling.fiber;
    s.iter()
        .enumerate()
        .map(|(j, &v)| {
            let sheet = if j == 0 { f } else { labeling.label(x, s[0], v).expect("edge of a simplex").apply(f) };
            vertex_pos[&v] * n + sheet
        })
        .collect()
}

/// Builds the cover; vertex `(v, f)` of `Y` is numbered `pos(v)·|F| + f`,
/// where `pos(v)` is the rank of `v` among the vertices of `X`.
pub fn build_cover(x: &SimplicialComplex, labeling: &EdgeLabeling) -> Result<CoveringComplex> {
    labeling.check_flat(x)?;
    let n = labeling.fiber;
    let vertex_pos: BTreeMap<usize, usize> = x.vertices().into_iter().enumerate().map(|(k, v)| (v, k)).collect();
    let tops: Vec<Vec<usize>> = x
        .maximal_simplices()
        .iter()
        .flat_map(|s| (0..n).map(|f| lift_simplex(x, labeling, &vertex_pos, s, f)).collect::<Vec<_>>())
        .collect();
    let total = SimplicialComplex::build(&tops)?;
    let mut projection = Vec::new();
    let mut lift = Vec::new();
    for i in 0..=x.dim() {
        if total.count(i) != n * x.count(i) {
            return Err(Error::Structure(format!("cover is not {n}-to-1 in dimension {i}")));
        }
        let mut proj = vec![usize::MAX; total.count(i)];
        let mut up = vec![0usize; n * x.count(i)];
        for (s, simplex) in x.simplices(i).iter().enumerate() {
            for f in 0..n {
                let y = total
                    .index_of(&lift_simplex(x, labeling, &vertex_pos, simplex, f))
                    .ok_or_else(|| Error::Structure(format!("lift of {simplex:?} at sheet {f} is missing")))?;
                if proj[y] != usize::MAX {
                    return Err(Error::Structure(format!("two lifts of dimension {i} coincide")));
                }
                proj[y] = s;
                up[s * n + f] = y;
            }
        }
        projection.push(proj);
        lift.push(up);
    }
    // Covering map: the faces of every lift project onto the faces of its image.
    for i in 1..=x.dim() {
        for (y, fs) in total.facets(i).iter().enumerate() {
            let img: Vec<usize> = fs.iter().map(|&f| projection[i - 1][f]).collect();
            if img != x.facets(i)[projection[i][y]] {
                return Err(Error::Structure("projection is not simplicial".into()));
            }
        }
    }
    Ok(CoveringComplex { total, fiber: n, projection, lift })
}

impl CoveringComplex {
    /// The base weights spread evenly over each fiber.
    pub fn fiber_scheme(&self, x: &SimplicialComplex, base: &WeightScheme) -> Result<WeightScheme> {
        let values = (0..=x.dim())
            .map(|i| {
                let nu = base.normalized(i)?;
                Ok(self.projection[i].iter().map(|&s| nu[s] / Rational::from_integer(self.fiber as i128)).collect())
            })
            .collect::<Result<Vec<Vec<Rational>>>>()?;
        WeightScheme::custom(&self.total, values)
    }

    /// `c̃(y) = c(p(y))` for a plain cochain on the base.
    pub fn pullback(&self, x: &SimplicialComplex, coeffs: &Coefficients, c: &Cochain) -> Result<Cochain> {
        if !coeffs.is_plain() {
            return Err(Error::input("pullback expects plain A-coefficients"));
        }
        let i = c.degree();
        if c.cells() != x.count(i) {
            return Err(Error::Shape("cochain does not live on the base".into()));
        }
        let mut out = Cochain::zero(&self.total, coeffs, i);
        for (y, &s) in self.projection[i].iter().enumerate() {
            out.set(y, 0, &c.get(s, 0));
        }
        Ok(out)
    }

    /// The `map(F, A)`-cochain on the base that reads a cochain on `Y` along
    /// the lifts: `(σ, f) ↦ c(lift(σ, f))`.
    pub fn regroup(
        &self,
        x: &SimplicialComplex,
        labeling: &EdgeLabeling,
        group: &FiniteAbelianGroup,
        c: &Cochain,
    ) -> Result<Cochain> {
        let i = c.degree();
        if c.cells() != self.total.count(i) || c.atoms() != 1 {
            return Err(Error::Shape("cochain does not live on the cover".into()));
        }
        let coeffs = labeling.coefficients(group.clone());
        let mut out = Cochain::zero(x, &coeffs, i);
        for s in 0..x.count(i) {
            for f in 0..self.fiber {
                out.set(s, f, &c.get(self.lift[i][s * self.fiber + f], 0));
            }
        }
        Ok(out)
    }
}

fn require_cocycle(x: &SimplicialComplex, coeffs: &Coefficients, c: &Cochain) -> Result<()> {
    if c.degree() < x.dim() && !coboundary(x, coeffs, c)?.is_zero() {
        return Err(Error::input("the cochain is not a cocycle"));
    }
    Ok(())
}

/// `θ(c)`: the fiberwise-constant `map(F, A)`-cochain of a plain cocycle.
pub fn pushforward_theta(
    x: &SimplicialComplex,
    labeling: &EdgeLabeling,
    group: &FiniteAbelianGroup,
    c: &Cochain,
) -> Result<Cochain> {
    let plain = Coefficients::plain(group.clone());
    require_cocycle(x, &plain, c)?;
    Ok(c.theta(labeling.fiber()))
}

/// Transports a `map(F', A)`-cochain along a fiber map `π: F → F'` given as
/// [`AtomMap::Refine`]: `(σ, f) ↦ c(σ, π(f))`. The map must be equivariant
/// for the two labelings and have fibers of equal size.
pub fn refine_along(
    x: &SimplicialComplex,
    coarse: &EdgeLabeling,
    fine: &EdgeLabeling,
    map: &AtomMap,
    c: &Cochain,
) -> Result<Cochain> {
    let AtomMap::Refine(parent) = map else {
        return Err(Error::Morphism("covers refine along a fiber map".into()));
    };
    if parent.len() != fine.fiber() || c.atoms() != coarse.fiber() {
        return Err(Error::Morphism("fiber map does not match the labelings".into()));
    }
    let mut sizes = vec![0usize; coarse.fiber()];
    for &p in parent {
        if p >= coarse.fiber() {
            return Err(Error::Morphism(format!("sheet {} maps outside the coarse fiber", p + 1)));
        }
        sizes[p] += 1;
    }
    if sizes.iter().any(|&k| k * coarse.fiber() != fine.fiber()) {
        return Err(Error::Morphism("fiber map is not measure preserving".into()));
    }
    for (k, (g, h)) in fine.labels().iter().zip(coarse.labels()).enumerate() {
        if (0..fine.fiber()).any(|f| parent[g.apply(f)] != h.apply(parent[f])) {
            let e = &x.simplices(1)[k];
            return Err(Error::Morphism(format!("fiber map is not equivariant along edge {e:?}")));
        }
    }
    let mut out = c.zero_with_atoms(fine.fiber());
    for s in 0..c.cells() {
        for (f, &p) in parent.iter().enumerate() {
            out.set(s, f, &c.get(s, p));
        }
    }
    Ok(out)
}

/// Both sides of the Shapiro comparison for one class.
#[derive(Debug, Clone)]
pub struct ShapiroReport {
    /// Cosystolic norm of `θ(c)` on the base with twisted coefficients.
    pub downstairs: CosetMin,
    /// Cosystolic norm of the pullback on the cover with the fiber measure.
    pub upstairs: CosetMin,
    pub cover_vertices: usize,
    pub cover_euler: i64,
    pub connected: bool,
}

impl ShapiroReport {
    pub fn equal(&self) -> bool {
        self.downstairs.value == self.upstairs.value
    }

    pub fn certified(&self) -> bool {
        self.downstairs.certified && self.upstairs.certified
    }
}

pub fn shapiro_check(
    x: &SimplicialComplex,
    labeling: &EdgeLabeling,
    group: &FiniteAbelianGroup,
    scheme: &WeightScheme,
    c: &Cochain,
    cfg: &SearchConfig,
) -> Result<ShapiroReport> {
    let theta = pushforward_theta(x, labeling, group, c)?;
    let twisted = labeling.coefficients(group.clone());
    let downstairs = cosystolic_norm(x, &twisted, scheme, &theta, cfg)?;
    let cover = build_cover(x, labeling)?;
    let plain = Coefficients::plain(group.clone());
    let lifted = cover.pullback(x, &plain, c)?;
    let up_scheme = cover.fiber_scheme(x, scheme)?;
    let upstairs = cosystolic_norm(&cover.total, &plain, &up_scheme, &lifted, cfg)?;
    Ok(ShapiroReport {
        downstairs,
        upstairs,
        cover_vertices: cover.total.count(0),
        cover_euler: cover.total.euler_characteristic(),
        connected: cover.total.component_count() == 1,
    })
}

/// Whether a class dies on the cover, decided by solving `δb = c̃` there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VanishingResult {
    pub vanishes: bool,
    pub certificate: CoboundaryTest,
}

pub fn vanishing_test(
    x: &SimplicialComplex,
    labeling: &EdgeLabeling,
    group: &FiniteAbelianGroup,
    c: &Cochain,
    linalg_budget: u64,
) -> Result<VanishingResult> {
    let plain = Coefficients::plain(group.clone());
    require_cocycle(x, &plain, c)?;
    let cover = build_cover(x, labeling)?;
    let lifted = cover.pullback(x, &plain, c)?;
    let certificate = is_coboundary(&cover.total, &plain, &lifted, linalg_budget)?;
    if let CoboundaryTest::Primitive(b) = &certificate {
        if coboundary(&cover.total, &plain, b)? != lifted {
            return Err(Error::Structure("solver returned a primitive that does not verify".into()));
        }
    }
    Ok(VanishingResult { vanishes: matches!(certificate, CoboundaryTest::Primitive(_)), certificate })
}

/// Pushforward class norms over a supplied family of finite actions.
#[derive(Debug, Clone)]
pub struct LowerBoundReport {
    /// Per labeling: the norm, or the error that made it unavailable.
    pub entries: Vec<(String, Result<CosetMin>)>,
}

impl LowerBoundReport {
    /// Minimum over the entries that were computed.
    pub fn minimum(&self) -> Option<Rational> {
        self.entries.iter().filter_map(|(_, r)| r.as_ref().ok().map(|m| m.value)).min()
    }

    pub fn certified(&self) -> bool {
        self.entries.iter().all(|(_, r)| r.as_ref().is_ok_and(|m| m.certified))
    }
}

pub fn lower_bound_report(
    x: &SimplicialComplex,
    group: &FiniteAbelianGroup,
    scheme: &WeightScheme,
    c: &Cochain,
    labelings: &[(String, EdgeLabeling)],
    cfg: &SearchConfig,
) -> Result<LowerBoundReport> {
    let plain = Coefficients::plain(group.clone());
    require_cocycle(x, &plain, c)?;
    let entries = labelings
        .iter()
        .map(|(name, l)| {
            let r = pushforward_theta(x, l, group, c)
                .and_then(|theta| cosystolic_norm(x, &l.coefficients(group.clone()), scheme, &theta, cfg));
            (name.clone(), r)
        })
        .collect();
    Ok(LowerBoundReport { entries })
}

/// Norms of `θ(c)` along a fiber map `F → F'` from a finer to a coarser
/// labeling, plus the norm of the transported coarse minimizer.
#[derive(Debug, Clone)]
pub struct ContractivityReport {
    pub coarse: CosetMin,
    pub fine: CosetMin,
    /// Norm of the coarse minimizer carried along the fiber map.
    pub transported_witness_norm: Rational,
}

impl ContractivityReport {
    pub fn holds(&self) -> bool {
        self.fine.value <= self.coarse.value && self.transported_witness_norm == self.coarse.value
    }
}

pub fn contractivity_check(
    x: &SimplicialComplex,
    coarse: &EdgeLabeling,
    fine: &EdgeLabeling,
    map: &AtomMap,
    group: &FiniteAbelianGroup,
    scheme: &WeightScheme,
    c: &Cochain,
    cfg: &SearchConfig,
) -> Result<ContractivityReport> {
    let coarse_coeffs = coarse.coefficients(group.clone());
    let fine_coeffs = fine.coefficients(group.clone());
    let theta_coarse = pushforward_theta(x, coarse, group, c)?;
    let theta_fine = refine_along(x, coarse, fine, map, &theta_coarse)?;
    debug_assert_eq!(theta_fine, c.theta(fine.fiber()));
    let coarse_min = cosystolic_norm(x, &coarse_coeffs, scheme, &theta_coarse, cfg)?;
    let fine_min = cosystolic_norm(x, &fine_coeffs, scheme, &theta_fine, cfg)?;
    let moved = refine_along(x, coarse, fine, map, &coarse_min.witness)?;
    let transported_witness_norm = crate::cochain::norm(x, &fine_coeffs, scheme, &moved)?;
    Ok(ContractivityReport { coarse: coarse_min, fine: fine_min, transported_witness_norm })
}
