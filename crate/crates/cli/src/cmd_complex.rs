use std::path::PathBuf;

use clap::{Args, ValueEnum};
use metcoh_core::cochain::{
    cohomology, cosystole as cosystole_of, cosystolic_norm, format_cochain, lipschitz_constant, parse_cochain,
    Coefficients,
};
use metcoh_core::covers::EdgeLabeling;
use metcoh_core::expansion::{
    coboundary_expander_check, cosystolic_expander_check, expansion_constant, km_hypotheses_report, skeleton_expansion,
    upper_laplacian_spectrum, walk_spectrum, ExpansionReport,
};
use metcoh_core::generators::{
    complete_complex, cycle_graph, flag_complex_subspaces, octahedron, random_complex, torus_7,
};
use metcoh_core::perm::Perm;
use metcoh_core::rational::{parse_rational, sum};
use metcoh_core::{Error, FiniteAbelianGroup, MeasuredBoolean, SimplicialComplex, WeightScheme};

use crate::report::{fmt_float, Report};
use crate::{load_complex, read, Common, Context, Outcome};

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    Complete,
    Cycle,
    Octahedron,
    Flag,
    Torus7,
    Random,
}

#[derive(Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    /// Vertex count (complete, cycle, random).
    #[arg(long)]
    n: Option<usize>,
    /// Dimension (complete, random).
    #[arg(long)]
    d: Option<usize>,
    /// Field size for the flag complex of subspaces of F_q^3.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Inclusion probability of top faces (random).
    #[arg(long, default_value = "0.5")]
    p: f64,
    /// Fiber size of a cyclic cover built from the recorded fundamental group
    /// (cycle, torus7); written with --labeling-out.
    #[arg(long)]
    cover_fiber: Option<usize>,
    /// Shift of each fundamental-group generator in the cyclic cover.
    #[arg(long, default_value = "1")]
    shifts: String,
    #[arg(long)]
    labeling_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

pub fn generate(a: GenerateArgs) -> Outcome<()> {
    let need = |v: Option<usize>, flag: &str| v.ok_or_else(|| Error::input(format!("this kind needs --{flag}")));
    let mut note = None;
    let (x, data) = match a.kind {
        Kind::Complete => (complete_complex(need(a.n, "n")?, need(a.d, "d")?)?, None),
        Kind::Cycle => {
            let (x, data) = cycle_graph(need(a.n, "n")?)?;
            (x, Some(data))
        }
        Kind::Octahedron => (octahedron(), None),
        Kind::Flag => (flag_complex_subspaces(a.q, 3)?, None),
        Kind::Torus7 => {
            let (x, data) = torus_7();
            (x, Some(data))
        }
        Kind::Random => {
            let r = random_complex(need(a.n, "n")?, need(a.d, "d")?, a.p, a.common.seed)?;
            note = Some(format!(
                "# retries: {}\n{}",
                r.retries,
                r.warning.map(|w| format!("# warning: {w}\n")).unwrap_or_default()
            ));
            (r.complex, None)
        }
    };
    if let Some(fiber) = a.cover_fiber {
        let data = data.ok_or_else(|| Error::input("covers can only be generated for cycle and torus7"))?;
        let path = a.labeling_out.as_ref().ok_or_else(|| Error::input("--cover-fiber needs --labeling-out"))?;
        let shifts: Vec<usize> = a
            .shifts
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| t.parse().map_err(|_| Error::input(format!("bad shift `{t}`"))))
            .collect::<metcoh_core::Result<_>>()?;
        let rank = data.holonomy.first().map_or(0, |h| h.len());
        if shifts.len() != rank {
            return Err(Error::input(format!("need {rank} shifts, one per fundamental-group generator")).into());
        }
        let gens = shifts
            .iter()
            .map(|s| Perm::from_images((0..fiber).map(|f| ((f + s) % fiber) as u32).collect()))
            .collect::<metcoh_core::Result<Vec<_>>>()?;
        let labeling = EdgeLabeling::from_holonomy(&x, &data, &gens)?;
        std::fs::write(path, labeling.to_text(&x)).map_err(|e| crate::Failure {
            context: Some(path.display().to_string()),
            error: Error::input(e.to_string()),
        })?;
    }
    a.common.emit(&format!("{}{}", note.unwrap_or_default(), x.to_text()))
}

#[derive(Args)]
pub struct CoeffArgs {
    #[arg(long)]
    complex: PathBuf,
    /// Coefficient group, e.g. `Z/2 x Z/3`.
    #[arg(long, default_value = "Z/2")]
    coeff: String,
    /// Twist the coefficients by the permutation module of this edge labeling.
    #[arg(long, conflicts_with = "algebra")]
    labeling: Option<PathBuf>,
    /// Use P(A) over this measured algebra (untwisted).
    #[arg(long)]
    algebra: Option<PathBuf>,
}

impl CoeffArgs {
    pub fn load(&self) -> Outcome<(SimplicialComplex, FiniteAbelianGroup, Coefficients)> {
        let x = load_complex(&self.complex)?;
        let group: FiniteAbelianGroup = self.coeff.parse()?;
        let coeffs = if let Some(p) = &self.labeling {
            EdgeLabeling::parse(&read(p)?, &x).in_file(p)?.coefficients(group.clone())
        } else if let Some(p) = &self.algebra {
            Coefficients::measured(group.clone(), &MeasuredBoolean::parse(&read(p)?).in_file(p)?)
        } else {
            Coefficients::plain(group.clone())
        };
        Ok((x, group, coeffs))
    }
}

fn describe_complex(r: &mut Report, x: &SimplicialComplex) {
    r.kv("dimension", x.dim());
    let f: Vec<String> = (0..=x.dim()).map(|i| x.count(i).to_string()).collect();
    r.kv("f-vector", f.join(" "));
    r.kv("maximal simplices", x.maximal_simplices().len());
    r.kv("euler characteristic", x.euler_characteristic());
    r.kv("components", x.component_count());
}

#[derive(Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    coeffs: CoeffArgs,
    #[command(flatten)]
    common: Common,
}

pub fn analyze(a: AnalyzeArgs) -> Outcome<()> {
    let (x, _, coeffs) = a.coeffs.load()?;
    let cfg = a.common.config()?;
    let scheme = a.common.scheme(&x)?;
    let mut r = a.common.report("analyze-complex");
    describe_complex(&mut r, &x);
    r.kv("coefficients", coeffs.describe());
    let mu = WeightScheme::mu(&x);
    let m = WeightScheme::m(&x);
    for i in 0..=x.dim() {
        r.section(&format!("degree {i}"));
        r.rational("mu total", &sum(mu.raw(i)));
        let consistent = i == x.dim()
            || x.simplices(i).iter().enumerate().all(|(k, _)| {
                let up: Vec<_> = x.cofaces(i)[k].iter().map(|&t| m.raw(i + 1)[t]).collect();
                sum(&up) == m.raw(i)[k]
            });
        r.kv("m equals sum over cofaces", consistent);
        if i < x.dim() {
            r.rational("coboundary lipschitz constant", &lipschitz_constant(&x, &scheme, i)?);
        }
        let h = cohomology(&x, &coeffs, i, cfg.linalg_budget)?;
        r.kv("cohomology", h.describe());
    }
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct CosystoleArgs {
    #[command(flatten)]
    coeffs: CoeffArgs,
    #[arg(long)]
    degree: Option<usize>,
    /// Report the cosystolic norm of this cocycle's class instead.
    #[arg(long)]
    cochain: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

pub fn cosystole(a: CosystoleArgs) -> Outcome<()> {
    let (x, _, coeffs) = a.coeffs.load()?;
    let cfg = a.common.config()?;
    let scheme = a.common.scheme(&x)?;
    let mut r = a.common.report("cosystole");
    r.kv("coefficients", coeffs.describe());
    match &a.cochain {
        Some(p) => {
            let c = parse_cochain(&read(p)?, &x, &coeffs, a.degree).in_file(p)?;
            let min = cosystolic_norm(&x, &coeffs, &scheme, &c, &cfg)?;
            r.kv("degree", c.degree());
            r.searched("cosystolic norm", Some(&min.value), min.certified);
            r.kv("search space", min.search_space);
            r.witness("minimizer", &format_cochain(&x, &coeffs, &min.witness)?, min.certified);
        }
        None => {
            let i = a.degree.ok_or_else(|| Error::input("--degree is required without --cochain"))?;
            let s = cosystole_of(&x, &coeffs, &scheme, i, &cfg)?;
            r.kv("degree", i);
            r.kv("nonzero classes", s.classes);
            r.searched("cosystole", s.value.as_ref(), s.certified);
            if let Some(w) = &s.witness {
                r.witness("witness", &format_cochain(&x, &coeffs, w)?, s.certified);
            }
        }
    }
    a.common.emit(&r.render())
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Check {
    Cosystolic,
    Coboundary,
}

#[derive(Args)]
pub struct ExpansionArgs {
    #[command(flatten)]
    coeffs: CoeffArgs,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Also run an expander check over degrees 0..=degree.
    #[arg(long, value_enum)]
    check: Option<Check>,
    #[arg(long, default_value = "0")]
    target: String,
    #[command(flatten)]
    common: Common,
}

fn expansion_report(
    r: &mut Report,
    x: &SimplicialComplex,
    coeffs: &Coefficients,
    rep: &ExpansionReport,
) -> Outcome<()> {
    r.rational("target", &rep.target);
    for d in &rep.degrees {
        r.section(&format!("degree {}", d.degree));
        r.kv("reduced cohomology order", d.reduced_cohomology_order);
        r.searched("cosystole", d.cosystole.value.as_ref(), d.cosystole.certified);
        r.searched("expansion", d.expansion.value.as_ref(), d.expansion.certified);
        r.kv("cosystole ok", d.cosystole_ok);
        r.kv("expansion ok", d.expansion_ok);
        if let Some(w) = &d.expansion.witness {
            r.witness("expansion witness", &format_cochain(x, coeffs, w)?, d.expansion.certified);
        }
    }
    r.kv("requires vanishing cohomology", rep.requires_vanishing);
    r.kv("holds", rep.holds());
    Ok(())
}

pub fn expansion(a: ExpansionArgs) -> Outcome<()> {
    let (x, _, coeffs) = a.coeffs.load()?;
    let cfg = a.common.config()?;
    let scheme = a.common.scheme(&x)?;
    let mut r = a.common.report("expansion");
    r.kv("coefficients", coeffs.describe());
    let e = expansion_constant(&x, &coeffs, &scheme, a.degree, &cfg)?;
    r.kv("degree", e.degree);
    r.kv("search space", e.search_space);
    r.searched("expansion constant", e.value.as_ref(), e.certified);
    if !(a.common.certified_only && !e.certified) {
        if let (Some(n), Some(d)) = (&e.coboundary_norm, &e.distance) {
            r.rational("witness coboundary norm", n);
            r.rational("witness distance to cocycles", d);
        }
        if let Some(w) = &e.witness {
            r.block("witness", &format_cochain(&x, &coeffs, w)?);
        }
    }
    if let Some(check) = a.check {
        let target = parse_rational(&a.target)?;
        let rep = match check {
            Check::Cosystolic => cosystolic_expander_check(&x, &coeffs, &scheme, 0..=a.degree, target, &cfg)?,
            Check::Coboundary => coboundary_expander_check(&x, &coeffs, &scheme, 0..=a.degree, target, &cfg)?,
        };
        r.section(match check {
            Check::Cosystolic => "cosystolic expander check",
            Check::Coboundary => "coboundary expander check",
        });
        expansion_report(&mut r, &x, &coeffs, &rep)?;
    }
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    coeffs: CoeffArgs,
    #[arg(long, default_value_t = 0)]
    degree: usize,
    /// Walk spectra of every link.
    #[arg(long)]
    links: bool,
    /// Coboundary target for the local hypotheses report.
    #[arg(long)]
    km_beta: Option<String>,
    /// Spectral target for the local hypotheses report.
    #[arg(long, requires = "km_beta")]
    km_mu: Option<f64>,
    #[command(flatten)]
    common: Common,
}

fn opt_float(v: Option<f64>) -> String {
    v.map_or("none".to_string(), fmt_float)
}

pub fn spectrum(a: SpectrumArgs) -> Outcome<()> {
    let (x, _, coeffs) = a.coeffs.load()?;
    let cfg = a.common.config()?;
    let mut r = a.common.report("spectrum");
    let eig = upper_laplacian_spectrum(&x, a.degree)?;
    r.kv("laplacian degree", a.degree);
    r.kv("laplacian scheme", "m");
    r.kv("eigenvalues", eig.iter().map(|v| fmt_float(*v)).collect::<Vec<_>>().join(" "));
    let zero = eig.iter().filter(|v| v.abs() < 1e-9).count();
    r.kv("zero eigenvalues", zero);
    let (abs, two) = walk_spectrum(&x)?;
    r.kv("walk lambda abs", opt_float(abs));
    r.kv("walk lambda two", opt_float(two));
    if a.links {
        for w in skeleton_expansion(&x)? {
            r.section(&format!("link of {:?}", w.face));
            r.kv("vertices", w.vertices);
            r.kv("lambda abs", opt_float(w.lambda_abs));
            r.kv("lambda two", opt_float(w.lambda_two));
        }
    }
    if let Some(beta) = &a.km_beta {
        let beta = parse_rational(beta)?;
        let mu = a.km_mu.ok_or_else(|| Error::input("--km-beta needs --km-mu"))?;
        let km = km_hypotheses_report(&x, &coeffs, beta, mu, &cfg)?;
        r.section("local hypotheses");
        r.rational("beta", &km.beta);
        r.float("mu", km.mu);
        r.kv("degree bound", km.degree_bound);
        for l in &km.links {
            r.section(&format!("local link of {:?}", l.face));
            r.kv("link dimension", l.link_dim);
            match &l.coboundary {
                Ok(rep) => {
                    for d in &rep.degrees {
                        r.searched(
                            &format!("expansion degree {}", d.degree),
                            d.expansion.value.as_ref(),
                            d.expansion.certified,
                        );
                    }
                    r.kv("coboundary ok", rep.holds());
                }
                Err(e) => {
                    r.uncertified();
                    r.kv("coboundary", format!("not computed ({e})"));
                }
            }
            match &l.spectrum {
                Ok(w) => r.kv("lambda two", opt_float(w.lambda_two)),
                Err(e) => r.kv("lambda two", format!("not computed ({e})")),
            }
            if let Some(ok) = l.skeleton_ok(km.mu) {
                r.kv("skeleton ok", ok);
            }
        }
        let (p, q) = km.implied_pair();
        r.kv("verdict", km.verdict().map_or("undetermined".to_string(), |v| v.to_string()));
        r.kv("implied pair", format!("{} {}", fmt_float(p), fmt_float(q)));
    }
    a.common.emit(&r.render())
}
