use std::path::{Path, PathBuf};

use clap::Args;
use metcoh_core::cochain::{cosystolic_norm, format_cochain, parse_cochain, CoboundaryTest, Coefficients};
use metcoh_core::covers::{
    build_cover as build, contractivity_check, lower_bound_report, pushforward_theta, shapiro_check, vanishing_test,
    EdgeLabeling,
};
use metcoh_core::{AtomMap, Error, FiniteAbelianGroup, SimplicialComplex};

use crate::report::Report;
use crate::{load_complex, read, Common, Context, Outcome};

/// Reading these numbers as invariants of the fundamental group needs the
/// base to be a model of its classifying space; that is taken on trust.
const ASPHERICAL: &str = "assumed aspherical, not checked";

#[derive(Args)]
pub struct BuildCoverArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    labeling: PathBuf,
    /// Write the covering complex here in the complex file format.
    #[arg(long)]
    cover_out: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

fn load_labeling(x: &SimplicialComplex, p: &Path) -> Outcome<EdgeLabeling> {
    EdgeLabeling::parse(&read(p)?, x).in_file(p)
}

pub fn build_cover(a: BuildCoverArgs) -> Outcome<()> {
    let x = load_complex(&a.complex)?;
    let labeling = load_labeling(&x, &a.labeling)?;
    let cover = build(&x, &labeling)?;
    let y = &cover.total;
    let mut r = a.common.report("build-cover");
    r.kv("fiber", cover.fiber);
    r.kv("transitive labels", labeling.is_transitive());
    r.kv("dimension", y.dim());
    r.kv("f-vector", (0..=y.dim()).map(|i| y.count(i).to_string()).collect::<Vec<_>>().join(" "));
    r.kv("euler characteristic", y.euler_characteristic());
    r.kv("base euler characteristic", x.euler_characteristic());
    r.kv("components", y.component_count());
    if let Some(p) = &a.cover_out {
        std::fs::write(p, y.to_text()).map_err(|e| crate::Failure {
            context: Some(p.display().to_string()),
            error: Error::input(e.to_string()),
        })?;
    }
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct CoverCochainArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    labeling: PathBuf,
    /// A cocycle with coefficients in the plain group.
    #[arg(long)]
    cochain: PathBuf,
    #[arg(long, default_value = "Z/2")]
    coeff: String,
    #[command(flatten)]
    common: Common,
}

struct Loaded {
    x: SimplicialComplex,
    labeling: EdgeLabeling,
    group: FiniteAbelianGroup,
    c: metcoh_core::cochain::Cochain,
}

fn load(complex: &Path, labeling: &Path, cochain: &Path, coeff: &str) -> Outcome<Loaded> {
    let x = load_complex(complex)?;
    let labeling = load_labeling(&x, labeling)?;
    let group: FiniteAbelianGroup = coeff.parse()?;
    let c = parse_cochain(&read(cochain)?, &x, &Coefficients::plain(group.clone()), None).in_file(cochain)?;
    Ok(Loaded { x, labeling, group, c })
}

pub fn shapiro(a: CoverCochainArgs) -> Outcome<()> {
    let l = load(&a.complex, &a.labeling, &a.cochain, &a.coeff)?;
    let cfg = a.common.config()?;
    let scheme = a.common.scheme(&l.x)?;
    let rep = shapiro_check(&l.x, &l.labeling, &l.group, &scheme, &l.c, &cfg)?;
    let mut r = a.common.report("shapiro-check");
    r.kv("base model", ASPHERICAL);
    r.kv("degree", l.c.degree());
    r.kv("fiber", l.labeling.fiber());
    r.kv("cover vertices", rep.cover_vertices);
    r.kv("cover euler characteristic", rep.cover_euler);
    r.kv("cover connected", rep.connected);
    r.searched("downstairs norm", Some(&rep.downstairs.value), rep.downstairs.certified);
    r.searched("upstairs norm", Some(&rep.upstairs.value), rep.upstairs.certified);
    r.kv("equal", rep.equal());
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct PushforwardArgs {
    #[command(flatten)]
    base: CoverCochainArgs,
    /// A finer labeling to transport the class to, for a contractivity check.
    #[arg(long, requires = "parents")]
    fine: Option<PathBuf>,
    /// For each fiber point of the fine labeling, the 1-based coarse point it maps to.
    #[arg(long)]
    parents: Option<String>,
}

pub fn pushforward(a: PushforwardArgs) -> Outcome<()> {
    let b = &a.base;
    let l = load(&b.complex, &b.labeling, &b.cochain, &b.coeff)?;
    let cfg = b.common.config()?;
    let scheme = b.common.scheme(&l.x)?;
    let coeffs = l.labeling.coefficients(l.group.clone());
    let theta = pushforward_theta(&l.x, &l.labeling, &l.group, &l.c)?;
    let min = cosystolic_norm(&l.x, &coeffs, &scheme, &theta, &cfg)?;
    let mut r = b.common.report("pushforward");
    r.kv("base model", ASPHERICAL);
    r.kv("coefficients", coeffs.describe());
    r.block("pushforward", &format_cochain(&l.x, &coeffs, &theta)?);
    r.searched("class norm", Some(&min.value), min.certified);
    if let (Some(fine), Some(parents)) = (&a.fine, &a.parents) {
        let fine_labeling = load_labeling(&l.x, fine)?;
        let parents = parents
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| match t.parse::<usize>() {
                Ok(v) if v >= 1 => Ok(v - 1),
                _ => Err(Error::input(format!("bad parent `{t}`"))),
            })
            .collect::<metcoh_core::Result<Vec<_>>>()?;
        let rep = contractivity_check(
            &l.x,
            &l.labeling,
            &fine_labeling,
            &AtomMap::Refine(parents),
            &l.group,
            &scheme,
            &l.c,
            &cfg,
        )?;
        r.section("contractivity");
        r.searched("coarse norm", Some(&rep.coarse.value), rep.coarse.certified);
        r.searched("fine norm", Some(&rep.fine.value), rep.fine.certified);
        r.rational("transported minimizer norm", &rep.transported_witness_norm);
        r.kv("non-increasing", rep.holds());
    }
    b.common.emit(&r.render())
}

pub fn vanishing(a: CoverCochainArgs) -> Outcome<()> {
    let l = load(&a.complex, &a.labeling, &a.cochain, &a.coeff)?;
    let cfg = a.common.config()?;
    let res = vanishing_test(&l.x, &l.labeling, &l.group, &l.c, cfg.linalg_budget)?;
    let mut r = a.common.report("vanishing-test");
    r.kv("base model", ASPHERICAL);
    r.kv("degree", l.c.degree());
    r.kv("pullback vanishes", res.vanishes);
    match &res.certificate {
        CoboundaryTest::Primitive(p) => {
            let y = build(&l.x, &l.labeling)?.total;
            r.block("primitive on cover", &format_cochain(&y, &Coefficients::plain(l.group.clone()), p)?);
        }
        CoboundaryTest::Obstructed { factor, coordinate } => {
            r.kv("obstruction factor", factor + 1);
            r.kv("obstruction coordinate", coordinate);
        }
    }
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct LowerBoundArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cochain: PathBuf,
    #[arg(long, default_value = "Z/2")]
    coeff: String,
    /// Labeling files, one per finite action in the survey.
    #[arg(long, required = true)]
    labeling: Vec<PathBuf>,
    #[command(flatten)]
    common: Common,
}

pub fn lower_bound(a: LowerBoundArgs) -> Outcome<()> {
    let x = load_complex(&a.complex)?;
    let group: FiniteAbelianGroup = a.coeff.parse()?;
    let c = parse_cochain(&read(&a.cochain)?, &x, &Coefficients::plain(group.clone()), None).in_file(&a.cochain)?;
    let labelings = a
        .labeling
        .iter()
        .map(|p| {
            Ok((
                p.file_name().map_or(p.display().to_string(), |f| f.to_string_lossy().into_owned()),
                load_labeling(&x, p)?,
            ))
        })
        .collect::<Outcome<Vec<_>>>()?;
    let cfg = a.common.config()?;
    let scheme = a.common.scheme(&x)?;
    let rep = lower_bound_report(&x, &group, &scheme, &c, &labelings, &cfg)?;
    let mut r: Report = a.common.report("lower-bound");
    r.kv("base model", ASPHERICAL);
    r.kv("note", "minimum over the supplied actions only; not a bound over all finite actions");
    for (name, entry) in &rep.entries {
        match entry {
            Ok(min) => r.searched(&format!("norm {name}"), Some(&min.value), min.certified),
            Err(e) => {
                r.uncertified();
                r.kv(&format!("norm {name}"), format!("not computed ({e})"));
            }
        }
    }
    match rep.minimum() {
        Some(m) => r.searched("minimum", Some(&m), rep.certified()),
        None => r.kv("minimum", "none"),
    }
    a.common.emit(&r.render())
}
