use std::path::{Path, PathBuf};

use clap::Args;
use metcoh_core::rational::parse_rational;
use metcoh_core::sofic::{
    afree_vanishing_check, compare_delta_beta, defect_cocycle, defect_report, induce_quotient, parse_action,
    stability_match, AlmostHom, Candidate, ExtensionApproximation, ExtensionSpec, InducedQuotient, Presentation,
};
use metcoh_core::Error;

use crate::report::Report;
use crate::{read, Common, Context, Outcome};

fn load_hom(p: &Path) -> Outcome<AlmostHom> {
    Ok(parse_action(&read(p)?).in_file(p)?.0)
}

fn load_extension(p: &Path) -> Outcome<ExtensionApproximation> {
    ExtensionApproximation::parse(&read(p)?).in_file(p)
}

fn points(s: &str, what: &str) -> metcoh_core::Result<Vec<usize>> {
    s.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| match t.parse::<usize>() {
            Ok(v) if v >= 1 => Ok(v - 1),
            _ => Err(Error::input(format!("bad {what} `{t}`: expected a positive integer"))),
        })
        .collect()
}

#[derive(Args)]
pub struct SoficReportArgs {
    #[arg(long)]
    presentation: PathBuf,
    /// Almost-hom file: point count, then `gen <name>: <permutation>` lines.
    #[arg(long)]
    action: PathBuf,
    /// Longest reduced word scored for freeness.
    #[arg(long, default_value_t = 4)]
    length: usize,
    #[command(flatten)]
    common: Common,
}

pub fn sofic_report(a: SoficReportArgs) -> Outcome<()> {
    let p = Presentation::parse(&read(&a.presentation)?).in_file(&a.presentation)?;
    let phi = load_hom(&a.action)?;
    let cfg = a.common.config()?;
    let rep = defect_report(&phi, &p, a.length, cfg.budget)?;
    let mut r = a.common.report("sofic-report");
    r.kv("points", phi.n);
    for (w, d) in p.rels.iter().zip(&rep.relator_defects) {
        r.rational(&format!("defect {}", p.format(w)), d);
    }
    r.rational("max relator defect", &rep.max_defect);
    r.kv("word length", a.length);
    r.kv("words scored", rep.words);
    r.kv("note", "freeness scores include words that may be trivial in the group");
    if let Some((score, w)) = &rep.min_freeness {
        r.rational("min freeness", score);
        r.kv("min freeness word", p.format(w));
    }
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct ActionArgs {
    /// Extension approximation: an almost-hom file with `A:` and `central k:` lines.
    #[arg(long)]
    action: PathBuf,
    /// One 1-based point per orbit; defaults to the least point of each orbit.
    #[arg(long)]
    section: Option<String>,
    #[command(flatten)]
    common: Common,
}

fn quotient_lines(r: &mut Report, q: &InducedQuotient) {
    r.kv("orbits", q.orbits.len());
    r.rational("ambiguity rate", &q.ambiguity_rate);
    r.kv("repaired", q.repaired);
    if q.repaired {
        r.uncertified();
    }
}

pub fn induce(a: ActionArgs) -> Outcome<()> {
    let phi = load_extension(&a.action)?;
    let q = induce_quotient(&phi)?;
    let mut r = a.common.report("induce");
    quotient_lines(&mut r, &q);
    for (k, o) in q.orbits.iter().enumerate() {
        r.kv(&format!("orbit {}", k + 1), o.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "));
    }
    r.block("induced action", &q.hom.to_text());
    a.common.emit(&r.render())
}

fn cocycle_for(
    a: &ActionArgs,
    phi: &ExtensionApproximation,
    q: &InducedQuotient,
) -> Outcome<metcoh_core::sofic::DefectCocycle> {
    let section = a.section.as_deref().map(|s| points(s, "section point")).transpose()?;
    Ok(defect_cocycle(phi, q, section.as_deref())?)
}

pub fn defect(a: ActionArgs) -> Outcome<()> {
    let phi = load_extension(&a.action)?;
    let q = induce_quotient(&phi)?;
    let beta = cocycle_for(&a, &phi, &q)?;
    let mut r = a.common.report("defect-cocycle");
    quotient_lines(&mut r, &q);
    r.kv("section", beta.section.iter().map(|p| (p + 1).to_string()).collect::<Vec<_>>().join(" "));
    for (s, row) in beta.beta.iter().enumerate() {
        let vals: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        r.kv(&format!("beta {}", phi.hom.names[s]), vals.join(" "));
    }
    r.kv("zero", beta.is_zero());
    r.kv("mismatches", beta.mismatches.len());
    a.common.emit(&r.render())
}

#[derive(Args)]
pub struct SpecArgs {
    #[command(flatten)]
    action: ActionArgs,
    /// Extension spec: presentation plus `A:` and `alpha:` lines.
    #[arg(long)]
    spec: PathBuf,
}

pub fn compare(a: SpecArgs) -> Outcome<()> {
    let phi = load_extension(&a.action.action)?;
    let spec = ExtensionSpec::parse(&read(&a.spec)?).in_file(&a.spec)?;
    let q = induce_quotient(&phi)?;
    let beta = cocycle_for(&a.action, &phi, &q)?;
    let rows = compare_delta_beta(&phi, &q, &beta, &spec)?;
    let mut r = a.action.common.report("compare-alpha");
    quotient_lines(&mut r, &q);
    for row in &rows {
        r.section(&format!("relator {}", row.relator));
        r.kv("alpha", &row.alpha);
        r.rational("agreement", &row.agreement);
        r.kv("unclosed walks", row.unclosed);
        r.rational("point agreement", &row.point_agreement);
    }
    a.action.common.emit(&r.render())
}

pub fn afree(a: SpecArgs) -> Outcome<()> {
    let phi = load_extension(&a.action.action)?;
    let spec = ExtensionSpec::parse(&read(&a.spec)?).in_file(&a.spec)?;
    let v = afree_vanishing_check(&phi, &spec)?;
    let mut r = a.action.common.report("afree-check");
    r.kv("unknowns", v.unknowns);
    r.kv("equations", v.equations);
    r.kv("consistent", v.consistent());
    if let Some(b) = &v.primitive {
        for (s, row) in b.iter().enumerate() {
            let vals: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            r.kv(&format!("primitive {}", phi.hom.names[s]), vals.join(" "));
        }
    }
    if let Some((rel, orbit, factor)) = &v.certificate {
        r.kv("infeasible relator", rel);
        r.kv("infeasible orbit", orbit + 1);
        r.kv("infeasible factor", factor + 1);
    }
    a.action.common.emit(&r.render())
}

#[derive(Args)]
pub struct StabilityArgs {
    #[arg(long)]
    action: PathBuf,
    /// Block of every point, 1-based, e.g. `1 1 2 2 2`.
    #[arg(long)]
    partition: String,
    /// Honest actions to match against, one file each.
    #[arg(long, required = true)]
    candidate: Vec<PathBuf>,
    /// Words whose statistics are compared, e.g. `a ab`.
    #[arg(long)]
    words: String,
    #[arg(long, default_value = "1/10")]
    eps: String,
    #[command(flatten)]
    common: Common,
}

pub fn stability(a: StabilityArgs) -> Outcome<()> {
    let phi = load_hom(&a.action)?;
    let partition = points(&a.partition, "block")?;
    let candidates = a
        .candidate
        .iter()
        .map(|p| {
            let name = p.file_name().map_or(p.display().to_string(), |f| f.to_string_lossy().into_owned());
            Ok(Candidate { name, hom: load_hom(p)? })
        })
        .collect::<Outcome<Vec<_>>>()?;
    let words = a
        .words
        .split_whitespace()
        .map(|w| metcoh_core::perm::parse_word(w, &phi.names))
        .collect::<metcoh_core::Result<Vec<_>>>()?;
    let cfg = a.common.config()?;
    let eps = parse_rational(&a.eps)?;
    let m = stability_match(&phi, &partition, &candidates, &words, eps, cfg.budget, cfg.seed)?;
    let mut r = a.common.report("stability-check");
    r.rational("eps", &eps);
    for c in &m.results {
        r.section(&format!("candidate {}", c.name));
        r.searched("discrepancy", Some(&c.discrepancy), c.exhaustive);
        r.kv("labeling", c.labeling.iter().map(|b| (b + 1).to_string()).collect::<Vec<_>>().join(" "));
    }
    r.section("best");
    r.kv("candidate", &m.best().name);
    r.kv("within eps", m.within_eps);
    r.kv("note", "only the supplied candidates were searched");
    a.common.emit(&r.render())
}
