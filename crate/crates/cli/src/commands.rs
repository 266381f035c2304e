//! Subcommands. Each one fills a [`Report`] and a plain-text rendering.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use coxsurf_core::classify::{self, Tri};
use coxsurf_core::cone::{self, RationalCone};
use coxsurf_core::negative::{self, CurveClass};
use coxsurf_core::num::{fmt_rat, parse_rat};
use coxsurf_core::tower::{self, TowerVariant};
use coxsurf_core::zariski::{self, ZariskiError};
use coxsurf_core::{DivisorClass, Rat};
use serde_json::{json, Value};

use crate::load::{self, InputError, LoadedSurface};
use crate::report::{self, JustificationEntry, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "coxsurf", version, about = "Exact divisor cones, Zariski decompositions and Cox ring verdicts for surfaces")]
pub struct Cli {
    /// Print a JSON report instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lattice invariants of a surface file.
    Info { file: String },
    /// Classes with given square and canonical degree, (-1) and (-2) by default.
    Negcurves {
        file: String,
        #[arg(long, default_value_t = 5)]
        bound: u64,
        #[arg(long, allow_hyphen_values = true)]
        self_int: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k_deg: Option<i64>,
    },
    /// Dual cone (the nef cone when given Eff) under the intersection form.
    Dual {
        file: String,
        /// Generators as `a,b,c;d,e,f`; defaults to the file's effective cone.
        #[arg(long, allow_hyphen_values = true)]
        generators: Option<String>,
    },
    /// Extremal rays of a cone.
    Rays {
        file: String,
        #[arg(long, allow_hyphen_values = true)]
        generators: Option<String>,
    },
    /// Zariski decomposition of a class against the file's negative curves.
    Zariski {
        file: String,
        /// Coordinates `a,b,c` (fractions allowed), or `-K` / `K`.
        #[arg(long, allow_hyphen_values = true)]
        class: String,
    },
    /// The Fibonacci blow-up tower table.
    Tower {
        #[arg(long, default_value_t = 10)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = VariantArg::TriplePoint)]
        variant: VariantArg,
    },
    /// Kappa(-K), polyhedrality of Eff and finite generation of the Cox ring.
    Classify {
        file: String,
        /// Extra geometric flag, e.g. `restriction-nontorsion`.
        #[arg(long = "flag")]
        flags: Vec<String>,
    },
    /// Bounded check that light-cone classes lie in the cone of negative curves.
    CheckEffc {
        file: String,
        #[arg(long, default_value_t = 4)]
        bound: u64,
        /// Ample class; defaults to -K.
        #[arg(long, allow_hyphen_values = true)]
        ample: Option<String>,
        /// Indices of rays to leave out.
        #[arg(long)]
        drop: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    TriplePoint,
    Node,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
    pub report: Option<Report>,
}

/// Runs one invocation; `args` excludes the program name.
pub fn run<S: AsRef<str>>(args: &[S]) -> Outcome {
    let args: Vec<String> = args.iter().map(|s| s.as_ref().to_string()).collect();
    let cli = match Cli::try_parse_from(std::iter::once("coxsurf".to_string()).chain(args.iter().cloned())) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    Outcome { code: EXIT_OK, stdout: text, stderr: String::new(), report: None }
                }
                _ => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: text, report: None },
            };
        }
    };
    let mut report = Report::new(&args);
    let mut text = String::new();
    let result = dispatch(&cli.command, &mut report, &mut text);
    match result {
        Ok(code) => {
            report.exit_code = code;
            let stdout = if cli.json { report.to_json() + "\n" } else { text };
            Outcome { code, stdout, stderr: String::new(), report: Some(report) }
        }
        Err(e) => Outcome { code: EXIT_INPUT, stdout: String::new(), stderr: format!("error: {e}\n"), report: None },
    }
}

#[derive(Debug, thiserror::Error)]
enum CommandError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{0}")]
    Usage(String),
}

fn usage(msg: impl Into<String>) -> CommandError {
    CommandError::Usage(msg.into())
}

fn dispatch(cmd: &Command, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    match cmd {
        Command::Info { file } => info(file, report, out),
        Command::Negcurves { file, bound, self_int, k_deg } => negcurves(file, *bound, *self_int, *k_deg, report, out),
        Command::Dual { file, generators } => dual(file, generators.as_deref(), report, out),
        Command::Rays { file, generators } => rays(file, generators.as_deref(), report, out),
        Command::Zariski { file, class } => zariski_cmd(file, class, report, out),
        Command::Tower { steps, variant } => tower_cmd(*steps, *variant, report, out),
        Command::Classify { file, flags } => classify_cmd(file, flags, report, out),
        Command::CheckEffc { file, bound, ample, drop } => check_effc(file, *bound, ample.as_deref(), drop, report, out),
    }
}

fn open(file: &str, report: &mut Report) -> Result<LoadedSurface, CommandError> {
    let s = load::parse_surface(file)?;
    report.input_digest = Some(s.digest.clone());
    Ok(s)
}

/// `a,b,c` with integer or `p/q` entries, or `K` / `-K`.
pub fn parse_class(s: &LoadedSurface, text: &str) -> Result<DivisorClass, String> {
    let t = text.trim();
    let lattice = &s.data.lattice;
    let d = match t {
        "K" => lattice.canonical(),
        "-K" => lattice.anticanonical(),
        _ => {
            let coords: Option<Vec<Rat>> = t.split(',').map(|x| parse_rat(x.trim())).collect();
            DivisorClass::new(coords.ok_or_else(|| format!("cannot parse class `{text}`"))?)
        }
    };
    if d.len() != lattice.rank() {
        return Err(format!("class `{text}` has {} entries, rank is {}", d.len(), lattice.rank()));
    }
    Ok(d)
}

fn parse_generators(s: &LoadedSurface, text: &str) -> Result<Vec<DivisorClass>, String> {
    text.split(';').filter(|g| !g.trim().is_empty()).map(|g| parse_class(s, g)).collect()
}

fn cone_generators(s: &LoadedSurface, given: Option<&str>) -> Result<Vec<DivisorClass>, CommandError> {
    if let Some(text) = given {
        return parse_generators(s, text).map_err(usage);
    }
    if let Some(g) = &s.data.eff_generators {
        return Ok(g.clone());
    }
    let certified: Vec<DivisorClass> =
        s.data.negative_curves.iter().filter(|c| c.effective_certified).map(|c| c.class.clone()).collect();
    if certified.is_empty() {
        return Err(usage("no generators: pass --generators or give eff_generators or certified curves"));
    }
    Ok(certified)
}

fn info(file: &str, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let l = &s.data.lattice;
    let sig = l.signature();
    let certified = s.data.negative_curves.iter().filter(|c| c.effective_certified).count();
    let mw = s.data.fibration.as_ref().map(classify::mordell_weil_rank).transpose().ok().flatten();
    report.results = json!({
        "name": s.data.name,
        "rank": l.rank(),
        "labels": s.labels,
        "gram": l.gram(),
        "canonical": l.canonical_coords(),
        "canonical_square": l.canonical_square(),
        "signature": [sig.positive, sig.negative, sig.zero],
        "rational": l.is_rational_surface(),
        "negative_curves": s.data.negative_curves.len(),
        "certified_curves": certified,
        "fibers": s.data.fibration.as_ref().map(|f| f.fibers.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
        "mw_rank": mw,
    });
    let _ = writeln!(out, "{} (rank {})", s.data.name, l.rank());
    let _ = writeln!(out, "basis: {}", s.labels.join(" "));
    let _ = writeln!(out, "K = {}", report::class_named(&l.canonical(), &s.labels));
    let _ = writeln!(out, "K^2 = {}", l.canonical_square());
    let _ = writeln!(out, "signature: ({}, {})", sig.positive, sig.negative);
    let _ = writeln!(out, "negative curves: {} ({} certified)", s.data.negative_curves.len(), certified);
    if let Some(f) = &s.data.fibration {
        let fibers: Vec<String> = f.fibers.iter().map(|t| t.to_string()).collect();
        let _ = writeln!(out, "fibration: m = {}, fibers [{}]", f.m, fibers.join(", "));
    }
    if let Some(mw) = mw {
        let _ = writeln!(out, "Mordell-Weil rank: {mw}");
    }
    Ok(EXIT_OK)
}

fn negcurves(
    file: &str,
    bound: u64,
    self_int: Option<i64>,
    k_deg: Option<i64>,
    report: &mut Report,
    out: &mut String,
) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let l = &s.data.lattice;
    let targets: Vec<(i64, i64)> = match (self_int, k_deg) {
        (None, None) => vec![(-1, -1), (-2, 0)],
        (Some(a), Some(b)) => vec![(a, b)],
        _ => return Err(usage("--self-int and --k-deg go together")),
    };
    report.bounds.insert("height".into(), bound);
    let mut groups = Vec::new();
    for (si, kd) in targets {
        let found = negative::enumerate_classes(l, si, kd, bound);
        let complete = l.is_plane_blowup_basis()
            && negative::plane_degree_cutoff(l.rank() - 1, si, kd).is_some_and(|c| c <= bound as i64);
        let _ = writeln!(out, "D^2 = {si}, K.D = {kd}: {} classes{}", found.len(), if complete { " (complete)" } else { "" });
        for d in &found {
            let _ = writeln!(out, "  {}", report::class_named(d, &s.labels));
        }
        groups.push(json!({
            "self_int": si,
            "k_deg": kd,
            "count": found.len(),
            "complete": complete,
            "classes": report::classes(&found),
        }));
    }
    report.results = Value::Array(groups);
    Ok(EXIT_OK)
}

fn dual(file: &str, generators: Option<&str>, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let gens = cone_generators(&s, generators)?;
    let c = RationalCone::from_generators(s.data.lattice.rank(), &gens).map_err(|e| usage(e.to_string()))?;
    let d = cone::dual_cone(&s.data.lattice, &c).map_err(|e| usage(e.to_string()))?;
    let rays = d.extremal_rays();
    report.results = json!({
        "cone": report::classes(&c.extremal_rays()),
        "dual": report::classes(&rays),
        "dual_pointed": d.is_pointed(),
        "nef_in_eff": cone::inclusion_chain_check(&c, &d),
    });
    let _ = writeln!(out, "dual cone rays:");
    for r in &rays {
        let _ = writeln!(out, "  {}", report::class_named(r, &s.labels));
    }
    Ok(EXIT_OK)
}

fn rays(file: &str, generators: Option<&str>, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let gens = cone_generators(&s, generators)?;
    let c = RationalCone::from_generators(s.data.lattice.rank(), &gens).map_err(|e| usage(e.to_string()))?;
    let rays = c.extremal_rays();
    let l = &s.data.lattice;
    report.results = json!({
        "rays": report::classes(&rays),
        "self_intersections": rays.iter().map(|r| report::rat(&l.self_intersection(r))).collect::<Vec<_>>(),
        "pointed": c.is_pointed(),
    });
    let _ = writeln!(out, "{} extremal rays:", rays.len());
    for r in &rays {
        let _ = writeln!(out, "  {}   (D^2 = {})", report::class_named(r, &s.labels), fmt_rat(&l.self_intersection(r)));
    }
    Ok(EXIT_OK)
}

fn zariski_cmd(file: &str, class: &str, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let d = parse_class(&s, class).map_err(usage)?;
    let eff = s.data.eff_cone().map_err(|e| usage(e.to_string()))?;
    let l = &s.data.lattice;
    match zariski::zariski_decompose_in(l, &d, &s.data.negative_curves, eff.as_ref()) {
        Ok(zd) => {
            let support: Vec<Value> = zd
                .negative_support
                .iter()
                .map(|(c, x)| json!({"curve": report::class(&c.class), "coefficient": report::rat(x)}))
                .collect();
            report.results = json!({
                "class": report::class(&d),
                "positive": report::class(&zd.positive),
                "positive_square": report::rat(&l.self_intersection(&zd.positive)),
                "negative_support": support,
            });
            let _ = writeln!(out, "D = {}", report::class_named(&d, &s.labels));
            let _ = writeln!(out, "P = {}", report::class_named(&zd.positive, &s.labels));
            let _ = writeln!(out, "P^2 = {}", fmt_rat(&l.self_intersection(&zd.positive)));
            let n = zd.negative(l.rank());
            let _ = writeln!(out, "N = {}", report::class_named(&n, &s.labels));
            for (c, x) in &zd.negative_support {
                let _ = writeln!(out, "  {} * ({})", fmt_rat(x), report::class_named(&c.class, &s.labels));
            }
            Ok(EXIT_OK)
        }
        Err(ZariskiError::NotPseudoeffective) => {
            report.results = json!({"class": report::class(&d), "pseudoeffective": false});
            let _ = writeln!(out, "{} is not pseudoeffective", report::class_named(&d, &s.labels));
            Ok(EXIT_OK)
        }
        Err(e @ (ZariskiError::NonConvergent | ZariskiError::NegativeCoefficient)) => {
            report.results = json!({"class": report::class(&d), "error": e.to_string()});
            let _ = writeln!(out, "inconclusive: {e}");
            Ok(EXIT_UNDETERMINED)
        }
        Err(e) => Err(usage(e.to_string())),
    }
}

fn tower_cmd(steps: usize, variant: VariantArg, report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let v = match variant {
        VariantArg::TriplePoint => TowerVariant::TriplePoint,
        VariantArg::Node => TowerVariant::Node,
    };
    report.bounds.insert("steps".into(), steps as u64);
    let seq = tower::tower_sequence(v, steps);
    let mut rows = Vec::new();
    let _ = writeln!(out, "{:>3}  {:>12}  {:>16}  {:>16}  {:>16}", "i", "a_i", "b_i", "mu_i", "coeff");
    for st in &seq {
        rows.push(json!({
            "i": st.i,
            "a": st.a_cur.to_string(),
            "b": report::rat(&st.b_cur),
            "mu": report::rat(&st.mu_cur),
            "coeff": report::rat(&st.coeff),
            "mui_consistent": tower::mui_consistency(st),
            "kappa_persists": tower::kappa_persists(st),
        }));
        let flag = if tower::kappa_persists(st) { "" } else { "  kappa drops" };
        let _ = writeln!(
            out,
            "{:>3}  {:>12}  {:>16}  {:>16}  {:>16}{flag}",
            st.i,
            st.a_cur.to_string(),
            fmt_rat(&st.b_cur),
            fmt_rat(&st.mu_cur),
            fmt_rat(&st.coeff)
        );
    }
    let mut results = json!({
        "variant": match v { TowerVariant::TriplePoint => "triple_point", TowerVariant::Node => "node" },
        "rows": rows,
    });
    if v == TowerVariant::TriplePoint && steps >= 1 {
        let b = tower::bounds_check(steps);
        results["bounds_check"] = json!({
            "b_violations": b.b_violations,
            "mu_violations": b.mu_violations,
            "monotonicity_violations": b.monotonicity_violations,
            "consistency_violations": b.consistency_violations,
        });
    }
    report.results = results;
    Ok(EXIT_OK)
}

fn classify_cmd(file: &str, flags: &[String], report: &mut Report, out: &mut String) -> Result<i32, CommandError> {
    let mut f = load::parse_surface(file)?.file;
    for name in flags {
        f.flags.set(name).map_err(usage)?;
    }
    let s = load::parse_surface_from(f, file)?;
    report.input_digest = Some(s.digest.clone());
    let v = classify::decide_cox_fg(&s.data).map_err(|e| usage(e.to_string()))?;
    report.justification = v.justification.iter().map(JustificationEntry::from).collect();
    report.results = json!({
        "name": s.data.name,
        "kappa_anti": v.kappa_anti.label(),
        "eff_polyhedral": v.eff_polyhedral.label(),
        "cox_fg": v.cox_fg.label(),
        "cox_case": v.cox_case.map(|c| c.label()),
        "mw_rank": v.mw_rank,
        "anticanonical_positive_part": v.anticanonical_zariski.as_ref().map(|z| report::class(&z.positive)),
    });
    let _ = writeln!(out, "{}", s.data.name);
    let _ = writeln!(out, "kappa(-K)      = {}", v.kappa_anti);
    let _ = writeln!(out, "Eff polyhedral = {}", v.eff_polyhedral);
    let case = v.cox_case.map(|c| format!(" (case {})", c.label())).unwrap_or_default();
    let _ = writeln!(out, "Cox ring f.g.  = {}{case}", v.cox_fg);
    if let Some(mw) = v.mw_rank {
        let _ = writeln!(out, "MW rank        = {mw}");
    }
    for j in &v.justification {
        let _ = writeln!(out, "  [{}] {}", j.rule, j.detail);
    }
    let undetermined = v.cox_fg == Tri::Undetermined || v.eff_polyhedral == Tri::Undetermined;
    Ok(if undetermined { EXIT_UNDETERMINED } else { EXIT_OK })
}

fn check_effc(
    file: &str,
    bound: u64,
    ample: Option<&str>,
    drop: &[usize],
    report: &mut Report,
    out: &mut String,
) -> Result<i32, CommandError> {
    let s = open(file, report)?;
    let l = &s.data.lattice;
    let mut rays: Vec<&CurveClass> = s.data.negative_curves.iter().filter(|c| c.self_int < 0).collect();
    for &i in drop {
        if i >= rays.len() {
            return Err(usage(format!("--drop {i}: only {} rays", rays.len())));
        }
    }
    let mut idx: Vec<usize> = drop.to_vec();
    idx.sort_unstable();
    idx.dedup();
    for &i in idx.iter().rev() {
        rays.remove(i);
    }
    let rays: Vec<DivisorClass> = rays.into_iter().map(|c| c.class.clone()).collect();
    let ample = match ample {
        Some(t) => parse_class(&s, t).map_err(usage)?,
        None => l.anticanonical(),
    };
    report.bounds.insert("height".into(), bound);
    let r = cone::effc_sample_report(l, &rays, &ample, bound).map_err(|e| usage(e.to_string()))?;
    report.results = json!({
        "holds": r.holds,
        "rays": rays.len(),
        "checked": r.checked,
        "counterexample": r.counterexample.as_ref().map(report::class),
    });
    let _ = writeln!(out, "rays: {}, height bound {bound}, classes checked: {}", rays.len(), r.checked);
    match &r.counterexample {
        None => {
            let _ = writeln!(out, "holds");
        }
        Some(d) => {
            let _ = writeln!(out, "fails at {}", report::class_named(d, &s.labels));
        }
    }
    Ok(EXIT_OK)
}
