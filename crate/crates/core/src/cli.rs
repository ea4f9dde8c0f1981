//! Subcommand front end. Every report is a `serde_json::Value`, whose object maps are
//! ordered by key, so JSON output is byte-stable.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::rngs::StdRng;
use rand::SeedableRng;
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::algebra::field::{FieldConfig, FieldElem, Sigma};
use crate::algebra::parse::{parse_elem, parse_poly};
use crate::algebra::poly::Poly;
use crate::decomp::{complete_decomposition, enumerate_from, Decomposition};
use crate::frob::{lift_sharp_points_twisted, periodic_capture_check, ZqContext};
use crate::orbits::{construct_dense_point, density_test, orbit, random_prime_30, DensityVerdict, Mode};
use crate::product_invariants::invariant_skeleton;
use crate::ritty::classify;
use crate::skew::{apply_bword, enumerate_invariant_curves, verify_correspondence, Correspondence};
use crate::swaps::{apply_word, try_ritt_swap_checked};
use crate::words::{
    border_guard_form, bword_normal_form, first_canonical_form, second_canonical_form, Alphabet, Word,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

fn domain(e: impl std::fmt::Display) -> CliError {
    CliError::Domain(e.to_string())
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum SigmaArg {
    Id,
    Conj,
}

#[derive(Args, Debug)]
struct FieldArgs {
    /// Squarefree d for K = Q(sqrt d); 1 means Q.
    #[arg(long, global = true, default_value_t = 1, allow_negative_numbers = true)]
    d: i64,
    #[arg(long, global = true, value_enum, default_value = "id")]
    sigma: SigmaArg,
}

#[derive(Parser, Debug)]
#[command(name = "rittkit", version, about = "Ritt-swap calculus and invariant curves of split polynomial maps")]
struct Cli {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Complete decomposition and every class reachable by Ritt swaps.
    Decompose { poly: String },
    /// Swap-taxonomy verdict of an indecomposable polynomial.
    Classify { poly: String },
    /// Apply swaps (or a skew-twist word) to a decomposition given by `;`-separated factors.
    Swap {
        #[arg(long)]
        factors: String,
        /// Comma-separated positions, applied left to right.
        #[arg(long, conflicts_with = "word")]
        at: Option<String>,
        /// Word in t<i>, f, b, p, g acting right to left.
        #[arg(long)]
        word: Option<String>,
    },
    /// Canonical and normal forms of words.
    Canon {
        #[arg(long, group = "form")]
        first: Option<String>,
        #[arg(long, group = "form", requires = "blocks")]
        second: Option<String>,
        /// Block sizes for `--second`, comma-separated.
        #[arg(long)]
        blocks: Option<String>,
        /// Normal form of a word over t<i>, f, b.
        #[arg(long, group = "form")]
        bnormal: Option<String>,
        /// Border-guard form of a word over t<i>, f, b.
        #[arg(long, group = "form")]
        guards: Option<String>,
        #[arg(long)]
        k: usize,
    },
    /// Certified invariant curves of (x, y) -> (f(x), g(y)).
    Curves {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = 3)]
        bound: usize,
    },
    /// Exact check of a correspondence (h, pi, rho) from f to g.
    Verify {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        h: String,
        #[arg(long)]
        pi: String,
        #[arg(long)]
        rho: String,
    },
    /// Invariant-subvariety skeleton of a coordinatewise map given by `;`-separated polynomials.
    Skeleton {
        #[arg(long)]
        map: String,
        #[arg(long, default_value_t = 3)]
        curve_bound: usize,
        #[arg(long, default_value_t = 8)]
        exponent_bound: i64,
    },
    /// Rank test for Zariski density of an orbit.
    Density {
        #[arg(long)]
        map: String,
        /// Comma-separated start point.
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        /// Reduce mod a prime (random 30-bit unless `--p` is given).
        #[arg(long)]
        modular: bool,
        #[arg(long)]
        p: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Start point with Zariski-dense orbit, optionally checked by the rank test.
    DensePoint {
        #[arg(long)]
        map: String,
        #[arg(long)]
        check_degree: Option<usize>,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Solutions of f(x) = sigma^j(x) over the unramified ring of residue degree `ext`.
    FrobLift {
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        ext: usize,
        #[arg(long)]
        prec: u32,
        #[arg(long)]
        poly: String,
        /// Exponent j with f = x^(p^j) mod p; defaults to `ext`.
        #[arg(long)]
        twist: Option<u32>,
        /// Instead check that lifted solutions of f(x) = sigma(x) have period dividing this.
        #[arg(long, conflicts_with = "twist")]
        period: Option<usize>,
    },
}

/// Structured result with a one-paragraph human summary.
pub struct Report {
    pub value: Value,
    pub summary: String,
}

fn to_value(x: &impl Serialize) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn field_config(a: &FieldArgs) -> Result<FieldConfig, CliError> {
    let sigma = match a.sigma {
        SigmaArg::Id => Sigma::Identity,
        SigmaArg::Conj => Sigma::Conjugation,
    };
    FieldConfig::new(a.d, sigma).map_err(|e| CliError::Usage(e.to_string()))
}

fn poly_arg(name: &str, text: &str, cfg: &FieldConfig) -> Result<Poly, CliError> {
    parse_poly(text, cfg).map_err(|e| {
        CliError::Usage(format!("cannot parse {name} at column {}: {}\n  {text}\n  {}^", e.pos + 1, e.msg, " ".repeat(e.pos)))
    })
}

fn elem_arg(name: &str, text: &str, cfg: &FieldConfig) -> Result<FieldElem, CliError> {
    parse_elem(text.trim(), cfg)
        .map_err(|e| CliError::Usage(format!("cannot parse {name} at column {}: {}", e.pos + 1, e.msg)))
}

fn poly_list(name: &str, text: &str, cfg: &FieldConfig) -> Result<Vec<Poly>, CliError> {
    text.split(';').map(|s| poly_arg(name, s.trim(), cfg)).collect()
}

fn usize_list(name: &str, text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|s| s.trim().parse().map_err(|_| CliError::Usage(format!("{name}: '{s}' is not a non-negative integer"))))
        .collect()
}

fn parse_word(text: &str, k: usize) -> Result<Word, CliError> {
    [Alphabet::M, Alphabet::G]
        .into_iter()
        .find_map(|a| Word::parse(text, k, a).ok())
        .map_or_else(|| Word::parse(text, k, Alphabet::B).map_err(|e| CliError::Usage(e.to_string())), Ok)
}

fn factors_of(d: &Decomposition) -> Vec<String> {
    d.factors().iter().map(|f| f.to_string()).collect()
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let cfg = field_config(&cli.field)?;
    let d = cfg.d();
    match &cli.cmd {
        Command::Decompose { poly } => {
            let f = poly_arg("poly", poly, &cfg)?;
            let start = complete_decomposition(&f).map_err(domain)?;
            let set = enumerate_from(start.clone());
            let summary = format!(
                "{} = {}; {} class(es), {} swap edge(s)",
                f,
                factors_of(&start).join(" o "),
                set.classes.len(),
                set.edges.len()
            );
            Ok(Report {
                value: json!({ "input": f, "decomposition": start, "degrees": start.degrees(), "classes": set.classes, "edges": set.edges }),
                summary,
            })
        }
        Command::Classify { poly } => {
            let f = poly_arg("poly", poly, &cfg)?;
            let class = classify(&f, d).map_err(domain)?;
            let mut summary = format!("{f}: {:?}", class.verdict);
            for line in &class.trace {
                summary.push_str(&format!("\n  {line}"));
            }
            let mut value = to_value(&class);
            value["input"] = to_value(&f);
            Ok(Report { value, summary })
        }
        Command::Swap { factors, at, word } => {
            let fs = poly_list("factors", factors, &cfg)?;
            let dec = Decomposition::from_factors(fs).map_err(domain)?;
            let k = dec.len();
            if let Some(at) = at {
                let mut cur = dec.clone();
                let mut steps = Vec::new();
                for i in usize_list("at", at)? {
                    let r = try_ritt_swap_checked(&cur, i).map_err(|e| CliError::Usage(e.to_string()))?;
                    steps.push(json!({ "position": i, "result": r }));
                    match r.decomposition() {
                        Some(next) => cur = next.clone(),
                        None => {
                            return Ok(Report {
                                summary: format!("swap at {i} is undefined"),
                                value: json!({ "input": dec, "steps": steps, "defined": false }),
                            })
                        }
                    }
                }
                return Ok(Report {
                    summary: factors_of(&cur).join(" o "),
                    value: json!({ "input": dec, "steps": steps, "defined": true, "result": cur }),
                });
            }
            let word = word.as_deref().ok_or_else(|| CliError::Usage("swap needs --at or --word".into()))?;
            let w = parse_word(word, k)?;
            match w.alphabet() {
                Alphabet::M => {
                    let r = apply_word(&dec, &w).map_err(domain)?;
                    let summary = match r.decomposition() {
                        Some(out) => factors_of(out).join(" o "),
                        None => "undefined".into(),
                    };
                    Ok(Report { value: json!({ "input": dec, "word": w, "result": r }), summary })
                }
                _ => {
                    let trace = apply_bword(&dec, &w.to_b(), &cfg).map_err(domain)?;
                    let summary = match trace.result.decomposition() {
                        Some(out) => factors_of(out).join(" o "),
                        None => "undefined".into(),
                    };
                    Ok(Report { value: json!({ "input": dec, "trace": trace }), summary })
                }
            }
        }
        Command::Canon { first, second, blocks, bnormal, guards, k } => {
            if let Some(w) = first {
                let w = Word::parse(w, *k, Alphabet::M).map_err(|e| CliError::Usage(e.to_string()))?;
                let c = first_canonical_form(&w);
                return Ok(Report { summary: c.to_string(), value: json!({ "input": w, "first": c }) });
            }
            if let Some(w) = second {
                let w = Word::parse(w, *k, Alphabet::M).map_err(|e| CliError::Usage(e.to_string()))?;
                let sizes = usize_list("blocks", blocks.as_deref().unwrap_or_default())?;
                let c = second_canonical_form(&w, &sizes).map_err(|e| CliError::Usage(e.to_string()))?;
                return Ok(Report { summary: c.to_word().to_string(), value: json!({ "input": w, "second": c }) });
            }
            if let Some(w) = bnormal {
                let w = Word::parse(w, *k, Alphabet::B).map_err(|e| CliError::Usage(e.to_string()))?;
                let c = bword_normal_form(&w);
                return Ok(Report { summary: c.to_word().to_string(), value: json!({ "input": w, "normal": c }) });
            }
            if let Some(w) = guards {
                let w = parse_word(w, *k)?.to_b();
                if *k < 2 {
                    return Err(CliError::Usage("border-guard form needs k >= 2".into()));
                }
                let c = border_guard_form(&w);
                return Ok(Report { summary: c.word.to_string(), value: json!({ "input": w, "guards": c }) });
            }
            Err(CliError::Usage("canon needs one of --first, --second, --bnormal, --guards".into()))
        }
        Command::Curves { f, g, bound } => {
            let f = poly_arg("f", f, &cfg)?;
            let g = poly_arg("g", g, &cfg)?;
            let found = enumerate_invariant_curves(&f, &g, *bound, &cfg).map_err(domain)?;
            let entries: Vec<Value> = found
                .iter()
                .map(|c| {
                    let mut v = to_value(c);
                    v["verified"] = json!(verify_correspondence(c));
                    v
                })
                .collect();
            let mut summary = format!("{} certified curve(s)", found.len());
            for c in &found {
                summary.push_str(&format!("\n  {} = 0  (pi = {}, rho = {})", c.implicit.as_deref().unwrap_or("?"), c.pi, c.rho));
            }
            Ok(Report { value: json!({ "f": f, "g": g, "bound": bound, "curves": entries }), summary })
        }
        Command::Verify { f, g, h, pi, rho } => {
            let c = Correspondence::new(
                poly_arg("f", f, &cfg)?,
                poly_arg("g", g, &cfg)?,
                poly_arg("h", h, &cfg)?,
                poly_arg("pi", pi, &cfg)?,
                poly_arg("rho", rho, &cfg)?,
                cfg,
            )
            .with_implicit();
            let ok = verify_correspondence(&c);
            let mut value = to_value(&c);
            value["verified"] = json!(ok);
            let summary = if ok { "verified".to_string() } else { "rejected".to_string() };
            if ok {
                Ok(Report { value, summary })
            } else {
                Err(CliError::Domain(format!("correspondence rejected: {value}")))
            }
        }
        Command::Skeleton { map, curve_bound, exponent_bound } => {
            let phi = poly_list("map", map, &cfg)?;
            let sk = invariant_skeleton(&phi, &cfg, *curve_bound, *exponent_bound).map_err(domain)?;
            let v = to_value(&sk);
            let summary = format!(
                "{} coordinate(s); {} character locus(es); {} subtorus component(s); {} pair catalog(s)",
                phi.len(),
                sk.linear.as_ref().map_or(0, |l| l.characters.len()),
                sk.subtori.len(),
                sk.curves.len()
            );
            Ok(Report { value: json!({ "map": phi, "skeleton": v }), summary })
        }
        Command::Density { map, start, n, degree, modular, p, seed } => {
            let phi = poly_list("map", map, &cfg)?;
            let start: Vec<FieldElem> =
                start.split(',').map(|s| elem_arg("start", s, &cfg)).collect::<Result<_, _>>()?;
            let mode = if *modular || p.is_some() {
                Mode::Modular(p.unwrap_or_else(|| random_prime_30(&mut StdRng::seed_from_u64(*seed))))
            } else {
                Mode::Exact
            };
            let sample = orbit(&phi, &start, *n, mode).map_err(domain)?;
            let verdict = density_test(&sample, *degree).map_err(domain)?;
            let summary = verdict_summary(&verdict);
            Ok(Report { value: json!({ "map": phi, "start": start, "n": n, "mode": mode, "verdict": verdict }), summary })
        }
        Command::DensePoint { map, check_degree, n, seed } => {
            let phi = poly_list("map", map, &cfg)?;
            let dp = construct_dense_point(&phi, &cfg).map_err(domain)?;
            let mut value = json!({ "map": phi, "dense_point": dp });
            let pt: Vec<String> = dp.point.iter().map(|x| x.to_string()).collect();
            let mut summary = format!("({})", pt.join(", "));
            if let Some(deg) = check_degree {
                let prime = random_prime_30(&mut StdRng::seed_from_u64(*seed));
                let sample = orbit(&phi, &dp.point, *n, Mode::Modular(prime)).map_err(domain)?;
                let verdict = density_test(&sample, *deg).map_err(domain)?;
                summary.push_str(&format!("; {}", verdict_summary(&verdict)));
                value["check"] = json!({ "p": prime, "n": n, "verdict": verdict });
            }
            Ok(Report { value, summary })
        }
        Command::FrobLift { p, ext, prec, poly, twist, period } => {
            let f = poly_arg("poly", poly, &FieldConfig::rational())?;
            if let Some(m) = period {
                let r = periodic_capture_check(*p, &f, *m, *prec).map_err(domain)?;
                let summary = format!("{} of {} lifted points have period dividing {m}", r.periodic, r.points);
                return Ok(Report { value: to_value(&r), summary });
            }
            let ctx = ZqContext::new(*p, *ext, *prec).map_err(domain)?;
            let fz = ctx.poly_from_rational(&f).map_err(domain)?;
            let j = twist.unwrap_or(*ext as u32);
            let pts = lift_sharp_points_twisted(&ctx, &fz, j).map_err(domain)?;
            let summary = format!(
                "{} point(s) mod {}^{}: {}",
                pts.len(),
                p,
                prec,
                pts.iter().map(|x| ctx.display(x)).collect::<Vec<_>>().join(" ")
            );
            Ok(Report {
                value: json!({
                    "p": p, "ext": ext, "prec": prec, "twist": j, "poly": f,
                    "modulus": ctx.modulus, "sigma_t": ctx.sigma_t(), "points": pts,
                }),
                summary,
            })
        }
    }
}

fn verdict_summary(v: &DensityVerdict) -> String {
    match v {
        DensityVerdict::DenseUpTo { d } => format!("no hypersurface of degree <= {d}"),
        DensityVerdict::ContainedIn { degree, equation, .. } => format!("contained in degree {degree}: {equation}"),
    }
}

/// Parses `args` (including the program name), runs the subcommand, writes the report to
/// `out` and diagnostics to `err`. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return if code == 0 { 0 } else { 2 };
        }
    };
    match dispatch(&cli) {
        Ok(report) => {
            let text = match cli.format {
                Format::Json => serde_json::to_string_pretty(&report.value).expect("json"),
                Format::Text => report.summary,
            };
            let _ = writeln!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
