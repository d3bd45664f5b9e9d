//! `dhensel` — exact series-tower computer algebra from the command line.
//!
//! Exit codes: 0 success, 2 input/usage error, 1 computation error. All
//! output is deterministic for a fixed (argv, seed, config): maps are
//! ordered and every randomized suite takes an explicit seed.

use std::fs;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dhensel_core::error::Error;
use dhensel_core::hensel::hensel_lift_system;
use dhensel_core::json::{
    extension_from_json, gamma_from, l_presentation_from_json, series_json, value_vec_json,
};
use dhensel_core::rational::{parse_rational, Rational};
use dhensel_core::solver::{
    check_dl, solve_algebra_point, solve_dh, AlgebraPresentation, DHProblem,
};
use dhensel_core::suites::{run_all, run_suite, SuiteReport};
use dhensel_core::text::{format_diff_poly, format_series, parse_diff_poly, parse_series};
use dhensel_core::tower::{LevelConfig, Tower, TowerElement, DEFAULT_TERMS};
use dhensel_core::value::ValueVec;
use dhensel_core::weil::{
    continuity_bound, descend, separated_lower_bound, tau, tau_inverse, FiniteFreeAlgebra,
};

const GRAMMAR: &str = "\
Expression grammar (whitespace insignificant):
  terms are joined by + and -, factors by *;
  rationals:    3, -3, 1/2, (1/2)
  series vars:  t0, t1, ...; powers t0^2, t0^(-1), t0^(1/2)
  diff vars:    x1, x2, ...; derivatives x1', x1'', x1^(4); powers x1'^2
  precision:    O(t0^4) marks everything from t0^4 on as unknown
  x1^(2) is the second derivative of x1; x1^2 is its square.";

#[derive(Parser)]
#[command(
    name = "dhensel",
    about = "Truncated series towers, differential Hensel lifting and Weil descent over exact rationals",
    after_help = GRAMMAR,
    version
)]
struct Cli {
    #[command(flatten)]
    global: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GlobalOpts {
    /// Optional JSON config file; flags override it, defaults fill the rest
    #[arg(long, global = true)]
    config: Option<String>,
    /// Series terms kept per level, comma separated (last value repeats)
    #[arg(long, global = true)]
    precision: Option<String>,
    /// Exponent lattice denominators per level, comma separated
    #[arg(long, global = true)]
    ramification: Option<String>,
    /// Output format
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and echo its normal form
    Parse {
        expr: String,
        /// Tower height the expression lives at (default: highest tN + 1)
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Prolong a jet and expand it through the twisted Taylor coefficients
    Taylor {
        #[arg(long)]
        poly: String,
        /// Comma-separated jet entries (series expressions)
        #[arg(long)]
        jet: String,
        #[arg(long)]
        terms: usize,
        #[arg(long)]
        stage: Option<usize>,
    },
    /// Solve a differentially henselian problem in the next tower stage
    SolveDh {
        #[arg(long)]
        poly: String,
        #[arg(long)]
        jet: String,
        /// Closeness target: comma-separated rationals, one per stage level
        #[arg(long, default_value = "")]
        gamma: String,
        #[arg(long)]
        terms: usize,
        /// Stage of the problem (default: number of gamma coordinates)
        #[arg(long)]
        stage: Option<usize>,
        /// Retry once with doubled per-level precision if the separant is
        /// indistinguishable from zero
        #[arg(long)]
        retry_precision: bool,
    },
    /// Hensel-lift a square polynomial system by Newton iteration
    Hensel {
        /// Semicolon-separated plain polynomials
        #[arg(long)]
        system: String,
        /// Comma-separated initial approximations for the lifted block
        #[arg(long)]
        approx: String,
        /// Comma-separated values of the fixed block (optional)
        #[arg(long, default_value = "")]
        fixed: String,
        /// Target precision exponent
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 1)]
        stage: usize,
    },
    /// Find a differential point of a presented algebra near its base point
    SolveAlgebra {
        /// JSON file: {stage?, generators, relations, basePoint, gamma, terms}
        #[arg(long)]
        spec: String,
    },
    /// Descend a presented L-algebra along a finite free extension
    WeilDescend {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        extension: String,
    },
    /// Move points across the descent correspondence
    WeilTau {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        extension: String,
        /// Comma-separated point coordinates (K-side, or L-side with --inverse)
        #[arg(long)]
        point: String,
        /// Map an L-point down to a K-point of the descent
        #[arg(long)]
        inverse: bool,
    },
    /// Check the continuity and separated-basis valuation bounds
    WeilCheckBounds {
        #[arg(long)]
        extension: String,
        /// Comma-separated K-side coordinates of the first point
        #[arg(long)]
        phi: String,
        /// Comma-separated K-side coordinates of the second point
        #[arg(long)]
        psi: String,
        #[arg(long)]
        gamma: String,
        /// Also check the separated-basis per-coordinate lower bounds
        #[arg(long)]
        separated: bool,
    },
    /// Run property suites (`all` or a suite name)
    Check {
        suite: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<u32>,
    },
}

#[derive(Clone)]
struct RunConfig {
    precision: Vec<u32>,
    ramification: Vec<u32>,
    seed: u64,
    trials: u32,
    format: Format,
}

impl RunConfig {
    fn tower(&self, stage: usize) -> Tower {
        let levels = (0..stage)
            .map(|i| {
                let ram = *self
                    .ramification
                    .get(i)
                    .or_else(|| self.ramification.last())
                    .unwrap_or(&1);
                let terms = *self
                    .precision
                    .get(i)
                    .or_else(|| self.precision.last())
                    .unwrap_or(&DEFAULT_TERMS);
                LevelConfig::new(ram.max(1), terms.max(1))
            })
            .collect();
        Tower::with_levels(levels)
    }
}

fn parse_u32_list(s: &str, what: &str) -> Result<Vec<u32>, Error> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| Error::UsageError(format!("bad {what} entry `{p}`")))
        })
        .collect()
}

fn load_config(opts: &GlobalOpts) -> Result<RunConfig, Error> {
    let mut precision = vec![DEFAULT_TERMS];
    let mut ramification = vec![1u32];
    let mut seed = 42u64;
    let mut trials = 50u32;
    let mut format = Format::Json;

    if let Some(path) = &opts.config {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::UsageError(format!("cannot read config {path}: {e}")))?;
        let doc: Value = serde_json::from_str(&text)
            .map_err(|e| Error::UsageError(format!("bad JSON in {path}: {e}")))?;
        if let Some(p) = doc.get("precision").and_then(Value::as_array) {
            precision = p
                .iter()
                .map(|v| v.as_u64().map(|n| n as u32))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::UsageError("config precision must be integers".into()))?;
        }
        if let Some(r) = doc.get("ramification").and_then(Value::as_array) {
            ramification = r
                .iter()
                .map(|v| v.as_u64().map(|n| n as u32))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::UsageError("config ramification must be integers".into()))?;
        }
        if let Some(s) = doc.get("seed").and_then(Value::as_u64) {
            seed = s;
        }
        if let Some(t) = doc.get("trials").and_then(Value::as_u64) {
            trials = t as u32;
        }
        if let Some(f) = doc.get("format").and_then(Value::as_str) {
            format = match f {
                "json" => Format::Json,
                "pretty" => Format::Pretty,
                other => return Err(Error::UsageError(format!("unknown format `{other}`"))),
            };
        }
    }
    if let Some(p) = &opts.precision {
        precision = parse_u32_list(p, "precision")?;
    }
    if let Some(r) = &opts.ramification {
        ramification = parse_u32_list(r, "ramification")?;
    }
    if let Some(f) = opts.format {
        format = f;
    }
    if precision.is_empty() || ramification.is_empty() {
        return Err(Error::UsageError(
            "precision and ramification must be nonempty".into(),
        ));
    }
    Ok(RunConfig {
        precision,
        ramification,
        seed,
        trials,
        format,
    })
}

fn parse_gamma(s: &str) -> Result<ValueVec, Error> {
    gamma_from(&Value::String(s.to_string()))
}

fn parse_series_list(s: &str, tower: &Tower) -> Result<Vec<TowerElement>, Error> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| parse_series(p.trim(), tower))
        .collect()
}

/// Smallest tower height covering every `tN` mentioned in the inputs.
fn highest_stage_mentioned(exprs: &[&str]) -> usize {
    let mut max = 0usize;
    for e in exprs {
        let bytes = e.as_bytes();
        for (i, &c) in bytes.iter().enumerate() {
            if c == b't' && (i == 0 || !bytes[i - 1].is_ascii_alphanumeric()) {
                let digits: String = e[i + 1..]
                    .chars()
                    .take_while(|c| c.is_ascii_digit())
                    .collect();
                if let Ok(n) = digits.parse::<usize>() {
                    max = max.max(n + 1);
                }
            }
        }
    }
    max
}

/// Reports the residual as a certificate: its exact valuation when
/// determined, otherwise the certified lower bound on the top exponent.
fn residual_value(residual: &TowerElement, bound: &Rational) -> Value {
    match residual.valuation() {
        Ok(v) => json!({ "exact": value_vec_json(&v) }),
        Err(_) => json!({
            "lowerBoundTopExponent": dhensel_core::json::rational_json(bound)
        }),
    }
}

fn load_extension(path: &str, cfg: &RunConfig) -> Result<(FiniteFreeAlgebra, Tower), Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::UsageError(format!("cannot read {path}: {e}")))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::UsageError(format!("bad JSON in {path}: {e}")))?;
    let stage = doc.get("stage").and_then(Value::as_u64).unwrap_or(0) as usize;
    // the extension may live in a finer exponent lattice than the defaults
    let mut cfg = cfg.clone();
    if let Some(r) = doc.get("ramification").and_then(Value::as_array) {
        cfg.ramification = r
            .iter()
            .map(|v| v.as_u64().map(|n| n as u32))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::UsageError("ramification must be integers".into()))?;
    }
    let tower = cfg.tower(stage);
    let alg = extension_from_json(&doc, &tower)?;
    Ok((alg, tower))
}

fn load_algebra(
    path: &str,
    alg: &FiniteFreeAlgebra,
    tower: &Tower,
) -> Result<dhensel_core::weil::LPresentation, Error> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::UsageError(format!("cannot read {path}: {e}")))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::UsageError(format!("bad JSON in {path}: {e}")))?;
    l_presentation_from_json(&doc, alg.dim, tower)
}

fn run(cfg: &RunConfig, command: Command) -> Result<(Value, String), Error> {
    match command {
        Command::Parse { expr, stage } => {
            let stage = stage.unwrap_or_else(|| highest_stage_mentioned(&[expr.as_str()]));
            let tower = cfg.tower(stage);
            let poly = parse_diff_poly(&expr, &tower, None)?;
            let normal = format_diff_poly(&poly);
            let mut doc = json!({
                "input": expr,
                "normalForm": normal,
                "stage": stage,
            });
            if let Some(series) = poly.constant_coefficient() {
                doc["series"] = series_json(&series, &tower);
            }
            Ok((doc, normal))
        }
        Command::Taylor {
            poly,
            jet,
            terms,
            stage,
        } => {
            let stage =
                stage.unwrap_or_else(|| highest_stage_mentioned(&[poly.as_str(), jet.as_str()]));
            let tower = cfg.tower(stage);
            let f = parse_diff_poly(&poly, &tower, Some(1))?;
            let jet = parse_series_list(&jet, &tower)?;
            let n = f.order(0)? as usize;
            let depth = terms.saturating_sub(1).max(n);
            let point = dhensel_core::taylor::prolong(&f, &jet, depth, &tower)?;
            let alpha = point.taylor(terms)?;
            let up = tower.extend(LevelConfig::laurent());
            let text = format_series(&alpha);
            let doc = json!({
                "poly": format_diff_poly(&f),
                "stage": stage,
                "series": series_json(&alpha, &up),
                "text": text,
            });
            Ok((doc, text))
        }
        Command::SolveDh {
            poly,
            jet,
            gamma,
            terms,
            stage,
            retry_precision,
        } => {
            let gamma = parse_gamma(&gamma)?;
            let stage = stage.unwrap_or_else(|| gamma.coords().map_or(0, |c| c.len()));
            let gamma = match gamma.coords() {
                Some([]) => ValueVec::zero(stage),
                Some(c) if c.len() == stage => gamma,
                _ => {
                    return Err(Error::UsageError(
                        "gamma length does not match the stage".into(),
                    ))
                }
            };
            let attempt = |cfg: &RunConfig| -> Result<(Tower, _), Error> {
                let tower = cfg.tower(stage);
                let f = parse_diff_poly(&poly, &tower, Some(1))?;
                let jet = parse_series_list(&jet, &tower)?;
                let problem = DHProblem::new(f, jet, gamma.clone())?;
                let cert = solve_dh(&problem, terms, &tower)?;
                Ok((tower, (problem, cert)))
            };
            let (tower, (problem, cert)) = match attempt(cfg) {
                Err(Error::DegeneratePoint(_)) if retry_precision => {
                    let mut doubled = cfg.clone();
                    for p in &mut doubled.precision {
                        *p = p.saturating_mul(2);
                    }
                    attempt(&doubled)?
                }
                other => other?,
            };
            let replay = check_dl(&problem, &cert.solution)?;
            let up = tower.extend(LevelConfig::laurent());
            let text = format_series(&cert.solution);
            let doc = json!({
                "solution": series_json(&cert.solution, &up),
                "solutionText": text,
                "residualValuation": residual_value(&cert.residual, &cert.residual_bound),
                "ballCheck": cert.ball_ok,
                "valuedTaylor": cert.valued_taylor_ok,
                "constantTermIdentity": cert.constant_terms_ok,
                "residualCertified": cert.residual_ok,
                "replay": replay,
            });
            let pretty = format!(
                "{text}\nresidual O(t{stage}^{}), ball {}, valued-Taylor {}, constant terms {}",
                cert.residual_bound, cert.ball_ok, cert.valued_taylor_ok, cert.constant_terms_ok
            );
            Ok((doc, pretty))
        }
        Command::Hensel {
            system,
            approx,
            fixed,
            target,
            stage,
        } => {
            let tower = cfg.tower(stage);
            let fixed = parse_series_list(&fixed, &tower)?;
            let approx = parse_series_list(&approx, &tower)?;
            let num_vars = fixed.len() + approx.len();
            let polys = system
                .split(';')
                .filter(|p| !p.trim().is_empty())
                .map(|p| parse_diff_poly(p.trim(), &tower, Some(num_vars)))
                .collect::<Result<Vec<_>, _>>()?;
            let target = parse_rational(&target)
                .ok_or_else(|| Error::UsageError(format!("bad target `{target}`")))?;
            let outcome = hensel_lift_system(&polys, &fixed, &approx, &target, &tower)?;
            let texts: Vec<String> = outcome.solution.iter().map(format_series).collect();
            let doc = json!({
                "solution": outcome
                    .solution
                    .iter()
                    .map(|s| series_json(s, &tower))
                    .collect::<Vec<_>>(),
                "solutionText": texts,
                "iterations": outcome.iterations,
            });
            let pretty = outcome
                .solution
                .iter()
                .map(format_series)
                .collect::<Vec<_>>()
                .join("\n");
            Ok((doc, pretty))
        }
        Command::SolveAlgebra { spec } => {
            let text = fs::read_to_string(&spec)
                .map_err(|e| Error::UsageError(format!("cannot read {spec}: {e}")))?;
            let doc: Value = serde_json::from_str(&text)
                .map_err(|e| Error::UsageError(format!("bad JSON in {spec}: {e}")))?;
            let stage = doc.get("stage").and_then(Value::as_u64).unwrap_or(0) as usize;
            let tower = cfg.tower(stage);
            let generators: Vec<String> = doc
                .get("generators")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::UsageError("missing generators".into()))?
                .iter()
                .map(|v| {
                    v.as_str()
                        .map(str::to_string)
                        .ok_or_else(|| Error::UsageError("generator must be a string".into()))
                })
                .collect::<Result<_, _>>()?;
            let m = generators.len();
            let relations = doc
                .get("relations")
                .and_then(Value::as_array)
                .map(|rels| {
                    rels.iter()
                        .map(|r| {
                            r.as_str()
                                .ok_or_else(|| {
                                    Error::UsageError("relation must be a string".into())
                                })
                                .and_then(|s| parse_diff_poly(s, &tower, Some(m)))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .transpose()?
                .unwrap_or_default();
            let base = doc
                .get("basePoint")
                .and_then(Value::as_object)
                .ok_or_else(|| Error::UsageError("missing basePoint".into()))?;
            let mut base_point = Vec::with_capacity(m);
            for g in &generators {
                let entry = base
                    .get(g)
                    .ok_or_else(|| Error::UsageError(format!("basePoint missing `{g}`")))?;
                let jet = match entry {
                    Value::Array(items) => items
                        .iter()
                        .map(|v| {
                            v.as_str()
                                .ok_or_else(|| {
                                    Error::UsageError("jet entries must be strings".into())
                                })
                                .and_then(|s| parse_series(s, &tower))
                        })
                        .collect::<Result<Vec<_>, _>>()?,
                    Value::String(s) => vec![parse_series(s, &tower)?],
                    _ => {
                        return Err(Error::UsageError(
                            "basePoint entries must be strings or arrays".into(),
                        ))
                    }
                };
                base_point.push(jet);
            }
            let gamma = match doc.get("gamma") {
                Some(g) => {
                    let g = gamma_from(g)?;
                    if g.coords().map_or(0, |c| c.len()) != stage {
                        return Err(Error::UsageError(
                            "gamma length does not match the stage".into(),
                        ));
                    }
                    g
                }
                None => ValueVec::zero(stage),
            };
            let terms = doc.get("terms").and_then(Value::as_u64).unwrap_or(8) as usize;
            let pres = AlgebraPresentation {
                generators: generators.clone(),
                relations,
                base_point: Some(base_point),
            };
            let point = solve_algebra_point(&pres, &gamma, terms, &tower)?;
            let up = tower.extend(LevelConfig::laurent());
            let images: serde_json::Map<String, Value> = point
                .images
                .iter()
                .map(|(g, v)| (g.clone(), series_json(v, &up)))
                .collect();
            let images_text: serde_json::Map<String, Value> = point
                .images
                .iter()
                .map(|(g, v)| (g.clone(), json!(format_series(v))))
                .collect();
            let doc = json!({
                "images": images,
                "imagesText": images_text,
                "ballCheck": point.ball_ok,
                "relationsCheck": point.relations_ok,
            });
            let pretty = point
                .images
                .iter()
                .map(|(g, v)| format!("{g} -> {}", format_series(v)))
                .collect::<Vec<_>>()
                .join("\n");
            Ok((doc, pretty))
        }
        Command::WeilDescend { algebra, extension } => {
            let (alg, tower) = load_extension(&extension, cfg)?;
            let pres = load_algebra(&algebra, &alg, &tower)?;
            let desc = descend(&pres, &alg);
            let doc = json!({
                "generators": desc.generators,
                "relations": desc
                    .relations
                    .iter()
                    .map(|r| json!(format_diff_poly(r)))
                    .collect::<Vec<_>>(),
                "origin": desc
                    .origin
                    .iter()
                    .map(|(r, i)| json!([r, i]))
                    .collect::<Vec<_>>(),
            });
            let pretty = desc
                .relations
                .iter()
                .map(format_diff_poly)
                .collect::<Vec<_>>()
                .join("\n");
            Ok((doc, pretty))
        }
        Command::WeilTau {
            algebra,
            extension,
            point,
            inverse,
        } => {
            let (alg, tower) = load_extension(&extension, cfg)?;
            let pres = load_algebra(&algebra, &alg, &tower)?;
            let desc = descend(&pres, &alg);
            let values = parse_series_list(&point, &tower)?;
            let m = pres.generators.len();
            let l = alg.dim;
            if values.len() != m * l {
                return Err(Error::UsageError(format!(
                    "expected {} coordinates ({m} generators x dim {l})",
                    m * l
                )));
            }
            if inverse {
                let lpoint: Vec<Vec<TowerElement>> =
                    values.chunks(l).map(|c| c.to_vec()).collect();
                let wpoint = tau_inverse(&lpoint, &pres, &alg)?;
                let texts: Vec<String> =
                    wpoint.iter().map(|j| format_series(&j[0])).collect();
                let doc = json!({ "wpoint": texts });
                let pretty = texts.join(", ");
                Ok((doc, pretty))
            } else {
                let wpoint: Vec<Vec<TowerElement>> =
                    values.iter().map(|v| vec![v.clone()]).collect();
                let lpoint = tau(&wpoint, &desc, &pres, &alg)?;
                let coords: Vec<Vec<String>> = lpoint
                    .iter()
                    .map(|c| c.iter().map(format_series).collect())
                    .collect();
                let doc = json!({ "lpoint": coords });
                let pretty = coords
                    .iter()
                    .map(|c| format!("({})", c.join(", ")))
                    .collect::<Vec<_>>()
                    .join(", ");
                Ok((doc, pretty))
            }
        }
        Command::WeilCheckBounds {
            extension,
            phi,
            psi,
            gamma,
            separated,
        } => {
            let (alg, tower) = load_extension(&extension, cfg)?;
            let phi = parse_series_list(&phi, &tower)?;
            let psi = parse_series_list(&psi, &tower)?;
            if phi.len() != alg.dim || psi.len() != alg.dim {
                return Err(Error::UsageError(format!(
                    "points need {} coordinates",
                    alg.dim
                )));
            }
            let gamma = parse_gamma(&gamma)?;
            let report = continuity_bound(&alg, &phi, &psi, &gamma)?;
            let mut doc = json!({
                "epsilon": value_vec_json(&report.epsilon),
                "hypothesis": report.hypothesis_ok,
                "conclusion": report.conclusion_ok,
                "coordinateValuations": report
                    .coordinate_valuations
                    .iter()
                    .map(value_vec_json)
                    .collect::<Vec<_>>(),
                "combinedValuation": value_vec_json(&report.combined_valuation),
            });
            if separated {
                doc["separatedBounds"] = separated_lower_bound(&alg, &phi, &psi)?
                    .iter()
                    .map(|b| {
                        json!({
                            "coordinate": value_vec_json(&b.coordinate_valuation),
                            "required": value_vec_json(&b.required),
                            "holds": b.holds,
                        })
                    })
                    .collect();
            }
            let pretty = format!(
                "epsilon = {}, hypothesis {}, conclusion {}",
                report.epsilon, report.hypothesis_ok, report.conclusion_ok
            );
            Ok((doc, pretty))
        }
        Command::Check {
            suite,
            seed,
            trials,
        } => {
            let seed = seed.unwrap_or(cfg.seed);
            let trials = trials.unwrap_or(cfg.trials);
            let reports: Vec<SuiteReport> = if suite == "all" {
                run_all(seed, trials)?
            } else {
                vec![run_suite(&suite, seed, trials)?]
            };
            let all_passed = reports.iter().all(SuiteReport::passed);
            let doc = json!({
                "seed": seed,
                "trials": trials,
                "suites": reports
                    .iter()
                    .map(|r| {
                        json!({
                            "name": r.name,
                            "trials": r.trials,
                            "failures": r.failures,
                            "detail": r.detail,
                        })
                    })
                    .collect::<Vec<_>>(),
                "passed": all_passed,
            });
            let pretty = reports
                .iter()
                .map(|r| {
                    format!(
                        "{:<22} {} ({} trials)",
                        r.name,
                        if r.passed() { "pass" } else { "FAIL" },
                        r.trials
                    )
                })
                .collect::<Vec<_>>()
                .join("\n");
            Ok((doc, pretty))
        }
    }
}

fn is_input_error(e: &Error) -> bool {
    matches!(
        e,
        Error::UsageError(_) | Error::SyntaxError { .. } | Error::UnknownVariable(_)
    )
}

/// Writes a line to stdout; a consumer that closed the pipe early is not an
/// error worth crashing over.
fn emit(out: &str) {
    use std::io::Write;
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if writeln!(lock, "{out}").is_err() {
        std::process::exit(0);
    }
}

fn emit_error(doc: &Value) {
    use std::io::Write;
    let stderr = std::io::stderr();
    let mut lock = stderr.lock();
    let _ = writeln!(
        lock,
        "{}",
        serde_json::to_string(doc).expect("serializable")
    );
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load_config(&cli.global) {
        Ok(cfg) => cfg,
        Err(e) => {
            emit_error(&json!({ "error": e.name(), "message": e.to_string() }));
            return ExitCode::from(2);
        }
    };
    match run(&cfg, cli.command) {
        Ok((doc, pretty)) => {
            let out = match cfg.format {
                Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
                Format::Pretty => pretty,
            };
            emit(&out);
            if doc.get("passed") == Some(&Value::Bool(false)) {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(e) => {
            emit_error(&json!({ "error": e.name(), "message": e.to_string() }));
            if is_input_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
