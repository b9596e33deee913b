// SPDX-License-Identifier: Apache-2.0

//! Command-line front end.
//!
//! Exit codes: 0 when the checked statement is upheld, 2 when it is
//! falsified or the run found a negative result, 1 on usage or input errors
//! (and on hierarchy inversions).

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use crate::domain::ConvexDomain;
use crate::jacobian::{contradiction_probe, estimate_clarke, mvt_inclusion, ClarkeParams, Definiteness, MvtParams};
use crate::monotonicity::{falsify, hierarchy_check, SearchConfig};
use crate::par::Exec;
use crate::registry::{registry, resolve_map, ResolvedMap};
use crate::report::{write_sweep_csv, JacobianReport, MapSummary, Payload, RunReport};
use crate::translation::{
    counterexample_suite, parse_lambda_grid, proof_trace, proposition1_crosscheck, sweep, theorem1_check, DualLine,
    JacobianSide, Prop1Outcome, Theorem1Outcome, DEFAULT_ALPHAS,
};
use crate::types::{Property, TolerancePolicy, VectorPoint};

const EXIT_OK: i32 = 0;
const EXIT_ERROR: i32 = 1;
const EXIT_NEGATIVE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "monocert", version, about = "Falsify and certify generalized monotonicity of vector fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Clone)]
struct Common {
    /// Sample pairs per check.
    #[arg(long, default_value_t = 20_000)]
    budget: usize,
    #[arg(long, env = "MONOCERT_SEED", default_value_t = 0)]
    seed: u64,
    /// Print the full JSON report instead of a summary.
    #[arg(long)]
    json: bool,
    /// Run without the thread pool.
    #[arg(long)]
    sequential: bool,
}

#[derive(Debug, Args, Clone)]
struct MapArgs {
    /// Registry name or `file:<path>`.
    #[arg(long)]
    map: String,
    /// Domain override, e.g. `box:-1:1` or `slice:base=0,0,0;dirs=e1,e2`.
    #[arg(long, allow_hyphen_values = true)]
    domain: Option<String>,
}

#[derive(Debug, Args, Clone)]
struct LineArgs {
    /// `u=<csv>;v=<csv>`.
    #[arg(long, allow_hyphen_values = true)]
    line: String,
    /// λ grid `start:end:count`.
    #[arg(long, allow_hyphen_values = true, default_value = "-2:2:17")]
    lambda: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Search for a violation of one property.
    Check {
        #[command(flatten)]
        map: MapArgs,
        /// monotone, strict, strong[=λ], pseudo or quasi.
        #[arg(long)]
        property: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check every translate `F + ω` along a line.
    Sweep {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        line: LineArgs,
        #[arg(long, default_value = "quasi")]
        property: String,
        /// Write one CSV row per λ to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Compare the quasimonotone sweep with Jacobian definiteness.
    Theorem1 {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        line: LineArgs,
        /// Points at which the Clarke hull is estimated.
        #[arg(long, default_value_t = 25)]
        points: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Cross-check monotone against the pseudo and quasi sweeps.
    Prop1 {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        line: LineArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Record the inequalities of the degenerate-pair argument.
    Trace {
        #[command(flatten)]
        map: MapArgs,
        #[command(flatten)]
        line: LineArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[arg(long, allow_hyphen_values = true)]
        z: Option<String>,
        /// Comma-separated α values in (0, 1).
        #[arg(long)]
        alphas: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the Clarke Jacobian at a point and test its definiteness.
    Jacobian {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        at: String,
        #[arg(long, default_value_t = 1e-3)]
        radius: f64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long)]
        fd_step: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Test the mean-value inclusion on a segment.
    Mvt {
        #[command(flatten)]
        map: MapArgs,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in counterexample with an orthogonal line.
    Counterexample {
        /// Truncation radius of the slice.
        #[arg(long, default_value_t = crate::domain::DEFAULT_SLICE_RADIUS)]
        radius: f64,
        /// Override the line (default: the third coordinate axis).
        #[arg(long, allow_hyphen_values = true)]
        line: Option<String>,
        #[arg(long, allow_hyphen_values = true, default_value = "-2:2:17")]
        lambda: String,
        #[command(flatten)]
        common: Common,
    },
    /// Check all five properties and flag chain inversions.
    Hierarchy {
        #[command(flatten)]
        map: MapArgs,
        /// Modulus probed for strong monotonicity.
        #[arg(long)]
        modulus: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// List the built-in maps.
    Maps {
        #[arg(long)]
        json: bool,
    },
}

struct Outcome {
    code: i32,
    summary: String,
    payload: Payload,
}

fn resolve(args: &MapArgs) -> anyhow::Result<(ResolvedMap, ConvexDomain)> {
    let resolved = resolve_map(&args.map)?;
    let domain = match &args.domain {
        Some(d) => ConvexDomain::parse(d)?,
        None => resolved.domain.clone().ok_or_else(|| anyhow!("map `{}` has no default domain; pass --domain", args.map))?,
    };
    Ok((resolved, domain))
}

fn config(c: &Common) -> SearchConfig {
    let mut cfg = SearchConfig::new(c.budget, c.seed);
    if c.sequential {
        cfg.exec = Exec::Sequential;
    }
    cfg
}

fn point(text: &str, what: &str) -> anyhow::Result<VectorPoint> {
    VectorPoint::parse_csv(text).with_context(|| format!("invalid {what}"))
}

fn line(l: &LineArgs) -> anyhow::Result<DualLine> {
    Ok(DualLine::parse(&l.line, parse_lambda_grid(&l.lambda)?)?)
}

fn verdict_code(falsified: bool) -> i32 {
    if falsified {
        EXIT_NEGATIVE
    } else {
        EXIT_OK
    }
}

fn execute(cmd: &Command) -> anyhow::Result<Outcome> {
    Ok(match cmd {
        Command::Check { map, property, common } => {
            let (r, d) = resolve(map)?;
            let property = Property::parse(property)?;
            let v = falsify(&r.map, &d, property, &config(common))?;
            let summary = match &v.witness {
                Some(w) => format!("{}: falsified at x = {}, y = {} (margin {:e})", property, w.x, w.y, w.margin),
                None => format!("{}: no violation found in {} samples", property, v.samples_used),
            };
            Outcome { code: verdict_code(v.is_falsified()), summary, payload: Payload::Check(v) }
        }
        Command::Sweep { map, line: l, property, csv, common } => {
            let (r, d) = resolve(map)?;
            let s = sweep(&r.map, &d, &line(l)?, Property::parse(property)?, &config(common))?;
            if let Some(path) = csv {
                let f = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
                write_sweep_csv(&s, f)?;
            }
            let summary = match s.first_falsified {
                None => format!("{} sweep: upheld at all {} λ values", s.property, s.rows.len()),
                Some(i) => format!("{} sweep: falsified at λ = {}", s.property, s.rows[i].lambda),
            };
            Outcome { code: verdict_code(!s.all_passed), summary, payload: Payload::Sweep(s) }
        }
        Command::Theorem1 { map, line: l, points, common } => {
            let (r, d) = resolve(map)?;
            let jac = JacobianSide { points: *points, ..JacobianSide::default() };
            let t = theorem1_check(&r.map, &d, &line(l)?, &jac, &config(common))?;
            let summary = format!(
                "quasi sweep {}, hulls {} (min eigenvalue {:e}): {}",
                if t.sweep.all_passed { "upheld" } else { "falsified" },
                if t.hulls_psd { "PSD" } else { "indefinite" },
                t.min_eigenvalue,
                t.note
            );
            let code = verdict_code(t.outcome != Theorem1Outcome::Agree);
            Outcome { code, summary, payload: Payload::Theorem1(t) }
        }
        Command::Prop1 { map, line: l, common } => {
            let (r, d) = resolve(map)?;
            let p = proposition1_crosscheck(&r.map, &d, &line(l)?, &config(common))?;
            let summary = format!(
                "monotone {}, pseudo sweep {}, quasi sweep {}: {:?}",
                p.bits[0], p.bits[1], p.bits[2], p.outcome
            );
            let code = verdict_code(p.outcome == Prop1Outcome::EquivalenceViolated);
            Outcome { code, summary, payload: Payload::Prop1(p) }
        }
        Command::Trace { map, line: l, x, y, z, alphas, common } => {
            let (r, d) = resolve(map)?;
            let z = z.as_deref().map(|t| point(t, "z")).transpose()?;
            let alphas = match alphas {
                Some(a) => a
                    .split(',')
                    .map(|s| s.trim().parse::<f64>().with_context(|| format!("invalid α `{s}`")))
                    .collect::<anyhow::Result<Vec<_>>>()?,
                None => DEFAULT_ALPHAS.to_vec(),
            };
            let t = proof_trace(
                &r.map,
                &d,
                &line(l)?,
                &point(x, "x")?,
                &point(y, "y")?,
                z.as_ref(),
                &alphas,
                common.seed,
                &TolerancePolicy::default(),
            )?;
            let summary = format!(
                "z = {}; inequality (1) {}, inequality (2) {}, ⟨x*−y*, y−x⟩ = {:e}",
                t.z,
                if t.ineq1_holds { "holds" } else { "fails" },
                if t.ineq2_holds { "holds" } else { "fails" },
                t.limit_estimate
            );
            let code = verdict_code(!(t.ineq1_holds && t.ineq2_holds && t.monotone_on_segment));
            Outcome { code, summary, payload: Payload::Trace(t) }
        }
        Command::Jacobian { map, at, radius, samples, fd_step, common } => {
            let (r, d) = resolve(map)?;
            let mut tol = TolerancePolicy::default();
            if let Some(h) = fd_step {
                tol.fd_step = *h;
            }
            tol.validate()?;
            let x = point(at, "point")?;
            let params = ClarkeParams::new(*radius, *samples, tol.fd_step, common.seed);
            let hull = estimate_clarke(&r.map, &x, &params, Some(&d), config(common).exec)?;
            let probe = contradiction_probe(&r.map, &x, &hull, &tol, Some(&d))?;
            let summary = format!(
                "{} generators, {:?}, min eigenvalue {:e}{}",
                hull.generators.len(),
                probe.psd.verdict,
                probe.psd.min_eigenvalue,
                match &probe.witness {
                    Some(w) => format!("; monotonicity witness at y = {}", w.x),
                    None => String::new(),
                }
            );
            let code = verdict_code(probe.psd.verdict == Definiteness::Indefinite);
            Outcome { code, summary, payload: Payload::Jacobian(JacobianReport { hull, probe }) }
        }
        Command::Mvt { map, x, y, common } => {
            let (r, d) = resolve(map)?;
            let params = MvtParams { seed: common.seed, ..MvtParams::default() };
            let m = mvt_inclusion(
                &r.map,
                &point(x, "x")?,
                &point(y, "y")?,
                &params,
                &TolerancePolicy::default(),
                Some(&d),
                config(common).exec,
            )?;
            let summary = format!(
                "distance {:e} (threshold {:e}): {}",
                m.distance,
                m.threshold,
                if m.included { "included" } else { "not included" }
            );
            Outcome { code: verdict_code(!m.included), summary, payload: Payload::Mvt(m) }
        }
        Command::Counterexample { radius, line: l, lambda, common } => {
            let grid = parse_lambda_grid(lambda)?;
            let l = match l {
                Some(text) => Some(DualLine::parse(text, grid)?),
                None => Some(DualLine::through_origin(vec![0.0, 0.0, 1.0], grid)?),
            };
            let c = counterexample_suite(*radius, l, &config(common))?;
            let mut summary = c
                .assertions
                .iter()
                .map(|a| format!("[{}] {}: {}", if a.passed { "pass" } else { "FAIL" }, a.name, a.detail))
                .collect::<Vec<_>>()
                .join("\n");
            if let Some(n) = &c.narrative {
                summary.push('\n');
                summary.push_str(n);
            }
            Outcome { code: verdict_code(!c.passed), summary, payload: Payload::Counterexample(c) }
        }
        Command::Hierarchy { map, modulus, common } => {
            let (r, d) = resolve(map)?;
            let modulus = modulus.or(r.entry.as_ref().map(|e| e.strong_modulus));
            let h = hierarchy_check(&r.map, &d, modulus, &config(common))?;
            let mut summary =
                format!("upheld: {}", h.upheld.iter().map(|c| c.name()).collect::<Vec<_>>().join(", "));
            for inv in &h.inversions {
                summary.push_str(&format!("\ninversion: {} upheld but {} falsified", inv.stronger.name(), inv.weaker.name()));
            }
            let code = if h.consistent() { EXIT_OK } else { EXIT_ERROR };
            Outcome { code, summary, payload: Payload::Hierarchy(h) }
        }
        Command::Maps { .. } => {
            let list: Vec<MapSummary> = registry()
                .into_iter()
                .map(|e| MapSummary {
                    dimension: e.map.dim_in(),
                    known_class: e.known_class.iter().copied().collect(),
                    domain: e.domain.to_string(),
                    provenance: e.provenance.clone(),
                    name: e.name,
                })
                .collect();
            let summary = list
                .iter()
                .map(|m| {
                    let cls: Vec<&str> = m.known_class.iter().map(|c| c.name()).collect();
                    format!("{:<22} dim {}  [{}]  {}", m.name, m.dimension, cls.join(","), m.domain)
                })
                .collect::<Vec<_>>()
                .join("\n");
            Outcome { code: EXIT_OK, summary, payload: Payload::Maps(list) }
        }
    })
}

fn wants_json(cmd: &Command) -> (bool, u64) {
    match cmd {
        Command::Check { common, .. }
        | Command::Sweep { common, .. }
        | Command::Theorem1 { common, .. }
        | Command::Prop1 { common, .. }
        | Command::Trace { common, .. }
        | Command::Jacobian { common, .. }
        | Command::Mvt { common, .. }
        | Command::Counterexample { common, .. }
        | Command::Hierarchy { common, .. } => (common.json, common.seed),
        Command::Maps { json } => (*json, 0),
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli.command) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return EXIT_ERROR;
        }
    };
    let (json, seed) = wants_json(&cli.command);
    let mut stdout = std::io::stdout().lock();
    let written = if json {
        let report = RunReport::new(
            args.iter().skip(1).cloned().collect(),
            seed,
            TolerancePolicy::default(),
            outcome.payload,
            start.elapsed().as_millis() as u64,
        );
        report.to_json().map_err(anyhow::Error::from).and_then(|s| Ok(writeln!(stdout, "{s}")?))
    } else {
        writeln!(stdout, "{}", outcome.summary).map_err(anyhow::Error::from)
    };
    match written {
        Ok(()) => outcome.code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_ERROR
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &[&str]) -> Vec<String> {
        std::iter::once("monocert").chain(s.iter().copied()).map(String::from).collect()
    }

    #[test]
    fn help_and_bad_flags() {
        assert_eq!(run(&argv(&["--help"])), EXIT_OK);
        assert_eq!(run(&argv(&["check", "--bogus"])), EXIT_ERROR);
        assert_eq!(run(&argv(&["check", "--map", "nope", "--property", "quasi"])), EXIT_ERROR);
    }

    #[test]
    fn check_exit_codes() {
        let ok = argv(&["check", "--map", "identity-2d", "--property", "monotone", "--budget", "500"]);
        assert_eq!(run(&ok), EXIT_OK);
        let bad = argv(&["check", "--map", "saddle-2d", "--property", "quasi", "--budget", "2000"]);
        assert_eq!(run(&bad), EXIT_NEGATIVE);
    }
}
