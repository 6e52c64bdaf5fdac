//! Command-line front end.
//!
//! Exit codes: 0 no violation found, 1 internal failure, 2 input error or
//! guard refusal, 3 violation certified.

mod file;
mod reproduce;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipartite::{bipartite_block_check, bipartite_compatible, bipartite_inequality_check, omega, pinsker_bound};
use crate::combinatorics::enumerate_partitions;
use crate::error::Error;
use crate::keyl::{
    discrimination_bound, discrimination_constant, discrimination_ratio, keyl_divergence, kl_divergence,
    lambda_sequence, KeylContext,
};
use crate::limits::Limits;
use crate::parallel::Execution;
use crate::random::DEFAULT_SEED;
use crate::scenario::{MarginalScenario, ProductState, ScenarioClass};
use crate::witness::{
    check_order_n, check_ortho_count, definetti_validate, find_min_violating_order, CheckOptions, DEFAULT_TOL,
};

pub use file::{matrix_from_rows, rows_from_matrix, ComplexRows, ScenarioFile, StatePairFile, SubsystemSpec};
pub use reproduce::{reproduce, ReproLine, REPRODUCE_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

/// Version of the `--json` output layout.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Parser)]
#[command(name = "qmarginal", version, about = "Operator-inequality witnesses for the quantum marginal problem")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Emit JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest n·m whose symmetric group is enumerated.
    #[arg(long, global = true, default_value_t = 8)]
    pub max_nm: usize,
    /// Largest dense matrix dimension.
    #[arg(long, global = true, default_value_t = 4096)]
    pub max_dense: usize,
    /// Run single-threaded.
    #[arg(long, global = true)]
    pub sequential: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test ρ^{⊗n} ≤ W_n for the states in a scenario file.
    Check {
        file: PathBuf,
        /// Check a single order (default 1).
        #[arg(long, conflicts_with = "scan")]
        order: Option<usize>,
        /// Check orders 1..=N, stopping at the first violation.
        #[arg(long, value_name = "N")]
        scan: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Print the worked examples with their closed-form values.
    Reproduce,
    /// Keyl divergence and discrimination ratios for a {rho, sigma} file.
    Keyl {
        file: PathBuf,
        #[arg(long, default_value_t = 20)]
        n_max: u64,
    },
    /// Monte-Carlo de Finetti estimate of W_n from Haar-random joint states.
    Definetti {
        file: PathBuf,
        #[arg(long, visible_alias = "n", default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Test the bound on the number of orthogonal joint states.
    Ortho {
        file: PathBuf,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Two-party scenario (A, B): spectra, Ω and the Schur inequalities.
    Bipartite {
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        order: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
}

struct Outcome {
    text: String,
    json: Value,
    violated: bool,
}

impl GlobalArgs {
    fn limits(&self) -> Limits {
        Limits {
            max_nm: self.max_nm,
            max_dense: self.max_dense,
            ..Limits::default()
        }
    }

    fn exec(&self) -> Execution {
        if self.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        }
    }

    fn options(&self, tol: f64) -> CheckOptions {
        CheckOptions {
            tol,
            exec: self.exec(),
            limits: self.limits(),
            ..Default::default()
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Input(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(MarginalScenario, Option<ProductState>), Error> {
    let f = ScenarioFile::parse(&read(path)?)?;
    let s = f.scenario()?;
    let p = f.product_state(&s)?;
    Ok((s, p))
}

fn load_with_states(path: &Path) -> Result<(MarginalScenario, ProductState), Error> {
    match load(path)? {
        (s, Some(p)) => Ok((s, p)),
        (_, None) => Err(Error::Input(format!("{}: this command needs \"states\"", path.display()))),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn cmd_check(g: &GlobalArgs, file: &Path, order: Option<usize>, scan: Option<usize>, tol: f64) -> Result<Outcome, Error> {
    let (s, p) = load_with_states(file)?;
    let opts = g.options(tol);
    let header = format!("scenario {s} ({})\n", s.classify());
    if let Some(n_max) = scan {
        let outcome = find_min_violating_order(&s, &p, n_max, &opts)?;
        let mut text = header;
        for r in &outcome.reports {
            text.push_str(&format!("{r}\n"));
        }
        text.push_str(&format!("{outcome}\n"));
        return Ok(Outcome {
            json: json!({ "scenario": s.to_string(), "scan": to_value(&outcome) }),
            violated: outcome.first_violation.is_some(),
            text,
        });
    }
    let n = order.unwrap_or(1);
    let r = check_order_n(&s, &p, n, &opts)?;
    let verdict = if r.violated {
        format!("incompatible: violation certified at n={n}")
    } else {
        format!("inconclusive at n={n}")
    };
    Ok(Outcome {
        text: format!("{header}{r}\n{verdict}\n"),
        json: json!({ "scenario": s.to_string(), "report": to_value(&r) }),
        violated: r.violated,
    })
}

fn cmd_reproduce(g: &GlobalArgs) -> Result<Outcome, Error> {
    let lines = reproduce(g.exec(), &g.limits())?;
    let mut text = String::new();
    for l in &lines {
        text.push_str(&format!(
            "{:<58} {:>+.15}  expected {:>+.15}  {}\n",
            l.name,
            l.value,
            l.expected,
            if l.matches() { "ok" } else { "MISMATCH" }
        ));
    }
    Ok(Outcome {
        json: json!({ "lines": to_value(&lines) }),
        violated: false,
        text,
    })
}

#[derive(Serialize)]
struct KeylRow {
    n: u64,
    lambda: Vec<usize>,
    ratio: f64,
    bound: f64,
    within: bool,
}

fn cmd_keyl(file: &Path, n_max: u64) -> Result<Outcome, Error> {
    let (rho, sigma) = StatePairFile::parse(&read(file)?)?.states()?;
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    rho.check_density(crate::scenario::DENSITY_TOL)?;
    sigma.check_density(crate::scenario::DENSITY_TOL)?;
    let ctx = KeylContext::new(&rho)?;
    let k = keyl_divergence(&ctx, &sigma)?;
    let s = ctx.spectrum();
    let rotated = ctx.rotate(&sigma)?;
    let diag: Vec<f64> = (0..rotated.dim()).map(|i| rotated.get(i, i).re).collect();
    let classical = kl_divergence(s.values(), &diag);
    let d_s = discrimination_constant(s);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let ratio = discrimination_ratio(&ctx, &sigma, n)?;
        let bound = discrimination_bound(s, k, n);
        rows.push(KeylRow {
            n,
            lambda: lambda_sequence(s, n).parts().to_vec(),
            ratio,
            bound,
            within: ratio <= bound * (1.0 + 1e-9) + 1e-300,
        });
    }
    let mut text = format!(
        "K(rho||sigma) = {k:.12e}\nclassical KL(s || diag U'sigma U) = {classical:.12e}\nD(s) = {d_s:.6e}\n\n{:>4}  {:<20} {:>14} {:>14}\n",
        "n", "lambda", "ratio", "bound"
    );
    for r in &rows {
        text.push_str(&format!(
            "{:>4}  {:<20} {:>14.6e} {:>14.6e}{}\n",
            r.n,
            format!("{:?}", r.lambda),
            r.ratio,
            r.bound,
            if r.within { "" } else { "  EXCEEDS" }
        ));
    }
    Ok(Outcome {
        json: json!({
            "keyl": k,
            "classical_kl": classical,
            "discrimination_constant": d_s,
            "spectrum": s.values(),
            "rows": to_value(&rows),
        }),
        violated: false,
        text,
    })
}

fn cmd_definetti(g: &GlobalArgs, file: &Path, n: usize, samples: u64, seed: u64) -> Result<Outcome, Error> {
    let (s, _) = load(file)?;
    let r = definetti_validate(&s, n, samples, seed, g.exec(), &g.limits())?;
    Ok(Outcome {
        text: format!(
            "scenario {s}, n={n}, samples={samples}, seed={seed}\nnormalization C(nm+d_J-1, nm) = {}\nestimate trace = {:.6}\nrelative Frobenius error = {:.6e}\n",
            r.normalization, r.estimate_trace, r.relative_error
        ),
        json: json!({ "scenario": s.to_string(), "report": to_value(&r) }),
        violated: false,
    })
}

fn cmd_ortho(g: &GlobalArgs, file: &Path, v: usize, n: usize, tol: f64) -> Result<Outcome, Error> {
    let (s, p) = load_with_states(file)?;
    let r = check_ortho_count(&s, &p, v, n, &g.options(tol))?;
    let verdict = if r.violated {
        format!("no {v} mutually orthogonal joint pure states reproduce these marginals")
    } else {
        format!("inconclusive for v={v} at n={n}")
    };
    Ok(Outcome {
        text: format!("scenario {s}, v={v}\n{r}\n{verdict}\n"),
        json: json!({ "scenario": s.to_string(), "v": v, "report": to_value(&r) }),
        violated: r.violated,
    })
}

#[derive(Serialize)]
struct BipartiteRow {
    alpha: Vec<usize>,
    beta: Vec<usize>,
    lhs: f64,
    rhs: f64,
    holds: bool,
}

fn cmd_bipartite(file: &Path, n: usize, tol: f64) -> Result<Outcome, Error> {
    let (s, p) = load_with_states(file)?;
    if s.m() != 2 || s.classify() != ScenarioClass::Disjoint || s.contexts().iter().any(|c| c.len() != 1) {
        return Err(Error::Input(format!("bipartite needs two single-subsystem contexts, got {s}")));
    }
    let (ra, rb) = (&p.factors()[0], &p.factors()[1]);
    let spectrum = |op: &crate::operators::HermitianOperator| -> Result<Vec<f64>, Error> {
        let mut ev = op.eigenvalues()?;
        ev.sort_by(|a, b| b.total_cmp(a));
        Ok(ev)
    };
    let (sa, sb) = (spectrum(ra)?, spectrum(rb)?);
    let compatible = bipartite_compatible(ra, rb, tol)?;
    let om = omega(&sa, &sb, ra.dim().min(rb.dim()));
    let pinsker = pinsker_bound(&sa, &sb);
    let mut rows = Vec::new();
    for alpha in enumerate_partitions(n, ra.dim()) {
        for beta in enumerate_partitions(n, rb.dim()) {
            let c = bipartite_inequality_check(ra, rb, n, &alpha, &beta)?;
            rows.push(BipartiteRow {
                alpha: alpha.parts().to_vec(),
                beta: beta.parts().to_vec(),
                lhs: c.lhs,
                rhs: c.rhs,
                holds: c.holds,
            });
        }
    }
    let block = bipartite_block_check(ra, rb, n, DEFAULT_TOL)?;
    let violated = block.violated || rows.iter().any(|r| !r.holds);
    let mut text = format!(
        "spectra equal within {tol:e}: {compatible}\nOmega = {om:.12e}\nPinsker lower bound = {pinsker:.12e}\n\
         n={n} witness min_eig = {:+.6e} at block {:?} x {:?}  {}\n\n{:<12} {:<12} {:>14} {:>14}\n",
        block.min_eig,
        block.alpha,
        block.beta,
        if block.violated { "VIOLATED" } else { "satisfied" },
        "alpha", "beta", "lhs", "rhs"
    );
    for r in &rows {
        text.push_str(&format!(
            "{:<12} {:<12} {:>14.6e} {:>14.6e}{}\n",
            format!("{:?}", r.alpha),
            format!("{:?}", r.beta),
            r.lhs,
            r.rhs,
            if r.holds { "" } else { "  VIOLATED" }
        ));
    }
    Ok(Outcome {
        json: json!({
            "compatible": compatible,
            "omega": om,
            "pinsker_bound": pinsker,
            "order": n,
            "witness": to_value(&block),
            "rows": to_value(&rows),
        }),
        violated,
        text,
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check { .. } => "check",
        Command::Reproduce => "reproduce",
        Command::Keyl { .. } => "keyl",
        Command::Definetti { .. } => "definetti",
        Command::Ortho { .. } => "ortho",
        Command::Bipartite { .. } => "bipartite",
    }
}

/// Runs a parsed command, writing the report to `out` and errors to `err`.
/// Returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let g = &cli.global;
    let result = match &cli.command {
        Command::Check { file, order, scan, tol } => cmd_check(g, file, *order, *scan, *tol),
        Command::Reproduce => cmd_reproduce(g),
        Command::Keyl { file, n_max } => cmd_keyl(file, *n_max),
        Command::Definetti {
            file,
            order,
            samples,
            seed,
        } => cmd_definetti(g, file, *order, *samples, *seed),
        Command::Ortho { file, v, order, tol } => cmd_ortho(g, file, *v, *order, *tol),
        Command::Bipartite { file, order, tol } => cmd_bipartite(file, *order, *tol),
    };
    let name = command_name(&cli.command);
    match result {
        Ok(o) => {
            let written = if g.json {
                let mut body = json!({ "schema_version": SCHEMA_VERSION, "command": name });
                if let (Value::Object(dst), Value::Object(src)) = (&mut body, o.json) {
                    dst.extend(src);
                }
                writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("values serialize"))
            } else {
                write!(out, "{}", o.text)
            };
            if written.is_err() {
                return EXIT_INTERNAL;
            }
            if o.violated {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            let code = match e {
                Error::EigenFailure => EXIT_INTERNAL,
                _ => EXIT_INPUT,
            };
            if g.json {
                let body = json!({ "schema_version": SCHEMA_VERSION, "command": name, "error": e.to_string() });
                let _ = writeln!(out, "{body}");
            }
            let _ = writeln!(err, "error: {e}");
            code
        }
    }
}
