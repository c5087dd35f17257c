//! holocoh: twisted-cohomology checks for SL(2,C) holonomy data.
//!
//! Exit codes: 0 all records pass, 1 at least one verification record fails,
//! 2 input or validation error.

use clap::{Parser, Subcommand, ValueEnum};
use holocoh_core::{
    enumerate_lifts, evaluate_word, h1_report, invariant_pairing, is_positive_lift,
    positivity_certificate, principal_decomposition, reps, resolve, verify_manifold_with_warnings,
    weitzenbock, CorpusEntry, LieAction, PeripheralKind, ReportDocument, Representation,
    ToleranceProfile,
};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "holocoh",
    version,
    about = "Twisted group cohomology of SL(2,C) holonomy representations: dimension checks, lifts, and Weitzenbock positivity"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Compute H^0, Z^1, B^1, H^1 and peripheral restriction ranks.
    Cohomology {
        /// Bundled corpus name (fig8, torus, free2, genus2) or a file path.
        #[arg(long)]
        input: String,
        /// Coefficients: sym:N for the N-dimensional irreducible, adj:N for
        /// the adjoint of it.
        #[arg(long)]
        rep: String,
        /// Index of the lift to use (0 = the stored base lift).
        #[arg(long, default_value_t = 0)]
        lift: usize,
    },
    /// Compare computed cohomology against the predicted dimensions for
    /// every lift and every n in the range.
    Verify {
        #[arg(long)]
        input: String,
        #[arg(long)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Enumerate the lifts of the stored holonomy with their peripheral
    /// trace data and positivity classification.
    Lifts {
        #[arg(long)]
        input: String,
    },
    /// Spectrum and positivity certificate of the curvature operator H on
    /// V_n tensor Lambda^p m*.
    Weitzenbock {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        degree: usize,
    },
    /// Irreducible dimensions of sl(n) under the principal SL(2) embedding.
    Decompose {
        #[arg(long)]
        n: usize,
    },
    /// Gram matrix of the invariant pairing on V_n, with a randomized
    /// invariance residual.
    Pairing {
        #[arg(long)]
        n: usize,
        /// Number of random (g, u, v) invariance samples.
        #[arg(long, default_value_t = 50)]
        check_invariance: usize,
    },
}

fn build_rep(
    entry: &CorpusEntry,
    spec: &str,
    lift_index: usize,
) -> holocoh_core::Result<Representation> {
    let tol = ToleranceProfile::default();
    let lifts = enumerate_lifts(&entry.presentation, &entry.base, &tol)?;
    let lift = lifts.get(lift_index).ok_or_else(|| {
        holocoh_core::Error::Contract(format!(
            "lift index {} out of range; entry has {} lifts",
            lift_index,
            lifts.len()
        ))
    })?;
    let (kind, n) = spec.split_once(':').ok_or_else(|| {
        holocoh_core::Error::Contract(format!(
            "cannot parse --rep '{}'; expected sym:N or adj:N",
            spec
        ))
    })?;
    let n: usize = n.parse().map_err(|_| {
        holocoh_core::Error::Contract(format!("cannot parse dimension in --rep '{}'", spec))
    })?;
    match kind {
        "sym" => reps::sym_power_rep(&lift.rep, n),
        "adj" => reps::adjoint_rep(&reps::sym_power_rep(&lift.rep, n)?),
        other => Err(holocoh_core::Error::Contract(format!(
            "unknown coefficient kind '{}'; expected sym or adj",
            other
        ))),
    }
}

fn cmd_cohomology(input: &str, rep_spec: &str, lift: usize) -> holocoh_core::Result<bool> {
    let tol = ToleranceProfile::default();
    let entry = resolve(input)?;
    let rep = build_rep(&entry, rep_spec, lift)?;
    let report = h1_report(&entry.presentation, &rep, &tol)?;
    println!(
        "entry: {}   coefficients: {}   lift: {}",
        entry.presentation.name, rep_spec, lift
    );
    println!(
        "dim V = {}   h0 = {}   z1 = {}   b1 = {}   h1 = {}",
        report.dim_v, report.dim_h0, report.dim_z1, report.dim_b1, report.dim_h1
    );
    for p in &report.peripherals {
        println!(
            "peripheral #{} ({}): h0 = {}  z1 = {}  b1 = {}  h1 = {}  restriction rank = {}",
            p.index, p.kind, p.dim_h0, p.dim_z1, p.dim_b1, p.dim_h1, p.restriction_rank
        );
    }
    if !report.peripherals.is_empty() {
        println!(
            "restriction H1(M) -> H1(boundary): rank {} ({})",
            report.total_restriction_rank,
            if report.restriction_injective {
                "injective"
            } else {
                "NOT injective"
            }
        );
    }
    let min_gap = report
        .gaps
        .iter()
        .map(|g| g.gap)
        .fold(f64::INFINITY, f64::min);
    println!(
        "smallest spectral gap across rank decisions: {:.2e}",
        min_gap
    );
    for w in &report.warnings {
        println!("warning: {}", w);
    }
    Ok(true)
}

fn cmd_verify(
    input: &str,
    n_min: usize,
    n_max: usize,
    format: Format,
) -> holocoh_core::Result<bool> {
    let tol = ToleranceProfile::default();
    let entry = resolve(input)?;
    let (records, warnings) = verify_manifold_with_warnings(
        &entry.presentation,
        &entry.base,
        n_min,
        n_max,
        &tol,
        entry.kind,
    )?;
    let doc = ReportDocument::new(&entry.presentation.name, tol, records, warnings);
    match format {
        Format::Table => print!("{}", doc.render_table()),
        Format::Json => println!("{}", doc.to_json()?),
    }
    Ok(doc.all_pass())
}

fn cmd_lifts(input: &str) -> holocoh_core::Result<bool> {
    let tol = ToleranceProfile::default();
    let entry = resolve(input)?;
    let lifts = enumerate_lifts(&entry.presentation, &entry.base, &tol)?;
    println!(
        "entry: {}   lifts: {}",
        entry.presentation.name,
        lifts.len()
    );
    for (i, lift) in lifts.iter().enumerate() {
        println!("lift {} (character {}):", i, lift.character);
        for (pi, p) in entry.presentation.peripherals.iter().enumerate() {
            match p.kind {
                PeripheralKind::Torus => {
                    let positive = is_positive_lift(&lift.rep, p)?;
                    for (w, &null) in p.words.iter().zip(&p.null_homologous) {
                        let tr = evaluate_word(&lift.rep, w).trace();
                        println!(
                            "  peripheral #{} word '{}': trace = {:+.6} {:+.6}i{}",
                            pi,
                            w,
                            tr.re,
                            tr.im,
                            if null {
                                "  (null-homologous mod 2)"
                            } else {
                                ""
                            }
                        );
                    }
                    println!(
                        "  peripheral #{}: {}",
                        pi,
                        if positive { "positive" } else { "nonpositive" }
                    );
                }
                PeripheralKind::Genus(g) => {
                    println!(
                        "  peripheral #{}: genus-{} end (no positivity classification)",
                        pi, g
                    );
                }
            }
        }
    }
    Ok(true)
}

fn cmd_weitzenbock(n: usize, degree: usize) -> holocoh_core::Result<bool> {
    let tol = ToleranceProfile::default();
    if degree > 3 {
        return Err(holocoh_core::Error::Contract(format!(
            "degree must be 0..=3, got {}",
            degree
        )));
    }
    let action = LieAction::irreducible(n)?;
    let op = weitzenbock::build_h(&action, degree, &tol)?;
    let cert = positivity_certificate(&action, degree, &tol)?;
    println!(
        "H on V_{} tensor Lambda^{} m*  (dimension {})",
        n,
        degree,
        op.matrix.nrows()
    );
    let spectrum: Vec<String> = op.spectrum.iter().map(|x| format!("{:.12}", x)).collect();
    println!("spectrum (ascending): [{}]", spectrum.join(", "));
    println!(
        "min eigenvalue = {:.12e}   positive (> {:.0e}): {}",
        cert.min_eigenvalue, tol.eig_abs_tol, cert.positive
    );
    Ok(true)
}

fn cmd_decompose(n: usize) -> holocoh_core::Result<bool> {
    let dims = principal_decomposition(n)?;
    let parts: Vec<String> = dims.iter().map(|d| d.to_string()).collect();
    println!("{}", parts.join(" "));
    Ok(true)
}

fn cmd_pairing(n: usize, samples: usize) -> holocoh_core::Result<bool> {
    let form = invariant_pairing(n)?;
    println!(
        "invariant pairing on V_{} (monomial basis, antidiagonal):",
        n
    );
    for i in 0..n {
        let row: Vec<String> = (0..n)
            .map(|j| {
                let v = form.gram[(i, j)].re;
                if v == 0.0 {
                    "0".to_string()
                } else {
                    format!("{:+.6}", v)
                }
            })
            .collect();
        println!("  [{}]", row.join(", "));
    }
    let residual = reps::pairing_invariance_residual(n, samples, 0x9e3779b9)?;
    println!(
        "invariance residual over {} random (g,u,v) samples: {:.3e}",
        samples, residual
    );
    Ok(true)
}

fn run() -> holocoh_core::Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Cohomology { input, rep, lift } => cmd_cohomology(&input, &rep, lift),
        Command::Verify {
            input,
            n_min,
            n_max,
            format,
        } => cmd_verify(&input, n_min, n_max, format),
        Command::Lifts { input } => cmd_lifts(&input),
        Command::Weitzenbock { n, degree } => cmd_weitzenbock(n, degree),
        Command::Decompose { n } => cmd_decompose(n),
        Command::Pairing {
            n,
            check_invariance,
        } => cmd_pairing(n, check_invariance),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
