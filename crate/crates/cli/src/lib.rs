//! Command-line frontend. Exit codes: 0 success / all-pass, 1 usage error,
//! 2 numerical failure (bracket or budget), 3 audit failure.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Once;

use clap::{Parser, Subcommand, ValueEnum};

use latticephase_core::audit::{audit, audit_all, default_grid, AxisSpec, GridSpec, LemmaId,
    AuditReport, NUMERICAL_CHECK_BANNER};
use latticephase_core::energy::{evaluate, Method, PotentialSpec};
use latticephase_core::halfplane::reduce_to_fundamental;
use latticephase_core::solver::{
    global_minimize, phase_diagram, solve_alpha_a, solve_alpha_b, thresholds_for_gamma, y_alpha,
    Mode, PhaseLabel, ThresholdReport,
};
use latticephase_core::{Error, HalfPlanePoint, TruncationBudget};

#[derive(Parser)]
#[command(name = "latticephase", version, about = "Lattice energies on the upper half-plane")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Evaluation tolerance (certified tail target), in (0, 1e-2]
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,

    /// Upper cap of the rectangular search range (>= 2)
    #[arg(long, global = true, default_value_t = 4.0)]
    y_max: f64,

    /// Significant digits printed
    #[arg(long, global = true, default_value_t = 10)]
    digits: usize,

    /// Output format for tabular results
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write tabular output to this path instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Guided,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate an energy at one point; prints value and tail bound
    Eval {
        /// theta | m | w2 | gamma:<g>
        #[arg(long)]
        spec: String,
        #[arg(long)]
        alpha: f64,
        /// Point as X,Y
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Reduce a point to the fundamental domain; prints point and word
    Reduce {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Global minimization at one alpha
    Minimize {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        alpha: f64,
        /// full (scan) or guided (boundary comparison; M only)
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Solve the transition thresholds
    Thresholds {
        /// Weight offset of the (|P|^2 + gamma) family
        #[arg(long)]
        gamma: Option<f64>,
    },
    /// Sweep alpha and emit one row per value: alpha,label,x,y,energy
    PhaseDiagram {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        alpha_from: f64,
        #[arg(long)]
        alpha_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Rectangular-branch curve: alpha,y_alpha
    CurveYalpha {
        #[arg(long)]
        alpha_from: f64,
        #[arg(long)]
        alpha_to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Run lemma audits; exit 0 iff all pass
    Audit {
        /// Single catalogue entry by id (default: all)
        #[arg(long)]
        lemma: Option<String>,
        #[arg(long)]
        all: bool,
        /// Grid override aLO:aHI:aN,xLO:xHI:xN,yLO:yHI:yN (with --lemma)
        #[arg(long)]
        grid: Option<String>,
        /// Multiply default grid node counts
        #[arg(long, default_value_t = 1.0)]
        grid_scale: f64,
    },
}

fn init_threads() {
    static ONCE: Once = Once::new();
    ONCE.call_once(|| {
        if let Ok(v) = std::env::var("LATTICEPHASE_THREADS") {
            if let Ok(n) = v.parse::<usize>() {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
            }
        }
    });
}

/// Run with the given arguments (without argv[0]); all regular output goes to
/// `out`, errors to stderr. Returns the process exit code.
pub fn run(args: &[String], out: &mut dyn Write) -> i32 {
    init_threads();
    let mut argv = vec!["latticephase".to_string()];
    argv.extend_from_slice(args);
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            // clap renders --help/--version as "errors" with success status
            if e.use_stderr() {
                eprintln!("{e}");
                return 1;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    if !(cli.tol > 0.0 && cli.tol <= 1e-2) {
        eprintln!("error: --tol must lie in (0, 1e-2]");
        return 1;
    }
    if !(cli.y_max >= 2.0) {
        eprintln!("error: --y-max must be >= 2");
        return 1;
    }
    match dispatch(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::InvalidInput(_) | Error::InvalidTensor(_) | Error::Hypothesis { .. } => 1,
                _ => 2,
            }
        }
    }
}

fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    let dec = digits as i32 - 1 - exp;
    if dec <= 0 {
        let p = 10f64.powi(-dec);
        format!("{}", (x / p).round() * p)
    } else {
        let s = format!("{:.*}", dec as usize, x);
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_string()
        }
    }
}

fn parse_point(s: &str) -> Result<HalfPlanePoint, Error> {
    let (xs, ys) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidInput(format!("expected X,Y, got '{s}'")))?;
    let x: f64 = xs.trim().parse().map_err(|_| Error::InvalidInput(format!("bad x '{xs}'")))?;
    let y: f64 = ys.trim().parse().map_err(|_| Error::InvalidInput(format!("bad y '{ys}'")))?;
    HalfPlanePoint::new(x, y)
}

fn parse_spec(s: &str) -> Result<PotentialSpec, Error> {
    match s {
        "theta" => Ok(PotentialSpec::theta()),
        "m" => Ok(PotentialSpec::m()),
        "w2" => Ok(PotentialSpec::w2()),
        _ => {
            if let Some(g) = s.strip_prefix("gamma:") {
                let g: f64 =
                    g.parse().map_err(|_| Error::InvalidInput(format!("bad gamma '{g}'")))?;
                PotentialSpec::m_plus_gamma(g)
            } else {
                Err(Error::InvalidInput(format!(
                    "unknown spec '{s}' (expected theta|m|w2|gamma:<g>)"
                )))
            }
        }
    }
}

fn parse_grid(s: &str) -> Result<GridSpec, Error> {
    let axes: Vec<&str> = s.split(',').collect();
    if axes.len() != 3 {
        return Err(Error::InvalidInput("grid override needs three axes".into()));
    }
    let mut parsed = Vec::new();
    for a in axes {
        let parts: Vec<&str> = a.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::InvalidInput(format!("axis '{a}' must be LO:HI:N")));
        }
        let lo: f64 =
            parts[0].parse().map_err(|_| Error::InvalidInput(format!("bad axis lo '{a}'")))?;
        let hi: f64 =
            parts[1].parse().map_err(|_| Error::InvalidInput(format!("bad axis hi '{a}'")))?;
        let n: usize =
            parts[2].parse().map_err(|_| Error::InvalidInput(format!("bad axis steps '{a}'")))?;
        parsed.push(AxisSpec::range(lo, hi, n));
    }
    Ok(GridSpec { alpha: parsed[0], x: parsed[1], y: parsed[2] })
}

fn label_point(label: &PhaseLabel, point: &HalfPlanePoint, digits: usize) -> String {
    format!("{} {},{}", label.name(), fmt_sig(point.x(), digits), fmt_sig(point.y(), digits))
}

fn write_payload(cli: &Cli, out: &mut dyn Write, payload: &str) -> Result<(), Error> {
    match &cli.output {
        Some(path) => fs::write(path, payload)
            .map_err(|e| Error::InvalidInput(format!("cannot write {}: {e}", path.display()))),
        None => {
            let _ = out.write_all(payload.as_bytes());
            Ok(())
        }
    }
}

fn threshold_detail(r: &ThresholdReport, digits: usize) -> String {
    format!(
        "{:?} residual={:.3e} bracket=({},{}) iterations={} form={:?}",
        r.name,
        r.residual,
        fmt_sig(r.bracket.0, digits),
        fmt_sig(r.bracket.1, digits),
        r.iterations,
        r.residual_form
    )
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<i32, Error> {
    let d = cli.digits;
    match &cli.cmd {
        Cmd::Eval { spec, alpha, z } => {
            let spec = parse_spec(spec)?;
            let z = parse_point(z)?;
            let budget =
                TruncationBudget { abs_tol: cli.tol * 1e-2, rel_tol: cli.tol, max_terms: 200_000 };
            let method = if spec.k() == 2 { Method::Direct } else { Method::Reduced1d };
            let ev = evaluate(&spec, *alpha, &z, &budget, method)?;
            let _ = writeln!(
                out,
                "value={} tail_bound={:.3e}",
                fmt_sig(ev.value.value, d),
                ev.value.tail_bound
            );
            Ok(0)
        }
        Cmd::Reduce { z } => {
            let z = parse_point(z)?;
            let (r, word) = reduce_to_fundamental(z)?;
            let _ = writeln!(out, "{},{}  {}", fmt_sig(r.x(), d), fmt_sig(r.y(), d), word);
            Ok(0)
        }
        Cmd::Minimize { spec, alpha, mode } => {
            let spec = parse_spec(spec)?;
            let mode = match mode {
                Some(ModeArg::Full) => Mode::FullScan,
                Some(ModeArg::Guided) => Mode::TheoryGuided,
                None => {
                    if spec == PotentialSpec::m() {
                        Mode::TheoryGuided
                    } else {
                        Mode::FullScan
                    }
                }
            };
            let gm = global_minimize(&spec, *alpha, mode, cli.y_max)?;
            let _ = writeln!(
                out,
                "{} energy={}",
                label_point(&gm.label, &gm.point, d),
                fmt_sig(gm.value, d)
            );
            if let Some((label, point)) = &gm.co_minimizer {
                let _ = writeln!(out, "co-minimizer: {}", label_point(label, point, d));
            }
            if gm.hit_y_max {
                let _ = writeln!(out, "warning: minimizer at the y_max cap; rerun with larger --y-max");
            }
            Ok(0)
        }
        Cmd::Thresholds { gamma } => match gamma {
            None => {
                let a = solve_alpha_a()?;
                let b = solve_alpha_b()?;
                let _ =
                    writeln!(out, "alpha_a={} alpha_b={}", fmt_sig(a.value, d), fmt_sig(b.value, d));
                let _ = writeln!(out, "{}", threshold_detail(&a, d));
                let _ = writeln!(out, "{}", threshold_detail(&b, d));
                Ok(0)
            }
            Some(g) => {
                let (g1, g2) = thresholds_for_gamma(*g)?;
                let _ = writeln!(
                    out,
                    "alpha_g1={} alpha_g2={}",
                    fmt_sig(g1.value, d),
                    fmt_sig(g2.value, d)
                );
                let _ = writeln!(out, "{}", threshold_detail(&g1, d));
                let _ = writeln!(out, "{}", threshold_detail(&g2, d));
                let _ = writeln!(
                    out,
                    "note: alpha_g1 solves the gamma-weighted square-stability equation \
                     (artifact-chosen criterion; the source states existence only)"
                );
                Ok(0)
            }
        },
        Cmd::PhaseDiagram { spec, alpha_from, alpha_to, steps, mode } => {
            let spec = parse_spec(spec)?;
            if *steps == 0 || !(alpha_from > &0.0) || alpha_to < alpha_from {
                return Err(Error::InvalidInput("need 0 < alpha_from <= alpha_to, steps >= 1".into()));
            }
            let mode = match mode {
                Some(ModeArg::Full) => Mode::FullScan,
                Some(ModeArg::Guided) => Mode::TheoryGuided,
                None => {
                    if spec == PotentialSpec::m() {
                        Mode::TheoryGuided
                    } else {
                        Mode::FullScan
                    }
                }
            };
            let alphas: Vec<f64> = if *steps == 1 {
                vec![*alpha_from]
            } else {
                (0..*steps)
                    .map(|i| alpha_from + (alpha_to - alpha_from) * i as f64 / (*steps - 1) as f64)
                    .collect()
            };
            let rows = phase_diagram(&spec, &alphas, mode, cli.y_max)?;
            let payload = match cli.format {
                Format::Csv => {
                    let mut s = String::from("alpha,label,x,y,energy\n");
                    for r in &rows {
                        s.push_str(&format!(
                            "{},{},{},{},{}\n",
                            fmt_sig(r.alpha, d),
                            r.label.name(),
                            fmt_sig(r.minimizer.x(), d),
                            fmt_sig(r.minimizer.y(), d),
                            fmt_sig(r.energy, d)
                        ));
                    }
                    s
                }
                Format::Json => serde_json::to_string_pretty(&rows).unwrap() + "\n",
            };
            write_payload(cli, out, &payload)?;
            Ok(0)
        }
        Cmd::CurveYalpha { alpha_from, alpha_to, steps } => {
            if *steps == 0 {
                return Err(Error::InvalidInput("steps must be >= 1".into()));
            }
            let mut rows = Vec::new();
            for i in 0..*steps {
                let a = if *steps == 1 {
                    *alpha_from
                } else {
                    alpha_from + (alpha_to - alpha_from) * i as f64 / (*steps - 1) as f64
                };
                rows.push((a, y_alpha(a)?));
            }
            let payload = match cli.format {
                Format::Csv => {
                    let mut s = String::from("alpha,y_alpha\n");
                    for (a, y) in &rows {
                        s.push_str(&format!("{},{}\n", fmt_sig(*a, d), fmt_sig(*y, d)));
                    }
                    s
                }
                Format::Json => {
                    let v: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(a, y)| serde_json::json!({"alpha": a, "y_alpha": y}))
                        .collect();
                    serde_json::to_string_pretty(&v).unwrap() + "\n"
                }
            };
            write_payload(cli, out, &payload)?;
            Ok(0)
        }
        Cmd::Audit { lemma, all, grid, grid_scale } => {
            let reports: Vec<AuditReport> = match (lemma, all) {
                (Some(_), true) => {
                    return Err(Error::InvalidInput("pass either --lemma or --all, not both".into()))
                }
                (Some(name), false) => {
                    let id = LemmaId::from_name(name).ok_or_else(|| {
                        Error::InvalidInput(format!(
                            "unknown lemma '{name}'; known: {}",
                            LemmaId::ALL.map(|l| l.name()).join(", ")
                        ))
                    })?;
                    let g = match grid {
                        Some(s) => parse_grid(s)?,
                        None => default_grid(id).refined(*grid_scale),
                    };
                    vec![audit(id, &g)?]
                }
                (None, _) => {
                    if grid.is_some() {
                        return Err(Error::InvalidInput("--grid needs --lemma".into()));
                    }
                    if *grid_scale != 1.0 {
                        LemmaId::ALL
                            .iter()
                            .map(|&l| audit(l, &default_grid(l).refined(*grid_scale)))
                            .collect::<Result<Vec<_>, _>>()?
                    } else {
                        audit_all()?
                    }
                }
            };
            if cli.format == Format::Json {
                let payload = serde_json::to_string_pretty(&reports).unwrap() + "\n";
                write_payload(cli, out, &payload)?;
            } else {
                let _ = writeln!(out, "# {NUMERICAL_CHECK_BANNER}");
                for r in &reports {
                    let _ = writeln!(
                        out,
                        "{} {} min_margin={:.6e} worst=({},{},{}) bound={} nodes={}",
                        r.lemma.name(),
                        if r.pass { "PASS" } else { "FAIL" },
                        r.min_margin,
                        fmt_sig(r.worst_point[0], 8),
                        fmt_sig(r.worst_point[1], 8),
                        fmt_sig(r.worst_point[2], 8),
                        fmt_sig(r.claimed_bound, 10),
                        r.nodes
                    );
                }
            }
            if reports.iter().all(|r| r.pass) {
                Ok(0)
            } else {
                Ok(3)
            }
        }
    }
}
