mod table;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gessel_core::kernel;
use gessel_core::laurent::format_rational;
use gessel_core::oracle;
use gessel_core::series::constant_coefficients;
use gessel_core::verify;
use gessel_core::walks::{self, Constraint};
use gessel_core::{unique_factorization, ExponentKey, Grading, StepSet};
use serde::Serialize;

use table::{Format, Table};

/// Exact lattice-walk generating functions and their factorizations.
#[derive(Parser, Debug)]
#[command(name = "gessel", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Output encoding (`verify` defaults to a text report).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct Walk {
    /// Steps as "dx,dy[:mark];..." e.g. "0,1;0,-1;1,0;-1,0".
    #[arg(long)]
    steps: StepSet,

    /// Truncation order in t.
    #[arg(long)]
    trunc: usize,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Generating function of walks, optionally constrained.
    Gf {
        #[command(flatten)]
        walk: Walk,
        #[arg(long = "constraint")]
        constraints: Vec<Constraint>,
    },
    /// Slit-plane series from the factorization of the bilateral series.
    Slit {
        #[command(flatten)]
        walk: Walk,
        #[arg(long, value_enum, default_value = "s0")]
        part: SlitPart,
    },
    /// Half-plane walks avoiding the half line and the n-fold count relation.
    Halfplane {
        #[command(flatten)]
        walk: Walk,
        #[arg(long, value_enum, default_value = "jplus")]
        part: HalfPart,
    },
    /// Axis-ending walks in the strip -d <= y (<= f) and their factors.
    Strip {
        #[command(flatten)]
        walk: Walk,
        #[arg(short = 'd', long = "lower", default_value_t = 0)]
        d: i32,
        #[arg(short = 'f', long = "upper")]
        f: Option<i32>,
    },
    /// Paths with steps (1,r), (1,-1) that stay weakly above the axis and end on it.
    Catalan {
        #[arg(long, default_value_t = 1)]
        r: u32,
        #[arg(long)]
        trunc: usize,
    },
    /// Kernel-method model with its closed-form comparisons.
    Kernel {
        #[arg(long, value_enum, default_value = "q2")]
        model: KernelModel,
        #[arg(long)]
        trunc: usize,
    },
    /// Three-part factorization of a walk series under a grading.
    Factor {
        #[command(flatten)]
        walk: Walk,
        /// x, y, mark, or "a,b" for the functional a*i + b*j.
        #[arg(long, default_value = "x")]
        grading: Grading,
        #[arg(long, value_enum, default_value = "free")]
        monoid: Monoid,
        #[arg(long = "constraint")]
        constraints: Vec<Constraint>,
    },
    /// Brute-force walk counts by endpoint.
    Oracle {
        #[command(flatten)]
        walk: Walk,
        #[arg(long = "constraint")]
        constraints: Vec<Constraint>,
    },
    /// Recompute every identity at the given order and report.
    Verify {
        #[arg(long, default_value_t = 8)]
        trunc: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SlitPart {
    S0,
    Binv,
    Sxyt,
    Sx,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum HalfPart {
    Jplus,
    J0,
    H0,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelModel {
    Q2,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Monoid {
    /// All walks.
    Free,
    /// Walks ending on the x-axis.
    Axis,
}

/// A command's output and the checks it asserted that did not hold.
struct Outcome {
    table: Table,
    failed: Vec<String>,
}

impl From<Table> for Outcome {
    fn from(table: Table) -> Self {
        Outcome {
            table,
            failed: Vec::new(),
        }
    }
}

fn constraint_label(cons: &[Constraint]) -> String {
    if cons.is_empty() {
        String::new()
    } else {
        let c: Vec<String> = cons.iter().map(Constraint::to_string).collect();
        format!(" constraints={}", c.join(","))
    }
}

fn slit(walk: &Walk, part: SlitPart) -> Result<Outcome> {
    let res = walks::slitplane(&walk.steps, walk.trunc);
    let (name, s) = match part {
        SlitPart::S0 => ("s0", &res.s0),
        SlitPart::Binv => ("binv", &res.binv),
        SlitPart::Sxyt => ("sxyt", &res.sxyt),
        SlitPart::Sx => ("sx", &res.sx),
    };
    let mut table = Table::new(format!("slit/{name} steps={}", walk.steps), walk.trunc);
    table.push_series(None, s);
    let mut failed = Vec::new();
    if !res.bilateral_identity() {
        failed.push("S0 * Binv != Sx".into());
    }
    Ok(Outcome { table, failed })
}

#[derive(Serialize)]
struct HalfRow {
    n: usize,
    restricted: String,
    unrestricted: String,
    holds: bool,
}

fn halfplane(walk: &Walk, part: HalfPart) -> Result<Outcome> {
    let h = walks::halfplane_halfline(&walk.steps, walk.trunc)?;
    let (name, s) = match part {
        HalfPart::Jplus => ("jplus", &h.jplus),
        HalfPart::J0 => ("j0", &h.j0),
        HalfPart::H0 => ("h0", &h.h0),
    };
    let rows: Vec<HalfRow> = h
        .rows
        .iter()
        .map(|r| HalfRow {
            n: r.n,
            restricted: format_rational(&r.restricted),
            unrestricted: format_rational(&r.unrestricted),
            holds: r.holds(),
        })
        .collect();
    let mut table = Table::new(format!("halfplane/{name} steps={}", walk.steps), walk.trunc)
        .with("p", h.p)?
        .with("checks", &rows)?;
    table.push_series(None, s);
    let mut failed: Vec<String> = rows
        .iter()
        .filter(|r| !r.holds)
        .map(|r| {
            format!(
                "n = {}: {} * {} != {}",
                r.n, r.n, r.restricted, r.unrestricted
            )
        })
        .collect();
    if !h.h0_routes_agree {
        failed.push("H0 from the constrained recurrence differs from the zero factor".into());
    }
    Ok(Outcome { table, failed })
}

fn strip(walk: &Walk, d: i32, f: Option<i32>) -> Result<Outcome> {
    let cons = walks::strip_constraints(d, f);
    for c in &cons {
        if let Constraint::LowerY(v) | Constraint::UpperY(v) = c {
            if *v < 0 {
                bail!("strip bounds must be nonnegative, got {c}");
            }
        }
    }
    let res = walks::strip_models(&walk.steps, d, f, walk.trunc)?;
    let mut table = Table::new(
        format!("strip steps={}{}", walk.steps, constraint_label(&cons)),
        walk.trunc,
    );
    table.push_series(Some("gamma"), &res.gamma_h);
    table.push_series(Some("minus"), &res.factors.minus);
    table.push_series(Some("zero"), &res.factors.zero);
    table.push_series(Some("plus"), &res.factors.plus);
    let mut failed = Vec::new();
    if res.factors.product() != res.gamma_h {
        failed.push("minus * zero * plus != Gamma(H)".into());
    }
    Ok(Outcome { table, failed })
}

fn catalan(r: u32, trunc: usize) -> Result<Outcome> {
    if r == 0 {
        bail!("--r must be at least 1");
    }
    let f = walks::rary_family(r, trunc);
    let mut table = Table::new(format!("catalan r={r}"), trunc);
    table.push_series(None, &f);
    let mut failed = Vec::new();
    if !walks::rary_residual(&f, r).is_zero() {
        failed.push(format!("F != 1 + t^{} F^{}", r + 1, r + 1));
    }
    Ok(Outcome { table, failed })
}

#[derive(Serialize)]
struct Comparison {
    n: usize,
    verified: String,
    sp0: String,
    oracle: String,
    closed_form: String,
    status: &'static str,
}

#[derive(Serialize)]
struct Discrepancy {
    n: usize,
    literal: String,
    verified: String,
    status: &'static str,
}

fn kernel_q2(trunc: usize) -> Result<Outcome> {
    let steps = verify::q2_steps();
    let s10 = kernel::q2_s10(trunc)?;
    let sp = constant_coefficients(&walks::sp0(&steps, 1, trunc)?);
    let counts = oracle::enumerate(&steps, &[Constraint::AvoidHalfLine], trunc);
    let closed = kernel::closed_form_a10_table(trunc);
    let mut failed = Vec::new();
    let mut comparison = Vec::new();
    for (n, v) in constant_coefficients(&s10).iter().enumerate() {
        let o = counts.get(1, 0, n).to_string();
        if format_rational(v) != o || *v != sp[n] {
            failed.push(format!("n = {n}: S10 {v}, sp0 {}, oracle {o}", sp[n]));
        }
        let Some(c) = n.checked_sub(1).and_then(|i| closed.get(i)) else {
            continue;
        };
        comparison.push(Comparison {
            n,
            verified: format_rational(v),
            sp0: format_rational(&sp[n]),
            oracle: o,
            closed_form: format_rational(c),
            status: if c == v { "agree" } else { "known-mismatch" },
        });
    }
    let y_expansion: Vec<Discrepancy> = kernel::y_expansion_mismatches(trunc)?
        .into_iter()
        .map(|m| Discrepancy {
            n: m.n,
            literal: m.literal,
            verified: m.verified,
            status: "known-mismatch",
        })
        .collect();
    let mut table = Table::new(format!("kernel/q2 steps={steps}"), trunc)
        .with("comparison", &comparison)?
        .with("y_expansion", &y_expansion)?;
    let at_10 = s10.map(|c| {
        gessel_core::LaurentPoly::monomial(ExponentKey::xy(1, 0), c.coeff(&ExponentKey::ZERO))
    });
    table.push_series(None, &at_10);
    Ok(Outcome { table, failed })
}

fn factor(walk: &Walk, grading: Grading, monoid: Monoid, cons: &[Constraint]) -> Result<Outcome> {
    let mut h = walks::gf_constrained(&walk.steps, cons, walk.trunc);
    if let Monoid::Axis = monoid {
        h = h.project(gessel_core::Part::Constant, Grading::Y);
    }
    let f = unique_factorization(&h, grading)?;
    let mut table = Table::new(
        format!(
            "factor/{} grading={grading} steps={}{}",
            match monoid {
                Monoid::Free => "free",
                Monoid::Axis => "axis",
            },
            walk.steps,
            constraint_label(cons)
        ),
        walk.trunc,
    );
    table.push_series(Some("minus"), &f.minus);
    table.push_series(Some("zero"), &f.zero);
    table.push_series(Some("plus"), &f.plus);
    let mut failed = Vec::new();
    if f.product() != h {
        failed.push("minus * zero * plus != H".into());
    }
    Ok(Outcome { table, failed })
}

#[derive(Serialize)]
struct CheckRow<'a> {
    name: &'a str,
    status: String,
    detail: &'a str,
}

fn run_verify(trunc: usize, fmt: Option<Format>, out: &mut dyn Write) -> Result<bool> {
    let report = verify::run(trunc);
    let rows: Vec<CheckRow> = report
        .outcomes
        .iter()
        .map(|o| CheckRow {
            name: &o.name,
            status: o.status.to_string().to_lowercase(),
            detail: &o.detail,
        })
        .collect();
    match fmt {
        None => writeln!(out, "{report}")?,
        Some(Format::Json) => {
            #[derive(Serialize)]
            struct Doc<'a> {
                trunc: usize,
                passed: bool,
                checks: &'a [CheckRow<'a>],
            }
            let doc = Doc {
                trunc,
                passed: report.passed(),
                checks: &rows,
            };
            serde_json::to_writer_pretty(&mut *out, &doc)?;
            writeln!(out)?;
        }
        Some(Format::Csv) => {
            let mut c = csv::Writer::from_writer(&mut *out);
            for r in &rows {
                c.serialize(r)?;
            }
            c.flush()?;
        }
    }
    Ok(report.passed())
}

fn run(cli: Cli) -> Result<bool> {
    let mut out: Box<dyn Write> = match &cli.out {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    let outcome = match &cli.cmd {
        Cmd::Verify { trunc } => {
            let ok = run_verify(*trunc, cli.format, &mut out)?;
            out.flush()?;
            return Ok(ok);
        }
        Cmd::Gf { walk, constraints } => {
            let mut t = Table::new(
                format!("gf steps={}{}", walk.steps, constraint_label(constraints)),
                walk.trunc,
            );
            t.push_series(
                None,
                &walks::gf_constrained(&walk.steps, constraints, walk.trunc),
            );
            Outcome::from(t)
        }
        Cmd::Oracle { walk, constraints } => {
            let mut t = Table::new(
                format!(
                    "oracle steps={}{}",
                    walk.steps,
                    constraint_label(constraints)
                ),
                walk.trunc,
            );
            t.push_counts(&oracle::enumerate(&walk.steps, constraints, walk.trunc));
            Outcome::from(t)
        }
        Cmd::Slit { walk, part } => slit(walk, *part)?,
        Cmd::Halfplane { walk, part } => halfplane(walk, *part)?,
        Cmd::Strip { walk, d, f } => strip(walk, *d, *f)?,
        Cmd::Catalan { r, trunc } => catalan(*r, *trunc)?,
        Cmd::Kernel {
            model: KernelModel::Q2,
            trunc,
        } => kernel_q2(*trunc)?,
        Cmd::Factor {
            walk,
            grading,
            monoid,
            constraints,
        } => factor(walk, *grading, *monoid, constraints)?,
    };
    outcome
        .table
        .write(cli.format.unwrap_or(Format::Json), &mut out)?;
    out.flush()?;
    for f in &outcome.failed {
        eprintln!("check failed: {f}");
    }
    Ok(outcome.failed.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
