//! `vknot`: batch invariants and slice-genus bounds for virtual knots given
//! as Gauss codes.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use vknot_cli::{record, table, TabConfig};
use vknot_core::cobordism::{self, SliceCtx};
use vknot_core::graded::{graded_genus, graded_matrix};
use vknot_core::invariants::{f_polynomial, henrich_turaev, odd_writhe, writhe_polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Parser)]
#[command(
    name = "vknot",
    version,
    about = "Invariants and slice-genus bounds for virtual knots",
    disable_help_subcommand = true
)]
struct Cli {
    /// Output format for tabular results.
    #[arg(long, global = true, value_enum, default_value = "csv")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Writhe-type invariants and the f-polynomial for each knot in a table.
    Invariants { file: PathBuf },
    /// The graded genus for each knot in a table.
    GradedGenus {
        file: PathBuf,
        /// Also emit the graded matrix (rows joined by `;`, `s` row first).
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Slice-genus bounds and statuses for each knot in a table.
    SliceBounds(SliceBoundsArgs),
    /// Replay a cobordism movie file and print its certificate.
    VerifyMovie { file: PathBuf },
    /// Summary counts per crossing number from a slice-bounds CSV.
    Summarize { csv: PathBuf },
}

#[derive(Args)]
struct SliceBoundsArgs {
    file: PathBuf,
    /// Known-slice list as `N=path` (knot table of slice knots with N
    /// chords); repeatable.
    #[arg(long = "slice-list", value_name = "N=PATH")]
    slice_list: Vec<String>,
    /// Enable the genus-two pass over pairs of arrow operations.
    #[arg(long)]
    genus2: bool,
    /// Match slice-list entries only verbatim, not up to symmetry.
    #[arg(long)]
    no_symmetry: bool,
    /// Worker threads (default: one per core).
    #[arg(long)]
    jobs: Option<usize>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help / --version
            return emit(&e.to_string());
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// Writes to stdout, treating a closed pipe as success so `vknot ... | head`
/// behaves like any other filter.
fn emit(text: &str) -> ExitCode {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Invariants { file } => invariants_cmd(file, cli.format),
        Command::GradedGenus { file, dump_matrix } => {
            graded_genus_cmd(file, *dump_matrix, cli.format)
        }
        Command::SliceBounds(args) => slice_bounds_cmd(args, cli.format),
        Command::VerifyMovie { file } => verify_movie_cmd(file),
        Command::Summarize { csv } => summarize_cmd(csv, cli.format),
    }
}

#[derive(Serialize)]
struct InvariantRow {
    name: String,
    code: String,
    n: usize,
    writhe: i64,
    odd_writhe: i64,
    writhe_poly: String,
    henrich_poly: String,
    f_poly: String,
}

fn invariants_cmd(file: &Path, format: Format) -> Result<ExitCode> {
    let knots = table::load_table(file)?;
    let mut rows = Vec::new();
    for (name, d) in &knots {
        rows.push(InvariantRow {
            name: name.clone(),
            code: d.display_code(),
            n: d.chord_count(),
            writhe: d.writhe(),
            odd_writhe: odd_writhe(d)?,
            writhe_poly: writhe_polynomial(d)?.render("t"),
            henrich_poly: henrich_turaev(d)?.render("t"),
            f_poly: f_polynomial(d)?.render("A"),
        });
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        Format::Csv => {
            let mut text =
                String::from("name,code,n,writhe,odd_writhe,writhe_poly,henrich_poly,f_poly\n");
            for r in rows {
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.name,
                    r.code,
                    r.n,
                    r.writhe,
                    r.odd_writhe,
                    r.writhe_poly,
                    r.henrich_poly,
                    r.f_poly
                ));
            }
            text
        }
    };
    Ok(emit(&text))
}

#[derive(Serialize)]
struct GradedRow {
    name: String,
    code: String,
    n: usize,
    theta: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<i64>>>,
}

fn graded_genus_cmd(file: &Path, dump_matrix: bool, format: Format) -> Result<ExitCode> {
    let knots = table::load_table(file)?;
    let mut rows = Vec::new();
    for (name, d) in &knots {
        let matrix = if dump_matrix {
            let m = graded_matrix(d)?;
            let dim = m.chord_len() + 1;
            Some(
                (0..dim)
                    .map(|i| (0..dim).map(|j| m.entry(i, j)).collect())
                    .collect::<Vec<Vec<i64>>>(),
            )
        } else {
            None
        };
        rows.push(GradedRow {
            name: name.clone(),
            code: d.display_code(),
            n: d.chord_count(),
            theta: graded_genus(d)?,
            matrix,
        });
    }
    let text = match format {
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
        // Plain text: one `name<TAB>theta` line per knot; with
        // `--dump-matrix`, the beta rows follow (s row first), one row of
        // space-separated integers per line.
        Format::Csv => {
            let mut text = String::new();
            for r in rows {
                text.push_str(&format!("{}\t{}\n", r.name, r.theta));
                if let Some(m) = &r.matrix {
                    for row in m {
                        let line = row
                            .iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" ");
                        text.push_str(&line);
                        text.push('\n');
                    }
                }
            }
            text
        }
    };
    Ok(emit(&text))
}

fn parse_slice_lists(specs: &[String], ctx: &mut SliceCtx) -> Result<()> {
    for spec in specs {
        let (n, path) = spec
            .split_once('=')
            .ok_or_else(|| anyhow!("--slice-list wants N=PATH, found {spec:?}"))?;
        let n: usize = n
            .parse()
            .map_err(|_| anyhow!("--slice-list chord count {n:?} is not a number"))?;
        let knots = table::load_table(&PathBuf::from(path))?;
        let mut codes = Vec::new();
        for (name, d) in &knots {
            if d.chord_count() != n {
                bail!(
                    "{path}: {name} has {} chords, list claims {n}",
                    d.chord_count()
                );
            }
            codes.push(
                d.emit_canonical_code()
                    .with_context(|| format!("{path}: {name}"))?,
            );
        }
        ctx.lists.entry(n).or_default().extend(codes);
    }
    Ok(())
}

fn slice_bounds_cmd(args: &SliceBoundsArgs, format: Format) -> Result<ExitCode> {
    let knots = table::load_table(&args.file)?;
    let mut config = TabConfig::default();
    parse_slice_lists(&args.slice_list, &mut config.ctx)?;
    config.ctx.genus2 = args.genus2;
    config.ctx.use_symmetry = !args.no_symmetry;
    config.jobs = args.jobs;
    let rows = record::tabulate(&knots, &config)?;
    let text = match format {
        Format::Csv => record::records_to_csv(&rows),
        Format::Json => record::records_to_json(&rows)?,
    };
    let code = emit(&text);
    if rows.iter().any(|r| !r.invariants_hold()) {
        eprintln!("error: emitted rows violate interval invariants");
        return Ok(ExitCode::from(2));
    }
    Ok(code)
}

fn verify_movie_cmd(file: &Path) -> Result<ExitCode> {
    let text =
        std::fs::read_to_string(file).with_context(|| format!("cannot read {}", file.display()))?;
    let movie = cobordism::parse_movie(&text)?;
    let out = cobordism::verify_movie(&movie)?;
    let terminal = if out.terminal.is_unknot() {
        "unknot".to_string()
    } else {
        out.terminal.emit_canonical_code()?
    };
    let slice = out.genus == 0 && out.terminal.is_unknot();
    Ok(emit(&format!(
        "genus={} terminal={} slice={}\n",
        out.genus,
        terminal,
        if slice { "yes" } else { "no" }
    )))
}

fn summarize_cmd(csv: &Path, format: Format) -> Result<ExitCode> {
    let text =
        std::fs::read_to_string(csv).with_context(|| format!("cannot read {}", csv.display()))?;
    let rows = record::records_from_csv(&text)?;
    let summary = record::summarize(&rows);
    let out = match format {
        Format::Csv => record::summary_to_csv(&summary),
        Format::Json => record::summary_to_json(&summary)?,
    };
    Ok(emit(&out))
}
