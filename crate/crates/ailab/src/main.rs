//! Batch front end: builds/caches tables, runs verifications, emits reports.
//!
//! Exit codes: 0 all checks passed, 1 check failures (listed in the report),
//! 2 usage or configuration errors (including desk-scale guard violations).
//!
//! Every verification writes its report plus a run manifest into `--out-dir`;
//! reports are timestamp-free and byte-stable, the manifest carries the
//! wall clock and provenance.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ailab::bits::Bits;
use ailab::complexity::{ComplexityError, Lab};
use ailab::lambalgen::{deficiency_sets, DecoderCostModel, LambalgenError};
use ailab::machine::{machine_fingerprint, Mode};
use ailab::report::{Pins, Report, RunManifest};
use ailab::soi::{build_cell_grid, profile_sweep, SoiError};
use ailab::verify::{
    main_theorem_report, profile_csv, profile_report, soi_verify_report, theorem2_report,
    theorem3_report, witness_report, MAIN_THEOREM_FLOOR_B, MAIN_THEOREM_SLOPE,
};

#[derive(Parser)]
#[command(name = "ailab", about = "desk-scale algorithmic-information laboratory")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Table cache directory (default from AILAB_CACHE_DIR if set)
    #[arg(long, global = true, env = "AILAB_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Program-length bound L for every table
    #[arg(long, global = true, default_value_t = 14)]
    max_len: u32,
    #[arg(long, global = true, default_value_t = 4096)]
    fuel: u64,
    #[arg(long, global = true, default_value_t = 64)]
    output_cap: usize,
    #[arg(long, global = true, value_enum, default_value_t = ModeArg::Plain)]
    mode: ModeArg,
    /// Worker threads for table builds and sweeps (default: all cores)
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = FormatArg::Structured)]
    format: FormatArg,
    /// Pinned-constant file; without it pins are ephemeral to this run
    #[arg(long, global = true)]
    pin_file: Option<PathBuf>,
    /// Allow this run to freeze missing pins (never moves existing ones)
    #[arg(long, global = true)]
    pin: bool,
    /// Where reports and manifests are written
    #[arg(long, global = true, default_value = "ailab-out")]
    out_dir: PathBuf,
}

#[derive(Copy, Clone, ValueEnum)]
enum ModeArg {
    Plain,
    Prefix,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Plain => Mode::Plain,
            ModeArg::Prefix => Mode::PrefixFree,
        }
    }
}

#[derive(Copy, Clone, ValueEnum)]
enum FormatArg {
    Structured,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Complexity table operations
    Table {
        #[command(subcommand)]
        cmd: TableCmd,
    },
    /// Symmetry-of-information sweeps and verifications
    Soi {
        #[command(subcommand)]
        cmd: SoiCmd,
    },
    /// Finite van Lambalgen analogs
    Lambalgen {
        #[command(subcommand)]
        cmd: LambalgenCmd,
    },
    /// The asymmetry example: x = bin(n_y), maximize i_yx − i_xy
    Witness {
        #[arg(long)]
        n_y: usize,
    },
    /// Run every verifier at one n and write all reports
    Report {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum TableCmd {
    /// Build (and cache) the table for one condition
    Build {
        /// Condition item as a 0/1 string; repeat for multi-item conditions
        #[arg(long = "cond")]
        cond: Vec<String>,
    },
    /// Look up one output's complexity
    Query {
        #[arg(long)]
        x: String,
        #[arg(long = "cond")]
        cond: Vec<String>,
    },
}

#[derive(Subcommand)]
enum SoiCmd {
    /// Exhaustive profile sweep over {0,1}^n_x × {0,1}^n_y
    Profile {
        #[arg(long)]
        n_x: usize,
        #[arg(long)]
        n_y: usize,
    },
    /// The cell grid of one pair at its own threshold
    Grid {
        #[arg(long)]
        x: String,
        #[arg(long)]
        y: String,
    },
    /// Counting bounds, chain-rule constant, and round trips at one n
    Verify {
        #[arg(long)]
        n: usize,
    },
    /// The Main Theorem envelope at one length pair
    MainTheorem {
        #[arg(long)]
        n_x: usize,
        #[arg(long)]
        n_y: usize,
    },
}

#[derive(Subcommand)]
enum LambalgenCmd {
    /// Plain-complexity analog: deficiency envelope over thresholds
    VerifyT2 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0,1,2,3")]
        cs: String,
    },
    /// Prefix-free analog: envelope plus the structural case analysis
    VerifyT3 {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "0,1,2,3")]
        cs: String,
        #[arg(long, default_value_t = 10)]
        c1: u32,
        #[arg(long, default_value_t = 12)]
        c2: u32,
    },
    /// Print the deficiency sets A_u(d) and F(d)
    Sets {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: i64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failed,
    Io(std::io::Error),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<ComplexityError> for CliError {
    fn from(e: ComplexityError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<SoiError> for CliError {
    fn from(e: SoiError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<LambalgenError> for CliError {
    fn from(e: LambalgenError) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<ailab::report::ReportError> for CliError {
    fn from(e: ailab::report::ReportError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn parse_bits_arg(s: &str) -> Result<Bits, CliError> {
    s.parse()
        .map_err(|_| CliError::Usage(format!("not a 0/1 string: {s}")))
}

fn parse_cs(s: &str) -> Result<Vec<u32>, CliError> {
    s.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("bad threshold list entry: {p}")))
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.global.workers {
        if rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .is_err()
        {
            eprintln!("error: could not configure {workers} workers");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed) => ExitCode::from(1),
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn make_lab(g: &Global) -> Lab {
    let mut lab = Lab::new(g.max_len)
        .with_fuel(g.fuel)
        .with_output_cap(g.output_cap);
    if let Some(dir) = &g.cache_dir {
        lab = lab.with_cache_dir(dir.clone());
    }
    lab
}

struct Session {
    pins: Pins,
    pin_file: Option<PathBuf>,
    pin_here: bool,
    out_dir: PathBuf,
    started: Instant,
    command: String,
}

impl Session {
    fn open(g: &Global) -> Result<Self, CliError> {
        let pins = match &g.pin_file {
            Some(path) => Pins::load_or_default(path)?,
            None => Pins::new(),
        };
        Ok(Session {
            pins,
            pin_file: g.pin_file.clone(),
            // without a pin file, pins are ephemeral: freeze from this run
            pin_here: g.pin || g.pin_file.is_none(),
            out_dir: g.out_dir.clone(),
            started: Instant::now(),
            command: std::env::args().skip(1).collect::<Vec<_>>().join(" "),
        })
    }

    /// Prints the report, writes it and its manifest, persists pins.
    fn finish(&self, name: &str, report: &Report) -> Result<(), CliError> {
        print!("{}", report.render());
        fs::create_dir_all(&self.out_dir)?;
        fs::write(self.out_dir.join(format!("{name}.report.txt")), report.render())?;
        let manifest = RunManifest {
            command: self.command.clone(),
            params: vec![],
            machine_fingerprint: machine_fingerprint(),
            wall_clock_ms: self.started.elapsed().as_millis(),
            passed: report.passed(),
        };
        fs::write(self.out_dir.join(format!("{name}.manifest.txt")), manifest.render())?;
        if let Some(path) = &self.pin_file {
            if self.pin_here {
                self.pins.save(path)?;
            }
        }
        if report.passed() {
            Ok(())
        } else {
            Err(CliError::Failed)
        }
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let g = &cli.global;
    let lab = make_lab(g);
    match &cli.command {
        Command::Table { cmd } => match cmd {
            TableCmd::Build { cond } => {
                let items = cond
                    .iter()
                    .map(|s| parse_bits_arg(s))
                    .collect::<Result<Vec<_>, _>>()?;
                let condition = ailab::codes::pack_condition(&items);
                let table = lab.table(&condition, g.mode.into())?;
                println!(
                    "table cond={condition} mode={} L={} entries={} max_cost={}",
                    table.key.cfg.mode.as_str(),
                    table.key.max_len,
                    table.len(),
                    table.max_cost
                );
                Ok(())
            }
            TableCmd::Query { x, cond } => {
                let x = parse_bits_arg(x)?;
                let items = cond
                    .iter()
                    .map(|s| parse_bits_arg(s))
                    .collect::<Result<Vec<_>, _>>()?;
                match lab.complexity_of(&x, &items, g.mode.into())? {
                    Some(v) => println!("{v}"),
                    None => println!("ABOVE_BOUND"),
                }
                Ok(())
            }
        },
        Command::Soi { cmd } => match cmd {
            SoiCmd::Profile { n_x, n_y } => match g.format {
                FormatArg::Csv => {
                    let sweep = profile_sweep(&lab, *n_x, *n_y)?;
                    let csv = profile_csv(&sweep.terms, MAIN_THEOREM_SLOPE, MAIN_THEOREM_FLOOR_B);
                    print!("{csv}");
                    fs::create_dir_all(&g.out_dir)?;
                    fs::write(g.out_dir.join("soi-profile.csv"), csv)?;
                    Ok(())
                }
                FormatArg::Structured => {
                    let session = Session::open(g)?;
                    let report = profile_report(&lab, *n_x, *n_y)?;
                    session.finish("soi-profile", &report)
                }
            },
            SoiCmd::Grid { x, y } => {
                let x = parse_bits_arg(x)?;
                let y = parse_bits_arg(y)?;
                let grid = build_cell_grid(&lab, &x, &y)?;
                println!("t={} m={} |S|={} fat_rows={:?}", grid.t, grid.m, grid.s_total, grid.fat_rows);
                for u in 0..1u64 << grid.n_x {
                    let row: String = (0..1u64 << grid.n_y)
                        .map(|v| if grid.cell(u, v) { '1' } else { '0' })
                        .collect();
                    let mark = if u == grid.x_index { " <- x" } else { "" };
                    println!("{row}{mark}");
                }
                Ok(())
            }
            SoiCmd::Verify { n } => {
                let mut session = Session::open(g)?;
                let report = soi_verify_report(&lab, *n, &mut session.pins, session.pin_here)?;
                session.finish("soi-verify", &report)
            }
            SoiCmd::MainTheorem { n_x, n_y } => {
                let mut session = Session::open(g)?;
                let report =
                    main_theorem_report(&lab, *n_x, *n_y, &mut session.pins, session.pin_here)?;
                session.finish("soi-main-theorem", &report)
            }
        },
        Command::Lambalgen { cmd } => match cmd {
            LambalgenCmd::VerifyT2 { n, cs } => {
                let cs = parse_cs(cs)?;
                let mut session = Session::open(g)?;
                let report = theorem2_report(
                    &lab,
                    *n,
                    &cs,
                    &DecoderCostModel::default(),
                    &mut session.pins,
                    session.pin_here,
                )?;
                session.finish("lambalgen-t2", &report)
            }
            LambalgenCmd::VerifyT3 { n, cs, c1, c2 } => {
                let cs = parse_cs(cs)?;
                let costs = DecoderCostModel { c1: *c1, c2: *c2 };
                let mut session = Session::open(g)?;
                let report =
                    theorem3_report(&lab, *n, &cs, &costs, &mut session.pins, session.pin_here)?;
                session.finish("lambalgen-t3", &report)
            }
            LambalgenCmd::Sets { n, d } => {
                let sets = deficiency_sets(&lab, *n, *d)?;
                for (u, a) in &sets.a {
                    let members: Vec<String> = a.iter().map(|v| v.to_string()).collect();
                    println!("A_{u}({d}) = {{{}}}", members.join(", "));
                }
                let f: Vec<String> = sets.f.iter().map(|u| u.to_string()).collect();
                println!("F({d}) = {{{}}}", f.join(", "));
                Ok(())
            }
        },
        Command::Witness { n_y } => {
            let mut session = Session::open(g)?;
            let report = witness_report(&lab, *n_y, &mut session.pins, session.pin_here)?;
            session.finish("witness", &report)
        }
        Command::Report { n } => {
            let mut session = Session::open(g)?;
            let costs = DecoderCostModel::default();
            let reports = vec![
                ("soi-verify", soi_verify_report(&lab, *n, &mut session.pins, session.pin_here)?),
                (
                    "soi-main-theorem",
                    main_theorem_report(&lab, *n, *n, &mut session.pins, session.pin_here)?,
                ),
                (
                    "lambalgen-t2",
                    theorem2_report(&lab, *n, &[0, 1, 2, 3], &costs, &mut session.pins, session.pin_here)?,
                ),
                (
                    "lambalgen-t3",
                    theorem3_report(&lab, *n, &[0, 1, 2, 3], &costs, &mut session.pins, session.pin_here)?,
                ),
                ("witness", witness_report(&lab, *n, &mut session.pins, session.pin_here)?),
            ];
            let mut failed = false;
            for (name, report) in &reports {
                if session.finish(name, report).is_err() {
                    failed = true;
                }
            }
            if failed {
                Err(CliError::Failed)
            } else {
                Ok(())
            }
        }
    }
}
