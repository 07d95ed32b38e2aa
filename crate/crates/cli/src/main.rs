mod family;

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use family::{Family, FamilyArgs};
use revpeb::graph::Dag;
use revpeb::nullstellensatz::{
    compile, extract, multilinearize, pebbling_formula, verify, Certificate, FieldSpec, NsError,
};
use revpeb::pebbling::{verify_strategy, Flavor, Game, Strategy};
use revpeb::search::{self, cs_time_bound, Limits, SearchError, DEFAULT_STATE_BUDGET};

/// Reversible pebbling and Nullstellensatz certificates.
#[derive(Parser, Debug)]
#[command(name = "revpeb", version)]
struct Cli {
    /// Most states a single search may expand.
    #[arg(long, global = true, default_value_t = DEFAULT_STATE_BUDGET)]
    state_budget: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph of one of the built-in families.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        /// Graph JSON destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also emit the pebbling formula in DIMACS (next to `--out`, with
        /// extension `.cnf`, or alone on stdout).
        #[arg(long)]
        dimacs: bool,
    },
    /// Optimal pebblings by exhaustive search.
    Solve {
        graph: PathBuf,
        #[arg(long, value_enum, default_value_t = GameArg::Reversible)]
        game: GameArg,
        #[arg(long, value_enum, default_value_t = FlavorArg::Visiting)]
        flavor: FlavorArg,
        #[arg(long, value_enum, default_value_t = Mode::MinSpace)]
        mode: Mode,
        /// Space budget for `--mode min-time`.
        #[arg(long)]
        space: Option<usize>,
        /// Largest budget for `--mode pareto`.
        #[arg(long)]
        smax: Option<usize>,
        /// Where to write the witness strategy.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Where to write the Pareto table; witnesses go next to it.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Nullstellensatz certificates of pebbling formulas.
    Cert {
        #[command(subcommand)]
        action: CertAction,
    },
    /// Time-space table of a family instance.
    Tradeoff {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_enum, default_value_t = GameArg::Reversible)]
        game: GameArg,
        #[arg(long, value_enum, default_value_t = FlavorArg::Visiting)]
        flavor: FlavorArg,
        /// Largest budget; defaults to the pebbling price plus two.
        #[arg(long)]
        smax: Option<usize>,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum CertAction {
    /// Turn a reversible pebbling into a multilinear certificate.
    Compile {
        graph: PathBuf,
        strategy: PathBuf,
        #[arg(long, default_value = "Q")]
        field: FieldSpec,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a certificate and report its size and degree.
    Verify {
        graph: PathBuf,
        cert: PathBuf,
        /// Read the coefficients in this field instead of the recorded one.
        #[arg(long)]
        field: Option<FieldSpec>,
    },
    /// Read a reversible pebbling off a certificate.
    Extract {
        graph: PathBuf,
        cert: PathBuf,
        #[arg(long)]
        field: Option<FieldSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Clamp exponents and drop Boolean-axiom multipliers.
    Multilinearize {
        graph: PathBuf,
        cert: PathBuf,
        #[arg(long)]
        field: Option<FieldSpec>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum GameArg {
    Reversible,
    Standard,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FlavorArg {
    Visiting,
    Persistent,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    MinSpace,
    MinTime,
    Pareto,
}

impl From<GameArg> for Game {
    fn from(g: GameArg) -> Game {
        match g {
            GameArg::Reversible => Game::Reversible,
            GameArg::Standard => Game::Standard,
        }
    }
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Visiting => Flavor::Visiting,
            FlavorArg::Persistent => Flavor::Persistent,
        }
    }
}

/// A broken invariant of the library rather than bad input.
#[derive(Debug)]
struct Inconsistency(String);

impl std::fmt::Display for Inconsistency {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "internal consistency violation: {}", self.0)
    }
}

impl std::error::Error for Inconsistency {}

fn inconsistency(msg: impl Into<String>) -> anyhow::Error {
    Inconsistency(msg.into()).into()
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<Inconsistency>() {
            return 3;
        }
        if let Some(e) = cause.downcast_ref::<SearchError>() {
            return match e {
                SearchError::SpaceInfeasible { .. } | SearchError::InstanceTooLarge(_) => 2,
                SearchError::Witness(_) => 3,
                SearchError::NoDesignatedSink => 1,
            };
        }
        if let Some(e) = cause.downcast_ref::<NsError>() {
            return match e {
                NsError::NoPathToSink | NsError::Internal(_) => 3,
                _ => 1,
            };
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.chain().find_map(|c| c.downcast_ref::<SearchError>()), Some(SearchError::InstanceTooLarge(_))) {
                eprintln!("hint: raise --state-budget to search further");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let limits = Limits {
        max_expansions: cli.state_budget,
    };
    match cli.command {
        Command::Gen { family, out, dimacs } => cmd_gen(&family, out.as_deref(), dimacs),
        Command::Solve {
            graph,
            game,
            flavor,
            mode,
            space,
            smax,
            witness,
            csv,
        } => {
            let dag = load_graph(&graph)?;
            let opts = SolveOpts {
                game: game.into(),
                flavor: flavor.into(),
                mode,
                space,
                smax,
                witness,
                csv,
            };
            cmd_solve(&dag, &opts, limits)
        }
        Command::Cert { action } => cmd_cert(action),
        Command::Tradeoff {
            mut family,
            game,
            flavor,
            smax,
            out,
        } => {
            if family.family == Family::Cs && family.single_sink.is_none() {
                family.single_sink = Some(1);
            }
            let csv = cmd_tradeoff(&family, game.into(), flavor.into(), smax, limits)?;
            emit(out.as_deref(), &csv)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_graph(path: &Path) -> Result<Dag> {
    Dag::from_json(&read(path)?).with_context(|| format!("in graph file {}", path.display()))
}

fn load_strategy(dag: &Dag, path: &Path) -> Result<Strategy> {
    Strategy::from_json(dag, &read(path)?).with_context(|| format!("in strategy file {}", path.display()))
}

fn load_cert(dag: &Dag, path: &Path, field: Option<FieldSpec>) -> Result<Certificate> {
    Certificate::from_json(dag, &read(path)?, field).with_context(|| format!("in certificate file {}", path.display()))
}

fn cmd_gen(family: &FamilyArgs, out: Option<&Path>, dimacs: bool) -> Result<()> {
    let dag = family.build()?;
    let cnf = if dimacs {
        Some(pebbling_formula(&dag)?.to_dimacs())
    } else {
        None
    };
    match (out, cnf) {
        (None, Some(cnf)) => print!("{cnf}"),
        (None, None) => println!("{}", dag.to_json()),
        (Some(path), cnf) => {
            write(path, &dag.to_json())?;
            eprintln!(
                "wrote {} ({} vertices, {} edges, {} sinks)",
                path.display(),
                dag.len(),
                dag.edge_count(),
                dag.sinks().len()
            );
            if let Some(cnf) = cnf {
                let cnf_path = path.with_extension("cnf");
                write(&cnf_path, &cnf)?;
                eprintln!("wrote {}", cnf_path.display());
            }
        }
    }
    Ok(())
}

struct SolveOpts {
    game: Game,
    flavor: Flavor,
    mode: Mode,
    space: Option<usize>,
    smax: Option<usize>,
    witness: Option<PathBuf>,
    csv: Option<PathBuf>,
}

fn cmd_solve(dag: &Dag, o: &SolveOpts, limits: Limits) -> Result<()> {
    if o.mode != Mode::MinTime && o.space.is_some() {
        bail!("--space only applies to --mode min-time");
    }
    if o.mode != Mode::Pareto && (o.smax.is_some() || o.csv.is_some()) {
        bail!("--smax and --csv only apply to --mode pareto");
    }
    match o.mode {
        Mode::MinSpace | Mode::MinTime => {
            let (space, time, witness) = if o.mode == Mode::MinSpace {
                let (space, w) = search::min_space(dag, o.game, o.flavor, limits)?;
                (space, w.moves.len(), w)
            } else {
                let s = o.space.context("--mode min-time needs --space")?;
                let (t, w) = search::min_time_within_space(dag, o.game, o.flavor, s, limits)?;
                (s, t, w)
            };
            let used = verify_strategy(dag, &witness).map_err(|e| inconsistency(format!("witness rejected: {e}")))?;
            println!("space: {space}");
            println!("time: {time}");
            println!("witness_space: {}", used.space);
            if let Some(p) = &o.witness {
                write(p, &witness.to_json(dag))?;
            }
        }
        Mode::Pareto => {
            let smax = o.smax.context("--mode pareto needs --smax")?;
            let points = search::pareto(dag, o.game, o.flavor, smax, limits)?;
            let mut csv = String::from("space,time,witness_file\n");
            for p in &points {
                let file = match &o.csv {
                    Some(csv_path) => {
                        let stem = csv_path.file_stem().and_then(|s| s.to_str()).unwrap_or("pareto");
                        let w = csv_path.with_file_name(format!("{stem}_space{}.json", p.space_budget));
                        write(&w, &p.witness.to_json(dag))?;
                        w.file_name().unwrap().to_string_lossy().into_owned()
                    }
                    None => String::new(),
                };
                writeln!(csv, "{},{},{}", p.space_budget, p.optimal_time, file).unwrap();
            }
            emit(o.csv.as_deref(), &csv)?;
        }
    }
    Ok(())
}

fn cmd_cert(action: CertAction) -> Result<()> {
    match action {
        CertAction::Compile {
            graph,
            strategy,
            field,
            out,
        } => {
            let dag = load_graph(&graph)?;
            let strategy = load_strategy(&dag, &strategy)?;
            let compiled = compile(&dag, &strategy, field)?;
            if compiled.unmirrored_moves > 0 {
                eprintln!(
                    "warning: {} moves after the first sink visit are not the mirror of the prefix and were ignored",
                    compiled.unmirrored_moves
                );
            }
            let report = verify(&pebbling_formula(&dag)?, &compiled.certificate)?;
            if !report.valid {
                return Err(inconsistency("compiled certificate does not verify"));
            }
            println!("prefix_moves: {}", compiled.prefix_len);
            println!("size: {}", report.size);
            println!("degree: {}", report.degree);
            emit_or_note(out.as_deref(), &compiled.certificate.to_json(&dag))
        }
        CertAction::Verify { graph, cert, field } => {
            let dag = load_graph(&graph)?;
            let cert = load_cert(&dag, &cert, field)?;
            let report = verify(&pebbling_formula(&dag)?, &cert)?;
            println!("field: {}", cert.field);
            println!("valid: {}", report.valid);
            println!("size: {}", report.size);
            println!("degree: {}", report.degree);
            if !report.valid {
                println!("residual: {}", report.residual.display(dag.names()));
                bail!("certificate is not a valid refutation");
            }
            Ok(())
        }
        CertAction::Extract {
            graph,
            cert,
            field,
            out,
        } => {
            let dag = load_graph(&graph)?;
            let cert = load_cert(&dag, &cert, field)?;
            let strategy = extract(&dag, &cert)?;
            let m = verify_strategy(&dag, &strategy).map_err(|e| inconsistency(format!("extracted pebbling rejected: {e}")))?;
            println!("time: {}", m.time);
            println!("space: {}", m.space);
            emit_or_note(out.as_deref(), &strategy.to_json(&dag))
        }
        CertAction::Multilinearize {
            graph,
            cert,
            field,
            out,
        } => {
            let dag = load_graph(&graph)?;
            let cert = load_cert(&dag, &cert, field)?;
            let formula = pebbling_formula(&dag)?;
            let before = verify(&formula, &cert)?;
            let ml = multilinearize(&formula, &cert)?;
            let after = verify(&formula, &ml)?;
            if after.size > before.size || after.degree > before.degree {
                return Err(inconsistency("multilinearization grew the certificate"));
            }
            println!("size: {} -> {}", before.size, after.size);
            println!("degree: {} -> {}", before.degree, after.degree);
            emit_or_note(out.as_deref(), &ml.to_json(&dag))
        }
    }
}

fn emit_or_note(out: Option<&Path>, text: &str) -> Result<()> {
    if let Some(p) = out {
        write(p, text)?;
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

fn cmd_tradeoff(family: &FamilyArgs, game: Game, flavor: Flavor, smax: Option<usize>, limits: Limits) -> Result<String> {
    let dag = family.build()?;
    let (price, _) = search::min_space(&dag, game, flavor, limits)?;
    let smax = smax.unwrap_or(price + 2);
    let points = search::pareto(&dag, game, flavor, smax, limits)?;
    let formula = pebbling_formula(&dag)?;

    let constructions: Vec<(usize, usize)> = family
        .constructions(&dag, flavor)
        .into_iter()
        .map(|s| {
            let s = Strategy { game, ..s };
            verify_strategy(&dag, &s)
                .map(|m| (m.space, m.time))
                .map_err(|e| inconsistency(format!("constructive pebbling rejected: {e}")))
        })
        .collect::<Result<_>>()?;

    let mut csv = String::from("space,optimal_time,theorem_bound,strategy_upper_time,cert_size,cert_degree\n");
    for p in &points {
        let bound = time_bound(family, game, p.space_budget);
        if bound.as_ref().is_some_and(|b| *b > p.optimal_time.into()) {
            return Err(inconsistency(format!(
                "optimal time {} at space {} is below the lower bound",
                p.optimal_time, p.space_budget
            )));
        }
        let bound = bound.map(|b| b.to_string()).unwrap_or_default();
        let upper = constructions
            .iter()
            .filter(|(s, _)| *s <= p.space_budget)
            .map(|&(_, t)| t)
            .min()
            .map(|t| t.to_string())
            .unwrap_or_default();
        let (size, degree) = if game == Game::Reversible {
            let cert = compile(&dag, &p.witness, FieldSpec::Prime(2))?.certificate;
            let report = verify(&formula, &cert)?;
            let used = verify_strategy(&dag, &p.witness)?.space;
            let exact = flavor == Flavor::Persistent || (report.size == p.optimal_time + 1 && report.degree == used);
            if !report.valid || !exact {
                return Err(inconsistency(format!(
                    "certificate of the space-{} witness has size {} and degree {}",
                    p.space_budget, report.size, report.degree
                )));
            }
            (report.size.to_string(), report.degree.to_string())
        } else {
            (String::new(), String::new())
        };
        writeln!(csv, "{},{},{},{},{},{}", p.space_budget, p.optimal_time, bound, upper, size, degree).unwrap();
    }
    Ok(csv)
}

fn time_bound(family: &FamilyArgs, game: Game, space: usize) -> Option<revpeb::search::BigInt> {
    match (family.family, game, family.c, family.r) {
        (Family::Cs, Game::Standard, Some(c), Some(r)) => cs_time_bound(c, r, space),
        _ => None,
    }
}
