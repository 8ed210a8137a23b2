use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use regcount::count::{CountKind, Rational};
use regcount::report::{parse_rational, run, Command, Format, GraphSource, RunConfig};
use regcount::Error;

#[derive(Parser, Debug)]
#[command(name = "regcount", version, about = "Exact matching and independent-set counts on regular graphs")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Json, global = true)]
    format: FormatArg,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Size of the worker pool; defaults to one per core.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Matching,
    IndependentSet,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print the counting polynomial of each graph in a file.
    Count {
        #[arg(long, value_enum)]
        kind: KindArg,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Evaluate every bound formula at (n, d).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        /// Matching or independent-set size; all sizes when omitted.
        #[arg(long, alias = "ell", alias = "t")]
        size: Option<usize>,
        #[command(flatten)]
        grids: Grids,
    },
    /// Enumerate d-regular graphs on n vertices.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        bipartite: bool,
        /// Keep every labelled graph instead of one per isomorphism class.
        #[arg(long)]
        labelled: bool,
        /// Write one file per graph into this directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Compare matching counts with the disjoint union of K_{d,d}.
    VerifyUmc {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Compare independent-set counts with the disjoint union of K_{d,d}.
    VerifyKahn {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Check every bound against exact counts.
    VerifySuite {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        grids: Grids,
    },
    /// Check that matching polynomials are real-rooted.
    VerifyRoots {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = regcount::roots::DEFAULT_ROOT_TOL)]
        tol: f64,
    },
    /// Check the homomorphism inequality under several vertex orders.
    VerifyHom {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 5)]
        orders: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct Source {
    #[arg(long, requires = "d", conflicts_with = "graph")]
    n: Option<usize>,
    #[arg(long, requires = "n")]
    d: Option<usize>,
    /// Read graphs from a file instead of generating them.
    #[arg(long, required_unless_present = "n")]
    graph: Option<PathBuf>,
}

impl Source {
    fn into_source(self) -> GraphSource {
        match (self.n, self.d, self.graph) {
            (_, _, Some(path)) => GraphSource::File(path),
            (Some(n), Some(d), None) => GraphSource::Generated { n, d },
            _ => unreachable!("clap enforces n and d or graph"),
        }
    }
}

#[derive(Args, Debug, Default)]
struct Grids {
    /// Fugacities, e.g. 1/2 or 0.25; comma separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Vec<String>,
    /// Markov constants above 1; comma separated.
    #[arg(long, value_delimiter = ',')]
    c: Vec<String>,
}

fn parse_all(v: &[String]) -> Result<Vec<Rational>, Error> {
    v.iter().map(|s| parse_rational(s)).collect()
}

fn config(cli: Cli) -> Result<RunConfig, Error> {
    let mut grids = None;
    let mut tol = None;
    let mut hom = None;
    let command = match cli.command {
        Cmd::Count { kind, graph } => Command::Count {
            kind: match kind {
                KindArg::Matching => CountKind::Matching,
                KindArg::IndependentSet => CountKind::IndependentSet,
            },
            graph,
        },
        Cmd::Bounds { n, d, size, grids: g } => {
            grids = Some(g);
            Command::Bounds { n, d, size }
        }
        Cmd::Gen { n, d, bipartite, labelled, out_dir } => Command::Gen { n, d, bipartite, labelled, out_dir },
        Cmd::VerifyUmc { n, d } => Command::VerifyUmc { n, d },
        Cmd::VerifyKahn { n, d } => Command::VerifyKahn { n, d },
        Cmd::VerifySuite { source, grids: g } => {
            grids = Some(g);
            Command::VerifySuite { source: source.into_source() }
        }
        Cmd::VerifyRoots { source, tol: t } => {
            tol = Some(t);
            Command::VerifyRoots { source: source.into_source() }
        }
        Cmd::VerifyHom { source, orders, seed } => {
            hom = Some((orders, seed));
            Command::VerifyHom { source: source.into_source() }
        }
    };
    let mut config = RunConfig::new(command);
    if let Some(g) = grids {
        if !g.lambda.is_empty() {
            config.lambda_grid = parse_all(&g.lambda)?;
        }
        if !g.c.is_empty() {
            config.c_grid = parse_all(&g.c)?;
        }
    }
    if let Some(t) = tol {
        config.tol = t;
    }
    if let Some((orders, seed)) = hom {
        config.orders = orders;
        config.seed = seed;
    }
    config.format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
    };
    config.workers = cli.workers;
    config.out = cli.out;
    Ok(config)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match config(cli).and_then(|c| run(&c)) {
        Ok(outcome) => ExitCode::from(outcome.exit_code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
