use clap::{Parser, Subcommand};
use ikg_cli::*;

#[derive(Parser)]
#[command(name = "ikg", about = "Interval k-graph and H-graph recognition")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide an instance; prints the outcome and exits 0 (accept) or 1 (reject)
    Recognize {
        path: String,
        /// log every decided pair and circuit to stderr
        #[arg(long)]
        trace: bool,
        /// cross-check the verdict against brute force (exit 3 on disagreement)
        #[arg(long)]
        oracle: bool,
        /// vertex bound for the brute-force cross-check
        #[arg(long, default_value_t = ikg::oracle::DEFAULT_ORDERING_BOUND)]
        oracle_bound: usize,
        /// machine-readable JSON on stdout
        #[arg(long, conflicts_with = "plain")]
        json: bool,
        /// human-readable text on stdout (default)
        #[arg(long)]
        plain: bool,
    },
    /// Print one `<id> <l> <r>` line per vertex of an accepted instance
    Intervals { path: String },
    /// Check a vertex ordering (whitespace-separated ids) against the instance
    Verify { graph: String, ordering: String },
    /// Brute-force verdict by ordering search
    Oracle {
        path: String,
        #[arg(long, default_value_t = ikg::oracle::DEFAULT_ORDERING_BOUND)]
        bound: usize,
    },
    /// Emit a seeded random instance in the graph file format
    Gen {
        n: usize,
        k: usize,
        p: f64,
        seed: u64,
    },
    /// Dump the pair digraph: arcs, strong components, couples
    DumpGplus {
        path: String,
        /// also report divergences from the looser generalized arc rules
        #[arg(long)]
        audit: bool,
    },
    /// Time recognition over random bipartite instances; CSV on stdout
    Bench {
        /// comma-separated instance sizes
        #[arg(long, value_delimiter = ',', default_values_t = vec![50usize, 100, 200, 400])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 6.0)]
        degree: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn main() {
    let cli = Cli::parse();
    let mut out = std::io::stdout();
    let mut err = std::io::stderr();
    let code = match cli.command {
        Command::Recognize {
            path,
            trace,
            oracle,
            oracle_bound,
            json,
            plain: _,
        } => {
            let opts = RecognizeOpts {
                trace,
                oracle,
                oracle_bound,
                json,
            };
            cmd_recognize(&path, &opts, &mut out, &mut err)
        }
        Command::Intervals { path } => cmd_intervals(&path, &mut out, &mut err),
        Command::Verify { graph, ordering } => cmd_verify(&graph, &ordering, &mut out, &mut err),
        Command::Oracle { path, bound } => cmd_oracle(&path, bound, &mut out, &mut err),
        Command::Gen { n, k, p, seed } => cmd_gen(n, k, p, seed, &mut out),
        Command::DumpGplus { path, audit } => cmd_dump_gplus(&path, audit, &mut out, &mut err),
        Command::Bench {
            sizes,
            degree,
            seed,
            jobs,
        } => cmd_bench(&sizes, degree, seed, jobs, &mut out),
    };
    match code {
        Ok(c) => std::process::exit(c),
        Err(e) => {
            eprintln!("error: {:#}", e);
            std::process::exit(EXIT_INPUT_ERROR);
        }
    }
}
