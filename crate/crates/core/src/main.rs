use std::process::ExitCode;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};
use relmon::axioms::AxiomSet;
use relmon::commands::{
    cmd_decide, cmd_graph, cmd_prove, cmd_reduce, cmd_refute, cmd_saturate, cmd_selftest, CommandResult, ReduceOracle,
    RefuteMode, SaturateOptions,
};
use relmon::model::{LangSearchBounds, RelSearchBounds};
use relmon::prover::Budget;
use relmon::saturation::SatBudget;

#[derive(Parser)]
#[command(name = "relmon", version, about = "Equations over relations with meet, composition and join")]
struct Cli {
    /// Print the result as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0x5eed)]
    seed: u64,
    /// Give up after this many seconds (verdict unknown).
    #[arg(long, global = true)]
    timeout: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a derivation from an axiom system.
    Prove {
        equation: String,
        #[arg(long, default_value = "integral")]
        axioms: AxiomSet,
        #[arg(long, default_value_t = 6)]
        depth: usize,
        #[arg(long, default_value_t = 200_000)]
        nodes: usize,
    },
    /// Search for a finite counterexample.
    Refute {
        equation: String,
        #[arg(long, default_value = "rel")]
        mode: RefuteMode,
        #[arg(long, default_value_t = 4)]
        max_base: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long, default_value_t = 2)]
        alphabet: usize,
        #[arg(long, default_value_t = 2)]
        max_len: usize,
        #[arg(long, default_value_t = 3)]
        max_words: usize,
    },
    /// Decide an inequality over relations with term graphs.
    Decide {
        inequality: String,
        #[arg(long, default_value = "meet-comp-one", value_parser = ["meet-comp-one"])]
        fragment: String,
    },
    /// Build the saturation graph for theta and optionally refute theta <= theta'.
    Saturate {
        #[arg(long)]
        theta: String,
        #[arg(long = "refute")]
        theta_prime: Option<String>,
        #[arg(long, default_value_t = 10)]
        steps: usize,
        /// Print the graph in DOT instead of text.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        check_invariants: bool,
        #[arg(long, default_value_t = 2)]
        pool_depth: usize,
    },
    /// Export the term graph of a join-free term.
    Graph {
        term: String,
        #[arg(long)]
        dot: bool,
    },
    /// Reduce an inequality with joins to join-free pairs.
    Reduce {
        inequality: String,
        #[arg(long, default_value = "term-graph")]
        oracle: ReduceOracle,
    },
    /// Run the built-in check suites.
    Selftest {
        #[arg(long)]
        suite: Option<String>,
    },
}

fn run(command: Command, seed: u64) -> relmon::Result<(CommandResult, bool)> {
    let rel = |max_base, samples| RelSearchBounds { max_base, random_samples: samples, seed, ..Default::default() };
    Ok(match command {
        Command::Prove { equation, axioms, depth, nodes } => (cmd_prove(&equation, axioms, &Budget::new(depth, nodes))?, false),
        Command::Refute { equation, mode, max_base, samples, alphabet, max_len, max_words } => {
            let lang = LangSearchBounds { alphabet_size: alphabet, max_len, max_words, seed, ..Default::default() };
            (cmd_refute(&equation, mode, &rel(max_base, samples), &lang)?, false)
        }
        Command::Decide { inequality, .. } => (cmd_decide(&inequality)?, false),
        Command::Saturate { theta, theta_prime, steps, dot, check_invariants, pool_depth } => {
            let budget = SatBudget { pool_depth, ..Default::default() };
            let opts = SaturateOptions { theta, refute: theta_prime, steps, check_invariants, budget };
            (cmd_saturate(&opts)?, dot)
        }
        Command::Graph { term, dot } => (cmd_graph(&term)?, dot),
        Command::Reduce { inequality, oracle } => (cmd_reduce(&inequality, oracle, &Budget::new(6, 50_000), &rel(3, 300))?, false),
        Command::Selftest { suite } => (cmd_selftest(suite.as_deref(), seed)?, false),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors exit 1; --help and --version exit 0.
            return ExitCode::from(e.use_stderr() as u8);
        }
    };
    let start = Instant::now();
    let (tx, rx) = mpsc::channel();
    let (command, seed) = (cli.command, cli.seed);
    thread::spawn(move || {
        let _ = tx.send(run(command, seed));
    });
    let outcome = match cli.timeout {
        Some(secs) => rx.recv_timeout(Duration::from_secs_f64(secs)).ok(),
        None => rx.recv().ok(),
    };
    let Some(outcome) = outcome else {
        if cli.json {
            println!("{}", serde_json::json!({"verdict": "unknown", "reason": "timeout"}));
        } else {
            println!("unknown: timed out");
        }
        return ExitCode::from(2);
    };
    match outcome {
        Ok((result, dot)) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&result).expect("results serialize"));
            } else if let (true, Some(d)) = (dot, &result.dot) {
                print!("{d}");
            } else {
                println!("{}", result.text);
                for f in &result.failures {
                    println!("failed: {f}");
                }
                eprintln!("({:.2}s)", start.elapsed().as_secs_f64());
            }
            ExitCode::from(result.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
