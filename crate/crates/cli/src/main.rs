use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rationality::halfint::{self, TriangleOutcome};
use rationality::integral::{self, DEFAULT_EXACT_LIMIT};
use rationality::{
    dichromatic_number_exact, greedy_dicoloring, max_acyclic_subset, random_tournament,
    rationality_number, MatrixFormat, PreferenceMatrix, Rationality, Side, Tournament,
    VoterProfile,
};

/// Rationality numbers of preference matrices.
#[derive(Parser)]
#[command(name = "rationality", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a matrix, report alpha or bounds on it, write a certificate.
    Analyze {
        #[command(flatten)]
        input: MatrixInput,
        /// Certificate profile JSON.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Check a voter profile against a matrix. Exit 1 when inconsistent.
    Verify {
        #[command(flatten)]
        input: MatrixInput,
        #[arg(long)]
        profile: PathBuf,
    },
    /// Write a random instance as matrix JSON.
    Generate {
        kind: GenerateKind,
        #[arg(long)]
        n: usize,
        /// Number of parts, for kpartite.
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: PathBuf,
    },
    /// Run a seeded sweep and write one CSV row per seed.
    Experiment(ExperimentArgs),
    /// Re-emit a matrix, or draw one of its graphs.
    Export {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        input_format: Option<InputFormat>,
        #[arg(long, value_enum)]
        format: ExportFormat,
        #[arg(long, value_enum, default_value_t = GraphKind::Voting)]
        graph: GraphKind,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct MatrixInput {
    /// Matrix as JSON, CSV, or tournament JSON.
    #[arg(long)]
    input: PathBuf,
    /// Defaults to csv for `.csv` files, json otherwise.
    #[arg(long, value_enum)]
    format: Option<InputFormat>,
}

#[derive(Args)]
struct ExperimentArgs {
    name: ExperimentKind,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    k: usize,
    /// Subset size, for triangle-property.
    #[arg(long, default_value_t = 3)]
    s: usize,
    /// Inclusive range `a..b`, or a single seed.
    #[arg(long, default_value = "1..20", value_parser = parse_seeds)]
    seeds: SeedRange,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
    #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
    exact_limit: usize,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum InputFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Dot,
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GraphKind {
    Voting,
    Unanimity,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenerateKind {
    Tournament,
    Kpartite,
}

#[derive(Clone, Copy, ValueEnum)]
enum ExperimentKind {
    GreedyBound,
    MaxAcyclic,
    TriangleProperty,
}

#[derive(Clone, Copy, Debug)]
struct SeedRange {
    first: u64,
    last: u64,
}

fn parse_seeds(text: &str) -> Result<SeedRange, String> {
    let parse = |s: &str| {
        s.trim()
            .parse::<u64>()
            .map_err(|e| format!("bad seed {s:?}: {e}"))
    };
    let (first, last) = match text.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let s = parse(text)?;
            (s, s)
        }
    };
    if first > last {
        return Err(format!("empty seed range {text}"));
    }
    Ok(SeedRange { first, last })
}

/// Exit status of a command that ran to completion.
struct Exit(u8);

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => ExitCode::from(code.0),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<Exit> {
    match command {
        Command::Analyze {
            input,
            output,
            exact_limit,
        } => analyze(&input, output.as_deref(), exact_limit),
        Command::Verify { input, profile } => verify(&input, &profile),
        Command::Generate {
            kind,
            n,
            k,
            seed,
            output,
        } => generate(kind, n, k, seed, &output),
        Command::Experiment(args) => experiment(&args),
        Command::Export {
            input,
            input_format,
            format,
            graph,
            output,
        } => {
            let input = MatrixInput {
                input,
                format: input_format,
            };
            export(&input, format, graph, output.as_deref())
        }
    }
}

fn read_matrix(input: &MatrixInput) -> Result<PreferenceMatrix> {
    let path = &input.input;
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let csv_extension = path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("csv"));
    let format = match input.format {
        Some(InputFormat::Csv) => MatrixFormat::Csv,
        Some(InputFormat::Json) => MatrixFormat::Json,
        None if csv_extension => MatrixFormat::Csv,
        None => MatrixFormat::Json,
    };
    let parsed = rationality::parse_matrix(text.as_bytes(), format);
    let matrix = match (parsed, format) {
        (Ok(m), _) => m,
        // tournament files carry arcs instead of entries
        (Err(e), MatrixFormat::Json) => match Tournament::from_json(&text) {
            Ok(t) => t.to_matrix(),
            Err(_) => return Err(e).with_context(|| format!("parsing {}", path.display())),
        },
        (Err(e), MatrixFormat::Csv) => {
            return Err(e).with_context(|| format!("parsing {}", path.display()))
        }
    };
    Ok(matrix)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn voters(count: usize) -> String {
    if count == 1 {
        "1 voter".to_string()
    } else {
        format!("{count} voters")
    }
}

fn labels(vertices: &[usize]) -> String {
    vertices
        .iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn analyze(input: &MatrixInput, output: Option<&Path>, exact_limit: usize) -> Result<Exit> {
    let matrix = read_matrix(input)?;
    let class = matrix.classify();
    let result = rationality_number(&matrix, exact_limit)?;
    match &result {
        Rationality::Exact { k, certificate } => println!(
            "class={class} alpha={k} certificate={}",
            voters(certificate.len())
        ),
        Rationality::Bounds {
            lo,
            hi,
            certificate,
            ..
        } => {
            println!("class={class} alpha in [{lo},{hi}]");
            println!(
                "certificate={} width={}",
                voters(certificate.len()),
                certificate.width().get()
            );
        }
    }
    let voting = matrix.voting_graph();
    let unanimity = matrix.unanimity_graph();
    println!(
        "n={} voting_arcs={} unanimity_edges={} unanimity_components={}",
        matrix.n(),
        voting.arc_count(),
        unanimity.edges().len(),
        unanimity.connected_components().len()
    );
    match voting.find_cycle() {
        Some(cycle) => println!("voting_cycle={}", labels(&cycle)),
        None => println!("voting_cycle=none"),
    }
    if let Some(path) = output {
        write(path, &result.certificate().to_json())?;
        println!("wrote certificate to {}", path.display());
    }
    Ok(Exit(0))
}

fn verify(input: &MatrixInput, profile_path: &Path) -> Result<Exit> {
    let matrix = read_matrix(input)?;
    let text = fs::read_to_string(profile_path)
        .with_context(|| format!("reading {}", profile_path.display()))?;
    let profile = VoterProfile::from_json(&text)
        .with_context(|| format!("parsing {}", profile_path.display()))?;
    let report = profile.check_consistency(&matrix)?;
    let verdict = if report.consistent {
        "consistent"
    } else {
        "inconsistent"
    };
    println!(
        "{verdict} voters={} width={}",
        profile.len(),
        profile.width().get()
    );
    for v in &report.violations {
        let side = match v.side {
            Side::Upper => "upper",
            Side::Lower => "lower",
        };
        println!(
            "violation ({},{}) side={side} strong={} p={} weak={}",
            v.i, v.j, v.strong_fraction, v.p_ij, v.weak_fraction
        );
    }
    Ok(Exit(if report.consistent { 0 } else { 1 }))
}

fn generate(kind: GenerateKind, n: usize, k: usize, seed: u64, output: &Path) -> Result<Exit> {
    let matrix = match kind {
        GenerateKind::Tournament => random_tournament(n, seed).to_matrix(),
        GenerateKind::Kpartite => halfint::random_lower_bound_instance(n, k, seed)?,
    };
    write(output, &matrix.to_json())?;
    let unanimous = matrix.unanimity_graph().edges().len();
    println!(
        "class={} n={n} unanimous_pairs={unanimous} seed={seed}",
        matrix.classify()
    );
    Ok(Exit(0))
}

fn experiment(args: &ExperimentArgs) -> Result<Exit> {
    let mut out = csv::Writer::from_writer(Vec::new());
    let seeds = args.seeds.first..=args.seeds.last;
    let rows = seeds.clone().count();
    match args.name {
        ExperimentKind::GreedyBound | ExperimentKind::MaxAcyclic => {
            if matches!(args.name, ExperimentKind::MaxAcyclic) && args.n > args.exact_limit {
                bail!(
                    "max-acyclic needs exact sizes: n = {} exceeds --exact-limit {}",
                    args.n,
                    args.exact_limit
                );
            }
            out.write_record([
                "n",
                "seed",
                "exact_k",
                "greedy_k",
                "max_acyclic",
                "bound_3n_log",
                "bound_n_over_2logn1",
                "bound_2logn1",
            ])?;
            for seed in seeds {
                out.write_record(tournament_row(args.n, seed, args.exact_limit)?)?;
            }
        }
        ExperimentKind::TriangleProperty => {
            let limit = halfint::ENUMERATION_THRESHOLD;
            if args.budget == 0 && halfint::binomial(args.n, args.s) > limit {
                bail!("--budget must be positive when sampling");
            }
            out.write_record(["n", "k", "s", "outcome", "samples", "seed"])?;
            for seed in seeds {
                let matrix = halfint::random_lower_bound_instance(args.n, args.k, seed)?;
                let check = halfint::verify_triangle_property(
                    &matrix.voting_graph(),
                    args.s,
                    args.budget,
                    seed,
                );
                let mut outcome = check.outcome.label().to_string();
                if let TriangleOutcome::Refuted { witness } = &check.outcome {
                    outcome = format!("{outcome}:{}", labels(witness).replace(',', " "));
                }
                out.write_record([
                    args.n.to_string(),
                    args.k.to_string(),
                    args.s.to_string(),
                    outcome,
                    check.subsets_checked.to_string(),
                    seed.to_string(),
                ])?;
            }
        }
    }
    let bytes = out.into_inner().context("flushing csv")?;
    fs::write(&args.output, bytes).with_context(|| format!("writing {}", args.output.display()))?;
    println!("rows={rows} written to {}", args.output.display());
    Ok(Exit(0))
}

fn tournament_row(n: usize, seed: u64, exact_limit: usize) -> Result<Vec<String>> {
    let t = random_tournament(n, seed);
    let greedy = greedy_dicoloring(&t).class_count();
    let exact = if n <= exact_limit {
        dichromatic_number_exact(&t, exact_limit)?.0.to_string()
    } else {
        "-".to_string()
    };
    let acyclic = max_acyclic_subset(&t, exact_limit);
    Ok(vec![
        n.to_string(),
        seed.to_string(),
        exact,
        greedy.to_string(),
        acyclic.size.to_string(),
        format!("{:.4}", integral::greedy_bound(n)),
        format!("{:.4}", integral::random_lower_bound(n)),
        format!("{:.4}", 2.0 * (n as f64).log2() + 1.0),
    ])
}

fn export(
    input: &MatrixInput,
    format: ExportFormat,
    graph: GraphKind,
    output: Option<&Path>,
) -> Result<Exit> {
    let matrix = read_matrix(input)?;
    let text = match (format, graph) {
        (ExportFormat::Json, _) => matrix.to_json() + "\n",
        (ExportFormat::Csv, _) => matrix.to_csv(),
        (ExportFormat::Dot, GraphKind::Voting) => matrix.voting_graph().to_dot(),
        (ExportFormat::Dot, GraphKind::Unanimity) => matrix.unanimity_graph().to_dot(),
    };
    match output {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    Ok(Exit(0))
}
