use std::collections::BTreeMap;
use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use itr::ingest::{self, InputFormat};
use itr::query::{answer_with, format_triple, parse_pattern};
use itr::{compress_graph, decompress_container, deserialize, CompressedGrammar, NodeLabels, Options, TriplePattern};
use log::{debug, info, warn};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[derive(Parser)]
#[command(name = "itr", version, about = "Grammar-based graph compressor with queries on the compressed form")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compress an N-Triples file or edge list into an .itr container.
    Compress(CompressArgs),
    /// Write the graph stored in a container back out.
    Decompress(DecompressArgs),
    /// Answer one triple pattern such as "? <p> <o>".
    Query(QueryArgs),
    /// Print section sizes and grammar statistics.
    Stats(StatsArgs),
    /// Time triple-pattern queries, grouped by pattern shape.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CompressArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Input format: nt or el.
    #[arg(short, long)]
    format: InputFormat,
    #[arg(short, long)]
    output: PathBuf,
    /// Store node labels as rank-1 edges so they are compressed with the graph.
    #[arg(long)]
    plus: bool,
    /// `node<TAB>label` file.
    #[arg(long)]
    node_labels: Option<PathBuf>,
    /// Largest rank of a new nonterminal.
    #[arg(long, default_value_t = Options::default().max_rank)]
    max_rank: usize,
    /// k²-tree arity.
    #[arg(long, default_value_t = Options::default().k as u32, value_parser = clap::value_parser!(u32).range(2..=64))]
    k: u32,
    /// Keep every rule, even those that do not pay for themselves.
    #[arg(long)]
    no_prune: bool,
}

#[derive(Args)]
struct DecompressArgs {
    #[arg(short, long)]
    input: PathBuf,
    #[arg(short, long)]
    output: PathBuf,
    /// Output format; must match the format the container was built from.
    #[arg(short, long)]
    format: Option<InputFormat>,
    /// Where to write node labels, if the container has any.
    #[arg(long)]
    node_labels: Option<PathBuf>,
}

#[derive(Args)]
struct QueryArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// Three terms: `?`, `#<id>` or a dictionary term.
    #[arg(short, long)]
    query: String,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(short, long)]
    input: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(short, long)]
    input: PathBuf,
    /// File with one pattern per line.
    #[arg(short = 'Q', long)]
    queries: Option<PathBuf>,
    /// Runs per query.
    #[arg(short = 'n', long, default_value_t = 1)]
    repeat: usize,
    /// Generate this many random patterns per shape in `--shapes`.
    #[arg(long)]
    generate: Option<usize>,
    /// Comma-separated shapes for `--generate`, e.g. `S??,?P?,S?O`.
    #[arg(long, default_value = "S??")]
    shapes: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

enum CliError {
    Usage(String),
    Io(String),
    Format(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
            CliError::Format(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Format(m) => f.write_str(m),
        }
    }
}

impl From<itr::Error> for CliError {
    fn from(e: itr::Error) -> Self {
        match e {
            itr::Error::Io(e) => CliError::Io(e.to_string()),
            itr::Error::BadPattern(_) => CliError::Usage(e.to_string()),
            e => CliError::Format(e.to_string()),
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |e| CliError::Io(format!("{}: {e}", path.display()))
}

fn open(path: &Path) -> CliResult<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(io_err(path))
}

fn create(path: &Path) -> CliResult<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(io_err(path))
}

fn file_len(path: &Path) -> CliResult<u64> {
    fs::metadata(path).map(|m| m.len()).map_err(io_err(path))
}

/// Attaches the file name to format errors.
fn in_file<T>(path: &Path, r: itr::Result<T>) -> CliResult<T> {
    r.map_err(|e| match CliError::from(e) {
        CliError::Format(m) => CliError::Format(format!("{}: {m}", path.display())),
        other => other,
    })
}

fn load(path: &Path) -> CliResult<CompressedGrammar> {
    let bytes = fs::read(path).map_err(io_err(path))?;
    let t = Instant::now();
    let view = in_file(path, deserialize(&bytes))?;
    debug!("loaded {} bytes in {:.2?}", bytes.len(), t.elapsed());
    Ok(view)
}

fn container_format(view: &CompressedGrammar) -> InputFormat {
    if view.flags().numeric_nodes {
        InputFormat::EdgeList
    } else {
        InputFormat::NTriples
    }
}

fn compress(args: &CompressArgs) -> CliResult {
    let t = Instant::now();
    let (graph, dict) = in_file(&args.input, ingest::parse(open(&args.input)?, args.format))?;
    let mut input_bytes = file_len(&args.input)?;
    let labels = match &args.node_labels {
        Some(p) => {
            input_bytes += file_len(p)?;
            in_file(p, ingest::parse_node_labels(open(p)?, &dict))?
        }
        None => NodeLabels::new(),
    };
    info!(
        "parsed {} edges, {} nodes, {} node labels in {:.2?}",
        graph.edges.len(),
        graph.node_count,
        labels.len(),
        t.elapsed()
    );
    let opts = Options {
        itr_plus: args.plus,
        max_rank: args.max_rank,
        k: args.k as usize,
        prune: !args.no_prune,
    };
    let (view, stats) = compress_graph(graph, dict, labels, &opts)?;
    let bytes = view.to_bytes();
    let mut out = create(&args.output)?;
    out.write_all(&bytes)
        .and_then(|_| out.flush())
        .map_err(io_err(&args.output))?;
    let elapsed = t.elapsed();

    println!("iterations     {}", stats.iterations);
    println!("rules          {} ({} before pruning)", stats.rules, stats.rules_before_prune);
    println!("edges          {} -> {} in the start graph", stats.input_edges, stats.start_edges);
    println!("input bytes    {input_bytes}");
    println!("output bytes   {}", bytes.len());
    println!("ratio          {:.2}%", 100.0 * bytes.len() as f64 / input_bytes.max(1) as f64);
    println!("time           {elapsed:.2?}");
    Ok(())
}

fn decompress(args: &DecompressArgs) -> CliResult {
    let view = load(&args.input)?;
    let native = container_format(&view);
    if let Some(f) = args.format {
        if f != native {
            return Err(CliError::Usage(format!(
                "container was built from {native} input and can only be written as {native}"
            )));
        }
    }
    let out = decompress_container(&view)?;
    if !out.report.duplicate_nodes.is_empty() {
        warn!("{} nodes carried more than one identical label", out.report.duplicate_nodes.len());
    }
    let w = create(&args.output)?;
    ingest::emit(&out.graph, view.dictionary(), native, w)?;
    match &args.node_labels {
        Some(p) => ingest::emit_node_labels(&out.node_labels, view.dictionary(), create(p)?)?,
        None if !out.node_labels.is_empty() => {
            warn!("{} node labels not written (use --node-labels)", out.node_labels.len())
        }
        None => {}
    }
    Ok(())
}

fn query(args: &QueryArgs) -> CliResult {
    let view = load(&args.input)?;
    let Some(q) = parse_pattern(&view, &args.query)? else {
        info!("a bound term is not in the dictionary");
        return Ok(());
    };
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let mut failure = None;
    let stats = answer_with(&view, &q, |t| {
        if failure.is_some() {
            return;
        }
        match format_triple(&view, &t) {
            Ok(line) => {
                if let Err(e) = writeln!(out, "{line}") {
                    failure = Some(CliError::Io(e.to_string()));
                }
            }
            Err(e) => failure = Some(e.into()),
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    debug!("{stats:?}");
    Ok(())
}

fn stats(args: &StatsArgs) -> CliResult {
    let view = load(&args.input)?;
    let sizes = view.section_sizes();
    let labels = view.labels();
    let dict = view.dictionary();
    println!("format         {}", container_format(&view));
    println!("plus mode      {}", view.flags().itr_plus);
    println!("nodes          {}", view.node_count());
    println!("terminals      {}", labels.num_terminals());
    println!("rules          {}", view.rules().len());
    println!("start edges    {}", view.start().edge_count());
    println!("fn table       {}", view.start().fn_table().len());
    println!("node terms     {}", dict.num_node_terms());
    println!("label entries  {}", dict.node_label_entries());
    println!("sections (bytes)");
    for (name, n) in [
        ("header", sizes.header),
        ("dictionary", sizes.dictionary),
        ("labels", sizes.labels),
        ("rules", sizes.rules),
        ("start graph", sizes.start_graph),
        ("nt matrix", sizes.nt_matrix),
        ("total", sizes.total()),
    ] {
        println!("  {name:<12} {n}");
    }
    Ok(())
}

fn generate(view: &CompressedGrammar, shapes: &str, per_shape: usize, seed: u64) -> CliResult<Vec<TriplePattern>> {
    let labels = view.labels();
    let predicates: Vec<u32> = (0..labels.num_terminals() as u32)
        .filter(|&a| labels.rank(a) == 2)
        .collect();
    let nodes = view.node_count() as u32;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::new();
    for shape in shapes.split(',').map(str::trim) {
        let b = shape.as_bytes();
        let valid = b.len() == 3
            && matches!(b[0], b'S' | b'?')
            && matches!(b[1], b'P' | b'?')
            && matches!(b[2], b'O' | b'?');
        if !valid {
            return Err(CliError::Usage(format!("bad shape {shape:?}; expected e.g. S?? or ?PO")));
        }
        if (b[0] == b'S' || b[2] == b'O') && nodes == 0 || b[1] == b'P' && predicates.is_empty() {
            return Err(CliError::Usage(format!("the container has nothing to bind in shape {shape}")));
        }
        for _ in 0..per_shape {
            out.push(TriplePattern::new(
                (b[0] == b'S').then(|| rng.gen_range(0..nodes)),
                (b[1] == b'P').then(|| predicates[rng.gen_range(0..predicates.len())]),
                (b[2] == b'O').then(|| rng.gen_range(0..nodes)),
            ));
        }
    }
    Ok(out)
}

#[derive(Default)]
struct ShapeTimes {
    runs: Vec<Duration>,
    results: usize,
}

fn bench(args: &BenchArgs) -> CliResult {
    if args.queries.is_none() && args.generate.is_none() {
        return Err(CliError::Usage("bench needs -Q FILE or --generate N".into()));
    }
    if args.repeat == 0 {
        return Err(CliError::Usage("-n must be at least 1".into()));
    }
    let view = load(&args.input)?;
    let mut patterns = Vec::new();
    let mut unresolved = 0usize;
    if let Some(p) = &args.queries {
        for line in open(p)?.lines() {
            let line = line.map_err(io_err(p))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            match parse_pattern(&view, line)? {
                Some(q) => patterns.push(q),
                None => unresolved += 1,
            }
        }
    }
    if let Some(n) = args.generate {
        patterns.extend(generate(&view, &args.shapes, n, args.seed)?);
    }

    let mut by_shape: BTreeMap<String, ShapeTimes> = BTreeMap::new();
    for q in &patterns {
        let entry = by_shape.entry(q.shape()).or_default();
        for run in 0..args.repeat {
            let t = Instant::now();
            let stats = answer_with(&view, q, |_| {})?;
            entry.runs.push(t.elapsed());
            if run == 0 {
                entry.results += stats.emitted;
            }
        }
    }

    println!("{:<6} {:>8} {:>10} {:>12} {:>12}", "shape", "queries", "results", "mean", "median");
    for (shape, mut t) in by_shape {
        t.runs.sort_unstable();
        let mean = t.runs.iter().sum::<Duration>() / t.runs.len() as u32;
        let median = t.runs[t.runs.len() / 2];
        println!(
            "{shape:<6} {:>8} {:>10} {:>12} {:>12}",
            t.runs.len() / args.repeat,
            t.results,
            format!("{mean:.2?}"),
            format!("{median:.2?}")
        );
    }
    if unresolved > 0 {
        println!("{unresolved} patterns name terms missing from the dictionary and were skipped");
    }
    Ok(())
}

fn run(cli: &Cli) -> CliResult {
    match &cli.command {
        Command::Compress(a) => compress(a),
        Command::Decompress(a) => decompress(a),
        Command::Query(a) => query(a),
        Command::Stats(a) => stats(a),
        Command::Bench(a) => bench(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("ITR_LOG", "off")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("itr: {e}");
            ExitCode::from(e.code())
        }
    }
}
