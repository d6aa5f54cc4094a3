use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gcstego::codebook::parse_edge_list;
use gcstego::codec::{bits_to_bytes, bytes_to_bits};
use gcstego::comparison::{check_rows, parse_rows, published_rows, write_csv};
use gcstego::decoder::{cache_file_name, DEFAULT_EXHAUSTIVE_LIMIT, DEFAULT_VERTEX_LIMIT, MAX_TABLE_VERTICES};
use gcstego::graph::complete_graph;
use gcstego::{
    build_coset_table, build_coset_table_bruteforce, build_coset_table_tjoin, covering_radius_tjoin,
    embed_stream, extract_stream, load_image, lsb_extract, lsb_inject, peak_signal_noise, save_image,
    CodeReport, Codebook, CosetTable, Error, Execution, GraphicalCode, TableBuilder,
};

/// Hide data in the LSB plane of PGM/BMP images using graph cycle codes.
#[derive(Parser, Debug)]
#[command(name = "gcstego", version)]
struct Cli {
    /// Run table construction and embedding on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Write a codebook for `K<n>` or for an edge-list / codebook file.
    Codebook {
        /// `K<n>` or `file:PATH`
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: PathBuf,
        /// Spanning tree as comma-separated 1-based edge ids, in row order.
        #[arg(long, value_delimiter = ',')]
        tree: Option<Vec<usize>>,
    },
    /// Print code parameters, covering radius, rate and efficiency.
    Analyze {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        porcelain: bool,
    },
    /// Embed a payload file into a cover image.
    Embed {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        cover: PathBuf,
        #[arg(long)]
        payload: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        porcelain: bool,
        /// Directory for cached coset tables.
        #[arg(long)]
        cache_dir: Option<PathBuf>,
    },
    /// Recover the payload from a stego image.
    Extract {
        #[arg(long)]
        codebook: PathBuf,
        #[arg(long)]
        stego: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recompute rate and efficiency for tabulated codes.
    Table {
        /// CSV with columns n,d,family,k,rho,er,ef (defaults to the bundled table).
        #[arg(long)]
        rows: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Limit { .. } => 2,
        Error::Capacity { .. } => 4,
        Error::Invariant(_) | Error::Dimension { .. } => 5,
        _ => 3,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let result = match cli.command {
        Command::Codebook { spec, out, tree } => cmd_codebook(&spec, &out, tree.as_deref()),
        Command::Analyze { codebook, porcelain } => cmd_analyze(&codebook, porcelain, exec),
        Command::Embed {
            codebook,
            cover,
            payload,
            out,
            porcelain,
            cache_dir,
        } => cmd_embed(&codebook, &cover, &payload, &out, porcelain, cache_dir.as_deref(), exec),
        Command::Extract { codebook, stego, out } => cmd_extract(&codebook, &stego, &out),
        Command::Table { rows, csv } => cmd_table(rows.as_deref(), csv.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Core(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(Error::Io(e))
    }
}

type CliResult = Result<(), CliError>;

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| {
        CliError::Core(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| {
        CliError::Core(Error::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
    })
}

fn load_code(path: &Path) -> Result<(String, GraphicalCode), CliError> {
    let text = read_text(path)?;
    let code = text.parse::<Codebook>()?.to_code()?;
    Ok((text, code))
}

fn cmd_codebook(spec: &str, out: &Path, tree: Option<&[usize]>) -> CliResult {
    let graph = if let Some(q) = spec.strip_prefix('K') {
        let q: usize = q
            .parse()
            .map_err(|_| CliError::Usage(format!("malformed spec {spec:?}, expected K<n> or file:PATH")))?;
        if q < 3 {
            return Err(CliError::Usage(format!("K{q} has no cycles; need n >= 3")));
        }
        complete_graph(q)?
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = read_text(Path::new(path))?;
        if text.trim_start().starts_with(gcstego::codebook::HEADER) {
            let book: Codebook = text.parse()?;
            if tree.is_none() {
                book.to_code()?;
                fs::write(out, book.to_string())?;
                return Ok(());
            }
            book.graph().clone()
        } else {
            parse_edge_list(&text)?
        }
    } else {
        return Err(CliError::Usage(format!("malformed spec {spec:?}, expected K<n> or file:PATH")));
    };
    let tree = match tree {
        Some(ids) => {
            if ids.contains(&0) {
                return Err(CliError::Usage("tree edge ids are 1-based".into()));
            }
            Some(ids.iter().map(|id| id - 1).collect())
        }
        None => None,
    };
    let book = Codebook::new(graph, tree)?;
    book.to_code()?;
    fs::write(out, book.to_string())?;
    Ok(())
}

fn cmd_analyze(path: &Path, porcelain: bool, exec: Execution) -> CliResult {
    let (_, code) = load_code(path)?;
    let mut radii = Vec::new();
    let mut tables: Vec<(&str, CosetTable)> = Vec::new();
    if code.n_len() <= DEFAULT_EXHAUSTIVE_LIMIT && code.graph().vertex_count() <= MAX_TABLE_VERTICES {
        tables.push(("exhaustive", build_coset_table_bruteforce(&code)?));
    }
    tables.push(("t-join", build_coset_table_tjoin(&code, exec)?));
    for (name, t) in &tables {
        radii.push((*name, t.rho()));
    }
    if let [(a, ta), (b, tb)] = tables.as_slice() {
        if let Some(s) = (0..ta.syndrome_count()).find(|&s| ta.leader_at(s).weight() != tb.leader_at(s).weight()) {
            return Err(Error::Invariant(format!(
                "{a} and {b} leaders differ in weight for syndrome index {s}"
            ))
            .into());
        }
    }
    if code.graph().vertex_count() <= DEFAULT_VERTEX_LIMIT {
        radii.push(("t-join radius", covering_radius_tjoin(code.graph(), exec)?));
    }
    let rho = radii[0].1;
    if let Some((name, r)) = radii.iter().find(|(_, r)| *r != rho) {
        return Err(Error::Invariant(format!(
            "covering radius disagreement: {} gives {rho}, {name} gives {r}",
            radii[0].0
        ))
        .into());
    }
    let report = CodeReport::new(&code, rho)?;
    if porcelain {
        println!("n={}", report.n_len);
        println!("k={}", report.k);
        println!("d={}", report.d);
        println!("girth={}", report.girth);
        println!("p={}", report.p);
        println!("rho={}", report.rho);
        println!("er={:.6}", report.embedding_rate);
        println!("ef={:.6}", report.embedding_efficiency);
        println!("vertices={}", code.graph().vertex_count());
        println!(
            "builders={}",
            radii.iter().map(|(n, _)| n.replace(' ', "-")).collect::<Vec<_>>().join(",")
        );
    } else {
        println!("{}", report.summary_line());
        println!("girth={} vertices={}", report.girth, code.graph().vertex_count());
        let agreed: Vec<&str> = radii.iter().map(|(n, _)| *n).collect();
        println!("rho agreed by: {}", agreed.join(", "));
    }
    Ok(())
}

fn load_table(text: &str, code: &GraphicalCode, cache_dir: Option<&Path>, exec: Execution) -> Result<CosetTable, CliError> {
    let Some(dir) = cache_dir else {
        return Ok(build_coset_table(code, TableBuilder::Auto, exec)?);
    };
    let file = dir.join(cache_file_name(text));
    if let Ok(bytes) = fs::read(&file) {
        if let Ok(table) = CosetTable::from_cache_bytes(&bytes, code) {
            return Ok(table);
        }
        eprintln!("warning: ignoring unreadable table cache {}", file.display());
    }
    let table = build_coset_table(code, TableBuilder::Auto, exec)?;
    fs::create_dir_all(dir)?;
    fs::write(&file, table.to_cache_bytes())?;
    Ok(table)
}

fn cmd_embed(
    codebook: &Path,
    cover_path: &Path,
    payload: &Path,
    out: &Path,
    porcelain: bool,
    cache_dir: Option<&Path>,
    exec: Execution,
) -> CliResult {
    let (text, code) = load_code(codebook)?;
    let table = load_table(&text, &code, cache_dir, exec)?;
    let cover = load_image(cover_path)?;
    let data = bytes_to_bits(&read_bytes(payload)?);
    let (bits, report) = embed_stream(&lsb_extract(&cover), &data, &table, exec)?;
    let stego = lsb_inject(&cover, &bits)?;
    save_image(&stego, out)?;
    let psnr = peak_signal_noise(&cover, &stego)?;
    let psnr_text = psnr.map_or("inf".to_string(), |v| format!("{v:.2}"));
    let emp_text = report
        .empirical_efficiency
        .map_or("inf".to_string(), |v| format!("{v:.4}"));
    if porcelain {
        println!("blocks_used={}", report.blocks_used);
        println!("payload_bits={}", data.len());
        println!("embedded_bits={}", report.embedded_bits);
        println!("total_flips={}", report.total_flips);
        println!("max_flips_per_block={}", report.max_flips_per_block);
        println!("rho={}", report.rho);
        println!("er={:.6}", report.embedding_rate);
        println!("ef={:.6}", report.theoretical_efficiency);
        println!("empirical_ef={emp_text}");
        println!("psnr={psnr_text}");
    } else {
        println!(
            "embedded {} payload bytes in {} blocks of {} cover bits",
            data.len() / 8,
            report.blocks_used,
            code.n_len()
        );
        println!(
            "flips: total {} max/block {} (rho {}) mean/block {:.3}",
            report.total_flips,
            report.max_flips_per_block,
            report.rho,
            report.mean_flips_per_block()
        );
        println!(
            "ER={:.2} EF={:.2} empirical EF={emp_text} PSNR={psnr_text} dB",
            report.embedding_rate, report.theoretical_efficiency
        );
    }
    Ok(())
}

fn cmd_extract(codebook: &Path, stego_path: &Path, out: &Path) -> CliResult {
    let (_, code) = load_code(codebook)?;
    let stego = load_image(stego_path)?;
    let bits = extract_stream(&lsb_extract(&stego), &code)?;
    if bits.len() % 8 != 0 {
        return Err(Error::CorruptFrame(format!(
            "payload of {} bits is not a whole number of bytes",
            bits.len()
        ))
        .into());
    }
    fs::write(out, bits_to_bytes(&bits))?;
    Ok(())
}

fn cmd_table(rows: Option<&Path>, csv: Option<&Path>) -> CliResult {
    let rows = match rows {
        Some(path) => parse_rows(read_bytes(path)?.as_slice())?,
        None => published_rows(),
    };
    let checks = check_rows(&rows)?;
    let mismatches = checks.iter().filter(|c| !c.ok()).count();
    match csv {
        Some(path) => {
            write_csv(&checks, fs::File::create(path)?)?;
        }
        None => write_csv(&checks, std::io::stdout().lock())?,
    }
    let summary = format!("rows={} mismatches={mismatches}", checks.len());
    if csv.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}
