use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use mqnli::corpus::{
    corpus_stats, generate_corpus, informative_subset, read_records, tsv_header, validate_records, write_records, CorpusConfig,
    CorpusError, Format,
};
use mqnli::folsem::Formula;
use mqnli::fragment::{LexiconError, ParseError};
use mqnli::natlog::{NatLogError, QuantifierTable, QUANTIFIER_TABLE_BOUND};
use mqnli::oracle::{OracleError, DEFAULT_BOUND};
use mqnli::relations::{derive_join_table, derive_negation_table, RelationError, JOIN_UNIVERSE, NEGATION_UNIVERSE};
use mqnli::{corpus, Lexicon, LexiconSource, NatLog, NliPair, Oracle};
use serde_json::json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::GenerateArgs;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("output directory {0} does not exist")]
    MissingDirectory(PathBuf),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("config {path}: {source}")]
    ConfigFile { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error("{which}: {source}")]
    Parse { which: &'static str, source: ParseError },
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    NatLog(#[from] NatLogError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("{path}: {message}")]
    Table { path: PathBuf, message: String },
    #[error("validation failed with {0} problem(s)")]
    ValidationFailed(usize),
}

impl CliError {
    /// 1 for usage and environment problems, 2 for invariant or validation failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_)
            | CliError::MissingDirectory(_)
            | CliError::Io { .. }
            | CliError::ConfigFile { .. }
            | CliError::Lexicon(_)
            | CliError::Parse { .. } => 1,
            CliError::Corpus(CorpusError::Config(_) | CorpusError::Io(_)) => 1,
            _ => 2,
        }
    }
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn require_directory(dir: &Path) -> Result<(), CliError> {
    if dir.is_dir() {
        Ok(())
    } else {
        Err(CliError::MissingDirectory(dir.to_path_buf()))
    }
}

fn write_file(path: &Path, contents: &[u8]) -> Result<(), CliError> {
    fs::write(path, contents).map_err(io_error(path))
}

fn parse_format(name: &str) -> Result<Format, CliError> {
    name.parse()
        .map_err(|_| CliError::Usage(format!("unknown format {name:?}, expected jsonl or tsv")))
}

fn format_for(path: &Path, explicit: Option<&str>) -> Result<Format, CliError> {
    if let Some(name) = explicit {
        return parse_format(name);
    }
    match path.extension().and_then(|e| e.to_str()) {
        Some("jsonl") => Ok(Format::Jsonl),
        Some("tsv") => Ok(Format::Tsv),
        _ => Err(CliError::Usage(format!(
            "cannot infer the format of {}; pass --format",
            path.display()
        ))),
    }
}

fn lexicon_from(wordlist: Option<&str>) -> Result<Lexicon, CliError> {
    let config = CorpusConfig {
        wordlist: wordlist.map(str::to_string),
        ..Default::default()
    };
    Ok(Lexicon::build(&config.lexicon_source())?)
}

fn oracle_at(bound: Option<usize>) -> Result<Oracle, CliError> {
    Ok(Oracle::new(bound.unwrap_or(DEFAULT_BOUND))?)
}

/// Parsed `generate` invocation: file values overridden by flags.
#[derive(Debug)]
pub struct RunConfig {
    pub corpus: CorpusConfig,
    pub tables: Option<PathBuf>,
    pub verbosity: u8,
}

impl RunConfig {
    pub fn from_args(args: GenerateArgs, verbosity: u8) -> Result<RunConfig, CliError> {
        let mut corpus = match &args.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(io_error(path))?;
                serde_json::from_str(&text).map_err(|source| CliError::ConfigFile {
                    path: path.clone(),
                    source,
                })?
            }
            None => CorpusConfig::default(),
        };
        if let Some(seed) = args.seed {
            corpus.seed = seed;
        }
        if let Some(bound) = args.bound {
            corpus.oracle_bound = bound;
        }
        if let Some(out) = args.out {
            corpus.out = out;
        }
        if let Some(format) = &args.format {
            corpus.format = parse_format(format)?;
        }
        if args.witnesses {
            corpus.witnesses = true;
        }
        if args.no_balance_labels {
            corpus.balance_labels = false;
        }
        if args.no_relation_balance {
            corpus.relation_balanced = false;
        }
        if let Some(n) = args.train {
            corpus.train = n;
        }
        if let Some(n) = args.dev {
            corpus.dev = n;
        }
        if let Some(n) = args.test {
            corpus.test = n;
        }
        if args.wordlist.is_some() {
            corpus.wordlist = args.wordlist;
        }
        corpus.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        require_directory(Path::new(&corpus.out))?;
        if let LexiconSource::Wordlist(path) = corpus.lexicon_source() {
            if !path.is_file() {
                return Err(CliError::Usage(format!("wordlist {} does not exist", path.display())));
            }
        }
        if let Some(dir) = &args.tables {
            require_directory(dir)?;
        }
        Ok(RunConfig {
            corpus,
            tables: args.tables,
            verbosity,
        })
    }
}

const JOIN_FILE: &str = "join.tsv";
const NEGATION_FILE: &str = "negation.tsv";
const QUANTIFIER_FILE: &str = "quantifier.tsv";
const MANIFEST_FILE: &str = "manifest.json";

pub fn tables(out: &Path, verbosity: u8) -> Result<(), CliError> {
    require_directory(out)?;
    let started = Instant::now();
    let join = derive_join_table()?.to_tsv();
    let negation = derive_negation_table()?.to_tsv();
    let quantifier = QuantifierTable::derive(QUANTIFIER_TABLE_BOUND)?.to_tsv();
    let manifest = json!({
        "tables": [
            {
                "file": JOIN_FILE,
                "method": "subset enumeration",
                "universe": JOIN_UNIVERSE,
                "saturation": [JOIN_UNIVERSE - 1, JOIN_UNIVERSE],
                "sha256": sha256_hex(join.as_bytes()),
            },
            {
                "file": NEGATION_FILE,
                "method": "subset enumeration",
                "universe": NEGATION_UNIVERSE,
                "saturation": [NEGATION_UNIVERSE - 1, NEGATION_UNIVERSE],
                "sha256": sha256_hex(negation.as_bytes()),
            },
            {
                "file": QUANTIFIER_FILE,
                "method": "bounded model search",
                "bound": QUANTIFIER_TABLE_BOUND,
                "saturation": [QUANTIFIER_TABLE_BOUND, QUANTIFIER_TABLE_BOUND + 1],
                "rows": QuantifierTable::ROWS,
                "sha256": sha256_hex(quantifier.as_bytes()),
            },
        ]
    });
    write_file(&out.join(JOIN_FILE), join.as_bytes())?;
    write_file(&out.join(NEGATION_FILE), negation.as_bytes())?;
    write_file(&out.join(QUANTIFIER_FILE), quantifier.as_bytes())?;
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&out.join(MANIFEST_FILE), text.as_bytes())?;
    if verbosity > 0 {
        eprintln!("tables written to {} in {:.2?}", out.display(), started.elapsed());
    }
    Ok(())
}

/// Loads the quantifier table from `dir`, deriving all tables first when
/// it is missing, and checks it against the manifest hash.
fn load_quantifier_table(dir: &Path, verbosity: u8) -> Result<&'static QuantifierTable, CliError> {
    let path = dir.join(QUANTIFIER_FILE);
    if !path.exists() {
        tables(dir, verbosity)?;
    }
    let text = fs::read_to_string(&path).map_err(io_error(&path))?;
    let manifest_path = dir.join(MANIFEST_FILE);
    if manifest_path.exists() {
        let manifest = fs::read_to_string(&manifest_path).map_err(io_error(&manifest_path))?;
        let manifest: serde_json::Value = serde_json::from_str(&manifest).map_err(|source| CliError::ConfigFile {
            path: manifest_path.clone(),
            source,
        })?;
        let recorded = manifest["tables"]
            .as_array()
            .and_then(|t| t.iter().find(|e| e["file"] == QUANTIFIER_FILE))
            .and_then(|e| e["sha256"].as_str());
        if let Some(recorded) = recorded {
            if recorded != sha256_hex(text.as_bytes()) {
                return Err(CliError::Table {
                    path,
                    message: "content hash does not match manifest.json".to_string(),
                });
            }
        }
    }
    let table = QuantifierTable::from_tsv(&text)?;
    Ok(Box::leak(Box::new(table)))
}

pub fn generate(run: RunConfig) -> Result<(), CliError> {
    let config = &run.corpus;
    let started = Instant::now();
    let lexicon = Lexicon::build(&config.lexicon_source())?;
    let oracle = Oracle::new(config.oracle_bound)?;
    let mut natlog = NatLog::new().with_fallback(Some(oracle));
    if let Some(dir) = &run.tables {
        natlog = natlog.with_table(load_quantifier_table(dir, run.verbosity)?);
    }
    let corpus = generate_corpus(config, &lexicon, &natlog, &oracle)?;
    let out = PathBuf::from(&config.out);
    let config_json = serde_json::to_string(config).expect("config serializes");
    let header = tsv_header(config.seed, &config_json);
    let mut files = serde_json::Map::new();
    for (split, records) in &corpus.splits {
        let name = format!("{}.{}", split.name(), config.format.extension());
        let path = out.join(&name);
        let mut bytes = Vec::new();
        write_records(&mut bytes, records, config.format, Some(&header))?;
        write_file(&path, &bytes)?;
        files.insert(name, json!(sha256_hex(&bytes)));
    }
    let mut stats = serde_json::to_string_pretty(&corpus.stats).expect("stats serialize");
    stats.push('\n');
    write_file(&out.join("stats.json"), stats.as_bytes())?;
    files.insert("stats.json".to_string(), json!(sha256_hex(stats.as_bytes())));
    let manifest = json!({
        "seed": config.seed,
        "config": config,
        "quantifier_table_sha256": sha256_hex(natlog.table().to_tsv().as_bytes()),
        "files": files,
    });
    let mut text = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    text.push('\n');
    write_file(&out.join(MANIFEST_FILE), text.as_bytes())?;

    let s = &corpus.stats;
    let labels: Vec<String> = s.labels.iter().map(|(l, n)| format!("{l} {n}")).collect();
    eprintln!(
        "wrote {} records to {} (seed {}): {}; fallback rate {:.4}; informative {}",
        s.records,
        out.display(),
        config.seed,
        labels.join(", "),
        s.fallback_rate,
        s.informative
    );
    if let Some(audit) = &s.audit {
        eprintln!(
            "audit: {} records re-labeled at bound {}, {} mismatches",
            audit.sampled, audit.bound, audit.mismatches
        );
    }
    if run.verbosity > 0 {
        eprintln!("{} candidates in {:.2?}", s.candidates, started.elapsed());
    }
    Ok(())
}

fn print_formula(label: &str, f: &Formula, names: &dyn mqnli::folsem::PredicateNames) {
    println!("{label}: {}", f.display(names));
}

pub fn label(premise: &str, hypothesis: &str, explain: bool, bound: Option<usize>, wordlist: Option<&str>) -> Result<(), CliError> {
    let lexicon = lexicon_from(wordlist)?;
    let parse = |which: &'static str, text: &str| lexicon.parse_str(text).map_err(|source| CliError::Parse { which, source });
    let pair = NliPair::new(parse("premise", premise)?, parse("hypothesis", hypothesis)?);
    let oracle = oracle_at(bound)?;
    let natlog = NatLog::new().with_fallback(Some(oracle));
    let labeled = natlog.label(&pair)?;
    let nodes = natlog.relations(&pair);
    println!("label: {}", labeled.label);
    println!("labeler: {}", labeled.provenance.name());
    println!("relation: {}", nodes.root);
    println!("negation_count: {}", pair.negation_count());
    println!("informative: {}", corpus::is_informative(&pair, labeled.label, &natlog)?);
    if !explain {
        return Ok(());
    }
    let slots = nodes.slots;
    println!("subject_np: {}", slots.subject);
    println!("vp: {}", slots.verb_phrase);
    println!("object_np: {}", slots.object);
    println!("object_quantifier_node: {}", nodes.inner);
    println!("negation_node: {}", nodes.body);
    let enc = oracle.encode(&pair);
    print_formula("premise_fol", &enc.premise, &enc.signature);
    print_formula("hypothesis_fol", &enc.hypothesis, &enc.signature);
    println!("background:");
    for f in &enc.background {
        println!("  {}", f.display(&enc.signature));
    }
    let verdict = oracle.decide_label(&pair)?;
    println!("oracle: {} (bound {})", verdict.label, verdict.bound_used);
    for (name, model) in [
        ("countermodel against entailment", &verdict.against_entailment),
        ("countermodel against contradiction", &verdict.against_contradiction),
    ] {
        match model {
            Some(m) => {
                println!("{name}:");
                for line in m.display(&enc.signature).to_string().lines() {
                    println!("  {line}");
                }
            }
            None => println!("{name}: none within bound"),
        }
    }
    Ok(())
}

fn load(file: &Path, format: Format, lexicon: &Lexicon) -> Result<Vec<corpus::LoadedRecord>, CliError> {
    let input = File::open(file).map_err(io_error(file))?;
    Ok(read_records(BufReader::new(input), format, lexicon)?)
}

pub fn validate(
    file: &Path,
    bound: Option<usize>,
    sample_rate: f64,
    seed: u64,
    format: Option<&str>,
    wordlist: Option<&str>,
) -> Result<(), CliError> {
    if !(0.0..=1.0).contains(&sample_rate) {
        return Err(CliError::Usage("--sample-rate must lie in [0, 1]".to_string()));
    }
    let format = format_for(file, format)?;
    let lexicon = lexicon_from(wordlist)?;
    let oracle = oracle_at(bound)?;
    let natlog = NatLog::new().with_fallback(Some(oracle));
    let records = load(file, format, &lexicon)?;
    let report = validate_records(&records, &lexicon, &natlog, &oracle, sample_rate, seed)?;
    for f in &report.failures {
        println!("line {}: {}: {}", f.line, f.kind, f.message);
    }
    println!(
        "{} records, {} re-labeled at bound {}, {} problem(s)",
        report.records,
        report.relabeled,
        report.bound,
        report.failures.len()
    );
    if report.is_clean() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed(report.failures.len()))
    }
}

pub fn stats(file: &Path, format: Option<&str>, out: Option<&Path>, wordlist: Option<&str>) -> Result<(), CliError> {
    let format = format_for(file, format)?;
    let lexicon = lexicon_from(wordlist)?;
    let loaded = load(file, format, &lexicon)?;
    let mut records: Vec<_> = loaded.into_iter().map(|l| l.record).collect();
    if format == Format::Tsv {
        informative_subset(&mut records, &lexicon, &NatLog::new())?;
    }
    let mut text = serde_json::to_string_pretty(&corpus_stats(&records)).expect("stats serialize");
    text.push('\n');
    match out {
        Some(path) => write_file(path, text.as_bytes()),
        None => {
            let stdout = std::io::stdout();
            let mut w = BufWriter::new(stdout.lock());
            w.write_all(text.as_bytes())
                .and_then(|_| w.flush())
                .map_err(io_error(Path::new("stdout")))
        }
    }
}
