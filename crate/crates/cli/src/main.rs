//! Command-line front end: treat task files, score strategies against
//! gold annotations, parse/clausify formulas, and query antonyms.
//!
//! Exit codes: 0 success, 1 usage errors, 2 data errors.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use negatus::align::{self, Strategy, TreatConfig};
use negatus::corpus::{self, PredictionRecord};
use negatus::eval;
use negatus::fol::{self, FolError};
use negatus::textprep::{StopwordList, TaskText};
use negatus::wordnet::{Lexicon, PosClass};

/// Environment variable consulted when --wordnet is not given.
const WORDNET_ENV: &str = "WNSEARCHDIR";

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

#[derive(Parser)]
#[command(
    name = "negatus",
    version,
    about = "Aligns textual negation cues with logical negations, narrows negation scopes \
             and substitutes antonyms in first-order formulas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PipelineOpts {
    /// Word-window size around a negation cue.
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// WordNet dict directory (defaults to $WNSEARCHDIR when set).
    #[arg(long)]
    wordnet: Option<PathBuf>,
    /// Stopword list override, one lowercase word per line.
    #[arg(long)]
    stopwords: Option<PathBuf>,
    /// Role-predicate exclusion list override, one predicate per line.
    #[arg(long = "exclude-roles")]
    exclude_roles: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Treat the negations of each task: detect cues, align them to the
    /// formula's negations, pick negati, narrow scopes and substitute
    /// antonyms. Emits one JSON prediction line per task.
    Treat {
        /// JSON-lines task file ({id, text, formula, gold?}).
        tasks: PathBuf,
        /// Negatus strategy.
        #[arg(long, default_value = "comb")]
        strategy: String,
        #[command(flatten)]
        opts: PipelineOpts,
        /// Write predictions here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Score negatus predictions against gold annotations (measure B)
    /// and render the per-strategy report table.
    Eval {
        /// Task files; each file is reported as one split. With --cdsco
        /// the single task file supplies formulas keyed by sentence id.
        tasks: Vec<PathBuf>,
        /// CD-SCO gold file to score against (requires one task file).
        #[arg(long)]
        cdsco: Option<PathBuf>,
        /// Restrict to one strategy (default: all five).
        #[arg(long)]
        strategy: Option<String>,
        /// Exclude gold-empty cases from precision.
        #[arg(long)]
        filtered: bool,
        /// Emit comma-separated values instead of the aligned table.
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        opts: PipelineOpts,
        /// Write the report here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse formulas (one per line) and print their canonical or
    /// clausified form.
    Parse {
        /// Formula file.
        file: PathBuf,
        /// Print clause normal form instead of the canonical rendering.
        #[arg(long)]
        clausify: bool,
    },
    /// Look up antonyms of a lemma in WordNet.
    Antonym {
        lemma: String,
        /// Word class: noun, verb, adj or adv.
        pos: String,
        /// WordNet dict directory (defaults to $WNSEARCHDIR when set).
        #[arg(long)]
        wordnet: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let code = match cli.command {
        Command::Treat {
            tasks,
            strategy,
            opts,
            out,
        } => cmd_treat(&tasks, &strategy, &opts, out),
        Command::Eval {
            tasks,
            cdsco,
            strategy,
            filtered,
            csv,
            opts,
            out,
        } => cmd_eval(&tasks, cdsco, strategy, filtered, csv, &opts, out),
        Command::Parse { file, clausify } => cmd_parse(&file, clausify),
        Command::Antonym {
            lemma,
            pos,
            wordnet,
        } => cmd_antonym(&lemma, &pos, wordnet),
    };
    ExitCode::from(code)
}

fn parse_strategy(name: &str) -> Result<Strategy, u8> {
    Strategy::parse(name).ok_or_else(|| {
        eprintln!("unknown strategy '{name}'; expected one of baseline, fns, fv, fv-fns, comb");
        EXIT_USAGE
    })
}

fn load_stopwords(path: &Option<PathBuf>) -> Result<StopwordList, u8> {
    match path {
        None => Ok(StopwordList::default_list()),
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => Ok(StopwordList::from_text(&text)),
            Err(e) => {
                eprintln!("cannot read stopword list {}: {e}", path.display());
                Err(EXIT_DATA)
            }
        },
    }
}

fn load_role_exclusions(path: &Option<PathBuf>) -> Result<BTreeSet<String>, u8> {
    match path {
        None => Ok(negatus::DEFAULT_ROLE_EXCLUSIONS
            .iter()
            .map(|s| s.to_string())
            .collect()),
        Some(path) => match fs::read_to_string(path) {
            Ok(text) => Ok(text
                .lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(|l| l.to_lowercase())
                .collect()),
            Err(e) => {
                eprintln!("cannot read role exclusion list {}: {e}", path.display());
                Err(EXIT_DATA)
            }
        },
    }
}

fn wordnet_dir(flag: Option<PathBuf>) -> Option<PathBuf> {
    flag.or_else(|| std::env::var_os(WORDNET_ENV).map(PathBuf::from))
}

/// Loads the lexicon when a directory is configured; `None` runs the
/// pipeline without lemmatization and antonyms.
fn load_lexicon(flag: Option<PathBuf>) -> Result<Option<Lexicon>, u8> {
    let Some(dir) = wordnet_dir(flag) else {
        eprintln!(
            "note: no WordNet directory configured (--wordnet or ${WORDNET_ENV}); \
                   lemmatization and antonym substitution are disabled"
        );
        return Ok(None);
    };
    match Lexicon::load(&dir) {
        Ok(mut lexicon) => {
            lexicon.add_overrides(negatus::DEFAULT_ANTONYM_OVERRIDES);
            let stats = lexicon.stats();
            eprintln!(
                "loaded WordNet from {}: {} index entries, {} synsets, {} exceptions",
                dir.display(),
                stats.entries,
                stats.synsets,
                stats.exceptions
            );
            Ok(Some(lexicon))
        }
        Err(e) => {
            eprintln!("failed to load WordNet from {}: {e}", dir.display());
            Err(EXIT_DATA)
        }
    }
}

fn build_config(k: usize, strategy: Strategy, opts: &PipelineOpts) -> Result<TreatConfig, u8> {
    if k == 0 {
        eprintln!("--k must be at least 1");
        return Err(EXIT_USAGE);
    }
    Ok(TreatConfig {
        k,
        strategy,
        role_exclusions: load_role_exclusions(&opts.exclude_roles)?,
        ..TreatConfig::default()
    })
}

fn write_output(data: &str, out: Option<PathBuf>) -> u8 {
    match out {
        None => {
            print!("{data}");
            0
        }
        Some(path) => match fs::write(&path, data) {
            Ok(()) => 0,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                EXIT_DATA
            }
        },
    }
}

fn cmd_treat(tasks: &Path, strategy: &str, opts: &PipelineOpts, out: Option<PathBuf>) -> u8 {
    let strategy = match parse_strategy(strategy) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let (stopwords, config, lexicon) = match (
        load_stopwords(&opts.stopwords),
        build_config(opts.k, strategy, opts),
        load_lexicon(opts.wordnet.clone()),
    ) {
        (Ok(s), Ok(c), Ok(l)) => (s, c, l),
        (s, c, l) => return s.err().or(c.err()).or(l.err()).unwrap(),
    };

    let task_file = match corpus::read_tasks(tasks) {
        Ok(f) => f,
        Err(e) => {
            eprintln!("{e}");
            return EXIT_DATA;
        }
    };
    for failure in &task_file.failures {
        eprintln!("{}:{}: {}", tasks.display(), failure.line, failure.message);
    }

    let mut records = Vec::new();
    for record in &task_file.records {
        let text = TaskText::from_raw(&record.text, &stopwords, lexicon.as_ref());
        let result = align::treat(&text, &record.formula, &config, lexicon.as_ref());
        let negati: Vec<String> = result
            .assignments
            .iter()
            .map(|a| match result.negatus_for_cue(a.cue_id) {
                Some(n) => match &n.inverse {
                    Some(inv) => format!(
                        "x{} -> y{}: {} (inverse {inv})",
                        a.cue_id, a.site_id, n.lemma
                    ),
                    None => format!("x{} -> y{}: {}", a.cue_id, a.site_id, n.lemma),
                },
                None => format!("x{} -> y{}: no negatus", a.cue_id, a.site_id),
            })
            .collect();
        eprintln!(
            "task {}: {} cue(s), {} negation(s), {} assignment(s){}{}",
            record.id,
            result.cues.len(),
            result.sites.len(),
            result.assignments.len(),
            if negati.is_empty() { "" } else { "; " },
            negati.join("; ")
        );
        records.push(PredictionRecord::from_result(&record.id, &result));
    }

    let code = write_output(&corpus::predictions_to_string(&records), out);
    if code != 0 {
        return code;
    }
    if task_file.failures.is_empty() {
        0
    } else {
        EXIT_DATA
    }
}

fn cmd_eval(
    tasks: &[PathBuf],
    cdsco: Option<PathBuf>,
    strategy: Option<String>,
    filtered: bool,
    csv: bool,
    opts: &PipelineOpts,
    out: Option<PathBuf>,
) -> u8 {
    if tasks.is_empty() {
        eprintln!("eval needs at least one task file");
        return EXIT_USAGE;
    }
    if cdsco.is_some() && tasks.len() != 1 {
        eprintln!("--cdsco expects exactly one task file supplying the formulas");
        return EXIT_USAGE;
    }
    let strategies: Vec<Strategy> = match &strategy {
        None => Strategy::ALL.to_vec(),
        Some(name) => match parse_strategy(name) {
            Ok(s) => vec![s],
            Err(code) => return code,
        },
    };
    let (stopwords, lexicon) = match (
        load_stopwords(&opts.stopwords),
        load_lexicon(opts.wordnet.clone()),
    ) {
        (Ok(s), Ok(l)) => (s, l),
        (s, l) => return s.err().or(l.err()).unwrap(),
    };

    let mut runs = Vec::new();
    for task_path in tasks {
        let split = task_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| task_path.display().to_string());
        let task_file = match corpus::read_tasks(task_path) {
            Ok(f) => f,
            Err(e) => {
                eprintln!("{e}");
                return EXIT_DATA;
            }
        };
        for failure in &task_file.failures {
            eprintln!(
                "{}:{}: {}",
                task_path.display(),
                failure.line,
                failure.message
            );
        }

        let sentences = match &cdsco {
            None => None,
            Some(path) => match corpus::read_cdsco(path) {
                Ok(s) => Some(s),
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_DATA;
                }
            },
        };

        for &strategy in &strategies {
            let config = match build_config(opts.k, strategy, opts) {
                Ok(c) => c,
                Err(code) => return code,
            };
            let (predictions, gold) = match &sentences {
                Some(sentences) => {
                    let (predictions, gold, failures) = eval::cdsco_cases(
                        sentences,
                        &task_file.records,
                        &config,
                        lexicon.as_ref(),
                        &stopwords,
                    );
                    for key in failures {
                        eprintln!("no formula for corpus sentence {key}");
                    }
                    (predictions, gold)
                }
                None => eval::task_cases(&task_file.records, &config, lexicon.as_ref(), &stopwords),
            };
            match eval::score(strategy.name(), &split, &predictions, &gold, filtered) {
                Ok(run) => {
                    if run.gold_count == 0 {
                        eprintln!(
                            "warning: split {split} has no gold negati; recall degenerates to 0"
                        );
                    }
                    runs.push(run);
                }
                Err(e) => {
                    eprintln!("{e}");
                    return EXIT_DATA;
                }
            }
        }
    }

    let report = if csv {
        eval::report_csv(&runs)
    } else {
        eval::report_table(&runs)
    };
    write_output(&report, out)
}

fn cmd_parse(file: &Path, clausify: bool) -> u8 {
    let text = match fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", file.display());
            return EXIT_DATA;
        }
    };
    let mut ok = true;
    for (number, line) in text.lines().enumerate() {
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        // Unbound variables are fine here: such lines are open rule
        // templates (clause variables are implicitly universal).
        let parsed = fol::parse_formula(line).or_else(|e| match e {
            FolError::UnboundVariable { .. } => fol::parse_open_formula(line),
            other => Err(other),
        });
        let formula = match parsed {
            Ok(f) => f,
            Err(e) => {
                eprintln!("{}:{}: {e}", file.display(), number + 1);
                ok = false;
                continue;
            }
        };
        if clausify {
            match fol::clausify(&formula) {
                Ok(clauses) => {
                    for clause in clauses {
                        println!("{clause}");
                    }
                }
                Err(e) => {
                    eprintln!("{}:{}: {e}", file.display(), number + 1);
                    ok = false;
                }
            }
        } else {
            println!("{}", fol::print_formula(&formula));
        }
    }
    if ok {
        0
    } else {
        EXIT_DATA
    }
}

fn cmd_antonym(lemma: &str, pos: &str, wordnet: Option<PathBuf>) -> u8 {
    let Some(class) = PosClass::parse(pos) else {
        eprintln!("unknown word class '{pos}'; expected noun, verb, adj or adv");
        return EXIT_USAGE;
    };
    let Some(dir) = wordnet_dir(wordnet) else {
        eprintln!("antonym lookup needs --wordnet DIR or ${WORDNET_ENV}");
        return EXIT_USAGE;
    };
    let mut lexicon = match Lexicon::load(&dir) {
        Ok(l) => l,
        Err(e) => {
            eprintln!("failed to load WordNet from {}: {e}", dir.display());
            return EXIT_DATA;
        }
    };
    lexicon.add_overrides(negatus::DEFAULT_ANTONYM_OVERRIDES);
    for antonym in lexicon.antonym(lemma, class).antonyms {
        println!("{antonym}");
    }
    0
}
