//! `finconv`: validation, reflectors, map classification, compactness,
//! enumeration, witness search, law suites and tables.
//!
//! Exit codes: 0 pass, 1 law failure, 2 input error. `FINCONV_WORKERS`
//! sets the number of worker threads.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use finconv::compact::is_compact_at;
use finconv::enumerate::{enumerate, search, ConvClass, EnumerationSpec, Sample, SearchTask, PREDICATES};
use finconv::functor::check_functor_laws;
use finconv::io::{
    context_from_documents, convergence_json, parse_convergence, parse_family, report_json, search_json, to_pretty,
    validate_files,
};
use finconv::laws::{emit_tables, run_laws, LawsReport, Reversal, Suite, Tables, Tally};
use finconv::symbolic::{fan_check, prime_check, Exemplar};
use finconv::{Error, FilterClass, Functor};

#[derive(Parser)]
#[command(name = "finconv", version, about = "Finite convergence spaces")]
struct Cli {
    /// Output format; `table` applies to `laws` and `tables`.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Check convergence and witness documents against the schema and axioms.
    Validate {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Apply a reflector (T, S0, S1, S), coreflector (Seq, I1, K) or I.
    Reflect {
        #[arg(long)]
        functor: Functor,
        path: PathBuf,
    },
    /// Classify a surjection between two convergences.
    ClassifyMap {
        #[arg(long)]
        map: PathBuf,
        #[arg(long)]
        source: PathBuf,
        /// Defaults to the final convergence of the source.
        #[arg(long)]
        target: Option<PathBuf>,
        /// Explain every false flag.
        #[arg(long)]
        witness: bool,
    },
    /// Decide whether a family is compact at another family.
    CheckCompact {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        family: PathBuf,
        #[arg(long)]
        at: PathBuf,
        /// F0_CLOSED, F0, F1 or F.
        #[arg(long, default_value = "F")]
        class: FilterClass,
    },
    /// Enumerate convergences, pseudotopologies, pretopologies or topologies.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long, default_value = "convergence")]
        class: ConvClass,
        #[arg(long)]
        count_only: bool,
        /// Draw this many random members instead of enumerating.
        #[arg(long)]
        sample: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Find the first triple satisfying a registered predicate.
    Search {
        #[arg(long, required_unless_present = "list")]
        predicate: Option<String>,
        /// Also write the witness document to this file.
        #[arg(long)]
        emit: Option<PathBuf>,
        /// List the registered predicates.
        #[arg(long)]
        list: bool,
    },
    /// Run every law suite on carriers of at most `size` points.
    Laws {
        #[arg(long, default_value_t = 2)]
        size: usize,
        /// Convergence files checked first and added as a suite.
        #[arg(long = "input")]
        inputs: Vec<PathBuf>,
    },
    /// Emit the preservation and implication tables.
    Tables,
    /// Checks on the infinite exemplars.
    Exemplar {
        /// fan or prime
        name: Exemplar,
        #[arg(long)]
        check: bool,
    },
}

enum Status {
    Pass,
    Fail,
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Document(format!("cannot read {}: {e}", path.display())))
}

fn print(v: &Value) {
    println!("{}", to_pretty(v));
}

fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Fail
    }
}

fn mark(t: &Tally) -> &'static str {
    if t.passed() {
        "PASS"
    } else {
        "FAIL"
    }
}

fn laws_table(r: &LawsReport) {
    println!("laws on at most {} points", r.size);
    for s in &r.suites {
        println!(
            "{} {:<30} {:>10} instances {:>6} failures",
            mark(&s.tally),
            s.name,
            s.tally.instances,
            s.tally.failures
        );
        if let Some(f) = &s.tally.first_failure {
            println!("     first failure: {f}");
        }
    }
    println!("preservation table");
    for c in &r.preservation_table {
        println!(
            "{} {:<22} preserves {:<22} {:>8} instances",
            mark(&c.tally),
            c.quotient_type,
            c.property,
            c.tally.instances
        );
    }
}

fn tables_table(t: &Tables) {
    println!("preservation ({} triples)", t.triples);
    for row in &t.preservation {
        println!(
            "{:<22} {:<3} {:<22} {}",
            row.quotient_type, row.reflector, row.property, row.je_type
        );
        for c in &row.preserves {
            println!(
                "    {} {:<22} {:>8} instances",
                mark(&c.tally),
                c.property,
                c.tally.instances
            );
        }
    }
    println!("implications");
    for a in &t.implications {
        let rev = match &a.reversal {
            Reversal::Witness { predicate, .. } => format!("not reversible, witness {predicate}"),
            Reversal::CollapsesAtFiniteScale { checked, .. } => {
                format!("collapses at finite scale ({checked} triples)")
            }
        };
        println!(
            "{} {} => {} {:>8} instances; {}",
            mark(&a.tally),
            a.stronger,
            a.weaker,
            a.tally.instances,
            rev
        );
    }
    println!(
        "example: {}: expected vector {}",
        t.example.name,
        if t.example.expected_vector_holds {
            "holds"
        } else {
            "FAILS"
        }
    );
}

fn run(cli: Cli) -> Result<Status, Error> {
    match cli.command {
        Command::Validate { paths } => {
            let d = validate_files(&paths);
            let ok = d.iter().all(|d| d.ok);
            print(&serde_json::to_value(&d)?);
            if ok {
                Ok(Status::Pass)
            } else {
                Err(Error::Document("some documents are invalid".into()))
            }
        }
        Command::Reflect { functor, path } => {
            let conv = parse_convergence(&read(&path)?)?;
            print(&convergence_json(&functor.apply(&conv)));
            Ok(Status::Pass)
        }
        Command::ClassifyMap {
            map,
            source,
            target,
            witness,
        } => {
            let target = target.as_deref().map(read).transpose()?;
            let ctx = context_from_documents(&read(&map)?, &read(&source)?, target.as_deref())?;
            let report = ctx.classify()?;
            let witnesses = if witness { Some(ctx.witnesses(&report)?) } else { None };
            print(&report_json(&report, witnesses.as_deref()));
            Ok(Status::Pass)
        }
        Command::CheckCompact {
            space,
            family,
            at,
            class,
        } => {
            let conv = parse_convergence(&read(&space)?)?;
            let fam = parse_family(&read(&family)?, conv.carrier())?;
            let at = parse_family(&read(&at)?, conv.carrier())?;
            let compact = is_compact_at(&conv, &fam, &at, class)?;
            print(&json!({ "class": class.tag(), "compact": compact }));
            Ok(Status::Pass)
        }
        Command::Enumerate {
            size,
            class,
            count_only,
            sample,
            seed,
        } => {
            let spec = EnumerationSpec {
                size,
                class,
                sample: sample.map(|count| Sample { seed, count }),
            };
            let convs = enumerate(&spec)?;
            if count_only {
                print(&json!({ "size": size, "class": class.name(), "count": convs.len() }));
            } else {
                print(&Value::from(convs.iter().map(convergence_json).collect::<Vec<_>>()));
            }
            Ok(Status::Pass)
        }
        Command::Search { predicate, emit, list } => {
            if list {
                let names: Vec<Value> = PREDICATES
                    .iter()
                    .map(|p| json!({ "name": p.name, "description": p.description }))
                    .collect();
                print(&Value::from(names));
                return Ok(Status::Pass);
            }
            let name = predicate.expect("required unless --list");
            let task = SearchTask::new(&name)?;
            let doc = search_json(task.predicate.name, &search(&task)?);
            if let Some(path) = emit {
                fs::write(&path, to_pretty(&doc) + "\n")
                    .map_err(|e| Error::Document(format!("cannot write {}: {e}", path.display())))?;
            }
            print(&doc);
            Ok(Status::Pass)
        }
        Command::Laws { size, inputs } => {
            let mut convs = Vec::new();
            for path in &inputs {
                let text = read(path)?;
                let conv = parse_convergence(&text).map_err(|e| Error::Document(format!("{}: {e}", path.display())))?;
                convs.push(conv);
            }
            let mut report = run_laws(size)?;
            if !convs.is_empty() {
                let mut tally = Tally::default();
                for conv in &convs {
                    for functor in Functor::ALL {
                        let r = check_functor_laws(functor, std::slice::from_ref(conv), &[(0, 0)]);
                        tally.absorb(Tally::from_law_report(&r));
                    }
                }
                report.suites.push(Suite {
                    name: "input-files",
                    claim: "functor laws hold on the given convergences",
                    tally,
                });
            }
            match cli.format {
                Format::Json => print(&serde_json::to_value(&report)?),
                Format::Table => laws_table(&report),
            }
            if let Some((suite, failure)) = report.first_failure() {
                eprintln!("law failure in {suite}: {failure}");
            }
            Ok(status(report.passed()))
        }
        Command::Tables => {
            let tables = emit_tables()?;
            match cli.format {
                Format::Json => print(&serde_json::to_value(&tables)?),
                Format::Table => tables_table(&tables),
            }
            Ok(status(tables.passed()))
        }
        Command::Exemplar { name, check } => {
            if !check {
                print(&json!({
                    "exemplar": name.name(),
                    "checks": "run with --check to verify the exemplar",
                }));
                return Ok(Status::Pass);
            }
            match name {
                Exemplar::Fan => {
                    let r = fan_check()?;
                    print(&serde_json::to_value(&r)?);
                    Ok(status(r.passed()))
                }
                Exemplar::Prime => {
                    let r = prime_check()?;
                    print(&serde_json::to_value(&r)?);
                    Ok(status(r.passed()))
                }
            }
        }
    }
}

fn init_workers() -> Result<(), Error> {
    let Ok(value) = std::env::var("FINCONV_WORKERS") else {
        return Ok(());
    };
    let n: usize = value
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Document(format!("FINCONV_WORKERS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Document(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_workers().and_then(|_| run(cli)) {
        Ok(Status::Pass) => ExitCode::SUCCESS,
        Ok(Status::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
