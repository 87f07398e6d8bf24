//! `ppart`: count, enumerate, construct, search and verify perfect partitions.
//!
//! Exit status: 0 on success, 1 when a check fails or no partition exists,
//! 2 on bad input.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use perfect_partition::construct::{self, l61};
use perfect_partition::golden::{self, Table};
use perfect_partition::matchings::{block_class, cycle_class};
use perfect_partition::search::NoneReason;
use perfect_partition::verify::check_extendability;
use perfect_partition::{
    check_partition, enumerate, find_perfect_partition, necessary_condition, AdjacencyMatrix,
    GraphSpec, PartitionCertificate, Permutation, SearchOptions, SearchOutcome,
};

#[derive(Parser)]
#[command(
    name = "ppart",
    version,
    about = "Perfect partitions of L(rm, r) graphs"
)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "PPART_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count perfect matchings and check the divisibility condition.
    Count {
        #[command(flatten)]
        graph: GraphArgs,
        /// Also compute the permanent directly and compare.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// List every perfect matching.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        /// Tag each matching with its cycle or block class.
        #[arg(long)]
        classify: bool,
        #[arg(long)]
        json: bool,
    },
    /// Build a partition and write its certificate.
    Construct {
        /// l61, l82, knn:N or l2nn:N.
        #[arg(long)]
        target: String,
        /// Certificate path (default: <target>.json).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Withheld zone for l61.
        #[arg(long, default_value_t = l61::DEFAULT_Y0)]
        y0: usize,
        /// Seed C33 element for l61, e.g. "(1 3 2)(4 5 6)".
        #[arg(long, default_value = l61::DEFAULT_SEED)]
        seed: String,
        /// Seed pattern for l61, e.g. "(1 3 2)(4 6 5)".
        #[arg(long, default_value = l61::DEFAULT_PATTERN)]
        pattern: String,
        /// Compare l61 tables with the reference tables.
        #[arg(long)]
        golden: bool,
        /// Print l82 per-type class usage.
        #[arg(long)]
        audit: bool,
        #[arg(long)]
        json: bool,
    },
    /// Check a certificate file.
    Verify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Exact-cover search for a partition of a small graph.
    Search {
        /// l41, l51 or l62; otherwise give the graph explicitly.
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        graph: GraphArgs,
        /// Report every partition.
        #[arg(long)]
        all: bool,
        /// Node limit for the outer search.
        #[arg(long)]
        budget: Option<u64>,
        /// Write the first partition found here.
        #[arg(long, short)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Check that every matching lies in some 1-factorization.
    Check {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        json: bool,
    },
}

/// `--r R --m M` for L(rm, r); `--n N` alone for K(n,n); or `--matrix FILE`.
#[derive(Args, Default)]
struct GraphArgs {
    #[arg(long)]
    r: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// File of n lines of n '0'/'1' characters.
    #[arg(long)]
    matrix: Option<PathBuf>,
}

impl GraphArgs {
    fn is_empty(&self) -> bool {
        self.r.is_none() && self.m.is_none() && self.n.is_none() && self.matrix.is_none()
    }

    fn spec(&self) -> anyhow::Result<GraphSpec> {
        match (self.r, self.m, self.n, &self.matrix) {
            (None, None, None, Some(path)) => {
                let text = fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                let a: AdjacencyMatrix = text
                    .parse()
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(GraphSpec::Matrix(a))
            }
            (None | Some(0), None, Some(n), None) => Ok(GraphSpec::complete(n)?),
            (Some(r), Some(m), None, None) if r > 0 => Ok(GraphSpec::l(r, m)?),
            _ => bail!("give --r R --m M, --n N, or --matrix FILE"),
        }
    }
}

/// Bad input (exit 2) versus a failed check (exit 1).
enum Failure {
    Usage(anyhow::Error),
    Failed(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
        {
            eprintln!("error: thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed(msg)) => {
            if !msg.is_empty() {
                eprintln!("{msg}");
            }
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Count {
            graph,
            oracle,
            json,
        } => count(&graph.spec()?, oracle, json),
        Command::Enumerate {
            graph,
            classify,
            json,
        } => list(&graph.spec()?, classify, json),
        Command::Construct {
            target,
            out,
            y0,
            seed,
            pattern,
            golden,
            audit,
            json,
        } => {
            let out =
                out.unwrap_or_else(|| PathBuf::from(format!("{}.json", target.replace(':', ""))));
            let cert = match target.as_str() {
                "l61" => build_l61(y0, &seed, &pattern, golden)?,
                "l82" => {
                    let c = construct::build_l82().map_err(anyhow::Error::from)?;
                    if audit {
                        print!("{}", c.audit());
                    }
                    c.certificate()
                }
                t => match t.split_once(':') {
                    Some(("knn", n)) => {
                        construct::knn_partition(parse_n(n)?).map_err(anyhow::Error::from)?
                    }
                    Some(("l2nn", n)) => {
                        construct::l2nn_partition(parse_n(n)?).map_err(anyhow::Error::from)?
                    }
                    _ => {
                        return Err(anyhow!(
                            "unknown target {t:?}; expected l61, l82, knn:N or l2nn:N"
                        )
                        .into())
                    }
                },
            };
            write_certificate(&cert, &out)?;
            report(&cert, Some(&out), json)
        }
        Command::Verify { file, json } => {
            let text = fs::read_to_string(&file)
                .with_context(|| format!("reading {}", file.display()))
                .map_err(Failure::Usage)?;
            let cert = PartitionCertificate::from_json(&text)
                .map_err(|e| Failure::Failed(format!("{}: {e}", file.display())))?;
            report(&cert, None, json)
        }
        Command::Search {
            target,
            graph,
            all,
            budget,
            out,
            json,
        } => {
            let spec = match (target.as_deref(), graph.is_empty()) {
                (Some(t), true) => search_target(t)?,
                (None, false) => graph.spec()?,
                _ => return Err(anyhow!("give either --target or a graph").into()),
            };
            search(&spec, all, budget, out.as_deref(), json)
        }
        Command::Check { graph, json } => {
            let spec = graph.spec()?;
            let rep = check_extendability(&spec).map_err(anyhow::Error::from)?;
            let witness = rep.counterexample.as_ref().map(|p| p.to_string());
            if json {
                println!(
                    "{}",
                    json!({"graph": spec.label(), "checked": rep.checked, "ok": rep.is_ok(), "counterexample": witness})
                );
            } else {
                match &witness {
                    None => println!(
                        "{}: all {} matchings extend to a 1-factorization",
                        spec, rep.checked
                    ),
                    Some(w) => println!("{}: {w} lies in no 1-factorization", spec),
                }
            }
            if rep.is_ok() {
                Ok(())
            } else {
                Err(Failure::Failed(String::new()))
            }
        }
    }
}

fn parse_n(text: &str) -> anyhow::Result<usize> {
    text.parse().with_context(|| format!("bad size {text:?}"))
}

fn search_target(t: &str) -> anyhow::Result<GraphSpec> {
    let (r, m) = match t {
        "l41" => (1, 4),
        "l51" => (1, 5),
        "l62" => (2, 3),
        _ => bail!("unknown search target {t:?}; expected l41, l51 or l62"),
    };
    Ok(GraphSpec::l(r, m)?)
}

fn count(spec: &GraphSpec, oracle: bool, json: bool) -> Outcome {
    let rep = necessary_condition(spec, oracle).map_err(anyhow::Error::from)?;
    if json {
        println!(
            "{}",
            serde_json::to_string(&rep).map_err(anyhow::Error::from)?
        );
    } else {
        println!("{rep}");
    }
    if rep.counts_agree() {
        Ok(())
    } else {
        Err(Failure::Failed("rook count and permanent disagree".into()))
    }
}

fn class_tag(spec: &GraphSpec, p: &Permutation) -> String {
    let l = spec.l_params().map(|l| (l.r(), l.m()));
    match l {
        Some((1, 6)) => cycle_class(p).map(|c| format!("{c:?}")),
        Some((2, 4)) => block_class(p).map(|c| c.name().to_string()),
        _ => None,
    }
    .unwrap_or_else(|| p.cycle_type().to_string())
}

fn list(spec: &GraphSpec, classify: bool, json: bool) -> Outcome {
    let ms = enumerate(spec).map_err(anyhow::Error::from)?;
    if json {
        let items: Vec<serde_json::Value> = ms
            .iter()
            .map(|p| {
                if classify {
                    json!({"perm": p.to_string(), "class": class_tag(spec, p)})
                } else {
                    json!(p.to_string())
                }
            })
            .collect();
        println!("{}", serde_json::Value::Array(items));
    } else {
        for p in &ms {
            if classify {
                println!("{p}\t{}", class_tag(spec, p));
            } else {
                println!("{p}");
            }
        }
    }
    Ok(())
}

fn build_l61(
    y0: usize,
    seed: &str,
    pattern: &str,
    golden: bool,
) -> anyhow::Result<PartitionCertificate> {
    let seed = Permutation::parse_cycles(seed, 6).context("parsing --seed")?;
    let pattern = l61::Pattern::parse(pattern).context("parsing --pattern")?;
    let c = l61::build_l61(y0, &seed, &pattern)?;
    if golden {
        let mut tables = vec![(Table::T1, c.t1.clone())];
        for y in 2..=6 {
            let zone = c.zone(y).expect("five zones");
            tables.push((
                Table::Zone(y),
                zone.subsets()
                    .iter()
                    .map(|s| s.members().to_vec())
                    .collect(),
            ));
        }
        tables.push((Table::T3, c.t3.clone()));
        tables.push((Table::T4, c.t4.clone()));
        for (table, parts) in &tables {
            let printed = golden::diff(*table, parts);
            let corrected = golden::diff_corrected(*table, parts);
            if printed.is_empty() {
                println!("{table}: matches");
                continue;
            }
            println!("{table}: differs from the printed table");
            print!("{printed}");
            for e in table.errata() {
                println!(
                    "  erratum row {}: {} -> {}",
                    e.row + 1,
                    e.printed,
                    e.corrected
                );
            }
            if corrected.is_empty() && table.errata().next().is_some() {
                println!("{table}: matches after errata");
            }
        }
    }
    Ok(c.certificate())
}

fn write_certificate(cert: &PartitionCertificate, path: &Path) -> anyhow::Result<()> {
    fs::write(path, cert.to_json()).with_context(|| format!("writing {}", path.display()))
}

fn report(cert: &PartitionCertificate, written: Option<&Path>, json: bool) -> Outcome {
    let rep = check_partition(cert).map_err(anyhow::Error::from)?;
    if json {
        let violations: Vec<String> = rep.violations.iter().map(|v| v.to_string()).collect();
        println!(
            "{}",
            json!({
                "graph": cert.spec().label(),
                "parts": rep.parts,
                "matchings": rep.matchings_in_parts,
                "total_matchings": rep.total_matchings,
                "complete": cert.complete(),
                "ok": rep.is_ok(),
                "violations": violations,
                "written": written.map(|p| p.display().to_string()),
            })
        );
    } else {
        if let Some(p) = written {
            println!("wrote {}", p.display());
        }
        println!("{}: {rep}", cert.spec());
    }
    if rep.is_ok() {
        Ok(())
    } else {
        Err(Failure::Failed(String::new()))
    }
}

fn search(
    spec: &GraphSpec,
    all: bool,
    budget: Option<u64>,
    out: Option<&Path>,
    json: bool,
) -> Outcome {
    let options = SearchOptions {
        find_all: all,
        budget,
        ..SearchOptions::default()
    };
    let outcome = find_perfect_partition(spec, options).map_err(anyhow::Error::from)?;
    let (found, status) = match outcome {
        SearchOutcome::Found(f) => (f, "found"),
        SearchOutcome::None(NoneReason::Divisibility) => (
            Vec::new(),
            "none: degree does not divide the matching count",
        ),
        SearchOutcome::None(NoneReason::Exhausted) => (Vec::new(), "none: search exhausted"),
        SearchOutcome::BudgetExceeded { found, .. } => (found, "budget exceeded"),
    };
    if let (Some(path), Some(first)) = (out, found.first()) {
        write_certificate(first, path)?;
    }
    if json {
        let partitions: Vec<serde_json::Value> = found
            .iter()
            .map(|c| {
                let parts: Vec<Vec<String>> = c
                    .parts()
                    .iter()
                    .map(|p| p.iter().map(|q| q.to_string()).collect())
                    .collect();
                json!(parts)
            })
            .collect();
        println!(
            "{}",
            json!({"graph": spec.label(), "status": status, "count": found.len(), "partitions": partitions})
        );
    } else {
        println!("{spec}: {status}");
        for (i, c) in found.iter().enumerate() {
            if found.len() > 1 {
                println!("partition {}:", i + 1);
            }
            for part in c.parts() {
                let members: Vec<String> = part.iter().map(|p| p.to_string()).collect();
                println!("  {{{}}}", members.join(", "));
            }
        }
    }
    if found.is_empty() {
        Err(Failure::Failed(String::new()))
    } else {
        Ok(())
    }
}
