//! `uflim`: a command-line surface over `uflim-core`.
//!
//! Exit codes: 0 success, 1 property/axiom violation, 2 malformed input,
//! 3 resource guard. All diagnostics go to stderr; stdout carries only the
//! requested artifact, byte-reproducibly.

use std::collections::BTreeMap;
use std::io::Read;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use uflim_core::diagram::{FpDiagram, Thread};
use uflim_core::dot::{diagram_dot, poset_dot};
use uflim_core::dynamics::{orbit_limit, delta_x, orbit_decompose};
use uflim_core::json::{
    parse_diagram, parse_family, parse_ground, parse_orbit_system, PartitionJson,
};
use uflim_core::partition::enumerate_partitions;
use uflim_core::ultrafilter::{
    check_axioms, enumerate_ultrafilters_bruteforce, phi, phi_inverse, PrincipalUltrafilter,
    AXIOM_CHECK_GUARD, BRUTE_FORCE_GUARD,
};
use uflim_core::{Error, GroundSet, DEFAULT_SIZE_GUARD};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "uflim", version, about = "Finite inverse limits of partition diagrams")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,

    /// Size guard on the ground-set cardinality (partition enumeration grows
    /// as the Bell numbers).
    #[arg(long, global = true, default_value_t = DEFAULT_SIZE_GUARD)]
    guard: usize,

    /// Override the size guard.
    #[arg(long, global = true)]
    force: bool,

    /// Seed for randomized runs; accepted everywhere so that identical
    /// invocations stay byte-identical.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Enumerate all partitions of a ground set (a JSON array of atom names).
    Partitions {
        /// Ground-set file, or `-` for stdin.
        input: String,
        /// Print only the number of partitions.
        #[arg(long)]
        count: bool,
    },
    /// Validate a diagram of partitions and enumerate its threads.
    Limit {
        /// Diagram file, or `-` for stdin.
        input: String,
    },
    /// Check a family of sets against the four ultrafilter axioms.
    CheckUltrafilter {
        /// Family file, or `-` for stdin.
        input: String,
    },
    /// Decompose the orbit of a finite dynamical system and enumerate the
    /// inverse limit of its infinitely-visited-blocks diagram.
    Dynamics {
        /// System file, or `-` for stdin.
        input: String,
    },
    /// Verify the ultrafilter/thread correspondence on a small ground set.
    Bijection {
        /// Ground-set size (brute-force enumeration scans all families).
        size: usize,
    },
    /// Emit a DOT graph for a ground set's refinement poset, a diagram, or a
    /// single partition.
    ExportDot {
        /// Input file, or `-` for stdin.
        input: String,
    },
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => {}
        Err(e) => {
            eprintln!("uflim: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Input(_) | Error::Degenerate(_) => 2,
        Error::Resource { .. } => 3,
        _ => 1,
    }
}

fn read_input(path: &str) -> Result<String, Error> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Input(format!("cannot read stdin: {e}")))?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {path}: {e}")))
    }
}

fn run(cli: &Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Partitions { input, count } => cmd_partitions(cli, input, *count),
        Command::Limit { input } => cmd_limit(cli, input),
        Command::CheckUltrafilter { input } => cmd_check_ultrafilter(cli, input),
        Command::Dynamics { input } => cmd_dynamics(cli, input),
        Command::Bijection { size } => cmd_bijection(cli, *size),
        Command::ExportDot { input } => cmd_export_dot(cli, input),
    }
}

fn cmd_partitions(cli: &Cli, input: &str, count: bool) -> Result<(), Error> {
    let ground = parse_ground(&read_input(input)?)?;
    let guard = if cli.force { usize::MAX } else { cli.guard };
    let partitions: Vec<_> = enumerate_partitions(&ground, guard)?.collect();
    if count {
        println!("{}", partitions.len());
        return Ok(());
    }
    match cli.format {
        Format::Json => {
            let dto: Vec<PartitionJson> =
                partitions.iter().map(PartitionJson::from_partition).collect();
            println!("{}", serde_json::to_string_pretty(&dto).unwrap());
        }
        Format::Dot => println!("{}", poset_dot(&partitions)?),
        Format::Text => {
            for p in &partitions {
                println!("{}", p.canonical_string());
            }
        }
    }
    Ok(())
}

fn cmd_limit(cli: &Cli, input: &str) -> Result<(), Error> {
    let nd = parse_diagram(&read_input(input)?)?;
    let issues = nd.diagram.validate();
    if !issues.is_empty() {
        let rendered: Vec<String> = issues.iter().map(|i| i.to_string()).collect();
        return Err(Error::Diagram(rendered.join("; ")));
    }
    let threads = nd.diagram.enumerate_threads()?;
    match cli.format {
        Format::Json => {
            let listed: Vec<BTreeMap<String, Vec<String>>> =
                threads.iter().map(|t| nd.render_thread(t)).collect();
            let out = json!({ "count": threads.len(), "threads": listed });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Dot => println!("{}", diagram_dot(&nd.diagram)),
        Format::Text => {
            for (k, t) in threads.iter().enumerate() {
                let cells: Vec<String> = nd
                    .render_thread(t)
                    .into_iter()
                    .map(|(name, atoms)| format!("{name}={{{}}}", atoms.join(",")))
                    .collect();
                println!("thread {k}: {}", cells.join(" "));
            }
            println!("{} threads", threads.len());
        }
    }
    Ok(())
}

fn cmd_check_ultrafilter(cli: &Cli, input: &str) -> Result<(), Error> {
    let family = parse_family(&read_input(input)?)?;
    let limit = if cli.force { usize::MAX } else { AXIOM_CHECK_GUARD };
    if family.ground().len() > limit {
        return Err(Error::Resource {
            what: "ground-set size for axiom checking",
            actual: family.ground().len(),
            limit,
        });
    }
    let report = check_axioms(&family)?;
    let mut lines = Vec::new();
    for axiom in 1u8..=4 {
        let failures: Vec<String> = report
            .failures
            .iter()
            .filter(|f| f.axiom() == axiom)
            .map(|f| f.describe(family.ground()))
            .collect();
        if failures.is_empty() {
            lines.push((axiom, true, String::new()));
        } else {
            lines.push((axiom, false, failures.join("; ")));
        }
    }
    match cli.format {
        Format::Json => {
            let axioms: Vec<_> = lines
                .iter()
                .map(|(axiom, pass, detail)| {
                    json!({ "axiom": axiom, "pass": pass, "detail": detail })
                })
                .collect();
            let out = json!({ "pass": report.passed(), "axioms": axioms });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        _ => {
            for (axiom, pass, detail) in &lines {
                if *pass {
                    println!("axiom {axiom}: pass");
                } else {
                    println!("axiom {axiom}: FAIL — {detail}");
                }
            }
            println!("{}", if report.passed() { "ULTRAFILTER OK" } else { "NOT AN ULTRAFILTER" });
        }
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Thread("the family violates the axioms listed above".into()))
    }
}

fn cmd_dynamics(cli: &Cli, input: &str) -> Result<(), Error> {
    let sys = parse_orbit_system(&read_input(input)?)?;
    let guard = if cli.force { usize::MAX } else { cli.guard };
    let limit = orbit_limit(&sys, guard)?;
    let (tail, cycle) = orbit_decompose(&sys);
    let name = |i: &usize| sys.states().atom(*i).to_string();
    let tail_names: Vec<String> = tail.iter().map(name).collect();
    let cycle_names: Vec<String> = cycle.iter().map(name).collect();
    let witness = limit.threads.first();
    match cli.format {
        Format::Json => {
            let mut deltas = BTreeMap::new();
            for p in &limit.fp.partitions {
                let d = delta_x(&sys, p)?;
                let blocks: Vec<String> =
                    d.blocks.iter().map(|b| b.render(sys.states())).collect();
                deltas.insert(p.canonical_string(), blocks);
            }
            let witness_json = witness.map(|t| {
                uflim_core::diagram::render_thread(&limit.diagram, sys.states(), t)
            });
            let out = json!({
                "tail": tail_names,
                "cycle": cycle_names,
                "delta": deltas,
                "thread_count": limit.threads.len(),
                "witness": witness_json,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        Format::Dot => println!("{}", diagram_dot(&limit.diagram)),
        Format::Text => {
            println!("tail: [{}]", tail_names.join(","));
            println!("cycle: [{}]", cycle_names.join(","));
            println!("threads: {}", limit.threads.len());
            if let Some(t) = witness {
                let cells: Vec<String> =
                    uflim_core::diagram::render_thread(&limit.diagram, sys.states(), t)
                        .into_iter()
                        .map(|(name, atoms)| format!("{name}={{{}}}", atoms.join(",")))
                        .collect();
                println!("witness: {}", cells.join(" "));
            }
        }
    }
    if limit.threads.is_empty() {
        return Err(Error::Thread(
            "the inverse limit of an orbit diagram must be nonempty".into(),
        ));
    }
    Ok(())
}

fn cmd_bijection(cli: &Cli, size: usize) -> Result<(), Error> {
    if size > BRUTE_FORCE_GUARD && !cli.force {
        return Err(Error::Resource {
            what: "ground-set size for brute-force enumeration",
            actual: size,
            limit: BRUTE_FORCE_GUARD,
        });
    }
    let ground = GroundSet::numbered(size)?;
    let guard = if cli.force { usize::MAX } else { cli.guard };
    let fp = FpDiagram::build(&ground, guard)?;
    let threads = fp.diagram.enumerate_threads()?;
    let families = enumerate_ultrafilters_bruteforce(&ground)?;

    let mut counterexample: Option<String> = None;
    let mut images: Vec<Thread> = Vec::new();
    for u in &families {
        let point = u
            .members()
            .iter()
            .find(|m| m.len() == 1)
            .and_then(|m| m.min_index());
        let point = match point {
            Some(p) => p,
            None => {
                counterexample =
                    Some("a finite ultrafilter without a singleton member".into());
                break;
            }
        };
        let principal = PrincipalUltrafilter::new(&ground, point)?;
        let t = phi(&principal, &fp)?;
        if !threads.contains(&t) {
            counterexample = Some(format!("phi image of point {point} is not a thread"));
            break;
        }
        if images.contains(&t) {
            counterexample = Some(format!("phi is not injective at point {point}"));
            break;
        }
        if &phi_inverse(&t, &fp)? != u {
            counterexample = Some(format!("phi_inverse(phi(U)) differs at point {point}"));
            break;
        }
        images.push(t);
    }
    if counterexample.is_none() && images.len() != threads.len() {
        counterexample = Some(format!(
            "phi covers {} of {} threads",
            images.len(),
            threads.len()
        ));
    }

    let noun = |n: usize, word: &str| {
        if n == 1 {
            format!("1 {word}")
        } else {
            format!("{n} {word}s")
        }
    };
    match cli.format {
        Format::Json => {
            let out = json!({
                "ultrafilters": families.len(),
                "threads": threads.len(),
                "ok": counterexample.is_none(),
                "counterexample": counterexample,
            });
            println!("{}", serde_json::to_string_pretty(&out).unwrap());
        }
        _ => match &counterexample {
            None => println!(
                "{}, {}, BIJECTION OK",
                noun(families.len(), "ultrafilter"),
                noun(threads.len(), "thread")
            ),
            Some(c) => println!(
                "{}, {}, BIJECTION FAILED: {c}",
                noun(families.len(), "ultrafilter"),
                noun(threads.len(), "thread")
            ),
        },
    }
    match counterexample {
        None => Ok(()),
        Some(c) => Err(Error::Thread(c)),
    }
}

fn cmd_export_dot(cli: &Cli, input: &str) -> Result<(), Error> {
    let text = read_input(input)?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Error::Input(format!("malformed JSON: {e}")))?;
    let dot = match &value {
        serde_json::Value::Array(_) => {
            let ground = parse_ground(&text)?;
            let guard = if cli.force { usize::MAX } else { cli.guard };
            let partitions: Vec<_> = enumerate_partitions(&ground, guard)?.collect();
            poset_dot(&partitions)?
        }
        serde_json::Value::Object(map) if map.contains_key("objects") => {
            let nd = parse_diagram(&text)?;
            diagram_dot(&nd.diagram)
        }
        serde_json::Value::Object(map)
            if map.contains_key("ground") && map.contains_key("blocks") =>
        {
            let p = uflim_core::json::parse_partition(&text)?;
            poset_dot(std::slice::from_ref(&p))?
        }
        _ => {
            return Err(Error::Input(
                "expected a ground-set array, a diagram with \"objects\", or a partition with \"ground\" and \"blocks\"".into(),
            ))
        }
    };
    println!("{dot}");
    Ok(())
}
