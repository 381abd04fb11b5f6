use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use positroid::diagram::{self, ranked_essential_family};
use positroid::essential::{
    connected_entries, core, excess, permutation_from_family, rank_from_family, validate_chess,
    RankedEssentialFamily,
};
use positroid::geometry::{self, BoundaryFilter};
use positroid::json::{
    parse_classes, parse_conditions, parse_matrix, parse_perm, parse_perm_or_family, Annotations,
    BasesJson, FacetSystemJson, FamilyJson, PermJson, PermOrFamily, ViolationJson,
};
use positroid::realize;
use positroid::retrieval::{retrieve_traced, TraceEvent};
use positroid::smallrank::{self, is_positroid_rank2};
use positroid::{BoundedAffinePermutation, BoundedAffinePermutations, CyclicInterval, Lift};

const EXIT_MALFORMED: u8 = 1;
const EXIT_RETRIEVAL: u8 = 2;
const EXIT_INVALID: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Parser)]
#[command(
    name = "positroid",
    version,
    about = "Positroids through ranked essential families"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ranked essential family of a permutation.
    Essentials {
        /// Permutation JSON file; stdin when omitted or "-".
        input: Option<PathBuf>,
        /// Also print the diagram.
        #[arg(long)]
        diagram: bool,
        /// Mark core entries.
        #[arg(long)]
        core: bool,
        /// Mark connected entries.
        #[arg(long)]
        connected: bool,
        /// Attach excesses.
        #[arg(long)]
        excess: bool,
    },
    /// Text rendering of a permutation's diagram.
    Diagram { input: Option<PathBuf> },
    /// Rank of a cyclic interval in a permutation or family.
    Rank {
        input: Option<PathBuf>,
        /// Interval as START,LEN.
        #[arg(long, value_parser = parse_interval_arg)]
        interval: (usize, usize),
        /// Compute the rank both ways and require agreement.
        #[arg(long)]
        both: bool,
    },
    /// Reconstruct a permutation from rank conditions.
    Retrieve {
        input: Option<PathBuf>,
        /// Emit the step trace, one JSON event per line.
        #[arg(long)]
        trace: bool,
    },
    /// Check a family against the axioms.
    Validate { input: Option<PathBuf> },
    /// Codimension of the positroid cell.
    Codim {
        input: Option<PathBuf>,
        /// Compute by length and by excess and require agreement.
        #[arg(long)]
        both: bool,
    },
    /// Facet description of the positroid polytope.
    Polytope {
        input: Option<PathBuf>,
        /// Plain-text H-representation instead of JSON.
        #[arg(long)]
        h_rep: bool,
    },
    /// Bases of the positroid.
    Bases {
        input: Option<PathBuf>,
        #[arg(long, default_value_t = geometry::BASES_BOUND)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Flats whose rank is below their size.
    Flats { input: Option<PathBuf> },
    /// Permutation of a matrix.
    FromMatrix {
        input: Option<PathBuf>,
        /// Reject matrices with a negative maximal minor.
        #[arg(long)]
        check_nonneg: bool,
    },
    /// Every bounded affine permutation of size N, one JSON object per line.
    Enumerate {
        #[arg(long)]
        n: usize,
        /// Keep only rank K.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Positroid test for a loopless rank-2 matroid given by parallel classes.
    Rank2 { input: Option<PathBuf> },
    /// Codimension-one boundary cells of a permutation's cell.
    Boundaries {
        input: Option<PathBuf>,
        /// Also count candidates that create new loops.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = geometry::BOUNDARY_BOUND)]
        bound: usize,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

fn parse_interval_arg(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected START,LEN")?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| e.to_string());
    Ok((parse(a)?, parse(b)?))
}

fn read_input(path: &Option<PathBuf>) -> Result<String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))
        }
        _ => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .context("reading stdin")?;
            Ok(s)
        }
    }
}

fn emit<T: Serialize>(out: &mut impl Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn family_of(input: PermOrFamily) -> RankedEssentialFamily {
    match input {
        PermOrFamily::Perm(p) => ranked_essential_family(&p),
        PermOrFamily::Family(f) => f,
    }
}

fn set_threads(jobs: usize) {
    // a pool may already exist in tests; the first configuration wins
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build_global();
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let code = match run(cli, &mut out) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            EXIT_MALFORMED
        }
    };
    if out.flush().is_err() {
        return ExitCode::from(EXIT_MALFORMED);
    }
    ExitCode::from(code)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<u8> {
    let text = cli.format == Format::Text;
    match cli.command {
        Command::Essentials {
            input,
            diagram,
            core,
            connected,
            excess,
        } => {
            let p = parse_perm(&read_input(&input)?)?;
            let f = ranked_essential_family(&p);
            if text {
                writeln!(out, "{f}")?;
                if excess || connected || core {
                    annotate_text(out, &f, excess, connected, core)?;
                }
            } else {
                emit(
                    out,
                    &FamilyJson::from_family(
                        &f,
                        Annotations {
                            excess,
                            connected,
                            core,
                        },
                    ),
                )?;
            }
            if diagram {
                write!(out, "{}", diagram::render(&p))?;
            }
        }
        Command::Diagram { input } => {
            let p = parse_perm(&read_input(&input)?)?;
            write!(out, "{}", diagram::render(&p))?;
        }
        Command::Rank {
            input,
            interval: (start, len),
            both,
        } => {
            let doc = parse_perm_or_family(&read_input(&input)?)?;
            let (primary, check) = match &doc {
                PermOrFamily::Perm(p) => {
                    let iv = CyclicInterval::new(p.n(), start, len)?;
                    let check = both.then(|| rank_from_family(&ranked_essential_family(p), &iv));
                    (p.rank_interval(&iv), check)
                }
                PermOrFamily::Family(f) => {
                    let iv = CyclicInterval::new(f.n(), start, len)?;
                    let check = if both {
                        Some(permutation_from_family(f)?.rank_interval(&iv))
                    } else {
                        None
                    };
                    (rank_from_family(f, &iv), check)
                }
            };
            print_pair(out, text, "rank", primary, check)?;
            if check.is_some_and(|c| c != primary) {
                eprintln!("error: the two rank computations disagree");
                return Ok(EXIT_INVALID);
            }
        }
        Command::Retrieve { input, trace } => {
            let c = parse_conditions(&read_input(&input)?)?;
            let (result, events) = retrieve_traced(&c);
            if trace {
                for e in &events {
                    emit(out, e)?;
                }
            }
            match result {
                Ok(p) => print_perm(out, text, &p)?,
                Err(e) => {
                    if !trace {
                        emit_error_event(out, text, e.kind(), &e.to_string())?;
                    }
                    eprintln!("error: {} ({e})", e.kind());
                    return Ok(EXIT_RETRIEVAL);
                }
            }
        }
        Command::Validate { input } => {
            let f = family_of(parse_perm_or_family(&read_input(&input)?)?);
            let v = validate_chess(&f);
            if text {
                if v.is_empty() {
                    writeln!(out, "valid")?;
                }
                for x in &v {
                    writeln!(out, "{x}")?;
                }
            } else {
                let list: Vec<ViolationJson> = v.iter().map(ViolationJson::from).collect();
                emit(out, &json!({ "valid": v.is_empty(), "violations": list }))?;
            }
            if !v.is_empty() {
                return Ok(EXIT_INVALID);
            }
        }
        Command::Codim { input, both } => {
            let doc = parse_perm_or_family(&read_input(&input)?)?;
            let (primary, check) = match &doc {
                PermOrFamily::Perm(p) => {
                    let check =
                        both.then(|| geometry::codim_from_family(&ranked_essential_family(p)));
                    (geometry::length(p) as i64, check)
                }
                PermOrFamily::Family(f) => {
                    let check = if both {
                        Some(geometry::length(&permutation_from_family(f)?) as i64)
                    } else {
                        None
                    };
                    (geometry::codim_from_family(f), check)
                }
            };
            print_pair(out, text, "codim", primary, check)?;
            if check.is_some_and(|c| c != primary) {
                eprintln!("error: length and excess formula disagree");
                return Ok(EXIT_INVALID);
            }
        }
        Command::Polytope { input, h_rep } => {
            let f = family_of(parse_perm_or_family(&read_input(&input)?)?);
            let fs = geometry::facet_system(&f);
            if h_rep || text {
                write!(out, "{}", fs.to_h_rep())?;
            } else {
                emit(out, &FacetSystemJson::from(&fs))?;
            }
        }
        Command::Bases { input, bound, jobs } => {
            set_threads(jobs);
            let f = family_of(parse_perm_or_family(&read_input(&input)?)?);
            let b = geometry::bases_bounded(&f, bound)?;
            let doc = BasesJson::new(f.n(), f.k(), &b);
            if text {
                for set in &doc.bases {
                    let s: Vec<String> = set.iter().map(usize::to_string).collect();
                    writeln!(out, "{{{}}}", s.join(","))?;
                }
            } else {
                emit(out, &doc)?;
            }
        }
        Command::Flats { input } => {
            let f = family_of(parse_perm_or_family(&read_input(&input)?)?);
            let flats = smallrank::deficient_flats(&f)?;
            if text {
                for d in &flats.entries {
                    let s: Vec<String> = d.set.iter().map(usize::to_string).collect();
                    writeln!(out, "({},{{{}}})", d.rank, s.join(","))?;
                }
            } else {
                emit(out, &flats)?;
            }
        }
        Command::FromMatrix {
            input,
            check_nonneg,
        } => {
            let m = parse_matrix(&read_input(&input)?)?;
            let p = if check_nonneg {
                match realize::permutation_from_matrix(&m) {
                    Err(realize::RealizeError::NotNonNegative) => {
                        eprintln!("error: some maximal minor is negative");
                        return Ok(EXIT_INVALID);
                    }
                    other => other?,
                }
            } else {
                realize::permutation_from_matrix_unchecked(&m)?
            };
            print_perm(out, text, &p)?;
        }
        Command::Enumerate { n, k, jobs } => {
            if n == 0 {
                bail!("n must be positive");
            }
            enumerate(out, text, n, k, jobs)?;
        }
        Command::Rank2 { input } => {
            let m = parse_classes(&read_input(&input)?)?;
            let flats = m.deficient_flats();
            let verdict = is_positroid_rank2(&flats)?;
            if text {
                writeln!(
                    out,
                    "{}",
                    if verdict {
                        "positroid"
                    } else {
                        "not a positroid"
                    }
                )?;
            } else {
                emit(
                    out,
                    &json!({ "n": m.n(), "positroid": verdict, "flats": flats.entries }),
                )?;
            }
        }
        Command::Boundaries {
            input,
            all,
            bound,
            jobs,
        } => {
            set_threads(jobs);
            let p = parse_perm(&read_input(&input)?)?;
            let filter = if all {
                BoundaryFilter::All
            } else {
                BoundaryFilter::PreserveLoops
            };
            let qs = geometry::codim1_boundaries(&p, filter, bound)?;
            if text {
                writeln!(out, "{}", qs.len())?;
                for q in &qs {
                    writeln!(out, "{q}")?;
                }
            } else {
                let list: Vec<PermJson> = qs.iter().map(PermJson::from).collect();
                emit(out, &json!({ "count": qs.len(), "boundaries": list }))?;
            }
        }
    }
    Ok(0)
}

fn print_perm(out: &mut impl Write, text: bool, p: &BoundedAffinePermutation) -> Result<()> {
    if text {
        writeln!(out, "{p}")?;
        Ok(())
    } else {
        emit(out, &PermJson::from(p))
    }
}

fn print_pair<T: Serialize + std::fmt::Display>(
    out: &mut impl Write,
    text: bool,
    key: &str,
    primary: T,
    check: Option<T>,
) -> Result<()> {
    match (text, check) {
        (true, None) => writeln!(out, "{primary}")?,
        (true, Some(c)) => writeln!(out, "{primary} {c}")?,
        (false, None) => emit(out, &json!({ key: primary }))?,
        (false, Some(c)) => emit(out, &json!({ key: primary, "check": c }))?,
    }
    Ok(())
}

fn emit_error_event(out: &mut impl Write, text: bool, kind: &str, context: &str) -> Result<()> {
    if text {
        writeln!(out, "{kind}")?;
        Ok(())
    } else {
        emit(
            out,
            &TraceEvent::Error {
                kind: kind.to_string(),
                context: context.to_string(),
            },
        )
    }
}

fn annotate_text(
    out: &mut impl Write,
    f: &RankedEssentialFamily,
    with_excess: bool,
    with_connected: bool,
    with_core: bool,
) -> Result<()> {
    let table = excess(f);
    let conn = connected_entries(f);
    let c = core(f);
    for e in f.entries() {
        let mut line = e.to_string();
        if with_excess {
            line.push_str(&format!(" excess={}", table.get(&e.interval).unwrap_or(0)));
        }
        if with_connected {
            line.push_str(&format!(" connected={}", conn.contains(e)));
        }
        if with_core {
            line.push_str(&format!(" core={}", c.contains(e)));
        }
        writeln!(out, "{line}")?;
    }
    Ok(())
}

fn enumerate(
    out: &mut impl Write,
    text: bool,
    n: usize,
    k: Option<usize>,
    jobs: usize,
) -> Result<()> {
    let keep = |p: &BoundedAffinePermutation| k.is_none_or(|k| p.rank() == k);
    let line = |p: &BoundedAffinePermutation| -> String {
        if text {
            p.to_string()
        } else {
            serde_json::to_string(&PermJson::from(p)).expect("serializable")
        }
    };
    if jobs <= 1 {
        for p in BoundedAffinePermutations::new(n).filter(keep) {
            writeln!(out, "{}", line(&p))?;
        }
        return Ok(());
    }
    set_threads(jobs);
    // shard by the first window value and merge in order
    let shards: Vec<String> = (1..=1 + n as Lift)
        .into_par_iter()
        .map(|first| {
            let mut s = String::new();
            for p in BoundedAffinePermutations::with_first(n, first).filter(keep) {
                s.push_str(&line(&p));
                s.push('\n');
            }
            s
        })
        .collect();
    for s in shards {
        out.write_all(s.as_bytes())?;
    }
    Ok(())
}
