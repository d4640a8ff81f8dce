use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use sgpoidkit::arrowtype::{
    brute_force_guard, enumerate_brute_force, enumerate_by_closure, enumerate_incremental, ClassDatabase,
    ClosureLimits,
};
use sgpoidkit::genrep::{
    embed, full_transformation_sgpoid, generate, minimal_representation, RepresentOptions,
    TransformationArrow,
};
use sgpoidkit::morphisms::{collect_morphisms_parallel, Distinctness};
use sgpoidkit::typing::{infer_types, minimal_objects};
use sgpoidkit::{CompositionTable, PartialTable};

#[derive(Parser)]
#[command(name = "sgpoidkit", version, about = "Explore finite semigroupoids")]
struct Cli {
    /// Worker threads for parallel searches.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Associativity, minimal object count and semigroupoid verdict.
    Check { table: PathBuf },
    /// Consistent type structures, one JSON object per line.
    InferTypes {
        table: PathBuf,
        #[arg(long)]
        objects: Option<usize>,
        /// Use the smallest object count that admits a typing (default).
        #[arg(long)]
        minimal: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Homomorphisms between two tables, as a JSON list of image vectors.
    Morphisms {
        source: PathBuf,
        target: PathBuf,
        #[arg(long)]
        strict: bool,
        #[arg(long)]
        bijective: bool,
        #[arg(long)]
        count_only: bool,
    },
    /// Labeled associative tables, one JSON table per line.
    EnumerateTables {
        #[arg(long)]
        arrows: usize,
        #[arg(long)]
        allow_nc: bool,
        /// Partial table with "?" for cells to search.
        #[arg(long)]
        partial: Option<PathBuf>,
        #[arg(long)]
        count_only: bool,
    },
    /// Arrow-type semigroupoid class counts.
    Arrowtypes {
        #[arg(long)]
        max_arrows: usize,
        #[arg(long)]
        max_objects: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Closure)]
        method: Method,
        #[arg(long, env = "SGPOIDKIT_DB")]
        db: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Emit::Md)]
        emit_table: Emit,
        /// Print every class as graph JSON instead of the count table.
        #[arg(long)]
        list: bool,
    },
    /// Closes typed generators under composition.
    Generate {
        generators: PathBuf,
        #[arg(long)]
        count_only: bool,
    },
    /// Transformation representation of a table.
    Represent {
        table: PathBuf,
        /// Search for the smallest target (the default without --graph).
        #[arg(long)]
        minimal: bool,
        #[arg(long, conflicts_with = "permissive")]
        strict: bool,
        #[arg(long)]
        permissive: bool,
        /// Also try closed graphs other than arrow-type graphs of the table.
        #[arg(long)]
        widen: bool,
        #[arg(long, requires = "degrees")]
        graph: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', requires = "graph")]
        degrees: Option<Vec<usize>>,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Brute,
    Incremental,
    Closure,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Md,
    Csv,
    Json,
}

enum Failure {
    NoSolution,
    Input(String),
    Guard(String),
}

impl From<sgpoidkit::Error> for Failure {
    fn from(e: sgpoidkit::Error) -> Self {
        match e {
            sgpoidkit::Error::GuardExceeded { .. } => Failure::Guard(e.to_string()),
            sgpoidkit::Error::NoRepresentation(_) => Failure::NoSolution,
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn input_error(path: &Path, e: impl Display) -> Failure {
    Failure::Input(format!("{}: {e}", path.display()))
}

fn read_value(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input_error(path, e))?;
    serde_json::from_str(&text).map_err(|e| input_error(path, e))
}

/// A table file holds either the table object or an object with a
/// `"table"` field.
fn read_table(path: &Path) -> Result<CompositionTable, Failure> {
    let mut v = read_value(path)?;
    if let Some(inner) = v.get_mut("table") {
        v = inner.take();
    }
    CompositionTable::deserialize(v).map_err(|e| input_error(path, e))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    T::deserialize(read_value(path)?).map_err(|e| input_error(path, e))
}

fn line(v: &impl serde::Serialize) -> String {
    serde_json::to_string(v).expect("serializable output")
}

fn finish(count: usize) -> Outcome {
    if count == 0 {
        Err(Failure::NoSolution)
    } else {
        Ok(())
    }
}

fn check(path: &Path) -> Outcome {
    let t = read_table(path)?;
    let assoc = match t.first_non_associative_triple() {
        None => "true".to_string(),
        Some((a, b, c)) => format!("false (failing triple: {a} {b} {c})"),
    };
    let min = minimal_objects(&t);
    let objects = min.map_or("none".to_string(), |m| m.to_string());
    let sgpoid = t.is_associative() && min.is_some();
    println!("associative: {assoc}; minimal objects: {objects}; semigroupoid: {sgpoid}");
    Ok(())
}

fn infer(path: &Path, objects: Option<usize>, count_only: bool) -> Outcome {
    let t = read_table(path)?;
    let m = match objects {
        Some(m) => m,
        None => minimal_objects(&t).ok_or(Failure::NoSolution)?,
    };
    let mut count = 0;
    for ts in infer_types(&t, m) {
        count += 1;
        if !count_only {
            println!("{}", line(&ts));
        }
    }
    if count_only {
        println!("{count}");
    }
    finish(count)
}

fn morphisms(src: &Path, dst: &Path, strict: bool, bijective: bool, count_only: bool, jobs: usize) -> Outcome {
    let s = read_table(src)?;
    let t = read_table(dst)?;
    if !t.is_associative() {
        eprintln!("warning: target table is not associative");
    }
    let distinct = if bijective {
        Distinctness::Bijective
    } else {
        Distinctness::Any
    };
    let maps = collect_morphisms_parallel(&s, &t, distinct, strict, jobs);
    if count_only {
        println!("{}", maps.len());
    } else {
        let images: Vec<&Vec<usize>> = maps.iter().map(|m| &m.images).collect();
        println!("{}", line(&images));
    }
    finish(maps.len())
}

fn enumerate_tables(n: usize, allow_nc: bool, partial: Option<&Path>, count_only: bool) -> Outcome {
    let partial: Option<PartialTable> = partial.map(read_json).transpose()?;
    let mut count = 0;
    for t in sgpoidkit::tables::enumerate_associative_tables(n, allow_nc, partial.as_ref())? {
        count += 1;
        if !count_only {
            println!("{}", line(&t));
        }
    }
    if count_only {
        println!("{count}");
    }
    finish(count)
}

fn arrowtypes(
    max_arrows: usize,
    max_objects: Option<usize>,
    method: Method,
    db_dir: Option<&Path>,
    emit: Emit,
    list: bool,
) -> Outcome {
    let max_objects = max_objects.unwrap_or(2 * max_arrows).max(1);
    let mut db = match db_dir {
        Some(dir) => ClassDatabase::open(dir)?,
        None => ClassDatabase::new(),
    };
    let limit = (max_objects < 2 * max_arrows).then_some(max_objects);
    match method {
        Method::Brute => {
            for n in 1..=max_arrows {
                for m in 1..=max_objects.min(2 * n) {
                    brute_force_guard(n, m)?;
                }
            }
            for n in 1..=max_arrows {
                for m in 1..=max_objects.min(2 * n) {
                    for g in enumerate_brute_force(n, m)? {
                        db.insert(&g)?;
                    }
                }
            }
            db.mark_complete(max_arrows, limit);
        }
        Method::Incremental => {
            if limit.is_some() {
                return Err(Failure::Input(
                    "the incremental method does not take --max-objects".into(),
                ));
            }
            for n in db.complete_arrows() + 1..=max_arrows {
                enumerate_incremental(&mut db, n)?;
            }
        }
        Method::Closure => {
            enumerate_by_closure(
                &mut db,
                ClosureLimits {
                    max_arrows,
                    max_objects: limit,
                },
            )?;
        }
    }
    if let Some(dir) = db_dir {
        db.save(dir)?;
    }
    if list {
        for n in 1..=max_arrows {
            for m in 1..=max_objects {
                for g in db.classes(m, n) {
                    println!("{}", line(&g));
                }
            }
        }
        return Ok(());
    }
    let table = db.count_table(max_arrows, max_objects)?;
    match emit {
        Emit::Md => print!("{}", table.to_markdown()),
        Emit::Csv => print!("{}", table.to_csv()),
        Emit::Json => println!("{}", table.to_json()),
    }
    Ok(())
}

#[derive(Deserialize)]
struct GeneratorFile {
    degrees: Vec<usize>,
    generators: Vec<TransformationArrow>,
}

fn generate_cmd(path: &Path, count_only: bool) -> Outcome {
    let input: GeneratorFile = read_json(path)?;
    let s = generate(&input.generators, &input.degrees)?;
    if count_only {
        println!("{}", s.len());
    } else {
        println!(
            "{}",
            line(&json!({
                "degrees": s.degrees(),
                "arrows": s.arrows(),
                "table": s.table(),
            }))
        );
    }
    Ok(())
}

fn represent(
    path: &Path,
    strict: bool,
    widen: bool,
    graph: Option<&Path>,
    degrees: Option<&[usize]>,
    count_only: bool,
) -> Outcome {
    let t = read_table(path)?;
    let (Some(graph), Some(degrees)) = (graph, degrees) else {
        let r = minimal_representation(&t, RepresentOptions { strict, widen })?;
        if count_only {
            println!("1");
        } else {
            println!("{}", line(&r));
        }
        return Ok(());
    };
    let graph: sgpoidkit::arrowtype::ArrowTypeGraph = read_json(graph)?;
    let target = full_transformation_sgpoid(degrees, &graph)?;
    if count_only {
        let count = embed(&t, &target, strict).count();
        println!("{count}");
        return finish(count);
    }
    let map = embed(&t, &target, strict).next().ok_or(Failure::NoSolution)?;
    let arrows: Vec<&TransformationArrow> = map.images.iter().map(|&i| &target.arrows()[i]).collect();
    println!(
        "{}",
        line(&json!({
            "graph": graph,
            "degrees": degrees,
            "arrows": arrows,
            "map": map,
        }))
    );
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    let jobs = cli.jobs.max(1);
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))?;
    match cli.command {
        Command::Check { table } => check(&table),
        Command::InferTypes {
            table,
            objects,
            minimal,
            count_only,
        } => infer(&table, if minimal { None } else { objects }, count_only),
        Command::Morphisms {
            source,
            target,
            strict,
            bijective,
            count_only,
        } => morphisms(&source, &target, strict, bijective, count_only, jobs),
        Command::EnumerateTables {
            arrows,
            allow_nc,
            partial,
            count_only,
        } => enumerate_tables(arrows, allow_nc, partial.as_deref(), count_only),
        Command::Arrowtypes {
            max_arrows,
            max_objects,
            method,
            db,
            emit_table,
            list,
        } => arrowtypes(max_arrows, max_objects, method, db.as_deref(), emit_table, list),
        Command::Generate {
            generators,
            count_only,
        } => generate_cmd(&generators, count_only),
        Command::Represent {
            table,
            minimal: _,
            strict: _,
            permissive,
            widen,
            graph,
            degrees,
            count_only,
        } => represent(
            &table,
            !permissive,
            widen,
            graph.as_deref(),
            degrees.as_deref(),
            count_only,
        ),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NoSolution) => {
            eprintln!("no solution");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Guard(msg)) => {
            eprintln!("limit exceeded: {msg}");
            ExitCode::from(3)
        }
    }
}
