//! `tik`: generate, reduce, decide and verify isomorphism instances stored
//! as plain-text object files.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use tik_core::io::{read_file, write_file, Object};
use tik_core::matspace::{Mat, DEFAULT_BUDGET};
use tik_core::oracle::{decide, gen_instance, gen_pair};
use tik_core::reductions::{by_name, Reduction};
use tik_core::s2d::{find_group_isomorphism, find_isometry_with_stats, oracle_by_name};
use tik_core::selftest::{run_all, Level};
use tik_core::witness::{verify_witness, Instance, Tag, Witness};
use tik_core::Error;

#[derive(Parser)]
#[command(name = "tik", version, about = "Isomorphism problems on multi-way arrays over prime fields")]
struct Cli {
    /// Largest number of elements any brute-force enumeration may visit.
    #[arg(long, global = true, env = "TIK_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u128,
    /// Worker threads for the enumerations; results do not depend on it.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Random instance, or a pair with `--b`.
    Gen {
        #[arg(long)]
        problem: Tag,
        /// Sizes, comma separated; their meaning depends on the problem.
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        p: u32,
        #[arg(long)]
        out: PathBuf,
        /// Also write a second instance here.
        #[arg(long)]
        b: Option<PathBuf>,
        /// Make the pair non-isomorphic (certified by brute force).
        #[arg(long, requires = "b")]
        non_isomorphic: bool,
        /// Where to write the witness of an isomorphic pair.
        #[arg(long, requires = "b")]
        witness: Option<PathBuf>,
    },
    /// Apply a reduction to an instance.
    Reduce {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Brute-force decision; exit 0 and a witness when equivalent.
    Decide {
        #[arg(long)]
        problem: Tag,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a source witness for `a → b` to one for the reduced pair.
    WitnessMap {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Map a witness between reduced instances back to the sources.
    WitnessRecover {
        #[arg(long)]
        reduction: String,
        #[arg(long)]
        param: Option<usize>,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        witness: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check that a witness maps `a` onto `b`.
    Verify {
        #[arg(long)]
        problem: Tag,
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        witness: PathBuf,
    },
    /// Isometry search through a decision oracle. Alternating spaces give an
    /// isometry; `group` files give a group isomorphism `a → b`.
    S2d {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long, default_value = "structural")]
        oracle: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance suite.
    Selftest {
        #[arg(long, value_enum, default_value_t = LevelArg::Quick)]
        level: LevelArg,
        /// Directory for the suite's artifacts.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Quick,
    Full,
}

/// Exit status and the summary line.
struct Outcome {
    code: u8,
    summary: Value,
}

fn ok(summary: Value) -> Outcome {
    Outcome { code: 0, summary }
}

fn instance(path: &Path) -> Result<Instance, Error> {
    read_file(path)?.into_instance()
}

fn witness(path: &Path) -> Result<Witness, Error> {
    match read_file(path)? {
        Object::Witness(w) => Ok(w),
        other => Err(Error::InvalidInput(format!(
            "{} holds a {}, not a witness",
            path.display(),
            other.kind()
        ))),
    }
}

fn mat_json(a: &Mat) -> Value {
    Value::from((0..a.rows()).map(|i| a.row(i).to_vec()).collect::<Vec<_>>())
}

fn witness_json(w: &Witness) -> Value {
    json!({ "tag": w.tag.name(), "mats": w.mats.iter().map(mat_json).collect::<Vec<_>>() })
}

fn reduction(name: &str, param: Option<usize>) -> Result<Box<dyn Reduction>, Error> {
    by_name(name, param)
}

fn run(cli: Cli) -> Result<Outcome, Error> {
    let budget = cli.budget;
    let seed = cli.seed;
    match cli.command {
        Command::Gen { problem, dims, p, out, b, non_isomorphic, witness: wpath } => {
            let Some(b) = b else {
                let a = gen_instance(problem, &dims, p, seed)?;
                write_file(&out, &Object::from_instance(problem, &a))?;
                return Ok(ok(json!({ "command": "gen", "problem": problem.name(), "out": out })));
            };
            let (x, y, w) = gen_pair(problem, &dims, p, seed, !non_isomorphic, budget)?;
            write_file(&out, &Object::from_instance(problem, &x))?;
            write_file(&b, &Object::from_instance(problem, &y))?;
            if let (Some(path), Some(w)) = (&wpath, &w) {
                write_file(path, &Object::Witness(w.clone()))?;
            }
            Ok(ok(json!({
                "command": "gen",
                "problem": problem.name(),
                "isomorphic": !non_isomorphic,
                "a": out,
                "b": b,
                "witness": wpath,
            })))
        }
        Command::Reduce { reduction: name, param, input, out } => {
            let red = reduction(&name, param)?;
            let a = instance(&input)?;
            let t = red.construct(&a)?;
            let obj = Object::from_instance(red.descriptor().target, &t);
            write_file(&out, &obj)?;
            Ok(ok(json!({
                "command": "reduce",
                "reduction": name,
                "target": red.descriptor().target.name(),
                "kind": obj.kind(),
                "out": out,
            })))
        }
        Command::Decide { problem, a, b, out } => {
            let (x, y) = (instance(&a)?, instance(&b)?);
            let found = decide(problem, &x, &y, budget)?;
            if let (Some(path), Some(w)) = (&out, &found) {
                write_file(path, &Object::Witness(w.clone()))?;
            }
            Ok(Outcome {
                code: if found.is_some() { 0 } else { 1 },
                summary: json!({
                    "command": "decide",
                    "problem": problem.name(),
                    "equivalent": found.is_some(),
                    "witness": found.as_ref().map(witness_json),
                }),
            })
        }
        Command::WitnessMap { reduction: name, param, a, witness: wpath, out } => {
            let red = reduction(&name, param)?;
            let w = red.witness_forward(&instance(&a)?, &witness(&wpath)?)?;
            write_file(&out, &Object::Witness(w.clone()))?;
            Ok(ok(json!({ "command": "witness-map", "reduction": name, "witness": witness_json(&w) })))
        }
        Command::WitnessRecover { reduction: name, param, a, b, witness: wpath, out } => {
            let red = reduction(&name, param)?;
            match red.witness_recover(&instance(&a)?, &instance(&b)?, &witness(&wpath)?) {
                Ok(w) => {
                    write_file(&out, &Object::Witness(w.clone()))?;
                    Ok(ok(json!({
                        "command": "witness-recover",
                        "reduction": name,
                        "recovered": true,
                        "witness": witness_json(&w),
                    })))
                }
                Err(e @ (Error::RecoveryUnsupported(_) | Error::WitnessInvalid(_))) => Ok(Outcome {
                    code: 1,
                    summary: json!({
                        "command": "witness-recover",
                        "reduction": name,
                        "recovered": false,
                        "error": e.to_string(),
                    }),
                }),
                Err(e) => Err(e),
            }
        }
        Command::Verify { problem, a, b, witness: wpath } => {
            let valid = verify_witness(problem, &instance(&a)?, &instance(&b)?, &witness(&wpath)?)?;
            Ok(Outcome {
                code: if valid { 0 } else { 1 },
                summary: json!({ "command": "verify", "problem": problem.name(), "valid": valid }),
            })
        }
        Command::S2d { a, b, oracle, out } => {
            let oracle = oracle_by_name(&oracle, budget)?;
            match (read_file(&a)?, read_file(&b)?) {
                (Object::Group(g), Object::Group(h)) => {
                    let images = find_group_isomorphism(&g, &h, oracle.as_ref(), budget)?;
                    if let (Some(path), Some(images)) = (&out, &images) {
                        let f = h.field();
                        let img = tik_core::groupcorr::MatrixGroupGens::new(f, h.size(), images.clone())?;
                        write_file(path, &Object::Group(img))?;
                    }
                    Ok(Outcome {
                        code: if images.is_some() { 0 } else { 1 },
                        summary: json!({
                            "command": "s2d",
                            "oracle": oracle.name(),
                            "mode": "group",
                            "isomorphic": images.is_some(),
                            "images": images.map(|v| v.iter().map(mat_json).collect::<Vec<_>>()),
                            "lazard": "stops at Lie algebra structure constants for class above 2",
                        }),
                    })
                }
                (x, y) => {
                    let (Instance::Tensor3(x), Instance::Tensor3(y)) = (x.into_instance()?, y.into_instance()?) else {
                        return Err(Error::InvalidInput("s2d expects two altspace or two group files".into()));
                    };
                    let (found, stats) = find_isometry_with_stats(&x, &y, oracle.as_ref(), budget)?;
                    if let (Some(path), Some(w)) = (&out, &found) {
                        write_file(path, &Object::Witness(w.clone()))?;
                    }
                    Ok(Outcome {
                        code: if found.is_some() { 0 } else { 1 },
                        summary: json!({
                            "command": "s2d",
                            "oracle": oracle.name(),
                            "mode": "isometry",
                            "isometric": found.is_some(),
                            "queries": stats.queries,
                            "max_side": stats.max_side,
                            "witness": found.as_ref().map(witness_json),
                        }),
                    })
                }
            }
        }
        Command::Selftest { level, out } => {
            let level = match level {
                LevelArg::Quick => Level::Quick,
                LevelArg::Full => Level::Full,
            };
            let (reports, artifacts) = run_all(level, seed, budget);
            for r in &reports {
                eprintln!("{r}");
            }
            if let Some(dir) = &out {
                std::fs::create_dir_all(dir)
                    .map_err(|e| Error::InvalidInput(format!("cannot create {}: {e}", dir.display())))?;
                let log: String = reports.iter().map(|r| format!("{r}\n")).collect();
                std::fs::write(dir.join("selftest.log"), log)
                    .map_err(|e| Error::InvalidInput(format!("cannot write log: {e}")))?;
                for (name, body) in &artifacts {
                    std::fs::write(dir.join(format!("{name}.txt")), body)
                        .map_err(|e| Error::InvalidInput(format!("cannot write {name}: {e}")))?;
                }
            }
            let failed: Vec<&str> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
            Ok(Outcome {
                code: if failed.is_empty() { 0 } else { 1 },
                summary: json!({
                    "command": "selftest",
                    "passed": reports.len() - failed.len(),
                    "failed": failed,
                    "criteria": reports.iter().map(|r| json!({ "id": r.id, "passed": r.passed })).collect::<Vec<_>>(),
                }),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("tik: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli) {
        Ok(Outcome { code, summary }) => {
            println!("{summary}");
            ExitCode::from(code)
        }
        Err(e) => {
            eprintln!("tik: {e}");
            println!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(2)
        }
    }
}
