//! Command-line front end: argument parsing, config files, output and run
//! manifests. [`dispatch`] is the whole program minus `std::process::exit`.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cartier::{cartier_report, CurveJson};
use crate::moduli::{
    enumerate_inertia_types, inertia_from_signature, prank_admissible, prank_profile,
    signature_from_inertia, stratum_dim_bounds, strata_pairs, trielliptic_dim_lower,
    BoundaryKind, InertiaType, InertiaTypeJson, ModuliError,
};
use crate::search::{
    exhaustive_scan, find_witness, verify_suite, SearchError, DEFAULT_BUDGET, VERIFY_K_MAX,
};
use crate::zeta::{zeta_report, CoverJson, CyclicCover, ZetaError, DEFAULT_COUNT_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "tricover", version, about = "p-ranks of cyclic covers of the projective line")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the report here instead of stdout; a manifest line is appended
    /// to `<PATH>.manifest.jsonl`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// `key = value` lines; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Method {
    Cartier,
    Zeta,
    Both,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Delta,
    Xi,
}

/// An inertia type given by labels, or a trielliptic signature.
#[derive(Args, Debug, Clone)]
struct TypeArgs {
    #[arg(long, default_value_t = 3)]
    l: u64,
    /// Inertia labels, e.g. `1,1,2,2`.
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["r", "s"])]
    labels: Option<Vec<u64>>,
    #[arg(long, requires = "s")]
    r: Option<u64>,
    #[arg(long, requires = "r")]
    s: Option<u64>,
}

impl TypeArgs {
    fn inertia(&self) -> Result<InertiaType> {
        match (&self.labels, self.r, self.s) {
            (Some(labels), _, _) => Ok(InertiaType::from_labels(self.l, labels)?),
            (None, Some(r), Some(s)) => {
                if self.l != 3 {
                    bail!("--r/--s describe trielliptic signatures only (ℓ = 3)");
                }
                Ok(inertia_from_signature(r, s)?)
            }
            _ => bail!("give --labels or --r and --s"),
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// p-rank of a trielliptic curve read from JSON.
    Prank {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Point counts and L-polynomial of a cyclic cover read from JSON.
    Zeta {
        #[arg(long)]
        cover: PathBuf,
    },
    /// All inertia types of genus g.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        l: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        p: Option<u64>,
    },
    /// Bouw bound and admissibility.
    Bound {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        f: Option<u64>,
    },
    /// Component p-rank pairs of a boundary stratum.
    Strata {
        #[arg(long)]
        i: u64,
        #[arg(long)]
        g: u64,
        #[arg(long)]
        f: u64,
        #[arg(long, default_value_t = 3)]
        l: u64,
        #[arg(long)]
        p: u64,
        #[arg(long, value_enum)]
        kind: Kind,
    },
    /// Dimension bounds for a p-rank stratum.
    Dim {
        #[arg(long)]
        p: u64,
        #[command(flatten)]
        ty: TypeArgs,
        #[arg(long)]
        f: u64,
    },
    /// Exhaustive scan of split curves over F_{p^k}.
    Scan {
        #[arg(long)]
        p: u32,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        d1: usize,
        #[arg(long)]
        d2: usize,
        #[arg(long)]
        dedupe: bool,
    },
    /// Search for a curve with given signature and p-rank.
    Search {
        #[arg(long)]
        p: u32,
        #[arg(long)]
        r: u64,
        #[arg(long)]
        s: u64,
        #[arg(long)]
        f: u64,
        #[arg(long)]
        kmax: Option<u32>,
    },
    /// Run every desk-scale check.
    Verify {
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        #[arg(long)]
        gmax: Option<u64>,
    },
}

/// Settings after merging the config file under the flags.
#[derive(Debug, Clone, Serialize)]
struct Settings {
    format: &'static str,
    seed: u64,
    budget: u64,
    workers: usize,
    kmax: u32,
    gmax: u64,
}

fn parse_config(path: &Path) -> Result<BTreeMap<String, String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            bail!("{}:{}: expected key = value", path.display(), n + 1);
        };
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

fn resolve(g: &Global) -> Result<Settings> {
    let config = match &g.config {
        Some(p) => parse_config(p)?,
        None => BTreeMap::new(),
    };
    for key in config.keys() {
        if !["format", "seed", "budget", "workers", "kmax", "gmax"].contains(&key.as_str()) {
            bail!("unknown config key `{key}`");
        }
    }
    fn get<T: std::str::FromStr>(c: &BTreeMap<String, String>, key: &str) -> Result<Option<T>> {
        c.get(key)
            .map(|v| v.parse::<T>().map_err(|_| anyhow::anyhow!("bad value for `{key}`: {v}")))
            .transpose()
    }
    let format = match g.format {
        Some(f) => f,
        None => match config.get("format").map(String::as_str) {
            None | Some("json") => Format::Json,
            Some("csv") => Format::Csv,
            Some(other) => bail!("bad value for `format`: {other}"),
        },
    };
    let default_workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    Ok(Settings {
        format: if format == Format::Csv { "csv" } else { "json" },
        seed: g.seed.or(get(&config, "seed")?).unwrap_or(42),
        budget: g.budget.or(get(&config, "budget")?).unwrap_or(DEFAULT_BUDGET),
        workers: g.workers.or(get(&config, "workers")?).unwrap_or(default_workers).max(1),
        kmax: get(&config, "kmax")?.unwrap_or(VERIFY_K_MAX),
        gmax: get(&config, "gmax")?.unwrap_or(3),
    })
}

/// A rendered report and the exit code it implies.
struct Outcome {
    body: String,
    code: i32,
}

fn json<T: Serialize>(v: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

#[derive(Serialize)]
struct BothReport {
    cartier: crate::cartier::CartierReport,
    zeta: crate::zeta::ZetaReport,
    agree: bool,
}

fn csv_table(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{header}\n");
    for r in rows {
        out.push_str(&r);
        out.push('\n');
    }
    out
}

fn zeta_ok(z: &crate::zeta::ZetaReport) -> bool {
    z.check.as_ref().map_or(true, |c| c.passed())
}

fn run(cmd: &Command, st: &Settings) -> Result<Outcome> {
    let csv = st.format == "csv";
    let ok = |body: String| Outcome { body, code: EXIT_OK };
    Ok(match cmd {
        Command::Prank { curve, method } => {
            let curve = read_json::<CurveJson>(curve)?.to_curve()?;
            let zeta = || -> Result<crate::zeta::ZetaReport> {
                let cover = CyclicCover::from_trielliptic(&curve)?;
                Ok(zeta_report(&cover, DEFAULT_COUNT_LIMIT, DEFAULT_COUNT_LIMIT)?)
            };
            match method {
                Method::Cartier => {
                    let c = cartier_report(&curve)?;
                    ok(if csv {
                        csv_table("method,g,prank", [format!("cartier,{},{}", c.g, c.prank)])
                    } else {
                        json(&c)?
                    })
                }
                Method::Zeta => {
                    let z = zeta()?;
                    let code = if zeta_ok(&z) { EXIT_OK } else { EXIT_INVARIANT };
                    let body = if csv {
                        csv_table("method,g,prank", [format!("zeta,{},{}", z.g, z.prank)])
                    } else {
                        json(&z)?
                    };
                    Outcome { body, code }
                }
                Method::Both => {
                    let c = cartier_report(&curve)?;
                    let z = zeta()?;
                    let agree = c.prank == z.prank && zeta_ok(&z);
                    let body = if csv {
                        csv_table(
                            "method,g,prank",
                            [format!("cartier,{},{}", c.g, c.prank), format!("zeta,{},{}", z.g, z.prank)],
                        )
                    } else {
                        json(&BothReport { cartier: c, zeta: z, agree })?
                    };
                    Outcome {
                        body,
                        code: if agree { EXIT_OK } else { EXIT_INVARIANT },
                    }
                }
            }
        }
        Command::Zeta { cover } => {
            let cover = read_json::<CoverJson>(cover)?.to_cover()?;
            let z = zeta_report(&cover, DEFAULT_COUNT_LIMIT, DEFAULT_COUNT_LIMIT)?;
            let body = if csv {
                csv_table("i,N_i", z.counts.iter().enumerate().map(|(i, n)| format!("{},{n}", i + 1)))
            } else {
                json(&z)?
            };
            Outcome {
                body,
                code: if zeta_ok(&z) { EXIT_OK } else { EXIT_INVARIANT },
            }
        }
        Command::Enumerate { l, g, p } => {
            #[derive(Serialize)]
            struct Row {
                inertia: InertiaTypeJson,
                signature: Vec<u64>,
                genus: u64,
                #[serde(skip_serializing_if = "Option::is_none")]
                bound: Option<u64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                e: Option<u64>,
            }
            let rows = enumerate_inertia_types(*l, *g)?
                .iter()
                .map(|t| {
                    let prof = p.map(|p| prank_profile(p, t)).transpose()?;
                    Ok(Row {
                        inertia: t.into(),
                        signature: signature_from_inertia(t).dims,
                        genus: t.genus(),
                        bound: prof.as_ref().map(|x| x.bound),
                        e: prof.as_ref().map(|x| x.e),
                    })
                })
                .collect::<Result<Vec<_>, ModuliError>>()?;
            ok(if csv {
                let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(";");
                csv_table(
                    "l,g,counts,signature,bound",
                    enumerate_inertia_types(*l, *g)?.iter().zip(&rows).map(|(t, r)| {
                        format!(
                            "{l},{},{},{},{}",
                            r.genus,
                            join(t.counts()),
                            join(&r.signature),
                            r.bound.map(|b| b.to_string()).unwrap_or_default()
                        )
                    }),
                )
            } else {
                json(&rows)?
            })
        }
        Command::Bound { p, ty, f } => {
            let t = ty.inertia()?;
            let prof = prank_profile(*p, &t)?;
            let adm = f.map(|f| prank_admissible(*p, &t, f)).transpose()?;
            ok(if csv {
                csv_table(
                    "p,l,e,g,bound,admissible",
                    [format!(
                        "{p},{},{},{},{},{}",
                        prof.l,
                        prof.e,
                        prof.g,
                        prof.bound,
                        adm.as_ref().map(|a| a.admissible.to_string()).unwrap_or_default()
                    )],
                )
            } else {
                json(&serde_json::json!({ "profile": prof, "admissibility": adm }))?
            })
        }
        Command::Strata { i, g, f, l, p, kind } => {
            let kind = match kind {
                Kind::Delta => BoundaryKind::Delta,
                Kind::Xi => BoundaryKind::Xi,
            };
            let sp = strata_pairs(*i, *g, *f, *l, *p, kind)?;
            ok(if csv {
                csv_table("f1,f2", sp.pairs.iter().map(|(a, b)| format!("{a},{b}")))
            } else {
                json(&sp)?
            })
        }
        Command::Dim { p, ty, f } => {
            let t = ty.inertia()?;
            let b = stratum_dim_bounds(*p, &t, *f)?;
            let tri = if t.l() == 3 {
                let sig = signature_from_inertia(&t);
                trielliptic_dim_lower(*p, sig.dims[0], sig.dims[1], *f)
            } else {
                None
            };
            ok(if csv {
                csv_table("lower,ambient,boundary", [format!("{},{},{}", b.lower, b.ambient, b.boundary)])
            } else {
                json(&serde_json::json!({ "bounds": b, "trielliptic_lower": tri }))?
            })
        }
        Command::Scan { p, k, d1, d2, dedupe } => {
            let rep = exhaustive_scan(*p, *k, *d1, *d2, *dedupe, st.budget)?;
            let code = if rep.agreement && rep.admissible { EXIT_OK } else { EXIT_INVARIANT };
            Outcome {
                body: if csv { rep.csv() } else { json(&rep)? },
                code,
            }
        }
        Command::Search { p, r, s, f, kmax } => {
            let rep = find_witness(*p, *r, *s, *f, kmax.unwrap_or(st.kmax), st.budget, st.seed)?;
            let code = match &rep.witness {
                None => EXIT_REJECTED,
                Some(w) if !w.agrees() => EXIT_INVARIANT,
                Some(_) => EXIT_OK,
            };
            let body = if csv {
                csv_table(
                    "p,r,s,f,found,k,tried",
                    [format!(
                        "{p},{r},{s},{f},{},{},{}",
                        rep.found(),
                        rep.witness.as_ref().map(|w| w.k.to_string()).unwrap_or_default(),
                        rep.attempts.iter().map(|a| a.tried).sum::<u64>()
                    )],
                )
            } else {
                json(&rep)?
            };
            Outcome { body, code }
        }
        Command::Verify { p, gmax } => {
            let rep = verify_suite(p, gmax.unwrap_or(st.gmax), st.budget, st.seed);
            let code = if rep.invariant_failure() {
                EXIT_INVARIANT
            } else if rep.all_passed {
                EXIT_OK
            } else {
                EXIT_REJECTED
            };
            let body = if csv {
                csv_table(
                    "claim,p,passed,invariant",
                    rep.claims
                        .iter()
                        .map(|c| format!("\"{}\",{},{},{}", c.name, c.p, c.passed, c.invariant)),
                )
            } else {
                json(&rep)?
            };
            Outcome { body, code }
        }
    })
}

/// Exit code for an error that escaped a subcommand.
fn classify(e: &anyhow::Error) -> i32 {
    let inconsistent = |z: &ZetaError| matches!(z, ZetaError::Inconsistent(_));
    if let Some(z) = e.downcast_ref::<ZetaError>() {
        if inconsistent(z) {
            return EXIT_INVARIANT;
        }
    }
    if let Some(SearchError::Zeta(z)) = e.downcast_ref::<SearchError>() {
        if inconsistent(z) {
            return EXIT_INVARIANT;
        }
    }
    EXIT_REJECTED
}

fn input_paths(cmd: &Command) -> Vec<&Path> {
    match cmd {
        Command::Prank { curve, .. } => vec![curve.as_path()],
        Command::Zeta { cover } => vec![cover.as_path()],
        _ => Vec::new(),
    }
}

fn sha256_file(path: &Path) -> Option<String> {
    let bytes = fs::read(path).ok()?;
    Some(hex::encode(Sha256::digest(&bytes)))
}

fn unix_ms() -> u128 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_millis())
}

#[derive(Serialize)]
struct RunManifest<'a> {
    command_line: &'a [String],
    config: &'a Settings,
    seed: u64,
    started_unix_ms: u128,
    finished_unix_ms: u128,
    elapsed_ms: u128,
    version: &'static str,
    input_digests: BTreeMap<String, Option<String>>,
    exit_code: i32,
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_owned();
    name.push(".manifest.jsonl");
    PathBuf::from(name)
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code: 0 success, 1 rejected input or unmet claim,
/// 2 violated invariant, 64 usage error.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<String>,
{
    let argv: Vec<String> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
        }
    };
    match execute(&cli, &argv) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            classify(&e)
        }
    }
}

fn execute(cli: &Cli, argv: &[String]) -> Result<i32> {
    let started = unix_ms();
    let clock = Instant::now();
    let st = resolve(&cli.global)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(st.workers)
        .build()
        .context("starting worker pool")?;
    let outcome = pool.install(|| run(&cli.command, &st))?;
    match &cli.global.out {
        Some(out) => {
            fs::write(out, &outcome.body).with_context(|| format!("writing {}", out.display()))?;
            let manifest = RunManifest {
                command_line: argv,
                config: &st,
                seed: st.seed,
                started_unix_ms: started,
                finished_unix_ms: unix_ms(),
                elapsed_ms: clock.elapsed().as_millis(),
                version: env!("CARGO_PKG_VERSION"),
                input_digests: input_paths(&cli.command)
                    .into_iter()
                    .map(|p| (p.display().to_string(), sha256_file(p)))
                    .collect(),
                exit_code: outcome.code,
            };
            let mut f = OpenOptions::new()
                .create(true)
                .append(true)
                .open(manifest_path(out))
                .context("opening manifest")?;
            writeln!(f, "{}", serde_json::to_string(&manifest)?)?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(outcome.body.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(outcome.code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(&path, "# comment\nbudget = 1000\nseed=7\n\nkmax = 2\n").unwrap();
        let c = parse_config(&path).unwrap();
        assert_eq!(c["budget"], "1000");
        assert_eq!(c["seed"], "7");
        let g = Global {
            format: None,
            out: None,
            seed: Some(9),
            budget: None,
            workers: Some(1),
            config: Some(path),
        };
        let st = resolve(&g).unwrap();
        assert_eq!(st.seed, 9);
        assert_eq!(st.budget, 1000);
        assert_eq!(st.kmax, 2);
    }

    #[test]
    fn bad_config_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.conf");
        fs::write(&path, "colour = blue\n").unwrap();
        assert_eq!(
            dispatch(["tricover", "--config", path.to_str().unwrap(), "bound", "--p", "5", "--r", "1", "--s", "1"]),
            EXIT_REJECTED
        );
    }

    #[test]
    fn manifest_path_appends_suffix() {
        assert_eq!(manifest_path(Path::new("/tmp/a.json")), PathBuf::from("/tmp/a.json.manifest.jsonl"));
    }
}
