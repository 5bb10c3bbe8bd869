use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use kottwitz_core::adlv::{adlv_points, twisted_orbital_integral};
use kottwitz_core::galois::text::parse_lattice_file;
use kottwitz_core::kottwitz::fixtures::parse_fixtures;
use kottwitz_core::kottwitz::{kottwitz_invariant_with, parameter_fourier_sum, AmbientData};
use kottwitz_core::modular::{
    compare, count_points_with, rhs_assemble, Cache, Config, Convention, CountStrategy, CurveCountRequest, LevelKind, PcfReport,
    RhsOptions,
};
use kottwitz_core::padic::{literal::parse_matrix, max_precision, Unramified};
use kottwitz_core::rootdata::{enumerate_elliptic_endoscopy, iota, preset};
use kottwitz_core::Error;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

mod selftest;

#[derive(Parser)]
#[command(name = "kottwitz", version, about = "Kottwitz-style point counting for GL_2 and friends")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Global {
    /// p-adic working precision (digits)
    #[arg(long, global = true)]
    precision: Option<u32>,
    /// Search depth for lattice enumerations
    #[arg(long, global = true)]
    depth: Option<u32>,
    /// Cap on enumerated lattices
    #[arg(long, global = true)]
    cap: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for randomized checks
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// key = value defaults file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args, Clone, Copy)]
struct Request {
    #[arg(long)]
    p: u32,
    #[arg(long, default_value_t = 1)]
    m: u32,
    #[arg(long = "N")]
    level: u32,
    /// y (full level) or y1 (point of order N)
    #[arg(long, default_value = "y", value_parser = parse_kind)]
    kind: LevelKind,
}

fn parse_kind(s: &str) -> Result<LevelKind, String> {
    LevelKind::parse(s).map_err(|e| e.to_string())
}

impl Request {
    fn get(&self) -> CurveCountRequest {
        CurveCountRequest { p: self.p, m: self.m, level: self.level, kind: self.kind }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    Maximal,
    Order,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    J,
    Weierstrass,
}

#[derive(Subcommand)]
enum Cmd {
    /// Order and structure of the Kottwitz group
    Kgroup {
        /// gl2, gl2-split, sl2 or sl2-split
        #[arg(long, conflicts_with = "lattice")]
        preset: Option<String>,
        /// Lattice file with I, G and the map I -> G
        #[arg(long, requires = "place")]
        lattice: Option<PathBuf>,
        /// Label of the place above p in the lattice file
        #[arg(long)]
        place: Option<String>,
        /// Hodge lift, comma separated
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        mu: Vec<i64>,
    },
    /// Elliptic endoscopic data of a preset root datum
    Endoscopy {
        #[arg(long)]
        group: String,
        #[arg(long, default_value_t = 4)]
        torsion_bound: i64,
    },
    /// Kottwitz invariants and Fourier sums for a fixture file
    Fourier {
        #[arg(long)]
        fixtures: PathBuf,
        /// Random lift choices per parameter
        #[arg(long, default_value_t = 0)]
        lifts: usize,
    },
    /// Points of an affine Deligne-Lusztig set and the twisted orbital integral
    Adlv {
        #[arg(long)]
        p: i64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// Matrix literal, e.g. "0, -5; 1, 0"
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, value_delimiter = ',', default_value = "1,0", allow_hyphen_values = true)]
        mu: Vec<i64>,
    },
    /// Points of Y(N) or Y1(N) over F_{p^m}
    Count {
        #[command(flatten)]
        req: Request,
        #[arg(long, value_enum, default_value_t = StrategyArg::J)]
        strategy: StrategyArg,
    },
    /// Trace-formula side for Y(N)
    Rhs {
        #[command(flatten)]
        req: Request,
        #[arg(long, value_enum, default_value_t = ConventionArg::Maximal)]
        convention: ConventionArg,
    },
    /// Both sides and their comparison
    Compare {
        #[command(flatten)]
        req: Request,
        #[arg(long, value_enum, default_value_t = ConventionArg::Maximal)]
        convention: ConventionArg,
    },
    /// Quick consistency checks across all modules
    Selftest,
}

struct CmdError {
    code: u8,
    msg: String,
}

impl From<Error> for CmdError {
    fn from(e: Error) -> Self {
        CmdError { code: if e.is_guard() { 3 } else { 2 }, msg: e.to_string() }
    }
}

fn io_err(e: std::io::Error, path: &PathBuf) -> CmdError {
    CmdError { code: 2, msg: format!("{}: {e}", path.display()) }
}

struct Env {
    config: Config,
    format: Format,
    seed: u64,
}

impl Env {
    fn rhs_options(&self, convention: ConventionArg) -> RhsOptions {
        RhsOptions {
            convention: match convention {
                ConventionArg::Maximal => Convention::Maximal,
                ConventionArg::Order => Convention::Order,
            },
            max_depth: self.config.depth,
            precision: self.config.precision,
        }
    }

    fn cache(&self) -> Cache {
        Cache::new(self.config.cache_dir.clone())
    }

    fn emit(&self, value: &Value, text: &str, csv: &str) {
        let out = match self.format {
            Format::Json => serde_json::to_string_pretty(value).unwrap() + "\n",
            Format::Csv => csv.to_string(),
            Format::Text => text.to_string(),
        };
        let mut stdout = std::io::stdout().lock();
        if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
            // downstream closed the pipe
            std::process::exit(0);
        }
    }

    fn emit_report(&self, rep: &PcfReport) {
        self.emit(&rep.to_json(), &rep.to_text(), &rep.to_csv());
    }
}

fn setup(g: &Global) -> Result<Env, CmdError> {
    let mut config = match &g.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    config = config.with_env(|k| std::env::var(k).ok())?;
    if let Some(p) = g.precision {
        config.precision = Some(p);
    }
    if let Some(d) = g.depth {
        config.depth = d;
    }
    if let Some(c) = g.cap {
        config.cap = c;
    }
    if let Some(j) = g.jobs {
        config.jobs = Some(j);
    }
    if let Some(j) = config.jobs {
        rayon::ThreadPoolBuilder::new().num_threads(j.max(1)).build_global().ok();
    }
    Ok(Env { config, format: g.format, seed: g.seed })
}

fn kv_text(rows: &[(String, String)]) -> String {
    rows.iter().map(|(k, v)| format!("{k}: {v}\n")).collect()
}

fn kv_csv(rows: &[(String, String)]) -> String {
    let head: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
    let vals: Vec<&str> = rows.iter().map(|r| r.1.as_str()).collect();
    format!("{}\n{}\n", head.join(","), vals.join(","))
}

fn run(cli: Cli) -> Result<u8, CmdError> {
    let env = setup(&cli.global)?;
    match cli.cmd {
        Cmd::Kgroup { preset: name, lattice, place, mu } => {
            let amb = match (name, lattice) {
                (_, Some(path)) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| io_err(e, &path))?;
                    let file = parse_lattice_file(&text)?;
                    AmbientData::from_lattice_file("file", &file, place.as_deref().unwrap_or_default(), &mu)?
                }
                (Some(n), None) => AmbientData::preset(&n)?,
                (None, None) => return Err(CmdError { code: 2, msg: "kgroup needs --preset or --lattice".into() }),
            };
            let (inv, free) = amb.kgroup.e.group.invariants();
            let inv: Vec<String> = inv.iter().map(|d| d.to_string()).collect();
            let order = amb.k_order()?;
            let rows = vec![
                ("ambient".to_string(), amb.name.clone()),
                ("order".to_string(), order.to_string()),
                ("invariants".to_string(), format!("[{}]", inv.join(" "))),
                ("free_rank".to_string(), free.to_string()),
            ];
            let json = json!({ "ambient": amb.name, "order": order, "invariants": inv, "free_rank": free });
            env.emit(&json, &kv_text(&rows), &kv_csv(&rows));
            Ok(0)
        }
        Cmd::Endoscopy { group, torsion_bound } => {
            let rd = preset(&group)?;
            let data = enumerate_elliptic_endoscopy(&rd, torsion_bound)?;
            let mut rows = Vec::new();
            for e in &data {
                let i = iota(&rd, e).map(|r| format!("{}/{}", r.numer(), r.denom())).unwrap_or_else(|err| format!("n/a ({err})"));
                rows.push((e.label(), e.out_order, i));
            }
            let json = json!({
                "group": group,
                "elliptic_classes": rows.iter().map(|(l, o, i)| json!({ "h": l, "out_order": o, "iota": i })).collect::<Vec<_>>(),
            });
            let text: String = rows.iter().map(|(l, o, i)| format!("{l}\t|Out| = {o}\tiota = {i}\n")).collect();
            let csv = std::iter::once("h,out_order,iota\n".to_string())
                .chain(rows.iter().map(|(l, o, i)| format!("{l},{o},{i}\n")))
                .collect::<String>();
            env.emit(&json, &text, &csv);
            Ok(0)
        }
        Cmd::Fourier { fixtures, lifts } => {
            let text = std::fs::read_to_string(&fixtures).map_err(|e| io_err(e, &fixtures))?;
            let params = parse_fixtures(&text, &AmbientData::preset)?;
            let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
            let mut rows = Vec::new();
            let mut stable = true;
            for (amb, c) in &params {
                let alpha = kottwitz_invariant_with::<ChaCha8Rng>(amb, c, None)?;
                for _ in 0..lifts {
                    let other = kottwitz_invariant_with(amb, c, Some(&mut rng))?;
                    stable &= amb.kgroup.e.group.equal(&alpha, &other);
                }
                let sum = parameter_fourier_sum(amb, c)?;
                let a: Vec<String> = amb.kgroup.e.group.canonical(&alpha).iter().map(|x| x.to_string()).collect();
                rows.push((c.id.clone(), amb.name.clone(), a.join(" "), sum.to_string()));
            }
            let json = json!({
                "lift_independent": stable,
                "rows": rows.iter().map(|(id, amb, a, s)| json!({ "id": id, "ambient": amb, "alpha": a, "fourier_sum": s })).collect::<Vec<_>>(),
            });
            let text: String = rows.iter().map(|(id, amb, a, s)| format!("{id}\t{amb}\talpha = [{a}]\tsum = {s}\n")).collect();
            let csv = std::iter::once("id,ambient,alpha,fourier_sum\n".to_string())
                .chain(rows.iter().map(|(id, amb, a, s)| format!("{id},{amb},{a},{s}\n")))
                .collect::<String>();
            env.emit(&json, &text, &csv);
            Ok(if stable { 0 } else { 1 })
        }
        Cmd::Adlv { p, n, b, mu } => {
            let prec = env.config.precision.unwrap_or(24).min(max_precision(p));
            let ring = Unramified::new(p, n, prec)?;
            let b = parse_matrix(&ring, &b)?;
            let depth = env.config.depth.min(4);
            let window = adlv_points(&b, &mu, depth, true, env.config.cap)?;
            let to = if b.rows() == 2 { Some(twisted_orbital_integral(&b, &mu, env.config.depth)) } else { None };
            let to_str = match &to {
                Some(Ok(t)) => format!("{}/{}", t.value.numer(), t.value.denom()),
                Some(Err(e)) => format!("n/a ({e})"),
                None => "n/a".to_string(),
            };
            let rows = vec![
                ("depth".to_string(), window.depth_used.to_string()),
                ("points".to_string(), window.count_at_depth.to_string()),
                ("points_next".to_string(), window.count_at_next.to_string()),
                ("saturated".to_string(), window.saturated.to_string()),
                ("frobenius_stable".to_string(), window.frobenius_stable.to_string()),
                ("TO".to_string(), to_str.clone()),
            ];
            let json = json!({
                "depth": window.depth_used,
                "points": window.count_at_depth,
                "points_next": window.count_at_next,
                "saturated": window.saturated,
                "frobenius_stable": window.frobenius_stable,
                "TO": to_str,
            });
            env.emit(&json, &kv_text(&rows), &kv_csv(&rows));
            match to {
                Some(Err(e)) if e.is_guard() => Ok(3),
                _ => Ok(0),
            }
        }
        Cmd::Count { req, strategy } => {
            let r = req.get();
            let s = match strategy {
                StrategyArg::J => CountStrategy::JInvariant,
                StrategyArg::Weierstrass => CountStrategy::Weierstrass,
            };
            let n = count_points_with(&r, s)?;
            let rep = PcfReport { request: r, lhs: Some(n), rhs: None, timings: Default::default() };
            env.emit_report(&rep);
            Ok(0)
        }
        Cmd::Rhs { req, convention } => {
            let r = req.get();
            let rhs = rhs_assemble(&r, &env.rhs_options(convention), &env.cache())?;
            let rep = PcfReport { request: r, lhs: None, rhs: Some(rhs), timings: Default::default() };
            env.emit_report(&rep);
            Ok(0)
        }
        Cmd::Compare { req, convention } => {
            let rep = compare(&req.get(), &env.rhs_options(convention), &env.cache())?;
            env.emit_report(&rep);
            Ok(if rep.matched() { 0 } else { 1 })
        }
        Cmd::Selftest => {
            let results = selftest::run(env.seed);
            let ok = results.iter().all(|r| r.1);
            let json = json!(results.iter().map(|(name, pass, detail)| json!({ "check": name, "pass": pass, "detail": detail })).collect::<Vec<_>>());
            let text: String =
                results.iter().map(|(name, pass, detail)| format!("{} {name}: {detail}\n", if *pass { "PASS" } else { "FAIL" })).collect();
            let csv = std::iter::once("check,pass,detail\n".to_string())
                .chain(results.iter().map(|(n, p, d)| format!("{n},{p},{d}\n")))
                .collect::<String>();
            env.emit(&json, &text, &csv);
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.msg);
            ExitCode::from(e.code)
        }
    }
}
