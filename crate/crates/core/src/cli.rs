//! Command-line front end: argument parsing, `RunConfig` and the pipelines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::example;
use crate::interp::{DiskPoint, FiniteFamily, Interpolation};
use crate::orlicz::{builtin_functions, builtin_n_functions, delta2_probe, FunctionSpec, OrliczFunction};
use crate::sequence::{luxemburg_norm, modular, FiniteSequence};

pub const DEFAULT_SEED: u64 = 0x5eed_0f_0a11c3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Table {
    Witness,
    Divergence,
    Sandwich,
    Ell2,
    Psi2,
}

impl Table {
    fn default_file(self) -> &'static str {
        match self {
            Table::Witness => "witness.csv",
            Table::Divergence => "divergence.csv",
            Table::Sandwich => "sandwich.csv",
            Table::Ell2 => "ell2.csv",
            Table::Psi2 => "psi2.csv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Subcommand)]
pub enum Command {
    /// Luxemburg norm of a sequence, in a registry function or in φ_z of a family.
    Norm,
    /// Tabulate the convex conjugate of a registry function.
    Conjugate,
    /// Tabulate φ_z and φ_z⁻¹ for a family at a point of the disk.
    Interpolate,
    /// The derivation Ω_z(x) as CSV.
    Derive,
    /// Centralizer defect over random unimodular multipliers.
    Defect,
    /// Tables of the three-space example.
    Example,
    /// Self-test of the built-in registry; prints a pass table.
    Check,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Norm => "norm",
            Command::Conjugate => "conjugate",
            Command::Interpolate => "interpolate",
            Command::Derive => "derive",
            Command::Defect => "defect",
            Command::Example => "example",
            Command::Check => "check",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "orlicz", version, about = "Interpolation of Orlicz sequence spaces and their derivations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Family config JSON, or `paper` for the built-in three-space family.
    #[arg(long, global = true)]
    pub family: Option<String>,
    /// Registry function: a name (phi0, phi1, phi2, square, ...), inline JSON or a JSON file.
    #[arg(long, global = true)]
    pub function: Option<String>,
    /// Point of the disk as `RE,IM` (or `RE`).
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Sequence: `sn:N`, `e:N`, `file:PATH` (JSON triples or CSV).
    #[arg(long, global = true)]
    pub x: Option<String>,
    /// Output file; defaults to stdout (or `<table>.csv` for `example`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Grid: `log:LO:HI:N`, `lin:LO:HI:N` or a comma list.
    #[arg(long, global = true)]
    pub grid: Option<String>,
    /// Comma list of γ values for the divergence table.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// Comma list of n values (integers or `1e6` style).
    #[arg(long, global = true)]
    pub n: Option<String>,
    #[arg(long, global = true, value_enum)]
    pub table: Option<Table>,
    /// Number of random trials (defect, ell2).
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Tolerance override `NAME=VALUE`; repeatable.
    #[arg(long = "tol", global = true)]
    pub tolerances: Vec<String>,
}

/// Where the family comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilySource {
    BuiltIn,
    File(PathBuf),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub family: Option<FamilySource>,
    pub function: Option<String>,
    pub z: Option<DiskPoint>,
    pub x: Option<String>,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
    pub grid: Option<String>,
    pub gamma: Option<String>,
    pub n: Option<String>,
    pub table: Option<Table>,
    pub trials: Option<usize>,
    pub tolerances: BTreeMap<String, f64>,
}

fn input(field: &str, message: impl Into<String>) -> Error {
    Error::Config { field: field.into(), message: message.into() }
}

pub fn parse_z(text: &str) -> Result<DiskPoint> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|_| input("z", format!("not a number: `{s}`")));
    let z = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(input("z", format!("expected RE,IM, got `{text}`"))),
    };
    DiskPoint::new(z).map_err(|e| input("z", e.to_string()))
}

fn parse_list(field: &str, text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            if let Some((a, b)) = s.split_once('/') {
                let a: f64 = a.trim().parse().map_err(|_| input(field, format!("not a number: `{s}`")))?;
                let b: f64 = b.trim().parse().map_err(|_| input(field, format!("not a number: `{s}`")))?;
                Ok(a / b)
            } else {
                s.parse::<f64>().map_err(|_| input(field, format!("not a number: `{s}`")))
            }
        })
        .collect()
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    match parts.as_slice() {
        [kind @ ("log" | "lin"), lo, hi, n] => {
            let lo: f64 = lo.parse().map_err(|_| input("grid", format!("bad lower bound `{lo}`")))?;
            let hi: f64 = hi.parse().map_err(|_| input("grid", format!("bad upper bound `{hi}`")))?;
            let n: usize = n.parse().map_err(|_| input("grid", format!("bad point count `{n}`")))?;
            if n == 0 || !(lo <= hi) || (*kind == "log" && !(lo > 0.0)) {
                return Err(input("grid", format!("invalid grid `{text}`")));
            }
            if *kind == "log" {
                Ok(example::log_grid(lo, hi, n))
            } else if n == 1 {
                Ok(vec![lo])
            } else {
                Ok((0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect())
            }
        }
        _ => parse_list("grid", text),
    }
}

fn read(path: &Path, field: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|e| input(field, format!("{}: {e}", path.display())))
}

pub fn parse_sequence(text: &str) -> Result<FiniteSequence> {
    let count = |s: &str| s.parse::<usize>().map_err(|_| input("x", format!("bad count `{s}`")));
    if let Some(n) = text.strip_prefix("sn:") {
        return FiniteSequence::flat(count(n)?).map_err(|e| input("x", e.to_string()));
    }
    if let Some(n) = text.strip_prefix("e:") {
        return FiniteSequence::unit(count(n)?).map_err(|e| input("x", e.to_string()));
    }
    let path = Path::new(text.strip_prefix("file:").or_else(|| text.strip_prefix("file ")).unwrap_or(text).trim());
    let body = read(path, "x")?;
    let parsed = if body.trim_start().starts_with('[') {
        FiniteSequence::from_json(&body)
    } else {
        FiniteSequence::from_csv(&body)
    };
    parsed.map_err(|e| input("x", e.to_string()))
}

pub fn parse_function(text: &str) -> Result<OrliczFunction> {
    let spec = if let Some((_, spec)) = builtin_functions().into_iter().find(|(name, _)| *name == text) {
        spec
    } else if text.trim_start().starts_with('{') {
        FunctionSpec::from_json(text)?
    } else {
        FunctionSpec::from_json(&read(Path::new(text), "function")?)?
    };
    spec.build()
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let family = cli.family.map(|f| if f == "paper" { FamilySource::BuiltIn } else { FamilySource::File(f.into()) });
        let z = cli.z.as_deref().map(parse_z).transpose()?;
        let mut tolerances = BTreeMap::new();
        for t in &cli.tolerances {
            let (k, v) = t.split_once('=').ok_or_else(|| input("tol", format!("expected NAME=VALUE, got `{t}`")))?;
            let v: f64 = v.parse().map_err(|_| input("tol", format!("bad value in `{t}`")))?;
            tolerances.insert(k.trim().to_string(), v);
        }
        Ok(RunConfig {
            command: cli.command,
            family,
            function: cli.function,
            z,
            x: cli.x,
            output_path: cli.out,
            seed: cli.seed.unwrap_or(DEFAULT_SEED),
            grid: cli.grid,
            gamma: cli.gamma,
            n: cli.n,
            table: cli.table,
            trials: cli.trials,
            tolerances,
        })
    }

    fn load_family(&self) -> Result<FiniteFamily> {
        match &self.family {
            Some(FamilySource::BuiltIn) => example::three_space_family(),
            Some(FamilySource::File(p)) => FiniteFamily::from_json(&read(p, "family")?),
            None => Err(input("family", "required for this command")),
        }
    }

    fn z_or_origin(&self) -> DiskPoint {
        self.z.unwrap_or_else(DiskPoint::origin)
    }

    fn sequence(&self) -> Result<FiniteSequence> {
        parse_sequence(self.x.as_deref().ok_or_else(|| input("x", "required for this command"))?)
    }

    fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Output of a pipeline: the artifact text and whether its checks held.
struct Artifact {
    body: String,
    checks_hold: bool,
    default_file: Option<&'static str>,
}

impl Artifact {
    fn ok(body: String) -> Self {
        Artifact { body, checks_hold: true, default_file: None }
    }
}

fn csv_float(v: f64) -> String {
    format!("{v:.16e}")
}

fn run_norm(cfg: &RunConfig) -> Result<Artifact> {
    let x = cfg.sequence()?;
    let (phi, label) = if cfg.family.is_some() {
        let it = Interpolation::new(&cfg.load_family()?, cfg.z_or_origin())?;
        (it.phi_z().clone(), "phi_z".to_string())
    } else {
        let f = cfg.function.as_deref().ok_or_else(|| input("function", "norm needs --function or --family"))?;
        let phi = parse_function(f)?;
        let label = phi.label().to_string();
        (phi, label)
    };
    let norm = luxemburg_norm(&phi, &x)?;
    let m = if norm > 0.0 { modular(&phi, &x, norm)? } else { 0.0 };
    Ok(Artifact::ok(format!(
        "function,support,norm,modular_at_norm\n{label},{},{},{}\n",
        x.support_size(),
        csv_float(norm),
        csv_float(m)
    )))
}

fn run_conjugate(cfg: &RunConfig) -> Result<Artifact> {
    let f = cfg.function.as_deref().ok_or_else(|| input("function", "required for conjugate"))?;
    let phi = parse_function(f)?;
    let conj = phi.conjugate()?;
    let top = conj.t0().min(1.0);
    let grid = match &cfg.grid {
        Some(g) => parse_grid(g)?,
        None => example::log_grid(top * 1e-6, top, 25),
    };
    let mut s = String::from("y,conjugate,argmax\n");
    for y in grid {
        writeln!(s, "{},{},{}", csv_float(y), csv_float(conj.evaluate(y)?), csv_float(conj.derivative(y))).unwrap();
    }
    Ok(Artifact::ok(s))
}

fn run_interpolate(cfg: &RunConfig) -> Result<Artifact> {
    let family = cfg.load_family()?;
    let it = Interpolation::new(&family, cfg.z_or_origin())?;
    let grid = match &cfg.grid {
        Some(g) => parse_grid(g)?,
        None => example::log_grid(1e-12, 1e-2, 21),
    };
    let mut s = String::from("t,phi_z,phi_z_inverse\n");
    for t in grid {
        writeln!(s, "{},{},{}", csv_float(t), csv_float(it.phi_z().evaluate(t)?), csv_float(it.phi_z().inverse(t)?)).unwrap();
    }
    Ok(Artifact::ok(s))
}

fn run_derive(cfg: &RunConfig) -> Result<Artifact> {
    let it = Interpolation::new(&cfg.load_family()?, cfg.z_or_origin())?;
    let report = it.derivation(&cfg.sequence()?)?;
    Ok(Artifact::ok(report.to_csv()))
}

/// Random `x` (uniform entries in `[−1, 1]` on a random support of at most
/// `max_support` indices) and `u` on the same support, with `|u(n)| = 1` when
/// `unimodular` and `|u(n)|` uniform in `[0, 1]` otherwise.
pub fn random_defect_pair(rng: &mut ChaCha8Rng, max_support: usize, unimodular: bool) -> Result<(FiniteSequence, FiniteSequence)> {
    let k = rng.gen_range(1..=max_support);
    let mut x = FiniteSequence::new();
    let mut u = FiniteSequence::new();
    for n in 1..=k {
        let v: f64 = rng.gen_range(-1.0..1.0);
        x.set(n, Complex64::new(v, 0.0))?;
        let modulus = if unimodular { 1.0 } else { rng.gen_range(0.0..1.0) };
        u.set(n, Complex64::from_polar(modulus, rng.gen_range(0.0..std::f64::consts::TAU)))?;
    }
    if x.is_empty() {
        x.set(1, Complex64::new(1.0, 0.0))?;
    }
    Ok((x, u))
}

fn run_defect(cfg: &RunConfig) -> Result<Artifact> {
    let it = Interpolation::new(&cfg.load_family()?, cfg.z_or_origin())?;
    let trials = cfg.trials.unwrap_or(100);
    let unimodular = cfg.tol("unimodular", 1.0) != 0.0;
    let bound = cfg.tol("defect_bound", 10.0);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut s = String::from("trial,support,defect\n");
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let (x, u) = random_defect_pair(&mut rng, 64, unimodular)?;
        let d = it.centralizer_defect(&x, &u)?;
        worst = worst.max(d);
        writeln!(s, "{trial},{},{}", x.support_size(), csv_float(d)).unwrap();
    }
    Ok(Artifact { body: s, checks_hold: worst.is_finite() && worst <= bound, default_file: None })
}

fn parse_ns(cfg: &RunConfig, default: &[f64]) -> Result<Vec<f64>> {
    match &cfg.n {
        Some(text) => {
            let v = parse_list("n", text)?;
            if v.iter().any(|&n| !(n >= 1.0) || n.fract() != 0.0) {
                return Err(input("n", "entries must be positive integers"));
            }
            Ok(v)
        }
        None => Ok(default.to_vec()),
    }
}

fn run_example(cfg: &RunConfig) -> Result<Artifact> {
    let table = cfg.table.ok_or_else(|| input("table", "one of witness, divergence, sandwich, ell2, psi2"))?;
    let (body, checks_hold) = match table {
        Table::Witness => {
            let ns: Vec<u64> = parse_ns(cfg, &[1e2, 1e3, 1e4, 1e5, 1e6])?.into_iter().map(|n| n as u64).collect();
            let rows = example::witness_rows(&ns)?;
            let tol = cfg.tol("omega_atol", 1e-8);
            (example::witness_csv(&rows), rows.iter().all(|r| r.omega_check <= tol))
        }
        Table::Divergence => {
            let ns = parse_ns(cfg, &example::decade_grid(2, 16))?;
            let gammas = match &cfg.gamma {
                Some(g) => parse_list("gamma", g)?,
                None => example::GAMMA_GRID.to_vec(),
            };
            let r = example::divergence_report(&ns, &gammas)?;
            let ok = r.abs_a_strictly_increasing && r.gamma_growth.iter().all(|g| g.grows_by_one());
            (example::divergence_csv(&r), ok)
        }
        Table::Sandwich => {
            let grid = match &cfg.grid {
                Some(g) => parse_grid(g)?,
                None => example::log_grid(1e-12, 1e-2, 50),
            };
            let r = example::sandwich_check(&grid)?;
            (example::sandwich_csv(&r), r.holds())
        }
        Table::Ell2 => {
            let r = example::ell2_equivalence_probe(cfg.trials.unwrap_or(1000), 256, cfg.seed)?;
            let mut s = String::from("support,samples,min_ratio,max_ratio\n");
            for b in &r.bands {
                writeln!(s, "{},{},{},{}", b.support, b.samples, csv_float(b.min_ratio), csv_float(b.max_ratio)).unwrap();
            }
            (s, r.stable())
        }
        Table::Psi2 => {
            let grid = match &cfg.grid {
                Some(g) => parse_grid(g)?,
                None => (1..=20).map(|k| 0.005 * k as f64).collect(),
            };
            let r = example::psi2_closed_form_check(&grid)?;
            let mut s = String::from("s,numeric,closed_form,rel_err\n");
            for row in &r.rows {
                writeln!(s, "{},{},{},{}", csv_float(row.s), csv_float(row.numeric), csv_float(row.closed_form), csv_float(row.rel_err))
                    .unwrap();
            }
            (s, r.max_rel_err <= 1e-6 && r.identity_max_rel_err <= 1e-12)
        }
    };
    Ok(Artifact { body, checks_hold, default_file: Some(table.default_file()) })
}

fn run_check(cfg: &RunConfig) -> Result<Artifact> {
    let mut rows: Vec<(String, bool, String)> = Vec::new();
    let mut record = |name: String, res: Result<(bool, String)>| match res {
        Ok((ok, detail)) => rows.push((name, ok, detail)),
        Err(e) => rows.push((name, false, e.to_string())),
    };

    for (name, spec) in builtin_functions() {
        record(format!("validate/{name}"), (|| {
            let r = spec.build()?.validate(128)?;
            Ok((r.passed, r.summary()))
        })());
        record(format!("round-trip/{name}"), (|| {
            let phi = spec.build()?;
            let mut worst: f64 = 0.0;
            for s in example::log_grid(1e-100, 1e2, 40) {
                worst = worst.max((phi.evaluate(phi.inverse(s)?)? - s).abs() / s);
            }
            Ok((worst <= 1e-9, format!("max rel err {worst:.2e}")))
        })());
        record(format!("delta2/{name}"), (|| {
            let r = delta2_probe(&spec.build()?)?;
            Ok((r.sup_ratio >= 2.0 - 1e-12 && r.sup_ratio.is_finite(), format!("sup ratio {:.6}", r.sup_ratio)))
        })());
    }
    for (name, spec) in builtin_n_functions() {
        record(format!("young/{name}"), (|| {
            let phi = spec.build()?;
            let conj = phi.conjugate()?;
            let top = phi.t0().min(1.0).min(conj.t0());
            let mut ok = true;
            for t in example::log_grid(top * 1e-8, top, 8) {
                for s in example::log_grid(top * 1e-8, top, 8) {
                    ok &= t * s <= phi.evaluate(t)? + conj.evaluate(s)? + 1e-15;
                }
            }
            Ok((ok, "t s <= phi(t) + phi*(s)".into()))
        })());
    }

    let family = example::three_space_family();
    record("family/harmonic-measure-sum".into(), (|| {
        let f = family.clone()?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let z = DiskPoint::new(Complex64::from_polar(rng.gen_range(0.0..0.99), rng.gen_range(0.0..6.28)))?;
            worst = worst.max((f.weights(z)?.iter().sum::<f64>() - 1.0).abs());
            worst = worst.max(f.herglotz_primes(z).iter().sum::<Complex64>().norm());
        }
        Ok((worst <= 1e-10, format!("max deviation {worst:.2e}")))
    })());
    record("family/json-round-trip".into(), (|| {
        let f = family.clone()?;
        let g = FiniteFamily::from_json(&f.to_json()?)?;
        let z = DiskPoint::new(Complex64::new(0.3, -0.45))?;
        Ok((f.weights(z)? == g.weights(z)?, "weights identical".into()))
    })());
    record("derivation/homogeneity".into(), (|| {
        let it = Interpolation::new(&family.clone()?, DiskPoint::new(Complex64::new(0.2, 0.1))?)?;
        let x = FiniteSequence::from_real(&[0.3, -1.0, 2e-3, 0.3])?;
        let lam = Complex64::new(1.5, -0.5);
        let a = it.derivation(&x.scale(lam))?.omega;
        let b = it.derivation(&x)?.omega.scale(lam);
        let worst = x.support().iter().map(|&n| (a.get(n) - b.get(n)).norm() / b.get(n).norm()).fold(0.0, f64::max);
        Ok((worst <= 1e-9, format!("max rel err {worst:.2e}")))
    })());

    let all = rows.iter().all(|r| r.1);
    let mut s = String::from("invariant,status,detail\n");
    for (name, ok, detail) in &rows {
        writeln!(s, "{name},{},{}", if *ok { "PASS" } else { "FAIL" }, detail.replace(',', ";")).unwrap();
    }
    Ok(Artifact { body: s, checks_hold: all, default_file: None })
}

/// Outcome of [`run`]: exit status plus the text printed to stdout or stderr.
#[derive(Debug)]
pub struct Exit {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Executes a pipeline. Status 0 on success, 2 when the pipeline's own
/// checks fail (artifacts are still written), 1 on input errors.
pub fn run(cfg: &RunConfig) -> Exit {
    let artifact = match cfg.command {
        Command::Norm => run_norm(cfg),
        Command::Conjugate => run_conjugate(cfg),
        Command::Interpolate => run_interpolate(cfg),
        Command::Derive => run_derive(cfg),
        Command::Defect => run_defect(cfg),
        Command::Example => run_example(cfg),
        Command::Check => run_check(cfg),
    };
    let artifact = match artifact {
        Ok(a) => a,
        Err(e) => return Exit { code: 1, stdout: String::new(), stderr: format!("{}: {e}\n", cfg.command.name()) },
    };
    let target = cfg.output_path.clone().or_else(|| artifact.default_file.map(PathBuf::from));
    let mut stdout = String::new();
    match target {
        Some(path) => {
            if let Err(e) = fs::write(&path, &artifact.body) {
                return Exit { code: 1, stdout, stderr: format!("cannot write {}: {e}\n", path.display()) };
            }
            writeln!(stdout, "wrote {}", path.display()).unwrap();
            if cfg.command == Command::Check {
                stdout.push_str(&artifact.body);
            }
        }
        None => stdout.push_str(&artifact.body),
    }
    if artifact.checks_hold {
        Exit { code: 0, stdout, stderr: String::new() }
    } else {
        Exit { code: 2, stdout, stderr: format!("{}: checks failed\n", cfg.command.name()) }
    }
}

/// Parses process arguments and runs; returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let exit = match RunConfig::from_cli(cli) {
        Ok(cfg) => run(&cfg),
        Err(e) => Exit { code: 1, stdout: String::new(), stderr: format!("{e}\n") },
    };
    print!("{}", exit.stdout);
    eprint!("{}", exit.stderr);
    exit.code
}
