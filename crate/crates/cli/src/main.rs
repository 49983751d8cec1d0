//! `sato-tate`: batch front-end for expansions, angle statistics, explicit
//! bounds, congruence suites, density bounds and quadratic-form checks.
//!
//! Exit codes: 0 on success, 1 when a check fails, 2 on usage errors.

mod cache;
mod manifest;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use sato_tate_core::acceptance;
use sato_tate_core::bounds::{self, BoundContext, Which};
use sato_tate_core::density::{self, BoundFn, DensityConfig, PrimeData};
use sato_tate_core::newforms::{AngleTable, NewformSpec};
use sato_tate_core::qexp::io::{write_binary, write_text};
use sato_tate_core::quadform::{self, CuspData, QuadForm};
use sato_tate_core::satotate::{self, Interval};

use cache::Cache;
use manifest::{manifest_path, sha256_file, sha256_hex, FileHash, RunManifest};

#[derive(Parser, Debug)]
#[command(name = "sato-tate", version, about = "Explicit Sato-Tate computations for classical eigenforms")]
struct Cli {
    /// Worker threads (default: available cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Output {
    /// Machine-readable JSON instead of the default table or CSV.
    #[arg(long)]
    json: bool,
    /// Write the artifact here (plus `<out>.manifest.json`) instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// q-expansion coefficients a(0), ..., a(prec - 1).
    Expand {
        /// delta12, delta16, delta18, delta20, delta22, delta26 or 11a.
        #[arg(long)]
        form: NewformSpec,
        /// Number of coefficients; accepts forms like 1e6.
        #[arg(long, value_parser = parse_count)]
        prec: u64,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Csv)]
        format: SeriesFormat,
        #[command(flatten)]
        output: Output,
    },
    /// Hecke angles theta_p for good primes p <= xmax.
    Angles {
        /// delta12, delta16, delta18, delta20, delta22, delta26 or 11a.
        #[arg(long)]
        form: NewformSpec,
        #[arg(long, value_parser = parse_count)]
        xmax: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Histogram of the angles over (x, 2x] against the Sato-Tate mass.
    Histogram {
        /// delta12, delta16, delta18, delta20, delta22, delta26 or 11a.
        #[arg(long)]
        form: NewformSpec,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long, default_value_t = 20)]
        bins: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Truncated smoothing sandwich around pi_{f,I}(x).
    Sandwich {
        /// delta12, delta16, delta18, delta20, delta22, delta26 or 11a.
        #[arg(long)]
        form: NewformSpec,
        #[arg(long, value_parser = parse_count)]
        x: u64,
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        delta: f64,
        #[arg(long, value_parser = parse_count)]
        ntrunc: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Evaluates one explicit bound, term by term (always JSON).
    Bounds(BoundsArgs),
    /// Checks the congruences for tau_k(n) up to the given precision.
    Congruences {
        #[arg(long)]
        weight: u32,
        #[arg(long, value_parser = parse_count)]
        prec: u64,
        /// Also certify the weight-16 mod 2^13 rule to its Sturm bound.
        #[arg(long)]
        sturm: bool,
        /// Export the rule table as JSON.
        #[arg(long)]
        rules_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Sieves h M - 1 for primes passing Serre's class conditions (JSON).
    Sieve {
        #[arg(long, value_parser = parse_count)]
        hmax: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Lower bound for the density of primes with a(p) != 0 (JSON).
    Density(DensityArgs),
    /// Theta-series decompositions of the two quadratic forms (JSON).
    Quadform {
        /// q1 (level 11, rank 4) or q2 (sum of 24 squares).
        #[arg(long)]
        form: QuadForm,
        #[arg(long, value_parser = parse_count)]
        nmax: u64,
        #[arg(long, value_enum, default_value_t = QuadCheck::Decomposition)]
        check: QuadCheck,
        /// Largest exponent for `--check f-alpha`.
        #[arg(long, default_value_t = 300)]
        amax: usize,
        /// Export `n,r_Q,eis_num,eis_den,cusp_num,cusp_den` as CSV.
        #[arg(long)]
        table_out: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Runs a check suite and aggregates pass/fail.
    Report {
        #[arg(long, value_enum, default_value_t = Suite::Acceptance)]
        suite: Suite,
        /// Restrict to these criterion numbers.
        #[arg(long)]
        only: Vec<u8>,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Args, Debug)]
struct BoundsArgs {
    /// main, zero, theta-star, prime-power, zero-count, trivial-zero, sum-over-zeros or explicit-formula.
    #[arg(long)]
    which: Which,
    /// Context file `{"N", "k", "x", ...}`; flags below override its fields.
    #[arg(long = "json", value_name = "CTX")]
    ctx: Option<PathBuf>,
    #[arg(long = "N", visible_alias = "level")]
    level: Option<u64>,
    #[arg(long = "k", visible_alias = "weight")]
    weight: Option<u32>,
    #[arg(long)]
    x: Option<f64>,
    #[arg(long)]
    n: Option<u64>,
    #[arg(long = "T")]
    t: Option<f64>,
    #[arg(long)]
    j: Option<u64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Also evaluate every term in high-precision arithmetic.
    #[arg(long)]
    hp: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct DensityArgs {
    /// delta12, delta16, delta18, delta20, delta22, delta26 or 11a.
    #[arg(long)]
    form: NewformSpec,
    /// Crossover point; zero-primes below it must be supplied.
    #[arg(long)]
    x0: f64,
    /// Number of zero-primes below x0 (used with --prime-min).
    #[arg(long, value_parser = parse_count, requires = "prime_min", conflicts_with_all = ["prime_list", "supersingular"])]
    prime_count: Option<u64>,
    /// Lower bound for every counted zero-prime.
    #[arg(long, value_parser = parse_count, requires = "prime_count")]
    prime_min: Option<u64>,
    /// File of zero-primes below x0, separated by whitespace or commas.
    #[arg(long, conflicts_with = "supersingular")]
    prime_list: Option<PathBuf>,
    /// Compute the zero-primes of the level-11 form below x0 directly.
    #[arg(long)]
    supersingular: bool,
    /// Replace the zero-count bound by a constant.
    #[arg(long)]
    constant_bound: Option<f64>,
    /// alpha_f as `num/den` (default 1, or 14/15 for the level-11 form).
    #[arg(long, value_parser = parse_fraction)]
    alpha: Option<(u64, u64)>,
    #[command(flatten)]
    output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesFormat {
    Csv,
    Text,
    Binary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum QuadCheck {
    Decomposition,
    Thm19,
    FAlpha,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Suite {
    Acceptance,
}

/// Input the user got wrong; reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Usage(String);

/// A check ran to completion and failed; the artifact is still emitted.
struct Outcome {
    passed: bool,
}

impl Outcome {
    fn ok() -> Self {
        Self { passed: true }
    }
}

/// Unsigned integer given either plainly or in float notation such as `1e6`.
fn parse_count(s: &str) -> std::result::Result<u64, String> {
    if let Ok(v) = s.parse::<u64>() {
        return Ok(v);
    }
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if v.fract() != 0.0 || !(0.0..=u64::MAX as f64).contains(&v) {
        return Err(format!("not a non-negative integer: {s}"));
    }
    Ok(v as u64)
}

fn parse_fraction(s: &str) -> std::result::Result<(u64, u64), String> {
    let (n, d) = s.split_once('/').unwrap_or((s, "1"));
    let n = n.trim().parse().map_err(|_| format!("bad numerator in {s}"))?;
    let d = d.trim().parse().map_err(|_| format!("bad denominator in {s}"))?;
    if d == 0 {
        return Err("denominator must be positive".into());
    }
    Ok((n, d))
}

/// Exact rational as a pair of decimal strings.
fn rational_json(num: impl ToString, den: impl ToString) -> Value {
    json!({ "num": num.to_string(), "den": den.to_string() })
}

/// Where the artifact goes, and the bookkeeping for its manifest.
struct Run {
    command: &'static str,
    argv: Vec<String>,
    start: Instant,
    inputs: Vec<FileHash>,
    outputs: Vec<FileHash>,
}

impl Run {
    fn input(&mut self, hash: Option<FileHash>) {
        self.inputs.extend(hash);
    }

    fn input_file(&mut self, path: &Path) -> Result<()> {
        let sha256 = sha256_file(path).with_context(|| format!("reading {}", path.display()))?;
        self.inputs.push(FileHash { path: path.display().to_string(), sha256 });
        Ok(())
    }

    /// Writes `bytes` to `out`, or to stdout when `out` is `None`.
    fn emit(&mut self, out: Option<&Path>, bytes: &[u8]) -> Result<()> {
        match out {
            Some(path) => {
                fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))?;
                self.outputs.push(FileHash { path: path.display().to_string(), sha256: sha256_hex(bytes) });
            }
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(bytes)?;
                stdout.flush()?;
            }
        }
        Ok(())
    }

    /// JSON artifact; when written to a file it names its manifest.
    fn emit_json<T: Serialize>(&mut self, out: Option<&Path>, value: &T) -> Result<()> {
        let mut v = serde_json::to_value(value)?;
        if let (Some(path), Value::Object(map)) = (out, &mut v) {
            let name = manifest_path(path).file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            map.insert("manifest".into(), Value::String(name));
        }
        let mut text = serde_json::to_string_pretty(&v)?;
        text.push('\n');
        self.emit(out, text.as_bytes())
    }

    /// One manifest per written artifact.
    fn finish(self) -> Result<()> {
        let wall = self.start.elapsed().as_secs_f64();
        for out in &self.outputs {
            let m = RunManifest::new(self.command, self.argv.clone(), self.inputs.clone(), self.outputs.clone(), wall);
            m.write(&manifest_path(Path::new(&out.path)))?;
        }
        Ok(())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help and version print to stdout and exit 0; parse errors exit 2
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: cannot size the thread pool: {e}");
            return ExitCode::from(2);
        }
    }
    match dispatch(cli.command) {
        Ok(Outcome { passed: true }) => ExitCode::SUCCESS,
        Ok(Outcome { passed: false }) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}

fn exit_code_for(e: &anyhow::Error) -> u8 {
    use sato_tate_core::Error as CoreError;
    if e.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match e.downcast_ref::<CoreError>() {
        Some(CoreError::Domain(_) | CoreError::Unsupported(_) | CoreError::Precision { .. }) => 2,
        _ => 1,
    }
}

fn dispatch(command: Command) -> Result<Outcome> {
    let name = match &command {
        Command::Expand { .. } => "expand",
        Command::Angles { .. } => "angles",
        Command::Histogram { .. } => "histogram",
        Command::Sandwich { .. } => "sandwich",
        Command::Bounds(_) => "bounds",
        Command::Congruences { .. } => "congruences",
        Command::Sieve { .. } => "sieve",
        Command::Density(_) => "density",
        Command::Quadform { .. } => "quadform",
        Command::Report { .. } => "report",
    };
    let mut run = Run {
        command: name,
        argv: std::env::args().skip(1).collect(),
        start: Instant::now(),
        inputs: Vec::new(),
        outputs: Vec::new(),
    };
    let outcome = match command {
        Command::Expand { form, prec, format, output } => expand(&mut run, form, prec, format, &output),
        Command::Angles { form, xmax, output } => angles(&mut run, form, xmax, &output),
        Command::Histogram { form, x, bins, output } => histogram(&mut run, form, x, bins, &output),
        Command::Sandwich { form, x, alpha, beta, delta, ntrunc, output } => {
            sandwich(&mut run, form, x, (alpha, beta, delta), ntrunc, &output)
        }
        Command::Bounds(args) => bounds_cmd(&mut run, &args),
        Command::Congruences { weight, prec, sturm, rules_out, output } => {
            congruences(&mut run, weight, prec, sturm, rules_out.as_deref(), &output)
        }
        Command::Sieve { hmax, output } => sieve(&mut run, hmax, &output),
        Command::Density(args) => density_cmd(&mut run, &args),
        Command::Quadform { form, nmax, check, amax, table_out, output } => {
            quadform_cmd(&mut run, form, nmax, check, amax, table_out.as_deref(), &output)
        }
        Command::Report { suite: Suite::Acceptance, only, output } => report(&mut run, &only, &output),
    }?;
    run.finish()?;
    Ok(outcome)
}

fn angle_table(run: &mut Run, form: NewformSpec, xmax: u64) -> Result<AngleTable> {
    let (f, hash) = Cache::from_env().form(&form, xmax as usize + 1)?;
    run.input(hash);
    Ok(AngleTable::from_series(form, &f, xmax)?)
}

fn expand(run: &mut Run, form: NewformSpec, prec: u64, format: SeriesFormat, output: &Output) -> Result<Outcome> {
    let (f, hash) = Cache::from_env().form(&form, prec as usize)?;
    run.input(hash);
    let out = output.out.as_deref();
    if output.json {
        let coefficients: Vec<String> = f.coeffs().iter().map(|c| c.to_string()).collect();
        run.emit_json(out, &json!({ "form": form.name(), "prec": prec, "coefficients": coefficients }))?;
        return Ok(Outcome::ok());
    }
    let mut bytes = Vec::new();
    match format {
        SeriesFormat::Csv => {
            writeln!(bytes, "n,a_n")?;
            for (n, c) in f.coeffs().iter().enumerate() {
                writeln!(bytes, "{n},{c}")?;
            }
        }
        SeriesFormat::Text => write_text(&f, &mut bytes)?,
        SeriesFormat::Binary => {
            if out.is_none() {
                bail!(Usage("--format binary needs --out".into()));
            }
            write_binary(&f, &mut bytes)?;
        }
    }
    run.emit(out, &bytes)?;
    Ok(Outcome::ok())
}

fn angles(run: &mut Run, form: NewformSpec, xmax: u64, output: &Output) -> Result<Outcome> {
    let table = angle_table(run, form, xmax)?;
    if output.json {
        let rows: Vec<Value> = table.iter().map(|(p, t)| json!({ "p": p, "theta_p": t })).collect();
        run.emit_json(output.out.as_deref(), &json!({ "form": form.name(), "xmax": xmax, "angles": rows }))?;
    } else {
        let mut bytes = Vec::new();
        table.write_csv(&mut bytes)?;
        run.emit(output.out.as_deref(), &bytes)?;
    }
    Ok(Outcome::ok())
}

fn histogram(run: &mut Run, form: NewformSpec, x: u64, bins: usize, output: &Output) -> Result<Outcome> {
    let table = angle_table(run, form, 2 * x)?;
    let hist = satotate::histogram(x, bins, &table)?;
    if output.json {
        run.emit_json(output.out.as_deref(), &json!({ "form": form.name(), "x": x, "bins": hist }))?;
    } else {
        let mut bytes = Vec::new();
        writeln!(bytes, "bin_lo,bin_hi,count,mu_st_mass")?;
        for b in &hist {
            writeln!(bytes, "{:.16e},{:.16e},{},{:.16e}", b.lo, b.hi, b.count, b.mu_st_mass)?;
        }
        run.emit(output.out.as_deref(), &bytes)?;
    }
    Ok(Outcome::ok())
}

fn sandwich(
    run: &mut Run,
    form: NewformSpec,
    x: u64,
    (alpha, beta, delta): (f64, f64, f64),
    ntrunc: u64,
    output: &Output,
) -> Result<Outcome> {
    let interval = Interval::new(alpha, beta)?;
    let table = angle_table(run, form, 2 * x)?;
    let report = satotate::sandwich_check(x, &interval, delta, ntrunc, &table)?;
    let passed = report.holds;
    let mut v = serde_json::to_value(&report)?;
    v["form"] = json!(form.name());
    v["precision"] = json!("binary64");
    v["tail"] = json!(report.tail_bound);
    run.emit_json(output.out.as_deref(), &v)?;
    Ok(Outcome { passed })
}

fn bounds_cmd(run: &mut Run, args: &BoundsArgs) -> Result<Outcome> {
    let mut ctx: Value = match &args.ctx {
        Some(path) => {
            run.input_file(path)?;
            let text = fs::read_to_string(path)?;
            serde_json::from_str(&text).map_err(|e| Usage(format!("{}: {e}", path.display())))?
        }
        None => json!({}),
    };
    if !ctx.is_object() {
        bail!(Usage("the context file must hold a JSON object".into()));
    }
    // flags override the file; accept the long names in the file as well
    for (long, short) in [("level", "N"), ("weight", "k")] {
        if let Some(v) = ctx.as_object_mut().and_then(|m| m.remove(long)) {
            ctx[short] = v;
        }
    }
    let overrides = [
        ("N", args.level.map(|v| json!(v))),
        ("k", args.weight.map(|v| json!(v))),
        ("x", args.x.map(|v| json!(v))),
        ("n", args.n.map(|v| json!(v))),
        ("T", args.t.map(|v| json!(v))),
        ("j", args.j.map(|v| json!(v))),
        ("delta", args.delta.map(|v| json!(v))),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            ctx[key] = v;
        }
    }
    match (args.alpha, args.beta) {
        (Some(a), Some(b)) => ctx["interval"] = serde_json::to_value(Interval::new(a, b)?)?,
        (None, None) => {}
        _ => bail!(Usage("--alpha and --beta go together".into())),
    }
    // level and weight only matter to some evaluators; default to Delta_12
    if ctx.get("N").is_none() {
        ctx["N"] = json!(1);
    }
    if ctx.get("k").is_none() {
        ctx["k"] = json!(12);
    }
    if ctx.get("x").is_none() {
        ctx["x"] = json!(bounds::X_MAIN);
    }
    let ctx: BoundContext = serde_json::from_value(ctx).map_err(|e| Usage(format!("bad bound context: {e}")))?;
    let report = bounds::evaluate(args.which, &ctx, args.hp)?;
    let mut v = serde_json::to_value(&report)?;
    v["context"] = serde_json::to_value(&ctx)?;
    v["precision"] = json!(if args.hp { "binary64; value_hp to 60 digits" } else { "binary64" });
    run.emit_json(args.out.as_deref(), &v)?;
    Ok(Outcome::ok())
}

fn congruences(
    run: &mut Run,
    weight: u32,
    prec: u64,
    sturm: bool,
    rules_out: Option<&Path>,
    output: &Output,
) -> Result<Outcome> {
    if prec < 2 {
        bail!(Usage("--prec must be at least 2".into()));
    }
    if sturm && weight != 16 {
        bail!(Usage("the Sturm certificate concerns weight 16 only".into()));
    }
    let rules = density::rule_table(weight)?;
    if let Some(path) = rules_out {
        run.emit_json(Some(path), &json!({ "weight": weight, "rules": rules }))?;
    }
    let report = density::check_rules(weight, prec - 1)?;
    let certificate = if sturm { Some(density::sturm_certificate_weight16()?) } else { None };
    let passed = report.passed() && certificate.as_ref().is_none_or(|c| c.certified());
    if output.json {
        run.emit_json(output.out.as_deref(), &json!({ "report": report, "passed": passed, "sturm": certificate }))?;
    } else {
        let mut bytes = Vec::new();
        writeln!(bytes, "weight {weight}, n <= {}", report.bound)?;
        writeln!(bytes, "{:>4}  {:>12}  {:>8}  {:>10}  status", "rule", "modulus", "checked", "violations")?;
        for (i, o) in report.outcomes.iter().enumerate() {
            writeln!(
                bytes,
                "{:>4}  {:>12}  {:>8}  {:>10}  {}",
                i + 1,
                o.rule.clause.modulus,
                o.checked,
                o.violations.len(),
                if o.violations.is_empty() { "pass" } else { "FAIL" }
            )?;
        }
        if let Some(c) = &certificate {
            writeln!(
                bytes,
                "Sturm certificate (bound {}): {}",
                c.sturm_bound,
                if c.certified() { "pass" } else { "FAIL" }
            )?;
        }
        writeln!(bytes, "{}", if passed { "all rules pass" } else { "some rules FAIL" })?;
        run.emit(output.out.as_deref(), &bytes)?;
    }
    Ok(Outcome { passed })
}

fn sieve(run: &mut Run, hmax: u64, output: &Output) -> Result<Outcome> {
    let report = density::serre_sieve(hmax)?;
    let passed = report.retest_passed;
    run.emit_json(output.out.as_deref(), &json!({ "modulus": density::SERRE_M.to_string(), "report": report }))?;
    Ok(Outcome { passed })
}

fn read_prime_list(path: &Path) -> Result<Vec<u64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<u64>().map_err(|_| Usage(format!("{}: not a prime: {t}", path.display())).into()))
        .collect()
}

fn density_cmd(run: &mut Run, args: &DensityArgs) -> Result<Outcome> {
    let form = args.form;
    let eleven = form == NewformSpec::level11();
    let alpha_f = args.alpha.unwrap_or(if eleven { density::ALPHA_11A } else { density::ALPHA_LEVEL1 });
    let bound = match args.constant_bound {
        Some(value) => BoundFn::Constant { value },
        None => BoundFn::ZeroCount { level: form.level, weight: form.weight },
    };
    let mut complete_list = None;
    let primes = if let (Some(count), Some(min)) = (args.prime_count, args.prime_min) {
        PrimeData::Count { count, min }
    } else if let Some(path) = &args.prime_list {
        run.input_file(path)?;
        PrimeData::List { primes: read_prime_list(path)? }
    } else if args.supersingular {
        if !eleven {
            bail!(Usage("--supersingular applies to the level-11 form".into()));
        }
        if args.x0 > 1e9 {
            bail!(Usage("--supersingular enumerates primes up to x0; keep x0 <= 1e9".into()));
        }
        let list = density::supersingular_primes_11a(args.x0 as u64);
        complete_list = Some(list.clone());
        PrimeData::List { primes: list }
    } else if form.level == 1 && form.weight != 12 {
        // no weight other than 12 has a known zero-prime below the table points
        PrimeData::List { primes: Vec::new() }
    } else {
        bail!(Usage(format!(
            "{form} needs zero-prime data: --prime-count with --prime-min, --prime-list{}",
            if eleven { ", or --supersingular" } else { "" }
        )))
    };
    let primes_summary = match &primes {
        PrimeData::List { primes } => json!({ "kind": "list", "count": primes.len() }),
        PrimeData::Count { count, min } => json!({ "kind": "count", "count": count, "min": min }),
    };
    let config = DensityConfig { x0: args.x0, bound, primes, alpha_f };
    let report = density::density_lower_bound(&config)?;
    let mut v = serde_json::to_value(&report)?;
    v["form"] = json!(form.name());
    v["x0"] = json!(args.x0);
    v["bound"] = serde_json::to_value(bound)?;
    v["primes"] = primes_summary;
    v["alpha_f"] = rational_json(alpha_f.0, alpha_f.1);
    v["precision"] = json!("binary64");
    if let Some(list) = complete_list {
        v["upper_bound"] = json!(density::density_upper_bound(&list, alpha_f));
    }
    run.emit_json(args.output.out.as_deref(), &v)?;
    Ok(Outcome::ok())
}

fn quadform_cmd(
    run: &mut Run,
    form: QuadForm,
    nmax: u64,
    check: QuadCheck,
    amax: usize,
    table_out: Option<&Path>,
    output: &Output,
) -> Result<Outcome> {
    if check == QuadCheck::Thm19 && form != QuadForm::Q2 {
        bail!(Usage("the tau-vanishing criterion concerns q2".into()));
    }
    let out = output.out.as_deref();
    if check == QuadCheck::FAlpha {
        let seq = quadform::f_alpha(amax);
        let passed = seq.nonvanishing && seq.tau_nonvanishing;
        run.emit_json(out, &seq)?;
        return Ok(Outcome { passed });
    }
    let r = quadform::representation_numbers(form, nmax)?;
    let data = CuspData::build(form, nmax as usize)?;
    if let Some(path) = table_out {
        let mut bytes = Vec::new();
        quadform::write_table_csv(form, &r, &data, &mut bytes)?;
        run.emit(Some(path), &bytes)?;
    }
    let passed = match check {
        QuadCheck::Decomposition => {
            let report = quadform::decomposition_check_with(form, &r, &data)?;
            let passed = report.holds;
            run.emit_json(out, &report)?;
            passed
        }
        QuadCheck::Thm19 => {
            let report = quadform::thm19_check_with(&r, &data)?;
            let passed = report.passed();
            let mut v = serde_json::to_value(&report)?;
            v["passed"] = json!(passed);
            run.emit_json(out, &v)?;
            passed
        }
        QuadCheck::FAlpha => unreachable!("handled above"),
    };
    Ok(Outcome { passed })
}

fn report(run: &mut Run, only: &[u8], output: &Output) -> Result<Outcome> {
    if let Some(bad) = only.iter().find(|&&id| !(1..=10).contains(&id)) {
        bail!(Usage(format!("no acceptance criterion {bad}; they are numbered 1 to 10")));
    }
    let ids: Vec<u8> = if only.is_empty() { (1..=10).collect() } else { only.to_vec() };
    let mut criteria = Vec::new();
    for id in ids {
        let c = acceptance::run(id);
        if !output.json && output.out.is_none() {
            println!("{c}");
        }
        criteria.push(c);
    }
    let failed = criteria.iter().filter(|c| !c.passed).count();
    if output.json {
        run.emit_json(
            output.out.as_deref(),
            &json!({ "suite": "acceptance", "failed": failed, "criteria": criteria }),
        )?;
    } else {
        let mut bytes = Vec::new();
        if output.out.is_some() {
            for c in &criteria {
                writeln!(bytes, "{c}")?;
            }
        }
        writeln!(bytes, "{} of {} criteria pass", criteria.len() - failed, criteria.len())?;
        run.emit(output.out.as_deref(), &bytes)?;
    }
    Ok(Outcome { passed: failed == 0 })
}
