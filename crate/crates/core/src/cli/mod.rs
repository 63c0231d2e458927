//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the process exit code: 0 on success, 1 on usage or input errors, 2 when a
//! verification fails (Hasse bound, equal powers with different weights, a
//! dense power locus with no twist).

mod output;

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::density::{
    chebotarev_density, checkpoint_grid, empirical_upper_density, find_component_in, lift_density,
    parse_group_spec, sample_frobenius, threshold, DensityError, PrimeSet,
};
use crate::localfield::{uniform_exponent, LocalFieldError, LocalFieldSpec};
use crate::modular::{
    ap_table, ap_table_with_threads, twist_pipeline, EigenvalueTable, EllipticCurve, ModularError,
    PipelineReport, PowerLocus, Verdict,
};
use crate::ratio;
use crate::weights::{
    character, conclude_equivalence, recover_from_symmetric_power, symmetric_power, tensor_power,
    WeightMultiset, WeightsError,
};

pub use output::{
    BoundOutput, ChebOutput, DensityOutput, PowerCheckOutput, WeightsOutput, Witness,
};

#[derive(Parser, Debug)]
#[command(name = "potequiv", version, about = "Exact experiments on potential equivalence")]
pub struct Cli {
    /// Print one JSON document instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exponent bounds for n×n semisimple elements over an extension of Q_ℓ.
    Bound(BoundArgs),
    /// Write the a_p table of y² = x³ + ax + b as JSON lines.
    Ap(ApArgs),
    /// Power-equality locus of two eigenvalue tables.
    Locus(PairArgs),
    /// Locus, then search for a character with a_p(g) = χ(p)·a_p(f).
    Twist(TwistArgs),
    /// Density thresholds, lifted densities, and residue-class densities.
    Density(DensityArgs),
    /// Exact and sampled Chebotarev densities in a component-group model.
    Cheb(ChebArgs),
    /// Operations on weight multisets.
    #[command(subcommand)]
    Weights(WeightsCommand),
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long)]
    pub n: u64,
    #[arg(long)]
    pub ell: u64,
    /// Degree of the base field over Q_ℓ.
    #[arg(long, default_value_t = 1)]
    pub degree: u64,
}

#[derive(Args, Debug)]
pub struct ApArgs {
    /// Coefficients `a,b`.
    #[arg(long, value_parser = parse_curve, allow_hyphen_values = true)]
    pub curve: (i64, i64),
    #[arg(long)]
    pub max_prime: u64,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Args, Debug)]
pub struct PairArgs {
    /// Eigenvalue table, `-` for stdin.
    pub f: PathBuf,
    pub g: PathBuf,
}

#[derive(Args, Debug)]
pub struct TwistArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    #[arg(long, default_value_t = 8)]
    pub max_conductor: u64,
    /// Do not assume either form is non-CM; a dense locus without a twist is
    /// then not reported as an anomaly.
    #[arg(long)]
    pub allow_cm: bool,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
pub struct DensityModes {
    /// `min(1 - 1/c1, 1 - 1/c2)`.
    #[arg(long, num_args = 2, value_names = ["C1", "C2"])]
    pub threshold: Option<Vec<u64>>,
    /// `d·(δ - (1 - 1/d))` for a rational δ.
    #[arg(long, num_args = 2, value_names = ["DELTA", "D"])]
    pub lift: Option<Vec<String>>,
    /// Density of primes ≡ RESIDUE (mod --modulus) up to --max-prime.
    #[arg(long, requires_all = ["modulus", "max_prime"])]
    pub residue: Option<u64>,
}

#[derive(Args, Debug)]
pub struct DensityArgs {
    #[command(flatten)]
    pub mode: DensityModes,
    #[arg(long)]
    pub modulus: Option<u64>,
    #[arg(long)]
    pub max_prime: Option<u64>,
}

#[derive(Args, Debug)]
pub struct ChebArgs {
    /// Group file, `-` for stdin.
    pub file: PathBuf,
    /// Also sample this many uniform elements.
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum WeightsCommand {
    /// The k-th symmetric (or tensor) power.
    Expand {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        tensor: bool,
    },
    /// Recover an n-element multiset from its k-th symmetric power.
    Recover {
        file: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: usize,
    },
    /// Compare the m-th powers of two characters.
    PowerCheck {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        m: u32,
    },
    /// The character as a Laurent polynomial.
    Character { file: PathBuf },
}

fn parse_curve(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected a,b")?;
    let a = a.trim().parse().map_err(|e| format!("a: {e}"))?;
    let b = b.trim().parse().map_err(|e| format!("b: {e}"))?;
    Ok((a, b))
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Anomaly(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Input(_) => 1,
            Failure::Anomaly(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Anomaly(m) => m,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<ModularError> for Failure {
    fn from(e: ModularError) -> Self {
        match e {
            ModularError::HasseViolation { .. } => Failure::Anomaly(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<WeightsError> for Failure {
    fn from(e: WeightsError) -> Self {
        match e {
            WeightsError::TheoremViolation(..) => Failure::Anomaly(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<DensityError> for Failure {
    fn from(e: DensityError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<LocalFieldError> for Failure {
    fn from(e: LocalFieldError) -> Self {
        Failure::Input(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

/// Parse `args` (including the program name) and execute.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let (sink, code): (&mut dyn Write, i32) = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (out, 0),
                _ => (err, 1),
            };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.code()
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Bound(a) => bound(a, cli.json, out),
        Command::Ap(a) => ap(a, out),
        Command::Locus(a) => locus(a, cli.json, out),
        Command::Twist(a) => twist(a, cli.json, out),
        Command::Density(a) => density(a, cli.json, out),
        Command::Cheb(a) => cheb(a, cli.json, out),
        Command::Weights(c) => weights(c, cli.json, out),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_json<T: serde::Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let s = serde_json::to_string_pretty(value).map_err(|e| Failure::Input(e.to_string()))?;
    writeln!(out, "{s}")?;
    Ok(())
}

fn bound(a: &BoundArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let report = uniform_exponent(a.n, LocalFieldSpec::new(a.ell, a.degree)?)?;
    let o = BoundOutput::from_report(a.n, a.ell, a.degree, &report);
    if json {
        return write_json(out, &o);
    }
    writeln!(out, "degree_bound={}", o.degree_bound)?;
    writeln!(out, "m0={}", o.m0)?;
    writeln!(out, "witness=f{},a{}", o.witness.f, o.witness.a)?;
    writeln!(out, "sharp={}", o.sharp)?;
    writeln!(out, "paper={}!", o.m0)?;
    match &o.factorial_value {
        Some(v) => {
            writeln!(out, "factorial_digits={}", v.len())?;
            writeln!(out, "factorial_value={v}")?;
        }
        None => writeln!(out, "factorial_value=not expanded (m0 too large)")?,
    }
    Ok(())
}

fn ap(a: &ApArgs, out: &mut dyn Write) -> CmdResult {
    if a.max_prime < 5 {
        return Err(Failure::Input("--max-prime must be at least 5".into()));
    }
    let curve = EllipticCurve::new(a.curve.0, a.curve.1)?;
    let table = match a.threads {
        Some(t) => ap_table_with_threads(&curve, a.max_prime, t)?,
        None => ap_table(&curve, a.max_prime)?,
    };
    let table = match &a.label {
        Some(l) => EigenvalueTable::new(l.clone(), table.level_hint().clone(), table.weight(), table.entries().clone())?,
        None => table,
    };
    let text = table.to_jsonl();
    match &a.out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
            writeln!(out, "wrote {} primes to {}", table.len(), path.display())?;
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn load_pair(p: &PairArgs) -> Result<(EigenvalueTable, EigenvalueTable), Failure> {
    let load = |path: &Path| -> Result<EigenvalueTable, Failure> {
        EigenvalueTable::from_jsonl(&read_input(path)?)
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    };
    Ok((load(&p.f)?, load(&p.g)?))
}

fn write_locus(l: &PowerLocus, out: &mut dyn Write) -> CmdResult {
    let r = &l.density_report;
    let n2 = l.primes.values().filter(|&&n| n == 2).count();
    writeln!(out, "common_primes={}", r.total)?;
    writeln!(out, "locus_primes={} (n_p=1: {}, n_p=2: {})", r.count, r.count as usize - n2, n2)?;
    writeln!(out, "density={}", ratio::format(&r.empirical))?;
    writeln!(out, "running_sup={}", ratio::format(&r.running_sup))?;
    Ok(())
}

fn locus(a: &PairArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (f, g) = load_pair(a)?;
    let l = crate::modular::power_locus(&f, &g);
    if json {
        return write_json(out, &l);
    }
    write_locus(&l, out)
}

fn twist(a: &TwistArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let (f, g) = load_pair(&a.pair)?;
    let r: PipelineReport = twist_pipeline(&f, &g, a.max_conductor, !a.allow_cm)?;
    if json {
        write_json(out, &r)?;
    } else {
        write_locus(&r.locus, out)?;
        writeln!(out, "threshold={}", ratio::format(&r.threshold))?;
        writeln!(out, "non_cm_declared={}", r.non_cm_declared)?;
        if let Some(t) = &r.twist {
            writeln!(out, "primes_checked={}", t.primes_checked)?;
            writeln!(out, "search_bound={}", t.search_bound)?;
            writeln!(out, "matches={}", t.matches.len())?;
            for m in &t.matches {
                writeln!(
                    out,
                    "match conductor={} order={} exponents={:?} verified={}",
                    m.conductor,
                    m.character.order(),
                    m.character.exponents(),
                    m.primes_verified
                )?;
            }
        }
        writeln!(out, "verdict={}", verdict_name(r.verdict))?;
    }
    if r.verdict == Verdict::Anomaly {
        return Err(Failure::Anomaly(format!(
            "locus density {} but no character of conductor <= {} matches",
            ratio::format(&r.locus.density_report.empirical),
            a.max_conductor
        )));
    }
    Ok(())
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Twist => "twist",
        Verdict::EmptyLocus => "empty_locus",
        Verdict::NoTwist => "no_twist",
        Verdict::Anomaly => "anomaly",
    }
}

fn density(a: &DensityArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let o = if let Some(c) = &a.mode.threshold {
        DensityOutput::Threshold {
            c1: c[0],
            c2: c[1],
            value: threshold(c[0], c[1])?,
        }
    } else if let Some(l) = &a.mode.lift {
        let delta = ratio::parse(&l[0]).ok_or_else(|| Failure::Input(format!("bad rational {:?}", l[0])))?;
        let d: u64 = l[1].parse().map_err(|e| Failure::Input(format!("bad degree {:?}: {e}", l[1])))?;
        DensityOutput::Lift {
            value: lift_density(&delta, d)?,
            delta,
            d,
        }
    } else {
        let residue = a.mode.residue.expect("clap enforces one mode");
        let (q, x) = (a.modulus.expect("required"), a.max_prime.expect("required"));
        if q == 0 {
            return Err(Failure::Input("--modulus must be positive".into()));
        }
        let set = PrimeSet::filtered(x, |p| p % q == residue % q);
        DensityOutput::Residue {
            residue,
            modulus: q,
            report: empirical_upper_density(&set, &checkpoint_grid(x))?,
        }
    };
    if json {
        return write_json(out, &o);
    }
    match &o {
        DensityOutput::Threshold { value, .. } | DensityOutput::Lift { value, .. } => {
            writeln!(out, "{}", ratio::format(value))?
        }
        DensityOutput::Residue { report, .. } => {
            writeln!(out, "count={}", report.count)?;
            writeln!(out, "total={}", report.total)?;
            writeln!(out, "density={}", ratio::format(&report.empirical))?;
            writeln!(out, "running_sup={}", ratio::format(&report.running_sup))?;
        }
    }
    Ok(())
}

fn cheb(a: &ChebArgs, json: bool, out: &mut dyn Write) -> CmdResult {
    let text = read_input(&a.file)?;
    let (model, x) = parse_group_spec(&text)?.build()?;
    let sample = match a.trials {
        Some(t) => Some(sample_frobenius(&model, &x, t, a.seed)?),
        None => None,
    };
    let o = ChebOutput {
        order: model.order(),
        subgroup_order: model.subgroup_order(),
        components: model.component_count(),
        set_size: x.len(),
        density: chebotarev_density(&model, &x),
        component: find_component_in(&model, &x),
        seed: a.trials.map(|_| a.seed),
        sample,
    };
    if json {
        return write_json(out, &o);
    }
    writeln!(out, "order={}", o.order)?;
    writeln!(out, "components={}", o.components)?;
    writeln!(out, "set_size={}", o.set_size)?;
    writeln!(out, "density={}", ratio::format(&o.density))?;
    match o.component {
        Some(c) => writeln!(out, "component={c} ({})", model.element(model.coset(c)[0]))?,
        None => writeln!(out, "component=none")?,
    }
    if let Some(s) = &o.sample {
        writeln!(out, "sampled={}/{} seed={}", s.count, s.total, a.seed)?;
        writeln!(out, "sampled_density={}", ratio::format(&s.empirical))?;
        writeln!(out, "running_sup={}", ratio::format(&s.running_sup))?;
    }
    Ok(())
}

fn load_weights(path: &Path) -> Result<WeightMultiset, Failure> {
    read_input(path)?
        .parse::<WeightMultiset>()
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn weights(c: &WeightsCommand, json: bool, out: &mut dyn Write) -> CmdResult {
    let emit = |w: &WeightMultiset, out: &mut dyn Write| -> CmdResult {
        if json {
            write_json(out, &WeightsOutput::from(w))
        } else {
            out.write_all(w.to_text().as_bytes())?;
            Ok(())
        }
    };
    match c {
        WeightsCommand::Expand { file, k, tensor } => {
            let w = load_weights(file)?;
            let p = if *tensor { tensor_power(&w, *k)? } else { symmetric_power(&w, *k)? };
            emit(&p, out)
        }
        WeightsCommand::Recover { file, k, n } => {
            let s = load_weights(file)?;
            emit(&recover_from_symmetric_power(&s, *k, *n)?, out)
        }
        WeightsCommand::PowerCheck { a, b, m } => {
            let (wa, wb) = (load_weights(a)?, load_weights(b)?);
            let equal = conclude_equivalence(&wa, &wb, *m)?;
            let o = PowerCheckOutput { m: *m, equal_powers: equal, equal_weights: wa == wb };
            if json {
                return write_json(out, &o);
            }
            writeln!(out, "equal_powers={}", o.equal_powers)?;
            writeln!(out, "equal_weights={}", o.equal_weights)?;
            Ok(())
        }
        WeightsCommand::Character { file } => {
            let chi = character(&load_weights(file)?);
            if json {
                let terms: Vec<(Vec<i64>, String)> =
                    chi.terms().map(|(e, c)| (e.to_vec(), c.to_string())).collect();
                return write_json(out, &terms);
            }
            writeln!(out, "{chi}")?;
            Ok(())
        }
    }
}
