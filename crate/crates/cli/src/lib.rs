//! Argument handling and dispatch for the `schubert` binary.

use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::sync::mpsc;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use schubert_core::exactalg::{det_integer_with, det_q, smith_normal_form, DetMethod};
use schubert_core::matrix::{JsonEntry, LabeledMatrix};
use schubert_core::operators::{build_D, build_D_tilde, build_D_tilde_q, build_E, matrix_side};
use schubert_core::schubert::{q_nu, schubert};
use schubert_core::verify::{Bounds, Claim, Matched, VerificationReport, Verifier};
use schubert_core::{Error, Permutation};

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BOUND: i32 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixChoice {
    D,
    Dtilde,
    DtildeQ,
    E,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Bareiss,
    Multimodular,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "schubert", version, about = "Schubert polynomial specializations and weak/Bruhat order matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Clone, Debug, Args)]
pub struct GlobalArgs {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Directory for persisted ν caches.
    #[arg(long, global = true, env = "SCHUBERT_CACHE_DIR")]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (defaults to the number of cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Wall-clock budget in seconds.
    #[arg(long, global = true)]
    pub max_seconds: Option<f64>,
    /// Largest matrix side that will be built.
    #[arg(long, global = true)]
    pub max_dim: Option<u64>,
}

#[derive(Clone, Debug, Args)]
pub struct PermArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long = "perm")]
    pub perm: String,
}

#[derive(Clone, Debug, Args)]
pub struct LevelArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub k: usize,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// ν_w = 𝔖_w(1,…,1).
    Nu(PermArgs),
    /// The Schubert polynomial 𝔖_w.
    Schubert(PermArgs),
    /// 𝔖_w(1, q, …, q^{n−2}).
    Qnu(PermArgs),
    /// D(n,k), D̃(n,k) or its q-analogue.
    Dmatrix {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, value_enum, default_value_t = MatrixChoice::Dtilde)]
        kind: MatrixChoice,
    },
    /// E(n,k).
    Ematrix(LevelArgs),
    /// Integer determinant.
    Det {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, value_enum, default_value_t = MatrixChoice::Dtilde)]
        kind: MatrixChoice,
        #[arg(long, value_enum, default_value_t = Method::Bareiss)]
        method: Method,
    },
    /// Determinant of the q-analogue of D̃(n,k).
    Qdet(LevelArgs),
    /// Smith normal form in exponent notation.
    Snf {
        #[command(flatten)]
        level: LevelArgs,
        #[arg(long, value_enum, default_value_t = MatrixChoice::Dtilde)]
        kind: MatrixChoice,
    },
    /// max ν_w over S_n with all maximizers.
    Maxnu {
        #[arg(long)]
        n: usize,
    },
    /// Σ ν_w ν_{w⁻¹w₀} and the growth datapoint for u(n).
    Cauchy {
        #[arg(long)]
        n: usize,
    },
    /// Check a published claim, or `all` of them up to --n (and --k).
    Verify {
        /// det, k1sign, snf, fn1, twoterm, maxnu, cauchy, e, chevalley, qdet or all
        claim: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CommandKind {
    Nu,
    Schubert,
    Qnu,
    Dmatrix,
    Ematrix,
    Det,
    Qdet,
    Snf,
    Maxnu,
    Cauchy,
    Verify,
}

impl CommandKind {
    fn needs_k(self) -> bool {
        matches!(
            self,
            CommandKind::Dmatrix | CommandKind::Ematrix | CommandKind::Det | CommandKind::Qdet | CommandKind::Snf
        )
    }

    fn needs_perm(self) -> bool {
        matches!(self, CommandKind::Nu | CommandKind::Schubert | CommandKind::Qnu)
    }
}

/// A fully validated request.
#[derive(Clone, Debug)]
pub struct JobSpec {
    pub command: CommandKind,
    pub n: usize,
    pub k: Option<usize>,
    pub permutation: Option<Permutation>,
    pub format: Format,
    pub cache_dir: Option<PathBuf>,
    pub threads: Option<usize>,
    pub bounds: Bounds,
    pub matrix: MatrixChoice,
    pub method: Method,
    /// Claim name for `verify`; `None` means all.
    pub claim: Option<Claim>,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Bound(String),
    Core(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Bound(m) => f.write_str(m),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BoundExceeded(m) => CliError::Bound(m),
            Error::Io(_) | Error::CacheFormat(_) => CliError::Core(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Core(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Bound(_) => EXIT_BOUND,
            CliError::Core(_) => EXIT_MISMATCH,
        }
    }
}

impl JobSpec {
    pub fn from_cli(cli: Cli) -> Result<Self, CliError> {
        let g = cli.global;
        let mut bounds = Bounds {
            max_seconds: g.max_seconds,
            ..Bounds::default()
        };
        if let Some(d) = g.max_dim {
            bounds.max_dim = d;
        }
        let parse_perm = |p: &PermArgs| -> Result<(usize, Permutation), CliError> {
            let w = Permutation::from_str(&p.perm)?;
            if let Some(n) = p.n {
                if n != w.n() {
                    return Err(CliError::Usage(format!(
                        "--n {n} does not match permutation of size {}",
                        w.n()
                    )));
                }
            }
            Ok((w.n(), w))
        };
        let mut job = JobSpec {
            command: CommandKind::Nu,
            n: 0,
            k: None,
            permutation: None,
            format: g.format,
            cache_dir: g.cache_dir,
            threads: g.threads,
            bounds,
            matrix: MatrixChoice::Dtilde,
            method: Method::Bareiss,
            claim: None,
        };
        job.command = match &cli.command {
            Command::Nu(_) => CommandKind::Nu,
            Command::Schubert(_) => CommandKind::Schubert,
            Command::Qnu(_) => CommandKind::Qnu,
            _ => CommandKind::Nu,
        };
        match cli.command {
            Command::Nu(p) | Command::Schubert(p) | Command::Qnu(p) => {
                let (n, w) = parse_perm(&p)?;
                job.n = n;
                job.permutation = Some(w);
            }
            Command::Dmatrix { level, kind } => {
                job.command = CommandKind::Dmatrix;
                job.set_level(&level);
                job.matrix = kind;
            }
            Command::Ematrix(level) => {
                job.command = CommandKind::Ematrix;
                job.set_level(&level);
                job.matrix = MatrixChoice::E;
            }
            Command::Det { level, kind, method } => {
                job.command = CommandKind::Det;
                job.set_level(&level);
                job.matrix = kind;
                job.method = method;
            }
            Command::Qdet(level) => {
                job.command = CommandKind::Qdet;
                job.set_level(&level);
                job.matrix = MatrixChoice::DtildeQ;
            }
            Command::Snf { level, kind } => {
                job.command = CommandKind::Snf;
                job.set_level(&level);
                job.matrix = kind;
            }
            Command::Maxnu { n } => {
                job.command = CommandKind::Maxnu;
                job.n = n;
            }
            Command::Cauchy { n } => {
                job.command = CommandKind::Cauchy;
                job.n = n;
            }
            Command::Verify { claim, n, k } => {
                job.command = CommandKind::Verify;
                job.n = n;
                job.k = k;
                if claim != "all" {
                    let c = Claim::from_str(&claim)?;
                    if c.needs_k() && k.is_none() {
                        return Err(CliError::Usage(format!("claim {claim} needs --k")));
                    }
                    job.claim = Some(c);
                }
                return Ok(job);
            }
        }
        job.validate()?;
        Ok(job)
    }

    fn set_level(&mut self, level: &LevelArgs) {
        self.n = level.n;
        self.k = Some(level.k);
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.command.needs_k() != self.k.is_some() {
            return Err(CliError::Usage("k must be given exactly for matrix commands".into()));
        }
        if self.command.needs_perm() != self.permutation.is_some() {
            return Err(CliError::Usage("a permutation must be given exactly for per-permutation commands".into()));
        }
        if self.format == Format::Csv && !matches!(self.command, CommandKind::Dmatrix | CommandKind::Ematrix) {
            return Err(CliError::Usage("csv output is only available for matrix commands".into()));
        }
        if let Some(k) = self.k {
            let side = matrix_side(self.n, k)?;
            if side > self.bounds.max_dim {
                return Err(CliError::Bound(format!(
                    "matrix side {side} exceeds --max-dim {}",
                    self.bounds.max_dim
                )));
            }
        }
        if self.matrix == MatrixChoice::DtildeQ && matches!(self.command, CommandKind::Det | CommandKind::Snf) {
            return Err(CliError::Usage("use qdet for the q-analogue".into()));
        }
        Ok(())
    }
}

/// Output text and exit status of a finished job.
pub struct Outcome {
    pub output: String,
    pub status: i32,
    /// Lines for stderr (summaries in JSON mode).
    pub diagnostics: String,
}

impl Outcome {
    fn ok(output: String) -> Self {
        Self {
            output,
            status: EXIT_OK,
            diagnostics: String::new(),
        }
    }
}

fn line(s: impl std::fmt::Display) -> String {
    format!("{s}\n")
}

fn render_matrix<T: JsonEntry + std::fmt::Display>(m: &LabeledMatrix<T>, format: Format) -> String {
    match format {
        Format::Json => line(m.to_json()),
        Format::Csv => m.to_csv(),
        Format::Text => {
            let mut s = format!("{} n={} k={}\n", m.kind.as_str(), m.n, m.k);
            s.push_str(&format!(
                "columns: {}\n",
                m.col_labels.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
            ));
            for (label, row) in m.row_labels.iter().zip(&m.entries) {
                let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
                s.push_str(&format!("{label}: {}\n", cells.join(" ")));
            }
            s
        }
    }
}

fn integer_matrix(job: &JobSpec, verifier: &Verifier) -> Result<LabeledMatrix<BigInt>, CliError> {
    let (n, k) = (job.n, job.k.expect("validated"));
    Ok(match job.matrix {
        MatrixChoice::D => build_D(n, k)?,
        MatrixChoice::Dtilde => build_D_tilde(n, k, &*verifier.cache(n)?)?,
        MatrixChoice::E => build_E(n, k)?,
        MatrixChoice::DtildeQ => return Err(CliError::Usage("q-matrix has no integer form".into())),
    })
}

fn summarize(reports: &[VerificationReport]) -> (i32, String) {
    let count = |m: Matched| reports.iter().filter(|r| r.matched == m).count();
    let (yes, no, none, skipped) = (
        count(Matched::Yes),
        count(Matched::No),
        count(Matched::NoReference),
        count(Matched::Skipped),
    );
    let status = if no > 0 {
        EXIT_MISMATCH
    } else if skipped > 0 {
        EXIT_BOUND
    } else {
        EXIT_OK
    };
    let mut table = String::from("claim       total  matched  mismatched  no-reference  skipped\n");
    let mut ids: Vec<&str> = reports.iter().map(|r| r.claim_id.as_str()).collect();
    ids.dedup();
    for id in ids {
        let rs: Vec<_> = reports.iter().filter(|r| r.claim_id == id).collect();
        let c = |m: Matched| rs.iter().filter(|r| r.matched == m).count();
        table.push_str(&format!(
            "{id:<10} {:>6} {:>8} {:>11} {:>13} {:>8}\n",
            rs.len(),
            c(Matched::Yes),
            c(Matched::No),
            c(Matched::NoReference),
            c(Matched::Skipped)
        ));
    }
    table.push_str(&format!(
        "{:<10} {:>6} {yes:>8} {no:>11} {none:>13} {skipped:>8}\n",
        "total",
        reports.len()
    ));
    (status, table)
}

fn report_text(r: &VerificationReport) -> String {
    let params = match r.parameters.k {
        Some(k) => format!("n={} k={k}", r.parameters.n),
        None => format!("n={}", r.parameters.n),
    };
    let status = match r.matched {
        Matched::Yes => "matched",
        Matched::No => "MISMATCH",
        Matched::NoReference => "no-reference",
        Matched::Skipped => "skipped",
    };
    let mut s = format!("{} {params}: {status}", r.claim_id);
    if !r.computed.is_empty() {
        s.push_str(&format!("; computed {}", r.computed));
    }
    if !r.expected.is_empty() {
        s.push_str(&format!("; expected {}", r.expected));
    }
    if let Some(reason) = r.detail.get("reason") {
        s.push_str(&format!("; {}", reason.as_str().unwrap_or_default()));
    }
    s.push('\n');
    s
}

fn execute(job: &JobSpec, verifier: &Verifier) -> Result<Outcome, CliError> {
    let fmt = job.format;
    let out = match job.command {
        CommandKind::Nu => {
            let w = job.permutation.as_ref().expect("validated");
            let v = verifier.cache(job.n)?.nu(w)?;
            match fmt {
                Format::Json => line(json!({"permutation": w, "nu": v.to_string()})),
                _ => line(v),
            }
        }
        CommandKind::Schubert => {
            let w = job.permutation.as_ref().expect("validated");
            let p = schubert(w);
            match fmt {
                Format::Json => line(json!({"permutation": w, "polynomial": p.to_string()})),
                _ => line(p),
            }
        }
        CommandKind::Qnu => {
            let w = job.permutation.as_ref().expect("validated");
            let q = q_nu(w, job.n.saturating_sub(1))?;
            match fmt {
                Format::Json => line(json!({"permutation": w, "q_nu": q})),
                _ => line(q),
            }
        }
        CommandKind::Dmatrix | CommandKind::Ematrix => {
            if job.matrix == MatrixChoice::DtildeQ {
                let m = build_D_tilde_q(job.n, job.k.expect("validated"))?;
                render_matrix(&m, fmt)
            } else {
                render_matrix(&integer_matrix(job, verifier)?, fmt)
            }
        }
        CommandKind::Det => {
            let m = integer_matrix(job, verifier)?;
            let method = match job.method {
                Method::Bareiss => DetMethod::Bareiss,
                Method::Multimodular => DetMethod::Multimodular,
            };
            let d = det_integer_with(&m, method)?;
            match fmt {
                Format::Json => line(json!({"n": job.n, "k": job.k, "kind": m.kind, "det": d.to_string()})),
                _ => line(d),
            }
        }
        CommandKind::Qdet => {
            let d = det_q(&build_D_tilde_q(job.n, job.k.expect("validated"))?)?;
            match fmt {
                Format::Json => line(json!({"n": job.n, "k": job.k, "det": d})),
                _ => line(d),
            }
        }
        CommandKind::Snf => {
            let snf = smith_normal_form(&integer_matrix(job, verifier)?);
            match fmt {
                Format::Json => line(json!({"n": job.n, "k": job.k, "snf": snf.to_string()})),
                _ => line(snf),
            }
        }
        CommandKind::Maxnu => {
            if job.n > verifier.bounds().max_nu_n {
                return Err(CliError::Bound(format!("n = {} exceeds bound {}", job.n, verifier.bounds().max_nu_n)));
            }
            let (u, ws) = schubert_core::verify::max_nu(job.n);
            let ws: Vec<String> = ws.iter().map(ToString::to_string).collect();
            match fmt {
                Format::Json => line(json!({"n": job.n, "u": u.to_string(), "argmax": ws})),
                _ => line(format!("{u} {}", ws.join(" "))),
            }
        }
        CommandKind::Cauchy => {
            let r = verifier.verify_cauchy(job.n)?;
            return Ok(reports_outcome(vec![r], fmt, false));
        }
        CommandKind::Verify => {
            let reports = match job.claim {
                Some(c) => vec![verifier.verify(c, job.n, job.k)?],
                None => verifier.verify_all(job.n, job.k)?,
            };
            return Ok(reports_outcome(reports, fmt, job.claim.is_none()));
        }
    };
    Ok(Outcome::ok(out))
}

fn reports_outcome(reports: Vec<VerificationReport>, fmt: Format, with_table: bool) -> Outcome {
    let (status, table) = summarize(&reports);
    let mut output = String::new();
    let mut diagnostics = String::new();
    for r in &reports {
        match fmt {
            Format::Json => output.push_str(&line(r.to_json_line())),
            _ => output.push_str(&report_text(r)),
        }
    }
    if with_table {
        match fmt {
            Format::Json => diagnostics.push_str(&table),
            _ => output.push_str(&table),
        }
    }
    Outcome {
        output,
        status,
        diagnostics,
    }
}

/// Runs a job on a pool of the requested size under the time budget and
/// persists touched caches.
pub fn run(job: JobSpec) -> Result<Outcome, CliError> {
    let mut verifier = Verifier::new(job.bounds.clone());
    if let Some(dir) = &job.cache_dir {
        verifier = verifier.with_cache_dir(dir.clone());
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = job.threads {
        if t == 0 {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        pool = pool.num_threads(t);
    }
    let pool = pool
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let budget = job.bounds.max_seconds;
    let verifier = std::sync::Arc::new(verifier);
    let outcome = match budget {
        None => pool.install(|| execute(&job, &verifier))?,
        Some(secs) => {
            let (tx, rx) = mpsc::channel();
            let v = verifier.clone();
            let j = job.clone();
            std::thread::spawn(move || {
                let _ = tx.send(pool.install(|| execute(&j, &v)));
            });
            match rx.recv_timeout(Duration::from_secs_f64(secs)) {
                Ok(r) => r?,
                Err(_) => return Err(CliError::Bound(format!("time budget of {secs}s exceeded"))),
            }
        }
    };
    verifier.persist()?;
    Ok(outcome)
}

/// Parses `args`, runs the job and writes to the given streams; returns the
/// exit status.
pub fn main_with<I, T>(args: I, stdout: &mut impl Write, stderr: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = write!(if code == EXIT_OK { stdout as &mut dyn Write } else { stderr }, "{e}");
            return code;
        }
    };
    let result = JobSpec::from_cli(cli).and_then(run);
    match result {
        Ok(o) => {
            let _ = stdout.write_all(o.output.as_bytes());
            let _ = stderr.write_all(o.diagnostics.as_bytes());
            o.status
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}
