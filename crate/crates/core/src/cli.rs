//! The `jscheme` command line.
//!
//! Exit codes: 0 when the command succeeds and its claim holds, 1 when a
//! verification or claim fails, 2 for invalid input. Reports go to stdout
//! (or `--out`) as JSON with rationals written `p/q`; timings go to stderr.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::analysis::decompose;
use crate::closure::classify_scheme;
use crate::composition::verify_composition_identity;
use crate::iso::{canonical_certificate, find_isomorphism};
use crate::scheme::{build_scheme, read_scheme_json, verify_jordan_scheme, write_scheme_json, JordanScheme, SchemeError};
use crate::search::{enumerate_admissible, search_normalized, switching_orbit_size, EnumerationMode};
use crate::signs::{admissible, SignMatrix, MAX_RANK};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "jscheme", version, about = "Jordan schemes from sign matrices over elementary abelian 2-groups")]
pub struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Normalized,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate admissible sign matrices of order 2^rank.
    Enumerate {
        #[arg(long)]
        rank: u32,
        #[arg(long, value_enum, default_value = "normalized")]
        mode: Mode,
        /// Directory receiving one `.txt` file per matrix.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the scheme of a sign matrix and write it as JSON.
    Build {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the Jordan scheme axioms.
    Verify {
        scheme: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide association scheme / improper / proper.
    Classify {
        scheme: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decompose the adjacency Jordan algebra.
    Analyze {
        scheme: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide combinatorial isomorphism of two schemes.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the sum-of-squares composition identity of a sign matrix.
    IdentityCheck {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive normalized search at order 2^rank.
    HurwitzSearch {
        #[arg(long)]
        rank: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Io<'a> {
    stdout: &'a mut dyn Write,
    stderr: &'a mut dyn Write,
}

impl Io<'_> {
    fn fail(&mut self, code: i32, message: impl std::fmt::Display) -> i32 {
        let _ = writeln!(self.stderr, "error: {message}");
        code
    }

    fn emit(&mut self, out: Option<&Path>, text: &str) -> i32 {
        match out {
            Some(path) => match fs::write(path, text) {
                Ok(()) => EXIT_OK,
                Err(e) => self.fail(EXIT_INVALID, format!("cannot write {}: {e}", path.display())),
            },
            None => match self.stdout.write_all(text.as_bytes()) {
                Ok(()) => EXIT_OK,
                Err(e) => self.fail(EXIT_FAILED, format!("cannot write output: {e}")),
            },
        }
    }

    fn emit_json<T: Serialize>(&mut self, out: Option<&Path>, value: &T) -> i32 {
        let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
        text.push('\n');
        self.emit(out, &text)
    }
}

fn read_text(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn read_matrix(path: &Path) -> Result<SignMatrix, String> {
    let text = read_text(path)?;
    SignMatrix::parse(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_scheme(path: &Path) -> Result<JordanScheme, String> {
    let text = read_text(path)?;
    read_scheme_json(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Reads and verifies a scheme file, mapping failures to exit codes.
fn load_verified(io: &mut Io, path: &Path) -> Result<JordanScheme, i32> {
    let scheme = read_scheme(path).map_err(|e| io.fail(EXIT_INVALID, e))?;
    match verify_jordan_scheme(&scheme) {
        Ok(_) => Ok(scheme),
        Err(e) => Err(io.fail(EXIT_FAILED, format!("{}: {e}", path.display()))),
    }
}

fn check_rank(rank: u32) -> Result<(), String> {
    if rank > MAX_RANK {
        Err(format!("rank {rank} exceeds the supported maximum of {MAX_RANK}"))
    } else {
        Ok(())
    }
}

fn enumerate(io: &mut Io, rank: u32, mode: Mode, out: Option<&Path>) -> i32 {
    if let Err(e) = check_rank(rank) {
        return io.fail(EXIT_INVALID, e);
    }
    let (normalized, report) = match search_normalized(rank) {
        Ok(r) => r,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let matrices = match mode {
        Mode::Normalized => normalized.clone(),
        Mode::All => match enumerate_admissible(rank, EnumerationMode::All) {
            Ok(all) => all,
            Err(e) => return io.fail(EXIT_INVALID, e),
        },
    };
    if let Some(dir) = out {
        if let Err(e) = fs::create_dir_all(dir) {
            return io.fail(EXIT_INVALID, format!("cannot create {}: {e}", dir.display()));
        }
        let width = matrices.len().max(1).to_string().len();
        for (i, m) in matrices.iter().enumerate() {
            let path = dir.join(format!("matrix_{i:0width$}.txt"));
            if let Err(e) = fs::write(&path, m.to_text()) {
                return io.fail(EXIT_INVALID, format!("cannot write {}: {e}", path.display()));
            }
        }
    }
    let total = normalized.len() as u128 * switching_orbit_size(rank);
    let _ = writeln!(
        io.stdout,
        "order={} normalized={} total={}",
        report.order,
        normalized.len(),
        total
    );
    let _ = writeln!(
        io.stdout,
        "search nodes={} exhaustive={} degenerate={} files={}",
        report.nodes,
        report.exhaustive,
        report.degenerate,
        if out.is_some() { matrices.len() } else { 0 }
    );
    EXIT_OK
}

fn build(io: &mut Io, matrix: &Path, out: Option<&Path>) -> i32 {
    let m = match read_matrix(matrix) {
        Ok(m) => m,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    match build_scheme(&m) {
        Ok(s) => io.emit(out, &write_scheme_json(&s)),
        Err(e @ SchemeError::NotAdmissible { .. }) => io.fail(EXIT_FAILED, e),
        Err(e) => io.fail(EXIT_INVALID, e),
    }
}

fn verify(io: &mut Io, path: &Path, out: Option<&Path>) -> i32 {
    let scheme = match read_scheme(path) {
        Ok(s) => s,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    match verify_jordan_scheme(&scheme) {
        Ok(constants) => {
            let nonzero = constants.nonzero().count();
            io.emit_json(
                out,
                &json!({
                    "valid": true,
                    "order": scheme.order(),
                    "classCount": scheme.class_count(),
                    "valencies": scheme.valencies(),
                    "nonzeroStructureConstants": nonzero,
                }),
            )
        }
        Err(e) => {
            let _ = io.emit_json(out, &json!({ "valid": false, "violation": e.to_string() }));
            EXIT_FAILED
        }
    }
}

fn classify(io: &mut Io, path: &Path, out: Option<&Path>) -> i32 {
    let scheme = match load_verified(io, path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let c = classify_scheme(&scheme);
    io.emit_json(out, &c)
}

fn analyze(io: &mut Io, path: &Path, seed: u64, out: Option<&Path>) -> i32 {
    let scheme = match load_verified(io, path) {
        Ok(s) => s,
        Err(code) => return code,
    };
    match decompose(&scheme, seed) {
        Ok(d) => io.emit_json(out, &d.report()),
        Err(e) => io.fail(EXIT_FAILED, e),
    }
}

fn iso(io: &mut Io, first: &Path, second: &Path, out: Option<&Path>) -> i32 {
    let a = match load_verified(io, first) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let b = match load_verified(io, second) {
        Ok(s) => s,
        Err(code) => return code,
    };
    let certificates = [canonical_certificate(&a).to_hex(), canonical_certificate(&b).to_hex()];
    match find_isomorphism(&a, &b) {
        Some(w) => io.emit_json(
            out,
            &json!({
                "result": "isomorphic",
                "certificates": certificates,
                "pointMap": w.point_map,
                "classMap": w.class_map,
            }),
        ),
        None => {
            let _ = io.emit_json(out, &json!({ "result": "not isomorphic", "certificates": certificates }));
            EXIT_FAILED
        }
    }
}

fn identity_check(io: &mut Io, matrix: &Path, out: Option<&Path>) -> i32 {
    let m = match read_matrix(matrix) {
        Ok(m) => m,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    let holds = verify_composition_identity(&m);
    let code = io.emit_json(
        out,
        &json!({
            "order": m.order(),
            "admissible": admissible(&m),
            "compositionIdentity": holds,
        }),
    );
    if code != EXIT_OK {
        code
    } else if holds {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

fn hurwitz(io: &mut Io, rank: u32, out: Option<&Path>) -> i32 {
    if let Err(e) = check_rank(rank) {
        return io.fail(EXIT_INVALID, e);
    }
    let report = match search_normalized(rank) {
        Ok((_, r)) => r,
        Err(e) => return io.fail(EXIT_INVALID, e),
    };
    // admissible matrices may only exist for orders 1, 2, 4, 8
    let consistent = report.exhaustive && (report.order <= 8 || report.solutions == 0);
    let code = io.emit_json(out, &report);
    if code != EXIT_OK {
        code
    } else if consistent {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let start = Instant::now();
    let code = match cli.threads {
        Some(0) => {
            let _ = writeln!(stderr, "error: --threads must be at least 1");
            return EXIT_INVALID;
        }
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            // run inside the pool with buffered output, since the caller's
            // writers need not be Send
            Ok(pool) => {
                let (mut out, mut err) = (Vec::new(), Vec::new());
                let code = pool.install(|| {
                    dispatch(&mut Io { stdout: &mut out, stderr: &mut err }, &cli.command)
                });
                let _ = stdout.write_all(&out);
                let _ = stderr.write_all(&err);
                code
            }
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                return EXIT_INVALID;
            }
        },
        None => dispatch(&mut Io { stdout, stderr }, &cli.command),
    };
    let _ = writeln!(stderr, "elapsed {:.3}s", start.elapsed().as_secs_f64());
    code
}

fn dispatch(io: &mut Io, command: &Command) -> i32 {
    match command {
        Command::Enumerate { rank, mode, out } => enumerate(io, *rank, *mode, out.as_deref()),
        Command::Build { matrix, out } => build(io, matrix, out.as_deref()),
        Command::Verify { scheme, out } => verify(io, scheme, out.as_deref()),
        Command::Classify { scheme, out } => classify(io, scheme, out.as_deref()),
        Command::Analyze { scheme, seed, out } => analyze(io, scheme, *seed, out.as_deref()),
        Command::Iso { first, second, out } => iso(io, first, second, out.as_deref()),
        Command::IdentityCheck { matrix, out } => identity_check(io, matrix, out.as_deref()),
        Command::HurwitzSearch { rank, out } => hurwitz(io, *rank, out.as_deref()),
    }
}
