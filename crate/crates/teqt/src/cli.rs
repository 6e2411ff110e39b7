//! Batch driver: parse, inline, then check / evaluate / erase / translate /
//! proof-check, with deterministic output.
//!
//! Exit codes: 0 on success, 1 when a check or proof fails, 2 on parse or
//! load errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::eval::reduce_trace;
use crate::frontend::{parse_program, parse_proof, Program};
use crate::kernel::check_proof;
use crate::logic::make_obligation;
use crate::syntax::{Context, Effect};
use crate::typecheck::{infer, CheckConfig};

#[derive(Parser, Debug)]
#[command(
    name = "teqt",
    version,
    about = "Checker and evaluator for a language with termination casts"
)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,
}

fn effect_arg(s: &str) -> Result<Effect, String> {
    match s {
        "!" => Ok(Effect::Total),
        "?" => Ok(Effect::General),
        other => Err(format!("expected ! or ?, found {other}")),
    }
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Typecheck every `check` directive; print inferred types.
    Check {
        file: PathBuf,
        /// Override the effect of every check directive.
        #[arg(long, value_parser = effect_arg)]
        effect: Option<Effect>,
        /// Reduction bound for the join rule.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Erase and reduce every `eval` directive; print final terms.
    Eval {
        file: PathBuf,
        /// Reduction bound.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Print the erasure of every definition.
    Erase { file: PathBuf },
    /// Emit one .obl file per accepted `obligation` directive.
    Translate {
        file: PathBuf,
        /// Directory for the emitted .obl files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Reduction bound for the join rule.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
    /// Check a proof script against its sequent header.
    WpCheck {
        file: PathBuf,
        /// Cap on the steps the operational axiom may take.
        #[arg(long, default_value_t = 1000)]
        fuel: usize,
    },
}

pub fn run<I, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = String>,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    match cli.cmd {
        Cmd::Check { file, effect, fuel } => cmd_check(&file, effect, fuel, out, err),
        Cmd::Eval { file, fuel } => cmd_eval(&file, fuel, out, err),
        Cmd::Erase { file } => cmd_erase(&file, out, err),
        Cmd::Translate {
            file,
            out_dir,
            fuel,
        } => cmd_translate(&file, &out_dir, fuel, out, err),
        Cmd::WpCheck { file, fuel } => cmd_wp_check(&file, fuel, out, err),
    }
}

fn load(path: &Path, err: &mut impl Write) -> Result<Program, i32> {
    let text = fs::read_to_string(path).map_err(|e| {
        let _ = writeln!(err, "{}: {e}", path.display());
        2
    })?;
    let file = parse_program(&text).map_err(|e| {
        let _ = writeln!(err, "{}:{e}", path.display());
        2
    })?;
    file.link().map_err(|e| {
        let _ = writeln!(err, "{}: {e}", path.display());
        2
    })
}

fn cmd_check(
    path: &Path,
    effect_override: Option<Effect>,
    fuel: usize,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let program = match load(path, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let cfg = CheckConfig { join_fuel: fuel };
    let mut failed = false;
    for check in &program.checks {
        let term = program.def(&check.name).expect("linked");
        let eff = effect_override.unwrap_or(check.effect);
        match infer(&Context::new(), term, eff, &cfg) {
            Ok(ty) => {
                let matches = check
                    .expected
                    .as_ref()
                    .map(|want| want.alpha_eq(&ty))
                    .unwrap_or(true);
                if matches {
                    let _ = writeln!(out, "{} : {} at {}", check.name, ty, eff);
                } else {
                    failed = true;
                    let _ = writeln!(
                        err,
                        "{}: inferred {} but the directive expects {}",
                        check.name,
                        ty,
                        check.expected.as_ref().unwrap()
                    );
                }
            }
            Err(d) => {
                failed = true;
                let _ = writeln!(err, "{}: {}", check.name, d);
            }
        }
    }
    if failed {
        1
    } else {
        0
    }
}

fn cmd_eval(path: &Path, fuel: usize, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let program = match load(path, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    for name in &program.evals {
        let term = program.def(name).expect("linked").erase();
        let trace = reduce_trace(&term, fuel);
        let suffix = if trace.finished() {
            format!("[{} steps]", trace.steps())
        } else {
            format!("[fuel exhausted after {} steps]", trace.steps())
        };
        let _ = writeln!(out, "{} ~> {} {}", name, trace.last(), suffix);
    }
    0
}

fn cmd_erase(path: &Path, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let program = match load(path, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    for (name, term) in &program.defs {
        let _ = writeln!(out, "{} = {}", name, term.erase());
    }
    0
}

fn cmd_translate(
    path: &Path,
    out_dir: &Path,
    fuel: usize,
    out: &mut impl Write,
    err: &mut impl Write,
) -> i32 {
    let program = match load(path, err) {
        Ok(p) => p,
        Err(code) => return code,
    };
    let cfg = CheckConfig { join_fuel: fuel };
    let mut failed = false;
    for name in &program.obligations {
        let Some(check) = program.check_for(name) else {
            failed = true;
            let _ = writeln!(
                err,
                "{name}: obligation needs a check directive for the same name"
            );
            continue;
        };
        let term = program.def(name).expect("linked");
        match infer(&Context::new(), term, check.effect, &cfg) {
            Ok(ty) => {
                let ob = make_obligation(&Context::new(), &term.erase(), &ty.erase(), check.effect);
                let target = out_dir.join(format!("{name}.obl"));
                if let Err(e) = fs::write(&target, format!("{ob}\n")) {
                    failed = true;
                    let _ = writeln!(err, "{}: {e}", target.display());
                } else {
                    let _ = writeln!(out, "wrote {}", target.display());
                }
            }
            Err(d) => {
                failed = true;
                let _ = writeln!(err, "{name}: {d}");
            }
        }
    }
    if failed {
        1
    } else {
        0
    }
}

fn cmd_wp_check(path: &Path, fuel: usize, out: &mut impl Write, err: &mut impl Write) -> i32 {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            return 2;
        }
    };
    let (seq, proof) = match parse_proof(&text) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "{}:{e}", path.display());
            return 2;
        }
    };
    let cfg = CheckConfig { join_fuel: fuel };
    match check_proof(&seq, &proof, &cfg) {
        Ok(()) => {
            let _ = writeln!(out, "ok: {}", seq.goal());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}: {e}", path.display());
            1
        }
    }
}
