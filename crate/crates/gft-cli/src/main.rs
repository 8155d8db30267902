//! `gft`: command-line laboratory for global field totients.
//!
//! Exit codes: 0 success, 1 failed verification/selftest, 2 usage or
//! domain errors, 3 resource caps. `GFT_THREADS` caps the worker count.

mod opts;
mod render;
mod selftest;

use clap::Parser;

use gft::analytic::{
    empirical_mean, f_eval, inverse_totient, residue, totient_zeta_eval, zeta_eval,
};
use gft::divisors::{totient_brute, verify_remainder_isomorphism, Divisor};
use gft::error::{Error, Result};

use opts::{parse_complex, Command, RunConfig};
use render::{
    emit, render_crt_report, render_eval, render_fiber, render_mean_sweep, render_places,
    render_residue, render_totient, TotientReport,
};

#[derive(Parser)]
#[command(
    name = "gft",
    version,
    about = "Exact and numerical totient arithmetic for global fields"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn main() {
    if let Ok(threads) = std::env::var("GFT_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            if t >= 1 {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(t)
                    .build_global();
            }
        }
    }
    let cli = Cli::parse();
    std::process::exit(match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    });
}

fn run(command: Command) -> Result<i32> {
    match command {
        Command::Places { common, bound } => {
            let config = RunConfig::resolve(&common)?;
            let bound = bound
                .or(config.file.bound)
                .ok_or_else(|| Error::Usage("--bound is required".into()))?;
            if bound < 2 {
                return Err(Error::Usage("--bound must be >= 2".into()));
            }
            let table = config.backend()?.place_table(bound)?;
            emit(&config, &render_places(&table, config.format))?;
            Ok(0)
        }
        Command::Totient {
            common,
            divisor,
            divisor_file,
        } => {
            let config = RunConfig::resolve(&common)?;
            let divisor = load_divisor(&config, divisor, divisor_file)?;
            let report_base = TotientReport {
                norm: divisor.norm()?,
                totient: divisor.totient()?,
                oracle: None,
                note: None,
                divisor,
            };
            let (report, code) = match totient_brute(&report_base.divisor, &config.oracle_caps) {
                Ok(o) => (
                    TotientReport {
                        oracle: Some(o),
                        ..report_base
                    },
                    0,
                ),
                Err(Error::UnsupportedOracle(msg)) => (
                    TotientReport {
                        note: Some(msg),
                        ..report_base
                    },
                    0,
                ),
                Err(Error::Cap(msg)) => (
                    TotientReport {
                        note: Some(msg),
                        ..report_base
                    },
                    3,
                ),
                Err(e) => return Err(e),
            };
            emit(&config, &render_totient(&report, config.format))?;
            Ok(code)
        }
        Command::Zeta { common, s, eps } => {
            let config = RunConfig::resolve(&common)?;
            let (s_str, s, eps) = eval_args(&config, s, eps)?;
            let result = zeta_eval(config.backend()?, s, eps, &config.eval_caps)?;
            emit(
                &config,
                &render_eval("zeta", &s_str, &result, config.format),
            )?;
            Ok(0)
        }
        Command::F { common, s, eps } => {
            let config = RunConfig::resolve(&common)?;
            let (s_str, s, eps) = eval_args(&config, s, eps)?;
            let result = f_eval(config.backend()?, s, eps, &config.eval_caps)?;
            emit(&config, &render_eval("f", &s_str, &result, config.format))?;
            Ok(0)
        }
        Command::TotientZeta { common, s, eps } => {
            let config = RunConfig::resolve(&common)?;
            let (s_str, s, eps) = eval_args(&config, s, eps)?;
            let result = totient_zeta_eval(config.backend()?, s, eps, &config.eval_caps)?;
            emit(&config, &render_eval("T", &s_str, &result, config.format))?;
            Ok(0)
        }
        Command::Residue { common } => {
            let config = RunConfig::resolve(&common)?;
            let backend = config.backend()?;
            let r = residue(backend)?;
            emit(
                &config,
                &render_residue(&backend.to_string(), &r, config.format),
            )?;
            Ok(0)
        }
        Command::MeanValue {
            common,
            upper,
            full_sweep,
        } => {
            let config = RunConfig::resolve(&common)?;
            let n = upper
                .or(config.file.upper)
                .ok_or_else(|| Error::Usage("--N is required".into()))?;
            if n.saturating_add(1) > config.eval_caps.max_norm_bound {
                return Err(Error::Cap(format!(
                    "N = {n} needs a place table to norm {} beyond the cap {} \
                     (raise --max-norm-bound)",
                    n + 1,
                    config.eval_caps.max_norm_bound
                )));
            }
            let full = full_sweep || config.file.full_sweep.unwrap_or(false);
            let sweep = empirical_mean(config.backend()?, n, full)?;
            emit(&config, &render_mean_sweep(&sweep, config.format))?;
            Ok(0)
        }
        Command::InverseTotient {
            common,
            n,
            place_cap,
        } => {
            let config = RunConfig::resolve(&common)?;
            let n = n
                .or(config.file.n)
                .ok_or_else(|| Error::Usage("--n is required".into()))?;
            let cap = place_cap
                .or(config.file.place_cap)
                .unwrap_or(n.saturating_add(1));
            let fiber = inverse_totient(config.backend()?, n, cap)?;
            emit(&config, &render_fiber(n, &fiber, config.format))?;
            Ok(0)
        }
        Command::VerifyCrt {
            common,
            divisor,
            divisor_file,
            all_bipartitions,
        } => {
            let config = RunConfig::resolve(&common)?;
            let divisor = load_divisor(&config, divisor, divisor_file)?;
            let all = all_bipartitions || config.file.all_bipartitions.unwrap_or(false);
            let report = verify_remainder_isomorphism(&divisor, &config.oracle_caps, all)?;
            emit(&config, &render_crt_report(&report, config.format))?;
            Ok(if report.all_pass { 0 } else { 1 })
        }
        Command::Selftest { common, seed } => {
            let config = RunConfig::resolve(&common)?;
            let seed = seed.or(config.file.seed).unwrap_or(42);
            let (text, ok) = selftest::run(seed)?;
            emit(&config, &text)?;
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn eval_args(
    config: &RunConfig,
    s: Option<String>,
    eps: Option<f64>,
) -> Result<(String, num_complex::Complex64, f64)> {
    let s_str = s
        .or_else(|| config.file.s.clone())
        .ok_or_else(|| Error::Usage("--s is required".into()))?;
    let s = parse_complex(&s_str)?;
    let eps = eps.or(config.file.eps).unwrap_or(1e-6);
    Ok((s_str, s, eps))
}

fn load_divisor(
    config: &RunConfig,
    inline: Option<String>,
    file: Option<std::path::PathBuf>,
) -> Result<Divisor> {
    let json: serde_json::Value = match (inline, file) {
        (Some(_), Some(_)) => {
            return Err(Error::Usage(
                "give either --divisor or --divisor-file, not both".into(),
            ))
        }
        (Some(text), None) => serde_json::from_str(&text)
            .map_err(|e| Error::Usage(format!("bad divisor JSON: {e}")))?,
        (None, Some(path)) => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Error::Usage(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("bad divisor JSON in {}: {e}", path.display())))?
        }
        (None, None) => match &config.file.divisor {
            Some(v) => v.clone(),
            None => {
                return Err(Error::Usage(
                    "--divisor or --divisor-file is required".into(),
                ))
            }
        },
    };
    Divisor::from_json(config.backend()?, &json)
}
