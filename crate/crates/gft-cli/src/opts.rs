//! Argument parsing and run configuration. Every run is fully determined
//! by the resolved configuration: flags win over the optional JSON config
//! file, which wins over defaults.

use std::path::PathBuf;

use clap::{Args, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use gft::analytic::EvalCaps;
use gft::curve::CurveSpec;
use gft::divisors::OracleCaps;
use gft::error::{Error, Result};
use gft::places::Backend;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutFormat {
    Pretty,
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Args)]
pub struct Common {
    /// Backend descriptor: Q, Qi:<d>, P1:<q> or curve:<file.json>
    #[arg(long)]
    pub backend: Option<String>,
    /// Output format
    #[arg(long, value_enum)]
    pub format: Option<OutFormat>,
    /// Write output to a file instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON config file; explicit flags win over its values
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Enumeration cap for the Z/M brute-force oracle
    #[arg(long)]
    pub q_cap: Option<u128>,
    /// Enumeration cap (residue count) for the F_q[t] brute-force oracle
    #[arg(long)]
    pub poly_cap: Option<u64>,
    /// Largest place norm Euler products may enumerate to
    #[arg(long)]
    pub max_norm_bound: Option<u64>,
}

/// The JSON config file mirrors the flags.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub backend: Option<String>,
    pub bound: Option<u64>,
    pub s: Option<String>,
    pub eps: Option<f64>,
    pub n: Option<u64>,
    #[serde(rename = "N")]
    pub upper: Option<u64>,
    pub divisor: Option<serde_json::Value>,
    pub format: Option<String>,
    pub out: Option<String>,
    pub q_cap: Option<u128>,
    pub poly_cap: Option<u64>,
    pub max_norm_bound: Option<u64>,
    pub place_cap: Option<u64>,
    pub all_bipartitions: Option<bool>,
    pub full_sweep: Option<bool>,
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List all places up to a norm bound
    Places {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        bound: Option<u64>,
    },
    /// Norm and totient of a divisor, with the brute-force oracle when supported
    Totient {
        #[command(flatten)]
        common: Common,
        /// Inline divisor JSON, e.g. '[[2,2],[3,1]]'
        #[arg(long)]
        divisor: Option<String>,
        /// File containing the divisor JSON
        #[arg(long)]
        divisor_file: Option<PathBuf>,
    },
    /// Evaluate the zeta function by truncated Euler product
    Zeta {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Evaluate f_K by truncated Euler product
    F {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// Evaluate the totient zeta function T_K = zeta_K * f_K
    TotientZeta {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        s: Option<String>,
        #[arg(long)]
        eps: Option<f64>,
    },
    /// The residue of zeta_K at s = 1, exact and floating
    Residue {
        #[command(flatten)]
        common: Common,
    },
    /// Cesàro averages of t_K(n) against the mean-value constant (CSV sweep)
    MeanValue {
        #[command(flatten)]
        common: Common,
        #[arg(long = "N")]
        upper: Option<u64>,
        /// Emit every M instead of the logarithmic subsample
        #[arg(long)]
        full_sweep: bool,
    },
    /// Enumerate the fiber of divisors with totient exactly n
    InverseTotient {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        n: Option<u64>,
        /// Place-table norm bound (defaults to n+1, the minimum)
        #[arg(long)]
        place_cap: Option<u64>,
    },
    /// Verify the remainder-theorem consequences on a divisor by enumeration
    VerifyCrt {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        divisor: Option<String>,
        #[arg(long)]
        divisor_file: Option<PathBuf>,
        /// Check every support bipartition (support size <= 4)
        #[arg(long)]
        all_bipartitions: bool,
    },
    /// Run the built-in cross-check battery
    Selftest {
        #[command(flatten)]
        common: Common,
        /// Seed for the randomized lemma-bound samples
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Fully resolved configuration shared by the command handlers.
pub struct RunConfig {
    pub backend: Option<Backend>,
    pub format: OutFormat,
    pub out: Option<PathBuf>,
    pub oracle_caps: OracleCaps,
    pub eval_caps: EvalCaps,
    pub file: FileConfig,
}

impl RunConfig {
    pub fn resolve(common: &Common) -> Result<RunConfig> {
        let file: FileConfig = match &common.config {
            None => FileConfig::default(),
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::Usage(format!("cannot read config {}: {e}", path.display()))
                })?;
                serde_json::from_str(&text)
                    .map_err(|e| Error::Usage(format!("bad config {}: {e}", path.display())))?
            }
        };
        let descriptor = common.backend.clone().or_else(|| file.backend.clone());
        let backend = descriptor.map(|d| parse_backend(&d)).transpose()?;
        let format = match common.format {
            Some(f) => f,
            None => match file.format.as_deref() {
                Some("pretty") | None => OutFormat::Pretty,
                Some("csv") => OutFormat::Csv,
                Some("json") => OutFormat::Json,
                Some(other) => {
                    return Err(Error::Usage(format!("unknown format {other:?}")));
                }
            },
        };
        let out = common
            .out
            .clone()
            .or_else(|| file.out.clone().map(PathBuf::from));
        let mut oracle_caps = OracleCaps::default();
        if let Some(c) = common.q_cap.or(file.q_cap) {
            oracle_caps.rational_modulus_cap = c;
        }
        if let Some(c) = common.poly_cap.or(file.poly_cap) {
            oracle_caps.ff_residue_cap = c;
        }
        let mut eval_caps = EvalCaps::default();
        if let Some(c) = common.max_norm_bound.or(file.max_norm_bound) {
            eval_caps.max_norm_bound = c;
        }
        Ok(RunConfig {
            backend,
            format,
            out,
            oracle_caps,
            eval_caps,
            file,
        })
    }

    pub fn backend(&self) -> Result<&Backend> {
        self.backend
            .as_ref()
            .ok_or_else(|| Error::Usage("--backend is required".into()))
    }
}

/// Parses a backend descriptor, loading curve specs from JSON files.
pub fn parse_backend(descriptor: &str) -> Result<Backend> {
    if let Some(path) = descriptor.strip_prefix("curve:") {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Usage(format!("cannot read curve spec {path}: {e}")))?;
        return Ok(Backend::curve(CurveSpec::from_json(&text)?));
    }
    Backend::parse(descriptor)
}

/// Parses "2", "1.5", "2+0.5i", "2-1i", "0.3i" (exponents allowed).
pub fn parse_complex(text: &str) -> Result<Complex64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Usage(format!("cannot parse complex number {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let parse_re = |t: &str| t.parse::<f64>().map_err(|_| bad());
    if let Some(body) = s.strip_suffix('i') {
        // Split at the last +/- that is not a leading sign or an exponent sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for i in (1..bytes.len()).rev() {
            let c = bytes[i] as char;
            if (c == '+' || c == '-') && !matches!(bytes[i - 1] as char, 'e' | 'E') {
                split = Some(i);
                break;
            }
        }
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let re = if re_part.is_empty() {
            0.0
        } else {
            parse_re(re_part)?
        };
        let im = match im_part {
            "" | "+" => 1.0,
            "-" => -1.0,
            t => parse_re(t)?,
        };
        Ok(Complex64::new(re, im))
    } else {
        Ok(Complex64::new(parse_re(&s)?, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_parsing() {
        assert_eq!(parse_complex("2").unwrap(), Complex64::new(2.0, 0.0));
        assert_eq!(parse_complex("1.5+0.3i").unwrap(), Complex64::new(1.5, 0.3));
        assert_eq!(parse_complex("2-1i").unwrap(), Complex64::new(2.0, -1.0));
        assert_eq!(parse_complex("0.3i").unwrap(), Complex64::new(0.0, 0.3));
        assert_eq!(parse_complex("-2.5").unwrap(), Complex64::new(-2.5, 0.0));
        assert_eq!(
            parse_complex("1e-3+2e2i").unwrap(),
            Complex64::new(1e-3, 200.0)
        );
        assert_eq!(parse_complex("2+i").unwrap(), Complex64::new(2.0, 1.0));
        assert!(parse_complex("twelve").is_err());
        assert!(parse_complex("").is_err());
    }
}
