//! Output rendering. Every command builds its full output as a string and
//! emits it once, so identical configurations produce byte-identical
//! output.

use gft::analytic::{format_f64, EvalResult, MeanSweep, ResidueValue};
use gft::divisors::{Divisor, RemainderReport};
use gft::error::{Error, Result};
use gft::places::PlaceTable;

use crate::opts::{OutFormat, RunConfig};

pub fn emit(config: &RunConfig, text: &str) -> Result<()> {
    match &config.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display()))),
    }
}

pub fn render_places(table: &PlaceTable, format: OutFormat) -> String {
    match format {
        OutFormat::Csv => {
            let mut out = String::from("key,norm,degree,tag\n");
            for p in table.places() {
                out.push_str(&format!(
                    "{},{},{},{}\n",
                    p.key_string(),
                    p.norm(),
                    p.degree(),
                    p.tag()
                ));
            }
            out
        }
        OutFormat::Json => {
            let rows: Vec<serde_json::Value> = table
                .places()
                .iter()
                .map(|p| {
                    serde_json::json!({
                        "key": p.key_string(),
                        "norm": p.norm(),
                        "degree": p.degree(),
                        "tag": p.tag(),
                    })
                })
                .collect();
            format!("{}\n", serde_json::to_string_pretty(&rows).unwrap())
        }
        OutFormat::Pretty => {
            let mut out = format!(
                "# places of {} with norm <= {}\n",
                table.backend(),
                table.norm_bound()
            );
            out.push_str(&format!(
                "{:<14} {:>10} {:>7}  tag\n",
                "key", "norm", "degree"
            ));
            for p in table.places() {
                out.push_str(&format!(
                    "{:<14} {:>10} {:>7}  {}\n",
                    p.key_string(),
                    p.norm(),
                    p.degree(),
                    p.tag()
                ));
            }
            out.push_str(&format!("# {} places\n", table.len()));
            out
        }
    }
}

pub struct TotientReport {
    pub divisor: Divisor,
    pub norm: u128,
    pub totient: u128,
    pub oracle: Option<u128>,
    pub note: Option<String>,
}

impl TotientReport {
    pub fn matches(&self) -> Option<bool> {
        self.oracle.map(|o| o == self.totient)
    }
}

pub fn render_totient(report: &TotientReport, format: OutFormat) -> String {
    match format {
        OutFormat::Json => {
            let mut obj = serde_json::json!({
                "backend": report.divisor.backend().to_string(),
                "divisor": report.divisor.to_json(),
                "norm": report.norm.to_string(),
                "totient": report.totient.to_string(),
            });
            if let Some(o) = report.oracle {
                obj["oracle"] = serde_json::json!(o.to_string());
                obj["oracle_match"] = serde_json::json!(report.matches().unwrap());
            }
            if let Some(n) = &report.note {
                obj["note"] = serde_json::json!(n);
            }
            format!("{}\n", serde_json::to_string_pretty(&obj).unwrap())
        }
        OutFormat::Csv => {
            let mut out = String::from("norm,totient,oracle,match\n");
            let (oracle, matched) = match report.oracle {
                Some(o) => (o.to_string(), report.matches().unwrap().to_string()),
                None => (String::new(), String::new()),
            };
            out.push_str(&format!(
                "{},{},{oracle},{matched}\n",
                report.norm, report.totient
            ));
            out
        }
        OutFormat::Pretty => {
            let mut out = format!("divisor  {}\n", report.divisor);
            out.push_str(&format!("norm     {}\n", report.norm));
            out.push_str(&format!("totient  {}\n", report.totient));
            match (report.oracle, report.matches()) {
                (Some(o), Some(m)) => {
                    out.push_str(&format!(
                        "oracle   {o} ({})\n",
                        if m { "match" } else { "MISMATCH" }
                    ));
                }
                _ => {
                    if let Some(note) = &report.note {
                        out.push_str(&format!("oracle   skipped: {note}\n"));
                    }
                }
            }
            out
        }
    }
}

pub fn render_eval(name: &str, s: &str, result: &EvalResult, format: OutFormat) -> String {
    match format {
        OutFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&result.to_json()).unwrap()
        ),
        OutFormat::Csv => format!(
            "value_re,value_im,tail_bound,places_used\n{},{},{},{}\n",
            format_f64(result.value.re),
            format_f64(result.value.im),
            format_f64(result.tail_bound),
            result.places_used
        ),
        OutFormat::Pretty => format!(
            "{name}({s}) = {} + {}i\n  tail bound  {:.3e}\n  places used {}\n",
            format_f64(result.value.re),
            format_f64(result.value.im),
            result.tail_bound,
            result.places_used
        ),
    }
}

pub fn render_residue(backend: &str, r: &ResidueValue, format: OutFormat) -> String {
    match format {
        OutFormat::Json => format!(
            "{}\n",
            serde_json::to_string_pretty(&serde_json::json!({
                "backend": backend,
                "exact": r.exact.to_string(),
                "value": r.value,
            }))
            .unwrap()
        ),
        OutFormat::Csv => format!("exact,value\n{},{}\n", r.exact, format_f64(r.value)),
        OutFormat::Pretty => {
            format!(
                "residue of zeta_{{{backend}}} at s=1: {} = {}\n",
                r.exact,
                format_f64(r.value)
            )
        }
    }
}

pub fn render_mean_sweep(sweep: &MeanSweep, format: OutFormat) -> String {
    match format {
        OutFormat::Csv => sweep.to_csv(),
        OutFormat::Json => {
            let rows: Vec<serde_json::Value> = sweep
                .rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "M": r.m,
                        "partial_sum": r.partial_sum,
                        "partial_average": r.partial_average,
                        "relative_gap": r.relative_gap,
                    })
                })
                .collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "backend": sweep.backend,
                    "N": sweep.bound,
                    "target_constant": sweep.target,
                    "final_average": sweep.final_average,
                    "oscillation": sweep.oscillation,
                    "rows": rows,
                }))
                .unwrap()
            )
        }
        OutFormat::Pretty => {
            let mut out = format!(
                "# mean value sweep, backend {}, N = {}\n",
                sweep.backend, sweep.bound
            );
            out.push_str(&sweep.to_csv());
            out.push_str(&format!(
                "# target {} | final average {} | relative gap {} | oscillation (trailing half) {}\n",
                format_f64(sweep.target),
                format_f64(sweep.final_average),
                format_f64((sweep.final_average - sweep.target) / sweep.target),
                format_f64(sweep.oscillation),
            ));
            out
        }
    }
}

pub fn render_fiber(n: u64, fiber: &[Divisor], format: OutFormat) -> String {
    match format {
        OutFormat::Json => {
            let list: Vec<serde_json::Value> = fiber.iter().map(|d| d.to_json()).collect();
            format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::json!({
                    "n": n,
                    "count": fiber.len(),
                    "fiber": list,
                }))
                .unwrap()
            )
        }
        OutFormat::Csv => {
            let mut out = String::from("index,divisor,norm\n");
            for (i, d) in fiber.iter().enumerate() {
                out.push_str(&format!(
                    "{},{},{}\n",
                    i + 1,
                    serde_json::to_string(&d.to_json()).unwrap(),
                    d.norm().map(|n| n.to_string()).unwrap_or_default()
                ));
            }
            out
        }
        OutFormat::Pretty => {
            let mut out = format!("# fiber of n = {n}: t_K({n}) = {}\n", fiber.len());
            for d in fiber {
                let norm = d.norm().map(|n| n.to_string()).unwrap_or_default();
                out.push_str(&format!("{d}   [norm {norm}]\n"));
            }
            out
        }
    }
}

pub fn render_crt_report(report: &RemainderReport, format: OutFormat) -> String {
    match format {
        OutFormat::Json | OutFormat::Csv => {
            format!("{}\n", serde_json::to_string_pretty(report).unwrap())
        }
        OutFormat::Pretty => {
            let mut out = format!(
                "# remainder checks for {} on {}\n",
                serde_json::to_string(&report.divisor).unwrap(),
                report.backend
            );
            for (i, c) in report.checks.iter().enumerate() {
                out.push_str(&format!(
                    "bipartition {}: {{{}}} | {{{}}}\n",
                    i + 1,
                    c.left.join(", "),
                    c.right.join(", ")
                ));
                out.push_str(&format!(
                    "  cardinality {} = {} x {} : {}\n",
                    c.cardinality,
                    c.cardinality_left,
                    c.cardinality_right,
                    pass_str(c.cardinality_product_ok)
                ));
                out.push_str(&format!(
                    "  reduction map bijective : {}\n",
                    pass_str(c.crt_bijection_ok)
                ));
                out.push_str(&format!(
                    "  units {} = {} x {} : {}\n",
                    c.units,
                    c.units_left,
                    c.units_right,
                    pass_str(c.unit_product_ok)
                ));
            }
            out.push_str(&format!("overall: {}\n", pass_str(report.all_pass)));
            out
        }
    }
}

fn pass_str(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "FAIL"
    }
}
