//! Inverse-totient fibers t_K(n) and histograms: enumeration of all
//! effective divisors with a prescribed (or bounded) totient.
//!
//! Every divisor with totient <= N is supported on places of norm <= N+1,
//! since a place P contributes at least N(P) - 1. Norm-2 places need care:
//! at multiplicity 1 they contribute a totient factor of exactly 1, so a
//! fiber enumeration first finds "core" divisors (norm >= 3 places at any
//! multiplicity, norm-2 places at multiplicity >= 2, every factor >= 2)
//! and then extends each core by all subsets of the unused norm-2 places
//! at multiplicity 1. The histogram enumerator advances a place index
//! instead, which makes the factor-1 branches terminate on their own.

use rayon::prelude::*;
use std::collections::BTreeMap;

use crate::divisors::Divisor;
use crate::error::{Error, Result};
use crate::places::{Backend, Place};

/// Counts n -> t_K(n) for 1 <= n <= bound, with optionally retained fibers.
#[derive(Debug, Clone, PartialEq)]
pub struct TotientHistogram {
    bound: u64,
    counts: Vec<u64>,
    fibers: Option<BTreeMap<u64, Vec<Divisor>>>,
}

impl TotientHistogram {
    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// t_K(n); zero outside 1..=bound.
    pub fn count(&self, n: u64) -> u64 {
        if n == 0 || n > self.bound {
            0
        } else {
            self.counts[n as usize]
        }
    }

    /// Total number of divisors enumerated, `sum_n t_K(n)`.
    pub fn total_divisors(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn fibers(&self) -> Option<&BTreeMap<u64, Vec<Divisor>>> {
        self.fibers.as_ref()
    }

    /// `sum_{n<=bound} t_K(n) n^-sigma`, the histogram's partial Dirichlet
    /// sum for T_K.
    pub fn dirichlet_partial_sum(&self, sigma: f64) -> f64 {
        let mut acc = 0.0;
        for (n, &c) in self.counts.iter().enumerate().skip(1) {
            if c > 0 {
                acc += c as f64 * (n as f64).powf(-sigma);
            }
        }
        acc
    }
}

/// The fiber t_K(n): every effective divisor with totient exactly n, in a
/// deterministic (norm, entry) order. The place table must reach norm
/// n + 1; `place_norm_cap` is the bound the table is built to.
pub fn inverse_totient(backend: &Backend, n: u64, place_norm_cap: u64) -> Result<Vec<Divisor>> {
    if n == 0 {
        return Err(Error::Usage("totient values start at 1".into()));
    }
    if place_norm_cap < n + 1 {
        return Err(Error::Usage(format!(
            "place table bound {place_norm_cap} is too small: the fiber of {n} needs every \
             place of norm <= {}",
            n + 1
        )));
    }
    let table = backend.place_table(place_norm_cap)?;
    let places = table.places();
    let norm_two: Vec<usize> = (0..places.len())
        .filter(|&i| places[i].norm() == 2)
        .collect();

    // Core divisors: every chosen factor is >= 2.
    let mut cores: Vec<Vec<(usize, u64)>> = Vec::new();
    let mut stack: Vec<(usize, u64)> = Vec::new();
    core_fibers(places, 0, n, &mut stack, &mut cores);

    // Extend each core by subsets of the norm-2 places it does not touch.
    let mut out: Vec<Divisor> = Vec::new();
    for core in &cores {
        let free: Vec<usize> = norm_two
            .iter()
            .copied()
            .filter(|i| !core.iter().any(|&(j, _)| j == *i))
            .collect();
        for mask in 0u64..(1u64 << free.len()) {
            let mut entries: Vec<(Place, u64)> =
                core.iter().map(|&(i, m)| (places[i].clone(), m)).collect();
            for (bit, &i) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    entries.push((places[i].clone(), 1));
                }
            }
            out.push(Divisor::from_entries(backend, entries)?);
        }
    }
    out.sort_by(|a, b| {
        let (na, nb) = (a.norm().unwrap_or(u128::MAX), b.norm().unwrap_or(u128::MAX));
        na.cmp(&nb).then_with(|| a.cmp(b))
    });
    debug_assert!(out.windows(2).all(|w| w[0] != w[1]), "fiber has duplicates");
    Ok(out)
}

/// Depth-first search over core divisors with totient exactly `target`.
/// Places are (norm, key)-sorted, so once N - 1 exceeds the remaining
/// target no later place fits either.
fn core_fibers(
    places: &[Place],
    start: usize,
    target: u64,
    stack: &mut Vec<(usize, u64)>,
    out: &mut Vec<Vec<(usize, u64)>>,
) {
    if target == 1 {
        out.push(stack.clone());
        return;
    }
    for j in start..places.len() {
        let n = places[j].norm();
        let (mut factor, mut mult) = if n == 2 {
            (2u128, 2u64) // norm-2 places enter cores at multiplicity >= 2
        } else {
            if n - 1 > target {
                break;
            }
            ((n - 1) as u128, 1u64)
        };
        while factor <= target as u128 {
            if (target as u128).is_multiple_of(factor) {
                stack.push((j, mult));
                core_fibers(places, j + 1, (target as u128 / factor) as u64, stack, out);
                stack.pop();
            }
            factor *= n as u128;
            mult += 1;
        }
    }
}

/// Builds the histogram of t_K(n) for n <= bound by recursive descent over
/// the norm-sorted places, pruning when the running totient exceeds the
/// bound. Counts merge by exact integer addition, so the parallel split
/// over top-level branches is deterministic.
pub fn totient_histogram(backend: &Backend, bound: u64) -> Result<TotientHistogram> {
    histogram_impl(backend, bound, false)
}

/// As [`totient_histogram`], additionally retaining every fiber (intended
/// for small bounds; runs sequentially).
pub fn totient_histogram_with_fibers(backend: &Backend, bound: u64) -> Result<TotientHistogram> {
    histogram_impl(backend, bound, true)
}

fn histogram_impl(backend: &Backend, bound: u64, with_fibers: bool) -> Result<TotientHistogram> {
    if bound == 0 {
        return Err(Error::Usage("histogram bound must be >= 1".into()));
    }
    let table = backend.place_table(bound + 1)?;
    let norms: Vec<u64> = table.places().iter().map(|p| p.norm()).collect();

    if with_fibers {
        let mut fibers: BTreeMap<u64, Vec<Divisor>> = BTreeMap::new();
        let mut stack: Vec<(usize, u64)> = Vec::new();
        collect_with_fibers(&norms, bound, 0, 1, &mut stack, &mut |stack, tot| {
            let entries = stack
                .iter()
                .map(|&(i, m)| (table.places()[i].clone(), m))
                .collect::<Vec<_>>();
            let d = Divisor::from_entries(backend, entries).expect("valid entries");
            fibers.entry(tot).or_default().push(d);
        });
        let mut counts = vec![0u64; bound as usize + 1];
        for (&n, list) in fibers.iter_mut() {
            list.sort_by(|a, b| {
                let (na, nb) = (a.norm().unwrap_or(u128::MAX), b.norm().unwrap_or(u128::MAX));
                na.cmp(&nb).then_with(|| a.cmp(b))
            });
            counts[n as usize] = list.len() as u64;
        }
        return Ok(TotientHistogram {
            bound,
            counts,
            fibers: Some(fibers),
        });
    }

    // Top-level branches: first supported place j at multiplicity r.
    let mut tasks: Vec<(usize, u64)> = Vec::new();
    for (j, &n) in norms.iter().enumerate() {
        if n > 2 && n - 1 > bound {
            break;
        }
        let mut factor = (n - 1) as u128;
        while factor <= bound as u128 {
            tasks.push((j, factor as u64));
            factor *= n as u128;
        }
    }

    let len = bound as usize + 1;
    let mut counts = if tasks.len() >= 64 && rayon::current_num_threads() > 1 {
        tasks
            .par_iter()
            .fold(
                || vec![0u64; len],
                |mut acc, &(j, c)| {
                    count_descendants(&norms, bound, j + 1, c, &mut acc);
                    acc
                },
            )
            .reduce(
                || vec![0u64; len],
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            )
    } else {
        let mut acc = vec![0u64; len];
        for &(j, c) in &tasks {
            count_descendants(&norms, bound, j + 1, c, &mut acc);
        }
        acc
    };
    counts[1] += 1; // the zero divisor, phi(0) = 1
    Ok(TotientHistogram {
        bound,
        counts,
        fibers: None,
    })
}

/// Registers `current` and every extension of it by places at index >=
/// `start` whose running totient stays <= bound.
fn count_descendants(norms: &[u64], bound: u64, start: usize, current: u64, counts: &mut [u64]) {
    counts[current as usize] += 1;
    for j in start..norms.len() {
        let n = norms[j];
        if n > 2 && current.saturating_mul(n - 1) > bound {
            break;
        }
        let mut factor = (n - 1) as u128;
        loop {
            let next = current as u128 * factor;
            if next > bound as u128 {
                break;
            }
            count_descendants(norms, bound, j + 1, next as u64, counts);
            factor *= n as u128;
        }
    }
}

/// Fiber-retaining variant of the descent.
fn collect_with_fibers(
    norms: &[u64],
    bound: u64,
    start: usize,
    current: u64,
    stack: &mut Vec<(usize, u64)>,
    register: &mut impl FnMut(&[(usize, u64)], u64),
) {
    register(stack, current);
    for j in start..norms.len() {
        let n = norms[j];
        if n > 2 && current.saturating_mul(n - 1) > bound {
            break;
        }
        let mut factor = (n - 1) as u128;
        let mut mult = 1u64;
        loop {
            let next = current as u128 * factor;
            if next > bound as u128 {
                break;
            }
            stack.push((j, mult));
            collect_with_fibers(norms, bound, j + 1, next as u64, stack, register);
            stack.pop();
            factor *= n as u128;
            mult += 1;
        }
    }
}

/// One row of a mean-value sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSweepRow {
    pub m: u64,
    pub partial_sum: u64,
    pub partial_average: f64,
    pub relative_gap: f64,
}

/// The Cesàro averages A_M = (1/M) sum_{n<=M} t_K(n) against the
/// mean-value constant.
#[derive(Debug, Clone, PartialEq)]
pub struct MeanSweep {
    pub backend: String,
    pub bound: u64,
    pub target: f64,
    pub rows: Vec<MeanSweepRow>,
    pub final_average: f64,
    /// max - min of A_M over the trailing half M in [bound/2, bound];
    /// diagnostic for backends where convergence is not asserted.
    pub oscillation: f64,
}

impl MeanSweep {
    /// The pinned CSV shape: M, partial_sum, partial_average,
    /// target_constant, relative_gap with 15 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("M,partial_sum,partial_average,target_constant,relative_gap\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.m,
                row.partial_sum,
                format_f64(row.partial_average),
                format_f64(self.target),
                format_f64(row.relative_gap),
            ));
        }
        out
    }
}

/// 15 significant digits, '.' decimal separator, locale-independent.
pub fn format_f64(x: f64) -> String {
    format!("{x:.14e}")
}

/// Runs the histogram to `bound` and produces the partial-average sweep.
/// `full_rows` keeps every M; otherwise M <= 100, round values of M, and
/// the final M are kept (the deterministic logarithmic subsample).
pub fn empirical_mean(backend: &Backend, bound: u64, full_rows: bool) -> Result<MeanSweep> {
    let hist = totient_histogram(backend, bound)?;
    let target = super::residue::mean_value_constant(backend)?;
    let mut rows = Vec::new();
    let mut sum = 0u64;
    let mut min_tail = f64::INFINITY;
    let mut max_tail = f64::NEG_INFINITY;
    for m in 1..=bound {
        sum += hist.count(m);
        let avg = sum as f64 / m as f64;
        if m >= bound / 2 {
            min_tail = min_tail.min(avg);
            max_tail = max_tail.max(avg);
        }
        if full_rows || keep_row(m, bound) {
            rows.push(MeanSweepRow {
                m,
                partial_sum: sum,
                partial_average: avg,
                relative_gap: (avg - target) / target,
            });
        }
    }
    let final_average = sum as f64 / bound as f64;
    Ok(MeanSweep {
        backend: backend.to_string(),
        bound,
        target,
        rows,
        final_average,
        oscillation: max_tail - min_tail,
    })
}

/// Subsample rule: everything up to 100, then multiples of the power of
/// ten two orders below M, plus the final row.
fn keep_row(m: u64, bound: u64) -> bool {
    if m == bound || m <= 100 {
        return true;
    }
    let digits = m.ilog10();
    let step = 10u64.pow(digits - 1);
    m.is_multiple_of(step)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_fiber_of_one() {
        // t(1) = 2: the divisors of 1 and 2.
        let fiber = inverse_totient(&Backend::Rational, 1, 2).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber[0].is_zero());
        assert_eq!(fiber[1].norm().unwrap(), 2);
    }

    #[test]
    fn classical_fiber_of_four() {
        let fiber = inverse_totient(&Backend::Rational, 4, 5).unwrap();
        let norms: Vec<u128> = fiber.iter().map(|d| d.norm().unwrap()).collect();
        assert_eq!(norms, vec![5, 8, 10, 12]);
        for d in &fiber {
            assert_eq!(d.totient().unwrap(), 4);
        }
    }

    #[test]
    fn odd_fibers_above_one_are_empty() {
        assert!(inverse_totient(&Backend::Rational, 3, 4)
            .unwrap()
            .is_empty());
        assert!(inverse_totient(&Backend::Rational, 5, 6)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn table_bound_checked() {
        assert!(matches!(
            inverse_totient(&Backend::Rational, 4, 4),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn p1_f2_fiber_of_one_is_subset_lattice() {
        // Three norm-2 places (inf, t, t+1) at multiplicity <= 1: 8 divisors.
        let b = Backend::p1(2).unwrap();
        let fiber = inverse_totient(&b, 1, 2).unwrap();
        assert_eq!(fiber.len(), 8);
        for d in &fiber {
            assert_eq!(d.totient().unwrap(), 1);
        }
    }

    #[test]
    fn histogram_matches_classical_counts() {
        let hist = totient_histogram(&Backend::Rational, 6).unwrap();
        assert_eq!(hist.count(1), 2); // {1, 2}
        assert_eq!(hist.count(2), 3); // {3, 4, 6}
        assert_eq!(hist.count(3), 0);
        assert_eq!(hist.count(4), 4); // {5, 8, 10, 12}
        assert_eq!(hist.count(5), 0);
        assert_eq!(hist.count(6), 4); // {7, 9, 14, 18}
    }

    #[test]
    fn histogram_agrees_with_fibers() {
        for backend in [Backend::Rational, Backend::p1(2).unwrap()] {
            let hist = totient_histogram(&backend, 50).unwrap();
            for n in 1..=50u64 {
                let fiber = inverse_totient(&backend, n, 51).unwrap();
                assert_eq!(
                    hist.count(n),
                    fiber.len() as u64,
                    "backend {backend}, n = {n}"
                );
            }
        }
    }

    #[test]
    fn fiber_retention_is_consistent() {
        let hist = totient_histogram_with_fibers(&Backend::Rational, 20).unwrap();
        let fibers = hist.fibers().unwrap();
        for (&n, list) in fibers {
            assert_eq!(hist.count(n), list.len() as u64);
            for d in list {
                assert_eq!(d.totient().unwrap() as u64, n);
            }
        }
        // And matches the counts-only run.
        let plain = totient_histogram(&Backend::Rational, 20).unwrap();
        for n in 1..=20 {
            assert_eq!(plain.count(n), hist.count(n));
        }
    }

    #[test]
    fn p1_histogram_small() {
        let hist = totient_histogram(&Backend::p1(2).unwrap(), 1).unwrap();
        assert_eq!(hist.count(1), 8);
    }

    #[test]
    fn mean_sweep_small_value() {
        // A_6 = (t(1)+...+t(6))/6 = (2+3+0+4+0+4)/6 = 13/6.
        let sweep = empirical_mean(&Backend::Rational, 6, true).unwrap();
        assert_eq!(sweep.rows.len(), 6);
        assert!((sweep.final_average - 13.0 / 6.0).abs() < 1e-15);
        assert_eq!(sweep.rows[5].partial_sum, 13);
    }

    #[test]
    fn sweep_csv_is_deterministic() {
        let a = empirical_mean(&Backend::p1(2).unwrap(), 200, false).unwrap();
        let b = empirical_mean(&Backend::p1(2).unwrap(), 200, false).unwrap();
        assert_eq!(a.to_csv(), b.to_csv());
        assert!(a.to_csv().starts_with("M,partial_sum,partial_average"));
    }

    #[test]
    fn histogram_parallel_matches_sequential() {
        // The parallel split merges exact integers; force both paths.
        let seq = {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(1)
                .build()
                .unwrap();
            pool.install(|| totient_histogram(&Backend::Rational, 500).unwrap())
        };
        let par = totient_histogram(&Backend::Rational, 500).unwrap();
        assert_eq!(seq, par);
    }
}
