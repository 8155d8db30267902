//! Truncated Euler products for ζ_K, f_K and T_K with rigorous tail bounds.
//!
//! Products run over places of norm <= B in ascending (norm, key) order.
//! A small prefix of factors (those possibly far from 1) multiplies in
//! directly; the rest accumulates principal-branch logarithms, so results
//! are bit-reproducible across runs. The reported `tail_bound` bounds the
//! modulus of the logarithm gap between the truncated and the full
//! product and, through it, the absolute gap |exact - value|; see
//! [`EvalResult`].
//!
//! Tail majorants per backend, for exponent a > 1:
//!   Q:   #places of norm <= x is <= x, so sum_{N>B} N^-a <= B^(1-a)/(a-1);
//!   Qi:  at most two places per rational prime, twice the Q bound;
//!   P^1: a_d <= q^d/d + 1, summed geometrically over degrees;
//!   curve of genus g: a_d <= (q^d + 1 + 2g q^(d/2))/d (Weil).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::places::{max_degree_for_bound, Backend};

/// Truncation caps for Euler-product evaluation.
#[derive(Debug, Clone, Copy)]
pub struct EvalCaps {
    /// Largest place norm any product is allowed to enumerate to.
    pub max_norm_bound: u64,
}

impl Default for EvalCaps {
    fn default() -> Self {
        EvalCaps {
            max_norm_bound: 1 << 28,
        }
    }
}

/// Smallest eps any evaluation accepts; below this double precision can no
/// longer honour the reported bounds.
pub const MIN_EPS: f64 = 1e-12;

/// A complex value together with a rigorous truncation bound.
///
/// `tail_bound` dominates both truncation readings at once: it is at least
/// the log-gap bound g on |log(full) - log(truncated)| and at least the
/// implied value gap |truncated|·(e^g - 1) >= |full - truncated|, so
/// `|exact - value| <= tail_bound` always holds.
#[derive(Debug, Clone, Copy)]
pub struct EvalResult {
    pub value: Complex64,
    pub tail_bound: f64,
    /// Number of places the truncated product actually used.
    pub places_used: u64,
    /// The raw log-gap bound; products combine by adding these.
    log_gap: f64,
}

impl EvalResult {
    fn from_raw(value: Complex64, log_gap: f64, places_used: u64) -> EvalResult {
        let tail_bound = log_gap.max(value.norm() * log_gap.exp_m1());
        EvalResult {
            value,
            tail_bound,
            places_used,
            log_gap,
        }
    }

    /// The pinned JSON shape: {value_re, value_im, tail_bound, places_used}.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "value_re": self.value.re,
            "value_im": self.value.im,
            "tail_bound": self.tail_bound,
            "places_used": self.places_used,
        })
    }
}

/// Geometric tail `sum_{d >= d0} q^(d e)` for e < 0.
fn geometric_tail(q: f64, e: f64, d0: u32) -> f64 {
    let r = q.powf(e);
    r.powi(d0 as i32) / (1.0 - r)
}

/// Majorant for `sum over places of norm > bound of norm^-a`, a > 1.
fn norm_tail_majorant(backend: &Backend, a: f64, bound: u64) -> f64 {
    debug_assert!(a > 1.0);
    let b = bound.max(1) as f64;
    match backend {
        Backend::Rational => b.powf(1.0 - a) / (a - 1.0),
        Backend::ImagQuadratic { .. } => 2.0 * b.powf(1.0 - a) / (a - 1.0),
        Backend::P1 { q } => function_field_tail(*q, 0, a, bound),
        Backend::Curve { spec } => function_field_tail(spec.q(), spec.genus(), a, bound),
    }
}

/// Tail over degrees beyond the bound, using the per-degree place count
/// majorant `(q^d + 1 + 2 g q^(d/2)) / d <= (...)/d0` (for P^1 the +1
/// covers the infinity place at degree 1).
fn function_field_tail(q: u64, genus: u32, a: f64, bound: u64) -> f64 {
    let d0 = max_degree_for_bound(q, bound) + 1;
    let qf = q as f64;
    (geometric_tail(qf, 1.0 - a, d0)
        + geometric_tail(qf, -a, d0)
        + 2.0 * genus as f64 * geometric_tail(qf, 0.5 - a, d0))
        / d0 as f64
}

/// Log-gap bound for the zeta product truncated at `bound`, at Re s = sigma.
fn zeta_tail_bound(backend: &Backend, sigma: f64, bound: u64) -> f64 {
    // |log(1-z)| <= |z| / (1 - |z|) with |z| <= (bound+1)^-sigma.
    let z_max = ((bound + 1) as f64).powf(-sigma);
    norm_tail_majorant(backend, sigma, bound) / (1.0 - z_max)
}

/// Majorant for `sum over places of norm > bound of |s| (norm-1)^-(sigma+1)`.
fn f_sum_majorant(backend: &Backend, sigma: f64, s_abs: f64, bound: u64) -> f64 {
    let a = sigma + 1.0;
    match backend {
        // sum_{n > B} (n-1)^-a = sum_{m >= B} m^-a <= (B-1)^(1-a)/(a-1),
        // shifted so it stays valid down to B = 2.
        Backend::Rational => s_abs * ((bound.max(2) - 1) as f64).powf(1.0 - a) / (a - 1.0),
        Backend::ImagQuadratic { .. } => {
            2.0 * s_abs * ((bound.max(2) - 1) as f64).powf(1.0 - a) / (a - 1.0)
        }
        // Function fields: every excluded norm is >= bound+1, so
        // (N-1)^-a = N^-a (1 - 1/N)^-a <= N^-a ((B+1)/B)^a.
        _ => {
            let b = bound.max(2) as f64;
            s_abs * ((b + 1.0) / b).powf(a) * norm_tail_majorant(backend, a, bound)
        }
    }
}

/// Log-gap bound for the f_K product truncated at `bound`.
fn f_tail_bound(backend: &Backend, sigma: f64, s_abs: f64, bound: u64) -> f64 {
    // Largest excluded |F_P - 1| is at the first norm beyond the bound.
    let t_max = s_abs * (bound.max(2) as f64).powf(-sigma - 1.0);
    if t_max >= 0.5 {
        return f64::INFINITY; // bound too small for the log-space estimate
    }
    f_sum_majorant(backend, sigma, s_abs, bound) / (1.0 - t_max)
}

/// Smallest bound (>= 2) whose tail estimate is <= eps, or a cap error
/// reporting the best bound achievable at the cap.
fn choose_bound(
    tail_at: impl Fn(u64) -> f64,
    eps: f64,
    caps: &EvalCaps,
    what: &str,
) -> Result<u64> {
    let cap = caps.max_norm_bound.max(2);
    let mut bound = 2u64;
    while tail_at(bound) > eps {
        if bound >= cap {
            return Err(Error::Cap(format!(
                "{what}: truncation to eps = {eps:.3e} needs a norm bound beyond the cap {cap}; \
                 best tail bound achievable at the cap is {:.6e}",
                tail_at(cap)
            )));
        }
        bound = bound.saturating_mul(2).min(cap);
    }
    // Binary refine to the smallest satisfying bound.
    let mut lo = bound / 2;
    let mut hi = bound;
    while lo + 1 < hi {
        let mid = lo + (hi - lo) / 2;
        if tail_at(mid) <= eps {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

fn validate_eps(eps: f64) -> Result<()> {
    if eps.is_nan() || eps < MIN_EPS {
        return Err(Error::Domain(format!(
            "eps must be >= {MIN_EPS:.0e} (double precision), got {eps:.3e}"
        )));
    }
    Ok(())
}

/// `x^(-s)` for real x >= 1 via the principal branch.
fn inv_pow(x: f64, s: Complex64) -> Complex64 {
    (-s * x.ln()).exp()
}

/// The per-place factor of f_K:
/// `F_P(s) = 1 + (N-1)^-s - N^-s` (the (N-1) term is exactly 1 at N = 2).
pub fn f_factor(norm: u64, s: Complex64) -> Complex64 {
    debug_assert!(norm >= 2);
    Complex64::new(1.0, 0.0) + inv_pow((norm - 1) as f64, s) - inv_pow(norm as f64, s)
}

/// Evaluates a product of per-norm factors over all places of norm <=
/// bound, in ascending norm order. Factors within 0.5 of 1 accumulate as
/// principal-branch logarithms; the finite prefix of large factors
/// multiplies in directly.
fn product_over_places(
    backend: &Backend,
    bound: u64,
    factor: impl Fn(u64) -> Complex64,
) -> Result<(Complex64, u64)> {
    let mut direct = Complex64::new(1.0, 0.0);
    let mut log_sum = Complex64::new(0.0, 0.0);
    let mut places: u64 = 0;
    backend.for_each_norm(bound, |norm, count| {
        places += count;
        let f = factor(norm);
        if (f - 1.0).norm() < 0.5 {
            log_sum += (count as f64) * f.ln();
        } else {
            for _ in 0..count {
                direct *= f;
            }
        }
    })?;
    Ok((direct * log_sum.exp(), places))
}

/// Evaluates with the log-gap target `eps`, then, if the value-gap side of
/// the reported bound still exceeds eps (|value| > 1), re-targets the log
/// gap at eps/|value| and re-evaluates. Doubles as a safety loop until the
/// combined tail bound fits or the cap is hit.
fn eval_to_eps(
    gap_at: impl Fn(u64) -> f64,
    eval_at: impl Fn(u64) -> Result<EvalResult>,
    eps: f64,
    caps: &EvalCaps,
    what: &str,
) -> Result<EvalResult> {
    let mut bound = choose_bound(&gap_at, eps, caps, what)?;
    let mut result = eval_at(bound)?;
    if result.tail_bound <= eps {
        return Ok(result);
    }
    let target = (eps / (result.value.norm() * 1.05)).ln_1p();
    bound = choose_bound(&gap_at, target, caps, what)?;
    loop {
        result = eval_at(bound)?;
        if result.tail_bound <= eps {
            return Ok(result);
        }
        if bound >= caps.max_norm_bound {
            return Err(Error::Cap(format!(
                "{what}: value-gap bound {:.3e} still exceeds eps = {eps:.3e} at the cap",
                result.tail_bound
            )));
        }
        bound = bound.saturating_mul(2).min(caps.max_norm_bound);
    }
}

/// ζ_K(s) as the truncated Euler product `prod_P (1 - N(P)^-s)^-1` with the
/// truncation point chosen so the reported tail bound is <= eps.
/// Requires Re s > 1.
pub fn zeta_eval(backend: &Backend, s: Complex64, eps: f64, caps: &EvalCaps) -> Result<EvalResult> {
    validate_eps(eps)?;
    let sigma = s.re;
    if sigma <= 1.0 {
        return Err(Error::Domain(format!(
            "zeta product converges for Re s > 1, got sigma = {sigma}"
        )));
    }
    eval_to_eps(
        |b| zeta_tail_bound(backend, sigma, b),
        |b| zeta_eval_at_bound(backend, s, b),
        eps,
        caps,
        "zeta",
    )
}

/// ζ_K product truncated at an explicit norm bound.
pub fn zeta_eval_at_bound(backend: &Backend, s: Complex64, bound: u64) -> Result<EvalResult> {
    let sigma = s.re;
    if sigma <= 1.0 {
        return Err(Error::Domain(format!(
            "zeta product converges for Re s > 1, got sigma = {sigma}"
        )));
    }
    let one = Complex64::new(1.0, 0.0);
    let (value, places_used) =
        product_over_places(backend, bound, |n| one / (one - inv_pow(n as f64, s)))?;
    Ok(EvalResult::from_raw(
        value,
        zeta_tail_bound(backend, sigma, bound),
        places_used,
    ))
}

/// f_K(s) as the truncated product of [`f_factor`]s; holomorphic for
/// Re s > 0, which is all this evaluator requires.
pub fn f_eval(backend: &Backend, s: Complex64, eps: f64, caps: &EvalCaps) -> Result<EvalResult> {
    validate_eps(eps)?;
    let sigma = s.re;
    if sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "f_K converges for Re s > 0, got sigma = {sigma}"
        )));
    }
    let s_abs = s.norm();
    eval_to_eps(
        |b| f_tail_bound(backend, sigma, s_abs, b),
        |b| f_eval_at_bound(backend, s, b),
        eps,
        caps,
        "f",
    )
}

/// f_K product truncated at an explicit norm bound. The bound must be
/// large enough that the first excluded factor satisfies |F_P - 1| < 1/2,
/// or no finite tail estimate exists.
pub fn f_eval_at_bound(backend: &Backend, s: Complex64, bound: u64) -> Result<EvalResult> {
    let sigma = s.re;
    if sigma <= 0.0 {
        return Err(Error::Domain(format!(
            "f_K converges for Re s > 0, got sigma = {sigma}"
        )));
    }
    let tail = f_tail_bound(backend, sigma, s.norm(), bound);
    if !tail.is_finite() {
        return Err(Error::Cap(format!(
            "norm bound {bound} is too small for a finite tail estimate at s = {s}"
        )));
    }
    let (value, places_used) = product_over_places(backend, bound, |n| f_factor(n, s))?;
    Ok(EvalResult::from_raw(value, tail, places_used))
}

/// T_K(s) = ζ_K(s) · f_K(s) for Re s > 1. Log gaps of the factors add; the
/// eps budget is split between them and re-targeted once against the
/// product's magnitude.
pub fn totient_zeta_eval(
    backend: &Backend,
    s: Complex64,
    eps: f64,
    caps: &EvalCaps,
) -> Result<EvalResult> {
    validate_eps(eps)?;
    let combine = |zeta: &EvalResult, f: &EvalResult| {
        EvalResult::from_raw(
            zeta.value * f.value,
            zeta.log_gap + f.log_gap,
            zeta.places_used.max(f.places_used),
        )
    };
    let zeta = zeta_eval(backend, s, eps / 2.0, caps)?;
    let f = f_eval(backend, s, eps / 2.0, caps)?;
    let first = combine(&zeta, &f);
    if first.tail_bound <= eps {
        return Ok(first);
    }
    // Re-target against the product magnitude. The factors' truncation
    // costs are asymmetric (the f product converges one power faster), so
    // try a handful of gap splits and take the first that fits the cap.
    let total_gap = ((eps / (first.value.norm() * 1.05)).ln_1p()).max(f64::MIN_POSITIVE);
    let sigma = s.re;
    let s_abs = s.norm();
    for zeta_share in [0.5, 0.9, 0.99, 0.1, 0.01] {
        let zb = choose_bound(
            |b| zeta_tail_bound(backend, sigma, b),
            total_gap * zeta_share,
            caps,
            "totient-zeta",
        );
        let fb = choose_bound(
            |b| f_tail_bound(backend, sigma, s_abs, b),
            total_gap * (1.0 - zeta_share),
            caps,
            "totient-zeta",
        );
        let (Ok(zb), Ok(fb)) = (zb, fb) else { continue };
        let result = combine(
            &zeta_eval_at_bound(backend, s, zb)?,
            &f_eval_at_bound(backend, s, fb)?,
        );
        if result.tail_bound <= eps {
            return Ok(result);
        }
    }
    Err(Error::Cap(format!(
        "totient-zeta: eps = {eps:.3e} is not reachable under the norm-bound cap {}",
        caps.max_norm_bound
    )))
}

/// Exact rational-function evaluation ζ_K(s) = Z(q^-s) for function-field
/// backends, with `Z(T) = L(T) / ((1-T)(1-qT))`.
pub fn zeta_closed_form(backend: &Backend, s: Complex64) -> Result<Complex64> {
    let (q, l): (u64, &[i128]) = match backend {
        Backend::P1 { q } => (*q, &[1]),
        Backend::Curve { spec } => (spec.q(), spec.l_coeffs()),
        _ => {
            return Err(Error::Domain(format!(
                "no closed-form zeta for backend {backend}"
            )))
        }
    };
    let t = inv_pow(q as f64, s);
    let one = Complex64::new(1.0, 0.0);
    let denom = (one - t) * (one - (q as f64) * t);
    if denom.norm() < 1e-14 {
        return Err(Error::Pole(format!(
            "s = {s} hits a pole of the rational zeta function (q^-s = 1 or 1/q)"
        )));
    }
    let mut num = Complex64::new(0.0, 0.0);
    for &c in l.iter().rev() {
        num = num * t + (c as f64);
    }
    Ok(num / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn riemann_zeta_two_matches_pi_squared_over_six() {
        let r = zeta_eval(&Backend::Rational, c(2.0), 1e-7, &EvalCaps::default()).unwrap();
        assert_eq!(r.value.im, 0.0);
        let target = PI * PI / 6.0;
        assert!(
            (r.value.re - target).abs() <= r.tail_bound,
            "got {} vs {target}, tail bound {}",
            r.value.re,
            r.tail_bound
        );
        assert!(r.tail_bound <= 1e-7);
    }

    #[test]
    fn p1_zeta_closed_form_values() {
        let b = Backend::p1(2).unwrap();
        // 1/((1-T)(1-2T)) at T = 1/4 and 1/8.
        let z2 = zeta_closed_form(&b, c(2.0)).unwrap();
        assert!((z2.re - 8.0 / 3.0).abs() < 1e-12 && z2.im.abs() < 1e-12);
        let z3 = zeta_closed_form(&b, c(3.0)).unwrap();
        assert!((z3.re - 32.0 / 21.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_poles() {
        let b = Backend::p1(2).unwrap();
        assert!(matches!(zeta_closed_form(&b, c(1.0)), Err(Error::Pole(_))));
        assert!(matches!(zeta_closed_form(&b, c(0.0)), Err(Error::Pole(_))));
        assert!(zeta_closed_form(&Backend::Rational, c(2.0)).is_err());
    }

    #[test]
    fn product_agrees_with_closed_form_within_tail() {
        for q in [2u64, 3, 5] {
            let b = Backend::p1(q).unwrap();
            for s in [2.0, 3.0, 6.0] {
                let eval = zeta_eval(&b, c(s), 1e-8, &EvalCaps::default()).unwrap();
                let exact = zeta_closed_form(&b, c(s)).unwrap();
                let diff = (eval.value - exact).norm();
                assert!(
                    diff <= eval.tail_bound,
                    "q={q} s={s}: diff {diff} > tail {}",
                    eval.tail_bound
                );
            }
        }
    }

    #[test]
    fn real_s_gives_real_value_above_one() {
        for backend in [
            Backend::Rational,
            Backend::imag_quadratic(-4).unwrap(),
            Backend::p1(3).unwrap(),
        ] {
            // At sigma = 1.5 the rational tail shrinks like B^-1/2, so the
            // reachable eps under the default cap is modest.
            let r = zeta_eval(&backend, c(1.5), 1e-3, &EvalCaps::default()).unwrap();
            assert_eq!(r.value.im, 0.0, "{backend}");
            assert!(r.value.re > 1.0, "{backend}");
        }
    }

    #[test]
    fn f_factor_values() {
        let f2 = f_factor(2, c(1.0));
        assert!((f2 - c(1.5)).norm() < 1e-15); // 1 + 1 - 1/2
        let f3 = f_factor(3, c(1.0));
        assert!((f3 - c(7.0 / 6.0)).norm() < 1e-15); // 1 + 1/2 - 1/3
    }

    #[test]
    fn empty_product_is_one_with_reported_tail() {
        let r = f_eval_at_bound(&Backend::Rational, c(1.0), 1).unwrap();
        assert_eq!(r.value, c(1.0));
        assert_eq!(r.places_used, 0);
        assert!(r.tail_bound.is_finite() && r.tail_bound > 0.0);
    }

    #[test]
    fn f_eval_p1_matches_zeta_combination() {
        // f_K(1) = ζ_K(2)ζ_K(3)/ζ_K(6) = (8/3)(32/21)/(2048/1953) = 31/8.
        let b = Backend::p1(2).unwrap();
        let f = f_eval(&b, c(1.0), 1e-8, &EvalCaps::default()).unwrap();
        let combo: f64 = (8.0 / 3.0) * (32.0 / 21.0) / (2048.0 / 1953.0);
        assert!((combo - 31.0 / 8.0).abs() < 1e-12);
        assert!((f.value.re - combo).abs() <= f.tail_bound + 1e-12);
    }

    #[test]
    fn totient_zeta_is_product_of_parts() {
        // Both routes approximate T_K(2); truncation points differ, so the
        // values agree within the combined reported bounds.
        let b = Backend::Rational;
        let t = totient_zeta_eval(&b, c(2.0), 1e-6, &EvalCaps::default()).unwrap();
        let z = zeta_eval(&b, c(2.0), 5e-7, &EvalCaps::default()).unwrap();
        let f = f_eval(&b, c(2.0), 5e-7, &EvalCaps::default()).unwrap();
        let product_tail = z.value.norm() * f.tail_bound + f.value.norm() * z.tail_bound;
        assert!((t.value - z.value * f.value).norm() <= t.tail_bound + product_tail);
        assert!(t.tail_bound <= 1e-6);
    }

    #[test]
    fn soundness_increasing_bound_moves_less_than_tail() {
        for backend in [
            Backend::Rational,
            Backend::p1(2).unwrap(),
            Backend::p1(3).unwrap(),
        ] {
            for s in [1.5, 2.0, 3.0] {
                let mut previous: Option<EvalResult> = None;
                for bound in [100u64, 1_000, 10_000] {
                    let r = zeta_eval_at_bound(&backend, c(s), bound).unwrap();
                    if let Some(p) = previous {
                        let moved = (r.value - p.value).norm();
                        assert!(
                            moved <= p.tail_bound,
                            "{backend} s={s}: moved {moved} > tail {}",
                            p.tail_bound
                        );
                    }
                    previous = Some(r);
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        let caps = EvalCaps::default();
        assert!(matches!(
            zeta_eval(&Backend::Rational, c(1.0), 1e-6, &caps),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            f_eval(&Backend::Rational, Complex64::new(-0.5, 1.0), 1e-6, &caps),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            zeta_eval(&Backend::Rational, c(2.0), 1e-13, &caps),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn cap_error_reports_best_effort() {
        let caps = EvalCaps {
            max_norm_bound: 1000,
        };
        let err = zeta_eval(&Backend::Rational, c(1.2), 1e-9, &caps).unwrap_err();
        match err {
            Error::Cap(msg) => assert!(msg.contains("best tail bound"), "{msg}"),
            other => panic!("expected cap error, got {other:?}"),
        }
    }

    #[test]
    fn quadratic_zeta_factors_absorb_splitting() {
        // ζ_{Q(i)}(2) = ζ(2) L(2, chi_-4); check the product form against a
        // direct L-series partial sum (alternating, fast):
        let b = Backend::imag_quadratic(-4).unwrap();
        let z = zeta_eval(&b, c(2.0), 1e-6, &EvalCaps::default()).unwrap();
        let zeta2 = PI * PI / 6.0;
        let mut l = 0.0;
        for n in (1..200_000u64).step_by(2) {
            let sign = if n % 4 == 1 { 1.0 } else { -1.0 };
            l += sign / (n as f64 * n as f64);
        }
        let expect = zeta2 * l;
        assert!(
            (z.value.re - expect).abs() <= z.tail_bound + 1e-9,
            "{} vs {expect}",
            z.value.re
        );
    }
}
