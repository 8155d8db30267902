//! The built-in cross-check battery: quick versions of the crate's
//! oracle-equivalence, closed-form and lemma-bound checks, deterministic
//! under an explicit seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gft::analytic::{empirical_mean, f_factor, zeta_closed_form, zeta_eval, EvalCaps};
use gft::divisors::{totient_brute, verify_remainder_isomorphism, Divisor, OracleCaps};
use gft::error::Result;
use gft::ffpoly::{count_monic_irreducibles, enumerate_monic_irreducibles, PrimeField};
use gft::places::Backend;

pub fn run(seed: u64) -> Result<(String, bool)> {
    let mut out = String::new();
    let mut all_ok = true;
    let mut check = |name: &str, ok: bool, out: &mut String| {
        out.push_str(&format!("{}  {}\n", if ok { "PASS" } else { "FAIL" }, name));
        all_ok &= ok;
    };

    // Möbius counts vs exhaustive enumeration.
    let mut ok = true;
    for p in [2u64, 3] {
        let field = PrimeField::new(p)?;
        let listed = enumerate_monic_irreducibles(field, 4);
        for d in 1..=4u32 {
            let n = listed
                .iter()
                .filter(|f| f.degree() == Some(d as usize))
                .count() as u64;
            ok &= n == count_monic_irreducibles(field, d)?;
        }
    }
    check(
        "monic irreducible counts (Möbius vs exhaustive, p=2,3, d<=4)",
        ok,
        &mut out,
    );

    // Product formula vs quotient-ring oracle.
    let caps = OracleCaps::default();
    let mut ok = true;
    for n in 1..=300u128 {
        let d = Divisor::from_integer(n)?;
        ok &= d.totient()? == totient_brute(&d, &caps)?;
    }
    check(
        "totient product formula vs unit counting (Z, norms <= 300)",
        ok,
        &mut out,
    );

    // Zeta Euler product vs rational closed form.
    let b = Backend::p1(2)?;
    let s = Complex64::new(2.0, 0.0);
    let eval = zeta_eval(&b, s, 1e-8, &EvalCaps::default())?;
    let exact = zeta_closed_form(&b, s)?;
    check(
        "P1/F_2 Euler product vs closed form at s=2",
        (eval.value - exact).norm() <= eval.tail_bound,
        &mut out,
    );

    // Per-place bound |F_P(s) - 1| <= |s| (N-1)^(-sigma-1) on random s.
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = true;
    for _ in 0..50 {
        let s = Complex64::new(rng.gen_range(0.01..=3.0), rng.gen_range(-20.0..=20.0));
        for norm in [2u64, 3, 4, 5, 9, 25, 97] {
            let lhs = (f_factor(norm, s) - 1.0).norm();
            let rhs = s.norm() * ((norm - 1) as f64).powf(-s.re - 1.0);
            ok &= lhs <= rhs * (1.0 + 1e-12);
        }
    }
    check(
        "per-place bound |F_P(s)-1| <= |s|(N-1)^(-s.re-1) (seeded samples)",
        ok,
        &mut out,
    );

    // Remainder-theorem checks on Z/12.
    let report = verify_remainder_isomorphism(&Divisor::from_integer(12)?, &caps, true)?;
    check(
        "remainder isomorphism checks on Z/12",
        report.all_pass,
        &mut out,
    );

    // Empirical mean against the constant, small window.
    let sweep = empirical_mean(&Backend::Rational, 2000, false)?;
    check(
        "empirical totient mean within 1% of the constant (Q, N=2000)",
        (sweep.final_average - sweep.target).abs() / sweep.target < 0.01,
        &mut out,
    );

    out.push_str(if all_ok {
        "selftest: all checks passed\n"
    } else {
        "selftest: FAILURES\n"
    });
    Ok((out, all_ok))
}
