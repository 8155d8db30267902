//! Exact residues of ζ_K at s = 1 and the mean-value constant
//! ρ_K · ζ_K(2) ζ_K(3) / ζ_K(6).

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::arith::gcd_u64;
use crate::error::Result;
use crate::places::{class_number, unit_count, Backend};

use super::euler::zeta_closed_form;
use super::series::{l_series_terms_for, quadratic_l_series, riemann_zeta_series};

/// Symbolic form of the residue: a rational, a rational multiple of
/// π/√|d|, or a rational multiple of 1/ln q.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueExact {
    /// num/den (the rational backend has residue 1).
    Rational { num: u64, den: u64 },
    /// (num/den) · π / √radicand; perfect-square parts of |d| are folded
    /// into the denominator, so radicand is squarefree (1 for d = -4).
    PiOverSqrt { num: u64, den: u64, radicand: u64 },
    /// (num/den) / ln q.
    OverLogQ { num: i64, den: u64, q: u64 },
}

impl fmt::Display for ResidueExact {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueExact::Rational { num, den } => {
                if *den == 1 {
                    write!(f, "{num}")
                } else {
                    write!(f, "{num}/{den}")
                }
            }
            ResidueExact::PiOverSqrt { num, den, radicand } => {
                if *num != 1 {
                    write!(f, "{num}")?;
                }
                write!(f, "π")?;
                match (den, radicand) {
                    (1, 1) => Ok(()),
                    (d, 1) => write!(f, "/{d}"),
                    (1, r) => write!(f, "/√{r}"),
                    (d, r) => write!(f, "/({d}·√{r})"),
                }
            }
            ResidueExact::OverLogQ { num, den, q } => {
                if *den == 1 {
                    write!(f, "{num}/ln {q}")
                } else {
                    write!(f, "{num}/({den}·ln {q})")
                }
            }
        }
    }
}

/// The residue ρ_K with both its exact form and a floating evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidueValue {
    pub exact: ResidueExact,
    pub value: f64,
}

/// ρ_K, the residue of ζ_K at s = 1:
/// 1 for Q; 2πh/(w√|d|) for an imaginary quadratic field (class number h,
/// w roots of unity); L(1/q)·q/((q-1)·ln q) for a function field.
pub fn residue(backend: &Backend) -> Result<ResidueValue> {
    match backend {
        Backend::Rational => Ok(ResidueValue {
            exact: ResidueExact::Rational { num: 1, den: 1 },
            value: 1.0,
        }),
        Backend::ImagQuadratic { d } => {
            let h = class_number(*d)?;
            let w = unit_count(*d);
            let abs_d = d.unsigned_abs();
            // 2h/w times pi/sqrt(|d|); |d| = 4m folds a factor 2 into den.
            let (mut num, mut den) = (2 * h, w);
            let radicand = if abs_d % 4 == 0 {
                den *= 2;
                abs_d / 4
            } else {
                abs_d
            };
            let g = gcd_u64(num, den);
            num /= g;
            den /= g;
            Ok(ResidueValue {
                exact: ResidueExact::PiOverSqrt { num, den, radicand },
                value: num as f64 * PI / (den as f64 * (radicand as f64).sqrt()),
            })
        }
        Backend::P1 { q } => Ok(function_field_residue(*q, (1, 1))),
        Backend::Curve { spec } => {
            let (n, d) = spec.l_at_inverse_q();
            Ok(function_field_residue(spec.q(), (n, d)))
        }
    }
}

/// `L(1/q) · q / ((q-1) ln q)` assembled from the exact fraction L(1/q).
fn function_field_residue(q: u64, l_at_inv_q: (i128, i128)) -> ResidueValue {
    let (ln, ld) = l_at_inv_q;
    let num = ln * q as i128;
    let den = ld * (q as i128 - 1);
    let g = crate::arith::gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
    let (num, den) = (num / g, den / g);
    ResidueValue {
        exact: ResidueExact::OverLogQ {
            num: num as i64,
            den: den as u64,
            q,
        },
        value: num as f64 / (den as f64 * (q as f64).ln()),
    }
}

/// The mean-value constant `ρ_K ζ_K(2) ζ_K(3) / ζ_K(6)`.
///
/// Routes: for Q, ζ(2) = π²/6 and ζ(6) = π⁶/945 in closed form and ζ(3)
/// from the series with integral tail at 1e-12; for function fields the
/// exact rational closed forms; for imaginary quadratic fields the
/// factorization ζ_K(s) = ζ(s)·L(s, χ_d) with series tails below 1e-11
/// (a direct Euler product cannot reach that accuracy).
pub fn mean_value_constant(backend: &Backend) -> Result<f64> {
    let rho = residue(backend)?.value;
    match backend {
        Backend::Rational => {
            let z2 = PI * PI / 6.0;
            let z3 = riemann_zeta_series(3.0, 1e-12)?.value;
            let z6 = PI.powi(6) / 945.0;
            Ok(rho * z2 * z3 / z6)
        }
        Backend::ImagQuadratic { d } => {
            let zeta_k = |sigma: f64| -> Result<f64> {
                let z = match sigma as u32 {
                    2 => PI * PI / 6.0,
                    6 => PI.powi(6) / 945.0,
                    _ => riemann_zeta_series(sigma, 1e-12)?.value,
                };
                let l = quadratic_l_series(*d, sigma, l_series_terms_for(*d, sigma, 1e-11))?;
                Ok(z * l.value)
            };
            Ok(rho * zeta_k(2.0)? * zeta_k(3.0)? / zeta_k(6.0)?)
        }
        Backend::P1 { .. } | Backend::Curve { .. } => {
            let z = |sigma: f64| zeta_closed_form(backend, Complex64::new(sigma, 0.0));
            Ok(rho * (z(2.0)? * z(3.0)? / z(6.0)?).re)
        }
    }
}
