//! Curves given by point counts rather than equations.
//!
//! A spec is either the counts N_1..N_g of rational points over F_{q^m},
//! or the zeta numerator L(T) directly. With the convention
//! `L(T) = prod_i (1 - alpha_i T)` and `N_m = q^m + 1 - sum_i alpha_i^m`,
//! g counts pin down the 2g coefficients of L through Newton's identities
//! plus the functional equation `c_{2g-j} = q^{g-j} c_j`. Once L is known,
//! every N_m derives from it, and the closed-point counts follow by Möbius
//! inversion `a_d = (1/d) sum_{e|d} mu(e) N_{d/e}`.

use serde::Deserialize;

use crate::arith::{divisors, mobius};
use crate::error::{Error, Result};

/// Highest degree the i128 power-sum recurrences are allowed to reach.
pub const MAX_CURVE_DEGREE: u32 = 45;

/// A validated counts-supplied curve over a prime field F_q.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveSpec {
    q: u64,
    /// L(T) coefficients low-to-high; `l[0] == 1`, length `2g + 1`.
    l: Vec<i128>,
}

#[derive(Deserialize)]
struct RawSpec {
    q: u64,
    #[serde(default)]
    counts: Option<Vec<i128>>,
    #[serde(default)]
    l_poly: Option<Vec<i128>>,
}

impl CurveSpec {
    /// Builds from an explicit zeta numerator.
    pub fn from_l_poly(q: u64, coeffs: &[i128]) -> Result<Self> {
        if !crate::arith::is_prime(q) {
            return Err(Error::InvalidSpec(format!("q = {q} is not prime")));
        }
        if coeffs.first() != Some(&1) {
            return Err(Error::InvalidSpec("L(T) must have constant term 1".into()));
        }
        let deg = coeffs.len() - 1;
        if !deg.is_multiple_of(2) {
            return Err(Error::InvalidSpec(format!(
                "L(T) must have even degree 2g, got degree {deg}"
            )));
        }
        let g = deg / 2;
        for j in 0..=g {
            let scale = (q as i128).pow((g - j) as u32);
            if coeffs[2 * g - j] != scale * coeffs[j] {
                return Err(Error::InvalidSpec(format!(
                    "functional equation fails: c_{} != q^{} c_{}",
                    2 * g - j,
                    g - j,
                    j
                )));
            }
        }
        let spec = CurveSpec {
            q,
            l: coeffs.to_vec(),
        };
        // Validation window: derived place counts must be nonnegative
        // integers, and the power sums must obey the Weil bound
        // |s_d| <= 2g q^(d/2); the zeta tail majorants depend on it.
        let window = 24.max(2 * g as u32 + 10).min(MAX_CURVE_DEGREE);
        spec.degree_place_counts(window)?;
        for d in 1..=window {
            let s_d = spec.power_sum(d)? as f64;
            let weil = 2.0 * g as f64 * (q as f64).powf(d as f64 / 2.0);
            if s_d.abs() > weil + 1e-9 {
                return Err(Error::InvalidSpec(format!(
                    "L-polynomial violates the Weil bound at degree {d}: |{s_d}| > 2g q^(d/2)"
                )));
            }
        }
        Ok(spec)
    }

    /// Builds from point counts N_1, N_2, ... over F_q, F_{q^2}, ...
    ///
    /// The first g counts determine a genus-g zeta numerator (Newton's
    /// identities for the bottom half, the functional equation for the top);
    /// the smallest genus whose L-polynomial regenerates *every* supplied
    /// count exactly is taken. Supplying more counts than the genus needs
    /// therefore acts as a consistency check.
    pub fn from_counts(q: u64, counts: &[i128]) -> Result<Self> {
        if !crate::arith::is_prime(q) {
            return Err(Error::InvalidSpec(format!("q = {q} is not prime")));
        }
        if counts.is_empty() {
            return Err(Error::InvalidSpec("counts must be nonempty".into()));
        }
        let mut last_err = None;
        'genus: for g in 0..=counts.len() {
            let l = match Self::l_from_prefix(q, &counts[..g]) {
                Ok(l) => l,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            let spec = match Self::from_l_poly(q, &l) {
                Ok(s) => s,
                Err(e) => {
                    last_err = Some(e);
                    continue;
                }
            };
            for (m, &n_m) in counts.iter().enumerate() {
                if spec.point_count((m + 1) as u32)? != n_m {
                    continue 'genus;
                }
            }
            return Ok(spec);
        }
        Err(last_err.unwrap_or_else(|| {
            Error::InvalidSpec(format!(
                "counts {counts:?} are not consistent with any curve of genus <= {}",
                counts.len()
            ))
        }))
    }

    /// Newton + functional equation: the L-polynomial of the genus-g curve
    /// with the given first g point counts.
    fn l_from_prefix(q: u64, counts: &[i128]) -> Result<Vec<i128>> {
        let g = counts.len();
        // Power sums of the inverse roots: s_m = q^m + 1 - N_m.
        let mut s = vec![0i128; g + 1];
        for (m, &n_m) in counts.iter().enumerate() {
            let m = m + 1;
            s[m] = (q as i128).pow(m as u32) + 1 - n_m;
        }
        // Newton: s_k - e_1 s_{k-1} + ... + (-1)^{k-1} e_{k-1} s_1 + (-1)^k k e_k = 0.
        let mut e = vec![0i128; 2 * g + 1];
        e[0] = 1;
        for k in 1..=g {
            let mut acc = s[k];
            let mut sign = -1i128;
            for i in 1..k {
                acc += sign * e[i] * s[k - i];
                sign = -sign;
            }
            // acc + (-1)^k k e_k = 0  =>  e_k = acc * (-1)^{k-1} / k.
            let num = if k % 2 == 0 { -acc } else { acc };
            if num % k as i128 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "counts do not come from an integral genus-{g} L-polynomial"
                )));
            }
            e[k] = num / k as i128;
        }
        // Functional equation fills the top half: e_{2g-j} = q^{g-j} e_j.
        for j in 0..g {
            e[2 * g - j] = (q as i128).pow((g - j) as u32) * e[j];
        }
        // c_k = (-1)^k e_k.
        Ok(e.iter()
            .enumerate()
            .map(|(k, &ek)| if k % 2 == 0 { ek } else { -ek })
            .collect())
    }

    /// Parses the JSON forms `{"q":2,"counts":[5,5]}` / `{"q":2,"l_poly":[1,2,2]}`.
    pub fn from_json(json: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(json)
            .map_err(|e| Error::InvalidSpec(format!("bad curve JSON: {e}")))?;
        match (raw.counts, raw.l_poly) {
            (Some(counts), None) => Self::from_counts(raw.q, &counts),
            (None, Some(l)) => Self::from_l_poly(raw.q, &l),
            _ => Err(Error::InvalidSpec(
                "curve spec needs exactly one of \"counts\" or \"l_poly\"".into(),
            )),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn genus(&self) -> u32 {
        ((self.l.len() - 1) / 2) as u32
    }

    /// L(T) coefficients low-to-high.
    pub fn l_coeffs(&self) -> &[i128] {
        &self.l
    }

    /// Power sum `s_m = sum_i alpha_i^m` from the Newton recurrence.
    fn power_sum(&self, m: u32) -> Result<i128> {
        if m > MAX_CURVE_DEGREE {
            return Err(Error::Cap(format!(
                "curve power sums capped at degree {MAX_CURVE_DEGREE}"
            )));
        }
        let g2 = self.l.len() - 1;
        let e = |k: usize| -> i128 {
            // e_k = (-1)^k c_k.
            if k.is_multiple_of(2) {
                self.l[k]
            } else {
                -self.l[k]
            }
        };
        let mut s = vec![0i128; m as usize + 1];
        for k in 1..=m as usize {
            let mut acc = 0i128;
            let mut sign = 1i128;
            for i in 1..k.min(g2 + 1) {
                acc += sign * e(i) * s[k - i];
                sign = -sign;
            }
            if k <= g2 {
                let kk = k as i128 * e(k);
                acc += if k % 2 == 0 { -kk } else { kk };
            }
            s[k] = acc;
        }
        Ok(s[m as usize])
    }

    /// `N_m = q^m + 1 - s_m`, the number of points over F_{q^m}.
    pub fn point_count(&self, m: u32) -> Result<i128> {
        if m == 0 {
            return Err(Error::Usage("point counts start at m = 1".into()));
        }
        let qm = (self.q as i128)
            .checked_pow(m)
            .ok_or_else(|| Error::Cap(format!("q^{m} overflows")))?;
        Ok(qm + 1 - self.power_sum(m)?)
    }

    /// Closed points of each degree 1..=max_degree by Möbius inversion.
    /// Fails with an invalid-spec error if any derived count is negative
    /// or non-integral.
    pub fn degree_place_counts(&self, max_degree: u32) -> Result<Vec<u64>> {
        let mut out = Vec::with_capacity(max_degree as usize);
        for d in 1..=max_degree {
            let mut acc: i128 = 0;
            for e in divisors(d as u64) {
                acc += mobius(e) as i128 * self.point_count(d / e as u32)?;
            }
            if acc < 0 || acc % d as i128 != 0 {
                return Err(Error::InvalidSpec(format!(
                    "degree-{d} place count is not a nonnegative integer ({acc}/{d})"
                )));
            }
            out.push((acc / d as i128) as u64);
        }
        Ok(out)
    }

    /// `L(1/q)` as an exact reduced fraction (numerator, denominator);
    /// this is the rational part of the residue of the zeta function.
    pub fn l_at_inverse_q(&self) -> (i128, i128) {
        let g2 = (self.l.len() - 1) as u32;
        let den = (self.q as i128).pow(g2);
        let mut num = 0i128;
        for (i, &c) in self.l.iter().enumerate() {
            num += c * (self.q as i128).pow(g2 - i as u32);
        }
        let g = crate::arith::gcd_u128(num.unsigned_abs(), den.unsigned_abs()) as i128;
        (num / g, den / g)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_counts_give_projective_line_a_d() {
        // N_m = 2^m + 1 is P^1 over F_2 (genus 0, L = 1).
        let spec = CurveSpec::from_counts(2, &[3]).unwrap();
        assert_eq!(spec.genus(), 0);
        assert_eq!(spec.l_coeffs(), &[1]);
        let a = spec.degree_place_counts(4).unwrap();
        assert_eq!(a, vec![3, 1, 2, 3]); // a_1=3, a_2=(5-3)/2=1, ...
    }

    #[test]
    fn elliptic_trace_minus_two() {
        // q=2, N_1=5: trace a = q+1-N_1 = -2, L(T) = 1+2T+2T^2, N_2 = 5.
        let spec = CurveSpec::from_counts(2, &[5]).unwrap();
        assert_eq!(spec.l_coeffs(), &[1, 2, 2]);
        assert_eq!(spec.point_count(2).unwrap(), 5);
        let a = spec.degree_place_counts(2).unwrap();
        assert_eq!(a, vec![5, 0]); // a_2 = (N_2 - N_1)/2 = 0
    }

    #[test]
    fn counts_and_l_poly_forms_agree() {
        let a = CurveSpec::from_counts(2, &[5, 5]).unwrap();
        let b = CurveSpec::from_l_poly(2, &[1, 2, 2]).unwrap();
        assert_eq!(a, b);
        let from_json = CurveSpec::from_json(r#"{"q": 2, "counts": [5, 5]}"#).unwrap();
        assert_eq!(from_json, b);
    }

    #[test]
    fn a_1_equals_n_1() {
        for n1 in [1i128, 3, 5] {
            let spec = CurveSpec::from_counts(2, &[n1]).unwrap();
            assert_eq!(spec.degree_place_counts(1).unwrap(), vec![n1 as u64]);
        }
    }

    #[test]
    fn roundtrip_regenerates_counts() {
        // sum_{d|m} d a_d = N_m for every m in range.
        for spec in [
            CurveSpec::from_counts(3, &[6]).unwrap(), // elliptic, trace -2
            CurveSpec::from_counts(2, &[3, 5]).unwrap(), // P^1 via two counts
            CurveSpec::from_l_poly(2, &[1, -2, 2]).unwrap(),
        ] {
            let a = spec.degree_place_counts(8).unwrap();
            for m in 1..=8u32 {
                let total: i128 = divisors(m as u64)
                    .into_iter()
                    .map(|d| d as i128 * a[d as usize - 1] as i128)
                    .sum();
                assert_eq!(total, spec.point_count(m).unwrap(), "m={m}");
            }
        }
    }

    #[test]
    fn minimal_genus_wins() {
        // N_1 = 3 = q + 1 is already explained by genus 0.
        let spec = CurveSpec::from_counts(2, &[3]).unwrap();
        assert_eq!(spec.genus(), 0);
        // N_1 = 3, N_2 = 9 forces the trace-zero elliptic curve.
        let ss = CurveSpec::from_counts(2, &[3, 9]).unwrap();
        assert_eq!(ss.genus(), 1);
        assert_eq!(ss.l_coeffs(), &[1, 0, 2]);
    }

    #[test]
    fn rejects_inconsistent_counts() {
        // A genus-1 curve over F_2 cannot have N_1 = 12 (Weil bound), and
        // Möbius inversion goes negative.
        assert!(CurveSpec::from_counts(2, &[12]).is_err());
    }

    #[test]
    fn rejects_functional_equation_violation() {
        // c_2 must equal q * c_0 = 2.
        assert!(CurveSpec::from_l_poly(2, &[1, 1, 3]).is_err());
        assert!(CurveSpec::from_l_poly(2, &[1, 1]).is_err()); // odd degree
        assert!(CurveSpec::from_l_poly(2, &[2, 2, 4]).is_err()); // c_0 != 1
    }

    #[test]
    fn accepts_supersingular_style_l_poly() {
        // 1 - 2T + 2T^2 (inverse roots 1 ± i) is a genuine elliptic curve
        // over F_2 with N_1 = 1.
        let spec = CurveSpec::from_l_poly(2, &[1, -2, 2]).unwrap();
        assert_eq!(spec.point_count(1).unwrap(), 1);
        assert_eq!(spec.point_count(2).unwrap(), 5);
    }

    #[test]
    fn rejects_bad_json() {
        assert!(CurveSpec::from_json(r#"{"q":2}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"q":2,"counts":[5],"l_poly":[1]}"#).is_err());
        assert!(CurveSpec::from_json(r#"{"q":4,"counts":[5]}"#).is_err());
    }

    #[test]
    fn residue_numerator_fraction() {
        // P^1: L(1/q) = 1.
        let p1 = CurveSpec::from_counts(2, &[3]).unwrap();
        assert_eq!(p1.l_at_inverse_q(), (1, 1));
        // Elliptic 1+2T+2T^2 at T=1/2: 1 + 1 + 1/2 = 5/2.
        let e = CurveSpec::from_l_poly(2, &[1, 2, 2]).unwrap();
        assert_eq!(e.l_at_inverse_q(), (5, 2));
    }
}
