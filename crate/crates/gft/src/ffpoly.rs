//! Exact arithmetic in F_p[t] for prime p: canonical polynomials,
//! ring operations, and the enumeration/counting of monic irreducibles.
//!
//! Polynomials are stored as coefficient vectors low-to-high with no
//! trailing zeros; the zero polynomial is the empty vector and its degree
//! is `None`. The canonical ordering used for place keys is (degree, then
//! coefficient vector compared lexicographically from the constant term).

use std::cmp::Ordering;
use std::fmt;

use crate::arith::{self, divisors, mobius, powmod};
use crate::error::{Error, Result};

/// A prime field F_p. Construction runs a deterministic primality check.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::Usage(format!("{p} is not prime")));
        }
        Ok(PrimeField { p })
    }

    pub fn order(&self) -> u64 {
        self.p
    }

    /// Builds a polynomial from low-to-high coefficients, reducing mod p
    /// and trimming trailing zeros into canonical form.
    pub fn poly(&self, coeffs: &[u64]) -> Poly {
        let mut c: Vec<u64> = coeffs.iter().map(|&x| x % self.p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly {
            field: *self,
            coeffs: c,
        }
    }

    pub fn zero(&self) -> Poly {
        self.poly(&[])
    }

    pub fn one(&self) -> Poly {
        self.poly(&[1])
    }

    /// The generator t of F_p[t].
    pub fn t(&self) -> Poly {
        self.poly(&[0, 1])
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

/// A polynomial over a prime field, in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl Poly {
    pub fn field(&self) -> PrimeField {
        self.field
    }

    /// Low-to-high coefficient view (empty for the zero polynomial).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last() == Some(&1)
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    fn check_field(&self, other: &Poly) -> Result<()> {
        if self.field != other.field {
            return Err(Error::Usage(format!(
                "characteristic mismatch: {} vs {}",
                self.field, other.field
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let p = self.field.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, c) in out.iter_mut().enumerate() {
            *c = (self.coeff(i) + other.coeff(i)) % p;
        }
        Ok(self.field.poly(&out))
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let p = self.field.p;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for (i, c) in out.iter_mut().enumerate() {
            *c = (self.coeff(i) + p - other.coeff(i)) % p;
        }
        Ok(self.field.poly(&out))
    }

    /// Exact product; `deg(ab) = deg a + deg b` for nonzero inputs.
    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(self.field.zero());
        }
        let p = self.field.p as u128;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                let acc = out[i + j] as u128 + (a as u128 * b as u128) % p;
                out[i + j] = (acc % p) as u64;
            }
        }
        Ok(self.field.poly(&out))
    }

    /// Euclidean division by a nonzero divisor; returns (quotient, remainder).
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.check_field(divisor)?;
        if divisor.is_zero() {
            return Err(Error::Usage("division by the zero polynomial".into()));
        }
        let p = self.field.p;
        let dd = divisor.coeffs.len() - 1;
        if self.coeffs.len() < divisor.coeffs.len() {
            return Ok((self.field.zero(), self.clone()));
        }
        let lead_inv = powmod(*divisor.coeffs.last().unwrap(), p - 2, p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c == 0 {
                continue;
            }
            let q = (c as u128 * lead_inv as u128 % p as u128) as u64;
            quot[k - dd] = q;
            for (j, &dcoef) in divisor.coeffs.iter().enumerate() {
                let sub = (q as u128 * dcoef as u128 % p as u128) as u64;
                rem[k - dd + j] = (rem[k - dd + j] + p - sub) % p;
            }
        }
        Ok((self.field.poly(&quot), self.field.poly(&rem)))
    }

    /// Monic greatest common divisor (gcd with the zero polynomial is the
    /// other argument made monic).
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.check_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.make_monic())
    }

    /// Scales by the inverse of the leading coefficient (zero stays zero).
    pub fn make_monic(&self) -> Poly {
        match self.coeffs.last() {
            None | Some(1) => self.clone(),
            Some(&lead) => {
                let p = self.field.p;
                let inv = powmod(lead, p - 2, p);
                let coeffs: Vec<u64> = self
                    .coeffs
                    .iter()
                    .map(|&c| (c as u128 * inv as u128 % p as u128) as u64)
                    .collect();
                self.field.poly(&coeffs)
            }
        }
    }

    pub fn eval(&self, x: u64) -> u64 {
        let p = self.field.p;
        let x = x % p;
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = ((acc as u128 * x as u128 + c as u128) % p as u128) as u64;
        }
        acc
    }

    /// Parses the display form: terms like `t^3`, `2t`, `4`, joined by `+`.
    pub fn parse(field: PrimeField, s: &str) -> Result<Poly> {
        let s = s.trim();
        let s = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .unwrap_or(s);
        if s.is_empty() {
            return Err(Error::Usage("empty polynomial".into()));
        }
        let mut coeffs: Vec<u64> = Vec::new();
        for term in s.split('+') {
            let term = term.trim().replace(['*', ' '], "");
            if term.is_empty() {
                return Err(Error::Usage(format!("bad polynomial: {s:?}")));
            }
            let (coef_str, exp) = match term.find('t') {
                None => (term.as_str(), 0usize),
                Some(i) => {
                    let exp = match term[i + 1..].strip_prefix('^') {
                        None if term[i + 1..].is_empty() => 1,
                        Some(e) => e
                            .parse::<usize>()
                            .map_err(|_| Error::Usage(format!("bad exponent in {term:?}")))?,
                        None => {
                            return Err(Error::Usage(format!("bad term {term:?}")));
                        }
                    };
                    (&term[..i], exp)
                }
            };
            let coef: u64 = if coef_str.is_empty() {
                1
            } else {
                coef_str
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad coefficient in {term:?}")))?
            };
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] = (coeffs[exp] + coef) % field.p;
        }
        Ok(field.poly(&coeffs))
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Poly {
    /// Canonical key order: degree first (zero least), then the coefficient
    /// vector lexicographically from the constant term up.
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.cmp(&other.coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                _ => {
                    if c != 1 {
                        write!(f, "{c}")?;
                    }
                    if k == 1 {
                        write!(f, "t")?;
                    } else {
                        write!(f, "t^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Iterates the monic polynomials of exact degree `d` in canonical order.
pub fn monic_polys(field: PrimeField, d: usize) -> impl Iterator<Item = Poly> {
    let p = field.order();
    let total = (p as u128).pow(d as u32);
    (0..total).map(move |k| {
        // Digits of k in base p, the most significant digit landing on the
        // constant coefficient so that enumeration order is the canonical
        // lexicographic order on low-to-high coefficient vectors.
        let mut coeffs = vec![0u64; d + 1];
        coeffs[d] = 1;
        let mut k = k;
        for slot in (0..d).rev() {
            coeffs[slot] = (k % p as u128) as u64;
            k /= p as u128;
        }
        field.poly(&coeffs)
    })
}

/// Tests irreducibility of a monic polynomial of degree >= 1 by trial
/// division against every monic polynomial of degree 1..=deg/2.
pub fn is_irreducible(f: &Poly) -> Result<bool> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Usage("irreducibility needs degree >= 1".into())),
    };
    if !f.is_monic() {
        return Err(Error::Usage(format!("{f} is not monic")));
    }
    for e in 1..=d / 2 {
        for g in monic_polys(f.field(), e) {
            let (_, r) = f.divrem(&g)?;
            if r.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Number of monic irreducibles of degree `d` over F_p via the Möbius
/// necklace count `a_d = (1/d) * sum_{e|d} mu(e) p^(d/e)`.
pub fn count_monic_irreducibles(field: PrimeField, d: u32) -> Result<u64> {
    if d == 0 {
        return Err(Error::Usage("degree must be >= 1".into()));
    }
    let p = field.order() as i128;
    let mut total: i128 = 0;
    for e in divisors(d as u64) {
        let term = p
            .checked_pow(d / e as u32)
            .ok_or_else(|| Error::Cap(format!("p^{} overflows the counter", d / e as u32)))?;
        total += mobius(e) as i128 * term;
    }
    debug_assert!(total >= 0 && total % d as i128 == 0);
    Ok((total / d as i128) as u64)
}

/// All monic irreducibles of degree 1..=max_degree, by degree then
/// canonical order within each degree.
pub fn enumerate_monic_irreducibles(field: PrimeField, max_degree: u32) -> Vec<Poly> {
    let mut out = Vec::new();
    for d in 1..=max_degree as usize {
        // Trial division only needs the irreducibles of degree <= d/2,
        // which were all produced in earlier rounds.
        let prior: Vec<Poly> = out
            .iter()
            .filter(|g: &&Poly| g.degree().unwrap() <= d / 2)
            .cloned()
            .collect();
        for f in monic_polys(field, d) {
            let mut reducible = false;
            for g in &prior {
                let (_, r) = f.divrem(g).expect("same field");
                if r.is_zero() {
                    reducible = true;
                    break;
                }
            }
            if !reducible {
                out.push(f);
            }
        }
    }
    out
}

/// Factors a monic polynomial of degree >= 1 into monic irreducibles with
/// multiplicities, smallest factor first.
pub fn factor_monic(f: &Poly) -> Result<Vec<(Poly, u32)>> {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return Err(Error::Usage("factorization needs monic degree >= 1".into())),
    };
    if !f.is_monic() {
        return Err(Error::Usage(format!("{f} is not monic")));
    }
    let mut out: Vec<(Poly, u32)> = Vec::new();
    let mut rest = f.clone();
    'outer: while rest.degree().is_some_and(|d| d >= 1) {
        let rd = rest.degree().unwrap();
        for e in 1..=rd {
            for g in monic_polys(f.field(), e) {
                let (q, r) = rest.divrem(&g)?;
                if r.is_zero() {
                    // Smallest divisor of a monic polynomial is irreducible.
                    match out.iter_mut().find(|(h, _)| *h == g) {
                        Some((_, m)) => *m += 1,
                        None => out.push((g.clone(), 1)),
                    }
                    rest = q;
                    continue 'outer;
                }
            }
        }
        unreachable!("degree {rd} polynomial with no divisor of degree <= itself");
    }
    debug_assert_eq!(
        out.iter()
            .map(|(g, m)| g.degree().unwrap() as u32 * m)
            .sum::<u32>(),
        d as u32
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> PrimeField {
        PrimeField::new(2).unwrap()
    }

    fn f3() -> PrimeField {
        PrimeField::new(3).unwrap()
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(0).is_err());
    }

    #[test]
    fn canonical_form_trims() {
        let f = f2().poly(&[1, 1, 0, 0]);
        assert_eq!(f.coeffs(), &[1, 1]);
        assert_eq!(f.degree(), Some(1));
        assert_eq!(f2().poly(&[0, 0]).degree(), None);
    }

    #[test]
    fn mul_freshman_dream_char_2() {
        // (t+1)(t+1) = t^2+1 over F_2.
        let a = f2().poly(&[1, 1]);
        let sq = a.mul(&a).unwrap();
        assert_eq!(sq, f2().poly(&[1, 0, 1]));
    }

    #[test]
    fn mul_identity() {
        let a = f3().poly(&[2, 0, 1]);
        assert_eq!(a.mul(&f3().one()).unwrap(), a);
    }

    #[test]
    fn mul_hand_checked_cube() {
        // (t^2+t+1)(t+1) = t^3+1 over F_2 (hand multiplication).
        let a = f2().poly(&[1, 1, 1]);
        let b = f2().poly(&[1, 1]);
        assert_eq!(a.mul(&b).unwrap(), f2().poly(&[1, 0, 0, 1]));
    }

    #[test]
    fn mul_characteristic_mismatch() {
        let a = f2().poly(&[1, 1]);
        let b = f3().poly(&[1, 1]);
        assert!(matches!(a.mul(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn ring_laws_exhaustive_degree_2_f2() {
        // All triples of polynomials of degree <= 2 over F_2 (8^3 of them).
        let polys: Vec<Poly> = (0..8u64)
            .map(|k| f2().poly(&[k & 1, (k >> 1) & 1, (k >> 2) & 1]))
            .collect();
        for a in &polys {
            for b in &polys {
                assert_eq!(a.mul(b).unwrap(), b.mul(a).unwrap());
                assert_eq!(a.add(b).unwrap(), b.add(a).unwrap());
                for c in &polys {
                    let ab_c = a.mul(b).unwrap().mul(c).unwrap();
                    let a_bc = a.mul(&b.mul(c).unwrap()).unwrap();
                    assert_eq!(ab_c, a_bc);
                    let lhs = a.mul(&b.add(c).unwrap()).unwrap();
                    let rhs = a.mul(b).unwrap().add(&a.mul(c).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn degree_adds_on_mul() {
        let a = f3().poly(&[1, 2, 1]);
        let b = f3().poly(&[2, 1]);
        let ab = a.mul(&b).unwrap();
        assert_eq!(ab.degree(), Some(3));
    }

    #[test]
    fn irreducibility_examples() {
        // t^2+t+1 over F_2: no root, degree 2 -> irreducible (trial division
        // by the two degree-1 monics t and t+1).
        assert!(is_irreducible(&f2().poly(&[1, 1, 1])).unwrap());
        // t^2+1 = (t+1)^2 over F_2.
        assert!(!is_irreducible(&f2().poly(&[1, 0, 1])).unwrap());
        // t^2+1 over F_3 has no root in {0,1,2}.
        assert!(is_irreducible(&f3().poly(&[1, 0, 1])).unwrap());
    }

    #[test]
    fn irreducibility_rejects_bad_input() {
        assert!(is_irreducible(&f3().poly(&[2, 2])).is_err()); // not monic
        assert!(is_irreducible(&f3().poly(&[1])).is_err()); // constant
        assert!(is_irreducible(&f3().zero()).is_err());
    }

    #[test]
    fn counts_match_spec_examples() {
        assert_eq!(count_monic_irreducibles(f2(), 1).unwrap(), 2);
        // Exhaustive check over the 4 monic quadratics gives 1.
        let quad: Vec<Poly> = monic_polys(f2(), 2)
            .filter(|f| is_irreducible(f).unwrap())
            .collect();
        assert_eq!(quad.len(), 1);
        assert_eq!(count_monic_irreducibles(f2(), 2).unwrap(), 1);
        assert_eq!(count_monic_irreducibles(f2(), 4).unwrap(), 3);
    }

    #[test]
    fn mobius_count_equals_exhaustive() {
        for p in [2u64, 3] {
            let field = PrimeField::new(p).unwrap();
            for d in 1..=5u32 {
                let exhaustive = monic_polys(field, d as usize)
                    .filter(|f| is_irreducible(f).unwrap())
                    .count() as u64;
                assert_eq!(
                    count_monic_irreducibles(field, d).unwrap(),
                    exhaustive,
                    "p={p} d={d}"
                );
            }
        }
    }

    #[test]
    fn degree_weighted_counts_sum_to_field_size() {
        // sum_{e|d} e * a_e = p^d: every root of t^(p^d) - t lies in a unique
        // irreducible factor whose degree divides d.
        for p in [2u64, 3, 5] {
            let field = PrimeField::new(p).unwrap();
            for d in 1..=6u64 {
                let total: u64 = divisors(d)
                    .into_iter()
                    .map(|e| e * count_monic_irreducibles(field, e as u32).unwrap())
                    .sum();
                assert_eq!(total, p.pow(d as u32), "p={p} d={d}");
            }
        }
    }

    #[test]
    fn enumeration_order_and_lengths() {
        let f2_deg1 = enumerate_monic_irreducibles(f2(), 1);
        assert_eq!(
            f2_deg1,
            vec![f2().poly(&[0, 1]), f2().poly(&[1, 1])] // t, t+1
        );
        let f2_deg2 = enumerate_monic_irreducibles(f2(), 2);
        assert_eq!(f2_deg2.last().unwrap(), &f2().poly(&[1, 1, 1]));
        assert_eq!(f2_deg2.len(), 3);
        let f3_deg1 = enumerate_monic_irreducibles(f3(), 1);
        assert_eq!(
            f3_deg1,
            vec![f3().t(), f3().poly(&[1, 1]), f3().poly(&[2, 1])]
        );
        // Per-degree slice lengths agree with the Möbius count.
        for d in 1..=5u32 {
            let n = enumerate_monic_irreducibles(f2(), d)
                .iter()
                .filter(|f| f.degree() == Some(d as usize))
                .count() as u64;
            assert_eq!(n, count_monic_irreducibles(f2(), d).unwrap());
        }
    }

    #[test]
    fn factor_monic_matches_structure() {
        // t^2+t = t(t+1) over F_2.
        let f = f2().poly(&[0, 1, 1]);
        let factors = factor_monic(&f).unwrap();
        assert_eq!(factors, vec![(f2().t(), 1), (f2().poly(&[1, 1]), 1)]);
        // (t+1)^3 over F_2 is t^3+t^2+t+1.
        let g = f2().poly(&[1, 1, 1, 1]);
        assert_eq!(factor_monic(&g).unwrap(), vec![(f2().poly(&[1, 1]), 3)]);
    }

    #[test]
    fn display_and_parse_roundtrip() {
        let polys = [
            f3().poly(&[1, 1, 1]),
            f3().poly(&[0, 2]),
            f3().poly(&[2]),
            f3().t(),
            f2().poly(&[1, 0, 1, 1]),
        ];
        for f in polys {
            let s = f.to_string();
            let back = Poly::parse(f.field(), &s).unwrap();
            assert_eq!(back, f, "roundtrip of {s}");
        }
        assert_eq!(Poly::parse(f2(), "(t)").unwrap(), f2().t());
        assert_eq!(Poly::parse(f2(), "t^2+t+1").unwrap(), f2().poly(&[1, 1, 1]));
    }

    #[test]
    fn ordering_is_degree_then_lex() {
        let t = f2().t();
        let t1 = f2().poly(&[1, 1]);
        let t2 = f2().poly(&[0, 0, 1]);
        assert!(t < t1);
        assert!(t1 < t2);
        assert!(f2().zero() < f2().one());
    }
}
