//! Effective divisors over a place table: exact norms and totients via the
//! product formula, plus brute-force quotient-ring oracles that verify the
//! remainder theorem's cardinality and unit-count consequences by direct
//! enumeration.
//!
//! The oracles cover the two backends whose quotient rings have concrete
//! residue enumerations: divisors of Spec Z (residues mod an integer) and
//! divisors of P^1 away from infinity (residues mod a monic polynomial).

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::arith::{factor, gcd_u128};
use crate::error::{Error, Result};
use crate::ffpoly::{self, Poly, PrimeField};
use crate::places::{Backend, Place, PlaceKind};

/// Enumeration caps for the brute-force oracles. These are configuration,
/// not constants; the CLI exposes them as flags.
#[derive(Debug, Clone, Copy)]
pub struct OracleCaps {
    /// Largest integer modulus enumerated on the rational backend.
    pub rational_modulus_cap: u128,
    /// Largest residue count q^deg enumerated on the P^1 backend.
    pub ff_residue_cap: u64,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            rational_modulus_cap: 1_000_000,
            ff_residue_cap: 1 << 16,
        }
    }
}

/// An effective divisor: a finite map from places to positive
/// multiplicities. The empty map is the zero divisor.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Divisor {
    backend: Backend,
    entries: BTreeMap<Place, u64>,
}

impl Divisor {
    pub fn zero(backend: &Backend) -> Divisor {
        Divisor {
            backend: backend.clone(),
            entries: BTreeMap::new(),
        }
    }

    /// Builds from (place, multiplicity) pairs; multiplicities must be
    /// positive, every place must belong to the backend, and repeated
    /// places accumulate.
    pub fn from_entries(
        backend: &Backend,
        entries: impl IntoIterator<Item = (Place, u64)>,
    ) -> Result<Divisor> {
        let mut map = BTreeMap::new();
        for (place, m) in entries {
            if m == 0 {
                return Err(Error::Usage(format!(
                    "multiplicity 0 for place {}",
                    place.key_string()
                )));
            }
            backend.validate_place(&place)?;
            *map.entry(place).or_insert(0) += m;
        }
        Ok(Divisor {
            backend: backend.clone(),
            entries: map,
        })
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Support size (number of distinct places).
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Place, u64)> {
        self.entries.iter().map(|(p, &m)| (p, m))
    }

    pub fn multiplicity(&self, place: &Place) -> u64 {
        self.entries.get(place).copied().unwrap_or(0)
    }

    fn check_backend(&self, other: &Divisor) -> Result<()> {
        if self.backend != other.backend {
            return Err(Error::Usage(format!(
                "backend mismatch: {} vs {}",
                self.backend, other.backend
            )));
        }
        Ok(())
    }

    /// Pointwise sum: multiplicities add, supports union.
    pub fn add(&self, other: &Divisor) -> Result<Divisor> {
        self.check_backend(other)?;
        let mut entries = self.entries.clone();
        for (place, &m) in &other.entries {
            *entries.entry(place.clone()).or_insert(0) += m;
        }
        Ok(Divisor {
            backend: self.backend.clone(),
            entries,
        })
    }

    /// True iff the supports are disjoint.
    pub fn is_coprime_with(&self, other: &Divisor) -> Result<bool> {
        self.check_backend(other)?;
        Ok(!self.entries.keys().any(|p| other.entries.contains_key(p)))
    }

    /// Exact norm `prod_P N(P)^{m_P}`; the zero divisor has norm 1.
    pub fn norm(&self) -> Result<u128> {
        let mut acc: u128 = 1;
        for (place, &m) in &self.entries {
            for _ in 0..m {
                acc = acc
                    .checked_mul(place.norm() as u128)
                    .ok_or_else(|| Error::Cap("divisor norm exceeds 128 bits".into()))?;
            }
        }
        Ok(acc)
    }

    /// Exact totient via the product formula
    /// `phi(D) = prod_P N(P)^{m_P - 1} (N(P) - 1)`; phi(0) = 1.
    pub fn totient(&self) -> Result<u128> {
        let mut acc: u128 = 1;
        let overflow = || Error::Cap("divisor totient exceeds 128 bits".into());
        for (place, &m) in &self.entries {
            let n = place.norm() as u128;
            acc = acc.checked_mul(n - 1).ok_or_else(overflow)?;
            for _ in 1..m {
                acc = acc.checked_mul(n).ok_or_else(overflow)?;
            }
        }
        Ok(acc)
    }

    /// The divisor of Spec Z attached to a positive integer (its prime
    /// factorization); 1 maps to the zero divisor.
    pub fn from_integer(n: u128) -> Result<Divisor> {
        if n == 0 {
            return Err(Error::Usage("0 has no divisor".into()));
        }
        let backend = Backend::Rational;
        let entries = factor(n).into_iter().map(|(p, e)| {
            let place = backend
                .resolve_key(&serde_json::json!(p as u64))
                .expect("trial division yields primes");
            (place, e as u64)
        });
        Divisor::from_entries(&backend, entries)
    }

    /// The finite divisor of P^1 attached to a monic polynomial of degree
    /// >= 1 (its irreducible factorization).
    pub fn from_poly(f: &Poly) -> Result<Divisor> {
        let q = f.field().order();
        let backend = Backend::p1(q)?;
        let entries = ffpoly::factor_monic(f)?
            .into_iter()
            .map(|(g, e)| (Place::p1_finite(q, g), e as u64));
        Divisor::from_entries(&backend, entries)
    }

    /// Parses the JSON divisor format: a list of [place_key, multiplicity]
    /// pairs resolved against the backend.
    pub fn from_json(backend: &Backend, json: &serde_json::Value) -> Result<Divisor> {
        let arr = json
            .as_array()
            .ok_or_else(|| Error::Usage("divisor JSON must be a list of pairs".into()))?;
        let mut entries = Vec::new();
        for pair in arr {
            let pair = pair.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                Error::Usage(format!(
                    "divisor entry {pair} is not a [key, multiplicity] pair"
                ))
            })?;
            let place = backend.resolve_key(&pair[0])?;
            let m = pair[1]
                .as_u64()
                .filter(|&m| m >= 1)
                .ok_or_else(|| Error::Usage(format!("bad multiplicity {}", pair[1])))?;
            entries.push((place, m));
        }
        Divisor::from_entries(backend, entries)
    }

    /// The JSON divisor format: `[[key, multiplicity], ...]` with integer
    /// keys on Q and low-to-high coefficient lists for polynomial keys.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.entries
                .iter()
                .map(|(p, &m)| {
                    let key = match p.kind() {
                        PlaceKind::Rational { p } => serde_json::json!(p),
                        PlaceKind::P1Finite { poly } => serde_json::json!(poly.coeffs()),
                        _ => serde_json::json!(p.key_string()),
                    };
                    serde_json::json!([key, m])
                })
                .collect(),
        )
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (place, &m) in &self.entries {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if m == 1 {
                write!(f, "({})", place.key_string())?;
            } else {
                write!(f, "{m}·({})", place.key_string())?;
            }
        }
        Ok(())
    }
}

impl Place {
    /// Internal constructor used when factoring polynomials into places.
    pub(crate) fn p1_finite(q: u64, poly: Poly) -> Place {
        let backend = Backend::P1 { q };
        backend
            .resolve_key(&serde_json::Value::String(poly.to_string()))
            .expect("irreducible factor resolves")
    }
}

/// The concrete modulus a divisor's quotient ring enumerates over.
enum OracleModulus {
    /// Z/M for divisors of Spec Z.
    Integer(u128),
    /// F_q[t]/f for finite divisors of P^1.
    Polynomial(Poly),
}

/// Builds the oracle modulus, rejecting unsupported backends and the
/// infinity place, and enforcing the enumeration caps.
fn oracle_modulus(divisor: &Divisor, caps: &OracleCaps) -> Result<OracleModulus> {
    match divisor.backend() {
        Backend::Rational => {
            let m = divisor.norm()?;
            if m > caps.rational_modulus_cap {
                return Err(Error::Cap(format!(
                    "modulus {m} exceeds the enumeration cap {}",
                    caps.rational_modulus_cap
                )));
            }
            Ok(OracleModulus::Integer(m))
        }
        Backend::P1 { q } => {
            let field = PrimeField::new(*q)?;
            let mut f = field.one();
            for (place, m) in divisor.entries() {
                match place.kind() {
                    PlaceKind::P1Finite { poly } => {
                        for _ in 0..m {
                            f = f.mul(poly)?;
                        }
                    }
                    _ => {
                        return Err(Error::UnsupportedOracle(
                            "the infinity place has no residue enumeration in F_q[t]".into(),
                        ))
                    }
                }
            }
            let residues = divisor.norm()?;
            if residues > caps.ff_residue_cap as u128 {
                return Err(Error::Cap(format!(
                    "residue count {residues} exceeds the enumeration cap {}",
                    caps.ff_residue_cap
                )));
            }
            Ok(OracleModulus::Polynomial(f))
        }
        b => Err(Error::UnsupportedOracle(format!(
            "no quotient-ring enumeration for backend {b}"
        ))),
    }
}

/// Counts units in the quotient ring by exhaustive coprimality tests;
/// equals `Divisor::totient` on every supported divisor.
pub fn totient_brute(divisor: &Divisor, caps: &OracleCaps) -> Result<u128> {
    match oracle_modulus(divisor, caps)? {
        OracleModulus::Integer(m) => Ok((1..=m).filter(|&x| gcd_u128(x, m) == 1).count() as u128),
        OracleModulus::Polynomial(f) => {
            let field = f.field();
            let deg = f.degree().unwrap_or(0);
            let mut units = 0u128;
            // gcd(0, f) = f, so the zero residue is correctly excluded
            // whenever deg >= 1.
            for_each_residue(field, deg, |r| {
                let g = r.gcd(&f).expect("same field");
                if g.degree() == Some(0) {
                    units += 1;
                }
            });
            Ok(units)
        }
    }
}

/// Enumerates all residues of F_q[t]/(f) with deg f = `deg`, i.e. all
/// polynomials of degree < deg, in canonical order.
fn for_each_residue(field: PrimeField, deg: usize, mut f: impl FnMut(Poly)) {
    let q = field.order() as u128;
    let total = q.pow(deg as u32);
    let mut coeffs = vec![0u64; deg.max(1)];
    for k in 0..total {
        let mut k = k;
        for slot in coeffs.iter_mut() {
            *slot = (k % q) as u64;
            k /= q;
        }
        f(field.poly(&coeffs));
    }
}

/// One bipartition's worth of remainder-theorem checks.
#[derive(Debug, Clone, Serialize)]
pub struct BipartitionCheck {
    pub left: Vec<String>,
    pub right: Vec<String>,
    pub cardinality: u128,
    pub cardinality_left: u128,
    pub cardinality_right: u128,
    pub cardinality_product_ok: bool,
    pub crt_bijection_ok: bool,
    pub units: u128,
    pub units_left: u128,
    pub units_right: u128,
    pub unit_product_ok: bool,
}

impl BipartitionCheck {
    pub fn pass(&self) -> bool {
        self.cardinality_product_ok && self.crt_bijection_ok && self.unit_product_ok
    }
}

/// Verification report for the remainder-theorem consequences on one divisor.
#[derive(Debug, Clone, Serialize)]
pub struct RemainderReport {
    pub backend: String,
    pub divisor: serde_json::Value,
    pub checks: Vec<BipartitionCheck>,
    pub all_pass: bool,
}

/// Splits the divisor over support bipartitions and verifies, by direct
/// enumeration, that (i) quotient-ring cardinalities multiply, (ii) the
/// reduction map into the product ring is a bijection, and (iii) unit
/// counts multiply. The default bipartition is {smallest-key place} vs the
/// rest; `all_bipartitions` checks every proper bipartition and requires
/// the support to have at most 4 places.
pub fn verify_remainder_isomorphism(
    divisor: &Divisor,
    caps: &OracleCaps,
    all_bipartitions: bool,
) -> Result<RemainderReport> {
    let k = divisor.support_len();
    if k < 2 {
        return Err(Error::Usage(
            "remainder verification needs at least 2 places in the support".into(),
        ));
    }
    if all_bipartitions && k > 4 {
        return Err(Error::Usage(
            "all-bipartitions mode is limited to supports of at most 4 places".into(),
        ));
    }
    let entries: Vec<(Place, u64)> = divisor.entries().map(|(p, m)| (p.clone(), m)).collect();
    let masks: Vec<u64> = if all_bipartitions {
        // Nonempty proper subsets, one per unordered bipartition (the
        // complement-free half: subsets not containing the last place).
        (1..(1u64 << (k - 1))).collect()
    } else {
        vec![1] // smallest-key place alone
    };
    let mut checks = Vec::new();
    for mask in masks {
        let mut left_entries = Vec::new();
        let mut right_entries = Vec::new();
        for (i, e) in entries.iter().enumerate() {
            if mask >> i & 1 == 1 {
                left_entries.push(e.clone());
            } else {
                right_entries.push(e.clone());
            }
        }
        let left = Divisor::from_entries(divisor.backend(), left_entries)?;
        let right = Divisor::from_entries(divisor.backend(), right_entries)?;
        checks.push(check_bipartition(divisor, &left, &right, caps)?);
    }
    let all_pass = checks.iter().all(|c| c.pass());
    Ok(RemainderReport {
        backend: divisor.backend().to_string(),
        divisor: divisor.to_json(),
        checks,
        all_pass,
    })
}

fn check_bipartition(
    whole: &Divisor,
    left: &Divisor,
    right: &Divisor,
    caps: &OracleCaps,
) -> Result<BipartitionCheck> {
    let (cardinality, card_left, card_right, bijection) = match (
        oracle_modulus(whole, caps)?,
        oracle_modulus(left, caps)?,
        oracle_modulus(right, caps)?,
    ) {
        (OracleModulus::Integer(m), OracleModulus::Integer(m1), OracleModulus::Integer(m2)) => {
            // Enumerate Z/m and push each residue through x -> (x mod m1, x mod m2).
            let mut seen = vec![false; (m1 * m2) as usize];
            let mut injective = true;
            let mut count: u128 = 0;
            for x in 0..m {
                count += 1;
                let slot = ((x % m1) * m2 + x % m2) as usize;
                if seen[slot] {
                    injective = false;
                }
                seen[slot] = true;
            }
            let surjective = seen.iter().all(|&s| s);
            (count, m1, m2, injective && surjective)
        }
        (
            OracleModulus::Polynomial(f),
            OracleModulus::Polynomial(f1),
            OracleModulus::Polynomial(f2),
        ) => {
            let field = f.field();
            let q = field.order();
            let (d, d1, d2) = (
                f.degree().unwrap_or(0),
                f1.degree().unwrap_or(0),
                f2.degree().unwrap_or(0),
            );
            let size = |deg: usize| (q as u128).pow(deg as u32);
            let mut seen = vec![false; (size(d1) * size(d2)) as usize];
            let mut injective = true;
            let mut count: u128 = 0;
            for_each_residue(field, d, |r| {
                count += 1;
                let (_, r1) = r.divrem(&f1).expect("same field");
                let (_, r2) = r.divrem(&f2).expect("same field");
                let slot = (residue_index(&r1, q) * size(d2) + residue_index(&r2, q)) as usize;
                if seen[slot] {
                    injective = false;
                }
                seen[slot] = true;
            });
            let surjective = seen.iter().all(|&s| s);
            (count, size(d1), size(d2), injective && surjective)
        }
        _ => unreachable!("bipartition parts share the divisor's backend"),
    };
    let units = totient_brute(whole, caps)?;
    let units_left = totient_brute(left, caps)?;
    let units_right = totient_brute(right, caps)?;
    Ok(BipartitionCheck {
        left: left.entries().map(|(p, _)| p.key_string()).collect(),
        right: right.entries().map(|(p, _)| p.key_string()).collect(),
        cardinality,
        cardinality_left: card_left,
        cardinality_right: card_right,
        cardinality_product_ok: cardinality == card_left * card_right,
        crt_bijection_ok: bijection,
        units,
        units_left,
        units_right,
        unit_product_ok: units == units_left * units_right,
    })
}

/// Base-q integer encoding of a residue polynomial (degree < some bound).
fn residue_index(r: &Poly, q: u64) -> u128 {
    let mut acc: u128 = 0;
    for &c in r.coeffs().iter().rev() {
        acc = acc * q as u128 + c as u128;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q_divisor(pairs: &[(u64, u64)]) -> Divisor {
        let backend = Backend::Rational;
        let entries = pairs
            .iter()
            .map(|&(p, m)| (backend.resolve_key(&serde_json::json!(p)).unwrap(), m));
        Divisor::from_entries(&backend, entries).unwrap()
    }

    fn p1_divisor(q: u64, pairs: &[(&str, u64)]) -> Divisor {
        let backend = Backend::p1(q).unwrap();
        let entries = pairs
            .iter()
            .map(|&(key, m)| (backend.resolve_key(&serde_json::json!(key)).unwrap(), m));
        Divisor::from_entries(&backend, entries).unwrap()
    }

    #[test]
    fn add_identity_and_pointwise() {
        let d = q_divisor(&[(2, 2), (3, 1)]);
        let zero = Divisor::zero(&Backend::Rational);
        assert_eq!(d.add(&zero).unwrap(), d);
        // (t) + (t) = 2(t)
        let t = p1_divisor(2, &[("t", 1)]);
        let tt = t.add(&t).unwrap();
        assert_eq!(tt, p1_divisor(2, &[("t", 2)]));
        // [2P, Q] + [P] = [3P, Q]
        let a = q_divisor(&[(2, 2), (3, 1)]);
        let b = q_divisor(&[(2, 1)]);
        assert_eq!(a.add(&b).unwrap(), q_divisor(&[(2, 3), (3, 1)]));
    }

    #[test]
    fn entries_must_belong_to_the_backend() {
        let p1 = Backend::p1(2).unwrap();
        let t = p1.resolve_key(&serde_json::json!("t")).unwrap();
        assert!(matches!(
            Divisor::from_entries(&Backend::Rational, [(t.clone(), 1)]),
            Err(Error::Usage(_))
        ));
        // Same variant, wrong field: a place of Qi:-4 is not one of Qi:-7.
        let qi4 = Backend::imag_quadratic(-4).unwrap();
        let qi7 = Backend::imag_quadratic(-7).unwrap();
        let split = qi4.resolve_key(&serde_json::json!("5s1")).unwrap();
        assert!(Divisor::from_entries(&qi7, [(split, 1)]).is_err());
        // A P1/F_3 polynomial is rejected on P1/F_2.
        let p3 = Backend::p1(3).unwrap();
        let t3 = p3.resolve_key(&serde_json::json!("t")).unwrap();
        assert!(Divisor::from_entries(&p1, [(t3, 1)]).is_err());
    }

    #[test]
    fn add_rejects_backend_mismatch() {
        let a = q_divisor(&[(2, 1)]);
        let b = p1_divisor(2, &[("t", 1)]);
        assert!(matches!(a.add(&b), Err(Error::Usage(_))));
    }

    #[test]
    fn coprimality() {
        let zero = Divisor::zero(&Backend::p1(2).unwrap());
        let t = p1_divisor(2, &[("t", 1)]);
        let t1 = p1_divisor(2, &[("t+1", 1)]);
        assert!(zero.is_coprime_with(&t).unwrap());
        assert!(t.is_coprime_with(&t1).unwrap());
        let tt = p1_divisor(2, &[("t", 2)]);
        let both = p1_divisor(2, &[("t", 1), ("t+1", 1)]);
        assert!(!tt.is_coprime_with(&both).unwrap());
    }

    #[test]
    fn norm_examples() {
        assert_eq!(Divisor::zero(&Backend::Rational).norm().unwrap(), 1);
        // 2·(2) on Q: #(Z/4) = 4.
        assert_eq!(q_divisor(&[(2, 2)]).norm().unwrap(), 4);
        // (t)+(t+1) on P^1/F_2: q^deg = 4.
        assert_eq!(p1_divisor(2, &[("t", 1), ("t+1", 1)]).norm().unwrap(), 4);
    }

    #[test]
    fn totient_examples() {
        assert_eq!(Divisor::zero(&Backend::Rational).totient().unwrap(), 1);
        // phi(9) = 6 by counting units in Z/9.
        let d = q_divisor(&[(3, 2)]);
        assert_eq!(d.totient().unwrap(), 6);
        assert_eq!(totient_brute(&d, &OracleCaps::default()).unwrap(), 6);
        // 3·(t) on P^1/F_2: 2^3 - 2^2 = 4.
        assert_eq!(p1_divisor(2, &[("t", 3)]).totient().unwrap(), 4);
    }

    #[test]
    fn brute_oracle_examples() {
        let caps = OracleCaps::default();
        // [12] = 2·(2)+(3): gcd enumeration over Z/12 gives 4.
        let twelve = Divisor::from_integer(12).unwrap();
        assert_eq!(totient_brute(&twelve, &caps).unwrap(), 4);
        // (t^2+t+1) over F_2: 4 residues, 3 coprime.
        assert_eq!(
            totient_brute(&p1_divisor(2, &[("t^2+t+1", 1)]), &caps).unwrap(),
            3
        );
        // (t)+(t+1): phi = 1.
        assert_eq!(
            totient_brute(&p1_divisor(2, &[("t", 1), ("t+1", 1)]), &caps).unwrap(),
            1
        );
    }

    #[test]
    fn brute_oracle_rejections() {
        let caps = OracleCaps::default();
        let qi = Backend::imag_quadratic(-4).unwrap();
        let d = Divisor::from_entries(
            &qi,
            [(qi.resolve_key(&serde_json::json!("2r")).unwrap(), 1)],
        )
        .unwrap();
        assert!(matches!(
            totient_brute(&d, &caps),
            Err(Error::UnsupportedOracle(_))
        ));

        let with_inf = p1_divisor(2, &[("inf", 1), ("t", 1)]);
        assert!(matches!(
            totient_brute(&with_inf, &caps),
            Err(Error::UnsupportedOracle(_))
        ));

        let tight = OracleCaps {
            rational_modulus_cap: 10,
            ..OracleCaps::default()
        };
        assert!(matches!(
            totient_brute(&Divisor::from_integer(12).unwrap(), &tight),
            Err(Error::Cap(_))
        ));
    }

    #[test]
    fn from_integer_matches_manual() {
        assert_eq!(
            Divisor::from_integer(12).unwrap(),
            q_divisor(&[(2, 2), (3, 1)])
        );
        assert!(Divisor::from_integer(1).unwrap().is_zero());
        assert!(Divisor::from_integer(0).is_err());
    }

    #[test]
    fn from_poly_matches_manual() {
        let f2 = PrimeField::new(2).unwrap();
        // t^2+t = t(t+1).
        let f = f2.poly(&[0, 1, 1]);
        assert_eq!(
            Divisor::from_poly(&f).unwrap(),
            p1_divisor(2, &[("t", 1), ("t+1", 1)])
        );
    }

    #[test]
    fn verify_crt_on_z12() {
        let report = verify_remainder_isomorphism(
            &Divisor::from_integer(12).unwrap(),
            &OracleCaps::default(),
            false,
        )
        .unwrap();
        assert!(report.all_pass);
        let c = &report.checks[0];
        assert_eq!(c.cardinality, 12);
        assert_eq!((c.cardinality_left, c.cardinality_right), (4, 3));
        assert_eq!(c.units, 4);
        assert_eq!((c.units_left, c.units_right), (2, 2));
    }

    #[test]
    fn verify_crt_on_f2_t2_plus_t() {
        // F_2[t]/(t^2+t) = F_2 x F_2.
        let report = verify_remainder_isomorphism(
            &p1_divisor(2, &[("t", 1), ("t+1", 1)]),
            &OracleCaps::default(),
            true,
        )
        .unwrap();
        assert!(report.all_pass);
        assert_eq!(report.checks[0].cardinality, 4);
        assert_eq!(report.checks[0].cardinality_left, 2);
    }

    #[test]
    fn verify_crt_needs_two_places() {
        let single = q_divisor(&[(2, 3)]);
        assert!(matches!(
            verify_remainder_isomorphism(&single, &OracleCaps::default(), false),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn divisor_json_roundtrip() {
        let backend = Backend::Rational;
        let d = Divisor::from_json(&backend, &serde_json::json!([[2, 2], [3, 1]])).unwrap();
        assert_eq!(d, q_divisor(&[(2, 2), (3, 1)]));
        assert_eq!(d.to_json(), serde_json::json!([[2, 2], [3, 1]]));
        let back = Divisor::from_json(&backend, &d.to_json()).unwrap();
        assert_eq!(back, d);

        let p1 = Backend::p1(2).unwrap();
        let e = Divisor::from_json(&p1, &serde_json::json!([[[1, 1, 1], 2], ["inf", 1]])).unwrap();
        assert_eq!(e.norm().unwrap(), 32);
        assert_eq!(e.to_json(), serde_json::json!([["inf", 1], [[1, 1, 1], 2]]));
        assert_eq!(Divisor::from_json(&p1, &e.to_json()).unwrap(), e);

        assert!(Divisor::from_json(&backend, &serde_json::json!([[4, 1]])).is_err());
        assert!(Divisor::from_json(&backend, &serde_json::json!([[2, 0]])).is_err());
    }

    #[test]
    fn display_formats() {
        assert_eq!(Divisor::zero(&Backend::Rational).to_string(), "0");
        assert_eq!(q_divisor(&[(2, 2), (3, 1)]).to_string(), "2·(2) + (3)");
    }

    #[test]
    fn totient_at_most_norm() {
        for n in 1..200u128 {
            let d = Divisor::from_integer(n).unwrap();
            let (nm, tot) = (d.norm().unwrap(), d.totient().unwrap());
            assert!(tot <= nm);
            assert_eq!(tot == nm, d.is_zero());
        }
    }
}
