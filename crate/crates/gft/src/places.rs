//! Global-field backends and their tables of places (closed points).
//!
//! Four backends are supported: the rationals, imaginary quadratic fields
//! keyed by a fundamental discriminant, the projective line over a prime
//! field, and curves supplied by point counts. Every backend produces a
//! deterministic, (norm, key)-sorted table of all places up to a norm
//! bound, and can stream (norm, multiplicity) pairs in ascending norm
//! order for the Euler-product evaluators.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use crate::arith::{self, for_each_prime, kronecker, sieve_primes, sqrt_mod};
use crate::curve::CurveSpec;
use crate::error::{Error, Result};
use crate::ffpoly::{self, Poly, PrimeField};

/// How a rational prime behaves in an imaginary quadratic field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Splitting {
    Ramified,
    Split,
    Inert,
}

/// Backend-specific identity of a place. The derived ordering (variant
/// order, then payload) combined with the norm gives the canonical table
/// order; in particular the infinity place of P^1 sorts before the finite
/// places of equal norm.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlaceKind {
    /// A rational prime p.
    Rational { p: u64 },
    /// A place of an imaginary quadratic field above p. `index` is 0 for
    /// the single ramified/inert place, 1 or 2 for split conjugates; the
    /// generator is the canonical square root of d mod 4p labeling them.
    Quadratic {
        p: u64,
        index: u8,
        splitting: Splitting,
        generator: Option<u64>,
    },
    /// The place at infinity of P^1.
    P1Infinity,
    /// A finite place of P^1: a monic irreducible polynomial.
    P1Finite { poly: Poly },
    /// An anonymous place of a counts-supplied curve.
    CurvePoint { degree: u32, index: u64 },
}

/// A closed point with its norm (residue field cardinality) and degree.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Place {
    norm: u64,
    degree: u32,
    kind: PlaceKind,
}

impl Place {
    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    /// Canonical key string, stable across runs; used by the CLI and the
    /// divisor JSON format.
    pub fn key_string(&self) -> String {
        match &self.kind {
            PlaceKind::Rational { p } => p.to_string(),
            PlaceKind::Quadratic {
                p,
                index,
                splitting,
                ..
            } => match splitting {
                Splitting::Ramified => format!("{p}r"),
                Splitting::Inert => format!("{p}i"),
                Splitting::Split => format!("{p}s{index}"),
            },
            PlaceKind::P1Infinity => "inf".to_string(),
            PlaceKind::P1Finite { poly } => poly.to_string(),
            PlaceKind::CurvePoint { degree, index } => format!("d{degree}.{index}"),
        }
    }

    /// Human-readable payload column for tables.
    pub fn tag(&self) -> String {
        match &self.kind {
            PlaceKind::Rational { p } => format!("p={p}"),
            PlaceKind::Quadratic {
                splitting,
                generator,
                ..
            } => match (splitting, generator) {
                (Splitting::Ramified, Some(r)) => format!("ramified r={r}"),
                (Splitting::Split, Some(r)) => format!("split r={r}"),
                (Splitting::Inert, _) => "inert".to_string(),
                (s, None) => format!("{s:?}").to_lowercase(),
            },
            PlaceKind::P1Infinity => "infinity".to_string(),
            PlaceKind::P1Finite { poly } => format!("monic {poly}"),
            PlaceKind::CurvePoint { degree, index } => format!("degree {degree} index {index}"),
        }
    }
}

/// A global-field backend.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Backend {
    /// Spec Z: places are the rational primes.
    Rational,
    /// Imaginary quadratic field of fundamental discriminant d < 0.
    ImagQuadratic { d: i64 },
    /// The projective line over F_q, q prime.
    P1 { q: u64 },
    /// A curve given by point counts.
    Curve { spec: CurveSpec },
}

impl Backend {
    pub fn rational() -> Backend {
        Backend::Rational
    }

    pub fn imag_quadratic(d: i64) -> Result<Backend> {
        if !is_fundamental_discriminant(d) {
            return Err(Error::Usage(format!(
                "{d} is not a negative fundamental discriminant"
            )));
        }
        Ok(Backend::ImagQuadratic { d })
    }

    pub fn p1(q: u64) -> Result<Backend> {
        if !arith::is_prime(q) {
            return Err(Error::Usage(format!("q = {q} is not prime")));
        }
        Ok(Backend::P1 { q })
    }

    pub fn curve(spec: CurveSpec) -> Backend {
        Backend::Curve { spec }
    }

    /// Parses "Q", "Qi:<d>" and "P1:<q>" descriptors. Curve backends are
    /// built from a [`CurveSpec`] (the CLI loads them from JSON files).
    pub fn parse(descriptor: &str) -> Result<Backend> {
        if descriptor == "Q" {
            return Ok(Backend::Rational);
        }
        if let Some(d) = descriptor.strip_prefix("Qi:") {
            let d: i64 = d
                .parse()
                .map_err(|_| Error::Usage(format!("bad discriminant in {descriptor:?}")))?;
            return Backend::imag_quadratic(d);
        }
        if let Some(q) = descriptor.strip_prefix("P1:") {
            let q: u64 = q
                .parse()
                .map_err(|_| Error::Usage(format!("bad field order in {descriptor:?}")))?;
            return Backend::p1(q);
        }
        Err(Error::Usage(format!(
            "unknown backend {descriptor:?} (expected Q, Qi:<d>, P1:<q> or curve:<file.json>)"
        )))
    }

    /// All places of norm <= `norm_bound`, sorted by (norm, key).
    pub fn place_table(&self, norm_bound: u64) -> Result<PlaceTable> {
        let mut places = Vec::new();
        match self {
            Backend::Rational => {
                for p in sieve_primes(norm_bound) {
                    places.push(Place {
                        norm: p,
                        degree: 1,
                        kind: PlaceKind::Rational { p },
                    });
                }
            }
            Backend::ImagQuadratic { d } => {
                for p in sieve_primes(norm_bound) {
                    places.extend(quadratic_places_above(*d, p, norm_bound));
                }
            }
            Backend::P1 { q } => {
                if *q <= norm_bound {
                    places.push(Place {
                        norm: *q,
                        degree: 1,
                        kind: PlaceKind::P1Infinity,
                    });
                }
                let field = PrimeField::new(*q)?;
                let max_d = max_degree_for_bound(*q, norm_bound);
                for poly in ffpoly::enumerate_monic_irreducibles(field, max_d) {
                    let d = poly.degree().unwrap() as u32;
                    places.push(Place {
                        norm: q.pow(d),
                        degree: d,
                        kind: PlaceKind::P1Finite { poly },
                    });
                }
            }
            Backend::Curve { spec } => {
                let q = spec.q();
                let max_d = max_degree_for_bound(q, norm_bound);
                let counts = spec.degree_place_counts(max_d)?;
                for (d, &a_d) in counts.iter().enumerate() {
                    let d = (d + 1) as u32;
                    for index in 1..=a_d {
                        places.push(Place {
                            norm: q.pow(d),
                            degree: d,
                            kind: PlaceKind::CurvePoint { degree: d, index },
                        });
                    }
                }
            }
        }
        places.sort();
        Ok(PlaceTable {
            backend: self.clone(),
            norm_bound,
            places,
        })
    }

    /// Streams `(norm, number_of_places_with_that_norm)` in ascending norm
    /// order for all places of norm <= `bound`, without materializing
    /// place objects. This is the path the Euler products run on.
    pub(crate) fn for_each_norm(&self, bound: u64, mut f: impl FnMut(u64, u64)) -> Result<()> {
        match self {
            Backend::Rational => {
                for_each_prime(bound, |p| f(p, 1));
                Ok(())
            }
            Backend::ImagQuadratic { d } => {
                // Split and ramified primes contribute at norm p; inert
                // primes contribute at norm p^2 and are queued until the
                // stream reaches that norm.
                let mut pending: BinaryHeap<Reverse<u64>> = BinaryHeap::new();
                let d = *d;
                for_each_prime(bound, |p| {
                    while let Some(&Reverse(n)) = pending.peek() {
                        if n <= p {
                            pending.pop();
                            f(n, 1);
                        } else {
                            break;
                        }
                    }
                    if d % p as i64 == 0 {
                        f(p, 1);
                    } else {
                        match kronecker(d, p as i64) {
                            1 => f(p, 2),
                            _ => {
                                if let Some(sq) = p.checked_mul(p) {
                                    if sq <= bound {
                                        pending.push(Reverse(sq));
                                    }
                                }
                            }
                        }
                    }
                });
                while let Some(Reverse(n)) = pending.pop() {
                    f(n, 1);
                }
                Ok(())
            }
            Backend::P1 { q } => {
                let field = PrimeField::new(*q)?;
                for d in 1..=max_degree_for_bound(*q, bound) {
                    let mut count = ffpoly::count_monic_irreducibles(field, d)?;
                    if d == 1 {
                        count += 1; // the place at infinity
                    }
                    f(q.pow(d), count);
                }
                Ok(())
            }
            Backend::Curve { spec } => {
                let q = spec.q();
                let max_d = max_degree_for_bound(q, bound);
                for (d, &a_d) in spec.degree_place_counts(max_d)?.iter().enumerate() {
                    if a_d > 0 {
                        f(q.pow((d + 1) as u32), a_d);
                    }
                }
                Ok(())
            }
        }
    }

    /// Checks that a place structurally belongs to this backend: matching
    /// kind, characteristic and norm. Divisor construction relies on this
    /// to keep all entries on one backend.
    pub fn validate_place(&self, place: &Place) -> Result<()> {
        let ok = match (self, place.kind()) {
            (Backend::Rational, PlaceKind::Rational { p }) => place.norm() == *p,
            (Backend::ImagQuadratic { d }, PlaceKind::Quadratic { p, splitting, .. }) => {
                let expected = if d % *p as i64 == 0 {
                    Splitting::Ramified
                } else if kronecker(*d, *p as i64) == 1 {
                    Splitting::Split
                } else {
                    Splitting::Inert
                };
                *splitting == expected
                    && place.norm() == if expected == Splitting::Inert { p * p } else { *p }
            }
            (Backend::P1 { q }, PlaceKind::P1Infinity) => place.norm() == *q,
            (Backend::P1 { q }, PlaceKind::P1Finite { poly }) => {
                poly.field().order() == *q && place.norm() == q.pow(place.degree())
            }
            (Backend::Curve { spec }, PlaceKind::CurvePoint { degree, index }) => {
                place.norm() == spec.q().pow(*degree)
                    && spec
                        .degree_place_counts(*degree)
                        .map(|a| *index >= 1 && *index <= a[*degree as usize - 1])
                        .unwrap_or(false)
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "place {} does not belong to backend {self}",
                place.key_string()
            )))
        }
    }

    /// Resolves a JSON place key against this backend: integers or digit
    /// strings for Q, "2r"/"3i"/"5s1" for quadratic fields, "inf", a
    /// polynomial string or a coefficient array for P^1, and "d2.1" for
    /// counts-supplied curves.
    pub fn resolve_key(&self, key: &serde_json::Value) -> Result<Place> {
        let bad = || Error::Usage(format!("place key {key} is not valid for backend {self}"));
        match self {
            Backend::Rational => {
                let p = match key {
                    serde_json::Value::Number(n) => n.as_u64().ok_or_else(bad)?,
                    serde_json::Value::String(s) => s.parse::<u64>().map_err(|_| bad())?,
                    _ => return Err(bad()),
                };
                if !arith::is_prime(p) {
                    return Err(Error::Usage(format!("{p} is not prime")));
                }
                Ok(Place {
                    norm: p,
                    degree: 1,
                    kind: PlaceKind::Rational { p },
                })
            }
            Backend::ImagQuadratic { d } => {
                let s = key.as_str().ok_or_else(bad)?;
                let split_pos = s.find(|c: char| !c.is_ascii_digit()).ok_or_else(bad)?;
                let p: u64 = s[..split_pos].parse().map_err(|_| bad())?;
                if !arith::is_prime(p) {
                    return Err(Error::Usage(format!("{p} is not prime")));
                }
                let suffix = &s[split_pos..];
                let above = quadratic_places_above(*d, p, u64::MAX);
                above
                    .into_iter()
                    .find(|pl| pl.key_string() == format!("{p}{suffix}"))
                    .ok_or_else(|| {
                        Error::Usage(format!(
                            "no place {s:?} above {p} in Qi:{d} (check the splitting type)"
                        ))
                    })
            }
            Backend::P1 { q } => {
                let field = PrimeField::new(*q)?;
                let poly = match key {
                    serde_json::Value::String(s) if s == "inf" => {
                        return Ok(Place {
                            norm: *q,
                            degree: 1,
                            kind: PlaceKind::P1Infinity,
                        });
                    }
                    serde_json::Value::String(s) => Poly::parse(field, s)?,
                    serde_json::Value::Array(arr) => {
                        let coeffs: Option<Vec<u64>> = arr.iter().map(|v| v.as_u64()).collect();
                        field.poly(&coeffs.ok_or_else(bad)?)
                    }
                    _ => return Err(bad()),
                };
                if !ffpoly::is_irreducible(&poly)? {
                    return Err(Error::Usage(format!("{poly} is reducible over F_{q}")));
                }
                let d = poly.degree().unwrap() as u32;
                Ok(Place {
                    norm: q.pow(d),
                    degree: d,
                    kind: PlaceKind::P1Finite { poly },
                })
            }
            Backend::Curve { spec } => {
                let s = key.as_str().ok_or_else(bad)?;
                let body = s.strip_prefix('d').ok_or_else(bad)?;
                let (deg, idx) = body.split_once('.').ok_or_else(bad)?;
                let degree: u32 = deg.parse().map_err(|_| bad())?;
                let index: u64 = idx.parse().map_err(|_| bad())?;
                let counts = spec.degree_place_counts(degree)?;
                let a_d = counts[degree as usize - 1];
                if index == 0 || index > a_d {
                    return Err(Error::Usage(format!(
                        "curve has {a_d} places of degree {degree}, index {index} out of range"
                    )));
                }
                Ok(Place {
                    norm: spec.q().pow(degree),
                    degree,
                    kind: PlaceKind::CurvePoint { degree, index },
                })
            }
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Rational => write!(f, "Q"),
            Backend::ImagQuadratic { d } => write!(f, "Qi:{d}"),
            Backend::P1 { q } => write!(f, "P1:{q}"),
            Backend::Curve { spec } => {
                write!(f, "curve:q={};l=", spec.q())?;
                let parts: Vec<String> = spec.l_coeffs().iter().map(|c| c.to_string()).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Largest d with q^d <= bound (0 if q > bound).
pub(crate) fn max_degree_for_bound(q: u64, bound: u64) -> u32 {
    let mut d = 0u32;
    let mut power = 1u64;
    loop {
        match power.checked_mul(q) {
            Some(next) if next <= bound => {
                power = next;
                d += 1;
            }
            _ => return d,
        }
    }
}

/// The places of Qi:d above a rational prime p with norm <= bound.
fn quadratic_places_above(d: i64, p: u64, bound: u64) -> Vec<Place> {
    if d % p as i64 == 0 {
        let generator = ramified_generator(d, p);
        if p <= bound {
            return vec![Place {
                norm: p,
                degree: 1,
                kind: PlaceKind::Quadratic {
                    p,
                    index: 0,
                    splitting: Splitting::Ramified,
                    generator,
                },
            }];
        }
        return Vec::new();
    }
    match kronecker(d, p as i64) {
        1 => {
            if p > bound {
                return Vec::new();
            }
            let (g1, g2) = split_generators(d, p);
            [(1u8, g1), (2u8, g2)]
                .into_iter()
                .map(|(index, generator)| Place {
                    norm: p,
                    degree: 1,
                    kind: PlaceKind::Quadratic {
                        p,
                        index,
                        splitting: Splitting::Split,
                        generator: Some(generator),
                    },
                })
                .collect()
        }
        _ => match p.checked_mul(p) {
            Some(sq) if sq <= bound => vec![Place {
                norm: sq,
                degree: 2,
                kind: PlaceKind::Quadratic {
                    p,
                    index: 0,
                    splitting: Splitting::Inert,
                    generator: None,
                },
            }],
            _ => Vec::new(),
        },
    }
}

/// The two square roots of d modulo 4p labeling the split conjugates,
/// smallest nonnegative one first.
fn split_generators(d: i64, p: u64) -> (u64, u64) {
    if p == 2 {
        // Split at 2 requires d = 1 mod 8; the odd roots of d mod 8 are 1, 3.
        return (1, 3);
    }
    let a = d.rem_euclid(p as i64) as u64;
    let x0 = sqrt_mod(a, p).expect("split prime has a root");
    // Lift to a root mod 4p: parity of r must match d (then r^2 = d mod 4).
    let want_parity = d.rem_euclid(2) as u64;
    let r = if x0 % 2 == want_parity { x0 } else { x0 + p };
    let r2 = 2 * p - r;
    (r.min(r2), r.max(r2))
}

/// Smallest nonnegative root of d modulo 4p at a ramified prime.
fn ramified_generator(d: i64, p: u64) -> Option<u64> {
    let m = 4 * p as i64;
    (0..=2 * p).find(|&r| ((r as i64 * r as i64) - d).rem_euclid(m) == 0)
}

/// True for negative fundamental discriminants: d = 1 mod 4 squarefree, or
/// d = 4m with m squarefree and m = 2 or 3 mod 4.
pub fn is_fundamental_discriminant(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let squarefree = |n: i64| -> bool {
        let mut n = n.unsigned_abs();
        let mut p = 2u64;
        while p * p <= n {
            if n.is_multiple_of(p) {
                n /= p;
                if n.is_multiple_of(p) {
                    return false;
                }
            }
            p += 1;
        }
        true
    };
    match d.rem_euclid(4) {
        1 => squarefree(d),
        0 => {
            let m = d / 4;
            squarefree(m) && matches!(m.rem_euclid(4), 2 | 3)
        }
        _ => false,
    }
}

/// Class number of the imaginary quadratic field of fundamental
/// discriminant d, counted as the number of reduced primitive forms
/// (a, b, c) with b^2 - 4ac = d, |b| <= a <= c, and b >= 0 when |b| = a
/// or a = c.
pub fn class_number(d: i64) -> Result<u64> {
    if !is_fundamental_discriminant(d) {
        return Err(Error::Usage(format!(
            "{d} is not a negative fundamental discriminant"
        )));
    }
    let mut h = 0u64;
    let a_max = ((-d) as f64 / 3.0).sqrt() as i64 + 1;
    for a in 1..=a_max {
        for b in -a..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if (b < 0 && (-b == a || a == c)) || gcd3(a, b.abs(), c) != 1 {
                continue;
            }
            h += 1;
        }
    }
    Ok(h)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    let g = arith::gcd_u64(a.unsigned_abs(), b.unsigned_abs());
    arith::gcd_u64(g, c.unsigned_abs()) as i64
}

/// Number of roots of unity in the imaginary quadratic field: 6 for d=-3,
/// 4 for d=-4, 2 otherwise.
pub fn unit_count(d: i64) -> u64 {
    match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Deterministic, norm-sorted enumeration of all places up to a bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaceTable {
    backend: Backend,
    norm_bound: u64,
    places: Vec<Place>,
}

impl PlaceTable {
    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn norm_bound(&self) -> u64 {
        self.norm_bound
    }

    pub fn places(&self) -> &[Place] {
        &self.places
    }

    pub fn len(&self) -> usize {
        self.places.len()
    }

    pub fn is_empty(&self) -> bool {
        self.places.is_empty()
    }
}
