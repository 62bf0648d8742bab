//! The character lattice `Λ ≅ Zⁿ`.
//!
//! Weights label the edges of a moment graph and index the monomials of the
//! K-theory point ring. Everything here is exact integer arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::LatticeError;

/// An integer vector in the character lattice, in simple-root coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(Vec<BigInt>);

impl Weight {
    pub fn new(coords: Vec<BigInt>) -> Self {
        Weight(coords)
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        Weight(vec![BigInt::zero(); rank])
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn neg(&self) -> Weight {
        Weight(self.0.iter().map(|c| -c).collect())
    }

    pub fn scale(&self, k: &BigInt) -> Weight {
        Weight(self.0.iter().map(|c| c * k).collect())
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.rank(), other.rank(), "weight rank mismatch");
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Index of the first nonzero coordinate.
    pub fn leading_index(&self) -> Option<usize> {
        self.0.iter().position(|c| !c.is_zero())
    }

    /// Coordinates as machine integers, for use as Laurent exponents.
    pub fn to_i32s(&self) -> Result<Vec<i32>, LatticeError> {
        self.0.iter().map(|c| c.to_i32().ok_or(LatticeError::Overflow)).collect()
    }

    /// Applies an integer matrix (rows = new coordinates) to this weight.
    pub fn transform(&self, matrix: &[Vec<i64>]) -> Weight {
        Weight(matrix.iter().map(|row| row.iter().zip(&self.0).map(|(&m, c)| c * BigInt::from(m)).sum()).collect())
    }

    /// Content: the gcd of the coordinates.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

// Weights serialize as plain JSON integer arrays.
impl Serialize for Weight {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.0.len()))?;
        for c in &self.0 {
            match c.to_i64() {
                Some(v) => seq.serialize_element(&v)?,
                None => seq.serialize_element(&c.to_string())?,
            }
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Weight {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw: Vec<serde_json::Value> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|v| match v {
                serde_json::Value::Number(n) => n
                    .as_i64()
                    .map(BigInt::from)
                    .ok_or_else(|| serde::de::Error::custom("weight coordinate is not an integer")),
                serde_json::Value::String(s) => {
                    s.parse::<BigInt>().map_err(|_| serde::de::Error::custom("bad integer string"))
                }
                _ => Err(serde::de::Error::custom("weight coordinate is not an integer")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(Weight)
    }
}

/// Splits `w = g·p` with `p` primitive and its first nonzero coordinate positive.
pub fn primitive_part(w: &Weight) -> Result<(Weight, BigInt), LatticeError> {
    if w.is_zero() {
        return Err(LatticeError::ZeroWeight);
    }
    let g = w.content();
    let lead = w.leading_index().expect("nonzero weight");
    let g = if w.0[lead].is_negative() { -g } else { g };
    let p = Weight(w.0.iter().map(|c| c / &g).collect());
    Ok((p, g.abs()))
}

/// True iff the two weights span the same line.
pub fn collinear(w1: &Weight, w2: &Weight) -> Result<bool, LatticeError> {
    if w1.rank() != w2.rank() {
        return Err(LatticeError::RankMismatch(w1.rank(), w2.rank()));
    }
    Ok(primitive_part(w1)?.0 == primitive_part(w2)?.0)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum CoprimalityViolation {
    Collinear { pair: (usize, usize) },
    SharedPrime { pair: (usize, usize), prime: String },
    ZeroWeight { index: usize },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoprimalityReport {
    pub ok: bool,
    pub violations: Vec<CoprimalityViolation>,
}

impl CoprimalityReport {
    fn from_violations(violations: Vec<CoprimalityViolation>) -> Self {
        CoprimalityReport { ok: violations.is_empty(), violations }
    }
}

fn prime_factors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        if (&n % &p).is_zero() {
            out.push(p.clone());
            while (&n % &p).is_zero() {
                n /= &p;
            }
        }
        p += BigInt::one();
    }
    if n > BigInt::one() {
        out.push(n);
    }
    out
}

fn zero_and_collinear(ws: &[Weight]) -> (Vec<CoprimalityViolation>, Vec<Option<(Weight, BigInt)>>) {
    let mut violations = Vec::new();
    let parts: Vec<_> = ws
        .iter()
        .enumerate()
        .map(|(i, w)| match primitive_part(w) {
            Ok(pg) => Some(pg),
            Err(_) => {
                violations.push(CoprimalityViolation::ZeroWeight { index: i });
                None
            }
        })
        .collect();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            if let (Some((pi, _)), Some((pj, _))) = (&parts[i], &parts[j]) {
                if pi == pj {
                    violations.push(CoprimalityViolation::Collinear { pair: (i, j) });
                }
            }
        }
    }
    (violations, parts)
}

/// Pairwise relative primality of linear Euler classes in `Sym(Λ)` over `Z`:
/// no two weights collinear and no prime dividing two of them.
pub fn check_coprime_h(ws: &[Weight]) -> CoprimalityReport {
    let (mut violations, parts) = zero_and_collinear(ws);
    let primes: Vec<Vec<BigInt>> =
        parts.iter().map(|p| p.as_ref().map(|(_, g)| prime_factors(g)).unwrap_or_default()).collect();
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            if let Some(p) = primes[i].iter().find(|p| primes[j].contains(p)) {
                violations.push(CoprimalityViolation::SharedPrime { pair: (i, j), prime: p.to_string() });
            }
        }
    }
    CoprimalityReport::from_violations(violations)
}

/// Pairwise relative primality of K-theory Euler classes `1 − e^α`:
/// distinct directions give distinct cyclotomic factors, so only
/// collinearity matters.
pub fn check_coprime_k(ws: &[Weight]) -> CoprimalityReport {
    CoprimalityReport::from_violations(zero_and_collinear(ws).0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    #[test]
    fn primitive_parts() {
        assert_eq!(primitive_part(&w(&[2, 4])).unwrap(), (w(&[1, 2]), 2.into()));
        assert_eq!(primitive_part(&w(&[1, 0])).unwrap(), (w(&[1, 0]), 1.into()));
        let (p, g) = primitive_part(&w(&[-3, 6])).unwrap();
        assert_eq!((p.clone(), g.clone()), (w(&[1, -2]), 3.into()));
        // g·p recovers w up to the sign normalization
        assert_eq!(p.scale(&g).neg(), w(&[-3, 6]));
        assert_eq!(primitive_part(&w(&[0, 0])), Err(LatticeError::ZeroWeight));
    }

    #[test]
    fn collinearity() {
        assert!(collinear(&w(&[1, 2]), &w(&[2, 4])).unwrap());
        assert!(!collinear(&w(&[1, 0]), &w(&[0, 1])).unwrap());
        assert!(collinear(&w(&[2, -2]), &w(&[-3, 3])).unwrap());
        assert!(collinear(&w(&[0, 0]), &w(&[1, 0])).is_err());
    }

    #[test]
    fn coprime_h() {
        assert!(check_coprime_h(&[w(&[1, 0]), w(&[0, 1]), w(&[1, 1])]).ok);
        let r = check_coprime_h(&[w(&[2, 0]), w(&[0, 2])]);
        assert_eq!(r.violations, vec![CoprimalityViolation::SharedPrime { pair: (0, 1), prime: "2".into() }]);
        let r = check_coprime_h(&[w(&[1, 0]), w(&[2, 0])]);
        assert_eq!(r.violations, vec![CoprimalityViolation::Collinear { pair: (0, 1) }]);
        let r = check_coprime_h(&[w(&[0, 0])]);
        assert!(!r.ok);
    }

    #[test]
    fn coprime_k() {
        assert!(!check_coprime_k(&[w(&[1, 0]), w(&[2, 0])]).ok);
        assert!(check_coprime_k(&[w(&[2, 0]), w(&[0, 2])]).ok);
        assert!(check_coprime_k(&[]).ok);
    }

    #[test]
    fn json_roundtrip() {
        let x = w(&[3, -1]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[3,-1]");
        assert_eq!(serde_json::from_str::<Weight>(&s).unwrap(), x);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn weight() -> impl Strategy<Value = Weight> {
            prop::collection::vec(-12i64..=12, 2)
                .prop_filter("nonzero", |v| v.iter().any(|&c| c != 0))
                .prop_map(|v| w(&v))
        }

        proptest! {
            #[test]
            fn primitive_part_idempotent(x in weight()) {
                let (p, _) = primitive_part(&x).unwrap();
                prop_assert_eq!(primitive_part(&p).unwrap(), (p.clone(), BigInt::one()));
            }

            #[test]
            fn collinear_is_equivalence(a in weight(), b in weight(), c in weight()) {
                prop_assert!(collinear(&a, &a).unwrap());
                prop_assert_eq!(collinear(&a, &b).unwrap(), collinear(&b, &a).unwrap());
                if collinear(&a, &b).unwrap() && collinear(&b, &c).unwrap() {
                    prop_assert!(collinear(&a, &c).unwrap());
                }
            }

            #[test]
            fn h_condition_implies_k(ws in prop::collection::vec(weight(), 0..5)) {
                if check_coprime_h(&ws).ok {
                    prop_assert!(check_coprime_k(&ws).ok);
                }
            }
        }
    }
}
