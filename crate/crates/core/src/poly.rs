//! Exact multivariate polynomials over `Q`.
//!
//! [`PolyElt`] is `Sym(Λ) ⊗ Q`, the point ring of equivariant cohomology, and
//! [`LaurentElt`] is the group ring `Q[Λ]`, the point ring of equivariant
//! K-theory. Both share one sparse representation: a map from exponent vector
//! to nonzero rational coefficient, ordered graded-lexicographically. Integral
//! results are certified with [`Polynomial::is_integral`] rather than assumed.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::hash::Hash;
use std::marker::PhantomData;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::PolyError;
use crate::lattice::Weight;

pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<i32>);

impl Monomial {
    pub fn one(rank: usize) -> Self {
        Monomial(vec![0; rank])
    }

    pub fn var(rank: usize, i: usize) -> Self {
        let mut e = vec![0; rank];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn divisible_by(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a >= b)
    }

    /// All exponent vectors of total degree `d` in `rank` variables, ascending.
    pub fn all_of_degree(rank: usize, d: u32) -> Vec<Monomial> {
        fn rec(rank: usize, d: u32, prefix: &mut Vec<i32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == rank {
                prefix.push(d as i32);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in 0..=d {
                prefix.push(e as i32);
                rec(rank, d - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if rank == 0 {
            if d == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(rank, d, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Marker for the two flavours of point ring.
pub trait Kind: Clone + fmt::Debug + PartialEq + Eq + Hash + Send + Sync + 'static {
    const LAURENT: bool;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ordinary;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Laurent;

impl Kind for Ordinary {
    const LAURENT: bool = false;
}

impl Kind for Laurent {
    const LAURENT: bool = true;
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial<K: Kind> {
    rank: usize,
    terms: BTreeMap<Monomial, Rational>,
    kind: PhantomData<K>,
}

/// Element of `Sym(Λ) ⊗ Q`.
pub type PolyElt = Polynomial<Ordinary>;
/// Element of `Q[Λ]`.
pub type LaurentElt = Polynomial<Laurent>;

impl<K: Kind> Polynomial<K> {
    pub fn zero(rank: usize) -> Self {
        Polynomial { rank, terms: BTreeMap::new(), kind: PhantomData }
    }

    pub fn one(rank: usize) -> Self {
        Self::constant(rank, Rational::one())
    }

    pub fn constant(rank: usize, c: Rational) -> Self {
        Self::term(Monomial::one(rank), c)
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        if !K::LAURENT {
            assert!(m.0.iter().all(|&e| e >= 0), "negative exponent in ordinary polynomial");
        }
        let mut p = Self::zero(m.0.len());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn var(rank: usize, i: usize) -> Self {
        Self::term(Monomial::var(rank, i), Rational::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(rank: usize, terms: I) -> Self {
        let mut p = Self::zero(rank);
        for (m, c) in terms {
            assert_eq!(m.0.len(), rank);
            p.add_term(m, c);
        }
        p
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().next().map(|(m, c)| m.0.iter().all(|&e| e == 0) && c.is_one()).unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn leading_term(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_rank(&self, other: &Self) -> Result<(), PolyError> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(PolyError::RankMismatch(self.rank, other.rank))
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_rank(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c);
        }
        Ok(out)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank);
        }
        Polynomial {
            rank: self.rank,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
            kind: PhantomData,
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        Polynomial {
            rank: self.rank,
            terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect(),
            kind: PhantomData,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(self.rank);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Common total degree of all terms, or `None` for zero / inhomogeneous input.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(Monomial::degree);
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Homogeneous of degree `d`; zero counts as homogeneous of every degree.
    pub fn is_homogeneous_of(&self, d: i64) -> bool {
        self.terms.keys().all(|m| m.degree() == d)
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Least common denominator of the coefficients.
    pub fn denominator(&self) -> BigInt {
        self.terms.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()))
    }

    /// Sets the assigned variables to the given values; the result keeps the
    /// same rank with those variables absent.
    pub fn substitute(&self, assignment: &[Option<Rational>]) -> Result<Self, PolyError> {
        if assignment.len() != self.rank {
            return Err(PolyError::Assignment { got: assignment.len(), rank: self.rank });
        }
        let mut out = Self::zero(self.rank);
        for (m, c) in &self.terms {
            let mut coeff = c.clone();
            let mut exps = m.0.clone();
            for (i, a) in assignment.iter().enumerate() {
                if let Some(v) = a {
                    let e = exps[i];
                    if e != 0 {
                        if v.is_zero() {
                            if e < 0 {
                                return Err(PolyError::UnitEvaluation(i));
                            }
                            coeff = Rational::zero();
                        } else if e > 0 {
                            coeff *= num_traits::pow(v.clone(), e as usize);
                        } else {
                            coeff /= num_traits::pow(v.clone(), (-e) as usize);
                        }
                    }
                    exps[i] = 0;
                }
            }
            out.add_term(Monomial(exps), coeff);
        }
        Ok(out)
    }

    /// Full evaluation at a point.
    pub fn evaluate(&self, point: &[Rational]) -> Result<Rational, PolyError> {
        let assignment: Vec<_> = point.iter().cloned().map(Some).collect();
        let p = self.substitute(&assignment)?;
        Ok(p.coeff(&Monomial::one(self.rank)))
    }

    /// Componentwise minimum of the exponents (zero vector for the zero polynomial).
    fn min_exponents(&self) -> Monomial {
        let mut mins = vec![i32::MAX; self.rank];
        for m in self.terms.keys() {
            for (a, &e) in mins.iter_mut().zip(&m.0) {
                *a = (*a).min(e);
            }
        }
        if self.terms.is_empty() {
            mins = vec![0; self.rank];
        }
        Monomial(mins)
    }

    /// Division with respect to graded-lex leading terms on polynomials with
    /// non-negative exponents. Returns the quotient iff the division is exact.
    fn div_exact_nonneg(&self, g: &Self) -> Option<Self> {
        let (lm, lc) = g.leading_term()?;
        let (lm, lc) = (lm.clone(), lc.clone());
        let mut r = self.clone();
        let mut q = Self::zero(self.rank);
        while let Some((m, c)) = r.leading_term() {
            if !m.divisible_by(&lm) {
                return None;
            }
            let t = m.div(&lm);
            let coef = c / &lc;
            for (gm, gc) in &g.terms {
                r.add_term(gm.mul(&t), -(&coef * gc));
            }
            q.add_term(t, coef);
        }
        Some(q)
    }

    /// Exact quotient `self / g`, or `None` if `g` does not divide `self`.
    pub fn div_exact(&self, g: &Self) -> Option<Self> {
        if g.is_zero() || self.rank != g.rank {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.rank));
        }
        if !K::LAURENT {
            return self.div_exact_nonneg(g);
        }
        // Shift both to genuine polynomials with no monomial factor; in the
        // Laurent ring g | f iff the shifted g divides the shifted f.
        let mf = self.min_exponents();
        let mg = g.min_exponents();
        let inv = |m: &Monomial| Monomial(m.0.iter().map(|e| -e).collect());
        let f0 = self.mul_monomial(&inv(&mf));
        let g0 = g.mul_monomial(&inv(&mg));
        let q = f0.div_exact_nonneg(&g0)?;
        Some(q.mul_monomial(&mf.div(&mg)))
    }

    /// `self` is a unit of the ring: a nonzero constant (or a monomial, for Laurent).
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && (K::LAURENT || self.terms.keys().all(|m| m.0.iter().all(|&e| e == 0)))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = render_monomial(m, names);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{abs}*{mono}"));
            }
        }
        out
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson(self.terms.iter().map(|(m, c)| (m.0.clone(), c.to_string())).collect())
    }

    pub fn from_json(rank: usize, json: &PolyJson) -> Result<Self, PolyError> {
        let mut p = Self::zero(rank);
        for (exps, c) in &json.0 {
            if exps.len() != rank {
                return Err(PolyError::Malformed(format!("exponent vector {exps:?} has wrong length")));
            }
            if !K::LAURENT && exps.iter().any(|&e| e < 0) {
                return Err(PolyError::Malformed("negative exponent in ordinary polynomial".into()));
            }
            let c: Rational = c.parse().map_err(|_| PolyError::Malformed(format!("bad coefficient {c:?}")))?;
            p.add_term(Monomial(exps.clone()), c);
        }
        Ok(p)
    }
}

fn render_monomial(m: &Monomial, names: &[String]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.0.iter().enumerate() {
        let name = names.get(i).cloned().unwrap_or_else(|| format!("x{}", i + 1));
        match e {
            0 => {}
            1 => parts.push(name),
            _ => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}

pub fn default_names(rank: usize) -> Vec<String> {
    (1..=rank).map(|i| format!("x{i}")).collect()
}

impl<K: Kind> fmt::Display for Polynomial<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&default_names(self.rank)))
    }
}

/// JSON form: a list of `[exponent-vector, coefficient-string]` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson(pub Vec<(Vec<i32>, String)>);

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl<K: Kind> $tr<&Polynomial<K>> for &Polynomial<K> {
            type Output = Polynomial<K>;
            fn $m(self, rhs: &Polynomial<K>) -> Polynomial<K> {
                self.$checked(rhs).expect("polynomial rank mismatch")
            }
        }
        impl<K: Kind> $tr<Polynomial<K>> for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $m(self, rhs: Polynomial<K>) -> Polynomial<K> {
                (&self).$m(&rhs)
            }
        }
        impl<K: Kind> $tr<&Polynomial<K>> for Polynomial<K> {
            type Output = Polynomial<K>;
            fn $m(self, rhs: &Polynomial<K>) -> Polynomial<K> {
                (&self).$m(rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);

impl<K: Kind> Neg for &Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        self.scale(&-Rational::one())
    }
}

impl<K: Kind> Neg for Polynomial<K> {
    type Output = Polynomial<K>;
    fn neg(self) -> Polynomial<K> {
        -&self
    }
}

impl PolyElt {
    /// Replaces `x_j` by the polynomial `value` (which must not involve `x_j`).
    pub fn compose_variable(&self, j: usize, value: &PolyElt) -> PolyElt {
        let max_e = self.terms.keys().map(|m| m.0[j]).max().unwrap_or(0).max(0) as usize;
        let mut powers = vec![PolyElt::one(self.rank)];
        for k in 1..=max_e {
            let next = &powers[k - 1] * value;
            powers.push(next);
        }
        let mut out = PolyElt::zero(self.rank);
        for (m, c) in &self.terms {
            let e = m.0[j] as usize;
            let mut rest = m.clone();
            rest.0[j] = 0;
            for (pm, pc) in &powers[e].terms {
                out.add_term(pm.mul(&rest), c * pc);
            }
        }
        out
    }

    /// Applies a change of lattice basis: the linear form of weight `w`
    /// becomes the linear form of weight `M·w`.
    pub fn change_basis(&self, matrix: &[Vec<i64>]) -> PolyElt {
        let rank = self.rank;
        let images: Vec<PolyElt> = (0..rank)
            .map(|i| PolyElt::from_terms(rank, (0..rank).map(|k| (Monomial::var(rank, k), rat(matrix[k][i])))))
            .collect();
        let mut out = PolyElt::zero(rank);
        for (m, c) in &self.terms {
            let mut t = PolyElt::constant(rank, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                t = &t * &images[i].pow(e as u32);
            }
            out = out + t;
        }
        out
    }
}

impl LaurentElt {
    /// The character `e^w`.
    pub fn character(w: &Weight) -> Result<LaurentElt, PolyError> {
        Ok(LaurentElt::term(Monomial(w.to_i32s()?), Rational::one()))
    }

    /// Applies a change of lattice basis to the exponents.
    pub fn change_basis(&self, matrix: &[Vec<i64>]) -> LaurentElt {
        let mut out = LaurentElt::zero(self.rank);
        for (m, c) in &self.terms {
            let e: Vec<i32> =
                matrix.iter().map(|row| row.iter().zip(&m.0).map(|(&a, &b)| a as i32 * b).sum()).collect();
            out.add_term(Monomial(e), c.clone());
        }
        out
    }
}

/// The linear form `Σ wᵢ xᵢ`: the cohomological Euler class of the character `w`.
pub fn linear_from_weight(w: &Weight) -> Result<PolyElt, PolyError> {
    if w.is_zero() {
        return Err(crate::error::LatticeError::ZeroWeight.into());
    }
    let rank = w.rank();
    Ok(PolyElt::from_terms(
        rank,
        w.coords().iter().enumerate().map(|(i, c)| (Monomial::var(rank, i), Rational::from_integer(c.clone()))),
    ))
}

/// `1 − e^w`: the K-theoretic Euler class of the character `w`.
pub fn euler_from_weight_k(w: &Weight) -> Result<LaurentElt, PolyError> {
    if w.is_zero() {
        return Err(crate::error::LatticeError::ZeroWeight.into());
    }
    Ok(LaurentElt::one(w.rank()) - LaurentElt::character(w)?)
}

/// Divides `f` by the linear form of `w`, viewing `f` as univariate in the
/// lowest-index variable where `w` is nonzero. `Some(quotient)` iff `f`
/// vanishes on the hyperplane `w = 0`.
pub fn divides_linear(w: &Weight, f: &PolyElt) -> Result<Option<PolyElt>, PolyError> {
    if w.rank() != f.rank() {
        return Err(PolyError::RankMismatch(w.rank(), f.rank()));
    }
    let lin = linear_from_weight(w)?;
    let j = w.leading_index().expect("nonzero");
    let rank = f.rank();
    let wj = Rational::from_integer(w.coords()[j].clone());
    let mut rest = lin.clone();
    rest.add_term(Monomial::var(rank, j), -wj.clone());

    let max_e = f.terms.keys().map(|m| m.0[j]).max().unwrap_or(0) as usize;
    let mut groups = vec![PolyElt::zero(rank); max_e + 1];
    for (m, c) in &f.terms {
        let mut base = m.clone();
        let e = base.0[j] as usize;
        base.0[j] = 0;
        groups[e].add_term(base, c.clone());
    }
    let mut quotient = PolyElt::zero(rank);
    for e in (1..=max_e).rev() {
        let c = groups[e].scale(&(Rational::one() / &wj));
        if c.is_zero() {
            continue;
        }
        let mut shift = Monomial::one(rank);
        shift.0[j] = (e - 1) as i32;
        quotient = quotient + c.mul_monomial(&shift);
        let update = &c * &rest;
        groups[e - 1] = &groups[e - 1] - &update;
    }
    Ok(groups[0].is_zero().then_some(quotient))
}

/// Divides `f` by `1 − e^w` in `Q[Λ]` via univariate reduction in the
/// lowest-index variable where `w` is nonzero: the quotient ring is free over
/// the other variables with basis `x_j^0 … x_j^{d−1}`, so `f` is divisible iff
/// its reduction vanishes.
pub fn divides_euler_k(w: &Weight, f: &LaurentElt) -> Result<Option<LaurentElt>, PolyError> {
    if w.rank() != f.rank() {
        return Err(PolyError::RankMismatch(w.rank(), f.rank()));
    }
    if w.is_zero() {
        return Err(crate::error::LatticeError::ZeroWeight.into());
    }
    let j = w.leading_index().expect("nonzero");
    if w.coords()[j].is_negative() {
        // f = q'(1 − e^{−w}) = (−e^{−w} q')(1 − e^w)
        let nw = w.neg();
        return Ok(divides_euler_k(&nw, f)?.map(|q| -(q * LaurentElt::character(&nw).expect("exponent fits"))));
    }
    let wexp = w.to_i32s()?;
    let d = wexp[j];
    let rank = f.rank();
    let shifted = |e: &Monomial, k: i32| Monomial(e.0.iter().zip(&wexp).map(|(a, b)| a + k * b).collect());

    let mut remainder = LaurentElt::zero(rank);
    let mut quotient = LaurentElt::zero(rank);
    for (m, c) in &f.terms {
        // x^m = x^{m − t·w} · (e^w)^t with the reduced x_j exponent in [0, d)
        let t = Integer::div_floor(&m.0[j], &d);
        remainder.add_term(shifted(m, -t), c.clone());
        if t > 0 {
            for k in 1..=t {
                quotient.add_term(shifted(m, -k), -c.clone());
            }
        } else if t < 0 {
            for k in 0..-t {
                quotient.add_term(shifted(m, k), c.clone());
            }
        }
    }
    Ok(remainder.is_zero().then_some(quotient))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(c: &[i64]) -> Weight {
        Weight::from_i64s(c)
    }

    fn x(i: usize) -> PolyElt {
        PolyElt::var(2, i)
    }

    fn e(exps: &[i32]) -> LaurentElt {
        LaurentElt::term(Monomial(exps.to_vec()), rat(1))
    }

    #[test]
    fn ring_arith() {
        let p = &x(0) * &(&x(0) + &x(1));
        assert_eq!(p, &x(0).pow(2) + &(&x(0) * &x(1)));
        assert_eq!(&e(&[1, 0]) * &e(&[-1, 0]), LaurentElt::one(2));
        assert!((&p - &p).is_zero());
        assert_eq!(PolyElt::zero(2).checked_add(&PolyElt::zero(3)), Err(PolyError::RankMismatch(2, 3)));
    }

    #[test]
    fn linear_forms() {
        assert_eq!(linear_from_weight(&w(&[1, 0])).unwrap(), x(0));
        assert_eq!(linear_from_weight(&w(&[2, 1])).unwrap(), &x(0).scale(&rat(2)) + &x(1));
        assert_eq!(linear_from_weight(&w(&[-1, -1])).unwrap(), -(&x(0) + &x(1)));
        assert!(linear_from_weight(&w(&[0, 0])).is_err());
    }

    #[test]
    fn k_euler_classes() {
        assert_eq!(euler_from_weight_k(&w(&[1, 0])).unwrap(), &LaurentElt::one(2) - &e(&[1, 0]));
        // 1 − e^{−α} = −e^{−α}(1 − e^{α})
        let lhs = euler_from_weight_k(&w(&[-1, 0])).unwrap();
        let rhs = -(&e(&[-1, 0]) * &euler_from_weight_k(&w(&[1, 0])).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn linear_division() {
        let f = &x(0).pow(2) + &(&x(0) * &x(1));
        assert_eq!(divides_linear(&w(&[1, 0]), &f).unwrap(), Some(&x(0) + &x(1)));
        let g = &x(0).pow(2) - &x(1).pow(2);
        let q = divides_linear(&w(&[1, -1]), &g).unwrap().unwrap();
        assert_eq!(q, &x(0) + &x(1));
        assert_eq!(&q * &linear_from_weight(&w(&[1, -1])).unwrap(), g);
        assert_eq!(divides_linear(&w(&[1, 0]), &x(1)).unwrap(), None);
        // imprimitive weight gives rational quotient
        let q = divides_linear(&w(&[2, 0]), &x(0)).unwrap().unwrap();
        assert!(!q.is_integral());
    }

    #[test]
    fn euler_division() {
        let f = &LaurentElt::one(2) - &e(&[-1, -1]);
        assert_eq!(divides_euler_k(&w(&[1, 1]), &f).unwrap(), Some(-e(&[-1, -1])));
        let f = &LaurentElt::one(2) - &e(&[2, 0]);
        assert_eq!(divides_euler_k(&w(&[1, 0]), &f).unwrap(), Some(&LaurentElt::one(2) + &e(&[1, 0])));
        let f = &LaurentElt::one(2) - &e(&[0, 1]);
        assert_eq!(divides_euler_k(&w(&[1, 0]), &f).unwrap(), None);
    }

    #[test]
    fn substitution() {
        // x(x + a) with a → 0 gives x²
        let f = &x(0) * &(&x(0) + &x(1));
        assert_eq!(f.substitute(&[None, Some(rat(0))]).unwrap(), x(0).pow(2));
        // x(a·x + 1 − a) with a → 1 gives x², a = e^{(0,1)} and x a free variable
        let xx = e(&[1, 0]);
        let a = e(&[0, 1]);
        let f = &xx * &(&(&a * &xx) + &(&LaurentElt::one(2) - &a));
        assert_eq!(f.substitute(&[None, Some(rat(1))]).unwrap(), xx.pow(2));
        let f = euler_from_weight_k(&w(&[1, 0])).unwrap();
        assert!(f.substitute(&[Some(rat(1)), None]).unwrap().is_zero());
        assert_eq!(e(&[-1, 0]).substitute(&[Some(rat(0)), None]), Err(PolyError::UnitEvaluation(0)));
    }

    #[test]
    fn exact_division() {
        let f = &(&x(0) + &x(1)) * &(&x(0) - &x(1).scale(&rat(3)));
        assert_eq!(f.div_exact(&(&x(0) + &x(1))), Some(&x(0) - &x(1).scale(&rat(3))));
        assert_eq!(f.div_exact(&x(0)), None);
        let g = &e(&[-2, 1]) * &euler_from_weight_k(&w(&[1, -1])).unwrap();
        assert_eq!(g.div_exact(&euler_from_weight_k(&w(&[1, -1])).unwrap()), Some(e(&[-2, 1])));
    }

    #[test]
    fn rendering_and_json() {
        let f = &x(0).pow(2).scale(&rat(2)) - &x(1);
        assert_eq!(f.render(&["a".into(), "b".into()]), "2*a^2 - b");
        let l = &LaurentElt::one(2) - &e(&[-1, 2]);
        assert_eq!(l.render(&["a".into(), "q".into()]), "-a^-1*q^2 + 1");
        let j = l.to_json();
        assert_eq!(LaurentElt::from_json(2, &j).unwrap(), l);
        assert!(PolyElt::from_json(2, &PolyJson(vec![(vec![-1, 0], "1".into())])).is_err());
    }

    #[test]
    fn basis_change() {
        // weight (1,0) under M = [[1,-1],[1,0]] becomes (1,1)
        let m = vec![vec![1, -1], vec![1, 0]];
        let l = linear_from_weight(&w(&[1, 0])).unwrap().change_basis(&m);
        assert_eq!(l, linear_from_weight(&w(&[1, 1])).unwrap());
        let k = euler_from_weight_k(&w(&[0, 1])).unwrap().change_basis(&m);
        assert_eq!(k, euler_from_weight_k(&w(&[-1, 0])).unwrap());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn poly() -> impl Strategy<Value = PolyElt> {
            prop::collection::vec(((0i32..3, 0i32..3), -4i64..=4), 0..5)
                .prop_map(|ts| PolyElt::from_terms(2, ts.into_iter().map(|((a, b), c)| (Monomial(vec![a, b]), rat(c)))))
        }

        fn laurent() -> impl Strategy<Value = LaurentElt> {
            prop::collection::vec(((-2i32..3, -2i32..3), -4i64..=4), 0..5).prop_map(|ts| {
                LaurentElt::from_terms(2, ts.into_iter().map(|((a, b), c)| (Monomial(vec![a, b]), rat(c))))
            })
        }

        fn weight() -> impl Strategy<Value = Weight> {
            (-3i64..=3, -3i64..=3).prop_filter("nonzero", |(a, b)| *a != 0 || *b != 0).prop_map(|(a, b)| w(&[a, b]))
        }

        proptest! {
            #[test]
            fn ring_axioms(a in poly(), b in poly(), c in poly()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
            }

            #[test]
            fn laurent_axioms(a in laurent(), b in laurent(), c in laurent()) {
                prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            }

            #[test]
            fn linear_division_properties(wt in weight(), f in poly()) {
                let lin = linear_from_weight(&wt).unwrap();
                let prod = &f * &lin;
                prop_assert_eq!(divides_linear(&wt, &prod).unwrap(), Some(f.clone()));
                let a = divides_linear(&wt, &f).unwrap();
                let b = divides_linear(&wt.neg(), &f).unwrap();
                prop_assert_eq!(a.is_some(), b.is_some());
                if let Some(q) = a {
                    prop_assert_eq!(&q * &lin, f);
                }
            }

            #[test]
            fn euler_division_properties(wt in weight(), f in laurent()) {
                let eu = euler_from_weight_k(&wt).unwrap();
                let prod = &f * &eu;
                prop_assert_eq!(divides_euler_k(&wt, &prod).unwrap(), Some(f.clone()));
                let a = divides_euler_k(&wt, &f).unwrap();
                let b = divides_euler_k(&wt.neg(), &f).unwrap();
                prop_assert_eq!(a.is_some(), b.is_some());
                if let Some(q) = a {
                    prop_assert_eq!(&q * &eu, f.clone());
                }
                // agrees with general exact division
                prop_assert_eq!(divides_euler_k(&wt, &f).unwrap(), f.div_exact(&eu));
            }

            #[test]
            fn exact_division_roundtrip(f in laurent(), g in laurent()) {
                prop_assume!(!g.is_zero());
                prop_assert_eq!((&f * &g).div_exact(&g), Some(f));
            }
        }
    }
}
