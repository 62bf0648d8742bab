//! q-analogues for the loop group of SU(2): q-factorials and binomials, the
//! `p_k` family, the symmetric values `a_{mnℓ}`, a discrete closed one-form
//! on the grid, and the explicit K-theory generators of the affine A1 graph.

use num_traits::One;
use serde::Serialize;

use crate::coxeter::{CartanMatrix, Parabolic};
use crate::error::QError;
use crate::graph::GkmGraph;
use crate::lattice::Weight;
use crate::poly::{LaurentElt, Monomial, PolyElt, Rational};
use crate::ring::ClassK;

/// A polynomial in the single variable `q`.
pub type QPoly = PolyElt;

fn q_pow(e: u32) -> QPoly {
    QPoly::term(Monomial(vec![e as i32]), Rational::one())
}

/// `1 − q^e`.
fn one_minus_q(e: u32) -> QPoly {
    QPoly::one(1) - q_pow(e)
}

/// `(1 − q)(1 − q²)⋯(1 − q^a)`.
pub fn q_factorial(a: i64) -> Result<QPoly, QError> {
    if a < 0 {
        return Err(QError::Domain(format!("q_factorial({a})")));
    }
    Ok((1..=a as u32).fold(QPoly::one(1), |acc, i| acc * one_minus_q(i)))
}

/// `(1 − q^lo)(1 − q^{lo+1})⋯(1 − q^hi)`; empty product when `hi < lo`.
fn q_rising(lo: u32, hi: u32) -> QPoly {
    (lo..=hi).fold(QPoly::one(1), |acc, i| acc * one_minus_q(i))
}

/// Gaussian binomial `a!_q / (b!_q (a−b)!_q)`; the division is checked to be exact.
pub fn q_binomial(a: i64, b: i64) -> Result<QPoly, QError> {
    if a < 0 || b < 0 || b > a {
        return Err(QError::Domain(format!("q_binomial({a}, {b})")));
    }
    let den = q_factorial(b)? * q_factorial(a - b)?;
    q_factorial(a)?.div_exact(&den).ok_or_else(|| QError::Domain(format!("q_binomial({a}, {b}) is not a polynomial")))
}

/// `p_k(λ) = (1 − λ_1)⋯(1 − λ_n) · Σ_{0≤|α|<k} λ^α`.
pub fn p_k(k: i64, lambdas: &[LaurentElt]) -> Result<LaurentElt, QError> {
    if k <= 0 {
        return Err(QError::Domain(format!("p_k needs k ≥ 1, got {k}")));
    }
    let rank = lambdas
        .first()
        .map(LaurentElt::rank)
        .ok_or_else(|| QError::Domain("p_k needs at least one argument".into()))?;
    if lambdas.iter().any(|l| l.is_zero() || l.rank() != rank) {
        return Err(QError::Domain("p_k arguments must be nonzero and of equal rank".into()));
    }
    let k = k as usize;
    // h[j] = complete homogeneous symmetric polynomial of degree j in the prefix seen so far
    let mut h = vec![LaurentElt::zero(rank); k];
    h[0] = LaurentElt::one(rank);
    for l in lambdas {
        for j in 1..k {
            let add = &h[j - 1] * l;
            h[j] = &h[j] + &add;
        }
    }
    let sum = h.into_iter().fold(LaurentElt::zero(rank), |acc, x| acc + x);
    let euler = lambdas.iter().fold(LaurentElt::one(rank), |acc, l| acc * (LaurentElt::one(rank) - l));
    Ok(euler * sum)
}

fn laurent_to_q(f: &LaurentElt) -> QPoly {
    QPoly::from_terms(1, f.terms().map(|(m, c)| (m.clone(), c.clone())))
}

fn q_laurent(e: i32) -> LaurentElt {
    LaurentElt::term(Monomial(vec![e]), Rational::one())
}

fn check_mnl(m: i64, n: i64, l: i64) -> Result<(), QError> {
    if m < 1 || n < 1 || l < 0 {
        return Err(QError::Domain(format!("a_mnl needs m, n ≥ 1 and ℓ ≥ 0, got ({m}, {n}, {l})")));
    }
    Ok(())
}

/// `a_{mnℓ} = p_m(q^n, q^{n+1}, …, q^{n+ℓ})`.
pub fn a_mnl(m: i64, n: i64, l: i64) -> Result<QPoly, QError> {
    check_mnl(m, n, l)?;
    let args: Vec<LaurentElt> = (n..=n + l).map(|e| q_laurent(e as i32)).collect();
    Ok(laurent_to_q(&p_k(m, &args)?))
}

/// `a_{mnℓ}` through Gaussian binomials:
/// `(1 − q^n)⋯(1 − q^{n+ℓ}) · Σ_{i<m} q^{in} (ℓ+i choose ℓ)_q`.
pub fn a_mnl_qbinomial(m: i64, n: i64, l: i64) -> Result<QPoly, QError> {
    check_mnl(m, n, l)?;
    let mut sum = QPoly::zero(1);
    for i in 0..m {
        sum = sum + q_pow((i * n) as u32) * q_binomial(l + i, l)?;
    }
    Ok(q_rising(n as u32, (n + l) as u32) * sum)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymmetryReport {
    pub pairs_checked: usize,
    /// `(m, n, ℓ)` with `a_{mnℓ} ≠ a_{nmℓ}`.
    pub failures: Vec<(i64, i64, i64)>,
    /// `(m, n, ℓ)` where the two computation routes disagree.
    pub route_mismatches: Vec<(i64, i64, i64)>,
    pub max_degree: i64,
}

impl SymmetryReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.route_mismatches.is_empty()
    }
}

/// Checks `a_{mnℓ} = a_{nmℓ}` for `1 ≤ m, n ≤ max_mn`, `0 ≤ ℓ ≤ max_l`, and
/// that both routes to `a_{mnℓ}` agree.
pub fn check_coefficient_symmetry(max_mn: i64, max_l: i64) -> Result<SymmetryReport, QError> {
    if max_mn < 1 || max_l < 0 {
        return Err(QError::Domain(format!("bounds ({max_mn}, {max_l})")));
    }
    let mut report =
        SymmetryReport { pairs_checked: 0, failures: Vec::new(), route_mismatches: Vec::new(), max_degree: 0 };
    for l in 0..=max_l {
        let table: Vec<Vec<QPoly>> = (1..=max_mn)
            .map(|m| (1..=max_mn).map(|n| a_mnl(m, n, l)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        for m in 1..=max_mn {
            for n in 1..=max_mn {
                let a = &table[(m - 1) as usize][(n - 1) as usize];
                report.max_degree = report.max_degree.max(a.max_degree().unwrap_or(0));
                if *a != a_mnl_qbinomial(m, n, l)? {
                    report.route_mismatches.push((m, n, l));
                }
                if m < n {
                    report.pairs_checked += 1;
                    if *a != table[(n - 1) as usize][(m - 1) as usize] {
                        report.failures.push((m, n, l));
                    }
                }
            }
        }
    }
    Ok(report)
}

/// The one-form `ω = f δi + g δj` on the grid `Z≥0²` for fixed `ℓ`, where
/// `c(i,j) = q^{ij} (i+ℓ choose ℓ)_q (1 − q^{j+1})⋯(1 − q^{j+ℓ})`,
/// `f = c·(1 − q^j)` and `g = c·(1 − q^i)`.
#[derive(Clone, Debug)]
pub struct GridForm {
    pub l: i64,
}

impl GridForm {
    fn c(&self, i: i64, j: i64) -> Result<QPoly, QError> {
        Ok(q_pow((i * j) as u32) * q_binomial(i + self.l, self.l)? * q_rising((j + 1) as u32, (j + self.l) as u32))
    }

    /// Integral of `ω` along the edge `(i,j) → (i+1,j)`.
    pub fn f(&self, i: i64, j: i64) -> Result<QPoly, QError> {
        Ok(self.c(i, j)? * one_minus_q(j as u32))
    }

    /// Integral of `ω` along the edge `(i,j) → (i,j+1)`.
    pub fn g(&self, i: i64, j: i64) -> Result<QPoly, QError> {
        Ok(self.c(i, j)? * one_minus_q(i as u32))
    }

    /// `dω` on the unit square with lower-left corner `(i, j)`.
    pub fn curl(&self, i: i64, j: i64) -> Result<QPoly, QError> {
        Ok(self.g(i + 1, j)? - self.g(i, j)? - (self.f(i, j + 1)? - self.f(i, j)?))
    }

    /// Counter-clockwise integral over the boundary of `[0,m]×[0,n]`, returned
    /// as (bottom, right, top, left).
    pub fn boundary(&self, m: i64, n: i64) -> Result<[QPoly; 4], QError> {
        let mut sides = [QPoly::zero(1), QPoly::zero(1), QPoly::zero(1), QPoly::zero(1)];
        for i in 0..m {
            sides[0] = &sides[0] + &self.f(i, 0)?;
            sides[2] = &sides[2] - &self.f(i, n)?;
        }
        for j in 0..n {
            sides[1] = &sides[1] + &self.g(m, j)?;
            sides[3] = &sides[3] - &self.g(0, j)?;
        }
        Ok(sides)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosednessReport {
    pub l: i64,
    pub squares_checked: usize,
    /// Unit squares where `dω ≠ 0`.
    pub failures: Vec<(i64, i64)>,
    pub rectangles_checked: usize,
    /// Rectangles `[0,m]×[0,n]` whose boundary sides are not
    /// `(0, a_{nmℓ}, −a_{mnℓ}, 0)` or whose total is nonzero.
    pub stokes_failures: Vec<(i64, i64)>,
}

impl ClosednessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.stokes_failures.is_empty()
    }
}

/// Evaluates `dω` on every unit square of `[0,I]×[0,J]` and the boundary
/// identity on every rectangle `[0,m]×[0,n]` with `1 ≤ m ≤ I`, `1 ≤ n ≤ J`.
pub fn check_omega_closed(max_i: i64, max_j: i64, l: i64) -> Result<ClosednessReport, QError> {
    if max_i < 1 || max_j < 1 || l < 0 {
        return Err(QError::Domain(format!("rectangle ({max_i}, {max_j}) with ℓ = {l}")));
    }
    let form = GridForm { l };
    let mut report = ClosednessReport {
        l,
        squares_checked: 0,
        failures: Vec::new(),
        rectangles_checked: 0,
        stokes_failures: Vec::new(),
    };
    for i in 0..max_i {
        for j in 0..max_j {
            report.squares_checked += 1;
            if !form.curl(i, j)?.is_zero() {
                report.failures.push((i, j));
            }
        }
    }
    for m in 1..=max_i {
        for n in 1..=max_j {
            report.rectangles_checked += 1;
            let [bottom, right, top, left] = form.boundary(m, n)?;
            let total = &(&bottom + &right) + &(&top + &left);
            let ok = bottom.is_zero()
                && left.is_zero()
                && right == a_mnl(n, m, l)?
                && top == -a_mnl(m, n, l)?
                && total.is_zero();
            if !ok {
                report.stokes_failures.push((m, n));
            }
        }
    }
    Ok(report)
}

/// Index of the explicit K-theory generator `x_i` of `ΩSU(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OmegaSu2Index {
    pub i: i64,
}

impl OmegaSu2Index {
    pub fn new(i: i64) -> Self {
        OmegaSu2Index { i }
    }

    /// `ℓ = |i| − 1`.
    pub fn l(&self) -> i64 {
        self.i.abs() - 1
    }

    /// `k = |i − 1/2| − 1/2`.
    pub fn k(&self) -> i64 {
        if self.i > 0 {
            self.i - 1
        } else {
            -self.i
        }
    }

    /// Length of vertex `i`: `ℓ + k + 1`.
    pub fn length(&self) -> usize {
        (self.l() + self.k() + 1).max(0) as usize
    }
}

/// Vertex label `m ∈ Z` of the vertex of the given length:
/// `0, 1, −1, 2, −2, …`.
pub fn omega_m_of_length(length: usize) -> i64 {
    let l = length as i64;
    if l % 2 == 1 {
        (l + 1) / 2
    } else {
        -l / 2
    }
}

pub fn omega_length_of_m(m: i64) -> usize {
    if m > 0 {
        (2 * m - 1) as usize
    } else {
        (-2 * m) as usize
    }
}

/// Root coordinates to the `(a, q)` basis with `a = −α₂`, `q = α₁ + α₂`.
pub const OMEGA_BASIS: [[i64; 2]; 2] = [[1, -1], [1, 0]];

/// The affine A1 moment graph truncated at `max_length`, in the `(a, q)`
/// basis, after asserting that the edge between the vertices labelled `m`
/// and `n` carries `±(a + (m+n)q)`.
pub fn omega_su2_graph(max_length: usize) -> Result<GkmGraph, QError> {
    let cartan = CartanMatrix::parse("2,-2;-2,2").expect("affine A1 is a valid Cartan matrix");
    let g = GkmGraph::from_cartan(&cartan, &Parabolic::new([1]), Some(max_length))
        .map_err(|e| QError::Domain(e.to_string()))?;
    let basis: Vec<Vec<i64>> = OMEGA_BASIS.iter().map(|r| r.to_vec()).collect();
    let g = g
        .change_basis(&basis)
        .with_variables(vec!["a".into(), "q".into()])
        .map_err(|e| QError::Domain(e.to_string()))?;
    check_omega_identification(&g)?;
    Ok(g)
}

/// The graph has one vertex per length and edge weights `±(a + (m+n)q)`.
pub fn check_omega_identification(g: &GkmGraph) -> Result<(), QError> {
    for (idx, v) in g.vertices().iter().enumerate() {
        if v.length != idx {
            return Err(QError::Domain(format!("vertex {} is not in length order", v.id)));
        }
    }
    for e in g.edges() {
        let s = omega_m_of_length(g.length(e.source));
        let t = omega_m_of_length(g.length(e.target));
        let expected = Weight::from_i64s(&[1, s + t]);
        if e.weight != expected && e.weight != expected.neg() {
            return Err(QError::Domain(format!("edge {}-{} has weight {}, expected ±{}", s, t, e.weight, expected)));
        }
    }
    Ok(())
}

fn character(a: i64, q: i64) -> LaurentElt {
    LaurentElt::term(Monomial(vec![a as i32, q as i32]), Rational::one())
}

/// `x_i(m)` from the three-case formula (`x_0 = 1`).
pub fn omega_su2_value(idx: OmegaSu2Index, m: i64) -> Result<LaurentElt, QError> {
    if idx.i == 0 {
        return Ok(LaurentElt::one(2));
    }
    let (l, k) = (idx.l(), idx.k());
    if m > k {
        let args: Vec<LaurentElt> = (-m - k..=-m + l).map(|e| character(-1, e)).collect();
        p_k(m - k, &args)
    } else if m >= -l {
        Ok(LaurentElt::zero(2))
    } else {
        let args: Vec<LaurentElt> = (m - l..=m + k).map(|e| character(1, e)).collect();
        p_k(-m - l, &args)
    }
}

/// The explicit generator `x_i` on a graph from [`omega_su2_graph`].
pub fn omega_su2_k_generator(idx: OmegaSu2Index, g: &GkmGraph) -> Result<ClassK, QError> {
    check_omega_identification(g)?;
    if idx.length() > g.max_length() {
        return Err(QError::OutOfTruncation(idx.i));
    }
    let values = (0..g.num_vertices())
        .map(|v| omega_su2_value(idx, omega_m_of_length(g.length(v))))
        .collect::<Result<_, _>>()?;
    Ok(ClassK::new(values))
}
