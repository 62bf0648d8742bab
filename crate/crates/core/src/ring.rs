//! The GKM ring of a moment graph: tuples of point-ring elements, one per
//! vertex, subject to the edge divisibility conditions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{PolyError, RingError};
use crate::graph::{GkmGraph, Theory};
use crate::lattice::Weight;
use crate::linalg::{RationalSystem, Solution};
use crate::poly::{
    divides_euler_k, divides_linear, euler_from_weight_k, linear_from_weight, Kind, Laurent, LaurentElt, Monomial,
    Ordinary, PolyElt, PolyJson, Polynomial, Rational,
};

/// The equivariant cohomology of a point (`Ordinary`) or K-theory of a point (`Laurent`).
pub trait PointRing: Kind {
    const THEORY: Theory;

    /// `α` in H, `1 − e^α` in K.
    fn euler(w: &Weight) -> Result<Polynomial<Self>, PolyError>;

    fn divide_by_euler(w: &Weight, f: &Polynomial<Self>) -> Result<Option<Polynomial<Self>>, PolyError>;

    /// Passage to the non-equivariant theory: variables to 0 (H) or characters to 1 (K).
    fn specialize(f: &Polynomial<Self>) -> Result<Rational, PolyError>;

    fn change_basis(f: &Polynomial<Self>, matrix: &[Vec<i64>]) -> Polynomial<Self>;
}

impl PointRing for Ordinary {
    const THEORY: Theory = Theory::H;

    fn euler(w: &Weight) -> Result<PolyElt, PolyError> {
        linear_from_weight(w)
    }

    fn divide_by_euler(w: &Weight, f: &PolyElt) -> Result<Option<PolyElt>, PolyError> {
        divides_linear(w, f)
    }

    fn specialize(f: &PolyElt) -> Result<Rational, PolyError> {
        f.evaluate(&vec![Rational::zero(); f.rank()])
    }

    fn change_basis(f: &PolyElt, matrix: &[Vec<i64>]) -> PolyElt {
        f.change_basis(matrix)
    }
}

impl PointRing for Laurent {
    const THEORY: Theory = Theory::K;

    fn euler(w: &Weight) -> Result<LaurentElt, PolyError> {
        euler_from_weight_k(w)
    }

    fn divide_by_euler(w: &Weight, f: &LaurentElt) -> Result<Option<LaurentElt>, PolyError> {
        divides_euler_k(w, f)
    }

    fn specialize(f: &LaurentElt) -> Result<Rational, PolyError> {
        f.evaluate(&vec![Rational::one(); f.rank()])
    }

    fn change_basis(f: &LaurentElt, matrix: &[Vec<i64>]) -> LaurentElt {
        f.change_basis(matrix)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Unchecked,
    Passed,
    Failed,
}

/// A candidate element of the GKM ring: one value per graph vertex, indexed
/// like the graph's vertices.
#[derive(Clone, Debug)]
pub struct GkmClass<K: Kind> {
    values: Vec<Polynomial<K>>,
    pub membership: Membership,
}

pub type ClassH = GkmClass<Ordinary>;
pub type ClassK = GkmClass<Laurent>;

impl<K: Kind> PartialEq for GkmClass<K> {
    fn eq(&self, other: &Self) -> bool {
        self.values == other.values
    }
}

impl<K: Kind> Eq for GkmClass<K> {}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeViolation {
    pub source: String,
    pub target: String,
    pub weight: Weight,
    /// The non-divisible difference `c(source) − c(target)`, rendered.
    pub difference: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MembershipReport {
    pub member: bool,
    pub violations: Vec<EdgeViolation>,
}

#[derive(Serialize, Deserialize)]
struct ClassJson {
    theory: Theory,
    values: BTreeMap<String, PolyJson>,
}

impl<K: PointRing> GkmClass<K> {
    pub fn new(values: Vec<Polynomial<K>>) -> Self {
        GkmClass { values, membership: Membership::Unchecked }
    }

    pub fn zero(g: &GkmGraph) -> Self {
        Self::new(vec![Polynomial::zero(g.rank()); g.num_vertices()])
    }

    pub fn one(g: &GkmGraph) -> Self {
        Self::new(vec![Polynomial::one(g.rank()); g.num_vertices()])
    }

    pub fn theory(&self) -> Theory {
        K::THEORY
    }

    pub fn values(&self) -> &[Polynomial<K>] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Polynomial<K> {
        &self.values[v]
    }

    pub fn into_values(self) -> Vec<Polynomial<K>> {
        self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Polynomial::is_zero)
    }

    /// Runs the membership test and caches the outcome.
    pub fn verify(&mut self, g: &GkmGraph) -> Result<MembershipReport, RingError> {
        let report = is_member(g, self)?;
        self.membership = if report.member { Membership::Passed } else { Membership::Failed };
        Ok(report)
    }

    pub fn scale(&self, c: &Polynomial<K>) -> Self {
        Self::new(self.values.iter().map(|v| v * c).collect())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        if self.values.len() != other.values.len() {
            return Err(RingError::Mismatch("classes on different graphs".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.checked_add(b)).collect::<Result<_, _>>()?;
        Ok(Self::new(values))
    }

    pub fn change_basis(&self, matrix: &[Vec<i64>]) -> Self {
        GkmClass {
            values: self.values.iter().map(|v| K::change_basis(v, matrix)).collect(),
            membership: self.membership,
        }
    }

    /// Values rendered with the graph's variable names, one per vertex.
    pub fn render(&self, g: &GkmGraph) -> Vec<String> {
        self.values.iter().map(|v| v.render(g.variables())).collect()
    }

    pub fn to_json(&self, g: &GkmGraph) -> String {
        let raw = ClassJson {
            theory: K::THEORY,
            values: g.vertices().iter().zip(&self.values).map(|(v, p)| (v.id.clone(), p.to_json())).collect(),
        };
        serde_json::to_string_pretty(&raw).expect("class serializes") + "\n"
    }

    pub fn from_json(g: &GkmGraph, text: &str) -> Result<Self, RingError> {
        let raw: ClassJson = serde_json::from_str(text).map_err(|e| RingError::Mismatch(format!("class json: {e}")))?;
        if raw.theory != K::THEORY {
            return Err(RingError::Mismatch(format!("class is {:?}, expected {:?}", raw.theory, K::THEORY)));
        }
        let mut values = Vec::with_capacity(g.num_vertices());
        for v in g.vertices() {
            let p = raw.values.get(&v.id).ok_or_else(|| RingError::Mismatch(format!("no value at vertex {}", v.id)))?;
            values.push(Polynomial::from_json(g.rank(), p)?);
        }
        if raw.values.len() != values.len() {
            return Err(RingError::Mismatch("class has values at unknown vertices".into()));
        }
        Ok(Self::new(values))
    }
}

fn check_shape<K: Kind>(g: &GkmGraph, c: &GkmClass<K>) -> Result<(), RingError> {
    if c.values.len() != g.num_vertices() {
        return Err(RingError::Mismatch(format!(
            "class has {} values, graph has {} vertices",
            c.values.len(),
            g.num_vertices()
        )));
    }
    if let Some(v) = c.values.iter().find(|v| v.rank() != g.rank()) {
        return Err(RingError::Mismatch(format!("value of rank {} on a rank-{} graph", v.rank(), g.rank())));
    }
    Ok(())
}

/// Checks `e(α) | c(source) − c(target)` on every edge.
pub fn is_member<K: PointRing>(g: &GkmGraph, c: &GkmClass<K>) -> Result<MembershipReport, RingError> {
    check_shape(g, c)?;
    let mut violations = Vec::new();
    for e in g.edges() {
        let diff = c.value(e.source).checked_sub(c.value(e.target))?;
        if K::divide_by_euler(&e.weight, &diff)?.is_none() {
            violations.push(EdgeViolation {
                source: g.vertex(e.source).id.clone(),
                target: g.vertex(e.target).id.clone(),
                weight: e.weight.clone(),
                difference: diff.render(g.variables()),
            });
        }
    }
    Ok(MembershipReport { member: violations.is_empty(), violations })
}

/// Product of the Euler classes of the downward edges at `v`.
pub fn euler_class<K: PointRing>(g: &GkmGraph, v: usize) -> Polynomial<K> {
    g.down_edges(v)
        .map(|e| K::euler(&e.weight).expect("graph weights are nonzero"))
        .fold(Polynomial::one(g.rank()), |acc, x| acc * x)
}

/// Vertexwise product.
pub fn multiply<K: PointRing>(g: &GkmGraph, a: &GkmClass<K>, b: &GkmClass<K>) -> Result<GkmClass<K>, RingError> {
    check_shape(g, a)?;
    check_shape(g, b)?;
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x.checked_mul(y)).collect::<Result<_, _>>()?;
    let mut out = GkmClass::new(values);
    if a.membership == Membership::Passed && b.membership == Membership::Passed {
        out.membership = Membership::Passed;
        debug_assert!(is_member(g, &out)?.member, "GKM ring is closed under products");
    }
    Ok(out)
}

pub fn specialize_class<K: PointRing>(c: &GkmClass<K>) -> Result<Vec<Rational>, RingError> {
    Ok(c.values.iter().map(K::specialize).collect::<Result<_, _>>()?)
}

/// A generator whose lift has non-integer coefficients at some vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonIntegralLift {
    pub generator: String,
    pub vertex: String,
    pub denominator: String,
}

/// Module generators indexed by graph vertices, in increasing length.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet<K: Kind> {
    /// `vertices[i]` is the graph vertex of `classes[i]`.
    pub vertices: Vec<usize>,
    pub classes: Vec<GkmClass<K>>,
    pub non_integral: Vec<NonIntegralLift>,
}

impl<K: PointRing> GeneratorSet<K> {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn for_vertex(&self, v: usize) -> Option<&GkmClass<K>> {
        self.vertices.iter().position(|&u| u == v).map(|i| &self.classes[i])
    }

    pub fn by_id<'a>(&'a self, g: &GkmGraph, id: &str) -> Option<&'a GkmClass<K>> {
        self.for_vertex(g.vertex_index(id)?)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &GkmClass<K>)> {
        self.vertices.iter().copied().zip(&self.classes)
    }

    /// Conditions for a triangular basis: `x_v(w) = 0` for `w ≠ v` with
    /// `length(w) ≤ length(v)`, and `x_v(v)` a unit multiple of the Euler class.
    pub fn check_triangular(&self, g: &GkmGraph) -> Result<(), RingError> {
        for (v, x) in self.iter() {
            check_shape(g, x)?;
            let id = &g.vertex(v).id;
            for w in 0..g.num_vertices() {
                if w != v && g.length(w) <= g.length(v) && !x.value(w).is_zero() {
                    return Err(RingError::NotTriangular(format!(
                        "generator {id} is nonzero at {} of length {}",
                        g.vertex(w).id,
                        g.length(w)
                    )));
                }
            }
            let unit = x.value(v).div_exact(&euler_class::<K>(g, v));
            if !unit.is_some_and(|u| u.is_unit()) {
                return Err(RingError::NotTriangular(format!(
                    "generator {id} is not a unit multiple of the Euler class at its own vertex"
                )));
            }
        }
        Ok(())
    }
}

/// Images of the degree-`d` monomials on the hyperplane `α = 0`, with `x_j`
/// eliminated for the lowest `j` where `α_j ≠ 0`.
fn hyperplane_restriction(alpha: &Weight, f: &PolyElt) -> PolyElt {
    let n = alpha.rank();
    let j = alpha.leading_index().expect("nonzero weight");
    let aj = Rational::from_integer(alpha.coords()[j].clone());
    let value = PolyElt::from_terms(
        n,
        (0..n)
            .filter(|&i| i != j)
            .map(|i| (Monomial::var(n, i), -Rational::from_integer(alpha.coords()[i].clone()) / &aj)),
    );
    f.compose_variable(j, &value)
}

/// The unique homogeneous `X` of degree `degree` with `α | X − known(u)` for
/// every downward edge `(w → u, α)`.
fn solve_lift(g: &GkmGraph, w: usize, degree: u32, known: &[PolyElt], generator: &str) -> Result<PolyElt, RingError> {
    let n = g.rank();
    let basis = Monomial::all_of_degree(n, degree);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs = Vec::new();
    for e in g.down_edges(w) {
        let images: Vec<PolyElt> = basis
            .iter()
            .map(|m| hyperplane_restriction(&e.weight, &PolyElt::term(m.clone(), Rational::one())))
            .collect();
        let target = hyperplane_restriction(&e.weight, &known[e.target]);
        let mut monos: BTreeSet<Monomial> = target.terms().map(|(m, _)| m.clone()).collect();
        for im in &images {
            monos.extend(im.terms().map(|(m, _)| m.clone()));
        }
        for mu in monos {
            rows.push(images.iter().map(|im| im.coeff(&mu)).collect());
            rhs.push(target.coeff(&mu));
        }
    }
    let system = RationalSystem::new(rows, rhs, basis.len()).expect("rows are built with basis width");
    match system.solve() {
        Solution::Unique(c) => Ok(PolyElt::from_terms(n, basis.into_iter().zip(c))),
        Solution::Inconsistent { .. } => {
            Err(RingError::NoSolution { generator: generator.to_string(), vertex: g.vertex(w).id.clone() })
        }
        Solution::Underdetermined { .. } => {
            Err(RingError::NonUnique { generator: generator.to_string(), vertex: g.vertex(w).id.clone() })
        }
    }
}

fn lift_generator(g: &GkmGraph, v: usize, order: &[usize]) -> Result<(ClassH, Vec<NonIntegralLift>), RingError> {
    let n = g.rank();
    let id = g.vertex(v).id.clone();
    let degree = g.length(v) as u32;
    let mut values = vec![PolyElt::zero(n); g.num_vertices()];
    values[v] = euler_class::<Ordinary>(g, v);
    let mut flags = Vec::new();
    for &w in order {
        if g.length(w) <= g.length(v) {
            continue;
        }
        let x = solve_lift(g, w, degree, &values, &id)?;
        if !x.is_integral() {
            flags.push(NonIntegralLift {
                generator: id.clone(),
                vertex: g.vertex(w).id.clone(),
                denominator: x.denominator().to_string(),
            });
        }
        values[w] = x;
    }
    Ok((GkmClass::new(values), flags))
}

/// Canonical cohomology generators `x_v` for every vertex with
/// `length(v) ≤ max_length` (all vertices if `None`).
pub fn canonical_generators_h(g: &GkmGraph, max_length: Option<usize>) -> Result<GeneratorSet<Ordinary>, RingError> {
    canonical_generators_h_ordered(g, max_length, &g.by_length())
}

/// As [`canonical_generators_h`], processing vertices in `order`, which must
/// list every vertex in non-decreasing length.
pub fn canonical_generators_h_ordered(
    g: &GkmGraph,
    max_length: Option<usize>,
    order: &[usize],
) -> Result<GeneratorSet<Ordinary>, RingError> {
    debug_assert!(order.windows(2).all(|p| g.length(p[0]) <= g.length(p[1])));
    let vertices: Vec<usize> =
        g.by_length().into_iter().filter(|&v| max_length.is_none_or(|d| g.length(v) <= d)).collect();
    let lifted = vertices.par_iter().map(|&v| lift_generator(g, v, order)).collect::<Result<Vec<_>, _>>()?;
    let mut classes = Vec::with_capacity(lifted.len());
    let mut non_integral = Vec::new();
    for (mut c, flags) in lifted {
        c.membership = Membership::Passed;
        classes.push(c);
        non_integral.extend(flags);
    }
    Ok(GeneratorSet { vertices, classes, non_integral })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stability {
    Stable,
    Provisional,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionTerm<K: Kind> {
    /// Graph vertex of the generator.
    pub generator: usize,
    pub coefficient: Polynomial<K>,
    pub stability: Stability,
}

/// Coefficients of a class in a triangular generator set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisExpansion<K: Kind> {
    /// One term per generator, in generator order (zero coefficients included).
    pub terms: Vec<ExpansionTerm<K>>,
    /// The class is not exhausted by the given generators (nonzero residual
    /// at a vertex without a generator).
    pub remainder: bool,
}

impl<K: PointRing> BasisExpansion<K> {
    pub fn coefficient(&self, vertex: usize) -> Option<&Polynomial<K>> {
        self.terms.iter().find(|t| t.generator == vertex).map(|t| &t.coefficient)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = &ExpansionTerm<K>> {
        self.terms.iter().filter(|t| !t.coefficient.is_zero())
    }

    pub fn all_stable(&self) -> bool {
        self.nonzero().all(|t| t.stability == Stability::Stable)
    }

    /// Structure constants in the non-equivariant theory.
    pub fn specialize(&self) -> Result<Vec<(usize, Rational)>, RingError> {
        self.terms.iter().map(|t| Ok((t.generator, K::specialize(&t.coefficient)?))).collect()
    }

    /// `Σ k_v x_v`.
    pub fn resum(&self, g: &GkmGraph, gens: &GeneratorSet<K>) -> Result<GkmClass<K>, RingError> {
        let mut acc = GkmClass::zero(g);
        for t in self.nonzero() {
            let x = gens
                .for_vertex(t.generator)
                .ok_or_else(|| RingError::Mismatch("expansion uses a generator outside the set".into()))?;
            acc = acc.checked_add(&x.scale(&t.coefficient))?;
        }
        Ok(acc)
    }

    /// Lines `generator-id : coefficient`, marking provisional coefficients.
    pub fn render(&self, g: &GkmGraph) -> String {
        let mut out = String::new();
        for t in self.nonzero() {
            out.push_str(&format!("{} : {}", g.vertex(t.generator).id, t.coefficient.render(g.variables())));
            if t.stability == Stability::Provisional {
                out.push_str("  [provisional]");
            }
            out.push('\n');
        }
        if self.remainder {
            out.push_str("(nonzero remainder beyond the generator set)\n");
        }
        out
    }
}

/// Writes `c = Σ k_v x_v` by peeling off generators in increasing length.
pub fn expand_in_basis<K: PointRing>(
    g: &GkmGraph,
    c: &GkmClass<K>,
    gens: &GeneratorSet<K>,
) -> Result<BasisExpansion<K>, RingError> {
    check_shape(g, c)?;
    gens.check_triangular(g)?;
    let mut order: Vec<usize> = (0..gens.len()).collect();
    order.sort_by_key(|&i| g.length(gens.vertices[i]));

    let max_deg = c.values.iter().filter_map(Polynomial::max_degree).max().unwrap_or(0);
    let homogeneous = {
        let mut degs = c.values.iter().filter(|p| !p.is_zero()).map(Polynomial::homogeneous_degree);
        match degs.next() {
            None => true,
            Some(first) => first.is_some() && degs.all(|d| d == first),
        }
    };
    let stability = |len: usize| match (g.truncation(), K::THEORY) {
        (None, _) => Stability::Stable,
        (Some(_), Theory::H) if (len as i64) <= max_deg || homogeneous => Stability::Stable,
        (Some(l), Theory::K) if len + 1 < l => Stability::Stable,
        _ => Stability::Provisional,
    };

    let mut residual = c.values.clone();
    let mut terms = vec![None; gens.len()];
    for i in order {
        let v = gens.vertices[i];
        let x = &gens.classes[i];
        let k = residual[v]
            .div_exact(x.value(v))
            .ok_or_else(|| RingError::OutsideSpan { vertex: g.vertex(v).id.clone() })?;
        if !k.is_zero() {
            for (r, xv) in residual.iter_mut().zip(x.values()) {
                if !xv.is_zero() {
                    *r = &*r - &(&k * xv);
                }
            }
        }
        terms[i] = Some(ExpansionTerm { generator: v, coefficient: k, stability: stability(g.length(v)) });
    }
    let remainder = residual.iter().any(|r| !r.is_zero());
    Ok(BasisExpansion { terms: terms.into_iter().map(|t| t.expect("every generator visited")).collect(), remainder })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub passed: bool,
    /// Minimal support vertices with the outcome of `e(v) | c(v)`.
    pub checked: Vec<(String, bool)>,
}

/// Leading-term test of the filtration by support: at every minimal vertex of
/// the support, the value is divisible by the Euler class.
pub fn filtration_leading_check<K: PointRing>(g: &GkmGraph, c: &GkmClass<K>) -> Result<FiltrationReport, RingError> {
    check_shape(g, c)?;
    let support: Vec<usize> = (0..g.num_vertices()).filter(|&v| !c.value(v).is_zero()).collect();
    let mut checked = Vec::new();
    for &v in &support {
        let below = g.below(v);
        if support.iter().any(|&u| u != v && below[u]) {
            continue;
        }
        let mut q = c.value(v).clone();
        let mut ok = true;
        for e in g.down_edges(v) {
            match K::divide_by_euler(&e.weight, &q)? {
                Some(next) => q = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        checked.push((g.vertex(v).id.clone(), ok));
    }
    Ok(FiltrationReport { passed: checked.iter().all(|(_, ok)| *ok), checked })
}

/// `f = content · ∏ factors` with primitive factors whose first nonzero
/// coordinate is positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: Rational,
    pub factors: Vec<Weight>,
}

impl Factorization {
    pub fn expand(&self, rank: usize) -> PolyElt {
        self.factors
            .iter()
            .map(|w| linear_from_weight(w).expect("factors are nonzero"))
            .fold(PolyElt::constant(rank, self.content.clone()), |acc, l| acc * l)
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.content)?;
        for w in &self.factors {
            write!(f, "·{w}")?;
        }
        Ok(())
    }
}

fn normalize_form(coords: Vec<BigInt>) -> Option<Weight> {
    let g = coords.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if g.is_zero() {
        return None;
    }
    let lead_negative = coords.iter().find(|c| !c.is_zero()).is_some_and(|c| c.is_negative());
    let sign = if lead_negative { -BigInt::one() } else { BigInt::one() };
    Some(Weight::new(coords.iter().map(|c| c / &g * &sign).collect()))
}

fn positive_divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            small.push(d.clone());
            if &d * &d != n {
                large.push(&n / &d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Primitive `(a, b)` with `a·x_i + b·x_j` dividing the restriction of `f` to
/// the `(x_i, x_j)` coordinate plane (other variables set to zero).
fn binary_linear_factors(f: &PolyElt, i: usize, j: usize) -> Vec<(BigInt, BigInt)> {
    let mut coeffs: BTreeMap<i32, Rational> = BTreeMap::new();
    for (m, c) in f.terms() {
        if m.0.iter().enumerate().all(|(k, &e)| k == i || k == j || e == 0) {
            coeffs.insert(m.0[i], c.clone());
        }
    }
    let mut out = Vec::new();
    let (Some(&lo), Some(&hi)) = (coeffs.keys().next(), coeffs.keys().next_back()) else {
        return out;
    };
    if lo > 0 {
        out.push((BigInt::one(), BigInt::zero()));
    }
    let d = f.homogeneous_degree().unwrap_or(0) as i32;
    if hi < d {
        out.push((BigInt::zero(), BigInt::one()));
    }
    // h(t) = Σ c_k t^{k−lo}, integer coefficients
    let den = coeffs.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let h: Vec<BigInt> = (lo..=hi)
        .map(|k| {
            (coeffs.get(&k).cloned().unwrap_or_else(Rational::zero) * Rational::from_integer(den.clone())).to_integer()
        })
        .collect();
    if h.len() < 2 {
        return out;
    }
    let a0 = &h[0];
    let ad = &h[h.len() - 1];
    for p in positive_divisors(a0) {
        for q in positive_divisors(ad) {
            if !p.gcd(&q).is_one() {
                continue;
            }
            for p in [p.clone(), -p.clone()] {
                // h(p/q)·q^deg = Σ h_k p^k q^{deg−k}
                let deg = h.len() - 1;
                let val: BigInt = h
                    .iter()
                    .enumerate()
                    .map(|(k, hk)| hk * num_traits::pow(p.clone(), k) * num_traits::pow(q.clone(), deg - k))
                    .sum();
                if val.is_zero() {
                    // root t = x_i/x_j = p/q  ⇒  factor q·x_i − p·x_j
                    out.push((q.clone(), -p));
                }
            }
        }
    }
    out
}

fn candidate_forms(f: &PolyElt) -> Vec<Weight> {
    let n = f.rank();
    let embed = |pairs: &[(usize, BigInt)]| {
        let mut c = vec![BigInt::zero(); n];
        for (k, v) in pairs {
            c[*k] = v.clone();
        }
        normalize_form(c)
    };
    let mut out = BTreeSet::new();
    match n {
        2 => {
            for (a, b) in binary_linear_factors(f, 0, 1) {
                out.extend(embed(&[(0, a), (1, b)]));
            }
        }
        3 => {
            let xy = binary_linear_factors(f, 0, 1);
            let xz = binary_linear_factors(f, 0, 2);
            for (a1, b1) in xy.iter().filter(|p| !p.0.is_zero()) {
                for (a2, c2) in xz.iter().filter(|p| !p.0.is_zero()) {
                    out.extend(embed(&[(0, a1 * a2), (1, b1 * a2), (2, a1 * c2)]));
                }
            }
            for (b3, c3) in binary_linear_factors(f, 1, 2) {
                out.extend(embed(&[(1, b3), (2, c3)]));
            }
        }
        _ => {}
    }
    out.into_iter().collect()
}

/// Splits a homogeneous polynomial into a rational content times integral
/// linear forms; `None` if it does not split over `Q` (or is zero).
pub fn factor_into_linear_forms(f: &PolyElt) -> Result<Option<Factorization>, RingError> {
    let n = f.rank();
    if f.is_zero() {
        return Ok(None);
    }
    if f.homogeneous_degree().is_none() {
        return Err(RingError::NotHomogeneous);
    }
    if n > 3 {
        return Err(RingError::Unsupported(format!("rank {n} exceeds 3")));
    }
    let mut rest = f.clone();
    let mut factors = Vec::new();
    for i in 0..n {
        let xi = PolyElt::var(n, i);
        while rest.max_degree() > Some(0) {
            match rest.div_exact(&xi) {
                Some(q) => {
                    rest = q;
                    factors.push(normalize_form((0..n).map(|k| BigInt::from(u8::from(k == i))).collect()).unwrap());
                }
                None => break,
            }
        }
    }
    while rest.max_degree() > Some(0) {
        let mut progressed = false;
        for w in candidate_forms(&rest) {
            let l = linear_from_weight(&w)?;
            while let Some(q) = rest.div_exact(&l) {
                rest = q;
                factors.push(w.clone());
                progressed = true;
            }
        }
        if !progressed {
            return Ok(None);
        }
    }
    factors.sort();
    let content = rest.coeff(&Monomial::one(n));
    Ok(Some(Factorization { content, factors }))
}

/// Ordered ways to write `n > 0` as a product of `k` positive integers.
fn multiplicative_compositions(n: &BigInt, k: usize) -> Vec<Vec<BigInt>> {
    if k == 0 {
        return if n.is_one() { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for d in positive_divisors(n) {
        for mut rest in multiplicative_compositions(&(n / &d), k - 1) {
            rest.insert(0, d.clone());
            out.push(rest);
        }
    }
    out
}

/// All ways to write a value as a product of arrows `∏ β_j` with `β_j ∈ Λ`
/// (content and sign absorbed into the arrows), as sorted multisets. The
/// factorization's own orientation comes first.
pub fn bouquets(f: &PolyElt) -> Result<Vec<Vec<Weight>>, RingError> {
    let Some(fac) = factor_into_linear_forms(f)? else {
        return Ok(Vec::new());
    };
    if !fac.content.is_integer() {
        return Ok(Vec::new());
    }
    let c = fac.content.to_integer();
    let k = fac.factors.len();
    let mut out: Vec<(usize, Vec<Weight>)> = Vec::new();
    for mults in multiplicative_compositions(&c.abs(), k) {
        for signs in 0u64..(1u64 << k) {
            let negatives = signs.count_ones() as usize;
            if (negatives % 2 == 1) != c.is_negative() {
                continue;
            }
            let mut arrows: Vec<Weight> = fac
                .factors
                .iter()
                .zip(&mults)
                .enumerate()
                .map(|(j, (w, m))| {
                    let m = if signs >> j & 1 == 1 { -m.clone() } else { m.clone() };
                    w.scale(&m)
                })
                .collect();
            arrows.sort();
            out.push((negatives, arrows));
        }
    }
    out.sort();
    let mut seen = BTreeSet::new();
    Ok(out.into_iter().filter(|(_, a)| seen.insert(a.clone())).map(|(_, a)| a).collect())
}

fn bouquet_class(rank: usize, arrows: &[Weight]) -> LaurentElt {
    arrows
        .iter()
        .map(|b| euler_from_weight_k(b).expect("arrows are nonzero"))
        .fold(LaurentElt::one(rank), |acc, e| acc * e)
}

/// Upper bound on backtracking steps per generator.
const BOUQUET_SEARCH_LIMIT: usize = 1_000_000;

fn lift_one(g: &GkmGraph, v: usize, x: &ClassH) -> Result<ClassK, RingError> {
    let id = &g.vertex(v).id;
    let n = g.rank();
    let mut options: Vec<Vec<LaurentElt>> = Vec::with_capacity(g.num_vertices());
    for (w, val) in x.values().iter().enumerate() {
        if val.is_zero() {
            options.push(vec![LaurentElt::zero(n)]);
            continue;
        }
        let mut arrows = bouquets(val)?;
        if arrows.is_empty() {
            return Err(RingError::DoesNotSplit { generator: id.clone(), vertex: g.vertex(w).id.clone() });
        }
        if w == v {
            // the generator restricts to the Euler class of its own cell
            let mut own: Vec<Weight> = g.down_edges(v).map(|e| e.weight.clone()).collect();
            own.sort();
            if arrows.contains(&own) {
                arrows = vec![own];
            }
        }
        options.push(arrows.iter().map(|a| bouquet_class(n, a)).collect());
    }

    let order = g.by_length();
    let mut choice = vec![0usize; g.num_vertices()];
    let compatible = |w: usize, choice: &[usize], assigned: &[bool]| -> Result<bool, RingError> {
        for e in g.down_edges(w) {
            if assigned[e.target] {
                let diff = &options[w][choice[w]] - &options[e.target][choice[e.target]];
                if divides_euler_k(&e.weight, &diff)?.is_none() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    let mut assigned = vec![false; g.num_vertices()];
    let mut depth = 0;
    let mut steps = 0;
    let mut fresh = true;
    while depth < order.len() {
        let w = order[depth];
        if fresh {
            choice[w] = 0;
        } else {
            choice[w] += 1;
        }
        steps += 1;
        if steps > BOUQUET_SEARCH_LIMIT {
            return Err(RingError::Unsupported(format!(
                "bouquet search for {id} exceeded {BOUQUET_SEARCH_LIMIT} steps"
            )));
        }
        if choice[w] >= options[w].len() {
            if depth == 0 {
                let first = GkmClass::new(options.iter().map(|o| o[0].clone()).collect());
                let report = is_member(g, &first)?;
                let bad = report.violations.first().expect("an exhaustive search failure has a witness");
                return Err(RingError::LiftFailsMembership {
                    generator: id.clone(),
                    source_vertex: bad.source.clone(),
                    target_vertex: bad.target.clone(),
                });
            }
            assigned[w] = false;
            depth -= 1;
            fresh = false;
            continue;
        }
        assigned[w] = true;
        if compatible(w, &choice, &assigned)? {
            depth += 1;
            fresh = true;
        } else {
            assigned[w] = false;
            fresh = false;
        }
    }
    let mut class = GkmClass::new((0..g.num_vertices()).map(|w| options[w][choice[w]].clone()).collect());
    class.membership = Membership::Passed;
    Ok(class)
}

/// Transfers cohomology generators to K-theory through bouquets: a value
/// `∏ β_j` (arrows in `Λ`) becomes `∏ (1 − e^{β_j})`. Arrows at the
/// generator's own vertex are the cell's weights; elsewhere the first
/// representation, in a fixed order, satisfying every edge condition is used.
/// The result must be a triangular set of members.
pub fn lift_generators_to_k(g: &GkmGraph, gens: &GeneratorSet<Ordinary>) -> Result<GeneratorSet<Laurent>, RingError> {
    let classes = gens.iter().map(|(v, x)| lift_one(g, v, x)).collect::<Result<Vec<_>, _>>()?;
    let out = GeneratorSet { vertices: gens.vertices.clone(), classes, non_integral: Vec::new() };
    out.check_triangular(g)?;
    Ok(out)
}

/// Exact conversion of specialized structure constants to integers.
pub fn to_integer(r: &Rational) -> Option<i64> {
    r.is_integer().then(|| r.to_integer().to_i64()).flatten()
}
