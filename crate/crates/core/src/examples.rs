//! Worked example suites built purely from library operations: the G2
//! homogeneous space with six cells, the based loop group of SU(2), and the
//! twisted affine rank-two example `[[2,−1],[−4,2]]`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::coxeter::{CartanMatrix, Parabolic};
use crate::error::{Error, RingError};
use crate::graph::GkmGraph;
use crate::lattice::{primitive_part, Weight};
use crate::poly::{linear_from_weight, LaurentElt, Ordinary, PolyElt, Rational};
use crate::qcomb::{omega_su2_graph, omega_su2_k_generator, OmegaSu2Index, OMEGA_BASIS};
use crate::ring::{
    canonical_generators_h, canonical_generators_h_ordered, expand_in_basis, is_member, lift_generators_to_k, multiply,
    ClassH, ClassK, GeneratorSet, GkmClass, PointRing, Stability,
};

/// `x^power = Σ c·generator` in the non-equivariant ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub power: u32,
    pub terms: Vec<(String, String)>,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x^{}=", self.power)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (name, c)) in self.terms.iter().enumerate() {
            let (neg, abs) = match c.strip_prefix('-') {
                Some(rest) => (true, rest),
                None => (false, c.as_str()),
            };
            if neg {
                write!(f, "-")?;
            } else if k > 0 {
                write!(f, "+")?;
            }
            if abs != "1" {
                write!(f, "{abs}")?;
            }
            write!(f, "{name}")?;
        }
        Ok(())
    }
}

pub fn render_relations(rels: &[Relation]) -> String {
    rels.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")
}

/// Expands `x^n` for `n = 2..=max_power` and specializes the coefficients.
/// `names[i]` labels `gens.classes[i]`; `x = gens.classes[1]`.
pub fn power_relations<K: PointRing>(
    g: &GkmGraph,
    gens: &GeneratorSet<K>,
    names: &[String],
    max_power: u32,
) -> Result<Vec<Relation>, Error> {
    let x = &gens.classes[1];
    let mut power = x.clone();
    let mut out = Vec::new();
    for n in 2..=max_power {
        power = multiply(g, &power, x)?;
        let expansion = expand_in_basis(g, &power, gens)?;
        let mut terms = Vec::new();
        for (i, (_, c)) in expansion.specialize()?.into_iter().enumerate() {
            if !c.is_zero() {
                terms.push((names[i].clone(), c.to_string()));
            }
        }
        out.push(Relation { power: n, terms });
    }
    Ok(out)
}

fn constant_class<K: PointRing>(g: &GkmGraph, c: crate::poly::Polynomial<K>) -> GkmClass<K> {
    GkmClass::new(vec![c; g.num_vertices()])
}

/// Primitive edge directions with both signs, sorted.
pub fn edge_directions(g: &GkmGraph) -> Vec<Weight> {
    let mut out: Vec<Weight> = g
        .edges()
        .iter()
        .flat_map(|e| {
            let p = primitive_part(&e.weight).expect("edge weights are nonzero").0;
            [p.neg(), p]
        })
        .collect();
    out.sort();
    out.dedup();
    out
}

pub const G2_NAMES: [&str; 6] = ["1", "x", "y", "z", "s", "t"];

/// `G2/P` for the parabolic of the long simple root (node 1 of `[[2,−1],[−3,2]]`).
pub fn g2_graph() -> GkmGraph {
    let cartan = CartanMatrix::parse("2,-1;-3,2").expect("valid");
    GkmGraph::from_cartan(&cartan, &Parabolic::new([0]), None)
        .expect("G2/P is finite")
        .with_variables(vec!["r1".into(), "r2".into()])
        .expect("rank 2")
}

/// A basis `(a, b)` of edge directions under which the displayed relations hold.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BasisChoice {
    pub a: Weight,
    pub b: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct G2Report {
    pub cohomology: Vec<Relation>,
    pub k_theory: Vec<Relation>,
    /// All `(a, b)` for which the four equivariant cohomology relations hold.
    pub h_bases: Vec<BasisChoice>,
    /// All `(a, b)` for which the four equivariant K-theory relations hold.
    pub k_bases: Vec<BasisChoice>,
    /// First entry of `h_bases`, if any.
    pub chosen: Option<BasisChoice>,
    /// The chosen basis also satisfies the K-theory relations.
    pub chosen_works_in_k: bool,
    /// Expansion of `x·x` in the equivariant basis, rendered.
    pub x_squared: String,
    pub lifted_members: bool,
}

impl G2Report {
    pub fn passed(&self) -> bool {
        render_relations(&self.cohomology) == "x^2=y, x^3=2z, x^4=2s, x^5=2t, x^6=0"
            && render_relations(&self.k_theory) == "x^2=y, x^3=2z-s, x^4=2s-t, x^5=2t, x^6=0"
            && self.chosen.is_some()
            && self.chosen_works_in_k
            && self.lifted_members
    }
}

fn names(ns: &[&str]) -> Vec<String> {
    ns.iter().map(|s| s.to_string()).collect()
}

/// The four equivariant cohomology relations
/// `x(x+a)=y`, `x(x+a)(x+b)=2z`, `…(x+2a+b)=2s`, `…(x+2b+a)=2t`.
pub fn g2_h_relations_hold(g: &GkmGraph, gens: &GeneratorSet<Ordinary>, a: &Weight, b: &Weight) -> Result<bool, Error> {
    let [_, x, y, z, s, t] = <&[ClassH; 6]>::try_from(gens.classes.as_slice())
        .map_err(|_| Error::Other("G2/P has six generators".into()))?;
    let shifted =
        |w: Weight| -> Result<ClassH, Error> { Ok(x.checked_add(&constant_class(g, linear_from_weight(&w)?))?) };
    let two = |c: &ClassH| c.scale(&PolyElt::constant(2, Rational::from_integer(2.into())));
    let factors = [
        shifted(a.clone())?,
        shifted(b.clone())?,
        shifted(a.scale(&2.into()).add(b))?,
        shifted(b.scale(&2.into()).add(a))?,
    ];
    let targets = [y.clone(), two(z), two(s), two(t)];
    let mut lhs = x.clone();
    for (f, target) in factors.iter().zip(&targets) {
        lhs = multiply(g, &lhs, f)?;
        if lhs != *target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The four equivariant K-theory relations, with `a`, `b` the characters
/// `e^a`, `e^b`: `x(ax+1−a)=y`, `x(ax+1−a)(bx+1−b)=(1+a⁻¹)z−a⁻¹s`,
/// `…(a²bx+1−a²b)=(1+b⁻¹)s−b⁻¹t`, `…(ab²x+1−ab²)=(1+a⁻¹b⁻¹)t`.
pub fn g2_k_relations_hold(
    g: &GkmGraph,
    gens: &GeneratorSet<crate::poly::Laurent>,
    a: &Weight,
    b: &Weight,
) -> Result<bool, Error> {
    let [_, x, y, z, s, t] = <&[ClassK; 6]>::try_from(gens.classes.as_slice())
        .map_err(|_| Error::Other("G2/P has six generators".into()))?;
    let n = g.rank();
    let ch = |w: &Weight| LaurentElt::character(w).map_err(Error::from);
    let one = LaurentElt::one(n);
    let factor = |w: Weight| -> Result<ClassK, Error> {
        let c = ch(&w)?;
        Ok(x.scale(&c).checked_add(&constant_class(g, &one - &c))?)
    };
    let (ea_inv, eb_inv) = (ch(&a.neg())?, ch(&b.neg())?);
    let eab_inv = ch(&a.add(b).neg())?;
    let factors = [
        factor(a.clone())?,
        factor(b.clone())?,
        factor(a.scale(&2.into()).add(b))?,
        factor(b.scale(&2.into()).add(a))?,
    ];
    let targets = [
        y.clone(),
        z.scale(&(&one + &ea_inv)).checked_add(&s.scale(&-ea_inv.clone()))?,
        s.scale(&(&one + &eb_inv)).checked_add(&t.scale(&-eb_inv.clone()))?,
        t.scale(&(&one + &eab_inv)),
    ];
    let mut lhs = x.clone();
    for (f, target) in factors.iter().zip(&targets) {
        lhs = multiply(g, &lhs, f)?;
        if lhs != *target {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn run_g2() -> Result<G2Report, Error> {
    let g = g2_graph();
    let gens = canonical_generators_h(&g, None)?;
    let nm = names(&G2_NAMES);
    let cohomology = power_relations(&g, &gens, &nm, 6)?;
    let kgens = lift_generators_to_k(&g, &gens)?;
    let lifted_members = kgens.classes.iter().all(|c| is_member(&g, c).map(|r| r.member).unwrap_or(false));
    let k_theory = power_relations(&g, &kgens, &nm, 6)?;

    let dirs = edge_directions(&g);
    let mut h_bases = Vec::new();
    let mut k_bases = Vec::new();
    for a in &dirs {
        for b in &dirs {
            if primitive_part(a)?.0 == primitive_part(b)?.0 || primitive_part(a)?.0 == primitive_part(&b.neg())?.0 {
                continue;
            }
            if g2_h_relations_hold(&g, &gens, a, b)? {
                h_bases.push(BasisChoice { a: a.clone(), b: b.clone() });
            }
            if g2_k_relations_hold(&g, &kgens, a, b)? {
                k_bases.push(BasisChoice { a: a.clone(), b: b.clone() });
            }
        }
    }
    let chosen = h_bases.first().cloned();
    let chosen_works_in_k = chosen.as_ref().is_some_and(|c| k_bases.contains(c));
    let x = &gens.classes[1];
    let x_squared = expand_in_basis(&g, &multiply(&g, x, x)?, &gens)?
        .render(&g)
        .lines()
        .map(|l| {
            let (id, c) = l.split_once(" : ").unwrap_or((l, ""));
            let idx = g.vertex_index(id).and_then(|v| gens.vertices.iter().position(|&u| u == v));
            format!("{}: {}", idx.map_or(id, |i| G2_NAMES[i]), c)
        })
        .collect::<Vec<_>>()
        .join(", ");
    Ok(G2Report { cohomology, k_theory, h_bases, k_bases, chosen, chosen_works_in_k, x_squared, lifted_members })
}

#[derive(Clone, Debug, Serialize)]
pub struct DividedPower {
    pub n: u32,
    /// Specialized coefficient of `g_n` in `g_1^n`.
    pub coefficient: String,
    pub expected: String,
    /// All other specialized coefficients vanish.
    pub others_vanish: bool,
    pub stable: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct OmegaReport {
    pub max_length: usize,
    pub divided_powers: Vec<DividedPower>,
    /// `(i, member)` for the explicit K-theory generators.
    pub k_generators: Vec<(i64, bool)>,
    /// The lift of the cohomology generators to K-theory is rejected.
    pub h_lift_rejected: bool,
    /// Witness of the rejection.
    pub h_lift_witness: Option<String>,
}

impl OmegaReport {
    pub fn passed(&self) -> bool {
        self.divided_powers.iter().all(|d| d.coefficient == d.expected && d.others_vanish && d.stable)
            && self.k_generators.iter().all(|(_, m)| *m)
            && self.h_lift_rejected
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Specialized coefficients of `g_1^n` on the chain of generators `g_0, g_1, …`
/// (one generator per length).
pub fn chain_powers(
    g: &GkmGraph,
    gens: &GeneratorSet<Ordinary>,
    max_power: u32,
    expected: impl Fn(u32) -> BigInt,
) -> Result<Vec<DividedPower>, Error> {
    let x = &gens.classes[1];
    let mut power = x.clone();
    let mut out = Vec::new();
    for n in 2..=max_power {
        power = multiply(g, &power, x)?;
        let e = expand_in_basis(g, &power, gens)?;
        let spec = e.specialize()?;
        let target = gens.vertices[n as usize];
        let coefficient =
            spec.iter().find(|(v, _)| *v == target).map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero);
        let others_vanish = spec.iter().all(|(v, c)| *v == target || c.is_zero());
        let stable =
            e.terms.iter().filter(|t| g.length(t.generator) <= n as usize).all(|t| t.stability == Stability::Stable);
        out.push(DividedPower {
            n,
            coefficient: coefficient.to_string(),
            expected: expected(n).to_string(),
            others_vanish,
            stable,
        });
    }
    Ok(out)
}

/// The based loop group of SU(2) from the affine A1 graph at `max_length`.
pub fn run_omega_su2(max_length: usize) -> Result<OmegaReport, Error> {
    let g = omega_su2_graph(max_length)?;
    let gens = canonical_generators_h(&g, Some(6.min(max_length)))?;
    let divided_powers = chain_powers(&g, &gens, 5.min(max_length as u32), factorial)?;

    let big = omega_su2_graph(12)?;
    let mut k_generators = Vec::new();
    for i in -3..=3 {
        let x = omega_su2_k_generator(OmegaSu2Index::new(i), &big)?;
        k_generators.push((i, is_member(&big, &x)?.member));
    }

    // cohomology generators on the root-coordinate graph, lifted with
    // positive-root orientation
    let inverse: Vec<Vec<i64>> = vec![vec![0, 1], vec![-1, 1]];
    debug_assert_eq!(
        crate::coxeter::mat_mul(&inverse, OMEGA_BASIS.map(|r| r.to_vec()).as_ref()),
        crate::coxeter::identity(2)
    );
    let roots = g.change_basis(&inverse);
    let hgens = canonical_generators_h(&roots, None)?;
    let (h_lift_rejected, h_lift_witness) = match lift_generators_to_k(&roots, &hgens) {
        Err(e @ RingError::LiftFailsMembership { .. }) => (true, Some(e.to_string())),
        Err(e) => (false, Some(e.to_string())),
        Ok(_) => (false, None),
    };
    Ok(OmegaReport { max_length, divided_powers, k_generators, h_lift_rejected, h_lift_witness })
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedCandidate {
    /// 1-based parabolic node.
    pub parabolic: usize,
    pub is_chain: bool,
    pub powers: Vec<DividedPower>,
    pub matches: bool,
    pub members: bool,
    pub order_independent: bool,
    pub truncation_stable: bool,
    pub non_integral: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwistedReport {
    pub max_length: usize,
    pub candidates: Vec<TwistedCandidate>,
    /// 1-based node of the selected parabolic.
    pub selected: Option<usize>,
}

impl TwistedReport {
    pub fn passed(&self) -> bool {
        self.selected.is_some()
    }

    /// Invariant battery on every chain candidate, independent of the coefficient match.
    pub fn invariants_hold(&self) -> bool {
        self.candidates.iter().filter(|c| c.is_chain).all(|c| c.members && c.order_independent && c.truncation_stable)
    }
}

pub const TWISTED_CARTAN: &str = "2,-1;-4,2";

/// `n!·2^{⌊n/2⌋}`.
pub fn twisted_expected(n: u32) -> BigInt {
    factorial(n) * (BigInt::one() << (n / 2))
}

pub fn twisted_graph(parabolic: usize, max_length: usize) -> Result<GkmGraph, Error> {
    let cartan = CartanMatrix::parse(TWISTED_CARTAN)?;
    Ok(GkmGraph::from_cartan(&cartan, &Parabolic::new([parabolic]), Some(max_length))?)
}

/// Generators at the smaller truncation agree with those at the larger one
/// on every vertex of the smaller graph (vertices matched by id).
pub fn generators_agree(
    small: &GkmGraph,
    small_gens: &GeneratorSet<Ordinary>,
    big: &GkmGraph,
    big_gens: &GeneratorSet<Ordinary>,
) -> bool {
    small_gens.iter().all(|(v, x)| {
        let Some(bx) = big.vertex_index(&small.vertex(v).id).and_then(|bv| big_gens.for_vertex(bv)) else {
            return false;
        };
        (0..small.num_vertices())
            .all(|w| big.vertex_index(&small.vertex(w).id).is_some_and(|bw| bx.value(bw) == x.value(w)))
    })
}

pub fn run_twisted(max_length: usize) -> Result<TwistedReport, Error> {
    let mut candidates = Vec::new();
    for p in 0..2 {
        let g = twisted_graph(p, max_length)?;
        let is_chain = (0..g.num_vertices()).all(|v| g.length(v) == v);
        let depth = 4.min(max_length);
        let gens = canonical_generators_h(&g, Some(depth))?;
        let powers = if is_chain { chain_powers(&g, &gens, depth as u32, twisted_expected)? } else { Vec::new() };
        let matches = is_chain && powers.iter().all(|d| d.coefficient == d.expected && d.others_vanish);
        let members = gens.classes.iter().all(|c| is_member(&g, c).map(|r| r.member).unwrap_or(false));
        let mut order = g.by_length();
        order.reverse();
        order.sort_by_key(|&v| g.length(v));
        let order_independent = canonical_generators_h_ordered(&g, Some(depth), &order)? == gens;
        let big = twisted_graph(p, max_length + 2)?;
        let big_gens = canonical_generators_h(&big, Some(depth))?;
        let truncation_stable = generators_agree(&g, &gens, &big, &big_gens);
        candidates.push(TwistedCandidate {
            parabolic: p + 1,
            is_chain,
            powers,
            matches,
            members,
            order_independent,
            truncation_stable,
            non_integral: gens.non_integral.len(),
        });
    }
    let selected = candidates.iter().find(|c| c.matches).map(|c| c.parabolic);
    Ok(TwistedReport { max_length, candidates, selected })
}

/// Named suites for the command line; returns printable lines and the verdict.
pub fn run_suite(name: &str, theory: crate::graph::Theory) -> Result<(Vec<String>, bool), Error> {
    use crate::graph::Theory;
    match name {
        "g2" => {
            let r = run_g2()?;
            let mut lines = Vec::new();
            match theory {
                Theory::H => {
                    if let Some(c) = &r.chosen {
                        lines.push(format!("basis: a = {}, b = {} (root coordinates)", c.a, c.b));
                    }
                    lines.push(format!("x*x = {}", r.x_squared));
                    lines.push(render_relations(&r.cohomology));
                }
                Theory::K => {
                    lines.push(format!("lifted generators are members: {}", r.lifted_members));
                    lines.push(format!("equivariant relations hold in the chosen basis: {}", r.chosen_works_in_k));
                    lines.push(render_relations(&r.k_theory));
                }
            }
            Ok((lines, r.passed()))
        }
        "omega-su2" => {
            let r = run_omega_su2(8)?;
            let mut lines = Vec::new();
            match theory {
                Theory::H => {
                    for d in &r.divided_powers {
                        lines.push(format!("g1^{} = {}*g{}", d.n, d.coefficient, d.n));
                    }
                }
                Theory::K => {
                    for (i, m) in &r.k_generators {
                        lines.push(format!("x_{i}: member = {m}"));
                    }
                    lines.push(format!(
                        "lifted cohomology generators rejected: {}",
                        r.h_lift_witness.as_deref().unwrap_or("no")
                    ));
                }
            }
            Ok((lines, r.passed()))
        }
        "twisted-a1" => {
            let r = run_twisted(8)?;
            let mut lines = Vec::new();
            for c in &r.candidates {
                let coeffs: Vec<String> = c
                    .powers
                    .iter()
                    .map(|d| format!("n={}: {} (expected {})", d.n, d.coefficient, d.expected))
                    .collect();
                lines.push(format!(
                    "parabolic {{{}}}: chain={} members={} stable={} {}",
                    c.parabolic,
                    c.is_chain,
                    c.members,
                    c.truncation_stable,
                    coeffs.join(", ")
                ));
            }
            lines.push(match r.selected {
                Some(p) => format!("selected parabolic {{{p}}}"),
                None => "no parabolic reproduces n!*2^floor(n/2)".into(),
            });
            Ok((lines, r.passed() && r.invariants_hold()))
        }
        _ => Err(Error::Other(format!("unknown example suite {name:?}; expected g2, omega-su2 or twisted-a1"))),
    }
}
