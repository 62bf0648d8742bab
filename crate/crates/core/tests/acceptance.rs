//! Acceptance suite: ten end-to-end checks with exact arithmetic and a
//! wall-clock bound each. Prints one `criterion N: PASS|FAIL` line per check
//! and exits nonzero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use gkm_core::coxeter::{CartanMatrix, Parabolic};
use gkm_core::examples::{
    generators_agree, render_relations, run_g2, run_omega_su2, run_twisted, twisted_graph, G2Report,
};
use gkm_core::graph::GkmGraph;
use gkm_core::linalg::{nullspace, rank};
use gkm_core::poly::{rat, Kind, Monomial, Polynomial};
use gkm_core::qcomb::{
    check_coefficient_symmetry, check_omega_closed, omega_su2_graph, omega_su2_k_generator, OmegaSu2Index,
};
use gkm_core::ring::{
    canonical_generators_h, expand_in_basis, filtration_leading_check, is_member, lift_generators_to_k, GeneratorSet,
    GkmClass, PointRing,
};
use gkm_core::{ClassH, Error, Rational};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), Error>;

struct Criterion {
    number: u32,
    bound: Duration,
    run: fn() -> Outcome,
}

fn main() -> ExitCode {
    let criteria = [
        Criterion { number: 1, bound: Duration::from_secs(5), run: g2_cohomology },
        Criterion { number: 2, bound: Duration::from_secs(10), run: g2_equivariant_basis },
        Criterion { number: 3, bound: Duration::from_secs(30), run: g2_k_theory },
        Criterion { number: 4, bound: Duration::from_secs(30), run: omega_divided_powers },
        Criterion { number: 5, bound: Duration::from_secs(30), run: omega_k_generators },
        Criterion { number: 6, bound: Duration::from_secs(60), run: twisted_chain },
        Criterion { number: 7, bound: Duration::from_secs(10), run: coefficient_symmetry_sweep },
        Criterion { number: 8, bound: Duration::from_secs(60), run: oracle_equivalence },
        Criterion { number: 9, bound: Duration::from_secs(60), run: truncation_stability },
        Criterion { number: 10, bound: Duration::from_secs(30), run: filtration_property },
    ];
    let mut all = true;
    for c in &criteria {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (ok, detail) = match outcome {
            Ok((ok, detail)) => (ok && elapsed < c.bound, detail),
            Err(e) => (false, format!("error: {e}")),
        };
        all &= ok;
        println!(
            "criterion {}: {} ({} ms, bound {} s) {}",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            elapsed.as_millis(),
            c.bound.as_secs(),
            detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn g2() -> Result<G2Report, Error> {
    run_g2()
}

fn g2_cohomology() -> Outcome {
    let r = g2()?;
    let got = render_relations(&r.cohomology);
    Ok((got == "x^2=y, x^3=2z, x^4=2s, x^5=2t, x^6=0", got))
}

fn g2_equivariant_basis() -> Outcome {
    let r = g2()?;
    Ok(match &r.chosen {
        Some(c) => (true, format!("a = {}, b = {} ({} matching bases)", c.a, c.b, r.h_bases.len())),
        None => (false, "no edge-direction basis satisfies the relations".into()),
    })
}

fn g2_k_theory() -> Outcome {
    let r = g2()?;
    let got = render_relations(&r.k_theory);
    let ok = r.lifted_members && got == "x^2=y, x^3=2z-s, x^4=2s-t, x^5=2t, x^6=0" && r.chosen_works_in_k;
    Ok((ok, format!("{got}; lifted members {}, equivariant relations {}", r.lifted_members, r.chosen_works_in_k)))
}

fn omega_divided_powers() -> Outcome {
    let r = run_omega_su2(8)?;
    let ok = r.divided_powers.len() == 4
        && r.divided_powers.iter().all(|d| d.coefficient == d.expected && d.others_vanish && d.stable);
    let coeffs: Vec<String> = r.divided_powers.iter().map(|d| format!("n={}: {}", d.n, d.coefficient)).collect();
    Ok((ok, coeffs.join(", ")))
}

fn omega_k_generators() -> Outcome {
    let r = run_omega_su2(8)?;
    let members = r.k_generators.len() == 7 && r.k_generators.iter().all(|(_, m)| *m);
    let ok = members && r.h_lift_rejected && r.h_lift_witness.is_some();
    Ok((ok, format!("x_i members for |i| <= 3: {members}; lifted H generators rejected: {:?}", r.h_lift_witness)))
}

fn twisted_chain() -> Outcome {
    let r = run_twisted(8)?;
    let coeffs: Vec<String> = r
        .candidates
        .iter()
        .filter(|c| c.is_chain)
        .map(|c| {
            let cs: Vec<&str> = c.powers.iter().map(|d| d.coefficient.as_str()).collect();
            format!("parabolic {}: [{}]", c.parabolic, cs.join(", "))
        })
        .collect();
    let ok = r.passed() && r.invariants_hold();
    Ok((ok, format!("selected {:?}; {}", r.selected, coeffs.join("; "))))
}

fn coefficient_symmetry_sweep() -> Outcome {
    let sym = check_coefficient_symmetry(6, 4)?;
    let mut squares = 0;
    let mut closed = true;
    for l in 0..=3 {
        let c = check_omega_closed(6, 6, l)?;
        squares += c.squares_checked;
        closed &= c.passed();
    }
    Ok((sym.passed() && closed, format!("{} symmetric pairs, {} unit squares", sym.pairs_checked, squares)))
}

fn truncation_stability() -> Outcome {
    let affine = CartanMatrix::parse("2,-2;-2,2")?;
    let mut checked = Vec::new();
    for l in [4usize, 6] {
        let pairs: Vec<(String, GkmGraph, GkmGraph)> = vec![
            (
                "affine Borel".into(),
                GkmGraph::from_cartan(&affine, &Parabolic::default(), Some(l))?,
                GkmGraph::from_cartan(&affine, &Parabolic::default(), Some(l + 2))?,
            ),
            ("affine Grassmannian".into(), omega_su2_graph(l)?, omega_su2_graph(l + 2)?),
            ("twisted".into(), twisted_graph(1, l)?, twisted_graph(1, l + 2)?),
        ];
        for (name, small, big) in pairs {
            let sg = canonical_generators_h(&small, None)?;
            let bg = canonical_generators_h(&big, Some(l))?;
            if !generators_agree(&small, &sg, &big, &bg) {
                return Ok((false, format!("{name} disagrees between L={l} and L={}", l + 2)));
            }
            checked.push(format!("{name} L={l}"));
        }
    }
    Ok((true, checked.join(", ")))
}

// Brute-force oracle: member tuples of homogeneous degree-d polynomials are
// the kernel of one evaluation per edge at a point spanning the hyperplane
// `α = 0` (rank 2), or at the origin (rank 1).

fn hyperplane_point(g: &GkmGraph, weight: &gkm_core::Weight) -> Vec<Rational> {
    let c: Vec<Rational> = weight.coords().iter().map(|x| Rational::from_integer(x.clone())).collect();
    match g.rank() {
        1 => vec![rat(0)],
        2 => vec![-c[1].clone(), c[0].clone()],
        r => panic!("oracle supports rank <= 2, got {r}"),
    }
}

fn monomial_value(m: &Monomial, p: &[Rational]) -> Rational {
    m.0.iter().zip(p).fold(rat(1), |acc, (&e, x)| acc * num_pow(x, e as u32))
}

fn num_pow(x: &Rational, e: u32) -> Rational {
    (0..e).fold(rat(1), |acc, _| acc * x)
}

fn flatten(values: &[gkm_core::PolyElt], monos: &[Monomial]) -> Vec<Rational> {
    values.iter().flat_map(|f| monos.iter().map(|m| f.coeff(m))).collect()
}

fn oracle_check(g: &GkmGraph, gens: &GeneratorSet<gkm_core::poly::Ordinary>, d: u32) -> Result<bool, String> {
    let n = g.num_vertices();
    let monos = Monomial::all_of_degree(g.rank(), d);
    let columns = n * monos.len();
    let constraints: Vec<Vec<Rational>> = g
        .edges()
        .iter()
        .map(|e| {
            let p = hyperplane_point(g, &e.weight);
            let mut row = vec![rat(0); columns];
            for (k, m) in monos.iter().enumerate() {
                let val = monomial_value(m, &p);
                row[e.source * monos.len() + k] += val.clone();
                row[e.target * monos.len() + k] -= val;
            }
            row
        })
        .collect();
    let member_dim = columns - rank(&constraints);

    let mut span = Vec::new();
    for (v, x) in gens.iter() {
        let len = g.length(v) as u32;
        if len > d {
            continue;
        }
        for m in Monomial::all_of_degree(g.rank(), d - len) {
            let vals: Vec<_> = x.values().iter().map(|f| f.mul_monomial(&m)).collect();
            span.push(flatten(&vals, &monos));
        }
    }
    let span_dim = rank(&span);
    let mut joint = span.clone();
    let kernel = if constraints.is_empty() {
        (0..columns).map(|i| (0..columns).map(|j| rat((i == j) as i64)).collect()).collect()
    } else {
        nullspace(&constraints, columns)
    };
    if kernel.len() != member_dim {
        return Err(format!("kernel basis of size {} for dimension {member_dim}", kernel.len()));
    }
    joint.extend(kernel.iter().cloned());
    if span_dim != member_dim || rank(&joint) != member_dim {
        return Err(format!("degree {d}: generator span {span_dim}, member space {member_dim}"));
    }

    // every kernel vector expands exactly
    for vec in &kernel {
        let values = (0..n)
            .map(|v| {
                Polynomial::from_terms(
                    g.rank(),
                    monos.iter().enumerate().map(|(k, m)| (m.clone(), vec[v * monos.len() + k].clone())),
                )
            })
            .collect();
        let class: ClassH = GkmClass::new(values);
        let e = expand_in_basis(g, &class, gens).map_err(|e| e.to_string())?;
        if e.remainder || e.resum(g, gens).map_err(|e| e.to_string())? != class {
            return Err(format!("degree {d}: expansion does not round-trip"));
        }
    }
    Ok(true)
}

fn random_unimodular(rng: &mut ChaCha8Rng, rank: usize) -> Vec<Vec<i64>> {
    if rank == 1 {
        return vec![vec![if rng.gen_bool(0.5) { 1 } else { -1 }]];
    }
    let mut m = gkm_core::coxeter::identity(2);
    for _ in 0..3 {
        let k = rng.gen_range(-2..=2);
        let step = match rng.gen_range(0..4) {
            0 => vec![vec![1, k], vec![0, 1]],
            1 => vec![vec![1, 0], vec![k, 1]],
            2 => vec![vec![0, 1], vec![1, 0]],
            _ => vec![vec![-1, 0], vec![0, 1]],
        };
        m = gkm_core::coxeter::mat_mul(&step, &m);
    }
    m
}

fn base_graph(rng: &mut ChaCha8Rng, which: usize) -> Result<GkmGraph, Error> {
    let finite = |cartan: &str, p: &[usize]| -> Result<GkmGraph, Error> {
        Ok(GkmGraph::from_cartan(&CartanMatrix::parse(cartan)?, &Parabolic::new(p.iter().copied()), None)?)
    };
    Ok(match which {
        0 => finite("2", &[])?,
        1 => finite("2,-1;-1,2", &[])?,
        2 => finite("2,-1;-1,2", &[rng.gen_range(0..2)])?,
        3 => finite("2,-1;-2,2", &[])?,
        4 => finite("2,-1;-3,2", &[rng.gen_range(0..2)])?,
        5 => finite("2,-1;-3,2", &[])?.restrict_to_length(3),
        6 => finite("2,0;0,2", &[])?,
        7 => GkmGraph::from_cartan(
            &CartanMatrix::parse("2,-2;-2,2")?,
            &Parabolic::default(),
            Some(rng.gen_range(1..=3)),
        )?,
        8 => omega_su2_graph(rng.gen_range(2..=7))?,
        _ => twisted_graph(rng.gen_range(0..2), rng.gen_range(2..=7))?,
    })
}

fn random_graph(rng: &mut ChaCha8Rng) -> Result<(String, GkmGraph), Error> {
    let which = rng.gen_range(0..10);
    let mut g = base_graph(rng, which)?;
    g = g.change_basis(&random_unimodular(rng, g.rank()));
    if g.max_length() > 1 && rng.gen_bool(0.3) {
        g = g.restrict_to_length(rng.gen_range(1..g.max_length()));
    }
    let mut ids: Vec<String> = (0..g.num_vertices()).map(|v| format!("v{v}")).collect();
    ids.shuffle(rng);
    g = g.with_ids(ids)?;
    g = GkmGraph::from_json(&g.to_json())?;
    Ok((format!("base {which} with {} vertices", g.num_vertices()), g))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6d_0008);
    for trial in 0..20 {
        let (name, g) = random_graph(&mut rng)?;
        assert!(g.num_vertices() <= 8 && g.rank() <= 2, "{name}");
        let gens = canonical_generators_h(&g, None)?;
        for d in 0..=3 {
            if let Err(why) = oracle_check(&g, &gens, d) {
                return Ok((false, format!("trial {trial} ({name}): {why}")));
            }
        }
    }
    Ok((true, "20 graphs, degrees 0..=3".into()))
}

fn random_coefficient<K: Kind>(rng: &mut ChaCha8Rng, rank: usize) -> Polynomial<K> {
    let lo = if K::LAURENT { -1 } else { 0 };
    let terms = (0..rng.gen_range(1..=3)).map(|_| {
        let mut e: Vec<i32> = (0..rank).map(|_| rng.gen_range(lo..=1)).collect();
        if !K::LAURENT && e.iter().sum::<i32>() > 1 {
            e.iter_mut().for_each(|x| *x = 0);
        }
        (Monomial(e), rat(rng.gen_range(-3..=3)))
    });
    Polynomial::from_terms(rank, terms.collect::<Vec<_>>())
}

fn random_members<K: PointRing>(
    rng: &mut ChaCha8Rng,
    name: &str,
    g: &GkmGraph,
    gens: &[GkmClass<K>],
) -> Result<Option<String>, Error> {
    for k in 0..50 {
        let mut c = GkmClass::zero(g);
        while c.is_zero() {
            for x in gens {
                if rng.gen_bool(0.4) {
                    c = c.checked_add(&x.scale(&random_coefficient(rng, g.rank())))?;
                }
            }
        }
        if !is_member(g, &c)?.member {
            return Ok(Some(format!("{name}: sample {k} is not a member")));
        }
        let r = filtration_leading_check(g, &c)?;
        if !r.passed {
            return Ok(Some(format!("{name}: sample {k} fails at {:?}", r.checked)));
        }
    }
    Ok(None)
}

fn filtration_property() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x6b6d_0010);
    let g2 = gkm_core::examples::g2_graph();
    let g2_gens = canonical_generators_h(&g2, None)?;
    let g2_k = lift_generators_to_k(&g2, &g2_gens)?;
    let omega = omega_su2_graph(8)?;
    let omega_gens = canonical_generators_h(&omega, None)?;
    let omega_k_graph = omega_su2_graph(12)?;
    let omega_k: Vec<_> =
        (-3..=3).map(|i| omega_su2_k_generator(OmegaSu2Index::new(i), &omega_k_graph)).collect::<Result<_, _>>()?;
    let twisted = twisted_graph(1, 8)?;
    let twisted_gens = canonical_generators_h(&twisted, None)?;

    let failures = [
        random_members(&mut rng, "G2 H", &g2, &g2_gens.classes)?,
        random_members(&mut rng, "G2 K", &g2, &g2_k.classes)?,
        random_members(&mut rng, "affine Grassmannian H", &omega, &omega_gens.classes)?,
        random_members(&mut rng, "affine Grassmannian K", &omega_k_graph, &omega_k)?,
        random_members(&mut rng, "twisted H", &twisted, &twisted_gens.classes)?,
    ];
    match failures.into_iter().flatten().next() {
        Some(why) => Ok((false, why)),
        None => Ok((true, "5 graph/theory pairs x 50 classes".into())),
    }
}
